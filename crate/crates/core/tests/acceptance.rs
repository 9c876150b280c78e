//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use edwards_legendre::census::*;
use edwards_legendre::curves::{CountMethod, Curve, Point};
use edwards_legendre::ff::*;
use edwards_legendre::maps::{self, verify_isogeny, DefinedOver, RationalMap, Sign, MAP_NAMES};
use edwards_legendre::nt;
use edwards_legendre::torsion::{four_torsion_profile, two_descent};

type Outcome = Result<String, String>;

fn primes(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|&p| nt::is_prime(p))
}

fn odd_prime_powers(limit: u64) -> Vec<&'static FieldCtx> {
    (3..=limit)
        .filter_map(nt::prime_power)
        .filter(|&(p, _)| p > 2)
        .map(|(p, m)| field_ctx(p, m, None).unwrap())
        .collect()
}

fn params(f: &'static FieldCtx) -> impl Iterator<Item = FieldElement> {
    f.elements().filter(|d| !d.is_zero() && !d.is_one())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn tate_consistency() -> Outcome {
    let mut n = 0;
    for p in primes(3, 199) {
        let f = prime_field(p).map_err(err)?;
        for d in params(f) {
            let e = Curve::edwards(d).map_err(err)?;
            let l = Curve::legendre(d).map_err(err)?;
            let counts = [
                e.count_points(CountMethod::Exhaustive).map_err(err)?,
                e.count_points(CountMethod::CharSum).map_err(err)?,
                l.count_points(CountMethod::Exhaustive).map_err(err)?,
                l.count_points(CountMethod::CharSum).map_err(err)?,
            ];
            ensure(counts.iter().all(|&c| c == counts[0]), || format!("p = {p}, d = {d}: {counts:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} parameters, #E_d = #L_d by enumeration and character sums"))
}

fn isogeny_class_counts() -> Outcome {
    let mut fields: Vec<(u64, u32)> = primes(3, 199).map(|p| (p, 1)).collect();
    fields.extend(primes(3, 31).map(|p| (p, 2)));
    fields.extend([(3, 3), (5, 3), (7, 3)]);
    for &(p, m) in &fields {
        let t = trace_spectrum(field_ctx(p, m, None).map_err(err)?).map_err(err)?;
        let (formula, observed) = isogeny_class_count(&t);
        ensure(formula == observed, || format!("{p}^{m}: formula {formula}, spectrum {observed}"))?;
    }
    Ok(format!("{} fields, formula = number of distinct traces", fields.len()))
}

fn supersingular() -> Outcome {
    let mut checked = 0;
    for p in primes(3, 499) {
        let s_p = supersingular_params(prime_field(p).map_err(err)?).map_err(err)?.len() as u64;
        let want = match p % 4 {
            1 => 0,
            _ if p == 3 => 1,
            _ => 3 * class_number_oracle(p).map_err(err)?,
        };
        ensure(s_p == want, || format!("S_{p} = {s_p}, expected {want}"))?;
        checked += 1;
    }
    let mut roots = 0;
    for p in primes(3, 31) {
        for m in [1u32, 2] {
            let f = field_ctx(p, m, None).map_err(err)?;
            let mandated = if m == 1 {
                0
            } else {
                let eps = if p % 4 == 1 { 1 } else { -1 };
                eps * 2 * p as i64
            };
            for d in supersingular_params(f).map_err(err)? {
                let a = Curve::legendre(d).and_then(|c| c.trace()).map_err(err)?;
                ensure(a == mandated, || format!("root {d} over {p}^{m}: A = {a}, expected {mandated}"))?;
                roots += 1;
            }
        }
    }
    Ok(format!("S_p for {checked} primes; {roots} Deuring roots carry the mandated trace"))
}

fn torsion_tables() -> Outcome {
    let mut fields: Vec<&'static FieldCtx> = primes(3, 113).map(|p| prime_field(p).unwrap()).collect();
    fields.extend([(3, 2), (5, 2), (3, 3), (7, 2)].map(|(p, m)| field_ctx(p, m, None).unwrap()));
    let mut n = 0;
    for f in &fields {
        for d in params(f) {
            let predicted = four_torsion_profile(d).map_err(err)?.four_torsion;
            let g = Curve::legendre(d).and_then(|c| c.group_structure()).map_err(err)?;
            let brute = (nt::gcd(4, g.n1), nt::gcd(4, g.n2));
            ensure((predicted.n1, predicted.n2) == brute, || {
                format!("d = {d} over {f}: table {predicted:?}, group Z{}xZ{}", g.n2, g.n1)
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} parameters over {} fields", fields.len()))
}

fn two_descent_kernel() -> Outcome {
    let mut n = 0;
    for p in primes(3, 61) {
        for d in params(prime_field(p).map_err(err)?) {
            let c = Curve::legendre(d).map_err(err)?;
            let pts = c.points().map_err(err)?;
            let doubles: HashSet<Point> = pts.iter().map(|x| c.double(x)).collect::<Result<_, _>>().map_err(err)?;
            let img: Vec<_> = pts.iter().map(|x| two_descent(&c, x)).collect::<Result<_, _>>().map_err(err)?;
            for (x, i) in pts.iter().zip(&img) {
                ensure(i.is_trivial() == doubles.contains(x), || format!("{x} on {c}: image {i}"))?;
            }
            for (a, ia) in pts.iter().zip(&img) {
                for (b, ib) in pts.iter().zip(&img) {
                    let s = c.add(a, b).map_err(err)?;
                    let is = two_descent(&c, &s).map_err(err)?;
                    ensure(is == ia.mul(*ib), || format!("{a} + {b} on {c}"))?;
                }
            }
            n += 1;
        }
    }
    Ok(format!("{n} curves: homomorphism on all pairs, kernel = 2L_d(F_p)"))
}

fn katz_ratios() -> Outcome {
    let (mut checks, mut fractional, mut fields) = (0, 0, 0);
    for f in odd_prime_powers(500).into_iter().filter(|f| f.q() % 4 == 1 && f.m() <= 2) {
        let r = katz_ratio_report(&trace_spectrum(f).map_err(err)?).map_err(err)?;
        ensure(r.passed(), || format!("q = {}: {}", f.q(), r.counterexamples.join("; ")))?;
        checks += r.checks.len();
        fractional += r.checks.iter().filter(|c| c.expected.contains('/')).count();
        fields += 1;
    }
    ensure(fractional > 0, || "no fractional ratio was exercised".into())?;
    Ok(format!("{fields} fields, {checks} ratios ({fractional} fractional)"))
}

fn census_identities() -> Outcome {
    let claims = [
        Claim::NonsquaresOneMod4,
        Claim::NonsquaresThreeMod4,
        Claim::CompleteInEveryClass,
        Claim::FourthPowersThreeMod4,
        Claim::FourthPowersOneMod4,
        Claim::SquareNonsquareBalance,
    ];
    let (mut fields, mut checks) = (0, 0);
    for f in odd_prime_powers(500) {
        let t = trace_spectrum(f).map_err(err)?;
        for c in claims.iter().filter(|c| c.applies_to(f)) {
            let r = theorem_report(&t, *c).map_err(err)?;
            ensure(r.passed(), || format!("{c} over q = {}: {}", f.q(), r.counterexamples.join("; ")))?;
            checks += r.checks.len();
        }
        fields += 1;
    }
    Ok(format!("{fields} fields, {checks} identity checks"))
}

/// Verify over the map's own field; when that field is too small to supply
/// `samples` distinct pairs, verify the lift to F_{q²} as well.
fn verify_map(m: &RationalMap, samples: usize) -> Result<usize, String> {
    let r = verify_isogeny(m, samples).map_err(err)?;
    ensure(r.passed(), || format!("{} on {}: {}", r.map, r.domain, r.counterexamples.join("; ")))?;
    if r.pairs_checked >= samples || m.defined_over() != DefinedOver::BaseField {
        return Ok(r.pairs_checked);
    }
    let k = lift_to_extension(m.field(), 2).map_err(err)?.target();
    let lifted = verify_isogeny(&m.rebuild(k).map_err(err)?, samples).map_err(err)?;
    ensure(lifted.passed(), || format!("{} lifted to {k}: {}", lifted.map, lifted.counterexamples.join("; ")))?;
    ensure(lifted.pairs_checked >= samples, || {
        format!("{} over {k}: only {} pairs", lifted.map, lifted.pairs_checked)
    })?;
    Ok(lifted.pairs_checked)
}

fn map_catalog() -> Outcome {
    const SAMPLES: usize = 1000;
    let (mut maps_checked, mut min_pairs) = (0, usize::MAX);
    for p in [13u64, 17, 29, 37] {
        let f = prime_field(p).map_err(err)?;
        for d in params(f) {
            let mut family: Vec<RationalMap> = Vec::new();
            for name in MAP_NAMES.iter().filter(|n| !n.starts_with("psi-twisted") && !n.starts_with("rho-dual")) {
                family.push(maps::by_name(name, &[d]).map_err(err)?);
            }
            for a in params(f).filter(|&a| a != d).chain([f.one()]) {
                family.push(maps::psi_twisted(a, d).map_err(err)?);
                family.push(maps::psi_twisted_dual(a, d).map_err(err)?);
            }
            for m in &family {
                min_pairs = min_pairs.min(verify_map(m, SAMPLES)?);
                maps_checked += 1;
            }
            // ψ̂ ∘ ψ = [2] on E_d
            let (psi, dual) = (maps::psi(d).map_err(err)?, maps::psi_dual(d).map_err(err)?);
            let e = Curve::edwards(d).map_err(err)?;
            for x in e.points().map_err(err)? {
                let twice = dual.eval(&psi.eval(&x).map_err(err)?).map_err(err)?;
                ensure(twice == e.double(&x).map_err(err)?, || format!("ψ̂∘ψ at {x} on {e}"))?;
            }
            for s in Sign::BOTH {
                ensure(maps::rho(d, s).is_ok(), || format!("rho{} missing for d = {d}", s.symbol()))?;
            }
        }
    }
    Ok(format!("{maps_checked} maps verified (≥ {min_pairs} homomorphism pairs each); ψ̂∘ψ = [2]"))
}

fn bijection() -> Outcome {
    let (mut n, mut fields) = (0, 0);
    for f in odd_prime_powers(200).into_iter().filter(|f| f.q() % 4 == 1) {
        let t = trace_spectrum(f).map_err(err)?;
        for d in params(f).filter(|d| d.fourth_power_class() == PowerClass::SquareNotFourth) {
            let r = bijection_trace(d, &t).map_err(err)?;
            ensure(r.passed(), || format!("d = {d}: {r:?}"))?;
            n += 1;
        }
        fields += 1;
    }
    Ok(format!("{n} parameters over {fields} fields, four compositions each = [2]"))
}

fn micro_census() -> Outcome {
    let f = prime_field(13).map_err(err)?;
    let t = trace_spectrum(f).map_err(err)?;
    // enumeration oracle: #{y² = x(x−1)(x−d)} + 1 = q + 1 − A
    let mut oracle: BTreeMap<i64, usize> = BTreeMap::new();
    let mut trace = BTreeMap::new();
    for d in params(f) {
        let affine = f
            .elements()
            .flat_map(|x| f.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| y * y == x * (x - 1) * (x - d))
            .count() as i64;
        let a = 13 - affine;
        *oracle.entry(a).or_default() += 1;
        trace.insert(d.as_prime_int().unwrap(), a);
    }
    let pinned = BTreeMap::from([(-6, 1), (-2, 6), (2, 2), (6, 2)]);
    let got: BTreeMap<i64, usize> = t.classes.values().map(|c| (c.a, c.n())).collect();
    ensure(oracle == pinned, || format!("oracle spectrum {oracle:?}"))?;
    ensure(got == pinned, || format!("census spectrum {got:?}"))?;
    ensure(trace[&2] == 6 && trace[&3] == -2, || "A(2), A(3)".into())?;
    ensure(t.trace_of(f.elem(2)) == Some(6) && t.trace_of(f.elem(3)) == Some(-2), || "census A(2), A(3)".into())?;
    ensure(t.n_4(-2) == 2, || format!("N_4(-2) = {}", t.n_4(-2)))?;
    let fourth: Vec<u64> = params(f)
        .filter(|d| d.fourth_power_class() == PowerClass::FourthPower)
        .map(|d| d.as_prime_int().unwrap())
        .collect();
    ensure(fourth == [3, 9], || format!("fourth powers {fourth:?}"))?;
    ensure(fourth.iter().all(|d| trace[d] == -2), || "fourth powers outside class -2".into())?;
    Ok("spectrum {-6: 1, -2: 6, 2: 2, 6: 2}, A(2) = 6, A(3) = -2, N_4(-2) = 2, fourth powers {3, 9}".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("Tate consistency", tate_consistency, 30),
        ("isogeny-class counts", isogeny_class_counts, 120),
        ("Deuring / supersingular", supersingular, 60),
        ("4-torsion tables", torsion_tables, 120),
        ("2-descent", two_descent_kernel, 60),
        ("Katz ratios", katz_ratios, 60),
        ("census identities", census_identities, 60),
        ("map catalog soundness", map_catalog, 180),
        ("bijection mechanics", bijection, 60),
        ("micro-census over F_13", micro_census, 5),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let el = t.elapsed();
        let over =
            if el > Duration::from_secs(*budget) { format!(", over the {budget} s budget") } else { String::new() };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.1} s{over}]", i + 1, el.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e} [{:.1} s{over}]", i + 1, el.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
