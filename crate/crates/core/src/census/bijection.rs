//! The degree-2 correspondence between square-not-fourth-power and
//! nonsquare parameters in one trace class: ξ_d = L_d → L_d/⟨(0,0)⟩ and
//! γ_e = L_e → L_e/⟨(1,0)⟩, each followed by the isomorphism to a Legendre
//! curve that sends the dual kernel generator to (1,0) resp. (0,0).
//!
//! Branch pairing: on the forward side √(1−λ₁) = (1+√d)/(1−√d) and
//! √(1−λ₂) = (1−√d)/(1+√d); on the reverse side √μ = −(1∓t)/(1±t) for
//! t = √(1−e). With these every composition is exactly [2].

use serde::{Deserialize, Serialize};

use super::{CensusError, CensusTable};
use crate::curves::{Curve, Point};
use crate::ff::{FieldElement, PowerClass};
use crate::maps::RationalMap;

/// ξ_d: L_d → E^d: y² = x³ − (d+1)x² − 4dx + 4d(d+1), (x, y) ↦ (x + d/x, y(1 − d/x²)).
pub fn xi_map(d: FieldElement) -> Result<RationalMap, CensusError> {
    let dom = Curve::legendre(d)?;
    let cod = Curve::weierstrass(-(d + 1), -4 * d, 4 * d * (d + 1))?;
    let zero = d.field().zero();
    let kernel = vec![Point::Infinity, Point::Affine(zero, zero)];
    Ok(RationalMap::custom("xi", 2, dom, cod, kernel, move |p| {
        Ok(match p.xy() {
            Some((x, y)) if !x.is_zero() => {
                let u = d / x;
                Point::Affine(x + u, y * (1 - u / x))
            }
            _ => Point::Infinity,
        })
    }))
}

/// γ_e: L_e → F^e: y² = x³ − (e+1)x² + (6e−5)x − 4e² + 7e − 3
/// = (x − (e−1))(x − 1 − 2√(1−e))(x − 1 + 2√(1−e)),
/// (x, y) ↦ (x + (1−e)/(x−1), y(1 − (1−e)/(x−1)²)).
pub fn gamma_map(e: FieldElement) -> Result<RationalMap, CensusError> {
    let dom = Curve::legendre(e)?;
    let cod = Curve::weierstrass(-(e + 1), 6 * e - 5, -4 * e * e + 7 * e - 3)?;
    let f = e.field();
    let kernel = vec![Point::Infinity, Point::Affine(f.one(), f.zero())];
    Ok(RationalMap::custom("gamma", 2, dom, cod, kernel, move |p| {
        Ok(match p.xy() {
            Some((x, y)) if !x.is_one() => {
                let u = (1 - e) / (x - 1);
                Point::Affine(x + u, y * (1 - u / (x - 1)))
            }
            _ => Point::Infinity,
        })
    }))
}

/// y² = (x−e1)(x−e2)(x−e3) → L_λ with e2 = e1 + r², λ = (e3−e1)/r²:
/// (x, y) ↦ ((x − e1)/r², y/r³).
fn to_legendre(src: &Curve, e1: FieldElement, r: FieldElement) -> Result<RationalMap, CensusError> {
    let (a2, ..) = src.weierstrass_form().expect("a cubic model");
    let r2 = r * r;
    let e2 = e1 + r2;
    let e3 = -a2 - e1 - e2;
    let cod = Curve::legendre((e3 - e1) / r2)?;
    let r3 = r2 * r;
    Ok(RationalMap::custom("to-legendre", 1, *src, cod, vec![Point::Infinity], move |p| {
        Ok(match p.xy() {
            Some((x, y)) => Point::Affine((x - e1) / r2, y / r3),
            None => Point::Infinity,
        })
    }))
}

fn legendre_param(c: &Curve) -> FieldElement {
    match *c {
        Curve::Legendre { d } => d,
        _ => unreachable!("to_legendre lands on a Legendre curve"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionCheck {
    pub name: String,
    pub domain: String,
    pub codomain: String,
    pub points_checked: usize,
    /// The composition lands on the domain and agrees with [2] everywhere.
    pub ok: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionReport {
    pub field: String,
    pub d: String,
    pub sqrt_d: String,
    pub lambda: [String; 2],
    pub lambda_nonsquare: bool,
    /// A(d), A(λ₁), A(λ₂).
    pub traces: [i64; 3],
    pub traces_equal: bool,
    /// λ₂ = λ₁/(λ₁ − 1).
    pub lambda_relation: bool,
    pub e: String,
    pub mu: [String; 2],
    /// {μ₁(e), μ₂(e)} = {d, 1/d} for e = λ₁(d).
    pub mu_pair: bool,
    /// ξ_d(1,0) = ξ_d(d,0) = (d+1, 0) and γ_e(0,0) = γ_e(e,0) = (e−1, 0).
    pub two_torsion_images: bool,
    pub compositions: Vec<CompositionCheck>,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.lambda_nonsquare
            && self.traces_equal
            && self.lambda_relation
            && self.mu_pair
            && self.two_torsion_images
            && self.compositions.iter().all(|c| c.ok)
    }
}

fn compose_check(name: &str, maps: &[RationalMap]) -> Result<CompositionCheck, CensusError> {
    let dom = *maps[0].domain();
    let cod = *maps.last().unwrap().codomain();
    let mut out = CompositionCheck {
        name: name.to_string(),
        domain: dom.to_string(),
        codomain: cod.to_string(),
        points_checked: 0,
        ok: cod == dom,
        counterexample: None,
    };
    if !out.ok {
        out.counterexample = Some(format!("lands on {cod}, not {dom}"));
        return Ok(out);
    }
    for p in dom.points()? {
        let mut v = p;
        for m in maps {
            v = m.eval_direct(&v)?;
        }
        out.points_checked += 1;
        let twice = dom.double(&p)?;
        if v != twice {
            out.ok = false;
            out.counterexample = Some(format!("P = {p}: composition gives {v}, [2]P = {twice}"));
            break;
        }
    }
    Ok(out)
}

/// Walk both directions of the correspondence for one d in the
/// square-not-fourth class (q ≡ 1 mod 4); traces come from `table` when it
/// covers d's field.
pub fn bijection_trace(d: FieldElement, table: &CensusTable) -> Result<BijectionReport, CensusError> {
    let f = d.field();
    if f.q() % 4 != 1 {
        return Err(CensusError::WrongResidueClass {
            what: "the square/nonsquare correspondence".into(),
            needs: "q ≡ 1 (mod 4)".into(),
            field: format!("q = {}", f.q()),
        });
    }
    if d.is_one() || d.fourth_power_class() != PowerClass::SquareNotFourth {
        return Err(CensusError::NotInClass { d: d.to_string(), class: "square-not-fourth-power".into() });
    }
    let trace = |x: FieldElement| -> Result<i64, CensusError> {
        match table.ctx.same(f).then(|| table.trace_of(x)).flatten() {
            Some(a) => Ok(a),
            None => Ok(Curve::legendre(x)?.trace()?),
        }
    };
    let s = d.sqrt().expect("d is a square");
    let lambda = [-4 * s / (1 - s).square(), 4 * s / (1 + s).square()];
    let traces = [trace(d)?, trace(lambda[0])?, trace(lambda[1])?];

    let xi = xi_map(d)?;
    let ed = *xi.codomain();
    let p10 = xi.eval_direct(&Point::Affine(f.one(), f.zero()))?;
    let pd0 = xi.eval_direct(&Point::Affine(d, f.zero()))?;
    let mut two_torsion_images = p10 == Point::Affine(d + 1, f.zero()) && pd0 == p10;

    let mut compositions = Vec::new();
    // forward: L_d → E^d → L_λ → F^λ → L_d
    for (i, (e1, r, t)) in
        [(2 * s, 1 - s, (1 + s) / (1 - s)), (-2 * s, 1 + s, (1 - s) / (1 + s))].into_iter().enumerate()
    {
        let iso = to_legendre(&ed, e1, r)?;
        let lam = legendre_param(iso.codomain());
        let g = gamma_map(lam)?;
        let back = to_legendre(g.codomain(), lam - 1, 1 + t)?;
        let mut c = compose_check(&format!("lambda{}", i + 1), &[xi.clone(), iso, g, back])?;
        if lam != lambda[i] || t * t != 1 - lam {
            c.ok = false;
            c.counterexample = Some(format!("λ{} = {lam}, expected {}", i + 1, lambda[i]));
        }
        compositions.push(c);
    }

    // reverse, from e = λ₁: L_e → F^e → L_μ → E^μ → L_e
    let e = lambda[0];
    let t = (1 - e).sqrt().expect("1 − λ₁ is a square");
    let mu = [((1 - t) / (1 + t)).square(), ((1 + t) / (1 - t)).square()];
    let g = gamma_map(e)?;
    two_torsion_images &= [Point::Affine(f.zero(), f.zero()), Point::Affine(e, f.zero())]
        .iter()
        .all(|p| g.eval_direct(p).ok() == Some(Point::Affine(e - 1, f.zero())));
    for (j, (rr, s2)) in [(1 + t, -(1 - t) / (1 + t)), (1 - t, -(1 + t) / (1 - t))].into_iter().enumerate() {
        let iso = to_legendre(g.codomain(), e - 1, rr)?;
        let m = legendre_param(iso.codomain());
        let x = xi_map(m)?;
        let back = to_legendre(x.codomain(), 2 * s2, 1 - s2)?;
        let mut c = compose_check(&format!("mu{}", j + 1), &[g.clone(), iso, x, back])?;
        if m != mu[j] || s2 * s2 != m {
            c.ok = false;
            c.counterexample = Some(format!("μ{} = {m}, expected {}", j + 1, mu[j]));
        }
        compositions.push(c);
    }

    let dinv = d.inv()?;
    let mut got = mu.to_vec();
    got.sort();
    let mut want = vec![d, dinv];
    want.sort();
    Ok(BijectionReport {
        field: f.to_string(),
        d: d.to_string(),
        sqrt_d: s.to_string(),
        lambda: [lambda[0].to_string(), lambda[1].to_string()],
        lambda_nonsquare: lambda.iter().all(|l| l.chi2() == -1),
        traces,
        traces_equal: traces[1] == traces[0] && traces[2] == traces[0],
        lambda_relation: lambda[1] == lambda[0] / (lambda[0] - 1),
        e: e.to_string(),
        mu: [mu[0].to_string(), mu[1].to_string()],
        mu_pair: got == want,
        two_torsion_images,
        compositions,
    })
}
