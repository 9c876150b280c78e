use edwards_legendre::curves::*;
use edwards_legendre::ff::*;
use edwards_legendre::nt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f13() -> &'static FieldCtx {
    prime_field(13).unwrap()
}

fn odd_prime_powers(limit: u64) -> Vec<&'static FieldCtx> {
    (3..=limit).filter_map(nt::prime_power).map(|(p, m)| field_ctx(p, m, None).unwrap()).collect()
}

fn params(f: &'static FieldCtx) -> impl Iterator<Item = FieldElement> {
    f.elements().filter(|d| !d.is_zero() && !d.is_one())
}

/// Plain integer arithmetic mod p, no field machinery.
mod naive {
    pub fn is_sq(p: i64, v: i64) -> bool {
        let v = v.rem_euclid(p);
        (0..p).any(|y| y * y % p == v)
    }
    pub fn chi(p: i64, v: i64) -> i64 {
        match v.rem_euclid(p) {
            0 => 0,
            v if is_sq(p, v) => 1,
            _ => -1,
        }
    }
    fn scan(p: i64, eq: impl Fn(i64, i64) -> i64) -> i64 {
        let mut n = 0;
        for x in 0..p {
            for y in 0..p {
                if eq(x, y).rem_euclid(p) == 0 {
                    n += 1;
                }
            }
        }
        n
    }
    pub fn edwards(p: i64, a: i64, d: i64) -> i64 {
        let affine = scan(p, |x, y| a * x * x + y * y - 1 - d * x * x % p * y * y);
        let ad = (a * d).rem_euclid(p);
        affine + (1 + chi(p, ad)) + (1 + chi(p, d))
    }
    pub fn legendre(p: i64, d: i64) -> i64 {
        1 + scan(p, |x, y| y * y - x * (x - 1) % p * (x - d))
    }
    pub fn montgomery(p: i64, a: i64, b: i64) -> i64 {
        1 + scan(p, |x, y| b * y * y - (x * x % p * x + a * x * x + x))
    }
    pub fn huff(p: i64, a: i64, b: i64) -> i64 {
        3 + scan(p, |x, y| a * x * (y * y - 1) - b * y * (x * x - 1))
    }
}

#[test]
fn construction_examples() {
    let f = f13();
    assert_eq!(Curve::edwards(f.zero()).unwrap_err(), CurveError::EdwardsZero);
    assert_eq!(Curve::edwards(f.one()).unwrap_err(), CurveError::EdwardsOne);
    assert_eq!(Curve::legendre(f.one()).unwrap_err(), CurveError::LegendreRepeatedRoot);
    assert_eq!(Curve::legendre(f.zero()).unwrap_err(), CurveError::LegendreZero);
    assert!(Curve::edwards(f.elem(2)).is_ok());
    assert_eq!(Curve::twisted_edwards(f.elem(3), f.elem(3)).unwrap_err(), CurveError::TwistedAEqualsD);
    assert_eq!(Curve::twisted_edwards(f.zero(), f.elem(3)).unwrap_err(), CurveError::TwistedAZero);
    assert_eq!(Curve::twisted_edwards(f.elem(2), f.zero()).unwrap_err(), CurveError::TwistedDZero);
    // y² = x³ (cusp) and y² = x²(x+1) (node)
    assert_eq!(Curve::weierstrass(f.zero(), f.zero(), f.zero()).unwrap_err(), CurveError::WeierstrassSingular);
    assert_eq!(Curve::weierstrass(f.one(), f.zero(), f.zero()).unwrap_err(), CurveError::WeierstrassSingular);
    assert_eq!(Curve::montgomery(f.elem(2), f.one()).unwrap_err(), CurveError::MontgomerySingular);
    assert_eq!(Curve::montgomery(f.elem(3), f.zero()).unwrap_err(), CurveError::MontgomeryBZero);
    assert_eq!(Curve::huff(f.elem(3), f.elem(10)).unwrap_err(), CurveError::HuffSingular);
    assert_eq!(Curve::huff(f.zero(), f.elem(1)).unwrap_err(), CurveError::HuffZero);
    assert_eq!(
        make_curve(CurveKind::Legendre, &[f.elem(2), f.elem(3)]).unwrap_err(),
        CurveError::Arity(CurveKind::Legendre, 1)
    );
    let f7 = prime_field(7).unwrap();
    assert!(matches!(make_curve(CurveKind::Huff, &[f.elem(2), f7.elem(3)]), Err(CurveError::Field(_))));
}

#[test]
fn membership_examples() {
    let f = f13();
    let e2 = Curve::edwards(f.elem(2)).unwrap();
    let l2 = Curve::legendre(f.elem(2)).unwrap();
    assert!(e2.is_on_curve(&Point::affine(f.one(), f.zero())));
    assert!(l2.is_on_curve(&Point::affine(f.one(), f.zero())));
    assert!(!l2.is_on_curve(&Point::affine(f.elem(3), f.one())));
    assert!(l2.is_on_curve(&Point::Infinity));
    assert!(!e2.is_on_curve(&Point::Infinity));
    // chi2(2) = −1 over F_13: no exceptional points
    assert!(ExcLabel::ALL.iter().all(|&l| !e2.is_on_curve(&Point::Exceptional(l))));
    let e4 = Curve::edwards(f.elem(4)).unwrap();
    assert!(ExcLabel::ALL.iter().all(|&l| e4.is_on_curve(&Point::Exceptional(l))));
    // points of another field are never members
    let f7 = prime_field(7).unwrap();
    assert!(!l2.is_on_curve(&Point::affine(f7.one(), f7.zero())));
}

#[test]
fn group_law_examples() {
    let f = f13();
    let e2 = Curve::edwards(f.elem(2)).unwrap();
    let l2 = Curve::legendre(f.elem(2)).unwrap();
    let p = Point::affine(f.one(), f.zero());
    assert_eq!(e2.add(&p, &e2.identity()).unwrap(), p);
    assert_eq!(e2.add(&p, &p).unwrap(), Point::affine(f.zero(), f.elem(12)));
    assert_eq!(l2.add(&p, &p).unwrap(), Point::Infinity);
    assert_eq!(e2.scalar_mul(0, &p).unwrap(), e2.identity());
    assert_eq!(e2.scalar_mul(2, &p).unwrap(), Point::affine(f.zero(), f.elem(12)));
    assert_eq!(e2.scalar_mul(4, &p).unwrap(), e2.identity());
    assert_eq!(e2.scalar_mul(-1, &p).unwrap(), e2.neg(&p));
    let h = Curve::huff(f.elem(3), f.one()).unwrap();
    assert!(matches!(h.add(&p, &p), Err(CurveError::Unsupported { .. })));
}

#[test]
fn counting_examples() {
    let f5 = prime_field(5).unwrap();
    let f = f13();
    let l = |f: &'static FieldCtx, d| Curve::legendre(f.elem(d)).unwrap();
    for m in [CountMethod::Exhaustive, CountMethod::CharSum] {
        assert_eq!(l(f5, 2).count_points(m).unwrap(), 8);
        assert_eq!(l(f, 2).count_points(m).unwrap(), 8);
        assert_eq!(Curve::edwards(f.elem(2)).unwrap().count_points(m).unwrap(), 8);
    }
    assert_eq!(l(f, 2).trace().unwrap(), 6);
    assert_eq!(l(f, 3).trace().unwrap(), -2);
    assert_eq!(l(f5, 2).trace().unwrap(), -2);
}

#[test]
fn j_invariant_examples() {
    let f = f13();
    assert_eq!(legendre_j(f.elem(2)), f.elem(1728));
    assert_eq!(Curve::legendre(f.elem(2)).unwrap().j_invariant(), f.elem(12));
    // 4² − 4 + 1 = 13
    assert_eq!(legendre_j(f.elem(4)), f.zero());
    for p in [7u64, 11, 13, 17, 101] {
        let fp = prime_field(p).unwrap();
        assert_eq!(edwards_j(fp.elem(-1)), fp.elem(1728));
    }
}

#[test]
fn weierstrass_j_agrees_with_closed_forms() {
    for f in odd_prime_powers(49) {
        for d in params(f) {
            let (a2, a4, a6, _) = Curve::legendre(d).unwrap().weierstrass_form().unwrap();
            assert_eq!(Curve::weierstrass(a2, a4, a6).unwrap().j_invariant(), legendre_j(d));
        }
    }
}

#[test]
fn group_structure_examples() {
    let f5 = prime_field(5).unwrap();
    let gs = Curve::legendre(f5.elem(2)).unwrap().group_structure().unwrap();
    assert_eq!((gs.n1, gs.n2), (2, 4));
    let l3 = Curve::legendre(f13().elem(3)).unwrap();
    let gs = l3.group_structure().unwrap();
    assert_eq!(gs.order(), 16);
    // oracle: exponent = max order by repeated addition
    let pts = l3.points().unwrap();
    let max_order = pts
        .iter()
        .map(|p| {
            let mut acc = *p;
            let mut k = 1;
            while acc != Point::Infinity {
                acc = l3.add(&acc, p).unwrap();
                k += 1;
            }
            k
        })
        .max()
        .unwrap();
    assert_eq!(gs.n2, max_order);
}

#[test]
fn counts_match_naive_oracle() {
    for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let f = prime_field(p as u64).unwrap();
        for d in 2..p {
            let de = f.elem(d);
            let e = Curve::edwards(de).unwrap();
            let l = Curve::legendre(de).unwrap();
            let ne = naive::edwards(p, 1, d);
            assert_eq!(ne, naive::legendre(p, d), "Tate consistency p={p} d={d}");
            for m in [CountMethod::Exhaustive, CountMethod::CharSum] {
                assert_eq!(e.count_points(m).unwrap() as i64, ne, "E p={p} d={d}");
                assert_eq!(l.count_points(m).unwrap() as i64, ne, "L p={p} d={d}");
            }
            assert_eq!(e.points().unwrap().len() as i64, ne);
            for a in 1..p {
                if a != d {
                    let t = Curve::twisted_edwards(f.elem(a), de).unwrap();
                    let nt = naive::edwards(p, a, d);
                    assert_eq!(t.count_points(CountMethod::Exhaustive).unwrap() as i64, nt);
                    assert_eq!(t.count_points(CountMethod::CharSum).unwrap() as i64, nt);
                    assert_eq!(t.points().unwrap().len() as i64, nt);
                }
            }
        }
        for a in 0..p {
            for b in 1..p {
                if let Ok(c) = Curve::montgomery(f.elem(a), f.elem(b)) {
                    let n = naive::montgomery(p, a, b);
                    assert_eq!(c.count_points(CountMethod::Exhaustive).unwrap() as i64, n);
                    assert_eq!(c.count_points(CountMethod::CharSum).unwrap() as i64, n);
                    assert_eq!(c.points().unwrap().len() as i64, n);
                }
                if let Ok(c) = Curve::huff(f.elem(a), f.elem(b)) {
                    let n = naive::huff(p, a, b);
                    assert_eq!(c.count_points(CountMethod::Exhaustive).unwrap() as i64, n);
                    assert_eq!(c.count_points(CountMethod::CharSum).unwrap() as i64, n);
                }
            }
        }
    }
}

#[test]
fn tate_consistency_and_method_agreement_in_extensions() {
    for f in odd_prime_powers(400) {
        for d in params(f) {
            let e = Curve::edwards(d).unwrap();
            let l = Curve::legendre(d).unwrap();
            let n = l.count_points(CountMethod::CharSum).unwrap();
            assert_eq!(l.count_points(CountMethod::Exhaustive).unwrap(), n);
            assert_eq!(e.count_points(CountMethod::CharSum).unwrap(), n);
            assert_eq!(e.count_points(CountMethod::Exhaustive).unwrap(), n);
            assert_eq!(n % 4, 0, "#L_d is divisible by 4");
            let a = l.trace().unwrap();
            assert!(a * a <= 4 * f.q() as i64);
        }
    }
}

#[test]
fn edwards_law_is_complete_for_nonsquare_d() {
    for f in odd_prime_powers(121) {
        for d in params(f).filter(|d| d.chi2() == -1) {
            let e = Curve::edwards(d).unwrap();
            let pts = e.points().unwrap();
            assert!(pts.iter().all(|p| matches!(p, Point::Affine(..))));
            for p in &pts {
                for q in &pts {
                    assert!(e.edwards_law_direct(p, q).is_some(), "{d:?}: {p} + {q}");
                }
            }
        }
    }
}

#[test]
fn edwards_exceptional_points_for_square_d() {
    for f in odd_prime_powers(61) {
        for d in params(f).filter(|d| d.chi2() == 1) {
            let e = Curve::edwards(d).unwrap();
            let n = e.count_points(CountMethod::CharSum).unwrap();
            let pts = e.points().unwrap();
            assert_eq!(pts.len() as u64, n);
            for l in ExcLabel::ALL {
                let p = Point::Exceptional(l);
                let ord = e.order_dividing(&p, n).unwrap();
                let expected = if matches!(l, ExcLabel::XPlus | ExcLabel::XMinus) { 2 } else { 4 };
                assert_eq!(ord, expected, "{l:?} over F_{}", f.q());
            }
            // the full law (with its τ detour) is a group law on every pair
            let y2 = e.double(&Point::Exceptional(ExcLabel::YPlus)).unwrap();
            assert_eq!(y2, Point::affine(f.zero(), -f.one()));
            for p in &pts {
                for q in &pts {
                    let s = e.add(p, q).unwrap();
                    assert!(e.is_on_curve(&s));
                    assert_eq!(e.add(&s, &e.neg(q)).unwrap(), *p);
                }
            }
        }
    }
}

#[test]
fn twisted_law_is_a_group_law_at_exceptional_points() {
    for p in [7u64, 11, 13, 17] {
        let f = prime_field(p).unwrap();
        for a in params(f) {
            for d in params(f).filter(|&d| d != a) {
                let e = Curve::twisted_edwards(a, d).unwrap();
                let pts = e.points().unwrap();
                let n = e.count_points(CountMethod::CharSum).unwrap();
                assert_eq!(pts.len() as u64, n);
                for l in ExcLabel::ALL {
                    if e.exceptional_coordinate(l).is_none() {
                        continue;
                    }
                    let ord = e.order_dividing(&Point::Exceptional(l), n).unwrap();
                    let expected = if matches!(l, ExcLabel::XPlus | ExcLabel::XMinus) { 2 } else { 4 };
                    assert_eq!(ord, expected);
                }
                for x in &pts {
                    for y in &pts {
                        let s = e.add(x, y).unwrap();
                        assert!(e.is_on_curve(&s));
                        assert_eq!(e.add(&s, &e.neg(y)).unwrap(), *x, "{e}");
                    }
                }
            }
        }
    }
}

fn random_triples_hold(c: &Curve, rng: &mut ChaCha8Rng, n: usize) {
    let pts = c.points().unwrap();
    for _ in 0..n {
        let p = pts.choose(rng).unwrap();
        let q = pts.choose(rng).unwrap();
        let r = pts.choose(rng).unwrap();
        let lhs = c.add(&c.add(p, q).unwrap(), r).unwrap();
        let rhs = c.add(p, &c.add(q, r).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "associativity on {c}");
        assert_eq!(c.add(p, &c.neg(p)).unwrap(), c.identity());
        assert_eq!(c.add(p, q).unwrap(), c.add(q, p).unwrap());
    }
}

#[test]
fn group_law_associativity_and_inverses() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for f in [13u64, 17, 101].map(|p| prime_field(p).unwrap()).into_iter().chain([
        field_ctx(3, 2, None).unwrap(),
        field_ctx(5, 2, None).unwrap(),
        field_ctx(3, 3, None).unwrap(),
    ]) {
        let ds: Vec<FieldElement> = params(f).collect();
        for k in 0..4 {
            let d = ds[(k * 7 + 3) % ds.len()];
            random_triples_hold(&Curve::edwards(d).unwrap(), &mut rng, 1000);
            random_triples_hold(&Curve::legendre(d).unwrap(), &mut rng, 1000);
            if let Ok(m) = Curve::montgomery(d, d + 1) {
                random_triples_hold(&m, &mut rng, 1000);
            }
            if let Ok(w) = Curve::weierstrass(d, f.elem(3), d * d) {
                random_triples_hold(&w, &mut rng, 1000);
            }
        }
    }
}

#[test]
fn j_invariants_respect_the_obvious_symmetries() {
    for f in odd_prime_powers(121) {
        for d in params(f) {
            let jl = legendre_j(d);
            let inv = d.inv().unwrap();
            for e in [1 - d, inv, 1 - inv, (1 - d).inv().unwrap(), d / (d - 1)] {
                assert_eq!(legendre_j(e), jl);
            }
            assert_eq!(edwards_j(inv), edwards_j(d));
            let t = Curve::twisted_edwards(f.one(), d).unwrap();
            assert_eq!(t.j_invariant(), edwards_j(d));
        }
    }
}

#[test]
fn serialization_round_trip() {
    let f = f13();
    let f9 = field_ctx(3, 2, None).unwrap();
    let curves = [
        Curve::edwards(f.elem(2)).unwrap(),
        Curve::twisted_edwards(f.elem(4), f.elem(3)).unwrap(),
        Curve::legendre(f9.from_coeffs(&[1, 1])).unwrap(),
        Curve::weierstrass(f.elem(1), f.elem(2), f.elem(3)).unwrap(),
        Curve::montgomery(f.elem(4), f.elem(5)).unwrap(),
        Curve::huff(f9.from_coeffs(&[0, 1]), f9.one()).unwrap(),
    ];
    assert_eq!(curves[0].to_string(), "edwards:2@13^1");
    assert_eq!(curves[2].to_string(), "legendre:(1,1)@3^2");
    for c in curves {
        assert_eq!(c.to_string().parse::<Curve>().unwrap(), c);
    }
    let f9b = field_ctx(3, 2, Some(&[2, 1, 1])).unwrap();
    let c = Curve::legendre(f9b.from_coeffs(&[0, 1])).unwrap();
    assert_eq!(c.to_string(), "legendre:(0,1)@3^2:2,1,1");
    assert_eq!(c.to_string().parse::<Curve>().unwrap(), c);

    assert_eq!(Point::parse("0,1", f).unwrap(), Point::affine(f.zero(), f.one()));
    assert_eq!(Point::parse("inf", f).unwrap(), Point::Infinity);
    assert_eq!(Point::parse("exc:Y-", f).unwrap(), Point::Exceptional(ExcLabel::YMinus));
    assert!(Point::parse("0;1", f).is_err());
    assert!(Point::parse("exc:Z", f).is_err());
    assert_eq!(Point::parse("(14,-1)", f).unwrap(), Point::affine(f.one(), f.elem(12)));
    let p = Point::affine(f9.from_coeffs(&[1, 2]), f9.one());
    assert_eq!(p.to_string(), "((1,2),(1,0))");
    assert_eq!(Point::parse(&p.to_string(), f9).unwrap(), p);
    assert_eq!(Point::parse("1,2,1,0", f9).unwrap(), p);
}

#[test]
fn oversized_fields_are_rejected() {
    let f = field_ctx_bounded(3, 17, None, ARITH_MAX_Q).unwrap();
    let c = Curve::legendre(f.elem(2)).unwrap();
    assert!(matches!(c.count_points(CountMethod::CharSum), Err(CurveError::TooLarge(..))));
    assert!(matches!(c.points(), Err(CurveError::TooLarge(..))));
}

fn small_field() -> impl Strategy<Value = &'static FieldCtx> {
    prop::sample::select(vec![(5u64, 1u32), (7, 1), (13, 1), (29, 1), (3, 2), (5, 2), (3, 3), (97, 1), (7, 2)])
        .prop_map(|(p, m)| field_ctx(p, m, None).unwrap())
}

fn field_and_param() -> impl Strategy<Value = FieldElement> {
    (small_field(), any::<u64>())
        .prop_map(|(f, k)| f.from_code(2 + k % (f.q() - 2)))
        .prop_filter("d ∉ {0,1}", |d| !d.is_one())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_agree_across_methods_and_models(d in field_and_param()) {
        let e = Curve::edwards(d).unwrap();
        let l = Curve::legendre(d).unwrap();
        let n = l.count_points(CountMethod::Exhaustive).unwrap();
        prop_assert_eq!(l.count_points(CountMethod::CharSum).unwrap(), n);
        prop_assert_eq!(e.count_points(CountMethod::Exhaustive).unwrap(), n);
        prop_assert_eq!(e.count_points(CountMethod::CharSum).unwrap(), n);
        prop_assert_eq!(n % 4, 0);
        let q = d.field().q() as i64;
        let a = q + 1 - n as i64;
        prop_assert!(a * a <= 4 * q);
    }

    #[test]
    fn group_structure_is_consistent(d in field_and_param()) {
        for c in [Curve::edwards(d).unwrap(), Curve::legendre(d).unwrap()] {
            let gs = c.group_structure().unwrap();
            prop_assert_eq!(gs.order(), c.count_points(CountMethod::CharSum).unwrap());
            prop_assert_eq!(gs.n2 % gs.n1, 0);
            prop_assert_eq!((d.field().q() - 1) % gs.n1, 0);
        }
    }

    #[test]
    fn scalar_multiplication_is_additive(d in field_and_param(), i in 0usize..1000, j in -40i64..40, k in -40i64..40) {
        let c = Curve::edwards(d).unwrap();
        let pts = c.points().unwrap();
        let p = pts[i % pts.len()];
        let lhs = c.scalar_mul(j + k, &p).unwrap();
        let rhs = c.add(&c.scalar_mul(j, &p).unwrap(), &c.scalar_mul(k, &p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
