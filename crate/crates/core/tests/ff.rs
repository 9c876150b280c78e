use edwards_legendre::ff::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn odd_prime_powers(limit: u64) -> Vec<(u64, u32)> {
    (3..=limit).filter_map(edwards_legendre::nt::prime_power).collect()
}

fn f(q: (u64, u32)) -> &'static FieldCtx {
    field_ctx(q.0, q.1, None).unwrap()
}

#[test]
fn construction_examples() {
    let f13 = prime_field(13).unwrap();
    assert_eq!((f13.p(), f13.m(), f13.q()), (13, 1, 13));
    let f9 = field_ctx(3, 2, None).unwrap();
    assert_eq!(f9.modulus(), &[1, 0, 1]);
    assert_eq!(f9.to_string(), "3^2:1,0,1");
    assert_eq!(prime_field(9).unwrap_err(), FieldError::CompositeCharacteristic(9));
    assert_eq!(prime_field(2).unwrap_err(), FieldError::EvenCharacteristic(2));
    assert_eq!(field_ctx(3, 2, Some(&[2, 0, 1])).unwrap_err(), FieldError::ReducibleModulus(3));
    assert!(matches!(field_ctx(3, 2, Some(&[1, 0, 2])), Err(FieldError::BadModulus(2))));
    assert!(matches!(field_ctx(3, 13, None), Err(FieldError::TooLarge { .. })));
    assert!(field_ctx_bounded(3, 13, None, 1 << 21).is_ok());
    // interning: same field, same context
    assert!(std::ptr::eq(prime_field(13).unwrap(), f13));
}

/// Oracle: the smallest monic irreducible quadratic over F_3 found by
/// checking each candidate for roots by hand-rolled evaluation.
#[test]
fn default_modulus_is_smallest_irreducible() {
    let has_root = |c0: u64, c1: u64| (0..3u64).any(|x| (x * x + c1 * x + c0) % 3 == 0);
    let mut first = None;
    'outer: for c0 in 0..3 {
        for c1 in 0..3 {
            if !has_root(c0, c1) {
                first = Some(vec![c0, c1, 1]);
                break 'outer;
            }
        }
    }
    assert_eq!(first.unwrap(), field_ctx(3, 2, None).unwrap().modulus());
}

#[test]
fn arithmetic_examples() {
    let f = prime_field(13).unwrap();
    assert_eq!(f.elem(7) * f.elem(2), f.elem(1));
    assert_eq!(f.elem(9).inv().unwrap(), f.elem(3));
    assert_eq!(f.elem(5) + f.zero(), f.elem(5));
    assert_eq!(f.zero().inv().unwrap_err(), FieldError::DivisionByZero);
    let g = prime_field(7).unwrap();
    assert!(matches!(f.one().checked_add(g.one()), Err(FieldError::MixedFields(..))));
    assert_eq!(f.elem(2).pow_i(-1).unwrap(), f.elem(7));
}

/// Oracle: Gaussian-integer style arithmetic in F_3[i]/(i²+1).
#[test]
fn f9_matches_gaussian_oracle() {
    let f9 = field_ctx(3, 2, None).unwrap();
    for a in f9.elements() {
        for b in f9.elements() {
            let (x, y) = (a.coeffs()[0] as i64, a.coeffs()[1] as i64);
            let (u, v) = (b.coeffs()[0] as i64, b.coeffs()[1] as i64);
            let prod = f9.from_coeffs(&[x * u - y * v, x * v + y * u]);
            let sum = f9.from_coeffs(&[x + u, y + v]);
            assert_eq!(a * b, prod);
            assert_eq!(a + b, sum);
            if !b.is_zero() {
                assert_eq!((a / b) * b, a);
            }
        }
    }
}

#[test]
fn character_examples() {
    let f = prime_field(13).unwrap();
    let squares: Vec<u64> = (1..13u64).map(|x| x * x % 13).collect();
    assert_eq!(f.zero().chi2(), 0);
    assert_eq!(f.elem(2).chi2(), -1);
    assert_eq!(f.elem(12).chi2(), 1);
    assert!(!squares.contains(&2) && squares.contains(&12));
    assert_eq!(f.elem(12).sqrt(), Some(f.elem(5)));
    assert_eq!(f.elem(2).sqrt(), None);
    assert_eq!(f.one().sqrt(), Some(f.one()));
    assert_eq!(f.zero().sqrt(), Some(f.zero()));
    assert_eq!(f.elem(3).fourth_power_class(), PowerClass::FourthPower);
    assert_eq!(f.elem(4).fourth_power_class(), PowerClass::SquareNotFourth);
    assert_eq!(f.elem(2).fourth_power_class(), PowerClass::Nonsquare);
    let f7 = prime_field(7).unwrap();
    assert_eq!(f7.elem(2).fourth_power_class(), PowerClass::FourthPower);
    // d^{3/2} = sqrt(d)·d
    assert_eq!(f.elem(4).pow_three_halves(), Some(f.elem(8)));
}

#[test]
fn character_matches_enumeration_oracle() {
    for q in odd_prime_powers(243) {
        let f = f(q);
        let mut is_sq = std::collections::HashSet::new();
        let mut is_4th = std::collections::HashSet::new();
        for x in f.elements().skip(1) {
            is_sq.insert(x * x);
            is_4th.insert(x.pow(4));
        }
        for x in f.elements() {
            let expect = if x.is_zero() {
                0
            } else if is_sq.contains(&x) {
                1
            } else {
                -1
            };
            assert_eq!(x.chi2(), expect, "q={} x={x}", f.q());
            assert_eq!(x.chi2_by_power(), expect);
            let class = x.fourth_power_class();
            if !x.is_zero() {
                assert_eq!(class == PowerClass::FourthPower, is_4th.contains(&x));
            }
        }
        assert_eq!(is_sq.len() as u64, (f.q() - 1) / 2);
        if f.q() % 4 == 1 {
            assert_eq!(is_4th.len() as u64, (f.q() - 1) / 4);
        } else {
            assert_eq!(is_4th, is_sq);
        }
    }
}

#[test]
fn chi2_is_multiplicative() {
    for q in odd_prime_powers(121) {
        let f = f(q);
        for x in f.elements().skip(1) {
            for y in f.elements().skip(1) {
                assert_eq!((x * y).chi2(), x.chi2() * y.chi2());
            }
        }
    }
}

#[test]
fn sqrt_is_canonical() {
    for q in odd_prime_powers(300).into_iter().chain([(257, 1), (3, 7), (5, 5)]) {
        let f = f(q);
        for x in f.elements() {
            match x.sqrt() {
                None => assert_eq!(x.chi2(), -1),
                Some(r) => {
                    assert_eq!(r * r, x);
                    assert!(r <= -r, "root {r} is not the smaller of ±r in F_{}", f.q());
                    if f.m() == 1 {
                        assert!(r.code() <= (f.p() - 1) / 2);
                    }
                }
            }
        }
    }
}

/// Williams' identity with F = χ₂, for random admissible coefficient tuples.
#[test]
fn williams_character_sum_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in odd_prime_powers(121) {
        let f = f(q);
        let chi = |x: FieldElement| x.chi2() as i64;
        let mut tested = 0;
        while tested < 50 {
            let mut r = || f.from_code(rng.gen_range(0..f.q()));
            let (a1, b1, c1, mut a2, b2, c2) = (r(), r(), r(), r(), r(), r());
            if rng.gen_bool(0.2) {
                a2 = f.zero();
            }
            let dd = b2 * b2 - a2 * c2 * 4;
            let delta = a1 * c2 * 4 - b1 * b2 * 2 + a2 * c1 * 4;
            let small_d = b1 * b1 - a1 * c1 * 4;
            if (delta * delta - small_d * dd * 4).is_zero() || (a2.is_zero() && b2.is_zero() && c2.is_zero()) {
                continue;
            }
            let lhs: i64 = f
                .elements()
                .filter_map(|x| {
                    let den = a2 * x * x + b2 * x + c2;
                    (!den.is_zero()).then(|| chi((a1 * x * x + b1 * x + c1) / den))
                })
                .sum();
            let rhs: i64 = f.elements().map(|x| chi(dd * x * x + delta * x + small_d) * chi(x)).sum::<i64>()
                + f.elements().map(chi).sum::<i64>()
                - if a2.is_zero() { 0 } else { chi(a1 / a2) };
            assert_eq!(lhs, rhs, "q={}", f.q());
            tested += 1;
        }
    }
}

#[test]
fn serialization_round_trip() {
    let f9 = field_ctx(3, 2, None).unwrap();
    let x = f9.from_coeffs(&[2, 1]);
    assert_eq!(x.to_string(), "2,1");
    assert_eq!(x.atom(), "(2,1)");
    assert_eq!(f9.parse_element("(2,1)").unwrap(), x);
    assert_eq!(f9.parse_element("5,-2").unwrap(), x);
    assert!(f9.parse_element("1,2,3").is_err());
    assert!(f9.parse_element("a").is_err());
    assert_eq!(FieldCtx::parse("3^2:1,0,1").unwrap() as *const _, f9 as *const _);
    let f13 = prime_field(13).unwrap();
    assert_eq!(f13.to_string(), "13^1:0,1");
    assert_eq!(FieldCtx::parse("13^1:0,1").unwrap() as *const _, f13 as *const _);
    assert_eq!(f13.parse_element("-1").unwrap(), f13.elem(12));
}

#[test]
fn lift_examples() {
    let f13 = prime_field(13).unwrap();
    let e = lift_to_extension(f13, 2).unwrap();
    let f169 = e.target();
    assert_eq!(f169.q(), 169);
    assert_eq!(e.apply(f13.one()), f169.one());
    assert_eq!(e.apply(f13.elem(2)).chi2(), 1);
    for a in f13.elements() {
        assert!(e.apply(a).is_square());
        assert_eq!(e.preimage(e.apply(a)), Some(a));
    }
    let outside = f169.elements().filter(|b| e.preimage(*b).is_none()).count();
    assert_eq!(outside, 169 - 13);
    assert_eq!(lift_to_extension(f13, 3).unwrap_err(), FieldError::LiftDegree(3));
}

#[test]
fn large_lift_arithmetic_is_a_field() {
    // 3^24 is far beyond the table limit: pure polynomial arithmetic.
    let f = field_ctx(3, 6, None).unwrap();
    let e = lift_to_extension(f, 4).unwrap();
    let big = e.target();
    assert!(big.q() > 1 << 24);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let mut r = || big.from_code(rng.gen_range(1..big.q()));
        let (a, b, c) = (r(), r(), r());
        assert_eq!((a * b) * c, a * (b * c));
        assert_eq!(a * (b + c), a * b + a * c);
        assert_eq!(a * a.inv().unwrap(), big.one());
        let s = a * a;
        let root = s.sqrt().unwrap();
        assert!(root == a || root == -a);
        assert_eq!(a.chi2(), a.chi2_by_power());
    }
    // every element of the base field is a square after a quadratic lift
    for a in f.elements().step_by(13) {
        assert!(e.apply(a).is_square());
    }
}

fn embedding_strategy() -> impl Strategy<Value = (&'static Embedding, u64, u64)> {
    let fields = [(3u64, 2u32, 2u32), (13, 1, 4), (3, 3, 2), (5, 2, 2), (7, 1, 2)];
    (0..fields.len(), any::<u64>(), any::<u64>()).prop_map(move |(i, a, b)| {
        let (p, m, k) = fields[i];
        let e = lift_to_extension(field_ctx(p, m, None).unwrap(), k).unwrap();
        let q = e.source().q();
        (e, a % q, b % q)
    })
}

proptest! {
    #[test]
    fn embedding_is_a_ring_homomorphism((e, a, b) in embedding_strategy()) {
        let src = e.source();
        let (a, b) = (src.from_code(a), src.from_code(b));
        prop_assert_eq!(e.apply(a + b), e.apply(a) + e.apply(b));
        prop_assert_eq!(e.apply(a * b), e.apply(a) * e.apply(b));
        prop_assert_eq!(e.apply(-a), -e.apply(a));
        prop_assert_eq!(e.preimage(e.apply(a)), Some(a));
        if !b.is_zero() {
            prop_assert_eq!(e.apply(a / b), e.apply(a) / e.apply(b));
        }
    }

    #[test]
    fn prime_field_axioms(p_idx in 0usize..6, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let p = [3u64, 13, 97, 257, 65537, 1_048_573][p_idx];
        let f = prime_field(p).unwrap();
        let (a, b, c) = (f.elem((a % p) as i64), f.elem((b % p) as i64), f.elem((c % p) as i64));
        prop_assert_eq!((a + b) * c, a * c + b * c);
        prop_assert_eq!(a - a, f.zero());
        if !a.is_zero() {
            prop_assert_eq!(a.pow(p - 1), f.one());
            prop_assert_eq!(a * a.inv().unwrap(), f.one());
        }
        if a.chi2() == 1 {
            let r = a.sqrt().unwrap();
            prop_assert_eq!(r * r, a);
            prop_assert!(r.code() <= (p - 1) / 2);
        }
    }
}
