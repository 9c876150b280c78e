use serde::{Deserialize, Serialize};

use super::CensusError;
use crate::ff::{FieldCtx, FieldElement};
use crate::nt;

/// H_p(x) = (−1)^((p−1)/2) Σ_i C((p−1)/2, i)² x^i over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeuringPoly {
    pub p: u64,
    /// Low-degree-first, reduced mod p.
    pub coeffs: Vec<u64>,
}

impl DeuringPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation at an element of any field of characteristic p.
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = x.field();
        assert_eq!(f.p(), self.p, "H_{} evaluated over {f}", self.p);
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| acc * x + f.elem(c as i64))
    }
}

pub fn deuring_poly(p: u64) -> Result<DeuringPoly, CensusError> {
    if p < 3 || !nt::is_prime(p) {
        return Err(CensusError::NotOddPrime(p));
    }
    let n = (p - 1) / 2;
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    // C(n, i) = C(n, i−1)·(n−i+1)/i; every i ≤ n < p is invertible mod p
    let mut binom = 1u64;
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        if i > 0 {
            binom = mulmod(mulmod(binom, n - i + 1), powmod(i, p - 2));
        }
        let c = mulmod(binom, binom);
        coeffs.push(if n % 2 == 1 { (p - c) % p } else { c });
    }
    Ok(DeuringPoly { p, coeffs })
}

/// Roots of H_p in F_q \ {0, 1}, by scanning the field, canonical order.
pub fn supersingular_params(ctx: &'static FieldCtx) -> Result<Vec<FieldElement>, CensusError> {
    let h = deuring_poly(ctx.p())?;
    let mut roots: Vec<FieldElement> =
        ctx.elements().filter(|d| !d.is_zero() && !d.is_one() && h.eval(*d).is_zero()).collect();
    roots.sort();
    Ok(roots)
}

/// h(−p) for p ≡ 3 (mod 4), p > 3, by counting reduced primitive forms
/// (a, b, c) with b² − 4ac = −p: |b| ≤ a ≤ c, and b ≥ 0 when |b| = a or
/// a = c.
pub fn class_number_oracle(p: u64) -> Result<u64, CensusError> {
    if p <= 3 || !nt::is_prime(p) || p % 4 != 3 {
        return Err(CensusError::WrongResidueClass {
            what: "the class-number oracle".into(),
            needs: "a prime p ≡ 3 (mod 4), p > 3".into(),
            field: format!("p = {p}"),
        });
    }
    let p = p as i64;
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= p {
        for b in -a..=a {
            let num = b * b + p;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && (-b == a || a == c)) {
                continue;
            }
            if nt::gcd(nt::gcd(a as u64, b.unsigned_abs()), c as u64) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    Ok(h)
}
