//! Dense univariate polynomials over a field, just enough for irreducibility
//! testing (Rabin) and root finding (Cantor–Zassenhaus).

use super::{prime_field, FieldCtx, FieldElement, FieldError};
use crate::nt;

/// Coefficients low-degree-first, no trailing zeros (zero polynomial = empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poly {
    field: &'static FieldCtx,
    c: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &'static FieldCtx, mut c: Vec<FieldElement>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { field, c }
    }
    pub fn x(field: &'static FieldCtx) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }
    pub fn constant(a: FieldElement) -> Poly {
        Poly::new(a.field(), vec![a])
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let z = self.field.zero();
        let c = (0..n).map(|i| *self.c.get(i).unwrap_or(&z) + *o.c.get(i).unwrap_or(&z)).collect();
        Poly::new(self.field, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let neg = Poly::new(o.field, o.c.iter().map(|&a| -a).collect());
        self.add(&neg)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::new(self.field, vec![]);
        }
        let mut c = vec![self.field.zero(); self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j] + a * b;
            }
        }
        Poly::new(self.field, c)
    }

    /// (quotient, remainder); panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.c[dd].inv().expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        let mut q = vec![self.field.zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let coef = r[r.len() - 1] * lead_inv;
            q[k] = coef;
            for j in 0..=dd {
                r[k + j] = r[k + j] - coef * d.c[j];
            }
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(self.field, q), Poly::new(self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Poly {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let li = l.inv().expect("nonzero");
                Poly::new(self.field, self.c.iter().map(|&a| a * li).collect())
            }
        }
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::constant(self.field.one()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// All roots in the coefficient field of a polynomial that splits into
    /// distinct linear factors there; sorted in canonical order.
    pub fn split_roots(&self) -> Vec<FieldElement> {
        let mut out = Vec::new();
        split_into(&self.monic(), &mut out);
        out.sort();
        out
    }
}

/// The distinct roots in F_q of the polynomial with coefficients `c`
/// (low-degree-first), in canonical order: split gcd(f, x^q − x).
pub fn rational_roots(c: &[FieldElement]) -> Vec<FieldElement> {
    let Some(field) = c.first().map(|a| a.field()) else {
        return Vec::new();
    };
    let f = Poly::new(field, c.to_vec());
    match f.degree() {
        None | Some(0) => return Vec::new(),
        _ => {}
    }
    let x = Poly::x(field);
    let g = x.powmod(field.q(), &f).sub(&x).gcd(&f);
    g.split_roots()
}

fn split_into(f: &Poly, out: &mut Vec<FieldElement>) {
    let field = f.field;
    match f.degree() {
        None | Some(0) => return,
        Some(1) => {
            out.push(-f.c[0] / f.c[1]);
            return;
        }
        _ => {}
    }
    let e = (field.q() - 1) / 2;
    let one = Poly::constant(field.one());
    // Deterministic shifts keep lifts reproducible.
    for delta in field.elements().skip(1) {
        let h = Poly::x(field).add(&Poly::constant(delta)).powmod(e, f).sub(&one).gcd(f);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && Some(dh) < f.degree() {
            let (g, _) = f.divrem(&h);
            split_into(&h, out);
            split_into(&g, out);
            return;
        }
    }
    unreachable!("equal-degree splitting always finds a separating shift");
}

fn to_poly(fp: &'static FieldCtx, f: &[u64]) -> Poly {
    Poly::new(fp, f.iter().map(|&c| fp.elem(c as i64)).collect())
}

/// Rabin's test for a monic polynomial over F_p given by its coefficients.
pub(crate) fn is_irreducible(p: u64, f: &[u64]) -> Result<bool, FieldError> {
    let fp = prime_field_unbounded(p)?;
    let f = to_poly(fp, f);
    let m = f.degree().unwrap_or(0);
    if m == 0 {
        return Ok(false);
    }
    if m == 1 {
        return Ok(true);
    }
    if f.c[0].is_zero() {
        return Ok(false);
    }
    let x = Poly::x(fp);
    // frob[k] = x^{p^k} mod f
    let mut frob = vec![x.rem(&f)];
    for k in 1..=m {
        let next = frob[k - 1].powmod(p, &f);
        frob.push(next);
    }
    if frob[m] != x.rem(&f) {
        return Ok(false);
    }
    for r in nt::prime_factors(m as u64) {
        let k = m / r as usize;
        if frob[k].sub(&x).gcd(&f).degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lexicographically smallest monic irreducible of degree m, comparing
/// (c0, …, c_{m−1}) with c0 most significant.
pub(crate) fn smallest_irreducible(p: u64, m: u32) -> Result<Vec<u64>, FieldError> {
    let total = p.checked_pow(m).ok_or(FieldError::TooLarge { p, m, bound: super::ARITH_MAX_Q })?;
    // c0 = 0 makes x a factor, so start at c0 = 1.
    for n in total / p..total {
        let mut c = vec![0u64; m as usize + 1];
        let mut k = n;
        for i in (0..m as usize).rev() {
            c[i] = k % p;
            k /= p;
        }
        c[m as usize] = 1;
        if is_irreducible(p, &c)? {
            return Ok(c);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn prime_field_unbounded(p: u64) -> Result<&'static FieldCtx, FieldError> {
    // The prime subfield of a lifted extension may exceed the census bound
    // only if p itself does; keep that check, but do not recurse through
    // the default-bound helper for large p.
    if p <= super::DEFAULT_MAX_Q {
        prime_field(p)
    } else {
        super::field_ctx_bounded(p, 1, None, super::ARITH_MAX_Q)
    }
}
