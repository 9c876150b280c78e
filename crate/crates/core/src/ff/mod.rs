//! Exact arithmetic in F_{p^m}, p odd.
//!
//! Contexts are interned and live for the whole process, so a [`FieldElement`]
//! is a `Copy` pair of a `&'static FieldCtx` and an integer code
//! `c0 + c1·p + … + c_{m−1}·p^{m−1}` of its polynomial representative.
//! Prime fields use direct modular arithmetic, small extensions use
//! exponent/logarithm tables, and the large extensions that only appear as
//! lifts fall back to polynomial arithmetic modulo the defining polynomial.

mod lift;
mod poly;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nt;

pub use lift::{embed, lift_to_extension, restrict, Embedding};
pub use poly::rational_roots;

/// Default census bound on q.
pub const DEFAULT_MAX_Q: u64 = 1 << 20;
/// Hard limit of the u64 element encoding; only lifted extensions go near it.
pub const ARITH_MAX_Q: u64 = 1 << 62;

const TABLE_MAX_Q: u64 = 1 << 20;
const CHI_TABLE_MAX_Q: u64 = 1 << 24;
const MAX_DEGREE: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is even")]
    EvenCharacteristic(u64),
    #[error("{0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be monic of degree {0}")]
    BadModulus(u32),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("field of size {p}^{m} exceeds the bound {bound}")]
    TooLarge { p: u64, m: u32, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} and {1})")]
    MixedFields(String, String),
    #[error("cannot parse {0:?} as an element of F_{1}")]
    Parse(String, u64),
    #[error("cannot parse field description {0:?}")]
    ParseField(String),
    #[error("extension degree must be 2 or 4, got {0}")]
    LiftDegree(u32),
    #[error("no embedding of {0} into {1} has been constructed")]
    NoEmbedding(String, String),
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field F_{p^m}. Obtain one through [`field_ctx`].
pub struct FieldCtx {
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    pw: Vec<u64>,
    id: usize,
    tables: Option<LogTables>,
    chi: OnceLock<Vec<i8>>,
    nonresidue: OnceLock<u64>,
}

type Registry = HashMap<(u64, Vec<u64>), &'static FieldCtx>;

fn registry() -> &'static Mutex<Registry> {
    static R: OnceLock<Mutex<Registry>> = OnceLock::new();
    R.get_or_init(|| Mutex::new(HashMap::new()))
}

fn default_moduli() -> &'static Mutex<HashMap<(u64, u32), Vec<u64>>> {
    static R: OnceLock<Mutex<HashMap<(u64, u32), Vec<u64>>>> = OnceLock::new();
    R.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Construct (or fetch) F_{p^m} under the default census bound.
pub fn field_ctx(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<&'static FieldCtx, FieldError> {
    field_ctx_bounded(p, m, modulus, DEFAULT_MAX_Q)
}

/// Shorthand for a prime field under the default bound.
pub fn prime_field(p: u64) -> Result<&'static FieldCtx, FieldError> {
    field_ctx(p, 1, None)
}

/// Construct (or fetch) F_{p^m}, rejecting q above `bound`.
///
/// Without an explicit modulus (m > 1) the lexicographically smallest monic
/// irreducible of degree m is used, coefficients compared low-degree-first.
pub fn field_ctx_bounded(p: u64, m: u32, modulus: Option<&[u64]>, bound: u64) -> Result<&'static FieldCtx, FieldError> {
    if p % 2 == 0 {
        return Err(FieldError::EvenCharacteristic(p));
    }
    if !nt::is_prime(p) {
        return Err(FieldError::CompositeCharacteristic(p));
    }
    if m == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let too_large = FieldError::TooLarge { p, m, bound: bound.min(ARITH_MAX_Q) };
    let q = p.checked_pow(m).ok_or(too_large.clone())?;
    if q > bound || q > ARITH_MAX_Q || m as usize >= MAX_DEGREE {
        return Err(too_large);
    }
    let modulus: Vec<u64> = if m == 1 {
        vec![0, 1]
    } else if let Some(f) = modulus {
        if f.len() != m as usize + 1 || f[m as usize] % p != 1 {
            return Err(FieldError::BadModulus(m));
        }
        let f: Vec<u64> = f.iter().map(|c| c % p).collect();
        if !poly::is_irreducible(p, &f)? {
            return Err(FieldError::ReducibleModulus(p));
        }
        f
    } else {
        let cached = default_moduli().lock().unwrap().get(&(p, m)).cloned();
        match cached {
            Some(f) => f,
            None => {
                let f = poly::smallest_irreducible(p, m)?;
                default_moduli().lock().unwrap().insert((p, m), f.clone());
                f
            }
        }
    };

    let key = (p, modulus.clone());
    if let Some(ctx) = registry().lock().unwrap().get(&key) {
        return Ok(ctx);
    }
    let ctx = build_ctx(p, m, q, modulus);
    let mut reg = registry().lock().unwrap();
    // Another thread may have won the race; keep the first one.
    let entry = reg.entry(key).or_insert(ctx);
    Ok(entry)
}

fn build_ctx(p: u64, m: u32, q: u64, modulus: Vec<u64>) -> &'static FieldCtx {
    static NEXT_ID: std::sync::atomic::AtomicUsize = std::sync::atomic::AtomicUsize::new(0);
    let mut pw = Vec::with_capacity(m as usize);
    let mut acc = 1u64;
    for _ in 0..m {
        pw.push(acc);
        acc = acc.wrapping_mul(p);
    }
    let mut ctx = FieldCtx {
        p,
        m,
        q,
        modulus,
        pw,
        id: NEXT_ID.fetch_add(1, std::sync::atomic::Ordering::Relaxed),
        tables: None,
        chi: OnceLock::new(),
        nonresidue: OnceLock::new(),
    };
    if m > 1 && q <= TABLE_MAX_Q {
        ctx.tables = Some(ctx.build_tables());
    }
    Box::leak(Box::new(ctx))
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// Full monic modulus, low-degree-first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&'static self) -> FieldElement {
        FieldElement { ctx: self, v: 0 }
    }
    pub fn one(&'static self) -> FieldElement {
        FieldElement { ctx: self, v: 1 }
    }
    /// The integer k reduced into the prime subfield.
    pub fn elem(&'static self, k: i64) -> FieldElement {
        FieldElement { ctx: self, v: k.rem_euclid(self.p as i64) as u64 }
    }
    /// Element from polynomial coefficients, low-degree-first; reduced mod p.
    pub fn from_coeffs(&'static self, coeffs: &[i64]) -> FieldElement {
        assert!(coeffs.len() <= self.m as usize, "too many coefficients for F_{}", self.q);
        let v = coeffs.iter().enumerate().map(|(i, c)| c.rem_euclid(self.p as i64) as u64 * self.pw[i]).sum();
        FieldElement { ctx: self, v }
    }
    /// Element with integer code `v` (must be below q).
    pub fn from_code(&'static self, v: u64) -> FieldElement {
        assert!(v < self.q);
        FieldElement { ctx: self, v }
    }
    /// The class of x in F_p[x]/(modulus); the generator of the extension.
    pub fn generator(&'static self) -> FieldElement {
        if self.m == 1 {
            self.zero()
        } else {
            FieldElement { ctx: self, v: self.p }
        }
    }
    /// All elements in code order (0, 1, …, q−1); prime fields: 0..p.
    pub fn elements(&'static self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(move |v| FieldElement { ctx: self, v })
    }
    pub fn contains(&self, x: &FieldElement) -> bool {
        std::ptr::eq(self, x.ctx)
    }
    pub fn same(&self, other: &FieldCtx) -> bool {
        std::ptr::eq(self, other)
    }

    /// Parse "k" (m = 1) or "c0,c1,…" with optional surrounding parentheses.
    /// Out-of-range or negative coefficients are reduced mod p.
    pub fn parse_element(&'static self, text: &str) -> Result<FieldElement, FieldError> {
        let err = || FieldError::Parse(text.to_string(), self.q);
        let mut t = text.trim();
        if t.starts_with('(') && t.ends_with(')') {
            t = &t[1..t.len() - 1];
        }
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.is_empty() || parts.len() > self.m as usize {
            return Err(err());
        }
        let coeffs = parts.iter().map(|s| s.parse::<i64>().map_err(|_| err())).collect::<Result<Vec<_>, _>>()?;
        Ok(self.from_coeffs(&coeffs))
    }

    /// Parse the "p^m:c0,…,cm" serialization (see `Display`).
    pub fn parse(text: &str) -> Result<&'static FieldCtx, FieldError> {
        Self::parse_bounded(text, DEFAULT_MAX_Q)
    }

    pub fn parse_bounded(text: &str, bound: u64) -> Result<&'static FieldCtx, FieldError> {
        let err = || FieldError::ParseField(text.to_string());
        let (pm, modulus) = text.trim().split_once(':').ok_or_else(err)?;
        let (p, m) = pm.split_once('^').ok_or_else(err)?;
        let p: u64 = p.parse().map_err(|_| err())?;
        let m: u32 = m.parse().map_err(|_| err())?;
        let coeffs =
            modulus.split(',').map(|c| c.trim().parse::<u64>().map_err(|_| err())).collect::<Result<Vec<_>, _>>()?;
        let ctx = field_ctx_bounded(p, m, if m > 1 { Some(&coeffs) } else { None }, bound)?;
        if ctx.modulus != coeffs {
            return Err(err());
        }
        Ok(ctx)
    }

    fn digits(&self, mut v: u64, out: &mut [u64; MAX_DEGREE]) {
        for d in out.iter_mut().take(self.m as usize) {
            *d = v % self.p;
            v /= self.p;
        }
    }

    fn undigits(&self, d: &[u64]) -> u64 {
        d.iter().take(self.m as usize).enumerate().map(|(i, c)| c * self.pw[i]).sum()
    }

    #[inline]
    fn add_codes(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (mut a, mut b, mut out) = (a, b, 0u64);
            for i in 0..self.m as usize {
                let s = (a % self.p + b % self.p) % self.p;
                out += s * self.pw[i];
                a /= self.p;
                b /= self.p;
            }
            out
        }
    }

    #[inline]
    fn neg_code(&self, a: u64) -> u64 {
        if self.m == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let (mut a, mut out) = (a, 0u64);
            for i in 0..self.m as usize {
                let c = a % self.p;
                out += ((self.p - c) % self.p) * self.pw[i];
                a /= self.p;
            }
            out
        }
    }

    #[inline]
    fn mul_codes(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let e = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % n;
            return t.exp[e as usize] as u64;
        }
        self.poly_mul_codes(a, b)
    }

    fn poly_mul_codes(&self, a: u64, b: u64) -> u64 {
        let m = self.m as usize;
        let p = self.p as u128;
        let mut da = [0u64; MAX_DEGREE];
        let mut db = [0u64; MAX_DEGREE];
        self.digits(a, &mut da);
        self.digits(b, &mut db);
        let mut prod = [0u128; 2 * MAX_DEGREE];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] as u128 * db[j] as u128) % p;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..m {
                let t = c * self.modulus[j] as u128 % p;
                prod[i - m + j] = (prod[i - m + j] + p - t) % p;
            }
        }
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..m {
            out[i] = prod[i] as u64;
        }
        self.undigits(&out)
    }

    fn pow_code(&self, a: u64, mut e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let k = (t.log[a as usize] as u128 * (e % n) as u128 % n as u128) as usize;
            return t.exp[k] as u64;
        }
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_codes(acc, base);
            }
            base = self.mul_codes(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv_code(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        if self.m == 1 {
            // extended Euclid on (a, p)
            let (mut r0, mut r1) = (self.p as i128, a as i128);
            let (mut t0, mut t1) = (0i128, 1i128);
            while r1 != 0 {
                let k = r0 / r1;
                (r0, r1) = (r1, r0 - k * r1);
                (t0, t1) = (t1, t0 - k * t1);
            }
            return t0.rem_euclid(self.p as i128) as u64;
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let k = (n - t.log[a as usize] as u64) % n;
            return t.exp[k as usize] as u64;
        }
        self.pow_code(a, self.q - 2)
    }

    fn build_tables(&self) -> LogTables {
        let n = self.q - 1;
        let factors = nt::prime_factors(n);
        let pow_poly = |a: u64, mut e: u64| {
            let (mut base, mut acc) = (a, 1u64);
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.poly_mul_codes(acc, base);
                }
                base = self.poly_mul_codes(base, base);
                e >>= 1;
            }
            acc
        };
        let g = (2..self.q)
            .find(|&g| factors.iter().all(|r| pow_poly(g, n / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u64;
        for i in 0..n {
            exp.push(x as u32);
            log[x as usize] = i as u32;
            x = self.poly_mul_codes(x, g);
        }
        LogTables { exp, log }
    }

    fn chi_table(&self) -> Option<&Vec<i8>> {
        if self.m != 1 || self.q > CHI_TABLE_MAX_Q {
            return None;
        }
        Some(self.chi.get_or_init(|| {
            let p = self.p;
            let mut t = vec![-1i8; p as usize];
            t[0] = 0;
            for x in 1..=(p / 2) {
                t[(x * x % p) as usize] = 1;
            }
            t
        }))
    }

    fn chi_code(&self, a: u64) -> i8 {
        if a == 0 {
            return 0;
        }
        if let Some(t) = self.chi_table() {
            return t[a as usize];
        }
        if let Some(t) = &self.tables {
            return if t.log[a as usize] % 2 == 0 { 1 } else { -1 };
        }
        self.chi_by_power(a)
    }

    fn chi_by_power(&self, a: u64) -> i8 {
        match self.pow_code(a, (self.q - 1) / 2) {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    fn nonresidue_code(&self) -> u64 {
        *self
            .nonresidue
            .get_or_init(|| (2..self.q).find(|&v| self.chi_code(v) == -1).expect("odd field has nonsquares"))
    }

    fn sqrt_code(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        if self.chi_code(a) != 1 {
            return None;
        }
        let r = if let Some(t) = &self.tables {
            t.exp[(t.log[a as usize] / 2) as usize] as u64
        } else {
            self.tonelli_shanks(a)
        };
        debug_assert_eq!(self.mul_codes(r, r), a);
        let s = self.neg_code(r);
        Some(if self.cmp_codes(r, s) == Ordering::Greater { s } else { r })
    }

    fn tonelli_shanks(&self, a: u64) -> u64 {
        let n = self.q - 1;
        let s = n.trailing_zeros();
        let t = n >> s;
        let z = self.nonresidue_code();
        let mut mm = s;
        let mut c = self.pow_code(z, t);
        let mut x = self.pow_code(a, (t + 1) / 2);
        let mut b = self.pow_code(a, t);
        while b != 1 {
            let mut i = 0;
            let mut bb = b;
            while bb != 1 {
                bb = self.mul_codes(bb, bb);
                i += 1;
            }
            let mut f = c;
            for _ in 0..(mm - i - 1) {
                f = self.mul_codes(f, f);
            }
            x = self.mul_codes(x, f);
            c = self.mul_codes(f, f);
            b = self.mul_codes(b, c);
            mm = i;
        }
        x
    }

    /// Canonical order: coefficient tuples compared low-degree-first.
    fn cmp_codes(&self, a: u64, b: u64) -> Ordering {
        if self.m == 1 {
            return a.cmp(&b);
        }
        let (mut a, mut b) = (a, b);
        for _ in 0..self.m {
            let o = (a % self.p).cmp(&(b % self.p));
            if o != Ordering::Equal {
                return o;
            }
            a /= self.p;
            b /= self.p;
        }
        Ordering::Equal
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.modulus.iter().map(u64::to_string).collect();
        write!(f, "{}^{}:{}", self.p, self.m, coeffs.join(","))
    }
}

/// Contexts are interned, so identity is equality.
impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
    }
}
impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F[{self}]")
    }
}

/// Classification of x by powers: {0}, fourth powers, squares that are
/// not fourth powers, nonsquares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerClass {
    Zero,
    FourthPower,
    SquareNotFourth,
    Nonsquare,
}

/// An element of some interned [`FieldCtx`].
#[derive(Clone, Copy)]
pub struct FieldElement {
    ctx: &'static FieldCtx,
    v: u64,
}

impl FieldElement {
    pub fn field(&self) -> &'static FieldCtx {
        self.ctx
    }
    /// Integer code Σ c_i p^i.
    pub fn code(&self) -> u64 {
        self.v
    }
    pub fn coeffs(&self) -> Vec<u64> {
        let mut d = [0u64; MAX_DEGREE];
        self.ctx.digits(self.v, &mut d);
        d[..self.ctx.m as usize].to_vec()
    }
    pub fn is_zero(&self) -> bool {
        self.v == 0
    }
    pub fn is_one(&self) -> bool {
        self.v == 1
    }
    /// The integer value, if the element lies in the prime subfield.
    pub fn as_prime_int(&self) -> Option<u64> {
        (self.v < self.ctx.p).then_some(self.v)
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if std::ptr::eq(self.ctx, other.ctx) {
            Ok(())
        } else {
            Err(FieldError::MixedFields(self.ctx.to_string(), other.ctx.to_string()))
        }
    }

    pub fn checked_add(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&rhs)?;
        Ok(FieldElement { ctx: self.ctx, v: self.ctx.add_codes(self.v, rhs.v) })
    }
    pub fn checked_sub(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&rhs)?;
        Ok(FieldElement { ctx: self.ctx, v: self.ctx.add_codes(self.v, self.ctx.neg_code(rhs.v)) })
    }
    pub fn checked_mul(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&rhs)?;
        Ok(FieldElement { ctx: self.ctx, v: self.ctx.mul_codes(self.v, rhs.v) })
    }
    pub fn checked_div(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&rhs)?;
        Ok(self * rhs.inv()?)
    }
    pub fn inv(self) -> Result<FieldElement, FieldError> {
        if self.v == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FieldElement { ctx: self.ctx, v: self.ctx.inv_code(self.v) })
    }
    pub fn pow(self, e: u64) -> FieldElement {
        FieldElement { ctx: self.ctx, v: self.ctx.pow_code(self.v, e) }
    }
    /// Integer power; negative exponents invert first.
    pub fn pow_i(self, e: i64) -> Result<FieldElement, FieldError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }
    pub fn square(self) -> FieldElement {
        self * self
    }

    /// Quadratic character in {−1, 0, 1}.
    pub fn chi2(&self) -> i8 {
        self.ctx.chi_code(self.v)
    }
    /// Quadratic character by Euler's criterion, bypassing any table.
    pub fn chi2_by_power(&self) -> i8 {
        if self.v == 0 {
            0
        } else {
            self.ctx.chi_by_power(self.v)
        }
    }
    pub fn is_square(&self) -> bool {
        self.chi2() >= 0
    }
    /// The canonical square root: the smaller of ±r in canonical order.
    pub fn sqrt(&self) -> Option<FieldElement> {
        self.ctx.sqrt_code(self.v).map(|v| FieldElement { ctx: self.ctx, v })
    }
    /// x^{3/2}, computed as sqrt(x)·x.
    pub fn pow_three_halves(&self) -> Option<FieldElement> {
        self.sqrt().map(|r| r * *self)
    }
    pub fn fourth_power_class(&self) -> PowerClass {
        if self.v == 0 {
            return PowerClass::Zero;
        }
        let q = self.ctx.q;
        let g = nt::gcd(4, q - 1);
        if self.pow((q - 1) / g).is_one() {
            PowerClass::FourthPower
        } else if self.chi2() == 1 {
            PowerClass::SquareNotFourth
        } else {
            PowerClass::Nonsquare
        }
    }

    /// Serialization inside composite strings: m > 1 elements are wrapped in
    /// parentheses so their commas do not clash with the enclosing syntax.
    pub fn atom(&self) -> String {
        if self.ctx.m == 1 {
            self.v.to_string()
        } else {
            format!("({self})")
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.ctx, other.ctx) && self.v == other.v
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.id.hash(state);
        self.v.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order within a field (low-degree-first lexicographic on
/// coefficients); elements of different fields order by field identity.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        if !std::ptr::eq(self.ctx, other.ctx) {
            return self.ctx.id.cmp(&other.ctx.id);
        }
        self.ctx.cmp_codes(self.v, other.v)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.m == 1 {
            write!(f, "{}", self.v)
        } else {
            let c: Vec<String> = self.coeffs().iter().map(u64::to_string).collect();
            write!(f, "{}", c.join(","))
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@F{}", self.atom(), self.ctx.q)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            #[track_caller]
            fn $method(self, rhs: FieldElement) -> FieldElement {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<i64> for FieldElement {
            type Output = FieldElement;
            #[track_caller]
            fn $method(self, rhs: i64) -> FieldElement {
                self.$method(self.ctx.elem(rhs))
            }
        }
        impl $tr<FieldElement> for i64 {
            type Output = FieldElement;
            #[track_caller]
            fn $method(self, rhs: FieldElement) -> FieldElement {
                rhs.ctx.elem(self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { ctx: self.ctx, v: self.ctx.neg_code(self.v) }
    }
}

impl std::iter::Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(mut iter: I) -> FieldElement {
        let first = iter.next().expect("sum of an empty iterator has no field");
        iter.fold(first, |a, b| a + b)
    }
}
