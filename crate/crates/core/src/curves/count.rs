//! Point counting, traces, j-invariants and brute-force group structure.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Curve, CurveError, ExcLabel, Point};
use crate::ff::{FieldCtx, FieldElement, DEFAULT_MAX_Q};
use crate::nt;

/// Largest q for which linear-time counts run (a q-byte table is built).
pub const COUNT_MAX_Q: u64 = 1 << 26;

const PAR_THRESHOLD: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    /// Solve for y at every x using a table of square multiplicities.
    Exhaustive,
    /// Closed character sums in χ2.
    CharSum,
}

/// Z/n1 × Z/n2 with n1 | n2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupStructure {
    pub n1: u64,
    pub n2: u64,
}

impl GroupStructure {
    pub fn order(&self) -> u64 {
        self.n1 * self.n2
    }
}

/// Σ over all x ∈ F_q of `f(x)`, in parallel for large fields.
fn sum_over_field<F>(ctx: &'static FieldCtx, f: F) -> i64
where
    F: Fn(FieldElement) -> i64 + Sync,
{
    if ctx.q() >= PAR_THRESHOLD {
        (0..ctx.q()).into_par_iter().map(|v| f(ctx.from_code(v))).sum()
    } else {
        ctx.elements().map(f).sum()
    }
}

/// sq[v] = #{y : y² = v}, by squaring every element.
fn square_multiplicities(ctx: &'static FieldCtx) -> Vec<u8> {
    let mut t = vec![0u8; ctx.q() as usize];
    for y in ctx.elements() {
        t[(y * y).code() as usize] += 1;
    }
    t
}

fn chi(x: FieldElement) -> i64 {
    x.chi2() as i64
}

impl Curve {
    pub fn count_points(&self, method: CountMethod) -> Result<u64, CurveError> {
        let ctx = self.field();
        let q = ctx.q();
        if q > COUNT_MAX_Q {
            return Err(CurveError::TooLarge(q, COUNT_MAX_Q));
        }
        let n = match method {
            CountMethod::Exhaustive => self.count_exhaustive(),
            CountMethod::CharSum => self.count_charsum(),
        };
        Ok(u64::try_from(n).expect("point counts are positive"))
    }

    fn count_exhaustive(&self) -> i64 {
        let ctx = self.field();
        let sq = square_multiplicities(ctx);
        let m = |v: FieldElement| sq[v.code() as usize] as i64;
        match *self {
            Curve::Edwards { .. } | Curve::TwistedEdwards { .. } => {
                let (a, d) = self.edwards_params().unwrap();
                // y²(1 − d·x²) = 1 − a·x²
                let affine = sum_over_field(ctx, |x| {
                    let x2 = x * x;
                    let (num, den) = (1 - a * x2, 1 - d * x2);
                    match (den.is_zero(), num.is_zero()) {
                        (false, _) => m(num / den),
                        (true, true) => ctx.q() as i64,
                        (true, false) => 0,
                    }
                });
                affine + m(d / a) + m(d)
            }
            Curve::Huff { a, b } => {
                // a·x·y² − b(x²−1)·y − a·x = 0, quadratic in y unless x = 0
                let affine = sum_over_field(ctx, |x| {
                    if x.is_zero() {
                        return 1;
                    }
                    let bb = b * (x * x - 1);
                    m(bb * bb + 4 * a * a * x * x)
                });
                affine + 3
            }
            Curve::Montgomery { a, b } => {
                let binv = b.inv().unwrap();
                1 + sum_over_field(ctx, |x| m(((x + a) * x + 1) * x * binv))
            }
            _ => {
                let (a2, a4, a6, _) = self.weierstrass_form().unwrap();
                1 + sum_over_field(ctx, |x| m(((x + a2) * x + a4) * x + a6))
            }
        }
    }

    fn count_charsum(&self) -> i64 {
        let ctx = self.field();
        let q = ctx.q() as i64;
        match *self {
            Curve::Edwards { d } => {
                // q + 1 + χ(d) + Σ_{d·x² ≠ 1} χ((x²−1)/(d·x²−1))
                q + 1
                    + chi(d)
                    + sum_over_field(ctx, |x| {
                        let x2 = x * x;
                        chi((x2 - 1) * (d * x2 - 1))
                    })
            }
            Curve::TwistedEdwards { a, d } => {
                q + 1
                    + chi(a * d)
                    + sum_over_field(ctx, |x| {
                        let x2 = x * x;
                        chi((1 - a * x2) * (1 - d * x2))
                    })
            }
            Curve::Legendre { d } => q + 1 + sum_over_field(ctx, |x| chi(x * (x - 1) * (x - d))),
            Curve::Weierstrass { a2, a4, a6 } => q + 1 + sum_over_field(ctx, |x| chi(((x + a2) * x + a4) * x + a6)),
            Curve::Montgomery { a, b } => q + 1 + sum_over_field(ctx, |x| chi(b * ((x + a) * x + 1) * x)),
            Curve::Huff { a, b } => {
                let s = sum_over_field(ctx, |x| {
                    if x.is_zero() {
                        return 0;
                    }
                    let bb = b * (x * x - 1);
                    chi(bb * bb + 4 * a * a * x * x)
                });
                q + 3 + s
            }
        }
    }

    /// Trace of Frobenius q + 1 − #C(F_q); asserts the Hasse bound.
    pub fn trace(&self) -> Result<i64, CurveError> {
        let q = self.field().q() as i64;
        let a = q + 1 - self.count_points(CountMethod::CharSum)? as i64;
        assert!((a as i128) * (a as i128) <= 4 * q as i128, "Hasse bound violated: A = {a}, q = {q}");
        Ok(a)
    }

    pub fn j_invariant(&self) -> FieldElement {
        match *self {
            Curve::Legendre { d } => legendre_j(d),
            Curve::Edwards { d } => edwards_j(d),
            Curve::TwistedEdwards { a, d } => {
                let t = a * a + 14 * a * d + d * d;
                16 * t * t * t / (a * d * (a - d).pow(4))
            }
            Curve::Huff { a, b } => edwards_j(((a - b) / (a + b)).square()),
            _ => {
                let (a2, a4, a6, _) = self.weierstrass_form().unwrap();
                // Tate's quantities with a1 = a3 = 0
                let b2 = 4 * a2;
                let b4 = 2 * a4;
                let b6 = 4 * a6;
                let b8 = 4 * a2 * a6 - a4 * a4;
                let c4 = b2 * b2 - 24 * b4;
                let disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
                c4 * c4 * c4 / disc
            }
        }
    }

    /// Every point of the (desingularized) curve over its field.
    pub fn points(&self) -> Result<Vec<Point>, CurveError> {
        let ctx = self.field();
        if ctx.q() > DEFAULT_MAX_Q {
            return Err(CurveError::TooLarge(ctx.q(), DEFAULT_MAX_Q));
        }
        let mut out = Vec::new();
        match *self {
            Curve::Huff { .. } => return Err(CurveError::Unsupported { kind: self.kind(), op: "point enumeration" }),
            Curve::Edwards { .. } | Curve::TwistedEdwards { .. } => {
                let (a, d) = self.edwards_params().unwrap();
                for x in ctx.elements() {
                    let den = 1 - d * x * x;
                    if den.is_zero() {
                        continue;
                    }
                    push_roots(&mut out, x, (1 - a * x * x) / den);
                }
                for l in ExcLabel::ALL {
                    if self.exceptional_coordinate(l).is_some() {
                        out.push(Point::Exceptional(l));
                    }
                }
            }
            Curve::Montgomery { a, b } => {
                out.push(Point::Infinity);
                let binv = b.inv().unwrap();
                for x in ctx.elements() {
                    push_roots(&mut out, x, ((x + a) * x + 1) * x * binv);
                }
            }
            _ => {
                out.push(Point::Infinity);
                let (a2, a4, a6, _) = self.weierstrass_form().unwrap();
                for x in ctx.elements() {
                    push_roots(&mut out, x, ((x + a2) * x + a4) * x + a6);
                }
            }
        }
        Ok(out)
    }

    /// Z/n1 × Z/n2 from the exponent (lcm of point orders) of the full group.
    pub fn group_structure(&self) -> Result<GroupStructure, CurveError> {
        let pts = self.points()?;
        let n = pts.len() as u64;
        let exponent = if n >= PAR_THRESHOLD / 8 {
            pts.par_iter().map(|p| self.order_dividing(p, n)).try_reduce(|| 1, |a, b| Ok(lcm(a, b)))?
        } else {
            let mut e = 1;
            for p in &pts {
                e = lcm(e, self.order_dividing(p, n)?);
            }
            e
        };
        let gs = GroupStructure { n1: n / exponent, n2: exponent };
        assert_eq!(gs.n2 % gs.n1, 0, "n1 must divide n2");
        assert_eq!((self.field().q() - 1) % gs.n1, 0, "n1 must divide q − 1");
        Ok(gs)
    }
}

fn push_roots(out: &mut Vec<Point>, x: FieldElement, rhs: FieldElement) {
    if let Some(y) = rhs.sqrt() {
        out.push(Point::Affine(x, y));
        if !y.is_zero() {
            out.push(Point::Affine(x, -y));
        }
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / nt::gcd(a, b) * b
}

/// j_L(d) = 2⁸(d²−d+1)³ / (d²(d−1)²).
pub fn legendre_j(d: FieldElement) -> FieldElement {
    let t = d * d - d + 1;
    256 * t * t * t / (d * (d - 1)).square()
}

/// j_E(d) = 16(d²+14d+1)³ / (d(d−1)⁴).
pub fn edwards_j(d: FieldElement) -> FieldElement {
    let t = d * d + 14 * d + 1;
    16 * t * t * t / (d * (d - 1).pow(4))
}
