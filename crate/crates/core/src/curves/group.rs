//! Group laws. Edwards curves use the unified affine law; when one of its
//! denominators vanishes (only possible when d or d/a is a square) or an
//! input is an exceptional point, the sum is computed on
//! W_{a,d}: y² = x³ + 2(a+d)x² + (a−d)²x through the birational map τ,
//! which is everywhere defined on the desingularized model.

use super::{Curve, CurveError, ExcLabel, Point};
use crate::ff::FieldElement;

/// Chord-and-tangent addition on y² = x³ + a2·x² + a4·x + a6.
pub(crate) fn weierstrass_add(a2: FieldElement, a4: FieldElement, p: Point, q: Point) -> Point {
    let (x1, y1, x2, y2) = match (p, q) {
        (Point::Infinity, r) | (r, Point::Infinity) => return r,
        (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        _ => unreachable!("exceptional points have no Weierstrass meaning"),
    };
    let lambda = if x1 == x2 {
        if (y1 + y2).is_zero() {
            return Point::Infinity;
        }
        (3 * x1 * x1 + 2 * a2 * x1 + a4) / (2 * y1)
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let x3 = lambda * lambda - a2 - x1 - x2;
    let y3 = lambda * (x1 - x3) - y1;
    Point::Affine(x3, y3)
}

/// The curve W_{a,d}: y² = x³ + 2(a+d)x² + (a−d)²x that τ maps E_{a,d}
/// onto, as (a2, a4). For a = 1 this is W_d.
pub(crate) fn w_coeffs(a: FieldElement, d: FieldElement) -> (FieldElement, FieldElement) {
    let amd = a - d;
    (2 * (a + d), amd * amd)
}

/// τ: E_{a,d} → W_{a,d}, (x, y) ↦ ((a−d)(1+y)/(1−y), 2(a−d)(1+y)/(x(1−y))),
/// extended to the desingularized model. Errors only for a label whose
/// radical is not in the field.
pub(crate) fn edwards_to_w(a: FieldElement, d: FieldElement, p: Point) -> Result<Point, CurveError> {
    let f = d.field();
    match p {
        Point::Infinity => Err(CurveError::NotOnCurve(p.to_string())),
        Point::Affine(x, y) if x.is_zero() => {
            if y.is_one() {
                Ok(Point::Infinity)
            } else {
                Ok(Point::Affine(f.zero(), f.zero()))
            }
        }
        Point::Affine(x, y) => {
            let u = (a - d) * (1 + y) / (1 - y);
            Ok(Point::Affine(u, 2 * u / x))
        }
        Point::Exceptional(l) => {
            let missing = || CurveError::NotOnCurve(p.to_string());
            Ok(match l {
                ExcLabel::XPlus | ExcLabel::XMinus => {
                    let r = (d / a).sqrt().ok_or_else(missing)?;
                    let r = if l == ExcLabel::XPlus { r } else { -r };
                    Point::Affine(-a * (1 + r) * (1 + r), f.zero())
                }
                ExcLabel::YPlus | ExcLabel::YMinus => {
                    let s = d.sqrt().ok_or_else(missing)?;
                    let s = if l == ExcLabel::YPlus { s } else { -s };
                    Point::Affine(d - a, 2 * s * (d - a))
                }
            })
        }
    }
}

/// τ⁻¹: W_{a,d} → E_{a,d}, inverse of [`edwards_to_w`].
pub(crate) fn w_to_edwards(a: FieldElement, d: FieldElement, p: Point) -> Point {
    let f = d.field();
    let (x, y) = match p {
        Point::Infinity => return Point::Affine(f.zero(), f.one()),
        Point::Affine(x, y) => (x, y),
        Point::Exceptional(_) => unreachable!("W has no labelled points"),
    };
    if y.is_zero() {
        if x.is_zero() {
            return Point::Affine(f.zero(), -f.one());
        }
        // x = −a(1 ± r)² with r = √(d/a), so the root exists
        let r = (d / a).sqrt().expect("2-torsion abscissa implies d/a is a square");
        return Point::Exceptional(if x == -a * (1 + r) * (1 + r) { ExcLabel::XPlus } else { ExcLabel::XMinus });
    }
    if x == d - a {
        let s = d.sqrt().expect("these points imply d is a square");
        return Point::Exceptional(if y == 2 * s * (d - a) { ExcLabel::YPlus } else { ExcLabel::YMinus });
    }
    Point::Affine(2 * x / y, (x - (a - d)) / (x + (a - d)))
}

impl Curve {
    pub fn neg(&self, p: &Point) -> Point {
        match (*self, *p) {
            (_, Point::Infinity) => Point::Infinity,
            (Curve::Edwards { .. } | Curve::TwistedEdwards { .. }, Point::Affine(x, y)) => Point::Affine(-x, y),
            (_, Point::Affine(x, y)) => Point::Affine(x, -y),
            (_, Point::Exceptional(l)) => Point::Exceptional(match l {
                ExcLabel::YPlus => ExcLabel::YMinus,
                ExcLabel::YMinus => ExcLabel::YPlus,
                x => x,
            }),
        }
    }

    /// The group sum. Inputs are assumed to lie on the curve.
    pub fn add(&self, p: &Point, q: &Point) -> Result<Point, CurveError> {
        match *self {
            Curve::Edwards { .. } | Curve::TwistedEdwards { .. } => {
                let (a, d) = self.edwards_params().unwrap();
                if let Some(r) = edwards_affine_add(a, d, p, q) {
                    return Ok(r);
                }
                let (a2, a4) = w_coeffs(a, d);
                let s = weierstrass_add(a2, a4, edwards_to_w(a, d, *p)?, edwards_to_w(a, d, *q)?);
                Ok(w_to_edwards(a, d, s))
            }
            Curve::Huff { .. } => Err(CurveError::Unsupported { kind: self.kind(), op: "addition" }),
            _ => {
                let (a2, a4, _, b) = self.weierstrass_form().expect("cubic model");
                let to = |p: &Point| match *p {
                    Point::Affine(x, y) => Ok(Point::Affine(x / b, y / b)),
                    Point::Infinity => Ok(Point::Infinity),
                    Point::Exceptional(_) => Err(CurveError::NotOnCurve(p.to_string())),
                };
                Ok(match weierstrass_add(a2, a4, to(p)?, to(q)?) {
                    Point::Affine(x, y) => Point::Affine(x * b, y * b),
                    r => r,
                })
            }
        }
    }

    /// The affine Edwards law, when its denominators are nonzero.
    pub fn edwards_law_direct(&self, p: &Point, q: &Point) -> Option<Point> {
        let (a, d) = self.edwards_params()?;
        edwards_affine_add(a, d, p, q)
    }

    pub fn double(&self, p: &Point) -> Result<Point, CurveError> {
        self.add(p, p)
    }

    /// [k]P by double-and-add; negative k negates first.
    pub fn scalar_mul(&self, k: i64, p: &Point) -> Result<Point, CurveError> {
        let mut base = if k < 0 { self.neg(p) } else { *p };
        let mut k = k.unsigned_abs();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Order of P given a multiple `n` of it (typically the group order).
    pub fn order_dividing(&self, p: &Point, n: u64) -> Result<u64, CurveError> {
        let id = self.identity();
        let mut ord = n;
        for r in crate::nt::prime_factors(n) {
            while ord % r == 0 && self.scalar_mul((ord / r) as i64, p)? == id {
                ord /= r;
            }
        }
        debug_assert_eq!(self.scalar_mul(ord as i64, p)?, id);
        Ok(ord)
    }
}

fn edwards_affine_add(a: FieldElement, d: FieldElement, p: &Point, q: &Point) -> Option<Point> {
    let (Point::Affine(x1, y1), Point::Affine(x2, y2)) = (*p, *q) else { return None };
    let t = d * x1 * x2 * y1 * y2;
    let (den_x, den_y) = (1 + t, 1 - t);
    if den_x.is_zero() || den_y.is_zero() {
        return None;
    }
    Some(Point::Affine((x1 * y2 + y1 * x2) / den_x, (y1 * y2 - a * x1 * x2) / den_y))
}
