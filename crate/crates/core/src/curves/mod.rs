//! Curve models, points, group laws, point counting and j-invariants.
//!
//! Every model lives over one interned [`FieldCtx`]; its parameters are
//! elements of that field, so the field is always recoverable from the curve.
//!
//! Projective bookkeeping:
//! - Edwards and twisted Edwards curves are counted on their desingularized
//!   models. The two singular points at infinity resolve into the labelled
//!   points `X±` (x = ∞, y·√(d/a) = ±1) and `Y±` (y = ∞, x·√d = ±1), which are
//!   rational exactly when the relevant radical is.
//! - Weierstrass, Legendre and Montgomery curves add the single point at
//!   infinity.
//! - Huff curves `ax(y²−1) = by(x²−1)` add the three points (1:0:0),
//!   (0:1:0), (b:a:0) at infinity, all rational.

mod count;
mod group;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff::{embed, field_ctx_bounded, restrict, FieldCtx, FieldElement, FieldError, ARITH_MAX_Q};

pub use count::{edwards_j, legendre_j, CountMethod, GroupStructure, COUNT_MAX_Q};
pub(crate) use group::{edwards_to_w, w_coeffs, w_to_edwards};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("Edwards curve needs d ≠ 0")]
    EdwardsZero,
    #[error("Edwards curve needs d ≠ 1")]
    EdwardsOne,
    #[error("twisted Edwards curve needs a ≠ 0")]
    TwistedAZero,
    #[error("twisted Edwards curve needs d ≠ 0")]
    TwistedDZero,
    #[error("twisted Edwards curve needs a ≠ d")]
    TwistedAEqualsD,
    #[error("Legendre curve needs d ≠ 0 (repeated root at 0)")]
    LegendreZero,
    #[error("Legendre curve needs d ≠ 1 (repeated root at 1)")]
    LegendreRepeatedRoot,
    #[error("Weierstrass cubic has a repeated root (discriminant 0)")]
    WeierstrassSingular,
    #[error("Montgomery curve needs B ≠ 0")]
    MontgomeryBZero,
    #[error("Montgomery curve needs A² ≠ 4")]
    MontgomerySingular,
    #[error("Huff curve needs a ≠ 0 and b ≠ 0")]
    HuffZero,
    #[error("Huff curve needs a² ≠ b²")]
    HuffSingular,
    #[error("wrong number of parameters for {0}: expected {1}")]
    Arity(CurveKind, usize),
    #[error("{op} is not supported on {kind} curves")]
    Unsupported { kind: CurveKind, op: &'static str },
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("q = {0} exceeds the exhaustive bound {1}")]
    TooLarge(u64, u64),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Edwards,
    TwistedEdwards,
    Legendre,
    Weierstrass,
    Montgomery,
    Huff,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Edwards => "edwards",
            CurveKind::TwistedEdwards => "twisted-edwards",
            CurveKind::Legendre => "legendre",
            CurveKind::Weierstrass => "weierstrass",
            CurveKind::Montgomery => "montgomery",
            CurveKind::Huff => "huff",
        }
    }
    pub fn arity(self) -> usize {
        match self {
            CurveKind::Edwards | CurveKind::Legendre => 1,
            CurveKind::Weierstrass => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveKind {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self, CurveError> {
        Ok(match s {
            "edwards" => CurveKind::Edwards,
            "twisted-edwards" => CurveKind::TwistedEdwards,
            "legendre" => CurveKind::Legendre,
            "weierstrass" => CurveKind::Weierstrass,
            "montgomery" => CurveKind::Montgomery,
            "huff" => CurveKind::Huff,
            _ => return Err(CurveError::Parse(s.to_string())),
        })
    }
}

/// A validated curve. Construct through the named constructors or
/// [`make_curve`]; the variants are public for matching only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curve {
    /// x² + y² = 1 + d·x²y²
    Edwards { d: FieldElement },
    /// a·x² + y² = 1 + d·x²y²
    TwistedEdwards { a: FieldElement, d: FieldElement },
    /// y² = x(x−1)(x−d)
    Legendre { d: FieldElement },
    /// y² = x³ + a2·x² + a4·x + a6
    Weierstrass { a2: FieldElement, a4: FieldElement, a6: FieldElement },
    /// B·y² = x³ + A·x² + x
    Montgomery { a: FieldElement, b: FieldElement },
    /// a·x(y²−1) = b·y(x²−1)
    Huff { a: FieldElement, b: FieldElement },
}

/// The four desingularized points at infinity of an Edwards model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExcLabel {
    XPlus,
    XMinus,
    YPlus,
    YMinus,
}

impl ExcLabel {
    pub const ALL: [ExcLabel; 4] = [ExcLabel::XPlus, ExcLabel::XMinus, ExcLabel::YPlus, ExcLabel::YMinus];
    /// X± lie at x = ∞, Y± at y = ∞.
    pub fn is_x(self) -> bool {
        matches!(self, ExcLabel::XPlus | ExcLabel::XMinus)
    }
    pub fn as_str(self) -> &'static str {
        match self {
            ExcLabel::XPlus => "X+",
            ExcLabel::XMinus => "X-",
            ExcLabel::YPlus => "Y+",
            ExcLabel::YMinus => "Y-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Infinity,
    Affine(FieldElement, FieldElement),
    Exceptional(ExcLabel),
}

impl Point {
    pub fn affine(x: FieldElement, y: FieldElement) -> Point {
        Point::Affine(x, y)
    }
    pub fn xy(&self) -> Option<(FieldElement, FieldElement)> {
        match *self {
            Point::Affine(x, y) => Some((x, y)),
            _ => None,
        }
    }
    /// The field of the coordinates (None for coordinate-free points).
    pub fn field(&self) -> Option<&'static FieldCtx> {
        self.xy().map(|(x, _)| x.field())
    }
    /// Image under the embedding into `dst`.
    pub fn lift(&self, dst: &'static FieldCtx) -> Result<Point, FieldError> {
        Ok(match *self {
            Point::Affine(x, y) => Point::Affine(embed(x, dst)?, embed(y, dst)?),
            p => p,
        })
    }

    /// Parse "x,y", "(x,y)", "inf" or "exc:LABEL" over `ctx`. Coordinates
    /// follow [`FieldCtx::parse_element`]; membership is not checked.
    pub fn parse(text: &str, ctx: &'static FieldCtx) -> Result<Point, CurveError> {
        let err = || CurveError::Parse(text.to_string());
        let t = text.trim();
        if t.eq_ignore_ascii_case("inf") {
            return Ok(Point::Infinity);
        }
        if let Some(label) = t.strip_prefix("exc:") {
            return ExcLabel::ALL
                .into_iter()
                .find(|l| l.as_str() == label.trim())
                .map(Point::Exceptional)
                .ok_or_else(err);
        }
        let inner = strip_parens(t);
        let parts = split_top_level(inner);
        let coords: Vec<&str> = if parts.len() == 2 {
            parts
        } else if ctx.m() > 1 && parts.len() == 2 * ctx.m() as usize && !inner.contains('(') {
            // bare coefficient lists: split in half
            let all: Vec<&str> = inner.split(',').collect();
            let mid = ctx.m() as usize;
            return Ok(Point::Affine(
                ctx.parse_element(&all[..mid].join(","))?,
                ctx.parse_element(&all[mid..].join(","))?,
            ));
        } else {
            return Err(err());
        };
        Ok(Point::Affine(ctx.parse_element(coords[0])?, ctx.parse_element(coords[1])?))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => f.write_str("inf"),
            Point::Affine(x, y) => write!(f, "({},{})", x.atom(), y.atom()),
            Point::Exceptional(l) => write!(f, "exc:{}", l.as_str()),
        }
    }
}

fn strip_parens(t: &str) -> &str {
    let t = t.trim();
    if t.starts_with('(') && t.ends_with(')') {
        // only strip if the outer pair matches
        let mut depth = 0i32;
        for (i, c) in t.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i != t.len() - 1 {
                        return t;
                    }
                }
                _ => {}
            }
        }
        &t[1..t.len() - 1]
    } else {
        t
    }
}

fn split_top_level(t: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(t[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(t[start..].trim());
    out
}

fn same_field(xs: &[FieldElement]) -> Result<&'static FieldCtx, CurveError> {
    let f = xs[0].field();
    for x in &xs[1..] {
        if !x.field().same(f) {
            return Err(FieldError::MixedFields(f.to_string(), x.field().to_string()).into());
        }
    }
    Ok(f)
}

/// Build a curve of the given kind from its parameters in order
/// (d | a,d | d | a2,a4,a6 | A,B | a,b).
pub fn make_curve(kind: CurveKind, params: &[FieldElement]) -> Result<Curve, CurveError> {
    if params.len() != kind.arity() {
        return Err(CurveError::Arity(kind, kind.arity()));
    }
    same_field(params)?;
    let p = params;
    match kind {
        CurveKind::Edwards => Curve::edwards(p[0]),
        CurveKind::TwistedEdwards => Curve::twisted_edwards(p[0], p[1]),
        CurveKind::Legendre => Curve::legendre(p[0]),
        CurveKind::Weierstrass => Curve::weierstrass(p[0], p[1], p[2]),
        CurveKind::Montgomery => Curve::montgomery(p[0], p[1]),
        CurveKind::Huff => Curve::huff(p[0], p[1]),
    }
}

/// Discriminant of the monic cubic x³ + a2·x² + a4·x + a6.
pub fn cubic_discriminant(a2: FieldElement, a4: FieldElement, a6: FieldElement) -> FieldElement {
    a2 * a2 * a4 * a4 - 4 * a4 * a4 * a4 - 4 * a2 * a2 * a2 * a6 + 18 * a2 * a4 * a6 - 27 * a6 * a6
}

impl Curve {
    pub fn edwards(d: FieldElement) -> Result<Curve, CurveError> {
        if d.is_zero() {
            return Err(CurveError::EdwardsZero);
        }
        if d.is_one() {
            return Err(CurveError::EdwardsOne);
        }
        Ok(Curve::Edwards { d })
    }
    pub fn twisted_edwards(a: FieldElement, d: FieldElement) -> Result<Curve, CurveError> {
        same_field(&[a, d])?;
        if a.is_zero() {
            return Err(CurveError::TwistedAZero);
        }
        if d.is_zero() {
            return Err(CurveError::TwistedDZero);
        }
        if a == d {
            return Err(CurveError::TwistedAEqualsD);
        }
        Ok(Curve::TwistedEdwards { a, d })
    }
    pub fn legendre(d: FieldElement) -> Result<Curve, CurveError> {
        if d.is_zero() {
            return Err(CurveError::LegendreZero);
        }
        if d.is_one() {
            return Err(CurveError::LegendreRepeatedRoot);
        }
        Ok(Curve::Legendre { d })
    }
    pub fn weierstrass(a2: FieldElement, a4: FieldElement, a6: FieldElement) -> Result<Curve, CurveError> {
        same_field(&[a2, a4, a6])?;
        if cubic_discriminant(a2, a4, a6).is_zero() {
            return Err(CurveError::WeierstrassSingular);
        }
        Ok(Curve::Weierstrass { a2, a4, a6 })
    }
    pub fn montgomery(a: FieldElement, b: FieldElement) -> Result<Curve, CurveError> {
        same_field(&[a, b])?;
        if b.is_zero() {
            return Err(CurveError::MontgomeryBZero);
        }
        if (a * a - 4).is_zero() {
            return Err(CurveError::MontgomerySingular);
        }
        Ok(Curve::Montgomery { a, b })
    }
    pub fn huff(a: FieldElement, b: FieldElement) -> Result<Curve, CurveError> {
        same_field(&[a, b])?;
        if a.is_zero() || b.is_zero() {
            return Err(CurveError::HuffZero);
        }
        if a * a == b * b {
            return Err(CurveError::HuffSingular);
        }
        Ok(Curve::Huff { a, b })
    }

    pub fn kind(&self) -> CurveKind {
        match self {
            Curve::Edwards { .. } => CurveKind::Edwards,
            Curve::TwistedEdwards { .. } => CurveKind::TwistedEdwards,
            Curve::Legendre { .. } => CurveKind::Legendre,
            Curve::Weierstrass { .. } => CurveKind::Weierstrass,
            Curve::Montgomery { .. } => CurveKind::Montgomery,
            Curve::Huff { .. } => CurveKind::Huff,
        }
    }

    pub fn params(&self) -> Vec<FieldElement> {
        match *self {
            Curve::Edwards { d } | Curve::Legendre { d } => vec![d],
            Curve::TwistedEdwards { a, d } => vec![a, d],
            Curve::Weierstrass { a2, a4, a6 } => vec![a2, a4, a6],
            Curve::Montgomery { a, b } | Curve::Huff { a, b } => vec![a, b],
        }
    }

    pub fn field(&self) -> &'static FieldCtx {
        self.params()[0].field()
    }

    /// The same curve over a field into which this one embeds.
    pub fn lift(&self, dst: &'static FieldCtx) -> Result<Curve, CurveError> {
        let params = self.params().into_iter().map(|x| embed(x, dst)).collect::<Result<Vec<_>, _>>()?;
        make_curve(self.kind(), &params)
    }

    /// The curve over `src` whose lift to this curve's field is `self`.
    pub fn restrict(&self, src: &'static FieldCtx) -> Option<Curve> {
        let params = self.params().into_iter().map(|x| restrict(x, src)).collect::<Option<Vec<_>>>()?;
        make_curve(self.kind(), &params).ok()
    }

    /// Image of a point of this curve in the lift to `dst`. Exceptional
    /// labels are re-identified by coordinate, since a canonical root need
    /// not stay canonical after embedding.
    pub fn lift_point(&self, p: &Point, dst: &'static FieldCtx) -> Result<Point, CurveError> {
        match *p {
            Point::Exceptional(l) => {
                let c = self.exceptional_coordinate(l).ok_or_else(|| CurveError::NotOnCurve(p.to_string()))?;
                let big = self.lift(dst)?;
                big.label_with_coordinate(l.is_x(), embed(c, dst)?).ok_or_else(|| CurveError::NotOnCurve(p.to_string()))
            }
            _ => Ok(p.lift(dst)?),
        }
    }

    /// Inverse of [`Curve::lift_point`]: a point of this curve's lift to
    /// `from`, pulled back when it is defined over this curve's field.
    pub fn descend_point(&self, p: &Point, from: &'static FieldCtx) -> Option<Point> {
        let src = self.field();
        match *p {
            Point::Infinity => Some(Point::Infinity),
            Point::Affine(x, y) => Some(Point::Affine(restrict(x, src)?, restrict(y, src)?)),
            Point::Exceptional(l) => {
                let c = self.lift(from).ok()?.exceptional_coordinate(l)?;
                self.label_with_coordinate(l.is_x(), restrict(c, src)?)
            }
        }
    }

    /// The exceptional point of the X family (or Y family) whose finite
    /// coordinate is `c`.
    pub(crate) fn label_with_coordinate(&self, x_family: bool, c: FieldElement) -> Option<Point> {
        ExcLabel::ALL
            .into_iter()
            .filter(|l| l.is_x() == x_family)
            .find(|&l| self.exceptional_coordinate(l) == Some(c))
            .map(Point::Exceptional)
    }

    /// Edwards-type curves as (a, d); a = 1 for the untwisted model.
    pub(crate) fn edwards_params(&self) -> Option<(FieldElement, FieldElement)> {
        match *self {
            Curve::Edwards { d } => Some((d.field().one(), d)),
            Curve::TwistedEdwards { a, d } => Some((a, d)),
            _ => None,
        }
    }

    /// For the cubic models: (a2, a4, a6, B) such that (x, y) ↦ (x/B, y/B)
    /// maps the curve onto y² = x³ + a2·x² + a4·x + a6 (B = 1 except for
    /// Montgomery curves).
    pub fn weierstrass_form(&self) -> Option<(FieldElement, FieldElement, FieldElement, FieldElement)> {
        match *self {
            Curve::Legendre { d } => {
                let f = d.field();
                Some((-(d + 1), d, f.zero(), f.one()))
            }
            Curve::Weierstrass { a2, a4, a6 } => Some((a2, a4, a6, a2.field().one())),
            Curve::Montgomery { a, b } => {
                let bi = b.inv().expect("validated B ≠ 0");
                Some((a * bi, bi * bi, a.field().zero(), b))
            }
            _ => None,
        }
    }

    /// The identity of the group law: (0, 1) on Edwards models, ∞ otherwise.
    pub fn identity(&self) -> Point {
        match self {
            Curve::Edwards { d } | Curve::TwistedEdwards { d, .. } => {
                let f = d.field();
                Point::Affine(f.zero(), f.one())
            }
            _ => Point::Infinity,
        }
    }

    pub fn is_on_curve(&self, p: &Point) -> bool {
        if let Some(f) = p.field() {
            if !f.same(self.field()) {
                return false;
            }
        }
        match (*self, *p) {
            (Curve::Edwards { .. } | Curve::TwistedEdwards { .. }, Point::Exceptional(l)) => {
                self.exceptional_coordinate(l).is_some()
            }
            (Curve::Edwards { .. } | Curve::TwistedEdwards { .. } | Curve::Huff { .. }, Point::Infinity) => false,
            (_, Point::Exceptional(_)) => false,
            (_, Point::Infinity) => true,
            (_, Point::Affine(x, y)) => self.equation(x, y).is_zero(),
        }
    }

    /// The defining polynomial, written as lhs − rhs.
    pub fn equation(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        match *self {
            Curve::Edwards { d } => x * x + y * y - 1 - d * x * x * y * y,
            Curve::TwistedEdwards { a, d } => a * x * x + y * y - 1 - d * x * x * y * y,
            Curve::Legendre { d } => y * y - x * (x - 1) * (x - d),
            Curve::Weierstrass { a2, a4, a6 } => y * y - (((x + a2) * x + a4) * x + a6),
            Curve::Montgomery { a, b } => b * y * y - ((x + a) * x + 1) * x,
            Curve::Huff { a, b } => a * x * (y * y - 1) - b * y * (x * x - 1),
        }
    }

    /// For an Edwards-type curve, the finite coordinate of an exceptional
    /// point: y for X± (y = ±1/√(d/a)), x for Y± (x = ±1/√d). None when the
    /// radical is not in the field.
    pub fn exceptional_coordinate(&self, l: ExcLabel) -> Option<FieldElement> {
        let (a, d) = self.edwards_params()?;
        let r = match l {
            ExcLabel::XPlus | ExcLabel::XMinus => (d / a).sqrt()?,
            ExcLabel::YPlus | ExcLabel::YMinus => d.sqrt()?,
        };
        let v = r.inv().ok()?;
        Some(match l {
            ExcLabel::XPlus | ExcLabel::YPlus => v,
            _ => -v,
        })
    }

    /// Parse "kind:p1,p2,…@p^m" (or "@p^m:modulus" for a non-default modulus).
    pub fn parse(text: &str) -> Result<Curve, CurveError> {
        let err = || CurveError::Parse(text.to_string());
        let (body, field) = text.trim().rsplit_once('@').ok_or_else(err)?;
        let ctx = if field.contains(':') {
            FieldCtx::parse_bounded(field, ARITH_MAX_Q)?
        } else {
            let (p, m) = field.split_once('^').ok_or_else(err)?;
            let p: u64 = p.trim().parse().map_err(|_| err())?;
            let m: u32 = m.trim().parse().map_err(|_| err())?;
            field_ctx_bounded(p, m, None, ARITH_MAX_Q)?
        };
        let (kind, params) = body.split_once(':').ok_or_else(err)?;
        let kind: CurveKind = kind.trim().parse()?;
        let params =
            split_top_level(params).into_iter().map(|s| ctx.parse_element(s)).collect::<Result<Vec<_>, _>>()?;
        make_curve(kind, &params)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(FieldElement::atom).collect();
        let ctx = self.field();
        let default = field_ctx_bounded(ctx.p(), ctx.m(), None, ARITH_MAX_Q).ok();
        if default.is_some_and(|c| c.same(ctx)) {
            write!(f, "{}:{}@{}^{}", self.kind(), params.join(","), ctx.p(), ctx.m())
        } else {
            write!(f, "{}:{}@{}", self.kind(), params.join(","), ctx)
        }
    }
}

impl FromStr for Curve {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self, CurveError> {
        Curve::parse(s)
    }
}
