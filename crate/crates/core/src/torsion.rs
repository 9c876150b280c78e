//! 2-descent on curves with full rational 2-torsion, the 4-torsion of L_d
//! (by table and by brute force), the twelve points of order four and
//! their halvability.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::curves::{Curve, CurveError, GroupStructure, Point};
use crate::ff::{embed, lift_to_extension, rational_roots, restrict, FieldCtx, FieldElement, FieldError};
use crate::maps::Sign;

/// Largest q at which [`four_torsion_profile`] re-derives the shape by
/// enumerating the group.
pub const VALIDATE_MAX_Q: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorsionError {
    #[error("{0} does not have full rational 2-torsion")]
    NoRationalTwoTorsion(String),
    #[error("L_d needs d ∉ {{0, 1}}, got d = {0}")]
    Degenerate(String),
    #[error("P_{{{0},{1}}} is not rational over {2}")]
    NotRational(TwoTorsion, char, String),
    #[error("table predicts {table} for d = {d} but the group has {brute}")]
    TableMismatch { d: String, table: String, brute: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A class in (F_q^×/(F_q^×)²)³, each component stored as ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DescentImage(pub [i8; 3]);

impl DescentImage {
    pub const IDENTITY: DescentImage = DescentImage([1, 1, 1]);

    pub fn mul(self, o: DescentImage) -> DescentImage {
        DescentImage([self.0[0] * o.0[0], self.0[1] * o.0[1], self.0[2] * o.0[2]])
    }
    pub fn is_trivial(&self) -> bool {
        *self == Self::IDENTITY
    }
}

impl fmt::Display for DescentImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |c: i8| if c > 0 { "+1" } else { "-1" };
        write!(f, "({}, {}, {})", s(self.0[0]), s(self.0[1]), s(self.0[2]))
    }
}

/// The descent map of a curve y² = (x − e1)(x − e2)(x − e3) with its roots
/// fixed once.
#[derive(Debug, Clone)]
pub struct Descent {
    curve: Curve,
    roots: [FieldElement; 3],
}

impl Descent {
    /// Legendre curves use the roots in the order (0, 1, d); general
    /// Weierstrass curves in canonical order.
    pub fn new(c: &Curve) -> Result<Descent, TorsionError> {
        let roots = match *c {
            Curve::Legendre { d } => [d.field().zero(), d.field().one(), d],
            Curve::Weierstrass { a2, a4, a6 } => {
                let r = rational_roots(&[a6, a4, a2, a2.field().one()]);
                r.try_into().map_err(|_| TorsionError::NoRationalTwoTorsion(c.to_string()))?
            }
            _ => return Err(TorsionError::NoRationalTwoTorsion(c.to_string())),
        };
        Ok(Descent { curve: *c, roots })
    }

    pub fn roots(&self) -> [FieldElement; 3] {
        self.roots
    }

    pub fn image(&self, p: &Point) -> Result<DescentImage, TorsionError> {
        if !self.curve.is_on_curve(p) {
            return Err(CurveError::NotOnCurve(p.to_string()).into());
        }
        let Some((x, y)) = p.xy() else {
            return Ok(DescentImage::IDENTITY);
        };
        let e = self.roots;
        let mut out = [0i8; 3];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (x - e[k]).chi2();
        }
        if y.is_zero() {
            // x = e_k: that component is the product of the other two differences
            let k = e.iter().position(|&r| r == x).expect("y = 0 only at a root");
            let (a, b) = ((k + 1) % 3, (k + 2) % 3);
            out[k] = ((e[k] - e[a]) * (e[k] - e[b])).chi2();
        }
        Ok(DescentImage(out))
    }
}

pub fn two_descent(c: &Curve, p: &Point) -> Result<DescentImage, TorsionError> {
    Descent::new(c)?.image(p)
}

/// P ∈ 2C(F_q), decided by the descent image.
pub fn is_halvable(c: &Curve, p: &Point) -> Result<bool, TorsionError> {
    Ok(two_descent(c, p)?.is_trivial())
}

/// The three points of order two on L_d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoTorsion {
    Origin,
    One,
    D,
}

impl TwoTorsion {
    pub const ALL: [TwoTorsion; 3] = [TwoTorsion::Origin, TwoTorsion::One, TwoTorsion::D];

    pub fn as_str(self) -> &'static str {
        match self {
            TwoTorsion::Origin => "(0,0)",
            TwoTorsion::One => "(1,0)",
            TwoTorsion::D => "(d,0)",
        }
    }
    /// The abscissa on L_d.
    pub fn x(self, d: FieldElement) -> FieldElement {
        match self {
            TwoTorsion::Origin => d.field().zero(),
            TwoTorsion::One => d.field().one(),
            TwoTorsion::D => d,
        }
    }
    pub fn point(self, d: FieldElement) -> Point {
        Point::Affine(self.x(d), d.field().zero())
    }
}

impl fmt::Display for TwoTorsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TwoTorsion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        TwoTorsion::ALL.into_iter().find(|v| v.as_str() == t).ok_or_else(|| format!("unknown 2-torsion point {s:?}"))
    }
}

impl Serialize for TwoTorsion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for TwoTorsion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// "Z4xZ2" for n1 = 2, n2 = 4.
pub fn shape_name(g: GroupStructure) -> String {
    format!("Z{}xZ{}", g.n2, g.n1)
}

pub fn parse_shape(s: &str) -> Option<GroupStructure> {
    let (a, b) = s.strip_prefix('Z')?.split_once("xZ")?;
    let (n2, n1) = (a.parse().ok()?, b.parse().ok()?);
    (n1 > 0 && n2 % n1 == 0).then_some(GroupStructure { n1, n2 })
}

mod shape_str {
    use super::*;
    pub fn serialize<S: Serializer>(g: &GroupStructure, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&shape_name(*g))
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GroupStructure, D::Error> {
        let s = String::deserialize(d)?;
        parse_shape(&s).ok_or_else(|| serde::de::Error::custom(format!("bad group shape {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionProfile {
    pub chi_d: i8,
    pub chi_1md: i8,
    pub chi_m1: i8,
    #[serde(with = "shape_str")]
    pub four_torsion: GroupStructure,
    pub halvable: Vec<TwoTorsion>,
    pub order8: bool,
}

/// The 4-torsion row for q ≡ 1 (χ(−1) = 1) or q ≡ 3 (mod 4), keyed by
/// (χ(d), χ(1−d)): shape and the halvable points of order two.
pub fn four_torsion_table(chi_m1: i8, chi_d: i8, chi_1md: i8) -> (GroupStructure, Vec<TwoTorsion>) {
    use TwoTorsion::*;
    let g = |n1, n2| GroupStructure { n1, n2 };
    match (chi_m1 > 0, chi_d > 0, chi_1md > 0) {
        (true, true, true) => (g(4, 4), vec![Origin, One, D]),
        (true, false, true) => (g(2, 4), vec![One]),
        (true, true, false) => (g(2, 4), vec![Origin]),
        (false, true, true) | (false, false, true) => (g(2, 4), vec![One]),
        (false, true, false) => (g(2, 4), vec![D]),
        (_, false, false) => (g(2, 2), vec![]),
    }
}

fn legendre(d: FieldElement) -> Result<Curve, TorsionError> {
    if d.is_zero() || d.is_one() {
        return Err(TorsionError::Degenerate(d.to_string()));
    }
    Ok(Curve::legendre(d)?)
}

/// Table prediction, with order-8 presence decided by halvability of the
/// rational order-4 points; cross-checked against the enumerated group
/// when q ≤ [`VALIDATE_MAX_Q`].
pub fn four_torsion_profile(d: FieldElement) -> Result<TorsionProfile, TorsionError> {
    legendre(d)?;
    let k = d.field();
    let (chi_d, chi_1md, chi_m1) = (d.chi2(), (1 - d).chi2(), (-k.one()).chi2());
    let (four_torsion, halvable) = four_torsion_table(chi_m1, chi_d, chi_1md);
    let mut order8 = false;
    for p in order4_points(d)? {
        if !p.negated && p.coords.field().is_some_and(|f| f.same(k)) && order4_halvable(d, p.base, p.sign)? {
            order8 = true;
            break;
        }
    }
    let profile = TorsionProfile { chi_d, chi_1md, chi_m1, four_torsion, halvable, order8 };
    if k.q() <= VALIDATE_MAX_Q {
        let (brute, brute8) = brute_two_power_torsion(d)?;
        if brute != four_torsion || brute8 != order8 {
            return Err(TorsionError::TableMismatch {
                d: d.to_string(),
                table: format!("{} (order 8: {order8})", shape_name(four_torsion)),
                brute: format!("{} (order 8: {brute8})", shape_name(brute)),
            });
        }
    }
    Ok(profile)
}

/// L_d(F_q)[4] and whether a point of order 8 exists, by enumeration.
pub fn brute_two_power_torsion(d: FieldElement) -> Result<(GroupStructure, bool), TorsionError> {
    let c = legendre(d)?;
    let pts = c.points()?;
    let id = Point::Infinity;
    // (order divides 4, order is exactly 4, order is exactly 8)
    let (n4, has4, has8) = pts
        .par_iter()
        .map(|p| {
            let p2 = c.double(p).unwrap();
            let p4 = c.double(&p2).unwrap();
            let p8 = c.double(&p4).unwrap();
            (p4 == id, p4 == id && p2 != id, p8 == id && p4 != id)
        })
        .fold(|| (0u64, false, false), |a, b| (a.0 + b.0 as u64, a.1 | b.1, a.2 | b.2))
        .reduce(|| (0, false, false), |a, b| (a.0 + b.0, a.1 | b.1, a.2 | b.2));
    let exp = if has4 { 4 } else { 2 };
    Ok((GroupStructure { n1: n4 / exp, n2: exp }, has8))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Order4Point {
    /// [2]·coords.
    pub base: TwoTorsion,
    pub sign: Sign,
    /// The negative of the listed point.
    pub negated: bool,
    /// Over F_q when rational there, else over F_{q²}.
    #[serde(serialize_with = "as_display")]
    pub coords: Point,
}

/// The twelve points of order four on L_d:
///   P_{(0,0),±} = (±√d, √−1·√d(1 ∓ √d)),
///   P_{(1,0),±} = (1 ± √(1−d), √(1−d)(1 ± √(1−d))),
///   P_{(d,0),±} = (d ± √(d(d−1)), √(d(d−1))(√d ± √(d−1))),
/// and their negatives, with √(d(d−1)) = √d·√(d−1). Radicals come from F_q
/// whenever they exist there.
pub fn order4_points(d: FieldElement) -> Result<Vec<Order4Point>, TorsionError> {
    legendre(d)?;
    let f = d.field();
    let one = f.one();
    let rational = [d, -one, 1 - d, d - 1].iter().all(|r| r.is_square());
    let k: &'static FieldCtx = if rational { f } else { lift_to_extension(f, 2)?.target() };
    let rad = |x: FieldElement| -> Result<FieldElement, TorsionError> {
        match x.sqrt() {
            Some(r) => Ok(embed(r, k)?),
            None => Ok(embed(x, k)?.sqrt().expect("every element of F_q is a square in F_{q²}")),
        }
    };
    let (s, i, t, r) = (rad(d)?, rad(-one)?, rad(1 - d)?, rad(d - 1)?);
    let u = s * r;
    let dk = embed(d, k)?;
    let lk = Curve::legendre(dk)?;
    let mut out = Vec::with_capacity(12);
    for base in TwoTorsion::ALL {
        for sign in Sign::BOTH {
            let e = k.elem(sign.value());
            let (x, y) = match base {
                TwoTorsion::Origin => (e * s, i * s * (1 - e * s)),
                TwoTorsion::One => (1 + e * t, t * (1 + e * t)),
                TwoTorsion::D => (dk + e * u, u * (s + e * r)),
            };
            let p = Point::Affine(x, y);
            assert!(lk.is_on_curve(&p), "P_{{{base},{}}} = {p} is off L_d", sign.symbol());
            assert_eq!(lk.double(&p)?, base.point(dk), "[2]P_{{{base},{}}} is not {base}", sign.symbol());
            for negated in [false, true] {
                let q = if negated { lk.neg(&p) } else { p };
                let coords = descend(&q, f).unwrap_or(q);
                out.push(Order4Point { base, sign, negated, coords });
            }
        }
    }
    Ok(out)
}

fn as_display<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

fn descend(p: &Point, f: &'static FieldCtx) -> Option<Point> {
    let (x, y) = p.xy()?;
    Some(Point::Affine(restrict(x, f)?, restrict(y, f)?))
}

/// Whether the F_q-rational point P_{family,sign} lies in 2L_d(F_q): the
/// listed elements, built from the signed radical ρ, must all be nonzero
/// squares:
///   (0,0): ρ = ±√d:       ρ, ρ − 1, ρ − d
///   (1,0): ρ = ±√(1−d):   1 + ρ, ρ, 1 + ρ − d
///   (d,0): ρ = ±√(d(d−1)): d + ρ, d + ρ − 1, ρ
pub fn order4_halvable(d: FieldElement, family: TwoTorsion, sign: Sign) -> Result<bool, TorsionError> {
    let f = d.field();
    let p = order4_points(d)?
        .into_iter()
        .find(|p| p.base == family && p.sign == sign && !p.negated)
        .expect("every family and sign is listed");
    let x = match p.coords {
        Point::Affine(x, _) if x.field().same(f) => x,
        _ => return Err(TorsionError::NotRational(family, sign.symbol(), f.to_string())),
    };
    let rho = x - family.x(d);
    let conditions = match family {
        TwoTorsion::Origin => [rho, rho - 1, rho - d],
        TwoTorsion::One => [1 + rho, rho, 1 + rho - d],
        TwoTorsion::D => [d + rho, d + rho - 1, rho],
    };
    Ok(conditions.iter().all(|c| c.chi2() == 1))
}
