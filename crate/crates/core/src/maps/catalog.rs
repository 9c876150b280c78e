//! The map catalog. L_d is y² = x(x−1)(x−d), E_d is x² + y² = 1 + d·x²y².

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{affine, emit, Built, Eval, Fr, MapError, RationalMap, Work};
use crate::curves::{edwards_to_w, w_coeffs, w_to_edwards};
use crate::curves::{Curve, CurveKind, ExcLabel, Point};
use crate::ff::{lift_to_extension, restrict, FieldElement};

fn nondegenerate(d: FieldElement) -> Result<(), MapError> {
    if d.is_zero() || d.is_one() {
        return Err(MapError::Degenerate(format!("d = {d} must not be 0 or 1")));
    }
    Ok(())
}

fn builder<F>(f: F) -> Arc<dyn Fn(&Work) -> Result<Built, MapError> + Send + Sync>
where
    F: Fn(&Work) -> Result<Built, MapError> + Send + Sync + 'static,
{
    Arc::new(f)
}

fn eval<F>(f: F) -> Eval
where
    F: Fn(&Point) -> Result<Point, MapError> + Send + Sync + 'static,
{
    Arc::new(f)
}

fn simple(codomain: Curve, kernel: Vec<Point>, direct: Eval) -> Built {
    Built { codomain, kernel, direct, full: None }
}

/// {d, 1−d, 1/d, 1−1/d, 1/(1−d), d/(d−1)} without duplicates, in that order.
pub fn orbit(d: FieldElement) -> Result<Vec<FieldElement>, MapError> {
    nondegenerate(d)?;
    let mut out: Vec<FieldElement> = Vec::with_capacity(6);
    for k in SigmaKind::ORBIT {
        let v = k.apply(d);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

/// The five non-trivial isomorphisms L_d → L_{σ(d)}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaKind {
    Id,
    S1,
    S2,
    S12,
    S21,
    S121,
}

impl SigmaKind {
    pub const ALL: [SigmaKind; 5] = [SigmaKind::S1, SigmaKind::S2, SigmaKind::S12, SigmaKind::S21, SigmaKind::S121];
    const ORBIT: [SigmaKind; 6] =
        [SigmaKind::Id, SigmaKind::S1, SigmaKind::S2, SigmaKind::S12, SigmaKind::S21, SigmaKind::S121];

    pub fn name(self) -> &'static str {
        match self {
            SigmaKind::Id => "id",
            SigmaKind::S1 => "s1",
            SigmaKind::S2 => "s2",
            SigmaKind::S12 => "s12",
            SigmaKind::S21 => "s21",
            SigmaKind::S121 => "s121",
        }
    }

    /// σ(d).
    pub fn apply(self, d: FieldElement) -> FieldElement {
        match self {
            SigmaKind::Id => d,
            SigmaKind::S1 => 1 - d,
            SigmaKind::S2 => d.inv().unwrap(),
            SigmaKind::S12 => 1 - d.inv().unwrap(),
            SigmaKind::S21 => (1 - d).inv().unwrap(),
            SigmaKind::S121 => d / (d - 1),
        }
    }

    /// The 2-torsion point of L_d sent to (0, 0) on L_{σ(d)}.
    pub fn preimage_of_origin(self, d: FieldElement) -> Point {
        let f = d.field();
        match self {
            SigmaKind::Id | SigmaKind::S2 => Point::Affine(f.zero(), f.zero()),
            SigmaKind::S1 | SigmaKind::S21 => Point::Affine(f.one(), f.zero()),
            SigmaKind::S12 | SigmaKind::S121 => Point::Affine(d, f.zero()),
        }
    }
}

impl fmt::Display for SigmaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SigmaKind {
    type Err = MapError;
    fn from_str(s: &str) -> Result<Self, MapError> {
        SigmaKind::ORBIT.into_iter().find(|k| k.name() == s).ok_or_else(|| MapError::Unknown(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// σ: L_d → L_{σ(d)}.
pub fn sigma_map(kind: SigmaKind, d: FieldElement) -> Result<RationalMap, MapError> {
    nondegenerate(d)?;
    let domain = Curve::legendre(d)?;
    let b = builder(move |w| {
        let d = w.lift(d);
        let one = w.k.one();
        // x' = (α·x + β)/γ, y' = μ·y
        let (alpha, beta, gamma, mu) = match kind {
            SigmaKind::Id => (one, w.k.zero(), one, one),
            SigmaKind::S1 => (-one, one, one, w.i()?),
            SigmaKind::S2 => (one, w.k.zero(), d, (w.sqrt(d, "√d")? * d).inv()?),
            SigmaKind::S12 => (-one, d, d, w.i()? / (w.sqrt(d, "√d")? * d)),
            SigmaKind::S21 => {
                let t = w.sqrt(1 - d, "√(1−d)")?;
                (-one, one, 1 - d, w.i()? / (t * (1 - d)))
            }
            SigmaKind::S121 => {
                let t = w.sqrt(1 - d, "√(1−d)")?;
                (one, -d, 1 - d, -(t * (1 - d)).inv()?)
            }
        };
        let codomain = Curve::legendre(kind.apply(d))?;
        let direct = eval(move |p| {
            let (x, y) = affine(p)?;
            Ok(Point::Affine((alpha * x + beta) / gamma, mu * y))
        });
        Ok(simple(codomain, vec![Point::Infinity], direct))
    });
    RationalMap::construct(kind.name(), 1, domain, b)
}

/// ψ: E_d → L_d, (x, y) ↦ (1/x², y(d−1)/(x(1−y²))).
pub fn psi(d: FieldElement) -> Result<RationalMap, MapError> {
    let domain = Curve::edwards(d)?;
    let b = builder(move |w| {
        let d = w.lift(d);
        let codomain = Curve::legendre(d)?;
        let kernel = vec![Point::Affine(w.k.zero(), w.k.one()), Point::Affine(w.k.zero(), -w.k.one())];
        let one = w.k.one();
        let direct = eval(move |p| {
            let (x, y) = affine(p)?;
            emit(&codomain, Fr(one, x * x), Fr(y * (d - 1), x * (1 - y * y)))
        });
        Ok(simple(codomain, kernel, direct))
    });
    RationalMap::construct("psi", 2, domain, b)
}

/// ψ̂: L_d → E_d, (x, y) ↦ (2y/(d−x²), (y²−x²(1−d))/(y²+x²(1−d))).
pub fn psi_dual(d: FieldElement) -> Result<RationalMap, MapError> {
    let domain = Curve::legendre(d)?;
    let b = builder(move |w| {
        let d = w.lift(d);
        let codomain = Curve::edwards(d)?;
        let kernel = vec![Point::Infinity, Point::Affine(w.k.zero(), w.k.zero())];
        let direct = eval(move |p| {
            let (x, y) = affine(p)?;
            let (x2, y2) = (x * x, y * y);
            emit(&codomain, Fr(2 * y, d - x2), Fr(y2 - x2 * (1 - d), y2 + x2 * (1 - d)))
        });
        Ok(simple(codomain, kernel, direct))
    });
    RationalMap::construct("psi-dual", 2, domain, b)
}

/// W_d: y² = x³ + 2(1+d)x² + (1−d)²x.
pub fn w_curve(d: FieldElement) -> Result<Curve, MapError> {
    let (a2, a4) = w_coeffs(d.field().one(), d);
    Ok(Curve::weierstrass(a2, a4, d.field().zero())?)
}

/// τ: E_d → W_d, τ⁻¹, φ_d: W_d → L_d and φ̂_d: L_d → W_d, with φ_d ∘ τ = ψ
/// and τ⁻¹ ∘ φ̂_d = ψ̂.
pub fn tau_chain(d: FieldElement) -> Result<(RationalMap, RationalMap, RationalMap, RationalMap), MapError> {
    nondegenerate(d)?;
    let e = Curve::edwards(d)?;
    let wd = w_curve(d)?;
    let l = Curve::legendre(d)?;
    let tau = RationalMap::construct(
        "tau",
        1,
        e,
        builder(move |w| {
            let d = w.lift(d);
            let one = w.k.one();
            let direct = eval(move |p| Ok(edwards_to_w(one, d, *p)?));
            Ok(simple(w_curve(d)?, vec![Point::Affine(w.k.zero(), one)], direct))
        }),
    )?;
    let tau_inv = RationalMap::construct(
        "tau-inv",
        1,
        wd,
        builder(move |w| {
            let d = w.lift(d);
            let one = w.k.one();
            let direct = eval(move |p| Ok(w_to_edwards(one, d, *p)));
            Ok(simple(Curve::edwards(d)?, vec![Point::Infinity], direct))
        }),
    )?;
    let origin = |w: &Work| Point::Affine(w.k.zero(), w.k.zero());
    let phi = RationalMap::construct(
        "phi",
        2,
        wd,
        builder(move |w| {
            let d = w.lift(d);
            let codomain = Curve::legendre(d)?;
            let direct = eval(move |p| {
                let (x, y) = affine(p)?;
                let x2 = x * x;
                emit(&codomain, Fr(y * y, 4 * x2), Fr(y * ((1 - d) * (1 - d) - x2), 8 * x2))
            });
            Ok(simple(codomain, vec![Point::Infinity, origin(w)], direct))
        }),
    )?;
    let phi_dual = RationalMap::construct(
        "phi-dual",
        2,
        l,
        builder(move |w| {
            let d = w.lift(d);
            let codomain = w_curve(d)?;
            let direct = eval(move |p| {
                let (x, y) = affine(p)?;
                let x2 = x * x;
                emit(&codomain, Fr(y * y, x2), Fr(y * (d - x2), x2))
            });
            Ok(simple(codomain, vec![Point::Infinity, origin(w)], direct))
        }),
    )?;
    Ok((tau, tau_inv, phi, phi_dual))
}

/// ψ_{a,d}: E_{a,d} → L_{d/a}, (x, y) ↦ (1/(ax²), y(d−a)/(a^{3/2}x(1−y²))).
pub fn psi_twisted(a: FieldElement, d: FieldElement) -> Result<RationalMap, MapError> {
    let domain = Curve::twisted_edwards(a, d)?;
    nondegenerate(d / a)?;
    let b = builder(move |w| {
        let (a, d) = (w.lift(a), w.lift(d));
        let a32 = w.sqrt(a, "√a")? * a;
        let codomain = Curve::legendre(d / a)?;
        let kernel = vec![Point::Affine(w.k.zero(), w.k.one()), Point::Affine(w.k.zero(), -w.k.one())];
        let one = w.k.one();
        let direct = eval(move |p| {
            let (x, y) = affine(p)?;
            emit(&codomain, Fr(one, a * x * x), Fr(y * (d - a), a32 * x * (1 - y * y)))
        });
        Ok(simple(codomain, kernel, direct))
    });
    RationalMap::construct("psi-twisted", 2, domain, b)
}

/// The dual L_{d/a} → E_{a,d},
/// (x, y) ↦ (2√a·y/(d−ax²), (ay²−x²(a−d))/(ay²+x²(a−d))).
pub fn psi_twisted_dual(a: FieldElement, d: FieldElement) -> Result<RationalMap, MapError> {
    Curve::twisted_edwards(a, d)?;
    nondegenerate(d / a)?;
    let domain = Curve::legendre(d / a)?;
    let b = builder(move |w| {
        let (a, d) = (w.lift(a), w.lift(d));
        let sa = w.sqrt(a, "√a")?;
        let codomain = Curve::twisted_edwards(a, d)?;
        let kernel = vec![Point::Infinity, Point::Affine(w.k.zero(), w.k.zero())];
        let direct = eval(move |p| {
            let (x, y) = affine(p)?;
            let (x2, y2) = (x * x, y * y);
            emit(&codomain, Fr(2 * sa * y, d - a * x2), Fr(a * y2 - x2 * (a - d), a * y2 + x2 * (a - d)))
        });
        Ok(simple(codomain, kernel, direct))
    });
    RationalMap::construct("psi-twisted-dual", 2, domain, b)
}

/// The 4-isogeny ω = ψ̂_{σ(d)} ∘ σ ∘ ψ_d: E_d → E_{σ(d)}.
pub fn omega(kind: SigmaKind, d: FieldElement) -> Result<RationalMap, MapError> {
    nondegenerate(d)?;
    let parts = vec![psi(d)?, sigma_map(kind, d)?, psi_dual(kind.apply(d))?];
    let name = format!("omega-{}", kind.name());
    RationalMap::compose(&name, parts, move |w, e| {
        let (z, one) = (w.k.zero(), w.k.one());
        let mut k = vec![Point::Affine(z, one), Point::Affine(z, -one)];
        // ψ⁻¹ of the 2-torsion point that σ sends to (0, 0)
        match kind {
            SigmaKind::Id | SigmaKind::S2 => k.extend(w.kernel_labels(e, &[ExcLabel::XPlus, ExcLabel::XMinus])),
            SigmaKind::S1 | SigmaKind::S21 => k.extend([Point::Affine(one, z), Point::Affine(-one, z)]),
            SigmaKind::S12 | SigmaKind::S121 => k.extend(w.kernel_labels(e, &[ExcLabel::YPlus, ExcLabel::YMinus])),
        }
        k
    })
}

/// d̄ = ((1 + s)/(1 − s))² for a chosen root s.
fn dbar(s: FieldElement) -> Result<FieldElement, MapError> {
    let v = ((1 + s) / (1 - s)).square();
    nondegenerate(v).map(|_| v)
}

/// ρ_{d,±}: L_d → E_{d̄}, (x, y) ↦ (√−1(1−s)x/y, (x−s)/(x+s)) with s = ±√d.
pub fn rho(d: FieldElement, sign: Sign) -> Result<RationalMap, MapError> {
    nondegenerate(d)?;
    let domain = Curve::legendre(d)?;
    let b = builder(move |w| {
        let d = w.lift(d);
        let s = w.sqrt(d, "√d")? * sign.value();
        let i = w.i()?;
        let codomain = Curve::edwards(dbar(s)?)?;
        let direct = eval(move |p| {
            let (x, y) = affine(p)?;
            emit(&codomain, Fr(i * (1 - s) * x, y), Fr(x - s, x + s))
        });
        Ok(simple(codomain, vec![Point::Infinity], direct))
    });
    RationalMap::construct(&format!("rho{}", sign.symbol()), 1, domain, b)
}

/// ρ̂_{d,±}: E_{d̄} → L_d, (x, y) ↦ (s(1+y)/(1−y), √−1·s(1−s)(1+y)/(x(1−y))).
pub fn rho_dual(d: FieldElement, sign: Sign) -> Result<RationalMap, MapError> {
    let forward = rho(d, sign)?;
    let domain =
        forward.base_codomain().ok_or_else(|| MapError::MissingRadical("d̄ is not in the base field".into()))?;
    let b = builder(move |w| {
        let d = w.lift(d);
        let s = w.sqrt(d, "√d")? * sign.value();
        let i = w.i()?;
        let codomain = Curve::legendre(d)?;
        let one = w.k.one();
        let direct = eval(move |p| {
            let (x, y) = affine(p)?;
            emit(&codomain, Fr(s * (1 + y), 1 - y), Fr(i * s * (1 - s) * (1 + y), x * (1 - y)))
        });
        Ok(simple(codomain, vec![Point::Affine(w.k.zero(), one)], direct))
    });
    RationalMap::construct(&format!("rho-dual{}", sign.symbol()), 1, domain, b)
}

/// L_d ≅ M_{A,B}: By² = x³ + Ax² + x with A = −(1+d)/√d, B = 1/(d√d),
/// via (x, y) ↦ (x/√d, y). The curve is over the map's working field.
pub fn montgomery_from_legendre(d: FieldElement) -> Result<(Curve, RationalMap), MapError> {
    nondegenerate(d)?;
    let domain = Curve::legendre(d)?;
    let b = builder(move |w| {
        let d = w.lift(d);
        let s = w.sqrt(d, "√d")?;
        let codomain = Curve::montgomery(-(1 + d) / s, (d * s).inv()?)?;
        let direct = eval(move |p| {
            let (x, y) = affine(p)?;
            Ok(Point::Affine(x / s, y))
        });
        Ok(simple(codomain, vec![Point::Infinity], direct))
    });
    let m = RationalMap::construct("montgomery", 1, domain, b)?;
    Ok((*m.codomain(), m))
}

/// The three families of 2-isogenies E_d → E_{d'} with kernel {(0, ±1)}.
///
/// 1. s = √d: (√−1(1∓s)/(d−1)·(1−y²)/(xy), (1∓s·x²)/(1±s·x²)), d' = ((1±s)/(1∓s))².
/// 2. t = √(1−d): ((1∓t)xy, (1−(1∓t)x²)/(1−(1±t)x²)), d' = ((1±t)/(1∓t))².
/// 3. r = √(d−1), w = √d/r: ((r∓√d)x/y, (1−(d±(1−d)w)x²)/(1−(d∓(1−d)w)x²)),
///    d' = ((1±w)/(1∓w))².
pub fn epsilon(family: u8, sign: Sign, d: FieldElement) -> Result<RationalMap, MapError> {
    nondegenerate(d)?;
    if !(1..=3).contains(&family) {
        return Err(MapError::Unknown(format!("eps{family}")));
    }
    let domain = Curve::edwards(d)?;
    let b = builder(move |w| {
        let d = w.lift(d);
        let g = sign.value();
        let one = w.k.one();
        let kernel = vec![Point::Affine(w.k.zero(), one), Point::Affine(w.k.zero(), -one)];
        let built = match family {
            1 => {
                let s = w.sqrt(d, "√d")? * g;
                let c = w.i()? * (1 - s) / (d - 1);
                let codomain = Curve::edwards(dbar(s)?)?;
                let e = eval(move |p| {
                    let (x, y) = affine(p)?;
                    let x2 = x * x;
                    emit(&codomain, Fr(c * (1 - y * y), x * y), Fr(1 - s * x2, 1 + s * x2))
                });
                (codomain, e)
            }
            2 => {
                let t = w.sqrt(1 - d, "√(1−d)")? * g;
                let codomain = Curve::edwards(dbar(t)?)?;
                let e = eval(move |p| {
                    let (x, y) = affine(p)?;
                    let x2 = x * x;
                    emit(&codomain, Fr((1 - t) * x * y, one), Fr(1 - (1 - t) * x2, 1 - (1 + t) * x2))
                });
                (codomain, e)
            }
            _ => {
                let r = w.sqrt(d - 1, "√(d−1)")?;
                let s = w.sqrt(d, "√d")?;
                let wv = s / r * g;
                let c = r - s * g;
                let codomain = Curve::edwards(dbar(wv)?)?;
                let (num, den) = (d + (1 - d) * wv, d - (1 - d) * wv);
                let e = eval(move |p| {
                    let (x, y) = affine(p)?;
                    let x2 = x * x;
                    emit(&codomain, Fr(c * x, y), Fr(1 - num * x2, 1 - den * x2))
                });
                (codomain, e)
            }
        };
        Ok(simple(built.0, kernel, built.1))
    });
    RationalMap::construct(&format!("eps{family}{}", sign.symbol()), 2, domain, b)
}

/// E_d → L_δ with s = √d and δ = ((s+1)/(s−1))²:
/// (x, y) ↦ ((s+1)/(s−1)·(1+y)/(1−y), 2√−1(1+s)/(1−s)²·(1+y)/(x(1−y))).
pub fn edwards_to_legendre_iso(d: FieldElement) -> Result<RationalMap, MapError> {
    let domain = Curve::edwards(d)?;
    let b = builder(move |w| {
        let d = w.lift(d);
        let s = w.sqrt(d, "√d")?;
        let i = w.i()?;
        let c1 = (s + 1) / (s - 1);
        let c2 = 2 * i * (1 + s) / ((1 - s) * (1 - s));
        let delta = c1 * c1;
        nondegenerate(delta)?;
        let codomain = Curve::legendre(delta)?;
        let direct = eval(move |p| {
            let (x, y) = affine(p)?;
            emit(&codomain, Fr(c1 * (1 + y), 1 - y), Fr(c2 * (1 + y), x * (1 - y)))
        });
        Ok(simple(codomain, vec![Point::Affine(w.k.zero(), w.k.one())], direct))
    });
    RationalMap::construct("edwards-legendre", 1, domain, b)
}

/// All d' ∈ F_q with E_{d'} ≅ E_d: those of d, 1/d, ((1±t)/(1∓t))⁴ and
/// ((1±√−1·t)/(1∓√−1·t))⁴ (t⁴ = d) that lie in F_q, sorted. Evaluated in
/// F_{q⁴}, where t and √−1 always exist.
pub fn edwards_iso_class(d: FieldElement) -> Result<Vec<FieldElement>, MapError> {
    nondegenerate(d)?;
    let base = d.field();
    let k = lift_to_extension(base, 4)?.target();
    let dk = crate::ff::embed(d, k)?;
    let t = dk.sqrt().and_then(|r| r.sqrt()).expect("F_{q⁴} contains a fourth root of every element of F_q");
    let i = (-k.one()).sqrt().expect("F_{q⁴} contains √−1");
    let mut cands = vec![dk, dk.inv()?];
    for u in [t, i * t] {
        for u in [u, -u] {
            if let Ok(inv) = (1 - u).inv() {
                cands.push(((1 + u) * inv).pow(4));
            }
        }
    }
    let mut out: Vec<FieldElement> =
        cands.into_iter().filter_map(|v| restrict(v, base)).filter(|v| !v.is_zero() && !v.is_one()).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// H_{a,b} ≅ E_d with d = ((a−b)/(a+b))².
pub fn huff_param(a: FieldElement, b: FieldElement) -> Result<FieldElement, MapError> {
    Curve::huff(a, b)?;
    let d = ((a - b) / (a + b)).square();
    nondegenerate(d)?;
    Ok(d)
}

/// #H_{a,b}(F_q) via the substitution t = xy, which turns the curve into
/// y²(at + b) = bt² + at. Every affine Huff point with y ≠ 0 corresponds to
/// one solution (t, y) with y ≠ 0; the solutions with y = 0 are t = 0 and
/// t = −a/b, and only (0, 0) comes from the Huff curve itself. Adding the
/// three points at infinity gives #H = #{(t, y)} + 2.
pub fn huff_t_model_count(a: FieldElement, b: FieldElement) -> Result<u64, MapError> {
    Curve::huff(a, b)?;
    let f = a.field();
    let sq = {
        let mut t = vec![0u64; f.q() as usize];
        for y in f.elements() {
            t[(y * y).code() as usize] += 1;
        }
        t
    };
    let mut n = 0;
    for t in f.elements() {
        let lhs = a * t + b;
        let rhs = b * t * t + a * t;
        n += if lhs.is_zero() {
            if rhs.is_zero() {
                f.q()
            } else {
                0
            }
        } else {
            sq[(rhs / lhs).code() as usize]
        };
    }
    Ok(n + 2)
}

/// Map names accepted by [`by_name`].
pub const MAP_NAMES: &[&str] = &[
    "psi",
    "psi-dual",
    "tau",
    "tau-inv",
    "phi",
    "phi-dual",
    "s1",
    "s2",
    "s12",
    "s21",
    "s121",
    "omega-s1",
    "omega-s2",
    "omega-s12",
    "omega-s21",
    "omega-s121",
    "rho+",
    "rho-",
    "rho-dual+",
    "rho-dual-",
    "eps1+",
    "eps1-",
    "eps2+",
    "eps2-",
    "eps3+",
    "eps3-",
    "montgomery",
    "edwards-legendre",
    "psi-twisted",
    "psi-twisted-dual",
];

/// Look a map up by its catalog name. Every map takes the single parameter
/// d except the twisted pair, which take (a, d).
pub fn by_name(name: &str, params: &[FieldElement]) -> Result<RationalMap, MapError> {
    let arity = if name.starts_with("psi-twisted") { 2 } else { 1 };
    if params.len() != arity {
        let kind = if arity == 2 { CurveKind::TwistedEdwards } else { CurveKind::Edwards };
        return Err(crate::curves::CurveError::Arity(kind, params.len()).into());
    }
    let d = params[arity - 1];
    let sign = |s: &str| if s.ends_with('+') { Sign::Plus } else { Sign::Minus };
    match name {
        "psi" => psi(d),
        "psi-dual" => psi_dual(d),
        "tau" => Ok(tau_chain(d)?.0),
        "tau-inv" => Ok(tau_chain(d)?.1),
        "phi" => Ok(tau_chain(d)?.2),
        "phi-dual" => Ok(tau_chain(d)?.3),
        "montgomery" => Ok(montgomery_from_legendre(d)?.1),
        "edwards-legendre" => edwards_to_legendre_iso(d),
        "psi-twisted" => psi_twisted(params[0], d),
        "psi-twisted-dual" => psi_twisted_dual(params[0], d),
        "rho+" | "rho-" => rho(d, sign(name)),
        "rho-dual+" | "rho-dual-" => rho_dual(d, sign(name)),
        _ => {
            if let Some(k) = name.strip_prefix("omega-") {
                return omega(k.parse()?, d);
            }
            if let Some(rest) = name.strip_prefix("eps") {
                let fam = rest.trim_end_matches(['+', '-']);
                if rest.len() == fam.len() + 1 {
                    if let Ok(i @ 1..=3) = fam.parse::<u8>() {
                        return epsilon(i, sign(rest), d);
                    }
                }
                return Err(MapError::Unknown(name.to_string()));
            }
            match name.parse::<SigmaKind>() {
                Ok(k) if k != SigmaKind::Id => sigma_map(k, d),
                _ => Err(MapError::Unknown(name.to_string())),
            }
        }
    }
}
