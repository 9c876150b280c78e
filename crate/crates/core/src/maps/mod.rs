//! Explicit isomorphisms and isogenies between Edwards, Legendre and related
//! models, as evaluable maps with field-of-definition detection.
//!
//! A map is built by a closure that, given a working field K ⊇ F_q, either
//! produces the codomain, kernel and coordinate formulas over K or reports a
//! missing radical. Construction tries F_q, then F_{q²}, then F_{q⁴}, and
//! records which one succeeded.
//!
//! Formulas are evaluated projectively per coordinate: a vanishing
//! denominator sends the coordinate to ∞ (the identity on cubic models, an
//! exceptional point on Edwards models), while 0/0 means the formula is not
//! regular there. Such points are evaluated by translation,
//! f(P) = f(P + T) − f(T), which is valid because every map here is a
//! homomorphism.

mod catalog;
mod verify;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{Curve, CurveError, Point};
use crate::ff::{embed, lift_to_extension, restrict, FieldCtx, FieldElement, FieldError, DEFAULT_MAX_Q};

pub use catalog::*;
pub use verify::{verify_isogeny, IsogenyReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("radical {0} is not in the working field")]
    MissingRadical(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("the formula is not regular at this point")]
    NotDirect,
    #[error("point {0} is not on the domain")]
    NotOnDomain(String),
    #[error("unknown map {0}")]
    Unknown(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefinedOver {
    BaseField,
    QuadraticExtension,
    QuarticExtension,
}

impl DefinedOver {
    pub fn degree(self) -> u32 {
        match self {
            DefinedOver::BaseField => 1,
            DefinedOver::QuadraticExtension => 2,
            DefinedOver::QuarticExtension => 4,
        }
    }
    fn from_degree(k: u32) -> DefinedOver {
        match k {
            1 => DefinedOver::BaseField,
            2 => DefinedOver::QuadraticExtension,
            _ => DefinedOver::QuarticExtension,
        }
    }
}

impl fmt::Display for DefinedOver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DefinedOver::BaseField => "base-field",
            DefinedOver::QuadraticExtension => "quadratic-extension",
            DefinedOver::QuarticExtension => "quartic-extension",
        })
    }
}

pub(crate) type Eval = Arc<dyn Fn(&Point) -> Result<Point, MapError> + Send + Sync>;
type Builder = Arc<dyn Fn(&Work) -> Result<Built, MapError> + Send + Sync>;

/// What a builder produces over one working field.
pub(crate) struct Built {
    pub codomain: Curve,
    pub kernel: Vec<Point>,
    pub direct: Eval,
    /// Overrides direct-plus-translation evaluation (used by composites).
    pub full: Option<Eval>,
}

/// The working field and the base field it extends, possibly through an
/// intermediate field whose radicals must be kept.
pub(crate) struct Work {
    pub k: &'static FieldCtx,
    base: &'static FieldCtx,
    via: Option<&'static FieldCtx>,
}

impl Work {
    pub fn lift(&self, x: FieldElement) -> FieldElement {
        let x = match self.via {
            Some(v) if !x.field().same(self.k) => embed(x, v).expect("the intermediate field extends the base field"),
            _ => x,
        };
        embed(x, self.k).expect("the working field extends the base field")
    }

    fn down(&self, x: FieldElement) -> Option<FieldElement> {
        match self.via {
            Some(v) => restrict(restrict(x, v)?, self.base),
            None => restrict(x, self.base),
        }
    }

    /// A square root in K. Radicals of the base (or intermediate) field keep
    /// the branch that is canonical there, so a map rebuilt over an
    /// extension agrees with the original.
    pub fn sqrt(&self, x: FieldElement, what: &str) -> Result<FieldElement, MapError> {
        if let Some(r) = self.down(x).and_then(|b| b.sqrt()) {
            return Ok(self.lift(r));
        }
        if let Some(v) = self.via {
            if let Some(r) = restrict(x, v).and_then(|b| b.sqrt()) {
                return Ok(embed(r, self.k)?);
            }
        }
        x.sqrt().ok_or_else(|| MapError::MissingRadical(what.to_string()))
    }

    pub fn i(&self) -> Result<FieldElement, MapError> {
        self.sqrt(-self.k.one(), "√−1")
    }

    pub fn kernel_labels(&self, c: &Curve, labels: &[crate::curves::ExcLabel]) -> Vec<Point> {
        labels.iter().filter(|&&l| c.exceptional_coordinate(l).is_some()).map(|&l| Point::Exceptional(l)).collect()
    }
}

/// One coordinate as numerator/denominator.
#[derive(Clone, Copy)]
pub(crate) struct Fr(pub FieldElement, pub FieldElement);

/// Assemble a codomain point from projective coordinates.
pub(crate) fn emit(c: &Curve, x: Fr, y: Fr) -> Result<Point, MapError> {
    if (x.0.is_zero() && x.1.is_zero()) || (y.0.is_zero() && y.1.is_zero()) {
        return Err(MapError::NotDirect);
    }
    let (xi, yi) = (x.1.is_zero(), y.1.is_zero());
    let edwards = matches!(c, Curve::Edwards { .. } | Curve::TwistedEdwards { .. });
    match (xi, yi) {
        (false, false) => Ok(Point::Affine(x.0 / x.1, y.0 / y.1)),
        (true, true) if !edwards => Ok(Point::Infinity),
        (true, false) if edwards => c.label_with_coordinate(true, y.0 / y.1).ok_or(MapError::NotDirect),
        (false, true) if edwards => c.label_with_coordinate(false, x.0 / x.1).ok_or(MapError::NotDirect),
        _ => Err(MapError::NotDirect),
    }
}

pub(crate) fn affine(p: &Point) -> Result<(FieldElement, FieldElement), MapError> {
    p.xy().ok_or(MapError::NotDirect)
}

/// A rational map between curve models, materialized over the smallest
/// working field K ∈ {F_q, F_{q²}, F_{q⁴}} containing its radicals.
#[derive(Clone)]
pub struct RationalMap {
    name: String,
    degree: u32,
    defined_over: DefinedOver,
    base_domain: Curve,
    domain: Curve,
    codomain: Curve,
    kernel: Vec<Point>,
    direct: Eval,
    full: Option<Eval>,
    builder: Option<Builder>,
    translators: Arc<OnceLock<Vec<(Point, Point)>>>,
    extension: Arc<OnceLock<Option<RationalMap>>>,
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RationalMap")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("defined_over", &self.defined_over)
            .field("domain", &self.domain.to_string())
            .field("codomain", &self.codomain.to_string())
            .finish()
    }
}

impl RationalMap {
    fn construct(name: &str, degree: u32, base_domain: Curve, builder: Builder) -> Result<RationalMap, MapError> {
        let base = base_domain.field();
        for k in [1u32, 2, 4] {
            let field = if k == 1 { base } else { lift_to_extension(base, k)?.target() };
            match Self::at(name, degree, base_domain, builder.clone(), field, None) {
                Err(MapError::MissingRadical(_)) => continue,
                r => return r,
            }
        }
        Err(MapError::MissingRadical(format!("{name} needs more than a quartic extension")))
    }

    fn at(
        name: &str,
        degree: u32,
        base_domain: Curve,
        builder: Builder,
        k: &'static FieldCtx,
        via: Option<&'static FieldCtx>,
    ) -> Result<RationalMap, MapError> {
        let base = base_domain.field();
        let work = Work { k, base, via };
        let built = builder(&work)?;
        let domain = match via {
            Some(v) => base_domain.lift(v)?.lift(k)?,
            None => base_domain.lift(k)?,
        };
        Ok(RationalMap {
            name: name.to_string(),
            degree,
            defined_over: DefinedOver::from_degree(k.m() / base.m()),
            base_domain,
            domain,
            codomain: built.codomain,
            kernel: built.kernel,
            direct: built.direct,
            full: built.full,
            builder: Some(builder),
            translators: Arc::new(OnceLock::new()),
            extension: Arc::new(OnceLock::new()),
        })
    }

    /// A map given directly by its formula over the domain's field; no
    /// automatic lifting. Mostly useful for testing the verifier.
    pub fn custom<F>(name: &str, degree: u32, domain: Curve, codomain: Curve, kernel: Vec<Point>, f: F) -> RationalMap
    where
        F: Fn(&Point) -> Result<Point, MapError> + Send + Sync + 'static,
    {
        RationalMap {
            name: name.to_string(),
            degree,
            defined_over: DefinedOver::BaseField,
            base_domain: domain,
            domain,
            codomain,
            kernel,
            direct: Arc::new(f),
            full: None,
            builder: None,
            translators: Arc::new(OnceLock::new()),
            extension: Arc::new(OnceLock::new()),
        }
    }

    /// The same map over the extension `k` of the base field (which must
    /// contain the current working field).
    pub fn rebuild(&self, k: &'static FieldCtx) -> Result<RationalMap, MapError> {
        if k.same(self.field()) {
            return Ok(self.clone());
        }
        let b =
            self.builder.clone().ok_or_else(|| MapError::MissingRadical(format!("{} cannot be lifted", self.name)))?;
        let mut m = Self::at(&self.name, self.degree, self.base_domain, b, k, None)?;
        m.defined_over = self.defined_over;
        Ok(m)
    }

    /// g ∘ f for maps listed in application order, with an explicit kernel
    /// (computed over the working field from the domain).
    pub(crate) fn compose<K>(name: &str, parts: Vec<RationalMap>, kernel: K) -> Result<RationalMap, MapError>
    where
        K: Fn(&Work, &Curve) -> Vec<Point> + Send + Sync + 'static,
    {
        let degree = parts.iter().map(|m| m.degree).product();
        let base_domain = parts[0].base_domain;
        let builder: Builder = Arc::new(move |w: &Work| {
            let maps = parts.iter().map(|m| m.rebuild(w.k)).collect::<Result<Vec<_>, _>>()?;
            let maps = Arc::new(maps);
            let domain = maps[0].domain;
            let codomain = maps.last().unwrap().codomain;
            let md = maps.clone();
            let direct: Eval = Arc::new(move |p| md.iter().try_fold(*p, |acc, m| m.eval_direct(&acc)));
            let full: Eval = Arc::new(move |p| maps.iter().try_fold(*p, |acc, m| m.eval_lifted(&acc)));
            Ok(Built { codomain, kernel: kernel(w, &domain), direct, full: Some(full) })
        });
        Self::construct(name, degree, base_domain, builder)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn defined_over(&self) -> DefinedOver {
        self.defined_over
    }
    /// The working field K.
    pub fn field(&self) -> &'static FieldCtx {
        self.domain.field()
    }
    pub fn base_domain(&self) -> &Curve {
        &self.base_domain
    }
    /// Domain over K.
    pub fn domain(&self) -> &Curve {
        &self.domain
    }
    /// Codomain over K.
    pub fn codomain(&self) -> &Curve {
        &self.codomain
    }
    /// The codomain over the base field, when its parameters lie there.
    pub fn base_codomain(&self) -> Option<Curve> {
        self.codomain.restrict(self.base_domain.field())
    }
    /// Kernel points over K (those not rational over K are omitted; see
    /// [`RationalMap::rebuild`]).
    pub fn kernel(&self) -> &[Point] {
        &self.kernel
    }

    /// The formula alone at a point of the domain over K.
    pub fn eval_direct(&self, p: &Point) -> Result<Point, MapError> {
        (self.direct)(p)
    }

    /// Evaluate at a point of the base-field domain; the result is over K.
    pub fn eval(&self, p: &Point) -> Result<Point, MapError> {
        let lifted = self.base_domain.lift_point(p, self.field())?;
        self.eval_lifted(&lifted)
    }

    /// Evaluate and pull the result back to the base field when possible.
    pub fn eval_base(&self, p: &Point) -> Result<Point, MapError> {
        let r = self.eval(p)?;
        Ok(self.base_codomain().and_then(|c| c.descend_point(&r, self.field())).unwrap_or(r))
    }

    /// Evaluate at a point of the domain over K.
    pub fn eval_lifted(&self, p: &Point) -> Result<Point, MapError> {
        if !self.domain.is_on_curve(p) {
            return Err(MapError::NotOnDomain(p.to_string()));
        }
        if *p == self.domain.identity() {
            return Ok(self.codomain.identity());
        }
        if let Some(full) = &self.full {
            return full(p);
        }
        match (self.direct)(p) {
            Err(MapError::NotDirect) => self.translate(p),
            r => r,
        }
    }

    fn translate(&self, p: &Point) -> Result<Point, MapError> {
        for (t, ft) in self.translators() {
            let s = self.domain.add(p, t)?;
            if let Ok(fs) = (self.direct)(&s) {
                return Ok(self.codomain.add(&fs, &self.codomain.neg(ft))?);
            }
        }
        // Tiny groups can consist of irregular points only; the quadratic
        // extension of K always has enough.
        let ext = self.extension().ok_or(MapError::NotDirect)?;
        let r = ext.eval_lifted(&self.domain.lift_point(p, ext.field())?)?;
        self.codomain.descend_point(&r, ext.field()).ok_or(MapError::NotDirect)
    }

    /// The map over the quadratic extension of K, built through K so that
    /// every radical keeps its branch.
    fn extension(&self) -> Option<&RationalMap> {
        self.extension
            .get_or_init(|| {
                let b = self.builder.clone()?;
                let k = self.field();
                if k.q() > 1 << 16 {
                    return None;
                }
                let dst = lift_to_extension(k, 2).ok()?.target();
                let via = (!k.same(self.base_domain.field())).then_some(k);
                Self::at(&self.name, self.degree, self.base_domain, b, dst, via).ok()
            })
            .as_ref()
    }

    /// Points T with f(T) given by the formula, used for translation.
    fn translators(&self) -> &[(Point, Point)] {
        self.translators.get_or_init(|| {
            let k = self.field();
            let pts = if k.q() <= 1 << 12 {
                self.domain.points().unwrap_or_default()
            } else if self.base_domain.field().q() <= DEFAULT_MAX_Q {
                let base = self.base_domain.points().unwrap_or_default();
                base.iter().filter_map(|p| self.base_domain.lift_point(p, k).ok()).collect()
            } else {
                Vec::new()
            };
            pts.into_iter()
                .filter(|t| *t != self.domain.identity())
                .filter_map(|t| (self.direct)(&t).ok().map(|ft| (t, ft)))
                .take(32)
                .collect()
        })
    }
}
