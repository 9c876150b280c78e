//! Generic isogeny checks: image membership, homomorphism, equal point
//! counts and kernel size.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DefinedOver, MapError, RationalMap};
use crate::curves::{CountMethod, Point};
use crate::ff::{lift_to_extension, DEFAULT_MAX_Q};

const MAX_COUNTEREXAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsogenyReport {
    pub map: String,
    pub domain: String,
    pub codomain: String,
    /// The field every check ran over (the map's working field).
    pub field: String,
    pub defined_over: DefinedOver,
    pub degree: u32,
    pub membership: bool,
    pub homomorphism: bool,
    pub counts_equal: bool,
    pub kernel: bool,
    pub points_checked: usize,
    pub pairs_checked: usize,
    pub counterexamples: Vec<String>,
}

impl IsogenyReport {
    pub fn passed(&self) -> bool {
        self.membership && self.homomorphism && self.counts_equal && self.kernel
    }
}

/// Run every check over the map's working field K. Membership is checked
/// at every point of the domain over K; the homomorphism property on
/// `samples` pairs (P, Q) where the formula is regular at P, Q and P + Q,
/// or on all such pairs when there are fewer; kernel size over F_{q²}
/// (or K if larger), where every kernel of degree ≤ 4 here is rational.
pub fn verify_isogeny(f: &RationalMap, samples: usize) -> Result<IsogenyReport, MapError> {
    let dom = f.domain();
    let cod = f.codomain();
    let pts = dom.points()?;
    let mut ce = Vec::new();

    let images: Vec<(Point, Result<Point, MapError>)> = pts.par_iter().map(|p| (*p, f.eval_lifted(p))).collect();
    let mut membership = true;
    for (p, r) in &images {
        let ok = matches!(r, Ok(img) if cod.is_on_curve(img));
        if !ok {
            membership = false;
            ce.push(format!("membership: {p} -> {}", show(r)));
        }
    }

    // homomorphism, on points where the bare formula applies
    let pool: Vec<(Point, Point)> = pts.iter().filter_map(|p| f.eval_direct(p).ok().map(|v| (*p, v))).collect();
    // None: the formula is not regular at P + Q; Some(""): the pair agrees
    let check = |&((p, fp), (q, fq)): &((Point, Point), (Point, Point))| -> Option<String> {
        let s = dom.add(&p, &q).ok()?;
        let fs = f.eval_direct(&s).ok()?;
        let sum = cod.add(&fp, &fq).ok()?;
        Some(if sum == fs {
            String::new()
        } else {
            format!("homomorphism: P = {p}, Q = {q}: f(P+Q) = {fs}, f(P)+f(Q) = {sum}")
        })
    };
    let mut failures: Vec<String> = Vec::new();
    if pool.len().saturating_mul(pool.len()) <= samples {
        let all: Vec<_> = pool.iter().flat_map(|a| pool.iter().map(move |b| (*a, *b))).collect();
        failures = all.par_iter().filter_map(check).collect();
    } else if !pool.is_empty() {
        // draw until `samples` pairs avoid the formula's exceptional inputs
        let mut rng = ChaCha8Rng::seed_from_u64(0x15_06e7);
        for _ in 0..8 {
            let need = samples - failures.len();
            if need == 0 {
                break;
            }
            let batch: Vec<_> =
                (0..need).map(|_| (*pool.choose(&mut rng).unwrap(), *pool.choose(&mut rng).unwrap())).collect();
            failures.extend(batch.par_iter().filter_map(check).collect::<Vec<_>>());
        }
    }
    let pairs_checked = failures.len();
    let hom_failures: Vec<String> = failures.into_iter().filter(|s| !s.is_empty()).collect();
    let homomorphism = hom_failures.is_empty();
    ce.extend(hom_failures);

    let n_dom = dom.count_points(CountMethod::CharSum)?;
    let n_cod = cod.count_points(CountMethod::CharSum)?;
    let counts_equal = n_dom == n_cod;
    if !counts_equal {
        ce.push(format!("counts: #{dom} = {n_dom}, #{cod} = {n_cod}"));
    }

    let kernel = check_kernel(f, &mut ce)?;

    ce.truncate(MAX_COUNTEREXAMPLES);
    Ok(IsogenyReport {
        map: f.name().to_string(),
        domain: f.base_domain().to_string(),
        codomain: f.base_codomain().unwrap_or(*cod).to_string(),
        field: f.field().to_string(),
        defined_over: f.defined_over(),
        degree: f.degree(),
        membership,
        homomorphism,
        counts_equal,
        kernel,
        points_checked: pts.len(),
        pairs_checked,
        counterexamples: ce,
    })
}

fn show(r: &Result<Point, MapError>) -> String {
    match r {
        Ok(p) => p.to_string(),
        Err(e) => format!("error ({e})"),
    }
}

fn check_kernel(f: &RationalMap, ce: &mut Vec<String>) -> Result<bool, MapError> {
    let base = f.base_domain().field();
    let g = if f.defined_over() == DefinedOver::BaseField {
        match lift_to_extension(base, 2).map_err(MapError::from).and_then(|e| f.rebuild(e.target())) {
            Ok(g) => g,
            Err(_) => f.clone(),
        }
    } else {
        f.clone()
    };
    let id = g.codomain().identity();
    let mut ok = true;
    if g.kernel().len() != g.degree() as usize {
        ok = false;
        ce.push(format!("kernel: {} declared points for degree {}", g.kernel().len(), g.degree()));
    }
    for p in g.kernel() {
        let r = g.eval_lifted(p);
        if !matches!(r, Ok(v) if v == id) {
            ok = false;
            ce.push(format!("kernel: {p} -> {}", show(&r)));
        }
    }
    if g.field().q() <= DEFAULT_MAX_Q {
        let pts = g.domain().points()?;
        let n = pts.par_iter().filter(|p| matches!(g.eval_lifted(p), Ok(v) if v == id)).count();
        if n != g.degree() as usize {
            ok = false;
            ce.push(format!("kernel: {n} points over {} map to the identity, degree {}", g.field(), g.degree()));
        }
    }
    Ok(ok)
}
