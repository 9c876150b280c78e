//! Census of Legendre parameters d ∈ F_q \ {0, 1} by trace of Frobenius,
//! refined by the power class of d, with the identities it satisfies.

mod bijection;
mod classify;
mod deuring;
mod report;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{Curve, CurveError};
use crate::ff::{FieldCtx, FieldElement, FieldError, PowerClass, DEFAULT_MAX_Q};
use crate::maps::MapError;
use crate::nt;
use crate::torsion::TorsionError;

pub use bijection::{bijection_trace, gamma_map, xi_map, BijectionReport, CompositionCheck};
pub use classify::{classify, Classification};
pub use deuring::{class_number_oracle, deuring_poly, supersingular_params, DeuringPoly};
pub use report::{katz_expected_ratio, katz_ratio_report, theorem_report, Check, Claim, Status, TheoremReport};

/// Version tag embedded in every census and report artifact.
pub const FORMAT_VERSION: u32 = 1;

/// Fields above this size use the correlation method by default.
pub const CORRELATION_MIN_Q: u64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("q = {q} exceeds the census bound {bound}")]
    TooLarge { q: u64, bound: u64 },
    #[error("{what} needs {needs}, but the field is {field}")]
    WrongResidueClass { what: String, needs: String, field: String },
    #[error("d = {d} is not in the {class} class")]
    NotInClass { d: String, class: String },
    #[error("degenerate parameter d = {0}")]
    Degenerate(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("cannot parse census: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
}

/// All parameters with one trace A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceClass {
    pub a: i64,
    /// Canonical order.
    pub ds: Vec<FieldElement>,
    pub n_n2: usize,
    pub n_2n4: usize,
    pub n_4: usize,
}

impl TraceClass {
    pub fn n(&self) -> usize {
        self.ds.len()
    }
    pub fn n_2(&self) -> usize {
        self.n_2n4 + self.n_4
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    pub ctx: &'static FieldCtx,
    pub classes: BTreeMap<i64, TraceClass>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    /// One character-sum trace per parameter: O(q²).
    PerParameter,
    /// A(d) = −Σ_x χ(x(x−1))·χ(x−d) for all d at once, as a correlation
    /// over the additive group (Z/p)^m computed with floating-point DFTs
    /// and rounded: O(q log q).
    Correlation,
}

/// All A with |A| ≤ 2√q, p ∤ A and A ≡ q + 1 (mod 4), ascending.
pub fn unobstructed_traces(ctx: &'static FieldCtx) -> Vec<i64> {
    let q = ctx.q() as i64;
    let p = ctx.p() as i64;
    let s = nt::isqrt(4 * ctx.q()) as i64;
    (-s..=s).filter(|&a| a % p != 0 && (a - (q + 1)).rem_euclid(4) == 0).collect()
}

/// The closed-form number of isogeny classes, chosen by p mod 4 and the
/// parity of m.
pub fn isogeny_class_formula(ctx: &'static FieldCtx) -> u64 {
    let p = ctx.p();
    let s = nt::isqrt(4 * ctx.q());
    let ordinary = 2 * ((s + 2) / 4) - 2 * ((s / p + 2) / 4);
    if ctx.m() % 2 == 0 {
        ordinary + 1
    } else if p % 4 == 1 {
        ordinary
    } else {
        2 * (s / 4) - 2 * (s / (4 * p)) + 1
    }
}

/// Formula value next to the number of distinct traces in the spectrum.
pub fn isogeny_class_count(table: &CensusTable) -> (u64, u64) {
    (isogeny_class_formula(table.ctx), table.classes.len() as u64)
}

pub fn trace_spectrum(ctx: &'static FieldCtx) -> Result<CensusTable, CensusError> {
    let method = if ctx.q() >= CORRELATION_MIN_Q { SpectrumMethod::Correlation } else { SpectrumMethod::PerParameter };
    trace_spectrum_with(ctx, method, DEFAULT_MAX_Q)
}

pub fn trace_spectrum_with(
    ctx: &'static FieldCtx,
    method: SpectrumMethod,
    bound: u64,
) -> Result<CensusTable, CensusError> {
    if ctx.q() > bound {
        return Err(CensusError::TooLarge { q: ctx.q(), bound });
    }
    let traces = match method {
        SpectrumMethod::PerParameter => per_parameter_traces(ctx)?,
        SpectrumMethod::Correlation => correlation_traces(ctx),
    };
    let mut classes: BTreeMap<i64, TraceClass> = BTreeMap::new();
    for d in ctx.elements().filter(|d| !d.is_zero() && !d.is_one()) {
        let a = traces[d.code() as usize];
        let c = classes.entry(a).or_insert_with(|| TraceClass { a, ds: Vec::new(), n_n2: 0, n_2n4: 0, n_4: 0 });
        c.ds.push(d);
        match d.fourth_power_class() {
            PowerClass::Nonsquare => c.n_n2 += 1,
            PowerClass::SquareNotFourth => c.n_2n4 += 1,
            PowerClass::FourthPower => c.n_4 += 1,
            PowerClass::Zero => unreachable!(),
        }
    }
    for c in classes.values_mut() {
        c.ds.sort();
    }
    let table = CensusTable { ctx, classes };
    table.check_invariants().map_err(CensusError::Parse)?;
    Ok(table)
}

fn per_parameter_traces(ctx: &'static FieldCtx) -> Result<Vec<i64>, CensusError> {
    let ds: Vec<FieldElement> = ctx.elements().filter(|d| !d.is_zero() && !d.is_one()).collect();
    let traces: Vec<i64> = ds.par_iter().map(|&d| Curve::legendre(d)?.trace()).collect::<Result<_, _>>()?;
    let mut t = vec![0i64; ctx.q() as usize];
    for (d, a) in ds.iter().zip(traces) {
        t[d.code() as usize] = a;
    }
    Ok(t)
}

fn correlation_traces(ctx: &'static FieldCtx) -> Vec<i64> {
    let q = ctx.q() as usize;
    let mut g = vec![Complex::new(0.0, 0.0); q];
    let mut h = vec![Complex::new(0.0, 0.0); q];
    for x in ctx.elements() {
        let i = x.code() as usize;
        g[i].re = (x * (x - 1)).chi2() as f64;
        h[i].re = x.chi2() as f64;
    }
    let (p, m) = (ctx.p() as usize, ctx.m() as usize);
    dft_nd(&mut g, p, m, false);
    dft_nd(&mut h, p, m, false);
    for (a, b) in g.iter_mut().zip(&h) {
        *a *= b.conj();
    }
    dft_nd(&mut g, p, m, true);
    // c(d) = Σ_x g(x)·h(x − d); the inverse transform is unnormalized
    g.iter().map(|c| -(c.re / q as f64).round() as i64).collect()
}

/// In-place DFT over (Z/p)^m, index = Σ c_i p^i.
fn dft_nd(data: &mut [Complex<f64>], p: usize, m: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse { planner.plan_fft_inverse(p) } else { planner.plan_fft_forward(p) };
    let mut buf = vec![Complex::new(0.0, 0.0); p];
    let mut stride = 1;
    for _ in 0..m {
        let block = stride * p;
        for start in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (k, b) in buf.iter_mut().enumerate() {
                    *b = data[start + off + k * stride];
                }
                fft.process(&mut buf);
                for (k, b) in buf.iter().enumerate() {
                    data[start + off + k * stride] = *b;
                }
            }
        }
        stride = block;
    }
}

impl CensusTable {
    pub fn get(&self, a: i64) -> Option<&TraceClass> {
        self.classes.get(&a)
    }
    pub fn n(&self, a: i64) -> usize {
        self.get(a).map_or(0, TraceClass::n)
    }
    pub fn n_n2(&self, a: i64) -> usize {
        self.get(a).map_or(0, |c| c.n_n2)
    }
    pub fn n_2(&self, a: i64) -> usize {
        self.get(a).map_or(0, TraceClass::n_2)
    }
    pub fn n_2n4(&self, a: i64) -> usize {
        self.get(a).map_or(0, |c| c.n_2n4)
    }
    pub fn n_4(&self, a: i64) -> usize {
        self.get(a).map_or(0, |c| c.n_4)
    }
    /// The trace class containing d.
    pub fn trace_of(&self, d: FieldElement) -> Option<i64> {
        self.classes.values().find(|c| c.ds.binary_search(&d).is_ok()).map(|c| c.a)
    }
    /// Keys and unobstructed traces together, ascending.
    pub fn relevant_traces(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.classes.keys().copied().chain(unobstructed_traces(self.ctx)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Σ N = q − 2, N = N_n2 + N_2n4 + N_4, Hasse, A ≡ q + 1 (mod 4), and
    /// each list sorted and filed under a matching power class.
    pub fn check_invariants(&self) -> Result<(), String> {
        let q = self.ctx.q() as i64;
        let total: usize = self.classes.values().map(TraceClass::n).sum();
        if total as i64 != q - 2 {
            return Err(format!("Σ N = {total}, expected {}", q - 2));
        }
        for (&a, c) in &self.classes {
            if c.a != a {
                return Err(format!("class keyed {a} records A = {}", c.a));
            }
            if (a as i128) * (a as i128) > 4 * q as i128 || (q + 1 - a).rem_euclid(4) != 0 {
                return Err(format!("A = {a} violates |A| ≤ 2√q or 4 | q + 1 − A"));
            }
            if c.n() != c.n_n2 + c.n_2n4 + c.n_4 {
                return Err(format!("A = {a}: N = {} but N_n2 + N_2n4 + N_4 = {}", c.n(), c.n_n2 + c.n_2n4 + c.n_4));
            }
            if c.ds.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("A = {a}: parameter list not strictly sorted"));
            }
            let count = |k| c.ds.iter().filter(|d| d.fourth_power_class() == k).count();
            if (count(PowerClass::Nonsquare), count(PowerClass::SquareNotFourth), count(PowerClass::FourthPower))
                != (c.n_n2, c.n_2n4, c.n_4)
            {
                return Err(format!("A = {a}: refined counts disagree with the parameter list"));
            }
        }
        Ok(())
    }

    /// Leading `#` comment with version and field, then
    /// A,N,N_n2,N_2n4,N_4,d_list with the list space-separated.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# format_version={FORMAT_VERSION} field={}\n", self.ctx);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["A", "N", "N_n2", "N_2n4", "N_4", "d_list"]).unwrap();
        for c in self.classes.values() {
            let ds: Vec<String> = c.ds.iter().map(FieldElement::atom).collect();
            w.write_record([
                c.a.to_string(),
                c.n().to_string(),
                c.n_n2.to_string(),
                c.n_2n4.to_string(),
                c.n_4.to_string(),
                ds.join(" "),
            ])
            .unwrap();
        }
        out.push_str(&String::from_utf8(w.into_inner().unwrap()).unwrap());
        out
    }

    pub fn from_csv(text: &str) -> Result<CensusTable, CensusError> {
        let perr = |m: String| CensusError::Parse(m);
        let header = text.lines().next().ok_or_else(|| perr("empty input".into()))?;
        let meta = header.strip_prefix('#').ok_or_else(|| perr("missing # header".into()))?;
        let mut field = None;
        for kv in meta.split_whitespace() {
            match kv.split_once('=') {
                Some(("format_version", v)) if v != FORMAT_VERSION.to_string() => {
                    return Err(perr(format!("unsupported format version {v}")))
                }
                Some(("field", v)) => field = Some(FieldCtx::parse_bounded(v, crate::ff::ARITH_MAX_Q)?),
                _ => {}
            }
        }
        let ctx = field.ok_or_else(|| perr("header has no field".into()))?;
        let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let mut classes = BTreeMap::new();
        for rec in rd.records() {
            let rec = rec.map_err(|e| perr(e.to_string()))?;
            let num = |i: usize| -> Result<i64, CensusError> {
                rec.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| perr(format!("bad number in column {i}")))
            };
            let a = num(0)?;
            let ds = parse_list(ctx, rec.get(5).unwrap_or(""))?;
            if ds.len() as i64 != num(1)? {
                return Err(perr(format!("A = {a}: N disagrees with the list")));
            }
            let c = TraceClass { a, ds, n_n2: num(2)? as usize, n_2n4: num(3)? as usize, n_4: num(4)? as usize };
            classes.insert(a, c);
        }
        let t = CensusTable { ctx, classes };
        t.check_invariants().map_err(perr)?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        let j = JsonCensus {
            format_version: FORMAT_VERSION,
            field: self.ctx.to_string(),
            q: self.ctx.q(),
            classes: self
                .classes
                .values()
                .map(|c| JsonClass {
                    a: c.a,
                    n: c.n(),
                    n_n2: c.n_n2,
                    n_2n4: c.n_2n4,
                    n_4: c.n_4,
                    d_list: c.ds.iter().map(FieldElement::to_string).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&j).unwrap()
    }

    pub fn from_json(text: &str) -> Result<CensusTable, CensusError> {
        let perr = |m: String| CensusError::Parse(m);
        let j: JsonCensus = serde_json::from_str(text).map_err(|e| perr(e.to_string()))?;
        if j.format_version != FORMAT_VERSION {
            return Err(perr(format!("unsupported format version {}", j.format_version)));
        }
        let ctx = FieldCtx::parse_bounded(&j.field, crate::ff::ARITH_MAX_Q)?;
        let mut classes = BTreeMap::new();
        for c in j.classes {
            let ds = c.d_list.iter().map(|s| ctx.parse_element(s)).collect::<Result<Vec<_>, _>>()?;
            if ds.len() != c.n {
                return Err(perr(format!("A = {}: N disagrees with the list", c.a)));
            }
            classes.insert(c.a, TraceClass { a: c.a, ds, n_n2: c.n_n2, n_2n4: c.n_2n4, n_4: c.n_4 });
        }
        let t = CensusTable { ctx, classes };
        t.check_invariants().map_err(perr)?;
        Ok(t)
    }

    /// Human-readable summary, one line per trace.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in self.classes.values() {
            let _ = writeln!(s, "A = {:>4}: N = {} (n2 {}, 2n4 {}, 4 {})", c.a, c.n(), c.n_n2, c.n_2n4, c.n_4);
        }
        s
    }
}

fn parse_list(ctx: &'static FieldCtx, s: &str) -> Result<Vec<FieldElement>, CensusError> {
    s.split_whitespace().map(|t| ctx.parse_element(t).map_err(CensusError::from)).collect()
}

#[derive(Serialize, Deserialize)]
struct JsonCensus {
    format_version: u32,
    field: String,
    q: u64,
    classes: Vec<JsonClass>,
}

#[derive(Serialize, Deserialize)]
struct JsonClass {
    #[serde(rename = "A")]
    a: i64,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "N_n2")]
    n_n2: usize,
    #[serde(rename = "N_2n4")]
    n_2n4: usize,
    #[serde(rename = "N_4")]
    n_4: usize,
    d_list: Vec<String>,
}
