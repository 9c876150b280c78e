use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{class_number_oracle, deuring_poly};
use super::{
    isogeny_class_formula, supersingular_params, unobstructed_traces, CensusError, CensusTable, FORMAT_VERSION,
};
use crate::ff::{prime_field, FieldCtx};
use crate::nt;

/// A checkable statement about a census.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// The closed-form count of isogeny classes, and the spectrum is the
    /// unobstructed traces plus the supersingular one.
    ClassCount,
    /// S_p by parity of p, S_3 = 1, S_p = 3h(−p), and Deuring roots carry
    /// the supersingular trace.
    SupersingularCount,
    /// N(A)/N(−A) for 8 | q + 1 − A, q ≡ 1 (mod 4).
    KatzRatio,
    /// q ≡ 1 (mod 4), 8 | q + 1 − A: N_n2(A) = N_n2(−A) = N(−A).
    NonsquaresOneMod4,
    /// q ≡ 3 (mod 4): N_n2(A) = N(A) or N(A)/3 by q + 1 − A mod 8.
    NonsquaresThreeMod4,
    /// N_n2(A) ≥ 1 for every unobstructed A.
    CompleteInEveryClass,
    /// q ≡ 3 (mod 4): fourth powers vs 8 | q + 1 − A, and N_4 = N_2 = 2N/3.
    FourthPowersThreeMod4,
    /// q ≡ 1 (mod 4): fourth powers vs 16 | q + 1 − A, and N_4 = N − 2N(−A).
    FourthPowersOneMod4,
    /// q ≡ 1 (mod 4), 8 | q + 1 − A: N_2n4(A) = N_n2(A).
    SquareNonsquareBalance,
}

impl Claim {
    pub const ALL: [Claim; 9] = [
        Claim::ClassCount,
        Claim::SupersingularCount,
        Claim::KatzRatio,
        Claim::NonsquaresOneMod4,
        Claim::NonsquaresThreeMod4,
        Claim::CompleteInEveryClass,
        Claim::FourthPowersThreeMod4,
        Claim::FourthPowersOneMod4,
        Claim::SquareNonsquareBalance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::ClassCount => "class-count",
            Claim::SupersingularCount => "supersingular-count",
            Claim::KatzRatio => "katz-ratio",
            Claim::NonsquaresOneMod4 => "nonsquares-one-mod4",
            Claim::NonsquaresThreeMod4 => "nonsquares-three-mod4",
            Claim::CompleteInEveryClass => "complete-in-every-class",
            Claim::FourthPowersThreeMod4 => "fourth-powers-three-mod4",
            Claim::FourthPowersOneMod4 => "fourth-powers-one-mod4",
            Claim::SquareNonsquareBalance => "square-nonsquare-balance",
        }
    }

    /// The residue class of q the statement is about, if restricted.
    pub fn required_residue(self) -> Option<u64> {
        match self {
            Claim::KatzRatio
            | Claim::NonsquaresOneMod4
            | Claim::FourthPowersOneMod4
            | Claim::SquareNonsquareBalance => Some(1),
            Claim::NonsquaresThreeMod4 | Claim::FourthPowersThreeMod4 => Some(3),
            _ => None,
        }
    }

    pub fn applies_to(self, ctx: &FieldCtx) -> bool {
        self.required_residue().map_or(true, |r| ctx.q() % 4 == r)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Claim::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown claim {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    #[serde(rename = "A", skip_serializing_if = "Option::is_none", default)]
    pub a: Option<i64>,
    pub statement: String,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub format_version: u32,
    pub claim: Claim,
    pub field: String,
    pub q: u64,
    pub status: Status,
    pub checks: Vec<Check>,
    /// One line per failed check, with the parameters involved.
    pub counterexamples: Vec<String>,
    /// Observations that are reported but do not fail the claim.
    pub flags: Vec<String>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Verified
    }
}

struct Builder<'a> {
    table: &'a CensusTable,
    checks: Vec<Check>,
    counterexamples: Vec<String>,
    flags: Vec<String>,
}

impl Builder<'_> {
    fn check(&mut self, a: Option<i64>, statement: String, expected: String, observed: String, ok: bool) {
        if !ok {
            let mut line = match a {
                Some(a) => format!("A = {a}: {statement}: expected {expected}, observed {observed}"),
                None => format!("{statement}: expected {expected}, observed {observed}"),
            };
            if let Some(c) = a.and_then(|a| self.table.get(a)) {
                let ds: Vec<String> = c.ds.iter().take(12).map(|d| d.atom()).collect();
                line.push_str(&format!(" (d ∈ {{{}}}{})", ds.join(", "), if c.n() > 12 { ", …" } else { "" }));
            }
            self.counterexamples.push(line);
        }
        self.checks.push(Check { a, statement, expected, observed, ok });
    }
}

fn ratio(num: i64, den: i64) -> String {
    let g = nt::gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
    let (n, d) = (num / g, den / g);
    if d == 1 {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

/// The predicted N(A)/N(−A) as a reduced fraction, for q ≡ 1 (mod 4) and
/// 8 | q + 1 − A: by ord₂(q + 1 − A) when q ≡ 5 (mod 8); when q ≡ 1
/// (mod 8), 2 at ord₂ = 3 and otherwise by Δ = A² − 4q. None when the
/// rule does not apply (or Δ falls outside its stated range).
pub fn katz_expected_ratio(q: u64, a: i64) -> Option<(i64, i64)> {
    if q % 4 != 1 {
        return None;
    }
    let o = nt::ord2(q as i64 + 1 - a);
    if o < 3 {
        return None;
    }
    if o == 3 {
        return Some((2, 1));
    }
    if q % 8 == 5 {
        return Some(if o == 4 { (3, 1) } else { (5, 1) });
    }
    let delta = a as i128 * a as i128 - 4 * q as i128;
    let od = delta.unsigned_abs().trailing_zeros() as i64;
    let k = od / 2;
    if k < 3 {
        return None;
    }
    // 5 − 3/2^(k−2) and 5 − 1/2^(k−3)
    let minus = |c: i64, e: i64| (5 * (1i64 << e) - c, 1i64 << e);
    if od % 2 == 1 {
        return Some(minus(3, k - 2));
    }
    let u = (delta >> (2 * k)).rem_euclid(8);
    Some(match u {
        1 => (5, 1),
        3 | 7 => minus(3, k - 2),
        5 => minus(1, k - 3),
        _ => unreachable!("Δ/4^k is odd"),
    })
}

pub fn katz_ratio_report(table: &CensusTable) -> Result<TheoremReport, CensusError> {
    theorem_report(table, Claim::KatzRatio)
}

/// Evaluate one claim against a census; refuses fields outside the claim's
/// residue class.
pub fn theorem_report(table: &CensusTable, claim: Claim) -> Result<TheoremReport, CensusError> {
    let ctx = table.ctx;
    if !claim.applies_to(ctx) {
        return Err(CensusError::WrongResidueClass {
            what: claim.name().to_string(),
            needs: format!("q ≡ {} (mod 4)", claim.required_residue().unwrap()),
            field: format!("q = {}", ctx.q()),
        });
    }
    let q = ctx.q() as i64;
    let mut b = Builder { table, checks: Vec::new(), counterexamples: Vec::new(), flags: Vec::new() };
    let t = table;
    let div = |a: i64, m: i64| (q + 1 - a).rem_euclid(m) == 0;
    match claim {
        Claim::ClassCount => {
            let (formula, observed) = (isogeny_class_formula(ctx), t.classes.len() as u64);
            b.check(
                None,
                "number of isogeny classes".into(),
                formula.to_string(),
                observed.to_string(),
                formula == observed,
            );
            let p = ctx.p() as i64;
            let ordinary: Vec<i64> = t.classes.keys().copied().filter(|a| a % p != 0).collect();
            let unob = unobstructed_traces(ctx);
            b.check(
                None,
                "ordinary traces = unobstructed traces".into(),
                fmt_list(&unob),
                fmt_list(&ordinary),
                ordinary == unob,
            );
            let ss: Vec<i64> = t.classes.keys().copied().filter(|a| a % p == 0).collect();
            let mandated = supersingular_trace(ctx);
            if ctx.m() % 2 == 0 && ss.contains(&-mandated) {
                b.flags.push(format!("supersingular trace {} occupied alongside {mandated}", -mandated));
            }
            b.check(
                None,
                "supersingular traces".into(),
                format!("⊆ {{{mandated}}}"),
                fmt_list(&ss),
                ss.iter().all(|&a| a == mandated),
            );
        }
        Claim::SupersingularCount => {
            let p = ctx.p();
            let fp = prime_field(p)?;
            let s_p = supersingular_params(fp)?.len() as u64;
            let h = deuring_poly(p)?;
            let deg = h.degree() as u64;
            b.check(None, format!("deg H_{p}"), ((p - 1) / 2).to_string(), deg.to_string(), deg == (p - 1) / 2);
            if p % 4 == 1 {
                b.check(None, format!("S_{p} for p ≡ 1 (mod 4)"), "0".into(), s_p.to_string(), s_p == 0);
            } else if p == 3 {
                b.check(None, "S_3".into(), "1".into(), s_p.to_string(), s_p == 1);
            } else {
                let hp = class_number_oracle(p)?;
                b.check(None, format!("S_{p} = 3h(−{p})"), (3 * hp).to_string(), s_p.to_string(), s_p == 3 * hp);
            }
            let mandated = supersingular_trace(ctx);
            let roots = supersingular_params(ctx)?;
            for d in &roots {
                let a = t.trace_of(*d);
                b.check(
                    a,
                    format!("trace of Deuring root d = {}", d.atom()),
                    mandated.to_string(),
                    fmt_opt(a),
                    a == Some(mandated),
                );
            }
            // and no parameter outside the roots is supersingular
            let mut by_trace: Vec<_> =
                t.classes.values().filter(|c| c.a % p as i64 == 0).flat_map(|c| c.ds.iter().copied()).collect();
            by_trace.sort();
            b.check(
                None,
                "parameters with p | A are exactly the Deuring roots".into(),
                format!("{} roots", roots.len()),
                format!("{} parameters", by_trace.len()),
                by_trace == roots,
            );
        }
        Claim::KatzRatio => {
            for a in unobstructed_traces(ctx).into_iter().filter(|&a| div(a, 8)) {
                let (n, m) = (t.n(a) as i64, t.n(-a) as i64);
                match katz_expected_ratio(ctx.q(), a) {
                    Some((num, den)) => {
                        let obs = if m == 0 { format!("{n}/0") } else { ratio(n, m) };
                        let ok = m > 0 && n * den == m * num;
                        b.check(Some(a), "N(A)/N(−A)".into(), ratio(num, den), obs, ok);
                    }
                    None => b.check(Some(a), "ratio rule applies".into(), "a rule".into(), "none".into(), false),
                }
            }
        }
        Claim::NonsquaresOneMod4 => {
            for a in t.relevant_traces().into_iter().filter(|&a| div(a, 8)) {
                let (x, y, z) = (t.n_n2(a), t.n_n2(-a), t.n(-a));
                b.check(
                    Some(a),
                    "N_n2(A) = N_n2(−A) = N(−A)".into(),
                    format!("{z} = {z} = {z}"),
                    format!("{x} = {y} = {z}"),
                    x == z && y == z,
                );
            }
        }
        Claim::NonsquaresThreeMod4 => {
            for a in t.relevant_traces() {
                let (n, n2) = (t.n(a), t.n_n2(a));
                if div(a, 8) {
                    b.check(
                        Some(a),
                        "3·N_n2(A) = N(A) (8 | q+1−A)".into(),
                        n.to_string(),
                        (3 * n2).to_string(),
                        3 * n2 == n,
                    );
                } else {
                    b.check(Some(a), "N_n2(A) = N(A) (q+1−A ≡ 4 mod 8)".into(), n.to_string(), n2.to_string(), n2 == n);
                }
            }
        }
        Claim::CompleteInEveryClass => {
            for a in unobstructed_traces(ctx) {
                let n2 = t.n_n2(a);
                b.check(Some(a), "N_n2(A) ≥ 1".into(), "≥ 1".into(), n2.to_string(), n2 >= 1);
            }
        }
        Claim::FourthPowersThreeMod4 | Claim::FourthPowersOneMod4 => {
            let m = if claim == Claim::FourthPowersThreeMod4 { 8 } else { 16 };
            for a in t.relevant_traces() {
                let n4 = t.n_4(a);
                if n4 > 0 {
                    b.check(
                        Some(a),
                        format!("fourth powers ⇒ {m} | q+1−A"),
                        format!("{m} | {}", q + 1 - a),
                        format!("N_4 = {n4}"),
                        div(a, m),
                    );
                }
                if !div(a, m) {
                    continue;
                }
                b.check(Some(a), format!("{m} | q+1−A ⇒ N_4(A) ≥ 1"), "≥ 1".into(), n4.to_string(), n4 >= 1);
                if m == 8 {
                    let (n, n2) = (t.n(a), t.n_2(a));
                    b.check(
                        Some(a),
                        "N_4(A) = N_2(A) = 2N(A)/3".into(),
                        format!("{0} = {0} (3·N_4 = {1})", n4, 2 * n),
                        format!("{n4} = {n2} (3·N_4 = {})", 3 * n4),
                        n4 == n2 && 3 * n4 == 2 * n,
                    );
                } else {
                    let expected = t.n(a) as i64 - 2 * t.n(-a) as i64;
                    b.check(
                        Some(a),
                        "N_4(A) = N(A) − 2N(−A)".into(),
                        expected.to_string(),
                        n4.to_string(),
                        n4 as i64 == expected,
                    );
                }
            }
        }
        Claim::SquareNonsquareBalance => {
            for a in t.relevant_traces().into_iter().filter(|&a| div(a, 8)) {
                let (x, y) = (t.n_2n4(a), t.n_n2(a));
                b.check(Some(a), "N_2n4(A) = N_n2(A)".into(), y.to_string(), x.to_string(), x == y);
            }
        }
    }
    let status = if b.counterexamples.is_empty() { Status::Verified } else { Status::Failed };
    Ok(TheoremReport {
        format_version: FORMAT_VERSION,
        claim,
        field: ctx.to_string(),
        q: ctx.q(),
        status,
        checks: b.checks,
        counterexamples: b.counterexamples,
        flags: b.flags,
    })
}

/// 0 for odd m; ε·2p^(m/2) with ε·p^(m/2) ≡ 1 (mod 4) for even m.
pub(crate) fn supersingular_trace(ctx: &FieldCtx) -> i64 {
    if ctx.m() % 2 == 1 {
        return 0;
    }
    let pk = (ctx.p() as i64).pow(ctx.m() / 2);
    if pk % 4 == 1 {
        2 * pk
    } else {
        -2 * pk
    }
}

fn fmt_list(v: &[i64]) -> String {
    let s: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("{{{}}}", s.join(", "))
}

fn fmt_opt(a: Option<i64>) -> String {
    a.map_or("none".into(), |a| a.to_string())
}
