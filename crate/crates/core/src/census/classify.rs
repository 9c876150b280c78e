use serde::{Deserialize, Serialize};

use super::{deuring_poly, CensusError};
use crate::curves::{legendre_j, Curve};
use crate::ff::{FieldElement, PowerClass};
use crate::maps::{edwards_iso_class, orbit};
use crate::torsion::{four_torsion_profile, TorsionProfile};

/// Everything known about one parameter d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub field: String,
    pub d: String,
    /// A(d); also the isogeny-class key.
    pub trace: i64,
    /// #L_d(F_q) = #E_d(F_q).
    pub order: u64,
    pub chi_d: i8,
    /// E_d is complete iff d is a nonsquare.
    pub complete: bool,
    pub power_class: PowerClass,
    pub j_invariant: String,
    /// The σ-orbit of d (parameters of isomorphic Legendre curves).
    pub orbit: Vec<String>,
    /// Parameters of Edwards curves isomorphic to E_d over F_q; absent when
    /// F_{q⁴} is out of arithmetic range.
    pub edwards_iso_class: Option<Vec<String>>,
    pub torsion: TorsionProfile,
    pub supersingular: bool,
    /// 8 | #L_d for q ≡ 3 (mod 4), 16 | #L_d for q ≡ 1 (mod 4): the
    /// condition for an original Edwards curve in d's isogeny class.
    pub original_isogenous: bool,
}

pub fn classify(d: FieldElement) -> Result<Classification, CensusError> {
    let f = d.field();
    if d.is_zero() || d.is_one() {
        return Err(CensusError::Degenerate(d.to_string()));
    }
    let trace = Curve::legendre(d)?.trace()?;
    let order = (f.q() as i64 + 1 - trace) as u64;
    let m = if f.q() % 4 == 1 { 16 } else { 8 };
    Ok(Classification {
        field: f.to_string(),
        d: d.to_string(),
        trace,
        order,
        chi_d: d.chi2(),
        complete: d.chi2() == -1,
        power_class: d.fourth_power_class(),
        j_invariant: legendre_j(d).to_string(),
        orbit: orbit(d)?.iter().map(|x| x.to_string()).collect(),
        edwards_iso_class: edwards_iso_class(d).ok().map(|v| v.iter().map(|x| x.to_string()).collect()),
        torsion: four_torsion_profile(d)?,
        supersingular: deuring_poly(f.p())?.eval(d).is_zero(),
        original_isogenous: order % m == 0,
    })
}

impl Classification {
    pub fn is_fourth_power(&self) -> bool {
        self.power_class == PowerClass::FourthPower
    }
}
