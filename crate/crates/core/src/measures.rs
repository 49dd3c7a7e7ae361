//! The three distance-type degrees of non-Gaussianity.
//!
//! For a Fock-diagonal state `ρ = Σ p_l |l⟩⟨l|` the Gaussian reference is the
//! thermal state `ρ_G = Σ s_l |l⟩⟨l|` of equal mean occupancy, and the two
//! commute, so all three degrees reduce to sums over the photon-number
//! laws. Closed forms exist for number states and, for `δ_HS`, for the
//! photon-added thermal family.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::estimate::Estimate;
use crate::specfun::{legendre_p, SeriesControl};
use crate::states::{
    self, generating_function, generating_function_series, mean_occupancy, moments_from_pure,
    pats_mean_occupancy, purity_series, reference_thermal, thermal_ratio, PhotonNumberDistribution,
    StateSpec, ThermalReference,
};

/// Round-off allowance below zero before a degree is reported as an error
/// instead of being clamped to zero.
const CLAMP_SLACK: f64 = 1e-12;

/// One of the three degrees of non-Gaussianity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Measure {
    /// Hilbert–Schmidt degree `δ_HS`.
    Hs,
    /// Relative-entropy degree `δ_RE`.
    Re,
    /// Bures (fidelity) degree `δ_F`.
    Fid,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Hs, Measure::Re, Measure::Fid];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Hs => "hs",
            Measure::Re => "re",
            Measure::Fid => "fid",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hs" => Ok(Measure::Hs),
            "re" => Ok(Measure::Re),
            "fid" | "f" => Ok(Measure::Fid),
            other => domain(format!(
                "unknown measure '{other}' (expected hs, re or fid)"
            )),
        }
    }
}

/// `(δ_HS, δ_RE, δ_F)`, each with its truncation error bound. A component
/// is `None` when the state family does not support it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureTriple {
    pub delta_hs: Option<Estimate>,
    pub delta_re: Option<Estimate>,
    pub delta_f: Option<Estimate>,
}

impl MeasureTriple {
    pub fn zero() -> Self {
        Self {
            delta_hs: Some(Estimate::exact(0.0)),
            delta_re: Some(Estimate::exact(0.0)),
            delta_f: Some(Estimate::exact(0.0)),
        }
    }

    pub fn get(&self, m: Measure) -> Option<Estimate> {
        match m {
            Measure::Hs => self.delta_hs,
            Measure::Re => self.delta_re,
            Measure::Fid => self.delta_f,
        }
    }

    /// The requested component, or `Unsupported`.
    pub fn require(&self, m: Measure) -> Result<Estimate> {
        self.get(m).ok_or_else(|| {
            Error::Unsupported(format!("measure {m} is not available for this state"))
        })
    }
}

fn clamp_nonnegative(e: Estimate) -> Estimate {
    if e.value < 0.0 && e.value >= -(e.err + CLAMP_SLACK) {
        Estimate::new(0.0, e.err.max(-e.value))
    } else {
        e
    }
}

/// `δ_F = 1 − Σ √(p_l s_l)`.
///
/// The discarded cross terms are bounded by `√(tail_p · tail_s)`.
pub fn delta_f_diag(d: &PhotonNumberDistribution, reference: &ThermalReference) -> Estimate {
    let bhattacharyya: f64 = d
        .probs()
        .iter()
        .zip(reference.probs(d.len()))
        .map(|(p, s)| (p * s).sqrt())
        .sum();
    let err = (d.tail_mass() * reference.tail_from(d.len())).sqrt();
    clamp_nonnegative(Estimate::new(1.0 - bhattacharyya, err))
}

/// `δ_RE = Σ p_l ln p_l + (⟨N̂⟩+1) ln(⟨N̂⟩+1) − ⟨N̂⟩ ln ⟨N̂⟩`, with `0 ln 0 = 0`.
pub fn delta_re_diag(d: &PhotonNumberDistribution, reference: &ThermalReference) -> Estimate {
    let neg_entropy: f64 = d
        .probs()
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| p * p.ln())
        .sum();
    let n = reference.mean_n();
    let mean_err = mean_occupancy(d).err;
    let slope = if n > 0.0 { (1.0 + 1.0 / n).ln() } else { 0.0 };
    let err = d.entropy_tail() + mean_err * slope;
    clamp_nonnegative(Estimate::new(neg_entropy + reference.entropy(), err))
}

/// `δ_HS` in generating-function form,
/// `½[1 + (1/(2⟨N̂⟩+1) − 2 G(σ)/(⟨N̂⟩+1)) / Σ p_l²]`.
///
/// `G(σ)` is taken in closed form for thermal, Fock and photon-added
/// thermal sources and summed from the distribution otherwise.
pub fn delta_hs_diag(
    d: &PhotonNumberDistribution,
    reference: &ThermalReference,
) -> Result<Estimate> {
    let purity = purity_series(d);
    if purity.value <= 0.0 {
        return Err(Error::Degenerate("purity underflows to zero".into()));
    }
    let n = reference.mean_n();
    let sigma = reference.sigma();
    let g = match generating_function(d.source(), sigma) {
        Ok(v) => Estimate::exact(v),
        Err(Error::Unsupported(_)) => generating_function_series(d, sigma)?,
        Err(e) => return Err(e),
    };
    let numerator = 1.0 / (2.0 * n + 1.0) - 2.0 * g.value / (n + 1.0);
    let value = 0.5 * (1.0 + numerator / purity.value);
    let err = g.err / ((n + 1.0) * purity.value)
        + 0.5 * numerator.abs() * purity.err / (purity.value * purity.value);
    Ok(clamp_nonnegative(Estimate::new(value, err)))
}

/// `δ_HS = Tr[(ρ − ρ_G)²] / (2 Tr ρ²)` summed term by term from
/// `Σ (p_l − s_l)²`, with the reference tail `Σ_{l>L} s_l²` added exactly.
pub fn delta_hs_direct(
    d: &PhotonNumberDistribution,
    reference: &ThermalReference,
) -> Result<Estimate> {
    let purity = purity_series(d);
    if purity.value <= 0.0 {
        return Err(Error::Degenerate("purity underflows to zero".into()));
    }
    let head: f64 = d
        .probs()
        .iter()
        .zip(reference.probs(d.len()))
        .map(|(p, s)| (p - s) * (p - s))
        .sum();
    let n1 = reference.mean_n() + 1.0;
    let sigma2 = reference.sigma() * reference.sigma();
    let s_tail_sq = reference.tail_from(d.len()).powi(2) / (n1 * n1 * (1.0 - sigma2));
    let value = (head + s_tail_sq) / (2.0 * purity.value);
    let cross = (d.tail_mass() * reference.tail_from(d.len())).sqrt();
    let err = (purity.err + 2.0 * cross) / (2.0 * purity.value) + value * purity.err / purity.value;
    Ok(clamp_nonnegative(Estimate::new(value, err)))
}

/// Closed-form `δ_HS` of the photon-added thermal state:
///
/// `½ + ((1+x)/(1−x))^(M+1) / P_M((1+x²)/(1−x²)) · [1/(4⟨N̂⟩+2) − ⟨N̂⟩^M/(⟨N̂⟩+n̄+1)^(M+1)]`
/// with `⟨N̂⟩ = n̄(M+1) + M`.
pub fn delta_hs_pats_closed(m: u32, nbar: f64) -> Result<f64> {
    let x = thermal_ratio(nbar)?;
    let mean = pats_mean_occupancy(m, nbar)?;
    let z = (1.0 + x * x) / (1.0 - x * x);
    let scale = ((1.0 + x) / (1.0 - x)).powi(m as i32 + 1) / legendre_p(m, z)?;
    let denom = mean + nbar + 1.0;
    let overlap = (mean / denom).powi(m as i32) / denom;
    let bracket = 1.0 / (4.0 * mean + 2.0) - overlap;
    Ok((0.5 + scale * bracket).max(0.0))
}

/// `M^M / (M+1)^(M+1)` with `0^0 = 1`: the overlap of `|M⟩` with its
/// thermal reference.
fn fock_overlap(m: u32) -> f64 {
    let mf = f64::from(m);
    (mf / (mf + 1.0)).powi(m as i32) / (mf + 1.0)
}

/// Bures degree of the number state `|M⟩`: `1 − √(M^M/(M+1)^(M+1))`.
pub fn delta_f_fock(m: u32) -> f64 {
    if m == 0 {
        return 0.0;
    }
    1.0 - fock_overlap(m).sqrt()
}

/// Hilbert–Schmidt degree of `|M⟩`: `(M+1)/(2M+1) − M^M/(M+1)^(M+1)`.
pub fn delta_hs_fock(m: u32) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let mf = f64::from(m);
    (mf + 1.0) / (2.0 * mf + 1.0) - fock_overlap(m)
}

/// Relative-entropy degree of a pure state with covariance determinant
/// `Δ`: `(√Δ+½) ln(√Δ+½) − (√Δ−½) ln(√Δ−½)`.
pub fn delta_re_pure(delta: f64) -> Result<f64> {
    if !delta.is_finite() || delta < 0.25 - CLAMP_SLACK {
        return domain(format!(
            "covariance determinant must be >= 1/4, got {delta}"
        ));
    }
    let nu = delta.max(0.25).sqrt();
    let (hi, lo) = (nu + 0.5, nu - 0.5);
    let lower = if lo > 0.0 { lo * lo.ln() } else { 0.0 };
    Ok((hi * hi.ln() - lower).max(0.0))
}

/// The Fock level of a pure state with a single nonzero amplitude.
fn single_level(coeffs: &[Complex]) -> Option<u32> {
    let mut found = None;
    for (l, c) in coeffs.iter().enumerate() {
        let w = c.norm_sqr();
        if w > 1.0 - CLAMP_SLACK {
            found = Some(l as u32);
        } else if w > 0.0 {
            return None;
        }
    }
    found
}

type Complex = num_complex::Complex64;

/// All supported degrees for `spec`.
///
/// Closed forms are used where they exist (Gaussian inputs, number states,
/// `δ_HS` of photon-added thermal states), series otherwise. For pure
/// superpositions only `δ_RE` is available.
pub fn measure_all(spec: &StateSpec, ctl: SeriesControl) -> Result<MeasureTriple> {
    spec.validate()?;
    if spec.is_thermal() {
        return Ok(MeasureTriple::zero());
    }
    match spec {
        StateSpec::Fock { m } => Ok(fock_triple(*m)),
        StateSpec::Pats { m, nbar } => {
            let d = states::pats_probabilities(*m, *nbar, ctl)?;
            let r = reference_thermal(&d);
            Ok(MeasureTriple {
                delta_hs: Some(Estimate::exact(delta_hs_pats_closed(*m, *nbar)?)),
                delta_re: Some(delta_re_diag(&d, &r)),
                delta_f: Some(delta_f_diag(&d, &r)),
            })
        }
        StateSpec::CustomDiagonal { .. } => {
            let d = PhotonNumberDistribution::from_spec(spec, ctl)?;
            let r = reference_thermal(&d);
            Ok(MeasureTriple {
                delta_hs: Some(delta_hs_diag(&d, &r)?),
                delta_re: Some(delta_re_diag(&d, &r)),
                delta_f: Some(delta_f_diag(&d, &r)),
            })
        }
        StateSpec::PureFock { coeffs } => {
            if let Some(m) = single_level(coeffs) {
                return Ok(fock_triple(m));
            }
            let moments = moments_from_pure(coeffs)?;
            Ok(MeasureTriple {
                delta_hs: None,
                delta_re: Some(Estimate::exact(delta_re_pure(moments.delta)?)),
                delta_f: None,
            })
        }
        StateSpec::Thermal { .. } => Ok(MeasureTriple::zero()),
    }
}

fn fock_triple(m: u32) -> MeasureTriple {
    let n = f64::from(m);
    MeasureTriple {
        delta_hs: Some(Estimate::exact(delta_hs_fock(m))),
        delta_re: Some(Estimate::exact(
            ThermalReference::new(n).map(|r| r.entropy()).unwrap_or(0.0),
        )),
        delta_f: Some(Estimate::exact(delta_f_fock(m))),
    }
}
