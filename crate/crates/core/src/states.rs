//! Photon-number distributions of the supported one-mode state families,
//! their thermal (Gaussian) reference states, and the moments, generating
//! functions, overlaps and purities built from them.
//!
//! Most quantities exist twice: as a truncated series over a
//! [`PhotonNumberDistribution`] and, for photon-added thermal states, as a
//! closed form. The two paths are cross-checked in the tests and by
//! `nongauss verify`.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::estimate::Estimate;
use crate::specfun::{gauss_2f1, legendre_p, SeriesControl};

const NORM_TOL: f64 = 1e-12;
const PURE_NORM_TOL: f64 = 1e-9;

/// A one-mode state family the library knows how to describe.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// Thermal state with mean photon number `nbar`.
    Thermal { nbar: f64 },
    /// Number state `|m⟩`.
    Fock { m: u32 },
    /// `m` photons added to a thermal state of mean photon number `nbar`.
    Pats { m: u32, nbar: f64 },
    /// Arbitrary Fock-diagonal state given by its photon-number probabilities.
    CustomDiagonal { probs: Vec<f64> },
    /// Pure state `Σ c_l |l⟩` given by its Fock amplitudes.
    PureFock { coeffs: Vec<Complex64> },
}

impl StateSpec {
    /// Validated custom diagonal state: nonnegative entries summing to one.
    pub fn custom(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return domain("custom distribution is empty");
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return domain(format!(
                "custom probabilities must be finite and nonnegative, got {bad}"
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(total - 1.0));
        }
        Ok(Self::CustomDiagonal { probs })
    }

    /// Validated pure state: amplitudes of unit norm.
    pub fn pure(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("pure state has no amplitudes");
        }
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(norm - 1.0));
        }
        Ok(Self::PureFock { coeffs })
    }

    /// Checks the invariants of every variant.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Thermal { nbar } | Self::Pats { nbar, .. } => thermal_ratio(*nbar).map(|_| ()),
            Self::Fock { .. } => Ok(()),
            Self::CustomDiagonal { probs } => Self::custom(probs.clone()).map(|_| ()),
            Self::PureFock { coeffs } => Self::pure(coeffs.clone()).map(|_| ()),
        }
    }

    /// `(M, x)` for the thermal-family states, where thermal is `M = 0` and
    /// Fock is `x = 0`.
    pub fn pats_params(&self) -> Option<(u32, f64)> {
        match *self {
            Self::Thermal { nbar } => Some((0, nbar)),
            Self::Fock { m } => Some((m, 0.0)),
            Self::Pats { m, nbar } => Some((m, nbar)),
            _ => None,
        }
    }

    /// Whether the state is Gaussian by construction.
    pub fn is_thermal(&self) -> bool {
        matches!(
            self,
            Self::Thermal { .. } | Self::Pats { m: 0, .. } | Self::Fock { m: 0 }
        )
    }

    /// Short human-readable label.
    pub fn describe(&self) -> String {
        match self {
            Self::Thermal { nbar } => format!("thermal nbar={nbar}"),
            Self::Fock { m } => format!("fock M={m}"),
            Self::Pats { m, nbar } => format!("pats M={m} nbar={nbar}"),
            Self::CustomDiagonal { probs } => format!("custom diagonal ({} levels)", probs.len()),
            Self::PureFock { coeffs } => format!("pure ({} amplitudes)", coeffs.len()),
        }
    }
}

/// Thermal ratio `x = nbar / (nbar + 1)`, rejecting negative or infinite
/// mean photon numbers.
pub fn thermal_ratio(nbar: f64) -> Result<f64> {
    if !nbar.is_finite() || nbar < 0.0 {
        return domain(format!(
            "mean photon number must be finite and >= 0, got {nbar}"
        ));
    }
    Ok(nbar / (nbar + 1.0))
}

/// Inverse of [`thermal_ratio`]; `x` must lie in `[0, 1)`.
pub fn nbar_from_ratio(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return domain(format!("thermal ratio x must lie in [0, 1), got {x}"));
    }
    Ok(x / (1.0 - x))
}

/// Geometric majorant of the discarded tail: `p_{L+1+k} ≤ first · ratio^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct GeometricTail {
    first: f64,
    ratio: f64,
}

/// Truncated photon-number law `p_0 ..= p_L` of a Fock-diagonal state.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonNumberDistribution {
    probs: Vec<f64>,
    tail_mass: f64,
    source: StateSpec,
    tail: Option<GeometricTail>,
}

impl PhotonNumberDistribution {
    /// Builds the distribution of any diagonal state family.
    pub fn from_spec(spec: &StateSpec, ctl: SeriesControl) -> Result<Self> {
        match spec {
            StateSpec::Thermal { nbar } => {
                let mut d = pats_probabilities(0, *nbar, ctl)?;
                d.source = spec.clone();
                Ok(d)
            }
            StateSpec::Fock { m } => Ok(fock_distribution(*m)),
            StateSpec::Pats { m, nbar } => pats_probabilities(*m, *nbar, ctl),
            StateSpec::CustomDiagonal { probs } => {
                StateSpec::custom(probs.clone())?;
                Ok(Self {
                    probs: probs.clone(),
                    tail_mass: 0.0,
                    source: spec.clone(),
                    tail: None,
                })
            }
            StateSpec::PureFock { .. } => Err(Error::Unsupported(
                "a pure superposition is not Fock-diagonal".into(),
            )),
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of retained levels, `L + 1`.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Certified upper bound on the probability beyond the truncation.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn source(&self) -> &StateSpec {
        &self.source
    }

    /// Upper bound on `Σ_{l>L} l p_l`.
    pub fn weighted_tail(&self) -> f64 {
        match self.tail {
            Some(GeometricTail { first, ratio }) => {
                let start = self.probs.len() as f64;
                first * (start / (1.0 - ratio) + ratio / (1.0 - ratio).powi(2))
            }
            None => 0.0,
        }
    }

    /// Upper bound on `-Σ_{l>L} p_l ln p_l`.
    ///
    /// `-p ln p` is increasing for `p ≤ 1/e`, so the geometric majorant of
    /// the probabilities also majorizes the entropy tail.
    pub fn entropy_tail(&self) -> f64 {
        match self.tail {
            Some(GeometricTail { first, ratio }) if first > 0.0 => {
                if first > (-1.0_f64).exp() {
                    return f64::INFINITY;
                }
                let geo = first / (1.0 - ratio);
                let slope = if ratio > 0.0 {
                    -ratio.ln() * first * ratio / (1.0 - ratio).powi(2)
                } else {
                    0.0
                };
                -first.ln() * geo + slope
            }
            _ => 0.0,
        }
    }
}

fn fock_distribution(m: u32) -> PhotonNumberDistribution {
    let mut probs = vec![0.0; m as usize + 1];
    probs[m as usize] = 1.0;
    PhotonNumberDistribution {
        probs,
        tail_mass: 0.0,
        source: StateSpec::Fock { m },
        tail: None,
    }
}

/// Photon-number law of the `m`-photon-added thermal state,
/// `p_l = C(l, m) (1-x)^(m+1) x^(l-m)` for `l ≥ m`.
///
/// The cutoff `L` is the first index where the probability tail, the
/// `l`-weighted tail and the tail `σ^(L+1)` of the matching thermal
/// reference all fall below `ctl.tol`.
pub fn pats_probabilities(
    m: u32,
    nbar: f64,
    ctl: SeriesControl,
) -> Result<PhotonNumberDistribution> {
    pats_probabilities_min_len(m, nbar, ctl, 0)
}

/// As [`pats_probabilities`], keeping at least `min_len` levels.
pub fn pats_probabilities_min_len(
    m: u32,
    nbar: f64,
    ctl: SeriesControl,
    min_len: usize,
) -> Result<PhotonNumberDistribution> {
    let x = thermal_ratio(nbar)?;
    let source = StateSpec::Pats { m, nbar };
    if x == 0.0 {
        let mut d = fock_distribution(m);
        d.source = source;
        return Ok(d);
    }

    let mf = f64::from(m);
    let mean = nbar * (mf + 1.0) + mf;
    let sigma = mean / (mean + 1.0);

    let mut probs = vec![0.0; m as usize];
    let mut p = (1.0 - x).powi(m as i32 + 1);
    if p == 0.0 {
        return Err(Error::Degenerate(format!(
            "p_M underflows for M={m}, nbar={nbar}"
        )));
    }
    let mut sigma_pow = sigma.powi(m as i32 + 1);
    loop {
        let l = (probs.len()) as f64;
        probs.push(p);
        // p_{l+1} = p_l · x (l+1)/(l+1-m); the ratio decreases towards x.
        let next = p * x * (l + 1.0) / (l + 1.0 - mf);
        let ratio = x * (l + 2.0) / (l + 2.0 - mf);
        if ratio < 1.0 && probs.len() >= min_len {
            let tail = next / (1.0 - ratio);
            let weighted = next * ((l + 1.0) / (1.0 - ratio) + ratio / (1.0 - ratio).powi(2));
            if tail < ctl.tol && weighted < ctl.tol && sigma_pow < ctl.tol {
                return Ok(PhotonNumberDistribution {
                    probs,
                    tail_mass: tail,
                    source,
                    tail: Some(GeometricTail { first: next, ratio }),
                });
            }
        }
        if probs.len() >= ctl.max_terms {
            return Err(Error::Convergence {
                max_terms: ctl.max_terms,
                last_term: next,
            });
        }
        p = next;
        sigma_pow *= sigma;
    }
}

/// `⟨N̂⟩ = Σ l p_l`, with the bound on the truncated `l`-weighted tail.
pub fn mean_occupancy(d: &PhotonNumberDistribution) -> Estimate {
    let value = d.probs.iter().enumerate().map(|(l, p)| l as f64 * p).sum();
    Estimate::new(value, d.weighted_tail())
}

/// Closed-form mean photon number of a photon-added thermal state.
pub fn pats_mean_occupancy(m: u32, nbar: f64) -> Result<f64> {
    thermal_ratio(nbar)?;
    Ok(nbar * (f64::from(m) + 1.0) + f64::from(m))
}

/// Thermal state `s_l = σ^l / (⟨N̂⟩ + 1)` with `σ = ⟨N̂⟩/(⟨N̂⟩ + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalReference {
    mean_n: f64,
    sigma: f64,
}

impl ThermalReference {
    pub fn new(mean_n: f64) -> Result<Self> {
        if !mean_n.is_finite() || mean_n < 0.0 {
            return domain(format!(
                "reference mean occupancy must be finite and >= 0, got {mean_n}"
            ));
        }
        Ok(Self {
            mean_n,
            sigma: mean_n / (mean_n + 1.0),
        })
    }

    pub fn mean_n(&self) -> f64 {
        self.mean_n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `s_l`, with `0^0 = 1` so the vacuum reference has `s_0 = 1`.
    pub fn prob(&self, l: usize) -> f64 {
        let exp = i32::try_from(l).unwrap_or(i32::MAX);
        self.sigma.powi(exp) / (self.mean_n + 1.0)
    }

    /// `s_0 ..= s_{len-1}` by repeated multiplication.
    pub fn probs(&self, len: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(len);
        let mut s = 1.0 / (self.mean_n + 1.0);
        for _ in 0..len {
            out.push(s);
            s *= self.sigma;
        }
        out
    }

    /// Exact tail `Σ_{l ≥ len} s_l = σ^len`.
    pub fn tail_from(&self, len: usize) -> f64 {
        self.sigma.powi(i32::try_from(len).unwrap_or(i32::MAX))
    }

    /// `Tr ρ_G² = 1/(2⟨N̂⟩ + 1)`.
    pub fn purity(&self) -> f64 {
        1.0 / (2.0 * self.mean_n + 1.0)
    }

    /// von Neumann entropy `(⟨N̂⟩+1) ln(⟨N̂⟩+1) − ⟨N̂⟩ ln ⟨N̂⟩`.
    pub fn entropy(&self) -> f64 {
        let n = self.mean_n;
        let lower = if n > 0.0 { n * n.ln() } else { 0.0 };
        (n + 1.0) * (n + 1.0).ln() - lower
    }
}

/// Gaussian reference of a Fock-diagonal state: the thermal state with the
/// same mean occupancy.
pub fn reference_thermal(d: &PhotonNumberDistribution) -> ThermalReference {
    let mean = mean_occupancy(d).value.max(0.0);
    ThermalReference {
        mean_n: mean,
        sigma: mean / (mean + 1.0),
    }
}

/// Closed-form reference probabilities of a photon-added thermal state,
/// `s_l = [n̄(M+1)+M]^l / [(M+1)(n̄+1)]^(l+1)`.
pub fn pats_reference_prob(m: u32, nbar: f64, l: u32) -> Result<f64> {
    let mean = pats_mean_occupancy(m, nbar)?;
    let denom = (f64::from(m) + 1.0) * (nbar + 1.0);
    Ok((mean / denom).powi(l as i32) / denom)
}

/// Closed-form generating function `G(y) = Σ p_l y^l`.
///
/// For the thermal family this is `y^M ((1-x)/(1-xy))^(M+1)`.
pub fn generating_function(spec: &StateSpec, y: f64) -> Result<f64> {
    let (m, nbar) = spec.pats_params().ok_or_else(|| {
        Error::Unsupported(format!(
            "no closed generating function for {}",
            spec.describe()
        ))
    })?;
    let x = thermal_ratio(nbar)?;
    if y.is_nan() || y < 0.0 {
        return domain(format!(
            "generating function argument must be >= 0, got {y}"
        ));
    }
    if x * y >= 1.0 {
        return domain(format!(
            "generating function diverges: x*y = {} >= 1",
            x * y
        ));
    }
    Ok(y.powi(m as i32) * ((1.0 - x) / (1.0 - x * y)).powi(m as i32 + 1))
}

/// Truncated series `Σ_{l≤L} p_l y^l` for `0 ≤ y ≤ 1`.
pub fn generating_function_series(d: &PhotonNumberDistribution, y: f64) -> Result<Estimate> {
    if !(0.0..=1.0).contains(&y) {
        return domain(format!(
            "series generating function needs 0 <= y <= 1, got {y}"
        ));
    }
    let mut pow = 1.0;
    let mut sum = 0.0;
    for p in &d.probs {
        sum += p * pow;
        pow *= y;
    }
    Ok(Estimate::new(sum, d.tail_mass * pow))
}

/// Purity of the photon-added thermal state via the Legendre form
/// `((1-x)/(1+x))^(M+1) P_M((1+x²)/(1-x²))`.
pub fn purity_closed(m: u32, nbar: f64) -> Result<f64> {
    let x = thermal_ratio(nbar)?;
    let z = (1.0 + x * x) / (1.0 - x * x);
    Ok(((1.0 - x) / (1.0 + x)).powi(m as i32 + 1) * legendre_p(m, z)?)
}

/// Purity of the photon-added thermal state via
/// `(1-x)^(2(M+1)) 2F1(M+1, M+1; 1; x²)`.
pub fn purity_hypergeometric(m: u32, nbar: f64, ctl: SeriesControl) -> Result<f64> {
    let x = thermal_ratio(nbar)?;
    let a = f64::from(m) + 1.0;
    Ok((1.0 - x).powi(2 * (m as i32 + 1)) * gauss_2f1(a, a, 1.0, x * x, ctl)?)
}

/// `Σ p_l²`; the tail is at most `tail_mass²`.
pub fn purity_series(d: &PhotonNumberDistribution) -> Estimate {
    let value = d.probs.iter().map(|p| p * p).sum();
    Estimate::new(value, d.tail_mass * d.tail_mass)
}

/// Hilbert–Schmidt overlap `Σ p_l s_l`, tail bounded by Cauchy–Schwarz.
pub fn hs_overlap(d: &PhotonNumberDistribution, reference: &ThermalReference) -> Estimate {
    let value = d
        .probs
        .iter()
        .zip(reference.probs(d.len()))
        .map(|(p, s)| p * s)
        .sum();
    let err = (d.tail_mass * reference.tail_from(d.len())).sqrt();
    Estimate::new(value, err)
}

/// Closed form `⟨N̂⟩^M / (⟨N̂⟩ + n̄ + 1)^(M+1)` of the overlap for a
/// photon-added thermal state.
pub fn hs_overlap_pats_closed(m: u32, nbar: f64) -> Result<f64> {
    let mean = pats_mean_occupancy(m, nbar)?;
    let denom = mean + nbar + 1.0;
    Ok((mean / denom).powi(m as i32) / denom)
}

/// First and second moments of a pure state, in the convention where the
/// vacuum has covariance matrix `½·1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceSummary {
    pub mean_alpha: Complex64,
    pub mean_n: f64,
    pub mean_a2: Complex64,
    pub delta: f64,
}

impl CovarianceSummary {
    /// Centered covariance matrix of `(x̂, p̂)` with `x̂ = (â+â†)/√2`,
    /// `p̂ = (â−â†)/(i√2)`.
    pub fn covariance(&self) -> [[f64; 2]; 2] {
        let n_c = self.mean_n - self.mean_alpha.norm_sqr();
        let a2_c = self.mean_a2 - self.mean_alpha * self.mean_alpha;
        let vxx = n_c + 0.5 + a2_c.re;
        let vpp = n_c + 0.5 - a2_c.re;
        let vxp = a2_c.im;
        [[vxx, vxp], [vxp, vpp]]
    }
}

/// Moments and covariance determinant `Δ` of a pure state `Σ c_l |l⟩`.
pub fn moments_from_pure(coeffs: &[Complex64]) -> Result<CovarianceSummary> {
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > PURE_NORM_TOL {
        return Err(Error::Normalization(norm - 1.0));
    }
    let mut alpha = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut n = 0.0;
    for (l, c) in coeffs.iter().enumerate() {
        let lf = l as f64;
        n += lf * c.norm_sqr();
        if let Some(c1) = coeffs.get(l + 1) {
            alpha += (lf + 1.0).sqrt() * c.conj() * c1;
        }
        if let Some(c2) = coeffs.get(l + 2) {
            a2 += ((lf + 1.0) * (lf + 2.0)).sqrt() * c.conj() * c2;
        }
    }
    let mut summary = CovarianceSummary {
        mean_alpha: alpha,
        mean_n: n,
        mean_a2: a2,
        delta: 0.0,
    };
    let v = summary.covariance();
    summary.delta = v[0][0] * v[1][1] - v[0][1] * v[1][0];
    Ok(summary)
}
