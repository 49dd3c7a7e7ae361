//! Distance-type measures of non-Gaussianity for one-mode bosonic field states.
//!
//! Three degrees are provided for states that are diagonal in the Fock basis,
//! each comparing a state `ρ` with the thermal state `ρ_G` of equal mean
//! photon number:
//!
//! - Hilbert–Schmidt: `δ_HS = Tr[(ρ − ρ_G)²] / (2 Tr ρ²)`
//! - relative entropy: `δ_RE = S(ρ_G) − S(ρ)`
//! - Bures (fidelity): `δ_F = 1 − √F(ρ, ρ_G)`, which for commuting states is
//!   `1 − Σ √(p_l s_l)`
//!
//! Every infinite photon-number series is truncated with a certified tail
//! bound, and the photon-added thermal state family has closed forms for its
//! purity (via a Legendre polynomial), overlap and `δ_HS`, which the crate
//! cross-checks against the raw series.
//!
//! Modules:
//! - [`specfun`]: Pochhammer symbols, Gauss `2F1`, Legendre `P_M(z)` for `z ≥ 1`.
//! - [`states`]: photon-number distributions, thermal references, moments.
//! - [`measures`]: the three degrees plus Fock and pure-state closed forms.
//! - [`sweep`]: parameter sweeps and CSV/JSON emission used by the CLI.
//! - [`verify`]: the self-verification suite behind `nongauss verify`.

pub mod error;
mod estimate;
pub mod input;
pub mod measures;
pub mod oracle;
pub mod specfun;
pub mod states;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use estimate::Estimate;
pub use measures::{measure_all, Measure, MeasureTriple};
pub use num_complex::Complex64;
pub use specfun::SeriesControl;
pub use states::{CovarianceSummary, PhotonNumberDistribution, StateSpec, ThermalReference};
