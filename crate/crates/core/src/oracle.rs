//! Independent evaluation of the photon-added thermal degrees.
//!
//! Every term is built directly in log space from the binomial law and the
//! closed-form reference probabilities, never through the ratio recurrence
//! of [`crate::states`], and sums are compensated (Neumaier). The
//! truncation is twice the length the main path would pick at a tightened
//! tolerance. `nongauss verify` compares the main path against this one.

use crate::error::Result;
use crate::specfun::SeriesControl;
use crate::states::{pats_mean_occupancy, pats_probabilities, thermal_ratio};

/// Tolerance of the oracle truncation.
pub const ORACLE_TOL: f64 = 1e-15;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::default();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Degrees computed by the oracle path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleTriple {
    pub delta_hs: f64,
    pub delta_re: f64,
    pub delta_f: f64,
    pub levels: usize,
}

/// `ln C(l, m)` as a sum of logarithms.
fn ln_binomial(l: u64, m: u64) -> f64 {
    (1..=m)
        .map(|k| ((l - m + k) as f64 / k as f64).ln())
        .collect::<CompensatedSum>()
        .value()
}

/// Oracle degrees for `PATS(m, nbar)`, summing the first `levels` Fock levels.
pub fn pats_oracle_with_levels(m: u32, nbar: f64, levels: usize) -> Result<OracleTriple> {
    let x = thermal_ratio(nbar)?;
    let mean = pats_mean_occupancy(m, nbar)?;
    let m64 = u64::from(m);
    let ln_one_minus_x = -(nbar.ln_1p());
    let ln_x = if x > 0.0 { x.ln() } else { f64::NEG_INFINITY };
    let ln_ref_denom = ((f64::from(m) + 1.0) * (nbar + 1.0)).ln();
    let ln_mean = if mean > 0.0 {
        mean.ln()
    } else {
        f64::NEG_INFINITY
    };

    let ln_s = |l: u64| -> f64 {
        if l == 0 {
            -ln_ref_denom
        } else {
            l as f64 * ln_mean - (l as f64 + 1.0) * ln_ref_denom
        }
    };

    let mut purity = CompensatedSum::default();
    let mut ref_sq = CompensatedSum::default();
    let mut overlap = CompensatedSum::default();
    let mut neg_entropy = CompensatedSum::default();
    let mut bhattacharyya = CompensatedSum::default();

    for l in 0..levels as u64 {
        let ls = ln_s(l);
        let s = ls.exp();
        ref_sq.add(s * s);
        if l < m64 {
            continue;
        }
        let lp = if l == m64 {
            (f64::from(m) + 1.0) * ln_one_minus_x
        } else {
            ln_binomial(l, m64) + (f64::from(m) + 1.0) * ln_one_minus_x + (l - m64) as f64 * ln_x
        };
        let p = lp.exp();
        if p == 0.0 {
            continue;
        }
        purity.add(p * p);
        overlap.add(p * s);
        neg_entropy.add(p * lp);
        bhattacharyya.add((0.5 * (lp + ls)).exp());
    }

    // Exact geometric tail of the reference purity.
    let sigma = mean / (mean + 1.0);
    let n1 = mean + 1.0;
    let s_tail = sigma.powi(levels as i32);
    ref_sq.add(s_tail * s_tail / (n1 * n1 * (1.0 - sigma * sigma)));

    let pur = purity.value();
    let hs = (pur + ref_sq.value() - 2.0 * overlap.value()) / (2.0 * pur);
    let thermal_entropy = n1 * n1.ln() - if mean > 0.0 { mean * mean.ln() } else { 0.0 };
    Ok(OracleTriple {
        delta_hs: hs,
        delta_re: neg_entropy.value() + thermal_entropy,
        delta_f: 1.0 - bhattacharyya.value(),
        levels,
    })
}

/// Oracle degrees at tolerance [`ORACLE_TOL`] with doubled truncation.
pub fn pats_oracle(m: u32, nbar: f64) -> Result<OracleTriple> {
    let ctl = SeriesControl::new(ORACLE_TOL, 4 * SeriesControl::DEFAULT_MAX_TERMS)?;
    let base = pats_probabilities(m, nbar, ctl)?.len();
    pats_oracle_with_levels(m, nbar, 2 * base)
}
