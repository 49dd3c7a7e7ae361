//! Special-function kernel: Pochhammer symbols, the Gauss hypergeometric
//! series `2F1(a, b; c; z)`, its Pfaff-type linear transformation, and
//! Legendre polynomials on `z ≥ 1`.
//!
//! All routines are pure `f64` functions. Series are summed term by term with
//! a stopping rule that certifies a geometric tail bound, see
//! [`SeriesControl`].

use crate::error::{domain, Error, Result};

/// Stopping rule for every truncated series in the crate.
///
/// A series is cut once the next term is below `tol` in magnitude while the
/// term ratio is below one, so the discarded tail is at most
/// `tol / (1 - ratio)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub tol: f64,
    pub max_terms: usize,
}

impl SeriesControl {
    pub const DEFAULT_TOL: f64 = 1e-12;
    pub const DEFAULT_MAX_TERMS: usize = 100_000;

    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return domain(format!(
                "series tolerance must be positive and finite, got {tol}"
            ));
        }
        if max_terms == 0 {
            return domain("max_terms must be at least 1");
        }
        Ok(Self { tol, max_terms })
    }

    /// Same term cap, different tolerance.
    pub fn with_tol(self, tol: f64) -> Result<Self> {
        Self::new(tol, self.max_terms)
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            tol: Self::DEFAULT_TOL,
            max_terms: Self::DEFAULT_MAX_TERMS,
        }
    }
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`, with `(a)_0 = 1`.
///
/// Iterated product, so integer inputs stay exact until the result exceeds
/// 2^53. Overflow saturates to infinity.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + f64::from(k)))
}

fn nonpositive_integer(v: f64) -> Option<u64> {
    (v <= 0.0 && v.fract() == 0.0 && v.is_finite()).then(|| (-v) as u64)
}

/// Degree of the polynomial when `a` or `b` is a non-positive integer.
fn terminating_degree(a: f64, b: f64) -> Option<u64> {
    match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(m), Some(n)) => Some(m.min(n)),
        (Some(m), None) | (None, Some(m)) => Some(m),
        (None, None) => None,
    }
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` summed from its power
/// series.
///
/// When `a` or `b` is a non-positive integer the series is a polynomial and
/// is summed exactly for any real `z`. Otherwise `|z| < 1` is required.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return domain("2F1 parameters must be finite");
    }

    if let Some(degree) = terminating_degree(a, b) {
        if let Some(pole) = nonpositive_integer(c) {
            if pole < degree {
                return domain(format!(
                    "2F1: c = {c} hits a pole before the series terminates at degree {degree}"
                ));
            }
        }
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..degree {
            let n = n as f64;
            term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
            sum += term;
        }
        return Ok(sum);
    }

    if nonpositive_integer(c).is_some() {
        return domain(format!("2F1: c = {c} is a non-positive integer"));
    }
    if z.abs() >= 1.0 {
        return domain(format!("2F1: |z| = {} must be below 1", z.abs()));
    }
    if z == 0.0 {
        return Ok(1.0);
    }

    let mut term = 1.0_f64;
    let mut sum = 0.0;
    for n in 0..ctl.max_terms {
        sum += term;
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        let next = term * ratio;
        // Term ratios tend to |z| from either side; the larger of the two
        // bounds every later ratio once the rational factor is monotone.
        let bound_ratio = ratio.abs().max(z.abs());
        if next.abs() < ctl.tol && bound_ratio < 1.0 {
            return Ok(sum + next);
        }
        term = next;
    }
    Err(Error::Convergence {
        max_terms: ctl.max_terms,
        last_term: term,
    })
}

/// `2F1(a, b; c; z)` evaluated through
/// `(1 - z)^(-b) · 2F1(c - a, b; c; z / (z - 1))`.
///
/// For `z ∈ [0, 1)` the transformed argument is non-positive. It is an
/// independent evaluation path used to cross-check [`gauss_2f1`].
pub fn gauss_2f1_via_transform(a: f64, b: f64, c: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    if z.is_nan() || z >= 1.0 {
        return domain(format!("linear transformation needs z < 1, got {z}"));
    }
    let w = z / (z - 1.0);
    let inner = gauss_2f1(c - a, b, c, w, ctl)?;
    Ok((1.0 - z).powf(-b) * inner)
}

/// Legendre polynomial `P_m(z)` for `z ≥ 1`.
///
/// Upward three-term recurrence from `P_0 = 1`, `P_1 = z`. For `z > 1` the
/// polynomial is the dominant solution, so the recurrence is stable.
pub fn legendre_p(m: u32, z: f64) -> Result<f64> {
    if !z.is_finite() || z < 1.0 {
        return domain(format!(
            "Legendre P_M is only evaluated for finite z >= 1, got {z}"
        ));
    }
    if m == 0 {
        return Ok(1.0);
    }
    let (mut prev, mut cur) = (1.0_f64, z);
    for n in 1..m {
        let n = f64::from(n);
        let next = ((2.0 * n + 1.0) * z * cur - n * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(1.0, 5), 120.0);
        assert_eq!(pochhammer(2.5, 3), 39.375);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
    }

    #[test]
    fn pochhammer_recurrence_exact_for_integers() {
        for a in 1..6 {
            for n in 0..12 {
                let a = f64::from(a);
                assert_eq!(pochhammer(a, n + 1), pochhammer(a, n) * (a + f64::from(n)));
            }
        }
    }

    #[test]
    fn series_control_validation() {
        assert!(SeriesControl::new(0.0, 10).is_err());
        assert!(SeriesControl::new(-1e-3, 10).is_err());
        assert!(SeriesControl::new(f64::NAN, 10).is_err());
        assert!(SeriesControl::new(1e-8, 0).is_err());
        let d = SeriesControl::default();
        assert_eq!(d.tol, 1e-12);
        assert_eq!(d.max_terms, 100_000);
    }

    #[test]
    fn hypergeometric_trivial_cases() {
        let v = gauss_2f1(1.0, 1.0, 1.0, 0.5, ctl()).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        assert_eq!(gauss_2f1(0.3, 4.2, 1.7, 0.0, ctl()).unwrap(), 1.0);
        assert_eq!(
            gauss_2f1_via_transform(1.0, 1.0, 1.0, 0.0, ctl()).unwrap(),
            1.0
        );
    }

    #[test]
    fn hypergeometric_matches_high_precision_value() {
        // 2F1(2, 2; 1; 1/4) = (1 + z)/(1 - z)^3 = 80/27, confirmed to 25 digits
        // by an arbitrary-precision partial sum.
        let expected = 80.0 / 27.0;
        let direct = gauss_2f1(2.0, 2.0, 1.0, 0.25, ctl()).unwrap();
        let transformed = gauss_2f1_via_transform(2.0, 2.0, 1.0, 0.25, ctl()).unwrap();
        assert!((direct - expected).abs() < 1e-11, "{direct}");
        assert!((transformed - direct).abs() < 1e-10);
    }

    #[test]
    fn hypergeometric_domain_and_convergence_errors() {
        assert!(matches!(
            gauss_2f1(0.5, 0.5, 1.0, 1.0, ctl()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            gauss_2f1(0.5, 0.5, 1.0, -1.5, ctl()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            gauss_2f1(0.5, 0.5, -2.0, 0.3, ctl()),
            Err(Error::Domain(_))
        ));
        let tight = SeriesControl::new(1e-15, 5).unwrap();
        assert!(matches!(
            gauss_2f1(0.5, 0.5, 1.0, 0.9, tight),
            Err(Error::Convergence { max_terms: 5, .. })
        ));
        assert!(gauss_2f1_via_transform(1.0, 1.0, 1.0, 1.0, ctl()).is_err());
    }

    #[test]
    fn terminating_series_ignores_unit_disk() {
        // 2F1(-2, b; c; z) = 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let (b, c, z) = (3.0, 2.0, -7.0);
        let expected = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        let v = gauss_2f1(-2.0, b, c, z, ctl()).unwrap();
        assert!((v - expected).abs() < 1e-12 * expected.abs());
        // Pole at c = -3 comes after the series terminates at degree 2.
        assert!(gauss_2f1(-2.0, b, -3.0, z, ctl()).is_ok());
        assert!(gauss_2f1(-2.0, b, -1.0, z, ctl()).is_err());
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre_p(0, 7.3).unwrap(), 1.0);
        assert_eq!(legendre_p(1, 5.0 / 3.0).unwrap(), 5.0 / 3.0);
        assert_eq!(legendre_p(2, 3.0).unwrap(), 13.0);
        // P_3(z) = (5z³ - 3z)/2
        assert!((legendre_p(3, 2.0).unwrap() - 17.0).abs() < 1e-13);
        for m in 0..40 {
            assert_eq!(legendre_p(m, 1.0).unwrap(), 1.0);
        }
        assert!(legendre_p(3, 0.99).is_err());
        assert!(legendre_p(3, f64::NAN).is_err());
    }

    #[test]
    fn legendre_matches_terminating_hypergeometric() {
        for m in 0..=20u32 {
            for i in 0..50 {
                let z = 1.0 + f64::from(i);
                let p = legendre_p(m, z).unwrap();
                let f = gauss_2f1(
                    -f64::from(m),
                    f64::from(m) + 1.0,
                    1.0,
                    (1.0 - z) / 2.0,
                    ctl(),
                )
                .unwrap();
                assert!((p - f).abs() <= 1e-10 * p.abs(), "m={m} z={z}: {p} vs {f}");
            }
        }
    }
}
