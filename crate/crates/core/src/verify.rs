//! Self-verification suite run by `nongauss verify`.
//!
//! Each check compares two independent routes to the same quantity (closed
//! form against series, main path against the log-space oracle, two
//! hypergeometric paths) or asserts a qualitative property of the sweeps.

use std::time::{Duration, Instant};

use crate::error::Result;
use crate::measures::{
    delta_f_diag, delta_f_fock, delta_hs_diag, delta_hs_direct, delta_hs_fock,
    delta_hs_pats_closed, delta_re_diag, delta_re_pure, measure_all, Measure,
};
use crate::oracle::pats_oracle;
use crate::specfun::{gauss_2f1, gauss_2f1_via_transform, legendre_p, SeriesControl};
use crate::states::{
    generating_function, generating_function_series, hs_overlap, hs_overlap_pats_closed,
    mean_occupancy, moments_from_pure, nbar_from_ratio, pats_mean_occupancy, pats_probabilities,
    purity_closed, purity_hypergeometric, purity_series, reference_thermal,
    PhotonNumberDistribution, StateSpec,
};
use crate::sweep::{self, evaluate_point, point_from_record, RealGrid, SweepConfig, SweepParam};

/// Regression digits for `PATS(M=1, n̄=1)`, from a 30-digit direct summation.
pub const PATS_1_1_DELTA_RE: f64 = 0.369_893_677_105_244_7;
pub const PATS_1_1_DELTA_F: f64 = 0.156_415_184_055_150_73;

pub const ORACLE_AGREEMENT_TOL: f64 = 1e-9;
pub const CLOSED_FORM_TOL: f64 = 1e-10;
pub const FOCK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSize {
    Small,
    Full,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub ctl: SeriesControl,
    pub grid: GridSize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            ctl: SeriesControl::default(),
            grid: GridSize::Full,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

type Outcome = std::result::Result<String, String>;
type Check = fn(&VerifyOptions) -> Outcome;

const CHECKS: &[(&str, Check)] = &[
    ("gaussian-null", gaussian_null),
    ("fock-closed-forms", fock_closed_forms),
    ("purity-three-ways", purity_three_ways),
    ("hs-closed-form", hs_closed_form),
    ("overlap-closed-form", overlap_closed_form),
    ("monotone-in-x", monotone_in_x),
    ("monotone-in-m-and-nbar", monotone_in_m),
    ("oracle-agreement", oracle_agreement),
    ("hypergeometric-identities", hypergeometric_identities),
    ("normalization", normalization),
    ("mean-occupancy", mean_occupancy_identity),
    ("generating-function", generating_function_paths),
    ("thermal-is-pats0", thermal_is_pats0),
    ("fock-limit", fock_limit),
    ("pure-entropy", pure_entropy),
    ("measure-bounds", measure_bounds),
    ("sweep-determinism", sweep_determinism),
];

/// Runs every check, in a fixed order.
pub fn run_all(opts: &VerifyOptions) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let result = check(opts);
            let elapsed = start.elapsed();
            let (passed, detail) = match result {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome {
                name,
                passed,
                detail,
                elapsed,
            }
        })
        .collect()
}

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn m_range(opts: &VerifyOptions, max: u32) -> Vec<u32> {
    match opts.grid {
        GridSize::Full => (0..=max).collect(),
        GridSize::Small => (0..=max).step_by(3).collect(),
    }
}

const X_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
const NBAR_GRID: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

fn diag(
    spec: &StateSpec,
    ctl: SeriesControl,
) -> std::result::Result<PhotonNumberDistribution, String> {
    lift(PhotonNumberDistribution::from_spec(spec, ctl))
}

fn gaussian_null(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for nbar in [0.0, 0.1, 1.0, 5.0, 20.0] {
        let spec = StateSpec::Thermal { nbar };
        let d = diag(&spec, opts.ctl)?;
        let r = reference_thermal(&d);
        let series = [
            lift(delta_hs_diag(&d, &r))?.value,
            lift(delta_hs_direct(&d, &r))?.value,
            delta_re_diag(&d, &r).value,
            delta_f_diag(&d, &r).value,
        ];
        let t = lift(measure_all(&spec, opts.ctl))?;
        for m in Measure::ALL {
            worst = worst.max(lift(t.require(m))?.value.abs());
        }
        for v in series {
            worst = worst.max(v.abs());
        }
        ensure(worst <= CLOSED_FORM_TOL, || {
            format!("nbar={nbar}: |delta| = {worst:e}")
        })?;
    }
    Ok(format!("max |delta| = {worst:.2e}"))
}

fn fock_closed_forms(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for m in 0..=10u32 {
        let d = diag(&StateSpec::Fock { m }, opts.ctl)?;
        let r = reference_thermal(&d);
        let coeffs: Vec<num_complex::Complex64> = (0..=m)
            .map(|l| num_complex::Complex64::new(if l == m { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let delta = lift(moments_from_pure(&coeffs))?.delta;
        let nu = f64::from(m) + 0.5;
        let diffs = [
            (delta_f_diag(&d, &r).value - delta_f_fock(m)).abs(),
            (lift(delta_hs_diag(&d, &r))?.value - delta_hs_fock(m)).abs(),
            (delta_re_diag(&d, &r).value - lift(delta_re_pure(nu * nu))?).abs(),
            (delta_re_diag(&d, &r).value - lift(delta_re_pure(delta))?).abs(),
        ];
        for diff in diffs {
            worst = worst.max(diff);
        }
        ensure(worst <= FOCK_TOL, || format!("M={m}: deviation {worst:e}"))?;
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn purity_three_ways(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for m in m_range(opts, 10) {
        for x in X_GRID {
            let nbar = lift(nbar_from_ratio(x))?;
            let closed = lift(purity_closed(m, nbar))?;
            let series = purity_series(&lift(pats_probabilities(m, nbar, opts.ctl))?).value;
            let hyper = lift(purity_hypergeometric(m, nbar, opts.ctl))?;
            let a = f64::from(m) + 1.0;
            let via = (1.0 - x).powi(2 * (m as i32 + 1))
                * lift(gauss_2f1_via_transform(a, a, 1.0, x * x, opts.ctl))?;
            for v in [series, hyper, via] {
                worst = worst.max((v - closed).abs());
            }
            ensure(worst <= CLOSED_FORM_TOL, || {
                format!("M={m} x={x}: closed {closed} series {series} 2F1 {hyper} transform {via}")
            })?;
        }
    }
    let spot = lift(purity_closed(1, 1.0))?;
    ensure((spot - 5.0 / 27.0).abs() <= 2.0 * f64::EPSILON, || {
        format!("purity(M=1, nbar=1) = {spot}, expected 5/27")
    })?;
    Ok(format!("max deviation {worst:.2e}; spot 5/27 ok"))
}

fn hs_closed_form(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for m in m_range(opts, 10) {
        for x in X_GRID {
            let nbar = lift(nbar_from_ratio(x))?;
            let closed = lift(delta_hs_pats_closed(m, nbar))?;
            let d = lift(pats_probabilities(m, nbar, opts.ctl))?;
            let r = reference_thermal(&d);
            let gf = lift(delta_hs_diag(&d, &r))?.value;
            let raw = lift(delta_hs_direct(&d, &r))?.value;
            worst = worst.max((gf - closed).abs()).max((raw - closed).abs());
            ensure(worst <= CLOSED_FORM_TOL, || {
                format!("M={m} x={x}: closed {closed} generating {gf} raw {raw}")
            })?;
        }
    }
    let spot = lift(delta_hs_pats_closed(1, 1.0))?;
    ensure((spot - 208.0 / 875.0).abs() <= 1e-14, || {
        format!("spot {spot} != 208/875")
    })?;
    Ok(format!("max deviation {worst:.2e}; spot 208/875 ok"))
}

fn overlap_closed_form(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for m in m_range(opts, 10) {
        for x in X_GRID {
            let nbar = lift(nbar_from_ratio(x))?;
            let d = lift(pats_probabilities(m, nbar, opts.ctl))?;
            let series = hs_overlap(&d, &reference_thermal(&d)).value;
            let closed = lift(hs_overlap_pats_closed(m, nbar))?;
            worst = worst.max((series - closed).abs());
            ensure(worst <= CLOSED_FORM_TOL, || {
                format!("M={m} x={x}: {series} vs {closed}")
            })?;
        }
    }
    let spot = lift(hs_overlap_pats_closed(1, 1.0))?;
    ensure((spot - 0.12).abs() <= 1e-15, || {
        format!("spot {spot} != 3/25")
    })?;
    Ok(format!("max deviation {worst:.2e}; spot 3/25 ok"))
}

fn strictly_monotone(values: &[f64], decreasing: bool) -> bool {
    values
        .windows(2)
        .all(|w| if decreasing { w[1] < w[0] } else { w[1] > w[0] })
}

fn monotone_in_x(opts: &VerifyOptions) -> Outcome {
    let cfg = SweepConfig {
        param: SweepParam::X,
        grid: RealGrid {
            from: 0.0,
            to: 0.95,
            steps: 50,
        },
        m_list: vec![1, 3, 5, 10],
        ctl: opts.ctl,
        ..SweepConfig::default()
    };
    let rows = lift(sweep::run_sweep(&cfg))?;
    for m in &cfg.m_list {
        let block: Vec<_> = rows.iter().filter(|r| r.m == *m).collect();
        for meas in Measure::ALL {
            let v: Vec<f64> = block
                .iter()
                .map(|r| r.value(meas).unwrap_or(f64::NAN))
                .collect();
            ensure(strictly_monotone(&v, true), || {
                format!("{meas} not strictly decreasing in x for M={m}")
            })?;
        }
    }
    Ok("3 measures x 4 values of M, 50 points each".into())
}

fn monotone_in_m(opts: &VerifyOptions) -> Outcome {
    let nbars = [0.1, 1.0, 2.0, 5.0];
    let cfg = SweepConfig {
        param: SweepParam::M,
        m_list: (0..=15).collect(),
        nbar_list: nbars.to_vec(),
        ctl: opts.ctl,
        ..SweepConfig::default()
    };
    let rows = lift(sweep::run_sweep(&cfg))?;
    for nbar in nbars {
        let block: Vec<_> = rows.iter().filter(|r| r.param == nbar).collect();
        for meas in Measure::ALL {
            let v: Vec<f64> = block
                .iter()
                .map(|r| r.value(meas).unwrap_or(f64::NAN))
                .collect();
            ensure(v[0] == 0.0, || {
                format!("{meas} at M=0, nbar={nbar} is {}", v[0])
            })?;
            ensure(strictly_monotone(&v, false), || {
                format!("{meas} not strictly increasing in M for nbar={nbar}")
            })?;
        }
    }
    for m in 1..=15u32 {
        for meas in Measure::ALL {
            let v: Vec<f64> = nbars
                .iter()
                .map(|nb| {
                    rows.iter()
                        .find(|r| r.m == m && r.param == *nb)
                        .and_then(|r| r.value(meas))
                        .unwrap_or(f64::NAN)
                })
                .collect();
            ensure(strictly_monotone(&v, true), || {
                format!("{meas} not strictly decreasing in nbar at M={m}: {v:?}")
            })?;
        }
    }
    Ok("increasing in M from 0, decreasing in nbar".into())
}

fn oracle_agreement(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for m in [1u32, 3, 5] {
        for nbar in [0.5, 1.0, 2.0] {
            let t = lift(measure_all(&StateSpec::Pats { m, nbar }, opts.ctl))?;
            let o = lift(pats_oracle(m, nbar))?;
            let diffs = [
                (lift(t.require(Measure::Re))?.value - o.delta_re).abs(),
                (lift(t.require(Measure::Fid))?.value - o.delta_f).abs(),
                (lift(t.require(Measure::Hs))?.value - o.delta_hs).abs(),
            ];
            for diff in diffs {
                worst = worst.max(diff);
            }
            ensure(worst <= ORACLE_AGREEMENT_TOL, || {
                format!("M={m} nbar={nbar}: deviation {worst:e} from oracle")
            })?;
        }
    }
    let t = lift(measure_all(&StateSpec::Pats { m: 1, nbar: 1.0 }, opts.ctl))?;
    let re = lift(t.require(Measure::Re))?.value;
    let f = lift(t.require(Measure::Fid))?.value;
    ensure(
        (re - PATS_1_1_DELTA_RE).abs() <= ORACLE_AGREEMENT_TOL,
        || format!("delta_re(M=1, nbar=1) = {re}, pinned {PATS_1_1_DELTA_RE}"),
    )?;
    ensure((f - PATS_1_1_DELTA_F).abs() <= ORACLE_AGREEMENT_TOL, || {
        format!("delta_f(M=1, nbar=1) = {f}, pinned {PATS_1_1_DELTA_F}")
    })?;
    Ok(format!("max deviation {worst:.2e}; pinned values ok"))
}

/// Parameter triples for the two-path `2F1` check. At `z = 1/2` the
/// transformed argument is `-1`, on the edge of the unit disk, so only
/// triples whose transformed series terminates are used there.
pub fn transform_grid() -> Vec<(f64, f64, f64, f64)> {
    let avals: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.0];
    let bvals = [0.5, 1.0, 2.5];
    let cvals: [f64; 4] = [1.0, 1.5, 2.5, 3.0];
    let mut out = Vec::new();
    for z in [0.1, 0.25, 0.5] {
        for &a in &avals {
            for &b in &bvals {
                for &c in &cvals {
                    let terminates = (c - a) <= 0.0 && (c - a).fract() == 0.0;
                    if z < 0.5 || terminates {
                        out.push((a, b, c, z));
                    }
                }
            }
        }
    }
    out
}

fn hypergeometric_identities(opts: &VerifyOptions) -> Outcome {
    let ctl = opts
        .ctl
        .with_tol(opts.ctl.tol.min(1e-14))
        .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (a, b, c, z) in transform_grid() {
        let direct = lift(gauss_2f1(a, b, c, z, ctl))?;
        let via = lift(gauss_2f1_via_transform(a, b, c, z, ctl))?;
        let rel = (direct - via).abs() / direct.abs();
        worst = worst.max(rel);
        ensure(rel <= CLOSED_FORM_TOL, || {
            format!("2F1({a},{b};{c};{z}): {direct} vs {via}")
        })?;
    }
    for m in 0..=20u32 {
        for i in 0..50 {
            let z = 1.0 + f64::from(i);
            let p = lift(legendre_p(m, z))?;
            let f = lift(gauss_2f1(
                -f64::from(m),
                f64::from(m) + 1.0,
                1.0,
                (1.0 - z) / 2.0,
                ctl,
            ))?;
            let rel = (p - f).abs() / p.abs();
            worst = worst.max(rel);
            ensure(rel <= CLOSED_FORM_TOL, || format!("P_{m}({z}): {p} vs {f}"))?;
        }
    }
    Ok(format!("max relative deviation {worst:.2e}"))
}

fn normalization(opts: &VerifyOptions) -> Outcome {
    for m in m_range(opts, 10) {
        for nbar in NBAR_GRID {
            let d = lift(pats_probabilities(m, nbar, opts.ctl))?;
            let total: f64 = d.probs().iter().sum::<f64>() + d.tail_mass();
            ensure(d.probs().iter().all(|p| *p >= 0.0), || {
                format!("negative p_l at M={m}")
            })?;
            ensure(d.tail_mass() <= opts.ctl.tol, || {
                format!("tail {} above tol", d.tail_mass())
            })?;
            ensure((1.0 - 1e-12..=1.0 + 1e-12).contains(&total), || {
                format!("M={m} nbar={nbar}: sum + tail = {total}")
            })?;
        }
    }
    Ok("sum + tail within 1e-12 of 1".into())
}

fn mean_occupancy_identity(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for m in m_range(opts, 10) {
        for nbar in NBAR_GRID {
            let d = lift(pats_probabilities(m, nbar, opts.ctl))?;
            let diff = (mean_occupancy(&d).value - lift(pats_mean_occupancy(m, nbar))?).abs();
            worst = worst.max(diff);
            ensure(diff <= CLOSED_FORM_TOL, || {
                format!("M={m} nbar={nbar}: deviation {diff:e}")
            })?;
        }
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn generating_function_paths(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for m in m_range(opts, 10) {
        for nbar in NBAR_GRID {
            let spec = StateSpec::Pats { m, nbar };
            let d = lift(pats_probabilities(m, nbar, opts.ctl))?;
            let sigma = reference_thermal(&d).sigma();
            for y in [0.1, 0.5, 0.9, sigma] {
                let closed = lift(generating_function(&spec, y))?;
                let series = lift(generating_function_series(&d, y))?;
                let diff = (closed - series.value).abs();
                worst = worst.max(diff);
                ensure(diff <= series.err + 1e-13, || {
                    format!(
                        "M={m} nbar={nbar} y={y}: {closed} vs {} (bound {:e})",
                        series.value, series.err
                    )
                })?;
            }
        }
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn thermal_is_pats0(opts: &VerifyOptions) -> Outcome {
    for nbar in NBAR_GRID {
        let thermal = diag(&StateSpec::Thermal { nbar }, opts.ctl)?;
        let pats = lift(pats_probabilities(0, nbar, opts.ctl))?;
        ensure(thermal.probs() == pats.probs(), || {
            format!("nbar={nbar}: laws differ")
        })?;
    }
    Ok("identical elementwise".into())
}

fn fock_limit(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for m in 1..=10u32 {
        let t = lift(measure_all(&StateSpec::Pats { m, nbar: 0.0 }, opts.ctl))?;
        let fock = diag(&StateSpec::Fock { m }, opts.ctl)?;
        let re_fock = delta_re_diag(&fock, &reference_thermal(&fock)).value;
        let diffs = [
            (lift(t.require(Measure::Hs))?.value - delta_hs_fock(m)).abs(),
            (lift(t.require(Measure::Re))?.value - re_fock).abs(),
            (lift(t.require(Measure::Fid))?.value - delta_f_fock(m)).abs(),
        ];
        for diff in diffs {
            worst = worst.max(diff);
        }
        ensure(worst <= CLOSED_FORM_TOL, || {
            format!("M={m}: deviation {worst:e}")
        })?;
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn pure_entropy(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    for m in 0..=10u32 {
        let nu = f64::from(m) + 0.5;
        let fock = diag(&StateSpec::Fock { m }, opts.ctl)?;
        let diff = (lift(delta_re_pure(nu * nu))?
            - delta_re_diag(&fock, &reference_thermal(&fock)).value)
            .abs();
        worst = worst.max(diff);
        ensure(diff <= CLOSED_FORM_TOL, || {
            format!("M={m}: deviation {diff:e}")
        })?;
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn measure_bounds(opts: &VerifyOptions) -> Outcome {
    for m in m_range(opts, 10) {
        for x in [0.0, 0.1, 0.5, 0.9, 0.99] {
            let nbar = lift(nbar_from_ratio(x))?;
            let t = lift(measure_all(&StateSpec::Pats { m, nbar }, opts.ctl))?;
            let hs = lift(t.require(Measure::Hs))?;
            let re = lift(t.require(Measure::Re))?;
            let f = lift(t.require(Measure::Fid))?;
            ensure((0.0..=1.0).contains(&f.value), || {
                format!("delta_f = {} at M={m} x={x}", f.value)
            })?;
            ensure(re.value >= 0.0 && hs.value >= 0.0, || {
                format!("negative degree at M={m} x={x}")
            })?;
            for e in [hs.err, re.err, f.err] {
                ensure(e <= sweep::ERR_FACTOR * opts.ctl.tol, || {
                    format!(
                        "error bound {e:e} exceeds {} * tol at M={m} x={x}",
                        sweep::ERR_FACTOR
                    )
                })?;
            }
        }
    }
    Ok("delta_f in [0,1], delta_re >= 0, delta_hs >= 0, errors bounded".into())
}

fn sweep_determinism(opts: &VerifyOptions) -> Outcome {
    let cfg = SweepConfig {
        grid: RealGrid {
            from: 0.0,
            to: 0.9,
            steps: 13,
        },
        m_list: vec![1, 4],
        ctl: opts.ctl,
        ..SweepConfig::default()
    };
    let render = |rows: &[sweep::OutputRecord]| -> std::result::Result<Vec<u8>, String> {
        let mut buf = Vec::new();
        sweep::write_csv(&mut buf, rows).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    let first = render(&lift(sweep::run_sweep(&cfg))?)?;
    let second = render(&lift(sweep::run_sweep(&cfg))?)?;
    ensure(first == second, || {
        "two identical sweeps produced different bytes".into()
    })?;
    let text = String::from_utf8(first).map_err(|e| e.to_string())?;
    let parsed = lift(sweep::parse_csv(&text))?;
    for (row, line) in parsed.iter().zip(text.lines().skip(1)) {
        let point = lift(point_from_record(SweepParam::X, row))?;
        let again = lift(evaluate_point(point, &cfg.measures, cfg.ctl))?;
        ensure(sweep::csv_row(&again) == line, || {
            format!("row did not round-trip: {line}")
        })?;
    }
    Ok(format!("{} rows reproduced byte for byte", parsed.len()))
}
