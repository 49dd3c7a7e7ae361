//! Acceptance suite. Run with
//! `cargo test -p nongauss --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use nongauss::measures::{
    delta_f_diag, delta_f_fock, delta_hs_diag, delta_hs_direct, delta_hs_fock,
    delta_hs_pats_closed, delta_re_diag, delta_re_pure,
};
use nongauss::oracle::pats_oracle;
use nongauss::specfun::{gauss_2f1, gauss_2f1_via_transform, legendre_p};
use nongauss::states::{
    hs_overlap, hs_overlap_pats_closed, nbar_from_ratio, pats_probabilities, purity_closed,
    purity_hypergeometric, purity_series, reference_thermal,
};
use nongauss::verify::transform_grid;
use nongauss::{measure_all, Measure, PhotonNumberDistribution, SeriesControl, StateSpec};

const NULL_TOL: f64 = 1e-10;
const FOCK_TOL: f64 = 1e-12;
const CLOSED_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-9;
const VERIFY_BUDGET: Duration = Duration::from_secs(60);

const PINNED_RE_1_1: f64 = 0.369_893_677_105_244_7;
const PINNED_F_1_1: f64 = 0.156_415_184_055_150_73;

const X_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn close(a: f64, b: f64, tol: f64, what: impl FnOnce() -> String) -> Result<f64, String> {
    let d = (a - b).abs();
    if d <= tol {
        Ok(d)
    } else {
        Err(format!("{}: {a} vs {b} (|diff| {d:.2e} > {tol:e})", what()))
    }
}

fn triple(spec: &StateSpec) -> Result<[f64; 3], String> {
    let t = ok(measure_all(spec, ctl()))?;
    Ok([
        ok(t.require(Measure::Hs))?.value,
        ok(t.require(Measure::Re))?.value,
        ok(t.require(Measure::Fid))?.value,
    ])
}

fn strictly(v: &[f64], decreasing: bool) -> bool {
    v.windows(2)
        .all(|w| if decreasing { w[1] < w[0] } else { w[1] > w[0] })
}

fn gaussian_null() -> Check {
    let mut worst = 0.0f64;
    for nbar in [0.0, 0.1, 1.0, 5.0, 20.0] {
        let spec = StateSpec::Thermal { nbar };
        for v in triple(&spec)? {
            worst = worst.max(close(v, 0.0, NULL_TOL, || format!("thermal nbar={nbar}"))?);
        }
        // Same state through the generic diagonal series.
        let d = ok(PhotonNumberDistribution::from_spec(&spec, ctl()))?;
        let r = reference_thermal(&d);
        for v in [
            ok(delta_hs_diag(&d, &r))?.value,
            delta_re_diag(&d, &r).value,
            delta_f_diag(&d, &r).value,
        ] {
            worst = worst.max(close(v, 0.0, NULL_TOL, || {
                format!("thermal series nbar={nbar}")
            })?);
        }
    }
    Ok(format!("max |delta| {worst:.1e}"))
}

fn fock_closed_forms() -> Check {
    let mut worst = 0.0f64;
    for m in 0..=10u32 {
        let d = ok(PhotonNumberDistribution::from_spec(
            &StateSpec::Fock { m },
            ctl(),
        ))?;
        let r = reference_thermal(&d);
        let mf = f64::from(m);
        let entropy = (mf + 1.0) * (mf + 1.0).ln() - if m == 0 { 0.0 } else { mf * mf.ln() };
        let pure = ok(delta_re_pure((mf + 0.5).powi(2)))?;
        let pairs = [
            (delta_f_diag(&d, &r).value, delta_f_fock(m), "delta_f"),
            (
                ok(delta_hs_direct(&d, &r))?.value,
                delta_hs_fock(m),
                "delta_hs raw",
            ),
            (
                ok(delta_hs_diag(&d, &r))?.value,
                delta_hs_fock(m),
                "delta_hs",
            ),
            (
                delta_re_diag(&d, &r).value,
                entropy,
                "delta_re entropy form",
            ),
            (
                delta_re_diag(&d, &r).value,
                pure,
                "delta_re pure-state form",
            ),
        ];
        for (a, b, name) in pairs {
            worst = worst.max(close(a, b, FOCK_TOL, || format!("{name} M={m}"))?);
        }
    }
    Ok(format!("M in 0..=10, max |diff| {worst:.1e}"))
}

fn purity_triple() -> Check {
    let mut worst = 0.0f64;
    for m in 0..=10u32 {
        for x in X_GRID {
            let nbar = ok(nbar_from_ratio(x))?;
            let legendre = ok(purity_closed(m, nbar))?;
            let series = purity_series(&ok(pats_probabilities(m, nbar, ctl()))?).value;
            let hyper = ok(purity_hypergeometric(m, nbar, ctl()))?;
            worst = worst.max(close(legendre, series, CLOSED_TOL, || {
                format!("series M={m} x={x}")
            })?);
            worst = worst.max(close(legendre, hyper, CLOSED_TOL, || {
                format!("2F1 M={m} x={x}")
            })?);
        }
    }
    let spot = ok(purity_closed(1, 1.0))?;
    close(spot, 5.0 / 27.0, 4.0 * f64::EPSILON, || {
        "purity(M=1, nbar=1) vs 5/27".into()
    })?;
    Ok(format!("max |diff| {worst:.1e}; spot 5/27 ok"))
}

fn hs_closed_form() -> Check {
    let mut worst = 0.0f64;
    for m in 0..=10u32 {
        for x in X_GRID {
            let nbar = ok(nbar_from_ratio(x))?;
            let closed = ok(delta_hs_pats_closed(m, nbar))?;
            let d = ok(pats_probabilities(m, nbar, ctl()))?;
            let r = reference_thermal(&d);
            let gf = ok(delta_hs_diag(&d, &r))?.value;
            let raw = ok(delta_hs_direct(&d, &r))?.value;
            worst = worst.max(close(closed, gf, CLOSED_TOL, || {
                format!("generating form M={m} x={x}")
            })?);
            worst = worst.max(close(closed, raw, CLOSED_TOL, || {
                format!("raw sum M={m} x={x}")
            })?);
        }
    }
    let spot = ok(delta_hs_pats_closed(1, 1.0))?;
    close(spot, 208.0 / 875.0, 4.0 * f64::EPSILON, || {
        "delta_hs(M=1, nbar=1) vs 208/875".into()
    })?;
    Ok(format!("max |diff| {worst:.1e}; spot 208/875 ok"))
}

fn overlap_closed_form() -> Check {
    let mut worst = 0.0f64;
    for m in 0..=10u32 {
        for x in X_GRID {
            let nbar = ok(nbar_from_ratio(x))?;
            let d = ok(pats_probabilities(m, nbar, ctl()))?;
            let series = hs_overlap(&d, &reference_thermal(&d)).value;
            let closed = ok(hs_overlap_pats_closed(m, nbar))?;
            worst = worst.max(close(closed, series, CLOSED_TOL, || {
                format!("M={m} x={x}")
            })?);
        }
    }
    let spot = ok(hs_overlap_pats_closed(1, 1.0))?;
    close(spot, 3.0 / 25.0, 4.0 * f64::EPSILON, || {
        "overlap(M=1, nbar=1) vs 3/25".into()
    })?;
    Ok(format!("max |diff| {worst:.1e}; spot 3/25 ok"))
}

fn decreasing_in_x() -> Check {
    let xs: Vec<f64> = (0..50).map(|i| 0.95 * f64::from(i) / 49.0).collect();
    for m in [1u32, 3, 5, 10] {
        let mut cols = [Vec::new(), Vec::new(), Vec::new()];
        for &x in &xs {
            let t = triple(&StateSpec::Pats {
                m,
                nbar: ok(nbar_from_ratio(x))?,
            })?;
            for k in 0..3 {
                cols[k].push(t[k]);
            }
        }
        for (k, name) in ["delta_hs", "delta_re", "delta_f"].iter().enumerate() {
            if !strictly(&cols[k], true) {
                return Err(format!("{name} not strictly decreasing in x for M={m}"));
            }
        }
    }
    Ok("50-point x grid, M in {1,3,5,10}".into())
}

fn monotone_in_m_and_nbar() -> Check {
    let nbars = [0.1, 1.0, 2.0, 5.0];
    let mut table = Vec::new();
    for &nbar in &nbars {
        let mut rows = Vec::new();
        for m in 0..=15u32 {
            rows.push(triple(&StateSpec::Pats { m, nbar })?);
        }
        for k in 0..3 {
            let col: Vec<f64> = rows.iter().map(|t| t[k]).collect();
            if col[0].abs() > NULL_TOL {
                return Err(format!("measure {k} at M=0, nbar={nbar} is {}", col[0]));
            }
            if !strictly(&col, false) {
                return Err(format!(
                    "measure {k} not strictly increasing in M at nbar={nbar}"
                ));
            }
        }
        table.push(rows);
    }
    for m in 1..=15usize {
        for k in 0..3 {
            let col: Vec<f64> = table.iter().map(|rows| rows[m][k]).collect();
            if !strictly(&col, true) {
                return Err(format!(
                    "measure {k} not strictly decreasing in nbar at M={m}: {col:?}"
                ));
            }
        }
    }
    Ok("M in 0..=15 from zero, nbar 0.1 -> 5 decreasing".into())
}

fn oracle_agreement() -> Check {
    let mut worst = 0.0f64;
    for m in [1u32, 3, 5] {
        for nbar in [0.5, 1.0, 2.0] {
            let t = triple(&StateSpec::Pats { m, nbar })?;
            let o = ok(pats_oracle(m, nbar))?;
            worst = worst.max(close(t[1], o.delta_re, ORACLE_TOL, || {
                format!("delta_re M={m} nbar={nbar}")
            })?);
            worst = worst.max(close(t[2], o.delta_f, ORACLE_TOL, || {
                format!("delta_f M={m} nbar={nbar}")
            })?);
        }
    }
    let t = triple(&StateSpec::Pats { m: 1, nbar: 1.0 })?;
    close(t[1], PINNED_RE_1_1, ORACLE_TOL, || {
        "pinned delta_re(1, 1)".into()
    })?;
    close(t[2], PINNED_F_1_1, ORACLE_TOL, || {
        "pinned delta_f(1, 1)".into()
    })?;
    Ok(format!("max |diff| {worst:.1e}; pinned values ok"))
}

fn appendix_identities() -> Check {
    let tight = ok(SeriesControl::new(1e-14, 100_000))?;
    let mut worst = 0.0f64;
    for (a, b, c, z) in transform_grid() {
        let direct = ok(gauss_2f1(a, b, c, z, tight))?;
        let via = ok(gauss_2f1_via_transform(a, b, c, z, tight))?;
        worst = worst.max(close(via / direct, 1.0, CLOSED_TOL, || {
            format!("2F1({a},{b};{c};{z})")
        })?);
    }
    for m in 0..=20u32 {
        for z in [1.0, 1.1, 1.5, 2.0, 3.0, 5.0, 10.0] {
            let p = ok(legendre_p(m, z))?;
            let f = ok(gauss_2f1(
                -f64::from(m),
                f64::from(m) + 1.0,
                1.0,
                (1.0 - z) / 2.0,
                tight,
            ))?;
            worst = worst.max(close(f / p, 1.0, CLOSED_TOL, || format!("P_{m}({z})"))?);
        }
    }
    Ok(format!("max relative diff {worst:.1e}"))
}

fn verify_command() -> Check {
    let start = Instant::now();
    let out = ok(Command::new(env!("CARGO_BIN_EXE_nongauss"))
        .arg("verify")
        .output())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!(
            "exit {:?}\n{}",
            out.status.code(),
            String::from_utf8_lossy(&out.stdout)
        ));
    }
    if elapsed > VERIFY_BUDGET {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("exit 0 in {:.2}s", elapsed.as_secs_f64()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("gaussian null", gaussian_null),
        ("fock closed forms", fock_closed_forms),
        ("purity three ways", purity_triple),
        ("hilbert-schmidt closed form", hs_closed_form),
        ("overlap closed form", overlap_closed_form),
        ("decreasing in x", decreasing_in_x),
        ("monotone in M and nbar", monotone_in_m_and_nbar),
        ("oracle agreement", oracle_agreement),
        ("hypergeometric identities", appendix_identities),
        ("verify command", verify_command),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        match check() {
            Ok(detail) => println!("PASS {n:>2} {name}: {detail}"),
            Err(detail) => {
                println!("FAIL {n:>2} {name}: {detail}");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
