use proptest::prelude::*;

use nongauss::measures::{delta_f_diag, delta_hs_diag, delta_hs_direct, delta_re_diag};
use nongauss::specfun::{gauss_2f1, legendre_p};
use nongauss::states::{
    mean_occupancy, pats_mean_occupancy, pats_probabilities, reference_thermal,
};
use nongauss::sweep::{
    csv_row, evaluate_point, parse_csv, point_from_record, SweepParam, SweepPoint, CSV_HEADER,
};
use nongauss::{measure_all, Measure, PhotonNumberDistribution, SeriesControl, StateSpec};

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

fn custom_probs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 1..40).prop_filter_map("all zero", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-3).then(|| w.iter().map(|v| v / s).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pats_measures_are_bounded(m in 0u32..12, nbar in 0.0f64..20.0) {
        let t = measure_all(&StateSpec::Pats { m, nbar }, ctl()).unwrap();
        let hs = t.require(Measure::Hs).unwrap().value;
        let re = t.require(Measure::Re).unwrap().value;
        let f = t.require(Measure::Fid).unwrap().value;
        prop_assert!((0.0..1.0).contains(&hs));
        prop_assert!(re >= 0.0);
        prop_assert!((0.0..1.0).contains(&f));
        if m > 0 {
            prop_assert!(hs > 0.0 && re > 0.0 && f > 0.0);
        }
    }

    #[test]
    fn pats_law_is_normalized_with_right_mean(m in 0u32..12, nbar in 0.0f64..20.0) {
        let d = pats_probabilities(m, nbar, ctl()).unwrap();
        prop_assert!(d.probs().iter().all(|p| *p >= 0.0));
        prop_assert!(d.probs()[..m as usize].iter().all(|p| *p == 0.0));
        let total: f64 = d.probs().iter().sum::<f64>() + d.tail_mass();
        prop_assert!((total - 1.0).abs() < 1e-11);
        let mean = mean_occupancy(&d).value;
        let exact = pats_mean_occupancy(m, nbar).unwrap();
        prop_assert!((mean - exact).abs() <= 1e-9 * (1.0 + exact));
    }

    #[test]
    fn custom_states_have_nonnegative_measures(probs in custom_probs()) {
        let spec = StateSpec::custom(probs).unwrap();
        let d = PhotonNumberDistribution::from_spec(&spec, ctl()).unwrap();
        let r = reference_thermal(&d);
        prop_assert!((r.mean_n() - mean_occupancy(&d).value).abs() < 1e-12);
        let gf = delta_hs_diag(&d, &r).unwrap().value;
        let raw = delta_hs_direct(&d, &r).unwrap().value;
        prop_assert!((gf - raw).abs() < 1e-10);
        prop_assert!(gf >= -1e-12);
        prop_assert!(delta_re_diag(&d, &r).value >= 0.0);
        let f = delta_f_diag(&d, &r).value;
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn gauss_2f1_is_symmetric(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.5f64..4.0, z in -0.6f64..0.6) {
        let ab = gauss_2f1(a, b, c, z, ctl()).unwrap();
        let ba = gauss_2f1(b, a, c, z, ctl()).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-10 * (1.0 + ab.abs()));
    }

    #[test]
    fn legendre_is_one_at_one_and_grows(m in 0u32..30, z in 1.0f64..10.0) {
        prop_assert!((legendre_p(m, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let p = legendre_p(m, z).unwrap();
        prop_assert!(p >= 1.0 - 1e-12);
    }

    #[test]
    fn csv_rows_recompute_exactly(m in 0u32..8, x in 0.0f64..0.95) {
        let nbar = x / (1.0 - x);
        let point = SweepPoint { param: x, m, nbar };
        let row = evaluate_point(point, &Measure::ALL, ctl()).unwrap();
        let text = format!("{CSV_HEADER}\n{}\n", csv_row(&row));
        let parsed = parse_csv(&text).unwrap();
        prop_assert_eq!(parsed[0].param.to_bits(), x.to_bits());
        let back = point_from_record(SweepParam::X, &parsed[0]).unwrap();
        let again = evaluate_point(back, &Measure::ALL, ctl()).unwrap();
        prop_assert_eq!(csv_row(&again), csv_row(&row));
    }
}
