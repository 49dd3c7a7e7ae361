//! Brute-force checks against dense ladder-operator matrices.

use nongauss::measures::delta_re_pure;
use nongauss::states::moments_from_pure;
use nongauss::{measure_all, Complex64, Measure, SeriesControl, StateSpec};

const LEVELS: usize = 30;

type Matrix = Vec<Vec<Complex64>>;

fn zeros() -> Matrix {
    vec![vec![Complex64::new(0.0, 0.0); LEVELS]; LEVELS]
}

fn annihilation() -> Matrix {
    let mut a = zeros();
    for l in 1..LEVELS {
        a[l - 1][l] = Complex64::new((l as f64).sqrt(), 0.0);
    }
    a
}

fn dagger(m: &Matrix) -> Matrix {
    let mut d = zeros();
    for i in 0..LEVELS {
        for j in 0..LEVELS {
            d[i][j] = m[j][i].conj();
        }
    }
    d
}

fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut c = zeros();
    for i in 0..LEVELS {
        for k in 0..LEVELS {
            if a[i][k] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..LEVELS {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn lin(a: &Matrix, ca: Complex64, b: &Matrix, cb: Complex64) -> Matrix {
    let mut c = zeros();
    for i in 0..LEVELS {
        for j in 0..LEVELS {
            c[i][j] = ca * a[i][j] + cb * b[i][j];
        }
    }
    c
}

fn expect(psi: &[Complex64], op: &Matrix) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..LEVELS {
        for j in 0..LEVELS {
            s += psi[i].conj() * op[i][j] * psi[j];
        }
    }
    s
}

/// Determinant of the symmetrized quadrature covariance matrix.
fn brute_force_delta(coeffs: &[Complex64]) -> f64 {
    let mut psi = vec![Complex64::new(0.0, 0.0); LEVELS];
    psi[..coeffs.len()].copy_from_slice(coeffs);
    let a = annihilation();
    let ad = dagger(&a);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let x = lin(&a, Complex64::new(r, 0.0), &ad, Complex64::new(r, 0.0));
    let p = lin(&a, Complex64::new(0.0, -r), &ad, Complex64::new(0.0, r));
    let (mx, mp) = (expect(&psi, &x).re, expect(&psi, &p).re);
    let vxx = expect(&psi, &mul(&x, &x)).re - mx * mx;
    let vpp = expect(&psi, &mul(&p, &p)).re - mp * mp;
    let sym = lin(
        &mul(&x, &p),
        Complex64::new(0.5, 0.0),
        &mul(&p, &x),
        Complex64::new(0.5, 0.0),
    );
    let vxp = expect(&psi, &sym).re - mx * mp;
    vxx * vpp - vxp * vxp
}

fn normalized(raw: &[(f64, f64)]) -> Vec<Complex64> {
    let v: Vec<Complex64> = raw.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / n).collect()
}

#[test]
fn superposition_of_zero_and_two() {
    let psi = normalized(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    let brute = brute_force_delta(&psi);
    assert!((brute - 1.75).abs() < 1e-12, "{brute}");
    assert!((moments_from_pure(&psi).unwrap().delta - 1.75).abs() < 1e-12);
}

#[test]
fn moments_agree_with_dense_matrices() {
    let states: [&[(f64, f64)]; 5] = [
        &[(1.0, 0.0)],
        &[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
        &[(1.0, 0.0), (0.0, 1.0)],
        &[(0.3, -0.2), (0.5, 0.1), (-0.4, 0.7), (0.2, 0.2)],
        &[
            (0.1, 0.0),
            (0.2, 0.3),
            (0.0, 0.0),
            (0.0, 0.0),
            (0.6, -0.1),
            (0.0, 0.4),
        ],
    ];
    for raw in states {
        let psi = normalized(raw);
        let brute = brute_force_delta(&psi);
        let fast = moments_from_pure(&psi).unwrap().delta;
        assert!((brute - fast).abs() < 1e-12, "{raw:?}: {brute} vs {fast}");

        let t = measure_all(&StateSpec::pure(psi).unwrap(), SeriesControl::default()).unwrap();
        let re = t.require(Measure::Re).unwrap().value;
        assert!((re - delta_re_pure(brute).unwrap()).abs() < 1e-12);
    }
}
