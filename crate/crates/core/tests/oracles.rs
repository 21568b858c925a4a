//! Library results against brute-force dense constructions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qosc::fock::{build_annihilator, build_creator, FockSpace, MultiIndex, OperatorMatrix};
use qosc::qcore::{factorial_weight, jackson_integral, q_exp_product, q_exp_series, q_factorial, q_number, QParam};
use qosc::qqm::{build_hamiltonian, energy_corrected};

fn bracket(n: usize, q: f64) -> f64 {
    (0..n).map(|k| q.powi(k as i32)).sum()
}

fn bracket_factorial(n: usize, q: f64) -> f64 {
    (1..=n).map(|k| bracket(k, q)).product()
}

/// `a_i` written directly from its action on labelled basis vectors.
fn dense_annihilator(space: &FockSpace, q: f64, mode: usize) -> DMatrix<f64> {
    let dim = space.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let nu = space.decode(col);
        let occ = nu.occupations().to_vec();
        if occ[mode - 1] == 0 {
            continue;
        }
        let tail: usize = occ[mode..].iter().sum();
        let mut lowered = occ.clone();
        lowered[mode - 1] -= 1;
        let row = space.encode(&MultiIndex(lowered)).unwrap();
        m[(row, col)] = (q.powi(tail as i32) * bracket(occ[mode - 1], q)).sqrt();
    }
    m
}

fn to_dense(op: &OperatorMatrix) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(op.dim(), op.dim());
    for (r, c, v) in op.entries() {
        assert_eq!(v.im, 0.0);
        m[(r, c)] += v.re;
    }
    m
}

/// Largest entry of `a - b` over columns whose labels keep `margin` quanta of headroom.
fn interior_diff(space: &FockSpace, a: &DMatrix<f64>, b: &DMatrix<f64>, margin: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for col in 0..space.dim() {
        if space.decode(col).occupations().iter().any(|&n| n + margin > space.cutoff()) {
            continue;
        }
        for row in 0..space.dim() {
            worst = worst.max((a[(row, col)] - b[(row, col)]).abs());
        }
    }
    worst
}

fn diag_scale_product(space: &FockSpace, q: f64, from: usize) -> DMatrix<f64> {
    let d: Vec<f64> = (0..space.dim())
        .map(|k| {
            let occ = space.decode(k).0;
            q.powi(occ[from - 1..].iter().sum::<usize>() as i32)
        })
        .collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
}

#[test]
fn q_numbers_match_geometric_sums() {
    for &q in &[0.1, 0.5, 0.9, 0.999] {
        let qp = QParam::new(q).unwrap();
        for n in 0..30 {
            let want = bracket(n, q);
            assert!((q_number(n as f64, &qp) - want).abs() <= 1e-13 * want.max(1.0), "q={q} n={n}");
            let f = bracket_factorial(n, q);
            assert!((q_factorial(n, &qp) - f).abs() <= 1e-12 * f, "q={q} n={n}");
        }
    }
}

#[test]
fn series_and_product_match_direct_sum() {
    for &q in &[0.2, 0.5, 0.8] {
        let qp = QParam::new(q).unwrap();
        let radius = 1.0 / (1.0 - q);
        for &frac in &[0.0, 0.1, -0.3, 0.5] {
            let x = frac * radius;
            let mut term = 1.0;
            let mut direct = 1.0;
            for k in 1..2000 {
                term *= x / bracket(k, q);
                direct += term;
            }
            let product: f64 = 1.0 / (0..2000).map(|k| 1.0 - (1.0 - q) * q.powi(k) * x).product::<f64>();
            let series = q_exp_series(Complex64::new(x, 0.0), &qp, 1e-15).unwrap();
            let prod = q_exp_product(Complex64::new(x, 0.0), &qp, 1e-15).unwrap();
            assert!((series.re - direct).abs() <= 1e-12 * direct.abs(), "q={q} x={x}: {} vs {direct}", series.re);
            assert!((prod.re - product).abs() <= 1e-12 * product.abs(), "q={q} x={x}: {} vs {product}", prod.re);
            assert_eq!(series.im, 0.0);
        }
    }
}

#[test]
fn jackson_sum_reproduces_factorials() {
    for &q in &[0.3, 0.6, 0.9] {
        let qp = QParam::new(q).unwrap();
        for n in 0..6 {
            let got = jackson_integral(|x| factorial_weight(n, x, &qp, 1e-15), &qp, 1e-15).unwrap();
            let want = bracket_factorial(n, q);
            assert!((got - want).abs() <= 1e-10 * want, "q={q} n={n}: {got} vs {want}");
        }
        let direct: f64 = (0..4000).map(|k| q.powi(k) * (q.powi(k) / (1.0 - q)).powi(2)).sum();
        let got = jackson_integral(|x| Ok(x * x), &qp, 1e-16).unwrap();
        assert!((got - direct).abs() <= 1e-10 * direct);
    }
}

#[test]
fn hamiltonian_diagonal_matches_closed_form() {
    let q = 0.7;
    let qp = QParam::new(q).unwrap();
    let space = FockSpace::new(3, 4).unwrap();
    let mut h = DMatrix::zeros(space.dim(), space.dim());
    for i in 1..=3 {
        let a = dense_annihilator(&space, q, i);
        let ad = a.transpose();
        h += (&a * &ad + &ad * &a) * 0.5;
    }
    let lib = to_dense(&build_hamiltonian(&space, &qp).unwrap());
    assert!(interior_diff(&space, &h, &lib, 1) < 1e-13);
    for col in 0..space.dim() {
        let nu = space.decode(col);
        if nu.occupations().iter().any(|&n| n + 1 > space.cutoff()) {
            continue;
        }
        let occ = nu.occupations();
        let want = bracket(occ.iter().sum(), q)
            + 0.5 * (0..3).map(|i| q.powi(occ[i..].iter().sum::<usize>() as i32)).sum::<f64>();
        assert!((h[(col, col)] - want).abs() < 1e-12, "{occ:?}");
        assert!((energy_corrected(&nu, &qp) - want).abs() < 1e-12, "{occ:?}");
    }
}

#[test]
fn single_mode_spectrum_from_eigensolver() {
    let q = 0.4;
    let space = FockSpace::new(1, 8).unwrap();
    let a = dense_annihilator(&space, q, 1);
    let ad = a.transpose();
    let h = (&a * &ad + &ad * &a) * 0.5;
    let mut eig: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    // the top level loses a a† to the truncation
    let mut want: Vec<f64> = (0..8).map(|n| bracket(n, q) + 0.5 * q.powi(n as i32)).collect();
    want.push(0.5 * bracket(8, q));
    want.sort_by(f64::total_cmp);
    for (e, w) in eig.iter().zip(&want) {
        assert!((e - w).abs() < 1e-12, "{e} vs {w}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operators_match_dense_oracle(q in 0.05f64..0.98, n in 1usize..4, cutoff in 2usize..5) {
        let qp = QParam::new(q).unwrap();
        let space = FockSpace::new(n, cutoff).unwrap();
        for i in 1..=n {
            let oracle = dense_annihilator(&space, q, i);
            let a = to_dense(&build_annihilator(&space, &qp, i).unwrap());
            let ad = to_dense(&build_creator(&space, &qp, i).unwrap());
            prop_assert!((&a - &oracle).amax() < 1e-14);
            prop_assert!((&ad - oracle.transpose()).amax() < 1e-14);
        }
    }

    #[test]
    fn defining_relations_hold_on_oracle(q in 0.05f64..0.98, n in 1usize..4, cutoff in 3usize..5) {
        let space = FockSpace::new(n, cutoff).unwrap();
        let a: Vec<_> = (1..=n).map(|i| dense_annihilator(&space, q, i)).collect();
        let sq = q.sqrt();
        for i in 0..n {
            let ad_i = a[i].transpose();
            let comm = &a[i] * &ad_i - &ad_i * &a[i];
            prop_assert!(interior_diff(&space, &comm, &diag_scale_product(&space, q, i + 1), 1) < 1e-13);
            for j in i + 1..n {
                let lhs = &a[i] * &a[j];
                let rhs = (&a[j] * &a[i]) / sq;
                prop_assert!(interior_diff(&space, &lhs, &rhs, 2) < 1e-13);
            }
            for j in (0..n).filter(|&j| j != i) {
                let ad_j = a[j].transpose();
                let lhs = &a[i] * &ad_j;
                let rhs = (&ad_j * &a[i]) * sq;
                prop_assert!(interior_diff(&space, &lhs, &rhs, 1) < 1e-13);
            }
        }
    }

    #[test]
    fn q_number_additivity(q in 0.01f64..0.99, x in 0.0f64..20.0, y in 0.0f64..20.0) {
        let qp = QParam::new(q).unwrap();
        let lhs = q_number(x + y, &qp);
        let rhs = q_number(x, &qp) + q.powf(x) * q_number(y, &qp);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
    }
}
