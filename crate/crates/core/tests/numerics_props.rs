use std::f64::consts::PI;

use helixwg::numerics::stencil::{laplacian_1d, laplacian_2d_rect};
use helixwg::numerics::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

/// Random sparse symmetric matrix with a dominant tridiagonal part.
fn random_symmetric(n: usize, entries: &[(usize, usize, f64)], diag: &[f64]) -> (SparseSymmetricOperator, DMatrix<f64>) {
    let mut b = TripletBuilder::new(n);
    let mut dense = DMatrix::zeros(n, n);
    for i in 0..n {
        let d = 4.0 + diag[i % diag.len()];
        b.add(i, i, d);
        dense[(i, i)] += d;
        if i + 1 < n {
            b.add_symmetric(i, i + 1, -1.0);
            dense[(i, i + 1)] -= 1.0;
            dense[(i + 1, i)] -= 1.0;
        }
    }
    for &(i, j, v) in entries {
        let (i, j) = (i % n, j % n);
        b.add_symmetric(i, j, v);
        dense[(i, j)] += v;
        if i != j {
            dense[(j, i)] += v;
        }
    }
    (b.build().unwrap(), dense)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lanczos_matches_dense_eigen(
        n in 5usize..200,
        k in 1usize..4,
        entries in prop::collection::vec((0usize..200, 0usize..200, -1.0f64..1.0), 0..60),
        diag in prop::collection::vec(-3.0f64..3.0, 1..20),
    ) {
        let (op, dense) = random_symmetric(n, &entries, &diag);
        let opts = EigenOptions { tol: 1e-11, ..Default::default() };
        let r = smallest_eigenpairs_with(&op, k, &opts).unwrap();
        let mut exact: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().copied().collect();
        exact.sort_by(f64::total_cmp);
        for i in 0..k {
            prop_assert!((r.eigenvalues[i] - exact[i]).abs() < 1e-10, "{i}: {} vs {}", r.eigenvalues[i], exact[i]);
            prop_assert!(r.residual_norms[i] <= 1e-11);
        }
    }

    #[test]
    fn linear_coefficient_within_error_estimate(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.5f64..2.0) {
        let f = |e: f64| Ok(a * (c * e).sin() + b * e * e + 1.0);
        let r = extract_linear_coefficient(f, &Ladder::default().points(), None).unwrap();
        let exact = a * c;
        prop_assert!((r.value - exact).abs() <= r.error_estimate.max(1e-12), "{} vs {exact}, est {}", r.value, r.error_estimate);
    }
}

fn log_slope(hs: &[f64], errs: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let x: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let y: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let num: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

#[test]
fn laplacian_1d_converges_at_second_order() {
    let mut hs = Vec::new();
    let mut errs = Vec::new();
    for n in [20, 40, 80, 160] {
        let h = PI / (n as f64 + 1.0);
        let r = smallest_eigenpairs(&laplacian_1d(n, h).unwrap(), 1, 1e-12).unwrap();
        hs.push(h);
        errs.push((r.eigenvalues[0] - 1.0).abs());
    }
    let slope = log_slope(&hs, &errs);
    assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
}

#[test]
fn laplacian_2d_converges_at_second_order() {
    let mut hs = Vec::new();
    let mut errs = Vec::new();
    for m in [10, 20, 40] {
        let h = 1.0 / (m as f64 + 1.0);
        let r = smallest_eigenpairs(&laplacian_2d_rect(m, m, h).unwrap(), 1, 1e-10).unwrap();
        hs.push(h);
        errs.push((r.eigenvalues[0] - 2.0 * PI * PI).abs());
    }
    let slope = log_slope(&hs, &errs);
    assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
}

#[test]
fn harmonic_oscillator_levels() {
    let pot = SampledPotential::from_fn(|x| x * x, 8.0, 0.01).unwrap();
    let r = solve_1d_schrodinger(&pot, 10.0).unwrap();
    for (i, e) in r.eigenvalues.iter().take(4).enumerate() {
        let exact = 2.0 * i as f64 + 1.0;
        assert!((e - exact).abs() < 1e-3, "level {i}: {e}");
    }
}
