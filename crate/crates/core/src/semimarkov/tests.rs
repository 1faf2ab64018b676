use super::*;
use crate::channel::ChannelState;
use crate::linalg::{bloch_vector, qubit_from_bloch};
use crate::mub::build_mubs;
use proptest::prelude::*;

fn c(re: f64) -> Complex<f64> {
    Complex::new(re, 0.0)
}

/// `f_α = ((d−1)/d) γ_α e^{−((d−1)/d) γ t}`, whose λ is `e^{−(γ−γ_α)t}`.
fn markovian(gamma: &[f64]) -> SemiMarkovSpec<f64> {
    let d = gamma.len() - 1;
    let c = (d - 1) as f64 / d as f64;
    let total: f64 = gamma.iter().sum();
    SemiMarkovSpec::new(d, gamma.iter().map(|&g| TimeFunction::exp_sum(&[(c * g, c * total)])).collect()).unwrap()
}

fn markov_lambda(gamma: &[f64], alpha: usize, t: f64) -> f64 {
    let total: f64 = gamma.iter().sum();
    (-(total - gamma[alpha]) * t).exp()
}

#[test]
fn rejects_bad_shapes() {
    assert!(matches!(SemiMarkovSpec::<f64>::new(1, vec![TimeFunction::zero(); 2]), Err(GpcError::UnsupportedDimension(1))));
    assert!(matches!(
        SemiMarkovSpec::<f64>::new(2, vec![TimeFunction::zero(); 2]),
        Err(GpcError::WrongLength { expected: 3, found: 2 })
    ));
}

#[test]
fn q_eigenvalues_match_matrix_action() {
    for d in [2usize, 3, 5] {
        let m = build_mubs::<f64>(d).unwrap();
        let values: Vec<f64> = (0..=d).map(|a| 0.1 + 0.37 * a as f64 - 0.05 * (a * a) as f64).collect();
        assert!(verify_q_eigenvalues(&m, &values).unwrap() < 1e-12);
    }
}

#[test]
fn markovian_laplace_and_dyson_agree_with_exponentials() {
    let gamma = [0.4, 0.7, 1.1];
    let spec = markovian(&gamma);
    let grid = TimeGrid::new(4.0, 4000).unwrap();
    let lap = lambda_via_laplace(&spec, &grid, &TalbotInversion::default()).unwrap();
    let m = build_mubs(2).unwrap();
    let dys = lambda_via_dyson(&spec, &m, &grid, 1e-12, 200).unwrap();
    for alpha in 0..3 {
        for j in (0..grid.len()).step_by(97) {
            let t = grid.node(j);
            let exact = markov_lambda(&gamma, alpha, t);
            assert!((lap.eigenvalues()[alpha].value(j) - exact).abs() < 1e-8, "laplace α={alpha} t={t}");
            assert!((dys.trajectory.eigenvalues()[alpha].value(j) - exact).abs() < 1e-5, "dyson α={alpha} t={t}");
        }
    }
    assert!(dys.terms.iter().all(|&n| n > 1 && n < 200));
}

#[test]
fn dyson_error_is_second_order() {
    let gamma = [0.4, 0.7, 1.1, 0.2];
    let spec = markovian(&gamma);
    let m = build_mubs(3).unwrap();
    let err = |n: usize| {
        let grid = TimeGrid::new(2.0, n).unwrap();
        let tr = lambda_via_dyson(&spec, &m, &grid, 1e-13, 200).unwrap().trajectory;
        (0..4)
            .map(|a| tr.eigenvalues()[a].values().last().unwrap() - markov_lambda(&gamma, a, 2.0))
            .fold(0.0_f64, |x, e| x.max(e.abs()))
    };
    let ratio = err(200) / err(400);
    assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
}

#[test]
fn dyson_reports_nonconvergence() {
    let spec = markovian(&[3.0, 0.0, 0.0]);
    let m = build_mubs(2).unwrap();
    let grid = TimeGrid::new(5.0, 200).unwrap();
    assert!(matches!(lambda_via_dyson(&spec, &m, &grid, 1e-14, 3), Err(GpcError::SeriesNonConvergence { terms: 3, .. })));
}

#[test]
fn dyson_checks_dimension() {
    let m = build_mubs(3).unwrap();
    let grid = TimeGrid::new(1.0, 10).unwrap();
    assert!(lambda_via_dyson(&markovian(&[1.0, 1.0, 1.0]), &m, &grid, 1e-10, 10).is_err());
}

#[test]
fn sampled_densities_have_no_laplace_route() {
    let grid = TimeGrid::new(1.0, 10).unwrap();
    let f = TimeFunction::Sampled(SampledFunction::constant(grid, 0.1));
    let spec = SemiMarkovSpec::isotropic(2, f).unwrap();
    assert!(matches!(
        lambda_via_laplace(&spec, &grid, &TalbotInversion::default()),
        Err(GpcError::MissingRepresentation(_))
    ));
}

#[test]
fn certificate_for_markovian_is_on_the_boundary() {
    let grid = TimeGrid::new(5.0, 500).unwrap();
    let cert = certify_semimarkov(&markovian(&[0.3, 0.5, 0.9]), &grid, 1e-9).unwrap();
    assert!(cert.legitimate && cert.boundary);
    assert_eq!(cert.integral_source, IntegralSource::ClosedForm);
    assert!((cert.integral - 1.0).abs() < 1e-14);
    assert!(cert.min_survival >= -1e-12);
}

#[test]
fn certificate_names_negative_density() {
    let grid = TimeGrid::new(5.0, 500).unwrap();
    let f = vec![
        TimeFunction::exp_sum(&[(0.2, 1.0)]),
        TimeFunction::exp_sum(&[(0.2, 1.0), (-0.3, 0.5)]),
        TimeFunction::exp_sum(&[(0.2, 1.0)]),
    ];
    let cert = certify_semimarkov(&SemiMarkovSpec::new(2, f).unwrap(), &grid, 1e-9).unwrap();
    assert!(!cert.legitimate);
    let neg = cert.first_negative.unwrap();
    assert_eq!(neg.alpha, 1);
    // 0.2 e^{−t} = 0.3 e^{−t/2} never holds for t ≥ 0, so t = 0 already fails
    assert_eq!(neg.t, 0.0);
    assert!(cert.min_density[1] < 0.0 && cert.min_density[0] > 0.0);
}

#[test]
fn certificate_flags_excess_jump_probability() {
    let grid = TimeGrid::new(5.0, 500).unwrap();
    let spec = SemiMarkovSpec::isotropic(2, TimeFunction::exp_sum(&[(0.5_f64, 1.0)])).unwrap();
    let cert = certify_semimarkov(&spec, &grid, 1e-9).unwrap();
    assert!(!cert.legitimate && cert.first_negative.is_none());
    assert!((cert.integral - 1.5).abs() < 1e-14);
}

#[test]
fn certificate_extrapolates_sampled_tails() {
    let grid = TimeGrid::new(8.0_f64, 8000).unwrap();
    let chi = SampledFunction::from_fn(grid, |t| 0.25 * (-t).exp());
    let spec = SemiMarkovSpec::isotropic(2, TimeFunction::Sampled(chi)).unwrap();
    let cert = certify_semimarkov(&spec, &grid, 1e-9).unwrap();
    assert_eq!(cert.integral_source, IntegralSource::Extrapolated);
    assert!((cert.integral - 0.75).abs() < 1e-6, "{}", cert.integral);
    assert!(cert.legitimate && !cert.boundary);
}

#[test]
fn isotropic_ell_matches_general_formula() {
    let chi = TimeFunction::exp_sum(&[(0.3, 1.2)]);
    for d in [2usize, 3, 5] {
        let spec = SemiMarkovSpec::isotropic(d, chi.clone()).unwrap();
        for s in [c(0.3), c(2.0), Complex::new(1.0, 2.5)] {
            let ell = ell_from_f(&spec.laplace(s).unwrap(), s).unwrap();
            let iso = isotropic_ell(chi.laplace(s).unwrap(), d, s).unwrap();
            assert!(ell.iter().all(|l| (l - iso).norm() < 1e-13));
        }
    }
}

#[test]
fn f_and_ell_are_inverse() {
    let spec = markovian(&[0.2, 0.9, 0.4, 1.3]);
    for s in [c(0.4), c(3.0), Complex::new(0.5, -1.7)] {
        let f = spec.laplace(s).unwrap();
        let back = f_from_ell(&ell_from_f(&f, s).unwrap(), s).unwrap();
        assert!(f.iter().zip(&back).all(|(a, b)| (a - b).norm() < 1e-12));
    }
}

#[test]
fn ell_of_markovian_is_exponential() {
    // ℓ̃_α = (γ−γ_α)/(s + γ − γ_α)
    let gamma = [0.2, 0.9, 0.4, 1.3];
    let total: f64 = gamma.iter().sum();
    let spec = markovian(&gamma);
    let s = c(0.8);
    let ell = ell_from_f(&spec.laplace(s).unwrap(), s).unwrap();
    for (a, l) in ell.iter().enumerate() {
        let r = total - gamma[a];
        assert!((l - c(r) / (s + c(r))).norm() < 1e-13);
    }
}

#[test]
fn memory_kernel_reproduces_lambda() {
    let f = vec![
        TimeFunction::exp_sum(&[(0.2, 1.0)]),
        TimeFunction::exp_sum(&[(0.1, 0.7), (0.05, 2.0)]),
        TimeFunction::exp_sum(&[(0.3, 1.5)]),
        TimeFunction::exp_sum(&[(0.15, 0.9)]),
    ];
    let spec = SemiMarkovSpec::new(3, f).unwrap();
    for s in [c(0.5), c(2.0), Complex::new(1.0, 1.0)] {
        let fs = spec.laplace(s).unwrap();
        let k = semimarkov_memory_laplace(&fs, s).unwrap();
        for alpha in 0..4 {
            let a = lambda_laplace_from_memory(&k, alpha, s).unwrap();
            let b = lambda_laplace_semimarkov(&fs, alpha, s).unwrap();
            assert!((a - b).norm() < 1e-10 * b.norm().max(1.0));
        }
    }
}

#[test]
fn poles_are_reported() {
    // f̃ = 1 makes g̃ vanish
    let f = [c(0.5), c(0.25), c(0.25)];
    assert!(matches!(semimarkov_memory_laplace(&f, c(1.0)), Err(GpcError::Pole { .. })));
    assert!(matches!(f_from_ell(&[c(1.0), c(0.2), c(0.3)], c(1.0)), Err(GpcError::Pole { .. })));
}

fn markov_qubit_trajectory(gamma: &[f64], grid: &TimeGrid<f64>, x0: [f64; 3]) -> Vec<CMatrix<f64>> {
    let m = build_mubs(2).unwrap();
    let rho0 = qubit_from_bloch(x0);
    grid.nodes()
        .map(|t| {
            let lambda = (0..3).map(|a| markov_lambda(gamma, a, t)).collect();
            ChannelState::from_eigenvalues(2, lambda).unwrap().map(&m, &rho0).unwrap()
        })
        .collect()
}

#[test]
fn inhomogeneous_residual_is_second_order() {
    let gamma = [0.5, 0.8, 0.3];
    let spec = markovian(&gamma);
    let m = build_mubs(2).unwrap();
    let worst = |n: usize| {
        let grid = TimeGrid::new(2.0, n).unwrap();
        let rhos = markov_qubit_trajectory(&gamma, &grid, [0.3, -0.2, 0.6]);
        let r = inhomogeneous_residual(&spec, &m, &rhos, &grid).unwrap();
        residual_norms(&r, &grid).unwrap().sup_norm()
    };
    let (a, b) = (worst(1000), worst(2000));
    assert!(a < 1e-4, "{a}");
    assert!((a / b - 4.0).abs() < 0.6, "ratio {}", a / b);
}

#[test]
fn bloch_residual_matches_operator_residual() {
    let gamma = [0.5, 0.8, 0.3];
    let spec = markovian(&gamma);
    let m = build_mubs(2).unwrap();
    let grid = TimeGrid::new(1.0, 200).unwrap();
    let rhos = markov_qubit_trajectory(&gamma, &grid, [0.3, -0.2, 0.6]);
    let r = inhomogeneous_residual(&spec, &m, &rhos, &grid).unwrap();
    let xs: Vec<[f64; 3]> = rhos.iter().map(bloch_vector).collect();
    let x = [0, 1, 2].map(|a| SampledFunction::new(grid, xs.iter().map(|v| v[a]).collect()).unwrap());
    let rb = bloch_residual(&spec, &x).unwrap();
    for (j, rj) in r.iter().enumerate() {
        let comps = bloch_components(rj);
        for a in 0..3 {
            assert!((comps[a].re - rb[a].value(j)).abs() < 1e-10);
            assert!(comps[a].im.abs() < 1e-12);
        }
    }
}

#[test]
fn survival_validity() {
    let grid = TimeGrid::new(5.0, 100).unwrap();
    let spec = markovian(&[0.3, 0.5, 0.9]);
    assert!(survival_is_valid(&spec.survival_on(&grid).unwrap(), 1e-12));
    let p = jump_probability_on(&spec, &grid).unwrap();
    assert!(p.values().windows(2).all(|w| w[1] >= w[0]));
    let bad = SemiMarkovSpec::isotropic(2, TimeFunction::exp_sum(&[(1.0, 1.0)])).unwrap();
    assert!(!survival_is_valid(&bad.survival_on(&grid).unwrap(), 1e-12));
}

#[test]
fn works_in_single_precision() {
    let spec = SemiMarkovSpec::<f32>::isotropic(2, TimeFunction::exp_sum(&[(0.25, 1.0)])).unwrap();
    let grid = TimeGrid::new(2.0_f32, 200).unwrap();
    let m = build_mubs::<f32>(2).unwrap();
    let dys = lambda_via_dyson(&spec, &m, &grid, 1e-6, 100).unwrap();
    assert!(dys.trajectory.eigenvalues()[0].values().iter().all(|v| v.is_finite()));
}

proptest! {
    #[test]
    fn laplace_lambda_matches_dyson_for_isotropic(amp in 0.05f64..0.3, rate in 0.5f64..2.0) {
        let chi = TimeFunction::exp_sum(&[(amp * rate, rate)]);
        let spec = SemiMarkovSpec::isotropic(2, chi).unwrap();
        let grid = TimeGrid::new(2.0, 400).unwrap();
        let m = build_mubs(2).unwrap();
        let a = lambda_via_laplace(&spec, &grid, &TalbotInversion::default()).unwrap();
        let b = lambda_via_dyson(&spec, &m, &grid, 1e-12, 100).unwrap().trajectory;
        for alpha in 0..3 {
            let diff = a.eigenvalues()[alpha].max_abs_diff(&b.eigenvalues()[alpha]).unwrap();
            prop_assert!(diff < 1e-4, "diff {}", diff);
        }
    }
}
