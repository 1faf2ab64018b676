use super::*;
use crate::kernel::{EllRep, ExpFamilyParams, build_exp_family};
use crate::linalg::{bloch_vector, identity, qubit_from_bloch};
use crate::models::{OscillatoryModel, SemigroupModel};
use crate::mub::{build_mubs, build_wigner_ops};
use crate::numerics::TimeFunction;
use crate::scalar::{creal, Complex};
use proptest::prelude::*;
use std::f64::consts::PI;

fn random_state(d: usize, entries: &[f64]) -> CMatrix<f64> {
    let g = CMatrix::from_fn(d, d, |i, j| Complex::new(entries[2 * (i * d + j)], entries[2 * (i * d + j) + 1]));
    let r = &g * g.adjoint();
    let tr = crate::linalg::real_trace(&r);
    r * creal(1.0 / tr)
}

#[test]
fn distributions_examples() {
    let m = build_mubs::<f64>(3).unwrap();
    let mixed = identity::<f64>(3) * creal(1.0 / 3.0);
    for row in mub_distributions(&m, &mixed).unwrap() {
        assert!(row.iter().all(|&p| (p - 1.0 / 3.0).abs() < 1e-14));
    }
    let q = build_mubs::<f64>(2).unwrap();
    let rows = mub_distributions(&q, &qubit_from_bloch([0.0, 0.0, 1.0])).unwrap();
    assert!((rows[2][0] - 1.0).abs() < 1e-15 && rows[2][1].abs() < 1e-15);
    for alpha in 0..2 {
        assert!(rows[alpha].iter().all(|&p| (p - 0.5).abs() < 1e-15));
    }
    assert!(mub_distributions(&q, &(identity::<f64>(2) * creal(0.7))).is_err());
}

#[test]
fn qubit_distribution_follows_bloch() {
    let q = build_mubs::<f64>(2).unwrap();
    let x = [0.3, -0.5, 0.2];
    let rows = mub_distributions(&q, &qubit_from_bloch(x)).unwrap();
    for alpha in 0..3 {
        for k in 0..2 {
            let sign = if k == 0 { 1.0 } else { -1.0 };
            assert!((rows[alpha][k] - 0.5 * (1.0 + sign * x[alpha])).abs() < 1e-15);
        }
    }
}

#[test]
fn stochastic_map_examples() {
    let id = ChannelState::<f64>::identity(3).unwrap();
    let t = stochastic_map(&id, 2).unwrap();
    assert!((t.matrix() - DMatrix::identity(3, 3)).abs().max() < 1e-15);
    let dep = ChannelState::<f64>::from_eigenvalues(3, vec![0.0; 4]).unwrap();
    let t = stochastic_map(&dep, 1).unwrap();
    assert!(t.matrix().iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
    let s = ChannelState::<f64>::from_eigenvalues(2, vec![1.0, 0.4, 0.4]).unwrap();
    assert!((classical_weight(&s, 2).unwrap() - 0.4).abs() < 1e-15);
    assert!(StochasticMap::new(DMatrix::<f64>::zeros(2, 3)).is_err());
}

proptest! {
    #[test]
    fn weight_equals_eigenvalue(l in prop::collection::vec(-0.5f64..1.0, 6), d in prop::sample::select(vec![2usize, 3, 5])) {
        let s = ChannelState::from_eigenvalues(d, l[..=d].to_vec()).unwrap();
        for alpha in 0..=d {
            prop_assert!((classical_weight(&s, alpha).unwrap() - l[alpha]).abs() < 1e-13);
        }
    }

    #[test]
    fn classical_map_tracks_quantum_evolution(
        entries in prop::collection::vec(-1.0f64..1.0, 18),
        w in prop::collection::vec(0.01f64..1.0, 5),
    ) {
        let d = 3;
        let m = build_mubs::<f64>(d).unwrap();
        let total: f64 = w.iter().sum();
        let s = ChannelState::from_probabilities(d, w.iter().map(|x| x / total).collect()).unwrap();
        prop_assert!(s.certify(1e-9).passed);
        let rho = random_state(d, &entries);
        let out = s.map(&m, &rho).unwrap();
        let before = mub_distributions(&m, &rho).unwrap();
        let after = mub_distributions(&m, &out).unwrap();
        for alpha in 0..=d {
            let t = stochastic_map(&s, alpha).unwrap();
            prop_assert!(t.is_doubly_stochastic(1e-10));
            let pred = t.apply(&before[alpha]).unwrap();
            for k in 0..d {
                prop_assert!((pred[k] - after[alpha][k]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn ell_form_matches_channel_form() {
    let fam = build_exp_family(3, ExpFamilyParams { eta: 1.0, xi: vec![2.0, 2.5, 3.0, 3.5] }).unwrap();
    let g = TimeGrid::new(2.0, 200).unwrap();
    let tr = fam.ell.lambda_on(&g).unwrap();
    for alpha in 0..4 {
        let maps = stochastic_maps_from_ell(&fam.ell, alpha, &g).unwrap();
        for (j, t) in maps.iter().enumerate().step_by(17) {
            let direct = stochastic_map(&tr.state_at(j).unwrap(), alpha).unwrap();
            assert!((t.matrix() - direct.matrix()).abs().max() < 1e-13);
        }
    }
}

#[test]
fn semimarkov_series_jumpless_and_markovian() {
    let g = TimeGrid::new(5.0, 2500).unwrap();
    let zero = SemiMarkovSpec::<f64>::zero(2).unwrap();
    let c = classical_semimarkov(&zero, 0, &g, 1e-12, 50).unwrap();
    assert!((0..g.len()).all(|j| (c.transition_at(j).matrix() - DMatrix::identity(2, 2)).abs().max() == 0.0));

    let spec = SemigroupModel::new(2, vec![1.0, 1.0, 1.0]).unwrap().semimarkov().unwrap();
    for alpha in 0..3 {
        let c = classical_semimarkov(&spec, alpha, &g, 1e-12, 200).unwrap();
        for j in 0..g.len() {
            let e = (-2.0 * g.node(j)).exp();
            let expected = StochasticMap::from_coordinates(2, e, 1.0 - e);
            assert!((c.transition_at(j).matrix() - expected.matrix()).abs().max() < 1e-5);
            // row sums are 1 up to the O(h²) quadrature error of the series (h = 2e-3)
            assert!(c.transition_at(j).stochasticity_defect() < 1e-5, "{}", c.transition_at(j).stochasticity_defect());
        }
        // n is the same for every basis
        assert_eq!(c.n, spec.survival_on(&g).unwrap());
    }
}

#[test]
fn q_columns_sum_to_total_density() {
    let spec = SemigroupModel::new(3, vec![0.2, 0.5, 0.9, 0.4]).unwrap().semimarkov().unwrap();
    let g = TimeGrid::new(2.0, 40).unwrap();
    let f = spec.total_density().unwrap().sample(&g).unwrap();
    let fa = spec.densities()[1].sample(&g).unwrap();
    let c = classical_semimarkov(&spec, 1, &g, 1e-12, 200).unwrap();
    for j in 0..g.len() {
        let q = c.q_at(j);
        for col in 0..3 {
            let sum: f64 = q.matrix().column(col).iter().sum();
            assert!((sum - f.value(j)).abs() < 1e-14);
        }
        assert!((q.matrix()[(0, 0)] - fa.value(j)).abs() < 1e-14);
        assert!((q.matrix()[(0, 1)] - (f.value(j) - fa.value(j)) / 2.0).abs() < 1e-14);
    }
}

/// Full-matrix Dyson series with entry-wise trapezoid convolutions.
fn full_matrix_series(c: &ClassicalSemiMarkov<f64>, g: &TimeGrid<f64>, terms: usize) -> Vec<DMatrix<f64>> {
    let n = g.len();
    let h = g.step();
    let q: Vec<DMatrix<f64>> = (0..n).map(|j| c.q_at(j).matrix().clone()).collect();
    let mut term: Vec<DMatrix<f64>> = (0..n).map(|j| c.n_at(j).matrix().clone()).collect();
    let mut sum = term.clone();
    for _ in 1..terms {
        let next: Vec<DMatrix<f64>> = (0..n)
            .map(|j| {
                if j == 0 {
                    return DMatrix::zeros(c.d, c.d);
                }
                let mut acc = (&term[0] * &q[j] + &term[j] * &q[0]) * 0.5;
                for i in 1..j {
                    acc += &term[i] * &q[j - i];
                }
                acc * h
            })
            .collect();
        for (s, t) in sum.iter_mut().zip(&next) {
            *s += t;
        }
        term = next;
    }
    sum
}

#[test]
fn coordinate_series_matches_full_matrices() {
    let f = vec![
        TimeFunction::exp_sum(&[(0.2, 1.0)]),
        TimeFunction::exp_sum(&[(0.1, 0.7), (0.05, 2.0)]),
        TimeFunction::exp_sum(&[(0.3, 1.5)]),
        TimeFunction::exp_sum(&[(0.15, 0.9)]),
    ];
    let spec = SemiMarkovSpec::new(3, f).unwrap();
    let g = TimeGrid::new(3.0, 120).unwrap();
    for alpha in [0, 2] {
        let c = classical_semimarkov(&spec, alpha, &g, 1e-15, 200).unwrap();
        let full = full_matrix_series(&c, &g, c.terms);
        for j in 0..g.len() {
            assert!((c.transition_at(j).matrix() - &full[j]).abs().max() < 1e-12);
        }
    }
}

#[test]
fn series_agrees_with_quantum_eigenvalues() {
    let f = vec![
        TimeFunction::exp_sum(&[(0.2, 1.0)]),
        TimeFunction::exp_sum(&[(0.1, 0.7), (0.05, 2.0)]),
        TimeFunction::exp_sum(&[(0.3, 1.5)]),
    ];
    let spec = SemiMarkovSpec::new(2, f).unwrap();
    let g = TimeGrid::new(4.0, 2000).unwrap();
    let lam = crate::semimarkov::lambda_via_laplace(&spec, &g, &crate::numerics::TalbotInversion::default()).unwrap();
    for alpha in 0..3 {
        let c = classical_semimarkov(&spec, alpha, &g, 1e-12, 200).unwrap();
        for j in 0..g.len() {
            let state = lam.state_at(j).unwrap();
            let direct = stochastic_map(&state, alpha).unwrap();
            assert!((c.transition_at(j).matrix() - direct.matrix()).abs().max() < 1e-5);
        }
    }
}

#[test]
fn series_nonconvergence_is_reported() {
    let spec = SemigroupModel::new(2, vec![5.0, 5.0, 5.0]).unwrap().semimarkov().unwrap();
    let g = TimeGrid::new(5.0, 100).unwrap();
    assert!(matches!(
        classical_semimarkov(&spec, 0, &g, 1e-12, 4),
        Err(GpcError::SeriesNonConvergence { terms: 4, .. })
    ));
}

#[test]
fn wigner_matrix_examples() {
    let ell = OscillatoryModel::new(2, 1.0, vec![2.0; 3]).unwrap().ell().unwrap();
    let g = TimeGrid::new(PI, 100).unwrap();
    let s = wigner_evolution_qubit(&ell, &g).unwrap();
    assert!((&s[0] - DMatrix::identity(4, 4)).abs().max() < 1e-15);
    assert!(s[100].iter().all(|&v| (v - 0.25).abs() < 1e-12));
    assert!(s.iter().all(|m| bistochastic_defect(m) < 1e-14));
    assert!(matches!(
        wigner_evolution_qubit(&EllRep::<f64>::zero(3).unwrap(), &g),
        Err(GpcError::UnsupportedDimension(3))
    ));
}

#[test]
fn bloch_wigner_matches_operators() {
    let ops = build_wigner_ops::<f64>(2).unwrap();
    let x = [0.3, -0.2, 0.5];
    let w = ops.wigner_function(&qubit_from_bloch(x)).unwrap();
    let closed = qubit_wigner_from_bloch(x);
    assert!(w.iter().zip(closed).all(|(a, b)| (a - b).abs() < 1e-15));
}

#[test]
fn wigner_evolution_matches_quantum() {
    let model = OscillatoryModel::new(2, 1.3, vec![1.5, 2.0, 3.0]).unwrap();
    let ell = model.ell().unwrap();
    let g = TimeGrid::new(6.0, 600).unwrap();
    let s = wigner_evolution_qubit(&ell, &g).unwrap();
    let tr = ell.lambda_on(&g).unwrap();
    assert!(s.iter().zip(wigner_evolution_from_eigen(&tr).unwrap()).all(|(a, b)| (a - b).abs().max() < 1e-13));
    let m = build_mubs(2).unwrap();
    let ops = build_wigner_ops::<f64>(2).unwrap();
    let rho0 = qubit_from_bloch([0.4, 0.1, -0.7]);
    let w0 = nalgebra::DVector::from_vec(ops.wigner_function(&rho0).unwrap());
    for j in 0..g.len() {
        let rho = tr.evolve(&m, &rho0, j).unwrap();
        let wt = ops.wigner_function(&rho).unwrap();
        let pred = &s[j] * &w0;
        assert!(wt.iter().zip(pred.iter()).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!((qubit_wigner_from_bloch(bloch_vector(&rho))[0] - wt[0]).abs() < 1e-14);
    }
}
