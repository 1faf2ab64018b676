//! Reproduction suite: scenario fixtures with embedded oracles.
//!
//! Each fixture holds a scenario, a symbolic oracle (a parameter set, never a
//! table of numbers), the expected verdicts, and a provenance label for every
//! expectation it states.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use gpc_core::classical::{mub_distributions, qubit_wigner_matrix, stochastic_map, wigner_evolution_from_eigen};
use gpc_core::linalg::projector;
use gpc_core::{build_mubs, build_wigner_ops, CMatrix64, Complex, EigenTrajectory64, EllRep64, TimeGrid64};
use serde::{Deserialize, Serialize};

use crate::commands::{execute, Command};
use crate::config::{build_functions, FunctionConfig, ModelConfig, Scenario};
use crate::error::{CliError, Result};
use crate::pipeline::Outcome;

/// `T π(0)` and `S W(0)` against the propagated state.
pub const CLASSICAL_TOL: f64 = 1e-6;
/// Row/column sums and entry signs of `T` and `S`.
pub const STOCHASTIC_TOL: f64 = 1e-10;

/// Labels accepted in a fixture's `provenance` map.
pub const PROVENANCE_LABELS: [&str; 4] = ["closed-form", "identity", "independent-oracle", "invariant"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReproCase {
    pub name: String,
    pub description: String,
    pub scenario: Scenario,
    pub oracle: Oracle,
    pub expect: Expectations,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Oracle {
    /// The closed-form λ of the scenario's own model source.
    ClosedForm,
    /// The closed-form λ of another model with the same `d`.
    Model { params: ModelConfig },
    /// `λ_α = 1 − ∫₀ᵗ ℓ_α` from closed-form integrals.
    Ell { ell: Vec<FunctionConfig> },
    /// `λ ≡ 1`.
    Identity,
    /// Verdicts only.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    pub exit_code: i32,
    /// Sup-norm tolerance on `λ` against the oracle.
    #[serde(default)]
    pub max_error: Option<f64>,
    #[serde(default)]
    pub cptp: Option<bool>,
    #[serde(default)]
    pub semimarkov: Option<bool>,
    #[serde(default)]
    pub integral_f: Option<f64>,
    #[serde(default = "default_integral_tol")]
    pub integral_tol: f64,
    #[serde(default)]
    pub report_contains: Vec<String>,
    #[serde(default)]
    pub wigner_at: Option<WignerExpectation>,
}

fn default_integral_tol() -> f64 {
    1e-6
}

/// `S(t)` at the node nearest `t`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerExpectation {
    pub t: f64,
    pub matrix: Vec<f64>,
    pub tol: f64,
}

impl ReproCase {
    pub fn from_json(text: &str) -> Result<Self> {
        let case: Self = serde_json::from_str(text)?;
        case.scenario.validate()?;
        case.check_provenance()?;
        Ok(case)
    }

    /// Every stated expectation needs a known provenance label.
    fn check_provenance(&self) -> Result<()> {
        let e = &self.expect;
        let stated = [
            ("exit_code", true),
            ("max_error", e.max_error.is_some()),
            ("cptp", e.cptp.is_some()),
            ("semimarkov", e.semimarkov.is_some()),
            ("integral_f", e.integral_f.is_some()),
            ("wigner_at", e.wigner_at.is_some()),
        ];
        for (key, present) in stated {
            if !present {
                continue;
            }
            match self.provenance.get(key) {
                Some(label) if PROVENANCE_LABELS.contains(&label.as_str()) => {}
                Some(label) => {
                    return Err(CliError::Repro(format!("{}: unknown provenance label {label:?} for {key}", self.name)))
                }
                None => return Err(CliError::Repro(format!("{}: no provenance for {key}", self.name))),
            }
        }
        Ok(())
    }
}

/// Consistency of the classical shadows with the quantum evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalCheck {
    /// `max |T^(α)(t) π^(α)(0) − π^(α)(ρ_t)|`.
    pub distribution_error: f64,
    /// `max |S(t) W(0) − W(ρ_t)|`, qubits only.
    pub wigner_error: Option<f64>,
    /// Worst row/column-sum defect over every `T` and `S`.
    pub stochastic_defect: f64,
    /// Smallest entry over every `T` and `S`.
    pub min_entry: f64,
}

impl ClassicalCheck {
    pub fn passed(&self) -> bool {
        self.distribution_error <= CLASSICAL_TOL
            && self.wigner_error.is_none_or(|e| e <= CLASSICAL_TOL)
            && self.stochastic_defect <= STOCHASTIC_TOL
            && self.min_entry >= -STOCHASTIC_TOL
    }
}

/// Fixed generic pure state `ψ_k ∝ (k+1) e^{0.7ik}`.
pub fn reference_state(d: usize) -> CMatrix64 {
    let amps: Vec<Complex<f64>> =
        (0..d).map(|k| Complex::from_polar((k + 1) as f64, 0.7 * k as f64)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps: Vec<Complex<f64>> = amps.into_iter().map(|a| a / norm).collect();
    projector(&amps)
}

/// Checks `T π(0) = π(ρ_t)`, `S W(0) = W(ρ_t)` for `d = 2`, and double
/// stochasticity at every node.
pub fn classical_consistency(traj: &EigenTrajectory64) -> Result<ClassicalCheck> {
    let d = traj.d();
    let m = build_mubs::<f64>(d)?;
    let rho0 = reference_state(d);
    let pi0 = mub_distributions(&m, &rho0)?;
    let wigner = if d == 2 {
        let ops = build_wigner_ops::<f64>(2)?;
        Some((ops.wigner_function(&rho0)?, ops, wigner_evolution_from_eigen(traj)?))
    } else {
        None
    };
    let mut check =
        ClassicalCheck { distribution_error: 0.0, wigner_error: wigner.as_ref().map(|_| 0.0), stochastic_defect: 0.0, min_entry: f64::INFINITY };
    for j in 0..traj.grid().len() {
        let state = traj.state_at(j)?;
        let rho = traj.evolve(&m, &rho0, j)?;
        let pi = mub_distributions(&m, &rho)?;
        for alpha in 0..=d {
            let t = stochastic_map(&state, alpha)?;
            check.stochastic_defect = check.stochastic_defect.max(t.stochasticity_defect());
            check.min_entry = check.min_entry.min(t.min_entry());
            let predicted = t.apply(&pi0[alpha])?;
            for (a, b) in predicted.iter().zip(&pi[alpha]) {
                check.distribution_error = check.distribution_error.max((a - b).abs());
            }
        }
        if let Some((w0, ops, maps)) = &wigner {
            let s = &maps[j];
            check.stochastic_defect = check.stochastic_defect.max(gpc_core::classical::bistochastic_defect(s));
            check.min_entry = check.min_entry.min(s.min());
            let w = ops.wigner_function(&rho)?;
            let worst = (0..4)
                .map(|r| ((0..4).map(|c| s[(r, c)] * w0[c]).sum::<f64>() - w[r]).abs())
                .fold(0.0, f64::max);
            let e = check.wigner_error.get_or_insert(0.0);
            *e = e.max(worst);
        }
    }
    Ok(check)
}

fn oracle_lambda(case: &ReproCase, outcome: &Outcome) -> Result<Option<EigenTrajectory64>> {
    let grid: &TimeGrid64 = outcome.grid();
    let d = outcome.d();
    Ok(match &case.oracle {
        Oracle::ClosedForm => {
            let model = outcome
                .model
                .as_ref()
                .ok_or_else(|| CliError::Repro(format!("{}: closed_form oracle needs a model source", case.name)))?;
            Some(model.lambda_on(grid)?)
        }
        Oracle::Model { params } => Some(params.descriptor(d).build()?.lambda_on(grid)?),
        Oracle::Ell { ell } => Some(EllRep64::new(d, build_functions(ell))?.lambda_on(grid)?),
        Oracle::Identity => Some(EllRep64::zero(d)?.lambda_on(grid)?),
        Oracle::None => None,
    })
}

fn max_deviation(a: &EigenTrajectory64, b: &EigenTrajectory64) -> Result<f64> {
    a.eigenvalues().iter().zip(b.eigenvalues()).try_fold(0.0_f64, |acc, (x, y)| Ok(acc.max(x.max_abs_diff(y)?)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub exit_code: i32,
    pub max_error: Option<f64>,
    pub tolerance: Option<f64>,
    pub semimarkov: Option<bool>,
    pub integral_f: Option<f64>,
    pub classical: Option<ClassicalCheck>,
    pub failures: Vec<String>,
}

/// Runs one case and, when `out` is given, writes its files into `out/<name>`.
pub fn run_case(case: &ReproCase, out: Option<&Path>) -> Result<CaseResult> {
    let execution = execute(Command::Propagate, &case.scenario)?;
    if let Some(dir) = out {
        execution.write(&dir.join(&case.name))?;
    }
    let outcome = &execution.outcome;
    let e = &case.expect;
    let mut failures = Vec::new();

    let exit_code = outcome.exit_code();
    if exit_code != e.exit_code {
        failures.push(format!("exit code {exit_code}, expected {}", e.exit_code));
    }

    let max_error = match oracle_lambda(case, outcome)? {
        Some(oracle) => Some(max_deviation(&outcome.trajectory, &oracle)?),
        None => None,
    };
    if let (Some(tol), Some(err)) = (e.max_error, max_error) {
        if !(err <= tol) {
            failures.push(format!("max error {err:.3e} exceeds {tol:.1e}"));
        }
    } else if e.max_error.is_some() {
        failures.push("max_error stated without an oracle".into());
    }

    if let Some(expected) = e.cptp {
        if outcome.cptp.passed != expected {
            failures.push(format!("CPTP verdict {}, expected {expected}", outcome.cptp.passed));
        }
    }

    let semimarkov = outcome.semimarkov.as_ref().map(|s| s.certificate.legitimate);
    let integral_f = outcome.semimarkov.as_ref().map(|s| s.certificate.integral);
    if let Some(expected) = e.semimarkov {
        if semimarkov != Some(expected) {
            failures.push(format!("semi-Markov verdict {semimarkov:?}, expected {expected}"));
        }
    }
    if let Some(expected) = e.integral_f {
        match integral_f {
            Some(v) if (v - expected).abs() <= e.integral_tol => {}
            other => failures.push(format!("∫f = {other:?}, expected {expected}")),
        }
    }

    for needle in &e.report_contains {
        if !execution.report.contains(needle.as_str()) {
            failures.push(format!("report does not mention {needle:?}"));
        }
    }

    if let Some(w) = &e.wigner_at {
        if outcome.d() != 2 || w.matrix.len() != 16 {
            failures.push("wigner_at needs d = 2 and 16 entries".into());
        } else {
            let grid = outcome.grid();
            let j = ((w.t / grid.step()).round() as usize).min(grid.n_steps());
            let lam = outcome.trajectory.lambda_at(j)?;
            let s = qubit_wigner_matrix([0, 1, 2].map(|a| 1.0 - lam[a]));
            let worst = (0..16).map(|k| (s[(k / 4, k % 4)] - w.matrix[k]).abs()).fold(0.0, f64::max);
            if !(worst <= w.tol) {
                failures.push(format!("S(t = {}) deviates by {worst:.3e}", grid.node(j)));
            }
        }
    }

    let classical = if exit_code == 0 && outcome.cptp.passed {
        let check = classical_consistency(&outcome.trajectory)?;
        if !check.passed() {
            failures.push(format!("classical consistency failed: {check:?}"));
        }
        Some(check)
    } else {
        None
    };

    Ok(CaseResult {
        name: case.name.clone(),
        passed: failures.is_empty(),
        exit_code,
        max_error,
        tolerance: e.max_error,
        semimarkov,
        integral_f,
        classical,
        failures,
    })
}

/// The fixtures shipped with the crate.
pub fn default_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("repro")
}

/// Every `*.json` fixture in `dir`, sorted by file name.
pub fn load_cases(dir: &Path) -> Result<Vec<ReproCase>> {
    let entries = std::fs::read_dir(dir).map_err(|source| CliError::Read { path: dir.into(), source })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Repro(format!("no fixtures found in {}", dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Read { path: p.clone(), source })?;
            ReproCase::from_json(&text).map_err(|e| CliError::Repro(format!("{}: {e}", p.display())))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub cases: Vec<CaseResult>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> String {
        let width = self.cases.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        let _ = writeln!(out, "{:<width$}  exit  {:>10}  {:>8}  verdict", "case", "max error", "tol");
        for c in &self.cases {
            let err = c.max_error.map_or("-".to_string(), |e| format!("{e:.3e}"));
            let tol = c.tolerance.map_or("-".to_string(), |t| format!("{t:.0e}"));
            let verdict = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{:<width$}  {:>4}  {err:>10}  {tol:>8}  {verdict}", c.name, c.exit_code);
            for f in &c.failures {
                let _ = writeln!(out, "    {f}");
            }
        }
        let passed = self.cases.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{passed}/{} cases passed", self.cases.len());
        out
    }
}

/// Runs every fixture in `fixtures`; writes per-case files and
/// `results.json` into `out` when given.
pub fn run_suite(fixtures: &Path, out: Option<&Path>) -> Result<SuiteResult> {
    let cases = load_cases(fixtures)?;
    let results = cases.iter().map(|c| run_case(c, out)).collect::<Result<Vec<_>>>()?;
    let suite = SuiteResult { cases: results };
    if let Some(dir) = out {
        let path = dir.join("results.json");
        let json = serde_json::to_string_pretty(&suite)?;
        std::fs::write(&path, json + "\n").map_err(|source| CliError::Write { path, source })?;
    }
    Ok(suite)
}
