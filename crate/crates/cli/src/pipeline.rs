//! Scenario → trajectory and certificates.
//!
//! Everything here is computed in memory; nothing touches the filesystem, so
//! a configuration error never leaves partial output behind.

use std::fmt;

use gpc_core::channel::FaSide;
use gpc_core::kernel::{EllCertificate, EllCondition};
use gpc_core::models::{FRepresentation, OscillatoryVerdict};
use gpc_core::numerics::TalbotInversion;
use gpc_core::{
    build_mubs, certify_semimarkov, check_ell_conditions, eigen_to_rates, kernel_from_ell, lambda_via_dyson,
    lambda_via_laplace, propagate_kernel, EigenTrajectory64, EllRep64, GpcError, Model64, RateVector64,
    SemiMarkovCertificate, SemiMarkovSpec64, TimeGrid64,
};

use crate::config::{build_functions, build_kernel, OutputKind, Scenario, SemiMarkovMethod, SourceConfig};
use crate::error::Result;

/// Worst Fujiwara–Algoet margins over the whole trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct CptpSummary {
    pub passed: bool,
    /// `(margin, t)` for the lower and upper inequality.
    pub worst_lower: (f64, f64),
    pub worst_upper: (f64, f64),
    pub first_violation: Option<(f64, FaSide, f64)>,
}

impl CptpSummary {
    pub fn from_trajectory(traj: &EigenTrajectory64, tol: f64) -> Self {
        let grid = traj.grid();
        let mut worst_lower = (f64::INFINITY, 0.0);
        let mut worst_upper = (f64::INFINITY, 0.0);
        let mut first_violation = None;
        for (j, cert) in traj.certify_all(tol).into_iter().enumerate() {
            let t = grid.node(j);
            if cert.lower_margin < worst_lower.0 {
                worst_lower = (cert.lower_margin, t);
            }
            if cert.upper_margin < worst_upper.0 {
                worst_upper = (cert.upper_margin, t);
            }
            if first_violation.is_none() {
                if let Some(side) = cert.violated {
                    first_violation = Some((t, side, cert.worst_margin()));
                }
            }
        }
        Self { passed: first_violation.is_none(), worst_lower, worst_upper, first_violation }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemiMarkovSummary {
    pub certificate: SemiMarkovCertificate<f64>,
    /// `f` recovered by numerical inversion rather than a closed form.
    pub numerical: bool,
    /// The source is not a semi-Markov specification, so the verdict only
    /// describes the dynamics and never fails the run.
    pub informational: bool,
}

/// Time-local rates for the `gamma_*` columns.
#[derive(Debug, Clone)]
pub enum GammaColumns {
    Rates(RateVector64),
    /// Rates are singular somewhere on the grid; the columns are written as NaN.
    Undefined(String),
}

/// A physics verdict that turns the exit code into 2.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Cptp { t: f64, side: FaSide, margin: f64 },
    Oscillatory { bound: String, sum_inverse: f64, upper_bound: f64 },
    Ell { t: f64, condition: EllCondition, alpha: Option<usize>, margin: f64 },
    SemiMarkov { detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cptp { t, side, margin } => {
                let side = match side {
                    FaSide::Lower => "lower",
                    FaSide::Upper => "upper",
                };
                write!(f, "CPTP violated: {side} Fujiwara-Algoet inequality fails at t = {}, margin {margin:.6e}", num(*t))
            }
            Self::Oscillatory { bound, sum_inverse, upper_bound } => write!(
                f,
                "oscillatory parameters inadmissible: {bound} fails (sum(1/a) = {}, d^2/(2(d-1)) = {})",
                num(*sum_inverse),
                num(*upper_bound)
            ),
            Self::Ell { t, condition, alpha, margin } => {
                let at = if t.is_finite() { format!("t = {}", num(*t)) } else { "t -> infinity".to_string() };
                let index = alpha.map(|a| format!(" (index {})", a + 1)).unwrap_or_default();
                write!(f, "ell conditions violated: {condition}{index} fails at {at}, margin {margin:.6e}")
            }
            Self::SemiMarkov { detail } => write!(f, "semi-Markov source is not legitimate: {detail}"),
        }
    }
}

/// Compact decimal rendering: plain notation with trailing zeros trimmed in
/// the usual range, scientific otherwise.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let a = x.abs();
    if a == 0.0 || (1e-3..1e6).contains(&a) {
        let s = format!("{x:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".into()
        } else {
            s.into()
        }
    } else {
        format!("{x:.6e}")
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub scenario: Scenario,
    /// Human-readable source description.
    pub source: String,
    pub method: String,
    pub trajectory: EigenTrajectory64,
    pub gamma: Option<GammaColumns>,
    pub cptp: CptpSummary,
    pub ell: Option<EllCertificate<f64>>,
    pub oscillatory: Option<OscillatoryVerdict<f64>>,
    pub semimarkov: Option<SemiMarkovSummary>,
    pub model: Option<Model64>,
    pub violations: Vec<Violation>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            0
        } else {
            2
        }
    }

    pub fn d(&self) -> usize {
        self.scenario.d
    }

    pub fn grid(&self) -> &TimeGrid64 {
        self.trajectory.grid()
    }
}

fn ell_violation(cert: &EllCertificate<f64>) -> Option<Violation> {
    cert.first_violation.map(|v| Violation::Ell { t: v.t, condition: v.condition, alpha: v.alpha, margin: v.margin })
}

fn semimarkov_detail(cert: &SemiMarkovCertificate<f64>) -> Option<String> {
    if cert.legitimate {
        return None;
    }
    Some(match cert.first_negative {
        Some(neg) => format!("f_{} < 0, first at t≈{}", neg.alpha + 1, num(neg.t)),
        None => format!("∫f = {} > 1", num(cert.integral)),
    })
}

/// Runs the scenario's dynamics source and every applicable certificate.
pub fn run(scenario: &Scenario) -> Result<Outcome> {
    scenario.validate()?;
    let d = scenario.d;
    let tol = scenario.tol;
    let grid = scenario.time_grid()?;
    let mut violations = Vec::new();
    let mut ell = None;
    let mut oscillatory = None;
    let mut semimarkov = None;
    let mut model = None;
    let mut closed_rates = None;

    let (source, method, trajectory) = match scenario.source()? {
        SourceConfig::Model(config) => {
            let descriptor = config.descriptor(d);
            let built = descriptor.build()?;
            if let Model64::Oscillatory(m) = &built {
                let verdict = m.verdict(tol);
                if let Some(bound) = verdict.failed {
                    violations.push(Violation::Oscillatory {
                        bound: bound.to_string(),
                        sum_inverse: verdict.sum_inverse,
                        upper_bound: verdict.upper_bound,
                    });
                }
                oscillatory = Some(verdict);
            }
            if let Some(rep) = built.ell()? {
                let cert = check_ell_conditions(&rep, &grid, tol)?;
                violations.extend(ell_violation(&cert));
                ell = Some(cert);
            }
            let spec = match &built {
                Model64::ConvexCombination(m) => {
                    let (spec, repr) = m.semimarkov(&grid)?;
                    Some((spec, repr == FRepresentation::Numerical))
                }
                other => other.semimarkov()?.map(|s| (s, false)),
            };
            if let Some((spec, numerical)) = spec {
                let certificate = certify_semimarkov(&spec, &grid, tol)?;
                semimarkov = Some(SemiMarkovSummary { certificate, numerical, informational: true });
            }
            if scenario.wants(OutputKind::Gamma) {
                closed_rates = built.rates(&grid)?;
            }
            let trajectory = propagate_kernel(&built.kernel()?, &grid)?;
            model = Some(built);
            (format!("model ({})", descriptor.family()), "closed-form kernel, Volterra propagation", trajectory)
        }
        SourceConfig::Ell(config) => {
            let rep = EllRep64::new(d, build_functions(&config.ell))?;
            let cert = check_ell_conditions(&rep, &grid, tol)?;
            violations.extend(ell_violation(&cert));
            ell = Some(cert);
            let trajectory = propagate_kernel(&kernel_from_ell(&rep, &grid)?, &grid)?;
            ("ell".to_string(), "kernel from ell, Volterra propagation", trajectory)
        }
        SourceConfig::Kernel(config) => {
            let trajectory = propagate_kernel(&build_kernel(d, config)?, &grid)?;
            ("kernel".to_string(), "Volterra propagation", trajectory)
        }
        SourceConfig::Semimarkov(config) => {
            let spec = SemiMarkovSpec64::new(d, build_functions(&config.f))?;
            let certificate = certify_semimarkov(&spec, &grid, tol)?;
            if let Some(detail) = semimarkov_detail(&certificate) {
                violations.push(Violation::SemiMarkov { detail });
            }
            semimarkov = Some(SemiMarkovSummary { certificate, numerical: false, informational: false });
            let use_laplace = match config.method {
                SemiMarkovMethod::Auto => spec.has_laplace(),
                SemiMarkovMethod::Laplace => true,
                SemiMarkovMethod::Dyson => false,
            };
            if use_laplace {
                let trajectory = lambda_via_laplace(&spec, &grid, &TalbotInversion::default())?;
                ("semimarkov".to_string(), "Laplace-domain inversion", trajectory)
            } else {
                let m = build_mubs(d)?;
                let result = lambda_via_dyson(&spec, &m, &grid, config.series_tol, config.max_terms)?;
                ("semimarkov".to_string(), "Dyson series", result.trajectory)
            }
        }
    };

    let cptp = CptpSummary::from_trajectory(&trajectory, tol);
    if let Some((t, side, margin)) = cptp.first_violation {
        violations.insert(0, Violation::Cptp { t, side, margin });
    }

    let gamma = if scenario.wants(OutputKind::Gamma) {
        Some(match closed_rates {
            Some(rates) => GammaColumns::Rates(rates),
            None => match eigen_to_rates(trajectory.eigenvalues()) {
                Ok(rates) => GammaColumns::Rates(rates),
                Err(e @ GpcError::NonPositiveEigenvalue { .. }) => GammaColumns::Undefined(e.to_string()),
                Err(e) => return Err(e.into()),
            },
        })
    } else {
        None
    };

    Ok(Outcome {
        scenario: scenario.clone(),
        source,
        method: method.to_string(),
        trajectory,
        gamma,
        cptp,
        ell,
        oscillatory,
        semimarkov,
        model,
        violations,
    })
}
