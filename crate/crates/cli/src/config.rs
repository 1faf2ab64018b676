//! Scenario files.
//!
//! ```json
//! {
//!   "d": 2,
//!   "grid": { "t_max": 5.0, "n_steps": 5000 },
//!   "source": { "type": "model", "params": { "family": "semigroup", "gamma": [1, 1, 1] } },
//!   "outputs": ["gamma", "classical", "wigner", "certificates"],
//!   "tol": 1e-9
//! }
//! ```

use std::path::Path;

use gpc_core::kernel::KernelEigenvalue;
use gpc_core::numerics::TimeFunction;
use gpc_core::{KernelSpec, ModelDescriptor, TimeGrid64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

fn default_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub d: usize,
    pub grid: GridConfig,
    /// Exactly one dynamics source; a missing source is a configuration error.
    #[serde(default)]
    pub source: Option<SourceConfig>,
    #[serde(default)]
    pub outputs: Vec<OutputKind>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_max: f64,
    pub n_steps: usize,
}

/// Columns and files beyond λ and p, which are always written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Lambda,
    P,
    Gamma,
    Classical,
    Wigner,
    Certificates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "params", rename_all = "snake_case")]
pub enum SourceConfig {
    Model(ModelConfig),
    Ell(EllConfig),
    Kernel(KernelConfig),
    Semimarkov(SemiMarkovConfig),
}

impl SourceConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Model(_) => "model",
            Self::Ell(_) => "ell",
            Self::Kernel(_) => "kernel",
            Self::Semimarkov(_) => "semimarkov",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Semigroup { gamma: Vec<f64> },
    Oscillatory { omega: f64, a: Vec<f64> },
    ConvexCombination { x: Vec<f64> },
    Eternal {},
}

impl ModelConfig {
    pub fn descriptor(&self, d: usize) -> ModelDescriptor<f64> {
        match self {
            Self::Semigroup { gamma } => ModelDescriptor::Semigroup { d, gamma: gamma.clone() },
            Self::Oscillatory { omega, a } => ModelDescriptor::Oscillatory { d, omega: *omega, a: a.clone() },
            Self::ConvexCombination { x } => ModelDescriptor::ConvexCombination { d, x: x.clone() },
            Self::Eternal {} => ModelDescriptor::Eternal { d },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllConfig {
    pub ell: Vec<FunctionConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub kappa: Vec<KernelEntry>,
}

/// `κ(t) = delta·δ(t) + regular(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelEntry {
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub regular: FunctionConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiMarkovConfig {
    pub f: Vec<FunctionConfig>,
    #[serde(default)]
    pub method: SemiMarkovMethod,
    #[serde(default = "default_series_tol")]
    pub series_tol: f64,
    #[serde(default = "default_max_terms")]
    pub max_terms: usize,
}

fn default_series_tol() -> f64 {
    1e-12
}

fn default_max_terms() -> usize {
    400
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemiMarkovMethod {
    /// Laplace inversion when every `f_α` has a transform, Dyson otherwise.
    #[default]
    Auto,
    Laplace,
    Dyson,
}

/// Closed-form scalar functions of time.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionConfig {
    #[default]
    Zero,
    /// `Σ c e^{−r t}` from `[c, r]` pairs.
    ExpSum { terms: Vec<[f64; 2]> },
    Sine { amp: f64, omega: f64 },
    Cosine { amp: f64, omega: f64 },
    /// `e^{−decay·t}(cosh·cosh(freq·t) + sinh·sinh(freq·t))`.
    Hyperbolic { decay: f64, freq: f64, cosh: f64, sinh: f64 },
}

impl FunctionConfig {
    pub fn build(&self) -> TimeFunction<f64> {
        match self {
            Self::Zero => TimeFunction::zero(),
            Self::ExpSum { terms } => {
                TimeFunction::exp_sum(&terms.iter().map(|[c, r]| (*c, *r)).collect::<Vec<_>>())
            }
            Self::Sine { amp, omega } => TimeFunction::sine(*amp, *omega),
            Self::Cosine { amp, omega } => TimeFunction::cosine(*amp, *omega),
            Self::Hyperbolic { decay, freq, cosh, sinh } => TimeFunction::hyperbolic(*decay, *freq, *cosh, *sinh),
        }
    }
}

pub fn build_functions(list: &[FunctionConfig]) -> Vec<TimeFunction<f64>> {
    list.iter().map(FunctionConfig::build).collect()
}

pub fn build_kernel(d: usize, config: &KernelConfig) -> Result<KernelSpec<f64>> {
    let kappa = config.kappa.iter().map(|k| KernelEigenvalue::new(k.delta, k.regular.build())).collect();
    Ok(KernelSpec::new(d, kappa)?)
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let scenario: Self = serde_json::from_str(text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
        Self::from_json(&text)
    }

    pub fn source(&self) -> Result<&SourceConfig> {
        self.source.as_ref().ok_or_else(|| CliError::Config("scenario has no dynamics source".into()))
    }

    pub fn wants(&self, kind: OutputKind) -> bool {
        self.outputs.contains(&kind)
    }

    pub fn time_grid(&self) -> Result<TimeGrid64> {
        Ok(TimeGrid64::new(self.grid.t_max, self.grid.n_steps)?)
    }

    /// Checks that do not need any numerics.
    pub fn validate(&self) -> Result<()> {
        self.source()?;
        if !gpc_core::mub::is_prime(self.d) {
            return Err(gpc_core::GpcError::UnsupportedDimension(self.d).into());
        }
        if !(self.tol >= 0.0) {
            return Err(CliError::Config(format!("tol must be non-negative, got {}", self.tol)));
        }
        if self.wants(OutputKind::Wigner) && self.d != 2 {
            return Err(CliError::Config(format!("wigner output needs d = 2, got d = {}", self.d)));
        }
        self.time_grid()?;
        let expected = self.d + 1;
        let found = match self.source()? {
            SourceConfig::Model(ModelConfig::Semigroup { gamma }) => gamma.len(),
            SourceConfig::Model(ModelConfig::Oscillatory { a, .. }) => a.len(),
            SourceConfig::Model(ModelConfig::ConvexCombination { x }) => x.len(),
            SourceConfig::Model(ModelConfig::Eternal {}) => expected,
            SourceConfig::Ell(e) => e.ell.len(),
            SourceConfig::Kernel(k) => k.kappa.len(),
            SourceConfig::Semimarkov(s) => s.f.len(),
        };
        if found != expected {
            return Err(CliError::Config(format!(
                "{} source needs {expected} entries for d = {}, got {found}",
                self.source()?.kind(),
                self.d
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{"d": 2, "grid": {"t_max": 1.0, "n_steps": 10}, "source": SOURCE}"#;

    fn with_source(source: &str) -> Result<Scenario> {
        Scenario::from_json(&BASE.replace("SOURCE", source))
    }

    #[test]
    fn parses_each_source_type() {
        let model = with_source(r#"{"type": "model", "params": {"family": "semigroup", "gamma": [1, 1, 1]}}"#).unwrap();
        assert_eq!(model.tol, 1e-9);
        assert!(matches!(model.source, Some(SourceConfig::Model(ModelConfig::Semigroup { .. }))));
        let ell = with_source(
            r#"{"type": "ell", "params": {"ell": [{"kind": "zero"}, {"kind": "sine", "amp": 1, "omega": 1},
                {"kind": "exp_sum", "terms": [[1, 2]]}]}}"#,
        )
        .unwrap();
        assert_eq!(ell.source().unwrap().kind(), "ell");
        let kernel = with_source(r#"{"type": "kernel", "params": {"kappa": [{"delta": -1}, {}, {}]}}"#).unwrap();
        assert_eq!(kernel.source().unwrap().kind(), "kernel");
        let sm = with_source(
            r#"{"type": "semimarkov", "params": {"f": [{"kind": "zero"}, {"kind": "zero"}, {"kind": "zero"}],
                "method": "dyson"}}"#,
        )
        .unwrap();
        match sm.source.unwrap() {
            SourceConfig::Semimarkov(c) => assert_eq!(c.method, SemiMarkovMethod::Dyson),
            _ => panic!("wrong source"),
        }
    }

    #[test]
    fn rejects_missing_source_and_bad_shapes() {
        assert!(matches!(
            Scenario::from_json(r#"{"d": 2, "grid": {"t_max": 1.0, "n_steps": 10}}"#),
            Err(CliError::Config(_))
        ));
        assert!(with_source(r#"{"type": "model", "params": {"family": "semigroup", "gamma": [1, 1]}}"#).is_err());
        assert!(with_source(r#"{"type": "model", "params": {"family": "nonsense"}}"#).is_err());
        assert!(with_source(r#"{"type": "bogus", "params": {}}"#).is_err());
        let d4 = r#"{"d": 4, "grid": {"t_max": 1.0, "n_steps": 10},
            "source": {"type": "model", "params": {"family": "eternal"}}}"#;
        assert!(matches!(Scenario::from_json(d4), Err(CliError::Core(_))));
    }

    #[test]
    fn wigner_needs_qubit() {
        let text = r#"{"d": 3, "grid": {"t_max": 1.0, "n_steps": 10}, "outputs": ["wigner"],
            "source": {"type": "model", "params": {"family": "eternal"}}}"#;
        assert!(Scenario::from_json(text).is_err());
    }

    #[test]
    fn function_configs_build_closed_forms() {
        let f = FunctionConfig::Hyperbolic { decay: 1.0, freq: 0.5, cosh: 2.0, sinh: -1.0 }.build();
        let t = 0.7_f64;
        let expected = (-t).exp() * (2.0 * (0.5 * t).cosh() - (0.5 * t).sinh());
        assert!((f.value_at(t).unwrap() - expected).abs() < 1e-14);
        let e = FunctionConfig::ExpSum { terms: vec![[2.0, 3.0]] }.build();
        assert!((e.total().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }
}
