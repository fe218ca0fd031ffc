//! Experiment configuration: TOML file with one nesting level for the
//! system table, overridable by command-line flags, with `ERGOCYCLE_SEED`
//! taking final precedence over the seed.

use std::path::{Path, PathBuf};

use num::rational::BigRational;
use num::BigInt;
use serde::{Deserialize, Serialize};

use ergocycle_core::dynsys::{BernoulliSystem, CircleSystem, System};
use ergocycle_core::numtheory::Theta;

use crate::CliError;

pub const ENV_SEED: &str = "ERGOCYCLE_SEED";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemSpec {
    /// "circle" or "bernoulli"
    pub kind: String,
    /// named constant ("sqrt2m1", "golden") or comma list of repeating
    /// partial quotients such as "2,2"
    pub theta: String,
    /// letter weights as rationals ("1/2"); empty means the fair coin
    pub weights: Vec<String>,
    /// letters of C₁
    pub c1: Vec<usize>,
}

impl Default for SystemSpec {
    fn default() -> Self {
        SystemSpec {
            kind: "circle".into(),
            theta: "sqrt2m1".into(),
            weights: Vec::new(),
            c1: vec![1],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub system: SystemSpec,
    /// fiber dimension
    pub n: usize,
    pub iterations: u64,
    pub seed: u64,
    /// orbit sample points for the Birkhoff probe
    pub samples: usize,
    /// deviation threshold; omitted means 5/√N
    pub tolerance: Option<f64>,
    /// identity cocycle (negative control) instead of the clock/shift one
    pub degenerate: bool,
    /// scalar phases attached to the two cocycle pieces, in turns
    pub phase1_turns: f64,
    pub phase2_turns: f64,
    /// "ergodic" or "non-ergodic": which verdict counts as a pass
    pub expect: String,
    pub observables: Vec<String>,
    pub report: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            system: SystemSpec::default(),
            n: 2,
            iterations: 10_000,
            seed: 1,
            samples: 32,
            tolerance: None,
            degenerate: false,
            phase1_turns: 0.0,
            phase2_turns: 0.0,
            expect: "ergodic".into(),
            observables: vec![
                "chi_c_e11".into(),
                "one_e11".into(),
                "chi_c_u".into(),
            ],
            report: None,
            trace: None,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        // toml reports the offending field path in its message
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(CliError::Usage("n: must be ≥ 1".into()));
        }
        if self.iterations == 0 {
            return Err(CliError::Usage("iterations: must be ≥ 1".into()));
        }
        if self.samples == 0 {
            return Err(CliError::Usage("samples: must be ≥ 1".into()));
        }
        if self.observables.is_empty() {
            return Err(CliError::Usage("observables: must name at least one".into()));
        }
        match self.expect.as_str() {
            "ergodic" | "non-ergodic" => {}
            other => {
                return Err(CliError::Usage(format!(
                    "expect: \"{other}\" is not \"ergodic\" or \"non-ergodic\""
                )))
            }
        }
        match self.system.kind.as_str() {
            "circle" | "bernoulli" => Ok(()),
            other => Err(CliError::Usage(format!(
                "system.kind: \"{other}\" is not \"circle\" or \"bernoulli\""
            ))),
        }
    }
}

/// Final seed: `ERGOCYCLE_SEED` beats any configured value.
pub fn resolve_seed(configured: u64) -> Result<u64, CliError> {
    match std::env::var(ENV_SEED) {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("{ENV_SEED}: \"{s}\" is not a u64"))),
        Err(_) => Ok(configured),
    }
}

/// Named constant or a comma list of repeating partial quotients.
pub fn parse_theta(spec: &str) -> Result<Theta, CliError> {
    match spec {
        "sqrt2m1" => Ok(Theta::sqrt2m1()),
        "golden" => Ok(Theta::golden()),
        other => {
            let digits: Result<Vec<u32>, _> =
                other.split(',').map(|d| d.trim().parse::<u32>()).collect();
            match digits {
                Ok(block) if !block.is_empty() => Theta::from_periodic_digits(block)
                    .map_err(|e| CliError::Usage(format!("theta: {e}"))),
                _ => Err(CliError::Usage(format!(
                    "theta: \"{other}\" is not sqrt2m1, golden, or a digit list like \"2,2\""
                ))),
            }
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, CliError> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| CliError::Usage(format!("\"{s}\" is not a rational like \"1/2\"")))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d == BigInt::from(0) {
                return Err(CliError::Usage(format!("\"{s}\": zero denominator")));
            }
            Ok(BigRational::new(parse_int(num)?, d))
        }
        None => Ok(BigRational::from(parse_int(s)?)),
    }
}

pub fn build_system(spec: &SystemSpec) -> Result<System, CliError> {
    match spec.kind.as_str() {
        "circle" => {
            let theta = parse_theta(&spec.theta)?;
            Ok(System::Circle(CircleSystem::new(theta).map_err(|e| {
                CliError::Usage(format!("system.theta: {e}"))
            })?))
        }
        "bernoulli" => {
            if spec.weights.is_empty() {
                return Ok(System::Bernoulli(BernoulliSystem::fair_coin()));
            }
            let mut weights = Vec::with_capacity(spec.weights.len());
            for (i, w) in spec.weights.iter().enumerate() {
                weights.push(
                    parse_rational(w)
                        .map_err(|e| CliError::Usage(format!("system.weights[{i}]: {e}")))?,
                );
            }
            let sys = BernoulliSystem::new(weights, &spec.c1)
                .map_err(|e| CliError::Usage(format!("system: {e}")))?;
            Ok(System::Bernoulli(sys))
        }
        other => Err(CliError::Usage(format!(
            "system.kind: \"{other}\" is not \"circle\" or \"bernoulli\""
        ))),
    }
}
