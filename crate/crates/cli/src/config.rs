//! Experiment configuration files.
//!
//! A config is a JSON document; see `configs/` for the bundled examples and
//! the README for the field reference. Loading parses, then validates every
//! field, and reports problems by their path in the document.

use std::path::Path;

use serde::Deserialize;
use stofuzz_core::fuzzy::{make_triangular_pdf, Code, MembershipPdf, Rule, RuleBase, Universe, Variable};
use stofuzz_core::rng::{is_maximal, Channel, GeneratorConfig, GeneratorMode};
use stofuzz_core::sim::{ControllerConfig, InputMode, RuleSchedule};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl ToString) -> ConfigError {
    ConfigError::Invalid { field: field.into(), message: message.to_string() }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub variables: RawVariables,
    pub rules: Vec<RawRule>,
    #[serde(default)]
    pub generator: RawGenerator,
    #[serde(default)]
    pub controller: RawController,
    #[serde(default)]
    pub experiment: RawExperiment,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVariables {
    pub input_a: RawVariable,
    pub input_b: RawVariable,
    pub output: RawVariable,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVariable {
    pub bits: u32,
    pub terms: Vec<RawTerm>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RawTerm {
    pub name: String,
    #[serde(flatten)]
    pub shape: Shape,
}

/// A membership function the generator can synthesize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// Sum of two `bits`-wide uniform words, shifted by `left_edge`.
    Triangle { left_edge: Code, bits: u32 },
    Point(Code),
}

impl Shape {
    fn pdf(&self, universe: Universe) -> stofuzz_core::Result<MembershipPdf> {
        match *self {
            Shape::Triangle { left_edge, bits } => {
                if bits == 0 || bits > 15 {
                    return Err(stofuzz_core::Error::ChannelBits(bits));
                }
                make_triangular_pdf(universe, left_edge, (1 << bits) - 1)
            }
            Shape::Point(code) => MembershipPdf::point(universe, code),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRule {
    pub a: String,
    pub b: String,
    pub y: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RawGenerator {
    pub mode: RawMode,
    pub width: u32,
    pub taps: Vec<u32>,
    pub seed: u64,
}

impl Default for RawGenerator {
    fn default() -> Self {
        let g = GeneratorConfig::default();
        RawGenerator { mode: RawMode::Shared, width: g.width, taps: g.taps, seed: g.seed }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RawMode {
    Shared,
    Independent,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RawSchedule {
    RoundRobin,
    UniformRandom,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RawInputMode {
    Crisp,
    StochasticFuzzy,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RawController {
    pub quantizer_bits: Option<u32>,
    pub filter_alpha: f64,
    pub schedule: RawSchedule,
    pub input_mode: RawInputMode,
    pub max_cycles: u64,
}

impl Default for RawController {
    fn default() -> Self {
        RawController {
            quantizer_bits: None,
            filter_alpha: ControllerConfig::DEFAULT_FILTER_ALPHA,
            schedule: RawSchedule::RoundRobin,
            input_mode: RawInputMode::Crisp,
            max_cycles: ControllerConfig::DEFAULT_MAX_CYCLES,
        }
    }
}

/// Defaults for the subcommands; command-line flags override them.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RawExperiment {
    pub xa: Option<f64>,
    pub xb: Option<f64>,
    pub cycles: u64,
    pub grid_step: Code,
    pub checkpoints: Vec<u64>,
    pub replicas: usize,
    /// Fraction of the output span.
    pub tolerance: f64,
    pub fuzzy_inputs: Option<RawFuzzyInputs>,
}

impl Default for RawExperiment {
    fn default() -> Self {
        RawExperiment {
            xa: None,
            xb: None,
            cycles: 1_000_000,
            grid_step: 4,
            checkpoints: vec![10_000, 30_000, 100_000, 300_000, 1_000_000],
            replicas: 30,
            tolerance: 0.02,
            fuzzy_inputs: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFuzzyInputs {
    pub a: Shape,
    pub b: Shape,
}

/// A validated configuration, ready to run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub name: String,
    pub description: String,
    pub controller: ControllerConfig,
    pub experiment: RawExperiment,
    /// Input membership functions for the fuzzy-input mode.
    pub fuzzy_inputs: Option<(MembershipPdf, MembershipPdf)>,
}

impl ExperimentConfig {
    pub fn output_span(&self) -> f64 {
        self.controller.rulebase().output().universe().span()
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text)?;
    validate(raw)
}

fn build_variable(field: &str, name: &str, raw: &RawVariable) -> Result<Variable, ConfigError> {
    let universe = Universe::new(raw.bits).map_err(|e| invalid(format!("{field}.bits"), e))?;
    let mut var = Variable::new(name, universe);
    for (i, term) in raw.terms.iter().enumerate() {
        let at = format!("{field}.terms[{i}] ({})", term.name);
        if var.find(&term.name).is_some() {
            return Err(invalid(at, "duplicate term name"));
        }
        let pdf = term.shape.pdf(universe).map_err(|e| invalid(&at, e))?;
        var.add_term(&term.name, pdf).map_err(|e| invalid(&at, e))?;
    }
    Ok(var)
}

pub fn validate(raw: RawConfig) -> Result<ExperimentConfig, ConfigError> {
    if raw.schema_version != SCHEMA_VERSION {
        return Err(invalid(
            "schema_version",
            format!("unsupported version {} (expected {SCHEMA_VERSION})", raw.schema_version),
        ));
    }
    let va = build_variable("variables.input_a", "input_a", &raw.variables.input_a)?;
    let vb = build_variable("variables.input_b", "input_b", &raw.variables.input_b)?;
    let vy = build_variable("variables.output", "output", &raw.variables.output)?;
    if va.universe() != vb.universe() {
        return Err(invalid("variables.input_b.bits", "both inputs must share one A/D resolution"));
    }

    if raw.rules.is_empty() {
        return Err(invalid("rules", "at least one rule is required"));
    }
    let mut rules = Vec::with_capacity(raw.rules.len());
    for (i, r) in raw.rules.iter().enumerate() {
        let find = |var: &Variable, key: &str, name: &str| {
            var.find(name)
                .ok_or_else(|| invalid(format!("rules[{i}].{key}"), format!("unknown term {name:?}")))
        };
        rules.push(Rule::new(find(&va, "a", &r.a)?, find(&vb, "b", &r.b)?, find(&vy, "y", &r.y)?));
    }
    let rulebase = RuleBase::new(va, vb, vy, rules).map_err(|e| invalid("rules", e))?;

    let g = &raw.generator;
    if g.seed == 0 {
        return Err(invalid(
            "generator.seed",
            "must be non-zero: the starting logic exists to keep the register out of the all-zero lockup state",
        ));
    }
    match is_maximal(g.width, &g.taps) {
        Ok(true) => {}
        Ok(false) => return Err(invalid("generator.taps", format!("{:?} is not maximal-length for width {}", g.taps, g.width))),
        Err(e) => return Err(invalid("generator.taps", e)),
    }
    let generator = GeneratorConfig {
        mode: match g.mode {
            RawMode::Shared => GeneratorMode::Shared,
            RawMode::Independent => GeneratorMode::Independent,
        },
        width: g.width,
        taps: g.taps.clone(),
        seed: g.seed,
    };
    generator.validate().map_err(|e| invalid("generator.seed", e))?;

    let c = &raw.controller;
    let mut controller = ControllerConfig::new(rulebase, generator).map_err(|e| invalid("variables", e))?;
    if let Some(bits) = c.quantizer_bits {
        controller = controller.with_quantizer_bits(bits).map_err(|e| invalid("controller.quantizer_bits", e))?;
    }
    let controller = controller
        .with_filter_alpha(c.filter_alpha)
        .map_err(|e| invalid("controller.filter_alpha", e))?
        .with_schedule(match c.schedule {
            RawSchedule::RoundRobin => RuleSchedule::RoundRobin,
            RawSchedule::UniformRandom => RuleSchedule::UniformRandom,
        })
        .with_input_mode(match c.input_mode {
            RawInputMode::Crisp => InputMode::Crisp,
            RawInputMode::StochasticFuzzy => InputMode::StochasticFuzzy,
        })
        .with_max_cycles(c.max_cycles);

    let e = &raw.experiment;
    for (field, v) in [("experiment.xa", e.xa), ("experiment.xb", e.xb)] {
        if let Some(x) = v {
            if !(0.0..=1.0).contains(&x) {
                return Err(invalid(field, "analog input must lie in [0, 1]"));
            }
        }
    }
    if e.grid_step == 0 {
        return Err(invalid("experiment.grid_step", "must be positive"));
    }
    if e.checkpoints.is_empty() || e.checkpoints[0] == 0 || e.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("experiment.checkpoints", "must be positive and strictly ascending"));
    }
    if e.replicas < 2 {
        return Err(invalid("experiment.replicas", "need at least 2"));
    }
    if !(e.tolerance > 0.0) {
        return Err(invalid("experiment.tolerance", "must be positive"));
    }
    if e.cycles > c.max_cycles || *e.checkpoints.last().unwrap() > c.max_cycles {
        return Err(invalid("experiment.cycles", "exceeds controller.max_cycles"));
    }

    let universe = controller.rulebase().input_a().universe();
    let fuzzy_inputs = match e.fuzzy_inputs {
        Some(f) => {
            let mk = |field: &str, s: Shape| -> Result<MembershipPdf, ConfigError> {
                let pdf = s.pdf(universe).map_err(|err| invalid(field, err))?;
                Channel::realizing(field, &pdf).map_err(|err| invalid(field, err))?;
                Ok(pdf)
            };
            Some((mk("experiment.fuzzy_inputs.a", f.a)?, mk("experiment.fuzzy_inputs.b", f.b)?))
        }
        None => None,
    };
    if controller.input_mode == InputMode::StochasticFuzzy && fuzzy_inputs.is_none() {
        return Err(invalid("experiment.fuzzy_inputs", "required when controller.input_mode is stochastic_fuzzy"));
    }

    Ok(ExperimentConfig {
        name: raw.name,
        description: raw.description,
        controller,
        experiment: raw.experiment,
        fuzzy_inputs,
    })
}
