use crate::error::{Error, Result};
use crate::fuzzy::{Code, RuleBase, TermId, Variable};
use crate::rng::{Channel, GeneratorConfig};

/// How the multiplexer walks the rule list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RuleSchedule {
    /// Rule `cycle mod m`.
    #[default]
    RoundRobin,
    /// A uniformly drawn rule each clock, from a dedicated register.
    UniformRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputMode {
    /// Comparator references are the quantized crisp inputs.
    #[default]
    Crisp,
    /// Comparator references are themselves random signals drawn each
    /// clock from the input membership functions.
    StochasticFuzzy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableKind {
    InputA,
    InputB,
    Output,
}

/// Everything needed to build a controller: rule base, the channel that
/// realizes each membership function, and the generator setup.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerConfig {
    rulebase: RuleBase,
    channels: [Vec<Option<Channel>>; 3],
    generator: GeneratorConfig,
    quantizer_bits: u32,
    filter_alpha: f64,
    pub schedule: RuleSchedule,
    pub input_mode: InputMode,
    pub max_cycles: u64,
}

impl ControllerConfig {
    pub const DEFAULT_FILTER_ALPHA: f64 = 0.01;
    pub const DEFAULT_MAX_CYCLES: u64 = 100_000_000;

    /// Assigns to every membership function the channel that reproduces it.
    /// Fails if a function used by a rule has no such channel.
    pub fn new(rulebase: RuleBase, generator: GeneratorConfig) -> Result<Self> {
        generator.validate()?;
        let ua = rulebase.input_a().universe().bits();
        let ub = rulebase.input_b().universe().bits();
        if ua != ub {
            return Err(Error::QuantizerBits { quantizer: ua, universe: ub });
        }
        let used = |pick: fn(&crate::fuzzy::Rule) -> TermId| -> Vec<TermId> {
            rulebase.rules().iter().map(pick).collect()
        };
        let channels = [
            derive_channels(rulebase.input_a(), &used(|r| r.antecedent_a))?,
            derive_channels(rulebase.input_b(), &used(|r| r.antecedent_b))?,
            derive_channels(rulebase.output(), &used(|r| r.consequent))?,
        ];
        Ok(ControllerConfig {
            rulebase,
            channels,
            generator,
            quantizer_bits: ua,
            filter_alpha: Self::DEFAULT_FILTER_ALPHA,
            schedule: RuleSchedule::default(),
            input_mode: InputMode::default(),
            max_cycles: Self::DEFAULT_MAX_CYCLES,
        })
    }

    pub fn rulebase(&self) -> &RuleBase {
        &self.rulebase
    }

    pub fn generator(&self) -> &GeneratorConfig {
        &self.generator
    }

    pub fn quantizer_bits(&self) -> u32 {
        self.quantizer_bits
    }

    pub fn filter_alpha(&self) -> f64 {
        self.filter_alpha
    }

    pub fn channel(&self, kind: VariableKind, term: TermId) -> Option<&Channel> {
        self.channels[kind as usize].get(term.0).and_then(|c| c.as_ref())
    }

    pub fn with_filter_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::FilterAlpha(alpha));
        }
        self.filter_alpha = alpha;
        Ok(self)
    }

    pub fn with_quantizer_bits(mut self, bits: u32) -> Result<Self> {
        if bits != self.rulebase.input_a().universe().bits() {
            return Err(Error::QuantizerBits { quantizer: bits, universe: self.rulebase.input_a().universe().bits() });
        }
        self.quantizer_bits = bits;
        Ok(self)
    }

    pub fn with_schedule(mut self, schedule: RuleSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_input_mode(mut self, mode: InputMode) -> Self {
        self.input_mode = mode;
        self
    }

    pub fn with_max_cycles(mut self, max_cycles: u64) -> Self {
        self.max_cycles = max_cycles;
        self
    }

    pub fn with_generator(mut self, generator: GeneratorConfig) -> Result<Self> {
        generator.validate()?;
        self.generator = generator;
        Ok(self)
    }

    /// Same configuration, different base seed.
    pub fn with_seed(&self, seed: u64) -> Result<Self> {
        self.clone().with_generator(self.generator.with_seed(seed))
    }

    /// Replaces the channel for one membership function. The channel's
    /// exact law must equal the stored function bit for bit.
    pub fn assign_channel(mut self, kind: VariableKind, term: TermId, channel: Channel) -> Result<Self> {
        let var = self.variable(kind);
        let pdf = var.term(term).ok_or(Error::UnresolvedTerm { rule: usize::MAX, what: "assigned", index: term.0 })?;
        let label = var.term_name(term).unwrap_or_default().to_string();
        if channel.law(var.universe()).ok().as_ref() != Some(pdf) {
            return Err(Error::ChannelLaw(label));
        }
        self.channels[kind as usize][term.0] = Some(channel);
        Ok(self)
    }

    pub fn variable(&self, kind: VariableKind) -> &Variable {
        match kind {
            VariableKind::InputA => self.rulebase.input_a(),
            VariableKind::InputB => self.rulebase.input_b(),
            VariableKind::Output => self.rulebase.output(),
        }
    }

    /// Channels (a, b, y) feeding the multiplexer for each rule.
    pub fn rule_channels(&self) -> Vec<(Channel, Channel, Channel)> {
        let get = |kind: VariableKind, id: TermId| self.channel(kind, id).cloned().expect("rule terms have channels");
        self.rulebase
            .rules()
            .iter()
            .map(|r| {
                (
                    get(VariableKind::InputA, r.antecedent_a),
                    get(VariableKind::InputB, r.antecedent_b),
                    get(VariableKind::Output, r.consequent),
                )
            })
            .collect()
    }

    /// Probability that a clock is accepted at crisp references:
    /// `(1/m)·Σ_i μ_Ai(xa)·μ_Bi(xb)`.
    pub fn analytic_acceptance(&self, xa: Code, xb: Code) -> f64 {
        let rb = &self.rulebase;
        let total: f64 = rb.rules().iter().map(|r| rb.antecedent_a(r).at(xa) * rb.antecedent_b(r).at(xb)).sum();
        total / rb.len() as f64
    }

    /// Acceptance probability when the references are random with laws
    /// `a_in`, `b_in`.
    pub fn analytic_acceptance_fuzzy(&self, a_in: &[f64], b_in: &[f64]) -> f64 {
        let rb = &self.rulebase;
        let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(x, y)| x * y).sum::<f64>();
        let total: f64 = rb
            .rules()
            .iter()
            .map(|r| dot(a_in, rb.antecedent_a(r).mass()) * dot(b_in, rb.antecedent_b(r).mass()))
            .sum();
        total / rb.len() as f64
    }
}

fn derive_channels(var: &Variable, used: &[TermId]) -> Result<Vec<Option<Channel>>> {
    var.terms()
        .map(|(id, name, pdf)| match Channel::realizing(name, pdf) {
            Ok(ch) => Ok(Some(ch)),
            Err(e) if used.contains(&id) => Err(e),
            Err(_) => Ok(None),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{make_triangular_pdf, MembershipPdf, Rule, Universe};
    use crate::rng::TriangularChannel;

    fn base(u: Universe) -> RuleBase {
        let s = make_triangular_pdf(u, 0, 3).unwrap();
        let v = Variable::new("x", u)
            .with_term("S", s)
            .unwrap()
            .with_term("U", MembershipPdf::uniform(u))
            .unwrap();
        RuleBase::new(v.clone(), v.clone(), v, vec![Rule::new(TermId(0), TermId(0), TermId(0))]).unwrap()
    }

    #[test]
    fn channels_follow_memberships() {
        let u = Universe::new(4).unwrap();
        let cfg = ControllerConfig::new(base(u), GeneratorConfig::default()).unwrap();
        let ch = cfg.channel(VariableKind::Output, TermId(0)).unwrap();
        assert_eq!(*ch, Channel::Triangle(TriangularChannel::new("S", 2, 0).unwrap()));
        // uniform is not realizable, but no rule uses it
        assert!(cfg.channel(VariableKind::InputA, TermId(1)).is_none());
        assert_eq!(cfg.quantizer_bits(), 4);
    }

    #[test]
    fn unrealizable_rule_term_is_an_error() {
        let u = Universe::new(4).unwrap();
        let rb = base(u);
        let rb = RuleBase::new(
            rb.input_a().clone(),
            rb.input_b().clone(),
            rb.output().clone(),
            vec![Rule::new(TermId(1), TermId(0), TermId(0))],
        )
        .unwrap();
        assert!(matches!(ControllerConfig::new(rb, GeneratorConfig::default()), Err(Error::NotRealizable(_))));
    }

    #[test]
    fn channel_assignment_checks_law() {
        let u = Universe::new(4).unwrap();
        let cfg = ControllerConfig::new(base(u), GeneratorConfig::default()).unwrap();
        let wrong = Channel::Triangle(TriangularChannel::new("S", 2, 1).unwrap());
        assert_eq!(
            cfg.clone().assign_channel(VariableKind::InputA, TermId(0), wrong).unwrap_err(),
            Error::ChannelLaw("S".into())
        );
        let right = Channel::Triangle(TriangularChannel::new("S", 2, 0).unwrap());
        assert!(cfg.assign_channel(VariableKind::InputA, TermId(0), right).is_ok());
    }

    #[test]
    fn parameter_validation() {
        let u = Universe::new(4).unwrap();
        let cfg = ControllerConfig::new(base(u), GeneratorConfig::default()).unwrap();
        assert!(cfg.clone().with_filter_alpha(0.0).is_err());
        assert!(cfg.clone().with_filter_alpha(1.0).is_ok());
        assert!(cfg.clone().with_quantizer_bits(5).is_err());
        assert_eq!(cfg.with_seed(0).unwrap_err(), Error::ZeroSeed);
    }
}
