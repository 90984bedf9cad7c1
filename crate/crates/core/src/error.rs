use crate::fuzzy::Code;

/// Everything that can go wrong while building or running a controller.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("universe bit width {0} outside 2..=16")]
    UniverseBits(u32),
    #[error("code {code} outside universe 0..={max}")]
    CodeOutOfRange { code: Code, max: Code },
    #[error("triangle support {lo}..={hi} exceeds universe max code {max}")]
    SupportOverflow { lo: u64, hi: u64, max: Code },
    #[error("half width {0} is not of the form 2^k - 1")]
    HalfWidth(u32),
    #[error("invalid mass vector: {0}")]
    InvalidMass(String),
    #[error("membership functions live on different universes")]
    UniverseMismatch,
    #[error("product of membership functions has disjoint support")]
    DisjointSupport,
    #[error("mass vector sums to zero")]
    ZeroMass,
    #[error("no rule fires at inputs ({x1}, {x2})")]
    NoRuleFires { x1: Code, x2: Code },
    #[error("rule base is empty")]
    EmptyRuleBase,
    #[error("rule {rule}: {what} term index {index} does not resolve")]
    UnresolvedTerm { rule: usize, what: &'static str, index: usize },
    #[error("rule index {index} out of range for {count} rules")]
    RuleIndex { index: usize, count: usize },

    #[error("register width {0} outside 2..=32")]
    RegisterWidth(u32),
    #[error("invalid tap set {taps:?} for width {width}: {reason}")]
    Taps { width: u32, taps: Vec<u32>, reason: &'static str },
    #[error("seed must be non-zero (starting logic forbids the all-zero lockup state)")]
    ZeroSeed,
    #[error("seed {seed} does not fit a {width}-bit register")]
    SeedRange { seed: u64, width: u32 },
    #[error("word width {k} outside 1..={width}")]
    WordWidth { k: u32, width: u32 },
    #[error("triangular channel needs bit width >= 1, got {0}")]
    ChannelBits(u32),
    #[error("membership {0} cannot be realized by a shifted triangle or constant channel")]
    NotRealizable(String),
    #[error("channel for {0} does not reproduce its membership function exactly")]
    ChannelLaw(String),

    #[error("analog input {0} outside [0, 1]")]
    AnalogRange(f64),
    #[error("filter alpha {0} outside (0, 1]")]
    FilterAlpha(f64),
    #[error("quantizer bits {quantizer} differ from input universe bits {universe}")]
    QuantizerBits { quantizer: u32, universe: u32 },
    #[error("requested {requested} cycles exceeds budget {max}")]
    CycleBudget { requested: u64, max: u64 },
    #[error("controller is configured for {0} inputs")]
    InputMode(&'static str),
    #[error("no coincidence after {cycles} cycles (analytic acceptance rate {analytic_rate:e})")]
    NoCoincidence { cycles: u64, analytic_rate: f64 },

    #[error("insufficient samples: {got} < {needed}")]
    InsufficientSamples { got: u64, needed: u64 },
    #[error("checkpoints must be non-empty and strictly ascending")]
    Checkpoints,
    #[error("grid step must be positive")]
    GridStep,
    #[error("need at least 2 replicas, got {0}")]
    Replicas(usize),
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
