use super::{derive_seed, Channel, Lfsr, DEFAULT_TAPS, DEFAULT_WIDTH};
use crate::error::Result;
use crate::fuzzy::Code;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeneratorMode {
    /// One register feeds all adders serially: the a pair, then b, then y.
    #[default]
    Shared,
    /// Each channel owns a register, seeded from a derived sub-stream.
    Independent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub mode: GeneratorMode,
    pub width: u32,
    pub taps: Vec<u32>,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { mode: GeneratorMode::Shared, width: DEFAULT_WIDTH, taps: DEFAULT_TAPS.to_vec(), seed: 1 }
    }
}

impl GeneratorConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorConfig { seed, ..self.clone() }
    }

    /// Register for sub-stream `stream`; stream numbers are fixed per role so
    /// that runs replay exactly.
    pub fn register(&self, stream: u64) -> Result<Lfsr> {
        Lfsr::new(self.width, &self.taps, derive_seed(self.seed, stream, self.width))
    }

    /// Checks taps and seed without keeping the register.
    pub fn validate(&self) -> Result<()> {
        Lfsr::new(self.width, &self.taps, self.seed).map(|_| ())
    }
}

/// Registers driving the three per-cycle channels (input a, input b, output).
#[derive(Debug, Clone)]
pub struct GeneratorBundle {
    mode: GeneratorMode,
    registers: Vec<Lfsr>,
}

impl GeneratorBundle {
    pub fn new(config: &GeneratorConfig) -> Result<Self> {
        let registers = match config.mode {
            GeneratorMode::Shared => vec![Lfsr::new(config.width, &config.taps, config.seed)?],
            GeneratorMode::Independent => (0..3).map(|i| config.register(i)).collect::<Result<_>>()?,
        };
        Ok(GeneratorBundle { mode: config.mode, registers })
    }

    pub fn mode(&self) -> GeneratorMode {
        self.mode
    }

    pub fn registers(&self) -> &[Lfsr] {
        &self.registers
    }

    /// One sample per channel for this clock cycle, in the order a, b, y.
    #[inline]
    pub fn draw_cycle_samples(&mut self, a: &Channel, b: &Channel, y: &Channel) -> (Code, Code, Code) {
        match self.mode {
            GeneratorMode::Shared => {
                let r = &mut self.registers[0];
                let xa = a.sample(r);
                let xb = b.sample(r);
                (xa, xb, y.sample(r))
            }
            GeneratorMode::Independent => {
                let [ra, rb, ry] = &mut self.registers[..] else { unreachable!() };
                (a.sample(ra), b.sample(rb), y.sample(ry))
            }
        }
    }
}
