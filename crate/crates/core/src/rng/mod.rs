//! Pseudo-random generator chain: a Fibonacci shift register, adder/delay
//! pairs turning its bit stream into triangular samples, and shift
//! constants placing each triangle on the universe.

mod bundle;
mod channel;
mod lfsr;
mod seed;

pub use bundle::{GeneratorBundle, GeneratorConfig, GeneratorMode};
pub use channel::{triangular_sample, Channel, TriangularChannel};
pub use lfsr::{is_maximal, maximal_taps, Lfsr, DEFAULT_TAPS, DEFAULT_WIDTH};
pub use seed::derive_seed;
