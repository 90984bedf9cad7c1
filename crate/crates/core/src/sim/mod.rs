//! Clock-by-clock model of the controller datapath: A/D quantization, rule
//! multiplexer, coincidence comparator, switch, and the D/A + low-pass
//! output stage.

mod comparator;
mod config;
mod controller;
mod signal;

pub use comparator::{sample_coincidences, CoincidenceSample};
pub use config::{ControllerConfig, InputMode, RuleSchedule, VariableKind};
pub use controller::{run, run_fuzzy_inputs, run_traced, Controller, CycleTrace, RunResult, TRACE_HEADER};
pub use signal::{iir_update, quantize};
