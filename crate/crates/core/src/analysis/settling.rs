use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fuzzy::{exact_output, Code, UnionMode};
use crate::rng::derive_seed;
use crate::sim::{Controller, ControllerConfig};

/// First index from which every remaining value lies within `target ± band`.
/// `None` if the last value is outside (or the sequence is empty). NaN
/// counts as outside.
pub fn settling_time(sequence: &[f64], target: f64, band: f64) -> Option<usize> {
    let inside = |v: f64| (v - target).abs() <= band;
    match sequence.iter().rposition(|&v| !inside(v)) {
        None if sequence.is_empty() => None,
        None => Some(0),
        Some(i) if i + 1 == sequence.len() => None,
        Some(i) => Some(i + 1),
    }
}

/// Settling cycles of the filtered output for `replicas` independent runs,
/// measured against the exact sum-union output.
pub fn settling_study(
    config: &ControllerConfig,
    xa: Code,
    xb: Code,
    cycles: u64,
    band: f64,
    replicas: usize,
) -> Result<Vec<Option<u64>>> {
    let target = exact_output(config.rulebase(), xa, xb, UnionMode::Sum)?;
    if cycles > config.max_cycles {
        return Err(Error::CycleBudget { requested: cycles, max: config.max_cycles });
    }
    let base = config.generator().seed;
    let width = config.generator().width;
    (0..replicas)
        .into_par_iter()
        .map(|r| {
            let local = config.with_seed(derive_seed(base, r as u64, width))?;
            let mut ctl = Controller::new(&local)?;
            let trace: Vec<f64> = (0..cycles)
                .map(|_| {
                    ctl.step(xa, xb);
                    ctl.filtered().unwrap_or(f64::NAN)
                })
                .collect();
            Ok(settling_time(&trace, target, band).map(|c| c as u64))
        })
        .collect()
}
