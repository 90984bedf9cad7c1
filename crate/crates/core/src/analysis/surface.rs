use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fuzzy::{exact_output, Code, UnionMode};
use crate::rng::derive_seed;
use crate::sim::{run, ControllerConfig};

pub const SURFACE_HEADER: [&str; 6] = ["xa", "xb", "exact", "stochastic", "abs_error", "skipped"];

#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    pub xa: Code,
    pub xb: Code,
    /// `None` when no rule fires here.
    pub exact: Option<f64>,
    /// `None` when skipped or when nothing was accepted within the budget.
    pub stochastic: Option<f64>,
    pub accepted: u64,
    pub cycles: u64,
    pub analytic_acceptance: f64,
}

impl SurfacePoint {
    pub fn skipped(&self) -> bool {
        self.exact.is_none()
    }

    pub fn abs_error(&self) -> Option<f64> {
        Some((self.exact? - self.stochastic?).abs())
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.cycles.max(1) as f64
    }

    /// Binomial z-score of the empirical acceptance rate.
    pub fn acceptance_z(&self) -> f64 {
        let r = self.analytic_acceptance;
        let sd = (r * (1.0 - r) / self.cycles as f64).sqrt();
        if sd == 0.0 {
            return if self.acceptance_rate() == r { 0.0 } else { f64::INFINITY };
        }
        (self.acceptance_rate() - r) / sd
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceReport {
    pub points: Vec<SurfacePoint>,
    /// Over non-skipped points; infinite if one of them accepted nothing.
    pub max_abs_error: f64,
    pub rmse: f64,
    pub skipped: Vec<(Code, Code)>,
}

impl SurfaceReport {
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(sink);
        out.write_record(SURFACE_HEADER)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for p in &self.points {
            out.write_record(&[
                p.xa.to_string(),
                p.xb.to_string(),
                opt(p.exact),
                opt(p.stochastic),
                opt(p.abs_error()),
                u8::from(p.skipped()).to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Codes `0, step, 2·step, …` plus the top code if the stride misses it.
pub fn grid_axis(max_code: Code, step: Code) -> Result<Vec<Code>> {
    if step == 0 {
        return Err(Error::GridStep);
    }
    let mut axis: Vec<Code> = (0..=max_code).step_by(step as usize).collect();
    if axis.last() != Some(&max_code) {
        axis.push(max_code);
    }
    Ok(axis)
}

/// Runs the simulator and the exact engine (sum union) over an input grid.
///
/// Each grid point gets its own seed derived from the configured base seed
/// and the point's row-major index, so the report does not depend on how
/// points are scheduled across threads.
pub fn surface_compare(config: &ControllerConfig, grid_step: Code, cycles_per_point: u64) -> Result<SurfaceReport> {
    let rb = config.rulebase();
    let xs = grid_axis(rb.input_a().universe().max_code(), grid_step)?;
    let ys = grid_axis(rb.input_b().universe().max_code(), grid_step)?;
    let grid: Vec<(Code, Code)> = xs.iter().flat_map(|&a| ys.iter().map(move |&b| (a, b))).collect();
    let base = config.generator().seed;
    let width = config.generator().width;

    let points = grid
        .par_iter()
        .enumerate()
        .map(|(i, &(xa, xb))| -> Result<SurfacePoint> {
            let analytic_acceptance = config.analytic_acceptance(xa, xb);
            let exact = match exact_output(rb, xa, xb, UnionMode::Sum) {
                Ok(v) => Some(v),
                Err(Error::NoRuleFires { .. }) => None,
                Err(e) => return Err(e),
            };
            let mut point =
                SurfacePoint { xa, xb, exact, stochastic: None, accepted: 0, cycles: 0, analytic_acceptance };
            if exact.is_none() {
                return Ok(point);
            }
            let local = config.with_seed(derive_seed(base, i as u64, width))?;
            point.cycles = cycles_per_point;
            match run(&local, xa, xb, cycles_per_point) {
                Ok(r) => {
                    point.stochastic = Some(r.estimate_mean);
                    point.accepted = r.accepted_count;
                }
                Err(Error::NoCoincidence { .. }) => {}
                Err(e) => return Err(e),
            }
            Ok(point)
        })
        .collect::<Result<Vec<_>>>()?;

    let live: Vec<&SurfacePoint> = points.iter().filter(|p| !p.skipped()).collect();
    let errors: Vec<f64> = live.iter().map(|p| p.abs_error().unwrap_or(f64::INFINITY)).collect();
    let max_abs_error = errors.iter().copied().fold(0.0, f64::max);
    let rmse = if errors.is_empty() {
        0.0
    } else {
        (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt()
    };
    let skipped = points.iter().filter(|p| p.skipped()).map(|p| (p.xa, p.xb)).collect();
    Ok(SurfaceReport { points, max_abs_error, rmse, skipped })
}
