use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fuzzy::Code;
use crate::rng::derive_seed;
use crate::sim::{Controller, ControllerConfig, InputMode};

pub const CONVERGENCE_HEADER: [&str; 3] = ["n_accepted", "estimate", "stderr"];

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub cycles: u64,
    /// Accepted samples, averaged over replicas.
    pub n_accepted: f64,
    /// Replica mean of the running estimate.
    pub estimate: f64,
    /// Replica standard deviation of the running estimate.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub checkpoints: Vec<Checkpoint>,
    /// Slope of `ln stderr` against `ln n_accepted`; `None` when some
    /// stderr is zero (deterministic configurations) or fewer than two
    /// checkpoints exist.
    pub fitted_slope: Option<f64>,
    pub replicas: usize,
}

impl ConvergenceReport {
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(sink);
        out.write_record(CONVERGENCE_HEADER)?;
        for c in &self.checkpoints {
            out.write_record(&[c.n_accepted.to_string(), c.estimate.to_string(), c.stderr.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Least-squares slope of `ln y` on `ln x`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return None;
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Spread of the running estimate across independent replicas, sampled at
/// the given cycle counts.
pub fn convergence_curve(
    config: &ControllerConfig,
    xa: Code,
    xb: Code,
    checkpoints: &[u64],
    replicas: usize,
) -> Result<ConvergenceReport> {
    if checkpoints.is_empty() || checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Checkpoints);
    }
    if replicas < 2 {
        return Err(Error::Replicas(replicas));
    }
    if config.input_mode != InputMode::Crisp {
        return Err(Error::InputMode("stochastic fuzzy"));
    }
    let last = *checkpoints.last().unwrap();
    if last > config.max_cycles {
        return Err(Error::CycleBudget { requested: last, max: config.max_cycles });
    }
    config.rulebase().input_a().universe().check(xa)?;
    config.rulebase().input_b().universe().check(xb)?;
    let analytic = config.analytic_acceptance(xa, xb);
    let base = config.generator().seed;
    let width = config.generator().width;

    // per replica: (accepted, estimate) at each checkpoint
    let traces = (0..replicas)
        .into_par_iter()
        .map(|r| -> Result<Vec<(u64, f64)>> {
            let local = config.with_seed(derive_seed(base, r as u64, width))?;
            let mut ctl = Controller::new(&local)?;
            checkpoints
                .iter()
                .map(|&target| {
                    while ctl.cycles() < target {
                        ctl.step(xa, xb);
                    }
                    let est = ctl
                        .estimate()
                        .ok_or(Error::NoCoincidence { cycles: target, analytic_rate: analytic })?;
                    Ok((ctl.accepted(), est))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;

    let n = replicas as f64;
    let checkpoints: Vec<Checkpoint> = checkpoints
        .iter()
        .enumerate()
        .map(|(j, &cycles)| {
            let n_accepted = traces.iter().map(|t| t[j].0 as f64).sum::<f64>() / n;
            let estimate = traces.iter().map(|t| t[j].1).sum::<f64>() / n;
            let var = traces.iter().map(|t| (t[j].1 - estimate).powi(2)).sum::<f64>() / (n - 1.0);
            Checkpoint { cycles, n_accepted, estimate, stderr: var.sqrt() }
        })
        .collect();
    let fitted_slope =
        fit_loglog_slope(&checkpoints.iter().map(|c| (c.n_accepted, c.stderr)).collect::<Vec<_>>());
    Ok(ConvergenceReport { checkpoints, fitted_slope, replicas })
}
