//! Subcommand bodies. Each returns a [`Report`]; `main` prints it and maps
//! `passed` to the exit code.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use stofuzz_core::analysis::{chi_square_gof, convergence_curve, surface_compare};
use stofuzz_core::fuzzy::{compose_fuzzy_inputs, exact_output, Code, UnionMode, Universe};
use stofuzz_core::rng::{
    is_maximal, triangular_sample, Channel, GeneratorBundle, GeneratorConfig, GeneratorMode, Lfsr,
    TriangularChannel, DEFAULT_TAPS, DEFAULT_WIDTH,
};
use stofuzz_core::sim::{quantize, run, run_fuzzy_inputs, run_traced, InputMode};

use crate::config::ExperimentConfig;

/// Lower edge of the accepted slope window for the convergence check.
pub const SLOPE_MIN: f64 = -0.6;
pub const SLOPE_MAX: f64 = -0.4;
/// Binomial sigmas allowed between empirical and analytic acceptance.
pub const ACCEPTANCE_SIGMAS: f64 = 3.0;
/// Fraction of GOF trials that must not reject.
pub const GOF_PASS_FRACTION: f64 = 0.95;

#[derive(Debug, Clone)]
pub struct Report {
    pub lines: Vec<String>,
    pub summary: String,
    pub passed: bool,
}

impl Report {
    pub fn print(&self) {
        for l in &self.lines {
            println!("{l}");
        }
        println!("{}", self.summary);
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

/// A crisp input given either as an analog value or as a raw code.
#[derive(Debug, Clone, Copy)]
pub enum InputValue {
    Analog(f64),
    Code(Code),
}

impl InputValue {
    pub fn resolve(self, universe: Universe) -> Result<Code> {
        Ok(match self {
            InputValue::Analog(x) => quantize(x, universe.bits())?,
            InputValue::Code(c) => universe.check(c)?,
        })
    }
}

fn pick_input(flag: Option<InputValue>, default: Option<f64>, name: &str) -> Result<InputValue> {
    flag.or(default.map(InputValue::Analog))
        .with_context(|| format!("no {name} input: pass --{name} or --{name}-code, or set experiment.{name}"))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

pub struct GenCheckArgs {
    pub trials: usize,
    pub samples: u64,
    pub out_dir: Option<PathBuf>,
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Largest pairwise |correlation| between the three per-cycle channels.
pub fn channel_correlation(generator: &GeneratorConfig, cycles: usize) -> Result<f64> {
    let ch = Channel::Triangle(TriangularChannel::new("t", 2, 0)?);
    let mut bundle = GeneratorBundle::new(generator)?;
    let mut cols = [Vec::with_capacity(cycles), Vec::with_capacity(cycles), Vec::with_capacity(cycles)];
    for _ in 0..cycles {
        let (a, b, y) = bundle.draw_cycle_samples(&ch, &ch, &ch);
        cols[0].push(a as f64);
        cols[1].push(b as f64);
        cols[2].push(y as f64);
    }
    Ok([(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| pearson(&cols[i], &cols[j]).abs())
        .fold(0.0, f64::max))
}

/// Count of GOF trials (out of `trials`) that did not reject.
pub fn gof_trials(generator: &GeneratorConfig, k: u32, trials: usize, samples: u64) -> Result<(usize, f64)> {
    let universe = Universe::new(k.max(2) + 2)?;
    let channel = TriangularChannel::new(format!("k{k}"), k, 0)?;
    let law = channel.law(universe)?;
    let mut passes = 0;
    let mut worst = 0.0f64;
    for t in 0..trials {
        let mut reg = generator.register(t as u64)?;
        let mut hist = vec![0u64; universe.len()];
        for _ in 0..samples {
            hist[triangular_sample(&mut reg, &channel) as usize] += 1;
        }
        let gof = chi_square_gof(&hist, &law, 5)?;
        worst = worst.max(gof.statistic / gof.critical);
        passes += usize::from(!gof.reject);
    }
    Ok((passes, worst))
}

pub fn gen_check(cfg: &ExperimentConfig, args: &GenCheckArgs) -> Result<Report> {
    let g = cfg.controller.generator().clone();
    let mut lines = vec![format!("{:<48} {:<6} detail", "check", "result")];
    let mut failed = 0;
    let mut row = |name: String, ok: bool, detail: String| {
        failed += usize::from(!ok);
        lines.push(format!("{name:<48} {:<6} {detail}", status(ok)));
    };

    for (width, taps) in [(3u32, vec![3u32, 2]), (8, vec![8, 6, 5, 4])] {
        let mut reg = Lfsr::new(width, &taps, 1)?;
        let full = (1usize << width) - 1;
        let mut seen = vec![false; full + 1];
        let mut distinct = 0;
        for _ in 0..full {
            let s = reg.state() as usize;
            if s != 0 && !seen[s] {
                seen[s] = true;
                distinct += 1;
            }
            reg.step();
        }
        let ok = distinct == full && reg.state() == 1;
        row(format!("lfsr width {width} taps {taps:?} exhaustive"), ok, format!("{distinct}/{full} states"));
    }
    let default = Lfsr::new(DEFAULT_WIDTH, &DEFAULT_TAPS, 1)?;
    let period = default.period(1 << 17);
    row(
        format!("lfsr width {DEFAULT_WIDTH} taps {DEFAULT_TAPS:?} period"),
        period == Some(65_535),
        format!("{period:?}"),
    );
    let maximal = is_maximal(g.width, &g.taps)?;
    row(format!("configured width {} taps {:?} maximal", g.width, g.taps), maximal, "algebraic order test".into());

    for k in 1..=3 {
        let (passes, worst) = gof_trials(&g, k, args.trials, args.samples)?;
        let need = (GOF_PASS_FRACTION * args.trials as f64).ceil() as usize;
        row(
            format!("triangle k={k} chi-square @0.01, N={}", args.samples),
            passes >= need,
            format!("{passes}/{} trials pass (need {need}); worst stat/crit {worst:.3}", args.trials),
        );
        if let Some(dir) = &args.out_dir {
            std::fs::create_dir_all(dir)?;
            let universe = Universe::new(k.max(2) + 2)?;
            let channel = TriangularChannel::new("t", k, 0)?;
            let mut reg = g.register(0)?;
            let mut hist = vec![0u64; universe.len()];
            for _ in 0..args.samples {
                hist[triangular_sample(&mut reg, &channel) as usize] += 1;
            }
            chi_square_gof(&hist, &channel.law(universe)?, 5)?.write_csv(create(&dir.join(format!("gof_k{k}.csv")))?)?;
        }
    }
    for (mode, bound) in [(GeneratorMode::Independent, 0.01), (GeneratorMode::Shared, 0.02)] {
        let gen = GeneratorConfig { mode, ..g.clone() };
        let rho = channel_correlation(&gen, 100_000)?;
        row(format!("{mode:?} channel correlation, 1e5 cycles"), rho < bound, format!("max |rho| {rho:.5} < {bound}"));
    }

    let passed = failed == 0;
    Ok(Report {
        summary: format!("SUMMARY gen-check status={} checks={} failed={failed}", status(passed), lines.len() - 1),
        lines,
        passed,
    })
}

pub struct SimulateArgs {
    pub xa: Option<InputValue>,
    pub xb: Option<InputValue>,
    pub cycles: Option<u64>,
    pub trace: Option<PathBuf>,
    pub tolerance: Option<f64>,
}

pub fn simulate(cfg: &ExperimentConfig, args: &SimulateArgs) -> Result<Report> {
    let ctl = &cfg.controller;
    let rb = ctl.rulebase();
    let cycles = args.cycles.unwrap_or(cfg.experiment.cycles);
    let tolerance = args.tolerance.unwrap_or(cfg.experiment.tolerance);
    let span = cfg.output_span();
    let mut lines = Vec::new();

    let (result, exact, exact_max) = match ctl.input_mode {
        InputMode::Crisp => {
            let universe = rb.input_a().universe();
            let xa = pick_input(args.xa, cfg.experiment.xa, "xa")?.resolve(universe)?;
            let xb = pick_input(args.xb, cfg.experiment.xb, "xb")?.resolve(universe)?;
            lines.push(format!("inputs           xa={xa} xb={xb} (codes, {} bits)", universe.bits()));
            let exact = exact_output(rb, xa, xb, UnionMode::Sum)?;
            let exact_max = exact_output(rb, xa, xb, UnionMode::Max)?;
            let result = match &args.trace {
                Some(path) => run_traced(ctl, xa, xb, cycles, create(path)?)?,
                None => run(ctl, xa, xb, cycles)?,
            };
            lines.push(format!("analytic rate    {:.6e}", ctl.analytic_acceptance(xa, xb)));
            (result, exact, exact_max)
        }
        InputMode::StochasticFuzzy => {
            let (a_in, b_in) = cfg.fuzzy_inputs.as_ref().context("fuzzy inputs missing")?;
            let sum = compose_fuzzy_inputs(rb, a_in, b_in, UnionMode::Sum)?;
            let max = compose_fuzzy_inputs(rb, a_in, b_in, UnionMode::Max)?;
            let result = run_fuzzy_inputs(ctl, a_in, b_in, cycles)?;
            let l1: f64 = result.accepted_law().iter().zip(sum.mass()).map(|(p, q)| (p - q).abs()).sum();
            lines.push(format!("inputs           fuzzy (a centroid {:.4}, b centroid {:.4})", a_in.expectation(), b_in.expectation()));
            lines.push(format!("analytic rate    {:.6e}", ctl.analytic_acceptance_fuzzy(a_in.mass(), b_in.mass())));
            lines.push(format!("histogram L1     {l1:.6}"));
            (result, sum.expectation(), max.expectation())
        }
    };
    let err = (result.estimate_mean - exact).abs();
    let passed = err <= tolerance * span;
    lines.push(format!("cycles           {}", result.total_cycles));
    lines.push(format!("accepted         {}", result.accepted_count));
    lines.push(format!("acceptance rate  {:.6e}", result.acceptance_rate));
    lines.push(format!("estimate (mean)  {:.6}", result.estimate_mean));
    lines.push(format!("estimate (iir)   {:.6}", result.estimate_filtered));
    lines.push(format!("exact (sum)      {exact:.6}"));
    lines.push(format!("exact (max ref)  {exact_max:.6}"));
    lines.push(format!("abs error        {err:.6} (limit {:.6})", tolerance * span));
    Ok(Report {
        summary: format!(
            "SUMMARY simulate status={} estimate={:.6} exact={exact:.6} abs_error={err:.6} acceptance_rate={:.6e}",
            status(passed),
            result.estimate_mean,
            result.acceptance_rate
        ),
        lines,
        passed,
    })
}

pub struct SurfaceArgs {
    pub step: Option<Code>,
    pub cycles: Option<u64>,
    pub out: PathBuf,
    pub tolerance: Option<f64>,
}

pub fn surface(cfg: &ExperimentConfig, args: &SurfaceArgs) -> Result<Report> {
    let step = args.step.unwrap_or(cfg.experiment.grid_step);
    let cycles = args.cycles.unwrap_or(cfg.experiment.cycles);
    let tolerance = args.tolerance.unwrap_or(cfg.experiment.tolerance);
    let report = surface_compare(&cfg.controller, step, cycles)?;
    report.write_csv(create(&args.out)?)?;

    let limit = tolerance * cfg.output_span();
    let max_z = report
        .points
        .iter()
        .filter(|p| !p.skipped())
        .map(|p| p.acceptance_z().abs())
        .fold(0.0, f64::max);
    let passed = report.max_abs_error <= limit && max_z <= ACCEPTANCE_SIGMAS;
    let lines = vec![
        format!("points           {}", report.points.len()),
        format!("skipped          {}", report.skipped.len()),
        format!("max abs error    {:.6} (limit {limit:.6})", report.max_abs_error),
        format!("rmse             {:.6}", report.rmse),
        format!("max |z| accept   {max_z:.3} (limit {ACCEPTANCE_SIGMAS})"),
        format!("csv              {}", args.out.display()),
    ];
    Ok(Report {
        summary: format!(
            "SUMMARY surface status={} max_abs_error={:.6} rmse={:.6} skipped={} max_acceptance_z={max_z:.3}",
            status(passed),
            report.max_abs_error,
            report.rmse,
            report.skipped.len()
        ),
        lines,
        passed,
    })
}

pub struct ConvergeArgs {
    pub xa: Option<InputValue>,
    pub xb: Option<InputValue>,
    pub replicas: Option<usize>,
    pub checkpoints: Option<Vec<u64>>,
    pub out: PathBuf,
}

pub fn converge(cfg: &ExperimentConfig, args: &ConvergeArgs) -> Result<Report> {
    let universe = cfg.controller.rulebase().input_a().universe();
    let xa = pick_input(args.xa, cfg.experiment.xa, "xa")?.resolve(universe)?;
    let xb = pick_input(args.xb, cfg.experiment.xb, "xb")?.resolve(universe)?;
    let replicas = args.replicas.unwrap_or(cfg.experiment.replicas);
    let checkpoints = args.checkpoints.clone().unwrap_or_else(|| cfg.experiment.checkpoints.clone());
    let report = convergence_curve(&cfg.controller, xa, xb, &checkpoints, replicas)?;
    report.write_csv(create(&args.out)?)?;

    let mut lines = vec![format!("{:>12} {:>14} {:>12} {:>12}", "cycles", "n_accepted", "estimate", "stderr")];
    for c in &report.checkpoints {
        lines.push(format!("{:>12} {:>14.1} {:>12.6} {:>12.6}", c.cycles, c.n_accepted, c.estimate, c.stderr));
    }
    let slope = report.fitted_slope;
    let passed = slope.is_some_and(|s| (SLOPE_MIN..=SLOPE_MAX).contains(&s));
    let slope_text = slope.map(|s| format!("{s:.4}")).unwrap_or_else(|| "undefined".into());
    lines.push(format!("fitted slope     {slope_text} (window [{SLOPE_MIN}, {SLOPE_MAX}], {replicas} replicas)"));
    lines.push(format!("csv              {}", args.out.display()));
    Ok(Report {
        summary: format!("SUMMARY converge status={} slope={slope_text} replicas={replicas}", status(passed)),
        lines,
        passed,
    })
}
