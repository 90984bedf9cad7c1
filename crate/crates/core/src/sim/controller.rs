use std::io::Write;

use super::config::{ControllerConfig, InputMode, RuleSchedule};
use super::signal::iir_update;
use crate::error::{Error, Result};
use crate::fuzzy::{Code, MembershipPdf};
use crate::rng::{Channel, GeneratorBundle, Lfsr};

// Sub-stream numbers for registers that sit outside the channel bundle.
const REFERENCE_STREAM: u64 = 16;
const SCHEDULE_STREAM: u64 = 17;

pub const TRACE_HEADER: [&str; 6] = ["cycle", "rule", "xa", "xb", "y", "matched"];

/// What happened on one clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleTrace {
    pub cycle: u64,
    pub rule_index: usize,
    pub xa: Code,
    pub xb: Code,
    pub y: Code,
    pub matched: bool,
}

/// Aggregate of a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Mean of the accepted output samples; the estimator of record.
    pub estimate_mean: f64,
    /// Low-pass filter output after the last clock.
    pub estimate_filtered: f64,
    pub accepted_count: u64,
    pub total_cycles: u64,
    pub acceptance_rate: f64,
    /// Accepted output samples per code.
    pub accepted_histogram: Vec<u64>,
}

impl RunResult {
    /// Accepted-sample histogram scaled to unit sum.
    pub fn accepted_law(&self) -> Vec<f64> {
        let n = self.accepted_count.max(1) as f64;
        self.accepted_histogram.iter().map(|&c| c as f64 / n).collect()
    }
}

enum Scheduler {
    RoundRobin,
    Random { register: Lfsr, bits: u32 },
}

/// Live controller state: generator registers, counters, output stage.
pub struct Controller {
    rule_channels: Vec<(Channel, Channel, Channel)>,
    generator: GeneratorBundle,
    reference: Lfsr,
    scheduler: Scheduler,
    alpha: f64,
    cycle: u64,
    accepted: u64,
    sum_y: u64,
    histogram: Vec<u64>,
    filtered: Option<f64>,
}

impl Controller {
    pub fn new(config: &ControllerConfig) -> Result<Self> {
        let gen = config.generator();
        let m = config.rulebase().len();
        let scheduler = match config.schedule {
            RuleSchedule::RoundRobin => Scheduler::RoundRobin,
            RuleSchedule::UniformRandom => Scheduler::Random {
                register: gen.register(SCHEDULE_STREAM)?,
                bits: usize::BITS - (m - 1).leading_zeros(),
            },
        };
        Ok(Controller {
            rule_channels: config.rule_channels(),
            generator: GeneratorBundle::new(gen)?,
            reference: gen.register(REFERENCE_STREAM)?,
            scheduler,
            alpha: config.filter_alpha(),
            cycle: 0,
            accepted: 0,
            sum_y: 0,
            histogram: vec![0; config.rulebase().output().universe().len()],
            filtered: None,
        })
    }

    fn select_rule(&mut self) -> usize {
        let m = self.rule_channels.len();
        match &mut self.scheduler {
            Scheduler::RoundRobin => (self.cycle % m as u64) as usize,
            Scheduler::Random { bits: 0, .. } => 0,
            Scheduler::Random { register, bits } => loop {
                // rejection keeps the draw uniform when m is not a power of two
                let i = register.word(*bits) as usize;
                if i < m {
                    break i;
                }
            },
        }
    }

    #[inline]
    fn clock(&mut self, refs: impl FnOnce(&mut Lfsr) -> (Code, Code)) -> CycleTrace {
        let rule_index = self.select_rule();
        let (a, b, y) = &self.rule_channels[rule_index];
        let (xa, xb, y) = self.generator.draw_cycle_samples(a, b, y);
        let (xa_ref, xb_ref) = refs(&mut self.reference);
        let matched = xa == xa_ref && xb == xb_ref;
        if matched {
            self.accepted += 1;
            self.sum_y += y as u64;
            self.histogram[y as usize] += 1;
            self.filtered = Some(match self.filtered {
                None => y as f64,
                Some(prev) => iir_update(prev, y, self.alpha),
            });
        }
        let trace = CycleTrace { cycle: self.cycle, rule_index, xa, xb, y, matched };
        self.cycle += 1;
        trace
    }

    /// One clock against crisp comparator references.
    pub fn step(&mut self, xa_ref: Code, xb_ref: Code) -> CycleTrace {
        self.clock(|_| (xa_ref, xb_ref))
    }

    /// One clock with references drawn from dedicated channels.
    pub fn step_fuzzy(&mut self, a_ref: &Channel, b_ref: &Channel) -> CycleTrace {
        self.clock(|r| {
            let xa = a_ref.sample(r);
            (xa, b_ref.sample(r))
        })
    }

    pub fn cycles(&self) -> u64 {
        self.cycle
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    /// Current filter output; `None` until the first acceptance.
    pub fn filtered(&self) -> Option<f64> {
        self.filtered
    }

    /// Running mean of accepted samples; `None` until the first acceptance.
    pub fn estimate(&self) -> Option<f64> {
        (self.accepted > 0).then(|| self.sum_y as f64 / self.accepted as f64)
    }

    /// Snapshot of the counters. `analytic_rate` is only used for the
    /// diagnostic when nothing has been accepted.
    pub fn result(&self, analytic_rate: f64) -> Result<RunResult> {
        let estimate_mean = self
            .estimate()
            .ok_or(Error::NoCoincidence { cycles: self.cycle, analytic_rate })?;
        Ok(RunResult {
            estimate_mean,
            estimate_filtered: self.filtered.unwrap_or(estimate_mean),
            accepted_count: self.accepted,
            total_cycles: self.cycle,
            acceptance_rate: self.accepted as f64 / self.cycle as f64,
            accepted_histogram: self.histogram.clone(),
        })
    }
}

fn check_crisp(config: &ControllerConfig, xa_ref: Code, xb_ref: Code, cycles: u64) -> Result<()> {
    if config.input_mode != InputMode::Crisp {
        return Err(Error::InputMode("stochastic fuzzy"));
    }
    if cycles > config.max_cycles {
        return Err(Error::CycleBudget { requested: cycles, max: config.max_cycles });
    }
    config.rulebase().input_a().universe().check(xa_ref)?;
    config.rulebase().input_b().universe().check(xb_ref)?;
    Ok(())
}

/// Runs `cycles` clocks against crisp references and reports the estimate.
pub fn run(config: &ControllerConfig, xa_ref: Code, xb_ref: Code, cycles: u64) -> Result<RunResult> {
    check_crisp(config, xa_ref, xb_ref, cycles)?;
    let mut ctl = Controller::new(config)?;
    for _ in 0..cycles {
        ctl.step(xa_ref, xb_ref);
    }
    ctl.result(config.analytic_acceptance(xa_ref, xb_ref))
}

/// [`run`], streaming every clock as a CSV row to `sink`.
pub fn run_traced<W: Write>(
    config: &ControllerConfig,
    xa_ref: Code,
    xb_ref: Code,
    cycles: u64,
    sink: W,
) -> Result<RunResult> {
    check_crisp(config, xa_ref, xb_ref, cycles)?;
    let mut out = csv::Writer::from_writer(sink);
    out.write_record(TRACE_HEADER)?;
    let mut ctl = Controller::new(config)?;
    for _ in 0..cycles {
        let t = ctl.step(xa_ref, xb_ref);
        out.write_record(&[
            t.cycle.to_string(),
            t.rule_index.to_string(),
            t.xa.to_string(),
            t.xb.to_string(),
            t.y.to_string(),
            u8::from(t.matched).to_string(),
        ])?;
    }
    out.flush()?;
    ctl.result(config.analytic_acceptance(xa_ref, xb_ref))
}

/// Stochastic realization of inference with fuzzy inputs: each clock also
/// draws the comparator references from `a_in` and `b_in`.
pub fn run_fuzzy_inputs(
    config: &ControllerConfig,
    a_in: &MembershipPdf,
    b_in: &MembershipPdf,
    cycles: u64,
) -> Result<RunResult> {
    if config.input_mode != InputMode::StochasticFuzzy {
        return Err(Error::InputMode("crisp"));
    }
    if cycles > config.max_cycles {
        return Err(Error::CycleBudget { requested: cycles, max: config.max_cycles });
    }
    let rb = config.rulebase();
    if a_in.universe() != rb.input_a().universe() || b_in.universe() != rb.input_b().universe() {
        return Err(Error::UniverseMismatch);
    }
    let a_ch = Channel::realizing("a_in", a_in)?;
    let b_ch = Channel::realizing("b_in", b_in)?;
    let mut ctl = Controller::new(config)?;
    for _ in 0..cycles {
        ctl.step_fuzzy(&a_ch, &b_ch);
    }
    ctl.result(config.analytic_acceptance_fuzzy(a_in.mass(), b_in.mass()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{defuzzify_cog, make_triangular_pdf, Rule, RuleBase, TermId, Universe, Variable};
    use crate::rng::GeneratorConfig;

    fn u4() -> Universe {
        Universe::new(4).unwrap()
    }

    fn single(a: MembershipPdf, b: MembershipPdf, y: MembershipPdf) -> ControllerConfig {
        let va = Variable::new("a", u4()).with_term("A", a).unwrap();
        let vb = Variable::new("b", u4()).with_term("B", b).unwrap();
        let vy = Variable::new("y", u4()).with_term("C", y).unwrap();
        let rb = RuleBase::new(va, vb, vy, vec![Rule::new(TermId(0), TermId(0), TermId(0))]).unwrap();
        ControllerConfig::new(rb, GeneratorConfig::default()).unwrap()
    }

    #[test]
    fn point_antecedents_match_every_cycle() {
        let p = |c| MembershipPdf::point(u4(), c).unwrap();
        let cfg = single(p(3), p(5), make_triangular_pdf(u4(), 8, 3).unwrap());
        let r = run(&cfg, 3, 5, 1000).unwrap();
        assert_eq!(r.accepted_count, 1000);
        assert_eq!(r.acceptance_rate, 1.0);
    }

    #[test]
    fn disjoint_antecedent_never_matches() {
        let t = make_triangular_pdf(u4(), 0, 3).unwrap();
        let cfg = single(t.clone(), t.clone(), t);
        match run(&cfg, 12, 3, 10_000) {
            Err(Error::NoCoincidence { cycles: 10_000, analytic_rate }) => assert_eq!(analytic_rate, 0.0),
            other => panic!("{other:?}"),
        }
        assert!(matches!(run(&cfg, 3, 3, 0), Err(Error::NoCoincidence { cycles: 0, .. })));
    }

    #[test]
    fn round_robin_cycles_rules_in_order() {
        let t = make_triangular_pdf(u4(), 0, 3).unwrap();
        let v = Variable::new("x", u4()).with_term("T", t).unwrap();
        let rules = vec![Rule::new(TermId(0), TermId(0), TermId(0)); 4];
        let rb = RuleBase::new(v.clone(), v.clone(), v, rules).unwrap();
        let cfg = ControllerConfig::new(rb, GeneratorConfig::default()).unwrap();
        let mut ctl = Controller::new(&cfg).unwrap();
        let seq: Vec<usize> = (0..9).map(|_| ctl.step(3, 3).rule_index).collect();
        assert_eq!(seq, [0, 1, 2, 3, 0, 1, 2, 3, 0]);
    }

    #[test]
    fn histogram_and_mean_agree() {
        let t = make_triangular_pdf(u4(), 2, 3).unwrap();
        let cfg = single(t.clone(), t.clone(), make_triangular_pdf(u4(), 7, 3).unwrap());
        let r = run(&cfg, 5, 4, 50_000).unwrap();
        let hist: Vec<f64> = r.accepted_histogram.iter().map(|&c| c as f64).collect();
        assert!((defuzzify_cog(&hist).unwrap() - r.estimate_mean).abs() < 1e-9);
        assert_eq!(r.accepted_histogram.iter().sum::<u64>(), r.accepted_count);
        assert_eq!(r.acceptance_rate, r.accepted_count as f64 / r.total_cycles as f64);
    }

    #[test]
    fn traced_run_matches_plain_run() {
        let t = make_triangular_pdf(u4(), 2, 3).unwrap();
        let cfg = single(t.clone(), t.clone(), t);
        let mut buf = Vec::new();
        let traced = run_traced(&cfg, 5, 5, 200, &mut buf).unwrap();
        assert_eq!(traced, run(&cfg, 5, 5, 200).unwrap());
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("cycle,rule,xa,xb,y,matched"));
        assert_eq!(lines.count(), 200);
    }

    #[test]
    fn mode_and_budget_guards() {
        let t = make_triangular_pdf(u4(), 2, 3).unwrap();
        let cfg = single(t.clone(), t.clone(), t.clone()).with_max_cycles(10);
        assert!(matches!(run(&cfg, 5, 5, 11), Err(Error::CycleBudget { .. })));
        assert!(matches!(run(&cfg, 16, 5, 1), Err(Error::CodeOutOfRange { .. })));
        assert!(matches!(run_fuzzy_inputs(&cfg, &t, &t, 5), Err(Error::InputMode(_))));
        let fuzzy = cfg.with_input_mode(InputMode::StochasticFuzzy);
        assert!(matches!(run(&fuzzy, 5, 5, 5), Err(Error::InputMode(_))));
        let uni = MembershipPdf::uniform(u4());
        assert!(matches!(run_fuzzy_inputs(&fuzzy, &uni, &t, 5), Err(Error::NotRealizable(_))));
    }

    #[test]
    fn alpha_one_filter_holds_last_accepted_sample() {
        let t = make_triangular_pdf(u4(), 2, 3).unwrap();
        let cfg = single(t.clone(), t.clone(), t).with_filter_alpha(1.0).unwrap();
        let mut ctl = Controller::new(&cfg).unwrap();
        let mut last = None;
        for _ in 0..5000 {
            let tr = ctl.step(5, 5);
            if tr.matched {
                last = Some(tr.y as f64);
            }
            assert_eq!(ctl.filtered(), last);
        }
    }
}
