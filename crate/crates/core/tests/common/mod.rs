#![allow(dead_code)]

use stofuzz_core::fuzzy::{make_triangular_pdf, Code, MembershipPdf, Rule, RuleBase, TermId, Universe, Variable};
use stofuzz_core::rng::{GeneratorConfig, GeneratorMode};
use stofuzz_core::sim::ControllerConfig;

pub fn universe(bits: u32) -> Universe {
    Universe::new(bits).unwrap()
}

pub fn tri(u: Universe, shift: Code, k: u32) -> MembershipPdf {
    make_triangular_pdf(u, shift, (1 << k) - 1).unwrap()
}

/// 32-bit register: long enough that no test run wraps its period.
pub fn long_generator(seed: u64) -> GeneratorConfig {
    GeneratorConfig { mode: GeneratorMode::Shared, width: 32, taps: vec![32, 22, 2, 1], seed }
}

pub fn smb(u: Universe, name: &str) -> Variable {
    Variable::new(name, u)
        .with_term("S", tri(u, 0, 2))
        .unwrap()
        .with_term("M", tri(u, 4, 2))
        .unwrap()
        .with_term("B", tri(u, 9, 2))
        .unwrap()
}

/// 3×3 S/M/B rule base on 4-bit universes.
pub fn rules3x3() -> RuleBase {
    let u = universe(4);
    let table = [[0, 0, 1], [0, 1, 2], [1, 2, 2]];
    let rules = (0..3)
        .flat_map(|a| (0..3).map(move |b| Rule::new(TermId(a), TermId(b), TermId(table[a][b]))))
        .collect();
    RuleBase::new(smb(u, "a"), smb(u, "b"), smb(u, "y"), rules).unwrap()
}

/// if a = S and b = S then y = B, 5-bit universes.
pub fn single_rule() -> RuleBase {
    let u = universe(5);
    let v = |n| {
        Variable::new(n, u)
            .with_term("S", tri(u, 0, 2))
            .unwrap()
            .with_term("M", tri(u, 12, 2))
            .unwrap()
            .with_term("B", tri(u, 25, 2))
            .unwrap()
    };
    RuleBase::new(v("a"), v("b"), v("y"), vec![Rule::new(TermId(0), TermId(0), TermId(2))]).unwrap()
}

pub fn controller(rb: RuleBase, seed: u64) -> ControllerConfig {
    ControllerConfig::new(rb, long_generator(seed)).unwrap()
}

pub fn l1(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}

pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}
