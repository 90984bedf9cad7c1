use super::{Code, MembershipPdf, RuleBase};
use crate::error::{Error, Result};

/// How per-rule output sets are united.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnionMode {
    /// Weighted mixture `Σ w_i·μ_Ci`. This is what the multiplexed hardware
    /// computes, so it is the convergence target.
    #[default]
    Sum,
    /// Classical set union `max_i w_i·μ_Ci`, kept for comparison only.
    Max,
}

/// Larsen product of the antecedent memberships at crisp inputs.
pub fn fire_strength(rulebase: &RuleBase, rule_index: usize, x1: Code, x2: Code) -> Result<f64> {
    let rule = rulebase.rule(rule_index)?;
    rulebase.input_a().universe().check(x1)?;
    rulebase.input_b().universe().check(x2)?;
    Ok(rulebase.antecedent_a(rule).at(x1) * rulebase.antecedent_b(rule).at(x2))
}

/// Pointwise product of two densities together with its total mass.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPdf {
    pub unnormalized: Vec<f64>,
    pub normalizer: f64,
}

impl ProductPdf {
    /// Law of a sample accepted on coincidence of the two sources.
    pub fn normalized(&self, universe: super::Universe) -> Result<MembershipPdf> {
        if self.normalizer <= 0.0 {
            return Err(Error::DisjointSupport);
        }
        MembershipPdf::normalized(universe, self.unnormalized.clone())
    }

    pub fn is_disjoint(&self) -> bool {
        self.normalizer <= 0.0
    }
}

pub fn product_pdf(p: &MembershipPdf, q: &MembershipPdf) -> Result<ProductPdf> {
    if p.universe() != q.universe() {
        return Err(Error::UniverseMismatch);
    }
    let unnormalized: Vec<f64> = p.mass().iter().zip(q.mass()).map(|(a, b)| a * b).collect();
    let normalizer = unnormalized.iter().sum();
    Ok(ProductPdf { unnormalized, normalizer })
}

/// Centre of gravity `Σ y·m(y) / Σ m(y)` over code positions.
pub fn defuzzify_cog(mass: &[f64]) -> Result<f64> {
    let (num, den) = mass
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(n, d), (y, &m)| (n + y as f64 * m, d + m));
    if !(den > 0.0) {
        return Err(Error::ZeroMass);
    }
    Ok(num / den)
}

/// Aggregated (unnormalized) output set for crisp inputs.
pub fn aggregate(rulebase: &RuleBase, x1: Code, x2: Code, mode: UnionMode) -> Result<Vec<f64>> {
    let mut out = vec![0.0; rulebase.output().universe().len()];
    let mut fired = false;
    for i in 0..rulebase.len() {
        let w = fire_strength(rulebase, i, x1, x2)?;
        if w == 0.0 {
            continue;
        }
        fired = true;
        let c = rulebase.consequent(&rulebase.rules()[i]);
        for (o, &m) in out.iter_mut().zip(c.mass()) {
            match mode {
                UnionMode::Sum => *o += w * m,
                UnionMode::Max => *o = o.max(w * m),
            }
        }
    }
    if !fired {
        return Err(Error::NoRuleFires { x1, x2 });
    }
    Ok(out)
}

/// Crisp controller output for crisp inputs: fire, unite, defuzzify.
pub fn exact_output(rulebase: &RuleBase, x1: Code, x2: Code, mode: UnionMode) -> Result<f64> {
    defuzzify_cog(&aggregate(rulebase, x1, x2, mode)?)
}

/// Output set for fuzzy inputs, `C' = (A' × B') · R`, normalized.
pub fn compose_fuzzy_inputs(
    rulebase: &RuleBase,
    a_in: &MembershipPdf,
    b_in: &MembershipPdf,
    mode: UnionMode,
) -> Result<MembershipPdf> {
    if a_in.universe() != rulebase.input_a().universe() || b_in.universe() != rulebase.input_b().universe() {
        return Err(Error::UniverseMismatch);
    }
    let out_universe = rulebase.output().universe();
    let mut out = vec![0.0; out_universe.len()];
    match mode {
        // The sum commutes with the input sums, so each rule reduces to the
        // product of two overlaps.
        UnionMode::Sum => {
            for rule in rulebase.rules() {
                let wa = dot(a_in.mass(), rulebase.antecedent_a(rule).mass());
                let wb = dot(b_in.mass(), rulebase.antecedent_b(rule).mass());
                let w = wa * wb;
                if w == 0.0 {
                    continue;
                }
                for (o, &m) in out.iter_mut().zip(rulebase.consequent(rule).mass()) {
                    *o += w * m;
                }
            }
        }
        UnionMode::Max => {
            let nonzero = |p: &MembershipPdf| -> Vec<(Code, f64)> {
                p.mass()
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m > 0.0)
                    .map(|(c, &m)| (c as Code, m))
                    .collect()
            };
            let (xs_a, xs_b) = (nonzero(a_in), nonzero(b_in));
            let mut inner = vec![0.0f64; out_universe.len()];
            for &(x1, pa) in &xs_a {
                for &(x2, pb) in &xs_b {
                    inner.iter_mut().for_each(|v| *v = 0.0);
                    for rule in rulebase.rules() {
                        let w = rulebase.antecedent_a(rule).at(x1) * rulebase.antecedent_b(rule).at(x2);
                        if w == 0.0 {
                            continue;
                        }
                        for (v, &m) in inner.iter_mut().zip(rulebase.consequent(rule).mass()) {
                            *v = v.max(w * m);
                        }
                    }
                    for (o, v) in out.iter_mut().zip(&inner) {
                        *o += pa * pb * v;
                    }
                }
            }
        }
    }
    if !(out.iter().sum::<f64>() > 0.0) {
        return Err(Error::DisjointSupport);
    }
    MembershipPdf::normalized(out_universe, out)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
