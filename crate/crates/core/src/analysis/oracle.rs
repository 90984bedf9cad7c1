//! Brute-force reference computations. They enumerate every code tuple and
//! never call the inference routines they are meant to check.

use crate::error::{Error, Result};
use crate::fuzzy::{MembershipPdf, RuleBase, UnionMode};

/// Law of `x` given that independent `X ~ p` and `X' ~ q` coincided,
/// found by enumerating all code pairs.
pub fn coincidence_law(p: &MembershipPdf, q: &MembershipPdf) -> Result<Vec<f64>> {
    if p.universe() != q.universe() {
        return Err(Error::UniverseMismatch);
    }
    let n = p.universe().len();
    let mut law = vec![0.0; n];
    let mut accepted = 0.0;
    for (x1, &a) in p.mass().iter().enumerate() {
        for (x2, &b) in q.mass().iter().enumerate() {
            if x1 == x2 {
                law[x1] += a * b;
                accepted += a * b;
            }
        }
    }
    if accepted == 0.0 {
        return Err(Error::DisjointSupport);
    }
    law.iter_mut().for_each(|v| *v /= accepted);
    Ok(law)
}

/// The full relation `R[x1][x2][y]`, flattened row-major.
pub fn relation(rulebase: &RuleBase, mode: UnionMode) -> Vec<f64> {
    let (na, nb, ny) = (
        rulebase.input_a().universe().len(),
        rulebase.input_b().universe().len(),
        rulebase.output().universe().len(),
    );
    let mut r = vec![0.0; na * nb * ny];
    for x1 in 0..na {
        for x2 in 0..nb {
            for y in 0..ny {
                let cell = &mut r[(x1 * nb + x2) * ny + y];
                for rule in rulebase.rules() {
                    let v = rulebase.antecedent_a(rule).mass()[x1]
                        * rulebase.antecedent_b(rule).mass()[x2]
                        * rulebase.consequent(rule).mass()[y];
                    *cell = match mode {
                        UnionMode::Sum => *cell + v,
                        UnionMode::Max => cell.max(v),
                    };
                }
            }
        }
    }
    r
}

/// `C'[y] = Σ_{x1,x2} a[x1]·b[x2]·R[x1][x2][y]`, unnormalized.
pub fn compose(rulebase: &RuleBase, relation: &[f64], a_in: &[f64], b_in: &[f64]) -> Vec<f64> {
    let nb = rulebase.input_b().universe().len();
    let ny = rulebase.output().universe().len();
    let mut out = vec![0.0; ny];
    for (x1, &a) in a_in.iter().enumerate() {
        for (x2, &b) in b_in.iter().enumerate() {
            let row = &relation[(x1 * nb + x2) * ny..][..ny];
            for (o, r) in out.iter_mut().zip(row) {
                *o += a * b * r;
            }
        }
    }
    out
}

/// Centroid of a relation slice at crisp inputs; `None` when it is empty.
pub fn crisp_output(rulebase: &RuleBase, relation: &[f64], x1: usize, x2: usize) -> Option<f64> {
    let nb = rulebase.input_b().universe().len();
    let ny = rulebase.output().universe().len();
    let row = &relation[(x1 * nb + x2) * ny..][..ny];
    let den: f64 = row.iter().sum();
    (den > 0.0).then(|| row.iter().enumerate().map(|(y, m)| y as f64 * m).sum::<f64>() / den)
}
