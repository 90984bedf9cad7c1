//! Exact discrete-PDF fuzzy engine.

mod inference;
mod membership;
mod rulebase;
mod universe;

pub use inference::{
    aggregate, compose_fuzzy_inputs, defuzzify_cog, exact_output, fire_strength, product_pdf,
    ProductPdf, UnionMode,
};
pub use membership::{make_triangular_pdf, MembershipPdf};
pub use rulebase::{Rule, RuleBase, TermId, Variable};
pub use universe::{Code, Universe};
