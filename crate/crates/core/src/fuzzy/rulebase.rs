use super::{MembershipPdf, Universe};
use crate::error::{Error, Result};

/// Index of a linguistic term within one variable's table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub usize);

/// A fuzzy variable: a universe and its named membership functions.
#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    name: String,
    universe: Universe,
    terms: Vec<(String, MembershipPdf)>,
}

impl Variable {
    pub fn new(name: impl Into<String>, universe: Universe) -> Self {
        Variable { name: name.into(), universe, terms: Vec::new() }
    }

    /// Adds a term and returns its id. The membership must live on this
    /// variable's universe.
    pub fn add_term(&mut self, name: impl Into<String>, pdf: MembershipPdf) -> Result<TermId> {
        if pdf.universe() != self.universe {
            return Err(Error::UniverseMismatch);
        }
        self.terms.push((name.into(), pdf));
        Ok(TermId(self.terms.len() - 1))
    }

    pub fn with_term(mut self, name: impl Into<String>, pdf: MembershipPdf) -> Result<Self> {
        self.add_term(name, pdf)?;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, id: TermId) -> Option<&MembershipPdf> {
        self.terms.get(id.0).map(|(_, pdf)| pdf)
    }

    pub fn term_name(&self, id: TermId) -> Option<&str> {
        self.terms.get(id.0).map(|(n, _)| n.as_str())
    }

    pub fn find(&self, name: &str) -> Option<TermId> {
        self.terms.iter().position(|(n, _)| n == name).map(TermId)
    }

    pub fn terms(&self) -> impl Iterator<Item = (TermId, &str, &MembershipPdf)> {
        self.terms.iter().enumerate().map(|(i, (n, p))| (TermId(i), n.as_str(), p))
    }
}

/// `if x1 = A and x2 = B then y = C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub antecedent_a: TermId,
    pub antecedent_b: TermId,
    pub consequent: TermId,
}

impl Rule {
    pub fn new(a: TermId, b: TermId, c: TermId) -> Self {
        Rule { antecedent_a: a, antecedent_b: b, consequent: c }
    }
}

/// Two-input, one-output rule base. The union relation over the rules is
/// never materialized; inference walks the rule list directly.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    input_a: Variable,
    input_b: Variable,
    output: Variable,
    rules: Vec<Rule>,
}

impl RuleBase {
    pub fn new(input_a: Variable, input_b: Variable, output: Variable, rules: Vec<Rule>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::EmptyRuleBase);
        }
        for (i, r) in rules.iter().enumerate() {
            for (what, var, id) in [
                ("antecedent a", &input_a, r.antecedent_a),
                ("antecedent b", &input_b, r.antecedent_b),
                ("consequent", &output, r.consequent),
            ] {
                if var.term(id).is_none() {
                    return Err(Error::UnresolvedTerm { rule: i, what, index: id.0 });
                }
            }
        }
        Ok(RuleBase { input_a, input_b, output, rules })
    }

    pub fn input_a(&self) -> &Variable {
        &self.input_a
    }

    pub fn input_b(&self) -> &Variable {
        &self.input_b
    }

    pub fn output(&self) -> &Variable {
        &self.output
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rule(&self, index: usize) -> Result<&Rule> {
        self.rules.get(index).ok_or(Error::RuleIndex { index, count: self.rules.len() })
    }

    // Ids were resolved in `new`, so these lookups cannot fail.
    pub fn antecedent_a(&self, rule: &Rule) -> &MembershipPdf {
        self.input_a.term(rule.antecedent_a).expect("validated rule")
    }

    pub fn antecedent_b(&self, rule: &Rule) -> &MembershipPdf {
        self.input_b.term(rule.antecedent_b).expect("validated rule")
    }

    pub fn consequent(&self, rule: &Rule) -> &MembershipPdf {
        self.output.term(rule.consequent).expect("validated rule")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::make_triangular_pdf;

    #[test]
    fn rejects_dangling_ids_and_empty_bases() {
        let u = Universe::new(4).unwrap();
        let v = Variable::new("x", u).with_term("S", make_triangular_pdf(u, 0, 3).unwrap()).unwrap();
        assert_eq!(
            RuleBase::new(v.clone(), v.clone(), v.clone(), vec![]).unwrap_err(),
            Error::EmptyRuleBase
        );
        let err = RuleBase::new(v.clone(), v.clone(), v, vec![Rule::new(TermId(0), TermId(0), TermId(3))]).unwrap_err();
        assert!(matches!(err, Error::UnresolvedTerm { rule: 0, what: "consequent", index: 3 }));
    }

    #[test]
    fn terms_must_share_the_variable_universe() {
        let u4 = Universe::new(4).unwrap();
        let u5 = Universe::new(5).unwrap();
        let mut v = Variable::new("x", u4);
        assert_eq!(v.add_term("P", MembershipPdf::point(u5, 1).unwrap()).unwrap_err(), Error::UniverseMismatch);
        assert_eq!(v.add_term("P", MembershipPdf::point(u4, 1).unwrap()).unwrap(), TermId(0));
        assert_eq!(v.find("P"), Some(TermId(0)));
    }
}
