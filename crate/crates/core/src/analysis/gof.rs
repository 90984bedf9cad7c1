use std::io::Write;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::fuzzy::{Code, MembershipPdf};

pub const GOF_SIGNIFICANCE: f64 = 0.01;
pub const GOF_HEADER: [&str; 3] = ["bin", "observed", "expected"];

#[derive(Debug, Clone, PartialEq)]
pub struct GofBin {
    /// First and last code merged into this bin.
    pub codes: (Code, Code),
    pub observed: u64,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub reject: bool,
    pub bins: Vec<GofBin>,
}

impl GofResult {
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(sink);
        out.write_record(GOF_HEADER)?;
        for b in &self.bins {
            out.write_record(&[b.codes.0.to_string(), b.observed.to_string(), b.expected.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Pearson chi-square test of a code histogram against an exact law.
///
/// Codes in the support of `expected` are merged left to right until each
/// bin expects at least `min_bin` counts. Any observation outside the
/// support is an immediate rejection.
pub fn chi_square_gof(observed: &[u64], expected: &MembershipPdf, min_bin: u64) -> Result<GofResult> {
    let universe = expected.universe();
    if observed.len() != universe.len() {
        return Err(Error::InvalidMass(format!("histogram has {} bins, universe {}", observed.len(), universe.len())));
    }
    let total: u64 = observed.iter().sum();
    let needed = 10 * universe.len() as u64;
    if total < needed {
        return Err(Error::InsufficientSamples { got: total, needed });
    }
    let n = total as f64;
    let (lo, hi) = expected.support();

    let mut bins: Vec<GofBin> = Vec::new();
    let mut open: Option<GofBin> = None;
    for code in lo..=hi {
        let bin = open.get_or_insert(GofBin { codes: (code, code), observed: 0, expected: 0.0 });
        bin.codes.1 = code;
        bin.observed += observed[code as usize];
        bin.expected += n * expected.at(code);
        if bin.expected >= min_bin as f64 {
            bins.extend(open.take());
        }
    }
    if let Some(rest) = open {
        match bins.last_mut() {
            Some(last) => {
                last.codes.1 = rest.codes.1;
                last.observed += rest.observed;
                last.expected += rest.expected;
            }
            None => bins.push(rest),
        }
    }

    let stray = observed
        .iter()
        .enumerate()
        .any(|(c, &o)| o > 0 && expected.at(c as Code) == 0.0);
    let dof = bins.len().saturating_sub(1);
    let statistic = if stray {
        f64::INFINITY
    } else {
        bins.iter()
            .map(|b| (b.observed as f64 - b.expected).powi(2) / b.expected)
            .sum()
    };
    let critical = if dof == 0 {
        0.0
    } else {
        ChiSquared::new(dof as f64)
            .expect("positive dof")
            .inverse_cdf(1.0 - GOF_SIGNIFICANCE)
    };
    let reject = stray || (dof > 0 && statistic > critical);
    Ok(GofResult { statistic, dof, critical, reject, bins })
}
