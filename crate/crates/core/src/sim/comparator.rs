use crate::error::{Error, Result};
use crate::fuzzy::Universe;
use crate::rng::{Channel, Lfsr};

/// Outcome of gating two random signals through an equality comparator.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceSample {
    /// Accepted values per code.
    pub histogram: Vec<u64>,
    pub trials: u64,
}

impl CoincidenceSample {
    pub fn accepted(&self) -> u64 {
        self.histogram.iter().sum()
    }

    pub fn law(&self) -> Vec<f64> {
        let n = self.accepted().max(1) as f64;
        self.histogram.iter().map(|&c| c as f64 / n).collect()
    }
}

/// Draws `p` then `q` from one register each trial and keeps the value
/// whenever they coincide, until `accepted` values are kept.
pub fn sample_coincidences(
    register: &mut Lfsr,
    p: &Channel,
    q: &Channel,
    universe: Universe,
    accepted: u64,
    max_trials: u64,
) -> Result<CoincidenceSample> {
    let mut histogram = vec![0u64; universe.len()];
    let mut kept = 0;
    let mut trials = 0;
    while kept < accepted {
        if trials == max_trials {
            return Err(Error::NoCoincidence { cycles: trials, analytic_rate: f64::NAN });
        }
        trials += 1;
        let x = p.sample(register);
        if x == q.sample(register) {
            histogram[x as usize] += 1;
            kept += 1;
        }
    }
    Ok(CoincidenceSample { histogram, trials })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_against_itself_always_coincides() {
        let u = Universe::new(3).unwrap();
        let mut r = Lfsr::with_default_taps(1).unwrap();
        let s = sample_coincidences(&mut r, &Channel::Constant(2), &Channel::Constant(2), u, 10, 10).unwrap();
        assert_eq!(s.trials, 10);
        assert_eq!(s.histogram[2], 10);
        assert!(sample_coincidences(&mut r, &Channel::Constant(2), &Channel::Constant(3), u, 1, 100).is_err());
    }
}
