use super::{Code, Universe};
use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

/// A membership function stored as a probability mass function over a
/// universe: `mass[code]` is both the degree of membership and the
/// probability that the realizing random signal takes that code.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipPdf {
    universe: Universe,
    mass: Vec<f64>,
}

impl MembershipPdf {
    /// Validates a mass vector: one entry per code, non-negative, unit sum.
    pub fn from_mass(universe: Universe, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != universe.len() {
            return Err(Error::InvalidMass(format!(
                "expected {} entries, got {}",
                universe.len(),
                mass.len()
            )));
        }
        if let Some((i, m)) = mass.iter().enumerate().find(|(_, m)| !(**m >= 0.0 && m.is_finite())) {
            return Err(Error::InvalidMass(format!("entry {i} is {m}")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidMass(format!("sums to {total}, not 1")));
        }
        Ok(MembershipPdf { universe, mass })
    }

    /// Scales a non-negative vector to unit sum.
    pub fn normalized(universe: Universe, mut mass: Vec<f64>) -> Result<Self> {
        let total: f64 = mass.iter().sum();
        if !(total > 0.0) {
            return Err(Error::ZeroMass);
        }
        mass.iter_mut().for_each(|m| *m /= total);
        Self::from_mass(universe, mass)
    }

    /// Singleton fuzzy set: all mass on one code.
    pub fn point(universe: Universe, code: Code) -> Result<Self> {
        universe.check(code)?;
        let mut mass = vec![0.0; universe.len()];
        mass[code as usize] = 1.0;
        Ok(MembershipPdf { universe, mass })
    }

    pub fn uniform(universe: Universe) -> Self {
        let n = universe.len();
        MembershipPdf { universe, mass: vec![1.0 / n as f64; n] }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Mass at `code`; zero outside the universe.
    pub fn at(&self, code: Code) -> f64 {
        self.mass.get(code as usize).copied().unwrap_or(0.0)
    }

    /// Smallest and largest code with non-zero mass.
    pub fn support(&self) -> (Code, Code) {
        let lo = self.mass.iter().position(|&m| m > 0.0).unwrap_or(0);
        let hi = self.mass.iter().rposition(|&m| m > 0.0).unwrap_or(0);
        (lo as Code, hi as Code)
    }

    /// Expected code, which is also the centre of gravity.
    pub fn expectation(&self) -> f64 {
        self.mass.iter().enumerate().map(|(y, m)| y as f64 * m).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.expectation();
        self.mass
            .iter()
            .enumerate()
            .map(|(y, m)| (y as f64 - mean).powi(2) * m)
            .sum()
    }
}

/// Exact law of `u1 + u2 + left_edge` with `u1`, `u2` independent and
/// uniform on `0..=half_width`, where `half_width = 2^k - 1`.
///
/// The support has to fit inside the universe; nothing is clipped.
pub fn make_triangular_pdf(universe: Universe, left_edge: Code, half_width: u32) -> Result<MembershipPdf> {
    if !(half_width as u64 + 1).is_power_of_two() {
        return Err(Error::HalfWidth(half_width));
    }
    let hi = left_edge as u64 + 2 * half_width as u64;
    if hi > universe.max_code() as u64 {
        return Err(Error::SupportOverflow { lo: left_edge as u64, hi, max: universe.max_code() });
    }
    let h = half_width as i64;
    let denom = ((h + 1) * (h + 1)) as f64;
    let mut mass = vec![0.0; universe.len()];
    for j in 0..=2 * h {
        mass[left_edge as usize + j as usize] = (h + 1 - (j - h).abs()) as f64 / denom;
    }
    Ok(MembershipPdf { universe, mass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(bits: u32) -> Universe {
        Universe::new(bits).unwrap()
    }

    #[test]
    fn triangle_k2_matches_convolution() {
        // uniform{0..3} * uniform{0..3}, counted by hand
        let mut counts = [0u32; 7];
        for a in 0..4 {
            for b in 0..4 {
                counts[a + b] += 1;
            }
        }
        assert_eq!(counts, [1, 2, 3, 4, 3, 2, 1]);
        let pdf = make_triangular_pdf(u(4), 0, 3).unwrap();
        for (code, &c) in counts.iter().enumerate() {
            assert_eq!(pdf.at(code as Code), c as f64 / 16.0);
        }
        assert!(pdf.mass()[7..].iter().all(|&m| m == 0.0));
    }

    #[test]
    fn degenerate_triangle_is_a_point() {
        let pdf = make_triangular_pdf(u(4), 0, 0).unwrap();
        assert_eq!(pdf, MembershipPdf::point(u(4), 0).unwrap());
    }

    #[test]
    fn overflow_is_rejected_not_clipped() {
        let err = make_triangular_pdf(u(3), 4, 3).unwrap_err();
        assert_eq!(err, Error::SupportOverflow { lo: 4, hi: 10, max: 7 });
    }

    #[test]
    fn half_width_must_be_mersenne() {
        assert_eq!(make_triangular_pdf(u(4), 0, 2).unwrap_err(), Error::HalfWidth(2));
    }

    #[test]
    fn from_mass_validates() {
        assert!(MembershipPdf::from_mass(u(2), vec![0.5, 0.5, 0.0, 0.0]).is_ok());
        assert!(MembershipPdf::from_mass(u(2), vec![0.5, 0.6, 0.0, 0.0]).is_err());
        assert!(MembershipPdf::from_mass(u(2), vec![1.5, -0.5, 0.0, 0.0]).is_err());
        assert!(MembershipPdf::from_mass(u(2), vec![1.0]).is_err());
    }

    #[test]
    fn support_and_moments() {
        let pdf = make_triangular_pdf(u(4), 5, 3).unwrap();
        assert_eq!(pdf.support(), (5, 11));
        assert!((pdf.expectation() - 8.0).abs() < 1e-12);
        // two independent uniform{0..3}: 2 * (16 - 1) / 12
        assert!((pdf.variance() - 2.5).abs() < 1e-12);
    }
}
