use super::Lfsr;
use crate::error::{Error, Result};
use crate::fuzzy::{make_triangular_pdf, Code, MembershipPdf, Universe};

/// Adder/delay pair plus shift constant: emits `u1 + u2 + shift` where
/// `u1`, `u2` are consecutive `bits`-wide words from the register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularChannel {
    label: String,
    bits: u32,
    shift: Code,
}

impl TriangularChannel {
    pub fn new(label: impl Into<String>, bits: u32, shift: Code) -> Result<Self> {
        if bits == 0 || bits > 16 {
            return Err(Error::ChannelBits(bits));
        }
        Ok(TriangularChannel { label: label.into(), bits, shift })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn shift(&self) -> Code {
        self.shift
    }

    pub fn half_width(&self) -> u32 {
        (1 << self.bits) - 1
    }

    /// Inclusive output range.
    pub fn range(&self) -> (Code, Code) {
        (self.shift, self.shift + 2 * self.half_width())
    }

    /// Proves at construction time that no sample can leave `universe`.
    pub fn check(&self, universe: Universe) -> Result<()> {
        let (lo, hi) = self.range();
        if hi > universe.max_code() {
            return Err(Error::SupportOverflow { lo: lo as u64, hi: hi as u64, max: universe.max_code() });
        }
        Ok(())
    }

    pub fn law(&self, universe: Universe) -> Result<MembershipPdf> {
        make_triangular_pdf(universe, self.shift, self.half_width())
    }
}

/// Draws one triangular sample; consumes exactly `2·bits` register clocks.
/// The first word is held (the delay element) while the second is shifted
/// out, then both go through the adder.
#[inline]
pub fn triangular_sample(lfsr: &mut Lfsr, channel: &TriangularChannel) -> Code {
    let u1 = lfsr.word(channel.bits);
    let u2 = lfsr.word(channel.bits);
    let y = u1 + u2 + channel.shift;
    debug_assert!(y >= channel.range().0 && y <= channel.range().1);
    y
}

/// Signal source for one membership function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Channel {
    Triangle(TriangularChannel),
    /// Singleton set: a constant code, no register clocks.
    Constant(Code),
}

impl Channel {
    #[inline]
    pub fn sample(&self, lfsr: &mut Lfsr) -> Code {
        match self {
            Channel::Triangle(t) => triangular_sample(lfsr, t),
            Channel::Constant(c) => *c,
        }
    }

    /// Register clocks consumed per sample.
    pub fn clocks(&self) -> u32 {
        match self {
            Channel::Triangle(t) => 2 * t.bits,
            Channel::Constant(_) => 0,
        }
    }

    pub fn law(&self, universe: Universe) -> Result<MembershipPdf> {
        match self {
            Channel::Triangle(t) => t.law(universe),
            Channel::Constant(c) => MembershipPdf::point(universe, *c),
        }
    }

    /// Finds the channel whose exact law is `pdf`, if there is one.
    pub fn realizing(label: &str, pdf: &MembershipPdf) -> Result<Channel> {
        let (lo, hi) = pdf.support();
        let width = hi - lo + 1;
        let channel = if width == 1 {
            Channel::Constant(lo)
        } else if (width + 1).is_power_of_two() && width >= 3 {
            let bits = (width + 1).trailing_zeros() - 1;
            Channel::Triangle(TriangularChannel::new(label, bits, lo)?)
        } else {
            return Err(Error::NotRealizable(label.to_string()));
        };
        if channel.law(pdf.universe())? != *pdf {
            return Err(Error::NotRealizable(label.to_string()));
        }
        Ok(channel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(bits: u32) -> Universe {
        Universe::new(bits).unwrap()
    }

    #[test]
    fn minimal_channel_law() {
        // u1, u2 in {0,1}: sums 0,1,1,2
        let ch = TriangularChannel::new("S", 1, 5).unwrap();
        assert_eq!(ch.range(), (5, 7));
        let law = ch.law(u(3)).unwrap();
        assert_eq!(&law.mass()[5..], &[0.25, 0.5, 0.25]);
        assert_eq!(TriangularChannel::new("S", 0, 5).unwrap_err(), Error::ChannelBits(0));
    }

    #[test]
    fn range_is_checked_against_universe() {
        let ch = TriangularChannel::new("B", 2, 9).unwrap();
        assert!(ch.check(u(4)).is_ok());
        assert!(ch.check(u(3)).is_err());
    }

    #[test]
    fn samples_stay_in_range_and_replay() {
        let ch = TriangularChannel::new("M", 3, 2).unwrap();
        let mut a = Lfsr::with_default_taps(99).unwrap();
        let mut b = a.clone();
        let xs: Vec<Code> = (0..10_000).map(|_| triangular_sample(&mut a, &ch)).collect();
        assert!(xs.iter().all(|&x| (2..=16).contains(&x)));
        let ys: Vec<Code> = (0..10_000).map(|_| triangular_sample(&mut b, &ch)).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn realizing_recovers_shapes() {
        let t = make_triangular_pdf(u(5), 7, 7).unwrap();
        let ch = Channel::realizing("T", &t).unwrap();
        assert_eq!(ch, Channel::Triangle(TriangularChannel::new("T", 3, 7).unwrap()));
        assert_eq!(ch.clocks(), 6);
        let p = MembershipPdf::point(u(5), 4).unwrap();
        assert_eq!(Channel::realizing("P", &p).unwrap(), Channel::Constant(4));
        let uni = MembershipPdf::uniform(u(2));
        assert!(matches!(Channel::realizing("U", &uni), Err(Error::NotRealizable(_))));
        let mut skew = vec![0.0; 8];
        skew[..3].copy_from_slice(&[0.5, 0.25, 0.25]);
        let skew = MembershipPdf::from_mass(u(3), skew).unwrap();
        assert!(Channel::realizing("K", &skew).is_err());
    }
}
