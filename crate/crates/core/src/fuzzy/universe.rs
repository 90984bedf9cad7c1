use crate::error::{Error, Result};

/// An integer code on a universe of discourse.
pub type Code = u32;

/// The code range `0..=2^bits - 1` of one fuzzy variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Universe {
    bits: u32,
}

impl Universe {
    pub const MIN_BITS: u32 = 2;
    pub const MAX_BITS: u32 = 16;

    pub fn new(bits: u32) -> Result<Self> {
        if !(Self::MIN_BITS..=Self::MAX_BITS).contains(&bits) {
            return Err(Error::UniverseBits(bits));
        }
        Ok(Universe { bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        1usize << self.bits
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_code(&self) -> Code {
        (1u32 << self.bits) - 1
    }

    /// Distance between the smallest and largest code.
    pub fn span(&self) -> f64 {
        self.max_code() as f64
    }

    pub fn contains(&self, code: Code) -> bool {
        code <= self.max_code()
    }

    pub fn check(&self, code: Code) -> Result<Code> {
        if self.contains(code) {
            Ok(code)
        } else {
            Err(Error::CodeOutOfRange { code, max: self.max_code() })
        }
    }

    pub fn codes(&self) -> impl Iterator<Item = Code> {
        0..=self.max_code()
    }
}
