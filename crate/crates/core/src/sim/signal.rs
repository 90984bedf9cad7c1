use crate::error::{Error, Result};
use crate::fuzzy::{Code, Universe};

/// A/D converter: `round(x·(2^bits − 1))`, halves rounding up.
pub fn quantize(x: f64, bits: u32) -> Result<Code> {
    let universe = Universe::new(bits)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::AnalogRange(x));
    }
    Ok((x * universe.max_code() as f64 + 0.5).floor() as Code)
}

/// First-order low-pass step standing in for the D/A and analog filter.
#[inline]
pub fn iir_update(prev: f64, sample: Code, alpha: f64) -> f64 {
    prev + alpha * (sample as f64 - prev)
}
