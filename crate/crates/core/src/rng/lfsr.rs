use crate::error::{Error, Result};

pub const DEFAULT_WIDTH: u32 = 16;
pub const DEFAULT_TAPS: [u32; 4] = [16, 14, 13, 11];

/// Fibonacci (external XOR) linear-feedback shift register.
///
/// Stages are numbered 1..=width from the input end, so tap `width` is the
/// stage whose bit is shifted out. On every clock the output stage leaves,
/// the register shifts toward the output, and the XOR of all tapped stages
/// enters stage 1. Internally the output stage is bit 0 of `state`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lfsr {
    width: u32,
    taps: Vec<u32>,
    tap_mask: u64,
    state: u64,
}

impl Lfsr {
    /// Loads a seed. The zero state is a fixed point of any XOR feedback,
    /// so it is refused.
    pub fn new(width: u32, taps: &[u32], seed: u64) -> Result<Self> {
        let tap_mask = tap_mask(width, taps)?;
        if seed == 0 {
            return Err(Error::ZeroSeed);
        }
        if seed >> width != 0 {
            return Err(Error::SeedRange { seed, width });
        }
        let mut taps = taps.to_vec();
        taps.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Lfsr { width, taps, tap_mask, state: seed })
    }

    pub fn with_default_taps(seed: u64) -> Result<Self> {
        Self::new(DEFAULT_WIDTH, &DEFAULT_TAPS, seed)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn taps(&self) -> &[u32] {
        &self.taps
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    /// One clock. Returns the bit shifted out.
    #[inline]
    pub fn step(&mut self) -> u32 {
        let out = (self.state & 1) as u32;
        let feedback = (self.state & self.tap_mask).count_ones() as u64 & 1;
        self.state = (self.state >> 1) | (feedback << (self.width - 1));
        debug_assert_ne!(self.state, 0);
        out
    }

    /// `k` clocks, output bits assembled most significant first.
    #[inline]
    pub fn word(&mut self, k: u32) -> u32 {
        debug_assert!(k >= 1 && k <= self.width);
        (0..k).fold(0, |w, _| (w << 1) | self.step())
    }

    /// Checked variant of [`Lfsr::word`].
    pub fn try_word(&mut self, k: u32) -> Result<u32> {
        if k == 0 || k > self.width || k > 32 {
            return Err(Error::WordWidth { k, width: self.width });
        }
        Ok(self.word(k))
    }

    /// Clocks until the seed state recurs. Gives up after `limit` clocks.
    pub fn period(&self, limit: u64) -> Option<u64> {
        let mut probe = self.clone();
        for n in 1..=limit {
            probe.step();
            if probe.state == self.state {
                return Some(n);
            }
        }
        None
    }

    /// Characteristic polynomial of the output sequence over GF(2), bit `i`
    /// holding the coefficient of `x^i`.
    pub fn polynomial(&self) -> u64 {
        characteristic_polynomial(self.width, &self.taps)
    }
}

fn tap_mask(width: u32, taps: &[u32]) -> Result<u64> {
    if !(2..=32).contains(&width) {
        return Err(Error::RegisterWidth(width));
    }
    let bad = |reason| Error::Taps { width, taps: taps.to_vec(), reason };
    if taps.iter().any(|&t| t == 0 || t > width) {
        return Err(bad("taps must lie in 1..=width"));
    }
    if !taps.contains(&width) {
        // without the output stage in the feedback the register is not
        // invertible and can fall into the zero state
        return Err(bad("tap set must include the output stage (tap = width)"));
    }
    let mut mask = 0u64;
    for &t in taps {
        let bit = 1u64 << (width - t);
        if mask & bit != 0 {
            return Err(bad("duplicate tap"));
        }
        mask |= bit;
    }
    Ok(mask)
}

// Output bits obey s[n+w] = XOR_t s[n+w-t], i.e. x^w + Σ_t x^(w-t).
fn characteristic_polynomial(width: u32, taps: &[u32]) -> u64 {
    taps.iter().fold(1u64 << width, |p, &t| p ^ (1u64 << (width - t)))
}

fn mulmod(mut a: u64, mut b: u64, poly: u64, degree: u32) -> u64 {
    let top = 1u64 << degree;
    let mut acc = 0;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= poly;
        }
    }
    acc
}

fn powmod_x(mut e: u64, poly: u64, degree: u32) -> u64 {
    let mut base = 0b10u64;
    let mut acc = 1u64;
    while e != 0 {
        if e & 1 != 0 {
            acc = mulmod(acc, base, poly, degree);
        }
        base = mulmod(base, base, poly, degree);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether the tap set yields period `2^width - 1` from any nonzero seed.
///
/// Decided algebraically: `x` must have multiplicative order exactly
/// `2^width - 1` modulo the characteristic polynomial.
pub fn is_maximal(width: u32, taps: &[u32]) -> Result<bool> {
    tap_mask(width, taps)?;
    let poly = characteristic_polynomial(width, taps);
    let order = (1u64 << width) - 1;
    if powmod_x(order, poly, width) != 1 {
        return Ok(false);
    }
    Ok(prime_factors(order)
        .into_iter()
        .all(|q| powmod_x(order / q, poly, width) != 1))
}

/// A known maximal-length tap set for widths 3..=32.
pub fn maximal_taps(width: u32) -> Option<&'static [u32]> {
    const TABLE: [&[u32]; 30] = [
        &[3, 2],
        &[4, 3],
        &[5, 3],
        &[6, 5],
        &[7, 6],
        &[8, 6, 5, 4],
        &[9, 5],
        &[10, 7],
        &[11, 9],
        &[12, 6, 4, 1],
        &[13, 4, 3, 1],
        &[14, 5, 3, 1],
        &[15, 14],
        &[16, 14, 13, 11],
        &[17, 14],
        &[18, 11],
        &[19, 6, 2, 1],
        &[20, 17],
        &[21, 19],
        &[22, 21],
        &[23, 18],
        &[24, 23, 22, 17],
        &[25, 22],
        &[26, 6, 2, 1],
        &[27, 5, 2, 1],
        &[28, 25],
        &[29, 27],
        &[30, 6, 4, 1],
        &[31, 28],
        &[32, 22, 2, 1],
    ];
    width.checked_sub(3).and_then(|i| TABLE.get(i as usize)).copied()
}
