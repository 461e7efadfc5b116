//! Bit strings and the fixed-point binary codec for real-valued problems.
//!
//! A real value `x` in `[a, b]` is stored as the `n`-bit big-endian unsigned
//! integer `round((2^n - 1) * (x - a) / (b - a))`. Decoding maps an integer
//! `u` back to `a + u * (b - a) / (2^n - 1)`, so the all-zeros string decodes
//! to `a` and the all-ones string decodes to `b`.

use std::fmt;
use std::ops::{Deref, DerefMut};
use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, Error, Result};

/// Bits used per real value by every real-valued benchmark.
pub const DEFAULT_BITS_PER_VALUE: u32 = 32;

/// A fixed-length sequence of bits.
///
/// Dereferences to `[bool]`, so slicing and iteration work as on a slice.
/// The length cannot change after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self {
            bits: (0..len).map(|_| rng.random::<bool>()).collect(),
        }
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_vec(self) -> Vec<bool> {
        self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn flip(&mut self, index: usize) {
        self.bits[index] = !self.bits[index];
    }

    pub fn hamming_distance(&self, other: &BitString) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Big-endian unsigned value of the bit string. At most 64 bits.
    pub fn to_u64(&self) -> Result<u64> {
        bits_to_u64(&self.bits)
    }

    /// `width`-bit big-endian representation of `value`.
    pub fn from_u64(value: u64, width: usize) -> Result<Self> {
        if width == 0 || width > 64 {
            return Err(invalid(format!("width {width} not in 1..=64")));
        }
        if width < 64 && value >> width != 0 {
            return Err(invalid(format!("{value} does not fit in {width} bits")));
        }
        Ok(Self {
            bits: (0..width).rev().map(|i| (value >> i) & 1 == 1).collect(),
        })
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self { bits }
    }
}

impl From<&[bool]> for BitString {
    fn from(bits: &[bool]) -> Self {
        Self {
            bits: bits.to_vec(),
        }
    }
}

impl Deref for BitString {
    type Target = [bool];

    fn deref(&self) -> &[bool] {
        &self.bits
    }
}

impl DerefMut for BitString {
    fn deref_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(invalid(format!("'{other}' is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from)
    }
}

pub(crate) fn bits_to_u64(bits: &[bool]) -> Result<u64> {
    if bits.len() > 64 {
        return Err(invalid(format!("{} bits do not fit in u64", bits.len())));
    }
    Ok(bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
}

/// Closed interval `[lower, upper]` discretised with `bits` bits per value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealInterval {
    lower: f64,
    upper: f64,
    bits: u32,
}

impl RealInterval {
    pub fn new(lower: f64, upper: f64, bits: u32) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower >= upper {
            return Err(invalid(format!("interval [{lower}, {upper}] is empty")));
        }
        if bits == 0 || bits > 63 {
            return Err(invalid(format!("bits per value {bits} not in 1..=63")));
        }
        Ok(Self { lower, upper, bits })
    }

    /// `[lower, upper]` with 32 bits per value.
    pub fn with_default_bits(lower: f64, upper: f64) -> Result<Self> {
        Self::new(lower, upper, DEFAULT_BITS_PER_VALUE)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Number of quantisation steps, `2^n - 1`.
    fn steps(&self) -> u64 {
        (1u64 << self.bits) - 1
    }

    /// Distance between two adjacent representable values.
    pub fn resolution(&self) -> f64 {
        (self.upper - self.lower) / self.steps() as f64
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Decodes an `iv.bits()`-bit big-endian string to a real in `iv`.
pub fn decode_real(s: &[bool], iv: &RealInterval) -> Result<f64> {
    if s.len() != iv.bits as usize {
        return Err(invalid(format!(
            "expected {} bits, got {}",
            iv.bits,
            s.len()
        )));
    }
    let u = bits_to_u64(s)? as f64;
    Ok(iv.lower + u * (iv.upper - iv.lower) / iv.steps() as f64)
}

/// Encodes `x` as the nearest representable value, rounding halves up.
pub fn encode_real(x: f64, iv: &RealInterval) -> Result<BitString> {
    if !iv.contains(x) {
        return Err(Error::Domain(format!(
            "{x} outside [{}, {}]",
            iv.lower, iv.upper
        )));
    }
    let scaled = iv.steps() as f64 * (x - iv.lower) / (iv.upper - iv.lower);
    let u = ((scaled + 0.5).floor() as u64).min(iv.steps());
    BitString::from_u64(u, iv.bits as usize)
}

/// Splits `s` into `dimension` consecutive slices and decodes each.
pub fn decode_vector(s: &[bool], iv: &RealInterval, dimension: usize) -> Result<Vec<f64>> {
    let width = iv.bits as usize;
    if dimension == 0 || s.len() != dimension * width {
        return Err(invalid(format!(
            "{} bits cannot be split into {dimension} values of {width} bits",
            s.len()
        )));
    }
    s.chunks_exact(width).map(|c| decode_real(c, iv)).collect()
}
