//! Epigenetic tags, the epigenotype layer, the marking function and the
//! growing function that decodes a tagged chromosome into a phenotype.
//!
//! A tag is one byte: the high three bits select a [`TagOp`], the low five
//! bits encode the gene size `l` (`00000` stands for 32). During decoding the
//! chromosome is scanned left to right. An untagged allele is copied as is; a
//! tagged allele at position `k` rewrites the window `k..k+l` (clamped to the
//! chromosome end) and the scan resumes after the window, so tags that fall
//! inside an already consumed window are never read. The genotype itself is
//! never modified.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::genome::BitString;

/// Largest window a tag can cover.
pub const MAX_GENE_SIZE: usize = 32;

/// Bit operation applied by a tag, keyed by its 3-bit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TagOp {
    CircularShift = 0b000,
    Transpose = 0b001,
    SetTo = 0b010,
    DoNothing = 0b011,
    RightShiftByOne = 0b100,
    AddOne = 0b101,
    LeftShiftByOne = 0b110,
    SubtractOne = 0b111,
}

impl TagOp {
    pub const ALL: [TagOp; 8] = [
        TagOp::CircularShift,
        TagOp::Transpose,
        TagOp::SetTo,
        TagOp::DoNothing,
        TagOp::RightShiftByOne,
        TagOp::AddOne,
        TagOp::LeftShiftByOne,
        TagOp::SubtractOne,
    ];

    /// Only the low three bits of `code` are read.
    pub fn from_code(code: u8) -> Self {
        Self::ALL[usize::from(code & 0b111)]
    }

    pub fn code(self) -> u8 {
        self as u8
    }
}

/// Gene size encoded by a 5-bit size code; `0` means 32.
pub fn gene_size(size_code: u8) -> usize {
    match size_code & 0b1_1111 {
        0 => MAX_GENE_SIZE,
        n => usize::from(n),
    }
}

/// An 8-bit epigenetic marker: operation code followed by gene-size code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tag {
    op: TagOp,
    size_code: u8,
}

impl Tag {
    pub fn new(op: TagOp, size_code: u8) -> Result<Self> {
        if size_code > 0b1_1111 {
            return Err(invalid(format!("size code {size_code} exceeds 5 bits")));
        }
        Ok(Self { op, size_code })
    }

    /// Tag for `op` covering `len` alleles, `len` in `1..=32`.
    pub fn with_gene_size(op: TagOp, len: usize) -> Result<Self> {
        match len {
            1..=31 => Self::new(op, len as u8),
            MAX_GENE_SIZE => Self::new(op, 0),
            _ => Err(invalid(format!("gene size {len} not in 1..=32"))),
        }
    }

    pub fn from_byte(byte: u8) -> Self {
        Self {
            op: TagOp::from_code(byte >> 5),
            size_code: byte & 0b1_1111,
        }
    }

    pub fn to_byte(self) -> u8 {
        (self.op.code() << 5) | self.size_code
    }

    pub fn op(self) -> TagOp {
        self.op
    }

    pub fn size_code(self) -> u8 {
        self.size_code
    }

    pub fn gene_size(self) -> usize {
        gene_size(self.size_code)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08b}", self.to_byte())
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() != 8 || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(invalid(format!("tag '{s}' is not 8 binary digits")));
        }
        Ok(Self::from_byte(
            u8::from_str_radix(s, 2).expect("validated"),
        ))
    }
}

/// Uniformly random tag: each of the 8 bits is a fair coin.
pub fn random_tag<R: Rng + ?Sized>(rng: &mut R) -> Tag {
    Tag::from_byte(rng.random::<u8>())
}

/// Writes `op` applied to `window` into `out`. Both slices have length `l >= 1`.
fn apply_into(op: TagOp, window: &[bool], out: &mut [bool]) {
    let l = window.len();
    debug_assert_eq!(l, out.len());
    match op {
        TagOp::CircularShift => {
            out[0] = window[l - 1];
            out[1..].copy_from_slice(&window[..l - 1]);
        }
        TagOp::Transpose => {
            for (o, &w) in out.iter_mut().zip(window.iter().rev()) {
                *o = w;
            }
        }
        TagOp::SetTo => out.fill(window[0]),
        TagOp::DoNothing => out.copy_from_slice(window),
        TagOp::RightShiftByOne => {
            out[0] = window[0];
            out[1..].copy_from_slice(&window[..l - 1]);
        }
        TagOp::LeftShiftByOne => {
            out[..l - 1].copy_from_slice(&window[1..]);
            out[l - 1] = false;
        }
        TagOp::AddOne => {
            let value = window
                .iter()
                .fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
            let sum = value + 1;
            // An overflowing sum has l + 1 bits; its least significant bit is dropped.
            let kept = if sum >> l != 0 { sum >> 1 } else { sum };
            write_u64(kept, out);
        }
        TagOp::SubtractOne => {
            let value = window
                .iter()
                .fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
            let diff = if value == 0 {
                (1u64 << l) - 1
            } else {
                value - 1
            };
            write_u64(diff, out);
        }
    }
}

fn write_u64(value: u64, out: &mut [bool]) {
    let l = out.len();
    for (i, o) in out.iter_mut().enumerate() {
        *o = (value >> (l - 1 - i)) & 1 == 1;
    }
}

/// Applies `op` to a window whose first bit is the marked allele.
pub fn apply_op(op: TagOp, window: &[bool]) -> Result<BitString> {
    if window.is_empty() {
        return Err(invalid("empty window"));
    }
    if window.len() > MAX_GENE_SIZE {
        return Err(invalid(format!(
            "window of {} bits exceeds {MAX_GENE_SIZE}",
            window.len()
        )));
    }
    let mut out = vec![false; window.len()];
    apply_into(op, window, &mut out);
    Ok(out.into())
}

/// Per-allele layer of optional tags over a chromosome.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Epigenotype {
    slots: Vec<Option<Tag>>,
}

impl Epigenotype {
    pub fn empty(len: usize) -> Self {
        Self {
            slots: vec![None; len],
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<Tag> {
        self.slots.get(index).copied().flatten()
    }

    pub fn set(&mut self, index: usize, tag: Option<Tag>) {
        self.slots[index] = tag;
    }

    pub fn slots(&self) -> &[Option<Tag>] {
        &self.slots
    }

    pub fn tag_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_marked(&self) -> bool {
        self.slots.iter().any(Option::is_some)
    }

    /// Runs the marking function over every allele.
    pub fn mark<R: Rng + ?Sized>(&mut self, params: &MarkingParams, rng: &mut R) {
        if params.mark_rate <= 0.0 {
            return;
        }
        for slot in &mut self.slots {
            if rng.random::<f64>() >= params.mark_rate {
                continue;
            }
            let action = rng.random::<f64>();
            if action < params.p_add {
                if slot.is_none() {
                    *slot = Some(random_tag(rng));
                }
            } else if action < params.p_add + params.p_remove {
                *slot = None;
            } else if let Some(tag) = slot {
                let mut byte = tag.to_byte();
                for bit in 0..8 {
                    if rng.random_bool(1.0 / 8.0) {
                        byte ^= 1 << bit;
                    }
                }
                *tag = Tag::from_byte(byte);
            }
        }
    }
}

impl From<Vec<Option<Tag>>> for Epigenotype {
    fn from(slots: Vec<Option<Tag>>) -> Self {
        Self { slots }
    }
}

impl fmt::Display for Epigenotype {
    /// Comma-separated slots; untagged alleles print as `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, slot) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match slot {
                Some(tag) => write!(f, "{tag}")?,
                None => f.write_str("-")?,
            }
        }
        Ok(())
    }
}

/// Probabilities driving the marking function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkingParams {
    /// Probability that a given allele is visited by a marking action.
    pub mark_rate: f64,
    pub p_add: f64,
    pub p_remove: f64,
    pub p_modify: f64,
}

impl Default for MarkingParams {
    fn default() -> Self {
        Self {
            mark_rate: 0.02,
            p_add: 0.35,
            p_remove: 0.35,
            p_modify: 0.30,
        }
    }
}

impl MarkingParams {
    pub fn new(mark_rate: f64, p_add: f64, p_remove: f64, p_modify: f64) -> Result<Self> {
        let params = Self {
            mark_rate,
            p_add,
            p_remove,
            p_modify,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let probs = [self.mark_rate, self.p_add, self.p_remove, self.p_modify];
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(invalid(format!(
                "marking probabilities out of [0, 1]: {self:?}"
            )));
        }
        let total = self.p_add + self.p_remove + self.p_modify;
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!(
                "add/remove/modify probabilities sum to {total}, not 1"
            )));
        }
        Ok(())
    }
}

/// Free-function form of [`Epigenotype::mark`].
pub fn mark<R: Rng + ?Sized>(epi: &mut Epigenotype, params: &MarkingParams, rng: &mut R) {
    epi.mark(params, rng);
}

/// Decodes a genotype through its epigenotype into the phenotype bit string.
pub fn grow(genotype: &[bool], epi: &Epigenotype) -> Result<BitString> {
    if genotype.len() != epi.len() {
        return Err(invalid(format!(
            "genotype has {} alleles, epigenotype {}",
            genotype.len(),
            epi.len()
        )));
    }
    let mut out = genotype.to_vec();
    let n = genotype.len();
    let mut k = 0;
    while k < n {
        match epi.slots[k] {
            None => k += 1,
            Some(tag) => {
                let end = (k + tag.gene_size()).min(n);
                apply_into(tag.op, &genotype[k..end], &mut out[k..end]);
                k = end;
            }
        }
    }
    Ok(out.into())
}
