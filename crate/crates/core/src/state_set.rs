use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::frame::Frame;

/// A subset of the configurations of a [`Frame`]: the proposition type.
///
/// Stored as a bitset of `2^n` bits; bits past `2^n` in the last word are
/// always zero.
#[derive(Clone, PartialEq, Eq)]
pub struct StateSet {
    frame: Frame,
    words: Box<[u64]>,
}

fn word_count(frame: &Frame) -> usize {
    frame.size().div_ceil(64)
}

fn last_word_mask(frame: &Frame) -> u64 {
    match frame.size() % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl StateSet {
    pub fn empty(frame: &Frame) -> Self {
        StateSet { frame: frame.clone(), words: vec![0; word_count(frame)].into() }
    }

    pub fn full(frame: &Frame) -> Self {
        let mut words = vec![u64::MAX; word_count(frame)];
        *words.last_mut().unwrap() &= last_word_mask(frame);
        StateSet { frame: frame.clone(), words: words.into() }
    }

    /// Configurations in which variable `k` is true.
    pub(crate) fn variable_true(frame: &Frame, k: usize) -> Self {
        let n = word_count(frame);
        let words: Vec<u64> = if k < 6 {
            // Period 2^(k+1) inside each word: 2^k zeros then 2^k ones.
            let mut pattern = 0u64;
            for bit in 0..64 {
                if (bit >> k) & 1 == 1 {
                    pattern |= 1 << bit;
                }
            }
            let mut w = vec![pattern; n];
            *w.last_mut().unwrap() &= last_word_mask(frame);
            w
        } else {
            (0..n)
                .map(|i| if (i >> (k - 6)) & 1 == 1 { u64::MAX } else { 0 })
                .collect()
        };
        StateSet { frame: frame.clone(), words: words.into() }
    }

    pub fn from_configs(frame: &Frame, configs: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = StateSet::empty(frame);
        for c in configs {
            if c >= frame.size() {
                return Err(Error::InvalidMass(format!(
                    "configuration {c} out of range for a frame of {} variables",
                    frame.len()
                )));
            }
            set.insert(c);
        }
        Ok(set)
    }

    /// Builds a set from a predicate over configuration indices.
    pub fn from_fn(frame: &Frame, mut member: impl FnMut(usize) -> bool) -> Self {
        let mut set = StateSet::empty(frame);
        for c in 0..frame.size() {
            if member(c) {
                set.insert(c);
            }
        }
        set
    }

    pub(crate) fn insert(&mut self, config: usize) {
        self.words[config / 64] |= 1 << (config % 64);
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn contains(&self, config: usize) -> bool {
        config < self.frame.size() && (self.words[config / 64] >> (config % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == StateSet::full(&self.frame)
    }

    /// Iterates over member configurations in increasing order.
    pub fn configs(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + bit)
            })
        })
    }

    pub fn complement(&self) -> StateSet {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        *words.last_mut().unwrap() &= last_word_mask(&self.frame);
        StateSet { frame: self.frame.clone(), words: words.into() }
    }

    fn check_frame(&self, other: &StateSet) -> Result<()> {
        if self.frame == other.frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    pub fn intersection(&self, other: &StateSet) -> Result<StateSet> {
        self.check_frame(other)?;
        Ok(self.and(other))
    }

    pub fn union(&self, other: &StateSet) -> Result<StateSet> {
        self.check_frame(other)?;
        Ok(self.or(other))
    }

    pub fn is_subset_of(&self, other: &StateSet) -> Result<bool> {
        self.check_frame(other)?;
        Ok(self.subset(other))
    }

    pub fn intersects(&self, other: &StateSet) -> Result<bool> {
        self.check_frame(other)?;
        Ok(self.meets(other))
    }

    // Unchecked variants for callers that already share a frame.

    pub(crate) fn and(&self, other: &StateSet) -> StateSet {
        let words = self.words.iter().zip(other.words.iter()).map(|(a, b)| a & b).collect();
        StateSet { frame: self.frame.clone(), words }
    }

    pub(crate) fn or(&self, other: &StateSet) -> StateSet {
        let words = self.words.iter().zip(other.words.iter()).map(|(a, b)| a | b).collect();
        StateSet { frame: self.frame.clone(), words }
    }

    pub(crate) fn subset(&self, other: &StateSet) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    pub(crate) fn meets(&self, other: &StateSet) -> bool {
        self.words.iter().zip(other.words.iter()).any(|(a, b)| a & b != 0)
    }
}

impl Hash for StateSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.words.hash(state);
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateSet{}", self.frame)?;
        f.debug_set().entries(self.configs()).finish()
    }
}
