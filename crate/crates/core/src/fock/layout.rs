//! Mode bookkeeping for truncated multimode Fock spaces.
//!
//! A [`ModeLayout`] is an ordered list of bosonic modes, each with a photon
//! number cutoff. Basis states are occupation tuples `(n_1, ..., n_k)` with
//! `0 <= n_i <= cutoff_i`, mapped to flat indices in row-major order over the
//! ordered modes: the *last* mode varies fastest.

use std::fmt;

use crate::error::{Error, Result};

/// Label of a single bosonic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeId(pub char);

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<char> for ModeId {
    fn from(c: char) -> Self {
        ModeId(c)
    }
}

/// Ordered list of modes with per-mode photon-number cutoffs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeLayout {
    modes: Vec<(ModeId, usize)>,
    strides: Vec<usize>,
    dim: usize,
}

impl ModeLayout {
    /// Build a layout from `(mode, cutoff)` pairs. Mode ids must be unique
    /// and every cutoff at least 1.
    pub fn new(modes: Vec<(ModeId, usize)>) -> Result<Self> {
        for (i, &(id, cutoff)) in modes.iter().enumerate() {
            if cutoff < 1 {
                return Err(Error::InvalidCutoff { mode: id, cutoff });
            }
            if modes[..i].iter().any(|&(other, _)| other == id) {
                return Err(Error::DuplicateMode(id));
            }
        }
        let mut strides = vec![1usize; modes.len()];
        for i in (0..modes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (modes[i + 1].1 + 1);
        }
        let dim = modes.iter().map(|&(_, c)| c + 1).product::<usize>().max(1);
        Ok(Self { modes, strides, dim })
    }

    /// Single-mode layout.
    pub fn single(id: impl Into<ModeId>, cutoff: usize) -> Result<Self> {
        Self::new(vec![(id.into(), cutoff)])
    }

    /// Two-mode layout.
    pub fn pair(a: impl Into<ModeId>, ca: usize, b: impl Into<ModeId>, cb: usize) -> Result<Self> {
        Self::new(vec![(a.into(), ca), (b.into(), cb)])
    }

    /// Total Hilbert-space dimension `prod(cutoff_i + 1)`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn modes(&self) -> &[(ModeId, usize)] {
        &self.modes
    }

    /// Position of a mode in the ordered list.
    pub fn position(&self, id: ModeId) -> Result<usize> {
        self.modes
            .iter()
            .position(|&(m, _)| m == id)
            .ok_or(Error::UnknownMode(id))
    }

    pub fn cutoff(&self, id: ModeId) -> Result<usize> {
        Ok(self.modes[self.position(id)?].1)
    }

    /// Row-major strides; `index = sum_i n_i * stride_i`.
    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Flat index of an occupation tuple (must be in range).
    pub fn index_of(&self, occ: &[usize]) -> usize {
        debug_assert_eq!(occ.len(), self.modes.len());
        occ.iter()
            .zip(&self.strides)
            .map(|(&n, &s)| n * s)
            .sum()
    }

    /// Occupation tuple of a flat index.
    pub fn occupation_of(&self, index: usize) -> Vec<usize> {
        let mut occ = Vec::with_capacity(self.modes.len());
        let mut rem = index;
        for &s in &self.strides {
            occ.push(rem / s);
            rem %= s;
        }
        occ
    }

    /// Occupation of one mode within a flat index.
    pub fn occupation_in(&self, index: usize, pos: usize) -> usize {
        (index / self.strides[pos]) % (self.modes[pos].1 + 1)
    }

    /// Layout with the given mode positions removed.
    pub fn without(&self, positions: &[usize]) -> Result<Self> {
        let kept: Vec<_> = self
            .modes
            .iter()
            .enumerate()
            .filter(|(i, _)| !positions.contains(i))
            .map(|(_, &m)| m)
            .collect();
        Self::new(kept)
    }

    /// Concatenation with a disjoint layout, preserving mode order.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut modes = self.modes.clone();
        modes.extend_from_slice(&other.modes);
        Self::new(modes)
    }
}
