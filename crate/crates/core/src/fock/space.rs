use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QoscError, Result};

/// Occupation numbers `(n_1, ..., n_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn zeros(n_modes: usize) -> Self {
        MultiIndex(vec![0; n_modes])
    }

    pub fn occupations(&self) -> &[usize] {
        &self.0
    }

    /// Occupation of 1-based `mode`.
    pub fn get(&self, mode: usize) -> usize {
        self.0[mode - 1]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `n_from + ... + n_n` for 1-based `from`; zero past the last mode.
    pub fn tail_sum(&self, from: usize) -> usize {
        self.0.iter().skip(from.saturating_sub(1)).sum()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, n) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

/// Box-truncated Fock space: `n_modes` modes, occupations `0..=cutoff` each.
///
/// Basis vectors are enumerated with mode 1 as the slowest-varying digit in
/// base `cutoff + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockSpace {
    n_modes: usize,
    cutoff: usize,
    dim: usize,
    strides: Vec<usize>,
}

impl FockSpace {
    pub fn new(n_modes: usize, cutoff: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(QoscError::InvalidParameter("at least one mode is required".into()));
        }
        if cutoff == 0 {
            return Err(QoscError::InvalidParameter("cutoff must be positive".into()));
        }
        let base = cutoff + 1;
        let dim = (0..n_modes)
            .try_fold(1usize, |acc, _| acc.checked_mul(base))
            .ok_or_else(|| QoscError::InvalidParameter("Fock space dimension overflows".into()))?;
        let mut strides = vec![1; n_modes];
        for k in (0..n_modes.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * base;
        }
        Ok(FockSpace {
            n_modes,
            cutoff,
            dim,
            strides,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode == 0 || mode > self.n_modes {
            return Err(QoscError::ModeOutOfRange {
                mode,
                max: self.n_modes,
            });
        }
        Ok(())
    }

    pub fn encode(&self, nu: &MultiIndex) -> Result<usize> {
        if nu.0.len() != self.n_modes {
            return Err(QoscError::ModeCount {
                expected: self.n_modes,
                got: nu.0.len(),
            });
        }
        let mut index = 0;
        for (k, (&n, &stride)) in nu.0.iter().zip(&self.strides).enumerate() {
            if n > self.cutoff {
                return Err(QoscError::OutsideCutoff {
                    mode: k + 1,
                    occupation: n,
                    cutoff: self.cutoff,
                });
            }
            index += n * stride;
        }
        Ok(index)
    }

    pub fn decode(&self, index: usize) -> MultiIndex {
        debug_assert!(index < self.dim);
        MultiIndex(
            self.strides
                .iter()
                .map(|&s| (index / s) % (self.cutoff + 1))
                .collect(),
        )
    }

    /// Occupation of 1-based `mode` in basis vector `index`.
    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.strides[mode - 1]) % (self.cutoff + 1)
    }

    /// Index shift for one quantum in 1-based `mode`.
    pub fn stride(&self, mode: usize) -> usize {
        self.strides[mode - 1]
    }

    pub fn labels(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.dim).map(|i| self.decode(i))
    }
}

/// Basis vectors at least `margin` quanta below the cutoff in every mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafeSector {
    space: FockSpace,
    margin: usize,
}

impl SafeSector {
    pub fn new(space: &FockSpace, margin: usize) -> Self {
        SafeSector {
            space: space.clone(),
            margin,
        }
    }

    pub fn full(space: &FockSpace) -> Self {
        Self::new(space, 0)
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn contains_label(&self, nu: &MultiIndex) -> bool {
        nu.0.iter().all(|&n| n + self.margin <= self.space.cutoff)
    }

    pub fn contains(&self, index: usize) -> bool {
        (1..=self.space.n_modes).all(|m| self.space.occupation(index, m) + self.margin <= self.space.cutoff)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.space.dim).filter(|&i| self.contains(i))
    }

    pub fn len(&self) -> usize {
        self.space
            .cutoff
            .checked_sub(self.margin)
            .map_or(0, |top| (top + 1).pow(self.space.n_modes as u32))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
