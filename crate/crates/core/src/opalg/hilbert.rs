use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Upper bound on the total dimension of a composite space.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Truncation used for oscillators when no dimension is given.
pub const DEFAULT_OSCILLATOR_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
}

/// Ordered tensor product of labelled finite-dimensional factors.
///
/// Oscillators are truncated: the ladder operators act exactly on all Fock
/// levels except the top one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSpec {
    subsystems: Vec<Subsystem>,
    total: usize,
}

impl HilbertSpec {
    pub fn new<I, S>(subsystems: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        Self::with_cap(subsystems, DEFAULT_DIM_CAP)
    }

    pub fn with_cap<I, S>(subsystems: I, cap: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let subsystems: Vec<Subsystem> = subsystems
            .into_iter()
            .map(|(label, dim)| Subsystem { label: label.into(), dim })
            .collect();
        let mut total: usize = 1;
        for (i, s) in subsystems.iter().enumerate() {
            if s.label.is_empty() {
                return Err(Error::InvalidSpace(format!("subsystem {i} has an empty label")));
            }
            if s.dim == 0 {
                return Err(Error::InvalidSpace(format!("subsystem '{}' has dimension 0", s.label)));
            }
            if subsystems[..i].iter().any(|o| o.label == s.label) {
                return Err(Error::InvalidSpace(format!("duplicate label '{}'", s.label)));
            }
            total = total
                .checked_mul(s.dim)
                .filter(|&t| t <= cap)
                .ok_or_else(|| Error::InvalidSpace(format!("total dimension exceeds cap {cap}")))?;
        }
        Ok(HilbertSpec { subsystems, total })
    }

    /// The trivial one-dimensional space (no subsystems).
    pub fn trivial() -> Self {
        HilbertSpec { subsystems: Vec::new(), total: 1 }
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownSubsystem(label.into()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.subsystems[self.index_of(label)?].dim)
    }
}
