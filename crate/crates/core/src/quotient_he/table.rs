use std::fmt;

use serde::{Deserialize, Serialize};

use super::QuotientError;

/// A total function on `{0, .., n-1}`, stored as its value tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FunctionTable(Vec<u32>);

impl FunctionTable {
    pub fn new(values: Vec<u32>) -> Result<Self, QuotientError> {
        let n = values.len();
        if let Some(bad) = values.iter().find(|&&v| v as usize >= n) {
            return Err(QuotientError::InvalidKey(format!(
                "table value {bad} out of range for n={n}"
            )));
        }
        Ok(FunctionTable(values))
    }

    /// The shift `i ↦ (i + k) mod n`.
    pub fn shift(n: usize, k: usize) -> Self {
        FunctionTable((0..n).map(|i| ((i + k) % n) as u32).collect())
    }

    pub fn identity(n: usize) -> Self {
        FunctionTable::shift(n, 0)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &FunctionTable) -> FunctionTable {
        debug_assert_eq!(self.n(), other.n());
        FunctionTable(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    /// `Some(k)` when this table is the shift by `k`.
    pub fn as_shift(&self) -> Option<usize> {
        let n = self.n();
        let k = *self.0.first()? as usize;
        self.0
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == (i + k) % n)
            .then_some(k)
    }

    /// Position of this table in the lexicographic order of all `n^n` tables.
    pub fn code(&self) -> u64 {
        let n = self.n() as u64;
        self.0.iter().fold(0, |acc, &v| acc * n + u64::from(v))
    }

    /// Inverse of [`FunctionTable::code`].
    pub fn from_code(n: usize, mut code: u64) -> Self {
        let mut values = vec![0u32; n];
        for v in values.iter_mut().rev() {
            *v = (code % n as u64) as u32;
            code /= n as u64;
        }
        FunctionTable(values)
    }
}

impl fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}
