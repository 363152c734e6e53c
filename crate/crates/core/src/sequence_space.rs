//! Finite-dimensional space of zero-extended sequences.
//!
//! A point of the space is stored by its interior values `x(1), ..., x(N)`.
//! The boundary collars `Z[1-n, 0]` and `Z[N+1, N+n]` are implicit zeros and
//! only materialise when an [`ExtendedSequence`] is built.
//!
//! Public accessors use the signed index convention `k ∈ Z[1-n, N+n]`;
//! storage is 0-based internally.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SequenceError {
    #[error("interior length must be at least 2, got {0}")]
    TooShort(usize),
    #[error("entry {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("norm exponent q must satisfy q >= 1, got {0}")]
    BadExponent(f64),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Interior values `x(1..=N)` of a point of the space, all finite, `N >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct InteriorVector(Vec<f64>);

impl InteriorVector {
    pub fn new(values: Vec<f64>) -> Result<Self, SequenceError> {
        if values.len() < 2 {
            return Err(SequenceError::TooShort(values.len()));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(SequenceError::NonFinite { index, value });
        }
        Ok(Self(values))
    }

    /// The zero vector θ of length `len`.
    pub fn zeros(len: usize) -> Result<Self, SequenceError> {
        Self::new(vec![0.0; len])
    }

    /// Interior length N.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Value at index `k ∈ Z[1, N]`.
    pub fn at(&self, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.0.len(), "index {k} outside Z[1, {}]", self.0.len());
        self.0[k - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Euclidean norm, the default norm of the space.
    pub fn norm(&self) -> f64 {
        norm_2(&self.0)
    }
}

impl<'de> Deserialize<'de> for InteriorVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let values = Vec::<f64>::deserialize(deserializer)?;
        InteriorVector::new(values).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<Vec<f64>> for InteriorVector {
    type Error = SequenceError;

    fn try_from(values: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(values)
    }
}

/// A sequence on `Z[1-n, N+n]` that vanishes on both collars.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedSequence {
    values: Vec<f64>,
    width: usize,
    interior_len: usize,
}

impl ExtendedSequence {
    /// Collar width n.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn interior_len(&self) -> usize {
        self.interior_len
    }

    /// Smallest valid index, `1 - n`.
    pub fn first_index(&self) -> isize {
        1 - self.width as isize
    }

    /// Largest valid index, `N + n`.
    pub fn last_index(&self) -> isize {
        (self.interior_len + self.width) as isize
    }

    /// Value at index `k ∈ Z[1-n, N+n]`.
    pub fn get(&self, k: isize) -> f64 {
        self.values[self.offset(k)]
    }

    /// All values in index order, starting at `1 - n`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn offset(&self, k: isize) -> usize {
        let i = k - self.first_index();
        assert!(
            i >= 0 && (i as usize) < self.values.len(),
            "index {k} outside Z[{}, {}]",
            self.first_index(),
            self.last_index()
        );
        i as usize
    }
}

/// Zero-extends `x` to `Z[1-n, N+n]`.
pub fn extend(x: &InteriorVector, n: usize) -> ExtendedSequence {
    assert!(n >= 1, "extension width must be positive");
    let mut values = vec![0.0; x.len() + 2 * n];
    values[n..n + x.len()].copy_from_slice(x.as_slice());
    ExtendedSequence { values, width: n, interior_len: x.len() }
}

/// `(Σ |x(k)|^q)^(1/q)` for real `q >= 1`.
pub fn norm_q(x: &InteriorVector, q: f64) -> Result<f64, SequenceError> {
    if !(q >= 1.0) || q.is_nan() {
        return Err(SequenceError::BadExponent(q));
    }
    if q.is_infinite() {
        return Ok(x.max_abs());
    }
    if q == 2.0 {
        return Ok(norm_2(x.as_slice()));
    }
    // scale by the largest magnitude so |x|^q neither overflows nor underflows
    let scale = x.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = x.as_slice().iter().map(|v| (v.abs() / scale).powf(q)).sum();
    Ok(scale * sum.powf(1.0 / q))
}

pub(crate) fn norm_2(values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let sum: f64 = values.iter().map(|v| (v / scale) * (v / scale)).sum();
    scale * sum.sqrt()
}

pub(crate) fn norm_inf(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}
