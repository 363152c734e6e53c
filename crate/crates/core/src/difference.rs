//! Forward differences, the Δⁿ operator matrix and its spectral bounds.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

use crate::sequence_space::{extend, ExtendedSequence, InteriorVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DifferenceError {
    #[error("difference order {order} exceeds the extension width {width}")]
    OrderTooLarge { order: usize, width: usize },
    #[error("interior length must be at least 2, got {0}")]
    TooShort(usize),
    #[error("difference order must be at least 1")]
    ZeroOrder,
    #[error("coefficient sequence must have {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("symmetric eigensolver produced a non-finite spectrum")]
    EigenFailure,
    #[error("largest eigenvalue {lambda_max} exceeds the bound 4^n = {bound}")]
    BoundViolated { lambda_max: f64, bound: f64 },
}

/// Binomial coefficient as f64; exact for the orders used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Stencil weights `(-1)^(n-i) C(n,i)` for `i = 0..=n`.
pub fn stencil(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| {
            let c = binomial(n, i);
            if (n - i) % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// `Δⁿ s(k)` for every `k ∈ Z[1-n, N]`, where `n` is the extension width of `s`
/// unless a smaller `order` is requested. Order 0 returns `s` on that range.
pub fn nth_diff(s: &ExtendedSequence, order: usize) -> Result<Vec<f64>, DifferenceError> {
    let width = s.width();
    if order > width {
        return Err(DifferenceError::OrderTooLarge { order, width });
    }
    let w = stencil(order);
    let first = s.first_index();
    let last = s.interior_len() as isize;
    Ok((first..=last)
        .map(|k| w.iter().enumerate().map(|(i, c)| c * s.get(k + i as isize)).sum())
        .collect())
}

/// Telescoped operator `Δⁿ(p(k-n) Δⁿ x(k-n))` for `k ∈ Z[1, N]`.
///
/// `p` is indexed from `1-n` to `N`. This is the left-hand difference term of
/// the boundary value problem, evaluated without any matrix.
pub fn weighted_divergence(
    x: &InteriorVector,
    p: &[f64],
    n: usize,
) -> Result<Vec<f64>, DifferenceError> {
    let len = x.len();
    if p.len() != len + n {
        return Err(DifferenceError::LengthMismatch { expected: len + n, got: p.len() });
    }
    let dx = nth_diff(&extend(x, n), n)?;
    // y(j) = p(j) Δⁿx(j) on Z[1-n, N], stored from offset 0
    let y: Vec<f64> = dx.iter().zip(p).map(|(d, w)| d * w).collect();
    let w = stencil(n);
    // Δⁿ y(k-n) = Σ_i w_i y(k-n+i); offset of y(k-n+i) is k-1+i
    Ok((1..=len)
        .map(|k| w.iter().enumerate().map(|(i, c)| c * y[k - 1 + i]).sum())
        .collect())
}

/// Dense matrix `D` with `(D x)(k) = Δⁿ(extend(x))(k)`, rows `k ∈ Z[1-n, N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceMatrix {
    order: usize,
    interior_len: usize,
    matrix: DMatrix<f64>,
}

impl DifferenceMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn interior_len(&self) -> usize {
        self.interior_len
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Entry at indices: row `k ∈ Z[1-n, N]`, column `j ∈ Z[1, N]`.
    pub fn entry(&self, k: isize, j: usize) -> f64 {
        let row = (k + self.order as isize - 1) as usize;
        self.matrix[(row, j - 1)]
    }

    pub fn apply(&self, x: &InteriorVector) -> Vec<f64> {
        let v = DVector::from_column_slice(x.as_slice());
        (&self.matrix * v).iter().copied().collect()
    }
}

pub fn build_operator_matrix(
    interior_len: usize,
    order: usize,
) -> Result<DifferenceMatrix, DifferenceError> {
    if interior_len < 2 {
        return Err(DifferenceError::TooShort(interior_len));
    }
    if order < 1 {
        return Err(DifferenceError::ZeroOrder);
    }
    let w = stencil(order);
    let rows = interior_len + order;
    let mut matrix = DMatrix::zeros(rows, interior_len);
    // row r is index k = r + 1 - n; it touches x(k + i) for i = 0..=n
    for r in 0..rows {
        for (i, c) in w.iter().enumerate() {
            let j = r as isize + 1 - order as isize + i as isize;
            if j >= 1 && j <= interior_len as isize {
                matrix[(r, (j - 1) as usize)] = *c;
            }
        }
    }
    Ok(DifferenceMatrix { order, interior_len, matrix })
}

/// `Dᵀ diag(p) D`, symmetric by construction (upper triangle mirrored).
pub fn weighted_gram(d: &DifferenceMatrix, p: &[f64]) -> Result<DMatrix<f64>, DifferenceError> {
    let m = d.matrix();
    let (rows, cols) = m.shape();
    if p.len() != rows {
        return Err(DifferenceError::LengthMismatch { expected: rows, got: p.len() });
    }
    let mut a = DMatrix::zeros(cols, cols);
    for i in 0..cols {
        for j in i..cols {
            let mut s = 0.0;
            for (k, w) in p.iter().enumerate() {
                s += m[(k, i)] * w * m[(k, j)];
            }
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
    Ok(a)
}

/// Extreme eigenvalues of `DᵀD` and the a-priori bound `4ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralBounds {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub upper_bound: f64,
}

/// The sharp constants in `λ‖x‖² ≤ Σ (Δⁿx(k))² ≤ 4ⁿ ‖x‖²`; λ is the smallest
/// eigenvalue of `DᵀD`.
pub fn embedding_constants(
    interior_len: usize,
    order: usize,
) -> Result<SpectralBounds, DifferenceError> {
    let d = build_operator_matrix(interior_len, order)?;
    let gram = weighted_gram(&d, &vec![1.0; interior_len + order])?;
    let (lambda_min, lambda_max) = extreme_eigenvalues(&gram)?;
    let upper_bound = 4f64.powi(order as i32);
    // a tiny slack absorbs eigensolver rounding at λ_max ≈ 4ⁿ(1 - O(1/N²))
    if lambda_max > upper_bound * (1.0 + 1e-12) {
        return Err(DifferenceError::BoundViolated { lambda_max, bound: upper_bound });
    }
    Ok(SpectralBounds { lambda_min, lambda_max, upper_bound })
}

pub(crate) fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<f64>, DifferenceError> {
    let eig = SymmetricEigen::try_new(a.clone(), 1e-15, 0).ok_or(DifferenceError::EigenFailure)?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(DifferenceError::EigenFailure);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn extreme_eigenvalues(a: &DMatrix<f64>) -> Result<(f64, f64), DifferenceError> {
    let values = symmetric_eigenvalues(a)?;
    Ok((values[0], values[values.len() - 1]))
}
