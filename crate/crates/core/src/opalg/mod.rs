//! Dense complex matrices and operators on truncated composite Hilbert spaces.

mod hilbert;
mod operator;

pub use hilbert::{HilbertSpec, Subsystem, DEFAULT_DIM_CAP, DEFAULT_OSCILLATOR_DIM};
pub use operator::{embed, OperatorExpr};

use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Tolerance used by validation and checks unless a caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-9;

#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Builds a matrix from row-major entries.
pub fn from_rows(rows: usize, cols: usize, entries: &[C64]) -> CMatrix {
    CMatrix::from_row_slice(rows, cols, entries)
}

/// Builds a matrix from row-major real entries.
pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_iterator(
        rows,
        cols,
        (0..rows * cols).map(|k| {
            let (c, r) = (k / rows, k % rows);
            c64(entries[r * cols + c], 0.0)
        }),
    )
}

pub fn scalar(z: C64) -> CMatrix {
    CMatrix::from_element(1, 1, z)
}

/// Frobenius norm, the norm behind every defect reported by this crate.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_finite(m: &CMatrix, what: &'static str) -> Result<()> {
    if all_finite(m) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() == m.ncols() {
        Ok(m.nrows())
    } else {
        Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() })
    }
}

pub fn ensure_shape(m: &CMatrix, rows: usize, cols: usize, context: &'static str) -> Result<()> {
    if m.shape() == (rows, cols) {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { context, expected: (rows, cols), found: m.shape() })
    }
}

/// Outcome of a tolerance check: the measured defect and whether it is within tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Check {
    pub pass: bool,
    pub defect: f64,
}

impl Check {
    pub fn new(defect: f64, tol: f64) -> Self {
        Check { pass: defect <= tol, defect }
    }
}

/// `‖m†m − I‖_F` against `tol`.
pub fn is_unitary(m: &CMatrix, tol: f64) -> Result<Check> {
    let n = ensure_square(m)?;
    let defect = frobenius(&(m.adjoint() * m - identity(n)));
    Ok(Check::new(defect, tol))
}

/// `‖m − m†‖_F` against `tol`.
pub fn is_hermitian(m: &CMatrix, tol: f64) -> Result<Check> {
    ensure_square(m)?;
    Ok(Check::new(frobenius(&(m - m.adjoint())), tol))
}

/// All eigenvalues of a square complex matrix, in no particular order.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    let n = ensure_square(m)?;
    ensure_finite(m, "eigenvalue input")?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(alloc::vec![m[(0, 0)]]);
    }
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, 200 * n.max(10))
        .ok_or(Error::NoConvergence("Schur eigen-solver"))?;
    let (_, t) = schur.unpack();
    let scale = frobenius(m).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        // Complex Schur forms are triangular; a surviving 2x2 bump is solved directly.
        if i + 1 < n && t[(i + 1, i)].norm() > 1e-13 * scale {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half_tr = (a + d) * 0.5;
            let disc = (half_tr * half_tr - (a * d - b * c)).sqrt();
            out.push(half_tr + disc);
            out.push(half_tr - disc);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    Ok(out)
}

/// Largest eigenvalue of a Hermitian matrix (the Hermitian part is used).
pub fn hermitian_max_eigenvalue(m: &CMatrix) -> Result<f64> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let h = (m + m.adjoint()) * c64(0.5, 0.0);
    let eig = nalgebra::linalg::SymmetricEigen::try_new(h, f64::EPSILON, 200 * n.max(10))
        .ok_or(Error::NoConvergence("Hermitian eigen-solver"))?;
    Ok(eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Smallest singular value; `+∞` for an empty matrix.
pub fn min_singular_value(m: &CMatrix) -> f64 {
    singular_values(m).into_iter().fold(f64::INFINITY, f64::min)
}

pub fn max_singular_value(m: &CMatrix) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Inverse via LU, reporting singular input with its smallest singular value.
pub fn inverse(m: &CMatrix, context: &'static str) -> Result<CMatrix> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Ok(zeros(0, 0));
    }
    let sigma_min = min_singular_value(m);
    let scale = max_singular_value(m).max(1.0);
    if !(sigma_min > 1e-13 * scale) {
        return Err(Error::Singular { context, sigma_min });
    }
    m.clone().lu().try_inverse().ok_or(Error::Singular { context, sigma_min })
}

/// Solves `m x = rhs`.
pub fn solve(m: &CMatrix, rhs: &CMatrix, context: &'static str) -> Result<CMatrix> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Ok(zeros(0, rhs.ncols()));
    }
    let sigma_min = min_singular_value(m);
    if !(sigma_min > 1e-13 * max_singular_value(m).max(1.0)) {
        return Err(Error::Singular { context, sigma_min });
    }
    m.clone().lu().solve(rhs).ok_or(Error::Singular { context, sigma_min })
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Block-diagonal matrix from square or rectangular blocks.
pub fn block_diag(blocks: &[&CMatrix]) -> CMatrix {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(*b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Assembles a matrix from a grid of blocks (all blocks in a row share a height,
/// all blocks in a column share a width).
pub fn from_blocks(grid: &[&[&CMatrix]]) -> Result<CMatrix> {
    if grid.is_empty() {
        return Ok(zeros(0, 0));
    }
    let heights: Vec<usize> = grid.iter().map(|row| row[0].nrows()).collect();
    let widths: Vec<usize> = grid[0].iter().map(|b| b.ncols()).collect();
    let mut out = zeros(heights.iter().sum(), widths.iter().sum());
    let mut r = 0;
    for (i, row) in grid.iter().enumerate() {
        if row.len() != widths.len() {
            return Err(Error::DimensionMismatch {
                context: "block grid",
                expected: (grid.len(), widths.len()),
                found: (grid.len(), row.len()),
            });
        }
        let mut c = 0;
        for (j, b) in row.iter().enumerate() {
            if b.shape() != (heights[i], widths[j]) {
                return Err(Error::DimensionMismatch {
                    context: "block grid",
                    expected: (heights[i], widths[j]),
                    found: b.shape(),
                });
            }
            out.view_mut((r, c), b.shape()).copy_from(*b);
            c += widths[j];
        }
        r += heights[i];
    }
    Ok(out)
}

/// Picks the listed rows and columns, in order.
pub fn select(m: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Picks block rows and block columns of a matrix made of `block x block` tiles.
pub fn select_blocks(m: &CMatrix, rows: &[usize], cols: &[usize], block: usize) -> CMatrix {
    let mut out = zeros(rows.len() * block, cols.len() * block);
    for (i, &bi) in rows.iter().enumerate() {
        for (j, &bj) in cols.iter().enumerate() {
            out.view_mut((i * block, j * block), (block, block))
                .copy_from(&m.view((bi * block, bj * block), (block, block)));
        }
    }
    out
}

/// Expands index list `idx` of tiles of size `block` into scalar indices.
pub fn expand_indices(idx: &[usize], block: usize) -> Vec<usize> {
    idx.iter().flat_map(|&i| (i * block)..((i + 1) * block)).collect()
}

/// Operator imaginary part `(X − X†)/(2i)`.
pub fn im_part(x: &CMatrix) -> CMatrix {
    (x - x.adjoint()) * c64(0.0, -0.5)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(m: &CMatrix) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).fold(C64::zero(), |a, b| a + b)
}

/// `I_n ⊗ x`: the same operator placed on every one of `n` channels.
pub fn channel_copies(n: usize, x: &CMatrix) -> CMatrix {
    kron(&identity(n), x)
}
