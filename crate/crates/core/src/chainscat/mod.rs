//! Chain-scattering representation: the CHAIN transform, ♭-conjugation, lead
//! partitions, matrix-valued functions of `s` and coprime factorizations.

mod function;
mod transfer;

pub use function::{MatrixFunction, DELAY_EXPONENT_LIMIT};
pub(crate) use function::delay_factors;
pub use transfer::{
    chain_cascade, chain_of_transfer, chain_realization, flat_grid, is_flat_lossless, left_coprime_factors,
    partitioned_realization, right_coprime_factors, FlatLosslessReport, INTERIOR_ABSCISSAE,
};

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::opalg::{block_diag, ensure_square, from_blocks, frobenius, identity, inverse, select, CMatrix};

/// A matrix split into four blocks `[[11, 12], [21, 22]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix2x2 {
    pub m11: CMatrix,
    pub m12: CMatrix,
    pub m21: CMatrix,
    pub m22: CMatrix,
}

impl BlockMatrix2x2 {
    pub fn new(m11: CMatrix, m12: CMatrix, m21: CMatrix, m22: CMatrix) -> Result<Self> {
        let ok = m11.nrows() == m12.nrows()
            && m21.nrows() == m22.nrows()
            && m11.ncols() == m21.ncols()
            && m12.ncols() == m22.ncols();
        if !ok {
            return Err(Error::DimensionMismatch {
                context: "2x2 block partition",
                expected: (m11.nrows() + m21.nrows(), m11.ncols() + m12.ncols()),
                found: (m12.nrows() + m22.nrows(), m21.ncols() + m22.ncols()),
            });
        }
        Ok(BlockMatrix2x2 { m11, m12, m21, m22 })
    }

    /// Splits after `rows` rows and `cols` columns.
    pub fn split(m: &CMatrix, rows: usize, cols: usize) -> Result<Self> {
        if rows > m.nrows() || cols > m.ncols() {
            return Err(Error::DimensionMismatch { context: "block split", expected: (rows, cols), found: m.shape() });
        }
        let (r2, c2) = (m.nrows() - rows, m.ncols() - cols);
        Ok(BlockMatrix2x2 {
            m11: m.view((0, 0), (rows, cols)).into_owned(),
            m12: m.view((0, cols), (rows, c2)).into_owned(),
            m21: m.view((rows, 0), (r2, cols)).into_owned(),
            m22: m.view((rows, cols), (r2, c2)).into_owned(),
        })
    }

    /// Splits a `2n x 2n` matrix into `n x n` blocks.
    pub fn halves(m: &CMatrix) -> Result<Self> {
        let n = ensure_square(m)?;
        if n % 2 != 0 {
            return Err(Error::DimensionMismatch { context: "even block split", expected: (n + 1, n + 1), found: m.shape() });
        }
        Self::split(m, n / 2, n / 2)
    }

    pub fn to_matrix(&self) -> CMatrix {
        from_blocks(&[&[&self.m11, &self.m12], &[&self.m21, &self.m22]]).expect("partition checked on construction")
    }
}

/// `[[K12 − K11K21⁻¹K22, K11K21⁻¹], [−K21⁻¹K22, K21⁻¹]]`.
pub fn chain(k: &BlockMatrix2x2) -> Result<BlockMatrix2x2> {
    ensure_square(&k.m21)?;
    let inv = inverse(&k.m21, "transmission block K21")?;
    let k11_inv = &k.m11 * &inv;
    BlockMatrix2x2::new(&k.m12 - &k11_inv * &k.m22, k11_inv, -(&inv * &k.m22), inv)
}

/// `[[M12M22⁻¹, M11 − M12M22⁻¹M21], [M22⁻¹, −M22⁻¹M21]]`.
pub fn chain_inverse(m: &BlockMatrix2x2) -> Result<BlockMatrix2x2> {
    ensure_square(&m.m22)?;
    let inv = inverse(&m.m22, "block M22")?;
    let m12_inv = &m.m12 * &inv;
    BlockMatrix2x2::new(m12_inv.clone(), &m.m11 - &m12_inv * &m.m21, inv.clone(), -(inv * &m.m21))
}

/// `J_n = diag(I_n, −I_n)`.
pub fn j_matrix(n: usize) -> CMatrix {
    block_diag(&[&identity(n), &-identity(n)])
}

fn ensure_even(x: &CMatrix, n: usize) -> Result<()> {
    if x.shape() != (2 * n, 2 * n) {
        return Err(Error::DimensionMismatch { context: "♭-conjugation", expected: (2 * n, 2 * n), found: x.shape() });
    }
    Ok(())
}

/// `X♭ = J_n X† J_n`.
pub fn flat_conjugate(x: &CMatrix, n: usize) -> Result<CMatrix> {
    ensure_even(x, n)?;
    let j = j_matrix(n);
    Ok(&j * x.adjoint() * &j)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatUnitarity {
    /// `‖X♭X − I‖_F`
    pub isometry: f64,
    /// `‖XX♭ − I‖_F`
    pub coisometry: f64,
    pub pass: bool,
}

pub fn flat_unitarity(x: &CMatrix, n: usize, tol: f64) -> Result<FlatUnitarity> {
    let xf = flat_conjugate(x, n)?;
    let id = identity(2 * n);
    let isometry = frobenius(&(&xf * x - &id));
    let coisometry = frobenius(&(x * &xf - &id));
    Ok(FlatUnitarity { isometry, coisometry, pass: isometry <= tol && coisometry <= tol })
}

/// Left lead `Y` and right lead `X` of a two-lead device, as port index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadPartition {
    y: Vec<usize>,
    x: Vec<usize>,
}

impl LeadPartition {
    /// Both leads must have the same multiplicity and together cover `0..ports`.
    pub fn new(y: Vec<usize>, x: Vec<usize>, ports: usize) -> Result<Self> {
        if y.len() != x.len() || y.is_empty() {
            return Err(Error::InvalidPartition(format!(
                "leads need equal, nonzero multiplicities (got {} and {})",
                y.len(),
                x.len()
            )));
        }
        let mut seen = alloc::vec![false; ports];
        for &p in y.iter().chain(&x) {
            if p >= ports || seen[p] {
                return Err(Error::InvalidPartition(format!("port {p} is out of range or repeated")));
            }
            seen[p] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidPartition("leads must cover every port".into()));
        }
        Ok(LeadPartition { y, x })
    }

    /// First half of the ports is `Y`, second half `X`.
    pub fn halves(ports: usize) -> Result<Self> {
        let h = ports / 2;
        Self::new((0..h).collect(), (h..ports).collect(), ports)
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    pub fn x(&self) -> &[usize] {
        &self.x
    }

    pub fn multiplicity(&self) -> usize {
        self.y.len()
    }

    pub fn ports(&self) -> usize {
        2 * self.y.len()
    }

    /// Port order `[Y, X]`.
    pub fn order(&self) -> Vec<usize> {
        self.y.iter().chain(&self.x).copied().collect()
    }

    /// Rows and columns of a port-indexed square matrix reordered to `[Y, X]`.
    pub fn arrange(&self, m: &CMatrix) -> CMatrix {
        let o = self.order();
        select(m, &o, &o)
    }
}
