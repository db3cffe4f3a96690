use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{c64, ensure_finite, identity, kron, CMatrix, HilbertSpec, C64};
use crate::error::{Error, Result};

/// Operator expression over the labelled factors of a [`HilbertSpec`].
///
/// Qubit conventions: index 0 is the ground state, so `PauliLower` is
/// `|0⟩⟨1|` and `PauliZ` is `diag(−1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorExpr {
    Annihilation(String),
    Creation(String),
    PauliLower(String),
    PauliZ(String),
    Identity,
    Explicit { subsystem: String, matrix: CMatrix },
    Scalar(C64),
    Sum(Vec<OperatorExpr>),
    Product(Vec<OperatorExpr>),
    Adjoint(Box<OperatorExpr>),
    Scale(C64, Box<OperatorExpr>),
}

impl OperatorExpr {
    pub fn a(label: &str) -> Self {
        OperatorExpr::Annihilation(label.into())
    }

    pub fn adag(label: &str) -> Self {
        OperatorExpr::Creation(label.into())
    }

    pub fn sigma(label: &str) -> Self {
        OperatorExpr::PauliLower(label.into())
    }

    /// `x†x` for the annihilation operator on `label`.
    pub fn number(label: &str) -> Self {
        OperatorExpr::Product(alloc::vec![Self::adag(label), Self::a(label)])
    }

    pub fn scaled(self, z: C64) -> Self {
        OperatorExpr::Scale(z, Box::new(self))
    }

    pub fn dagger(self) -> Self {
        OperatorExpr::Adjoint(Box::new(self))
    }
}

/// Truncated annihilation operator: `a|n⟩ = √n |n−1⟩`.
pub(crate) fn ladder(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = c64((n as f64).sqrt(), 0.0);
    }
    m
}

fn local(space: &HilbertSpec, label: &str, op: &CMatrix) -> Result<CMatrix> {
    let k = space.index_of(label)?;
    let subs = space.subsystems();
    let before: usize = subs[..k].iter().map(|s| s.dim).product();
    let after: usize = subs[k + 1..].iter().map(|s| s.dim).product();
    Ok(kron(&kron(&identity(before), op), &identity(after)))
}

fn qubit_dim(space: &HilbertSpec, label: &str) -> Result<usize> {
    let dim = space.dim_of(label)?;
    if dim != 2 {
        return Err(Error::DimensionMismatch {
            context: "Pauli operator needs a two-level subsystem",
            expected: (2, 2),
            found: (dim, dim),
        });
    }
    Ok(dim)
}

/// Kronecker-embeds `expr` into the full composite space.
pub fn embed(expr: &OperatorExpr, space: &HilbertSpec) -> Result<CMatrix> {
    let total = space.total_dim();
    match expr {
        OperatorExpr::Annihilation(l) => local(space, l, &ladder(space.dim_of(l)?)),
        OperatorExpr::Creation(l) => local(space, l, &ladder(space.dim_of(l)?).adjoint()),
        OperatorExpr::PauliLower(l) => {
            qubit_dim(space, l)?;
            local(space, l, &ladder(2))
        }
        OperatorExpr::PauliZ(l) => {
            qubit_dim(space, l)?;
            let mut z = CMatrix::zeros(2, 2);
            z[(0, 0)] = c64(-1.0, 0.0);
            z[(1, 1)] = c64(1.0, 0.0);
            local(space, l, &z)
        }
        OperatorExpr::Identity => Ok(identity(total)),
        OperatorExpr::Explicit { subsystem, matrix } => {
            let dim = space.dim_of(subsystem)?;
            if matrix.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch {
                    context: "explicit operator",
                    expected: (dim, dim),
                    found: matrix.shape(),
                });
            }
            ensure_finite(matrix, "explicit operator")?;
            local(space, subsystem, matrix)
        }
        OperatorExpr::Scalar(z) => Ok(identity(total) * *z),
        OperatorExpr::Sum(terms) => terms
            .iter()
            .try_fold(CMatrix::zeros(total, total), |acc, t| Ok(acc + embed(t, space)?)),
        OperatorExpr::Product(factors) => {
            factors.iter().try_fold(identity(total), |acc, f| Ok(acc * embed(f, space)?))
        }
        OperatorExpr::Adjoint(inner) => Ok(embed(inner, space)?.adjoint()),
        OperatorExpr::Scale(z, inner) => Ok(embed(inner, space)? * *z),
    }
}
