//! Operator-level SLH models and the network composition rules.
//!
//! An [`SLHModel`] with `n` ports on a space of dimension `d` stores its
//! scattering matrix as one `nd x nd` matrix of `d x d` operator blocks, the
//! coupling vector as an `nd x d` column of blocks and the Hamiltonian as a
//! `d x d` matrix. Block-matrix products of operator arrays are then plain
//! matrix products, which is what every composition rule below relies on.

mod feedback;
pub mod qd;
mod redheffer;
mod superop;

pub use feedback::{feedback_reduce, PortConnection, WELL_POSED_TOL};
pub use redheffer::{redheffer_star, TwoLeadSLH};
pub use superop::{evans_hudson, lindblad_rhs, EvansHudson};

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::opalg::{
    c64, embed, frobenius, from_blocks, identity, im_part, is_hermitian, is_unitary, zeros, CMatrix,
    HilbertSpec, OperatorExpr, DEFAULT_TOL,
};

/// Hudson–Parthasarathy coefficients `(S, L, H)` of an open Markov component.
#[derive(Clone, Debug, PartialEq)]
pub struct SLHModel {
    space: HilbertSpec,
    ports: usize,
    s: CMatrix,
    l: CMatrix,
    h: CMatrix,
}

impl SLHModel {
    /// Validates `S` unitary and `H` Hermitian within [`DEFAULT_TOL`].
    pub fn new(space: HilbertSpec, s: CMatrix, l: CMatrix, h: CMatrix) -> Result<Self> {
        Self::with_tolerance(space, s, l, h, DEFAULT_TOL)
    }

    pub fn with_tolerance(space: HilbertSpec, s: CMatrix, l: CMatrix, h: CMatrix, tol: f64) -> Result<Self> {
        let d = space.total_dim();
        if !s.nrows().is_multiple_of(d) || s.nrows() != s.ncols() {
            return Err(Error::DimensionMismatch {
                context: "scattering matrix must be n blocks of the space dimension",
                expected: (d, d),
                found: s.shape(),
            });
        }
        let ports = s.nrows() / d;
        crate::opalg::ensure_shape(&l, ports * d, d, "coupling vector")?;
        crate::opalg::ensure_shape(&h, d, d, "Hamiltonian")?;
        for (m, what) in [(&s, "S"), (&l, "L"), (&h, "H")] {
            crate::opalg::ensure_finite(m, what)?;
        }
        let u = is_unitary(&s, tol)?;
        if !u.pass {
            return Err(Error::NotUnitary { context: "scattering matrix", defect: u.defect });
        }
        let herm = is_hermitian(&h, tol)?;
        if !herm.pass {
            return Err(Error::NotHermitian { context: "Hamiltonian", defect: herm.defect });
        }
        Ok(SLHModel { space, ports, s, l, h })
    }

    pub(crate) fn from_parts(space: HilbertSpec, s: CMatrix, l: CMatrix, h: CMatrix) -> Self {
        let ports = s.nrows() / space.total_dim();
        SLHModel { space, ports, s, l, h }
    }

    /// `S = [S_jk]`, `L = [L_j]` given blockwise.
    pub fn from_blocks(space: HilbertSpec, s: &[Vec<CMatrix>], l: &[CMatrix], h: CMatrix) -> Result<Self> {
        let n = l.len();
        if s.len() != n || s.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidModel(format!("S must be {n}x{n} blocks to match L")));
        }
        let rows: Vec<Vec<&CMatrix>> = s.iter().map(|row| row.iter().collect()).collect();
        let grid: Vec<&[&CMatrix]> = rows.iter().map(|r| r.as_slice()).collect();
        let s_big = if n == 0 { zeros(0, 0) } else { from_blocks(&grid)? };
        let l_rows: Vec<[&CMatrix; 1]> = l.iter().map(|b| [b]).collect();
        let l_grid: Vec<&[&CMatrix]> = l_rows.iter().map(|r| r.as_slice()).collect();
        let d = space.total_dim();
        let l_big = if n == 0 { zeros(0, d) } else { from_blocks(&l_grid)? };
        Self::new(space, s_big, l_big, h)
    }

    /// Builds a model from operator expressions on `space`.
    pub fn from_exprs(
        space: HilbertSpec,
        s: &[Vec<OperatorExpr>],
        l: &[OperatorExpr],
        h: &OperatorExpr,
    ) -> Result<Self> {
        let s_blocks = s
            .iter()
            .map(|row| row.iter().map(|e| embed(e, &space)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let l_blocks = l.iter().map(|e| embed(e, &space)).collect::<Result<Vec<_>>>()?;
        let h = embed(h, &space)?;
        Self::from_blocks(space, &s_blocks, &l_blocks, h)
    }

    /// `(I, 0, 0)` with `ports` channels: the identity of the series product.
    pub fn trivial(space: HilbertSpec, ports: usize) -> Self {
        let d = space.total_dim();
        SLHModel { s: identity(ports * d), l: zeros(ports * d, d), h: zeros(d, d), ports, space }
    }

    pub fn space(&self) -> &HilbertSpec {
        &self.space
    }

    pub fn ports(&self) -> usize {
        self.ports
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn s(&self) -> &CMatrix {
        &self.s
    }

    pub fn l(&self) -> &CMatrix {
        &self.l
    }

    pub fn h(&self) -> &CMatrix {
        &self.h
    }

    pub fn s_block(&self, j: usize, k: usize) -> CMatrix {
        let d = self.dim();
        self.s.view((j * d, k * d), (d, d)).into_owned()
    }

    pub fn l_block(&self, j: usize) -> CMatrix {
        let d = self.dim();
        self.l.view((j * d, 0), (d, d)).into_owned()
    }

    /// `K = −½ Σ L_j†L_j − iH`.
    pub fn k(&self) -> CMatrix {
        self.l.adjoint() * &self.l * c64(-0.5, 0.0) - &self.h * c64(0.0, 1.0)
    }

    /// Keeps the listed ports, in the given order.
    pub fn select_ports(&self, ports: &[usize]) -> Result<SLHModel> {
        if let Some(&p) = ports.iter().find(|&&p| p >= self.ports) {
            return Err(Error::InvalidModel(format!("port {p} out of range")));
        }
        let d = self.dim();
        let s = crate::opalg::select_blocks(&self.s, ports, ports, d);
        let idx = crate::opalg::expand_indices(ports, d);
        let cols: Vec<usize> = (0..d).collect();
        let l = crate::opalg::select(&self.l, &idx, &cols);
        Ok(SLHModel::from_parts(self.space.clone(), s, l, self.h.clone()))
    }
}

/// Defects of the three model-matrix constraints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelDefects {
    /// `‖V00 + V00† + Σ Vj0†Vj0‖`
    pub damping: f64,
    /// `‖V0k + Σ Vj0†Vjk‖`
    pub cross: f64,
    /// unitarity of the scattering block
    pub unitarity: f64,
}

impl ModelDefects {
    pub fn max(&self) -> f64 {
        self.damping.max(self.cross).max(self.unitarity)
    }
}

/// The `(1+n) x (1+n)` block array `[[K, −L†S], [L, S]]`; block 0 is the system row/column.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelMatrix {
    space: HilbertSpec,
    ports: usize,
    v: CMatrix,
}

impl ModelMatrix {
    pub(crate) fn from_parts(space: HilbertSpec, ports: usize, v: CMatrix) -> Self {
        ModelMatrix { space, ports, v }
    }

    pub fn space(&self) -> &HilbertSpec {
        &self.space
    }

    pub fn ports(&self) -> usize {
        self.ports
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.v
    }

    /// Block `V_αβ` with `α, β ∈ 0..=n`.
    pub fn block(&self, alpha: usize, beta: usize) -> CMatrix {
        let d = self.dim();
        self.v.view((alpha * d, beta * d), (d, d)).into_owned()
    }

    fn parts(&self) -> (CMatrix, CMatrix, CMatrix, CMatrix) {
        let d = self.dim();
        let nd = self.ports * d;
        let k = self.v.view((0, 0), (d, d)).into_owned();
        let top = self.v.view((0, d), (d, nd)).into_owned();
        let l = self.v.view((d, 0), (nd, d)).into_owned();
        let s = self.v.view((d, d), (nd, nd)).into_owned();
        (k, top, l, s)
    }

    pub fn defects(&self) -> ModelDefects {
        let (k, top, l, s) = self.parts();
        let damping = frobenius(&(&k + k.adjoint() + l.adjoint() * &l));
        let cross = frobenius(&(top + l.adjoint() * &s));
        let unitarity = if s.is_empty() {
            0.0
        } else {
            frobenius(&(s.adjoint() * &s - identity(s.nrows())))
        };
        ModelDefects { damping, cross, unitarity }
    }

    pub fn validate(&self, tol: f64) -> Result<ModelDefects> {
        let d = self.defects();
        if d.unitarity > tol {
            return Err(Error::NotUnitary { context: "model matrix scattering block", defect: d.unitarity });
        }
        if d.damping.max(d.cross) > tol {
            return Err(Error::InvalidModel(format!(
                "model matrix constraints violated (damping {:.3e}, cross {:.3e})",
                d.damping, d.cross
            )));
        }
        Ok(d)
    }

    /// Reads `(S, L, H)` back, with `H = i(K − K†)/2`.
    pub fn to_slh(&self, tol: f64) -> Result<SLHModel> {
        self.validate(tol)?;
        let (k, _, l, s) = self.parts();
        let h = (&k - k.adjoint()) * c64(0.0, 0.5);
        SLHModel::with_tolerance(self.space.clone(), s, l, h, tol)
    }
}

/// Model matrix of `g`.
pub fn assimilate(g: &SLHModel) -> ModelMatrix {
    let top = -(g.l.adjoint() * &g.s);
    let v = from_blocks(&[&[&g.k(), &top], &[&g.l, &g.s]]).expect("block shapes are consistent");
    ModelMatrix::from_parts(g.space.clone(), g.ports, v)
}

/// Galilean input-output matrix `[[1, 0], [L, S]]`.
pub fn galilean(g: &SLHModel) -> CMatrix {
    let d = g.dim();
    let zero = zeros(d, g.ports * d);
    from_blocks(&[&[&identity(d), &zero], &[&g.l, &g.s]]).expect("block shapes are consistent")
}

/// Parallel sum of components expressed on one shared space.
pub fn parallel_sum(models: &[SLHModel], shared_space: &HilbertSpec) -> Result<SLHModel> {
    if models.is_empty() {
        return Err(Error::InvalidModel("parallel sum of no components".into()));
    }
    if let Some(m) = models.iter().find(|m| &m.space != shared_space) {
        return Err(Error::InvalidSpace(format!(
            "component on a {}-dimensional space does not match the shared space",
            m.dim()
        )));
    }
    let d = shared_space.total_dim();
    let s_blocks: Vec<&CMatrix> = models.iter().map(|m| &m.s).collect();
    let s = crate::opalg::block_diag(&s_blocks);
    let l_rows: Vec<[&CMatrix; 1]> = models.iter().map(|m| [&m.l]).collect();
    let l_grid: Vec<&[&CMatrix]> = l_rows.iter().map(|r| r.as_slice()).collect();
    let l = from_blocks(&l_grid)?;
    let h = models.iter().fold(zeros(d, d), |acc, m| acc + &m.h);
    Ok(SLHModel::from_parts(shared_space.clone(), s, l, h))
}

/// Series product `g2 ◁ g1`: the output of `g1` drives `g2`.
pub fn series_product(g2: &SLHModel, g1: &SLHModel) -> Result<SLHModel> {
    if g2.ports != g1.ports {
        return Err(Error::InvalidModel(format!(
            "series product needs equal port counts ({} vs {})",
            g2.ports, g1.ports
        )));
    }
    if g2.space != g1.space {
        return Err(Error::InvalidSpace("series product needs a common space".into()));
    }
    let s = &g2.s * &g1.s;
    let l = &g2.l + &g2.s * &g1.l;
    let h = &g1.h + &g2.h + im_part(&(g2.l.adjoint() * &g2.s * &g1.l));
    Ok(SLHModel::from_parts(g1.space.clone(), s, l, h))
}
