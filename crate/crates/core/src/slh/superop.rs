use super::SLHModel;
use crate::error::{Error, Result};
use crate::opalg::{c64, channel_copies, commutator, ensure_shape, is_hermitian, trace, CMatrix, DEFAULT_TOL};

/// The four Evans–Hudson blocks acting on a system operator `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvansHudson {
    /// `L_jk X`, an `n x n` array of blocks stored as one `nd x nd` matrix.
    pub scattering: CMatrix,
    /// `L_j0 X`, an `nd x d` column.
    pub column: CMatrix,
    /// `L_0k X`, a `d x nd` row.
    pub row: CMatrix,
    /// `L_00 X`, the Lindblad generator.
    pub generator: CMatrix,
}

pub fn evans_hudson(g: &SLHModel, x: &CMatrix) -> Result<EvansHudson> {
    let d = g.dim();
    ensure_shape(x, d, d, "system operator X")?;
    let n = g.ports();
    let xs = channel_copies(n, x);
    let (s, l, h) = (g.s(), g.l(), g.h());
    let scattering = s.adjoint() * &xs * s - &xs;
    let column = s.adjoint() * (&xs * l - l * x);
    let row = (l.adjoint() * &xs - x * l.adjoint()) * s;
    let ldl = l.adjoint() * l;
    let generator = l.adjoint() * &xs * l - (&ldl * x + x * &ldl) * c64(0.5, 0.0)
        + commutator(x, h) * c64(0.0, 1.0);
    Ok(EvansHudson { scattering, column, row, generator })
}

/// `dρ/dt = Σ_j L_j ρ L_j† − ρK† − Kρ` with `K = ½ L†L + iH`.
pub fn lindblad_rhs(g: &SLHModel, rho: &CMatrix) -> Result<CMatrix> {
    let d = g.dim();
    ensure_shape(rho, d, d, "density matrix")?;
    let herm = is_hermitian(rho, DEFAULT_TOL)?;
    if !herm.pass {
        return Err(Error::NotHermitian { context: "density matrix", defect: herm.defect });
    }
    let tr = trace(rho);
    if (tr - c64(1.0, 0.0)).norm() > DEFAULT_TOL {
        return Err(Error::InvalidModel(alloc::format!("density matrix has trace {} + {}i", tr.re, tr.im)));
    }
    let (l, h) = (g.l(), g.h());
    let k = l.adjoint() * l * c64(0.5, 0.0) + h * c64(0.0, 1.0);
    let mut drho = -(rho * k.adjoint()) - k * rho;
    for j in 0..g.ports() {
        let lj = l.view((j * d, 0), (d, d));
        drho += lj * rho * lj.adjoint();
    }
    Ok(drho)
}
