use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{j_matrix, LeadPartition, MatrixFunction};
use crate::error::{Error, Result};
use crate::linpass::{is_hurwitz, realization, HurwitzReport, LinearPassiveModel, StateSpaceRealization};
use crate::opalg::{
    c64, ensure_square, from_blocks, hermitian_max_eigenvalue, identity, inverse, max_singular_value, select, zeros,
    CMatrix, C64,
};

/// Real parts of the interior sample lines added to an axis grid.
pub const INTERIOR_ABSCISSAE: [f64; 3] = [0.1, 1.0, 10.0];

/// Realization of `Ξ` with ports reordered to `[Y, X]`.
pub fn partitioned_realization(g: &LinearPassiveModel, p: &LeadPartition) -> Result<StateSpaceRealization> {
    if p.ports() != g.ports() {
        return Err(Error::InvalidPartition(alloc::format!(
            "partition covers {} ports but the model has {}",
            p.ports(),
            g.ports()
        )));
    }
    let r = realization(g);
    let order = p.order();
    let states: Vec<usize> = (0..g.modes()).collect();
    Ok(StateSpaceRealization {
        b: select(&r.b, &states, &order),
        c: select(&r.c, &order, &states),
        d: p.arrange(&r.d),
        a: r.a,
    })
}

/// `Γ_YX(s) = CHAIN(Ξ(s))` under the partition.
pub fn chain_of_transfer(g: &LinearPassiveModel, p: &LeadPartition) -> Result<MatrixFunction> {
    let xi = MatrixFunction::state_space(partitioned_realization(g, p)?);
    MatrixFunction::chain(xi, p.multiplicity())
}

/// `Γ_{Y₁X₁} Γ_{Y₂X₂} ⋯` in the given order.
pub fn chain_cascade(gammas: Vec<MatrixFunction>) -> Result<MatrixFunction> {
    if gammas.len() == 1 {
        return Ok(gammas.into_iter().next().expect("one element"));
    }
    MatrixFunction::product(gammas)
}

struct Blocks {
    a: CMatrix,
    b_y: CMatrix,
    b_x: CMatrix,
    c_y: CMatrix,
    c_x: CMatrix,
    s_yy: CMatrix,
    s_yx: CMatrix,
    s_xy: CMatrix,
    s_xx: CMatrix,
}

fn blocks(g: &LinearPassiveModel, p: &LeadPartition) -> Result<Blocks> {
    let r = partitioned_realization(g, p)?;
    let (n, m) = (p.multiplicity(), g.modes());
    Ok(Blocks {
        b_y: r.b.view((0, 0), (m, n)).into_owned(),
        b_x: r.b.view((0, n), (m, n)).into_owned(),
        c_y: r.c.view((0, 0), (n, m)).into_owned(),
        c_x: r.c.view((n, 0), (n, m)).into_owned(),
        s_yy: r.d.view((0, 0), (n, n)).into_owned(),
        s_yx: r.d.view((0, n), (n, n)).into_owned(),
        s_xy: r.d.view((n, 0), (n, n)).into_owned(),
        s_xx: r.d.view((n, n), (n, n)).into_owned(),
        a: r.a,
    })
}

fn assemble(a: CMatrix, b: [&CMatrix; 2], c: [&CMatrix; 2], d: [[&CMatrix; 2]; 2]) -> Result<StateSpaceRealization> {
    let b = from_blocks(&[&b])?;
    let c = from_blocks(&[&[c[0]], &[c[1]]])?;
    let d = from_blocks(&[&d[0], &d[1]])?;
    StateSpaceRealization::new(a, b, c, d)
}

/// State-space form of `Γ_YX` with input `[b_{X−}; b_{X+}]` and output `[b_{Y−}; b_{Y+}]`.
pub fn chain_realization(g: &LinearPassiveModel, p: &LeadPartition) -> Result<StateSpaceRealization> {
    let k = blocks(g, p)?;
    let inv = inverse(&k.s_xy, "feedthrough block S_XY")?;
    let a = &k.a - &k.b_y * &inv * &k.c_x;
    let b1 = &k.b_x - &k.b_y * &inv * &k.s_xx;
    let b2 = &k.b_y * &inv;
    let c1 = &k.c_y - &k.s_yy * &inv * &k.c_x;
    let c2 = -(&inv * &k.c_x);
    let d11 = &k.s_yx - &k.s_yy * &inv * &k.s_xx;
    let d12 = &k.s_yy * &inv;
    let d21 = -(&inv * &k.s_xx);
    assemble(a, [&b1, &b2], [&c1, &c2], [[&d11, &d12], [&d21, &inv]])
}

/// `(Υ_Y, Υ_X)` with `Υ_Y = [[I, −Ξ^{−+}], [0, Ξ^{++}]]`, `Υ_X = [[Ξ^{−−}, 0], [−Ξ^{+−}, I]]`.
pub fn left_coprime_factors(g: &LinearPassiveModel, p: &LeadPartition) -> Result<(MatrixFunction, MatrixFunction)> {
    let k = blocks(g, p)?;
    let (n, m) = (p.multiplicity(), g.modes());
    let (id, zn, zb) = (identity(n), zeros(n, n), zeros(m, n));
    let upsilon_y = assemble(
        k.a.clone(),
        [&zb, &k.b_y],
        [&-k.c_y.clone(), &k.c_x],
        [[&id, &-k.s_yy.clone()], [&zn, &k.s_xy]],
    )?;
    let upsilon_x = assemble(
        k.a,
        [&k.b_x, &zb],
        [&k.c_y, &-k.c_x.clone()],
        [[&k.s_yx, &zn], [&-k.s_xx.clone(), &id]],
    )?;
    Ok((MatrixFunction::state_space(upsilon_y), MatrixFunction::state_space(upsilon_x)))
}

/// `(N, D)` with `N = [[Ξ^{−−}, Ξ^{−+}], [0, I]]`, `D = [[I, 0], [Ξ^{+−}, Ξ^{++}]]`.
pub fn right_coprime_factors(g: &LinearPassiveModel, p: &LeadPartition) -> Result<(MatrixFunction, MatrixFunction)> {
    let k = blocks(g, p)?;
    let (n, m) = (p.multiplicity(), g.modes());
    let (id, zn, zc) = (identity(n), zeros(n, n), zeros(n, m));
    let num = assemble(k.a.clone(), [&k.b_x, &k.b_y], [&k.c_y, &zc], [[&k.s_yx, &k.s_yy], [&zn, &id]])?;
    let den = assemble(k.a, [&k.b_x, &k.b_y], [&zc, &k.c_x], [[&id, &zn], [&k.s_xx, &k.s_xy]])?;
    Ok((MatrixFunction::state_space(num), MatrixFunction::state_space(den)))
}

/// Axis points plus copies shifted to each of [`INTERIOR_ABSCISSAE`].
pub fn flat_grid(axis: &[C64]) -> Vec<C64> {
    let mut out = axis.to_vec();
    for &sigma in &INTERIOR_ABSCISSAE {
        out.extend(axis.iter().map(|s| c64(sigma, s.im)));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatLosslessReport {
    pub pass: bool,
    /// Hurwitz test over the state matrices underlying `Γ`.
    pub hurwitz: HurwitzReport,
    /// `max λ_max(Γ†JΓ − J) / max(1, ‖Γ‖²)` over the samples.
    pub excess: f64,
}

impl FlatLosslessReport {
    pub fn defect(&self) -> f64 {
        self.excess.max(self.hurwitz.abscissa).max(0.0)
    }
}

/// `Γ♭Γ ⪯ I` on the samples, tested as `Γ†JΓ ⪯ J`, together with stability of
/// the realizations `Γ` is built from.
pub fn is_flat_lossless(gamma: &MatrixFunction, grid: &[C64], n: usize, tol: f64) -> Result<FlatLosslessReport> {
    if gamma.shape() != (2 * n, 2 * n) {
        return Err(Error::DimensionMismatch {
            context: "♭-lossless test",
            expected: (2 * n, 2 * n),
            found: gamma.shape(),
        });
    }
    if let Some(s) = grid.iter().find(|s| s.re < 0.0) {
        return Err(Error::OutOfRange(alloc::format!("sample point {} + {}i lies in the left half-plane", s.re, s.im)));
    }
    let mut abscissa = f64::NEG_INFINITY;
    for a in gamma.state_matrices() {
        ensure_square(a)?;
        abscissa = abscissa.max(is_hurwitz(a, tol)?.abscissa);
    }
    let hurwitz = HurwitzReport { pass: abscissa < -tol, abscissa };
    let j = j_matrix(n);
    let mut excess = f64::NEG_INFINITY;
    for &s in grid {
        let g = gamma.eval(s)?;
        let form = g.adjoint() * &j * &g - &j;
        let form = (&form + form.adjoint()) * c64(0.5, 0.0);
        let scale = max_singular_value(&g).powi(2).max(1.0);
        excess = excess.max(hermitian_max_eigenvalue(&form)? / scale);
    }
    Ok(FlatLosslessReport { pass: hurwitz.pass && excess <= tol, hurwitz, excess })
}
