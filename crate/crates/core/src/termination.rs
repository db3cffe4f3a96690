//! Terminating the `X` lead of a two-lead device with a load `Δ`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::chainscat::{chain_of_transfer, chain_realization, BlockMatrix2x2, LeadPartition, MatrixFunction};
use crate::error::{Error, Result};
use crate::linpass::{is_hurwitz, transfer_eval, HurwitzReport, LinearPassiveModel, StateSpaceRealization};
use crate::opalg::{c64, from_blocks, frobenius, identity, inverse, min_singular_value, zeros, CMatrix, C64};
use crate::slh::WELL_POSED_TOL;

/// Relative agreement required between the realization of `Φ` and the homographic route.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

/// Number of regular points the construction-time cross-check needs.
pub const CROSS_CHECK_POINTS: usize = 8;

/// A square load `Δ(s) = D_Δ + C_Δ(sI − A_Δ)⁻¹B_Δ` on the `X` lead.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadModel {
    realization: StateSpaceRealization,
}

impl LoadModel {
    pub fn new(realization: StateSpaceRealization) -> Result<Self> {
        if realization.inputs() != realization.outputs() {
            return Err(Error::NotSquare { rows: realization.outputs(), cols: realization.inputs() });
        }
        Ok(LoadModel { realization })
    }

    /// Memoryless load `Δ = d`.
    pub fn static_load(d: CMatrix) -> Result<Self> {
        Self::new(StateSpaceRealization::constant(d))
    }

    pub fn realization(&self) -> &StateSpaceRealization {
        &self.realization
    }

    pub fn ports(&self) -> usize {
        self.realization.inputs()
    }

    pub fn states(&self) -> usize {
        self.realization.states()
    }

    pub fn eval(&self, s: C64) -> Result<CMatrix> {
        self.realization.eval(s)
    }

    pub fn to_function(&self) -> MatrixFunction {
        MatrixFunction::state_space(self.realization.clone())
    }

    /// Same load with state coordinates changed by `x = T x̃`.
    pub fn transformed(&self, t: &CMatrix) -> Result<Self> {
        let r = &self.realization;
        if t.shape() != (r.states(), r.states()) {
            return Err(Error::DimensionMismatch {
                context: "load similarity transform",
                expected: (r.states(), r.states()),
                found: t.shape(),
            });
        }
        let t_inv = inverse(t, "similarity transform")?;
        Self::new(StateSpaceRealization::new(&t_inv * &r.a * t, &t_inv * &r.b, &r.c * t, r.d.clone())?)
    }

    fn check_lead(&self, p: &LeadPartition) -> Result<()> {
        let n = p.multiplicity();
        if self.ports() != n {
            return Err(Error::DimensionMismatch { context: "load on the X lead", expected: (n, n), found: (self.ports(), self.ports()) });
        }
        Ok(())
    }
}

/// `Φ = Ξ^{−+} + Ξ^{−−}Δ(I − Ξ^{+−}Δ)⁻¹Ξ^{++}` at `s`.
pub fn terminate_fractional(g: &LinearPassiveModel, p: &LeadPartition, delta: &LoadModel, s: C64) -> Result<CMatrix> {
    if p.ports() != g.ports() {
        return Err(Error::InvalidPartition(alloc::format!("partition covers {} ports, model has {}", p.ports(), g.ports())));
    }
    delta.check_lead(p)?;
    let n = p.multiplicity();
    let xi = BlockMatrix2x2::split(&p.arrange(&transfer_eval(g, s)?), n, n)?;
    let d = delta.eval(s)?;
    let loop_factor = inverse(&(identity(n) - &xi.m22 * &d), "termination loop factor")?;
    Ok(&xi.m11 + &xi.m12 * &d * loop_factor * &xi.m21)
}

/// `Φ = (Γ11 Δ + Γ12)(Γ21 Δ + Γ22)⁻¹` for a chain function `Γ` mapping `X` waves to `Y` waves.
pub fn homographic(gamma: &MatrixFunction, delta: &LoadModel, s: C64) -> Result<CMatrix> {
    let n = delta.ports();
    if gamma.shape() != (2 * n, 2 * n) {
        return Err(Error::DimensionMismatch { context: "homographic transformation", expected: (2 * n, 2 * n), found: gamma.shape() });
    }
    let g = BlockMatrix2x2::split(&gamma.eval(s)?, n, n)?;
    let d = delta.eval(s)?;
    let den = inverse(&(&g.m21 * &d + &g.m22), "homographic denominator")?;
    Ok((&g.m11 * &d + &g.m12) * den)
}

/// State-space form of the terminated device. States are the plant modes
/// followed by the load states.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedLoopRealization {
    pub realization: StateSpaceRealization,
    /// `[B₁D_Δ + B₂; B_Δ]`
    pub e: CMatrix,
    pub plant_states: usize,
    pub load_states: usize,
    /// Largest relative discrepancy seen by the construction-time check.
    pub cross_check: f64,
}

impl ClosedLoopRealization {
    pub fn eval(&self, s: C64) -> Result<CMatrix> {
        self.realization.eval(s)
    }

    pub fn states(&self) -> usize {
        self.realization.states()
    }
}

/// Deterministic scatter of points in `0.1 ≤ Re s ≤ 3`, `|Im s| ≤ 5`.
fn probe_points(count: usize) -> impl Iterator<Item = C64> {
    const G1: f64 = 0.618_033_988_749_894_9;
    const G2: f64 = 0.754_877_666_246_692_7;
    (1..=count).map(|k| {
        let (u, v) = ((k as f64 * G1).fract(), (k as f64 * G2).fract());
        c64(0.1 + 2.9 * u, 10.0 * v - 5.0)
    })
}

/// Realization of `Φ = HM(Γ_YX, Δ)` built on the chain realization of `Ξ`,
/// verified against [`homographic`] before it is returned.
pub fn hm_realization(g: &LinearPassiveModel, p: &LeadPartition, delta: &LoadModel) -> Result<ClosedLoopRealization> {
    delta.check_lead(p)?;
    let n = p.multiplicity();
    let chain = chain_realization(g, p)?;
    let (m, md) = (chain.states(), delta.states());
    let part = |x: &CMatrix, r: (usize, usize), c: (usize, usize)| x.view(r, c).into_owned();
    let (b1, b2) = (part(&chain.b, (0, 0), (m, n)), part(&chain.b, (0, n), (m, n)));
    let (c1, c2) = (part(&chain.c, (0, 0), (n, m)), part(&chain.c, (n, 0), (n, m)));
    let d = BlockMatrix2x2::halves(&chain.d)?;
    let ld = delta.realization();

    let den = &d.m21 * &ld.d + &d.m22;
    let sigma_min = min_singular_value(&den);
    if sigma_min <= WELL_POSED_TOL {
        return Err(Error::IllPosed { sigma_min });
    }
    let nn = inverse(&den, "termination well-posedness factor")?;
    let e = from_blocks(&[&[&(&b1 * &ld.d + &b2)], &[&ld.b]])?;
    let open = from_blocks(&[&[&chain.a, &(&b1 * &ld.c)], &[&zeros(md, m), &ld.a]])?;
    let feed = from_blocks(&[&[&c2, &(&d.m21 * &ld.c)]])?;
    let a_phi = open - &e * &nn * feed;
    let b_phi = &e * &nn;
    let d_phi = (&d.m11 * &ld.d + &d.m12) * &nn;
    let c_phi = from_blocks(&[&[&(&c1 - &d_phi * &c2), &((&d.m11 - &d_phi * &d.m21) * &ld.c)]])?;
    let realization = StateSpaceRealization::new(a_phi, b_phi, c_phi, d_phi)?;

    let gamma = chain_of_transfer(g, p)?;
    let mut worst = 0.0f64;
    let mut used = 0;
    for s in probe_points(2 * CROSS_CHECK_POINTS) {
        if used == CROSS_CHECK_POINTS {
            break;
        }
        let (Ok(direct), Ok(built)) = (homographic(&gamma, delta, s), realization.eval(s)) else {
            continue;
        };
        worst = worst.max(frobenius(&(built - &direct)) / frobenius(&direct).max(1.0));
        used += 1;
    }
    if used < CROSS_CHECK_POINTS {
        return Err(Error::CrossCheck { context: "too few regular points to validate the terminated realization", discrepancy: f64::INFINITY });
    }
    if !(worst <= CROSS_CHECK_TOL) {
        return Err(Error::CrossCheck { context: "terminated realization against the homographic form", discrepancy: worst });
    }
    Ok(ClosedLoopRealization { realization, e, plant_states: m, load_states: md, cross_check: worst })
}

/// Hurwitz test on `A_Φ`; a realization without states is trivially stable.
pub fn internal_stability(cl: &ClosedLoopRealization, tol: f64) -> Result<HurwitzReport> {
    if cl.states() == 0 {
        return Ok(HurwitzReport { pass: true, abscissa: f64::NEG_INFINITY });
    }
    is_hurwitz(&cl.realization.a, tol)
}

/// Samples `Φ` along `s` by all three routes and returns the largest pairwise gap.
pub fn route_discrepancy(g: &LinearPassiveModel, p: &LeadPartition, delta: &LoadModel, cl: &ClosedLoopRealization, points: &[C64]) -> Result<f64> {
    let gamma = chain_of_transfer(g, p)?;
    let mut worst = 0.0f64;
    for &s in points {
        let a = terminate_fractional(g, p, delta, s)?;
        let b = homographic(&gamma, delta, s)?;
        let c = cl.eval(s)?;
        let scale = frobenius(&a).max(1.0);
        let gaps: Vec<f64> = [frobenius(&(&a - &b)), frobenius(&(&a - &c)), frobenius(&(&b - &c))].into();
        worst = gaps.into_iter().fold(worst, |w, x| w.max(x / scale));
    }
    Ok(worst)
}
