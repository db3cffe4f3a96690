//! Transmission-line delays between cascaded two-lead devices.

use alloc::format;
use alloc::vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::chainscat::{delay_factors, MatrixFunction};
use crate::error::{Error, Result};
use crate::linpass::POLE_TOL;
use crate::opalg::{block_diag, c64, ensure_shape, from_rows, identity, is_unitary, CMatrix, C64};
use crate::slh::WELL_POSED_TOL;

/// Unitarity tolerance for the scatterers fed to [`scattering_cascade_delay`].
pub const SCATTERER_TOL: f64 = 1e-9;

/// A line of length `τ`, contributing `θ(s) = e^{−sτ}` each way.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DelayElement {
    tau: f64,
}

impl DelayElement {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::OutOfRange(format!("delay {tau} must be finite and non-negative")));
        }
        Ok(DelayElement { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `Θ` as a matrix function at lead multiplicity `n`.
    pub fn to_function(&self, n: usize) -> MatrixFunction {
        MatrixFunction::delay(self.tau, n).expect("delay validated on construction")
    }
}

/// `Θ(s) = diag(e^{−sτ} I_n, e^{sτ} I_n)`.
pub fn delay_eval(d: &DelayElement, s: C64, n: usize) -> Result<CMatrix> {
    let (theta, theta_inv) = delay_factors(d.tau, s)?;
    Ok(block_diag(&[&(identity(n) * theta), &(identity(n) * theta_inv)]))
}

/// `Γ₁ Θ Γ₂`.
pub fn cascade_with_delay(g1: &MatrixFunction, d: &DelayElement, g2: &MatrixFunction) -> Result<MatrixFunction> {
    let (r, c) = g1.shape();
    if r != c || c % 2 != 0 {
        return Err(Error::DimensionMismatch { context: "chain function with two equal leads", expected: (c, c), found: (r, c) });
    }
    MatrixFunction::product(vec![g1.clone(), d.to_function(c / 2), g2.clone()])
}

/// Two scalar-lead scatterers `[[r, t′], [t, r′]]` joined by a delay line,
/// `A` on the left. Returns the composite in port order `[Y_A, X_B]`.
pub fn scattering_cascade_delay(sa: &CMatrix, sb: &CMatrix, d: &DelayElement, s: C64) -> Result<CMatrix> {
    for m in [sa, sb] {
        ensure_shape(m, 2, 2, "single-channel scatterer")?;
        let check = is_unitary(m, SCATTERER_TOL)?;
        if !check.pass {
            return Err(Error::NotUnitary { context: "single-channel scatterer", defect: check.defect });
        }
    }
    let (r_a, tp_a, t_a, rp_a) = (sa[(0, 0)], sa[(0, 1)], sa[(1, 0)], sa[(1, 1)]);
    let (r_b, tp_b, t_b, rp_b) = (sb[(0, 0)], sb[(0, 1)], sb[(1, 0)], sb[(1, 1)]);
    let (theta, _) = delay_factors(d.tau, s)?;
    let theta2 = theta * theta;
    let den = c64(1.0, 0.0) - theta2 * rp_a * r_b;
    if den.norm() <= WELL_POSED_TOL {
        return Err(Error::Singular { context: "delay-line resonance", sigma_min: den.norm() });
    }
    Ok(from_rows(
        2,
        2,
        &[
            r_a + theta2 * tp_a * r_b * t_a / den,
            theta * tp_a * tp_b / den,
            theta * t_a * t_b / den,
            rp_b + theta2 * t_b * rp_a * tp_b / den,
        ],
    ))
}

/// `[[s − γ_A/2 + γ_B/2, √(γ_Aγ_B)], [√(γ_Aγ_B), s + γ_A/2 − γ_B/2]] / (s + (γ_A + γ_B)/2)`.
pub fn trapped_mode_limit(gamma_a: f64, gamma_b: f64, s: C64) -> Result<CMatrix> {
    for g in [gamma_a, gamma_b] {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::OutOfRange(format!("decay rate {g} must be positive")));
        }
    }
    let den = s + 0.5 * (gamma_a + gamma_b);
    if den.norm() < POLE_TOL * (s.norm() + 1.0) {
        return Err(Error::Pole { re: s.re, im: s.im });
    }
    let half = 0.5 * (gamma_b - gamma_a);
    let off = c64((gamma_a * gamma_b).sqrt(), 0.0);
    Ok(from_rows(2, 2, &[s + half, off, off, s - half]) / den)
}

/// `[[√(1−2γτ), −√(2γτ)], [√(2γτ), √(1−2γτ)]]`, a weakly transmitting mirror
/// whose reflections close into the trapped mode as `τ → 0`.
pub fn trapped_mode_scatterer(gamma: f64, tau: f64) -> Result<CMatrix> {
    let x = 2.0 * gamma * tau;
    if !(gamma > 0.0 && tau > 0.0 && x < 1.0) {
        return Err(Error::OutOfRange(format!("need γ > 0, τ > 0 and 2γτ < 1 (got γ = {gamma}, τ = {tau})")));
    }
    let (r, t) = ((1.0 - x).sqrt(), x.sqrt());
    Ok(from_rows(2, 2, &[c64(r, 0.0), c64(-t, 0.0), c64(t, 0.0), c64(r, 0.0)]))
}
