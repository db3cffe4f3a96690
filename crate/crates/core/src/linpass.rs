//! Linear passive components `(S, C, Ω)`, their transfer functions and the
//! innerness, stability and losslessness tests.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::opalg::{
    c64, eigenvalues, ensure_finite, ensure_shape, ensure_square, identity, inverse, is_hermitian, is_unitary,
    max_singular_value, min_singular_value, solve, zeros, CMatrix, Check, C64, DEFAULT_TOL,
};

/// Relative distance from a pole below which evaluation is refused.
pub const POLE_TOL: f64 = 1e-8;

/// Default sweep band `[10⁻², 10²]`.
pub const DEFAULT_BAND: (f64, f64) = (1e-2, 1e2);

/// Points per decade on the default logarithmic grid.
pub const POINTS_PER_DECADE: usize = 101;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearPassiveModel {
    s: CMatrix,
    c: CMatrix,
    omega: CMatrix,
}

impl LinearPassiveModel {
    pub fn new(s: CMatrix, c: CMatrix, omega: CMatrix) -> Result<Self> {
        Self::with_tolerance(s, c, omega, DEFAULT_TOL)
    }

    pub fn with_tolerance(s: CMatrix, c: CMatrix, omega: CMatrix, tol: f64) -> Result<Self> {
        let n = ensure_square(&s)?;
        let m = ensure_square(&omega)?;
        ensure_shape(&c, n, m, "coupling matrix C")?;
        ensure_finite(&s, "S")?;
        ensure_finite(&c, "C")?;
        ensure_finite(&omega, "Omega")?;
        let u = is_unitary(&s, tol)?;
        if !u.pass {
            return Err(Error::NotUnitary { context: "scattering matrix S", defect: u.defect });
        }
        let h = is_hermitian(&omega, tol)?;
        if !h.pass {
            return Err(Error::NotHermitian { context: "Omega", defect: h.defect });
        }
        Ok(LinearPassiveModel { s, c, omega })
    }

    pub fn s(&self) -> &CMatrix {
        &self.s
    }

    pub fn c(&self) -> &CMatrix {
        &self.c
    }

    pub fn omega(&self) -> &CMatrix {
        &self.omega
    }

    /// Number of field channels `n`.
    pub fn ports(&self) -> usize {
        self.s.nrows()
    }

    /// Number of oscillator modes `m`.
    pub fn modes(&self) -> usize {
        self.omega.nrows()
    }
}

/// `[A | B; C | D](s) = D + C(sI − A)⁻¹B`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpaceRealization {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
}

impl StateSpaceRealization {
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self> {
        let m = ensure_square(&a)?;
        if b.nrows() != m || c.ncols() != m || d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return Err(Error::DimensionMismatch {
                context: "state-space realization",
                expected: (c.nrows(), b.ncols()),
                found: d.shape(),
            });
        }
        Ok(StateSpaceRealization { a, b, c, d })
    }

    /// A static gain with no states.
    pub fn constant(d: CMatrix) -> Self {
        let (p, n) = d.shape();
        StateSpaceRealization { a: zeros(0, 0), b: zeros(0, n), c: zeros(p, 0), d }
    }

    pub fn states(&self) -> usize {
        self.a.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.d.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.d.nrows()
    }

    pub fn eval(&self, s: C64) -> Result<CMatrix> {
        if self.states() == 0 {
            return Ok(self.d.clone());
        }
        let resolvent_arg = shifted(&self.a, s)?;
        Ok(&self.d + &self.c * solve(&resolvent_arg, &self.b, "resolvent")?)
    }
}

/// `sI − A`, refusing points within [`POLE_TOL`] of the spectrum.
fn shifted(a: &CMatrix, s: C64) -> Result<CMatrix> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::NonFinite("evaluation point"));
    }
    let m = identity(a.nrows()) * s - a;
    if min_singular_value(&m) < POLE_TOL * (s.norm() + 1.0) {
        return Err(Error::Pole { re: s.re, im: s.im });
    }
    Ok(m)
}

/// `A = −½C†C − iΩ`.
pub fn dynamics_matrix(g: &LinearPassiveModel) -> CMatrix {
    g.c.adjoint() * &g.c * c64(-0.5, 0.0) - &g.omega * c64(0.0, 1.0)
}

/// `(A, −C†S, C, S)`.
pub fn realization(g: &LinearPassiveModel) -> StateSpaceRealization {
    StateSpaceRealization { a: dynamics_matrix(g), b: -(g.c.adjoint() * &g.s), c: g.c.clone(), d: g.s.clone() }
}

/// `Ξ(s) = S − C(sI − A)⁻¹C†S`.
pub fn transfer_eval(g: &LinearPassiveModel, s: C64) -> Result<CMatrix> {
    if g.modes() == 0 {
        return Ok(g.s.clone());
    }
    let m = shifted(&dynamics_matrix(g), s)?;
    let x = solve(&m, &(g.c.adjoint() * &g.s), "resolvent")?;
    Ok(&g.s - &g.c * x)
}

/// `ξ(s) = C(sI − A)⁻¹`, the response to the initial mode amplitudes.
pub fn noise_response(g: &LinearPassiveModel, s: C64) -> Result<CMatrix> {
    let m = g.modes();
    if m == 0 {
        return Ok(zeros(g.ports(), 0));
    }
    let shifted = shifted(&dynamics_matrix(g), s)?;
    Ok(&g.c * solve(&shifted, &identity(m), "resolvent")?)
}

/// `Σ(s) = C(s + iΩ)⁻¹C†`.
pub fn sigma_eval(g: &LinearPassiveModel, s: C64) -> Result<CMatrix> {
    if g.modes() == 0 {
        return Ok(zeros(g.ports(), g.ports()));
    }
    let m = shifted(&(&g.omega * c64(0.0, -1.0)), s)?;
    Ok(&g.c * solve(&m, &g.c.adjoint(), "s + iOmega")?)
}

/// `(1 − ½Σ(s))(1 + ½Σ(s))⁻¹ S`.
pub fn allpass_eval(g: &LinearPassiveModel, s: C64) -> Result<CMatrix> {
    let n = g.ports();
    let half = sigma_eval(g, s)? * c64(0.5, 0.0);
    let denom = inverse(&(identity(n) + &half), "1 + Sigma/2")?;
    Ok((identity(n) - half) * denom * &g.s)
}

/// Frequencies `ω` at which `Σ(iω)` is singular: `ω = −λ` for `λ ∈ spec(Ω)`.
pub fn exceptional_frequencies(g: &LinearPassiveModel) -> Result<Vec<f64>> {
    Ok(eigenvalues(&g.omega)?.into_iter().map(|l| -l.re).collect())
}

fn near_exceptional(omega: f64, exceptional: &[f64]) -> bool {
    exceptional.iter().any(|&w| (omega - w).abs() <= POLE_TOL * (1.0 + omega.abs()))
}

/// Unitarity defect `‖Ξ(iω)†Ξ(iω) − I‖_F` against `tol`.
pub fn is_inner(g: &LinearPassiveModel, omega: f64, tol: f64) -> Result<Check> {
    let exceptional = exceptional_frequencies(g)?;
    if near_exceptional(omega, &exceptional) {
        let w = exceptional
            .iter()
            .copied()
            .min_by(|a, b| (a - omega).abs().total_cmp(&(b - omega).abs()))
            .unwrap_or(omega);
        return Err(Error::SpectrumProximity { omega, eigenvalue: -w });
    }
    let xi = transfer_eval(g, c64(0.0, omega))?;
    is_unitary(&xi, tol)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HurwitzReport {
    pub pass: bool,
    /// Largest real part over the spectrum; `−∞` for an empty matrix.
    pub abscissa: f64,
}

/// Passes when the spectral abscissa is below `−tol`.
pub fn is_hurwitz(a: &CMatrix, tol: f64) -> Result<HurwitzReport> {
    ensure_square(a)?;
    let abscissa = eigenvalues(a)?.iter().map(|z| z.re).fold(f64::neg_infinity(), f64::max);
    Ok(HurwitzReport { pass: abscissa < -tol, abscissa })
}

/// Imaginary-axis sample points `iω`, `POINTS_PER_DECADE` per decade for
/// `|ω|` in `band`, both signs, skipping the exceptional frequencies.
pub fn axis_grid(g: &LinearPassiveModel, band: (f64, f64)) -> Result<Vec<C64>> {
    let exceptional = exceptional_frequencies(g)?;
    let mut out = Vec::new();
    for w in log_frequencies(band, POINTS_PER_DECADE)? {
        for omega in [w, -w] {
            if !near_exceptional(omega, &exceptional) {
                out.push(c64(0.0, omega));
            }
        }
    }
    Ok(out)
}

/// Logarithmically spaced positive frequencies across `band`.
pub fn log_frequencies(band: (f64, f64), per_decade: usize) -> Result<Vec<f64>> {
    let (lo, hi) = band;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || per_decade < 2 {
        return Err(Error::OutOfRange(format!("frequency band [{lo}, {hi}]")));
    }
    let decades = hi.log10() - lo.log10();
    let count = ((decades * (per_decade - 1) as f64).round() as usize).max(1) + 1;
    let step = decades / (count - 1) as f64;
    Ok((0..count).map(|k| 10f64.powf(lo.log10() + step * k as f64)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LosslessReport {
    pub pass: bool,
    pub hurwitz: HurwitzReport,
    /// `max λ_max(Ξ†Ξ) − 1` over the samples.
    pub gain_excess: f64,
}

impl LosslessReport {
    /// Single defect figure: positive abscissa or gain excess, whichever is worse.
    pub fn defect(&self) -> f64 {
        self.gain_excess.max(self.hurwitz.abscissa).max(0.0)
    }
}

/// Hurwitz `A` and `Ξ†Ξ ⪯ I + tol` at every sample in the closed right half-plane.
pub fn is_lossless(g: &LinearPassiveModel, sample_grid: &[C64], tol: f64) -> Result<LosslessReport> {
    if let Some(s) = sample_grid.iter().find(|s| s.re < 0.0) {
        return Err(Error::OutOfRange(format!("sample point {} + {}i lies in the left half-plane", s.re, s.im)));
    }
    let hurwitz = is_hurwitz(&dynamics_matrix(g), tol)?;
    let mut gain_excess = f64::neg_infinity();
    for &s in sample_grid {
        let sigma = max_singular_value(&transfer_eval(g, s)?);
        gain_excess = gain_excess.max(sigma * sigma - 1.0);
    }
    Ok(LosslessReport { pass: hurwitz.pass && gain_excess <= tol, hurwitz, gain_excess })
}
