#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use slhnet_core::opalg::{c64, identity, CMatrix, HilbertSpec};
use slhnet_core::slh::SLHModel;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn ginibre(rng: &mut StdRng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn unitary(rng: &mut StdRng, n: usize) -> CMatrix {
    if n == 0 {
        return identity(0);
    }
    let qr = ginibre(rng, n, n).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_fn(n, n, |i, j| if i == j { r[(i, i)] / r[(i, i)].norm() } else { c64(0.0, 0.0) });
    q * phases
}

pub fn hermitian(rng: &mut StdRng, n: usize, scale: f64) -> CMatrix {
    let g = ginibre(rng, n, n);
    (&g + g.adjoint()) * c64(0.5 * scale, 0.0)
}

pub fn density(rng: &mut StdRng, n: usize) -> CMatrix {
    let g = ginibre(rng, n, n);
    let p = &g * g.adjoint();
    let tr: f64 = (0..n).map(|i| p[(i, i)].re).sum();
    p * c64(1.0 / tr, 0.0)
}

pub fn small_space(rng: &mut StdRng) -> HilbertSpec {
    let a = rng.random_range(1..=3);
    let b = rng.random_range(1..=3);
    HilbertSpec::new([("a", a), ("b", b)]).unwrap()
}

/// Generic operator-valued SLH model with `ports` channels.
pub fn slh(rng: &mut StdRng, space: &HilbertSpec, ports: usize) -> SLHModel {
    let d = space.total_dim();
    let s = unitary(rng, ports * d);
    let l = ginibre(rng, ports * d, d) * c64(0.7, 0.0);
    let h = hermitian(rng, d, 1.0);
    SLHModel::new(space.clone(), s, l, h).unwrap()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Random passive model with `n` channels and `m` modes.
pub fn passive(rng: &mut StdRng, n: usize, m: usize) -> slhnet_core::linpass::LinearPassiveModel {
    let s = unitary(rng, n);
    let c = ginibre(rng, n, m);
    let omega = hermitian(rng, m, 1.0);
    slhnet_core::linpass::LinearPassiveModel::new(s, c, omega).unwrap()
}

pub fn complex_point(rng: &mut StdRng, re: (f64, f64), im: (f64, f64)) -> slhnet_core::C64 {
    c64(rng.random_range(re.0..re.1), rng.random_range(im.0..im.1))
}
