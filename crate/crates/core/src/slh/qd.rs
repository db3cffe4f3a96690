//! Cavity QED mode driving a quantum-dot qubit that acts as a terminal load.
//!
//! The open-loop network is the parallel sum of a two-port cavity (ports 0, 1)
//! and a one-port dot (port 2). Cavity output 0 drives the dot input 2, and
//! cavity output 1 is reflected back into cavity input 1. Input 0 and output 2
//! remain external.

use alloc::vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{assimilate, feedback_reduce, parallel_sum, ModelMatrix, PortConnection, SLHModel};
use crate::error::Result;
use crate::opalg::{c64, embed, identity, CMatrix, HilbertSpec, OperatorExpr, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QdParameters {
    pub r: C64,
    pub t: C64,
    pub t_prime: C64,
    pub r_prime: C64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub kappa: f64,
    pub omega0: f64,
    pub omega_prime: f64,
    pub phi: f64,
    pub cavity_dim: usize,
}

impl Default for QdParameters {
    fn default() -> Self {
        QdParameters {
            r: c64(0.6, 0.0),
            t: c64(0.0, 0.8),
            t_prime: c64(0.0, 0.8),
            r_prime: c64(0.6, 0.0),
            gamma_plus: 1.0,
            gamma_minus: 0.5,
            kappa: 0.8,
            omega0: 0.3,
            omega_prime: 0.7,
            phi: 0.4,
            cavity_dim: 6,
        }
    }
}

/// Closed-loop coefficients: `S`, `L = l_a a + l_sigma σ`, and
/// `K = k_number a†a + k_dot σ†σ + k_cross σ†a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QdClosedLoop {
    pub s: C64,
    pub l_a: C64,
    pub l_sigma: C64,
    pub k_number: C64,
    pub k_dot: C64,
    pub k_cross: C64,
}

impl QdParameters {
    pub fn space(&self) -> Result<HilbertSpec> {
        HilbertSpec::new([("a", self.cavity_dim), ("q", 2)])
    }

    pub fn cavity(&self, space: &HilbertSpec) -> Result<SLHModel> {
        let s = [[self.r, self.t_prime], [self.t, self.r_prime]];
        let s: vec::Vec<vec::Vec<OperatorExpr>> =
            s.iter().map(|row| row.iter().map(|&z| OperatorExpr::Scalar(z)).collect()).collect();
        SLHModel::from_exprs(
            space.clone(),
            &s,
            &[
                OperatorExpr::a("a").scaled(c64(self.gamma_plus.sqrt(), 0.0)),
                OperatorExpr::a("a").scaled(c64(self.gamma_minus.sqrt(), 0.0)),
            ],
            &OperatorExpr::number("a").scaled(c64(self.omega0, 0.0)),
        )
    }

    pub fn dot(&self, space: &HilbertSpec) -> Result<SLHModel> {
        let number = OperatorExpr::Product(vec![OperatorExpr::sigma("q").dagger(), OperatorExpr::sigma("q")]);
        SLHModel::from_exprs(
            space.clone(),
            &[vec![OperatorExpr::Scalar(c64(self.phi.cos(), self.phi.sin()))]],
            &[OperatorExpr::sigma("q").scaled(c64(self.kappa.sqrt(), 0.0))],
            &number.scaled(c64(self.omega_prime, 0.0)),
        )
    }

    pub fn open_loop(&self) -> Result<SLHModel> {
        let space = self.space()?;
        parallel_sum(&[self.cavity(&space)?, self.dot(&space)?], &space)
    }

    pub fn connections() -> [PortConnection; 2] {
        [PortConnection::new(0, 2), PortConnection::new(1, 1)]
    }

    pub fn closed_loop(&self) -> Result<ModelMatrix> {
        let v = assimilate(&self.open_loop()?);
        feedback_reduce(&v, &Self::connections(), &identity(2))
    }

    pub fn closed_loop_coefficients(&self) -> QdClosedLoop {
        let one = c64(1.0, 0.0);
        let phase = c64(self.phi.cos(), self.phi.sin());
        let (gp, gm) = (self.gamma_plus.sqrt(), self.gamma_minus.sqrt());
        let loop_gain = one / (one - self.r_prime);
        let l_a = phase * (gp + self.t_prime * gm * loop_gain);
        QdClosedLoop {
            s: phase * (self.r + self.t * self.t_prime * loop_gain),
            l_a,
            l_sigma: c64(self.kappa.sqrt(), 0.0),
            k_number: -c64(0.5 * (self.gamma_plus + self.gamma_minus), self.omega0)
                - gm * (gp * self.t_prime + gm * self.r_prime) * loop_gain,
            k_dot: -c64(0.5 * self.kappa, self.omega_prime),
            k_cross: -(self.kappa.sqrt() * l_a),
        }
    }

    /// `(S, L, K)` assembled as matrices from [`Self::closed_loop_coefficients`].
    pub fn closed_loop_operators(&self) -> Result<(CMatrix, CMatrix, CMatrix)> {
        let space = self.space()?;
        let c = self.closed_loop_coefficients();
        let a = embed(&OperatorExpr::a("a"), &space)?;
        let sigma = embed(&OperatorExpr::sigma("q"), &space)?;
        let d = space.total_dim();
        let s = identity(d) * c.s;
        let l = &a * c.l_a + &sigma * c.l_sigma;
        let k = a.adjoint() * &a * c.k_number + sigma.adjoint() * &sigma * c.k_dot + sigma.adjoint() * &a * c.k_cross;
        Ok((s, l, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::frobenius;

    #[test]
    fn reduction_reproduces_closed_form() {
        let p = QdParameters::default();
        let v = p.closed_loop().unwrap();
        assert_eq!(v.ports(), 1);
        let (s, l, k) = p.closed_loop_operators().unwrap();
        assert!(frobenius(&(v.block(1, 1) - s)) < 1e-12);
        assert!(frobenius(&(v.block(1, 0) - l)) < 1e-12);
        assert!(frobenius(&(v.block(0, 0) - k)) < 1e-12);
        assert!(v.defects().max() < 1e-9);
    }

    #[test]
    fn open_loop_model_matrix_top_row() {
        let p = QdParameters::default();
        let space = p.space().unwrap();
        let v = assimilate(&p.open_loop().unwrap());
        let a = embed(&OperatorExpr::a("a"), &space).unwrap();
        let sigma = embed(&OperatorExpr::sigma("q"), &space).unwrap();
        let (gp, gm) = (p.gamma_plus.sqrt(), p.gamma_minus.sqrt());
        let v01 = a.adjoint() * -(p.r * gp + p.t * gm);
        let v02 = a.adjoint() * -(p.t_prime * gp + p.r_prime * gm);
        let v03 = sigma.adjoint() * -(c64(p.phi.cos(), p.phi.sin()) * p.kappa.sqrt());
        assert!(frobenius(&(v.block(0, 1) - v01)) < 1e-13);
        assert!(frobenius(&(v.block(0, 2) - v02)) < 1e-13);
        assert!(frobenius(&(v.block(0, 3) - v03)) < 1e-13);
        let k0 = a.adjoint() * &a * -c64(0.5 * (p.gamma_plus + p.gamma_minus), p.omega0)
            + sigma.adjoint() * &sigma * -c64(0.5 * p.kappa, p.omega_prime);
        assert!(frobenius(&(v.block(0, 0) - k0)) < 1e-13);
    }
}
