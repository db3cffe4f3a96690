use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use super::{chain, BlockMatrix2x2};
use crate::error::{Error, Result};
use crate::linpass::StateSpaceRealization;
use crate::opalg::{c64, identity, inverse, block_diag, CMatrix, C64};

/// Largest `|Re s|·τ` for which a delay factor is evaluated.
pub const DELAY_EXPONENT_LIMIT: f64 = 700.0;

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Constant(CMatrix),
    StateSpace(StateSpaceRealization),
    /// `diag(e^{−sτ} I, e^{sτ} I)` with `I` of size `multiplicity`.
    Delay { tau: f64, multiplicity: usize },
    Product(Vec<MatrixFunction>),
    Sum(Vec<MatrixFunction>),
    Inverse(Box<MatrixFunction>),
    /// CHAIN of the inner function split into `split x split` leading blocks.
    Chain { inner: Box<MatrixFunction>, split: usize },
    /// `(Γ11 Δ + Γ12)(Γ21 Δ + Γ22)⁻¹`.
    Hm { gamma: Box<MatrixFunction>, load: Box<MatrixFunction> },
}

/// A matrix-valued function of the Laplace variable built from realizations,
/// constants, delays and algebraic combinations. Shapes are checked when the
/// expression is built.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFunction {
    node: Node,
    rows: usize,
    cols: usize,
}

fn mismatch(context: &'static str, expected: (usize, usize), found: (usize, usize)) -> Error {
    Error::DimensionMismatch { context, expected, found }
}

impl MatrixFunction {
    pub fn constant(m: CMatrix) -> Self {
        let (rows, cols) = m.shape();
        MatrixFunction { node: Node::Constant(m), rows, cols }
    }

    pub fn state_space(r: StateSpaceRealization) -> Self {
        let (rows, cols) = (r.outputs(), r.inputs());
        MatrixFunction { node: Node::StateSpace(r), rows, cols }
    }

    pub fn delay(tau: f64, multiplicity: usize) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::OutOfRange(format!("delay {tau} must be finite and non-negative")));
        }
        let n = 2 * multiplicity;
        Ok(MatrixFunction { node: Node::Delay { tau, multiplicity }, rows: n, cols: n })
    }

    /// Pointwise product `f₁ f₂ ⋯ f_k`.
    pub fn product(factors: Vec<MatrixFunction>) -> Result<Self> {
        let first = factors.first().ok_or_else(|| Error::InvalidModel("empty product".into()))?;
        let (rows, mut cols) = (first.rows, first.cols);
        for f in &factors[1..] {
            if f.rows != cols {
                return Err(mismatch("product of matrix functions", (cols, f.cols), (f.rows, f.cols)));
            }
            cols = f.cols;
        }
        Ok(MatrixFunction { node: Node::Product(factors), rows, cols })
    }

    pub fn sum(terms: Vec<MatrixFunction>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::InvalidModel("empty sum".into()))?;
        let shape = first.shape();
        if let Some(t) = terms.iter().find(|t| t.shape() != shape) {
            return Err(mismatch("sum of matrix functions", shape, t.shape()));
        }
        Ok(MatrixFunction { node: Node::Sum(terms), rows: shape.0, cols: shape.1 })
    }

    pub fn inverse(f: MatrixFunction) -> Result<Self> {
        if f.rows != f.cols {
            return Err(Error::NotSquare { rows: f.rows, cols: f.cols });
        }
        let n = f.rows;
        Ok(MatrixFunction { node: Node::Inverse(Box::new(f)), rows: n, cols: n })
    }

    /// `CHAIN` applied pointwise; `split` is the size of the leading block.
    pub fn chain(inner: MatrixFunction, split: usize) -> Result<Self> {
        let (r, c) = inner.shape();
        if split == 0 || split > r || split > c || r - split != split || c - split != split {
            return Err(mismatch("chain split of a matrix function", (2 * split, 2 * split), (r, c)));
        }
        Ok(MatrixFunction { node: Node::Chain { inner: Box::new(inner), split }, rows: r, cols: c })
    }

    /// Homographic transformation of a `2n x 2n` chain function by an `n x n` load.
    pub fn hm(gamma: MatrixFunction, load: MatrixFunction) -> Result<Self> {
        let (r, c) = gamma.shape();
        let n = load.rows;
        if load.rows != load.cols || r != 2 * n || c != 2 * n {
            return Err(mismatch("homographic transformation", (2 * n, 2 * n), (r, c)));
        }
        Ok(MatrixFunction { node: Node::Hm { gamma: Box::new(gamma), load: Box::new(load) }, rows: n, cols: n })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn eval(&self, s: C64) -> Result<CMatrix> {
        match &self.node {
            Node::Constant(m) => Ok(m.clone()),
            Node::StateSpace(r) => r.eval(s),
            Node::Delay { tau, multiplicity } => {
                let (theta, theta_inv) = delay_factors(*tau, s)?;
                let id = identity(*multiplicity);
                Ok(block_diag(&[&(&id * theta), &(&id * theta_inv)]))
            }
            Node::Product(fs) => {
                let mut acc = fs[0].eval(s)?;
                for f in &fs[1..] {
                    acc *= f.eval(s)?;
                }
                Ok(acc)
            }
            Node::Sum(fs) => {
                let mut acc = fs[0].eval(s)?;
                for f in &fs[1..] {
                    acc += f.eval(s)?;
                }
                Ok(acc)
            }
            Node::Inverse(f) => inverse(&f.eval(s)?, "inverted matrix function"),
            Node::Chain { inner, split } => {
                let k = BlockMatrix2x2::split(&inner.eval(s)?, *split, *split)?;
                Ok(chain(&k)?.to_matrix())
            }
            Node::Hm { gamma, load } => {
                let n = load.rows;
                let g = BlockMatrix2x2::split(&gamma.eval(s)?, n, n)?;
                let d = load.eval(s)?;
                let den = inverse(&(&g.m21 * &d + &g.m22), "homographic denominator")?;
                Ok((&g.m11 * &d + &g.m12) * den)
            }
        }
    }

    /// State matrices of every realization leaf, in expression order.
    pub fn state_matrices(&self) -> Vec<&CMatrix> {
        let mut out = Vec::new();
        self.collect_states(&mut out);
        out
    }

    fn collect_states<'a>(&'a self, out: &mut Vec<&'a CMatrix>) {
        match &self.node {
            Node::Constant(_) | Node::Delay { .. } => {}
            Node::StateSpace(r) => {
                if r.states() > 0 {
                    out.push(&r.a);
                }
            }
            Node::Product(fs) | Node::Sum(fs) => fs.iter().for_each(|f| f.collect_states(out)),
            Node::Inverse(f) => f.collect_states(out),
            Node::Chain { inner, .. } => inner.collect_states(out),
            Node::Hm { gamma, load } => {
                gamma.collect_states(out);
                load.collect_states(out);
            }
        }
    }
}

/// `(e^{−sτ}, e^{sτ})`, refusing exponents beyond [`DELAY_EXPONENT_LIMIT`].
pub(crate) fn delay_factors(tau: f64, s: C64) -> Result<(C64, C64)> {
    if s.re.abs() * tau > DELAY_EXPONENT_LIMIT {
        return Err(Error::OutOfRange(format!("|Re s|·τ = {} exceeds {DELAY_EXPONENT_LIMIT}", s.re.abs() * tau)));
    }
    let x = s * tau;
    let theta = c64(Float::exp(-x.re), 0.0) * c64(x.im.cos(), -x.im.sin());
    let theta_inv = c64(Float::exp(x.re), 0.0) * c64(x.im.cos(), x.im.sin());
    Ok((theta, theta_inv))
}
