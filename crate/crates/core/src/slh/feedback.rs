use alloc::format;
use alloc::vec::Vec;

use super::ModelMatrix;
use crate::error::{Error, Result};
use crate::opalg::{
    expand_indices, identity, is_unitary, kron, min_singular_value, select, solve, CMatrix, DEFAULT_TOL,
};

/// Smallest admissible singular value of the loop operator `1 − V_sr T`.
pub const WELL_POSED_TOL: f64 = 1e-10;

/// Output port `source_output` is fed into input port `target_input`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PortConnection {
    pub source_output: usize,
    pub target_input: usize,
}

impl PortConnection {
    pub fn new(source_output: usize, target_input: usize) -> Self {
        PortConnection { source_output, target_input }
    }
}

fn check_connections(ports: usize, connections: &[PortConnection]) -> Result<()> {
    for (i, c) in connections.iter().enumerate() {
        if c.source_output >= ports || c.target_input >= ports {
            return Err(Error::InvalidConnection(format!(
                "connection {} -> {} refers to a port outside 0..{ports}",
                c.source_output, c.target_input
            )));
        }
        for prev in &connections[..i] {
            if prev.source_output == c.source_output {
                return Err(Error::InvalidConnection(format!("output {} is fed twice", c.source_output)));
            }
            if prev.target_input == c.target_input {
                return Err(Error::InvalidConnection(format!("input {} is driven twice", c.target_input)));
            }
        }
    }
    Ok(())
}

/// Eliminates the internal lines listed in `connections`.
///
/// The `k`-th connection pairs fed output `s_k` with fed input `r_k`. `t` is a
/// `k x k` unitary on the channel space mapping fed outputs to fed inputs,
/// `t[(i, j)]` routing `s_j` into `r_i`; the identity is plain adjacency. The
/// surviving ports keep their original relative order.
pub fn feedback_reduce(v: &ModelMatrix, connections: &[PortConnection], t: &CMatrix) -> Result<ModelMatrix> {
    let n = v.ports();
    let d = v.dim();
    let k = connections.len();
    check_connections(n, connections)?;
    if t.shape() != (k, k) {
        return Err(Error::DimensionMismatch {
            context: "interconnection matrix T",
            expected: (k, k),
            found: t.shape(),
        });
    }
    let u = is_unitary(t, DEFAULT_TOL)?;
    if !u.pass {
        return Err(Error::NotUnitary { context: "interconnection matrix T", defect: u.defect });
    }
    if k == 0 {
        return Ok(v.clone());
    }

    // block indices into V: 0 is the system, port j sits at 1 + j
    let s_idx: Vec<usize> = connections.iter().map(|c| 1 + c.source_output).collect();
    let r_idx: Vec<usize> = connections.iter().map(|c| 1 + c.target_input).collect();
    let alpha: Vec<usize> = (0..=n).filter(|b| !s_idx.contains(b)).collect();
    let beta: Vec<usize> = (0..=n).filter(|b| !r_idx.contains(b)).collect();

    let (s_rows, r_cols) = (expand_indices(&s_idx, d), expand_indices(&r_idx, d));
    let (a_rows, b_cols) = (expand_indices(&alpha, d), expand_indices(&beta, d));
    let vm = v.matrix();
    let v_ab = select(vm, &a_rows, &b_cols);
    let v_ar = select(vm, &a_rows, &r_cols);
    let v_sr = select(vm, &s_rows, &r_cols);
    let v_sb = select(vm, &s_rows, &b_cols);

    let t_op = kron(t, &identity(d));
    let loop_op = identity(k * d) - &v_sr * &t_op;
    let sigma_min = min_singular_value(&loop_op);
    if !(sigma_min > WELL_POSED_TOL) {
        return Err(Error::IllPosed { sigma_min });
    }
    let closed = solve(&loop_op, &v_sb, "feedback loop operator")?;
    let reduced = v_ab + v_ar * t_op * closed;
    Ok(ModelMatrix::from_parts(v.space().clone(), n - k, reduced))
}
