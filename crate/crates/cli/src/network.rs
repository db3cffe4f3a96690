//! Turning a parsed description into core models.

use slhnet_core::chainscat::LeadPartition;
use slhnet_core::linpass::LinearPassiveModel;
use slhnet_core::opalg::{c64, HilbertSpec, OperatorExpr};
use slhnet_core::slh::{PortConnection, SLHModel};
use slhnet_core::CMatrix;

use crate::error::{CliError, CliResult};
use crate::schema::{Complex, Expr, Matrix, ModelSpec, NetworkDescription};

pub fn to_cmatrix(m: &Matrix) -> CMatrix {
    let cols = m.first().map_or(0, Vec::len);
    CMatrix::from_fn(m.len(), cols, |i, j| c64(m[i][j][0], m[i][j][1]))
}

pub fn from_cmatrix(m: &CMatrix) -> Matrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

fn scalar(z: Complex) -> slhnet_core::C64 {
    c64(z[0], z[1])
}

pub fn to_operator(e: &Expr) -> OperatorExpr {
    match e {
        Expr::Annihilation { subsystem } => OperatorExpr::a(subsystem),
        Expr::Creation { subsystem } => OperatorExpr::adag(subsystem),
        Expr::Lowering { subsystem } => OperatorExpr::sigma(subsystem),
        Expr::PauliZ { subsystem } => OperatorExpr::PauliZ(subsystem.clone()),
        Expr::Number { subsystem } => OperatorExpr::number(subsystem),
        Expr::Identity => OperatorExpr::Identity,
        Expr::Scalar { value } => OperatorExpr::Scalar(scalar(*value)),
        Expr::Explicit { subsystem, matrix } => OperatorExpr::Explicit { subsystem: subsystem.clone(), matrix: to_cmatrix(matrix) },
        Expr::Sum { terms } => OperatorExpr::Sum(terms.iter().map(to_operator).collect()),
        Expr::Product { factors } => OperatorExpr::Product(factors.iter().map(to_operator).collect()),
        Expr::Adjoint { of } => to_operator(of).dagger(),
        Expr::Scale { by, of } => to_operator(of).scaled(scalar(*by)),
    }
}

pub fn space(desc: &NetworkDescription) -> CliResult<HilbertSpec> {
    if desc.spaces.is_empty() {
        return Ok(HilbertSpec::trivial());
    }
    Ok(HilbertSpec::new(desc.spaces.iter().map(|s| (s.label.clone(), s.dim)))?)
}

pub fn slh_model(desc: &NetworkDescription, component: usize, space: &HilbertSpec) -> CliResult<SLHModel> {
    let c = &desc.components[component];
    match &c.model {
        ModelSpec::Slh { s, l, h } => {
            let s: Vec<Vec<OperatorExpr>> = s.iter().map(|row| row.iter().map(to_operator).collect()).collect();
            let l: Vec<OperatorExpr> = l.iter().map(to_operator).collect();
            Ok(SLHModel::from_exprs(space.clone(), &s, &l, &to_operator(h))?)
        }
        ModelSpec::Linear { .. } => Err(CliError::Usage(format!("component '{}' is linear, not an operator-level model", c.name))),
    }
}

pub fn linear_model(desc: &NetworkDescription, component: usize) -> CliResult<LinearPassiveModel> {
    let c = &desc.components[component];
    match &c.model {
        ModelSpec::Linear { s, c: cm, omega } => Ok(LinearPassiveModel::new(to_cmatrix(s), to_cmatrix(cm), to_cmatrix(omega))?),
        ModelSpec::Slh { .. } => Err(CliError::Usage(format!("component '{}' is operator-level, not a linear model", c.name))),
    }
}

/// The named linear component, or the only one present.
pub fn select_linear(desc: &NetworkDescription, name: Option<&str>) -> CliResult<usize> {
    if let Some(name) = name {
        return desc.component_index(name).ok_or_else(|| CliError::schema("--component", format!("unknown component '{name}'")));
    }
    let linear: Vec<usize> =
        (0..desc.components.len()).filter(|&i| matches!(desc.components[i].model, ModelSpec::Linear { .. })).collect();
    match linear[..] {
        [i] => Ok(i),
        [] => Err(CliError::Usage("the description has no linear component".into())),
        _ => Err(CliError::Usage("several linear components: choose one with --component".into())),
    }
}

/// Lead partition of a component: from `--partition Y/X` if given, else from
/// the description, else first half of the channels against the second.
///
/// `Y` and `X` are comma-separated lead names or channel indices.
pub fn partition(desc: &NetworkDescription, component: usize, spec: Option<&str>) -> CliResult<LeadPartition> {
    let ports = desc.components[component].model.ports();
    if let Some(spec) = spec {
        let (y, x) = spec.split_once('/').ok_or_else(|| CliError::schema("--partition", "expected Y/X"))?;
        let side = |list: &str| -> CliResult<Vec<usize>> {
            let mut out = Vec::new();
            for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                match tok.parse::<usize>() {
                    Ok(k) => out.push(k),
                    Err(_) => out.extend(desc.lead_ports(component, &[tok.to_string()]).map_err(|e| CliError::schema("--partition", e))?),
                }
            }
            Ok(out)
        };
        return Ok(LeadPartition::new(side(y)?, side(x)?, ports)?);
    }
    let name = &desc.components[component].name;
    if let Some(p) = desc.partitions.iter().find(|p| &p.component == name) {
        let y = desc.lead_ports(component, &p.y).map_err(|e| CliError::schema("partitions", e))?;
        let x = desc.lead_ports(component, &p.x).map_err(|e| CliError::schema("partitions", e))?;
        return Ok(LeadPartition::new(y, x, ports)?);
    }
    Ok(LeadPartition::halves(ports)?)
}

/// Offsets of each component's channels in the parallel sum.
pub fn offsets(desc: &NetworkDescription) -> Vec<usize> {
    let mut acc = 0;
    desc.components
        .iter()
        .map(|c| {
            let o = acc;
            acc += c.model.ports();
            o
        })
        .collect()
}

/// Connection list in global channel indices.
pub fn connections(desc: &NetworkDescription) -> CliResult<Vec<PortConnection>> {
    let off = offsets(desc);
    desc.connections
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let from = desc.resolve_port(&c.from).map_err(|e| CliError::schema(format!("connections[{i}].from"), e))?;
            let to = desc.resolve_port(&c.to).map_err(|e| CliError::schema(format!("connections[{i}].to"), e))?;
            Ok(PortConnection::new(off[from.component] + from.port, off[to.component] + to.port))
        })
        .collect()
}
