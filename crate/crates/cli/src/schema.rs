//! Network description files.
//!
//! A description is one JSON document. Complex numbers are `[re, im]`,
//! matrices are row-major nested arrays, and operators are expression objects
//! tagged by `"op"`. Ports are addressed as `component.lead.direction.index`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult, SchemaIssue};

pub type Complex = [f64; 2];
pub type Matrix = Vec<Vec<Complex>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDescription {
    #[serde(default)]
    pub spaces: Vec<SpaceEntry>,
    pub components: Vec<Component>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub connections: Vec<Connection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub partitions: Vec<Partition>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceEntry {
    pub label: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub name: String,
    pub leads: Vec<Lead>,
    pub model: ModelSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lead {
    pub name: String,
    pub channels: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// Operator-level `(S, L, H)`; `s` is a matrix of operators over the channels.
    Slh { s: Vec<Vec<Expr>>, l: Vec<Expr>, h: Expr },
    /// Linear passive `(S, C, Ω)`.
    Linear { s: Matrix, c: Matrix, omega: Matrix },
}

impl ModelSpec {
    pub fn ports(&self) -> usize {
        match self {
            ModelSpec::Slh { s, .. } => s.len(),
            ModelSpec::Linear { s, .. } => s.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Expr {
    Annihilation { subsystem: String },
    Creation { subsystem: String },
    /// `|0⟩⟨1|` on a two-level subsystem.
    Lowering { subsystem: String },
    PauliZ { subsystem: String },
    Number { subsystem: String },
    Identity,
    Scalar { value: Complex },
    Explicit { subsystem: String, matrix: Matrix },
    Sum { terms: Vec<Expr> },
    Product { factors: Vec<Expr> },
    Adjoint { of: Box<Expr> },
    Scale { by: Complex, of: Box<Expr> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Connection {
    pub from: String,
    pub to: String,
    /// Line delay in seconds; only chain cascades use it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Partition {
    pub component: String,
    pub y: Vec<String>,
    pub x: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
}

/// A resolved port name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortRef {
    pub component: usize,
    /// Channel index within the component.
    pub port: usize,
    pub direction: Direction,
}

impl NetworkDescription {
    pub fn component_index(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c.name == name)
    }

    /// Resolves `component.lead.direction.index`.
    pub fn resolve_port(&self, name: &str) -> Result<PortRef, String> {
        let parts: Vec<&str> = name.split('.').collect();
        let [comp, lead, dir, idx] = parts[..] else {
            return Err(format!("port '{name}' is not of the form component.lead.direction.index"));
        };
        let component = self.component_index(comp).ok_or_else(|| format!("port '{name}': unknown component '{comp}'"))?;
        let c = &self.components[component];
        let mut offset = 0;
        let mut found = None;
        for l in &c.leads {
            if l.name == lead {
                found = Some((offset, l.channels));
                break;
            }
            offset += l.channels;
        }
        let (offset, channels) = found.ok_or_else(|| format!("port '{name}': component '{comp}' has no lead '{lead}'"))?;
        let direction = match dir {
            "in" => Direction::In,
            "out" => Direction::Out,
            _ => return Err(format!("port '{name}': direction must be 'in' or 'out'")),
        };
        let index: usize = idx.parse().map_err(|_| format!("port '{name}': index '{idx}' is not a number"))?;
        if index >= channels {
            return Err(format!("port '{name}': lead '{lead}' has {channels} channel(s)"));
        }
        Ok(PortRef { component, port: offset + index, direction })
    }

    /// Channel indices of the named leads of a component, in lead order given.
    pub fn lead_ports(&self, component: usize, leads: &[String]) -> Result<Vec<usize>, String> {
        let c = &self.components[component];
        let mut out = Vec::new();
        for name in leads {
            let mut offset = 0;
            let mut hit = false;
            for l in &c.leads {
                if &l.name == name {
                    out.extend(offset..offset + l.channels);
                    hit = true;
                }
                offset += l.channels;
            }
            if !hit {
                return Err(format!("component '{}' has no lead '{name}'", c.name));
            }
        }
        Ok(out)
    }

    /// Every external port name in global order: `(inputs, outputs)` left
    /// unconnected by the connection list.
    pub fn external_ports(&self) -> (Vec<String>, Vec<String>) {
        let used_in: HashSet<&str> = self.connections.iter().map(|c| c.to.as_str()).collect();
        let used_out: HashSet<&str> = self.connections.iter().map(|c| c.from.as_str()).collect();
        let (mut inputs, mut outputs) = (Vec::new(), Vec::new());
        for c in &self.components {
            for l in &c.leads {
                for k in 0..l.channels {
                    let i = format!("{}.{}.in.{k}", c.name, l.name);
                    let o = format!("{}.{}.out.{k}", c.name, l.name);
                    if !used_in.contains(i.as_str()) {
                        inputs.push(i);
                    }
                    if !used_out.contains(o.as_str()) {
                        outputs.push(o);
                    }
                }
            }
        }
        (inputs, outputs)
    }

    pub fn validate(&self) -> Vec<SchemaIssue> {
        let mut issues = Vec::new();
        if self.components.is_empty() {
            issues.push(SchemaIssue::at("components", "at least one component is required"));
        }
        let mut labels = HashSet::new();
        for (i, s) in self.spaces.iter().enumerate() {
            if !labels.insert(&s.label) {
                issues.push(SchemaIssue::at(format!("spaces[{i}].label"), format!("duplicate subsystem '{}'", s.label)));
            }
            if s.dim == 0 {
                issues.push(SchemaIssue::at(format!("spaces[{i}].dim"), "dimension must be positive"));
            }
        }
        let mut names = HashSet::new();
        for (i, c) in self.components.iter().enumerate() {
            let at = |field: &str| format!("components[{i}].{field}");
            if c.name.is_empty() || c.name.contains('.') {
                issues.push(SchemaIssue::at(at("name"), format!("component name '{}' must be non-empty and dot-free", c.name)));
            }
            if !names.insert(&c.name) {
                issues.push(SchemaIssue::at(at("name"), format!("duplicate component '{}'", c.name)));
            }
            let mut leads = HashSet::new();
            for (j, l) in c.leads.iter().enumerate() {
                if l.name.is_empty() || l.name.contains('.') || !leads.insert(&l.name) {
                    issues.push(SchemaIssue::at(at(&format!("leads[{j}]")), format!("lead name '{}' must be unique, non-empty and dot-free", l.name)));
                }
                if l.channels == 0 {
                    issues.push(SchemaIssue::at(at(&format!("leads[{j}].channels")), "a lead needs at least one channel"));
                }
            }
            let channels: usize = c.leads.iter().map(|l| l.channels).sum();
            if channels != c.model.ports() {
                issues.push(SchemaIssue::at(
                    at("model"),
                    format!("leads declare {channels} channel(s) but the model has {} port(s)", c.model.ports()),
                ));
            }
            check_model(&c.model, &at("model"), &mut issues);
        }
        let mut sources = HashSet::new();
        let mut targets = HashSet::new();
        for (i, conn) in self.connections.iter().enumerate() {
            let at = |field: &str| format!("connections[{i}].{field}");
            match self.resolve_port(&conn.from) {
                Ok(p) if p.direction != Direction::Out => issues.push(SchemaIssue::at(at("from"), format!("'{}' is not an output", conn.from))),
                Ok(_) if !sources.insert(&conn.from) => issues.push(SchemaIssue::at(at("from"), format!("output '{}' is connected twice", conn.from))),
                Err(e) => issues.push(SchemaIssue::at(at("from"), e)),
                Ok(_) => {}
            }
            match self.resolve_port(&conn.to) {
                Ok(p) if p.direction != Direction::In => issues.push(SchemaIssue::at(at("to"), format!("'{}' is not an input", conn.to))),
                Ok(_) if !targets.insert(&conn.to) => issues.push(SchemaIssue::at(at("to"), format!("input '{}' is connected twice", conn.to))),
                Err(e) => issues.push(SchemaIssue::at(at("to"), e)),
                Ok(_) => {}
            }
            if let Some(tau) = conn.delay {
                if !(tau.is_finite() && tau >= 0.0) {
                    issues.push(SchemaIssue::at(at("delay"), "delay must be finite and non-negative"));
                }
            }
        }
        let total: usize = self.components.iter().map(|c| c.model.ports()).sum();
        if !self.components.is_empty() && self.connections.len() >= total {
            issues.push(SchemaIssue::at("connections", "no external port would remain after reduction"));
        }
        for (i, p) in self.partitions.iter().enumerate() {
            let at = format!("partitions[{i}]");
            match self.component_index(&p.component) {
                None => issues.push(SchemaIssue::at(&at, format!("unknown component '{}'", p.component))),
                Some(c) => {
                    for leads in [&p.y, &p.x] {
                        if let Err(e) = self.lead_ports(c, leads) {
                            issues.push(SchemaIssue::at(&at, e));
                        }
                    }
                }
            }
        }
        issues
    }
}

fn check_matrix(m: &Matrix, path: &str, issues: &mut Vec<SchemaIssue>) -> Option<(usize, usize)> {
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        issues.push(SchemaIssue::at(path, "rows have different lengths"));
        return None;
    }
    if m.iter().flatten().flatten().any(|x| !x.is_finite()) {
        issues.push(SchemaIssue::at(path, "entries must be finite"));
    }
    Some((m.len(), cols))
}

fn check_model(model: &ModelSpec, path: &str, issues: &mut Vec<SchemaIssue>) {
    match model {
        ModelSpec::Slh { s, l, .. } => {
            let n = s.len();
            if n == 0 {
                issues.push(SchemaIssue::at(format!("{path}.s"), "at least one channel is required"));
            }
            if s.iter().any(|r| r.len() != n) {
                issues.push(SchemaIssue::at(format!("{path}.s"), "scattering matrix must be square"));
            }
            if l.len() != n {
                issues.push(SchemaIssue::at(format!("{path}.l"), format!("expected {n} coupling operator(s), found {}", l.len())));
            }
        }
        ModelSpec::Linear { s, c, omega } => {
            let ss = check_matrix(s, &format!("{path}.s"), issues);
            let cs = check_matrix(c, &format!("{path}.c"), issues);
            let os = check_matrix(omega, &format!("{path}.omega"), issues);
            if let (Some(ss), Some(cs), Some(os)) = (ss, cs, os) {
                let m = os.0;
                if ss.0 == 0 || ss.0 != ss.1 || os.0 != os.1 || cs.0 != ss.0 || cs.1 != m {
                    issues.push(SchemaIssue::at(path, format!("inconsistent shapes S {ss:?}, C {cs:?}, Ω {os:?}")));
                }
            }
        }
    }
}

/// Parses and validates a description.
pub fn parse_network(text: &str) -> CliResult<NetworkDescription> {
    let desc: NetworkDescription = serde_json::from_str(text).map_err(|e| {
        CliError::Schema(vec![SchemaIssue { path: None, line: Some(e.line()), column: Some(e.column()), message: e.to_string() }])
    })?;
    let issues = desc.validate();
    if issues.is_empty() {
        Ok(desc)
    } else {
        Err(CliError::Schema(issues))
    }
}

/// Canonical text form: two-space indented JSON with a trailing newline.
pub fn serialize_network(desc: &NetworkDescription) -> String {
    let mut s = serde_json::to_string_pretty(desc).expect("descriptions always serialize");
    s.push('\n');
    s
}
