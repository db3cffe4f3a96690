//! The operations behind each subcommand, returning data rather than text.

use std::io::Write;

use serde::{Deserialize, Serialize};
use slhnet_core::chainscat::{
    chain_cascade, chain_inverse, chain_of_transfer, flat_grid, flat_unitarity, is_flat_lossless, left_coprime_factors,
    BlockMatrix2x2, MatrixFunction,
};
use slhnet_core::delaynet::{cascade_with_delay, DelayElement};
use slhnet_core::linpass::{
    axis_grid, dynamics_matrix, is_hurwitz, is_inner, is_lossless, transfer_eval, LinearPassiveModel,
    StateSpaceRealization, DEFAULT_BAND,
};
use slhnet_core::opalg::{c64, identity, is_unitary};
use slhnet_core::slh::{assimilate, feedback_reduce, parallel_sum, SLHModel};
use slhnet_core::termination::{hm_realization, internal_stability, LoadModel};
use slhnet_core::{CMatrix, Error as CoreError};

use crate::error::{CliError, CliResult};
use crate::network::{self, from_cmatrix, to_cmatrix};
use crate::schema::{Matrix, ModelSpec, NetworkDescription, SpaceEntry};

pub const DEFAULT_TOL: f64 = slhnet_core::DEFAULT_TOL;

// ---------------------------------------------------------------- compose

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Defects {
    pub damping: f64,
    pub cross: f64,
    pub unitarity: f64,
}

/// Closed-loop `(S, L, H)` with `S` as an `nd x nd` matrix and `L` as `nd x d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComposeOutput {
    pub spaces: Vec<SpaceEntry>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub s: Matrix,
    pub l: Matrix,
    pub h: Matrix,
    pub defects: Defects,
}

impl ComposeOutput {
    pub fn model(&self) -> CliResult<SLHModel> {
        let space = slhnet_core::opalg::HilbertSpec::new(self.spaces.iter().map(|s| (s.label.clone(), s.dim)))?;
        Ok(SLHModel::new(space, to_cmatrix(&self.s), to_cmatrix(&self.l), to_cmatrix(&self.h))?)
    }
}

/// Parallel sum of every component followed by reduction of every connection.
pub fn compose(desc: &NetworkDescription, tol: f64) -> CliResult<ComposeOutput> {
    let space = network::space(desc)?;
    let models = (0..desc.components.len()).map(|i| network::slh_model(desc, i, &space)).collect::<CliResult<Vec<_>>>()?;
    let open = parallel_sum(&models, &space)?;
    let conns = network::connections(desc)?;
    let v = feedback_reduce(&assimilate(&open), &conns, &identity(conns.len()))?;
    let d = v.validate(tol)?;
    let closed = v.to_slh(tol)?;
    let (inputs, outputs) = desc.external_ports();
    Ok(ComposeOutput {
        spaces: desc.spaces.clone(),
        inputs,
        outputs,
        s: from_cmatrix(closed.s()),
        l: from_cmatrix(closed.l()),
        h: from_cmatrix(closed.h()),
        defects: Defects { damping: d.damping, cross: d.cross, unitarity: d.unitarity },
    })
}

// ---------------------------------------------------------------- sweeps

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Scale {
    Lin,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub omega_min: f64,
    pub omega_max: f64,
    pub count: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn frequencies(&self) -> CliResult<Vec<f64>> {
        let (a, b, n) = (self.omega_min, self.omega_max, self.count);
        if n == 0 || !(a.is_finite() && b.is_finite()) || a > b {
            return Err(CliError::Usage(format!("bad frequency range [{a}, {b}] with {n} point(s)")));
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        let step = |k: usize| k as f64 / (n - 1) as f64;
        match self.scale {
            Scale::Lin => Ok((0..n).map(|k| a + (b - a) * step(k)).collect()),
            Scale::Log if a > 0.0 => Ok((0..n).map(|k| a * (b / a).powf(step(k))).collect()),
            Scale::Log => Err(CliError::Usage("a log sweep needs 0 < omega-min".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub omega: f64,
    /// One matrix per named quantity, absent when the row is flagged.
    pub values: Option<Vec<CMatrix>>,
    pub defect: Option<f64>,
    pub status: String,
}

/// Matrices sampled along `s = iω`, with a defect column per row.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub names: Vec<String>,
    pub shapes: Vec<(usize, usize)>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["omega".to_string()];
        for (name, &(r, c)) in self.names.iter().zip(&self.shapes) {
            for i in 0..r {
                for j in 0..c {
                    h.push(format!("{name}_re_{i}_{j}"));
                    h.push(format!("{name}_im_{i}_{j}"));
                }
            }
        }
        h.push("defect".into());
        h.push("status".into());
        h
    }

    pub fn write_csv<W: Write>(&self, w: W) -> CliResult<()> {
        let mut out = csv::Writer::from_writer(w);
        let header = self.header();
        out.write_record(&header).map_err(csv_error)?;
        let blank = header.len() - 3;
        for row in &self.rows {
            let mut rec = vec![cell(row.omega)];
            match &row.values {
                Some(ms) => {
                    for m in ms {
                        for i in 0..m.nrows() {
                            for j in 0..m.ncols() {
                                rec.push(cell(m[(i, j)].re));
                                rec.push(cell(m[(i, j)].im));
                            }
                        }
                    }
                }
                None => rec.extend(std::iter::repeat_n(String::new(), blank)),
            }
            rec.push(row.defect.map_or(String::new(), cell));
            rec.push(row.status.clone());
            out.write_record(&rec).map_err(csv_error)?;
        }
        out.flush().map_err(|e| CliError::io("output", e))
    }
}

/// Shortest text that reads back to the same `f64`, with `.` as the decimal point.
fn cell(x: f64) -> String {
    format!("{x:?}")
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::io("output", std::io::Error::other(e))
}

fn flagged(omega: f64, status: &str) -> SweepRow {
    SweepRow { omega, values: None, defect: None, status: status.into() }
}

fn status_of(e: &CoreError) -> Option<&'static str> {
    match e {
        CoreError::SpectrumProximity { .. } => Some("exceptional"),
        CoreError::Pole { .. } => Some("pole"),
        CoreError::Singular { .. } => Some("singular"),
        _ => None,
    }
}

/// `Ξ(iω)` with its unitarity defect. Frequencies next to the spectrum of
/// `−Ω` are flagged rather than evaluated.
pub fn tf(g: &LinearPassiveModel, sweep: &SweepSpec, tol: f64) -> CliResult<SweepResult> {
    let mut rows = Vec::new();
    for w in sweep.frequencies()? {
        let row = match is_inner(g, w, tol).and_then(|c| Ok((c, transfer_eval(g, c64(0.0, w))?))) {
            Ok((check, xi)) => SweepRow { omega: w, values: Some(vec![xi]), defect: Some(check.defect), status: "ok".into() },
            Err(e) => flagged(w, status_of(&e).ok_or(CliError::Core(e))?),
        };
        rows.push(row);
    }
    Ok(SweepResult { names: vec!["xi".into()], shapes: vec![(g.ports(), g.ports())], rows })
}

/// The chain function of the linear components of `desc`, cascaded in the
/// order listed. Consecutive components joined by a connection with a
/// `delay` get a line of that length between them.
pub fn chain_function(desc: &NetworkDescription, partition: Option<&str>) -> CliResult<(MatrixFunction, usize, Vec<usize>)> {
    let linear: Vec<usize> =
        (0..desc.components.len()).filter(|&i| matches!(desc.components[i].model, ModelSpec::Linear { .. })).collect();
    if linear.is_empty() {
        return Err(CliError::Usage("the description has no linear component".into()));
    }
    if partition.is_some() && linear.len() > 1 {
        return Err(CliError::Usage("--partition applies to a single component; use the partitions list instead".into()));
    }
    let mut parts = Vec::new();
    let mut n = None;
    for (k, &i) in linear.iter().enumerate() {
        let p = network::partition(desc, i, partition)?;
        if *n.get_or_insert(p.multiplicity()) != p.multiplicity() {
            return Err(CliError::Usage("cascaded components need leads of equal multiplicity".into()));
        }
        let g = chain_of_transfer(&network::linear_model(desc, i)?, &p)?;
        if k > 0 {
            let tau = line_delay(desc, linear[k - 1], i);
            if tau > 0.0 {
                let prev = parts.pop().expect("previous factor");
                parts.push(cascade_with_delay(&prev, &DelayElement::new(tau)?, &g)?);
                continue;
            }
        }
        parts.push(g);
    }
    Ok((chain_cascade(parts)?, n.expect("at least one component"), linear))
}

fn line_delay(desc: &NetworkDescription, a: usize, b: usize) -> f64 {
    let (na, nb) = (&desc.components[a].name, &desc.components[b].name);
    let owner = |port: &str| port.split('.').next().unwrap_or("").to_string();
    desc.connections
        .iter()
        .filter(|c| {
            let (f, t) = (owner(&c.from), owner(&c.to));
            (&f == na && &t == nb) || (&f == nb && &t == na)
        })
        .find_map(|c| c.delay)
        .unwrap_or(0.0)
}

/// `Γ(iω)` of the cascade and the composite scattering matrix recovered from
/// it, with the ♭-unitarity defect. A single device also gets its left
/// coprime factors `Υ_Y`, `Υ_X`.
pub fn chain(desc: &NetworkDescription, partition: Option<&str>, sweep: &SweepSpec) -> CliResult<SweepResult> {
    let (gamma, n, linear) = chain_function(desc, partition)?;
    let factors = match linear[..] {
        [i] => Some(left_coprime_factors(&network::linear_model(desc, i)?, &network::partition(desc, i, partition)?)?),
        _ => None,
    };
    let mut names = vec!["gamma".to_string(), "xi".to_string()];
    if factors.is_some() {
        names.extend(["upsilon_y".to_string(), "upsilon_x".to_string()]);
    }
    let mut rows = Vec::new();
    for w in sweep.frequencies()? {
        let s = c64(0.0, w);
        let eval = || -> Result<(Vec<CMatrix>, f64), CoreError> {
            let g = gamma.eval(s)?;
            let xi = chain_inverse(&BlockMatrix2x2::halves(&g)?)?.to_matrix();
            let f = flat_unitarity(&g, n, f64::INFINITY)?;
            let mut vals = vec![g, xi];
            if let Some((uy, ux)) = &factors {
                vals.push(uy.eval(s)?);
                vals.push(ux.eval(s)?);
            }
            Ok((vals, f.isometry.max(f.coisometry)))
        };
        rows.push(match eval() {
            Ok((vals, defect)) => SweepRow { omega: w, values: Some(vals), defect: Some(defect), status: "ok".into() },
            Err(e) => flagged(w, status_of(&e).ok_or(CliError::Core(e))?),
        });
    }
    let shapes = vec![(2 * n, 2 * n); names.len()];
    Ok(SweepResult { names, shapes, rows })
}

// ---------------------------------------------------------------- check

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub kind: String,
    pub band: [f64; 2],
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    /// Largest violation; for `hurwitz` the spectral abscissa.
    pub defect: f64,
    pub grid: GridInfo,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckFlags {
    pub inner: bool,
    pub lossless: bool,
    pub hurwitz: bool,
    pub flat_lossless: bool,
}

/// `default`, or `log:MIN:MAX` for another positive band.
pub fn parse_band(grid: Option<&str>) -> CliResult<(f64, f64)> {
    match grid {
        None | Some("default") => Ok(DEFAULT_BAND),
        Some(g) => {
            let parts: Vec<&str> = g.split(':').collect();
            let bad = || CliError::Usage(format!("grid '{g}' is neither 'default' nor 'log:MIN:MAX'"));
            let ["log", lo, hi] = parts[..] else { return Err(bad()) };
            let (lo, hi): (f64, f64) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
            if !(lo > 0.0 && hi > lo) {
                return Err(bad());
            }
            Ok((lo, hi))
        }
    }
}

/// Runs the requested predicates. With no flag set, every predicate that
/// applies to the model runs; `flat_lossless` needs an even channel count.
pub fn check(
    desc: &NetworkDescription,
    component: Option<&str>,
    flags: CheckFlags,
    grid: Option<&str>,
    partition: Option<&str>,
    tol: f64,
) -> CliResult<Vec<CheckReport>> {
    let idx = network::select_linear(desc, component)?;
    let g = network::linear_model(desc, idx)?;
    let band = parse_band(grid)?;
    let all = flags == CheckFlags::default();
    let flags = if all {
        CheckFlags { inner: true, lossless: true, hurwitz: true, flat_lossless: g.ports() % 2 == 0 }
    } else {
        flags
    };
    let axis = axis_grid(&g, band)?;
    let axis_info = GridInfo { kind: "axis".into(), band: [band.0, band.1], points: axis.len() };
    let mut out = Vec::new();
    if flags.inner {
        let mut worst = 0.0f64;
        for s in &axis {
            worst = worst.max(is_inner(&g, s.im, tol)?.defect);
        }
        out.push(CheckReport { check: "inner".into(), pass: worst <= tol, defect: worst, grid: axis_info.clone() });
    }
    if flags.lossless {
        let r = is_lossless(&g, &axis, tol)?;
        out.push(CheckReport { check: "lossless".into(), pass: r.pass, defect: r.defect(), grid: axis_info.clone() });
    }
    if flags.hurwitz {
        let r = is_hurwitz(&dynamics_matrix(&g), tol)?;
        let none = GridInfo { kind: "none".into(), band: [0.0, 0.0], points: 0 };
        out.push(CheckReport { check: "hurwitz".into(), pass: r.pass, defect: r.abscissa, grid: none });
    }
    if flags.flat_lossless {
        if g.ports() % 2 != 0 {
            return Err(CliError::Usage(format!("flat_lossless needs two equal leads; the model has {} channel(s)", g.ports())));
        }
        let p = network::partition(desc, idx, partition)?;
        let grid = flat_grid(&axis);
        let r = is_flat_lossless(&chain_of_transfer(&g, &p)?, &grid, p.multiplicity(), tol)?;
        let info = GridInfo { kind: "axis+interior".into(), band: [band.0, band.1], points: grid.len() };
        out.push(CheckReport { check: "flat_lossless".into(), pass: r.pass, defect: r.defect(), grid: info });
    }
    Ok(out)
}

// ---------------------------------------------------------------- terminate

/// A load `Δ`. Leave `a`, `b`, `c` empty for a static load `Δ = d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub a: Matrix,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub b: Matrix,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub c: Matrix,
    pub d: Matrix,
}

impl LoadSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Schema(vec![crate::error::SchemaIssue {
                path: Some("load".into()),
                line: Some(e.line()),
                column: Some(e.column()),
                message: e.to_string(),
            }])
        })
    }

    pub fn to_load(&self) -> CliResult<LoadModel> {
        let d = to_cmatrix(&self.d);
        if self.a.is_empty() {
            return Ok(LoadModel::static_load(d)?);
        }
        let r = StateSpaceRealization::new(to_cmatrix(&self.a), to_cmatrix(&self.b), to_cmatrix(&self.c), d)?;
        Ok(LoadModel::new(r)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TerminateOutput {
    pub plant_states: usize,
    pub load_states: usize,
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub d: Matrix,
    pub e: Matrix,
    pub cross_check: f64,
    pub stable: bool,
    pub abscissa: Option<f64>,
}

/// Realization of the terminated device and its internal stability.
pub fn terminate(
    desc: &NetworkDescription,
    component: Option<&str>,
    partition: Option<&str>,
    load: &LoadSpec,
    tol: f64,
) -> CliResult<TerminateOutput> {
    let idx = network::select_linear(desc, component)?;
    let g = network::linear_model(desc, idx)?;
    let p = network::partition(desc, idx, partition)?;
    let cl = hm_realization(&g, &p, &load.to_load()?)?;
    let st = internal_stability(&cl, tol)?;
    let r = &cl.realization;
    Ok(TerminateOutput {
        plant_states: cl.plant_states,
        load_states: cl.load_states,
        a: from_cmatrix(&r.a),
        b: from_cmatrix(&r.b),
        c: from_cmatrix(&r.c),
        d: from_cmatrix(&r.d),
        e: from_cmatrix(&cl.e),
        cross_check: cl.cross_check,
        stable: st.pass,
        abscissa: st.abscissa.is_finite().then_some(st.abscissa),
    })
}

/// Unitarity defect of a sampled scattering matrix, used by report writers.
pub fn unitarity_defect(m: &CMatrix) -> CliResult<f64> {
    Ok(is_unitary(m, f64::INFINITY)?.defect)
}
