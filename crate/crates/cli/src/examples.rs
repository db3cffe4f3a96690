//! Bundled example networks and their reference values.
//!
//! Reference values are evaluated here from closed forms, never through the
//! core evaluation routines they are meant to check.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::{Path, PathBuf};

use slhnet_core::C64 as Z;
use serde_json::{json, Value};
use slhnet_core::slh::qd::QdParameters;

use crate::error::{CliError, CliResult};
use crate::schema::{serialize_network, Component, Connection, Expr, Lead, Matrix, ModelSpec, NetworkDescription, Partition, SpaceEntry};

pub const EXAMPLES: [&str; 6] = ["cavity", "two-lead", "worked", "qd", "trapped", "series"];

pub mod params {
    pub const CAVITY: (f64, f64, f64) = (1.0, 0.5, 0.3);
    pub const TWO_LEAD: (f64, f64, f64) = (1.0, 0.5, 0.2);
    pub const WORKED: (f64, f64) = (1.0, 0.5);
    pub const TRAPPED: (f64, f64) = (1.0, 1e-6);
}

/// The description and the expected values for a bundled example.
pub fn example(name: &str) -> CliResult<(NetworkDescription, Value)> {
    match name {
        "cavity" => Ok(cavity()),
        "two-lead" => Ok(two_lead()),
        "worked" => Ok(worked()),
        "qd" => Ok(qd()),
        "trapped" => Ok(trapped()),
        "series" => Ok(series()),
        _ => Err(CliError::Usage(format!("unknown example '{name}'; known: {}", EXAMPLES.join(", ")))),
    }
}

/// Writes `<name>.json` and `<name>.expected.json` into `dir`.
pub fn write_example(name: &str, dir: &Path) -> CliResult<Vec<PathBuf>> {
    let (desc, expected) = example(name)?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display().to_string(), e))?;
    let net = dir.join(format!("{name}.json"));
    let exp = dir.join(format!("{name}.expected.json"));
    let expected = serde_json::to_string_pretty(&expected).expect("json value") + "\n";
    for (path, text) in [(&net, serialize_network(&desc)), (&exp, expected)] {
        std::fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))?;
    }
    Ok(vec![net, exp])
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn z(re: f64, im: f64) -> Z {
    Z::new(re, im)
}

fn num(v: Z) -> [f64; 2] {
    [v.re, v.im]
}

fn real(rows: &[&[f64]]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| [x, 0.0]).collect()).collect()
}

fn mat(rows: &[&[Z]]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| num(x)).collect()).collect()
}

fn lead(name: &str, channels: usize) -> Lead {
    Lead { name: name.into(), channels }
}

fn linear(name: &str, leads: Vec<Lead>, s: Matrix, c: Matrix, omega: Matrix) -> Component {
    Component { name: name.into(), leads, model: ModelSpec::Linear { s, c, omega } }
}

fn connect(from: &str, to: &str, delay: Option<f64>) -> Connection {
    Connection { from: from.into(), to: to.into(), delay }
}

fn scalar(v: Z) -> Expr {
    Expr::Scalar { value: num(v) }
}

fn scaled(by: f64, of: Expr) -> Expr {
    Expr::Scale { by: [by, 0.0], of: Box::new(of) }
}

fn cavity() -> (NetworkDescription, Value) {
    let (gamma, omega, phi) = params::CAVITY;
    let phase = Z::from_polar(1.0, phi);
    let desc = NetworkDescription {
        spaces: vec![],
        components: vec![linear(
            "cavity",
            vec![lead("port", 1)],
            mat(&[&[phase]]),
            real(&[&[gamma.sqrt()]]),
            real(&[&[omega]]),
        )],
        connections: vec![],
        partitions: vec![],
    };
    let samples: Vec<Value> = linspace(-5.0, 5.0, 11)
        .into_iter()
        .map(|w| {
            let s = z(0.0, w);
            let xi = phase * (s + z(-gamma / 2.0, omega)) / (s + z(gamma / 2.0, omega));
            json!({ "omega": w, "xi": mat(&[&[xi]]) })
        })
        .collect();
    let expected = json!({
        "formula": "xi(s) = exp(i phi) (s + i omega - gamma/2) / (s + i omega + gamma/2)",
        "parameters": { "gamma": gamma, "omega": omega, "phi": phi },
        "samples": samples,
    });
    (desc, expected)
}

/// Two-input damped oscillator with the off-diagonal sign that follows from
/// `S − C(s − A)⁻¹C†S`.
pub fn two_lead_closed_form(g1: f64, g2: f64, w0: f64, s: Z) -> [[Z; 2]; 2] {
    let den = s + z((g1 + g2) / 2.0, w0);
    let off = -z((g1 * g2).sqrt(), 0.0) / den;
    [[(s + z((g2 - g1) / 2.0, w0)) / den, off], [off, (s + z((g1 - g2) / 2.0, w0)) / den]]
}

fn two_lead() -> (NetworkDescription, Value) {
    let (g1, g2, w0) = params::TWO_LEAD;
    let desc = NetworkDescription {
        spaces: vec![],
        components: vec![linear(
            "oscillator",
            vec![lead("left", 1), lead("right", 1)],
            real(&[&[1.0, 0.0], &[0.0, 1.0]]),
            real(&[&[g1.sqrt()], &[g2.sqrt()]]),
            real(&[&[w0]]),
        )],
        connections: vec![],
        partitions: vec![Partition { component: "oscillator".into(), y: vec!["left".into()], x: vec!["right".into()] }],
    };
    let samples: Vec<Value> = linspace(-5.0, 5.0, 11)
        .into_iter()
        .map(|w| {
            let m = two_lead_closed_form(g1, g2, w0, z(0.0, w));
            json!({ "omega": w, "xi": mat(&[&m[0], &m[1]]) })
        })
        .collect();
    let expected = json!({
        "parameters": { "gamma1": g1, "gamma2": g2, "omega0": w0 },
        "samples": samples,
    });
    (desc, expected)
}

/// `Θ(s) = (s − γ + iω₀)/(s + γ + iω₀)`
pub fn worked_theta(gamma: f64, w0: f64, s: Z) -> Z {
    (s + z(-gamma, w0)) / (s + z(gamma, w0))
}

/// `(Γ, Υ_Y, Υ_X)` of the worked example at `s`.
pub fn worked_closed_form(gamma: f64, w0: f64, s: Z) -> [[[Z; 2]; 2]; 3] {
    let t = worked_theta(gamma, w0, s);
    let (r2, r) = (2f64.sqrt(), FRAC_1_SQRT_2);
    let (zero, one) = (z(0.0, 0.0), z(1.0, 0.0));
    [
        [[z(-r2, 0.0), one], [-1.0 / t, r2 / t]],
        [[one, -t * r], [zero, t * r]],
        [[z(-r, 0.0), zero], [z(-r, 0.0), one]],
    ]
}

fn worked() -> (NetworkDescription, Value) {
    let (gamma, w0) = params::WORKED;
    let r = FRAC_1_SQRT_2;
    let desc = NetworkDescription {
        spaces: vec![],
        components: vec![linear(
            "device",
            vec![lead("y", 1), lead("x", 1)],
            real(&[&[r, -r], &[r, r]]),
            real(&[&[gamma.sqrt()], &[gamma.sqrt()]]),
            real(&[&[w0]]),
        )],
        connections: vec![],
        partitions: vec![Partition { component: "device".into(), y: vec!["y".into()], x: vec!["x".into()] }],
    };
    let samples: Vec<Value> = linspace(-5.0, 5.0, 20)
        .into_iter()
        .map(|w| {
            let s = z(0.0, w);
            let [g, uy, ux] = worked_closed_form(gamma, w0, s);
            json!({
                "omega": w,
                "theta": num(worked_theta(gamma, w0, s)),
                "gamma": mat(&[&g[0], &g[1]]),
                "upsilon_y": mat(&[&uy[0], &uy[1]]),
                "upsilon_x": mat(&[&ux[0], &ux[1]]),
            })
        })
        .collect();
    let expected = json!({
        "parameters": { "gamma": gamma, "omega0": w0 },
        "samples": samples,
    });
    (desc, expected)
}

fn qd() -> (NetworkDescription, Value) {
    let p = QdParameters::default();
    let a = || Expr::Annihilation { subsystem: "a".into() };
    let sigma = || Expr::Lowering { subsystem: "q".into() };
    let cavity = Component {
        name: "cavity".into(),
        leads: vec![lead("left", 1), lead("right", 1)],
        model: ModelSpec::Slh {
            s: vec![vec![scalar(p.r), scalar(p.t_prime)], vec![scalar(p.t), scalar(p.r_prime)]],
            l: vec![scaled(p.gamma_plus.sqrt(), a()), scaled(p.gamma_minus.sqrt(), a())],
            h: scaled(p.omega0, Expr::Number { subsystem: "a".into() }),
        },
    };
    let dot = Component {
        name: "dot".into(),
        leads: vec![lead("main", 1)],
        model: ModelSpec::Slh {
            s: vec![vec![scalar(Z::from_polar(1.0, p.phi))]],
            l: vec![scaled(p.kappa.sqrt(), sigma())],
            h: scaled(p.omega_prime, Expr::Product { factors: vec![Expr::Adjoint { of: Box::new(sigma()) }, sigma()] }),
        },
    };
    let desc = NetworkDescription {
        spaces: vec![
            SpaceEntry { label: "a".into(), dim: p.cavity_dim },
            SpaceEntry { label: "q".into(), dim: 2 },
        ],
        components: vec![cavity, dot],
        connections: vec![
            connect("cavity.left.out.0", "dot.main.in.0", None),
            connect("cavity.right.out.0", "cavity.right.in.0", None),
        ],
        partitions: vec![],
    };
    let phase = Z::from_polar(1.0, p.phi);
    let one = z(1.0, 0.0);
    let loop_gain = one / (one - p.r_prime);
    let (gp, gm, k) = (p.gamma_plus.sqrt(), p.gamma_minus.sqrt(), p.kappa.sqrt());
    let l_a = phase * (gp + p.t_prime * gm * loop_gain);
    let expected = json!({
        "parameters": {
            "r": num(p.r), "t": num(p.t), "t_prime": num(p.t_prime), "r_prime": num(p.r_prime),
            "gamma_plus": p.gamma_plus, "gamma_minus": p.gamma_minus, "kappa": p.kappa,
            "omega0": p.omega0, "omega_prime": p.omega_prime, "phi": p.phi, "cavity_dim": p.cavity_dim,
        },
        "s": num(phase * (p.r + p.t * p.t_prime * loop_gain)),
        "l": { "a": num(l_a), "sigma": [k, 0.0] },
        "k": {
            "number": num(-z((p.gamma_plus + p.gamma_minus) / 2.0, p.omega0) - gm * (gp * p.t_prime + gm * p.r_prime) * loop_gain),
            "dot": num(-z(p.kappa / 2.0, p.omega_prime)),
            "cross": num(-(k * l_a)),
        },
    });
    (desc, expected)
}

fn trapped_scatterer(gamma: f64, tau: f64) -> Matrix {
    let (r, t) = ((1.0 - 2.0 * gamma * tau).sqrt(), (2.0 * gamma * tau).sqrt());
    real(&[&[r, -t], &[t, r]])
}

/// Limit of the trapped-mode pair as the line shrinks.
pub fn trapped_limit(ga: f64, gb: f64, s: Z) -> [[Z; 2]; 2] {
    let den = s + (ga + gb) / 2.0;
    let off = z((ga * gb).sqrt(), 0.0) / den;
    [[(s + (gb - ga) / 2.0) / den, off], [off, (s + (ga - gb) / 2.0) / den]]
}

fn trapped() -> (NetworkDescription, Value) {
    let (gamma, tau) = params::TRAPPED;
    let mirror = |name: &str| linear(name, vec![lead("left", 1), lead("right", 1)], trapped_scatterer(gamma, tau), vec![vec![], vec![]], vec![]);
    let desc = NetworkDescription {
        spaces: vec![],
        components: vec![mirror("A"), mirror("B")],
        connections: vec![connect("A.right.out.0", "B.left.in.0", Some(tau)), connect("B.left.out.0", "A.right.in.0", Some(tau))],
        partitions: vec![],
    };
    let at_one = trapped_limit(gamma, gamma, z(1.0, 0.0));
    let expected = json!({
        "parameters": { "gamma_a": gamma, "gamma_b": gamma, "tau": tau },
        "limit": {
            "model": { "s": real(&[&[1.0, 0.0], &[0.0, 1.0]]), "c": real(&[&[gamma.sqrt()], &[-gamma.sqrt()]]), "omega": real(&[&[0.0]]) },
            "at": [1.0, 0.0],
            "value": mat(&[&at_one[0], &at_one[1]]),
        },
    });
    (desc, expected)
}

fn series() -> (NetworkDescription, Value) {
    let one_port = |name: &str, sub: &str, gamma: f64, w: f64| Component {
        name: name.into(),
        leads: vec![lead("port", 1)],
        model: ModelSpec::Slh {
            s: vec![vec![scalar(z(1.0, 0.0))]],
            l: vec![scaled(gamma.sqrt(), Expr::Annihilation { subsystem: sub.into() })],
            h: scaled(w, Expr::Number { subsystem: sub.into() }),
        },
    };
    let desc = NetworkDescription {
        spaces: vec![SpaceEntry { label: "a".into(), dim: 3 }, SpaceEntry { label: "b".into(), dim: 3 }],
        components: vec![one_port("g1", "a", 1.0, 0.4), one_port("g2", "b", 0.6, -0.2)],
        connections: vec![connect("g1.port.out.0", "g2.port.in.0", None)],
        partitions: vec![],
    };
    let expected = json!({ "oracle": "series_product", "order": ["g2", "g1"] });
    (desc, expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_validates() {
        for name in EXAMPLES {
            let (desc, _) = example(name).unwrap();
            assert!(desc.validate().is_empty(), "{name}: {:?}", desc.validate());
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(example("laser"), Err(CliError::Usage(_))));
    }

    #[test]
    fn trapped_limit_at_one() {
        let m = trapped_limit(1.0, 1.0, z(1.0, 0.0));
        for row in m {
            for v in row {
                assert!((v - 0.5).norm() < 1e-15);
            }
        }
    }
}
