use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use slhnet::commands::{self, CheckFlags, LoadSpec, Scale, SweepSpec};
use slhnet::examples::{self, EXAMPLES};
use slhnet::network::{self, to_cmatrix};
use slhnet::{parse_network, serialize_network, CliError, NetworkDescription};
use slhnet_core::delaynet::{scattering_cascade_delay, DelayElement};
use slhnet_core::opalg::{c64, frobenius, HilbertSpec};
use slhnet_core::slh::series_product;
use slhnet_core::{CMatrix, C64};

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn fixture(name: &str) -> NetworkDescription {
    parse_network(&std::fs::read_to_string(fixture_path(&format!("{name}.json"))).unwrap()).unwrap()
}

fn expected(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(fixture_path(&format!("{name}.expected.json"))).unwrap()).unwrap()
}

fn matrix(v: &Value) -> CMatrix {
    to_cmatrix(&serde_json::from_value(v.clone()).unwrap())
}

fn complex(v: &Value) -> C64 {
    c64(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn lin(a: f64, b: f64, count: usize) -> SweepSpec {
    SweepSpec { omega_min: a, omega_max: b, count, scale: Scale::Lin }
}

fn slhnet(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_slhnet")).args(args).output().unwrap()
}

#[test]
fn fixtures_round_trip_byte_for_byte() {
    for name in EXAMPLES {
        let text = std::fs::read_to_string(fixture_path(&format!("{name}.json"))).unwrap();
        assert_eq!(serialize_network(&parse_network(&text).unwrap()), text, "{name}");
    }
}

#[test]
fn bundled_fixtures_match_the_generator() {
    let dir = tempfile::tempdir().unwrap();
    for name in EXAMPLES {
        examples::write_example(name, dir.path()).unwrap();
        for file in [format!("{name}.json"), format!("{name}.expected.json")] {
            let fresh = std::fs::read_to_string(dir.path().join(&file)).unwrap();
            assert_eq!(fresh, std::fs::read_to_string(fixture_path(&file)).unwrap(), "{file}");
        }
    }
}

#[test]
fn qd_fixture_is_the_cavity_dot_network() {
    let desc = fixture("qd");
    assert_eq!(desc.components.iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["cavity", "dot"]);
    let conns = network::connections(&desc).unwrap();
    assert_eq!(conns, slhnet_core::slh::qd::QdParameters::connections());
    assert_eq!(desc.external_ports(), (vec!["cavity.left.in.0".to_string()], vec!["dot.main.out.0".to_string()]));
}

#[test]
fn example_models_match_their_closed_forms() {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let g = network::linear_model(&fixture("worked"), 0).unwrap();
    let (gamma, w0) = examples::params::WORKED;
    assert_eq!(g.s(), &CMatrix::from_row_slice(2, 2, &[c64(r, 0.0), c64(-r, 0.0), c64(r, 0.0), c64(r, 0.0)]));
    assert_eq!(g.c(), &CMatrix::from_row_slice(2, 1, &[c64(gamma.sqrt(), 0.0); 2]));
    assert_eq!(g.omega()[(0, 0)], c64(w0, 0.0));

    let g = network::linear_model(&fixture("cavity"), 0).unwrap();
    let (gamma, omega, phi) = examples::params::CAVITY;
    assert_eq!(g.s()[(0, 0)], C64::from_polar(1.0, phi));
    assert_eq!(g.c()[(0, 0)], c64(gamma.sqrt(), 0.0));
    assert_eq!(g.omega()[(0, 0)], c64(omega, 0.0));
}

#[test]
fn cavity_sweep_is_unitary() {
    let g = network::linear_model(&fixture("cavity"), 0).unwrap();
    let out = commands::tf(&g, &lin(-5.0, 5.0, 101), 1e-9).unwrap();
    assert_eq!(out.rows.len(), 101);
    let omega = examples::params::CAVITY.1;
    for row in &out.rows {
        if (row.omega + omega).abs() < 1e-9 {
            assert_eq!(row.status, "exceptional");
        } else {
            assert_eq!(row.status, "ok");
            assert!(row.defect.unwrap() <= 1e-12, "{row:?}");
        }
    }
}

#[test]
fn tf_sweeps_match_closed_forms() {
    for name in ["cavity", "two-lead"] {
        let g = network::linear_model(&fixture(name), 0).unwrap();
        let samples = expected(name)["samples"].as_array().unwrap().clone();
        let out = commands::tf(&g, &lin(-5.0, 5.0, samples.len()), 1e-9).unwrap();
        for (row, sample) in out.rows.iter().zip(&samples) {
            assert_eq!(row.omega, sample["omega"].as_f64().unwrap());
            let diff = &row.values.as_ref().unwrap()[0] - matrix(&sample["xi"]);
            assert!(frobenius(&diff) <= 1e-12, "{name} at {}", row.omega);
        }
    }
}

#[test]
fn single_point_sweep_has_one_row() {
    let g = network::linear_model(&fixture("cavity"), 0).unwrap();
    let out = commands::tf(&g, &lin(0.3, 0.3, 1), 1e-9).unwrap();
    let mut csv = Vec::new();
    out.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert_eq!(text.lines().next().unwrap(), "omega,xi_re_0_0,xi_im_0_0,defect,status");
    assert!(text.lines().nth(1).unwrap().starts_with("0.3,"));
}

#[test]
fn exceptional_frequency_is_flagged() {
    // exceptional at ω = −0.5 for Ω = 0.5
    let g = network::linear_model(&fixture("cavity"), 0).unwrap();
    let out = commands::tf(&g, &lin(-1.0, 0.0, 3), 1e-9).unwrap();
    assert_eq!(out.rows[1].status, "exceptional");
    assert!(out.rows[1].values.is_none());
    let mut csv = Vec::new();
    out.write_csv(&mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().nth(2).unwrap(), "-0.5,,,,exceptional");
}

#[test]
fn csv_is_stable_across_runs() {
    let g = network::linear_model(&fixture("two-lead"), 0).unwrap();
    let spec = SweepSpec { omega_min: 0.01, omega_max: 100.0, count: 41, scale: Scale::Log };
    let render = || {
        let mut buf = Vec::new();
        commands::tf(&g, &spec, 1e-9).unwrap().write_csv(&mut buf).unwrap();
        buf
    };
    let first = render();
    assert_eq!(first, render());
    let text = String::from_utf8(first).unwrap();
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 1 + 8 + 2);
        for cell in &cells[..cells.len() - 1] {
            cell.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn log_sweep_needs_positive_start() {
    let spec = SweepSpec { omega_min: 0.0, omega_max: 1.0, count: 5, scale: Scale::Log };
    assert!(matches!(spec.frequencies(), Err(CliError::Usage(_))));
}

#[test]
fn worked_chain_matches_closed_forms() {
    let samples = expected("worked")["samples"].as_array().unwrap().clone();
    let out = commands::chain(&fixture("worked"), None, &lin(-5.0, 5.0, 20)).unwrap();
    assert_eq!(out.names, ["gamma", "xi", "upsilon_y", "upsilon_x"]);
    for (row, sample) in out.rows.iter().zip(&samples) {
        let vals = row.values.as_ref().unwrap();
        for (k, key) in [(0, "gamma"), (2, "upsilon_y"), (3, "upsilon_x")] {
            assert!(frobenius(&(&vals[k] - matrix(&sample[key]))) <= 1e-12, "{key} at {}", row.omega);
        }
        assert!(row.defect.unwrap() <= 1e-10);
    }
}

#[test]
fn trapped_chain_matches_scattering_route() {
    let desc = fixture("trapped");
    let tau = examples::params::TRAPPED.1;
    let sa = network::linear_model(&desc, 0).unwrap().s().clone();
    let sb = network::linear_model(&desc, 1).unwrap().s().clone();
    let out = commands::chain(&desc, None, &lin(-3.0, 3.0, 13)).unwrap();
    assert_eq!(out.names, ["gamma", "xi"]);
    for row in &out.rows {
        let direct = scattering_cascade_delay(&sa, &sb, &DelayElement::new(tau).unwrap(), c64(0.0, row.omega)).unwrap();
        assert!(frobenius(&(&row.values.as_ref().unwrap()[1] - direct)) <= 1e-9);
    }
}

#[test]
fn trapped_expected_values() {
    let e = expected("trapped");
    assert_eq!(complex(&e["limit"]["at"]), c64(1.0, 0.0));
    let want = CMatrix::from_element(2, 2, c64(0.5, 0.0));
    assert!(frobenius(&(matrix(&e["limit"]["value"]) - want)) < 1e-15);
}

#[test]
fn check_verdicts() {
    let all = CheckFlags::default();
    let cavity = commands::check(&fixture("cavity"), None, all, None, None, 1e-9).unwrap();
    assert_eq!(cavity.iter().map(|r| r.check.as_str()).collect::<Vec<_>>(), ["inner", "lossless", "hurwitz"]);
    assert!(cavity.iter().all(|r| r.pass));

    let two = commands::check(&fixture("two-lead"), None, all, None, None, 1e-9).unwrap();
    assert_eq!(two.len(), 4);
    assert!(two.iter().all(|r| r.pass));

    let flat = CheckFlags { flat_lossless: true, ..all };
    let worked = commands::check(&fixture("worked"), None, flat, Some("log:0.1:10"), None, 1e-9).unwrap();
    assert!(worked[0].pass && worked[0].check == "flat_lossless");
    assert_eq!(worked[0].grid.band, [0.1, 10.0]);

    assert!(matches!(commands::check(&fixture("cavity"), None, flat, None, None, 1e-9), Err(CliError::Usage(_))));
    assert!(matches!(commands::parse_band(Some("lin:1:2")), Err(CliError::Usage(_))));
}

#[test]
fn decoupled_model_is_inner_but_not_hurwitz() {
    let mut desc = fixture("cavity");
    if let slhnet::schema::ModelSpec::Linear { c, .. } = &mut desc.components[0].model {
        c[0][0] = [0.0, 0.0];
    }
    let flags = CheckFlags { inner: true, hurwitz: true, ..CheckFlags::default() };
    let out = commands::check(&desc, None, flags, None, None, 1e-9).unwrap();
    assert!(out[0].pass);
    assert!(!out[1].pass);
    assert_eq!(out[1].defect, 0.0);
}

#[test]
fn compose_series_equals_series_product() {
    let desc = fixture("series");
    let out = commands::compose(&desc, 1e-9).unwrap();
    let space = HilbertSpec::new([("a", 3), ("b", 3)]).unwrap();
    let g1 = network::slh_model(&desc, 0, &space).unwrap();
    let g2 = network::slh_model(&desc, 1, &space).unwrap();
    let want = series_product(&g2, &g1).unwrap();
    let got = out.model().unwrap();
    assert!(frobenius(&(got.s() - want.s())) <= 1e-10);
    assert!(frobenius(&(got.l() - want.l())) <= 1e-10);
    assert!(frobenius(&(got.h() - want.h())) <= 1e-10);
    assert_eq!(out.inputs, ["g1.port.in.0"]);
    assert_eq!(out.outputs, ["g2.port.out.0"]);
}

#[test]
fn compose_without_connections_is_identity() {
    let mut desc = fixture("series");
    desc.components.truncate(1);
    desc.connections.clear();
    let out = commands::compose(&desc, 1e-9).unwrap();
    let space = network::space(&desc).unwrap();
    let g = network::slh_model(&desc, 0, &space).unwrap();
    let got = out.model().unwrap();
    assert_eq!((got.s(), got.l()), (g.s(), g.l()));
    assert!(frobenius(&(got.h() - g.h())) <= 1e-12);
}

#[test]
fn terminate_on_static_load() {
    let load = LoadSpec::parse(r#"{"d": [[[0.5, 0.0]]]}"#).unwrap();
    let out = commands::terminate(&fixture("worked"), None, None, &load, 1e-9).unwrap();
    assert_eq!((out.plant_states, out.load_states), (1, 0));
    assert!(out.cross_check <= 1e-9);
    assert!(out.stable);
}

#[test]
fn schema_errors_are_specific() {
    let Err(CliError::Schema(issues)) = parse_network(r#"{"components": []}"#) else { panic!() };
    assert!(issues[0].message.contains("at least one component"));

    let text = std::fs::read_to_string(fixture_path("qd.json")).unwrap().replace("dot.main.in.0", "dot.side.in.0");
    let Err(CliError::Schema(issues)) = parse_network(&text) else { panic!() };
    assert!(issues.iter().any(|i| i.message.contains("dot.side.in.0")), "{issues:?}");

    let Err(CliError::Schema(issues)) = parse_network("{\n  \"components\": [\n    {\"nme\": 1}\n  ]\n}") else { panic!() };
    assert_eq!(issues[0].line, Some(3));
}

#[test]
fn binary_succeeds_with_zero() {
    let out = slhnet(&["tf", "--input", fixture_path("cavity.json").to_str().unwrap(), "--count", "5"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);
}

#[test]
fn binary_reports_errors_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"components": []}"#).unwrap();
    let out = slhnet(&["compose", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "schema");

    let out = slhnet(&["example", "laser"]);
    assert_eq!(out.status.code(), Some(2));

    let out = slhnet(&["tf", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    serde_json::from_slice::<Value>(&out.stderr).unwrap();

    // a unit-gain self loop cannot be closed
    let loop_net = r#"{
  "components": [
    {
      "name": "c",
      "leads": [{"name": "p", "channels": 2}],
      "model": {
        "type": "slh",
        "s": [[{"op": "identity"}, {"op": "scalar", "value": [0.0, 0.0]}], [{"op": "scalar", "value": [0.0, 0.0]}, {"op": "identity"}]],
        "l": [{"op": "scalar", "value": [0.0, 0.0]}, {"op": "scalar", "value": [0.0, 0.0]}],
        "h": {"op": "scalar", "value": [0.0, 0.0]}
      }
    }
  ],
  "connections": [{"from": "c.p.out.1", "to": "c.p.in.1"}]
}"#;
    let path = dir.path().join("loop.json");
    std::fs::write(&path, loop_net).unwrap();
    let out = slhnet(&["compose", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["sigma_min"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn numerical_failures_exit_with_four() {
    let e = CliError::Core(slhnet_core::Error::Pole { re: 0.0, im: 1.0 });
    assert_eq!(e.exit_code(), 4);
    let e = CliError::Core(slhnet_core::Error::CrossCheck { context: "termination", discrepancy: 1.0 });
    assert_eq!(e.to_json()["error"]["discrepancy"], 1.0);
}
