#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::Rng;
use serde_json::Value;
use slhnet::commands::{self, Scale, SweepSpec};
use slhnet::examples::EXAMPLES;
use slhnet::network::to_cmatrix;
use slhnet::{parse_network, serialize_network};
use slhnet_core::chainscat::{
    chain, chain_inverse, chain_of_transfer, flat_unitarity, left_coprime_factors, BlockMatrix2x2, LeadPartition,
};
use slhnet_core::delaynet::{scattering_cascade_delay, trapped_mode_scatterer, DelayElement};
use slhnet_core::linpass::{
    allpass_eval, dynamics_matrix, exceptional_frequencies, is_hurwitz, transfer_eval, LinearPassiveModel,
    StateSpaceRealization,
};
use slhnet_core::opalg::{
    block_diag, c64, embed, frobenius, hermitian_max_eigenvalue, identity, inverse, is_unitary, min_singular_value, trace,
    CMatrix, OperatorExpr,
};
use slhnet_core::slh::qd::QdParameters;
use slhnet_core::slh::{
    assimilate, feedback_reduce, lindblad_rhs, parallel_sum, redheffer_star, series_product, PortConnection, SLHModel,
    TwoLeadSLH,
};
use slhnet_core::termination::{homographic, hm_realization, internal_stability, terminate_fractional, LoadModel};
use slhnet_core::{Error, C64};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(worst: f64, tol: f64, what: &str) -> Outcome {
    outcome(worst <= tol, format!("{what}: worst {worst:.2e} (limit {tol:.0e})"))
}

fn relative(a: &CMatrix, b: &CMatrix) -> f64 {
    frobenius(&(a - b)) / frobenius(b).max(1.0)
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn cavity_transfer() -> Outcome {
    let mut rng = common::rng(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (gamma, omega, phi): (f64, f64, f64) = (rng.random_range(0.1..5.0), rng.random_range(-5.0..5.0), rng.random_range(-3.2..3.2));
        let s = common::complex_point(&mut rng, (0.0, 5.0), (-10.0, 10.0));
        let phase = C64::from_polar(1.0, phi);
        let g = LinearPassiveModel::new(
            CMatrix::from_element(1, 1, phase),
            CMatrix::from_element(1, 1, c64(gamma.sqrt(), 0.0)),
            CMatrix::from_element(1, 1, c64(omega, 0.0)),
        )
        .unwrap();
        let want = phase * (s + c64(-gamma / 2.0, omega)) / (s + c64(gamma / 2.0, omega));
        worst = worst.max((transfer_eval(&g, s).unwrap()[(0, 0)] - want).norm());
    }
    within(worst, 1e-12, "100 cavities")
}

fn two_input_oscillator() -> Outcome {
    let mut rng = common::rng(2);
    let (mut worst, mut printed) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let (g1, g2, w0): (f64, f64, f64) = (rng.random_range(0.1..5.0), rng.random_range(0.1..5.0), rng.random_range(-5.0..5.0));
        let s = common::complex_point(&mut rng, (0.0, 5.0), (-10.0, 10.0));
        let g = LinearPassiveModel::new(
            identity(2),
            CMatrix::from_row_slice(2, 1, &[c64(g1.sqrt(), 0.0), c64(g2.sqrt(), 0.0)]),
            CMatrix::from_element(1, 1, c64(w0, 0.0)),
        )
        .unwrap();
        let den = s + c64((g1 + g2) / 2.0, w0);
        let off = c64((g1 * g2).sqrt(), 0.0) / den;
        let diag = [(s + c64((g2 - g1) / 2.0, w0)) / den, (s + c64((g1 - g2) / 2.0, w0)) / den];
        let corrected = CMatrix::from_row_slice(2, 2, &[diag[0], -off, -off, diag[1]]);
        let as_printed = CMatrix::from_row_slice(2, 2, &[diag[0], off, off, diag[1]]);
        let xi = transfer_eval(&g, s).unwrap();
        worst = worst.max(frobenius(&(&xi - corrected)));
        printed = printed.max(frobenius(&(&xi - as_printed)));
    }
    let mut o = within(worst, 1e-12, "closed form with off-diagonal sign corrected to -sqrt(g1 g2)");
    o.detail += &format!("; printed +sqrt(g1 g2) form deviates by up to {printed:.2e}");
    o
}

fn off_spectrum(rng: &mut StdRng, exceptional: &[f64]) -> f64 {
    loop {
        let w: f64 = rng.random_range(-10.0..10.0);
        if exceptional.iter().all(|e| (w - e).abs() > 1e-3) {
            return w;
        }
    }
}

fn passive_unitarity() -> Outcome {
    let mut rng = common::rng(3);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (n, m) = (rng.random_range(1..=4), rng.random_range(1..=5));
        let g = common::passive(&mut rng, n, m);
        let exceptional = exceptional_frequencies(&g).unwrap();
        for _ in 0..50 {
            let w = off_spectrum(&mut rng, &exceptional);
            worst = worst.max(is_unitary(&transfer_eval(&g, c64(0.0, w)).unwrap(), f64::INFINITY).unwrap().defect);
        }
    }
    within(worst, 1e-10, "50 models x 50 frequencies")
}

fn allpass_route() -> Outcome {
    let mut rng = common::rng(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (n, m) = (rng.random_range(1..=4), rng.random_range(1..=5));
        let g = common::passive(&mut rng, n, m);
        let s = common::complex_point(&mut rng, (0.05, 5.0), (-10.0, 10.0));
        if let (Ok(a), Ok(b)) = (allpass_eval(&g, s), transfer_eval(&g, s)) {
            worst = worst.max(frobenius(&(a - b)));
        }
    }
    within(worst, 1e-11, "100 models")
}

/// `diag(U₁, U₂) [[cosh R, sinh R], [sinh R, cosh R]] diag(V₁, V₂)`
fn flat_unitary(rng: &mut StdRng, n: usize) -> CMatrix {
    let r: Vec<f64> = (0..n).map(|_| rng.random_range(-1.5..1.5)).collect();
    let diag = |f: fn(f64) -> f64| CMatrix::from_fn(n, n, |i, j| if i == j { c64(f(r[i]), 0.0) } else { c64(0.0, 0.0) });
    let boost = BlockMatrix2x2::new(diag(f64::cosh), diag(f64::sinh), diag(f64::sinh), diag(f64::cosh)).unwrap().to_matrix();
    let u = block_diag(&[&common::unitary(rng, n), &common::unitary(rng, n)]);
    let v = block_diag(&[&common::unitary(rng, n), &common::unitary(rng, n)]);
    u * boost * v
}

fn chain_duality() -> Outcome {
    let mut rng = common::rng(5);
    let (mut flat, mut unit, mut trip, mut blocks) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let k = loop {
            let k = common::unitary(&mut rng, 2 * n);
            if min_singular_value(&k.view((n, 0), (n, n)).into_owned()) > 1e-3 {
                break k;
            }
        };
        let m = chain(&BlockMatrix2x2::halves(&k).unwrap()).unwrap().to_matrix();
        let f = flat_unitarity(&m, n, f64::INFINITY).unwrap();
        flat = flat.max(f.isometry.max(f.coisometry) / frobenius(&m).powi(2).max(1.0));
        let back = chain_inverse(&BlockMatrix2x2::halves(&m).unwrap()).unwrap().to_matrix();
        trip = trip.max(frobenius(&(back - &k)) / frobenius(&m).max(1.0));
    }
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let m = flat_unitary(&mut rng, n);
        let kb = chain_inverse(&BlockMatrix2x2::halves(&m).unwrap()).unwrap();
        let k = kb.to_matrix();
        unit = unit.max(is_unitary(&k, f64::INFINITY).unwrap().defect);
        let again = chain(&BlockMatrix2x2::halves(&k).unwrap()).unwrap().to_matrix();
        trip = trip.max(relative(&again, &m));

        let (k11, k12, k21, k22) = (&kb.m11, &kb.m12, &kb.m21, &kb.m22);
        let inv = inverse(k21, "K21").unwrap();
        let inv_h = inv.adjoint();
        let (k11h, k12h, k22h) = (k11.adjoint(), k12.adjoint(), k22.adjoint());
        let id = identity(n);
        let scale = frobenius(&m).powi(4).max(1.0);
        let b1 = &k12h * k12 - &k12h * k11 * &inv * k22 - &k22h * &inv_h * &k11h * k12
            + &k22h * &inv_h * &k11h * k11 * &inv * k22
            - &k22h * &inv_h * &inv * k22;
        let b2 = &inv_h * &inv - &inv_h * &k11h * k11 * &inv;
        let b3 = &k12h * k11 * &inv - &k22h * &inv_h * &k11h * k11 * &inv + &k22h * &inv_h * &inv;
        let b4 = -(&inv_h * &inv * k22) - &inv_h * &k11h * k12 + &inv_h * &k11h * k11 * &inv * k22;
        let b5 = &k12h * k11 * &inv * k22 + &k22h * k22;
        for r in [frobenius(&(b1 - &id)), frobenius(&(b2 - &id)), frobenius(&b3), frobenius(&b4), frobenius(&b5)] {
            blocks = blocks.max(r / scale);
        }
    }
    outcome(
        flat <= 1e-10 && unit <= 1e-10 && trip <= 1e-11 && blocks <= 1e-10,
        format!(
            "flat-unitarity {flat:.2e}, unitarity {unit:.2e} (limit 1e-10); round trip {trip:.2e} (limit 1e-11); \
             block identities of the inverse chain {blocks:.2e} (limit 1e-10)"
        ),
    )
}

fn worked_model(gamma: f64, w0: f64) -> LinearPassiveModel {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    LinearPassiveModel::new(
        CMatrix::from_row_slice(2, 2, &[c64(r, 0.0), c64(-r, 0.0), c64(r, 0.0), c64(r, 0.0)]),
        CMatrix::from_row_slice(2, 1, &[c64(gamma.sqrt(), 0.0); 2]),
        CMatrix::from_element(1, 1, c64(w0, 0.0)),
    )
    .unwrap()
}

/// `(Γ, Υ_Y, Υ_X)` in closed form, with `Θ = (s − γ + iω₀)/(s + γ + iω₀)`.
fn worked_closed_forms(gamma: f64, w0: f64, s: C64) -> [CMatrix; 3] {
    let t = (s + c64(-gamma, w0)) / (s + c64(gamma, w0));
    let (r2, r) = (2f64.sqrt(), std::f64::consts::FRAC_1_SQRT_2);
    let (zero, one) = (c64(0.0, 0.0), c64(1.0, 0.0));
    [
        CMatrix::from_row_slice(2, 2, &[c64(-r2, 0.0), one, -1.0 / t, r2 / t]),
        CMatrix::from_row_slice(2, 2, &[one, -t * r, zero, t * r]),
        CMatrix::from_row_slice(2, 2, &[c64(-r, 0.0), zero, c64(-r, 0.0), one]),
    ]
}

fn worked_example() -> Outcome {
    let (gamma, w0) = (1.3, 0.5);
    let g = worked_model(gamma, w0);
    let p = LeadPartition::halves(2).unwrap();
    let chain_fn = chain_of_transfer(&g, &p).unwrap();
    let (uy, ux) = left_coprime_factors(&g, &p).unwrap();
    let mut rng = common::rng(6);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let s = common::complex_point(&mut rng, (0.0, 3.0), (-4.0, 4.0));
        let [want, want_uy, want_ux] = worked_closed_forms(gamma, w0, s);
        let got = chain_fn.eval(s).unwrap();
        let (uy_s, ux_s) = (uy.eval(s).unwrap(), ux.eval(s).unwrap());
        let ratio = inverse(&uy_s, "Upsilon_Y").unwrap() * &ux_s;
        for r in [relative(&got, &want), frobenius(&(uy_s - want_uy)), frobenius(&(ux_s - want_ux)), relative(&ratio, &want)] {
            worst = worst.max(r);
        }
    }
    within(worst, 1e-12, "Gamma, Upsilon_Y, Upsilon_X and Upsilon_Y^-1 Upsilon_X at 20 points")
}

fn star_vs_feedback() -> Outcome {
    let mut rng = common::rng(7);
    let (mut worst, mut done, mut skipped) = (0.0f64, 0, 0);
    while done < 30 {
        let space = common::small_space(&mut rng);
        let (ya, xa, xb) = (rng.random_range(1..=2), rng.random_range(1..=2), rng.random_range(1..=2));
        let (na, nb) = (ya + xa, xa + xb);
        let ga = common::slh(&mut rng, &space, na);
        let gb = common::slh(&mut rng, &space, nb);
        let a = TwoLeadSLH::new(ga.clone(), (0..ya).collect(), (ya..na).collect()).unwrap();
        let b = TwoLeadSLH::new(gb.clone(), (0..xa).collect(), (xa..nb).collect()).unwrap();
        let star = match redheffer_star(&a, &b) {
            Ok(s) => s,
            Err(Error::IllPosed { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return outcome(false, format!("star product failed: {e}")),
        };
        let open = parallel_sum(&[ga, gb], &space).unwrap();
        let mut conns = Vec::new();
        for k in 0..xa {
            conns.push(PortConnection::new(ya + k, na + k));
            conns.push(PortConnection::new(na + k, ya + k));
        }
        let reduced = feedback_reduce(&assimilate(&open), &conns, &identity(conns.len())).unwrap().to_slh(1e-9).unwrap();
        for (x, y) in [(star.model.s(), reduced.s()), (star.model.l(), reduced.l()), (star.model.h(), reduced.h())] {
            worst = worst.max(common::max_abs(&(x - y)));
        }
        done += 1;
    }
    let mut o = within(worst, 1e-10, "30 operator-valued pairs, blockwise");
    o.detail += &format!(" ({skipped} ill-posed draws replaced)");
    o
}

fn qd_reference() -> (CMatrix, CMatrix, CMatrix) {
    QdParameters::default().closed_loop_operators().unwrap()
}

fn trace_defect(g: &SLHModel) -> f64 {
    let mut rng = common::rng(8);
    (0..10).map(|_| trace(&lindblad_rhs(g, &common::density(&mut rng, g.dim())).unwrap()).norm()).fold(0.0, f64::max)
}

fn qd_network() -> Outcome {
    let (s, l, k) = qd_reference();
    let text = std::fs::read_to_string(fixtures().join("qd.json")).unwrap();
    let closed = commands::compose(&parse_network(&text).unwrap(), 1e-9).unwrap().model().unwrap();
    let worst = [frobenius(&(closed.s() - &s)), frobenius(&(closed.l() - &l)), frobenius(&(closed.k() - &k))]
        .into_iter()
        .fold(0.0, f64::max);
    let tr = trace_defect(&closed);
    outcome(
        worst <= 1e-10 && tr <= 1e-12 && closed.space().total_dim() == 12,
        format!("compose on qd fixture vs closed-form S, L, K: {worst:.2e} (limit 1e-10); master-equation trace {tr:.2e} (limit 1e-12)"),
    )
}

fn stable_plant(rng: &mut StdRng, n: usize, modes: usize) -> LinearPassiveModel {
    loop {
        let g = common::passive(rng, 2 * n, modes);
        if is_hurwitz(&dynamics_matrix(&g), 1e-3).unwrap().pass {
            return g;
        }
    }
}

fn stable_load(rng: &mut StdRng, n: usize, states: usize) -> LoadModel {
    let g = common::ginibre(rng, states, states);
    let re = (&g + g.adjoint()) * c64(0.5, 0.0);
    let shift = hermitian_max_eigenvalue(&re).unwrap() + rng.random_range(0.2..1.0);
    let a = g - identity(states) * c64(shift, 0.0);
    let b = common::ginibre(rng, states, n);
    let c = common::ginibre(rng, n, states);
    let d = common::ginibre(rng, n, n) * c64(0.5, 0.0);
    LoadModel::new(StateSpaceRealization::new(a, b, c, d).unwrap()).unwrap()
}

fn termination() -> Outcome {
    let mut rng = common::rng(9);
    let (mut worst, mut done, mut invariant) = (0.0f64, 0, true);
    while done < 20 {
        let (n, modes, states) = (rng.random_range(1..=2), rng.random_range(1..=3), rng.random_range(0..=2));
        let g = stable_plant(&mut rng, n, modes);
        let p = LeadPartition::halves(2 * n).unwrap();
        let delta = stable_load(&mut rng, n, states);
        let Ok(cl) = hm_realization(&g, &p, &delta) else { continue };
        let gamma = chain_of_transfer(&g, &p).unwrap();
        let mut points = 0;
        while points < 20 {
            let s = common::complex_point(&mut rng, (0.0, 4.0), (-6.0, 6.0));
            let (Ok(a), Ok(b), Ok(c)) = (terminate_fractional(&g, &p, &delta, s), homographic(&gamma, &delta, s), cl.eval(s)) else {
                continue;
            };
            worst = worst.max(relative(&b, &a)).max(relative(&c, &a));
            points += 1;
        }
        let t = common::ginibre(&mut rng, states, states) + identity(states) * c64(2.0, 0.0);
        if let Ok(other) = hm_realization(&g, &p, &delta.transformed(&t).unwrap()) {
            let (ra, rb) = (internal_stability(&cl, 1e-9).unwrap(), internal_stability(&other, 1e-9).unwrap());
            invariant &= ra.pass == rb.pass;
        }
        done += 1;
    }
    let mut o = within(worst, 1e-9, "20 pairs x 20 held-out points, three routes");
    o.pass &= invariant;
    o.detail += if invariant { "; stability verdict similarity-invariant" } else { "; stability verdict changed under similarity" };
    o
}

fn trapped_mode() -> Outcome {
    let s = c64(1.0, 0.0);
    let limit = CMatrix::from_element(2, 2, c64(0.5, 0.0));
    let errors: Vec<f64> = (3..=8)
        .map(|k| {
            let tau = 10f64.powi(-k);
            let sc = trapped_mode_scatterer(1.0, tau).unwrap();
            frobenius(&(scattering_cascade_delay(&sc, &sc, &DelayElement::new(tau).unwrap(), s).unwrap() - &limit))
        })
        .collect();
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    let last = errors[errors.len() - 1];
    outcome(
        monotone && last <= 1e-3,
        format!(
            "errors over tau = 1e-3..1e-8: {} ({}); final {last:.2e} (limit 1e-3)",
            errors.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>().join(", "),
            if monotone { "decreasing" } else { "not monotone" }
        ),
    )
}

fn series_products() -> Outcome {
    let mut rng = common::rng(10);
    let (mut assoc, mut route) = (0.0f64, 0.0f64);
    for _ in 0..30 {
        let space = common::small_space(&mut rng);
        let ports = rng.random_range(1..=2);
        let g1 = common::slh(&mut rng, &space, ports);
        let g2 = common::slh(&mut rng, &space, ports);
        let g3 = common::slh(&mut rng, &space, ports);
        let left = series_product(&series_product(&g3, &g2).unwrap(), &g1).unwrap();
        let right = series_product(&g3, &series_product(&g2, &g1).unwrap()).unwrap();
        for (x, y) in [(left.s(), right.s()), (left.l(), right.l()), (left.h(), right.h())] {
            assoc = assoc.max(common::max_abs(&(x - y)));
        }
        let open = parallel_sum(&[g1.clone(), g2.clone()], &space).unwrap();
        let conns: Vec<_> = (0..ports).map(|k| PortConnection::new(k, ports + k)).collect();
        let Ok(fed) = feedback_reduce(&assimilate(&open), &conns, &identity(ports)) else { continue };
        let fed = fed.to_slh(1e-9).unwrap();
        let direct = series_product(&g2, &g1).unwrap();
        // surviving inputs are g1's, surviving outputs g2's, both in original order
        for (x, y) in [(fed.s(), direct.s()), (fed.l(), direct.l()), (fed.h(), direct.h())] {
            route = route.max(common::max_abs(&(x - y)));
        }
    }
    outcome(
        assoc <= 1e-12 && route <= 1e-10,
        format!("associativity {assoc:.2e} (limit 1e-12); feedback route vs series product {route:.2e} (limit 1e-10)"),
    )
}

fn matrix(v: &Value) -> CMatrix {
    to_cmatrix(&serde_json::from_value(v.clone()).unwrap())
}

fn cli_end_to_end() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for name in EXAMPLES {
        let text = std::fs::read_to_string(fixtures().join(format!("{name}.json"))).unwrap();
        if serialize_network(&parse_network(&text).unwrap()) != text {
            pass = false;
            notes.push(format!("{name} does not round-trip"));
        }
    }
    notes.push(format!("{} fixtures round-trip", EXAMPLES.len()));

    let read = |f: &str| std::fs::read_to_string(fixtures().join(f)).unwrap();
    let expected: Value = serde_json::from_str(&read("qd.expected.json")).unwrap();
    let closed = commands::compose(&parse_network(&read("qd.json")).unwrap(), 1e-9).unwrap().model().unwrap();
    let space = closed.space().clone();
    let a = embed(&OperatorExpr::a("a"), &space).unwrap();
    let sigma = embed(&OperatorExpr::sigma("q"), &space).unwrap();
    let z = |v: &Value| c64(v[0].as_f64().unwrap(), v[1].as_f64().unwrap());
    let d = space.total_dim();
    let s = identity(d) * z(&expected["s"]);
    let l = &a * z(&expected["l"]["a"]) + &sigma * z(&expected["l"]["sigma"]);
    let k = a.adjoint() * &a * z(&expected["k"]["number"])
        + sigma.adjoint() * &sigma * z(&expected["k"]["dot"])
        + sigma.adjoint() * &a * z(&expected["k"]["cross"]);
    let qd = [frobenius(&(closed.s() - s)), frobenius(&(closed.l() - l)), frobenius(&(closed.k() - k))].into_iter().fold(0.0, f64::max);
    let tr = trace_defect(&closed);
    pass &= qd <= 1e-10 && tr <= 1e-12;
    notes.push(format!("qd compose {qd:.2e} (limit 1e-10), trace {tr:.2e} (limit 1e-12)"));

    let expected: Value = serde_json::from_str(&read("worked.expected.json")).unwrap();
    let samples = expected["samples"].as_array().unwrap();
    let sweep = SweepSpec { omega_min: -5.0, omega_max: 5.0, count: samples.len(), scale: Scale::Lin };
    let out = commands::chain(&parse_network(&read("worked.json")).unwrap(), None, &sweep).unwrap();
    let mut worked = 0.0f64;
    for (row, sample) in out.rows.iter().zip(samples) {
        let v = row.values.as_ref().unwrap();
        let ratio = inverse(&v[2], "Upsilon_Y").unwrap() * &v[3];
        let want = matrix(&sample["gamma"]);
        for r in [
            relative(&v[0], &want),
            frobenius(&(&v[2] - matrix(&sample["upsilon_y"]))),
            frobenius(&(&v[3] - matrix(&sample["upsilon_x"]))),
            relative(&ratio, &want),
        ] {
            worked = worked.max(r);
        }
    }
    pass &= worked <= 1e-12 && samples.len() == 20;
    notes.push(format!("worked chain at {} points {worked:.2e} (limit 1e-12)", samples.len()));
    outcome(pass, notes.join("; "))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("cavity transfer function", cavity_transfer),
        ("two-input oscillator", two_input_oscillator),
        ("passive transfer functions are unitary on the axis", passive_unitarity),
        ("all-pass route", allpass_route),
        ("chain-scattering duality", chain_duality),
        ("worked two-lead example", worked_example),
        ("star product equals feedback reduction", star_vs_feedback),
        ("cavity-dot network", qd_network),
        ("termination routes", termination),
        ("trapped mode", trapped_mode),
        ("series product", series_products),
        ("command layer", cli_end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!("{} criterion {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
