use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
use std::time::{Duration, Instant};

use qudual_core::complementarity::DEFAULT_GRID;
use qudual_core::uncertainty::{Branch, IsFamily};
use qudual_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: usize, checks: usize, extra: String) -> Outcome {
    Outcome { ok: failures == 0, detail: format!("{checks} checks, {failures} failures{extra}") }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    o.detail.push_str(&format!(", {:.2}s", took.as_secs_f64()));
    if let Some(limit) = limit {
        if took > limit {
            o.ok = false;
            o.detail.push_str(&format!(" exceeds {}s", limit.as_secs()));
        }
    }
    o
}

fn random_state(r: &mut ChaCha8Rng, pure: bool) -> DensityMatrix {
    let w = r.random_range(0.0..=1.0);
    let frac: f64 = if pure { 1.0 } else { r.random_range(0.0..1.0) };
    DensityMatrix::new(w, frac * (w * (1.0 - w)).sqrt(), r.random_range(0.0..TAU)).unwrap()
}

fn duality_relation() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let (mut checks, mut failures) = (0, 0);
    for k in 0..10_000 {
        let rho = random_state(&mut r, k % 4 == 0);
        let d = duality(&rho);
        let equal = (d.sum_sq - 1.0).abs() <= 1e-10;
        let pure = d.purity >= 1.0 - 1e-12;
        // Mixed states closer to purity than the equality tolerance cannot be
        // told apart from pure ones; they are not expected to satisfy the converse.
        let ambiguous = !pure && 1.0 - d.purity <= 1e-10;
        checks += 2;
        failures += usize::from(d.sum_sq > 1.0 + 1e-12);
        failures += usize::from(!ambiguous && equal != pure);
    }
    outcome(failures, checks, String::new())
}

fn basis_invariance() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0_f64;
    for _ in 0..1_000 {
        let rho = random_state(&mut r, false);
        let varrho = r.random_range(0.0..TAU);
        let pb = predictability_of_b(&rho, varrho);
        let vb = visibility_of_b(&rho, varrho);
        worst = worst.max((pb * pb + vb * vb - duality(&rho).sum_sq).abs());
    }
    Outcome { ok: worst <= 1e-12, detail: format!("1000 pairs, max error {worst:.2e}") }
}

fn fringe_extremum() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let step = TAU / DEFAULT_GRID as f64;
    let (mut worst_xi, mut worst_v) = (0.0_f64, 0.0_f64);
    for _ in 0..20 {
        let w = r.random_range(0.05..0.95);
        let frac = r.random_range(0.1..=1.0);
        let rho = DensityMatrix::new(w, frac * (w * (1.0 - w)).sqrt(), r.random_range(0.0..TAU)).unwrap();
        let scan = visibility_oracle(&rho, DEFAULT_GRID).unwrap();
        worst_xi = worst_xi.max((scan.xi - FRAC_PI_4).abs());
        worst_v = worst_v.max((scan.visibility - visibility(&rho)).abs());
    }
    Outcome {
        ok: worst_xi <= step && worst_v <= 1e-3,
        detail: format!("20 states, max |xi - pi/4| {worst_xi:.2e} (step {step:.2e}), max |V - 2 rho12| {worst_v:.2e}"),
    }
}

fn robertson_inequality() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let (mut checks, mut failures) = (0, 0);
    for _ in 0..10_000 {
        let rho = random_state(&mut r, false);
        let gauge = Gauge::new(r.random_range(0.1..2.0), r.random_range(0.1..2.0)).unwrap();
        let rep = robertson(&rho, &gauge.observable_a(), &gauge.observable_b(r.random_range(0.0..TAU)));
        checks += 1;
        failures += usize::from(rep.lhs < rep.rhs - 1e-12);
    }
    let (mut worst_gap, mut worst_res) = (0.0_f64, 0.0_f64);
    let mut generated = 0;
    for gauge in [Gauge::default(), Gauge::new(2.0, 0.25).unwrap()] {
        for varrho in [0.0, 0.9, 3.5] {
            let (a, b) = (gauge.observable_a(), gauge.observable_b(varrho));
            for branch in [Branch::Plus, Branch::Minus] {
                for k in 0..=40 {
                    let t = k as f64 / 40.0;
                    for (family, param) in [(IsFamily::Is1, t), (IsFamily::Is2b, t), (IsFamily::Is2a, t * FRAC_PI_2)] {
                        let is = intelligent_state(family, param, varrho, branch).unwrap();
                        let rep = robertson(&is.state, &a, &b);
                        worst_gap = worst_gap.max((rep.lhs - rep.rhs).abs());
                        worst_res = worst_res.max(is_residual(&is.state, is.lambda_for(&a, &b), &a, &b).unwrap());
                        generated += 1;
                    }
                }
            }
        }
    }
    checks += 2 * generated;
    let extra =
        format!("; {generated} intelligent states, max |lhs - rhs| {worst_gap:.2e}, max residual {worst_res:.2e}");
    if worst_gap > 1e-10 || worst_res > 1e-10 {
        failures += 1;
    }
    outcome(failures, checks, extra)
}

fn figure_one_curves() -> Outcome {
    let rows = sweep(Figure::Products, 201).unwrap();
    let mut worst = 0.0_f64;
    for row in &rows {
        let q = row.w_plus * (1.0 - row.w_plus);
        worst = worst
            .max((row.product_min - q * (1.0 - 4.0 * q) / 4.0).abs())
            .max((row.product_min - (row.p * row.v).powi(2) / 16.0).abs())
            .max((row.product_max - q / 4.0).abs());
    }
    Outcome { ok: rows.len() == 201 && worst <= 1e-12, detail: format!("{} rows, max error {worst:.2e}", rows.len()) }
}

fn entangled_duality_grid() -> Outcome {
    let (mut worst, mut p_above_d) = (0.0_f64, 0);
    for i in 0..=50 {
        for j in 0..=50 {
            let psi = entangle(i as f64 / 50.0, 1.3, j as f64 / 50.0).unwrap();
            let d = distinguishability(&psi);
            let ve = entangled_visibility(&psi);
            worst = worst.max((d * d + ve * ve - 1.0).abs());
            p_above_d += usize::from(predictability(&psi.initial_state()) > d + 1e-12);
        }
    }
    Outcome {
        ok: worst <= 1e-12 && p_above_d == 0,
        detail: format!("51x51 grid, max |D^2 + V_e^2 - 1| {worst:.2e}, P > D at {p_above_d} points"),
    }
}

fn unbiasedness_grid() -> Outcome {
    let gauge = Gauge::default();
    let (mut worst_a, mut worst_b) = (0.0_f64, 0.0_f64);
    for i in 1..=9 {
        for k in 0..8 {
            for j in 1..=9 {
                let theta = k as f64 * TAU / 8.0;
                let psi = entangle(i as f64 / 10.0, theta, j as f64 / 10.0).unwrap();
                let rho = psi.initial_state();
                let ea = estimate_a(&psi, gauge.a).unwrap();
                worst_a = worst_a.max((ea.mean - mean_var(&rho, &gauge.observable_a()).mean).abs());
                for varrho in [theta, 2.2] {
                    let eb = estimate_b(&psi, varrho, gauge.b).unwrap();
                    worst_b = worst_b.max((eb.mean - mean_var(&rho, &gauge.observable_b(varrho)).mean).abs());
                }
            }
        }
    }
    Outcome {
        ok: worst_a <= 1e-12 && worst_b <= 1e-12,
        detail: format!("9x8x9 grid, max |<A'> - <A>| {worst_a:.2e}, max |<B'> - <B>| {worst_b:.2e}"),
    }
}

fn simultaneous_minimum() -> Outcome {
    let (mut spread, mut plus_gap) = (0.0_f64, 0.0_f64);
    let (mut minus_matches, mut minus_checked, mut expanded_missing) = (0, 0, 0);
    for k in 1..52 {
        let w = k as f64 / 52.0;
        let rep = minimum_simultaneous_product(w).unwrap();
        spread = spread.max(rep.route_spread());
        plus_gap = plus_gap.max((rep.value() - rep.plus_form).abs());
        expanded_missing += usize::from(!rep.limit && rep.expanded.is_none());
        let rho = DensityMatrix::pure(w, 0.0).unwrap();
        if visibility(&rho) * predictability(&rho) > 1e-3 {
            minus_checked += 1;
            minus_matches += usize::from(rep.matches_minus_form(1e-9));
        }
    }
    let limits_ok = [0.0, 0.5, 1.0].iter().all(|&w| {
        let rep = minimum_simultaneous_product(w).unwrap();
        rep.limit && rep.value() == 1.0 / 16.0
    });
    Outcome {
        ok: spread <= 1e-9 && expanded_missing == 0 && limits_ok,
        detail: format!(
            "51 points, route spread {spread:.2e}, limits {}; |min - (1+VP)^2/16| <= {plus_gap:.2e}, \
             (1-VP)^2/16 matched at {minus_matches}/{minus_checked} points with VP > 1e-3",
            if limits_ok { "ok" } else { "wrong" }
        ),
    }
}

fn monte_carlo_oracle() -> Outcome {
    let n = 1_000_000;
    let theta = 0.8;
    let gauge = Gauge::default();
    let rho = DensityMatrix::pure(0.9, theta).unwrap();
    let psi = entangle(0.9, theta, (3.0f64 / 7.0).sqrt()).unwrap();
    let a = sample_sharp(&rho, &gauge.observable_a(), n, 2024).unwrap();
    let b = sample_sharp(&rho, &gauge.observable_b(theta), n, 2025).unwrap();
    let sim = sample_simultaneous(&psi, theta, n, 2026).unwrap();
    let reports = [a, b, sim.a, sim.b];
    let worst = reports.iter().flat_map(|r| r.z_scores()).fold(0.0_f64, |m, z| m.max(z.abs()));
    let closed_ok = (sim.a.analytic_variance - 0.2775).abs() < 1e-12;
    Outcome { ok: worst <= 4.0 && closed_ok, detail: format!("n = {n}, max |z| {worst:.2} over 8 moments") }
}

fn determinism() -> Outcome {
    let config = VerifyConfig { seed: 42, ..VerifyConfig::default() };
    let first = verify::run(&config).to_string();
    let second = verify::run(&config).to_string();
    let passed = first.trim_end().ends_with("PASS");
    Outcome {
        ok: first.as_bytes() == second.as_bytes() && passed,
        detail: format!("{} bytes, identical: {}, suites pass: {passed}", first.len(), first == second),
    }
}

fn main() {
    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 duality relation", timed(Some(Duration::from_secs(1)), duality_relation)),
        ("2 basis invariance", timed(None, basis_invariance)),
        ("3 fringe extremum", timed(Some(Duration::from_secs(10)), fringe_extremum)),
        ("4 robertson inequality", timed(None, robertson_inequality)),
        ("5 figure-1 curves", timed(None, figure_one_curves)),
        ("6 entangled duality", timed(None, entangled_duality_grid)),
        ("7 unbiasedness", timed(None, unbiasedness_grid)),
        ("8 simultaneous minimum", timed(None, simultaneous_minimum)),
        ("9 monte-carlo oracle", timed(Some(Duration::from_secs(60)), monte_carlo_oracle)),
        ("10 determinism", timed(None, determinism)),
    ];
    let mut failed = Vec::new();
    for (name, o) in &criteria {
        println!("{} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        if !o.ok {
            failed.push(*name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
