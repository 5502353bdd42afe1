//! Self-check suites over random and gridded inputs.
//!
//! Every check compares an error against a tolerance multiplied by
//! [`VerifyConfig::tolerance_scale`]. Random inputs come from a ChaCha8
//! stream per suite, so the report text is a pure function of the config.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complementarity::{
    duality, predictability, predictability_of_b, visibility, visibility_of_b, visibility_oracle, DEFAULT_GRID,
};
use crate::montecarlo::{sample_fringe, sample_sharp, sample_simultaneous, Z_GATE};
use crate::simultaneous::{
    distinguishability, entangle, entangled_visibility, estimate_a, estimate_b, minimum_simultaneous_product,
};
use crate::state::{DensityMatrix, Gauge};
use crate::sweep::{sweep, Figure};
use crate::uncertainty::{intelligent_state, is_residual, mean_var, robertson, Branch, IsFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Everything except the Monte-Carlo suite.
    Fast,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub level: Level,
    pub seed: u64,
    pub tolerance_scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { level: Level::Full, seed: 42, tolerance_scale: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub skipped: bool,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.config.level {
            Level::Fast => "fast",
            Level::Full => "full",
        };
        writeln!(f, "verify level={level} seed={} tolerance_scale={}", self.config.seed, self.config.tolerance_scale)?;
        let (mut checks, mut failures) = (0, 0);
        for s in &self.suites {
            if s.skipped {
                writeln!(f, "{:<24} skipped", s.name)?;
                continue;
            }
            let verdict = if s.passed() { "ok" } else { "FAIL" };
            writeln!(f, "{:<24} {:>7} checks {:>7} failures  {verdict}", s.name, s.checks, s.failures)?;
            if let Some(msg) = &s.first_failure {
                writeln!(f, "    first failure: {msg}")?;
            }
            checks += s.checks;
            failures += s.failures;
        }
        let verdict = if failures == 0 { "PASS" } else { "FAIL" };
        writeln!(f, "total {checks} checks, {failures} failures: {verdict}")
    }
}

struct Suite {
    result: SuiteResult,
    scale: f64,
}

impl Suite {
    fn new(name: &'static str, scale: f64) -> Self {
        Suite { result: SuiteResult { name, checks: 0, failures: 0, skipped: false, first_failure: None }, scale }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.result.checks += 1;
        if !ok {
            self.result.failures += 1;
            if self.result.first_failure.is_none() {
                self.result.first_failure = Some(describe());
            }
        }
    }

    /// `err <= tol * scale`.
    fn within(&mut self, err: f64, tol: f64, what: &str) {
        let limit = tol * self.scale;
        self.check(err <= limit, || format!("{what}: error {err:.3e} exceeds {limit:.3e}"));
    }

    fn done(self) -> SuiteResult {
        self.result
    }
}

fn rng(seed: u64, suite: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(suite);
    r
}

fn random_density(r: &mut ChaCha8Rng, w_range: (f64, f64), coherence: (f64, f64)) -> DensityMatrix {
    let w = r.random_range(w_range.0..=w_range.1);
    let frac = r.random_range(coherence.0..=coherence.1);
    let theta = r.random_range(0.0..TAU);
    DensityMatrix::new(w, frac * (w * (1.0 - w)).sqrt(), theta).expect("coherence within bound")
}

pub fn run(config: &VerifyConfig) -> VerifyReport {
    let scale = config.tolerance_scale;
    let seed = config.seed;
    let mut suites = vec![
        duality_suite(seed, scale),
        basis_invariance_suite(seed, scale),
        fringe_oracle_suite(seed, scale),
        robertson_suite(seed, scale),
        product_curve_suite(scale),
        entangled_duality_suite(scale),
        unbiasedness_suite(scale),
        simultaneous_minimum_suite(scale),
    ];
    suites.push(match config.level {
        Level::Full => monte_carlo_suite(seed, scale),
        Level::Fast => {
            let mut s = Suite::new("monte_carlo", scale).done();
            s.skipped = true;
            s
        }
    });
    VerifyReport { config: *config, suites }
}

/// `P² + V² ≤ 1`, with equality exactly for pure states.
///
/// Mixed draws keep `w+` and the coherence fraction away from the edges, so
/// `1 - (P² + V²)` is either zero or far above the equality tolerance.
pub fn duality_suite(seed: u64, scale: f64) -> SuiteResult {
    let mut s = Suite::new("duality", scale);
    let mut r = rng(seed, 1);
    for k in 0..10_000 {
        let rho = if k % 2 == 0 {
            random_density(&mut r, (0.0, 1.0), (1.0, 1.0))
        } else {
            random_density(&mut r, (0.01, 0.99), (0.0, 0.99))
        };
        let d = duality(&rho);
        s.within((d.sum_sq - 1.0).max(0.0), 1e-12, "P^2 + V^2 above 1");
        let equal = (d.sum_sq - 1.0).abs() <= 1e-10 * scale;
        let pure = d.purity >= 1.0 - 1e-12;
        s.check(equal == pure, || format!("equality {equal} but purity {} at {rho:?}", d.purity));
    }
    s.done()
}

pub fn basis_invariance_suite(seed: u64, scale: f64) -> SuiteResult {
    let mut s = Suite::new("basis_invariance", scale);
    let mut r = rng(seed, 2);
    for _ in 0..1_000 {
        let rho = random_density(&mut r, (0.0, 1.0), (0.0, 1.0));
        let varrho = r.random_range(0.0..TAU);
        let pb = predictability_of_b(&rho, varrho);
        let vb = visibility_of_b(&rho, varrho);
        let err = (pb * pb + vb * vb - duality(&rho).sum_sq).abs();
        s.within(err, 1e-12, "P_B^2 + V_B^2 vs P^2 + V^2");
    }
    s.done()
}

/// The fringe-swing maximum sits at a balanced beamsplitter and its
/// contrast is `2 ρ12`.
pub fn fringe_oracle_suite(seed: u64, scale: f64) -> SuiteResult {
    let mut s = Suite::new("fringe_oracle", scale);
    let mut r = rng(seed, 3);
    let step = TAU / DEFAULT_GRID as f64;
    for _ in 0..20 {
        let rho = random_density(&mut r, (0.05, 0.95), (0.1, 1.0));
        let scan = visibility_oracle(&rho, DEFAULT_GRID).expect("grid above minimum");
        s.within((scan.xi - FRAC_PI_4).abs(), step, "extremising beamsplitter angle");
        s.within((scan.visibility - visibility(&rho)).abs(), 1e-3, "grid visibility vs 2 rho12");
    }
    s.done()
}

pub fn robertson_suite(seed: u64, scale: f64) -> SuiteResult {
    let mut s = Suite::new("robertson", scale);
    let mut r = rng(seed, 4);
    for _ in 0..10_000 {
        let rho = random_density(&mut r, (0.0, 1.0), (0.0, 1.0));
        let gauge = Gauge::new(r.random_range(0.1..2.0), r.random_range(0.1..2.0)).expect("positive");
        let varrho = r.random_range(0.0..TAU);
        let rep = robertson(&rho, &gauge.observable_a(), &gauge.observable_b(varrho));
        s.within((rep.rhs - rep.lhs).max(0.0), 1e-12, "Robertson lhs below rhs");
    }

    let pairs = [Gauge::default(), Gauge::new(1.0, 0.3).expect("positive")];
    for gauge in pairs {
        for varrho in [0.0, 1.1, 4.0] {
            let a = gauge.observable_a();
            let b = gauge.observable_b(varrho);
            for branch in [Branch::Plus, Branch::Minus] {
                let mut states = Vec::new();
                for k in 0..=20 {
                    let w = k as f64 / 20.0;
                    states.push(intelligent_state(IsFamily::Is1, w, varrho, branch));
                    states.push(intelligent_state(IsFamily::Is2b, w, varrho, branch));
                    states.push(intelligent_state(IsFamily::Is2a, k as f64 * FRAC_PI_2 / 20.0, varrho, branch));
                }
                for is in states {
                    let is = is.expect("parameters in range");
                    let rep = robertson(&is.state, &a, &b);
                    s.within((rep.lhs - rep.rhs).abs(), 1e-10, "intelligent state off the Robertson bound");
                    let res = is_residual(&is.state, is.lambda_for(&a, &b), &a, &b).expect("pure");
                    s.within(res, 1e-10, "intelligent state eigen-equation residual");
                }
            }
        }
    }
    s.done()
}

pub fn product_curve_suite(scale: f64) -> SuiteResult {
    let mut s = Suite::new("product_curves", scale);
    for row in sweep(Figure::Products, 201).expect("201 points") {
        let q = row.w_plus * (1.0 - row.w_plus);
        s.within((row.product_min - q * (1.0 - 4.0 * q) / 4.0).abs(), 1e-12, "product_min vs closed form");
        s.within((row.product_min - (row.p * row.v).powi(2) / 16.0).abs(), 1e-12, "product_min vs P^2 V^2 / 16");
        s.within((row.product_max - q / 4.0).abs(), 1e-12, "product_max vs closed form");
    }
    s.done()
}

pub fn entangled_duality_suite(scale: f64) -> SuiteResult {
    let mut s = Suite::new("entangled_duality", scale);
    for i in 0..=50 {
        for j in 0..=50 {
            let (w, c) = (i as f64 / 50.0, j as f64 / 50.0);
            let psi = entangle(w, 0.4, c).expect("grid in range");
            let d = distinguishability(&psi);
            let ve = entangled_visibility(&psi);
            s.within((d * d + ve * ve - 1.0).abs(), 1e-12, "D^2 + V_e^2 vs 1");
            s.within((predictability(&psi.initial_state()) - d).max(0.0), 1e-12, "P above D");
        }
    }
    s.done()
}

/// Estimator means from 4-dimensional projections against sharp means.
pub fn unbiasedness_suite(scale: f64) -> SuiteResult {
    let mut s = Suite::new("unbiasedness", scale);
    let gauge = Gauge::default();
    for i in 1..=9 {
        for k in 0..8 {
            for j in 1..=9 {
                let (w, theta, c) = (i as f64 / 10.0, k as f64 * TAU / 8.0, j as f64 / 10.0);
                let psi = entangle(w, theta, c).expect("grid in range");
                let rho = psi.initial_state();
                let ea = estimate_a(&psi, gauge.a).expect("0 < c < 1");
                s.within((ea.mean - mean_var(&rho, &gauge.observable_a()).mean).abs(), 1e-12, "<A'> vs <A>");
                for varrho in [theta, 0.7] {
                    let eb = estimate_b(&psi, varrho, gauge.b).expect("c > 0");
                    let sharp = mean_var(&rho, &gauge.observable_b(varrho)).mean;
                    s.within((eb.mean - sharp).abs(), 1e-12, "<B'> vs <B>");
                }
            }
        }
    }
    s.done()
}

/// Three routes to the minimum simultaneous product, and which of the two
/// compact forms `(1 ± VP)²/16` it matches.
pub fn simultaneous_minimum_suite(scale: f64) -> SuiteResult {
    let mut s = Suite::new("simultaneous_minimum", scale);
    for k in 1..52 {
        let w = k as f64 / 52.0;
        let rep = minimum_simultaneous_product(w).expect("w in range");
        s.within(rep.route_spread(), 1e-9, "minimum routes disagree");
        if !rep.limit {
            s.check(rep.expanded.is_some(), || format!("expanded expression undefined at w+ = {w}"));
        }
        s.within((rep.value() - rep.plus_form).abs(), 1e-9, "minimum vs (1 + VP)^2/16");
        let rho = DensityMatrix::pure(w, 0.0).expect("w in range");
        if visibility(&rho) * predictability(&rho) > 1e-3 {
            s.check((rep.value() - rep.minus_form).abs() > 1e-9, || {
                format!("minimum matches (1 - VP)^2/16 at w+ = {w}")
            });
        }
    }
    for w in [0.0, 0.5, 1.0] {
        let rep = minimum_simultaneous_product(w).expect("w in range");
        s.check(rep.limit && rep.value() == 1.0 / 16.0, || format!("limit at w+ = {w} gave {rep:?}"));
        s.within((rep.numeric - 1.0 / 16.0).abs(), 1e-9, "numeric minimum at limit point");
    }
    s.done()
}

/// 10^6-shot sampling at `w+ = 0.9`, `c = sqrt(3/7)`.
pub fn monte_carlo_suite(seed: u64, scale: f64) -> SuiteResult {
    let mut s = Suite::new("monte_carlo", scale);
    let n = 1_000_000;
    let theta = 0.8;
    let gauge = Gauge::default();
    let rho = DensityMatrix::pure(0.9, theta).expect("valid");
    let psi = entangle(0.9, theta, (3.0f64 / 7.0).sqrt()).expect("valid");

    let sharp_a = sample_sharp(&rho, &gauge.observable_a(), n, seed).expect("n > 0");
    let sharp_b = sample_sharp(&rho, &gauge.observable_b(theta), n, seed.wrapping_add(1)).expect("n > 0");
    let sim = sample_simultaneous(&psi, theta, n, seed.wrapping_add(2)).expect("0 < c < 1");
    for (label, rep) in [("sharp A", sharp_a), ("sharp B", sharp_b), ("unsharp A'", sim.a), ("unsharp B'", sim.b)] {
        s.within(rep.z_mean.abs(), Z_GATE, &format!("{label} mean z"));
        s.within(rep.z_variance.abs(), Z_GATE, &format!("{label} variance z"));
    }
    s.within(sim.joint_max_z(), Z_GATE, "joint meter/system counts z");

    let grid: Vec<f64> = (0..64).map(|k| k as f64 * TAU / 64.0).collect();
    let fringe = sample_fringe(&rho, &grid, FRAC_PI_4, 100_000, seed.wrapping_add(3)).expect("n > 0");
    s.within((fringe.visibility - visibility(&rho)).abs(), 0.01, "sampled fringe visibility");
    let dark = sample_fringe(&rho, &grid, 0.0, 100_000, seed.wrapping_add(4)).expect("n > 0");
    s.within(dark.visibility, 0.01, "sampled visibility at xi = 0");
    s.done()
}
