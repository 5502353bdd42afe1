//! Simultaneous unsharp measurement of `Â` and `B̂` through a meter.
//!
//! The system is entangled with a two-dimensional meter (QND-type coupling,
//! populations `w±` untouched):
//!
//! ```text
//!   |ψe> = sqrt(w+)|A+>|M+> + e^{iθ} sqrt(w-)|A->(c|M+> + sqrt(1-c²)|M⊥>)
//! ```
//!
//! `Â` is estimated from a projective meter measurement in the basis
//! `{|M1>, |M2>}`, then `B̂` from a sharp measurement of the system. Outcome
//! values are rescaled so that both estimators are unbiased for every
//! initial state. All probabilities here come from explicit projections on
//! the 4-dimensional state; the closed forms are carried alongside.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::complementarity::{predictability, visibility};
use crate::error::{Error, Result};
use crate::linalg::{cis, cr, kron, trace_norm, CMat2, CMat4, CVec2, CVec4};
use crate::optimize::golden_section;
use crate::state::{DensityMatrix, Gauge};

/// Agreement required between the unbiasedness probe and the true mean.
const PROBE_TOL: f64 = 1e-12;

/// `|1 - 8 w+ w-|` below which the root form of the optimal c is not evaluated.
const OPTIMAL_C_SINGULAR_BAND: f64 = 1e-6;

/// `|denominator|` below which the expanded minimum expression is not evaluated.
const EXPANDED_SINGULAR_BAND: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntangledState {
    w_plus: f64,
    theta: f64,
    c: f64,
    amplitudes: CVec4,
}

/// System–meter state with meter overlap `<M-|M+> = c`.
pub fn entangle(w_plus: f64, theta: f64, c: f64) -> Result<EntangledState> {
    if !(0.0..=1.0).contains(&w_plus) {
        return Err(Error::domain(format!("w_plus = {w_plus} must lie in [0, 1]")));
    }
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::domain(format!("c = {c} must lie in [0, 1]")));
    }
    if !theta.is_finite() {
        return Err(Error::domain(format!("theta = {theta} must be finite")));
    }
    let theta = theta.rem_euclid(TAU);
    let lower = cis(theta) * (1.0 - w_plus).sqrt();
    let amplitudes = CVec4([cr(w_plus.sqrt()), cr(0.0), lower * c, lower * (1.0 - c * c).sqrt()]);
    Ok(EntangledState { w_plus, theta, c, amplitudes })
}

impl EntangledState {
    pub fn w_plus(&self) -> f64 {
        self.w_plus
    }

    pub fn w_minus(&self) -> f64 {
        1.0 - self.w_plus
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn amplitudes(&self) -> &CVec4 {
        &self.amplitudes
    }

    pub fn density(&self) -> CMat4 {
        CMat4::outer(&self.amplitudes)
    }

    /// Pure system state before the entangling interaction.
    pub fn initial_state(&self) -> DensityMatrix {
        DensityMatrix::pure(self.w_plus, self.theta).expect("validated in entangle")
    }

    /// `Tr_meter ρe`.
    pub fn system_marginal(&self) -> DensityMatrix {
        DensityMatrix::from_matrix(&self.density().partial_trace_second())
            .expect("partial trace of a normalised pure state is a density matrix")
    }

    /// `<A_i|ρe|A_i>`, an operator on the meter.
    pub fn meter_operator(&self, system: usize) -> CMat2 {
        self.amplitudes.meter_part(system).projector()
    }

    /// `(<Mi|ψe>)` for each meter projector: the four joint probabilities
    /// `|(<s| ⊗ <Mi|)ψe|²` with `s` ranging over `system_basis`.
    pub fn joint_probabilities(&self, meter: &MeterProjectors, system_basis: &[CVec2; 2]) -> [[f64; 2]; 2] {
        let mut out = [[0.0; 2]; 2];
        for (i, m) in meter.states().iter().enumerate() {
            for (j, s) in system_basis.iter().enumerate() {
                let proj = kron(&s.projector(), &m.projector());
                out[i][j] = proj.expectation(&self.amplitudes).re;
            }
        }
        out
    }

    fn meter_probabilities(&self, meter: &MeterProjectors) -> [f64; 2] {
        let one = CMat2::identity();
        meter.states().map(|m| kron(&one, &m.projector()).expectation(&self.amplitudes).re)
    }

    fn system_probabilities(&self, basis: &[CVec2; 2]) -> [f64; 2] {
        let one = CMat2::identity();
        basis.map(|s| kron(&s.projector(), &one).expectation(&self.amplitudes).re)
    }
}

/// `D = || <A+|ρe|A+> - <A-|ρe|A-> ||_1`.
pub fn distinguishability(psi: &EntangledState) -> f64 {
    trace_norm(&(psi.meter_operator(0) - psi.meter_operator(1)))
        .expect("difference of projector multiples is Hermitian")
}

/// `V_e = 2 |<A-| Tr_meter ρe |A+>|`.
pub fn entangled_visibility(psi: &EntangledState) -> f64 {
    2.0 * psi.density().partial_trace_second().0[1][0].norm()
}

/// Meter basis `|M1> = cos γ |M+> + e^{iκ} sin γ |M⊥>`,
/// `|M2> = -e^{iκ} sin γ |M+> + cos γ |M⊥>` with outcome values `±a_prime`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeterProjectors {
    pub gamma: f64,
    pub kappa: f64,
    pub a_prime: f64,
    pub m1: CVec2,
    pub m2: CVec2,
}

impl MeterProjectors {
    fn with_angle(gamma: f64, a_prime: f64) -> Self {
        let (s, co) = gamma.sin_cos();
        MeterProjectors { gamma, kappa: 0.0, a_prime, m1: CVec2([cr(co), cr(s)]), m2: CVec2([cr(-s), cr(co)]) }
    }

    pub fn states(&self) -> [CVec2; 2] {
        [self.m1, self.m2]
    }

    pub fn values(&self) -> [f64; 2] {
        [self.a_prime, -self.a_prime]
    }
}

/// Meter basis making `<Â'>` equal `<Â>` for every `(w+, θ)`.
///
/// `cot 2γ = -sqrt(1-c²)/c` has two roots in `[0, π)`; the one passing a
/// 3x3 probe grid of initial states is returned, with `a_prime = A/sqrt(1-c²)`.
pub fn meter_projectors(c: f64, a_value: f64) -> Result<MeterProjectors> {
    require_open_unit(c, "meter projectors")?;
    let s = (1.0 - c * c).sqrt();
    let a_prime = a_value / s;
    let half = 0.5 * c.asin();
    let candidates = [FRAC_PI_2 - half, PI - half];

    let mut best: Option<(f64, MeterProjectors)> = None;
    for gamma in candidates {
        let proj = MeterProjectors::with_angle(gamma, a_prime);
        let mut worst = 0.0_f64;
        for w in [0.2, 0.5, 0.9] {
            for theta in [0.0, 2.0, 4.0] {
                let psi = entangle(w, theta, c)?;
                let p = psi.meter_probabilities(&proj);
                let mean = a_prime * (p[0] - p[1]);
                worst = worst.max((mean - a_value * (2.0 * w - 1.0)).abs());
            }
        }
        if best.is_none_or(|(b, _)| worst < b) {
            best = Some((worst, proj));
        }
    }
    let (worst, proj) = best.expect("two candidates");
    if worst > PROBE_TOL * (1.0 + a_prime.abs()) {
        return Err(Error::Singular(format!("no unbiased meter basis at c = {c} (probe error {worst:e})")));
    }
    Ok(proj)
}

/// Estimator moments from explicit projections, with the closed forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub values: [f64; 2],
    pub probabilities: [f64; 2],
    pub mean: f64,
    pub variance: f64,
    pub closed_mean: f64,
    pub closed_variance: f64,
}

impl Estimate {
    fn from_distribution(values: [f64; 2], probabilities: [f64; 2], closed_mean: f64, closed_variance: f64) -> Self {
        let mean = values[0] * probabilities[0] + values[1] * probabilities[1];
        let second = values[0].powi(2) * probabilities[0] + values[1].powi(2) * probabilities[1];
        Estimate { values, probabilities, mean, variance: second - mean * mean, closed_mean, closed_variance }
    }

    /// Largest disagreement between the projected and closed-form moments.
    pub fn discrepancy(&self) -> f64 {
        (self.mean - self.closed_mean).abs().max((self.variance - self.closed_variance).abs())
    }
}

/// Unsharp estimate of `Â` (gauge `A+ = -A- = a_value`) from the meter.
///
/// Closed form: `<ΔA'²> = A² (c²/(1-c²) + 4 w+ w-)`.
pub fn estimate_a(psi: &EntangledState, a_value: f64) -> Result<Estimate> {
    require_open_unit(psi.c, "the A estimator")?;
    let proj = meter_projectors(psi.c, a_value)?;
    let probabilities = psi.meter_probabilities(&proj);
    let q = psi.w_plus * psi.w_minus();
    let c2 = psi.c * psi.c;
    Ok(Estimate::from_distribution(
        proj.values(),
        probabilities,
        a_value * (psi.w_plus - psi.w_minus()),
        a_value * a_value * (c2 / (1.0 - c2) + 4.0 * q),
    ))
}

/// Unsharp estimate of `B̂(ϱ)` (gauge `B+ = -B- = b_value`) from the system,
/// outcome values `±b_value/c`.
///
/// Closed form: `<ΔB'²> = B² (1/c² - 4 w+ w- cos²(θ - ϱ))`.
pub fn estimate_b(psi: &EntangledState, varrho: f64, b_value: f64) -> Result<Estimate> {
    if psi.c <= 0.0 {
        return Err(Error::Singular("the B estimator needs c > 0 (B' = B/c diverges)".into()));
    }
    let basis = Gauge::default().family(varrho).eigenstates();
    let probabilities = psi.system_probabilities(&basis);
    let q = psi.w_plus * psi.w_minus();
    let cos = (psi.theta - varrho).cos();
    let b_prime = b_value / psi.c;
    Ok(Estimate::from_distribution(
        [b_prime, -b_prime],
        probabilities,
        2.0 * b_value * q.sqrt() * cos,
        b_value * b_value * (1.0 / (psi.c * psi.c) - 4.0 * q * cos * cos),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimProduct {
    /// Normalised product `<ΔA'²><ΔB'²>/(16 A² B²)`; `+∞` when divergent.
    pub value: f64,
    /// `c` was an endpoint and the value is the analytic limit.
    pub limit: bool,
    pub divergent: bool,
}

/// `(c²/(4(1-c²)) + w+ w-)(1/(4c²) - w+ w-)` for a pure initial state with the
/// proper `B̂`. At `c ∈ {0, 1}` the analytic limit is returned.
pub fn simultaneous_product(w_plus: f64, c: f64) -> Result<SimProduct> {
    if !(0.0..=1.0).contains(&w_plus) {
        return Err(Error::domain(format!("w_plus = {w_plus} must lie in [0, 1]")));
    }
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::domain(format!("c = {c} must lie in [0, 1]")));
    }
    // With u = P², v = V² = 4 w+ w- (so u + v = 1), x = c² and y = 1 - c²,
    // the product is (x + v y)(y + x u) / (16 x y): no cancellation anywhere.
    let u = (2.0 * w_plus - 1.0).powi(2);
    let v = 4.0 * w_plus * (1.0 - w_plus);
    let tiny = 4.0 * f64::EPSILON;
    let endpoint = |finite: bool| {
        if finite {
            SimProduct { value: 1.0 / 16.0, limit: true, divergent: false }
        } else {
            SimProduct { value: f64::INFINITY, limit: true, divergent: true }
        }
    };
    if c == 1.0 {
        return Ok(endpoint(u <= tiny));
    }
    if c == 0.0 {
        return Ok(endpoint(v <= tiny));
    }
    let x = c * c;
    let y = (1.0 - c) * (1.0 + c);
    let value = (x + v * y) * (y + x * u) / (16.0 * x * y);
    Ok(SimProduct { value, limit: false, divergent: false })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalC {
    pub c: f64,
    /// `w+ ∈ {0, 1}`: no interior optimum, `c = 0` returned.
    pub boundary: bool,
}

/// Entanglement minimising [`simultaneous_product`]: `c² = V/(P + V)`.
pub fn optimal_entanglement(w_plus: f64) -> Result<OptimalC> {
    if !(0.0..=1.0).contains(&w_plus) {
        return Err(Error::domain(format!("w_plus = {w_plus} must lie in [0, 1]")));
    }
    if w_plus == 0.0 || w_plus == 1.0 {
        return Ok(OptimalC { c: 0.0, boundary: true });
    }
    let rho = DensityMatrix::pure(w_plus, 0.0)?;
    let (p, v) = (predictability(&rho), visibility(&rho));
    Ok(OptimalC { c: (v / (p + v)).sqrt(), boundary: false })
}

/// `c = sqrt((-4q + 2 sqrt(q(1-4q)))/(1 - 8q))`, `q = w+ w-`: the root of the
/// stationarity quadratic in `c²`.
/// `None` inside the removable singularity at `q = 1/8`.
pub fn optimal_entanglement_root_form(w_plus: f64) -> Option<f64> {
    let q = w_plus * (1.0 - w_plus);
    let den = 1.0 - 8.0 * q;
    if den.abs() < OPTIMAL_C_SINGULAR_BAND {
        return None;
    }
    Some(((-4.0 * q + 2.0 * (q * (1.0 - 4.0 * q)).sqrt()) / den).sqrt())
}

/// Expanded closed form of the minimum simultaneous product. `None` where
/// its denominator vanishes (`w+ ∈ {0, 1/2, 1}` and `w+ w- = 1/8`).
pub fn expanded_minimum(w_plus: f64) -> Option<f64> {
    let q = w_plus * (1.0 - w_plus);
    let u = q * (1.0 - 4.0 * q);
    let root = u.max(0.0).sqrt();
    let num = -16.0 * q * q * (1.0 - 4.0 * q).powi(2) + (1.0 - 12.0 * u) * root;
    let den = 16.0 * (-4.0 * u + root);
    (den.abs() >= EXPANDED_SINGULAR_BAND).then(|| num / den)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimumReport {
    pub w_plus: f64,
    /// Expanded closed form, when defined.
    pub expanded: Option<f64>,
    /// Product evaluated at [`optimal_entanglement`].
    pub at_optimal_c: f64,
    /// Golden-section minimum over `c ∈ (0, 1)`.
    pub numeric: f64,
    pub numeric_c: f64,
    /// `(1 + VP)²/16`.
    pub plus_form: f64,
    /// `(1 - VP)²/16`.
    pub minus_form: f64,
    /// Evaluated through analytic limits (`w+ ∈ {0, 1/2, 1}`).
    pub limit: bool,
}

impl MinimumReport {
    /// The minimum, taken from the optimal-c route.
    pub fn value(&self) -> f64 {
        self.at_optimal_c
    }

    /// Largest pairwise gap between the available routes.
    pub fn route_spread(&self) -> f64 {
        let mut vals = vec![self.at_optimal_c, self.numeric];
        vals.extend(self.expanded);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    pub fn matches_plus_form(&self, tol: f64) -> bool {
        (self.value() - self.plus_form).abs() <= tol
    }

    pub fn matches_minus_form(&self, tol: f64) -> bool {
        (self.value() - self.minus_form).abs() <= tol
    }
}

/// Minimum over `c` of the simultaneous product, by three routes.
pub fn minimum_simultaneous_product(w_plus: f64) -> Result<MinimumReport> {
    let opt = optimal_entanglement(w_plus)?;
    let rho = DensityMatrix::pure(w_plus, 0.0)?;
    let vp = visibility(&rho) * predictability(&rho);
    let at_opt = simultaneous_product(w_plus, opt.c)?;

    let numeric =
        golden_section(|c| simultaneous_product(w_plus, c).map(|p| p.value).unwrap_or(f64::INFINITY), 0.0, 1.0, 1e-12);
    let limit = at_opt.limit;
    Ok(MinimumReport {
        w_plus,
        expanded: if limit { None } else { expanded_minimum(w_plus) },
        at_optimal_c: at_opt.value,
        numeric: numeric.value,
        numeric_c: numeric.x,
        plus_form: (1.0 + vp).powi(2) / 16.0,
        minus_form: (1.0 - vp).powi(2) / 16.0,
        limit,
    })
}

fn require_open_unit(c: f64, what: &str) -> Result<()> {
    if c > 0.0 && c < 1.0 {
        Ok(())
    } else {
        Err(Error::Singular(format!("{what} is undefined at c = {c}; need 0 < c < 1")))
    }
}
