//! Two-level states and observables.
//!
//! A [`DensityMatrix`] is stored through its canonical parameters
//! `(w+, ρ12, θ)` in the `|A+>, |A->` basis:
//!
//! ```text
//!   [ w+            ρ12 e^{-iθ} ]
//!   [ ρ12 e^{iθ}    w-          ]      w- = 1 - w+
//! ```
//!
//! Complementary observables are built from a reference observable `Â` as
//! `B̂(ϱ) = B+|B+><B+| + B-|B-><B-|` with `|B±> = (|A+> ± e^{iϱ}|A->)/√2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use crate::error::{Error, Result};
use crate::linalg::{c, cis, cr, CMat2, CVec2, C64, STRUCTURE_TOL};

/// Slack allowed on the positivity bound `ρ12 ≤ sqrt(w+ w-)`.
pub const POSITIVITY_TOL: f64 = 1e-12;

/// Purity at or above `1 - PURE_TOL` counts as a pure state.
pub const PURE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    w_plus: f64,
    rho12: f64,
    theta: f64,
}

impl DensityMatrix {
    /// General two-level state from its canonical parameters.
    ///
    /// `theta` is reduced to `[0, 2π)`; it is reported as 0 when `rho12 == 0`.
    pub fn new(w_plus: f64, rho12: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w_plus) {
            return Err(Error::domain(format!("w_plus = {w_plus} must lie in [0, 1]")));
        }
        if !theta.is_finite() {
            return Err(Error::domain(format!("theta = {theta} must be finite")));
        }
        let bound = (w_plus * (1.0 - w_plus)).sqrt();
        if rho12.is_nan() || rho12 < 0.0 || rho12 > bound + POSITIVITY_TOL {
            return Err(Error::domain(format!(
                "rho12 = {rho12} violates 0 <= rho12 <= sqrt(w_plus * w_minus) = {bound}"
            )));
        }
        let rho12 = rho12.min(bound);
        let theta = if rho12 == 0.0 { 0.0 } else { theta.rem_euclid(TAU) };
        Ok(DensityMatrix { w_plus, rho12, theta })
    }

    /// Pure state `sqrt(w+)|A+> + e^{iθ} sqrt(w-)|A->`.
    pub fn pure(w_plus: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w_plus) {
            return Err(Error::domain(format!("w_plus = {w_plus} must lie in [0, 1]")));
        }
        Self::new(w_plus, (w_plus * (1.0 - w_plus)).sqrt(), theta)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix { w_plus: 0.5, rho12: 0.0, theta: 0.0 }
    }

    /// Re-extracts canonical parameters from a matrix in the `|A±>` basis.
    pub fn from_matrix(m: &CMat2) -> Result<Self> {
        m.require_hermitian()?;
        let tr = m.trace().re;
        if (tr - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::domain(format!("trace = {tr} must equal 1")));
        }
        let lower = m.0[1][0];
        let rho12 = lower.norm();
        let theta = if rho12 == 0.0 { 0.0 } else { lower.arg() };
        let w_plus = m.0[0][0].re.clamp(0.0, 1.0);
        Self::new(w_plus, rho12, theta)
    }

    pub fn w_plus(&self) -> f64 {
        self.w_plus
    }

    pub fn w_minus(&self) -> f64 {
        1.0 - self.w_plus
    }

    pub fn rho12(&self) -> f64 {
        self.rho12
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn matrix(&self) -> CMat2 {
        let off = cis(self.theta) * self.rho12;
        CMat2::new(cr(self.w_plus), off.conj(), off, cr(self.w_minus()))
    }

    /// `Tr ρ² = 1 - 2 w+ w- + 2 ρ12²`.
    pub fn purity(&self) -> f64 {
        1.0 - 2.0 * self.w_plus * self.w_minus() + 2.0 * self.rho12 * self.rho12
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - PURE_TOL
    }

    /// State vector for pure states, `None` otherwise.
    pub fn ket(&self) -> Option<CVec2> {
        self.is_pure().then(|| CVec2::new(cr(self.w_plus.sqrt()), cis(self.theta) * self.w_minus().sqrt()))
    }

    /// `Tr(ρ O)`.
    pub fn expect(&self, op: &CMat2) -> C64 {
        (self.matrix() * *op).trace()
    }
}

/// Non-degenerate Hermitian two-level operator `v+ P+ + v- P-`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observable {
    val_plus: f64,
    val_minus: f64,
    basis: [CVec2; 2],
}

impl Observable {
    pub fn new(val_plus: f64, val_minus: f64, basis: [CVec2; 2]) -> Result<Self> {
        if val_plus == val_minus || !val_plus.is_finite() || !val_minus.is_finite() {
            return Err(Error::domain(format!(
                "observable needs distinct finite eigenvalues, got {val_plus} and {val_minus}"
            )));
        }
        let defect =
            (basis[0].norm() - 1.0).abs().max((basis[1].norm() - 1.0).abs()).max(basis[0].inner(&basis[1]).norm());
        if defect > STRUCTURE_TOL {
            return Err(Error::domain(format!("eigenbasis is not orthonormal (defect {defect:e})")));
        }
        Ok(Observable { val_plus, val_minus, basis })
    }

    /// Observable diagonal in the `|A±>` basis.
    pub fn reference(a_plus: f64, a_minus: f64) -> Result<Self> {
        Self::new(a_plus, a_minus, [CVec2::basis(0), CVec2::basis(1)])
    }

    pub fn val_plus(&self) -> f64 {
        self.val_plus
    }

    pub fn val_minus(&self) -> f64 {
        self.val_minus
    }

    /// `v+ - v-`.
    pub fn spread(&self) -> f64 {
        self.val_plus - self.val_minus
    }

    pub fn basis(&self) -> &[CVec2; 2] {
        &self.basis
    }

    pub fn ket_plus(&self) -> CVec2 {
        self.basis[0]
    }

    pub fn ket_minus(&self) -> CVec2 {
        self.basis[1]
    }

    pub fn values(&self) -> [f64; 2] {
        [self.val_plus, self.val_minus]
    }

    pub fn matrix(&self) -> CMat2 {
        self.basis[0].projector().scale(cr(self.val_plus)) + self.basis[1].projector().scale(cr(self.val_minus))
    }

    /// Outcome probabilities `<e±|ρ|e±>` for a sharp measurement.
    pub fn probabilities(&self, rho: &DensityMatrix) -> [f64; 2] {
        let m = rho.matrix();
        [m.expectation(&self.basis[0]).re, m.expectation(&self.basis[1]).re]
    }
}

/// The one-parameter family `B̂(ϱ)` complementary to a reference observable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplementaryFamily {
    pub reference: Observable,
    pub varrho: f64,
    pub b_plus: f64,
    pub b_minus: f64,
}

impl ComplementaryFamily {
    pub fn new(reference: Observable, varrho: f64, b_plus: f64, b_minus: f64) -> Self {
        ComplementaryFamily { reference, varrho, b_plus, b_minus }
    }

    /// `(|A+> ± e^{iϱ}|A->)/√2`.
    pub fn eigenstates(&self) -> [CVec2; 2] {
        let a_plus = self.reference.ket_plus();
        let a_minus = self.reference.ket_minus().scale(cis(self.varrho));
        let s = cr(FRAC_1_SQRT_2);
        [(a_plus + a_minus).scale(s), (a_plus - a_minus).scale(s)]
    }

    pub fn with_varrho(&self, varrho: f64) -> Self {
        ComplementaryFamily { varrho, ..*self }
    }
}

/// Member `B̂(ϱ)` of a complementary family.
pub fn complementary_observable(family: &ComplementaryFamily) -> Result<Observable> {
    if family.b_plus == family.b_minus {
        return Err(Error::domain(format!("complementary observable needs B+ != B-, both are {}", family.b_plus)));
    }
    Observable::new(family.b_plus, family.b_minus, family.eigenstates())
}

/// Generalised phase shifter `diag(1, e^{iφ})`.
pub fn phase_shift(phi: f64) -> CMat2 {
    CMat2::new(cr(1.0), cr(0.0), cr(0.0), cis(phi))
}

/// Generalised beamsplitter `[[cos ξ, i sin ξ], [i sin ξ, cos ξ]]`.
pub fn beam_splitter(xi: f64) -> CMat2 {
    let (s, co) = xi.sin_cos();
    CMat2::new(cr(co), c(0.0, s), c(0.0, s), cr(co))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Handedness {
    /// Third member is `B̂(ϱ + π/2)`.
    Right,
    /// Third member is `B̂(ϱ - π/2)`.
    Left,
}

impl Handedness {
    pub fn sign(self) -> f64 {
        match self {
            Handedness::Right => 1.0,
            Handedness::Left => -1.0,
        }
    }
}

/// `(Â, B̂(ϱ), B̂(ϱ ± π/2))`, a set of three mutually complementary operators.
///
/// The two `B̂` members reuse the eigenvalues of `Â`.
pub fn complementary_triplet(
    a: &Observable,
    varrho: f64,
    handedness: Handedness,
) -> (Observable, Observable, Observable) {
    let family = ComplementaryFamily::new(*a, varrho, a.val_plus, a.val_minus);
    let second = complementary_observable(&family).expect("values of a valid observable are distinct");
    let third = complementary_observable(&family.with_varrho(varrho + handedness.sign() * PI / 2.0))
        .expect("values of a valid observable are distinct");
    (*a, second, third)
}

/// Largest deviation of `|<e_i|f_j>|²` from 1/2 over both eigenbases.
pub fn unbiasedness_defect(x: &Observable, y: &Observable) -> f64 {
    let mut worst = 0.0_f64;
    for e in x.basis() {
        for f in y.basis() {
            worst = worst.max((e.inner(f).norm_sqr() - 0.5).abs());
        }
    }
    worst
}

/// Two-mode particle-number difference `(n1 - n2)/2` on the single-particle
/// manifold `|1,0> ≡ |A+>`, `|0,1> ≡ |A->`.
pub fn number_difference() -> Observable {
    Observable::reference(0.5, -0.5).expect("distinct values")
}

/// Two-mode phase-difference operator on the single-particle manifold, with
/// eigenvalues `theta_val` and `theta_val + π` on `(|1,0> ± e^{iϱ}|0,1>)/√2`.
///
/// `theta_val` is an eigenvalue offset, unrelated to the state phase θ.
pub fn phase_difference_realization(theta_val: f64, varrho: f64) -> Observable {
    let family = ComplementaryFamily::new(number_difference(), varrho, theta_val, theta_val + PI);
    complementary_observable(&family).expect("theta and theta + pi are distinct")
}

/// Symmetric eigenvalue gauge `A+ = -A- = a`, `B+ = -B- = b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gauge {
    pub a: f64,
    pub b: f64,
}

impl Default for Gauge {
    fn default() -> Self {
        Gauge { a: 0.5, b: 0.5 }
    }
}

impl Gauge {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::domain(format!("gauge values must be positive, got a = {a}, b = {b}")));
        }
        Ok(Gauge { a, b })
    }

    pub fn observable_a(&self) -> Observable {
        Observable::reference(self.a, -self.a).expect("a > 0")
    }

    pub fn family(&self, varrho: f64) -> ComplementaryFamily {
        ComplementaryFamily::new(self.observable_a(), varrho, self.b, -self.b)
    }

    pub fn observable_b(&self, varrho: f64) -> Observable {
        complementary_observable(&self.family(varrho)).expect("b > 0")
    }
}
