//! Predictability and visibility of a two-level state, their duals with
//! respect to a complementary observable, and a brute-force fringe scan.

use std::f64::consts::{FRAC_PI_2, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::CVec2;
use crate::state::{beam_splitter, phase_shift, DensityMatrix};

/// Smallest accepted grid resolution for [`visibility_oracle`].
pub const MIN_GRID: usize = 8;

/// Default grid resolution per axis.
pub const DEFAULT_GRID: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

/// Maximum-likelihood guess for a sharp `Â` measurement. Ties go to `Plus`.
pub fn ml_guess(rho: &DensityMatrix) -> Outcome {
    if rho.w_plus() >= rho.w_minus() {
        Outcome::Plus
    } else {
        Outcome::Minus
    }
}

/// Likelihood of the ML guess, `max(w+, w-)`.
pub fn likelihood(rho: &DensityMatrix) -> f64 {
    rho.w_plus().max(rho.w_minus())
}

/// `P = |w+ - w-| = 2L - 1`.
pub fn predictability(rho: &DensityMatrix) -> f64 {
    (rho.w_plus() - rho.w_minus()).abs()
}

/// Probability of outcome `A+` after the phase shifter and beamsplitter.
pub fn fringe_probability(rho: &DensityMatrix, phi: f64, xi: f64) -> f64 {
    let u = beam_splitter(xi) * phase_shift(phi);
    let out = u * rho.matrix() * u.adjoint();
    out.expectation(&CVec2::basis(0)).re
}

/// `V = 2 |<A+|ρ|A->| = 2 ρ12`.
pub fn visibility(rho: &DensityMatrix) -> f64 {
    2.0 * rho.rho12()
}

/// `P_B = 2 ρ12 |cos(θ - ϱ)|`.
pub fn predictability_of_b(rho: &DensityMatrix, varrho: f64) -> f64 {
    2.0 * rho.rho12() * (rho.theta() - varrho).cos().abs()
}

/// `V_B = sqrt(w+² + w-² - 2 w+ w- + 4 ρ12² sin²(θ - ϱ))`.
pub fn visibility_of_b(rho: &DensityMatrix, varrho: f64) -> f64 {
    let (wp, wm) = (rho.w_plus(), rho.w_minus());
    let s = (rho.theta() - varrho).sin();
    (wp * wp + wm * wm - 2.0 * wp * wm + 4.0 * rho.rho12().powi(2) * s * s).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityReport {
    pub p: f64,
    pub v: f64,
    pub sum_sq: f64,
    pub purity: f64,
}

pub fn duality(rho: &DensityMatrix) -> DualityReport {
    let p = predictability(rho);
    let v = visibility(rho);
    DualityReport { p, v, sum_sq: p * p + v * v, purity: rho.purity() }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FringeScan {
    /// `(p_max - p_min)/(p_max + p_min)` at the selected beamsplitter angle.
    pub visibility: f64,
    /// Selected beamsplitter angle folded into `[0, π/2)`.
    pub xi: f64,
    /// Fringe swing `p_max - p_min` at that angle.
    pub swing: f64,
}

/// Grid search of the fringe over `(φ, ξ) ∈ [0, 2π)²`.
///
/// For every beamsplitter angle the fringe is scanned over `φ`; the angle with
/// the largest swing `max_φ p - min_φ p` is kept and its contrast returned.
pub fn visibility_oracle(rho: &DensityMatrix, grid_n: usize) -> Result<FringeScan> {
    if grid_n < MIN_GRID {
        return Err(Error::domain(format!("grid_n = {grid_n} must be at least {MIN_GRID}")));
    }
    let step = TAU / grid_n as f64;
    let extremes: Vec<(f64, f64)> = (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let xi = i as f64 * step;
            (0..grid_n).fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), j| {
                let p = fringe_probability(rho, j as f64 * step, xi);
                (hi.max(p), lo.min(p))
            })
        })
        .collect();

    let mut best = 0;
    for (i, &(hi, lo)) in extremes.iter().enumerate() {
        let (bh, bl) = extremes[best];
        if hi - lo > bh - bl {
            best = i;
        }
    }
    let (hi, lo) = extremes[best];
    Ok(FringeScan { visibility: (hi - lo) / (hi + lo), xi: (best as f64 * step).rem_euclid(FRAC_PI_2), swing: hi - lo })
}
