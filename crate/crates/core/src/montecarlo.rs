//! Finite-sample simulation of the sharp and unsharp measurements.
//!
//! Shots are split into fixed-size shards; shard `k` draws from a ChaCha8
//! stream `(seed, k)`, so results do not depend on the thread count. Shard
//! counts are integers and merge by addition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::complementarity::fringe_probability;
use crate::error::{Error, Result};
use crate::simultaneous::{estimate_a, estimate_b, meter_projectors, EntangledState};
use crate::state::{DensityMatrix, Gauge, Observable};
use crate::uncertainty::{mean_var, Moments};

/// Shots per shard.
const SHARD: u64 = 1 << 16;

/// Two-sided z-score gate.
pub const Z_GATE: f64 = 4.0;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn shards(n: u64) -> impl ParallelIterator<Item = (u64, u64)> {
    let count = n.div_ceil(SHARD);
    (0..count).into_par_iter().map(move |k| (k, SHARD.min(n - k * SHARD)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleReport {
    pub n: u64,
    pub empirical_mean: f64,
    /// Population variance of the sample (divides by `n`).
    pub empirical_variance: f64,
    pub analytic_mean: f64,
    pub analytic_variance: f64,
    pub z_mean: f64,
    pub z_variance: f64,
    pub seed: u64,
    /// `n = 1`: the empirical variance is identically zero.
    pub degenerate: bool,
    /// Some `|z| > 4`.
    pub outlier: bool,
}

impl SampleReport {
    /// Report for a two-valued outcome with `counts[i]` hits on `values[i]`,
    /// tested against `analytic` moments.
    ///
    /// Standard errors come from the two-point distribution with the given
    /// outcome probabilities; the variance uses its fourth central moment.
    pub fn from_counts(
        values: [f64; 2],
        counts: [u64; 2],
        probabilities: [f64; 2],
        analytic: Moments,
        seed: u64,
    ) -> Self {
        let n = counts[0] + counts[1];
        let nf = n as f64;
        let f = [counts[0] as f64 / nf, counts[1] as f64 / nf];
        let empirical_mean = values[0] * f[0] + values[1] * f[1];
        let d = values[0] - values[1];
        let empirical_variance = d * d * f[0] * f[1];

        let pq = probabilities[0] * probabilities[1];
        let sigma2 = d * d * pq;
        let fourth = d.powi(4) * pq * (1.0 - 3.0 * pq);

        let z_mean = z(empirical_mean - analytic.mean, (sigma2 / nf).sqrt());
        let degenerate = n == 1;
        let z_variance = if degenerate {
            0.0
        } else {
            z(empirical_variance - analytic.variance, ((fourth - sigma2 * sigma2).max(0.0) / nf).sqrt())
        };
        SampleReport {
            n,
            empirical_mean,
            empirical_variance,
            analytic_mean: analytic.mean,
            analytic_variance: analytic.variance,
            z_mean,
            z_variance,
            seed,
            degenerate,
            outlier: z_mean.abs() > Z_GATE || z_variance.abs() > Z_GATE,
        }
    }

    pub fn z_scores(&self) -> [f64; 2] {
        [self.z_mean, self.z_variance]
    }
}

/// `diff / se`, with a zero standard error meaning exact agreement is
/// required (up to rounding).
fn z(diff: f64, se: f64) -> f64 {
    if se > 0.0 {
        diff / se
    } else if diff.abs() <= 1e-12 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    }
}

fn require_shots(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("sample count must be at least 1"))
    } else {
        Ok(())
    }
}

/// Sharp measurement of `obs` on `rho`, `n` shots.
pub fn sample_sharp(rho: &DensityMatrix, obs: &Observable, n: u64, seed: u64) -> Result<SampleReport> {
    require_shots(n)?;
    let p = obs.probabilities(rho);
    let hits: u64 = shards(n)
        .map(|(k, len)| {
            let mut r = rng(seed, k);
            (0..len).filter(|_| r.random::<f64>() < p[0]).count() as u64
        })
        .sum();
    Ok(SampleReport::from_counts(obs.values(), [hits, n - hits], p, mean_var(rho, obs), seed))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FringeSample {
    /// `(f_max - f_min)/(f_max + f_min)` over the empirical frequencies.
    pub visibility: f64,
    pub frequencies: Vec<f64>,
}

/// Binomial sampling of the fringe at each phase in `phi_grid`.
pub fn sample_fringe(
    rho: &DensityMatrix,
    phi_grid: &[f64],
    xi: f64,
    n_per_point: u64,
    seed: u64,
) -> Result<FringeSample> {
    require_shots(n_per_point)?;
    if phi_grid.is_empty() {
        return Err(Error::domain("phase grid is empty"));
    }
    let frequencies: Vec<f64> = phi_grid
        .par_iter()
        .enumerate()
        .map(|(k, &phi)| {
            let p = fringe_probability(rho, phi, xi).clamp(0.0, 1.0);
            let hits = Binomial::new(n_per_point, p).expect("p clamped to [0, 1]").sample(&mut rng(seed, k as u64));
            hits as f64 / n_per_point as f64
        })
        .collect();
    let hi = frequencies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = frequencies.iter().cloned().fold(f64::INFINITY, f64::min);
    let visibility = if hi + lo > 0.0 { (hi - lo) / (hi + lo) } else { 0.0 };
    Ok(FringeSample { visibility, frequencies })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimultaneousSample {
    pub a: SampleReport,
    pub b: SampleReport,
    /// `joint_counts[i][j]`: meter outcome `M_{i+1}`, system outcome `B±` (`j = 0` is `B+`).
    pub joint_counts: [[u64; 2]; 2],
    /// The same table from the 4-dimensional state.
    pub joint_probabilities: [[f64; 2]; 2],
}

impl SimultaneousSample {
    /// Largest |z| of the joint counts against their probabilities.
    pub fn joint_max_z(&self) -> f64 {
        let n = self.a.n as f64;
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                let p = self.joint_probabilities[i][j];
                let f = self.joint_counts[i][j] as f64 / n;
                worst = worst.max(z(f - p, (p * (1.0 - p) / n).sqrt()).abs());
            }
        }
        worst
    }
}

/// [`sample_simultaneous_with`] in the default gauge `A = B = 1/2`.
pub fn sample_simultaneous(psi: &EntangledState, varrho: f64, n: u64, seed: u64) -> Result<SimultaneousSample> {
    sample_simultaneous_with(psi, &Gauge::default(), varrho, n, seed)
}

/// Meter measurement in `{|M1>, |M2>}`, projection of the system, then a
/// sharp `B̂(ϱ)` measurement on the conditional system state.
pub fn sample_simultaneous_with(
    psi: &EntangledState,
    gauge: &Gauge,
    varrho: f64,
    n: u64,
    seed: u64,
) -> Result<SimultaneousSample> {
    require_shots(n)?;
    let ea = estimate_a(psi, gauge.a)?;
    let eb = estimate_b(psi, varrho, gauge.b)?;
    let meter = meter_projectors(psi.c(), gauge.a)?;
    let basis = gauge.family(varrho).eigenstates();

    let p_meter = ea.probabilities;
    let p_b_given = meter.states().map(|m| {
        let cond = psi.amplitudes().contract_meter(&m);
        let norm = cond.norm_sqr();
        if norm > 0.0 {
            basis[0].inner(&cond).norm_sqr() / norm
        } else {
            0.0
        }
    });

    let joint_counts = shards(n)
        .map(|(k, len)| {
            let mut r = rng(seed, k);
            let mut t = [[0u64; 2]; 2];
            for _ in 0..len {
                let i = usize::from(r.random::<f64>() >= p_meter[0]);
                let j = usize::from(r.random::<f64>() >= p_b_given[i]);
                t[i][j] += 1;
            }
            t
        })
        .reduce(
            || [[0u64; 2]; 2],
            |mut acc, t| {
                for i in 0..2 {
                    for j in 0..2 {
                        acc[i][j] += t[i][j];
                    }
                }
                acc
            },
        );

    let a_counts = [joint_counts[0][0] + joint_counts[0][1], joint_counts[1][0] + joint_counts[1][1]];
    let b_counts = [joint_counts[0][0] + joint_counts[1][0], joint_counts[0][1] + joint_counts[1][1]];
    let closed = |mean, variance| Moments { mean, variance };
    let a = SampleReport::from_counts(
        ea.values,
        a_counts,
        ea.probabilities,
        closed(ea.closed_mean, ea.closed_variance),
        seed,
    );
    let b = SampleReport::from_counts(
        eb.values,
        b_counts,
        eb.probabilities,
        closed(eb.closed_mean, eb.closed_variance),
        seed,
    );
    Ok(SimultaneousSample { a, b, joint_counts, joint_probabilities: psi.joint_probabilities(&meter, &basis) })
}
