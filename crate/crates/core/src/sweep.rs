//! Figure data: per-`w+` rows of the duality, product and simultaneous
//! measurement curves, sampled uniformly in `α` with `w+ = sin²α`.

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::complementarity::{predictability, visibility};
use crate::error::{Error, Result};
use crate::simultaneous::{
    distinguishability, entangle, entangled_visibility, minimum_simultaneous_product, optimal_entanglement,
};
use crate::state::DensityMatrix;
use crate::uncertainty::normalized_product_bounds;

pub const CSV_HEADER: &str = "w_plus,P,V,product_min,product_max,D,V_e,c_opt,sim_product_min";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// Sharp measurement: `D` and `V_e` at `c = 1` (no entanglement).
    Products,
    /// Simultaneous measurement: `D` and `V_e` at the optimal `c`.
    Simultaneous,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub w_plus: f64,
    pub p: f64,
    pub v: f64,
    pub product_min: f64,
    pub product_max: f64,
    pub d: f64,
    pub v_e: f64,
    pub c_opt: f64,
    pub sim_product_min: f64,
}

impl SweepRow {
    pub fn at(w_plus: f64, figure: Figure) -> Result<Self> {
        let rho = DensityMatrix::pure(w_plus, 0.0)?;
        let bounds = normalized_product_bounds(w_plus)?;
        let c_opt = optimal_entanglement(w_plus)?.c;
        let c = match figure {
            Figure::Products => 1.0,
            Figure::Simultaneous => c_opt,
        };
        let psi = entangle(w_plus, 0.0, c)?;
        Ok(SweepRow {
            w_plus,
            p: predictability(&rho),
            v: visibility(&rho),
            product_min: bounds.min,
            product_max: bounds.max,
            d: distinguishability(&psi),
            v_e: entangled_visibility(&psi),
            c_opt,
            sim_product_min: minimum_simultaneous_product(w_plus)?.value(),
        })
    }

    pub fn fields(&self) -> [f64; 9] {
        [
            self.w_plus,
            self.p,
            self.v,
            self.product_min,
            self.product_max,
            self.d,
            self.v_e,
            self.c_opt,
            self.sim_product_min,
        ]
    }

    /// One CSV line (no terminator), 17 significant digits.
    pub fn to_csv(&self) -> String {
        self.fields().iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(",")
    }
}

/// `w+ = sin²(α_k)`, `α_k = k (π/2)/(points - 1)`.
///
/// Evaluated as `(1 - cos 2α_k)/2` with `cos 2α_k = sin(m π/(2(points - 1)))`,
/// `m = points - 1 - 2k`, so that the grid is exactly symmetric about
/// `w+ = 1/2` and hits `0`, `1/2` and `1` exactly.
pub fn sweep(figure: Figure, points: usize) -> Result<Vec<SweepRow>> {
    if points < 2 {
        return Err(Error::domain(format!("points = {points} must be at least 2")));
    }
    let last = (points - 1) as i64;
    (0..points)
        .into_par_iter()
        .map(|k| {
            let m = last - 2 * k as i64;
            let low = 0.5 * (1.0 - (m.abs() as f64 * FRAC_PI_2 / last as f64).sin());
            let w = if m >= 0 { low } else { 1.0 - low };
            SweepRow::at(w, figure)
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    out.flush()
}
