//! Derivative-free scalar minimisation.

/// Inverse golden ratio, `(√5 - 1)/2`.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
///
/// Only interior points are evaluated, so `f` may be singular at the bracket
/// ends. Stops once the bracket is narrower than `x_tol`.
pub fn golden_section<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    assert!(lo < hi, "golden_section: empty bracket [{lo}, {hi}]");
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > x_tol && iterations < 500 {
        iterations += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        Minimum { x: x1, value: f1, iterations }
    } else {
        Minimum { x: x2, value: f2, iterations }
    }
}
