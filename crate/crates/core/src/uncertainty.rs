//! Moments, the Robertson inequality and Robertson intelligent states.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::linalg::{c, cis, cr, CMat2, CVec2, C64};
use crate::state::{DensityMatrix, Observable};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// `<O> = Tr(ρ O)` and `<ΔO²> = Tr(ρ O²) - <O>²`.
pub fn mean_var(rho: &DensityMatrix, obs: &Observable) -> Moments {
    let m = obs.matrix();
    let mean = rho.expect(&m).re;
    let second = rho.expect(&(m * m)).re;
    Moments { mean, variance: (second - mean * mean).max(0.0) }
}

/// Both sides of `<ΔA²><ΔB²> ≥ (<C>² + <F>²)/4`, where `C = -i[A, B]` and
/// `<F> = <AB + BA> - 2<A><B>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobertsonReport {
    pub var_a: f64,
    pub var_b: f64,
    pub c_mean: f64,
    pub f_mean: f64,
    pub lhs: f64,
    pub rhs: f64,
}

pub fn robertson(rho: &DensityMatrix, a: &Observable, b: &Observable) -> RobertsonReport {
    let (am, bm) = (a.matrix(), b.matrix());
    let ma = mean_var(rho, a);
    let mb = mean_var(rho, b);
    let c_op = am.commutator(&bm).scale(c(0.0, -1.0));
    let c_mean = rho.expect(&c_op).re;
    let f_mean = rho.expect(&am.anticommutator(&bm)).re - 2.0 * ma.mean * mb.mean;
    RobertsonReport {
        var_a: ma.variance,
        var_b: mb.variance,
        c_mean,
        f_mean,
        lhs: ma.variance * mb.variance,
        rhs: 0.25 * (c_mean * c_mean + f_mean * f_mean),
    }
}

/// `<ΔA²><ΔB²> / ((A+ - A-)²(B+ - B-)²)`.
pub fn normalized_product(rho: &DensityMatrix, a: &Observable, b: &Observable) -> f64 {
    let r = robertson(rho, a, b);
    r.lhs / (a.spread() * b.spread()).powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductBounds {
    pub min: f64,
    pub max: f64,
}

/// Range of the normalised uncertainty product over pure states with given
/// `w+`: `w+ w- (1 - 4 w+ w-)/4` for the proper `B̂`, `w+ w-/4` for the
/// erasure phase.
pub fn normalized_product_bounds(w_plus: f64) -> Result<ProductBounds> {
    if !(0.0..=1.0).contains(&w_plus) {
        return Err(Error::domain(format!("w_plus = {w_plus} must lie in [0, 1]")));
    }
    let q = w_plus * (1.0 - w_plus);
    Ok(ProductBounds { min: q * (1.0 - 4.0 * q) / 4.0, max: q / 4.0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsFamily {
    /// Imaginary λ: `sqrt(w+)|A+> ± e^{iϱ} sqrt(w-)|A->`, parameter `w+`.
    Is1,
    /// Real λ, equal weights: `(|A+> ± e^{i(ϱ ± β)}|A->)/√2`, parameter `β`.
    Is2a,
    /// Real λ, unequal weights: `sqrt(w+)|A+> ± i e^{iϱ} sqrt(w-)|A->`, parameter `w+`.
    Is2b,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// A pure state solving `(Â + iλB̂)|ψ> = (<Â> + iλ<B̂>)|ψ>`.
///
/// `lambda` is given for observables with equal spreads `A+ - A- = B+ - B-`;
/// see [`IntelligentState::lambda_for`]. It is non-finite for eigenstates of
/// `B̂`, which solve the equation only in the limit `|λ| → ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntelligentState {
    pub state: DensityMatrix,
    pub ket: CVec2,
    pub lambda: C64,
    pub family: IsFamily,
    pub branch: Branch,
    pub varrho: f64,
}

impl IntelligentState {
    /// λ rescaled for a concrete pair `(Â, B̂(ϱ))`.
    pub fn lambda_for(&self, a: &Observable, b: &Observable) -> C64 {
        self.lambda * (a.spread() / b.spread())
    }
}

pub fn intelligent_state(family: IsFamily, param: f64, varrho: f64, branch: Branch) -> Result<IntelligentState> {
    let s = branch.sign();
    let (w_plus, rel_phase, lambda) = match family {
        IsFamily::Is1 | IsFamily::Is2b => {
            if !(0.0..=1.0).contains(&param) {
                return Err(Error::domain(format!("w_plus = {param} must lie in [0, 1]")));
            }
            let w = param;
            let root = (w * (1.0 - w)).sqrt();
            if family == IsFamily::Is1 {
                let gap = 2.0 * w - 1.0;
                let lambda = if gap == 0.0 { c(0.0, f64::INFINITY) } else { c(0.0, -s * 2.0 * root / gap) };
                (w, if s > 0.0 { 0.0 } else { std::f64::consts::PI }, lambda)
            } else {
                (w, s * FRAC_PI_2, cr(s * 2.0 * root))
            }
        }
        IsFamily::Is2a => {
            if !(0.0..=FRAC_PI_2).contains(&param) {
                return Err(Error::domain(format!("beta = {param} must lie in [0, pi/2]")));
            }
            let beta = param;
            let phase = if s > 0.0 { beta } else { std::f64::consts::PI - beta };
            let lambda = if beta == 0.0 { cr(f64::INFINITY) } else { cr(1.0 / beta.sin()) };
            (0.5, phase, lambda)
        }
    };
    let theta = varrho + rel_phase;
    let state = DensityMatrix::pure(w_plus, theta)?;
    let ket = CVec2::new(cr(w_plus.sqrt()), cis(theta) * (1.0 - w_plus).sqrt());
    Ok(IntelligentState { state, ket, lambda, family, branch, varrho })
}

/// `|| (Â + iλB̂)|ψ> - (<Â> + iλ<B̂>)|ψ> ||` for a pure state.
///
/// For non-finite `lambda` the limiting condition `|| (B̂ - <B̂>)|ψ> ||` is used.
pub fn is_residual(state: &DensityMatrix, lambda: C64, a: &Observable, b: &Observable) -> Result<f64> {
    let psi = state.ket().ok_or(Error::MixedState { purity: state.purity() })?;
    residual_of_ket(&psi, lambda, &a.matrix(), &b.matrix())
}

pub(crate) fn residual_of_ket(psi: &CVec2, lambda: C64, a: &CMat2, b: &CMat2) -> Result<f64> {
    let ea = a.expectation(psi);
    let eb = b.expectation(psi);
    let i = c(0.0, 1.0);
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Ok((b.apply(psi) - psi.scale(eb)).norm());
    }
    let op = *a + b.scale(i * lambda);
    Ok((op.apply(psi) - psi.scale(ea + i * lambda * eb)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complementarity::{predictability, visibility};
    use crate::state::testutil::arb_density;
    use crate::state::{complementary_observable, ComplementaryFamily, Gauge};
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    const FAMILIES: [IsFamily; 3] = [IsFamily::Is1, IsFamily::Is2a, IsFamily::Is2b];

    fn pure(w: f64, th: f64) -> DensityMatrix {
        DensityMatrix::pure(w, th).unwrap()
    }

    #[test]
    fn mean_var_examples() {
        let a = Observable::reference(0.5, -0.5).unwrap();
        let m = mean_var(&pure(1.0, 0.0), &a);
        assert_eq!((m.mean, m.variance), (0.5, 0.0));

        let rho = DensityMatrix::new(0.75, 0.2, 0.4).unwrap();
        let m = mean_var(&rho, &a);
        assert!((m.mean - 0.25).abs() < 1e-15);
        assert!((m.variance - 0.1875).abs() < 1e-15);

        let rho = pure(0.9, 0.8);
        let b = Gauge::default().observable_b(rho.theta());
        let m = mean_var(&rho, &b);
        assert!((m.variance - 0.16).abs() < 1e-14);
    }

    #[test]
    fn robertson_examples() {
        let g = Gauge::default();
        let a = g.observable_a();
        for k in 0..8 {
            let b = g.observable_b(k as f64 * 0.7);
            let r = robertson(&pure(1.0, 0.0), &a, &b);
            assert!(r.lhs.abs() < 1e-15 && r.rhs.abs() < 1e-15);
            assert!(r.c_mean.abs() < 1e-15 && r.f_mean.abs() < 1e-15);
        }

        let a = Observable::reference(2.0, -1.0).unwrap();
        let b = complementary_observable(&ComplementaryFamily::new(a, 0.4, 1.5, 0.5)).unwrap();
        let r = robertson(&DensityMatrix::maximally_mixed(), &a, &b);
        assert!(r.c_mean.abs() < 1e-15 && r.f_mean.abs() < 1e-15);
        assert!((r.lhs - 9.0 * 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn product_bounds_examples() {
        assert_eq!(normalized_product_bounds(0.5).unwrap(), ProductBounds { min: 0.0, max: 1.0 / 16.0 });
        assert_eq!(normalized_product_bounds(0.0).unwrap(), ProductBounds { min: 0.0, max: 0.0 });
        assert_eq!(normalized_product_bounds(1.0).unwrap(), ProductBounds { min: 0.0, max: 0.0 });
        let b = normalized_product_bounds(0.9).unwrap();
        assert!((b.min - 0.0144).abs() < 1e-15);
        let (p, v) = (0.8, 0.6);
        assert!((b.min - p * p * v * v / 16.0).abs() < 1e-15);
        assert!(normalized_product_bounds(-0.1).is_err());
        assert!(normalized_product_bounds(1.5).is_err());
    }

    #[test]
    fn is1_balanced_is_b_eigenstate() {
        let is = intelligent_state(IsFamily::Is1, 0.5, 0.3, Branch::Plus).unwrap();
        assert!((is.state.w_plus() - 0.5).abs() < 1e-15);
        assert!(!is.lambda.im.is_finite());
        let g = Gauge::default();
        let b = g.observable_b(0.3);
        assert!(mean_var(&is.state, &b).variance < 1e-15);
        assert!(is_residual(&is.state, is.lambda, &g.observable_a(), &b).unwrap() < 1e-15);
    }

    #[test]
    fn is1_at_w_one_is_a_eigenstate() {
        let is = intelligent_state(IsFamily::Is1, 1.0, 0.0, Branch::Plus).unwrap();
        assert_eq!(is.state.matrix(), CMat2::diag(1.0, 0.0));
        assert_eq!(is.lambda, c(0.0, 0.0));
        let g = Gauge::default();
        assert!(is_residual(&is.state, is.lambda, &g.observable_a(), &g.observable_b(0.0)).unwrap() < 1e-15);
    }

    #[test]
    fn is2a_at_right_angle_is_point_c() {
        let is = intelligent_state(IsFamily::Is2a, FRAC_PI_2, 0.2, Branch::Plus).unwrap();
        let g = Gauge::default();
        let prod = normalized_product(&is.state, &g.observable_a(), &g.observable_b(0.2));
        assert!((prod - 1.0 / 16.0).abs() < 1e-15);
        // Continuity with IS2b at w+ = 1/2.
        let is2b = intelligent_state(IsFamily::Is2b, 0.5, 0.2, Branch::Plus).unwrap();
        assert!((is.lambda - is2b.lambda).norm() < 1e-15);
        assert!(is.state.matrix().max_abs_diff(&is2b.state.matrix()) < 1e-15);
    }

    #[test]
    fn parameter_ranges_are_checked() {
        assert!(intelligent_state(IsFamily::Is1, 1.1, 0.0, Branch::Plus).is_err());
        assert!(intelligent_state(IsFamily::Is2b, -0.1, 0.0, Branch::Minus).is_err());
        assert!(intelligent_state(IsFamily::Is2a, 1.6, 0.0, Branch::Plus).is_err());
    }

    #[test]
    fn residual_rejects_mixed_states() {
        let g = Gauge::default();
        let rho = DensityMatrix::new(0.6, 0.1, 0.0).unwrap();
        let err = is_residual(&rho, cr(1.0), &g.observable_a(), &g.observable_b(0.0)).unwrap_err();
        assert!(matches!(err, Error::MixedState { .. }));
    }

    #[test]
    fn random_pure_states_are_not_intelligent() {
        let g = Gauge::default();
        let (a, b) = (g.observable_a(), g.observable_b(0.0));
        let rho = pure(0.3, 0.9);
        for lambda in [cr(0.7), cr(-1.3), c(0.0, 0.4), c(0.0, -2.0)] {
            assert!(is_residual(&rho, lambda, &a, &b).unwrap() > 1e-3);
        }
    }

    /// Every family on a parameter grid, both branches, several phases.
    fn generated_states() -> Vec<IntelligentState> {
        let mut out = Vec::new();
        for family in FAMILIES {
            for k in 0..=40 {
                let t = k as f64 / 40.0;
                let param = if family == IsFamily::Is2a { t * FRAC_PI_2 } else { t };
                for varrho in [0.0, 0.9, 2.5, 5.1] {
                    for branch in [Branch::Plus, Branch::Minus] {
                        out.push(intelligent_state(family, param, varrho, branch).unwrap());
                    }
                }
            }
        }
        out
    }

    #[test]
    fn generated_states_saturate_robertson() {
        let pairs = [(0.5, -0.5, 0.5, -0.5), (2.0, -1.0, 0.25, -0.75), (-1.0, 3.0, 1.0, 0.0)];
        for is in generated_states() {
            for &(ap, am, bp, bm) in &pairs {
                let a = Observable::reference(ap, am).unwrap();
                let b = complementary_observable(&ComplementaryFamily::new(a, is.varrho, bp, bm)).unwrap();
                let r = robertson(&is.state, &a, &b);
                let norm = (a.spread() * b.spread()).powi(2);
                assert!(((r.lhs - r.rhs) / norm).abs() <= 1e-10, "{is:?} {r:?}");

                let lambda = is.lambda_for(&a, &b);
                let res = is_residual(&is.state, lambda, &a, &b).unwrap();
                assert!(res <= 1e-10, "{is:?} residual {res}");
                if lambda.norm().is_finite() && r.var_b > 1e-12 {
                    assert!((lambda.norm_sqr() - r.var_a / r.var_b).abs() <= 1e-10 * (1.0 + lambda.norm_sqr()));
                }
            }
        }
    }

    #[test]
    fn lambda_kinds_per_family() {
        for is in generated_states() {
            if !is.lambda.norm().is_finite() {
                continue;
            }
            match is.family {
                IsFamily::Is1 => assert_eq!(is.lambda.re, 0.0),
                IsFamily::Is2a => {
                    assert_eq!(is.lambda.im, 0.0);
                    assert!(is.lambda.re.abs() >= 1.0 - 1e-15);
                }
                IsFamily::Is2b => {
                    assert_eq!(is.lambda.im, 0.0);
                    assert!(is.lambda.re.abs() <= 1.0 + 1e-15);
                }
            }
        }
    }

    #[test]
    fn families_attain_extreme_products() {
        let g = Gauge::default();
        let varrho = 0.0;
        let (a, b) = (g.observable_a(), g.observable_b(varrho));
        for k in 0..=50 {
            let w = k as f64 / 50.0;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for j in 0..720 {
                let p = normalized_product(&pure(w, j as f64 * TAU / 720.0), &a, &b);
                lo = lo.min(p);
                hi = hi.max(p);
            }
            let is1 = intelligent_state(IsFamily::Is1, w, varrho, Branch::Plus).unwrap();
            let is2b = intelligent_state(IsFamily::Is2b, w, varrho, Branch::Plus).unwrap();
            assert!((normalized_product(&is1.state, &a, &b) - lo).abs() <= 1e-9);
            assert!((normalized_product(&is2b.state, &a, &b) - hi).abs() <= 1e-9);
            let bounds = normalized_product_bounds(w).unwrap();
            assert!((bounds.min - lo).abs() <= 1e-12 && (bounds.max - hi).abs() <= 1e-12);
        }
    }

    #[test]
    fn proper_b_product_on_pure_states() {
        let g = Gauge::default();
        for k in 0..=200 {
            let alpha = k as f64 * FRAC_PI_2 / 200.0;
            let rho = pure(alpha.sin().powi(2), 1.7);
            let prod = normalized_product(&rho, &g.observable_a(), &g.observable_b(rho.theta()));
            let q = rho.w_plus() * rho.w_minus();
            let (p, v) = (predictability(&rho), visibility(&rho));
            assert!((prod - q * (1.0 - 4.0 * q) / 4.0).abs() <= 1e-12);
            assert!((prod - p * p * v * v / 16.0).abs() <= 1e-12);
        }
    }

    proptest! {
        #[test]
        fn robertson_holds(rho in arb_density(), varrho in 0.0..TAU) {
            let g = Gauge::default();
            let r = robertson(&rho, &g.observable_a(), &g.observable_b(varrho));
            prop_assert!(r.lhs >= r.rhs - 1e-12);
        }

        #[test]
        fn normalized_variances(rho in arb_density()) {
            let a = Observable::reference(1.5, -0.5).unwrap();
            let b = complementary_observable(&ComplementaryFamily::new(a, rho.theta(), 0.7, -1.1)).unwrap();
            let (p, v) = (predictability(&rho), visibility(&rho));
            prop_assert!((mean_var(&rho, &a).variance / a.spread().powi(2) - (1.0 - p * p) / 4.0).abs() <= 1e-12);
            prop_assert!((mean_var(&rho, &b).variance / b.spread().powi(2) - (1.0 - v * v) / 4.0).abs() <= 1e-12);
        }

        #[test]
        fn product_between_bounds(w in 0.0..=1.0f64, th in 0.0..TAU, varrho in 0.0..TAU) {
            let g = Gauge::default();
            let p = normalized_product(&pure(w, th), &g.observable_a(), &g.observable_b(varrho));
            let bounds = normalized_product_bounds(w).unwrap();
            prop_assert!(p >= bounds.min - 1e-12 && p <= bounds.max + 1e-12);
        }
    }

    #[test]
    fn is1_branches_have_opposite_lambda() {
        let p = intelligent_state(IsFamily::Is1, 0.8, 0.0, Branch::Plus).unwrap();
        let m = intelligent_state(IsFamily::Is1, 0.8, 0.0, Branch::Minus).unwrap();
        assert!((p.lambda + m.lambda).norm() < 1e-15);
        assert!((m.state.theta() - PI).abs() < 1e-15);
    }
}
