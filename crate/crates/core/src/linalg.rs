//! Small dense complex linear algebra: 2x2 and 4x4 matrices, closed-form
//! Hermitian eigendecomposition, trace norm and tensor products.
//!
//! Basis ordering is fixed: for the system index 0 is `|A+>` and 1 is `|A->`;
//! for the meter index 0 is `|M+>` and 1 is `|M⊥>`. Composite indices are
//! `2 * system + meter` (system slow, meter fast).

use std::ops::{Add, Index, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance for Hermiticity and unitarity checks.
pub const STRUCTURE_TOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `e^{i phi}`.
#[inline]
pub fn cis(phi: f64) -> C64 {
    C64::from_polar(1.0, phi)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVec2(pub [C64; 2]);

impl CVec2 {
    pub const fn new(a: C64, b: C64) -> Self {
        CVec2([a, b])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = [C64::new(0.0, 0.0); 2];
        v[i] = cr(1.0);
        CVec2(v)
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &CVec2) -> C64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> CVec2 {
        self.scale(cr(1.0 / self.norm()))
    }

    pub fn scale(&self, s: C64) -> CVec2 {
        CVec2([self.0[0] * s, self.0[1] * s])
    }

    /// `|self><other|`.
    pub fn outer(&self, other: &CVec2) -> CMat2 {
        let mut m = CMat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = self.0[i] * other.0[j].conj();
            }
        }
        m
    }

    pub fn projector(&self) -> CMat2 {
        self.outer(self)
    }
}

impl Index<usize> for CVec2 {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl Sub for CVec2 {
    type Output = CVec2;
    fn sub(self, rhs: CVec2) -> CVec2 {
        CVec2([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1]])
    }
}

impl Add for CVec2 {
    type Output = CVec2;
    fn add(self, rhs: CVec2) -> CVec2 {
        CVec2([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}

/// Row-major 2x2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat2(pub [[C64; 2]; 2]);

impl CMat2 {
    pub fn zero() -> Self {
        CMat2([[C64::new(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        Self::diag(1.0, 1.0)
    }

    pub fn diag(a: f64, b: f64) -> Self {
        CMat2([[cr(a), cr(0.0)], [cr(0.0), cr(b)]])
    }

    pub fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        CMat2([[m00, m01], [m10, m11]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        CMat2([[cr(m[0][0]), cr(m[0][1])], [cr(m[1][0]), cr(m[1][1])]])
    }

    pub fn pauli_x() -> Self {
        Self::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn pauli_y() -> Self {
        CMat2([[cr(0.0), c(0.0, -1.0)], [c(0.0, 1.0), cr(0.0)]])
    }

    pub fn pauli_z() -> Self {
        Self::diag(1.0, -1.0)
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        CMat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        CMat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn apply(&self, v: &CVec2) -> CVec2 {
        let m = &self.0;
        CVec2([m[0][0] * v.0[0] + m[0][1] * v.0[1], m[1][0] * v.0[0] + m[1][1] * v.0[1]])
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &CMat2) -> CMat2 {
        *self * *other - *other * *self
    }

    /// `{self, other}`.
    pub fn anticommutator(&self, other: &CMat2) -> CMat2 {
        *self * *other + *other * *self
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMat2) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&CMat2::identity())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= STRUCTURE_TOL
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= STRUCTURE_TOL
    }

    /// `<v|self|v>`.
    pub fn expectation(&self, v: &CVec2) -> C64 {
        v.inner(&self.apply(v))
    }

    pub(crate) fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_defect();
        if deviation > STRUCTURE_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }
}

impl Mul for CMat2 {
    type Output = CMat2;
    fn mul(self, rhs: CMat2) -> CMat2 {
        let (a, b) = (&self.0, &rhs.0);
        CMat2(std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j])))
    }
}

impl Add for CMat2 {
    type Output = CMat2;
    fn add(self, rhs: CMat2) -> CMat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for CMat2 {
    type Output = CMat2;
    fn sub(self, rhs: CMat2) -> CMat2 {
        self + (-rhs)
    }
}

impl Neg for CMat2 {
    type Output = CMat2;
    fn neg(self) -> CMat2 {
        self.scale(cr(-1.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVec4(pub [C64; 4]);

impl CVec4 {
    pub fn inner(&self, other: &CVec4) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|a> ⊗ |b>`.
    pub fn product(a: &CVec2, b: &CVec2) -> CVec4 {
        CVec4([a.0[0] * b.0[0], a.0[0] * b.0[1], a.0[1] * b.0[0], a.0[1] * b.0[1]])
    }

    /// Component along system basis state `i`, as a vector in meter space.
    pub fn meter_part(&self, system: usize) -> CVec2 {
        CVec2([self.0[2 * system], self.0[2 * system + 1]])
    }

    /// `(I ⊗ <m|) self`, an unnormalised system vector.
    pub fn contract_meter(&self, m: &CVec2) -> CVec2 {
        CVec2([m.inner(&self.meter_part(0)), m.inner(&self.meter_part(1))])
    }
}

/// Row-major 4x4 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat4(pub [[C64; 4]; 4]);

impl CMat4 {
    pub fn zero() -> Self {
        CMat4([[C64::new(0.0, 0.0); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = cr(1.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &CVec4) -> CVec4 {
        let mut out = [C64::new(0.0, 0.0); 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v.0[j]).sum();
        }
        CVec4(out)
    }

    /// `<v|self|v>`.
    pub fn expectation(&self, v: &CVec4) -> C64 {
        v.inner(&self.apply(v))
    }

    pub fn max_abs_diff(&self, other: &CMat4) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    /// Trace over the second (meter) factor.
    pub fn partial_trace_second(&self) -> CMat2 {
        let mut out = CMat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = (0..2).map(|k| self.0[2 * i + k][2 * j + k]).sum();
            }
        }
        out
    }

    pub fn outer(v: &CVec4) -> CMat4 {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = v.0[i] * v.0[j].conj();
            }
        }
        out
    }
}

impl Mul for CMat4 {
    type Output = CMat4;
    fn mul(self, rhs: CMat4) -> CMat4 {
        let mut out = CMat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

/// Tensor product `a ⊗ b`, first factor's index slow.
pub fn kron(a: &CMat2, b: &CMat2) -> CMat4 {
    let mut out = CMat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigen2 {
    pub values: [f64; 2],
    pub vectors: [CVec2; 2],
}

impl Eigen2 {
    /// `Σ λ_i v_i v_i†`.
    pub fn reconstruct(&self) -> CMat2 {
        self.vectors[0].projector().scale(cr(self.values[0])) + self.vectors[1].projector().scale(cr(self.values[1]))
    }
}

/// Closed-form eigendecomposition of a 2x2 Hermitian matrix.
///
/// Degenerate spectra return the standard basis; callers must not rely on
/// eigenvector identity in that case.
pub fn hermitian_eig(m: &CMat2) -> Result<Eigen2> {
    m.require_hermitian()?;
    let a = m.0[0][0].re;
    let d = m.0[1][1].re;
    // Average the off-diagonal pair so sub-tolerance asymmetry cannot leak in.
    let b = (m.0[0][1] + m.0[1][0].conj()) * 0.5;

    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let radius = half_gap.hypot(b.norm());
    let values = [mean + radius, mean - radius];

    if b.norm() == 0.0 {
        let (hi, lo) = if a >= d { (0, 1) } else { (1, 0) };
        return Ok(Eigen2 { values, vectors: [CVec2::basis(hi), CVec2::basis(lo)] });
    }

    // Two null-space candidates for (m - λ₁); take the better conditioned one.
    let top = if half_gap >= 0.0 {
        CVec2::new(cr(radius + half_gap), b.conj())
    } else {
        CVec2::new(b, cr(radius - half_gap))
    }
    .normalized();
    let bottom = CVec2::new(-top.0[1].conj(), top.0[0].conj());
    Ok(Eigen2 { values, vectors: [top, bottom] })
}

/// Trace-class norm `Tr sqrt(M†M)`; for Hermitian input the sum of |λ_i|.
pub fn trace_norm(m: &CMat2) -> Result<f64> {
    let eig = hermitian_eig(m)?;
    Ok(eig.values[0].abs() + eig.values[1].abs())
}
