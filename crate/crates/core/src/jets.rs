//! Second-order forward-mode differentiation in two parameters.
//!
//! A [`Jet2`] carries a scalar together with its first and second partial
//! derivatives with respect to the surface parameters `(u, v)`. Arithmetic on
//! jets applies the Leibniz and chain rules through second order, so any
//! expression built from seeded jets yields exact (to rounding) derivatives.
//! The mixed partial is stored once, which makes `∂uv = ∂vu` structural.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use thiserror::Error;

use crate::isotropy::Vec3;

/// Failure of a jet operation whose argument lies outside the function domain.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum JetError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{op} is undefined or not differentiable at {value}")]
    Domain { op: &'static str, value: f64 },
}

/// Value and partial derivatives through second order of a scalar in `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub val: f64,
    pub du: f64,
    pub dv: f64,
    pub duu: f64,
    pub duv: f64,
    pub dvv: f64,
}

impl Jet2 {
    pub const fn new(val: f64, du: f64, dv: f64, duu: f64, duv: f64, dvv: f64) -> Self {
        Self { val, du, dv, duu, duv, dvv }
    }

    /// A constant: every derivative is zero.
    pub const fn constant(val: f64) -> Self {
        Self::new(val, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    /// The independent variable `u` evaluated at `val`.
    pub const fn seed_u(val: f64) -> Self {
        Self::new(val, 1.0, 0.0, 0.0, 0.0, 0.0)
    }

    /// The independent variable `v` evaluated at `val`.
    pub const fn seed_v(val: f64) -> Self {
        Self::new(val, 0.0, 1.0, 0.0, 0.0, 0.0)
    }

    /// Gradient `(∂u, ∂v)`.
    pub fn gradient(&self) -> [f64; 2] {
        [self.du, self.dv]
    }

    /// Symmetric Hessian `[[∂uu, ∂uv], [∂uv, ∂vv]]`.
    pub fn hessian(&self) -> [[f64; 2]; 2] {
        [[self.duu, self.duv], [self.duv, self.dvv]]
    }

    /// First partial along parameter `i` (0 = u, 1 = v).
    pub fn d(&self, i: usize) -> f64 {
        self.gradient()[i]
    }

    /// Second partial along parameters `i`, `j`.
    pub fn dd(&self, i: usize, j: usize) -> f64 {
        self.hessian()[i][j]
    }

    pub fn is_constant(&self) -> bool {
        self.du == 0.0 && self.dv == 0.0 && self.duu == 0.0 && self.duv == 0.0 && self.dvv == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.val.is_finite()
            && self.du.is_finite()
            && self.dv.is_finite()
            && self.duu.is_finite()
            && self.duv.is_finite()
            && self.dvv.is_finite()
    }

    /// Compose with a scalar function given `f(a)`, `f'(a)`, `f''(a)`.
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            val: f0,
            du: f1 * self.du,
            dv: f1 * self.dv,
            duu: f2 * self.du * self.du + f1 * self.duu,
            duv: f2 * self.du * self.dv + f1 * self.duv,
            dvv: f2 * self.dv * self.dv + f1 * self.dvv,
        }
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(
            k * self.val,
            k * self.du,
            k * self.dv,
            k * self.duu,
            k * self.duv,
            k * self.dvv,
        )
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn tan(self) -> Result<Self, JetError> {
        if self.val.cos().abs() < 1e-300 {
            return Err(JetError::Domain { op: "tan", value: self.val });
        }
        let t = self.val.tan();
        let sec2 = 1.0 + t * t;
        Ok(self.chain(t, sec2, 2.0 * t * sec2))
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.val.sinh(), self.val.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.val.sinh(), self.val.cosh());
        self.chain(c, s, c)
    }

    pub fn tanh(self) -> Self {
        let t = self.val.tanh();
        let sech2 = 1.0 - t * t;
        self.chain(t, sech2, -2.0 * t * sech2)
    }

    pub fn exp(self) -> Self {
        let e = self.val.exp();
        self.chain(e, e, e)
    }

    /// Natural logarithm; requires a positive argument.
    pub fn ln(self) -> Result<Self, JetError> {
        if !(self.val > 0.0) {
            return Err(JetError::Domain { op: "log", value: self.val });
        }
        let r = 1.0 / self.val;
        Ok(self.chain(self.val.ln(), r, -r * r))
    }

    /// Square root; requires a positive argument (the derivative blows up at 0).
    pub fn sqrt(self) -> Result<Self, JetError> {
        if !(self.val > 0.0) {
            return Err(JetError::Domain { op: "sqrt", value: self.val });
        }
        let s = self.val.sqrt();
        Ok(self.chain(s, 0.5 / s, -0.25 / (s * self.val)))
    }

    /// Absolute value; not differentiable at zero.
    pub fn abs(self) -> Result<Self, JetError> {
        if self.val == 0.0 || self.val.is_nan() {
            return Err(JetError::Domain { op: "abs", value: self.val });
        }
        Ok(if self.val > 0.0 { self } else { -self })
    }

    /// `1 / self`.
    pub fn recip(self) -> Result<Self, JetError> {
        if self.val == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let r = 1.0 / self.val;
        Ok(self.chain(r, -r * r, 2.0 * r * r * r))
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, JetError> {
        if rhs.val == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        Ok(self * rhs.recip()?)
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// [`Jet2::recip`] so negative bases are fine.
    pub fn powi(self, n: i64) -> Result<Self, JetError> {
        let base = if n < 0 { self.recip()? } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Jet2::constant(1.0);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc *= sq;
            }
            e >>= 1;
            if e > 0 {
                sq = sq * sq;
            }
        }
        Ok(acc)
    }

    /// General power `exp(exponent * ln(self))`; requires a positive base.
    pub fn powj(self, exponent: Self) -> Result<Self, JetError> {
        if !(self.val > 0.0) {
            return Err(JetError::Domain { op: "non-integer power", value: self.val });
        }
        Ok((exponent * self.ln()?).exp())
    }
}

impl From<f64> for Jet2 {
    fn from(val: f64) -> Self {
        Self::constant(val)
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Self::new(
            self.val + b.val,
            self.du + b.du,
            self.dv + b.dv,
            self.duu + b.duu,
            self.duv + b.duv,
            self.dvv + b.dvv,
        )
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        Self::new(
            self.val - b.val,
            self.du - b.du,
            self.dv - b.dv,
            self.duu - b.duu,
            self.duv - b.duv,
            self.dvv - b.dvv,
        )
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        // Each field is written so that swapping a and b gives the same
        // floating-point operations, keeping multiplication exactly commutative.
        Self::new(
            a.val * b.val,
            a.du * b.val + a.val * b.du,
            a.dv * b.val + a.val * b.dv,
            (a.duu * b.val + a.val * b.duu) + 2.0 * (a.du * b.du),
            (a.duv * b.val + a.val * b.duv) + (a.du * b.dv + a.dv * b.du),
            (a.dvv * b.val + a.val * b.dvv) + 2.0 * (a.dv * b.dv),
        )
    }
}

/// Unchecked division: a zero denominator produces non-finite fields.
impl Div for Jet2 {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let r = 1.0 / b.val;
        self * b.chain(r, -r * r, 2.0 * r * r * r)
    }
}

impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet2 {
    type Output = Self;
    fn add(mut self, k: f64) -> Self {
        self.val += k;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Self;
    fn sub(mut self, k: f64) -> Self {
        self.val -= k;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, j: Jet2) -> Jet2 {
        j.scale(self)
    }
}

impl Add<Jet2> for f64 {
    type Output = Jet2;
    fn add(self, j: Jet2) -> Jet2 {
        j + self
    }
}

impl Sub<Jet2> for f64 {
    type Output = Jet2;
    fn sub(self, j: Jet2) -> Jet2 {
        -j + self
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for Jet2 {
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

/// An immersion `x(u, v)` with its derivatives, one jet per ambient coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2Vec3 {
    pub x: Jet2,
    pub y: Jet2,
    pub z: Jet2,
}

impl Jet2Vec3 {
    pub const fn new(x: Jet2, y: Jet2, z: Jet2) -> Self {
        Self { x, y, z }
    }

    fn project(&self, f: impl Fn(&Jet2) -> f64) -> Vec3 {
        Vec3::new(f(&self.x), f(&self.y), f(&self.z))
    }

    /// The point `x`.
    pub fn position(&self) -> Vec3 {
        self.project(|j| j.val)
    }

    /// `x_i`, with `i` = 0 for u and 1 for v.
    pub fn tangent(&self, i: usize) -> Vec3 {
        self.project(|j| j.d(i))
    }

    /// `x_ij`.
    pub fn second(&self, i: usize, j: usize) -> Vec3 {
        self.project(|c| c.dd(i, j))
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}
