//! Ambient-space algebra of simply isotropic and pseudo-isotropic space.
//!
//! Both spaces are `R^3` with the third axis `e3` as the isotropic (degenerate)
//! direction. The isotropic products only see the top view `(x, y)`; the
//! Euclidean and Lorentzian background products are kept alongside because
//! the Gauss map and the relative connection are built from them.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

/// Which of the two degenerate geometries a computation lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// Metric `dx^2 + dy^2`.
    SimplyIsotropic,
    /// Metric `dx^2 - dy^2`.
    PseudoIsotropic,
}

impl SpaceKind {
    /// Sign in front of the second coordinate: `+1` simply, `-1` pseudo.
    pub fn sign(self) -> f64 {
        match self {
            SpaceKind::SimplyIsotropic => 1.0,
            SpaceKind::PseudoIsotropic => -1.0,
        }
    }

    /// Short tag used on the command line and in JSON (`i3` / `ip3`).
    pub fn tag(self) -> &'static str {
        match self {
            SpaceKind::SimplyIsotropic => "i3",
            SpaceKind::PseudoIsotropic => "ip3",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "i3" => Some(SpaceKind::SimplyIsotropic),
            "ip3" => Some(SpaceKind::PseudoIsotropic),
            _ => None,
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A vector (or point) of `R^3`; the third component is the isotropic one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const E1: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const E2: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const E3: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Euclidean length, used only for tolerances and diagnostics.
    pub fn euclid_len(self) -> f64 {
        dot_euclid(self, self).sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, b: Vec3) -> Vec3 {
        Vec3::new(self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, b: Vec3) {
        *self = *self + b;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, b: Vec3) -> Vec3 {
        Vec3::new(self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

/// Isotropic inner product: `u1 v1 + u2 v2` or `u1 v1 - u2 v2`.
pub fn dot(kind: SpaceKind, u: Vec3, v: Vec3) -> f64 {
    u.x * v.x + kind.sign() * u.y * v.y
}

/// Isotropic (semi-)norm `sqrt(|<u, u>|)`.
pub fn norm(kind: SpaceKind, u: Vec3) -> f64 {
    dot(kind, u, u).abs().sqrt()
}

/// Projection onto the `xy`-plane.
pub fn top_view(u: Vec3) -> Vec3 {
    Vec3::new(u.x, u.y, 0.0)
}

/// `|v3 - u3|`, the secondary distance between points sharing a top view.
pub fn codistance(u: Vec3, v: Vec3) -> f64 {
    (v.z - u.z).abs()
}

/// Background Euclidean product `<u, v>`.
pub fn dot_euclid(u: Vec3, v: Vec3) -> f64 {
    u.x * v.x + u.y * v.y + u.z * v.z
}

/// Background Lorentzian product `<u, v>_1 = u1 v1 - u2 v2 + u3 v3`.
pub fn dot_lorentz(u: Vec3, v: Vec3) -> f64 {
    u.x * v.x - u.y * v.y + u.z * v.z
}

/// Background product matching the space: Euclidean for `I3`, Lorentzian for `Ip3`.
pub fn dot_background(kind: SpaceKind, u: Vec3, v: Vec3) -> f64 {
    match kind {
        SpaceKind::SimplyIsotropic => dot_euclid(u, v),
        SpaceKind::PseudoIsotropic => dot_lorentz(u, v),
    }
}

pub fn cross_euclid(u: Vec3, v: Vec3) -> Vec3 {
    Vec3::new(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )
}

/// Lorentzian vector product `(u2 v3 - u3 v2, u1 v3 - u3 v1, u1 v2 - u2 v1)`.
pub fn cross_lorentz(u: Vec3, v: Vec3) -> Vec3 {
    Vec3::new(
        u.y * v.z - u.z * v.y,
        u.x * v.z - u.z * v.x,
        u.x * v.y - u.y * v.x,
    )
}

pub fn cross_background(kind: SpaceKind, u: Vec3, v: Vec3) -> Vec3 {
    match kind {
        SpaceKind::SimplyIsotropic => cross_euclid(u, v),
        SpaceKind::PseudoIsotropic => cross_lorentz(u, v),
    }
}

/// A rigid motion of `I3` (rotation about `e3`) or `Ip3` (boost), followed by
/// a shear of the isotropic coordinate and a translation:
///
/// ```text
/// x' = a + x cos φ - y sin φ          x' = a + x cosh φ + y sinh φ
/// y' = b + x sin φ + y cos φ          y' = b + x sinh φ + y cosh φ
/// z' = c + c1 x + c2 y + z            z' = c + c1 x + c2 y + z
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Motion {
    pub kind: SpaceKind,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub phi: f64,
}

impl Motion {
    pub fn identity(kind: SpaceKind) -> Self {
        Self { kind, a: 0.0, b: 0.0, c: 0.0, c1: 0.0, c2: 0.0, phi: 0.0 }
    }

    /// Linear part as a row-major 3×3 matrix.
    pub fn linear(&self) -> [[f64; 3]; 3] {
        let (r00, r01, r10, r11) = match self.kind {
            SpaceKind::SimplyIsotropic => {
                let (s, c) = self.phi.sin_cos();
                (c, -s, s, c)
            }
            SpaceKind::PseudoIsotropic => {
                let (s, c) = (self.phi.sinh(), self.phi.cosh());
                (c, s, s, c)
            }
        };
        [[r00, r01, 0.0], [r10, r11, 0.0], [self.c1, self.c2, 1.0]]
    }

    pub fn translation(&self) -> Vec3 {
        Vec3::new(self.a, self.b, self.c)
    }

    pub fn apply(&self, p: Vec3) -> Vec3 {
        self.apply_linear(p) + self.translation()
    }

    /// Action on difference vectors (no translation).
    pub fn apply_linear(&self, p: Vec3) -> Vec3 {
        let m = self.linear();
        Vec3::new(
            m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
            m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
            m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z,
        )
    }

    /// `self ∘ first`: apply `first`, then `self`. Both must share a kind.
    pub fn compose(&self, first: &Motion) -> Motion {
        assert_eq!(self.kind, first.kind, "cannot compose motions of different spaces");
        let m = self.linear();
        let t = self.apply(first.translation());
        // The shear row of the product is (c1, c2) R_first + (c1', c2').
        let f = first.linear();
        let c1 = m[2][0] * f[0][0] + m[2][1] * f[1][0] + f[2][0];
        let c2 = m[2][0] * f[0][1] + m[2][1] * f[1][1] + f[2][1];
        Motion {
            kind: self.kind,
            a: t.x,
            b: t.y,
            c: t.z,
            c1,
            c2,
            phi: self.phi + first.phi,
        }
    }
}
