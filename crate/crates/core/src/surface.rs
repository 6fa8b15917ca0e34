//! Pointwise extrinsic geometry of admissible patches.
//!
//! A [`PointFrame`] bundles everything the connection and curvature code needs
//! at one parameter point: the immersion derivatives, the Jacobian minors
//! `X_ij`, both fundamental forms, the isotropic normal `N_h`, the parabolic
//! Gauss map `ξ` and the shape operator.
//!
//! Conventions:
//! - Indices `0`, `1` stand for the parameters `u`, `v`.
//! - `X_ij = x_u^i x_v^j - x_v^i x_u^j` over the ambient coordinates.
//! - The shape operator acts on coordinate columns: `L = g⁻¹ h`, and the
//!   coefficients `A_i^k` with `L(x_i) = -A_i^k x_k` are `A = -Lᵀ`, so
//!   `h_ij = -A_i^k g_kj`.

use thiserror::Error;

use crate::catalog::CatalogEntry;
use crate::expr::{EvalError, Expr};
use crate::isotropy::{dot, dot_background, Motion, SpaceKind, Vec3};
use crate::jets::{Jet2, Jet2Vec3};
use crate::linalg::{det2, inv2, Mat2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("point ({u}, {v}) is outside the parameter domain")]
    OutsideDomain { u: f64, v: f64 },
    #[error("evaluation failed at ({u}, {v}): {source}")]
    Eval { u: f64, v: f64, source: EvalError },
    #[error("tangent plane at ({u}, {v}) is isotropic (X12 = {x12:e})")]
    NotAdmissible { u: f64, v: f64, x12: f64 },
    #[error("direction is lightlike (I(w, w) = 0)")]
    LightlikeDirection,
    #[error("operation requires {expected} space")]
    WrongSpace { expected: SpaceKind },
    #[error("space mismatch: patch is {patch}, motion is {motion}")]
    SpaceMismatch { patch: SpaceKind, motion: SpaceKind },
}

/// Closed parameter rectangle `[u0, u1] × [v0, v1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Domain {
    pub const fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Self {
        Self { u0, u1, v0, v1 }
    }

    pub fn square(half: f64) -> Self {
        Self::new(-half, half, -half, half)
    }

    pub fn is_valid(&self) -> bool {
        [self.u0, self.u1, self.v0, self.v1].iter().all(|x| x.is_finite())
            && self.u0 < self.u1
            && self.v0 < self.v1
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.u0 && u <= self.u1 && v >= self.v0 && v <= self.v1
    }

    pub fn diameter(&self) -> f64 {
        (self.u1 - self.u0).hypot(self.v1 - self.v0)
    }

    /// Shrink by `margin` on every side.
    pub fn inset(&self, margin: f64) -> Domain {
        Domain::new(self.u0 + margin, self.u1 - margin, self.v0 + margin, self.v1 - margin)
    }

    /// Grid coordinates `nu × nv`, corners included; a count of 1 gives the midpoint.
    pub fn grid(&self, nu: usize, nv: usize) -> Vec<(f64, f64)> {
        let axis = |a: f64, b: f64, n: usize| -> Vec<f64> {
            match n {
                0 => Vec::new(),
                1 => vec![0.5 * (a + b)],
                _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
            }
        };
        let us = axis(self.u0, self.u1, nu);
        let vs = axis(self.v0, self.v1, nv);
        let mut out = Vec::with_capacity(us.len() * vs.len());
        for &u in &us {
            for &v in &vs {
                out.push((u, v));
            }
        }
        out
    }
}

/// How the immersion is described.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceDef {
    /// Normal form `(u, v, f(u, v))`.
    Graph(Expr),
    /// `(x(u, v), y(u, v), z(u, v))`.
    Parametric([Expr; 3]),
    /// A named surface from [`crate::catalog`].
    Builtin(CatalogEntry),
}

/// An immersion of a parameter rectangle into `I3` or `Ip3`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePatch {
    pub kind: SpaceKind,
    pub def: SurfaceDef,
    pub domain: Domain,
}

impl SurfacePatch {
    pub fn graph(kind: SpaceKind, f: Expr, domain: Domain) -> Self {
        Self { kind, def: SurfaceDef::Graph(f), domain }
    }

    pub fn parametric(kind: SpaceKind, x: Expr, y: Expr, z: Expr, domain: Domain) -> Self {
        Self { kind, def: SurfaceDef::Parametric([x, y, z]), domain }
    }

    /// A catalog surface on its default domain.
    pub fn builtin(entry: CatalogEntry) -> Self {
        let domain = entry.default_domain();
        Self { kind: entry.kind(), def: SurfaceDef::Builtin(entry), domain }
    }

    pub fn builtin_on(entry: CatalogEntry, domain: Domain) -> Self {
        Self { kind: entry.kind(), def: SurfaceDef::Builtin(entry), domain }
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn catalog_entry(&self) -> Option<&CatalogEntry> {
        match &self.def {
            SurfaceDef::Builtin(e) => Some(e),
            _ => None,
        }
    }

    /// Short human-readable description used in reports.
    pub fn label(&self) -> String {
        match &self.def {
            SurfaceDef::Graph(f) => format!("graph(f={f}) in {}", self.kind),
            SurfaceDef::Parametric([x, y, z]) => {
                format!("parametric(x={x}, y={y}, z={z}) in {}", self.kind)
            }
            SurfaceDef::Builtin(e) => e.to_string(),
        }
    }

    /// Coordinate expressions of the immersion.
    pub fn immersion(&self) -> [Expr; 3] {
        match &self.def {
            SurfaceDef::Graph(f) => [Expr::u(), Expr::v(), f.clone()],
            SurfaceDef::Parametric(x) => x.clone(),
            SurfaceDef::Builtin(e) => e.immersion().clone(),
        }
    }

    /// Position and derivatives through second order at `(u, v)`.
    pub fn evaluate(&self, u: f64, v: f64) -> Result<Jet2Vec3, SurfaceError> {
        if !self.domain.contains(u, v) {
            return Err(SurfaceError::OutsideDomain { u, v });
        }
        let eval = |e: &Expr| e.eval_jet2(u, v).map_err(|source| SurfaceError::Eval { u, v, source });
        match &self.def {
            SurfaceDef::Graph(f) => Ok(Jet2Vec3::new(Jet2::seed_u(u), Jet2::seed_v(v), eval(f)?)),
            SurfaceDef::Parametric([x, y, z]) => Ok(Jet2Vec3::new(eval(x)?, eval(y)?, eval(z)?)),
            SurfaceDef::Builtin(e) => {
                let [x, y, z] = e.immersion();
                Ok(Jet2Vec3::new(eval(x)?, eval(y)?, eval(z)?))
            }
        }
    }

    /// The image of this patch under a rigid motion, as a parametric patch
    /// over the same parameter domain.
    pub fn transformed(&self, m: &Motion) -> Result<SurfacePatch, SurfaceError> {
        if m.kind != self.kind {
            return Err(SurfaceError::SpaceMismatch { patch: self.kind, motion: m.kind });
        }
        let [x, y, z] = self.immersion();
        let l = m.linear();
        let c = Expr::constant;
        let row = |r: [f64; 3], t: f64| {
            c(t) + c(r[0]) * x.clone() + c(r[1]) * y.clone() + c(r[2]) * z.clone()
        };
        Ok(SurfacePatch::parametric(
            self.kind,
            row(l[0], m.a),
            row(l[1], m.b),
            row(l[2], m.c),
            self.domain,
        ))
    }
}

/// Tolerances used when classifying points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative admissibility threshold: `|X12| > tol (1 + |x_u| |x_v|)`.
    pub admissibility: f64,
    /// Threshold on `H² - K` and on `‖h - H g‖ / ‖g‖` for umbilic detection.
    pub umbilic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { admissibility: 1e-12, umbilic: 1e-9 }
    }
}

/// Per-point bundle of first- and second-order geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFrame {
    pub kind: SpaceKind,
    pub u: f64,
    pub v: f64,
    pub position: Vec3,
    pub x1: Vec3,
    pub x2: Vec3,
    pub x11: Vec3,
    pub x12: Vec3,
    pub x22: Vec3,
    /// Minors after orientation normalisation, so `minor12 > 0`.
    pub minor12: f64,
    pub minor23: f64,
    pub minor31: f64,
    pub minor13: f64,
    /// True when the raw `X12` was negative and the minors were computed with
    /// `u` and `v` exchanged. Every other field uses the original parameter order.
    pub orientation_swapped: bool,
    pub g: Mat2,
    pub g_inv: Mat2,
    pub det_g: f64,
    pub n_h: Vec3,
    pub xi: Vec3,
    pub h: Mat2,
    /// `A_i^k` stored as `a[i][k]`.
    pub a: Mat2,
}

impl PointFrame {
    pub fn tangent(&self, i: usize) -> Vec3 {
        [self.x1, self.x2][i]
    }

    pub fn second(&self, i: usize, j: usize) -> Vec3 {
        match (i, j) {
            (0, 0) => self.x11,
            (1, 1) => self.x22,
            _ => self.x12,
        }
    }

    /// Matrix of the shape operator on coordinate columns, `g⁻¹ h`.
    pub fn shape_operator(&self) -> Mat2 {
        let a = self.a;
        [[-a[0][0], -a[1][0]], [-a[0][1], -a[1][1]]]
    }

    /// `‖ξ̃‖² + ξ³`, with the pseudo-isotropic square in `Ip3`. Equals
    /// `(X23² ± X(31|13)² + X12²) / (2 X12²)`; it vanishes only at lightlike points.
    pub fn denom(&self) -> f64 {
        dot(self.kind, self.xi, self.xi) + self.xi.z
    }

    pub fn gaussian_curvature(&self) -> f64 {
        det2(&self.h) / self.det_g
    }

    pub fn mean_curvature(&self) -> f64 {
        let (g, h) = (&self.g, &self.h);
        0.5 * (g[0][0] * h[1][1] - 2.0 * g[0][1] * h[0][1] + g[1][1] * h[0][0]) / self.det_g
    }
}

/// Compute the frame at `(u, v)`.
pub fn frame_at(s: &SurfacePatch, u: f64, v: f64) -> Result<PointFrame, SurfaceError> {
    frame_at_with(s, u, v, &Tolerances::default())
}

pub fn frame_at_with(
    s: &SurfacePatch,
    u: f64,
    v: f64,
    tol: &Tolerances,
) -> Result<PointFrame, SurfaceError> {
    let jet = s.evaluate(u, v)?;
    frame_from_jet(s.kind, &jet, u, v, tol)
}

/// Build the frame from an already evaluated immersion jet.
pub fn frame_from_jet(
    kind: SpaceKind,
    jet: &Jet2Vec3,
    u: f64,
    v: f64,
    tol: &Tolerances,
) -> Result<PointFrame, SurfaceError> {
    let (x1, x2) = (jet.tangent(0), jet.tangent(1));
    let minor = |i: usize, j: usize| x1[i] * x2[j] - x2[i] * x1[j];
    let raw12 = minor(0, 1);
    let threshold = tol.admissibility * (1.0 + x1.euclid_len() * x2.euclid_len());
    if !(raw12.abs() > threshold) {
        return Err(SurfaceError::NotAdmissible { u, v, x12: raw12 });
    }
    let swapped = raw12 < 0.0;
    let sign = if swapped { -1.0 } else { 1.0 };
    let (m12, m23, m31, m13) = (sign * raw12, sign * minor(1, 2), sign * minor(2, 0), sign * minor(0, 2));

    // Top view of both N_h and ξ; ratios are unaffected by the orientation swap.
    let a_coef = m23 / m12;
    let b_coef = match kind {
        SpaceKind::SimplyIsotropic => m31 / m12,
        SpaceKind::PseudoIsotropic => m13 / m12,
    };
    let top = Vec3::new(a_coef, b_coef, 0.0);
    let n_h = Vec3::new(a_coef, b_coef, 1.0);
    let xi = Vec3::new(a_coef, b_coef, 0.5 * (1.0 - dot(kind, top, top)));

    let tangents = [x1, x2];
    let mut g = [[0.0; 2]; 2];
    let mut h = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            g[i][j] = dot(kind, tangents[i], tangents[j]);
            h[i][j] = dot_background(kind, n_h, jet.second(i, j));
        }
    }
    let det_g = det2(&g);
    let g_inv = inv2(&g);
    // A = -h g⁻¹, i.e. h_ij = -A_i^k g_kj.
    let mut a = [[0.0; 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            a[i][k] = -(h[i][0] * g_inv[0][k] + h[i][1] * g_inv[1][k]);
        }
    }

    Ok(PointFrame {
        kind,
        u,
        v,
        position: jet.position(),
        x1,
        x2,
        x11: jet.second(0, 0),
        x12: jet.second(0, 1),
        x22: jet.second(1, 1),
        minor12: m12,
        minor23: m23,
        minor31: m31,
        minor13: m13,
        orientation_swapped: swapped,
        g,
        g_inv,
        det_g,
        n_h,
        xi,
        h,
        a,
    })
}

/// Real-algebraic type of the shape operator at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrincipalClass {
    /// Two distinct real principal curvatures, `k1 > k2`.
    Diagonalizable { k1: f64, k2: f64 },
    /// Double real eigenvalue with a one-dimensional eigenspace.
    NonDiagonalizableReal,
    /// `H² - K < 0`: no real principal curvatures.
    ComplexPrincipal,
    /// `II = λ I`.
    Umbilic { lambda: f64 },
}

impl PrincipalClass {
    pub fn label(&self) -> &'static str {
        match self {
            PrincipalClass::Diagonalizable { .. } => "diagonalizable",
            PrincipalClass::NonDiagonalizableReal => "non_diagonalizable",
            PrincipalClass::ComplexPrincipal => "complex",
            PrincipalClass::Umbilic { .. } => "umbilic",
        }
    }

    pub fn is_umbilic(&self) -> bool {
        matches!(self, PrincipalClass::Umbilic { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    pub k: f64,
    pub h: f64,
    /// `H² - K`.
    pub discriminant: f64,
    pub class: PrincipalClass,
}

pub fn curvatures_at(s: &SurfacePatch, u: f64, v: f64) -> Result<CurvatureReport, SurfaceError> {
    curvatures_at_with(s, u, v, &Tolerances::default())
}

pub fn curvatures_at_with(
    s: &SurfacePatch,
    u: f64,
    v: f64,
    tol: &Tolerances,
) -> Result<CurvatureReport, SurfaceError> {
    Ok(classify(&frame_at_with(s, u, v, tol)?, tol))
}

/// Curvatures and principal class of a frame.
pub fn classify(f: &PointFrame, tol: &Tolerances) -> CurvatureReport {
    let k = f.gaussian_curvature();
    let h = f.mean_curvature();
    let disc = h * h - k;
    let class = if disc > tol.umbilic {
        let r = disc.sqrt();
        PrincipalClass::Diagonalizable { k1: h + r, k2: h - r }
    } else if disc < -tol.umbilic {
        PrincipalClass::ComplexPrincipal
    } else {
        let off = frobenius(&[
            [f.h[0][0] - h * f.g[0][0], f.h[0][1] - h * f.g[0][1]],
            [f.h[1][0] - h * f.g[1][0], f.h[1][1] - h * f.g[1][1]],
        ]);
        if off <= tol.umbilic * frobenius(&f.g) {
            PrincipalClass::Umbilic { lambda: h }
        } else if f.kind == SpaceKind::SimplyIsotropic {
            // The induced metric is Riemannian, so L is always diagonalizable.
            let r = disc.max(0.0).sqrt();
            PrincipalClass::Diagonalizable { k1: h + r, k2: h - r }
        } else {
            PrincipalClass::NonDiagonalizableReal
        }
    };
    CurvatureReport { k, h, discriminant: disc, class }
}

fn frobenius(m: &Mat2) -> f64 {
    (m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1]).sqrt()
}

/// `II(w, w)` for a direction `w = w¹ x_u + w² x_v`, normalised so that
/// `|I(w, w)| = 1`.
pub fn normal_curvature(s: &SurfacePatch, u: f64, v: f64, w: [f64; 2]) -> Result<f64, SurfaceError> {
    let f = frame_at(s, u, v)?;
    let quad = |m: &Mat2| {
        m[0][0] * w[0] * w[0] + 2.0 * m[0][1] * w[0] * w[1] + m[1][1] * w[1] * w[1]
    };
    let first = quad(&f.g);
    let scale = (w[0] * w[0] + w[1] * w[1]) * frobenius(&f.g);
    if !(first.abs() > 1e-12 * scale) {
        return Err(SurfaceError::LightlikeDirection);
    }
    Ok(quad(&f.h) / first.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub points: usize,
    pub admissible_points: usize,
    /// Smallest `|X12|` over points where the immersion could be evaluated.
    pub min_abs_x12: f64,
    /// Pseudo-isotropic only: whether `det g < 0` at every admissible point.
    pub timelike: Option<bool>,
    pub inadmissible: Vec<(f64, f64)>,
    /// Points where the immersion itself failed to evaluate.
    pub failed: Vec<(f64, f64)>,
}

impl AdmissibilityReport {
    pub fn all_admissible(&self) -> bool {
        self.admissible_points == self.points
    }

    pub fn none_admissible(&self) -> bool {
        self.admissible_points == 0
    }
}

/// Scan an `nu × nv` grid for isotropic tangent planes.
pub fn is_admissible(s: &SurfacePatch, nu: usize, nv: usize) -> AdmissibilityReport {
    let tol = Tolerances::default();
    let mut report = AdmissibilityReport {
        points: 0,
        admissible_points: 0,
        min_abs_x12: f64::INFINITY,
        timelike: (s.kind == SpaceKind::PseudoIsotropic).then_some(true),
        inadmissible: Vec::new(),
        failed: Vec::new(),
    };
    for (u, v) in s.domain.grid(nu, nv) {
        report.points += 1;
        let jet = match s.evaluate(u, v) {
            Ok(j) => j,
            Err(_) => {
                report.failed.push((u, v));
                continue;
            }
        };
        let (x1, x2) = (jet.tangent(0), jet.tangent(1));
        report.min_abs_x12 = report.min_abs_x12.min((x1.x * x2.y - x2.x * x1.y).abs());
        match frame_from_jet(s.kind, &jet, u, v, &tol) {
            Ok(f) => {
                report.admissible_points += 1;
                if let Some(t) = report.timelike.as_mut() {
                    *t &= f.det_g < 0.0;
                }
            }
            Err(_) => report.inadmissible.push((u, v)),
        }
    }
    report
}

/// `(X23² - X13² + X12²) / X12²`, which is `2 (‖ξ̃‖₁² + ξ³)`; zero exactly at
/// lightlike points.
fn lightlike_indicator(s: &SurfacePatch, u: f64, v: f64) -> Option<f64> {
    frame_at(s, u, v).ok().map(|f| 2.0 * f.denom())
}

/// Points of a pseudo-isotropic patch where `x_u ×₁ x_v` is lightlike.
///
/// Grid points with `|indicator| <= tol` are reported directly; every grid
/// edge whose endpoints have opposite signs is refined by bisection to a point
/// on the locus.
pub fn lightlike_points(
    s: &SurfacePatch,
    nu: usize,
    nv: usize,
    tol: f64,
) -> Result<Vec<(f64, f64)>, SurfaceError> {
    if s.kind != SpaceKind::PseudoIsotropic {
        return Err(SurfaceError::WrongSpace { expected: SpaceKind::PseudoIsotropic });
    }
    let pts = s.domain.grid(nu, nv);
    let vals: Vec<Option<f64>> = pts.iter().map(|&(u, v)| lightlike_indicator(s, u, v)).collect();
    let at = |i: usize, j: usize| i * nv + j;
    let mut out = Vec::new();
    for (p, q) in pts.iter().zip(&vals) {
        if matches!(q, Some(q) if q.abs() <= tol) {
            out.push(*p);
        }
    }
    let mut refine = |a: usize, b: usize| {
        let (Some(qa), Some(qb)) = (vals[a], vals[b]) else { return };
        if qa.abs() <= tol || qb.abs() <= tol || qa.signum() == qb.signum() {
            return;
        }
        let (mut lo, mut hi) = (pts[a], pts[b]);
        let mut q_lo = qa;
        for _ in 0..100 {
            let mid = (0.5 * (lo.0 + hi.0), 0.5 * (lo.1 + hi.1));
            let Some(qm) = lightlike_indicator(s, mid.0, mid.1) else { return };
            if qm.abs() <= tol {
                lo = mid;
                hi = mid;
                break;
            }
            if qm.signum() == q_lo.signum() {
                lo = mid;
                q_lo = qm;
            } else {
                hi = mid;
            }
        }
        out.push((0.5 * (lo.0 + hi.0), 0.5 * (lo.1 + hi.1)));
    };
    for i in 0..nu {
        for j in 0..nv {
            if i + 1 < nu {
                refine(at(i, j), at(i + 1, j));
            }
            if j + 1 < nv {
                refine(at(i, j), at(i, j + 1));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isotropy::{cross_euclid, dot_euclid};

    const S: SpaceKind = SpaceKind::SimplyIsotropic;
    const P: SpaceKind = SpaceKind::PseudoIsotropic;

    fn graph(kind: SpaceKind, f: &str) -> SurfacePatch {
        SurfacePatch::graph(kind, Expr::parse(f).unwrap(), Domain::square(5.0))
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn sphere_apex_frame() {
        let s = graph(S, "(u^2+v^2)/4 - 1");
        let f = frame_at(&s, 0.0, 0.0).unwrap();
        assert_eq!(f.xi, Vec3::new(0.0, 0.0, 0.5));
        assert_eq!(f.g, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(f.h, [[0.5, 0.0], [0.0, 0.5]]);
        assert_eq!(f.denom(), 0.5);
        assert!(!f.orientation_swapped);
    }

    #[test]
    fn sphere_gauss_map_off_apex() {
        let s = graph(S, "(u^2+v^2)/4 - 1");
        let f = frame_at(&s, 2.0, 0.0).unwrap();
        assert_eq!((f.minor12, f.minor23, f.minor31), (1.0, -1.0, -0.0));
        assert_eq!(f.xi, Vec3::new(-1.0, -0.0, 0.0));
        // ξ lies on the unit parabolic sphere.
        assert_eq!(f.xi.z, -(f.xi.x * f.xi.x + f.xi.y * f.xi.y) / 2.0 + 0.5);
    }

    #[test]
    fn pseudo_gauss_map() {
        let s = graph(P, "(u^2-v^2)/4");
        let f = frame_at(&s, 0.0, 2.0).unwrap();
        assert_eq!((f.minor12, f.minor23, f.minor13), (1.0, 0.0, -1.0));
        assert!((f.xi - Vec3::new(0.0, -1.0, 1.0)).max_abs() == 0.0);
        assert_eq!(f.xi.z, -(f.xi.x * f.xi.x - f.xi.y * f.xi.y) / 2.0 + 0.5);
        assert_eq!(f.det_g, -1.0);
    }

    #[test]
    fn frame_invariants_on_a_generic_patch() {
        for kind in [S, P] {
            let s = SurfacePatch::parametric(
                kind,
                Expr::parse("u + 0.3*v^2").unwrap(),
                Expr::parse("v - 0.2*u*v").unwrap(),
                Expr::parse("sin(u)*cos(v) + u^3/5").unwrap(),
                Domain::square(1.0),
            );
            let f = frame_at(&s, 0.4, -0.3).unwrap();
            let sign = kind.sign();
            assert!(close(f.det_g, sign * f.minor12 * f.minor12, 1e-12));
            assert_eq!((f.xi.x, f.xi.y), (f.n_h.x, f.n_h.y));
            let on_sphere = -(f.xi.x * f.xi.x + sign * f.xi.y * f.xi.y) / 2.0 + 0.5;
            assert!(close(f.xi.z, on_sphere, 1e-15));
            for i in 0..2 {
                for j in 0..2 {
                    let rebuilt = -(f.a[i][0] * f.g[0][j] + f.a[i][1] * f.g[1][j]);
                    assert!(close(f.h[i][j], rebuilt, 1e-12));
                }
            }
            // K and H agree with det and half-trace of the shape operator.
            let l = f.shape_operator();
            assert!(close(f.gaussian_curvature(), det2(&l), 1e-12));
            assert!(close(f.mean_curvature(), 0.5 * (l[0][0] + l[1][1]), 1e-12));
        }
    }

    #[test]
    fn basis_with_gauss_map_is_independent() {
        let s = SurfacePatch::parametric(
            S,
            Expr::parse("u*cos(v)").unwrap(),
            Expr::parse("u*sin(v)").unwrap(),
            Expr::parse("u^2 - v").unwrap(),
            Domain::new(0.5, 2.0, -1.0, 1.0),
        );
        for (u, v) in s.domain.grid(4, 4) {
            let f = frame_at(&s, u, v).unwrap();
            let lhs = dot_euclid(cross_euclid(f.x1, f.x2), f.xi);
            let (m12, m23, m31) = (f.minor12, f.minor23, f.minor31);
            let rhs = (m23 * m23 + m31 * m31 + m12 * m12) / (2.0 * m12);
            assert!(lhs > 0.0);
            assert!(close(lhs, rhs, 1e-10 * rhs.abs().max(1.0)));
        }
    }

    #[test]
    fn orientation_swap_is_recorded() {
        // (v, u, ...) has X12 = -1.
        let s = SurfacePatch::parametric(
            S,
            Expr::v(),
            Expr::u(),
            Expr::parse("u^2 + 3*v").unwrap(),
            Domain::square(1.0),
        );
        let f = frame_at(&s, 0.5, 0.5).unwrap();
        assert!(f.orientation_swapped);
        assert_eq!(f.minor12, 1.0);
        // Same surface as the graph z = y^2 + 3x at (x, y) = (0.5, 0.5).
        let g = frame_at(&graph(S, "v^2 + 3*u"), 0.5, 0.5).unwrap();
        assert_eq!(f.xi, g.xi);
        assert!(close(f.gaussian_curvature(), g.gaussian_curvature(), 1e-14));
        assert!(close(f.mean_curvature(), g.mean_curvature(), 1e-14));
    }

    #[test]
    fn inadmissible_and_outside_domain() {
        let cyl = SurfacePatch::parametric(
            S,
            Expr::parse("2*cos(u)").unwrap(),
            Expr::parse("2*sin(u)").unwrap(),
            Expr::v(),
            Domain::new(0.0, 6.0, -1.0, 1.0),
        );
        assert!(matches!(frame_at(&cyl, 1.0, 0.0), Err(SurfaceError::NotAdmissible { .. })));
        assert!(matches!(frame_at(&cyl, 7.0, 0.0), Err(SurfaceError::OutsideDomain { .. })));
        let rep = is_admissible(&cyl, 5, 5);
        assert!(rep.none_admissible());
        assert_eq!(rep.min_abs_x12, 0.0);

        let bad = graph(S, "log(u)");
        assert!(matches!(frame_at(&bad, -1.0, 0.0), Err(SurfaceError::Eval { .. })));
    }

    #[test]
    fn graph_patches_are_admissible() {
        for kind in [S, P] {
            let rep = is_admissible(&graph(kind, "u*v + sin(u)"), 7, 7);
            assert!(rep.all_admissible());
            assert_eq!(rep.min_abs_x12, 1.0);
            assert_eq!(rep.timelike, (kind == P).then_some(true));
        }
    }

    #[test]
    fn normal_curvatures() {
        let s = graph(S, "(u^2+v^2)/4 - 1");
        let t = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(normal_curvature(&s, 0.3, 0.2, [t, t]).unwrap(), 0.5, 1e-15));
        assert!(close(normal_curvature(&s, 0.0, 0.0, [1.0, 0.0]).unwrap(), 0.5, 1e-15));
        assert_eq!(normal_curvature(&graph(S, "0"), 0.1, 0.1, [0.6, 0.8]).unwrap(), 0.0);
        let ps = graph(P, "(u^2-v^2)/4");
        assert_eq!(normal_curvature(&ps, 0.0, 0.0, [1.0, 0.0]).unwrap(), 0.5);
        assert_eq!(
            normal_curvature(&ps, 0.0, 0.0, [1.0, 1.0]),
            Err(SurfaceError::LightlikeDirection)
        );
    }

    #[test]
    fn lightlike_locus_of_pseudo_graph() {
        let s = SurfacePatch::graph(P, Expr::parse("(u^2-v^2)/4").unwrap(), Domain::square(4.0));
        let pts = lightlike_points(&s, 21, 21, 1e-12).unwrap();
        assert!(!pts.is_empty());
        for (u, v) in pts {
            assert!(close(u * u - v * v, -4.0, 1e-9), "({u}, {v})");
        }
        let plane = graph(P, "0");
        assert!(lightlike_points(&plane, 9, 9, 1e-12).unwrap().is_empty());
        assert!(lightlike_points(&graph(P, "u"), 9, 9, 1e-12).unwrap().is_empty());
        assert_eq!(
            lightlike_points(&graph(S, "u"), 3, 3, 1e-12),
            Err(SurfaceError::WrongSpace { expected: P })
        );
    }

    #[test]
    fn grids() {
        let d = Domain::new(0.0, 1.0, 10.0, 12.0);
        assert_eq!(d.grid(2, 3), vec![(0.0, 10.0), (0.0, 11.0), (0.0, 12.0), (1.0, 10.0), (1.0, 11.0), (1.0, 12.0)]);
        assert_eq!(d.grid(1, 1), vec![(0.5, 11.0)]);
    }
}
