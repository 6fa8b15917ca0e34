//! Geodesics of the induced and relative connections, and the closed-form
//! plane sections of parabolic spheres.
//!
//! Both connections give the same autonomous system
//! `ü^k = -C^k_ij u̇^i u̇^j` with `C = Γ` (Levi-Civita) or `C = Ξ` (relative),
//! integrated here by fixed-step classical RK4.

use thiserror::Error;

use crate::catalog::{Builtin, CatalogEntry};
use crate::connection::{coeffs_at, coeffs_from_frame, ConnectionError, Coeffs3};
use crate::isotropy::{cross_background, SpaceKind, Vec3};
use crate::surface::{frame_at, Domain, SurfaceError, SurfacePatch};

/// Below this `‖γ̈‖` the parallel residual is reported as zero.
pub const ACCEL_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionKind {
    LeviCivita,
    Relative,
}

impl ConnectionKind {
    pub fn tag(self) -> &'static str {
        match self {
            ConnectionKind::LeviCivita => "lc",
            ConnectionKind::Relative => "r",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "lc" => Some(ConnectionKind::LeviCivita),
            "r" => Some(ConnectionKind::Relative),
            _ => None,
        }
    }
}

/// A straight line `origin + s·direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub origin: Vec3,
    pub direction: Vec3,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeodesicError {
    #[error("step must be positive and finite, got {0}")]
    StepNotPositive(f64),
    #[error("end time must be non-negative and finite, got {0}")]
    BadTimeSpan(f64),
    #[error("trajectory left the domain at t = {0}")]
    LeftDomain(f64),
    #[error("start point is lightlike or too close to the lightlike locus")]
    LightlikePointHit,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("parameter {name} must be finite{extra}")]
    BadSection { name: &'static str, extra: &'static str },
    #[error("degenerate section (R = 0): the intersection is a pair of lines")]
    DegenerateBranch { lines: [Line; 2] },
    #[error("angular speed became singular near theta = {0}")]
    SingularSection(f64),
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Completed,
    LeftDomain { t: f64 },
    LightlikePoint { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSample {
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub du: f64,
    pub dv: f64,
    pub position: Vec3,
    /// Sine of the angle between `γ̈` and the connection's normal
    /// (`e3` for Levi-Civita, `ξ` for relative), in the background cross product.
    pub parallel_residual: f64,
    /// `sqrt(|I(γ', γ')|)`.
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicTrace {
    pub kind: ConnectionKind,
    pub samples: Vec<GeodesicSample>,
    pub termination: Termination,
}

impl GeodesicTrace {
    pub fn max_parallel_residual(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.parallel_residual))
    }

    /// `(max - min) / max` of the induced speed.
    pub fn speed_variation(&self) -> f64 {
        let (lo, hi) = self
            .samples
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), s| (lo.min(s.speed), hi.max(s.speed)));
        if hi > 0.0 {
            (hi - lo) / hi
        } else {
            0.0
        }
    }
}

enum Stop {
    Domain,
    Lightlike,
}

type State = [f64; 4];

fn coefficients(s: &SurfacePatch, kind: ConnectionKind, u: f64, v: f64) -> Result<Coeffs3, Stop> {
    match kind {
        ConnectionKind::Relative => match coeffs_at(s, u, v) {
            Ok(c) => Ok(c.xi_coeffs),
            Err(ConnectionError::LightlikePoint { .. } | ConnectionError::Unreliable { .. }) => {
                Err(Stop::Lightlike)
            }
            Err(_) => Err(Stop::Domain),
        },
        ConnectionKind::LeviCivita => match frame_at(s, u, v) {
            Ok(f) => Ok(coeffs_from_frame(f).gamma),
            Err(_) => Err(Stop::Domain),
        },
    }
}

fn contract(c: &Coeffs3, du: f64, dv: f64) -> [f64; 2] {
    let w = [du, dv];
    let mut acc = [0.0; 2];
    for (k, a) in acc.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                *a -= c[k][i][j] * w[i] * w[j];
            }
        }
    }
    acc
}

fn rhs(s: &SurfacePatch, kind: ConnectionKind, y: &State) -> Result<State, Stop> {
    let c = coefficients(s, kind, y[0], y[1])?;
    let a = contract(&c, y[2], y[3]);
    Ok([y[2], y[3], a[0], a[1]])
}

fn rk4(s: &SurfacePatch, kind: ConnectionKind, y: &State, h: f64) -> Result<State, Stop> {
    let add = |y: &State, k: &State, f: f64| [y[0] + f * k[0], y[1] + f * k[1], y[2] + f * k[2], y[3] + f * k[3]];
    let k1 = rhs(s, kind, y)?;
    let k2 = rhs(s, kind, &add(y, &k1, 0.5 * h))?;
    let k3 = rhs(s, kind, &add(y, &k2, 0.5 * h))?;
    let k4 = rhs(s, kind, &add(y, &k3, h))?;
    let mut out = *y;
    for i in 0..4 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// `sin ∠(a, n)` in the background cross product, or 0 when `a` is negligible.
fn parallel_residual(kind: SpaceKind, a: Vec3, n: Vec3) -> f64 {
    let na = a.euclid_len();
    if na <= ACCEL_FLOOR {
        return 0.0;
    }
    cross_background(kind, a, n).euclid_len() / (na * n.euclid_len())
}

fn sample(s: &SurfacePatch, kind: ConnectionKind, t: f64, y: &State) -> Result<GeodesicSample, Stop> {
    let frame = frame_at(s, y[0], y[1]).map_err(|_| Stop::Domain)?;
    let c = coefficients(s, kind, y[0], y[1])?;
    let w = [y[2], y[3]];
    let acc = contract(&c, y[2], y[3]);
    let mut gamma_dd = frame.x1 * acc[0] + frame.x2 * acc[1];
    let mut first = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            gamma_dd += frame.second(i, j) * (w[i] * w[j]);
            first += frame.g[i][j] * w[i] * w[j];
        }
    }
    let normal = match kind {
        ConnectionKind::LeviCivita => Vec3::E3,
        ConnectionKind::Relative => frame.xi,
    };
    Ok(GeodesicSample {
        t,
        u: y[0],
        v: y[1],
        du: y[2],
        dv: y[3],
        position: frame.position,
        parallel_residual: parallel_residual(s.kind, gamma_dd, normal),
        speed: first.abs().sqrt(),
    })
}

/// Integrate a geodesic from `(u0, v0)` with parameter velocity `(du0, dv0)`.
///
/// Samples are taken at `t_n = min(n·step, t_end)`. Integration halts, with the
/// reason recorded in [`GeodesicTrace::termination`], when a Runge-Kutta stage
/// leaves the domain, reaches an inadmissible point, or (relative connection)
/// comes within the near-lightlike guard band. An invalid start is an error.
#[allow(clippy::too_many_arguments)]
pub fn integrate(
    s: &SurfacePatch,
    kind: ConnectionKind,
    u0: f64,
    v0: f64,
    du0: f64,
    dv0: f64,
    t_end: f64,
    step: f64,
) -> Result<GeodesicTrace, GeodesicError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(GeodesicError::StepNotPositive(step));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(GeodesicError::BadTimeSpan(t_end));
    }
    let mut y = [u0, v0, du0, dv0];
    let first = sample(s, kind, 0.0, &y).map_err(|e| match e {
        Stop::Domain => match frame_at(s, u0, v0) {
            Err(e @ SurfaceError::NotAdmissible { .. }) => GeodesicError::Surface(e),
            _ => GeodesicError::LeftDomain(0.0),
        },
        Stop::Lightlike => GeodesicError::LightlikePointHit,
    })?;
    let mut samples = vec![first];
    let mut termination = Termination::Completed;
    let mut n: u64 = 0;
    let mut t = 0.0;
    while t < t_end {
        n += 1;
        let next_t = (n as f64 * step).min(t_end);
        let h = next_t - t;
        let stepped = rk4(s, kind, &y, h).and_then(|y_new| {
            if !s.domain.contains(y_new[0], y_new[1]) {
                return Err(Stop::Domain);
            }
            sample(s, kind, next_t, &y_new).map(|smp| (y_new, smp))
        });
        match stepped {
            Ok((y_new, smp)) => {
                y = y_new;
                t = next_t;
                samples.push(smp);
            }
            Err(Stop::Domain) => {
                termination = Termination::LeftDomain { t };
                break;
            }
            Err(Stop::Lightlike) => {
                termination = Termination::LightlikePoint { t };
                break;
            }
        }
    }
    Ok(GeodesicTrace { kind, samples, termination })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Trig,
    HyperbolicCosh,
    HyperbolicSinh,
    LinePair,
}

/// `|R²|` at or below this selects the line-pair branch.
pub const LINE_PAIR_TOL: f64 = 1e-12;

/// Intersection of the parabolic sphere `z = p/2 - (x² ± y²)/(2p)` with the
/// plane `z = -a x ∓ b y` through its center, parameterised by an angle `θ`,
/// together with initial angular data `θ(0)`, `θ'(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneSection {
    pub kind: SpaceKind,
    pub p: f64,
    pub a: f64,
    pub b: f64,
    pub theta0: f64,
    pub theta_dot0: f64,
}

impl PlaneSection {
    pub fn new(kind: SpaceKind, p: f64, a: f64, b: f64, theta0: f64, theta_dot0: f64) -> Result<Self, GeodesicError> {
        for (name, x) in [("p", p), ("a", a), ("b", b), ("theta0", theta0), ("theta_dot0", theta_dot0)] {
            if !x.is_finite() {
                return Err(GeodesicError::BadSection { name, extra: "" });
            }
        }
        if p == 0.0 {
            return Err(GeodesicError::BadSection { name: "p", extra: " and non-zero" });
        }
        Ok(Self { kind, p, a, b, theta0, theta_dot0 })
    }

    /// `1 + a² ± b²`.
    pub fn r_squared(&self) -> f64 {
        1.0 + self.a * self.a + self.kind.sign() * self.b * self.b
    }

    pub fn branch(&self) -> Branch {
        let r2 = self.r_squared();
        match self.kind {
            SpaceKind::SimplyIsotropic => Branch::Trig,
            SpaceKind::PseudoIsotropic if r2.abs() <= LINE_PAIR_TOL => Branch::LinePair,
            SpaceKind::PseudoIsotropic if r2 > 0.0 => Branch::HyperbolicCosh,
            SpaceKind::PseudoIsotropic => Branch::HyperbolicSinh,
        }
    }

    /// `R = sqrt(|R²|)`.
    pub fn r(&self) -> f64 {
        self.r_squared().abs().sqrt()
    }

    /// The sphere as a catalog graph patch over `domain`.
    pub fn sphere(&self, domain: Domain) -> SurfacePatch {
        let entry = CatalogEntry::new(self.kind, Builtin::ParabolicSphere { p: -self.p })
            .expect("p is finite and non-zero");
        SurfacePatch::builtin_on(entry, domain)
    }

    /// Point and its first two `θ`-derivatives.
    pub fn curve(&self, theta: f64) -> [Vec3; 3] {
        let (p, a, b, r) = (self.p, self.a, self.b, self.r());
        let (e, f, s, c) = match self.branch() {
            Branch::Trig => {
                let (s, c) = theta.sin_cos();
                (Vec3::new(1.0, 0.0, -a), Vec3::new(0.0, 1.0, -b), s, c)
            }
            _ => (Vec3::new(1.0, 0.0, -a), Vec3::new(0.0, 1.0, b), theta.sinh(), theta.cosh()),
        };
        let center = e * a + f * b;
        let (pos, d1, d2) = match self.branch() {
            Branch::Trig => (e * c + f * s, e * (-s) + f * c, (e * c + f * s) * -1.0),
            Branch::HyperbolicCosh | Branch::LinePair => (e * c + f * s, e * s + f * c, e * c + f * s),
            Branch::HyperbolicSinh => (e * s + f * c, e * c + f * s, e * s + f * c),
        };
        [(center + pos * r) * p, d1 * (r * p), d2 * (r * p)]
    }

    /// `D(θ)`, with `θ'' = -(D'/D) θ'²` and hence `θ' D(θ)` constant.
    fn d_and_slope(&self, theta: f64) -> (f64, f64) {
        let (a, b, r) = (self.a, self.b, self.r());
        match self.branch() {
            Branch::Trig => {
                let (s, c) = theta.sin_cos();
                (r + a * c + b * s, -a * s + b * c)
            }
            Branch::HyperbolicCosh | Branch::LinePair => {
                let (s, c) = (theta.sinh(), theta.cosh());
                (r + a * c - b * s, a * s - b * c)
            }
            Branch::HyperbolicSinh => {
                let (s, c) = (theta.sinh(), theta.cosh());
                (r + b * c - a * s, b * s - a * c)
            }
        }
    }

    /// `G(θ) = -D'(θ)/D(θ)`.
    pub fn g(&self, theta: f64) -> f64 {
        let (d, dd) = self.d_and_slope(theta);
        -dd / d
    }

    fn line_pair(&self) -> [Line; 2] {
        let (p, a, b) = (self.p, self.a, self.b);
        let origin = Vec3::new(a * p, b * p, p * (b * b - a * a));
        [
            Line { origin, direction: Vec3::new(1.0, 1.0, -a + b) },
            Line { origin, direction: Vec3::new(1.0, -1.0, -a - b) },
        ]
    }

    /// `z + a x ∓ b y`.
    pub fn plane_residual(&self, q: Vec3) -> f64 {
        (q.z + self.a * q.x + self.kind.sign() * self.b * q.y).abs()
    }

    /// `z - p/2 + (x² ± y²)/(2p)`.
    pub fn sphere_residual(&self, q: Vec3) -> f64 {
        (q.z - self.p / 2.0 + (q.x * q.x + self.kind.sign() * q.y * q.y) / (2.0 * self.p)).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionSample {
    pub t: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
    pub plane_residual: f64,
    pub sphere_residual: f64,
    /// `‖γ × γ̈‖ / (‖γ‖ ‖γ̈‖)`, background cross product; 0 when `γ̈` is negligible.
    pub cross_residual: f64,
}

/// Angular step (relative to `|θ'(0)|`) of the first-stage integration in `θ`.
const THETA_STEP: f64 = 1e-3;
const MAX_THETA_STEPS: usize = 50_000_000;

/// Evaluate the plane section at the given times (non-negative, any order).
///
/// Stage one integrates `dΘ/dθ = G(θ) Θ` and `dt/dθ = 1/Θ` with RK4 in `θ`;
/// stage two inverts the tabulated `t(θ)` by cubic Hermite interpolation.
pub fn plane_section(ps: &PlaneSection, t_grid: &[f64]) -> Result<Vec<SectionSample>, GeodesicError> {
    if ps.branch() == Branch::LinePair {
        return Err(GeodesicError::DegenerateBranch { lines: ps.line_pair() });
    }
    let t_max = t_grid.iter().fold(0.0_f64, |m, &t| m.max(t));
    if let Some(&bad) = t_grid.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return Err(GeodesicError::BadTimeSpan(bad));
    }
    let at = |t: f64, theta: f64, theta_dot: f64| {
        let [pos, d1, d2] = ps.curve(theta);
        let theta_dd = ps.g(theta) * theta_dot * theta_dot;
        let velocity = d1 * theta_dot;
        let acceleration = d2 * (theta_dot * theta_dot) + d1 * theta_dd;
        let cross = if acceleration.euclid_len() <= ACCEL_FLOOR {
            0.0
        } else {
            cross_background(ps.kind, pos, acceleration).euclid_len()
                / (pos.euclid_len() * acceleration.euclid_len())
        };
        SectionSample {
            t,
            theta,
            theta_dot,
            position: pos,
            velocity,
            acceleration,
            plane_residual: ps.plane_residual(pos),
            sphere_residual: ps.sphere_residual(pos),
            cross_residual: cross,
        }
    };
    if ps.theta_dot0 == 0.0 {
        return Ok(t_grid.iter().map(|&t| at(t, ps.theta0, 0.0)).collect());
    }

    // Stage one: table of (θ, Θ, t) until t passes t_max.
    let h = THETA_STEP * ps.theta_dot0.abs() * ps.theta_dot0.signum();
    let field = |theta: f64, y: [f64; 2]| [ps.g(theta) * y[0], 1.0 / y[0]];
    let mut table = vec![(ps.theta0, ps.theta_dot0, 0.0)];
    let mut theta = ps.theta0;
    let mut y = [ps.theta_dot0, 0.0];
    while y[1] < t_max {
        if table.len() > MAX_THETA_STEPS {
            return Err(GeodesicError::SingularSection(theta));
        }
        let k1 = field(theta, y);
        let k2 = field(theta + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = field(theta + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = field(theta + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        theta += h;
        if !(y[0].is_finite() && y[1].is_finite()) || y[0].abs() > 1e12 || y[0].signum() != h.signum() {
            return Err(GeodesicError::SingularSection(theta));
        }
        table.push((theta, y[0], y[1]));
    }

    // Stage two: θ(t) and Θ(t) by Hermite interpolation in t.
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let k = table.partition_point(|e| e.2 <= t).clamp(1, table.len() - 1);
        let ((th0, w0, t0), (th1, w1, t1)) = (table[k - 1], table[k]);
        let dt = t1 - t0;
        let s = if dt > 0.0 { (t - t0) / dt } else { 0.0 };
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
            s * (1.0 - s) * (1.0 - s),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        let theta = h00 * th0 + h10 * dt * w0 + h01 * th1 + h11 * dt * w1;
        // dΘ/dt = G Θ².
        let (a0, a1) = (ps.g(th0) * w0 * w0, ps.g(th1) * w1 * w1);
        let theta_dot = h00 * w0 + h10 * dt * a0 + h01 * w1 + h11 * dt * a1;
        out.push(at(t, theta, theta_dot));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheckReport {
    pub section: PlaneSection,
    pub branch: Branch,
    /// Largest Euclidean distance between corresponding points of the two traces.
    pub deviation: f64,
    pub integrated_plane_residual: f64,
    pub integrated_sphere_residual: f64,
    pub section_plane_residual: f64,
    pub section_sphere_residual: f64,
    pub section_cross_residual: f64,
    pub parallel_residual: f64,
    pub speed_variation: f64,
    pub termination: Termination,
    pub samples: usize,
}

/// Integrate the relative geodesic equation on the sphere from the plane
/// section's initial data (`θ(0) = 0`, `θ'(0) = 1`) and compare the traces on
/// `t ∈ [0, t_end]`.
pub fn cross_check_sphere_geodesic(
    kind: SpaceKind,
    p: f64,
    a: f64,
    b: f64,
    t_end: f64,
    step: f64,
) -> Result<CrossCheckReport, GeodesicError> {
    let section = PlaneSection::new(kind, p, a, b, 0.0, 1.0)?;
    cross_check_section(&section, t_end, step)
}

pub fn cross_check_section(section: &PlaneSection, t_end: f64, step: f64) -> Result<CrossCheckReport, GeodesicError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(GeodesicError::StepNotPositive(step));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(GeodesicError::BadTimeSpan(t_end));
    }
    let n = (t_end / step).ceil() as usize;
    let times: Vec<f64> = (0..=n).map(|i| (i as f64 * step).min(t_end)).collect();
    let closed = plane_section(section, &times)?;

    let (mut u0, mut u1, mut v0, mut v1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for s in &closed {
        u0 = u0.min(s.position.x);
        u1 = u1.max(s.position.x);
        v0 = v0.min(s.position.y);
        v1 = v1.max(s.position.y);
    }
    let margin = 0.5;
    let sphere = section.sphere(Domain::new(u0 - margin, u1 + margin, v0 - margin, v1 + margin));
    let start = &closed[0];
    let trace = integrate(
        &sphere,
        ConnectionKind::Relative,
        start.position.x,
        start.position.y,
        start.velocity.x,
        start.velocity.y,
        t_end,
        step,
    )?;

    let mut report = CrossCheckReport {
        section: *section,
        branch: section.branch(),
        deviation: 0.0,
        integrated_plane_residual: 0.0,
        integrated_sphere_residual: 0.0,
        section_plane_residual: 0.0,
        section_sphere_residual: 0.0,
        section_cross_residual: 0.0,
        parallel_residual: trace.max_parallel_residual(),
        speed_variation: trace.speed_variation(),
        termination: trace.termination,
        samples: trace.samples.len(),
    };
    for (num, cf) in trace.samples.iter().zip(&closed) {
        report.deviation = report.deviation.max((num.position - cf.position).euclid_len());
        report.integrated_plane_residual = report.integrated_plane_residual.max(section.plane_residual(num.position));
        report.integrated_sphere_residual = report.integrated_sphere_residual.max(section.sphere_residual(num.position));
    }
    for cf in &closed {
        report.section_plane_residual = report.section_plane_residual.max(cf.plane_residual);
        report.section_sphere_residual = report.section_sphere_residual.max(cf.sphere_residual);
        report.section_cross_residual = report.section_cross_residual.max(cf.cross_residual);
    }
    Ok(report)
}
