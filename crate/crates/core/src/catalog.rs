//! Named surfaces with known closed-form curvature.
//!
//! | id                   | space    | immersion                                   | params        |
//! |----------------------|----------|---------------------------------------------|---------------|
//! | `parabolic_sphere`   | both     | `(u, v, (u² ± v²)/(2p) - p/2)`              | `p ≠ 0`       |
//! | `cylindrical_sphere` | both     | `(r cos u, r sin u, v)` / `(r cosh u, r sinh u, v)` | `r > 0` |
//! | `plane`              | both     | `(u, v, a u + b v + c)`                     | `a, b, c`     |
//! | `ruled_nondiag`      | `ip3`    | `(u, u + b v, u v)`                         | `b ≠ 0`       |
//! | `helicoid`           | `ip3`    | `(u cosh v, u sinh v, c v)`                 | `c > 0`       |
//! | `revolution`         | `ip3`    | `(u cosh v, u sinh v, z(u))`                | `z`: expr in `u` |
//! | `minimal_wave`       | `ip3`    | `(u, v, f(u + v) + g(u - v))`               | `f, g`: exprs in `u` |
//! | `minimal_harmonic`   | `i3`     | `(u, v, f(u, v))`, `Δf = 0`                 | `f`: expr     |
//!
//! The cylindrical sphere is nowhere admissible; it is kept as a witness for
//! the admissibility scan.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::expr::Expr;
use crate::isotropy::SpaceKind;
use crate::surface::{Domain, SurfacePatch};

/// Tolerance on `|Δf|`, relative to `1 + |f_uu| + |f_vv|`, for `minimal_harmonic`.
pub const HARMONIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown catalog surface `{0}`")]
    UnknownId(String),
    #[error("{id}: {reason}")]
    BadParam { id: &'static str, reason: String },
}

fn bad(id: &'static str, reason: impl Into<String>) -> CatalogError {
    CatalogError::BadParam { id, reason: reason.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

pub type Params = BTreeMap<String, ParamValue>;

#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    ParabolicSphere { p: f64 },
    CylindricalSphere { r: f64 },
    Plane { a: f64, b: f64, c: f64 },
    RuledNondiag { b: f64 },
    Helicoid { c: f64 },
    Revolution { z: Expr },
    MinimalWave { f: Expr, g: Expr },
    MinimalHarmonic { f: Expr },
}

pub const IDS: [&str; 8] = [
    "parabolic_sphere",
    "cylindrical_sphere",
    "plane",
    "ruled_nondiag",
    "helicoid",
    "revolution",
    "minimal_wave",
    "minimal_harmonic",
];

impl Builtin {
    pub fn id(&self) -> &'static str {
        match self {
            Builtin::ParabolicSphere { .. } => IDS[0],
            Builtin::CylindricalSphere { .. } => IDS[1],
            Builtin::Plane { .. } => IDS[2],
            Builtin::RuledNondiag { .. } => IDS[3],
            Builtin::Helicoid { .. } => IDS[4],
            Builtin::Revolution { .. } => IDS[5],
            Builtin::MinimalWave { .. } => IDS[6],
            Builtin::MinimalHarmonic { .. } => IDS[7],
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.id())?;
        match self {
            Builtin::ParabolicSphere { p } => write!(f, "p={p:?}")?,
            Builtin::CylindricalSphere { r } => write!(f, "r={r:?}")?,
            Builtin::Plane { a, b, c } => write!(f, "a={a:?}, b={b:?}, c={c:?}")?,
            Builtin::RuledNondiag { b } => write!(f, "b={b:?}")?,
            Builtin::Helicoid { c } => write!(f, "c={c:?}")?,
            Builtin::Revolution { z } => write!(f, "z={z}")?,
            Builtin::MinimalWave { f: ff, g } => write!(f, "f={ff}, g={g}")?,
            Builtin::MinimalHarmonic { f: ff } => write!(f, "f={ff}")?,
        }
        write!(f, ")")
    }
}

/// Closed-form values at a parameter point; `None` where no formula is attached.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClosedForm {
    pub k: Option<f64>,
    pub h: Option<f64>,
    /// `H² - K`.
    pub discriminant: Option<f64>,
}

/// A validated catalog surface in a fixed space.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    builtin: Builtin,
    kind: SpaceKind,
    immersion: [Expr; 3],
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.builtin, self.kind)
    }
}

/// One-variable jet `(value, first, second)` of a profile expression in `u`.
fn profile_jet(e: &Expr, t: f64) -> Option<(f64, f64, f64)> {
    e.eval_jet2(t, 0.0).ok().map(|j| (j.val, j.du, j.duu))
}

fn c(x: f64) -> Expr {
    Expr::constant(x)
}

impl CatalogEntry {
    /// Validate parameters and build the immersion.
    pub fn new(kind: SpaceKind, builtin: Builtin) -> Result<Self, CatalogError> {
        use SpaceKind::*;
        let id = builtin.id();
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(bad(id, format!("parameter `{name}` must be finite")))
            }
        };
        let only = |k: SpaceKind| {
            if kind == k {
                Ok(())
            } else {
                Err(bad(id, format!("only defined in {k}")))
            }
        };
        let profile = |name: &str, e: &Expr| {
            if e.substitute(&Expr::u(), &c(0.0)) != *e {
                Err(bad(id, format!("`{name}` must be an expression in u only")))
            } else {
                Ok(())
            }
        };
        let (u, v) = (Expr::u(), Expr::v());
        let immersion = match &builtin {
            Builtin::ParabolicSphere { p } => {
                finite("p", *p)?;
                if *p == 0.0 {
                    return Err(bad(id, "p must be non-zero"));
                }
                let quad = match kind {
                    SimplyIsotropic => u.clone().pow(c(2.0)) + v.clone().pow(c(2.0)),
                    PseudoIsotropic => u.clone().pow(c(2.0)) - v.clone().pow(c(2.0)),
                };
                [u, v, quad / c(2.0 * p) - c(p / 2.0)]
            }
            Builtin::CylindricalSphere { r } => {
                finite("r", *r)?;
                if *r <= 0.0 {
                    return Err(bad(id, "r must be positive"));
                }
                let (fx, fy) = match kind {
                    SimplyIsotropic => (crate::expr::Func::Cos, crate::expr::Func::Sin),
                    PseudoIsotropic => (crate::expr::Func::Cosh, crate::expr::Func::Sinh),
                };
                [c(*r) * u.clone().apply(fx), c(*r) * u.apply(fy), v]
            }
            Builtin::Plane { a, b, c: c0 } => {
                finite("a", *a)?;
                finite("b", *b)?;
                finite("c", *c0)?;
                [u.clone(), v.clone(), c(*a) * u + c(*b) * v + c(*c0)]
            }
            Builtin::RuledNondiag { b } => {
                only(PseudoIsotropic)?;
                finite("b", *b)?;
                if *b == 0.0 {
                    return Err(bad(id, "b must be non-zero"));
                }
                [u.clone(), u.clone() + c(*b) * v.clone(), u * v]
            }
            Builtin::Helicoid { c: c0 } => {
                only(PseudoIsotropic)?;
                finite("c", *c0)?;
                if *c0 <= 0.0 {
                    return Err(bad(id, "c must be positive"));
                }
                use crate::expr::Func::{Cosh, Sinh};
                [u.clone() * v.clone().apply(Cosh), u * v.clone().apply(Sinh), c(*c0) * v]
            }
            Builtin::Revolution { z } => {
                only(PseudoIsotropic)?;
                profile("z", z)?;
                use crate::expr::Func::{Cosh, Sinh};
                [u.clone() * v.clone().apply(Cosh), u * v.apply(Sinh), z.clone()]
            }
            Builtin::MinimalWave { f, g } => {
                only(PseudoIsotropic)?;
                profile("f", f)?;
                profile("g", g)?;
                let plus = u.clone() + v.clone();
                let minus = u.clone() - v.clone();
                let zero = c(0.0);
                let z = f.substitute(&plus, &zero) + g.substitute(&minus, &zero);
                [u, v, z]
            }
            Builtin::MinimalHarmonic { f } => {
                only(SimplyIsotropic)?;
                check_harmonic(f, &Domain::square(1.0))?;
                [u, v, f.clone()]
            }
        };
        Ok(Self { builtin, kind, immersion })
    }

    pub fn id(&self) -> &'static str {
        self.builtin.id()
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn builtin(&self) -> &Builtin {
        &self.builtin
    }

    pub fn immersion(&self) -> &[Expr; 3] {
        &self.immersion
    }

    /// A parameter rectangle on which the entry is admissible and stays away
    /// from lightlike points.
    pub fn default_domain(&self) -> Domain {
        match (&self.builtin, self.kind) {
            (Builtin::ParabolicSphere { p }, SpaceKind::SimplyIsotropic) => Domain::square(p.abs()),
            // Lightlike where v² - u² = p².
            (Builtin::ParabolicSphere { p }, SpaceKind::PseudoIsotropic) => Domain::square(0.5 * p.abs()),
            (Builtin::CylindricalSphere { .. }, SpaceKind::SimplyIsotropic) => {
                Domain::new(0.0, std::f64::consts::TAU, -1.0, 1.0)
            }
            // Lightlike at u = c.
            (Builtin::Helicoid { c }, _) => Domain::new(1.75 * c, 4.0 * c, -1.0, 1.0),
            (Builtin::Revolution { .. }, _) => Domain::new(0.75, 2.0, -1.0, 1.0),
            _ => Domain::square(1.0),
        }
    }

    /// Patch on the default domain.
    pub fn patch(self) -> SurfacePatch {
        SurfacePatch::builtin(self)
    }

    /// Closed-form curvature at `(u, v)` where a formula is known.
    pub fn closed_form(&self, u: f64, v: f64) -> ClosedForm {
        let both = |k: f64, h: f64| ClosedForm { k: Some(k), h: Some(h), discriminant: Some(h * h - k) };
        match &self.builtin {
            Builtin::ParabolicSphere { p } => both(1.0 / (p * p), 1.0 / p),
            Builtin::Plane { .. } => both(0.0, 0.0),
            Builtin::RuledNondiag { b } => both(1.0 / (b * b), -1.0 / b),
            Builtin::Helicoid { c } => both(c * c / u.powi(4), 0.0),
            Builtin::Revolution { z } => match profile_jet(z, u) {
                Some((_, z1, z2)) => {
                    let d = z2 / 2.0 - z1 / (2.0 * u);
                    ClosedForm {
                        k: Some(z1 * z2 / u),
                        h: Some(z2 / 2.0 + z1 / (2.0 * u)),
                        discriminant: Some(d * d),
                    }
                }
                None => ClosedForm::default(),
            },
            Builtin::MinimalWave { f, g } => {
                // z_uu z_vv - z_uv² = -4 f'' g''.
                match (profile_jet(f, u + v), profile_jet(g, u - v)) {
                    (Some((_, _, f2)), Some((_, _, g2))) => {
                        let k = -4.0 * f2 * g2;
                        ClosedForm { k: Some(k), h: Some(0.0), discriminant: Some(-k) }
                    }
                    _ => ClosedForm { h: Some(0.0), ..ClosedForm::default() },
                }
            }
            Builtin::MinimalHarmonic { .. } => ClosedForm { h: Some(0.0), ..ClosedForm::default() },
            Builtin::CylindricalSphere { .. } => ClosedForm::default(),
        }
    }

    /// Whether every point is umbilic, where this is known for the family.
    pub fn totally_umbilical(&self) -> Option<bool> {
        match self.builtin {
            Builtin::ParabolicSphere { .. } | Builtin::Plane { .. } => Some(true),
            Builtin::RuledNondiag { .. } | Builtin::Helicoid { .. } => Some(false),
            _ => None,
        }
    }

    /// Whether the family admits a non-isotropic tangent plane anywhere.
    pub fn is_admissible_family(&self) -> bool {
        !matches!(self.builtin, Builtin::CylindricalSphere { .. })
    }

    /// Zero mean curvature is part of the family's definition.
    pub fn is_minimal_family(&self) -> bool {
        matches!(self.builtin, Builtin::MinimalWave { .. } | Builtin::MinimalHarmonic { .. })
    }
}

fn check_harmonic(f: &Expr, domain: &Domain) -> Result<(), CatalogError> {
    let id = IDS[7];
    for (u, v) in domain.grid(11, 11) {
        let j = f
            .eval_jet2(u, v)
            .map_err(|e| bad(id, format!("cannot evaluate f at ({u}, {v}): {e}")))?;
        let lap = j.duu + j.dvv;
        if !(lap.abs() <= HARMONIC_TOL * (1.0 + j.duu.abs() + j.dvv.abs())) {
            return Err(bad(id, format!("f is not harmonic: Δf = {lap:e} at ({u}, {v})")));
        }
    }
    Ok(())
}

fn number(id: &'static str, params: &Params, name: &str) -> Result<f64, CatalogError> {
    match params.get(name) {
        Some(ParamValue::Number(x)) => Ok(*x),
        Some(ParamValue::Text(t)) => t
            .trim()
            .parse::<f64>()
            .map_err(|_| bad(id, format!("parameter `{name}` must be a number"))),
        None => Err(bad(id, format!("missing parameter `{name}`"))),
    }
}

fn expression(id: &'static str, params: &Params, name: &str) -> Result<Expr, CatalogError> {
    match params.get(name) {
        Some(ParamValue::Number(x)) => Ok(Expr::constant(*x)),
        Some(ParamValue::Text(t)) => {
            Expr::parse(t).map_err(|e| bad(id, format!("parameter `{name}`: {e}")))
        }
        None => Err(bad(id, format!("missing parameter `{name}`"))),
    }
}

/// Build a catalog entry from an id and named parameters. Unknown or missing
/// parameter names are rejected.
pub fn entry(kind: SpaceKind, id: &str, params: &Params) -> Result<CatalogEntry, CatalogError> {
    let pos = IDS.iter().position(|x| *x == id).ok_or_else(|| CatalogError::UnknownId(id.to_string()))?;
    let id = IDS[pos];
    let names: &[&str] = match pos {
        0 => &["p"],
        1 => &["r"],
        2 => &["a", "b", "c"],
        3 => &["b"],
        4 => &["c"],
        5 => &["z"],
        6 => &["f", "g"],
        _ => &["f"],
    };
    if let Some(extra) = params.keys().find(|k| !names.contains(&k.as_str())) {
        return Err(bad(id, format!("unknown parameter `{extra}`")));
    }
    let builtin = match pos {
        0 => Builtin::ParabolicSphere { p: number(id, params, "p")? },
        1 => Builtin::CylindricalSphere { r: number(id, params, "r")? },
        2 => Builtin::Plane {
            a: number(id, params, "a")?,
            b: number(id, params, "b")?,
            c: number(id, params, "c")?,
        },
        3 => Builtin::RuledNondiag { b: number(id, params, "b")? },
        4 => Builtin::Helicoid { c: number(id, params, "c")? },
        5 => Builtin::Revolution { z: expression(id, params, "z")? },
        6 => Builtin::MinimalWave { f: expression(id, params, "f")?, g: expression(id, params, "g")? },
        _ => Builtin::MinimalHarmonic { f: expression(id, params, "f")? },
    };
    CatalogEntry::new(kind, builtin)
}

/// [`entry`] on its default domain.
pub fn make(kind: SpaceKind, id: &str, params: &Params) -> Result<SurfacePatch, CatalogError> {
    entry(kind, id, params).map(CatalogEntry::patch)
}

/// Representative admissible instances of every family, used by catalog-wide checks.
pub fn standard_instances() -> Vec<CatalogEntry> {
    use SpaceKind::*;
    let e = |s: &str| Expr::parse(s).expect("built-in expression");
    let list = [
        (SimplyIsotropic, Builtin::ParabolicSphere { p: 2.0 }),
        (SimplyIsotropic, Builtin::ParabolicSphere { p: -1.5 }),
        (PseudoIsotropic, Builtin::ParabolicSphere { p: 1.0 }),
        (SimplyIsotropic, Builtin::Plane { a: 0.3, b: -0.2, c: 1.0 }),
        (PseudoIsotropic, Builtin::Plane { a: 0.3, b: -0.2, c: 1.0 }),
        (PseudoIsotropic, Builtin::RuledNondiag { b: 2.0 }),
        (PseudoIsotropic, Builtin::Helicoid { c: 1.0 }),
        (PseudoIsotropic, Builtin::Revolution { z: e("log(u)") }),
        (PseudoIsotropic, Builtin::MinimalWave { f: e("0.2*sin(u)"), g: e("0.1*u^2") }),
        (SimplyIsotropic, Builtin::MinimalHarmonic { f: e("exp(u)*sin(v)/2") }),
    ];
    list.into_iter()
        .map(|(k, b)| CatalogEntry::new(k, b).expect("standard instance is valid"))
        .collect()
}
