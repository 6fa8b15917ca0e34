//! Induced (isotropic Levi-Civita) and relative connections, their curvature
//! tensors, and the structure-equation residuals.
//!
//! At an admissible point the second derivatives split in two ways:
//!
//! ```text
//! x_ij = Γ^k_ij x_k + h_ij e3        (isotropic normal)
//! x_ij = Ξ^k_ij x_k + ρ_ij ξ         (relative normal, ξ the parabolic Gauss map)
//! ```
//!
//! with `ρ_ij = h_ij / denom` and `Ξ^k_ij = Γ^k_ij + g^{kl} x_l³ ρ_ij`.
//!
//! Curvature tensors follow one pattern for either coefficient field `C`:
//! `R^l_ijk = C^l_ij,k - C^l_ik,j + C^s_ij C^l_ks - C^s_ik C^l_js`, with the
//! coefficient derivatives taken by central differences.

use thiserror::Error;

use crate::isotropy::Vec3;
use crate::surface::{frame_at, PointFrame, SurfaceError, SurfacePatch};

/// `|denom|` at or below this is treated as a lightlike point.
pub const LIGHTLIKE_TOL: f64 = 1e-10;
/// `|denom|` below this (and above [`LIGHTLIKE_TOL`]) is reported as unreliable.
pub const NEAR_LIGHTLIKE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConnectionError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("lightlike point at ({u}, {v}): denom = {denom:e}")]
    LightlikePoint { u: f64, v: f64, denom: f64 },
    #[error("point ({u}, {v}) is too close to the lightlike locus (denom = {denom:e})")]
    Unreliable { u: f64, v: f64, denom: f64 },
    #[error("finite-difference stencil around ({u}, {v}) with step {step} leaves the domain")]
    StencilOutsideDomain { u: f64, v: f64, step: f64 },
    #[error("finite-difference step must be positive and finite, got {0}")]
    BadStep(f64),
}

/// `c[k][i][j]` holds `C^k_ij`.
pub type Coeffs3 = [[[f64; 2]; 2]; 2];
/// `r[l][i][j][k]` holds `R^l_ijk` (or `R_lijk` once lowered).
pub type Tensor4 = [[[[f64; 2]; 2]; 2]; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoeffs {
    pub frame: PointFrame,
    pub gamma: Coeffs3,
    pub xi_coeffs: Coeffs3,
    pub rho: [[f64; 2]; 2],
    pub denom: f64,
}

impl ConnectionCoeffs {
    /// Largest deviation of either decomposition from the actual `x_ij`.
    pub fn reassembly_error(&self) -> f64 {
        let f = &self.frame;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let lc = f.x1 * self.gamma[0][i][j] + f.x2 * self.gamma[1][i][j] + Vec3::E3 * f.h[i][j];
                let rel = f.x1 * self.xi_coeffs[0][i][j]
                    + f.x2 * self.xi_coeffs[1][i][j]
                    + f.xi * self.rho[i][j];
                worst = worst.max((lc - f.second(i, j)).max_abs()).max((rel - f.second(i, j)).max_abs());
            }
        }
        worst
    }
}

/// Coefficients at `(u, v)`. Fails at inadmissible and (near-)lightlike points.
pub fn coeffs_at(s: &SurfacePatch, u: f64, v: f64) -> Result<ConnectionCoeffs, ConnectionError> {
    let frame = frame_at(s, u, v)?;
    let denom = frame.denom();
    if denom.abs() <= LIGHTLIKE_TOL {
        return Err(ConnectionError::LightlikePoint { u, v, denom });
    }
    if denom.abs() < NEAR_LIGHTLIKE_TOL {
        return Err(ConnectionError::Unreliable { u, v, denom });
    }
    Ok(coeffs_from_frame(frame))
}

/// Decompose the frame's second derivatives. The caller is responsible for
/// the lightlike guard.
pub fn coeffs_from_frame(frame: PointFrame) -> ConnectionCoeffs {
    let f = &frame;
    // Top-view system [x̃1 x̃2] c = w, determinant X12.
    let det = f.x1.x * f.x2.y - f.x2.x * f.x1.y;
    let solve = |w: Vec3| {
        [(w.x * f.x2.y - f.x2.x * w.y) / det, (f.x1.x * w.y - w.x * f.x1.y) / det]
    };
    let denom = f.denom();
    let mut gamma = [[[0.0; 2]; 2]; 2];
    let mut xi_coeffs = [[[0.0; 2]; 2]; 2];
    let mut rho = [[0.0; 2]; 2];
    let corr = [
        f.g_inv[0][0] * f.x1.z + f.g_inv[0][1] * f.x2.z,
        f.g_inv[1][0] * f.x1.z + f.g_inv[1][1] * f.x2.z,
    ];
    for i in 0..2 {
        for j in 0..2 {
            let c = solve(f.second(i, j));
            rho[i][j] = f.h[i][j] / denom;
            for k in 0..2 {
                gamma[k][i][j] = c[k];
                xi_coeffs[k][i][j] = c[k] + corr[k] * rho[i][j];
            }
        }
    }
    ConnectionCoeffs { frame, gamma, xi_coeffs, rho, denom }
}

/// Default finite-difference step for a patch: `1e-4` times the domain diameter.
pub fn default_fd_step(s: &SurfacePatch) -> f64 {
    1e-4 * s.domain.diameter()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensorSample {
    pub coeffs: ConnectionCoeffs,
    /// `R^l_ijk` of the induced connection.
    pub r_lc: Tensor4,
    /// `𝓡^l_ijk` of the relative connection.
    pub r_rel: Tensor4,
    /// `𝓡_dabc = g_ed 𝓡^e_abc`.
    pub r_lowered: Tensor4,
    /// `∂_c ρ_ab` as `d_rho[c][a][b]`.
    pub d_rho: [[[f64; 2]; 2]; 2],
    /// `∂_c h_ab` as `d_h[c][a][b]`.
    pub d_h: [[[f64; 2]; 2]; 2],
    pub fd_step: f64,
}

fn assemble(c: &Coeffs3, dc: &[Coeffs3; 2]) -> Tensor4 {
    let mut r = [[[[0.0; 2]; 2]; 2]; 2];
    for l in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut x = dc[k][l][i][j] - dc[j][l][i][k];
                    for s in 0..2 {
                        x += c[s][i][j] * c[l][k][s] - c[s][i][k] * c[l][j][s];
                    }
                    r[l][i][j][k] = x;
                }
            }
        }
    }
    r
}

fn max_abs4(t: &Tensor4) -> f64 {
    t.iter().flatten().flatten().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

/// Derivatives of `(C, Ξ, g, h)` along one parameter direction.
type Derivatives = (Coeffs3, Coeffs3, [[f64; 2]; 2], [[f64; 2]; 2]);

/// Central difference `(f(+h) - f(-h)) / 2h` of every coefficient field along
/// parameter direction `dir`.
fn differentiate(
    s: &SurfacePatch,
    u: f64,
    v: f64,
    step: f64,
    dir: usize,
) -> Result<Derivatives, ConnectionError> {
    let (du, dv) = if dir == 0 { (step, 0.0) } else { (0.0, step) };
    let plus = coeffs_at(s, u + du, v + dv)?;
    let minus = coeffs_at(s, u - du, v - dv)?;
    let inv = 0.5 / step;
    let mut dg = [[[0.0; 2]; 2]; 2];
    let mut dx = [[[0.0; 2]; 2]; 2];
    let mut dr = [[0.0; 2]; 2];
    let mut dh = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                dg[k][i][j] = (plus.gamma[k][i][j] - minus.gamma[k][i][j]) * inv;
                dx[k][i][j] = (plus.xi_coeffs[k][i][j] - minus.xi_coeffs[k][i][j]) * inv;
            }
            dr[i][j] = (plus.rho[i][j] - minus.rho[i][j]) * inv;
            dh[i][j] = (plus.frame.h[i][j] - minus.frame.h[i][j]) * inv;
        }
    }
    Ok((dg, dx, dr, dh))
}

/// Both curvature tensors at `(u, v)` from a central-difference stencil of
/// half-width `fd_step` in each parameter.
pub fn curvature_tensors_at(
    s: &SurfacePatch,
    u: f64,
    v: f64,
    fd_step: f64,
) -> Result<CurvatureTensorSample, ConnectionError> {
    if !(fd_step > 0.0 && fd_step.is_finite()) {
        return Err(ConnectionError::BadStep(fd_step));
    }
    let d = &s.domain;
    if !(d.contains(u - fd_step, v - fd_step) && d.contains(u + fd_step, v + fd_step)) {
        return Err(ConnectionError::StencilOutsideDomain { u, v, step: fd_step });
    }
    let coeffs = coeffs_at(s, u, v)?;
    let (g0, x0, r0, h0) = differentiate(s, u, v, fd_step, 0)?;
    let (g1, x1, r1, h1) = differentiate(s, u, v, fd_step, 1)?;
    let r_lc = assemble(&coeffs.gamma, &[g0, g1]);
    let r_rel = assemble(&coeffs.xi_coeffs, &[x0, x1]);
    let g = &coeffs.frame.g;
    let mut r_lowered = [[[[0.0; 2]; 2]; 2]; 2];
    for dd in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    r_lowered[dd][a][b][c] = g[0][dd] * r_rel[0][a][b][c] + g[1][dd] * r_rel[1][a][b][c];
                }
            }
        }
    }
    Ok(CurvatureTensorSample {
        coeffs,
        r_lc,
        r_rel,
        r_lowered,
        d_rho: [r0, r1],
        d_h: [h0, h1],
        fd_step,
    })
}

impl CurvatureTensorSample {
    /// `max |R^l_ijk|` of the induced connection; zero for every surface.
    pub fn flatness_residual(&self) -> f64 {
        max_abs4(&self.r_lc)
    }

    /// Gaussian curvature recovered from the relative curvature tensor:
    /// `denom · 𝓡_2112 / det g`.
    pub fn k_from_tensor(&self) -> f64 {
        self.coeffs.denom * self.r_lowered[1][0][0][1] / self.coeffs.frame.det_g
    }

    /// The three closed forms of `𝓡^e_abc`:
    /// `g^{ed} (ρ_ab h_cd - ρ_ac h_bd)`, `g^{ed} (h_ab h_cd - h_ac h_bd) / denom`,
    /// `g^{ed} denom (ρ_ab ρ_cd - ρ_ac ρ_bd)`.
    pub fn gauss_forms(&self) -> [Tensor4; 3] {
        let c = &self.coeffs;
        let (h, rho, gi, den) = (&c.frame.h, &c.rho, &c.frame.g_inv, c.denom);
        let mut out = [[[[[0.0; 2]; 2]; 2]; 2]; 3];
        for e in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    for cc in 0..2 {
                        let mut f = [0.0; 3];
                        for d in 0..2 {
                            f[0] += gi[e][d] * (rho[a][b] * h[cc][d] - rho[a][cc] * h[b][d]);
                            f[1] += gi[e][d] * (h[a][b] * h[cc][d] - h[a][cc] * h[b][d]) / den;
                            f[2] += gi[e][d] * den * (rho[a][b] * rho[cc][d] - rho[a][cc] * rho[b][d]);
                        }
                        for n in 0..3 {
                            out[n][e][a][b][cc] = f[n];
                        }
                    }
                }
            }
        }
        out
    }

    /// Largest pairwise difference among the three Gauss right-hand sides.
    pub fn gauss_forms_spread(&self) -> f64 {
        let f = self.gauss_forms();
        let diff = |x: &Tensor4, y: &Tensor4| {
            let mut m: f64 = 0.0;
            for (a, b) in x.iter().flatten().flatten().flatten().zip(y.iter().flatten().flatten().flatten()) {
                m = m.max((a - b).abs());
            }
            m
        };
        diff(&f[0], &f[1]).max(diff(&f[1], &f[2])).max(diff(&f[0], &f[2]))
    }

    /// `max |𝓡^e_abc - closed form|` over the three Gauss forms.
    pub fn gauss_residual(&self) -> f64 {
        let mut m: f64 = 0.0;
        for form in self.gauss_forms() {
            for (a, b) in form.iter().flatten().flatten().flatten().zip(self.r_rel.iter().flatten().flatten().flatten()) {
                m = m.max((a - b).abs());
            }
        }
        m
    }

    /// Max over `(a, b, c)` of `|ρ_ab,c - ρ_ac,b + Ξ^d_ab ρ_cd - Ξ^d_ac ρ_bd|`.
    pub fn codazzi_relative(&self) -> f64 {
        codazzi(&self.coeffs.xi_coeffs, &self.coeffs.rho, &self.d_rho)
    }

    /// Max over `(i, j, k)` of `|h_ij,k - h_ik,j + Γ^l_ij h_lk - Γ^l_ik h_lj|`.
    pub fn codazzi_lc(&self) -> f64 {
        codazzi(&self.coeffs.gamma, &self.coeffs.frame.h, &self.d_h)
    }
}

fn codazzi(c: &Coeffs3, m: &[[f64; 2]; 2], dm: &[[[f64; 2]; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            for cc in 0..2 {
                let mut r = dm[cc][a][b] - dm[b][a][cc];
                for d in 0..2 {
                    r += c[d][a][b] * m[cc][d] - c[d][a][cc] * m[b][d];
                }
                worst = worst.max(r.abs());
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EgregiumCheck {
    pub k_from_tensor: f64,
    pub k_extrinsic: f64,
    /// `|difference| / |K_extrinsic|`, or the absolute difference when
    /// `|K_extrinsic| <= 1e-6`.
    pub rel_err: f64,
}

pub fn egregium_check(s: &SurfacePatch, u: f64, v: f64, fd_step: f64) -> Result<EgregiumCheck, ConnectionError> {
    let t = curvature_tensors_at(s, u, v, fd_step)?;
    Ok(egregium_from_sample(&t))
}

pub fn egregium_from_sample(t: &CurvatureTensorSample) -> EgregiumCheck {
    let k_from_tensor = t.k_from_tensor();
    let k_extrinsic = t.coeffs.frame.gaussian_curvature();
    let diff = (k_from_tensor - k_extrinsic).abs();
    let rel_err = if k_extrinsic.abs() > 1e-6 { diff / k_extrinsic.abs() } else { diff };
    EgregiumCheck { k_from_tensor, k_extrinsic, rel_err }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodazziResidual {
    pub relative: f64,
    pub levi_civita: f64,
}

impl CodazziResidual {
    pub fn max(&self) -> f64 {
        self.relative.max(self.levi_civita)
    }
}

pub fn codazzi_residual(s: &SurfacePatch, u: f64, v: f64, fd_step: f64) -> Result<CodazziResidual, ConnectionError> {
    let t = curvature_tensors_at(s, u, v, fd_step)?;
    Ok(CodazziResidual { relative: t.codazzi_relative(), levi_civita: t.codazzi_lc() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::isotropy::SpaceKind;
    use crate::linalg::solve3;
    use crate::surface::Domain;

    const S: SpaceKind = SpaceKind::SimplyIsotropic;
    const P: SpaceKind = SpaceKind::PseudoIsotropic;

    fn graph(kind: SpaceKind, f: &str) -> SurfacePatch {
        SurfacePatch::graph(kind, Expr::parse(f).unwrap(), Domain::square(2.0))
    }

    #[test]
    fn plane_has_zero_coefficients() {
        for kind in [S, P] {
            let c = coeffs_at(&graph(kind, "0.3*u - v + 2"), 0.2, 0.1).unwrap();
            assert_eq!(c.gamma, [[[0.0; 2]; 2]; 2]);
            assert_eq!(c.xi_coeffs, [[[0.0; 2]; 2]; 2]);
            assert_eq!(c.rho, [[0.0; 2]; 2]);
            let t = curvature_tensors_at(&graph(kind, "0.3*u - v + 2"), 0.2, 0.1, 1e-4).unwrap();
            assert_eq!(t.flatness_residual(), 0.0);
            assert_eq!(max_abs4(&t.r_rel), 0.0);
            assert_eq!(t.k_from_tensor(), 0.0);
        }
    }

    #[test]
    fn sphere_apex() {
        let s = graph(S, "(u^2+v^2)/4 - 1");
        let c = coeffs_at(&s, 0.0, 0.0).unwrap();
        assert_eq!(c.denom, 0.5);
        assert_eq!(c.gamma, [[[0.0; 2]; 2]; 2]);
        assert_eq!(c.xi_coeffs, [[[0.0; 2]; 2]; 2]);
        assert_eq!(c.rho, [[1.0, 0.0], [0.0, 1.0]]);
        let t = curvature_tensors_at(&s, 0.0, 0.0, 1e-4).unwrap();
        assert!((t.r_lowered[1][0][0][1] - 0.5).abs() < 1e-8);
        let e = egregium_from_sample(&t);
        assert!((e.k_from_tensor - 0.25).abs() < 1e-8 && e.k_extrinsic == 0.25);
    }

    #[test]
    fn correction_term_on_tilted_graph() {
        for kind in [S, P] {
            let s = graph(kind, "0.5*u + u^2/3 + u*v/5 - v^3/7");
            let (u, v) = (0.4, -0.6);
            let c = coeffs_at(&s, u, v).unwrap();
            let f = &c.frame;
            let mut differs = false;
            for k in 0..2 {
                let corr = f.g_inv[k][0] * f.x1.z + f.g_inv[k][1] * f.x2.z;
                for i in 0..2 {
                    for j in 0..2 {
                        let lhs = c.xi_coeffs[k][i][j] - c.gamma[k][i][j];
                        assert!((lhs - corr * c.rho[i][j]).abs() <= 1e-12);
                        assert!((c.rho[i][j] * c.denom - f.h[i][j]).abs() <= 1e-12);
                        differs |= lhs.abs() > 1e-3;
                    }
                }
            }
            assert!(differs);
        }
    }

    #[test]
    fn decomposition_matches_direct_three_by_three_solve() {
        let s = SurfacePatch::parametric(
            P,
            Expr::parse("u*cosh(v) + 0.1*v^2").unwrap(),
            Expr::parse("u*sinh(v)").unwrap(),
            Expr::parse("sin(u) + v^2/2").unwrap(),
            Domain::new(1.0, 2.0, -0.5, 0.5),
        );
        let c = coeffs_at(&s, 1.3, 0.2).unwrap();
        let f = &c.frame;
        assert!(c.reassembly_error() <= 1e-12);
        let basis = |n: Vec3| [[f.x1.x, f.x2.x, n.x], [f.x1.y, f.x2.y, n.y], [f.x1.z, f.x2.z, n.z]];
        for i in 0..2 {
            for j in 0..2 {
                let w = f.second(i, j).to_array();
                let lc = solve3(&basis(Vec3::E3), w).unwrap();
                let rel = solve3(&basis(f.xi), w).unwrap();
                for k in 0..2 {
                    assert!((lc[k] - c.gamma[k][i][j]).abs() <= 1e-10);
                    assert!((rel[k] - c.xi_coeffs[k][i][j]).abs() <= 1e-10);
                }
                assert!((lc[2] - f.h[i][j]).abs() <= 1e-10);
                assert!((rel[2] - c.rho[i][j]).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn gamma_is_the_metric_christoffel_symbol() {
        // Γ^k_ij = ½ g^{kl} (g_li,j + g_lj,i - g_ij,l), metric derivatives by FD.
        for kind in [S, P] {
            let s = SurfacePatch::parametric(
                kind,
                Expr::parse("u + v^2/3").unwrap(),
                Expr::parse("v + u*v/4").unwrap(),
                Expr::parse("exp(u)*v").unwrap(),
                Domain::square(1.0),
            );
            let (u, v, h) = (0.2, 0.3, 1e-5);
            let g_at = |u, v| frame_at(&s, u, v).unwrap().g;
            let dg = [
                {
                    let (p, m) = (g_at(u + h, v), g_at(u - h, v));
                    [[(p[0][0] - m[0][0]) / (2.0 * h), (p[0][1] - m[0][1]) / (2.0 * h)], [(p[1][0] - m[1][0]) / (2.0 * h), (p[1][1] - m[1][1]) / (2.0 * h)]]
                },
                {
                    let (p, m) = (g_at(u, v + h), g_at(u, v - h));
                    [[(p[0][0] - m[0][0]) / (2.0 * h), (p[0][1] - m[0][1]) / (2.0 * h)], [(p[1][0] - m[1][0]) / (2.0 * h), (p[1][1] - m[1][1]) / (2.0 * h)]]
                },
            ];
            let c = coeffs_at(&s, u, v).unwrap();
            let gi = c.frame.g_inv;
            for k in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        let mut want = 0.0;
                        for l in 0..2 {
                            want += 0.5 * gi[k][l] * (dg[j][l][i] + dg[i][l][j] - dg[l][i][j]);
                        }
                        assert!((c.gamma[k][i][j] - want).abs() < 1e-8, "{kind} Γ^{k}_{i}{j}");
                    }
                }
            }
        }
    }

    #[test]
    fn lightlike_guard() {
        // Helicoid with c = 1 is lightlike along u = 1.
        let s = SurfacePatch::parametric(
            P,
            Expr::parse("u*cosh(v)").unwrap(),
            Expr::parse("u*sinh(v)").unwrap(),
            Expr::v(),
            Domain::new(0.5, 2.0, -1.0, 1.0),
        );
        assert!(matches!(coeffs_at(&s, 1.0, 0.3), Err(ConnectionError::LightlikePoint { .. })));
        assert!(matches!(coeffs_at(&s, 1.0 + 1e-7, 0.3), Err(ConnectionError::Unreliable { .. })));
        assert!(coeffs_at(&s, 1.01, 0.3).is_ok());
    }

    #[test]
    fn stencil_must_fit() {
        let s = graph(S, "u*v");
        assert!(matches!(
            curvature_tensors_at(&s, 2.0, 0.0, 1e-4),
            Err(ConnectionError::StencilOutsideDomain { .. })
        ));
        assert!(matches!(curvature_tensors_at(&s, 0.0, 0.0, 0.0), Err(ConnectionError::BadStep(_))));
        assert!(curvature_tensors_at(&s, 2.0 - 1e-4, 0.0, 1e-4).is_ok());
    }

    #[test]
    fn antisymmetry_is_structural() {
        let s = graph(P, "u^3/4 + sin(v)*u");
        let t = curvature_tensors_at(&s, 0.3, 0.5, 1e-4).unwrap();
        for l in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        assert_eq!(t.r_rel[l][i][j][k], -t.r_rel[l][i][k][j]);
                        assert_eq!(t.r_lc[l][i][j][k], -t.r_lc[l][i][k][j]);
                    }
                }
            }
        }
    }

    #[test]
    fn structure_equations_on_polynomial_graphs() {
        for kind in [S, P] {
            let s = graph(kind, "0.3*u^3 - 0.2*u*v^2 + 0.5*v^2 + 0.1*u");
            for (u, v) in [(0.1, 0.2), (-0.4, 0.3), (0.6, -0.5)] {
                let t = curvature_tensors_at(&s, u, v, 1e-4).unwrap();
                assert!(t.flatness_residual() <= 1e-6, "{kind} flatness {}", t.flatness_residual());
                assert!(t.codazzi_relative() <= 1e-5);
                assert!(t.codazzi_lc() <= 1e-5);
                assert!(t.gauss_forms_spread() <= 1e-8);
                assert!(t.gauss_residual() <= 1e-6, "{kind} gauss {}", t.gauss_residual());
                let e = egregium_from_sample(&t);
                assert!(e.rel_err <= 1e-5, "{kind} egregium {e:?}");
            }
        }
    }

    #[test]
    fn flatness_error_is_second_order() {
        let s = SurfacePatch::parametric(
            P,
            Expr::parse("u*cosh(v)").unwrap(),
            Expr::parse("u*sinh(v)").unwrap(),
            Expr::v(),
            Domain::new(0.05, 0.5, -1.0, 1.0),
        );
        let coarse = curvature_tensors_at(&s, 0.2, 0.3, 1e-4).unwrap().flatness_residual();
        let fine = curvature_tensors_at(&s, 0.2, 0.3, 5e-5).unwrap().flatness_residual();
        let ratio = coarse / fine;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }
}
