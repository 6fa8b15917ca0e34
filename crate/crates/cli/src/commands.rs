use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use anyhow::{anyhow, Context};
use isogeo::geodesic::{GeodesicError, Termination};
use isogeo::surface::{classify, frame_at, SurfaceError, Tolerances};
use isogeo::verify::{self, Suite, VerifyOptions};
use isogeo::{integrate, ConnectionKind, SurfacePatch};
use serde::Serialize;

use crate::spec;

pub const EXIT_SPEC: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_LIGHTLIKE: u8 = 4;
pub const EXIT_CHECK: u8 = 5;

pub struct Failure {
    pub code: u8,
    pub error: Option<anyhow::Error>,
}

impl Failure {
    fn new(code: u8, error: anyhow::Error) -> Self {
        Self { code, error: Some(error) }
    }
}

type Outcome = Result<(), Failure>;

fn load(source: &str) -> Result<SurfacePatch, Failure> {
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else if source == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .context("cannot read specification from stdin")
            .map_err(|e| Failure::new(EXIT_IO, e))?;
        buf
    } else {
        fs::read_to_string(source)
            .with_context(|| format!("cannot read specification `{source}`"))
            .map_err(|e| Failure::new(EXIT_IO, e))?
    };
    spec::parse(&text).map_err(|e| Failure::new(EXIT_SPEC, e))
}

fn emit(out: Option<&Path>, content: &str) -> Outcome {
    let result = match out {
        Some(path) => fs::write(path, content).with_context(|| format!("cannot write `{}`", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(content.as_bytes()).and_then(|_| stdout.flush()).context("cannot write to stdout")
        }
    };
    result.map_err(|e| Failure::new(EXIT_IO, e))
}

/// Shortest representation that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn curvature(source: &str, (nu, nv): (usize, usize), out: Option<&Path>) -> Outcome {
    let s = load(source)?;
    let tol = Tolerances::default();
    let mut csv = String::from("u,v,x,y,z,K,H,disc,class,xi1,xi2,xi3\n");
    for (u, v) in s.domain.grid(nu, nv) {
        match frame_at(&s, u, v) {
            Ok(f) => {
                let r = classify(&f, &tol);
                let fields = [
                    num(u),
                    num(v),
                    num(f.position.x),
                    num(f.position.y),
                    num(f.position.z),
                    num(r.k),
                    num(r.h),
                    num(r.discriminant),
                    r.class.label().to_string(),
                    num(f.xi.x),
                    num(f.xi.y),
                    num(f.xi.z),
                ];
                csv.push_str(&fields.join(","));
                csv.push('\n');
            }
            Err(e) => {
                let class = match e {
                    SurfaceError::NotAdmissible { .. } => "inadmissible",
                    _ => "undefined",
                };
                let _ = writeln!(csv, "{},{},,,,,,,{class},,,", num(u), num(v));
            }
        }
    }
    emit(out, &csv)
}

pub fn geodesic(
    source: &str,
    kind: ConnectionKind,
    (u0, v0): (f64, f64),
    (du0, dv0): (f64, f64),
    t_end: f64,
    step: f64,
    out: Option<&Path>,
) -> Outcome {
    let s = load(source)?;
    let trace = integrate(&s, kind, u0, v0, du0, dv0, t_end, step).map_err(|e| {
        let code = if e == GeodesicError::LightlikePointHit { EXIT_LIGHTLIKE } else { EXIT_SPEC };
        Failure::new(code, anyhow!(e))
    })?;
    let mut csv = String::from("t,u,v,du,dv,x,y,z,parallel_residual\n");
    for p in &trace.samples {
        let fields = [p.t, p.u, p.v, p.du, p.dv, p.position.x, p.position.y, p.position.z, p.parallel_residual];
        csv.push_str(&fields.map(num).join(","));
        csv.push('\n');
    }
    emit(out, &csv)?;
    match trace.termination {
        Termination::Completed => {}
        Termination::LeftDomain { t } => eprintln!("warning: trajectory left the domain after t = {t:?}"),
        Termination::LightlikePoint { t } => {
            eprintln!("warning: trajectory reached the lightlike guard band after t = {t:?}")
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    surface: &'a str,
    points: usize,
    skipped: usize,
    max_residual: f64,
    tolerance: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    target: String,
    suites: Vec<&'static str>,
    seed: u64,
    samples: usize,
    fd_step: Option<f64>,
    checks: Vec<CheckJson<'a>>,
    pass: bool,
}

pub fn verify(source: Option<&str>, suite: &str, opts: &VerifyOptions, out: Option<&Path>) -> Outcome {
    let suites = Suite::parse_list(suite).ok_or_else(|| Failure::new(EXIT_SPEC, anyhow!("unknown suite `{suite}`")))?;
    if let Some(h) = opts.fd_step {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Failure::new(EXIT_SPEC, anyhow!("finite-difference step must be positive, got {h}")));
        }
    }
    let (target, targets) = match source {
        Some(src) => {
            let s = load(src)?;
            (s.label(), vec![s])
        }
        None => ("all-catalog".to_string(), verify::catalog_targets()),
    };
    let report = verify::run(&targets, &suites, opts);
    let json = ReportJson {
        target,
        suites: suites.iter().map(|s| s.name()).collect(),
        seed: report.seed,
        samples: report.samples,
        fd_step: opts.fd_step,
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                name: &c.name,
                surface: &c.surface,
                points: c.points,
                skipped: c.skipped,
                max_residual: c.max_residual,
                tolerance: c.tolerance,
                pass: c.pass,
                note: c.note.as_deref(),
            })
            .collect(),
        pass: report.pass(),
    };
    let mut text = serde_json::to_string_pretty(&json).map_err(|e| Failure::new(EXIT_IO, e.into()))?;
    text.push('\n');
    emit(out, &text)?;
    if report.pass() {
        Ok(())
    } else {
        Err(Failure { code: EXIT_CHECK, error: Some(anyhow!("one or more checks failed")) })
    }
}

pub fn sample(source: &str, (nu, nv): (usize, usize), obj: bool, out: Option<&Path>) -> Outcome {
    let s = load(source)?;
    let grid = s.domain.grid(nu, nv);
    let mut points = Vec::with_capacity(grid.len());
    for &(u, v) in &grid {
        let j = s
            .evaluate(u, v)
            .with_context(|| format!("cannot sample the surface at ({u}, {v})"))
            .map_err(|e| Failure::new(EXIT_SPEC, e))?;
        points.push((u, v, j.position()));
    }
    let mut text = String::new();
    if obj {
        let _ = writeln!(text, "# isogeo {} grid {nu}x{nv}", s.kind);
        for (_, _, p) in &points {
            let _ = writeln!(text, "v {} {} {}", num(p.x), num(p.y), num(p.z));
        }
        // Vertices are u-major: index i * nv + j, 1-based in OBJ.
        for i in 0..nu.saturating_sub(1) {
            for j in 0..nv.saturating_sub(1) {
                let a = i * nv + j + 1;
                let b = (i + 1) * nv + j + 1;
                let _ = writeln!(text, "f {a} {b} {}", b + 1);
                let _ = writeln!(text, "f {a} {} {}", b + 1, a + 1);
            }
        }
    } else {
        text.push_str("u,v,x,y,z\n");
        for (u, v, p) in &points {
            let _ = writeln!(text, "{},{},{},{},{}", num(*u), num(*v), num(p.x), num(p.y), num(p.z));
        }
    }
    emit(out, &text)
}
