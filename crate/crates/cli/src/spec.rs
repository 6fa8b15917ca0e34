//! JSON surface specifications.
//!
//! ```json
//! {"space": "i3", "surface": {"kind": "graph", "f": "u*v"}, "domain": [-1, 1, -1, 1]}
//! {"space": "ip3", "surface": {"kind": "parametric", "x": "u", "y": "v", "z": "u^2"}, "domain": [0, 1, 0, 1]}
//! {"space": "ip3", "surface": {"kind": "builtin", "name": "helicoid", "params": {"c": 1}}}
//! ```
//!
//! `domain` may be omitted for builtins, which then use their default domain.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use isogeo::catalog::{self, ParamValue, Params};
use isogeo::{Domain, Expr, SpaceKind, SurfacePatch};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    space: String,
    surface: SurfaceJson,
    #[serde(default)]
    domain: Option<[f64; 4]>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum SurfaceJson {
    Graph {
        f: String,
    },
    Parametric {
        x: String,
        y: String,
        z: String,
    },
    Builtin {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, serde_json::Value>,
    },
}

fn expr(field: &str, src: &str) -> Result<Expr> {
    Expr::parse(src).with_context(|| format!("surface.{field}: cannot parse `{src}`"))
}

fn domain(d: [f64; 4]) -> Result<Domain> {
    let d = Domain::new(d[0], d[1], d[2], d[3]);
    if !d.is_valid() {
        bail!("domain must be finite with u0 < u1 and v0 < v1");
    }
    Ok(d)
}

/// Parse a specification document.
pub fn parse(text: &str) -> Result<SurfacePatch> {
    let spec: SpecFile = serde_json::from_str(text).context("invalid surface specification")?;
    let kind = SpaceKind::from_tag(&spec.space)
        .ok_or_else(|| anyhow!("space must be \"i3\" or \"ip3\", got {:?}", spec.space))?;
    let required = || spec.domain.ok_or_else(|| anyhow!("missing domain [u0, u1, v0, v1]"));
    match spec.surface {
        SurfaceJson::Graph { f } => Ok(SurfacePatch::graph(kind, expr("f", &f)?, domain(required()?)?)),
        SurfaceJson::Parametric { x, y, z } => Ok(SurfacePatch::parametric(
            kind,
            expr("x", &x)?,
            expr("y", &y)?,
            expr("z", &z)?,
            domain(required()?)?,
        )),
        SurfaceJson::Builtin { name, params } => {
            let mut converted = Params::new();
            for (k, v) in params {
                let value = match v {
                    serde_json::Value::Number(n) => {
                        ParamValue::Number(n.as_f64().ok_or_else(|| anyhow!("parameter `{k}` is not a finite number"))?)
                    }
                    serde_json::Value::String(s) => ParamValue::Text(s),
                    other => bail!("parameter `{k}` must be a number or an expression string, got {other}"),
                };
                converted.insert(k, value);
            }
            let patch = catalog::make(kind, &name, &converted)?;
            match spec.domain {
                Some(d) => Ok(patch.with_domain(domain(d)?)),
                None => Ok(patch),
            }
        }
    }
}
