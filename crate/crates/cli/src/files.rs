//! System, spec, series and witness files.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use semicrossed::algebra::Series;
use semicrossed::dynamics::{CoSet, DynamicalSystem, Point, TemplateParams, TemplateRegistry};
use semicrossed::ideals::{IdealSpec, DEFAULT_K_BUDGET};
use semicrossed::units::Witness;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum SystemFile {
    Finite {
        carrier: Vec<Point>,
        map: Vec<(Point, Point)>,
    },
    Template {
        name: String,
        #[serde(default)]
        params: TemplateParams,
        hit_budget: Option<u64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase", deny_unknown_fields)]
enum SpecFile {
    Stable {
        sets: Vec<String>,
        stable_from: Option<usize>,
    },
    Sw {
        s: String,
        w: Vec<Point>,
        k_budget: Option<usize>,
    },
}

fn read(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {what} file {}: {e}", path.display())))
}

fn parse_toml<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| CliError::Input(format!("{}: {}", path.display(), e.message())))
}

pub fn load_system(path: &Path) -> Result<Arc<DynamicalSystem>, CliError> {
    let file: SystemFile = parse_toml(&read(path, "system")?, path)?;
    let sys = match file {
        SystemFile::Finite { carrier, map } => DynamicalSystem::finite(&carrier, &map)?,
        SystemFile::Template { name, params, hit_budget } => {
            let sys = DynamicalSystem::template(TemplateRegistry::builtin().build(&name, &params)?);
            match hit_budget {
                Some(b) => sys.with_hit_budget(b),
                None => sys,
            }
        }
    };
    Ok(Arc::new(sys))
}

fn coset(text: &str) -> Result<CoSet, CliError> {
    text.parse().map_err(|e| CliError::Input(format!("{e}")))
}

pub fn load_spec(path: &Path, sys: Arc<DynamicalSystem>) -> Result<IdealSpec, CliError> {
    let file: SpecFile = parse_toml(&read(path, "spec")?, path)?;
    Ok(match file {
        SpecFile::Stable { sets, stable_from } => {
            let sets = sets.iter().map(|s| coset(s)).collect::<Result<Vec<_>, _>>()?;
            match stable_from {
                Some(k) => IdealSpec::stable_from(sys, sets, k)?,
                None => IdealSpec::stable(sys, sets)?,
            }
        }
        SpecFile::Sw { s, w, k_budget } => IdealSpec::sw_unchecked(sys, coset(&s)?, w, k_budget.unwrap_or(DEFAULT_K_BUDGET)),
    })
}

pub fn load_series(path: &Path) -> Result<Series, CliError> {
    read(path, "series")?
        .trim()
        .parse()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A witness record, or any record carrying one under `witness` or
/// `evidence.witness` (the output of `witness` and `decide`).
pub fn load_witness(path: &Path) -> Result<Witness, CliError> {
    let bad = |e: String| CliError::Input(format!("{}: {e}", path.display()));
    let value: serde_json::Value = serde_json::from_str(&read(path, "witness")?).map_err(|e| bad(e.to_string()))?;
    let inner = value
        .get("witness")
        .or_else(|| value.get("evidence").and_then(|e| e.get("witness")))
        .unwrap_or(&value);
    if inner.is_null() {
        return Err(bad("record carries no witness".into()));
    }
    Witness::deserialize(inner).map_err(|e| bad(e.to_string()))
}
