//! File formats: pair files in, reports out. Complex entries are `[re, im]`
//! pairs so fixtures stay human-diffable, and serde_json's shortest
//! round-trip float encoding keeps write-read-write byte-stable.

use std::path::Path;

use serde::{Deserialize, Serialize};

use effectkit::linalg::{C64, ComplexMatrix, HermitianMatrix};
use effectkit::{Effect, ToleranceConfig};

use crate::exit::{CliError, PARSE_ERROR};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairFile {
    pub dim: usize,
    pub a: MatrixJson,
    pub b: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TolerancesJson>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TolerancesJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_herm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_eig: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_psd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_eq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_strict: Option<f64>,
}

impl TolerancesJson {
    pub fn to_config(&self) -> Result<ToleranceConfig, CliError> {
        let d = ToleranceConfig::default();
        let cfg = ToleranceConfig {
            tau_herm: self.tau_herm.unwrap_or(d.tau_herm),
            tau_eig: self.tau_eig.unwrap_or(d.tau_eig),
            tau_psd: self.tau_psd.unwrap_or(d.tau_psd),
            tau_eq: self.tau_eq.unwrap_or(d.tau_eq),
            tau_strict: self.tau_strict.unwrap_or(d.tau_strict),
        };
        cfg.validate()
            .map_err(|e| CliError::new(PARSE_ERROR, format!("invalid tolerances: {e}")))?;
        Ok(cfg)
    }
}

/// A coexistence witness supplied next to a pair file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFile {
    pub dim: usize,
    pub x: MatrixJson,
    pub y: MatrixJson,
    pub z: MatrixJson,
}

pub fn matrix_to_json(m: &HermitianMatrix) -> MatrixJson {
    let n = m.dim();
    (0..n)
        .map(|i| (0..n).map(|j| [m.entry(i, j).re, m.entry(i, j).im]).collect())
        .collect()
}

pub fn matrix_from_json(raw: &MatrixJson, dim: usize) -> Result<ComplexMatrix, CliError> {
    if raw.len() != dim || raw.iter().any(|row| row.len() != dim) {
        return Err(CliError::new(
            PARSE_ERROR,
            format!("matrix is not {dim}x{dim} as the dim field claims"),
        ));
    }
    let rows: Vec<Vec<C64>> = raw
        .iter()
        .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| CliError::new(PARSE_ERROR, e.to_string()))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(PARSE_ERROR, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::new(PARSE_ERROR, format!("{}: {e}", path.display())))
}

pub struct LoadedPair {
    pub a: Effect,
    pub b: Effect,
    pub tol: ToleranceConfig,
}

pub fn load_pair(path: &Path) -> Result<LoadedPair, CliError> {
    let pf: PairFile = read_json(path)?;
    let tol = pf.tolerances.clone().unwrap_or_default().to_config()?;
    let a = effect_from_json(&pf.a, pf.dim, &tol, "a")?;
    let b = effect_from_json(&pf.b, pf.dim, &tol, "b")?;
    Ok(LoadedPair { a, b, tol })
}

pub fn effect_from_json(
    raw: &MatrixJson,
    dim: usize,
    tol: &ToleranceConfig,
    name: &str,
) -> Result<Effect, CliError> {
    let m = matrix_from_json(raw, dim)?;
    let h = HermitianMatrix::new(m, tol.tau_herm)
        .map_err(|e| CliError::invalid_effect(format!("matrix {name}: {e}")))?;
    Effect::validate(h, tol).map_err(|e| CliError::invalid_effect(format!("matrix {name}: {e}")))
}

/// Serializes a report with a trailing newline; used for stdout and files so
/// both are byte-identical.
pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let text = to_pretty_json(value);
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, text)
            .map_err(|e| CliError::new(PARSE_ERROR, format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
