use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use ancilla_core::gallery::make_example;
use ancilla_core::numerics::{vec_norm, CMatrix};
use ancilla_core::schmidt::UnitaryFile;
use ancilla_core::{BipartiteUnitary, Error};
use num_complex::Complex64;
use serde::Deserialize;

use crate::CliError;

pub struct LoadedUnitary {
    pub source: String,
    pub unitary: BipartiteUnitary,
}

/// Splits `gallery:name?k=v&k=v` into its name and parameters.
pub fn parse_gallery_uri(uri: &str) -> Result<(String, BTreeMap<String, String>), CliError> {
    let rest = uri
        .strip_prefix("gallery:")
        .ok_or_else(|| CliError::validation(format!("not a gallery reference: {uri}")))?;
    let (name, query) = rest.split_once('?').unwrap_or((rest, ""));
    let mut params = BTreeMap::new();
    for pair in query.split('&').filter(|s| !s.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::validation(format!("expected key=value, got {pair:?}")))?;
        if params.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::validation(format!("parameter {k} given twice")));
        }
    }
    Ok((name.to_string(), params))
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(Path::new(path))
        .map_err(|e| CliError::validation(format!("cannot read {path}: {e}")))
}

fn parse_json<'a, T: Deserialize<'a>>(path: &str, text: &'a str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::validation(format!("{path}: {e}")))
}

/// Output of the `gallery` verb, which nests the unitary under `unitary`.
#[derive(Deserialize)]
struct UnitaryDocument {
    unitary: UnitaryFile,
}

pub fn load_unitary(input: &str) -> Result<LoadedUnitary, CliError> {
    if input.starts_with("gallery:") {
        let (name, params) = parse_gallery_uri(input)?;
        let entry = make_example(&name, &params).map_err(CliError::from_core)?;
        return Ok(LoadedUnitary {
            source: input.to_string(),
            unitary: entry.unitary,
        });
    }
    let text = read(input)?;
    let value: serde_json::Value = parse_json(input, &text)?;
    let raw = if value.get("unitary").is_some() {
        let doc: UnitaryDocument = serde_json::from_value(value)
            .map_err(|e| CliError::validation(format!("{input}: {e}")))?;
        doc.unitary
    } else {
        // reparse the text so diagnostics carry line and column
        parse_json::<UnitaryFile>(input, &text)?
    };
    let unitary = BipartiteUnitary::new(raw.u, raw.d_a, raw.d_b).map_err(CliError::from_core)?;
    Ok(LoadedUnitary {
        source: input.to_string(),
        unitary,
    })
}

pub fn load_matrix(path: &str) -> Result<CMatrix, CliError> {
    let text = read(path)?;
    parse_json(path, &text)
}

/// A state vector stored as `[[re, im], ...]`.
pub fn load_state(path: &str) -> Result<Vec<Complex64>, CliError> {
    let text = read(path)?;
    let v: Vec<Complex64> = parse_json(path, &text)?;
    let norm = vec_norm(&v);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(CliError::from_core(Error::NotNormalized { norm }));
    }
    Ok(v)
}

/// Parses repeated `--param k=v` flags.
pub fn parse_params(flags: &[String]) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for f in flags {
        let (k, v) = f.split_once('=').ok_or_else(|| {
            CliError::validation(format!("expected --param key=value, got {f:?}"))
        })?;
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(CliError::validation(format!("parameter {k} given twice")));
        }
    }
    Ok(out)
}
