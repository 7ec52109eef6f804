//! Manifest file format: a JSON description of a chart (dimension, signs,
//! expression-valued `g` and `J`, sample box, seed) that round-trips the
//! built-in examples exactly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use aeconn::catalog::ExampleEntry;
use aeconn::expr::parse_expression;
use aeconn::manifold::{Manifold, Sign};
use aeconn::MatrixField;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub dim2n: usize,
    pub alpha: i64,
    pub epsilon: i64,
    /// Row-major expression strings for the metric components.
    pub g: Vec<Vec<String>>,
    /// Row-major expression strings for the structure tensor components.
    #[serde(rename = "J")]
    pub j: Vec<Vec<String>>,
    /// Per-axis `[lo, hi]` sampling intervals.
    pub sample_box: Vec<[f64; 2]>,
    pub seed: u64,
}

impl Manifest {
    pub fn from_path(path: &Path) -> Result<Manifest, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::usage(format!(
                "malformed manifest {} at line {} column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })
    }

    pub fn write_to(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::usage(format!("serialization failed: {e}")))?;
        fs::write(path, text + "\n")
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
    }

    /// Serialize a catalog entry; expression trees print through the
    /// canonical printer, so reading the file back yields identical trees.
    pub fn from_entry(entry: &ExampleEntry) -> Manifest {
        let dim = entry.manifold.dim();
        let field_strings = |f: &MatrixField| -> Vec<Vec<String>> {
            (0..dim)
                .map(|i| (0..dim).map(|j| f.entry(i, j).to_string()).collect())
                .collect()
        };
        Manifest {
            dim2n: dim,
            alpha: entry.manifold.alpha().value() as i64,
            epsilon: entry.manifold.epsilon().value() as i64,
            g: field_strings(entry.manifold.metric_field()),
            j: field_strings(entry.manifold.structure_field()),
            sample_box: entry.sample_box.iter().map(|&(lo, hi)| [lo, hi]).collect(),
            seed: entry.seed,
        }
    }

    pub fn to_manifold(&self) -> Result<Manifold, CliError> {
        let dim = self.dim2n;
        if dim < 2 || dim % 2 != 0 {
            return Err(CliError::usage(format!(
                "dim2n must be even and >= 2, got {dim}"
            )));
        }
        let alpha = Sign::from_int(self.alpha)
            .ok_or_else(|| CliError::usage(format!("alpha must be 1 or -1, got {}", self.alpha)))?;
        let epsilon = Sign::from_int(self.epsilon).ok_or_else(|| {
            CliError::usage(format!("epsilon must be 1 or -1, got {}", self.epsilon))
        })?;
        if self.sample_box.len() != dim {
            return Err(CliError::usage(format!(
                "sample_box has {} axes, expected {dim}",
                self.sample_box.len()
            )));
        }
        let g = parse_field("g", &self.g, dim)?;
        let j = parse_field("J", &self.j, dim)?;
        Manifold::new(dim, alpha, epsilon, g, j)
            .map_err(|e| CliError::usage(format!("invalid manifest: {e}")))
    }
}

fn parse_field(name: &str, rows: &[Vec<String>], dim: usize) -> Result<MatrixField, CliError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(CliError::usage(format!(
            "field {name} must be a {dim}x{dim} array of expression strings"
        )));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, text) in row.iter().enumerate() {
            let e = parse_expression(text, dim).map_err(|err| {
                CliError::usage(format!("field {name}[{}][{}]: {err}", i + 1, j + 1))
            })?;
            entries.push(e);
        }
    }
    Ok(MatrixField::from_entries(dim, entries))
}
