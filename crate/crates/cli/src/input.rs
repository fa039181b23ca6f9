//! Input document parsing: one JSON file carries a full experiment
//! (dimension, exact-rational direction vectors, optional weights).

use anyhow::{anyhow, bail, Context, Result};
use conevol_core::concentration::WeightVector;
use conevol_core::linalg::QVector;
use conevol_core::matroid::VectorConfiguration;
use conevol_core::scalar::{parse_rational, Rational, Scalar};
use serde::Deserialize;
use std::path::Path;

/// On-disk experiment document.
///
/// ```json
/// {
///   "n": 4,
///   "vectors": [["1","0","0","0"], ...],
///   "weights": ["1/6", "0.125", ...],
///   "normalize_total_to_n": false
/// }
/// ```
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub n: usize,
    pub vectors: Vec<Vec<String>>,
    #[serde(default)]
    pub weights: Option<Vec<String>>,
    #[serde(default)]
    pub normalize_total_to_n: bool,
}

/// Validated experiment input.
pub struct InputDocument {
    pub config: VectorConfiguration,
    pub weights: Option<WeightVector<Rational>>,
}

pub fn parse_input(path: &Path) -> Result<InputDocument> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read input file {}", path.display()))?;
    let raw: RawDocument = serde_json::from_str(&text)
        .with_context(|| format!("malformed input document {}", path.display()))?;

    let mut vectors = Vec::with_capacity(raw.vectors.len());
    for (i, row) in raw.vectors.iter().enumerate() {
        let mut entries = Vec::with_capacity(row.len());
        for (j, s) in row.iter().enumerate() {
            let value = parse_rational(s)
                .map_err(|e| anyhow!("vector {} entry {}: {e}", i + 1, j + 1))?;
            entries.push(value);
        }
        vectors.push(QVector::new(entries));
    }
    let config = VectorConfiguration::new(raw.n, vectors).map_err(|e| anyhow!("{e}"))?;

    let weights = match raw.weights {
        None => None,
        Some(strings) => {
            if strings.len() != config.len() {
                bail!(
                    "weight count {} does not match vector count {}",
                    strings.len(),
                    config.len()
                );
            }
            let mut values = Vec::with_capacity(strings.len());
            for (i, s) in strings.iter().enumerate() {
                let value =
                    parse_rational(s).map_err(|e| anyhow!("weight {}: {e}", i + 1))?;
                values.push(value);
            }
            let w = WeightVector::new(values).map_err(|e| anyhow!("{e}"))?;
            let w = if raw.normalize_total_to_n {
                if w.total().is_zero() {
                    bail!("cannot normalize all-zero weights");
                }
                w.normalized_to(Rational::from_integer((config.n() as i64).into()))
                    .map_err(|e| anyhow!("{e}"))?
            } else {
                w
            };
            Some(w)
        }
    };
    Ok(InputDocument { config, weights })
}
