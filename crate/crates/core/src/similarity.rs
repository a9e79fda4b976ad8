//! Embedding-based similarity between two emotion vocabularies.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use crate::error::{Error, Result};

/// Term vectors loaded from a whitespace-separated text file.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    vectors: HashMap<String, Vec<f64>>,
    dimension: usize,
}

impl EmbeddingTable {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<&[f64]> {
        self.vectors.get(&term.to_lowercase()).map(Vec::as_slice)
    }
}

fn is_header(fields: &[&str]) -> bool {
    fields.len() == 2 && fields.iter().all(|f| f.parse::<usize>().is_ok())
}

/// Reads `term v1 .. vd` lines. A leading `count dimension` line is recognized
/// and skipped. Terms are lowercased.
pub fn load_embeddings<R: BufRead>(source: R) -> Result<EmbeddingTable> {
    let mut vectors = HashMap::new();
    let mut dimension = None;
    let mut first = true;
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::MalformedLine {
            line: line_no,
            reason: e.to_string(),
        })?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if std::mem::take(&mut first) && is_header(&fields) {
            dimension = Some(fields[1].parse().expect("checked by is_header"));
            continue;
        }
        let term = fields[0].to_lowercase();
        let values = fields[1..]
            .iter()
            .map(|f| {
                f.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::MalformedLine {
                    line: line_no,
                    reason: format!("unparseable component `{f}`"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let expected = *dimension.get_or_insert(values.len());
        if values.len() != expected || expected == 0 {
            return Err(Error::DimensionMismatch {
                line: line_no,
                expected,
                found: values.len(),
            });
        }
        if norm(&values) == 0.0 {
            return Err(Error::ZeroVector(Some(format!("line {line_no}, term `{term}`"))));
        }
        if vectors.insert(term.clone(), values).is_some() {
            return Err(Error::DuplicateTerm { line: line_no, term });
        }
    }
    Ok(EmbeddingTable {
        vectors,
        dimension: dimension.unwrap_or(0),
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            line: 0,
            expected: u.len(),
            found: v.len(),
        });
    }
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroVector(None));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SetSimilarity {
    pub score: f64,
    pub coverage: f64,
}

fn dedup(terms: &[String]) -> Vec<String> {
    let mut seen = HashSet::new();
    terms
        .iter()
        .map(|t| t.trim().to_lowercase())
        .filter(|t| seen.insert(t.clone()))
        .collect()
}

fn directional_mean(from: &[&[f64]], to: &[&[f64]]) -> Result<f64> {
    let mut total = 0.0;
    for u in from {
        let mut best = f64::NEG_INFINITY;
        for v in to {
            best = best.max(cosine(u, v)?);
        }
        total += best;
    }
    Ok(total / from.len() as f64)
}

/// Symmetric mean best-match cosine between two term sets.
///
/// Both lists are treated as sets. Out-of-vocabulary terms are dropped from
/// the score and only lower `coverage`, the in-vocabulary fraction of the
/// pooled terms.
pub fn set_similarity(generated: &[String], reference: &[String], table: &EmbeddingTable) -> Result<SetSimilarity> {
    if generated.is_empty() || reference.is_empty() {
        return Err(Error::EmptyInput);
    }
    let generated = dedup(generated);
    let reference = dedup(reference);
    let lookup = |terms: &[String]| -> Vec<&[f64]> { terms.iter().filter_map(|t| table.get(t)).collect() };
    let gen_vecs = lookup(&generated);
    let ref_vecs = lookup(&reference);

    let pooled = generated.len() + reference.len();
    let coverage = (gen_vecs.len() + ref_vecs.len()) as f64 / pooled as f64;
    if gen_vecs.is_empty() || ref_vecs.is_empty() {
        return Err(Error::NoOverlapWithVocabulary);
    }
    let forward = directional_mean(&gen_vecs, &ref_vecs)?;
    let backward = directional_mean(&ref_vecs, &gen_vecs)?;
    Ok(SetSimilarity {
        score: (forward + backward) / 2.0,
        coverage,
    })
}
