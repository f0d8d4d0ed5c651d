//! Labeled data: CSV ingestion, validation, and the per-pair training subsets
//! that feed the k(k-1)/2 binary classifiers.
//!
//! Classes are the contiguous integers `1..=k`. A pair subset `(f, s)` always
//! has `f < s`, and its binary labels are `+1` for class `f` and `-1` for `s`.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub features: Vec<f64>,
    pub label: usize,
}

impl LabeledExample {
    pub fn new(features: Vec<f64>, label: usize) -> Self {
        Self { features, label }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    examples: Vec<LabeledExample>,
    k: usize,
    d: usize,
}

impl Dataset {
    /// Validates and wraps `examples`. `k` is the largest label observed and
    /// every class in `1..=k` must be present.
    pub fn new(examples: Vec<LabeledExample>) -> Result<Self> {
        let first = examples.first().ok_or(Error::NoExamples)?;
        let d = first.features.len();
        if d == 0 {
            return Err(Error::InvalidArgument("feature dimension must be > 0".into()));
        }
        let mut seen = BTreeSet::new();
        for (i, ex) in examples.iter().enumerate() {
            if ex.features.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: ex.features.len(),
                });
            }
            if let Some(bad) = ex.features.iter().find(|v| !v.is_finite()) {
                return Err(Error::Row {
                    row: i + 1,
                    message: format!("non-finite feature {bad}"),
                });
            }
            if ex.label == 0 {
                return Err(Error::InvalidLabel("0".into()));
            }
            seen.insert(ex.label);
        }
        let k = *seen.last().expect("nonempty");
        if let Some(missing) = (1..=k).find(|c| !seen.contains(c)) {
            return Err(Error::ClassUnrepresented(missing));
        }
        Ok(Self { examples, k, d })
    }

    /// Like [`Dataset::new`] but with an explicit class count, so a test
    /// split may omit classes that the training set has.
    pub fn with_classes(examples: Vec<LabeledExample>, k: usize) -> Result<Self> {
        let first = examples.first().ok_or(Error::NoExamples)?;
        let d = first.features.len();
        for ex in &examples {
            if ex.features.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: ex.features.len(),
                });
            }
            if ex.label == 0 || ex.label > k {
                return Err(Error::InvalidLabel(ex.label.to_string()));
            }
        }
        Ok(Self { examples, k, d })
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn labels(&self) -> Vec<usize> {
        self.examples.iter().map(|e| e.label).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSubset {
    pub f: usize,
    pub s: usize,
    pub examples: Vec<LabeledExample>,
    pub binary_labels: Vec<f64>,
}

impl PairSubset {
    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn features(&self) -> Vec<&[f64]> {
        self.examples.iter().map(|e| e.features.as_slice()).collect()
    }
}

/// Raw CSV contents before label interpretation.
struct RawTable {
    features: Vec<Vec<f64>>,
    labels: Vec<String>,
}

fn read_table(path: &Path) -> Result<RawTable> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    parse_table(&text)
}

fn parse_table(text: &str) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.len() < 2 {
        return Err(Error::InvalidArgument(
            "header must name at least one feature column and a label column".into(),
        ));
    }
    let label_col = header
        .iter()
        .position(|h| h == "label")
        .unwrap_or(header.len() - 1);

    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::Row {
                row,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let mut x = Vec::with_capacity(header.len() - 1);
        for (c, field) in record.iter().enumerate() {
            if c == label_col {
                continue;
            }
            let v: f64 = field.parse().map_err(|_| Error::Row {
                row,
                message: format!("non-numeric feature {field:?} in column {}", &header[c]),
            })?;
            if !v.is_finite() {
                return Err(Error::Row {
                    row,
                    message: format!("non-finite feature {field:?}"),
                });
            }
            x.push(v);
        }
        features.push(x);
        labels.push(record[label_col].to_string());
    }
    if features.is_empty() {
        return Err(Error::NoExamples);
    }
    Ok(RawTable { features, labels })
}

fn parse_label(raw: &str, row: usize) -> Result<usize> {
    match raw.parse::<i64>() {
        Ok(v) if v >= 1 => Ok(v as usize),
        Ok(_) => Err(Error::InvalidLabel(raw.to_string())),
        Err(_) => Err(Error::Row {
            row,
            message: format!("non-integer label {raw:?}"),
        }),
    }
}

/// Loads a CSV with header `f0,...,f{d-1},label`. Labels must be integers in
/// `1..=k` with every class represented.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let table = read_table(path.as_ref())?;
    let examples = table
        .features
        .into_iter()
        .zip(&table.labels)
        .enumerate()
        .map(|(i, (x, l))| Ok(LabeledExample::new(x, parse_label(l, i + 1)?)))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(examples)
}

/// Loads a CSV whose label column holds arbitrary strings. Distinct labels are
/// sorted (numerically when all are integers) and mapped to `1..=k`; the
/// returned vector holds the original label for class `i` at position `i - 1`.
pub fn load_csv_mapped(path: impl AsRef<Path>) -> Result<(Dataset, Vec<String>)> {
    let table = read_table(path.as_ref())?;
    let mut names: Vec<String> = table
        .labels
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // integer labels keep numeric order, so "10" follows "9"
    if names.iter().all(|n| n.parse::<i64>().is_ok()) {
        names.sort_by_key(|n| n.parse::<i64>().expect("checked above"));
    }
    let examples = table
        .features
        .into_iter()
        .zip(&table.labels)
        .map(|(x, l)| {
            let class = names.iter().position(|n| n == l).expect("label collected above") + 1;
            LabeledExample::new(x, class)
        })
        .collect();
    Ok((Dataset::new(examples)?, names))
}

/// Reads feature rows for prediction. A `label` column, if present, is
/// returned separately and not validated against any class count.
pub fn load_features(path: impl AsRef<Path>) -> Result<(Vec<Vec<f64>>, Option<Vec<String>>)> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    let has_label = text
        .lines()
        .next()
        .map(|h| h.split(',').any(|c| c.trim() == "label"))
        .unwrap_or(false);
    if has_label {
        let t = parse_table(&text)?;
        return Ok((t.features, Some(t.labels)));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let width = reader.headers()?.len();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != width {
            return Err(Error::Row {
                row: i + 1,
                message: format!("expected {width} fields, found {}", record.len()),
            });
        }
        let x = record
            .iter()
            .map(|f| {
                f.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Row {
                    row: i + 1,
                    message: format!("non-numeric feature {f:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(x);
    }
    Ok((rows, None))
}

/// One subset per unordered class pair, in lexicographic order
/// (1,2), (1,3), ..., (k-1,k).
pub fn pair_subsets(ds: &Dataset) -> Vec<PairSubset> {
    let k = ds.k();
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    for f in 1..=k {
        for s in (f + 1)..=k {
            let examples: Vec<LabeledExample> = ds
                .examples()
                .iter()
                .filter(|e| e.label == f || e.label == s)
                .cloned()
                .collect();
            let binary_labels = examples
                .iter()
                .map(|e| if e.label == f { 1.0 } else { -1.0 })
                .collect();
            out.push(PairSubset {
                f,
                s,
                examples,
                binary_labels,
            });
        }
    }
    out
}

/// Index of pair `(f, s)` in the lexicographic enumeration.
pub fn pair_index(k: usize, f: usize, s: usize) -> usize {
    debug_assert!(1 <= f && f < s && s <= k);
    // pairs preceding row f: sum_{g<f} (k - g)
    (f - 1) * k - (f - 1) * f / 2 + (s - f - 1)
}

pub fn pair_count(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

pub fn unit_normalize(ds: &Dataset) -> Result<Dataset> {
    let examples = ds
        .examples()
        .iter()
        .map(|e| {
            let norm = e.features.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::ZeroVector);
            }
            Ok(LabeledExample::new(
                e.features.iter().map(|v| v / norm).collect(),
                e.label,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        examples,
        k: ds.k,
        d: ds.d,
    })
}

/// Isotropic Gaussian clusters, `per_class` points around each center.
/// Class `i + 1` is drawn around `centers[i]`.
pub fn gaussian_blobs(centers: &[Vec<f64>], per_class: usize, sigma: f64, seed: u64) -> Result<Dataset> {
    if centers.is_empty() || per_class == 0 {
        return Err(Error::NoExamples);
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut examples = Vec::with_capacity(centers.len() * per_class);
    for _ in 0..per_class {
        for (c, center) in centers.iter().enumerate() {
            let x = center.iter().map(|m| m + normal.sample(&mut rng)).collect();
            examples.push(LabeledExample::new(x, c + 1));
        }
    }
    Dataset::new(examples)
}

/// Writes a dataset in the `f0,...,f{d-1},label` layout.
pub fn to_csv(ds: &Dataset) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..ds.d()).map(|i| format!("f{i}")).collect();
    out.push_str(&header.join(","));
    out.push_str(",label\n");
    for e in ds.examples() {
        for v in &e.features {
            out.push_str(&format!("{v:?},"));
        }
        out.push_str(&format!("{}\n", e.label));
    }
    out
}
