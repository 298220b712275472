//! Line-delimited JSON datasets and coreset files.
//!
//! A dataset line looks like
//!
//! ```text
//! {"id":"a","kind":"curve","points":[[0.0,0.0],[1.0,2.0]],"weight":2.0}
//! ```
//!
//! `weight` is optional but must then be present on every record; weights
//! are normalized on load. A coreset file starts with one header line
//! followed by one line per sampled entry, with the sampled object inlined.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::clustering::ClusteringInstance;
use crate::coreset::{CoresetEntry, CoresetMeta, WeightedCoreset};
use crate::error::{Error, ObjectKind, Result};
use crate::geometry::{GeomObject, Point};
use crate::metrics::MetricKind;

pub const CORESET_FORMAT: &str = "curveset-coreset";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RecordKind {
    Curve,
    Pointset,
}

impl From<RecordKind> for ObjectKind {
    fn from(k: RecordKind) -> Self {
        match k {
            RecordKind::Curve => ObjectKind::Curve,
            RecordKind::Pointset => ObjectKind::PointSet,
        }
    }
}

impl From<ObjectKind> for RecordKind {
    fn from(k: ObjectKind) -> Self {
        match k {
            ObjectKind::Curve => RecordKind::Curve,
            ObjectKind::PointSet => RecordKind::Pointset,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    id: String,
    kind: RecordKind,
    points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

/// A loaded dataset: object ids plus the instance built from the records.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub ids: Vec<String>,
    /// Instance with k = 1 and l = m; use [`ClusteringInstance::with_params`].
    pub instance: ClusteringInstance,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads a dataset from any line source.
pub fn read_dataset<R: BufRead>(reader: R, metric: MetricKind) -> Result<Dataset> {
    let mut ids = Vec::new();
    let mut objects: Vec<GeomObject> = Vec::new();
    let mut weights: Vec<Option<f64>> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| parse_err(lineno, e.to_string()))?;
        let kind = ObjectKind::from(rec.kind);
        if kind != metric.object_kind() {
            return Err(parse_err(lineno, format!("{kind} record under metric {metric}")));
        }
        if let Some(first) = objects.first() {
            if first.kind() != kind {
                return Err(parse_err(lineno, "mixed record kinds"));
            }
        }
        let obj = GeomObject::from_kind(kind, rec.points).map_err(|e| parse_err(lineno, e.to_string()))?;
        if let Some(first) = objects.first() {
            if first.dim() != obj.dim() {
                return Err(parse_err(
                    lineno,
                    format!("dimension {} differs from {}", obj.dim(), first.dim()),
                ));
            }
        }
        if let Some(w) = rec.weight {
            if !(w.is_finite() && w > 0.0) {
                return Err(parse_err(lineno, format!("nonpositive weight {w}")));
            }
        }
        if weights.first().is_some_and(|w0: &Option<f64>| w0.is_some() != rec.weight.is_some()) {
            return Err(parse_err(lineno, "weights must be given on all records or none"));
        }
        ids.push(rec.id);
        objects.push(obj);
        weights.push(rec.weight);
    }
    if objects.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    let weights: Option<Vec<f64>> = weights.into_iter().collect();
    let weights = weights.map(|w| {
        let total: f64 = w.iter().sum();
        // already-normalized weights are kept bit-for-bit
        if (total - 1.0).abs() <= 1e-12 {
            w
        } else {
            w.into_iter().map(|x| x / total).collect()
        }
    });
    let m = objects.iter().map(GeomObject::len).max().unwrap_or(1);
    let instance = ClusteringInstance::new_normalized(objects, weights, metric, 1, m)?;
    Ok(Dataset { ids, instance })
}

pub fn load_dataset(path: impl AsRef<Path>, metric: MetricKind) -> Result<Dataset> {
    read_dataset(BufReader::new(File::open(path)?), metric)
}

/// Writes objects with their normalized weights. Uniform weights are omitted.
pub fn write_dataset<W: Write>(mut w: W, ids: &[String], inst: &ClusteringInstance) -> Result<()> {
    let mu = inst.weights();
    let uniform = mu.iter().all(|&x| x == mu[0]);
    for (i, o) in inst.objects().iter().enumerate() {
        let rec = Record {
            id: ids[i].clone(),
            kind: o.kind().into(),
            points: o.points().to_vec(),
            weight: (!uniform).then_some(mu[i]),
        };
        serde_json::to_writer(&mut w, &rec).map_err(json_io)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_dataset(path: impl AsRef<Path>, ids: &[String], inst: &ClusteringInstance) -> Result<()> {
    write_dataset(BufWriter::new(File::create(path)?), ids, inst)
}

fn json_io(e: serde_json::Error) -> Error {
    Error::Io(e.into())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoresetHeader {
    format: String,
    tool_version: String,
    metric: MetricKind,
    k: usize,
    l: usize,
    eps: f64,
    a: usize,
    #[serde(rename = "S")]
    total_sensitivity: f64,
    seed: u64,
    size_constant: f64,
    delta_exponent: f64,
    alpha: f64,
    beta: f64,
    opt_prime: f64,
    num_centers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    created_unix: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoresetLine {
    index: usize,
    id: String,
    kind: RecordKind,
    points: Vec<Point>,
    weight: f64,
    sensitivity: f64,
}

/// Writes a coreset. `ids` maps instance indices to object ids; with
/// `timestamp` the header records the creation time.
pub fn write_coreset<W: Write>(mut w: W, cs: &WeightedCoreset, ids: &[String], timestamp: bool) -> Result<()> {
    let m = &cs.meta;
    let header = CoresetHeader {
        format: CORESET_FORMAT.into(),
        tool_version: TOOL_VERSION.into(),
        metric: m.metric,
        k: m.k,
        l: m.l,
        eps: m.eps,
        a: m.a,
        total_sensitivity: m.total_sensitivity,
        seed: m.seed,
        size_constant: m.size_constant,
        delta_exponent: m.delta_exponent,
        alpha: m.alpha,
        beta: m.beta,
        opt_prime: m.opt_prime,
        num_centers: m.num_centers,
        created_unix: timestamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        }),
    };
    serde_json::to_writer(&mut w, &header).map_err(json_io)?;
    w.write_all(b"\n")?;
    for e in &cs.entries {
        let line = CoresetLine {
            index: e.index,
            id: ids.get(e.index).cloned().unwrap_or_else(|| e.index.to_string()),
            kind: e.object.kind().into(),
            points: e.object.points().to_vec(),
            weight: e.weight,
            sensitivity: e.sensitivity,
        };
        serde_json::to_writer(&mut w, &line).map_err(json_io)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_coreset(path: impl AsRef<Path>, cs: &WeightedCoreset, ids: &[String], timestamp: bool) -> Result<()> {
    write_coreset(BufWriter::new(File::create(path)?), cs, ids, timestamp)
}

/// Reads a coreset and the ids of its entries.
pub fn read_coreset<R: BufRead>(reader: R) -> Result<(WeightedCoreset, Vec<String>)> {
    let mut lines = reader.lines().enumerate().filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty()));
    let (_, first) = lines.next().ok_or(Error::Empty("coreset file"))?;
    let header: CoresetHeader = serde_json::from_str(&first?).map_err(|e| parse_err(1, e.to_string()))?;
    if header.format != CORESET_FORMAT {
        return Err(parse_err(1, format!("unexpected format '{}'", header.format)));
    }
    let mut entries = Vec::with_capacity(header.a);
    let mut ids = Vec::with_capacity(header.a);
    for (i, line) in lines {
        let lineno = i + 1;
        let rec: CoresetLine = serde_json::from_str(&line?).map_err(|e| parse_err(lineno, e.to_string()))?;
        if !(rec.weight.is_finite() && rec.weight > 0.0) {
            return Err(parse_err(lineno, format!("nonpositive weight {}", rec.weight)));
        }
        if ObjectKind::from(rec.kind) != header.metric.object_kind() {
            return Err(parse_err(lineno, format!("{:?} entry in a {} coreset", rec.kind, header.metric)));
        }
        let object =
            GeomObject::from_kind(rec.kind.into(), rec.points).map_err(|e| parse_err(lineno, e.to_string()))?;
        ids.push(rec.id);
        entries.push(CoresetEntry {
            index: rec.index,
            object,
            weight: rec.weight,
            sensitivity: rec.sensitivity,
        });
    }
    if entries.len() != header.a {
        return Err(Error::InvalidInstance(format!(
            "header declares {} entries, file has {}",
            header.a,
            entries.len()
        )));
    }
    let meta = CoresetMeta {
        metric: header.metric,
        k: header.k,
        l: header.l,
        eps: header.eps,
        a: header.a,
        total_sensitivity: header.total_sensitivity,
        seed: header.seed,
        size_constant: header.size_constant,
        delta_exponent: header.delta_exponent,
        alpha: header.alpha,
        beta: header.beta,
        opt_prime: header.opt_prime,
        num_centers: header.num_centers,
    };
    Ok((WeightedCoreset { entries, meta }, ids))
}

pub fn load_coreset(path: impl AsRef<Path>) -> Result<(WeightedCoreset, Vec<String>)> {
    read_coreset(BufReader::new(File::open(path)?))
}
