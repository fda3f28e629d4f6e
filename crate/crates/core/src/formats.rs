//! On-disk schemas: JSON for capacities (interval, classical, Möbius,
//! bipolar, level-dependent, m-point) and CSV for alternatives.
//!
//! Capacity tables are written entry-by-entry with label lists rather than
//! indices, e.g. `{"A":["M"],"B":["M","Ph"],"v":0.4}`; loaders map labels to
//! criterion indices, require every pair exactly once, and run the full
//! validators before handing values back.

use crate::capacity::{Capacity, IntervalCapacity};
use crate::extensions::{
    BipolarIntervalCapacity, BipolarQuad, LevelDependentCapacity, MPointCapacity, MPointVector,
};
use crate::integrals::IntervalVector;
use crate::lattice::{q_count, CriterionSet, QPair};
use crate::mobius::MobiusRepresentation;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: malformed CSV: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn io_err(path: &Path, source: std::io::Error) -> FormatError {
    FormatError::Io { path: path.display().to_string(), source }
}

fn invalid(path: &Path, message: impl Into<String>) -> FormatError {
    FormatError::Invalid { path: path.display().to_string(), message: message.into() }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| FormatError::Json { path: path.display().to_string(), source: e })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| FormatError::Json { path: path.display().to_string(), source: e })?;
    std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

fn json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("schema structs always serialize") + "\n"
}

struct LabelMap {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelMap {
    fn new(path: &Path, n: usize, labels: &[String]) -> Result<Self, FormatError> {
        if labels.len() != n {
            return Err(invalid(path, format!("{} labels for n = {n}", labels.len())));
        }
        let mut index = HashMap::new();
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(invalid(path, format!("duplicate label {label:?}")));
            }
        }
        Ok(Self { labels: labels.to_vec(), index })
    }

    fn set(&self, path: &Path, names: &[String]) -> Result<CriterionSet, FormatError> {
        let mut indices = Vec::with_capacity(names.len());
        for name in names {
            let Some(&i) = self.index.get(name) else {
                return Err(invalid(path, format!("unknown criterion label {name:?}")));
            };
            indices.push(i);
        }
        CriterionSet::from_indices(self.labels.len(), &indices)
            .map_err(|e| invalid(path, e.to_string()))
    }

    fn names(&self, set: &CriterionSet) -> Vec<String> {
        set.iter().map(|i| self.labels[i].clone()).collect()
    }
}

// ---------------------------------------------------------------------------
// Interval capacities and Möbius tables over the pair lattice.

#[derive(Serialize, Deserialize)]
struct PairTableFile {
    n: usize,
    top: f64,
    labels: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    mobius: bool,
    entries: Vec<PairEntry>,
}

#[derive(Serialize, Deserialize)]
struct PairEntry {
    #[serde(rename = "A")]
    a: Vec<String>,
    #[serde(rename = "B")]
    b: Vec<String>,
    v: f64,
}

fn pair_table_values(path: &Path, file: &PairTableFile) -> Result<Vec<f64>, FormatError> {
    let map = LabelMap::new(path, file.n, &file.labels)?;
    let size = q_count(file.n);
    if file.entries.len() != size {
        return Err(invalid(
            path,
            format!("{} entries, expected exactly 3^n = {size}", file.entries.len()),
        ));
    }
    let mut values = vec![f64::NAN; size];
    for entry in &file.entries {
        let a = map.set(path, &entry.a)?;
        let b = map.set(path, &entry.b)?;
        let pair = QPair::new(a, b).map_err(|e| invalid(path, e.to_string()))?;
        let code = pair.index().code();
        if !values[code].is_nan() {
            return Err(invalid(path, format!("duplicate entry for {}", pair.render(&map.labels))));
        }
        values[code] = entry.v;
    }
    Ok(values)
}

fn pair_table_entries(labels: &[String], values: &[f64], n: usize) -> Vec<PairEntry> {
    let map = LabelMap { labels: labels.to_vec(), index: HashMap::new() };
    (0..values.len())
        .map(|code| {
            let pair = QPair::from_code(code, n).expect("dense code");
            PairEntry {
                a: map.names(&pair.sure()),
                b: map.names(&pair.possible()),
                v: values[code],
            }
        })
        .collect()
}

/// Loads a validated interval capacity and its criterion labels.
pub fn load_interval_capacity(
    path: &Path,
) -> Result<(IntervalCapacity, Vec<String>), FormatError> {
    let file: PairTableFile = read_json(path)?;
    if file.mobius {
        return Err(invalid(path, "file holds a Möbius table, not a capacity"));
    }
    let values = pair_table_values(path, &file)?;
    let capacity = IntervalCapacity::new(file.n, file.top, values)
        .map_err(|e| invalid(path, e.to_string()))?;
    Ok((capacity, file.labels))
}

pub fn save_interval_capacity(
    path: &Path,
    capacity: &IntervalCapacity,
    labels: &[String],
) -> Result<(), FormatError> {
    write_json(
        path,
        &PairTableFile {
            n: capacity.n(),
            top: capacity.top(),
            labels: labels.to_vec(),
            mobius: false,
            entries: pair_table_entries(labels, capacity.values(), capacity.n()),
        },
    )
}

/// The capacity-file JSON as a string, for stdout use.
pub fn interval_capacity_json(capacity: &IntervalCapacity, labels: &[String]) -> String {
    json_string(&PairTableFile {
        n: capacity.n(),
        top: capacity.top(),
        labels: labels.to_vec(),
        mobius: false,
        entries: pair_table_entries(labels, capacity.values(), capacity.n()),
    })
}

/// Loads a Möbius table (a capacity-schema file flagged `"mobius": true`).
pub fn load_mobius(path: &Path) -> Result<(MobiusRepresentation, Vec<String>), FormatError> {
    let file: PairTableFile = read_json(path)?;
    if !file.mobius {
        return Err(invalid(path, "file lacks the \"mobius\": true flag"));
    }
    let values = pair_table_values(path, &file)?;
    let table = MobiusRepresentation::new(file.n, file.top, values)
        .map_err(|e| invalid(path, e.to_string()))?;
    Ok((table, file.labels))
}

pub fn save_mobius(
    path: &Path,
    table: &MobiusRepresentation,
    labels: &[String],
) -> Result<(), FormatError> {
    write_json(
        path,
        &PairTableFile {
            n: table.n(),
            top: table.top(),
            labels: labels.to_vec(),
            mobius: true,
            entries: pair_table_entries(labels, table.values(), table.n()),
        },
    )
}

/// The Möbius-file JSON as a string, for stdout use.
pub fn mobius_json(table: &MobiusRepresentation, labels: &[String]) -> String {
    json_string(&PairTableFile {
        n: table.n(),
        top: table.top(),
        labels: labels.to_vec(),
        mobius: true,
        entries: pair_table_entries(labels, table.values(), table.n()),
    })
}

// ---------------------------------------------------------------------------
// Classical capacities over 2^N.

#[derive(Serialize, Deserialize)]
struct SetTableFile {
    n: usize,
    top: f64,
    labels: Vec<String>,
    entries: Vec<SetEntry>,
}

#[derive(Serialize, Deserialize)]
struct SetEntry {
    #[serde(rename = "A")]
    a: Vec<String>,
    v: f64,
}

pub fn load_capacity(path: &Path) -> Result<(Capacity, Vec<String>), FormatError> {
    let file: SetTableFile = read_json(path)?;
    let map = LabelMap::new(path, file.n, &file.labels)?;
    let size = 1usize << file.n;
    if file.entries.len() != size {
        return Err(invalid(
            path,
            format!("{} entries, expected exactly 2^n = {size}", file.entries.len()),
        ));
    }
    let mut values = vec![f64::NAN; size];
    for entry in &file.entries {
        let set = map.set(path, &entry.a)?;
        let mask = set.bits() as usize;
        if !values[mask].is_nan() {
            return Err(invalid(path, format!("duplicate entry for {{{}}}", entry.a.join(","))));
        }
        values[mask] = entry.v;
    }
    let capacity =
        Capacity::new(file.n, file.top, values).map_err(|e| invalid(path, e.to_string()))?;
    Ok((capacity, file.labels))
}

pub fn save_capacity(
    path: &Path,
    capacity: &Capacity,
    labels: &[String],
) -> Result<(), FormatError> {
    let map = LabelMap { labels: labels.to_vec(), index: HashMap::new() };
    let entries = (0..capacity.values().len())
        .map(|mask| {
            let set = CriterionSet::from_bits(capacity.n(), mask as u16).expect("dense mask");
            SetEntry { a: map.names(&set), v: capacity.values()[mask] }
        })
        .collect();
    write_json(
        path,
        &SetTableFile {
            n: capacity.n(),
            top: capacity.top(),
            labels: labels.to_vec(),
            entries,
        },
    )
}

// ---------------------------------------------------------------------------
// Alternatives: CSV with a lo/hi column pair per criterion.

/// Loads alternatives from `id,<label>_lo,<label>_hi,…` rows; column order
/// must follow the capacity's label order.
pub fn load_alternatives(
    path: &Path,
    labels: &[String],
) -> Result<Vec<(String, IntervalVector)>, FormatError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?;
    let headers = reader
        .headers()
        .map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?
        .clone();
    let mut expected = vec!["id".to_string()];
    for label in labels {
        expected.push(format!("{label}_lo"));
        expected.push(format!("{label}_hi"));
    }
    let got: Vec<String> = headers.iter().map(str::to_string).collect();
    if got != expected {
        return Err(invalid(
            path,
            format!("header is {:?}, expected {:?}", got.join(","), expected.join(",")),
        ));
    }
    let mut out = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?;
        if record.len() != expected.len() {
            return Err(invalid(path, format!("row {} has {} fields", line + 2, record.len())));
        }
        let id = record[0].to_string();
        let mut bounds = Vec::with_capacity(labels.len());
        for k in 0..labels.len() {
            let lo: f64 = record[1 + 2 * k]
                .trim()
                .parse()
                .map_err(|_| invalid(path, format!("row {}: bad number {:?}", line + 2, &record[1 + 2 * k])))?;
            let hi: f64 = record[2 + 2 * k]
                .trim()
                .parse()
                .map_err(|_| invalid(path, format!("row {}: bad number {:?}", line + 2, &record[2 + 2 * k])))?;
            bounds.push((lo, hi));
        }
        let vector = IntervalVector::from_bounds(&bounds)
            .map_err(|e| invalid(path, format!("row {}: {e}", line + 2)))?;
        out.push((id, vector));
    }
    if out.is_empty() {
        return Err(invalid(path, "no alternatives"));
    }
    Ok(out)
}

pub fn save_alternatives(
    path: &Path,
    alternatives: &[(String, IntervalVector)],
    labels: &[String],
) -> Result<(), FormatError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?;
    let mut header = vec!["id".to_string()];
    for label in labels {
        header.push(format!("{label}_lo"));
        header.push(format!("{label}_hi"));
    }
    writer
        .write_record(&header)
        .map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?;
    for (id, vector) in alternatives {
        let mut row = vec![id.clone()];
        for iv in vector.items() {
            row.push(iv.lo().to_string());
            row.push(iv.hi().to_string());
        }
        writer
            .write_record(&row)
            .map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?;
    }
    writer.flush().map_err(|e| io_err(path, e))
}

// ---------------------------------------------------------------------------
// Bipolar capacities: sparse entries with four label lists.

#[derive(Serialize, Deserialize)]
struct BipolarFile {
    n: usize,
    labels: Vec<String>,
    entries: Vec<BipolarEntry>,
}

#[derive(Serialize, Deserialize)]
struct BipolarEntry {
    #[serde(rename = "Apos")]
    a_pos: Vec<String>,
    #[serde(rename = "Bpos")]
    b_pos: Vec<String>,
    #[serde(rename = "Aneg")]
    a_neg: Vec<String>,
    #[serde(rename = "Bneg")]
    b_neg: Vec<String>,
    v: f64,
}

pub fn load_bipolar(path: &Path) -> Result<(BipolarIntervalCapacity, Vec<String>), FormatError> {
    let file: BipolarFile = read_json(path)?;
    let map = LabelMap::new(path, file.n, &file.labels)?;
    let mut entries = Vec::with_capacity(file.entries.len());
    for entry in &file.entries {
        let quad = BipolarQuad::new(
            map.set(path, &entry.a_pos)?,
            map.set(path, &entry.b_pos)?,
            map.set(path, &entry.a_neg)?,
            map.set(path, &entry.b_neg)?,
        )
        .map_err(|e| invalid(path, e.to_string()))?;
        entries.push((quad, entry.v));
    }
    let capacity = BipolarIntervalCapacity::from_entries(file.n, entries)
        .map_err(|e| invalid(path, e.to_string()))?;
    Ok((capacity, file.labels))
}

pub fn save_bipolar(
    path: &Path,
    n: usize,
    entries: &[(BipolarQuad, f64)],
    labels: &[String],
) -> Result<(), FormatError> {
    let map = LabelMap { labels: labels.to_vec(), index: HashMap::new() };
    let entries = entries
        .iter()
        .map(|(quad, v)| BipolarEntry {
            a_pos: map.names(&quad.sure_pos()),
            b_pos: map.names(&quad.possible_pos()),
            a_neg: map.names(&quad.possible_neg()),
            b_neg: map.names(&quad.sure_neg()),
            v: *v,
        })
        .collect();
    write_json(path, &BipolarFile { n, labels: labels.to_vec(), entries })
}

// ---------------------------------------------------------------------------
// Level-dependent capacities: a list of pieces with upper breakpoints.

#[derive(Serialize, Deserialize)]
struct LevelFile {
    n: usize,
    top: f64,
    labels: Vec<String>,
    t_lower: f64,
    pieces: Vec<LevelPiece>,
}

#[derive(Serialize, Deserialize)]
struct LevelPiece {
    t_upper: f64,
    entries: Vec<PairEntry>,
}

pub fn load_level(path: &Path) -> Result<(LevelDependentCapacity, Vec<String>), FormatError> {
    let file: LevelFile = read_json(path)?;
    let mut breakpoints = vec![file.t_lower];
    let mut tables = Vec::with_capacity(file.pieces.len());
    for piece in &file.pieces {
        breakpoints.push(piece.t_upper);
        let table = PairTableFile {
            n: file.n,
            top: file.top,
            labels: file.labels.clone(),
            mobius: false,
            entries: piece
                .entries
                .iter()
                .map(|e| PairEntry { a: e.a.clone(), b: e.b.clone(), v: e.v })
                .collect(),
        };
        let values = pair_table_values(path, &table)?;
        tables.push(
            IntervalCapacity::new(file.n, file.top, values)
                .map_err(|e| invalid(path, e.to_string()))?,
        );
    }
    let capacity = LevelDependentCapacity::new(breakpoints, tables)
        .map_err(|e| invalid(path, e.to_string()))?;
    Ok((capacity, file.labels))
}

pub fn save_level(
    path: &Path,
    capacity: &LevelDependentCapacity,
    labels: &[String],
) -> Result<(), FormatError> {
    let pieces = capacity
        .tables()
        .iter()
        .zip(capacity.breakpoints().iter().skip(1))
        .map(|(table, &t_upper)| LevelPiece {
            t_upper,
            entries: pair_table_entries(labels, table.values(), table.n()),
        })
        .collect();
    write_json(
        path,
        &LevelFile {
            n: capacity.n(),
            top: capacity.top(),
            labels: labels.to_vec(),
            t_lower: capacity.breakpoints()[0],
            pieces,
        },
    )
}

// ---------------------------------------------------------------------------
// m-point capacities and alternatives.

#[derive(Serialize, Deserialize)]
struct MPointFile {
    n: usize,
    m: usize,
    top: f64,
    labels: Vec<String>,
    entries: Vec<MPointEntry>,
}

#[derive(Serialize, Deserialize)]
struct MPointEntry {
    sets: Vec<Vec<String>>,
    v: f64,
}

pub fn load_mpoint_capacity(path: &Path) -> Result<(MPointCapacity, Vec<String>), FormatError> {
    let file: MPointFile = read_json(path)?;
    let map = LabelMap::new(path, file.n, &file.labels)?;
    let base = file.m + 1;
    let size = base.pow(file.n as u32);
    if file.entries.len() != size {
        return Err(invalid(
            path,
            format!("{} entries, expected exactly (m+1)^n = {size}", file.entries.len()),
        ));
    }
    let mut values = vec![f64::NAN; size];
    for entry in &file.entries {
        if entry.sets.len() != file.m {
            return Err(invalid(path, format!("chain with {} sets, expected m = {}", entry.sets.len(), file.m)));
        }
        let chain: Vec<CriterionSet> = entry
            .sets
            .iter()
            .map(|names| map.set(path, names))
            .collect::<Result<_, _>>()?;
        for w in chain.windows(2) {
            if !w[0].is_subset(&w[1]) {
                return Err(invalid(path, "chain sets are not nested"));
            }
        }
        let mut code = 0usize;
        let mut weight = 1usize;
        for i in 0..file.n {
            let level = chain.iter().filter(|set| set.contains(i)).count();
            code += level * weight;
            weight *= base;
        }
        if !values[code].is_nan() {
            return Err(invalid(path, "duplicate chain entry"));
        }
        values[code] = entry.v;
    }
    let capacity = MPointCapacity::new(file.n, file.m, file.top, values)
        .map_err(|e| invalid(path, e.to_string()))?;
    Ok((capacity, file.labels))
}

pub fn save_mpoint_capacity(
    path: &Path,
    capacity: &MPointCapacity,
    labels: &[String],
) -> Result<(), FormatError> {
    let map = LabelMap { labels: labels.to_vec(), index: HashMap::new() };
    let n = capacity.n();
    let m = capacity.points();
    let base = m + 1;
    let entries = (0..capacity.values().len())
        .map(|code| {
            // Chain set j (1-based) holds criterion i when its level is at
            // least m - j + 1.
            let sets = (1..=m)
                .map(|j| {
                    let mut indices = Vec::new();
                    let mut rest = code;
                    for i in 0..n {
                        if rest % base > m - j {
                            indices.push(i);
                        }
                        rest /= base;
                    }
                    map.names(&CriterionSet::from_indices(n, &indices).expect("valid indices"))
                })
                .collect();
            MPointEntry { sets, v: capacity.values()[code] }
        })
        .collect();
    write_json(
        path,
        &MPointFile { n, m, top: capacity.top(), labels: labels.to_vec(), entries },
    )
}

/// Loads m-point alternatives from `id,<label>_1,…,<label>_m,…` rows.
pub fn load_mpoint_alternatives(
    path: &Path,
    labels: &[String],
    m: usize,
) -> Result<Vec<(String, MPointVector)>, FormatError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?;
    let headers = reader
        .headers()
        .map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?
        .clone();
    let mut expected = vec!["id".to_string()];
    for label in labels {
        for j in 1..=m {
            expected.push(format!("{label}_{j}"));
        }
    }
    let got: Vec<String> = headers.iter().map(str::to_string).collect();
    if got != expected {
        return Err(invalid(
            path,
            format!("header is {:?}, expected {:?}", got.join(","), expected.join(",")),
        ));
    }
    let mut out = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?;
        let id = record[0].to_string();
        let mut rows = Vec::with_capacity(labels.len());
        for k in 0..labels.len() {
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                let field = &record[1 + k * m + j];
                row.push(field.trim().parse::<f64>().map_err(|_| {
                    invalid(path, format!("row {}: bad number {:?}", line + 2, field))
                })?);
            }
            rows.push(row);
        }
        let vector = MPointVector::new(m, rows)
            .map_err(|e| invalid(path, format!("row {}: {e}", line + 2)))?;
        out.push((id, vector));
    }
    if out.is_empty() {
        return Err(invalid(path, "no alternatives"));
    }
    Ok(out)
}

pub fn save_mpoint_alternatives(
    path: &Path,
    alternatives: &[(String, MPointVector)],
    labels: &[String],
) -> Result<(), FormatError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?;
    let mut header = vec!["id".to_string()];
    for label in labels {
        for j in 1..=alternatives[0].1.points() {
            header.push(format!("{label}_{j}"));
        }
    }
    writer
        .write_record(&header)
        .map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?;
    for (id, vector) in alternatives {
        let mut row = vec![id.clone()];
        for criterion_row in vector.rows() {
            row.extend(criterion_row.iter().map(f64::to_string));
        }
        writer
            .write_record(&row)
            .map_err(|e| FormatError::Csv { path: path.display().to_string(), source: e })?;
    }
    writer.flush().map_err(|e| io_err(path, e))
}
