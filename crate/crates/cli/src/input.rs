// SPDX-License-Identifier: MIT
//! Reading graphs, background knowledge, node lists, data and configs.

use std::fs;
use std::path::Path;

use mpdagkit::meek::BackgroundKnowledge;
use mpdagkit::regression::Dataset;
use mpdagkit::sem::SimConfig;
use mpdagkit::{Error, NodeSet, PdagGraph};
use serde::Deserialize;

use crate::Failure;

pub fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::input("io", format!("stdin: {e}")));
    }
    fs::read_to_string(path).map_err(|e| Failure::input("io", format!("{path}: {e}")))
}

pub fn read_graph(path: &str) -> Result<PdagGraph, Failure> {
    let text = read_text(path)?;
    mpdagkit::parse_graph(&text).map_err(|e| Failure::from(e).context(path))
}

/// A file path if one exists, otherwise inline statements separated by
/// newlines or `;`.
pub fn read_background(spec: &str, g: &PdagGraph) -> Result<BackgroundKnowledge, Failure> {
    let text = if Path::new(spec).is_file() { read_text(spec)? } else { spec.replace(';', "\n") };
    Ok(BackgroundKnowledge::parse(&text, g)?)
}

/// `A,B`, `{A,B}` and the empty string (or `{}`) for the empty set.
pub fn node_list(g: &PdagGraph, spec: &str) -> Result<Vec<usize>, Failure> {
    let inner = spec.trim().trim_start_matches('{').trim_end_matches('}');
    let mut out = Vec::new();
    for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v = g.require_node(name)?;
        if out.contains(&v) {
            return Err(Failure::input("parameter", format!("node '{name}' listed twice")));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn node_set(g: &PdagGraph, spec: &str) -> Result<NodeSet, Failure> {
    Ok(node_list(g, spec)?.into_iter().collect())
}

pub fn read_data(path: &str) -> Result<Dataset, Failure> {
    let text = read_text(path)?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let bad = |e: csv::Error| Failure::input("data", format!("{path}: {e}"));
    let names: Vec<String> = rdr.headers().map_err(bad)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(bad)?;
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Failure::input("data", format!("{path}: row {}: '{f}' is not a number", k + 1)))
            })
            .collect::<Result<Vec<f64>, Failure>>()?;
        rows.push(row);
    }
    Ok(Dataset::from_rows(names, &rows)?)
}

/// Simulation settings from a TOML file. Every key is optional and falls back
/// to the chosen preset.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimFile {
    pub preset: Option<String>,
    pub p: Option<Vec<usize>>,
    pub en: Option<Vec<f64>>,
    pub graphs: Option<usize>,
    pub n: Option<usize>,
    pub fractions: Option<Vec<f64>>,
    pub timing: Option<bool>,
}

impl SimFile {
    pub fn read(path: &str) -> Result<Self, Failure> {
        let text = read_text(path)?;
        toml::from_str(&text).map_err(|e| Failure::input("config", format!("{path}: {}", e.message())))
    }

    pub fn preset(name: &str, seed: u64) -> Result<SimConfig, Failure> {
        match name {
            "desk" => Ok(SimConfig::desk(seed)),
            "full" => Ok(SimConfig::full(seed)),
            other => Err(Failure::input("parameter", format!("unknown preset '{other}' (expected desk or full)"))),
        }
    }

    pub fn apply(self, cfg: &mut SimConfig) {
        if let Some(v) = self.p {
            cfg.ps = v;
        }
        if let Some(v) = self.en {
            cfg.ens = v;
        }
        if let Some(v) = self.graphs {
            cfg.graphs = v;
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.fractions {
            cfg.fractions = v;
        }
        if let Some(v) = self.timing {
            cfg.timing = v;
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::Syntax { .. } => "syntax",
            Error::DuplicateEdge { .. } => "duplicate_edge",
            Error::SelfLoop { .. } => "self_loop",
            Error::UnknownDirective { .. } => "unknown_directive",
            Error::UnknownNode(_) => "unknown_node",
            Error::InvalidPath(_) => "invalid_path",
            Error::Data(_) => "data",
            Error::Parameter(_) => "parameter",
            Error::Io(_) => "io",
            Error::DirectedCycle => return Failure::domain("directed_cycle", e.to_string()),
            Error::NotDag(_) => return Failure::domain("not_dag", e.to_string()),
            Error::Precondition(_) => return Failure::domain("precondition", e.to_string()),
            Error::SizeGuard { .. } => return Failure::domain("size_guard", e.to_string()),
            Error::UniverseCap { .. } => return Failure::domain("universe_cap", e.to_string()),
            Error::NoExtension => return Failure::domain("no_extension", e.to_string()),
            Error::SingularDesign { .. } => return Failure::domain("singular_design", e.to_string()),
        };
        Failure::input(kind, e.to_string())
    }
}
