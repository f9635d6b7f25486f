//! Kernel files: JSON with a dense or sparse `omega`, or CSV for dense
//! matrices. A square JSON kernel marked `"network": true` loads as a
//! [`Network`]; everything else loads as a [`Hypernetwork`].

use hypergh::matrix::Matrix;
use hypergh::model::{from_network, Hypernetwork, Network};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub enum IoError {
    Read { path: String, detail: String },
    Parse { path: String, detail: String },
    Validation { path: String, detail: String },
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::Read { path, detail } => write!(f, "{path}: {detail}"),
            IoError::Parse { path, detail } => write!(f, "{path}: parse error: {detail}"),
            IoError::Validation { path, detail } => write!(f, "{path}: invalid kernel: {detail}"),
        }
    }
}

impl std::error::Error for IoError {}

/// On-disk shape of a kernel. `omega` is either a dense row-major array of
/// arrays or a sparse list of `[node id, edge id, value]` triples with
/// implicit zeros.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelFile {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub network: bool,
    pub nodes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<String>>,
    pub omega: OmegaRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaRepr {
    Dense(Vec<Vec<f64>>),
    Sparse(Vec<(String, String, f64)>),
}

#[derive(Debug, Clone)]
pub enum Loaded {
    Hyper(Hypernetwork),
    Net(Network),
}

impl Loaded {
    pub fn is_network(&self) -> bool {
        matches!(self, Loaded::Net(_))
    }

    /// The hypernetwork itself, or the diagonal embedding of a network.
    pub fn embedded(&self) -> Hypernetwork {
        match self {
            Loaded::Hyper(h) => h.clone(),
            Loaded::Net(n) => from_network(n),
        }
    }
}

pub fn load(path: &Path) -> Result<Loaded, IoError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Read { path: name.clone(), detail: e.to_string() })?;
    let file = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        parse_csv(&text, &name)?
    } else {
        serde_json::from_str::<KernelFile>(&text)
            .map_err(|e| IoError::Parse { path: name.clone(), detail: e.to_string() })?
    };
    realize(file, &name)
}

/// A loadable JSON document (dense form) for a computed kernel; reports embed
/// these so downstream runs can consume command outputs directly.
pub fn file_value(l: &Loaded) -> serde_json::Value {
    let file = match l {
        Loaded::Hyper(h) => KernelFile {
            network: false,
            nodes: h.nodes().to_vec(),
            edges: Some(h.edges().to_vec()),
            omega: dense(h.omega()),
        },
        Loaded::Net(n) => KernelFile {
            network: true,
            nodes: n.nodes().to_vec(),
            edges: None,
            omega: dense(n.omega()),
        },
    };
    serde_json::to_value(&file).expect("kernel files serialize")
}

pub fn save(l: &Loaded, path: &Path) -> Result<(), IoError> {
    let text = format!("{:#}\n", file_value(l));
    std::fs::write(path, text)
        .map_err(|e| IoError::Read { path: path.display().to_string(), detail: e.to_string() })
}

fn dense(m: &Matrix) -> OmegaRepr {
    OmegaRepr::Dense((0..m.rows()).map(|i| m.row(i).to_vec()).collect())
}

fn realize(file: KernelFile, path: &str) -> Result<Loaded, IoError> {
    let bad = |detail: String| IoError::Validation { path: path.to_string(), detail };
    if file.network {
        if let Some(edges) = &file.edges {
            if *edges != file.nodes {
                return Err(bad("a network file must not carry separate edge ids".into()));
            }
        }
        let omega = resolve(&file.omega, &file.nodes, &file.nodes, path)?;
        let net = Network::new(file.nodes, omega).map_err(|e| bad(e.to_string()))?;
        Ok(Loaded::Net(net))
    } else {
        let edges =
            file.edges.ok_or_else(|| bad("a hypernetwork file needs an `edges` list".into()))?;
        let omega = resolve(&file.omega, &file.nodes, &edges, path)?;
        let h = Hypernetwork::new(file.nodes, edges, omega).map_err(|e| bad(e.to_string()))?;
        Ok(Loaded::Hyper(h))
    }
}

fn resolve(
    omega: &OmegaRepr,
    nodes: &[String],
    edges: &[String],
    path: &str,
) -> Result<Matrix, IoError> {
    let bad = |detail: String| IoError::Validation { path: path.to_string(), detail };
    match omega {
        OmegaRepr::Dense(rows) => {
            if rows.len() != nodes.len() {
                return Err(bad(format!(
                    "omega has {} rows but there are {} nodes",
                    rows.len(),
                    nodes.len()
                )));
            }
            for (i, row) in rows.iter().enumerate() {
                if row.len() != edges.len() {
                    return Err(bad(format!(
                        "omega row {i} has {} entries but there are {} edges",
                        row.len(),
                        edges.len()
                    )));
                }
            }
            check_finite(rows.iter().flatten().copied(), path)?;
            Ok(Matrix::from_rows(rows))
        }
        OmegaRepr::Sparse(triples) => {
            let node_index = |id: &str| nodes.iter().position(|n| n == id);
            let edge_index = |id: &str| edges.iter().position(|e| e == id);
            let mut m = Matrix::zeros(nodes.len(), edges.len());
            let mut seen = vec![false; nodes.len() * edges.len()];
            for (nid, eid, v) in triples {
                let i = node_index(nid).ok_or_else(|| bad(format!("unknown node id {nid:?}")))?;
                let j = edge_index(eid).ok_or_else(|| bad(format!("unknown edge id {eid:?}")))?;
                if std::mem::replace(&mut seen[i * edges.len() + j], true) {
                    return Err(bad(format!("duplicate entry for ({nid:?}, {eid:?})")));
                }
                m.set(i, j, *v);
            }
            check_finite(m.values(), path)?;
            Ok(m)
        }
    }
}

fn check_finite(values: impl IntoIterator<Item = f64>, path: &str) -> Result<(), IoError> {
    if values.into_iter().all(f64::is_finite) {
        Ok(())
    } else {
        Err(IoError::Validation {
            path: path.to_string(),
            detail: "omega entries must be finite".into(),
        })
    }
}

/// CSV kernels are dense hypernetworks: a header row whose tail holds the
/// edge ids, then one row per node with the node id in the first column.
fn parse_csv(text: &str, path: &str) -> Result<KernelFile, IoError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let bad_parse = |detail: String| IoError::Parse { path: path.to_string(), detail };
    let headers = reader.headers().map_err(|e| bad_parse(e.to_string()))?.clone();
    if headers.len() < 2 {
        return Err(bad_parse("expected a node-id column and at least one edge column".into()));
    }
    let edges: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();

    let mut nodes = Vec::new();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad_parse(e.to_string()))?;
        if record.len() != headers.len() {
            return Err(bad_parse(format!(
                "row {} has {} fields, header has {}",
                nodes.len() + 1,
                record.len(),
                headers.len()
            )));
        }
        nodes.push(record[0].to_string());
        let mut row = Vec::with_capacity(edges.len());
        for field in record.iter().skip(1) {
            row.push(
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| bad_parse(format!("bad number {field:?}: {e}")))?,
            );
        }
        rows.push(row);
    }
    Ok(KernelFile { network: false, nodes, edges: Some(edges), omega: OmegaRepr::Dense(rows) })
}
