//! Chain specification files.
//!
//! ```json
//! {"family": "Krawtchouk", "N": 8, "a": 0.3, "b": 0.6}
//! {"graph": {"edges": [[0, 1], [1, 2]]}}
//! {"matrix": {"K": [[0.5, 0.5], [0.5, 0.5]], "pi": [0.5, 0.5]}}
//! ```
//!
//! The full schema lives in `docs/chain_spec.schema.json`.

use nalgebra::DMatrix;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::CliError;
use crate::chain::{simple_random_walk, Distribution, Graph, MarkovChain, VertexWindow};
use crate::families::{build, AnalyticEigenSystem, FamilySpec};

/// Tail budget used when a semi-infinite family omits `eps_tail`.
pub const DEFAULT_EPS_TAIL: f64 = 1e-12;

fn default_eps_tail() -> f64 {
    DEFAULT_EPS_TAIL
}

// One struct per family, each deserialised straight from the text so that
// error messages keep their line and column. `family` is the tag.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QHahnEntry {
    #[allow(dead_code)]
    family: String,
    #[serde(rename = "N")]
    n: usize,
    a: f64,
    b: f64,
    c: f64,
    q: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HahnEntry {
    #[allow(dead_code)]
    family: String,
    #[serde(rename = "N")]
    n: usize,
    a: f64,
    b: f64,
    c: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KrawtchoukEntry {
    #[allow(dead_code)]
    family: String,
    #[serde(rename = "N")]
    n: usize,
    a: f64,
    b: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CharlierEntry {
    #[allow(dead_code)]
    family: String,
    a: f64,
    b: f64,
    #[serde(default = "default_eps_tail")]
    eps_tail: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeixnerEntry {
    #[allow(dead_code)]
    family: String,
    a: f64,
    b: f64,
    c: f64,
    #[serde(default = "default_eps_tail")]
    eps_tail: f64,
}

fn parse_family(tag: &str, text: &str) -> Result<FamilySpec, CliError> {
    fn get<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid family spec: {e}")))
    }
    Ok(match tag {
        "qHahn" => {
            let e: QHahnEntry = get(text)?;
            FamilySpec::q_hahn(e.n, e.a, e.b, e.c, e.q)
        }
        "Hahn" => {
            let e: HahnEntry = get(text)?;
            FamilySpec::hahn(e.n, e.a, e.b, e.c)
        }
        "Krawtchouk" => {
            let e: KrawtchoukEntry = get(text)?;
            FamilySpec::krawtchouk(e.n, e.a, e.b)
        }
        "Charlier" => {
            let e: CharlierEntry = get(text)?;
            FamilySpec::charlier(e.a, e.b, e.eps_tail)
        }
        "Meixner" => {
            let e: MeixnerEntry = get(text)?;
            FamilySpec::meixner(e.a, e.b, e.c, e.eps_tail)
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown family {other:?} (expected qHahn, Hahn, Krawtchouk, Charlier or Meixner)"
            )))
        }
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphEntry {
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    vertices: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    graph: GraphEntry,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixEntry {
    #[serde(rename = "K")]
    k: Vec<Vec<f64>>,
    pi: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    matrix: MatrixEntry,
}

/// A parsed chain specification.
#[derive(Clone, Debug, PartialEq)]
pub enum ChainSpec {
    Family(FamilySpec),
    Graph(Graph),
    /// Row-major `K` (rows are targets `x`) and the claimed `pi`.
    Matrix { kernel: DMatrix<f64>, pi: Vec<f64> },
}

impl ChainSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("malformed JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| CliError::Parse("chain spec must be a JSON object".into()))?;
        let present: Vec<&str> =
            ["family", "graph", "matrix"].into_iter().filter(|k| obj.contains_key(*k)).collect();
        if present.len() != 1 {
            return Err(CliError::Parse(format!(
                "chain spec needs exactly one of \"family\", \"graph\", \"matrix\" (found {})",
                if present.is_empty() { "none".to_string() } else { present.join(", ") }
            )));
        }
        // Re-parse the text rather than the value so errors carry positions.
        let schema = |e: serde_json::Error| CliError::Parse(format!("invalid {} spec: {e}", present[0]));
        match present[0] {
            "family" => {
                let tag = obj["family"]
                    .as_str()
                    .ok_or_else(|| CliError::Parse("\"family\" must be a string".into()))?;
                Ok(ChainSpec::Family(parse_family(tag, text)?))
            }
            "graph" => {
                let g = serde_json::from_str::<GraphFile>(text).map_err(schema)?.graph;
                let graph = match g.vertices {
                    Some(n) => Graph::new(n, &g.edges),
                    None => Graph::from_edges(&g.edges),
                }
                .map_err(|e| CliError::Parse(format!("invalid graph: {e}")))?;
                Ok(ChainSpec::Graph(graph))
            }
            _ => {
                let m = serde_json::from_str::<MatrixFile>(text).map_err(schema)?.matrix;
                let n = m.k.len();
                if n == 0 || m.k.iter().any(|row| row.len() != n) {
                    return Err(CliError::Parse("K must be a non-empty square matrix".into()));
                }
                if m.pi.len() != n {
                    return Err(CliError::Parse(format!("pi has {} entries, K has {n} rows", m.pi.len())));
                }
                let kernel = DMatrix::from_fn(n, n, |x, y| m.k[x][y]);
                Ok(ChainSpec::Matrix { kernel, pi: m.pi })
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ChainSpec::Family(f) => f.to_string(),
            ChainSpec::Graph(g) => format!("graph({} vertices, {} edges)", g.vertex_count(), g.edge_count()),
            ChainSpec::Matrix { kernel, .. } => format!("matrix({}x{})", kernel.nrows(), kernel.ncols()),
        }
    }
}

/// A chain loaded from a spec file.
#[derive(Clone, Debug)]
pub struct LoadedChain {
    pub spec: ChainSpec,
    /// Hex SHA-256 of the spec file bytes.
    pub spec_hash: String,
    pub chain: MarkovChain,
    /// Closed-form eigen-data for family specs.
    pub analytic: Option<AnalyticEigenSystem>,
}

pub fn load(text: &str) -> Result<LoadedChain, CliError> {
    let spec = ChainSpec::parse(text)?;
    let spec_hash = hex::encode(Sha256::digest(text.as_bytes()));
    let (chain, analytic) = match &spec {
        ChainSpec::Family(f) => {
            f.validate().map_err(|e| CliError::Parse(e.to_string()))?;
            let sys = build(f).map_err(|e| CliError::Failure(e.to_string()))?;
            (sys.chain.clone(), Some(sys))
        }
        ChainSpec::Graph(g) => (simple_random_walk(g).map_err(|e| CliError::Failure(e.to_string()))?, None),
        ChainSpec::Matrix { kernel, pi } => {
            let n = kernel.nrows();
            // Stochasticity and balance are left to `validate`; only the shape
            // and positivity of pi are needed to hold the chain.
            let chain = MarkovChain::new(VertexWindow::finite(n - 1), kernel.clone(), Distribution::from_raw(pi.clone()))
                .map_err(|e| CliError::Failure(e.to_string()))?;
            (chain, None)
        }
    };
    Ok(LoadedChain { spec, spec_hash, chain, analytic })
}
