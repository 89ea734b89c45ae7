use std::path::PathBuf;
use std::str::FromStr;

use hankel_cones::vandermonde::VandermondeFrame;
use hankel_cones::SolverConfig;
use serde::{Deserialize, Serialize};

/// Everything a run depends on besides its input files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub solver: SolverConfig,
    /// Seed for randomized commands; a fresh one is drawn and printed when absent.
    pub seed: Option<u64>,
    pub nodes: NodeScheme,
    /// Random points per PSD sampling test.
    pub psd_samples: usize,
    /// Rank-one terms per `U(m, n)` sample.
    pub ucone_terms: usize,
    /// Random pairs in the `lemma-const` spot check.
    pub lemma_pairs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            seed: None,
            nodes: NodeScheme::Chebyshev,
            psd_samples: 10_000,
            ucone_terms: 3,
            lemma_pairs: 500,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        self.solver.validate().map_err(|e| e.to_string())?;
        if self.ucone_terms == 0 {
            return Err("ucone_terms must be at least 1".into());
        }
        Ok(())
    }
}

/// How Vandermonde nodes are chosen.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum NodeScheme {
    #[default]
    Chebyshev,
    /// Nodes read from a JSON file: an array, or an object with a `nodes` array.
    Custom(PathBuf),
}

impl FromStr for NodeScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            None if s == "chebyshev" => Ok(NodeScheme::Chebyshev),
            Some(("custom", path)) if !path.is_empty() => Ok(NodeScheme::Custom(path.into())),
            _ => Err(format!(
                "unknown node scheme `{s}`; expected chebyshev or custom:<file>"
            )),
        }
    }
}

impl std::fmt::Display for NodeScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeScheme::Chebyshev => write!(f, "chebyshev"),
            NodeScheme::Custom(p) => write!(f, "custom:{}", p.display()),
        }
    }
}

impl Serialize for NodeScheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NodeScheme {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NodeFile {
    List(Vec<f64>),
    Object { nodes: Vec<f64> },
}

impl NodeScheme {
    pub fn frame(&self, m: usize, n: usize) -> Result<VandermondeFrame, crate::CliError> {
        match self {
            NodeScheme::Chebyshev => Ok(VandermondeFrame::chebyshev(m, n)?),
            NodeScheme::Custom(path) => {
                let nodes = match crate::read_json::<NodeFile>(path)? {
                    NodeFile::List(v) | NodeFile::Object { nodes: v } => v,
                };
                Ok(VandermondeFrame::new(m, n, nodes)?)
            }
        }
    }
}
