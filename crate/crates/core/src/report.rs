//! Versioned JSON reports.
//!
//! Every report is an envelope with a fixed set of top-level fields around
//! a command-specific `result`. Vertex ids inside `result` are dense ids;
//! `graph.labels` maps them back to input labels when they differ.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hierarchy::BuildTrace;
use crate::schedule::Params;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub weighted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<u64>>,
}

impl GraphSummary {
    pub fn new(g: &Graph, labels: &[u64]) -> Self {
        let identity = labels.iter().enumerate().all(|(i, &l)| l == i as u64);
        GraphSummary {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            weighted: !g.is_unit(),
            labels: (!identity).then(|| labels.to_vec()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub partitions: usize,
    pub base_cases: usize,
    pub max_depth: usize,
    pub imaginary_points: usize,
    pub cones: usize,
}

impl From<&BuildTrace> for TraceSummary {
    fn from(t: &BuildTrace) -> Self {
        TraceSummary {
            partitions: t.partitions.len(),
            base_cases: t.base_cases,
            max_depth: t.max_depth,
            imaginary_points: t.imaginary_points,
            cones: t.partitions.iter().map(|p| p.cones.len()).sum(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub version: u32,
    pub command: String,
    pub graph: GraphSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    pub result: T,
}

impl<T: Serialize + DeserializeOwned> Report<T> {
    pub fn new(command: &str, graph: GraphSummary, params: Option<Params>, result: T) -> Self {
        Report {
            version: REPORT_VERSION,
            command: command.to_string(),
            graph,
            params,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        if r.version != REPORT_VERSION {
            return Err(Error::Parse {
                line: 0,
                message: format!("unsupported report version {}", r.version),
            });
        }
        Ok(r)
    }
}
