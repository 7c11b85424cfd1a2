//! The instance file: TOML, one table per concern.
//!
//! ```toml
//! n = 3
//! preferences = [[[2], [1], [3]], [[1, 3], [2]], [[2], [3], [1]]]
//! endowment = [1, 2, 3]        # optional, identity when absent
//! values = [[...], ...]        # optional n x n, row per agent
//! labels = ["a", "b", "c"]     # optional
//!
//! [network]
//! kind = "path"                # path | star | general
//! edges = [[1, 2], [2, 3]]
//!
//! [query]                      # optional
//! kind = "reach"               # reach | pareto | welfare
//! agent = 3
//! object = 1
//! ```
//!
//! Agents and objects are 1-based. Preferences list tiers best first.
//! Writing a parsed file back gives the normalized text, and normalized
//! text round-trips byte for byte.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use swapreach::model::NetworkKind;
use swapreach::{
    Agent, Instance, InstanceParts, Network, Object, PreferenceProfile, Query, ValueFunction,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub preferences: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endowment: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub network: NetworkFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<QueryFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub kind: String,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<usize>,
    /// Welfare target for `kind = "welfare"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<i64>,
}

impl QueryFile {
    pub fn reach(agent: Agent, object: Object) -> Self {
        QueryFile {
            kind: "reach".into(),
            agent: Some(agent.0),
            object: Some(object.0),
            threshold: None,
        }
    }

    pub fn welfare(threshold: Option<i64>) -> Self {
        QueryFile {
            kind: "welfare".into(),
            agent: None,
            object: None,
            threshold,
        }
    }

    pub fn to_query(&self) -> Result<Query> {
        Ok(match self.kind.as_str() {
            "reach" => {
                let (Some(a), Some(o)) = (self.agent, self.object) else {
                    bail!("a reach query needs both `agent` and `object`");
                };
                Query::Reach {
                    agent: Agent(a),
                    object: Object(o),
                }
            }
            "pareto" => Query::ParetoFrontier,
            "welfare" => Query::MaxWelfare,
            other => bail!("unknown query kind `{other}` (expected reach, pareto or welfare)"),
        })
    }
}

fn kind_from_str(s: &str) -> Result<NetworkKind> {
    Ok(match s {
        "path" => NetworkKind::Path,
        "star" => NetworkKind::Star,
        "general" => NetworkKind::General,
        other => bail!("unknown network kind `{other}` (expected path, star or general)"),
    })
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance, query: Option<QueryFile>) -> Self {
        let parts = inst.to_parts();
        InstanceFile {
            n: parts.n,
            preferences: parts
                .preferences
                .all()
                .iter()
                .map(|tiers| {
                    tiers
                        .iter()
                        .map(|t| t.iter().map(|o| o.0).collect())
                        .collect()
                })
                .collect(),
            endowment: parts.endowment.map(|e| e.iter().map(|o| o.0).collect()),
            values: parts.values.map(|v| v.rows().to_vec()),
            labels: parts.agent_labels,
            network: NetworkFile {
                kind: parts.network.kind().as_str().into(),
                edges: parts
                    .network
                    .edges()
                    .iter()
                    .map(|&(a, b)| [a.0, b.0])
                    .collect(),
            },
            query,
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let kind = kind_from_str(&self.network.kind)?;
        let network = Network::new(
            kind,
            self.network
                .edges
                .iter()
                .map(|&[a, b]| (Agent(a), Agent(b))),
        );
        let tiers = self
            .preferences
            .iter()
            .map(|agent| {
                agent
                    .iter()
                    .map(|t| t.iter().map(|&o| Object(o)).collect())
                    .collect()
            })
            .collect();
        let mut parts = InstanceParts::new(self.n, network, PreferenceProfile::from_tiers(tiers));
        if let Some(e) = &self.endowment {
            parts = parts.with_endowment(e.iter().map(|&o| Object(o)).collect());
        }
        if let Some(v) = &self.values {
            parts = parts.with_values(ValueFunction::new(v.clone()));
        }
        if let Some(l) = &self.labels {
            parts = parts.with_labels(l.clone());
        }
        Instance::new(parts).map_err(|e| {
            let lines: Vec<String> = e.0.iter().map(|d| format!("  - {d}")).collect();
            anyhow::anyhow!("invalid instance:\n{}", lines.join("\n"))
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("instance files always serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Read, parse and validate an instance file.
pub fn load_instance(path: &Path) -> Result<(Instance, Option<QueryFile>)> {
    let file = InstanceFile::load(path)?;
    let inst = file
        .to_instance()
        .with_context(|| format!("in {}", path.display()))?;
    Ok((inst, file.query))
}
