//! The six structural metrics computed over a sealed graph.
//!
//! Every metric runs on the undirected simple projection of the input graph:
//! edge direction is dropped, parallel edges collapse to one (their `count`
//! attributes summing into a weight) and self-loops are removed. Disconnected
//! graphs are handled per component; the per-component results concatenate
//! into one distribution.

mod betweenness;
mod current_flow;
mod eigenvector;
mod subgraph_centrality;

pub use betweenness::{edge_betweenness_on, weighted_edge_betweenness_on};
pub use current_flow::{current_flow_betweenness_on, edge_current_flow_betweenness_on};
pub use eigenvector::eigenvector_centrality_on;
pub use subgraph_centrality::{subgraph_centrality_on, DEFAULT_SPECTRAL_BUDGET};

use crate::graph::{AttrValue, NodeId, PropertyGraph};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("{metric}: graph has no nodes")]
    EmptyGraph { metric: &'static str },
}

/// The metric set of the discovery algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Eigenvector centrality (nodes).
    Ev,
    /// Edge betweenness centrality (edges).
    Ec,
    /// Current-flow betweenness centrality (nodes).
    Nc,
    /// Average neighbor degree (nodes).
    Z,
    /// Core number (nodes).
    Mu,
    /// Subgraph centrality (nodes).
    Sc,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Ev,
        Metric::Ec,
        Metric::Nc,
        Metric::Z,
        Metric::Mu,
        Metric::Sc,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Ev => "ev",
            Metric::Ec => "ec",
            Metric::Nc => "nc",
            Metric::Z => "z",
            Metric::Mu => "mu",
            Metric::Sc => "sc",
        }
    }
}

/// Undirected simple projection of a property graph.
///
/// Nodes are indexed `0..n` in ascending `NodeId` order so downstream
/// kernels can use dense vectors; `node_ids` maps back.
#[derive(Debug, Clone)]
pub struct SimpleProjection {
    pub node_ids: Vec<NodeId>,
    /// Sorted neighbor lists, deduplicated, no self entries.
    pub adj: Vec<Vec<usize>>,
    /// Undirected edges with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Collapsed edge weights (sum of `count` attrs, 1 per uncounted edge).
    pub weights: Vec<f64>,
}

impl SimpleProjection {
    pub fn from_graph(g: &PropertyGraph) -> Self {
        let node_ids: Vec<NodeId> = g.node_ids().collect();
        let index: BTreeMap<NodeId, usize> = node_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (*id, i))
            .collect();
        let mut weight_map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (_, e) in g.edges() {
            let u = index[&e.tail];
            let v = index[&e.head];
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            let w = e
                .attrs
                .get("count")
                .and_then(AttrValue::as_real)
                .unwrap_or(1.0);
            *weight_map.entry(key).or_insert(0.0) += w;
        }
        let mut adj = vec![Vec::new(); node_ids.len()];
        let mut edges = Vec::with_capacity(weight_map.len());
        let mut weights = Vec::with_capacity(weight_map.len());
        for ((u, v), w) in weight_map {
            adj[u].push(v);
            adj[v].push(u);
            edges.push((u, v));
            weights.push(w);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        SimpleProjection {
            node_ids,
            adj,
            edges,
            weights,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Connected components as sorted index lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut head = 0;
            while head < comp.len() {
                let v = comp[head];
                head += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Key for edge-valued metrics: canonical `(min, max)` endpoint pair.
pub type EdgePair = (NodeId, NodeId);

/// The per-graph vectors of all six metrics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricBundle {
    pub ev: BTreeMap<NodeId, f64>,
    pub ec: BTreeMap<EdgePair, f64>,
    pub nc: BTreeMap<NodeId, f64>,
    pub z: BTreeMap<NodeId, f64>,
    pub mu: BTreeMap<NodeId, i64>,
    pub sc: BTreeMap<NodeId, f64>,
}

impl MetricBundle {
    /// Metric values as a plain vector, in key order.
    pub fn values(&self, metric: Metric) -> Vec<f64> {
        match metric {
            Metric::Ev => self.ev.values().copied().collect(),
            Metric::Ec => self.ec.values().copied().collect(),
            Metric::Nc => self.nc.values().copied().collect(),
            Metric::Z => self.z.values().copied().collect(),
            Metric::Mu => self.mu.values().map(|v| *v as f64).collect(),
            Metric::Sc => self.sc.values().copied().collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes = |m: &BTreeMap<NodeId, f64>| -> serde_json::Value {
            serde_json::Value::Object(
                m.iter()
                    .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                    .collect(),
            )
        };
        let edges: serde_json::Value = serde_json::Value::Object(
            self.ec
                .iter()
                .map(|((a, b), v)| (format!("{a}-{b}"), serde_json::json!(v)))
                .collect(),
        );
        let cores: serde_json::Value = serde_json::Value::Object(
            self.mu
                .iter()
                .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                .collect(),
        );
        serde_json::json!({
            "ev": nodes(&self.ev),
            "ec": edges,
            "nc": nodes(&self.nc),
            "z": nodes(&self.z),
            "mu": cores,
            "sc": nodes(&self.sc),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Option<MetricBundle> {
        let nodes = |name: &str| -> Option<BTreeMap<NodeId, f64>> {
            value.get(name)?.as_object().map(|m| {
                m.iter()
                    .filter_map(|(k, v)| Some((NodeId(k.parse().ok()?), v.as_f64()?)))
                    .collect()
            })
        };
        let ec = value.get("ec")?.as_object().map(|m| {
            m.iter()
                .filter_map(|(k, v)| {
                    let (a, b) = k.split_once('-')?;
                    Some((
                        (NodeId(a.parse().ok()?), NodeId(b.parse().ok()?)),
                        v.as_f64()?,
                    ))
                })
                .collect()
        })?;
        let mu = value.get("mu")?.as_object().map(|m| {
            m.iter()
                .filter_map(|(k, v)| Some((NodeId(k.parse().ok()?), v.as_i64()?)))
                .collect()
        })?;
        Some(MetricBundle {
            ev: nodes("ev")?,
            ec,
            nc: nodes("nc")?,
            z: nodes("z")?,
            mu,
            sc: nodes("sc")?,
        })
    }
}

/// Eigenvector centrality: principal adjacency eigenvector per component,
/// non-negative, Euclidean-normalized per component.
pub fn eigenvector_centrality(g: &PropertyGraph) -> Result<BTreeMap<NodeId, f64>, MetricError> {
    let p = SimpleProjection::from_graph(g);
    if p.node_count() == 0 {
        return Err(MetricError::EmptyGraph {
            metric: "eigenvector_centrality",
        });
    }
    let values = eigenvector_centrality_on(&p);
    Ok(zip_nodes(&p, &values))
}

/// Edge betweenness: for each edge, the sum over unordered node pairs of
/// the fraction of shortest paths crossing it. Unnormalized.
pub fn edge_betweenness(g: &PropertyGraph) -> BTreeMap<EdgePair, f64> {
    let p = SimpleProjection::from_graph(g);
    let values = edge_betweenness_on(&p);
    zip_edges(&p, &values)
}

/// Edge betweenness over inverse-weight shortest paths (heavier co-occurrence
/// edges are shorter). Optional alternative to the unweighted default.
pub fn edge_betweenness_inverse_weight(g: &PropertyGraph) -> BTreeMap<EdgePair, f64> {
    let p = SimpleProjection::from_graph(g);
    let values = weighted_edge_betweenness_on(&p);
    zip_edges(&p, &values)
}

/// Current-flow betweenness: throughput of unit st-currents summed over all
/// source/sink pairs, endpoints excluded from their own pair.
pub fn current_flow_betweenness(g: &PropertyGraph) -> BTreeMap<NodeId, f64> {
    let p = SimpleProjection::from_graph(g);
    let values = current_flow_betweenness_on(&p);
    zip_nodes(&p, &values)
}

/// Edge current-flow betweenness, the literal reading of the discovery
/// pseudocode's `ec`; exposed as an alternative to [`edge_betweenness`].
pub fn edge_current_flow_betweenness(g: &PropertyGraph) -> BTreeMap<EdgePair, f64> {
    let p = SimpleProjection::from_graph(g);
    let values = edge_current_flow_betweenness_on(&p);
    zip_edges(&p, &values)
}

/// Average degree of each node's neighborhood; isolated nodes score 0.
pub fn average_neighbor_degree(g: &PropertyGraph) -> BTreeMap<NodeId, f64> {
    let p = SimpleProjection::from_graph(g);
    let values = average_neighbor_degree_on(&p);
    zip_nodes(&p, &values)
}

pub fn average_neighbor_degree_on(p: &SimpleProjection) -> Vec<f64> {
    (0..p.node_count())
        .map(|v| {
            let neighbors = &p.adj[v];
            if neighbors.is_empty() {
                0.0
            } else {
                neighbors.iter().map(|&w| p.degree(w) as f64).sum::<f64>()
                    / neighbors.len() as f64
            }
        })
        .collect()
}

/// Core numbers via min-degree peeling.
pub fn core_numbers(g: &PropertyGraph) -> BTreeMap<NodeId, i64> {
    let p = SimpleProjection::from_graph(g);
    let values = core_numbers_on(&p);
    p.node_ids
        .iter()
        .zip(values)
        .map(|(id, v)| (*id, v as i64))
        .collect()
}

pub fn core_numbers_on(p: &SimpleProjection) -> Vec<usize> {
    let n = p.node_count();
    let mut degree: Vec<usize> = (0..n).map(|v| p.degree(v)).collect();
    let mut core = vec![0usize; n];
    let mut remaining: std::collections::BTreeSet<(usize, usize)> =
        (0..n).map(|v| (degree[v], v)).collect();
    let mut removed = vec![false; n];
    let mut k = 0;
    while let Some(&(d, v)) = remaining.iter().next() {
        remaining.remove(&(d, v));
        k = k.max(d);
        core[v] = k;
        removed[v] = true;
        for &w in &p.adj[v] {
            if !removed[w] {
                remaining.remove(&(degree[w], w));
                degree[w] -= 1;
                remaining.insert((degree[w], w));
            }
        }
    }
    core
}

/// Subgraph centrality: the diagonal of the adjacency exponential,
/// `sc(i) = sum_j v_j(i)^2 e^(lambda_j)`.
pub fn subgraph_centrality(g: &PropertyGraph) -> BTreeMap<NodeId, f64> {
    let p = SimpleProjection::from_graph(g);
    let values = subgraph_centrality_on(&p, DEFAULT_SPECTRAL_BUDGET);
    zip_nodes(&p, &values)
}

fn zip_nodes(p: &SimpleProjection, values: &[f64]) -> BTreeMap<NodeId, f64> {
    p.node_ids
        .iter()
        .zip(values.iter())
        .map(|(id, v)| (*id, *v))
        .collect()
}

fn zip_edges(p: &SimpleProjection, values: &[f64]) -> BTreeMap<EdgePair, f64> {
    p.edges
        .iter()
        .zip(values.iter())
        .map(|((u, v), score)| ((p.node_ids[*u], p.node_ids[*v]), *score))
        .collect()
}

/// Compute all six metrics of a sealed graph.
pub fn compute_metrics(g: &PropertyGraph) -> Result<MetricBundle, MetricError> {
    let p = SimpleProjection::from_graph(g);
    if p.node_count() == 0 {
        return Err(MetricError::EmptyGraph {
            metric: "eigenvector_centrality",
        });
    }
    let ev = eigenvector_centrality_on(&p);
    let ec = edge_betweenness_on(&p);
    let nc = current_flow_betweenness_on(&p);
    let z = average_neighbor_degree_on(&p);
    let mu = core_numbers_on(&p);
    let sc = subgraph_centrality_on(&p, DEFAULT_SPECTRAL_BUDGET);
    Ok(MetricBundle {
        ev: zip_nodes(&p, &ev),
        ec: zip_edges(&p, &ec),
        nc: zip_nodes(&p, &nc),
        z: zip_nodes(&p, &z),
        mu: p
            .node_ids
            .iter()
            .zip(mu)
            .map(|(id, v)| (*id, v as i64))
            .collect(),
        sc: zip_nodes(&p, &sc),
    })
}

#[cfg(test)]
pub(crate) mod test_graphs {
    use super::*;
    use crate::graph::{AttrMap, NodeKind};

    /// Undirected test graph over `n` user nodes with co-mention edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> PropertyGraph {
        let mut g = PropertyGraph::new();
        let ids: Vec<NodeId> = (0..n)
            .map(|_| g.add_node(NodeKind::User, AttrMap::new()).unwrap())
            .collect();
        for (u, v) in edges {
            g.add_undirected_computed(ids[*u], ids[*v], "co_mention", AttrMap::new())
                .unwrap();
        }
        g
    }
}
