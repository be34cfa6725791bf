//! Candidate subgraph construction and filtering.
//!
//! Node groups become candidate subgraphs through three expansion rules:
//! G1 induces over the group's posts relaxed with their directly associated
//! nodes, G2 starts from the group's mention network instead, and G3 extends
//! a G1/G2 base with the first-order neighborhood of its mentioned users and
//! hashtags, deliberately crossing the group boundary. Candidates then pass
//! the connectivity/size gate (C1), user predicates (C2) and the textual
//! diversity test (C3).

use crate::graph::{AttrValue, EdgeKind, GraphError, NodeId, NodeKind, PropertyGraph};
use crate::grouping::NodeGroup;
use crate::ingest::LAYER_REFERENCES;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("group {key:?} contains no post nodes")]
    NoPosts { key: Vec<String> },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseRule {
    G1,
    G2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "rule", content = "base")]
pub enum ConstructionRule {
    G1,
    G2,
    G3(BaseRule),
}

impl std::fmt::Display for ConstructionRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstructionRule::G1 => write!(f, "g1"),
            ConstructionRule::G2 => write!(f, "g2"),
            ConstructionRule::G3(BaseRule::G1) => write!(f, "g3:g1"),
            ConstructionRule::G3(BaseRule::G2) => write!(f, "g3:g2"),
        }
    }
}

impl std::str::FromStr for ConstructionRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "g1" => Ok(ConstructionRule::G1),
            "g2" => Ok(ConstructionRule::G2),
            "g3" | "g3:g1" => Ok(ConstructionRule::G3(BaseRule::G1)),
            "g3:g2" => Ok(ConstructionRule::G3(BaseRule::G2)),
            other => Err(format!("unknown construction rule `{other}`")),
        }
    }
}

/// A candidate subgraph with its provenance.
#[derive(Debug, Clone)]
pub struct CandidateSubgraph {
    pub id: String,
    pub source_key: Vec<String>,
    pub rule: ConstructionRule,
    pub graph: PropertyGraph,
    pub post_count: usize,
}

/// Nodes directly associated with a post: its author, hashtags, referenced
/// resources and mentioned users.
fn directly_associated(g: &PropertyGraph, post: NodeId) -> BTreeSet<NodeId> {
    let mut out = BTreeSet::new();
    for eid in g.incident_edges(post) {
        let e = g.edge(*eid).expect("edge exists");
        match &e.kind {
            EdgeKind::Writes if e.head == post => {
                out.insert(e.tail);
            }
            EdgeKind::Uses | EdgeKind::Mentions if e.tail == post => {
                out.insert(e.head);
            }
            EdgeKind::Computed(name) if name == LAYER_REFERENCES && e.tail == post => {
                out.insert(e.head);
            }
            _ => {}
        }
    }
    out
}

fn group_posts(g: &PropertyGraph, group: &NodeGroup) -> Vec<NodeId> {
    group
        .members
        .iter()
        .filter(|n| matches!(g.node(**n), Some(d) if d.kind == NodeKind::Post))
        .copied()
        .collect()
}

fn count_posts(g: &PropertyGraph) -> usize {
    g.nodes_of_kind(&NodeKind::Post).count()
}

fn candidate_id(key: &[String], rule: ConstructionRule) -> String {
    format!("{}__{}", key.join("_"), rule)
}

/// G1, the relaxed induced subgraph: the group's posts plus every node
/// directly associated with them, induced over the narrowed graph.
pub fn construct_g1(
    gprime: &PropertyGraph,
    group: &NodeGroup,
) -> Result<CandidateSubgraph, ConstructError> {
    let posts = group_posts(gprime, group);
    if posts.is_empty() {
        return Err(ConstructError::NoPosts {
            key: group.key.clone(),
        });
    }
    let mut nodes: BTreeSet<NodeId> = posts.iter().copied().collect();
    for post in &posts {
        nodes.extend(directly_associated(gprime, *post));
    }
    let graph = gprime.induced_subgraph(&nodes)?;
    Ok(CandidateSubgraph {
        id: candidate_id(&group.key, ConstructionRule::G1),
        source_key: group.key.clone(),
        rule: ConstructionRule::G1,
        post_count: posts.len(),
        graph,
    })
}

/// G2, the mention network: group posts that mention at least one user,
/// their mention targets, then the usual direct associations of those
/// posts. A group without mentions yields an empty candidate, which C1
/// filters later.
pub fn construct_g2(
    gprime: &PropertyGraph,
    group: &NodeGroup,
) -> Result<CandidateSubgraph, ConstructError> {
    let posts = group_posts(gprime, group);
    if posts.is_empty() {
        return Err(ConstructError::NoPosts {
            key: group.key.clone(),
        });
    }
    let mentioning: Vec<NodeId> = posts
        .iter()
        .filter(|p| {
            gprime.incident_edges(**p).iter().any(|eid| {
                let e = gprime.edge(*eid).expect("edge exists");
                matches!(e.kind, EdgeKind::Mentions) && e.tail == **p
            })
        })
        .copied()
        .collect();
    let mut nodes: BTreeSet<NodeId> = mentioning.iter().copied().collect();
    for post in &mentioning {
        nodes.extend(directly_associated(gprime, *post));
    }
    let graph = gprime.induced_subgraph(&nodes)?;
    Ok(CandidateSubgraph {
        id: candidate_id(&group.key, ConstructionRule::G2),
        source_key: group.key.clone(),
        rule: ConstructionRule::G2,
        post_count: mentioning.len(),
        graph,
    })
}

/// G3: a G1/G2 base extended with the first-order neighborhood (in the
/// narrowed graph) of its mentioned users and hashtags; posts joining
/// through that hop bring their direct associations along.
pub fn construct_g3(
    gprime: &PropertyGraph,
    base: &CandidateSubgraph,
) -> Result<CandidateSubgraph, ConstructError> {
    let mut anchors: BTreeSet<NodeId> = BTreeSet::new();
    for (_, e) in base.graph.edges() {
        if matches!(e.kind, EdgeKind::Mentions) {
            anchors.insert(e.head);
        }
    }
    for node in base.graph.node_ids() {
        if matches!(base.graph.node(node), Some(d) if d.kind == NodeKind::Hashtag) {
            anchors.insert(node);
        }
    }

    let mut nodes: BTreeSet<NodeId> = base.graph.node_ids().collect();
    let mut joined_posts: Vec<NodeId> = Vec::new();
    for anchor in &anchors {
        for neighbor in gprime.neighbors(*anchor) {
            if nodes.insert(neighbor) {
                if matches!(gprime.node(neighbor), Some(d) if d.kind == NodeKind::Post) {
                    joined_posts.push(neighbor);
                }
            }
        }
    }
    for post in joined_posts {
        nodes.extend(directly_associated(gprime, post));
    }
    let graph = gprime.induced_subgraph(&nodes)?;
    let base_rule = match base.rule {
        ConstructionRule::G1 | ConstructionRule::G3(BaseRule::G1) => BaseRule::G1,
        ConstructionRule::G2 | ConstructionRule::G3(BaseRule::G2) => BaseRule::G2,
    };
    let rule = ConstructionRule::G3(base_rule);
    Ok(CandidateSubgraph {
        id: candidate_id(&base.source_key, rule),
        source_key: base.source_key.clone(),
        rule,
        post_count: count_posts(&graph),
        graph,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
    Ne,
    Contains,
}

/// Predicate over a local attribute of nodes of one kind (or edges of one
/// label).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributePredicate {
    /// Node kind label ("post", "user", ...) or edge label ("hc", ...).
    pub target: String,
    pub attribute: String,
    pub comparator: Comparator,
    pub value: serde_json::Value,
}

impl AttributePredicate {
    fn holds(&self, attrs: &crate::graph::AttrMap) -> bool {
        let Some(actual) = attrs.get(&self.attribute) else {
            return false;
        };
        match self.comparator {
            Comparator::Contains => {
                let (Some(haystack), Some(needle)) = (actual.as_text(), self.value.as_str())
                else {
                    return false;
                };
                haystack.to_lowercase().contains(&needle.to_lowercase())
            }
            Comparator::Eq | Comparator::Ne => {
                let equal = match (actual, &self.value) {
                    (AttrValue::Text(t), serde_json::Value::String(s)) => t == s,
                    _ => match (actual.as_real(), self.value.as_f64()) {
                        (Some(a), Some(b)) => a == b,
                        _ => false,
                    },
                };
                (self.comparator == Comparator::Eq) == equal
            }
            numeric => {
                let (Some(a), Some(b)) = (actual.as_real(), self.value.as_f64()) else {
                    return false;
                };
                match numeric {
                    Comparator::Ge => a >= b,
                    Comparator::Gt => a > b,
                    Comparator::Le => a <= b,
                    Comparator::Lt => a < b,
                    _ => unreachable!("handled above"),
                }
            }
        }
    }
}

pub const DEFAULT_MIN_NODES: usize = 10;
pub const DEFAULT_DIVERSITY_THRESHOLD: f64 = 0.1;

/// The C1–C3 candidate filter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateFilter {
    /// C1: minimum node count of the largest connected component.
    #[serde(default = "default_min_nodes")]
    pub min_nodes: usize,
    /// C2 over nodes.
    #[serde(default)]
    pub node_predicates: Vec<AttributePredicate>,
    /// C2 over edges.
    #[serde(default)]
    pub edge_predicates: Vec<AttributePredicate>,
    /// C3: text attribute whose value diversity must deviate from a power
    /// law. Skipped when unset.
    #[serde(default)]
    pub diversity_attribute: Option<String>,
    #[serde(default = "default_diversity_threshold")]
    pub diversity_threshold: f64,
}

fn default_min_nodes() -> usize {
    DEFAULT_MIN_NODES
}

fn default_diversity_threshold() -> f64 {
    DEFAULT_DIVERSITY_THRESHOLD
}

impl Default for CandidateFilter {
    fn default() -> Self {
        CandidateFilter {
            min_nodes: DEFAULT_MIN_NODES,
            node_predicates: Vec::new(),
            edge_predicates: Vec::new(),
            diversity_attribute: None,
            diversity_threshold: DEFAULT_DIVERSITY_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "reason")]
pub enum RejectionReason {
    /// C1: largest component below the size threshold.
    TooSmall {
        largest_component: usize,
        threshold: usize,
    },
    /// C2: a node violated a predicate.
    NodePredicate { detail: String },
    /// C2: an edge violated a predicate.
    EdgePredicate { detail: String },
    /// C3: value distribution matched the expected power law.
    NotDiverse { distance: f64, threshold: f64 },
    /// C3: too few distinct values to test.
    LowSupport { distinct: usize },
}

#[derive(Debug, Clone, Default)]
pub struct FilterOutcome {
    pub kept: Vec<CandidateSubgraph>,
    pub rejected: Vec<(String, RejectionReason)>,
}

/// Apply C1–C3. Disconnected candidates are replaced by their largest
/// component rather than rejected outright; every kept candidate is
/// connected with at least `min_nodes` nodes.
pub fn filter_candidates(candidates: Vec<CandidateSubgraph>, filter: &CandidateFilter) -> FilterOutcome {
    let mut outcome = FilterOutcome::default();
    'candidates: for mut candidate in candidates {
        // C1: connectivity and size
        let largest = candidate.graph.largest_component();
        if largest.len() < filter.min_nodes {
            outcome.rejected.push((
                candidate.id.clone(),
                RejectionReason::TooSmall {
                    largest_component: largest.len(),
                    threshold: filter.min_nodes,
                },
            ));
            continue;
        }
        if largest.len() < candidate.graph.node_count() {
            candidate.graph = candidate
                .graph
                .induced_subgraph(&largest)
                .expect("component nodes exist");
            candidate.post_count = count_posts(&candidate.graph);
        }

        // C2: local attribute predicates
        for predicate in &filter.node_predicates {
            for (node, data) in candidate.graph.nodes() {
                if data.kind.label() != predicate.target {
                    continue;
                }
                if !predicate.holds(&data.attrs) {
                    outcome.rejected.push((
                        candidate.id.clone(),
                        RejectionReason::NodePredicate {
                            detail: format!(
                                "node {node} fails {} {:?} {}",
                                predicate.attribute, predicate.comparator, predicate.value
                            ),
                        },
                    ));
                    continue 'candidates;
                }
            }
        }
        for predicate in &filter.edge_predicates {
            for (edge, data) in candidate.graph.edges() {
                if data.kind.label() != predicate.target {
                    continue;
                }
                if !predicate.holds(&data.attrs) {
                    outcome.rejected.push((
                        candidate.id.clone(),
                        RejectionReason::EdgePredicate {
                            detail: format!(
                                "edge {edge} fails {} {:?} {}",
                                predicate.attribute, predicate.comparator, predicate.value
                            ),
                        },
                    ));
                    continue 'candidates;
                }
            }
        }

        // C3: textual diversity must deviate from a power law
        if let Some(attribute) = &filter.diversity_attribute {
            let values: Vec<String> = candidate
                .graph
                .nodes()
                .filter_map(|(_, d)| d.attrs.get(attribute))
                .filter_map(|v| v.as_text().map(str::to_string))
                .collect();
            let report = diversity_deviation(&values, filter.diversity_threshold, attribute);
            if report.low_support {
                outcome.rejected.push((
                    candidate.id.clone(),
                    RejectionReason::LowSupport {
                        distinct: report.frequency_spectrum.len(),
                    },
                ));
                continue;
            }
            if !report.deviates {
                outcome.rejected.push((
                    candidate.id.clone(),
                    RejectionReason::NotDiverse {
                        distance: report.powerlaw_fit_distance,
                        threshold: filter.diversity_threshold,
                    },
                ));
                continue;
            }
        }

        outcome.kept.push(candidate);
    }
    outcome
}

/// Outcome of the power-law deviation test over a text value multiset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityReport {
    pub attribute: String,
    /// Distinct-value frequencies, descending.
    pub frequency_spectrum: Vec<u64>,
    /// Maximum-likelihood Zipf exponent within [1.5, 3.5].
    pub fitted_alpha: f64,
    /// Kolmogorov–Smirnov distance between the empirical and fitted rank
    /// CDFs, in [0, 1].
    pub powerlaw_fit_distance: f64,
    pub deviates: bool,
    pub low_support: bool,
}

const ALPHA_RANGE: (f64, f64) = (1.5, 3.5);
const MIN_DISTINCT_VALUES: usize = 5;

/// Fit a discrete power law to the frequency-rank spectrum by maximum
/// likelihood and measure how far the empirical distribution strays from
/// it. `deviates` fires when the KS distance exceeds the threshold; fewer
/// than 5 distinct values short-circuits with the low-support flag.
pub fn diversity_deviation(values: &[String], threshold: f64, attribute: &str) -> DiversityReport {
    let mut counts: BTreeMap<&String, u64> = BTreeMap::new();
    for value in values {
        *counts.entry(value).or_insert(0) += 1;
    }
    let mut spectrum: Vec<u64> = counts.values().copied().collect();
    spectrum.sort_unstable_by(|a, b| b.cmp(a));

    if spectrum.len() < MIN_DISTINCT_VALUES {
        return DiversityReport {
            attribute: attribute.to_string(),
            frequency_spectrum: spectrum,
            fitted_alpha: f64::NAN,
            powerlaw_fit_distance: 0.0,
            deviates: false,
            low_support: true,
        };
    }

    let total: f64 = spectrum.iter().sum::<u64>() as f64;
    let ranks: Vec<f64> = (1..=spectrum.len()).map(|r| r as f64).collect();
    let weighted_log_rank: f64 = spectrum
        .iter()
        .zip(&ranks)
        .map(|(f, r)| *f as f64 * r.ln())
        .sum();

    let log_likelihood = |alpha: f64| -> f64 {
        let harmonic: f64 = ranks.iter().map(|r| r.powf(-alpha)).sum();
        -alpha * weighted_log_rank - total * harmonic.ln()
    };

    // the likelihood is concave in alpha; ternary search suffices
    let (mut lo, mut hi) = ALPHA_RANGE;
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if log_likelihood(m1) < log_likelihood(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let alpha = (lo + hi) / 2.0;

    let harmonic: f64 = ranks.iter().map(|r| r.powf(-alpha)).sum();
    let mut emp_cdf = 0.0;
    let mut fit_cdf = 0.0;
    let mut ks = 0.0f64;
    for (f, r) in spectrum.iter().zip(&ranks) {
        emp_cdf += *f as f64 / total;
        fit_cdf += r.powf(-alpha) / harmonic;
        ks = ks.max((emp_cdf - fit_cdf).abs());
    }

    DiversityReport {
        attribute: attribute.to_string(),
        frequency_spectrum: spectrum,
        fitted_alpha: alpha,
        powerlaw_fit_distance: ks,
        deviates: ks > threshold,
        low_support: false,
    }
}
