//! Generalized group-by over the narrowed graph.
//!
//! Attribute mode groups nodes of one kind by transformed attribute values
//! and partitions them; pattern mode groups by a single-edge subgraph pattern
//! and may assign a node to several groups (the paper's soft partitioning).
//! Grouping attributes can be picked automatically via the knee of the
//! value-frequency distribution.

use crate::graph::{AttrValue, EdgeKind, NodeId, NodeKind, PropertyGraph, ATTR_CREATED_AT};
use crate::ingest::day_of;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GroupingError {
    #[error("unknown attribute `{attr}` on kind `{kind}`")]
    UnknownAttribute { kind: String, attr: String },
    #[error("no edges with label `{0}`")]
    UnknownLabel(String),
    #[error("attribute mode takes one or two grouping functions, got {0}")]
    BadFunctionCount(usize),
    #[error("grouping functions must target a single node kind")]
    MixedKinds,
    #[error("knee detection needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("knee detection requires a non-increasing sequence (index {0} increases)")]
    NotDescending(usize),
}

/// Value transform applied before grouping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "arg")]
pub enum Transform {
    Identity,
    /// UTC calendar day of an epoch-seconds timestamp.
    DateOfTimestamp,
    /// Fixed-width bucket index of a numeric value.
    Bin(u64),
}

impl Transform {
    fn apply(&self, value: &AttrValue) -> Option<String> {
        match self {
            Transform::Identity => Some(match value {
                AttrValue::Text(s) => s.clone(),
                AttrValue::Int(v) => v.to_string(),
                AttrValue::Real(v) => format!("{v}"),
                AttrValue::TextList(items) => items.join(","),
            }),
            Transform::DateOfTimestamp => value.as_int().map(day_of),
            Transform::Bin(width) => {
                let width = (*width).max(1) as f64;
                value.as_real().map(|v| {
                    let bin = (v / width).floor() as i64;
                    bin.to_string()
                })
            }
        }
    }
}

/// One grouping function: a transformed attribute of a node kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupingFn {
    pub kind: NodeKind,
    pub attribute: String,
    pub transform: Transform,
}

/// One end of a pattern-mode edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternEnd {
    pub kind: NodeKind,
    pub attribute: String,
    #[serde(default = "default_transform")]
    pub transform: Transform,
}

fn default_transform() -> Transform {
    Transform::Identity
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupingSpec {
    /// Group a single node kind by one or two transformed attributes.
    Attributes(Vec<GroupingFn>),
    /// Group by a single-edge pattern `tail -[label]-> head`.
    Pattern {
        tail: PatternEnd,
        label: String,
        head: PatternEnd,
    },
}

/// A node group: the key the nodes share and the member set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeGroup {
    pub key: Vec<String>,
    pub members: BTreeSet<NodeId>,
}

/// Attribute-mode group-by: one group per distinct transformed key tuple.
/// Nodes missing any grouping attribute are excluded rather than pooled
/// into a null group.
pub fn group_by_attributes(
    g: &PropertyGraph,
    funcs: &[GroupingFn],
) -> Result<Vec<NodeGroup>, GroupingError> {
    if funcs.is_empty() || funcs.len() > 2 {
        return Err(GroupingError::BadFunctionCount(funcs.len()));
    }
    if funcs.len() == 2 && funcs[0].kind != funcs[1].kind {
        return Err(GroupingError::MixedKinds);
    }
    let kind = &funcs[0].kind;
    for f in funcs {
        let known = g
            .nodes_of_kind(kind)
            .any(|n| g.attr(n, &f.attribute).is_some());
        if !known {
            return Err(GroupingError::UnknownAttribute {
                kind: kind.label().to_string(),
                attr: f.attribute.clone(),
            });
        }
    }

    let mut groups: BTreeMap<Vec<String>, BTreeSet<NodeId>> = BTreeMap::new();
    'nodes: for node in g.nodes_of_kind(kind) {
        let mut key = Vec::with_capacity(funcs.len());
        for f in funcs {
            let Some(raw) = g.attr(node, &f.attribute) else {
                continue 'nodes;
            };
            let Some(part) = f.transform.apply(raw) else {
                continue 'nodes;
            };
            key.push(part);
        }
        groups.entry(key).or_default().insert(node);
    }
    Ok(groups
        .into_iter()
        .map(|(key, members)| NodeGroup { key, members })
        .collect())
}

/// Pattern-mode group-by: one group per realized (tail value, head value)
/// pair of the labeled edge; members are every tail and head node
/// participating in the pair. Membership may overlap.
pub fn group_by_pattern(
    g: &PropertyGraph,
    tail: &PatternEnd,
    label: &str,
    head: &PatternEnd,
) -> Result<Vec<NodeGroup>, GroupingError> {
    let mut groups: BTreeMap<Vec<String>, BTreeSet<NodeId>> = BTreeMap::new();
    let mut label_seen = false;
    for (_, e) in g.edges() {
        if e.kind.label() != label {
            continue;
        }
        label_seen = true;
        let tail_node = g.node(e.tail).expect("edge tail exists");
        let head_node = g.node(e.head).expect("edge head exists");
        if tail_node.kind != tail.kind || head_node.kind != head.kind {
            continue;
        }
        let Some(tail_raw) = tail_node.attrs.get(&tail.attribute) else {
            continue;
        };
        let Some(head_raw) = head_node.attrs.get(&head.attribute) else {
            continue;
        };
        let (Some(tk), Some(hk)) = (
            tail.transform.apply(tail_raw),
            head.transform.apply(head_raw),
        ) else {
            continue;
        };
        let entry = groups.entry(vec![tk, hk]).or_default();
        entry.insert(e.tail);
        entry.insert(e.head);
    }
    if !label_seen {
        return Err(GroupingError::UnknownLabel(label.to_string()));
    }
    Ok(groups
        .into_iter()
        .map(|(key, members)| NodeGroup { key, members })
        .collect())
}

/// Knee detection output: curvature per rank and the elbow index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KneeResult {
    pub frequencies: Vec<f64>,
    pub knee_index: usize,
    /// Frequencies at ranks before the knee.
    pub pre_elbow: Vec<f64>,
    pub curvature: Vec<f64>,
}

/// Find the maximum-curvature (elbow) point of a descending frequency
/// sequence.
///
/// Frequencies are normalized by the first (maximum) value so the result is
/// invariant to constant scaling, then discrete curvature
/// `|f''| / (1 + f'^2)^(3/2)` is evaluated with central differences over the
/// unit-spaced rank axis. Ties break toward the smallest index; boundary
/// ranks carry zero curvature.
pub fn detect_knee(frequencies: &[f64]) -> Result<KneeResult, GroupingError> {
    if frequencies.len() < 3 {
        return Err(GroupingError::TooFewPoints(frequencies.len()));
    }
    for (i, pair) in frequencies.windows(2).enumerate() {
        if pair[1] > pair[0] {
            return Err(GroupingError::NotDescending(i + 1));
        }
    }
    let scale = frequencies[0].abs().max(f64::MIN_POSITIVE);
    let f: Vec<f64> = frequencies.iter().map(|v| v / scale).collect();

    let n = f.len();
    let mut curvature = vec![0.0; n];
    for i in 1..n - 1 {
        let d1 = (f[i + 1] - f[i - 1]) / 2.0;
        let d2 = f[i + 1] - 2.0 * f[i] + f[i - 1];
        curvature[i] = d2.abs() / (1.0 + d1 * d1).powf(1.5);
    }
    let mut best = 1;
    for i in 2..n - 1 {
        if curvature[i] > curvature[best] {
            best = i;
        }
    }
    Ok(KneeResult {
        frequencies: frequencies.to_vec(),
        knee_index: best,
        pre_elbow: frequencies[..best].to_vec(),
        curvature,
    })
}

/// Descending value frequencies of an attribute over nodes of a kind.
fn value_frequencies(g: &PropertyGraph, kind: &NodeKind, attribute: &str) -> Vec<f64> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for node in g.nodes_of_kind(kind) {
        if let Some(value) = g.attr(node, attribute) {
            if let Some(key) = Transform::Identity.apply(value) {
                *counts.entry(key).or_insert(0) += 1;
            }
        }
    }
    let mut freqs: Vec<f64> = counts.values().map(|c| *c as f64).collect();
    freqs.sort_by(|a, b| b.partial_cmp(a).expect("finite counts"));
    freqs
}

/// Automatically pick an attribute grouping: the posting date is always a
/// grouping variable, joined by the non-temporal post attribute whose knee
/// has the most pre-elbow values. Falls back to date-only when no candidate
/// qualifies.
pub fn auto_generate_grouping(g: &PropertyGraph) -> GroupingSpec {
    let date_fn = GroupingFn {
        kind: NodeKind::Post,
        attribute: ATTR_CREATED_AT.to_string(),
        transform: Transform::DateOfTimestamp,
    };

    // candidate attributes: anything on post nodes except the timestamp
    let mut names: BTreeSet<String> = BTreeSet::new();
    for node in g.nodes_of_kind(&NodeKind::Post) {
        if let Some(data) = g.node(node) {
            names.extend(
                data.attrs
                    .keys()
                    .filter(|k| k.as_str() != ATTR_CREATED_AT)
                    .cloned(),
            );
        }
    }

    let mut best: Option<(usize, String)> = None;
    for name in names {
        let freqs = value_frequencies(g, &NodeKind::Post, &name);
        let Ok(knee) = detect_knee(&freqs) else { continue };
        let count = knee.pre_elbow.len();
        let better = match &best {
            None => true,
            Some((best_count, best_name)) => {
                count > *best_count || (count == *best_count && name < *best_name)
            }
        };
        if better {
            best = Some((count, name));
        }
    }

    match best {
        Some((_, attribute)) => GroupingSpec::Attributes(vec![
            date_fn,
            GroupingFn {
                kind: NodeKind::Post,
                attribute,
                transform: Transform::Identity,
            },
        ]),
        None => GroupingSpec::Attributes(vec![date_fn]),
    }
}

/// Automatically pick a pattern grouping: among realized
/// `kind -[label]-> kind` triples, take the one with the lowest edge
/// cardinality. Attributes default to the posting date for posts and `text`
/// elsewhere.
pub fn auto_generate_pattern(g: &PropertyGraph) -> Option<GroupingSpec> {
    let mut cardinality: BTreeMap<(String, String, String), u64> = BTreeMap::new();
    for (_, e) in g.edges() {
        let tk = g.node(e.tail).expect("tail exists").kind.label().to_string();
        let hk = g.node(e.head).expect("head exists").kind.label().to_string();
        *cardinality.entry((tk, e.kind.label(), hk)).or_insert(0) += 1;
    }
    let ((tail_kind, label, head_kind), _) = cardinality
        .into_iter()
        .min_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)))?;

    let end = |kind_label: &str| -> PatternEnd {
        let kind = match kind_label {
            "user" => NodeKind::User,
            "post" => NodeKind::Post,
            "hashtag" => NodeKind::Hashtag,
            "term" => NodeKind::Term,
            other => NodeKind::Resource(other.to_string()),
        };
        if kind == NodeKind::Post {
            PatternEnd {
                kind,
                attribute: ATTR_CREATED_AT.to_string(),
                transform: Transform::DateOfTimestamp,
            }
        } else {
            PatternEnd {
                kind,
                attribute: if kind_label == "user" { "user_id" } else { "text" }.to_string(),
                transform: Transform::Identity,
            }
        }
    };

    Some(GroupingSpec::Pattern {
        tail: end(&tail_kind),
        label,
        head: end(&head_kind),
    })
}

/// Evaluate a grouping spec.
pub fn group(g: &PropertyGraph, spec: &GroupingSpec) -> Result<Vec<NodeGroup>, GroupingError> {
    match spec {
        GroupingSpec::Attributes(funcs) => group_by_attributes(g, funcs),
        GroupingSpec::Pattern { tail, label, head } => group_by_pattern(g, tail, label, head),
    }
}
