//! Corpus ingestion: post records, the base graph, conversation contexts,
//! the background graph and the computed edge layers.
//!
//! Input is a JSON-lines file with one post object per line. The builder
//! deduplicates users, hashtags, terms and resources by key, materializes the
//! base edge kinds and records (rather than fabricates) reply/repost
//! references that point outside the corpus.

use crate::graph::{
    AttrMap, AttrValue, EdgeKind, GraphError, NodeId, NodeKind, PropertyGraph, ATTR_CREATED_AT,
};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

pub const LAYER_HC: &str = "hc";
pub const LAYER_CO_MENTION: &str = "co_mention";
pub const LAYER_UMUHD: &str = "umuhd";
pub const LAYER_REFERENCES: &str = "references";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("post record missing required field `{0}`")]
    MissingField(&'static str),
    #[error("post record field `{field}` is malformed: {reason}")]
    BadField { field: &'static str, reason: String },
    #[error("record is not a JSON object: {0}")]
    NotJson(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("node {0} is not a post")]
    NotAPost(NodeId),
    #[error("empty universe of discourse")]
    EmptyUniverse,
}

/// One social-media post, normalized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostRecord {
    pub post_id: String,
    pub author_id: String,
    #[serde(default)]
    pub author_profile: String,
    /// UTC epoch seconds.
    pub created_at: i64,
    #[serde(default)]
    pub text: String,
    /// Lowercase, no leading '#', deduplicated preserving first occurrence.
    #[serde(default)]
    pub hashtags: Vec<String>,
    /// Mentioned user ids, deduplicated.
    #[serde(default)]
    pub mentions: Vec<String>,
    #[serde(default)]
    pub urls: Vec<String>,
    #[serde(default)]
    pub reply_to_id: Option<String>,
    #[serde(default)]
    pub repost_of_id: Option<String>,
    #[serde(default)]
    pub favorite_count: u64,
    #[serde(default)]
    pub repost_count: u64,
}

fn dedup_preserving(values: Vec<String>) -> Vec<String> {
    let mut seen = BTreeSet::new();
    values
        .into_iter()
        .filter(|v| !v.is_empty() && seen.insert(v.clone()))
        .collect()
}

fn normalize_hashtag(raw: &str) -> String {
    raw.trim_start_matches('#').to_lowercase()
}

/// Unicode-aware lowercase word tokenization; stopwords are kept, filtering
/// is a query-time concern.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() || ch == '_' || ch == '#' || ch == '@' {
            if ch != '#' && ch != '@' {
                current.extend(ch.to_lowercase());
            }
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Parse one JSON-lines record into a normalized [`PostRecord`].
pub fn parse_post_record(line: &[u8]) -> Result<PostRecord, IngestError> {
    let value: serde_json::Value = serde_json::from_slice(line)
        .map_err(|e| IngestError::NotJson(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| IngestError::NotJson("expected an object".into()))?;

    let req_str = |field: &'static str| -> Result<String, IngestError> {
        match obj.get(field) {
            Some(serde_json::Value::String(s)) if !s.is_empty() => Ok(s.clone()),
            Some(serde_json::Value::String(_)) => Err(IngestError::BadField {
                field,
                reason: "empty".into(),
            }),
            Some(_) => Err(IngestError::BadField {
                field,
                reason: "expected a string".into(),
            }),
            None => Err(IngestError::MissingField(field)),
        }
    };

    let post_id = req_str("post_id")?;
    let author_id = req_str("author_id")?;
    let created_raw = req_str("created_at")?;
    let created_at = DateTime::parse_from_rfc3339(&created_raw)
        .map_err(|e| IngestError::BadField {
            field: "created_at",
            reason: e.to_string(),
        })?
        .with_timezone(&Utc)
        .timestamp();
    if created_at < 0 {
        return Err(IngestError::BadField {
            field: "created_at",
            reason: "before the epoch".into(),
        });
    }

    let str_list = |field: &'static str| -> Vec<String> {
        obj.get(field)
            .and_then(|v| v.as_array())
            .map(|a| {
                a.iter()
                    .filter_map(|v| v.as_str().map(str::to_string))
                    .collect()
            })
            .unwrap_or_default()
    };
    let opt_str = |field: &str| -> Option<String> {
        obj.get(field)
            .and_then(|v| v.as_str())
            .filter(|s| !s.is_empty())
            .map(str::to_string)
    };
    let count = |field: &str| -> u64 { obj.get(field).and_then(|v| v.as_u64()).unwrap_or(0) };

    Ok(PostRecord {
        post_id,
        author_id,
        author_profile: opt_str("author_profile").unwrap_or_default(),
        created_at,
        text: opt_str("text").unwrap_or_default(),
        hashtags: dedup_preserving(
            str_list("hashtags")
                .iter()
                .map(|h| normalize_hashtag(h))
                .collect(),
        ),
        mentions: dedup_preserving(str_list("mentions")),
        urls: dedup_preserving(str_list("urls")),
        reply_to_id: opt_str("reply_to_id"),
        repost_of_id: opt_str("repost_of_id"),
        favorite_count: count("favorite_count"),
        repost_count: count("repost_count"),
    })
}

/// Source of a dangling reply/repost reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DanglingReference {
    pub post_id: String,
    pub kind: String,
    pub target_id: String,
}

/// Outcome of [`build_base_graph`]: the graph plus id lookup tables and the
/// references that could not be resolved within the corpus.
#[derive(Debug, Clone)]
pub struct IngestReport {
    pub graph: PropertyGraph,
    pub post_ids: BTreeMap<String, NodeId>,
    pub user_ids: BTreeMap<String, NodeId>,
    pub hashtag_ids: BTreeMap<String, NodeId>,
    pub dangling: Vec<DanglingReference>,
    /// reply/repost edges skipped because the source is not later than the
    /// target; real stream samples occasionally contain these
    pub temporal_violations: Vec<DanglingReference>,
}

fn resource_type(url: &str) -> &'static str {
    let lower = url.to_lowercase();
    let path = lower.split('?').next().unwrap_or("");
    if [".jpg", ".jpeg", ".png", ".gif", ".webp"]
        .iter()
        .any(|ext| path.ends_with(ext))
    {
        "image"
    } else if [".mp4", ".mov", ".avi", ".webm"]
        .iter()
        .any(|ext| path.ends_with(ext))
    {
        "video"
    } else {
        "website"
    }
}

/// Build the base graph from a record stream: one post node per record,
/// deduplicated user/hashtag/term/resource nodes, and the base edge kinds.
pub fn build_base_graph<I>(records: I) -> Result<IngestReport, IngestError>
where
    I: IntoIterator<Item = PostRecord>,
{
    let mut g = PropertyGraph::new();
    let mut post_ids: BTreeMap<String, NodeId> = BTreeMap::new();
    let mut user_ids: BTreeMap<String, NodeId> = BTreeMap::new();
    let mut hashtag_ids: BTreeMap<String, NodeId> = BTreeMap::new();
    let mut term_ids: BTreeMap<String, NodeId> = BTreeMap::new();
    let mut resource_ids: BTreeMap<String, NodeId> = BTreeMap::new();
    let mut pending: Vec<(NodeId, PostRecord)> = Vec::new();

    fn user_node(
        g: &mut PropertyGraph,
        user_ids: &mut BTreeMap<String, NodeId>,
        id: &str,
    ) -> Result<NodeId, IngestError> {
        if let Some(n) = user_ids.get(id) {
            return Ok(*n);
        }
        let n = g.add_node(
            NodeKind::User,
            AttrMap::from([("user_id".to_string(), AttrValue::Text(id.to_string()))]),
        )?;
        user_ids.insert(id.to_string(), n);
        Ok(n)
    }

    for record in records {
        let post = g.add_node(
            NodeKind::Post,
            AttrMap::from([
                ("post_id".to_string(), AttrValue::Text(record.post_id.clone())),
                (ATTR_CREATED_AT.to_string(), AttrValue::Int(record.created_at)),
                ("text".to_string(), AttrValue::Text(record.text.clone())),
                (
                    "favorite_count".to_string(),
                    AttrValue::Int(record.favorite_count as i64),
                ),
                (
                    "repost_count".to_string(),
                    AttrValue::Int(record.repost_count as i64),
                ),
            ]),
        )?;
        post_ids.insert(record.post_id.clone(), post);

        let author = user_node(&mut g, &mut user_ids, &record.author_id)?;
        if !record.author_profile.is_empty() {
            g.set_attr(
                author,
                "profile",
                AttrValue::Text(record.author_profile.clone()),
            )?;
        }
        g.add_edge(author, post, EdgeKind::Writes, AttrMap::new())?;

        for tag in &record.hashtags {
            let h = match hashtag_ids.get(tag) {
                Some(h) => *h,
                None => {
                    let h = g.add_node(
                        NodeKind::Hashtag,
                        AttrMap::from([("text".to_string(), AttrValue::Text(tag.clone()))]),
                    )?;
                    hashtag_ids.insert(tag.clone(), h);
                    h
                }
            };
            g.add_edge(post, h, EdgeKind::Uses, AttrMap::new())?;
        }

        for mentioned in &record.mentions {
            let u = user_node(&mut g, &mut user_ids, mentioned)?;
            g.add_edge(post, u, EdgeKind::Mentions, AttrMap::new())?;
        }

        for url in &record.urls {
            let r = match resource_ids.get(url) {
                Some(r) => *r,
                None => {
                    let r = g.add_node(
                        NodeKind::Resource(resource_type(url).to_string()),
                        AttrMap::from([("url".to_string(), AttrValue::Text(url.clone()))]),
                    )?;
                    resource_ids.insert(url.clone(), r);
                    r
                }
            };
            g.add_edge(
                post,
                r,
                EdgeKind::Computed(LAYER_REFERENCES.to_string()),
                AttrMap::new(),
            )?;
        }

        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for token in tokenize(&record.text) {
            *counts.entry(token).or_insert(0) += 1;
        }
        for (token, count) in counts {
            let t = match term_ids.get(&token) {
                Some(t) => *t,
                None => {
                    let t = g.add_node(
                        NodeKind::Term,
                        AttrMap::from([("text".to_string(), AttrValue::Text(token.clone()))]),
                    )?;
                    term_ids.insert(token.clone(), t);
                    t
                }
            };
            g.add_edge(post, t, EdgeKind::Contains(count), AttrMap::new())?;
        }

        pending.push((post, record));
    }

    // Reply/repost edges resolve in a second pass; targets may appear later
    // in the stream than the posts that reference them.
    let mut dangling = Vec::new();
    let mut temporal_violations = Vec::new();
    for (post, record) in &pending {
        for (target, kind, label) in [
            (&record.reply_to_id, EdgeKind::ReplyTo, "reply_to"),
            (&record.repost_of_id, EdgeKind::RepostOf, "repost_of"),
        ] {
            let Some(target_id) = target else { continue };
            match post_ids.get(target_id) {
                Some(target_node) => {
                    match g.add_edge(*post, *target_node, kind, AttrMap::new()) {
                        Ok(_) => {}
                        Err(GraphError::TemporalOrder { .. }) => {
                            temporal_violations.push(DanglingReference {
                                post_id: record.post_id.clone(),
                                kind: label.to_string(),
                                target_id: target_id.clone(),
                            });
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                None => dangling.push(DanglingReference {
                    post_id: record.post_id.clone(),
                    kind: label.to_string(),
                    target_id: target_id.clone(),
                }),
            }
        }
    }

    Ok(IngestReport {
        graph: g,
        post_ids,
        user_ids,
        hashtag_ids,
        dangling,
        temporal_violations,
    })
}

fn require_post(g: &PropertyGraph, p: NodeId) -> Result<(), IngestError> {
    match g.node(p) {
        Some(node) if node.kind == NodeKind::Post => Ok(()),
        Some(_) => Err(IngestError::NotAPost(p)),
        None => Err(GraphError::UnknownNode(p).into()),
    }
}

/// Node kinds admitted to a semantic neighborhood: users, hashtags, posts
/// and vocabulary terms.
fn in_neighborhood_kinds(kind: &NodeKind) -> bool {
    matches!(
        kind,
        NodeKind::User | NodeKind::Hashtag | NodeKind::Post | NodeKind::Term
    )
}

/// Node set of the semantic neighborhood of `p`: the post plus every
/// directly related user, hashtag, post and term.
pub fn semantic_neighborhood_nodes(
    g: &PropertyGraph,
    p: NodeId,
) -> Result<BTreeSet<NodeId>, IngestError> {
    require_post(g, p)?;
    let mut nodes = BTreeSet::from([p]);
    for n in g.neighbors(p) {
        if in_neighborhood_kinds(&g.node(n).expect("neighbor exists").kind) {
            nodes.insert(n);
        }
    }
    Ok(nodes)
}

/// The star of `p`: its semantic neighborhood with only the edges that
/// connect `p` to the neighborhood.
pub fn semantic_neighborhood(g: &PropertyGraph, p: NodeId) -> Result<PropertyGraph, IngestError> {
    let nodes = semantic_neighborhood_nodes(g, p)?;
    let induced = g.induced_subgraph(&nodes)?;
    // Keep the star shape: drop edges that do not touch p.
    let keep: BTreeMap<_, _> = induced
        .edges()
        .filter(|(_, e)| e.tail == p || e.head == p)
        .map(|(id, e)| (id, e.clone()))
        .collect();
    let nodes_map: BTreeMap<_, _> = induced.nodes().map(|(id, d)| (id, d.clone())).collect();
    Ok(PropertyGraph::restore(nodes_map, keep))
}

/// A post's conversation: the reply/repost closure plus the semantic
/// neighborhoods of the closure, induced.
#[derive(Debug, Clone)]
pub struct ConversationContext {
    pub seed_post: NodeId,
    /// P1: posts reachable to/from the seed along reply/repost edges.
    pub closure_posts: BTreeSet<NodeId>,
    pub members: BTreeSet<NodeId>,
    pub graph: PropertyGraph,
}

/// Posts reachable from `p` along repost/reply edges, walking both
/// directions, including `p` itself.
pub fn post_closure(g: &PropertyGraph, p: NodeId) -> Result<BTreeSet<NodeId>, IngestError> {
    require_post(g, p)?;
    let mut seen = BTreeSet::from([p]);
    let mut queue = VecDeque::from([p]);
    while let Some(v) = queue.pop_front() {
        for eid in g.incident_edges(v) {
            let e = g.edge(*eid).expect("edge exists");
            if !matches!(e.kind, EdgeKind::RepostOf | EdgeKind::ReplyTo) {
                continue;
            }
            let other = if e.tail == v { e.head } else { e.tail };
            if seen.insert(other) {
                queue.push_back(other);
            }
        }
    }
    Ok(seen)
}

pub fn conversation_context(
    g: &PropertyGraph,
    p: NodeId,
) -> Result<ConversationContext, IngestError> {
    let closure = post_closure(g, p)?;
    let mut members = BTreeSet::new();
    for post in &closure {
        members.extend(semantic_neighborhood_nodes(g, *post)?);
    }
    let graph = g.induced_subgraph(&members)?;
    Ok(ConversationContext {
        seed_post: p,
        closure_posts: closure,
        members,
        graph,
    })
}

/// The background graph: the merger of the conversation contexts of every
/// post in `p0`, together with the computed edges induced on the merged
/// node set.
pub fn build_background_graph(
    g: &PropertyGraph,
    p0: &BTreeSet<NodeId>,
) -> Result<PropertyGraph, IngestError> {
    if p0.is_empty() {
        return Err(IngestError::EmptyUniverse);
    }
    let mut members = BTreeSet::new();
    for p in p0 {
        let closure = post_closure(g, *p)?;
        for post in &closure {
            members.extend(semantic_neighborhood_nodes(g, *post)?);
        }
    }
    Ok(g.induced_subgraph(&members)?)
}

/// A derived edge produced by aggregation over base edges.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputedEdge {
    pub layer: String,
    pub tail: NodeId,
    pub head: NodeId,
    pub attrs: AttrMap,
}

fn require_posts(g: &PropertyGraph, posts: &BTreeSet<NodeId>) -> Result<(), IngestError> {
    for p in posts {
        require_post(g, *p)?;
    }
    Ok(())
}

fn undirected_pair_counts(
    g: &PropertyGraph,
    posts: &BTreeSet<NodeId>,
    is_wanted_edge: impl Fn(&EdgeKind) -> bool,
) -> Result<BTreeMap<(NodeId, NodeId), u64>, IngestError> {
    require_posts(g, posts)?;
    let mut counts: BTreeMap<(NodeId, NodeId), u64> = BTreeMap::new();
    for p in posts {
        let mut targets: Vec<NodeId> = g
            .incident_edges(*p)
            .iter()
            .filter_map(|eid| {
                let e = g.edge(*eid).expect("edge exists");
                (e.tail == *p && is_wanted_edge(&e.kind)).then_some(e.head)
            })
            .collect();
        targets.sort_unstable();
        targets.dedup();
        for i in 0..targets.len() {
            for j in (i + 1)..targets.len() {
                *counts.entry((targets[i], targets[j])).or_insert(0) += 1;
            }
        }
    }
    Ok(counts)
}

/// Hashtag co-occurrence: one undirected edge per unordered hashtag pair
/// appearing together in at least one of the given posts, with the number
/// of co-occurring posts as `count`.
pub fn build_hashtag_cooccurrence(
    g: &PropertyGraph,
    posts: &BTreeSet<NodeId>,
) -> Result<Vec<ComputedEdge>, IngestError> {
    let counts = undirected_pair_counts(g, posts, |k| matches!(k, EdgeKind::Uses))?;
    Ok(counts
        .into_iter()
        .map(|((a, b), count)| ComputedEdge {
            layer: LAYER_HC.to_string(),
            tail: a,
            head: b,
            attrs: AttrMap::from([("count".to_string(), AttrValue::Int(count as i64))]),
        })
        .collect())
}

/// User co-mention: analogous to hashtag co-occurrence over the users
/// mentioned jointly by a post.
pub fn build_user_comention(
    g: &PropertyGraph,
    posts: &BTreeSet<NodeId>,
) -> Result<Vec<ComputedEdge>, IngestError> {
    let counts = undirected_pair_counts(g, posts, |k| matches!(k, EdgeKind::Mentions))?;
    Ok(counts
        .into_iter()
        .map(|((a, b), count)| ComputedEdge {
            layer: LAYER_CO_MENTION.to_string(),
            tail: a,
            head: b,
            attrs: AttrMap::from([("count".to_string(), AttrValue::Int(count as i64))]),
        })
        .collect())
}

/// UTC calendar day of an epoch timestamp, as `YYYY-MM-DD`.
pub fn day_of(ts: i64) -> String {
    DateTime::<Utc>::from_timestamp(ts, 0)
        .map(|dt| dt.format("%Y-%m-%d").to_string())
        .unwrap_or_else(|| "invalid".to_string())
}

/// Directed user-mentions-user edges grouped by (author, mentioned user,
/// hashtag, day); `mcount` counts the qualifying posts. Hashtag and day are
/// edge properties, not nodes.
pub fn build_umuhd(
    g: &PropertyGraph,
    posts: &BTreeSet<NodeId>,
) -> Result<Vec<ComputedEdge>, IngestError> {
    require_posts(g, posts)?;
    let mut counts: BTreeMap<(NodeId, NodeId, String, String), u64> = BTreeMap::new();
    for p in posts {
        let ts = g
            .attr(*p, ATTR_CREATED_AT)
            .and_then(AttrValue::as_int)
            .unwrap_or(0);
        let day = day_of(ts);
        let mut author = None;
        let mut mentioned = Vec::new();
        let mut hashtags = Vec::new();
        for eid in g.incident_edges(*p) {
            let e = g.edge(*eid).expect("edge exists");
            match &e.kind {
                EdgeKind::Writes if e.head == *p => author = Some(e.tail),
                EdgeKind::Mentions if e.tail == *p => mentioned.push(e.head),
                EdgeKind::Uses if e.tail == *p => {
                    if let Some(text) = g.attr(e.head, "text").and_then(AttrValue::as_text) {
                        hashtags.push(text.to_string());
                    }
                }
                _ => {}
            }
        }
        let Some(author) = author else { continue };
        mentioned.sort_unstable();
        mentioned.dedup();
        hashtags.sort();
        hashtags.dedup();
        for user in &mentioned {
            for tag in &hashtags {
                *counts
                    .entry((author, *user, tag.clone(), day.clone()))
                    .or_insert(0) += 1;
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|((author, user, tag, day), mcount)| ComputedEdge {
            layer: LAYER_UMUHD.to_string(),
            tail: author,
            head: user,
            attrs: AttrMap::from([
                ("day".to_string(), AttrValue::Text(day)),
                ("hashtag".to_string(), AttrValue::Text(tag)),
                ("mcount".to_string(), AttrValue::Int(mcount as i64)),
            ]),
        })
        .collect())
}

/// Insert a computed edge set into the graph; HC and co-mention layers are
/// stored undirected with canonical endpoint order, UMUHD stays directed.
pub fn apply_computed_edges(
    g: &mut PropertyGraph,
    edges: &[ComputedEdge],
) -> Result<(), IngestError> {
    for edge in edges {
        if edge.layer == LAYER_UMUHD {
            g.add_edge(
                edge.tail,
                edge.head,
                EdgeKind::Computed(edge.layer.clone()),
                edge.attrs.clone(),
            )?;
        } else {
            g.add_undirected_computed(edge.tail, edge.head, &edge.layer, edge.attrs.clone())?;
        }
    }
    Ok(())
}

/// Summary statistics of one computed layer, for dataset parity checks.
/// Self-loops are counted from raw value pairs (a post tagging the same
/// hashtag twice) but never materialized as edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStats {
    pub layer: String,
    pub unique_nodes: usize,
    pub unique_edges: usize,
    pub self_loops: usize,
    pub density: f64,
    pub avg_degree: f64,
}

/// Statistics of an undirected computed layer within `g`, plus the raw
/// self-loop count recomputed from unnormalized record values.
pub fn layer_stats(g: &PropertyGraph, layer: &str, raw_values: &[Vec<String>]) -> LayerStats {
    let mut nodes = BTreeSet::new();
    let mut edge_count = 0usize;
    for (_, e) in g.edges() {
        if matches!(&e.kind, EdgeKind::Computed(name) if name == layer) {
            nodes.insert(e.tail);
            nodes.insert(e.head);
            edge_count += 1;
        }
    }
    let mut self_loops = 0usize;
    for values in raw_values {
        let mut sorted = values.clone();
        sorted.sort();
        self_loops += sorted.windows(2).filter(|w| w[0] == w[1]).count();
    }
    let n = nodes.len();
    let density = if n > 1 {
        2.0 * edge_count as f64 / (n as f64 * (n as f64 - 1.0))
    } else {
        0.0
    };
    let avg_degree = if n > 0 {
        2.0 * edge_count as f64 / n as f64
    } else {
        0.0
    };
    LayerStats {
        layer: layer.to_string(),
        unique_nodes: n,
        unique_edges: edge_count,
        self_loops,
        density,
        avg_degree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, author: &str, ts: &str) -> serde_json::Value {
        serde_json::json!({
            "post_id": id, "author_id": author, "created_at": ts, "text": "hello world",
        })
    }

    #[test]
    fn parse_minimal_record() {
        let line = record("p1", "u1", "2021-01-06T09:00:00Z");
        let rec = parse_post_record(line.to_string().as_bytes()).unwrap();
        assert_eq!(rec.post_id, "p1");
        assert_eq!(rec.created_at, 1609923600);
        assert!(rec.hashtags.is_empty());
        assert!(rec.mentions.is_empty());
        assert_eq!(rec.favorite_count, 0);
    }

    #[test]
    fn parse_normalizes_and_dedups_hashtags() {
        let mut line = record("p1", "u1", "2021-01-06T09:00:00Z");
        line["hashtags"] = serde_json::json!(["#ADOS", "Ados"]);
        let rec = parse_post_record(line.to_string().as_bytes()).unwrap();
        assert_eq!(rec.hashtags, vec!["ados"]);
    }

    #[test]
    fn parse_missing_created_at_names_field() {
        let line = serde_json::json!({"post_id": "p1", "author_id": "u1"});
        let err = parse_post_record(line.to_string().as_bytes()).unwrap_err();
        assert!(matches!(err, IngestError::MissingField("created_at")));
    }

    fn rec(
        id: &str,
        author: &str,
        ts: &str,
        tags: &[&str],
        mentions: &[&str],
        reply: Option<&str>,
    ) -> PostRecord {
        let mut v = record(id, author, ts);
        v["hashtags"] = serde_json::json!(tags);
        v["mentions"] = serde_json::json!(mentions);
        if let Some(r) = reply {
            v["reply_to_id"] = serde_json::json!(r);
        }
        parse_post_record(v.to_string().as_bytes()).unwrap()
    }

    #[test]
    fn base_graph_single_post() {
        let report = build_base_graph(vec![rec(
            "p1",
            "u1",
            "2021-01-06T09:00:00Z",
            &["a", "b"],
            &[],
            None,
        )])
        .unwrap();
        let g = &report.graph;
        let posts = g.nodes_of_kind(&NodeKind::Post).count();
        let users = g.nodes_of_kind(&NodeKind::User).count();
        let tags = g.nodes_of_kind(&NodeKind::Hashtag).count();
        assert_eq!((posts, users, tags), (1, 1, 2));
        let uses = g
            .edges()
            .filter(|(_, e)| matches!(e.kind, EdgeKind::Uses))
            .count();
        let writes = g
            .edges()
            .filter(|(_, e)| matches!(e.kind, EdgeKind::Writes))
            .count();
        assert_eq!((writes, uses), (1, 2));
    }

    #[test]
    fn repost_edge_points_to_earlier_post() {
        let mut v1 = record("p1", "u1", "2021-01-06T09:00:00Z");
        v1["text"] = serde_json::json!("original");
        let mut v2 = record("p2", "u2", "2021-01-06T10:00:00Z");
        v2["repost_of_id"] = serde_json::json!("p1");
        let report = build_base_graph(vec![
            parse_post_record(v1.to_string().as_bytes()).unwrap(),
            parse_post_record(v2.to_string().as_bytes()).unwrap(),
        ])
        .unwrap();
        let g = &report.graph;
        let repost: Vec<_> = g
            .edges()
            .filter(|(_, e)| matches!(e.kind, EdgeKind::RepostOf))
            .collect();
        assert_eq!(repost.len(), 1);
        assert_eq!(repost[0].1.tail, report.post_ids["p2"]);
        assert_eq!(repost[0].1.head, report.post_ids["p1"]);
    }

    #[test]
    fn dangling_reply_is_logged_not_edged() {
        let report = build_base_graph(vec![rec(
            "p1",
            "u1",
            "2021-01-06T09:00:00Z",
            &[],
            &[],
            Some("missing"),
        )])
        .unwrap();
        assert_eq!(report.dangling.len(), 1);
        assert_eq!(report.dangling[0].target_id, "missing");
        let replies = report
            .graph
            .edges()
            .filter(|(_, e)| matches!(e.kind, EdgeKind::ReplyTo))
            .count();
        assert_eq!(replies, 0);
    }

    #[test]
    fn neighborhood_of_post_without_text() {
        let mut v = record("p1", "u1", "2021-01-06T09:00:00Z");
        v["text"] = serde_json::json!("");
        let report =
            build_base_graph(vec![parse_post_record(v.to_string().as_bytes()).unwrap()]).unwrap();
        let p = report.post_ids["p1"];
        // the author is still directly related
        let n = semantic_neighborhood(&report.graph, p).unwrap();
        assert_eq!(n.node_count(), 2);
        assert_eq!(n.edge_count(), 1);
    }

    #[test]
    fn neighborhood_is_star_shaped() {
        let report = build_base_graph(vec![rec(
            "p1",
            "u1",
            "2021-01-06T09:00:00Z",
            &["x"],
            &["u2"],
            None,
        )])
        .unwrap();
        let p = report.post_ids["p1"];
        let n = semantic_neighborhood(&report.graph, p).unwrap();
        // p + author + hashtag + mentioned user + terms("hello","world")
        assert_eq!(n.node_count(), 6);
        assert!(n.edges().all(|(_, e)| e.tail == p || e.head == p));
    }

    #[test]
    fn neighborhood_requires_post() {
        let report =
            build_base_graph(vec![rec("p1", "u1", "2021-01-06T09:00:00Z", &[], &[], None)])
                .unwrap();
        let u = report.user_ids["u1"];
        assert!(matches!(
            semantic_neighborhood(&report.graph, u),
            Err(IngestError::NotAPost(_))
        ));
    }

    #[test]
    fn closure_walks_both_directions() {
        let report = build_base_graph(vec![
            rec("p1", "u1", "2021-01-06T09:00:00Z", &[], &[], None),
            rec("p2", "u2", "2021-01-06T10:00:00Z", &[], &[], Some("p1")),
            rec("p3", "u3", "2021-01-06T11:00:00Z", &[], &[], Some("p2")),
        ])
        .unwrap();
        let seed = report.post_ids["p2"];
        let closure = post_closure(&report.graph, seed).unwrap();
        let expected: BTreeSet<_> = ["p1", "p2", "p3"]
            .iter()
            .map(|id| report.post_ids[*id])
            .collect();
        assert_eq!(closure, expected);
    }

    #[test]
    fn context_of_isolated_post_equals_neighborhood() {
        let report = build_base_graph(vec![rec(
            "p1",
            "u1",
            "2021-01-06T09:00:00Z",
            &["x"],
            &[],
            None,
        )])
        .unwrap();
        let p = report.post_ids["p1"];
        let ctx = conversation_context(&report.graph, p).unwrap();
        let n = semantic_neighborhood_nodes(&report.graph, p).unwrap();
        assert_eq!(ctx.members, n);
    }

    #[test]
    fn background_union_is_idempotent() {
        let report = build_base_graph(vec![
            rec("p1", "u1", "2021-01-06T09:00:00Z", &[], &[], None),
            rec("p2", "u2", "2021-01-06T10:00:00Z", &[], &[], Some("p1")),
        ])
        .unwrap();
        let p1 = report.post_ids["p1"];
        let p2 = report.post_ids["p2"];
        let solo = build_background_graph(&report.graph, &BTreeSet::from([p1])).unwrap();
        let both = build_background_graph(&report.graph, &BTreeSet::from([p1, p2])).unwrap();
        let a: BTreeSet<_> = solo.node_ids().collect();
        let b: BTreeSet<_> = both.node_ids().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn background_rejects_empty_universe() {
        let report =
            build_base_graph(vec![rec("p1", "u1", "2021-01-06T09:00:00Z", &[], &[], None)])
                .unwrap();
        assert!(matches!(
            build_background_graph(&report.graph, &BTreeSet::new()),
            Err(IngestError::EmptyUniverse)
        ));
    }

    #[test]
    fn hc_of_three_tags() {
        let report = build_base_graph(vec![rec(
            "p1",
            "u1",
            "2021-01-06T09:00:00Z",
            &["a", "b", "c"],
            &[],
            None,
        )])
        .unwrap();
        let posts: BTreeSet<_> = report.post_ids.values().copied().collect();
        let edges = build_hashtag_cooccurrence(&report.graph, &posts).unwrap();
        assert_eq!(edges.len(), 3);
        assert!(edges
            .iter()
            .all(|e| e.attrs["count"] == AttrValue::Int(1) && e.tail < e.head));
    }

    #[test]
    fn hc_counts_shared_pairs() {
        let report = build_base_graph(vec![
            rec("p1", "u1", "2021-01-06T09:00:00Z", &["a", "b"], &[], None),
            rec("p2", "u2", "2021-01-06T10:00:00Z", &["a", "b"], &[], None),
        ])
        .unwrap();
        let posts: BTreeSet<_> = report.post_ids.values().copied().collect();
        let edges = build_hashtag_cooccurrence(&report.graph, &posts).unwrap();
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].attrs["count"], AttrValue::Int(2));
    }

    #[test]
    fn comention_needs_two_mentions() {
        let report = build_base_graph(vec![
            rec("p1", "u1", "2021-01-06T09:00:00Z", &[], &["m1", "m2"], None),
            rec("p2", "u2", "2021-01-06T10:00:00Z", &[], &["m1"], None),
        ])
        .unwrap();
        let posts: BTreeSet<_> = report.post_ids.values().copied().collect();
        let edges = build_user_comention(&report.graph, &posts).unwrap();
        assert_eq!(edges.len(), 1);
    }

    #[test]
    fn umuhd_groups_by_day() {
        let mut v1 = record("p1", "u1", "2021-01-06T09:00:00Z");
        v1["hashtags"] = serde_json::json!(["h"]);
        v1["mentions"] = serde_json::json!(["u2"]);
        let mut v2 = record("p2", "u1", "2021-01-07T09:00:00Z");
        v2["hashtags"] = serde_json::json!(["h"]);
        v2["mentions"] = serde_json::json!(["u2"]);
        let report = build_base_graph(vec![
            parse_post_record(v1.to_string().as_bytes()).unwrap(),
            parse_post_record(v2.to_string().as_bytes()).unwrap(),
        ])
        .unwrap();
        let posts: BTreeSet<_> = report.post_ids.values().copied().collect();
        let edges = build_umuhd(&report.graph, &posts).unwrap();
        assert_eq!(edges.len(), 2);
        let days: BTreeSet<_> = edges
            .iter()
            .map(|e| e.attrs["day"].as_text().unwrap().to_string())
            .collect();
        assert_eq!(
            days,
            BTreeSet::from(["2021-01-06".to_string(), "2021-01-07".to_string()])
        );
        assert!(edges.iter().all(|e| e.attrs["mcount"] == AttrValue::Int(1)));
    }

    #[test]
    fn tokenize_lowercases_and_splits() {
        assert_eq!(
            tokenize("Hello, World! #ADOS @user"),
            vec!["hello", "world", "ados", "user"]
        );
    }
}
