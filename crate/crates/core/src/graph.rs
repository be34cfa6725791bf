//! Typed temporal property graph storage.
//!
//! Houses the heterogeneous graph shared by every pipeline stage: node and
//! edge kinds with endpoint constraints, attribute maps, induced subgraphs,
//! connected components and a line-delimited snapshot format.
//!
//! Build phase is single-writer; once a graph is handed to the analysis
//! stages it is treated as sealed and only read.

mod snapshot;

pub use snapshot::SnapshotError;

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

/// Stable node identifier, unique within a graph and across save/load.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

/// Stable edge identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Node types of the heterogeneous network: users, posts, topic markers,
/// vocabulary terms and typed external resources.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeKind {
    User,
    Post,
    Hashtag,
    Term,
    /// External reference; the tag names the resource type (image, video,
    /// website, ...) and must be non-empty.
    Resource(String),
}

impl NodeKind {
    pub fn label(&self) -> &'static str {
        match self {
            NodeKind::User => "user",
            NodeKind::Post => "post",
            NodeKind::Hashtag => "hashtag",
            NodeKind::Term => "term",
            NodeKind::Resource(_) => "resource",
        }
    }
}

/// Edge types. Base kinds carry fixed endpoint constraints; `Computed`
/// carries a layer name (e.g. "hc", "co_mention", "umuhd") for derived
/// relationships materialized by aggregation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    /// User -> Post
    Writes,
    /// Post -> Hashtag
    Uses,
    /// Post -> User
    Mentions,
    /// Post -> Post, later post points to the earlier one
    RepostOf,
    /// Post -> Post, later post points to the earlier one
    ReplyTo,
    /// Post -> Term with a token count >= 1
    Contains(u64),
    /// Derived edge layer, identified by type name
    Computed(String),
}

impl EdgeKind {
    pub fn label(&self) -> String {
        match self {
            EdgeKind::Writes => "writes".into(),
            EdgeKind::Uses => "uses".into(),
            EdgeKind::Mentions => "mentions".into(),
            EdgeKind::RepostOf => "repost_of".into(),
            EdgeKind::ReplyTo => "reply_to".into(),
            EdgeKind::Contains(_) => "contains".into(),
            EdgeKind::Computed(name) => name.clone(),
        }
    }

    /// Kind equality ignoring payload (`Contains` counts, computed names kept).
    fn dedup_tag(&self) -> String {
        match self {
            EdgeKind::Computed(name) => format!("computed:{name}"),
            EdgeKind::Contains(_) => "contains".into(),
            other => other.label(),
        }
    }
}

/// Attribute values attached to nodes and edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrValue {
    Text(String),
    Int(i64),
    Real(f64),
    TextList(Vec<String>),
}

impl AttrValue {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            AttrValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            AttrValue::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            AttrValue::Real(v) => Some(*v),
            AttrValue::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

/// Timestamps are plain UTC epoch seconds stored as `Int`; this alias marks
/// attribute names that hold one.
pub type Timestamp = i64;

pub type AttrMap = BTreeMap<String, AttrValue>;

/// Attribute name that carries a post's creation timestamp.
pub const ATTR_CREATED_AT: &str = "created_at";

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("malformed attribute `{field}`: {reason}")]
    InvalidAttribute { field: String, reason: String },
    #[error("resource nodes require a non-empty resource_type")]
    EmptyResourceType,
    #[error("edge kind {kind} cannot connect {tail} -> {head}")]
    KindMismatch {
        kind: String,
        tail: &'static str,
        head: &'static str,
    },
    #[error("contains edges require a count >= 1")]
    ZeroContainsCount,
    #[error("{kind} edge violates temporal order: source post must be later than target")]
    TemporalOrder { kind: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeData {
    pub kind: NodeKind,
    pub attrs: AttrMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeData {
    pub tail: NodeId,
    pub head: NodeId,
    pub kind: EdgeKind,
    pub attrs: AttrMap,
}

/// Heterogeneous property multigraph.
///
/// Parallel edges are allowed only for distinct edge kinds between the same
/// endpoint pair; re-inserting an existing `(tail, head, kind)` merges the
/// attribute maps last-writer-wins, so computed-edge rebuilds are idempotent.
/// Computed edges additionally distinguish on their `day`/`hashtag`
/// attributes when present, since one user pair may carry several derived
/// edges (one per group key).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropertyGraph {
    nodes: BTreeMap<NodeId, NodeData>,
    edges: BTreeMap<EdgeId, EdgeData>,
    /// node -> incident edge ids (both directions)
    adjacency: BTreeMap<NodeId, Vec<EdgeId>>,
    /// (tail, head, kind tag, identity key) -> edge, for idempotent upserts
    edge_index: BTreeMap<(NodeId, NodeId, String, String), EdgeId>,
    next_node: u64,
    next_edge: u64,
}

impl PropertyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains_node(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeData> {
        self.nodes.get(&id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&EdgeData> {
        self.edges.get(&id)
    }

    /// Nodes in ascending id order.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &NodeData)> {
        self.nodes.iter().map(|(id, d)| (*id, d))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &EdgeData)> {
        self.edges.iter().map(|(id, d)| (*id, d))
    }

    pub fn nodes_of_kind<'a>(
        &'a self,
        kind: &'a NodeKind,
    ) -> impl Iterator<Item = NodeId> + 'a {
        self.nodes
            .iter()
            .filter(move |(_, d)| &d.kind == kind)
            .map(|(id, _)| *id)
    }

    /// Incident edge ids (in either direction), ascending.
    pub fn incident_edges(&self, id: NodeId) -> &[EdgeId] {
        self.adjacency.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Undirected neighbor set of a node, deduplicated.
    pub fn neighbors(&self, id: NodeId) -> BTreeSet<NodeId> {
        let mut out = BTreeSet::new();
        for eid in self.incident_edges(id) {
            let e = &self.edges[eid];
            let other = if e.tail == id { e.head } else { e.tail };
            if other != id {
                out.insert(other);
            }
        }
        out
    }

    pub fn attr(&self, id: NodeId, name: &str) -> Option<&AttrValue> {
        self.nodes.get(&id).and_then(|d| d.attrs.get(name))
    }

    fn validate_attrs(attrs: &AttrMap) -> Result<(), GraphError> {
        for (name, value) in attrs {
            if let AttrValue::Real(v) = value {
                if !v.is_finite() {
                    return Err(GraphError::InvalidAttribute {
                        field: name.clone(),
                        reason: "non-finite real".into(),
                    });
                }
            }
            if name == ATTR_CREATED_AT {
                match value {
                    AttrValue::Int(ts) if *ts >= 0 => {}
                    _ => {
                        return Err(GraphError::InvalidAttribute {
                            field: name.clone(),
                            reason: "timestamps must be non-negative epoch seconds".into(),
                        })
                    }
                }
            }
        }
        Ok(())
    }

    pub fn add_node(&mut self, kind: NodeKind, attrs: AttrMap) -> Result<NodeId, GraphError> {
        if let NodeKind::Resource(tag) = &kind {
            if tag.is_empty() {
                return Err(GraphError::EmptyResourceType);
            }
        }
        Self::validate_attrs(&attrs)?;
        let id = NodeId(self.next_node);
        self.next_node += 1;
        self.nodes.insert(id, NodeData { kind, attrs });
        self.adjacency.insert(id, Vec::new());
        Ok(id)
    }

    pub fn set_attr(&mut self, id: NodeId, name: &str, value: AttrValue) -> Result<(), GraphError> {
        let node = self.nodes.get_mut(&id).ok_or(GraphError::UnknownNode(id))?;
        node.attrs.insert(name.to_string(), value);
        Ok(())
    }

    fn check_endpoint_kinds(
        &self,
        tail: NodeId,
        head: NodeId,
        kind: &EdgeKind,
    ) -> Result<(), GraphError> {
        let tk = &self.nodes[&tail].kind;
        let hk = &self.nodes[&head].kind;
        let ok = match kind {
            EdgeKind::Writes => matches!(tk, NodeKind::User) && matches!(hk, NodeKind::Post),
            EdgeKind::Uses => matches!(tk, NodeKind::Post) && matches!(hk, NodeKind::Hashtag),
            EdgeKind::Mentions => matches!(tk, NodeKind::Post) && matches!(hk, NodeKind::User),
            EdgeKind::RepostOf | EdgeKind::ReplyTo => {
                matches!(tk, NodeKind::Post) && matches!(hk, NodeKind::Post)
            }
            EdgeKind::Contains(_) => matches!(tk, NodeKind::Post) && matches!(hk, NodeKind::Term),
            EdgeKind::Computed(_) => true,
        };
        if ok {
            Ok(())
        } else {
            Err(GraphError::KindMismatch {
                kind: kind.label(),
                tail: tk.label(),
                head: hk.label(),
            })
        }
    }

    /// Identity key separating parallel computed edges of the same layer.
    fn identity_key(kind: &EdgeKind, attrs: &AttrMap) -> String {
        if matches!(kind, EdgeKind::Computed(_)) {
            let day = attrs.get("day").and_then(AttrValue::as_text).unwrap_or("");
            let tag = attrs
                .get("hashtag")
                .and_then(AttrValue::as_text)
                .unwrap_or("");
            if day.is_empty() && tag.is_empty() {
                String::new()
            } else {
                format!("{day}|{tag}")
            }
        } else {
            String::new()
        }
    }

    pub fn add_edge(
        &mut self,
        tail: NodeId,
        head: NodeId,
        kind: EdgeKind,
        attrs: AttrMap,
    ) -> Result<EdgeId, GraphError> {
        if !self.nodes.contains_key(&tail) {
            return Err(GraphError::UnknownNode(tail));
        }
        if !self.nodes.contains_key(&head) {
            return Err(GraphError::UnknownNode(head));
        }
        self.check_endpoint_kinds(tail, head, &kind)?;
        if let EdgeKind::Contains(count) = kind {
            if count == 0 {
                return Err(GraphError::ZeroContainsCount);
            }
        }
        if matches!(kind, EdgeKind::RepostOf | EdgeKind::ReplyTo) {
            let ts_tail = self.attr(tail, ATTR_CREATED_AT).and_then(AttrValue::as_int);
            let ts_head = self.attr(head, ATTR_CREATED_AT).and_then(AttrValue::as_int);
            if let (Some(t), Some(h)) = (ts_tail, ts_head) {
                if t <= h {
                    return Err(GraphError::TemporalOrder { kind: kind.label() });
                }
            }
        }
        Self::validate_attrs(&attrs)?;

        let key = (tail, head, kind.dedup_tag(), Self::identity_key(&kind, &attrs));
        if let Some(existing) = self.edge_index.get(&key) {
            // Last-writer-wins merge keeps computed rebuilds idempotent.
            let id = *existing;
            let data = self.edges.get_mut(&id).expect("indexed edge exists");
            data.kind = kind;
            for (k, v) in attrs {
                data.attrs.insert(k, v);
            }
            return Ok(id);
        }

        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(
            id,
            EdgeData {
                tail,
                head,
                kind,
                attrs,
            },
        );
        self.adjacency.get_mut(&tail).expect("tail exists").push(id);
        if head != tail {
            self.adjacency.get_mut(&head).expect("head exists").push(id);
        }
        self.edge_index.insert(key, id);
        Ok(id)
    }

    /// Undirected hashtag co-occurrence and co-mention layers store one edge
    /// per unordered pair; this helper canonicalizes the endpoint order.
    pub fn add_undirected_computed(
        &mut self,
        a: NodeId,
        b: NodeId,
        layer: &str,
        attrs: AttrMap,
    ) -> Result<EdgeId, GraphError> {
        let (tail, head) = if a <= b { (a, b) } else { (b, a) };
        self.add_edge(tail, head, EdgeKind::Computed(layer.to_string()), attrs)
    }

    /// Subgraph induced by `nodes`: exactly those nodes plus every edge with
    /// both endpoints in the set. Node and edge ids are preserved.
    pub fn induced_subgraph(&self, nodes: &BTreeSet<NodeId>) -> Result<PropertyGraph, GraphError> {
        for id in nodes {
            if !self.nodes.contains_key(id) {
                return Err(GraphError::UnknownNode(*id));
            }
        }
        let mut out = PropertyGraph {
            next_node: self.next_node,
            next_edge: self.next_edge,
            ..Default::default()
        };
        for id in nodes {
            out.nodes.insert(*id, self.nodes[id].clone());
            out.adjacency.insert(*id, Vec::new());
        }
        for (eid, e) in &self.edges {
            if nodes.contains(&e.tail) && nodes.contains(&e.head) {
                out.edges.insert(*eid, e.clone());
                out.adjacency.get_mut(&e.tail).expect("tail kept").push(*eid);
                if e.head != e.tail {
                    out.adjacency.get_mut(&e.head).expect("head kept").push(*eid);
                }
                let key = (
                    e.tail,
                    e.head,
                    e.kind.dedup_tag(),
                    Self::identity_key(&e.kind, &e.attrs),
                );
                out.edge_index.insert(key, *eid);
            }
        }
        Ok(out)
    }

    /// Connected components under undirected reachability, each sorted,
    /// ordered by smallest member id.
    pub fn connected_components(&self) -> Vec<BTreeSet<NodeId>> {
        let mut seen: BTreeSet<NodeId> = BTreeSet::new();
        let mut components = Vec::new();
        for start in self.nodes.keys().copied() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for n in self.neighbors(v) {
                    if seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
            components.push(comp);
        }
        components
    }

    /// Largest connected component by node count; ties break toward the
    /// component containing the smallest node id.
    pub fn largest_component(&self) -> BTreeSet<NodeId> {
        self.connected_components()
            .into_iter()
            .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
            .unwrap_or_default()
    }

    pub fn save(&self) -> Vec<u8> {
        snapshot::save(self)
    }

    pub fn load(bytes: &[u8]) -> Result<PropertyGraph, SnapshotError> {
        snapshot::load(bytes)
    }

    /// Graphviz export for eyeballing candidate subgraphs.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{name}\" {{\n");
        for (id, data) in &self.nodes {
            let label = match data.attrs.get("text").or_else(|| data.attrs.get("post_id")) {
                Some(AttrValue::Text(t)) => format!("{}:{}", data.kind.label(), t),
                _ => format!("{}:{}", data.kind.label(), id),
            };
            out.push_str(&format!(
                "  n{} [label=\"{}\"];\n",
                id.0,
                label.replace('"', "'")
            ));
        }
        for e in self.edges.values() {
            out.push_str(&format!(
                "  n{} -- n{} [label=\"{}\"];\n",
                e.tail.0,
                e.head.0,
                e.kind.label()
            ));
        }
        out.push_str("}\n");
        out
    }

    pub(crate) fn restore(
        nodes: BTreeMap<NodeId, NodeData>,
        edges: BTreeMap<EdgeId, EdgeData>,
    ) -> PropertyGraph {
        let next_node = nodes.keys().map(|n| n.0 + 1).max().unwrap_or(0);
        let next_edge = edges.keys().map(|e| e.0 + 1).max().unwrap_or(0);
        let mut g = PropertyGraph {
            nodes,
            edges,
            adjacency: BTreeMap::new(),
            edge_index: BTreeMap::new(),
            next_node,
            next_edge,
        };
        for id in g.nodes.keys() {
            g.adjacency.insert(*id, Vec::new());
        }
        let edge_list: Vec<(EdgeId, NodeId, NodeId, String, String)> = g
            .edges
            .iter()
            .map(|(eid, e)| {
                (
                    *eid,
                    e.tail,
                    e.head,
                    e.kind.dedup_tag(),
                    Self::identity_key(&e.kind, &e.attrs),
                )
            })
            .collect();
        for (eid, tail, head, tag, ident) in edge_list {
            g.adjacency.get_mut(&tail).expect("tail exists").push(eid);
            if head != tail {
                g.adjacency.get_mut(&head).expect("head exists").push(eid);
            }
            g.edge_index.insert((tail, head, tag, ident), eid);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(s: &str) -> AttrValue {
        AttrValue::Text(s.to_string())
    }

    fn post(g: &mut PropertyGraph, ts: i64) -> NodeId {
        g.add_node(
            NodeKind::Post,
            BTreeMap::from([(ATTR_CREATED_AT.to_string(), AttrValue::Int(ts))]),
        )
        .unwrap()
    }

    #[test]
    fn add_node_round_trip() {
        let mut g = PropertyGraph::new();
        let id = g
            .add_node(NodeKind::Hashtag, BTreeMap::from([("text".into(), text("ados"))]))
            .unwrap();
        assert_eq!(g.attr(id, "text"), Some(&text("ados")));
        assert_eq!(g.node(id).unwrap().kind, NodeKind::Hashtag);
    }

    #[test]
    fn empty_resource_type_rejected() {
        let mut g = PropertyGraph::new();
        let err = g.add_node(NodeKind::Resource(String::new()), BTreeMap::new());
        assert_eq!(err.unwrap_err(), GraphError::EmptyResourceType);
    }

    #[test]
    fn bulk_insert_count() {
        let mut g = PropertyGraph::new();
        for i in 0..1398 {
            g.add_node(
                NodeKind::Hashtag,
                BTreeMap::from([("text".into(), text(&format!("h{i}")))]),
            )
            .unwrap();
        }
        assert_eq!(g.node_count(), 1398);
    }

    #[test]
    fn writes_endpoint_kinds_enforced() {
        let mut g = PropertyGraph::new();
        let u = g.add_node(NodeKind::User, BTreeMap::new()).unwrap();
        let p = post(&mut g, 10);
        assert!(g.add_edge(u, p, EdgeKind::Writes, BTreeMap::new()).is_ok());
        let err = g.add_edge(p, p, EdgeKind::Writes, BTreeMap::new());
        assert!(matches!(err, Err(GraphError::KindMismatch { .. })));
    }

    #[test]
    fn reply_to_requires_later_source() {
        let mut g = PropertyGraph::new();
        let p1 = post(&mut g, 100);
        let p2 = post(&mut g, 50);
        let err = g.add_edge(p2, p1, EdgeKind::ReplyTo, BTreeMap::new());
        assert!(matches!(err, Err(GraphError::TemporalOrder { .. })));
        // the later post may point back to the earlier one
        let p3 = post(&mut g, 200);
        assert!(g.add_edge(p3, p1, EdgeKind::ReplyTo, BTreeMap::new()).is_ok());
    }

    #[test]
    fn dangling_endpoint_rejected() {
        let mut g = PropertyGraph::new();
        let p = post(&mut g, 1);
        let err = g.add_edge(p, NodeId(999), EdgeKind::ReplyTo, BTreeMap::new());
        assert_eq!(err.unwrap_err(), GraphError::UnknownNode(NodeId(999)));
    }

    #[test]
    fn duplicate_edge_merges_attrs() {
        let mut g = PropertyGraph::new();
        let a = g.add_node(NodeKind::Hashtag, BTreeMap::new()).unwrap();
        let b = g.add_node(NodeKind::Hashtag, BTreeMap::new()).unwrap();
        let e1 = g
            .add_undirected_computed(a, b, "hc", BTreeMap::from([("count".into(), AttrValue::Int(1))]))
            .unwrap();
        let e2 = g
            .add_undirected_computed(b, a, "hc", BTreeMap::from([("count".into(), AttrValue::Int(5))]))
            .unwrap();
        assert_eq!(e1, e2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge(e1).unwrap().attrs["count"], AttrValue::Int(5));
    }

    #[test]
    fn umuhd_edges_distinguish_on_day() {
        let mut g = PropertyGraph::new();
        let u1 = g.add_node(NodeKind::User, BTreeMap::new()).unwrap();
        let u2 = g.add_node(NodeKind::User, BTreeMap::new()).unwrap();
        let mk = |day: &str| {
            BTreeMap::from([
                ("day".to_string(), text(day)),
                ("hashtag".to_string(), text("x")),
                ("mcount".to_string(), AttrValue::Int(1)),
            ])
        };
        let e1 = g
            .add_edge(u1, u2, EdgeKind::Computed("umuhd".into()), mk("2021-01-06"))
            .unwrap();
        let e2 = g
            .add_edge(u1, u2, EdgeKind::Computed("umuhd".into()), mk("2021-01-07"))
            .unwrap();
        assert_ne!(e1, e2);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn induced_subgraph_of_triangle() {
        let mut g = PropertyGraph::new();
        let a = g.add_node(NodeKind::Hashtag, BTreeMap::new()).unwrap();
        let b = g.add_node(NodeKind::Hashtag, BTreeMap::new()).unwrap();
        let c = g.add_node(NodeKind::Hashtag, BTreeMap::new()).unwrap();
        for (x, y) in [(a, b), (b, c), (a, c)] {
            g.add_undirected_computed(x, y, "hc", BTreeMap::new()).unwrap();
        }
        let sub = g.induced_subgraph(&BTreeSet::from([a, b])).unwrap();
        assert_eq!(sub.node_count(), 2);
        assert_eq!(sub.edge_count(), 1);
        // identity case
        let all: BTreeSet<_> = g.node_ids().collect();
        assert_eq!(g.induced_subgraph(&all).unwrap(), g);
    }

    #[test]
    fn induced_subgraph_unknown_node() {
        let g = PropertyGraph::new();
        let err = g.induced_subgraph(&BTreeSet::from([NodeId(7)]));
        assert_eq!(err.unwrap_err(), GraphError::UnknownNode(NodeId(7)));
    }

    #[test]
    fn components_of_triangle_plus_isolate() {
        let mut g = PropertyGraph::new();
        let a = g.add_node(NodeKind::User, BTreeMap::new()).unwrap();
        let b = g.add_node(NodeKind::User, BTreeMap::new()).unwrap();
        let c = g.add_node(NodeKind::User, BTreeMap::new()).unwrap();
        g.add_node(NodeKind::User, BTreeMap::new()).unwrap();
        for (x, y) in [(a, b), (b, c), (a, c)] {
            g.add_undirected_computed(x, y, "co_mention", BTreeMap::new())
                .unwrap();
        }
        let comps = g.connected_components();
        let mut sizes: Vec<usize> = comps.iter().map(BTreeSet::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3]);
    }

    #[test]
    fn components_empty_graph() {
        assert!(PropertyGraph::new().connected_components().is_empty());
    }
}
