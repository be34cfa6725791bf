//! Line-delimited graph snapshot format.
//!
//! One record per line, streamable and diff-able:
//!
//! ```text
//! sgscope-graph v1
//! N <id> <kind> <json-attrs>
//! E <id> <tail> <head> <kind> <json-attrs>
//! ```
//!
//! Node kinds serialize as `user|post|hashtag|term|resource:<type>`, edge
//! kinds as `writes|uses|mentions|repost_of|reply_to|contains:<count>|
//! computed:<name>`. Attribute maps are JSON objects with sorted keys, so a
//! graph always snapshots to identical bytes.

use super::{AttrMap, EdgeData, EdgeId, EdgeKind, NodeData, NodeId, NodeKind, PropertyGraph};
use std::collections::BTreeMap;
use thiserror::Error;

const HEADER: &str = "sgscope-graph v1";

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot is not valid UTF-8")]
    NotUtf8,
    #[error("unsupported snapshot header `{0}` (expected `{HEADER}`)")]
    VersionMismatch(String),
    #[error("corrupt snapshot at line {line}: {reason}")]
    Corrupt { line: usize, reason: String },
}

fn corrupt(line: usize, reason: impl Into<String>) -> SnapshotError {
    SnapshotError::Corrupt {
        line,
        reason: reason.into(),
    }
}

fn encode_node_kind(kind: &NodeKind) -> String {
    match kind {
        NodeKind::Resource(tag) => format!("resource:{tag}"),
        other => other.label().to_string(),
    }
}

fn decode_node_kind(s: &str, line: usize) -> Result<NodeKind, SnapshotError> {
    match s {
        "user" => Ok(NodeKind::User),
        "post" => Ok(NodeKind::Post),
        "hashtag" => Ok(NodeKind::Hashtag),
        "term" => Ok(NodeKind::Term),
        other => match other.strip_prefix("resource:") {
            Some(tag) if !tag.is_empty() => Ok(NodeKind::Resource(tag.to_string())),
            _ => Err(corrupt(line, format!("unknown node kind `{other}`"))),
        },
    }
}

fn encode_edge_kind(kind: &EdgeKind) -> String {
    match kind {
        EdgeKind::Contains(count) => format!("contains:{count}"),
        EdgeKind::Computed(name) => format!("computed:{name}"),
        other => other.label(),
    }
}

fn decode_edge_kind(s: &str, line: usize) -> Result<EdgeKind, SnapshotError> {
    match s {
        "writes" => Ok(EdgeKind::Writes),
        "uses" => Ok(EdgeKind::Uses),
        "mentions" => Ok(EdgeKind::Mentions),
        "repost_of" => Ok(EdgeKind::RepostOf),
        "reply_to" => Ok(EdgeKind::ReplyTo),
        other => {
            if let Some(count) = other.strip_prefix("contains:") {
                let count: u64 = count
                    .parse()
                    .map_err(|_| corrupt(line, "bad contains count"))?;
                Ok(EdgeKind::Contains(count))
            } else if let Some(name) = other.strip_prefix("computed:") {
                Ok(EdgeKind::Computed(name.to_string()))
            } else {
                Err(corrupt(line, format!("unknown edge kind `{other}`")))
            }
        }
    }
}

pub(super) fn save(g: &PropertyGraph) -> Vec<u8> {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for (id, node) in g.nodes() {
        let attrs = serde_json::to_string(&node.attrs).expect("attrs serialize");
        out.push_str(&format!(
            "N {} {} {}\n",
            id.0,
            encode_node_kind(&node.kind),
            attrs
        ));
    }
    for (id, edge) in g.edges() {
        let attrs = serde_json::to_string(&edge.attrs).expect("attrs serialize");
        out.push_str(&format!(
            "E {} {} {} {} {}\n",
            id.0,
            edge.tail.0,
            edge.head.0,
            encode_edge_kind(&edge.kind),
            attrs
        ));
    }
    out.into_bytes()
}

pub(super) fn load(bytes: &[u8]) -> Result<PropertyGraph, SnapshotError> {
    let text = std::str::from_utf8(bytes).map_err(|_| SnapshotError::NotUtf8)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| SnapshotError::VersionMismatch(String::new()))?;
    if header.trim() != HEADER {
        return Err(SnapshotError::VersionMismatch(header.to_string()));
    }

    let mut nodes: BTreeMap<NodeId, NodeData> = BTreeMap::new();
    let mut edges: BTreeMap<EdgeId, EdgeData> = BTreeMap::new();

    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(2, ' ');
        let tag = parts.next().unwrap_or("");
        let rest = parts.next().ok_or_else(|| corrupt(line_no, "truncated record"))?;
        match tag {
            "N" => {
                let mut fields = rest.splitn(3, ' ');
                let id: u64 = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| corrupt(line_no, "bad node id"))?;
                let kind = fields
                    .next()
                    .ok_or_else(|| corrupt(line_no, "missing node kind"))
                    .and_then(|s| decode_node_kind(s, line_no))?;
                let attrs: AttrMap = fields
                    .next()
                    .ok_or_else(|| corrupt(line_no, "missing node attrs"))
                    .and_then(|s| {
                        serde_json::from_str(s).map_err(|e| corrupt(line_no, e.to_string()))
                    })?;
                if nodes.insert(NodeId(id), NodeData { kind, attrs }).is_some() {
                    return Err(corrupt(line_no, format!("duplicate node id {id}")));
                }
            }
            "E" => {
                let mut fields = rest.splitn(5, ' ');
                let id: u64 = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| corrupt(line_no, "bad edge id"))?;
                let tail: u64 = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| corrupt(line_no, "bad tail id"))?;
                let head: u64 = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| corrupt(line_no, "bad head id"))?;
                let kind = fields
                    .next()
                    .ok_or_else(|| corrupt(line_no, "missing edge kind"))
                    .and_then(|s| decode_edge_kind(s, line_no))?;
                let attrs: AttrMap = fields
                    .next()
                    .ok_or_else(|| corrupt(line_no, "missing edge attrs"))
                    .and_then(|s| {
                        serde_json::from_str(s).map_err(|e| corrupt(line_no, e.to_string()))
                    })?;
                let (tail, head) = (NodeId(tail), NodeId(head));
                if !nodes.contains_key(&tail) || !nodes.contains_key(&head) {
                    return Err(corrupt(line_no, "edge references unknown node"));
                }
                if edges
                    .insert(
                        EdgeId(id),
                        EdgeData {
                            tail,
                            head,
                            kind,
                            attrs,
                        },
                    )
                    .is_some()
                {
                    return Err(corrupt(line_no, format!("duplicate edge id {id}")));
                }
            }
            other => return Err(corrupt(line_no, format!("unknown record tag `{other}`"))),
        }
    }

    Ok(PropertyGraph::restore(nodes, edges))
}

#[cfg(test)]
mod tests {
    use super::super::{AttrValue, EdgeKind, NodeKind, PropertyGraph};
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn round_trip_empty() {
        let g = PropertyGraph::new();
        let loaded = PropertyGraph::load(&g.save()).unwrap();
        assert_eq!(g, loaded);
    }

    #[test]
    fn round_trip_preserves_ids_and_attrs() {
        let mut g = PropertyGraph::new();
        let mut posts = Vec::new();
        for i in 0..1000 {
            let p = g
                .add_node(
                    NodeKind::Post,
                    BTreeMap::from([
                        ("created_at".to_string(), AttrValue::Int(1000 + i)),
                        ("text".to_string(), AttrValue::Text(format!("post {i}"))),
                    ]),
                )
                .unwrap();
            posts.push(p);
        }
        for w in posts.windows(2) {
            g.add_edge(w[1], w[0], EdgeKind::ReplyTo, BTreeMap::new())
                .unwrap();
        }
        let loaded = PropertyGraph::load(&g.save()).unwrap();
        assert_eq!(g, loaded);
        assert_eq!(loaded.node_count(), 1000);
        assert_eq!(loaded.edge_count(), 999);
    }

    #[test]
    fn truncated_payload_is_corrupt() {
        let mut g = PropertyGraph::new();
        g.add_node(NodeKind::User, BTreeMap::new()).unwrap();
        let bytes = g.save();
        let cut = &bytes[..bytes.len() - 4];
        assert!(matches!(
            PropertyGraph::load(cut),
            Err(SnapshotError::Corrupt { .. })
        ));
    }

    #[test]
    fn wrong_header_is_version_mismatch() {
        let err = PropertyGraph::load(b"sgscope-graph v9\n");
        assert!(matches!(err, Err(SnapshotError::VersionMismatch(_))));
    }
}
