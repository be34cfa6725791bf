//! User interest queries over an ingested corpus.
//!
//! A query is a JSON document mirroring [`InterestQuery`]; clauses combine
//! conjunctively. Evaluation produces the initial post set P0 from which the
//! background graph is built, and follow-up queries narrow an existing
//! background graph.

use crate::graph::{AttrValue, EdgeKind, NodeId, NodeKind, PropertyGraph, ATTR_CREATED_AT};
use crate::ingest::{self, tokenize, IngestError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("invalid query: {0}")]
    Invalid(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
}

/// "Contains any k of these terms" clause.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnyKTerms {
    pub terms: Vec<String>,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DateRange {
    /// UTC epoch seconds, inclusive.
    pub start: i64,
    pub end: i64,
}

/// "Authors with at least n posts containing the term" clause.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinTermCount {
    pub term: String,
    pub n: usize,
}

/// Hashtag seed expansion over the co-occurrence layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashtagSeeds {
    pub tags: Vec<String>,
    pub hops: usize,
}

/// A user interest specification. All present clauses must hold
/// conjunctively; at least one content clause is required (a bare date
/// range selects nothing by itself).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InterestQuery {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub any_k_terms: Option<AnyKTerms>,
    /// Every listed term must appear with edit distance <= 1,
    /// case-insensitively.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuzzy_terms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date_range: Option<DateRange>,
    /// Every listed string must appear in the author profile (substring,
    /// case-insensitive).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_contains: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_term_count: Option<MinTermCount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hashtag_seeds: Option<HashtagSeeds>,
}

impl InterestQuery {
    pub fn validate(&self) -> Result<(), QueryError> {
        let has_content = self.any_k_terms.is_some()
            || self.fuzzy_terms.is_some()
            || self.profile_contains.is_some()
            || self.min_term_count.is_some()
            || self.hashtag_seeds.is_some();
        if !has_content {
            return Err(QueryError::Invalid(
                "query needs at least one content clause".into(),
            ));
        }
        if let Some(clause) = &self.any_k_terms {
            if clause.k == 0 || clause.k > clause.terms.len() {
                return Err(QueryError::Invalid(format!(
                    "any_k_terms requires 1 <= k <= {}, got {}",
                    clause.terms.len(),
                    clause.k
                )));
            }
        }
        if let Some(range) = &self.date_range {
            if range.start > range.end {
                return Err(QueryError::Invalid("date_range start after end".into()));
            }
        }
        if let Some(clause) = &self.min_term_count {
            if clause.n == 0 || clause.term.is_empty() {
                return Err(QueryError::Invalid(
                    "min_term_count requires a term and n >= 1".into(),
                ));
            }
        }
        if let Some(seeds) = &self.hashtag_seeds {
            if seeds.tags.is_empty() {
                return Err(QueryError::Invalid("hashtag_seeds needs tags".into()));
            }
        }
        Ok(())
    }
}

/// Bounded Levenshtein distance: true when `a` and `b` are within edit
/// distance 1 (insert, delete or substitute).
pub fn within_edit_distance_one(a: &str, b: &str) -> bool {
    if a == b {
        return true;
    }
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let (short, long) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
    match long.len() - short.len() {
        0 => {
            // exactly one substitution allowed
            short
                .iter()
                .zip(long.iter())
                .filter(|(x, y)| x != y)
                .count()
                == 1
        }
        1 => {
            // one insertion into the shorter string
            let mut i = 0;
            let mut j = 0;
            let mut skipped = false;
            while i < short.len() && j < long.len() {
                if short[i] == long[j] {
                    i += 1;
                    j += 1;
                } else if skipped {
                    return false;
                } else {
                    skipped = true;
                    j += 1;
                }
            }
            true
        }
        _ => false,
    }
}

struct PostView<'g> {
    tokens: BTreeSet<String>,
    created_at: i64,
    author: Option<NodeId>,
    hashtags: BTreeSet<NodeId>,
    graph: &'g PropertyGraph,
}

fn post_view<'g>(g: &'g PropertyGraph, p: NodeId) -> PostView<'g> {
    let text = g.attr(p, "text").and_then(AttrValue::as_text).unwrap_or("");
    let created_at = g
        .attr(p, ATTR_CREATED_AT)
        .and_then(AttrValue::as_int)
        .unwrap_or(0);
    let mut author = None;
    let mut hashtags = BTreeSet::new();
    for eid in g.incident_edges(p) {
        let e = g.edge(*eid).expect("edge exists");
        match &e.kind {
            EdgeKind::Writes if e.head == p => author = Some(e.tail),
            EdgeKind::Uses if e.tail == p => {
                hashtags.insert(e.head);
            }
            _ => {}
        }
    }
    PostView {
        tokens: tokenize(text).into_iter().collect(),
        created_at,
        author,
        hashtags,
        graph: g,
    }
}

impl PostView<'_> {
    fn author_profile(&self) -> String {
        self.author
            .and_then(|a| self.graph.attr(a, "profile"))
            .and_then(AttrValue::as_text)
            .unwrap_or("")
            .to_lowercase()
    }
}

/// Hashtag nodes reachable from the seed tags in at most `hops` steps of
/// the hashtag co-occurrence layer; the seeds themselves are included.
fn expand_hashtag_seeds(g: &PropertyGraph, seeds: &HashtagSeeds) -> BTreeSet<NodeId> {
    let wanted: BTreeSet<String> = seeds
        .tags
        .iter()
        .map(|t| t.trim_start_matches('#').to_lowercase())
        .collect();
    let mut frontier: VecDeque<(NodeId, usize)> = VecDeque::new();
    let mut reached: BTreeSet<NodeId> = BTreeSet::new();
    for h in g.nodes_of_kind(&NodeKind::Hashtag) {
        let text = g.attr(h, "text").and_then(AttrValue::as_text).unwrap_or("");
        if wanted.contains(text) {
            reached.insert(h);
            frontier.push_back((h, 0));
        }
    }
    while let Some((node, depth)) = frontier.pop_front() {
        if depth >= seeds.hops {
            continue;
        }
        for eid in g.incident_edges(node) {
            let e = g.edge(*eid).expect("edge exists");
            if !matches!(&e.kind, EdgeKind::Computed(name) if name == ingest::LAYER_HC) {
                continue;
            }
            let other = if e.tail == node { e.head } else { e.tail };
            if reached.insert(other) {
                frontier.push_back((other, depth + 1));
            }
        }
    }
    reached
}

/// Evaluate an interest query: the initial post set P0 of all posts
/// satisfying every present clause.
pub fn evaluate_interest_query(
    g: &PropertyGraph,
    q: &InterestQuery,
) -> Result<BTreeSet<NodeId>, QueryError> {
    q.validate()?;

    let posts: Vec<NodeId> = g.nodes_of_kind(&NodeKind::Post).collect();
    let views: BTreeMap<NodeId, PostView> =
        posts.iter().map(|p| (*p, post_view(g, *p))).collect();

    // author-level clause: authors with >= n posts containing the term
    let qualified_authors: Option<BTreeSet<NodeId>> = q.min_term_count.as_ref().map(|clause| {
        let term = clause.term.to_lowercase();
        let mut counts: BTreeMap<NodeId, usize> = BTreeMap::new();
        for view in views.values() {
            if view.tokens.contains(&term) {
                if let Some(author) = view.author {
                    *counts.entry(author).or_insert(0) += 1;
                }
            }
        }
        counts
            .into_iter()
            .filter(|(_, c)| *c >= clause.n)
            .map(|(a, _)| a)
            .collect()
    });

    let seeded_hashtags: Option<BTreeSet<NodeId>> =
        q.hashtag_seeds.as_ref().map(|s| expand_hashtag_seeds(g, s));

    let mut result = BTreeSet::new();
    'posts: for (p, view) in &views {
        if let Some(range) = &q.date_range {
            if view.created_at < range.start || view.created_at > range.end {
                continue;
            }
        }
        if let Some(clause) = &q.any_k_terms {
            let hits = clause
                .terms
                .iter()
                .filter(|t| view.tokens.contains(&t.to_lowercase()))
                .count();
            if hits < clause.k {
                continue;
            }
        }
        if let Some(terms) = &q.fuzzy_terms {
            for term in terms {
                let term = term.to_lowercase();
                let hit = view
                    .tokens
                    .iter()
                    .any(|token| within_edit_distance_one(token, &term));
                if !hit {
                    continue 'posts;
                }
            }
        }
        if let Some(needles) = &q.profile_contains {
            let profile = view.author_profile();
            if !needles
                .iter()
                .all(|needle| profile.contains(&needle.to_lowercase()))
            {
                continue;
            }
        }
        if let Some(authors) = &qualified_authors {
            match view.author {
                Some(a) if authors.contains(&a) => {}
                _ => continue,
            }
        }
        if let Some(tags) = &seeded_hashtags {
            if view.hashtags.is_disjoint(tags) {
                continue;
            }
        }
        result.insert(*p);
    }
    Ok(result)
}

/// Narrow a background graph with a follow-up query: rebuild the background
/// from the posts of `g0` matching `q`.
pub fn narrow(g0: &PropertyGraph, q: &InterestQuery) -> Result<PropertyGraph, QueryError> {
    let matching = evaluate_interest_query(g0, q)?;
    Ok(ingest::build_background_graph(g0, &matching)?)
}
