//! Interestingness testing: per-metric divergence of candidates against a
//! reference graph, and the pairwise discovery scoring.
//!
//! Every candidate's metric distributions are binned against the reference
//! (the background graph itself, or pooled random-walk samples of it when it
//! is large) and reduced to one Jensen–Shannon divergence per metric. The
//! discovery pass then scores candidates pairwise: `v1` counts eigenvector
//! wins, `v2` navigability wins nested inside those, `v3` propagativeness
//! wins nested further, and `l` flags candidates whose coreness and
//! subgraph-centrality histograms lean right of the reference — dense,
//! mixed-topic subgraphs worth re-partitioning.

mod histogram;
mod sampling;

pub use histogram::{
    bin_into, compare_histograms, cut2bin, cut2bin_symmetric, equi_width_edges, jensen_shannon,
    DivergenceError, Histogram,
};
pub use sampling::{sample_background, SamplingError, RESTART_PROBABILITY};

use crate::construct::CandidateSubgraph;
use crate::graph::{AttrValue, EdgeKind, NodeId, PropertyGraph};
use crate::grouping::detect_knee;
use crate::ingest::LAYER_HC;
use crate::metrics::{Metric, MetricBundle};
use crate::query::{AnyKTerms, InterestQuery};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub const DEFAULT_N_BINS: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum DiscoverError {
    #[error("discovery needs at least 2 divergence sets, got {0}")]
    TooFewSets(usize),
    #[error("divergence sets mix references `{0}` and `{1}`")]
    MixedReferences(String, String),
    #[error("repartitioning needs a non-empty keyword list")]
    EmptyKeywords,
    #[error(transparent)]
    Divergence(#[from] DivergenceError),
}

/// Per-metric JS divergences of one candidate against the shared reference,
/// plus the histogram skewnesses backing the repartition test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceSet {
    pub candidate_id: String,
    pub reference_id: String,
    pub divergence: BTreeMap<Metric, f64>,
    pub candidate_skew: BTreeMap<Metric, f64>,
    pub reference_skew: BTreeMap<Metric, f64>,
}

impl DivergenceSet {
    pub fn get(&self, metric: Metric) -> f64 {
        self.divergence.get(&metric).copied().unwrap_or(0.0)
    }
}

/// Compare a candidate bundle against the reference bundle metric by
/// metric, binning on the reference's edges.
pub fn divergence_set(
    candidate: &MetricBundle,
    reference: &MetricBundle,
    n_bins: usize,
    candidate_id: &str,
    reference_id: &str,
) -> Result<DivergenceSet, DivergenceError> {
    let mut divergence = BTreeMap::new();
    let mut candidate_skew = BTreeMap::new();
    let mut reference_skew = BTreeMap::new();
    for metric in Metric::ALL {
        let ref_values = reference.values(metric);
        let cand_values = candidate.values(metric);
        if cand_values.is_empty() || ref_values.is_empty() {
            return Err(DivergenceError::EmptyInput);
        }
        let (ref_hist, cand_hist) = cut2bin(&ref_values, &cand_values, n_bins)?;
        divergence.insert(
            metric,
            jensen_shannon(&ref_hist.normalized, &cand_hist.normalized),
        );
        candidate_skew.insert(metric, cand_hist.skewness());
        reference_skew.insert(metric, ref_hist.skewness());
    }
    Ok(DivergenceSet {
        candidate_id: candidate_id.to_string(),
        reference_id: reference_id.to_string(),
        divergence,
        candidate_skew,
        reference_skew,
    })
}

/// Compare a candidate against a sampled reference: bin edges span the
/// pooled sample values, the reference histogram is the mean of the
/// per-sample histograms, and the candidate bins into the same edges.
pub fn divergence_set_sampled(
    candidate: &MetricBundle,
    samples: &[MetricBundle],
    n_bins: usize,
    candidate_id: &str,
    reference_id: &str,
) -> Result<DivergenceSet, DivergenceError> {
    if samples.is_empty() {
        return Err(DivergenceError::EmptyInput);
    }
    let mut divergence = BTreeMap::new();
    let mut candidate_skew = BTreeMap::new();
    let mut reference_skew = BTreeMap::new();
    for metric in Metric::ALL {
        let pooled: Vec<f64> = samples.iter().flat_map(|s| s.values(metric)).collect();
        let cand_values = candidate.values(metric);
        if pooled.is_empty() || cand_values.is_empty() {
            return Err(DivergenceError::EmptyInput);
        }
        let edges = equi_width_edges(&pooled, n_bins)?;
        let mut mean = vec![0.0; n_bins];
        let mut used = 0usize;
        for sample in samples {
            let values = sample.values(metric);
            if values.is_empty() {
                continue;
            }
            let hist = bin_into(&values, &edges);
            for (acc, w) in mean.iter_mut().zip(&hist.normalized) {
                *acc += w;
            }
            used += 1;
        }
        for w in &mut mean {
            *w /= used as f64;
        }
        let cand_hist = bin_into(&cand_values, &edges);
        divergence.insert(metric, jensen_shannon(&mean, &cand_hist.normalized));
        candidate_skew.insert(metric, cand_hist.skewness());
        reference_skew.insert(metric, Histogram::from_weights(&edges, &mean).skewness());
    }
    Ok(DivergenceSet {
        candidate_id: candidate_id.to_string(),
        reference_id: reference_id.to_string(),
        divergence,
        candidate_skew,
        reference_skew,
    })
}

impl Histogram {
    /// A histogram carrying externally averaged weights; counts are not
    /// meaningful here and stay zero.
    fn from_weights(edges: &[f64], weights: &[f64]) -> Histogram {
        Histogram {
            bin_edges: edges.to_vec(),
            counts: vec![0; weights.len()],
            normalized: weights.to_vec(),
            empty: weights.iter().sum::<f64>() <= 0.0,
        }
    }
}

/// Which reading of the discovery conditionals to apply.
///
/// The prose formulation compares the product of current-flow and
/// neighbor-degree divergences and flags repartitioning by right-skew of
/// the coreness and subgraph-centrality histograms. The literal pseudocode
/// reading compares `nc` against the other candidate's `ec` and reduces the
/// repartition test to a subgraph-centrality comparison; it is kept for
/// side-by-side runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscoverMode {
    #[default]
    Prose,
    Alg2Literal,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TopK {
    pub v1: Vec<String>,
    pub v2: Vec<String>,
    pub v3: Vec<String>,
}

/// Pairwise discovery scores and the repartition list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscoveryResult {
    pub v1: BTreeMap<String, u64>,
    pub v2: BTreeMap<String, u64>,
    pub v3: BTreeMap<String, u64>,
    pub repartition: BTreeSet<String>,
    pub top_k: TopK,
}

fn ranked(scores: &BTreeMap<String, u64>, k: usize) -> Vec<String> {
    let mut entries: Vec<(&String, &u64)> = scores.iter().collect();
    entries.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    entries
        .into_iter()
        .take(k)
        .map(|(id, _)| id.clone())
        .collect()
}

/// Score candidates pairwise against each other.
///
/// For every ordered pair of divergence sets, the second one earns a `v1`
/// point when its eigenvector divergence is strictly larger, a nested `v2`
/// point when its edge-betweenness divergence also wins, and a nested `v3`
/// point when the propagativeness condition holds as well. The repartition
/// list `l` collects candidates whose coreness and subgraph-centrality
/// histograms are right-skewed relative to the reference. `top_k` ranks
/// each vector, ties broken by candidate id.
pub fn discover(
    sets: &[DivergenceSet],
    k: usize,
    mode: DiscoverMode,
) -> Result<DiscoveryResult, DiscoverError> {
    if sets.len() < 2 {
        return Err(DiscoverError::TooFewSets(sets.len()));
    }
    for pair in sets.windows(2) {
        if pair[0].reference_id != pair[1].reference_id {
            return Err(DiscoverError::MixedReferences(
                pair[0].reference_id.clone(),
                pair[1].reference_id.clone(),
            ));
        }
    }

    let mut v1: BTreeMap<String, u64> = BTreeMap::new();
    let mut v2: BTreeMap<String, u64> = BTreeMap::new();
    let mut v3: BTreeMap<String, u64> = BTreeMap::new();
    let mut repartition: BTreeSet<String> = BTreeSet::new();
    for set in sets {
        v1.insert(set.candidate_id.clone(), 0);
        v2.insert(set.candidate_id.clone(), 0);
        v3.insert(set.candidate_id.clone(), 0);
    }

    for first in sets {
        for second in sets {
            if first.candidate_id == second.candidate_id {
                continue;
            }
            if second.get(Metric::Ev) <= first.get(Metric::Ev) {
                continue;
            }
            *v1.get_mut(&second.candidate_id).expect("keyed") += 1;
            if second.get(Metric::Ec) <= first.get(Metric::Ec) {
                continue;
            }
            *v2.get_mut(&second.candidate_id).expect("keyed") += 1;
            let propagative = match mode {
                DiscoverMode::Prose => {
                    second.get(Metric::Nc) * second.get(Metric::Z)
                        > first.get(Metric::Nc) * first.get(Metric::Z)
                }
                DiscoverMode::Alg2Literal => {
                    second.get(Metric::Nc) + second.get(Metric::Mu)
                        > first.get(Metric::Ec) + second.get(Metric::Mu)
                }
            };
            if propagative {
                *v3.get_mut(&second.candidate_id).expect("keyed") += 1;
            }
            if mode == DiscoverMode::Alg2Literal
                && second.get(Metric::Sc) + second.get(Metric::Z)
                    > first.get(Metric::Sc) + second.get(Metric::Z)
            {
                repartition.insert(second.candidate_id.clone());
            }
        }
    }

    if mode == DiscoverMode::Prose {
        for set in sets {
            let skew = |m: &BTreeMap<Metric, f64>, metric| m.get(&metric).copied().unwrap_or(0.0);
            let mu_right = skew(&set.candidate_skew, Metric::Mu)
                > skew(&set.reference_skew, Metric::Mu);
            let sc_right = skew(&set.candidate_skew, Metric::Sc)
                > skew(&set.reference_skew, Metric::Sc);
            if mu_right && sc_right {
                repartition.insert(set.candidate_id.clone());
            }
        }
    }

    let top_k = TopK {
        v1: ranked(&v1, k),
        v2: ranked(&v2, k),
        v3: ranked(&v3, k),
    };
    Ok(DiscoveryResult {
        v1,
        v2,
        v3,
        repartition,
        top_k,
    })
}

/// Follow-up queries for a repartition-flagged candidate: one query per
/// keyword subset (singletons), meant to be evaluated against the
/// candidate's own graph to re-seed discovery inside it.
pub fn repartition_plan(
    candidate: &CandidateSubgraph,
    original_terms: &[String],
) -> Result<Vec<InterestQuery>, DiscoverError> {
    if original_terms.is_empty() {
        return Err(DiscoverError::EmptyKeywords);
    }
    let _ = candidate; // scoping is the caller's evaluation target
    Ok(original_terms
        .iter()
        .map(|term| InterestQuery {
            any_k_terms: Some(AnyKTerms {
                terms: vec![term.clone()],
                k: 1,
            }),
            ..Default::default()
        })
        .collect())
}

/// Topic clusters of the hashtag co-occurrence layer: connected components
/// after dropping edges whose count falls below the knee of the descending
/// count distribution. Returns hashtag node sets, largest first.
pub fn topic_components(g: &PropertyGraph) -> Vec<BTreeSet<NodeId>> {
    let mut hc_edges: Vec<(NodeId, NodeId, f64)> = Vec::new();
    for (_, e) in g.edges() {
        if matches!(&e.kind, EdgeKind::Computed(name) if name == LAYER_HC) {
            let count = e
                .attrs
                .get("count")
                .and_then(AttrValue::as_real)
                .unwrap_or(1.0);
            hc_edges.push((e.tail, e.head, count));
        }
    }
    if hc_edges.is_empty() {
        return Vec::new();
    }
    let mut counts: Vec<f64> = hc_edges.iter().map(|(_, _, c)| *c).collect();
    counts.sort_by(|a, b| b.partial_cmp(a).expect("finite counts"));
    let cutoff = match detect_knee(&counts) {
        Ok(knee) => counts[knee.knee_index],
        Err(_) => 0.0, // too few distinct counts to find a knee; keep all
    };

    let mut adjacency: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
    for (a, b, count) in hc_edges {
        if count >= cutoff {
            adjacency.entry(a).or_default().insert(b);
            adjacency.entry(b).or_default().insert(a);
        }
    }
    let mut seen: BTreeSet<NodeId> = BTreeSet::new();
    let mut topics = Vec::new();
    for start in adjacency.keys().copied().collect::<Vec<_>>() {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = BTreeSet::from([start]);
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            for n in adjacency.get(&v).into_iter().flatten() {
                if seen.insert(*n) {
                    comp.insert(*n);
                    stack.push(*n);
                }
            }
        }
        topics.push(comp);
    }
    topics.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    topics
}

/// Per-topic navigability disparity: the JS divergence between the edge
/// betweenness of a topic's subgraph in the candidate and in the
/// background. Topics with fewer supporting candidate posts than
/// `min_post_support` are skipped.
pub fn topical_navigability(
    background: &PropertyGraph,
    candidate: &PropertyGraph,
    min_post_support: usize,
    n_bins: usize,
) -> BTreeMap<usize, f64> {
    use crate::metrics::edge_betweenness;
    let topics = topic_components(background);
    let mut out = BTreeMap::new();
    for (idx, topic) in topics.iter().enumerate() {
        let posts_in_candidate: BTreeSet<NodeId> = candidate
            .edges()
            .filter(|(_, e)| matches!(e.kind, EdgeKind::Uses) && topic.contains(&e.head))
            .map(|(_, e)| e.tail)
            .collect();
        if posts_in_candidate.len() < min_post_support {
            continue;
        }
        let restrict = |g: &PropertyGraph, posts: &BTreeSet<NodeId>| -> PropertyGraph {
            let mut nodes: BTreeSet<NodeId> =
                topic.iter().filter(|t| g.contains_node(**t)).copied().collect();
            nodes.extend(posts.iter().copied());
            g.induced_subgraph(&nodes).expect("nodes exist")
        };
        let background_posts: BTreeSet<NodeId> = background
            .edges()
            .filter(|(_, e)| matches!(e.kind, EdgeKind::Uses) && topic.contains(&e.head))
            .map(|(_, e)| e.tail)
            .collect();
        let bg_sub = restrict(background, &background_posts);
        let cand_sub = restrict(candidate, &posts_in_candidate);
        let bg_values: Vec<f64> = edge_betweenness(&bg_sub).values().copied().collect();
        let cand_values: Vec<f64> = edge_betweenness(&cand_sub).values().copied().collect();
        if let Ok(divergence) = compare_histograms(&bg_values, &cand_values, n_bins) {
            out.insert(idx, divergence);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(id: &str, ev: f64, ec: f64, nc: f64, z: f64, mu: f64, sc: f64) -> DivergenceSet {
        DivergenceSet {
            candidate_id: id.to_string(),
            reference_id: "ref".to_string(),
            divergence: BTreeMap::from([
                (Metric::Ev, ev),
                (Metric::Ec, ec),
                (Metric::Nc, nc),
                (Metric::Z, z),
                (Metric::Mu, mu),
                (Metric::Sc, sc),
            ]),
            candidate_skew: BTreeMap::new(),
            reference_skew: BTreeMap::new(),
        }
    }

    #[test]
    fn dominant_candidate_sweeps_all_vectors() {
        let weak = set("weak", 0.1, 0.1, 0.1, 0.1, 0.1, 0.1);
        let strong = set("strong", 0.9, 0.9, 0.9, 0.9, 0.9, 0.9);
        let result = discover(&[weak, strong], 2, DiscoverMode::Prose).unwrap();
        assert_eq!(result.v1["strong"], 1);
        assert_eq!(result.v2["strong"], 1);
        assert_eq!(result.v3["strong"], 1);
        assert_eq!(result.v1["weak"], 0);
        assert_eq!(result.top_k.v1[0], "strong");
    }

    #[test]
    fn identical_sets_score_zero() {
        let a = set("a", 0.5, 0.5, 0.5, 0.5, 0.5, 0.5);
        let mut b = a.clone();
        b.candidate_id = "b".to_string();
        let result = discover(&[a, b], 2, DiscoverMode::Prose).unwrap();
        assert!(result.v1.values().all(|v| *v == 0));
        assert!(result.v2.values().all(|v| *v == 0));
        assert!(result.v3.values().all(|v| *v == 0));
    }

    #[test]
    fn nesting_invariant_holds() {
        let sets = vec![
            set("a", 0.9, 0.1, 0.9, 0.9, 0.2, 0.3),
            set("b", 0.5, 0.8, 0.2, 0.1, 0.4, 0.1),
            set("c", 0.7, 0.7, 0.7, 0.7, 0.7, 0.7),
            set("d", 0.2, 0.9, 0.9, 0.9, 0.9, 0.9),
        ];
        let result = discover(&sets, 4, DiscoverMode::Prose).unwrap();
        for id in result.v1.keys() {
            assert!(result.v3[id] <= result.v2[id]);
            assert!(result.v2[id] <= result.v1[id]);
        }
    }

    #[test]
    fn input_order_does_not_matter() {
        let sets = vec![
            set("a", 0.9, 0.1, 0.9, 0.9, 0.2, 0.3),
            set("b", 0.5, 0.8, 0.2, 0.1, 0.4, 0.1),
            set("c", 0.7, 0.7, 0.7, 0.7, 0.7, 0.7),
        ];
        let forward = discover(&sets, 3, DiscoverMode::Prose).unwrap();
        let mut reversed = sets.clone();
        reversed.reverse();
        let backward = discover(&reversed, 3, DiscoverMode::Prose).unwrap();
        assert_eq!(forward.v1, backward.v1);
        assert_eq!(forward.v2, backward.v2);
        assert_eq!(forward.v3, backward.v3);
    }

    #[test]
    fn mixed_references_rejected() {
        let a = set("a", 0.1, 0.1, 0.1, 0.1, 0.1, 0.1);
        let mut b = set("b", 0.2, 0.2, 0.2, 0.2, 0.2, 0.2);
        b.reference_id = "other".to_string();
        assert!(matches!(
            discover(&[a, b], 1, DiscoverMode::Prose),
            Err(DiscoverError::MixedReferences(_, _))
        ));
    }

    #[test]
    fn k_larger_than_candidates_returns_all() {
        let a = set("a", 0.1, 0.1, 0.1, 0.1, 0.1, 0.1);
        let b = set("b", 0.2, 0.2, 0.2, 0.2, 0.2, 0.2);
        let result = discover(&[a, b], 10, DiscoverMode::Prose).unwrap();
        assert_eq!(result.top_k.v1.len(), 2);
    }

    #[test]
    fn literal_mode_reduces_to_sc_comparison_for_l() {
        // second beats first on ev and ec; sc strictly larger => flagged
        let first = set("first", 0.1, 0.1, 0.5, 0.5, 0.5, 0.2);
        let second = set("second", 0.9, 0.9, 0.9, 0.5, 0.5, 0.8);
        let result = discover(&[first, second], 2, DiscoverMode::Alg2Literal).unwrap();
        assert!(result.repartition.contains("second"));
    }

    #[test]
    fn prose_mode_flags_right_skewed_candidates() {
        let mut flagged = set("flagged", 0.5, 0.5, 0.5, 0.5, 0.5, 0.5);
        flagged.candidate_skew =
            BTreeMap::from([(Metric::Mu, 2.0), (Metric::Sc, 1.5)]);
        flagged.reference_skew =
            BTreeMap::from([(Metric::Mu, 0.5), (Metric::Sc, 0.5)]);
        let mut plain = set("plain", 0.4, 0.4, 0.4, 0.4, 0.4, 0.4);
        plain.candidate_skew = BTreeMap::from([(Metric::Mu, 0.1), (Metric::Sc, 0.9)]);
        plain.reference_skew = BTreeMap::from([(Metric::Mu, 0.5), (Metric::Sc, 0.5)]);
        let result = discover(&[flagged, plain], 2, DiscoverMode::Prose).unwrap();
        assert_eq!(result.repartition, BTreeSet::from(["flagged".to_string()]));
    }

    #[test]
    fn divergence_of_identical_bundles_is_zero() {
        use crate::metrics::{compute_metrics, test_graphs::from_edges};
        let g = from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let bundle = compute_metrics(&g).unwrap();
        let d = divergence_set(&bundle, &bundle, 10, "cand", "ref").unwrap();
        for metric in Metric::ALL {
            assert_eq!(d.get(metric), 0.0, "{}", metric.name());
        }
    }

    #[test]
    fn clique_vs_path_diverges_on_ev() {
        use crate::metrics::{compute_metrics, test_graphs::from_edges};
        let path = from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let clique = from_edges(
            5,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
            ],
        );
        let d = divergence_set(
            &compute_metrics(&clique).unwrap(),
            &compute_metrics(&path).unwrap(),
            5,
            "clique",
            "path",
        )
        .unwrap();
        assert!(d.get(Metric::Ev) > 0.0);
    }

    #[test]
    fn divergence_is_permutation_invariant() {
        use crate::metrics::{compute_metrics, test_graphs::from_edges};
        // same structure, different node insertion order
        let a = from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = from_edges(4, &[(3, 2), (2, 1), (1, 0)]);
        let reference = from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let ref_bundle = compute_metrics(&reference).unwrap();
        let da = divergence_set(&compute_metrics(&a).unwrap(), &ref_bundle, 8, "x", "r").unwrap();
        let db = divergence_set(&compute_metrics(&b).unwrap(), &ref_bundle, 8, "x", "r").unwrap();
        assert_eq!(da.divergence, db.divergence);
    }

    #[test]
    fn repartition_plan_emits_singletons() {
        use crate::construct::{CandidateSubgraph, ConstructionRule};
        let candidate = CandidateSubgraph {
            id: "c".to_string(),
            source_key: vec![],
            rule: ConstructionRule::G1,
            graph: PropertyGraph::new(),
            post_count: 0,
        };
        let queries = repartition_plan(
            &candidate,
            &["covid".to_string(), "vaccine".to_string(), "economy".to_string()],
        )
        .unwrap();
        assert_eq!(queries.len(), 3);
        for q in &queries {
            let clause = q.any_k_terms.as_ref().unwrap();
            assert_eq!(clause.k, 1);
            assert_eq!(clause.terms.len(), 1);
        }
        assert!(matches!(
            repartition_plan(&candidate, &[]),
            Err(DiscoverError::EmptyKeywords)
        ));
    }
}
