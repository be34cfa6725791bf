//! Core–periphery validation of discovered subgraphs.
//!
//! The core is the maximum-coreness shell; the profile contrasts its
//! internal density with the periphery's and with the density of the edges
//! crossing between them. Candidates are judged against the same profile
//! averaged over random-walk samples of the background graph.

use crate::graph::{NodeId, PropertyGraph};
use crate::interestingness::{sample_background, SamplingError};
use crate::metrics::{core_numbers_on, SimpleProjection};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ValidateError {
    #[error("core-periphery profiling needs at least 3 nodes, got {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
}

/// Density contrast between the maximum-coreness shell and the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorePeripheryProfile {
    pub core: BTreeSet<NodeId>,
    pub periphery: BTreeSet<NodeId>,
    pub max_coreness: i64,
    pub core_density: f64,
    pub periphery_density: f64,
    pub cross_density: f64,
    /// `core_density / periphery_density`; infinite when the periphery has
    /// no internal edges.
    pub density_ratio: f64,
    /// Every node sits in one shell; the contrast is meaningless then.
    pub degenerate_single_shell: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<BaselineSummary>,
}

/// Mean profile over random-walk samples of the background.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSummary {
    pub n_samples: usize,
    pub core_density_mean: f64,
    pub periphery_density_mean: f64,
    pub cross_density_mean: f64,
    /// Mean and standard deviation over samples with a finite ratio.
    pub ratio_mean: f64,
    pub ratio_std: f64,
    pub finite_ratio_samples: usize,
}

fn pair_density(edges_inside: usize, n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        2.0 * edges_inside as f64 / (n as f64 * (n as f64 - 1.0))
    }
}

/// Profile a graph without a baseline.
pub fn core_periphery_profile(g: &PropertyGraph) -> Result<CorePeripheryProfile, ValidateError> {
    if g.node_count() < 3 {
        return Err(ValidateError::TooSmall(g.node_count()));
    }
    let projection = SimpleProjection::from_graph(g);
    let cores = core_numbers_on(&projection);
    let max_core = cores.iter().copied().max().unwrap_or(0);

    let core: BTreeSet<NodeId> = projection
        .node_ids
        .iter()
        .zip(&cores)
        .filter(|(_, c)| **c == max_core)
        .map(|(id, _)| *id)
        .collect();
    let periphery: BTreeSet<NodeId> = projection
        .node_ids
        .iter()
        .filter(|id| !core.contains(id))
        .copied()
        .collect();

    let mut core_edges = 0usize;
    let mut periphery_edges = 0usize;
    let mut cross_edges = 0usize;
    for (u, v) in &projection.edges {
        let a = core.contains(&projection.node_ids[*u]);
        let b = core.contains(&projection.node_ids[*v]);
        match (a, b) {
            (true, true) => core_edges += 1,
            (false, false) => periphery_edges += 1,
            _ => cross_edges += 1,
        }
    }

    let core_density = pair_density(core_edges, core.len());
    let periphery_density = pair_density(periphery_edges, periphery.len());
    let cross_density = if core.is_empty() || periphery.is_empty() {
        0.0
    } else {
        cross_edges as f64 / (core.len() as f64 * periphery.len() as f64)
    };
    let density_ratio = if periphery_density > 0.0 {
        core_density / periphery_density
    } else {
        f64::INFINITY
    };

    Ok(CorePeripheryProfile {
        degenerate_single_shell: periphery.is_empty(),
        max_coreness: max_core as i64,
        core,
        periphery,
        core_density,
        periphery_density,
        cross_density,
        density_ratio,
        baseline: None,
    })
}

/// Profile a candidate and attach the baseline from `n_samples` random-walk
/// samples of the background, each of the candidate's size.
pub fn compare_to_baseline(
    g: &PropertyGraph,
    background: &PropertyGraph,
    n_samples: usize,
    seed: u64,
) -> Result<CorePeripheryProfile, ValidateError> {
    let mut profile = core_periphery_profile(g)?;
    let samples = sample_background(background, g.node_count(), n_samples, seed)?;

    let mut core_densities = Vec::new();
    let mut periphery_densities = Vec::new();
    let mut cross_densities = Vec::new();
    let mut ratios = Vec::new();
    for sample in &samples {
        let p = core_periphery_profile(sample)?;
        core_densities.push(p.core_density);
        periphery_densities.push(p.periphery_density);
        cross_densities.push(p.cross_density);
        if p.density_ratio.is_finite() {
            ratios.push(p.density_ratio);
        }
    }
    let mean = |v: &[f64]| {
        if v.is_empty() {
            0.0
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };
    let ratio_mean = mean(&ratios);
    let ratio_std = if ratios.len() > 1 {
        (ratios
            .iter()
            .map(|r| (r - ratio_mean).powi(2))
            .sum::<f64>()
            / (ratios.len() - 1) as f64)
            .sqrt()
    } else {
        0.0
    };

    profile.baseline = Some(BaselineSummary {
        n_samples,
        core_density_mean: mean(&core_densities),
        periphery_density_mean: mean(&periphery_densities),
        cross_density_mean: mean(&cross_densities),
        ratio_mean,
        ratio_std,
        finite_ratio_samples: ratios.len(),
    });
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{AttrMap, NodeKind};
    use crate::metrics::test_graphs::from_edges;

    #[test]
    fn clique_is_all_core() {
        let g = from_edges(
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
        let profile = core_periphery_profile(&g).unwrap();
        assert_eq!(profile.core.len(), 5);
        assert!(profile.periphery.is_empty());
        assert_eq!(profile.core_density, 1.0);
        assert!(profile.degenerate_single_shell);
    }

    #[test]
    fn star_is_degenerate_single_shell() {
        let g = from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let profile = core_periphery_profile(&g).unwrap();
        assert_eq!(profile.max_coreness, 1);
        assert!(profile.degenerate_single_shell);
    }

    #[test]
    fn too_small_rejected() {
        let g = from_edges(2, &[(0, 1)]);
        assert_eq!(
            core_periphery_profile(&g).unwrap_err(),
            ValidateError::TooSmall(2)
        );
    }

    #[test]
    fn densities_match_direct_counts() {
        // triangle core (coreness 2) with a pendant chain 0-3-4 (coreness 1)
        let g = from_edges(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (3, 4)]);
        let profile = core_periphery_profile(&g).unwrap();
        assert_eq!(profile.max_coreness, 2);
        assert_eq!(profile.core.len(), 3);
        assert_eq!(profile.core_density, 1.0);
        assert_eq!(profile.periphery_density, 1.0); // single 3-4 edge over one pair
        assert!((profile.cross_density - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(profile.density_ratio, 1.0);
    }

    /// Planted model: a dense core of `c` nodes plus sparse periphery.
    fn planted_core(c: usize, periphery: usize) -> (PropertyGraph, BTreeSet<NodeId>) {
        let mut g = PropertyGraph::new();
        let ids: Vec<NodeId> = (0..c + periphery)
            .map(|_| g.add_node(NodeKind::User, AttrMap::new()).unwrap())
            .collect();
        // clique on the first c nodes
        for i in 0..c {
            for j in (i + 1)..c {
                g.add_undirected_computed(ids[i], ids[j], "co_mention", AttrMap::new())
                    .unwrap();
            }
        }
        // each periphery node hangs off two core nodes
        for (offset, p) in (c..c + periphery).enumerate() {
            g.add_undirected_computed(ids[p], ids[offset % c], "co_mention", AttrMap::new())
                .unwrap();
            g.add_undirected_computed(ids[p], ids[(offset + 1) % c], "co_mention", AttrMap::new())
                .unwrap();
        }
        (g, ids[..c].iter().copied().collect())
    }

    #[test]
    fn planted_core_is_recovered() {
        let (g, truth) = planted_core(8, 30);
        let profile = core_periphery_profile(&g).unwrap();
        let overlap = profile.core.intersection(&truth).count();
        assert!(
            overlap as f64 >= 0.9 * truth.len() as f64,
            "recovered {overlap} of {}",
            truth.len()
        );
    }

    #[test]
    fn self_sample_sits_within_baseline_spread() {
        let (g, _) = planted_core(10, 80);
        // candidate drawn from the background itself
        let candidate = sample_background(&g, 30, 1, 5).unwrap().remove(0);
        let profile = compare_to_baseline(&candidate, &g, 8, 11).unwrap();
        let baseline = profile.baseline.as_ref().unwrap();
        if profile.density_ratio.is_finite() && baseline.finite_ratio_samples >= 2 {
            let spread = 3.0 * baseline.ratio_std.max(1e-9);
            assert!(
                (profile.density_ratio - baseline.ratio_mean).abs() <= spread.max(baseline.ratio_mean * 3.0),
                "ratio {} vs mean {} ± {}",
                profile.density_ratio,
                baseline.ratio_mean,
                spread
            );
        }
    }

    #[test]
    fn deterministic_baseline_for_fixed_seed() {
        let (g, _) = planted_core(8, 40);
        let candidate = sample_background(&g, 20, 1, 3).unwrap().remove(0);
        let a = compare_to_baseline(&candidate, &g, 1, 42).unwrap();
        let b = compare_to_baseline(&candidate, &g, 1, 42).unwrap();
        assert_eq!(a, b);
    }
}
