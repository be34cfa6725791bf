//! Random-walk-with-restart subgraph sampling.
//!
//! Large background graphs are represented by the induced subgraphs of
//! random walks instead of being measured whole. Walks restart at their
//! start node with probability 0.15 and run until the requested number of
//! distinct nodes has been visited; results are deterministic for a fixed
//! seed.

use crate::graph::{NodeId, PropertyGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

pub const RESTART_PROBABILITY: f64 = 0.15;

#[derive(Debug, Error, PartialEq)]
pub enum SamplingError {
    #[error("no connected component has {0} nodes")]
    NoComponentLargeEnough(usize),
    #[error("target size must be positive")]
    ZeroTarget,
    #[error("random walk failed to reach {target} distinct nodes within {steps} steps")]
    WalkStalled { target: usize, steps: usize },
}

/// Draw `n_samples` induced subgraphs of `target_size` distinct nodes each,
/// grown by random walk with restart from uniformly random start nodes
/// (restricted to components large enough to satisfy the target).
pub fn sample_background(
    g: &PropertyGraph,
    target_size: usize,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<PropertyGraph>, SamplingError> {
    if target_size == 0 {
        return Err(SamplingError::ZeroTarget);
    }
    let eligible: Vec<NodeId> = g
        .connected_components()
        .into_iter()
        .filter(|comp| comp.len() >= target_size)
        .flatten()
        .collect();
    if eligible.is_empty() {
        return Err(SamplingError::NoComponentLargeEnough(target_size));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step_cap = 20_000usize.saturating_mul(target_size);
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let start = eligible[rng.gen_range(0..eligible.len())];
        let mut visited: BTreeSet<NodeId> = BTreeSet::from([start]);
        let mut current = start;
        let mut steps = 0usize;
        while visited.len() < target_size {
            steps += 1;
            if steps > step_cap {
                return Err(SamplingError::WalkStalled {
                    target: target_size,
                    steps: step_cap,
                });
            }
            if rng.gen::<f64>() < RESTART_PROBABILITY {
                current = start;
                continue;
            }
            let neighbors = g.neighbors(current);
            if neighbors.is_empty() {
                current = start;
                continue;
            }
            let pick = rng.gen_range(0..neighbors.len());
            current = *neighbors.iter().nth(pick).expect("index in range");
            visited.insert(current);
        }
        samples.push(g.induced_subgraph(&visited).expect("visited nodes exist"));
    }
    Ok(samples)
}
