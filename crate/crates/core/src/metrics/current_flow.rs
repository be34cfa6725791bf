//! Current-flow betweenness from the component Laplacian.
//!
//! Unit current enters at i and leaves at j; potentials come from the
//! grounded (reduced) Laplacian inverse. The throughput of a node for one
//! pair is half the absolute current over its incident edges, and for an
//! edge the absolute current through it.
//!
//! Summing |x_s - x_t| over all unordered pairs for a sorted vector x
//! collapses to a single weighted sum, which brings the all-pairs
//! accumulation down to O(m n log n) per component after one O(n^3)
//! inversion. Pairs with the node itself as an endpoint contribute a gross
//! throughput of exactly 1/2 each (all current leaves the source through its
//! incident edges), so endpoint exclusion is the closed-form correction
//! `(n-1)/2`.

use super::SimpleProjection;
use nalgebra::DMatrix;

/// Node current-flow betweenness, endpoints excluded from their own pairs.
/// Components of fewer than 3 nodes score zero.
pub fn current_flow_betweenness_on(p: &SimpleProjection) -> Vec<f64> {
    flow_scores(p).0
}

/// Edge current-flow betweenness: total absolute current through the edge
/// over all unordered source/sink pairs.
pub fn edge_current_flow_betweenness_on(p: &SimpleProjection) -> Vec<f64> {
    flow_scores(p).1
}

fn flow_scores(p: &SimpleProjection) -> (Vec<f64>, Vec<f64>) {
    let n = p.node_count();
    let mut node_scores = vec![0.0; n];
    let mut edge_scores = vec![0.0; p.edges.len()];

    for comp in p.components() {
        let c = comp.len();
        if c < 2 {
            continue;
        }
        let local: std::collections::BTreeMap<usize, usize> =
            comp.iter().enumerate().map(|(i, v)| (*v, i)).collect();

        // reduced Laplacian with node comp[0] grounded
        let mut reduced = DMatrix::<f64>::zeros(c - 1, c - 1);
        for (i, &v) in comp.iter().enumerate().skip(1) {
            reduced[(i - 1, i - 1)] = p.degree(v) as f64;
        }
        for (u, v) in &p.edges {
            let (Some(&lu), Some(&lv)) = (local.get(u), local.get(v)) else {
                continue;
            };
            if lu > 0 && lv > 0 {
                reduced[(lu - 1, lv - 1)] -= 1.0;
                reduced[(lv - 1, lu - 1)] -= 1.0;
            }
        }
        let inverse = match reduced.clone().cholesky() {
            Some(ch) => ch.inverse(),
            None => reduced
                .lu()
                .try_inverse()
                .expect("reduced Laplacian of a connected component is invertible"),
        };

        // potential at local node a when unit current enters at local node b
        // and exits at the ground; row/column 0 is the ground itself
        let phi = |a: usize, b: usize| -> f64 {
            if a == 0 || b == 0 {
                0.0
            } else {
                inverse[(a - 1, b - 1)]
            }
        };

        let mut acc = vec![0.0; c];
        let mut psi = vec![0.0; c];
        for (eidx, (u, v)) in p.edges.iter().enumerate() {
            let (Some(&lu), Some(&lv)) = (local.get(u), local.get(v)) else {
                continue;
            };
            for i in 0..c {
                psi[i] = phi(lu, i) - phi(lv, i);
            }
            psi.sort_by(|a, b| a.partial_cmp(b).expect("potentials are finite"));
            // sum over unordered pairs of |psi_s - psi_t| for the sorted vector
            let mut pair_sum = 0.0;
            for (k, value) in psi.iter().enumerate() {
                pair_sum += (2.0 * k as f64 - (c as f64 - 1.0)) * value;
            }
            edge_scores[eidx] = pair_sum;
            acc[lu] += pair_sum;
            acc[lv] += pair_sum;
        }

        if c >= 3 {
            for (i, &v) in comp.iter().enumerate() {
                node_scores[v] = (0.5 * acc[i] - (c as f64 - 1.0) / 2.0).max(0.0);
            }
        }
    }
    (node_scores, edge_scores)
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::from_edges;
    use super::*;

    #[test]
    fn path_middle_carries_all_current() {
        let g = from_edges(3, &[(0, 1), (1, 2)]);
        let p = SimpleProjection::from_graph(&g);
        let nc = current_flow_betweenness_on(&p);
        assert!(nc[0].abs() < 1e-10);
        assert!((nc[1] - 1.0).abs() < 1e-10);
        assert!(nc[2].abs() < 1e-10);
    }

    #[test]
    fn edge_flow_on_path() {
        let g = from_edges(3, &[(0, 1), (1, 2)]);
        let p = SimpleProjection::from_graph(&g);
        let ec = edge_current_flow_betweenness_on(&p);
        // each edge carries pairs (direct) once plus the long pair once
        for v in &ec {
            assert!((v - 2.0).abs() < 1e-10, "got {v}");
        }
    }

    #[test]
    fn parallel_paths_split_current() {
        // diamond: 0-1, 0-2, 1-3, 2-3; pair (0,3) splits half/half
        let g = from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let p = SimpleProjection::from_graph(&g);
        let nc = current_flow_betweenness_on(&p);
        for v in &nc {
            assert!(v.is_finite() && *v >= 0.0);
        }
        // symmetric positions score equally
        assert!((nc[1] - nc[2]).abs() < 1e-10);
        assert!((nc[0] - nc[3]).abs() < 1e-10);
    }

    #[test]
    fn disconnected_components_independent() {
        let g = from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]);
        let p = SimpleProjection::from_graph(&g);
        let nc = current_flow_betweenness_on(&p);
        assert!((nc[1] - 1.0).abs() < 1e-10);
        assert!((nc[4] - 1.0).abs() < 1e-10);
    }
}
