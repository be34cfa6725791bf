//! Eigenvector centrality via shifted power iteration.

use super::SimpleProjection;

const TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 10_000;

/// Principal eigenvector of the adjacency matrix, per connected component,
/// entries non-negative and Euclidean-normalized within each component.
///
/// Iterates on `A + I`, which shares the Perron vector with `A` but stays
/// convergent on bipartite components; stops when the relative residual
/// `|Ax - lambda x| / max(lambda, 1)` drops below 1e-12 or after 10,000
/// rounds.
pub fn eigenvector_centrality_on(p: &SimpleProjection) -> Vec<f64> {
    let n = p.node_count();
    let mut out = vec![0.0; n];
    for comp in p.components() {
        let c = comp.len();
        if c == 1 {
            out[comp[0]] = 1.0;
            continue;
        }
        let local: std::collections::BTreeMap<usize, usize> =
            comp.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut x = vec![1.0 / (c as f64).sqrt(); c];
        let mut ax = vec![0.0; c];
        for _ in 0..MAX_ITERATIONS {
            for (i, &v) in comp.iter().enumerate() {
                let mut sum = 0.0;
                for &w in &p.adj[v] {
                    sum += x[local[&w]];
                }
                ax[i] = sum;
            }
            let lambda: f64 = x.iter().zip(&ax).map(|(xi, yi)| xi * yi).sum();
            let residual: f64 = x
                .iter()
                .zip(&ax)
                .map(|(xi, yi)| (yi - lambda * xi).powi(2))
                .sum::<f64>()
                .sqrt();
            // shifted update: y = Ax + x
            let mut norm = 0.0;
            for i in 0..c {
                ax[i] += x[i];
                norm += ax[i] * ax[i];
            }
            let norm = norm.sqrt();
            for i in 0..c {
                x[i] = ax[i] / norm;
            }
            if residual <= TOLERANCE * lambda.max(1.0) {
                break;
            }
        }
        // renormalize exactly and clamp the tiny negatives round-off can leave
        let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (i, &v) in comp.iter().enumerate() {
            out[v] = (x[i] / norm).max(0.0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::from_edges;
    use super::*;

    #[test]
    fn bipartite_component_converges() {
        // single edge: the 2-node bipartite case that plain power iteration
        // would oscillate on
        let g = from_edges(2, &[(0, 1)]);
        let p = SimpleProjection::from_graph(&g);
        let ev = eigenvector_centrality_on(&p);
        for v in ev {
            assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        }
    }

    #[test]
    fn per_component_unit_norm() {
        let g = from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]);
        let p = SimpleProjection::from_graph(&g);
        let ev = eigenvector_centrality_on(&p);
        let norm_a: f64 = ev[..3].iter().map(|v| v * v).sum::<f64>().sqrt();
        let norm_b: f64 = ev[3..].iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm_a - 1.0).abs() < 1e-9);
        assert!((norm_b - 1.0).abs() < 1e-9);
    }

    #[test]
    fn satisfies_eigen_equation() {
        let g = from_edges(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)]);
        let p = SimpleProjection::from_graph(&g);
        let x = eigenvector_centrality_on(&p);
        // lambda from the Rayleigh quotient, then check A x = lambda x
        let ax: Vec<f64> = (0..5)
            .map(|v| p.adj[v].iter().map(|&w| x[w]).sum())
            .collect();
        let lambda: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        for (xi, axi) in x.iter().zip(&ax) {
            assert!((axi - lambda * xi).abs() < 1e-10);
        }
    }
}
