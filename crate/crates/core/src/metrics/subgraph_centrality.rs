//! Subgraph centrality: the diagonal of the adjacency matrix exponential.

use super::SimpleProjection;
use nalgebra::{DMatrix, SymmetricEigen};

/// Components larger than this fall back to the truncated power series.
pub const DEFAULT_SPECTRAL_BUDGET: usize = 4000;

/// Series depth of the fallback path; the dropped tail is bounded by
/// `sum_{k>K} lambda_max^k / k! <= lambda_max^(K+1) / (K+1)! * 1/(1 - r)`
/// with `r = lambda_max / (K+2)`, negligible whenever `lambda_max` is well
/// below the cutoff.
const SERIES_TERMS: usize = 40;

/// `sc(i) = sum_k (A^k)_ii / k! = sum_j v_j(i)^2 e^(lambda_j)` per
/// component, via symmetric eigendecomposition for components within the
/// spectral budget and the truncated series beyond it.
pub fn subgraph_centrality_on(p: &SimpleProjection, spectral_budget: usize) -> Vec<f64> {
    let n = p.node_count();
    let mut out = vec![0.0; n];
    for comp in p.components() {
        let c = comp.len();
        if c == 1 {
            out[comp[0]] = 1.0; // only the k=0 walk
            continue;
        }
        if c <= spectral_budget {
            spectral_component(p, &comp, &mut out);
        } else {
            series_component(p, &comp, &mut out);
        }
    }
    out
}

fn spectral_component(p: &SimpleProjection, comp: &[usize], out: &mut [f64]) {
    let c = comp.len();
    let local: std::collections::BTreeMap<usize, usize> =
        comp.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut a = DMatrix::<f64>::zeros(c, c);
    for (i, &v) in comp.iter().enumerate() {
        for &w in &p.adj[v] {
            a[(i, local[&w])] = 1.0;
        }
    }
    let eigen = SymmetricEigen::new(a);
    for (i, &v) in comp.iter().enumerate() {
        let mut sc = 0.0;
        for j in 0..c {
            let coeff = eigen.eigenvectors[(i, j)];
            sc += coeff * coeff * eigen.eigenvalues[j].exp();
        }
        out[v] = sc;
    }
}

fn series_component(p: &SimpleProjection, comp: &[usize], out: &mut [f64]) {
    let c = comp.len();
    let local: std::collections::BTreeMap<usize, usize> =
        comp.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    // diag(A^k) for all k <= K via one matvec chain per basis vector
    for (i, &v) in comp.iter().enumerate() {
        let mut vec = vec![0.0f64; c];
        vec[i] = 1.0;
        let mut sc = 1.0; // k = 0
        let mut factorial = 1.0;
        let mut current = vec.clone();
        for k in 1..=SERIES_TERMS {
            factorial *= k as f64;
            let mut next = vec![0.0f64; c];
            for (a, &node) in comp.iter().enumerate() {
                let mut sum = 0.0;
                for &w in &p.adj[node] {
                    sum += current[local[&w]];
                }
                next[a] = sum;
            }
            sc += next[i] / factorial;
            current = next;
        }
        out[v] = sc;
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::from_edges;
    use super::*;

    #[test]
    fn spectral_and_series_agree() {
        let g = from_edges(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 6), (6, 7), (7, 4)],
        );
        let p = SimpleProjection::from_graph(&g);
        let spectral = subgraph_centrality_on(&p, DEFAULT_SPECTRAL_BUDGET);
        let series = subgraph_centrality_on(&p, 1); // force the fallback
        for (a, b) in spectral.iter().zip(&series) {
            assert!((a - b).abs() < 1e-9, "spectral {a} vs series {b}");
        }
    }

    #[test]
    fn pair_of_nodes() {
        // single edge: eigenvalues +1/-1, sc = (e + 1/e) / 2 = cosh(1)
        let g = from_edges(2, &[(0, 1)]);
        let p = SimpleProjection::from_graph(&g);
        let sc = subgraph_centrality_on(&p, DEFAULT_SPECTRAL_BUDGET);
        for v in sc {
            assert!((v - 1f64.cosh()).abs() < 1e-12);
        }
    }
}
