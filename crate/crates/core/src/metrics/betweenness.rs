//! Edge betweenness centrality, unweighted (BFS) and inverse-weight
//! (Dijkstra) variants.

use super::SimpleProjection;
use std::collections::{BinaryHeap, VecDeque};

/// Edge betweenness over unordered node pairs:
/// `C_eb(k) = sum_{i<j} alpha_ij(k) / alpha_ij`, unnormalized.
///
/// One shortest-path DAG per source with dependency back-propagation; each
/// unordered pair is visited from both endpoints, so accumulated scores
/// halve at the end.
pub fn edge_betweenness_on(p: &SimpleProjection) -> Vec<f64> {
    let n = p.node_count();
    let m = p.edges.len();
    let edge_index = index_edges(p);
    let mut scores = vec![0.0; m];

    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stack: Vec<usize> = Vec::with_capacity(n);

    for s in 0..n {
        sigma.fill(0.0);
        dist.fill(-1);
        delta.fill(0.0);
        for list in &mut preds {
            list.clear();
        }
        stack.clear();

        sigma[s] = 1.0;
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &p.adj[v] {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }

        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                let contribution = sigma[v] / sigma[w] * (1.0 + delta[w]);
                let e = edge_index[&key(v, w)];
                scores[e] += contribution;
                delta[v] += contribution;
            }
        }
    }

    for s in &mut scores {
        *s /= 2.0;
    }
    scores
}

/// Edge betweenness with edge length `1 / weight`, so heavily co-occurring
/// pairs lie on shorter paths.
pub fn weighted_edge_betweenness_on(p: &SimpleProjection) -> Vec<f64> {
    let n = p.node_count();
    let m = p.edges.len();
    let edge_index = index_edges(p);
    let lengths: Vec<f64> = p
        .weights
        .iter()
        .map(|w| if *w > 0.0 { 1.0 / w } else { 1.0 })
        .collect();
    let mut scores = vec![0.0; m];

    for s in 0..n {
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![f64::INFINITY; n];
        let mut delta = vec![0.0f64; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut settled_order: Vec<usize> = Vec::new();
        let mut settled = vec![false; n];

        sigma[s] = 1.0;
        dist[s] = 0.0;
        let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::from([HeapEntry {
            dist: 0.0,
            node: s,
        }]);
        while let Some(HeapEntry { dist: d, node: v }) = heap.pop() {
            if settled[v] {
                continue;
            }
            settled[v] = true;
            settled_order.push(v);
            for &w in &p.adj[v] {
                let e = edge_index[&key(v, w)];
                let candidate = d + lengths[e];
                if candidate < dist[w] - 1e-14 {
                    dist[w] = candidate;
                    sigma[w] = sigma[v];
                    preds[w] = vec![v];
                    heap.push(HeapEntry {
                        dist: candidate,
                        node: w,
                    });
                } else if (candidate - dist[w]).abs() <= 1e-14 && !settled[w] {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }

        while let Some(w) = settled_order.pop() {
            for &v in &preds[w] {
                let contribution = sigma[v] / sigma[w] * (1.0 + delta[w]);
                scores[edge_index[&key(v, w)]] += contribution;
                delta[v] += contribution;
            }
        }
    }

    for s in &mut scores {
        *s /= 2.0;
    }
    scores
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn index_edges(p: &SimpleProjection) -> std::collections::BTreeMap<(usize, usize), usize> {
    p.edges
        .iter()
        .enumerate()
        .map(|(i, e)| (*e, i))
        .collect()
}

struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // min-heap on distance, ties by node for determinism
        other
            .dist
            .partial_cmp(&self.dist)
            .expect("distances are finite")
            .then_with(|| other.node.cmp(&self.node))
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::from_edges;
    use super::*;

    #[test]
    fn square_is_symmetric() {
        let g = from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let p = SimpleProjection::from_graph(&g);
        let scores = edge_betweenness_on(&p);
        for s in &scores {
            assert!((s - scores[0]).abs() < 1e-12);
        }
        // every pair contributes 1 split over paths; total over edges equals
        // the sum of pairwise distances: 4 pairs at distance 1, 2 at distance 2
        let total: f64 = scores.iter().sum();
        assert!((total - 8.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_prefers_heavy_edges() {
        use crate::graph::{AttrMap, AttrValue, NodeKind, PropertyGraph};
        // two routes 0->1: direct light edge (count 1) vs heavy two-hop
        // (counts 10); inverse-weight lengths make the detour shorter
        let mut g = PropertyGraph::new();
        let ids: Vec<_> = (0..3)
            .map(|_| g.add_node(NodeKind::Hashtag, AttrMap::new()).unwrap())
            .collect();
        let heavy = AttrMap::from([("count".to_string(), AttrValue::Int(10))]);
        let light = AttrMap::from([("count".to_string(), AttrValue::Int(1))]);
        g.add_undirected_computed(ids[0], ids[1], "hc", light).unwrap();
        g.add_undirected_computed(ids[0], ids[2], "hc", heavy.clone()).unwrap();
        g.add_undirected_computed(ids[2], ids[1], "hc", heavy).unwrap();
        let p = SimpleProjection::from_graph(&g);
        let scores = weighted_edge_betweenness_on(&p);
        // edges sorted: (0,1) direct, (0,2), (1,2)
        assert!(scores[1] > scores[0]);
        assert!(scores[2] > scores[0]);
    }
}
