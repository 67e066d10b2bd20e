use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{GraphError, HeteroGraph};
use crate::Weight;

pub fn is_complete<W: Weight>(g: &HeteroGraph<W>) -> bool {
    let n = g.num_nodes();
    g.num_edges() == n * n.saturating_sub(1) / 2
}

/// All-pairs shortest distances under cost index `tree`, one Dijkstra run
/// per source. `None` marks unreachable pairs.
pub fn shortest_distances<W: Weight>(
    g: &HeteroGraph<W>,
    tree: usize,
) -> Result<Vec<Vec<Option<W>>>, GraphError> {
    g.check_tree_index(tree)?;
    let n = g.num_nodes();
    let mut adj: Vec<Vec<(usize, W)>> = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u].push((e.v, e.costs[tree]));
        adj[e.v].push((e.u, e.costs[tree]));
    }
    Ok((0..n).map(|s| dijkstra(&adj, s)).collect())
}

fn dijkstra<W: Weight>(adj: &[Vec<(usize, W)>], source: usize) -> Vec<Option<W>> {
    let mut dist = vec![None; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(W::zero());
    heap.push(Reverse((W::zero(), source)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if dist[x].is_some_and(|best| d > best) {
            continue;
        }
        for &(y, w) in &adj[x] {
            // An overflowing candidate is longer than any simple path.
            let Some(nd) = d.checked_add(&w) else {
                continue;
            };
            if dist[y].is_none_or(|cur| nd < cur) {
                dist[y] = Some(nd);
                heap.push(Reverse((nd, y)));
            }
        }
    }
    dist
}

/// Completes `g`: original edges keep their costs, each missing pair gets,
/// per cost index, its shortest-path distance in `g`.
pub fn metric_closure_complete<W: Weight>(
    g: &HeteroGraph<W>,
) -> Result<HeteroGraph<W>, GraphError> {
    let n = g.num_nodes();
    let dists = (0..g.num_trees())
        .map(|i| shortest_distances(g, i))
        .collect::<Result<Vec<_>, _>>()?;

    let mut edges: Vec<(usize, usize, Vec<W>)> = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.costs.clone()))
        .collect();
    for u in 0..n {
        for v in (u + 1)..n {
            if g.has_edge(u, v) {
                continue;
            }
            let costs = dists
                .iter()
                .map(|d| d[u][v].ok_or(GraphError::DisconnectedGraph(u, v)))
                .collect::<Result<Vec<_>, _>>()?;
            edges.push((u, v, costs));
        }
    }
    let labels = g.labels().iter().map(|(&k, v)| (k, v.clone()));
    HeteroGraph::from_edges(n, g.num_trees(), edges)?.with_labels(labels)
}

/// Every ordered triple of distinct nodes `(a, b, c)` with
/// `w(a, b) + w(b, c) < w(a, c)` under cost index `tree`.
pub fn check_triangle_inequality<W: Weight>(
    g: &HeteroGraph<W>,
    tree: usize,
) -> Result<Vec<(usize, usize, usize)>, GraphError> {
    g.check_tree_index(tree)?;
    if !is_complete(g) {
        return Err(GraphError::GraphNotComplete);
    }
    let n = g.num_nodes();
    let mut w = vec![W::zero(); n * n];
    for e in g.edges() {
        w[e.u * n + e.v] = e.costs[tree];
        w[e.v * n + e.u] = e.costs[tree];
    }
    let mut bad = Vec::new();
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            for c in (0..n).filter(|&c| c != a && c != b) {
                let detour = w[a * n + b].checked_add(&w[b * n + c]);
                if detour.is_some_and(|d| d < w[a * n + c]) {
                    bad.push((a, b, c));
                }
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(ab: u64, bc: u64, ac: u64) -> HeteroGraph<u64> {
        HeteroGraph::from_edges(
            3,
            1,
            vec![(0, 1, vec![ab]), (1, 2, vec![bc]), (0, 2, vec![ac])],
        )
        .unwrap()
    }

    #[test]
    fn completeness() {
        assert!(is_complete(&triangle(1, 1, 1)));
        let g =
            HeteroGraph::<u64>::from_edges(3, 1, vec![(0, 1, vec![1]), (1, 2, vec![1])]).unwrap();
        assert!(!is_complete(&g));
        assert!(is_complete(
            &HeteroGraph::<u64>::from_edges(1, 1, vec![]).unwrap()
        ));
    }

    #[test]
    fn triangle_examples() {
        assert!(check_triangle_inequality(&triangle(1, 1, 1), 0)
            .unwrap()
            .is_empty());
        let bad = check_triangle_inequality(&triangle(1, 1, 5), 0).unwrap();
        assert!(bad.contains(&(0, 1, 2)));
        assert!(bad.contains(&(2, 1, 0)));
        assert_eq!(bad.len(), 2);
        let path =
            HeteroGraph::<u64>::from_edges(3, 1, vec![(0, 1, vec![1]), (1, 2, vec![1])]).unwrap();
        assert_eq!(
            check_triangle_inequality(&path, 0),
            Err(GraphError::GraphNotComplete)
        );
        assert!(matches!(
            check_triangle_inequality(&triangle(1, 1, 1), 1),
            Err(GraphError::TreeIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn closure_of_path() {
        let g = HeteroGraph::<u64>::from_edges(3, 2, vec![(0, 1, vec![1, 1]), (1, 2, vec![1, 1])])
            .unwrap();
        let c = metric_closure_complete(&g).unwrap();
        assert!(is_complete(&c));
        assert_eq!(c.edge(0, 2).unwrap().costs, vec![2, 2]);
        assert_eq!(c.edge(0, 1).unwrap().costs, vec![1, 1]);
    }

    #[test]
    fn closure_keeps_long_original_edges() {
        // (0,2) is longer than the detour but is kept verbatim
        let g = HeteroGraph::<u64>::from_edges(
            4,
            1,
            vec![
                (0, 1, vec![1]),
                (1, 2, vec![1]),
                (0, 2, vec![9]),
                (2, 3, vec![1]),
            ],
        )
        .unwrap();
        let c = metric_closure_complete(&g).unwrap();
        assert_eq!(c.cost(0, 2, 0), Some(9));
        assert_eq!(c.cost(0, 3, 0), Some(3));
        assert_eq!(c.cost(1, 3, 0), Some(2));
    }

    #[test]
    fn closure_of_complete_is_identity() {
        let g = triangle(3, 4, 5).with_labels([(0, "a")]).unwrap();
        assert_eq!(metric_closure_complete(&g).unwrap(), g);
    }

    #[test]
    fn closure_rejects_disconnected() {
        let g = HeteroGraph::<u64>::from_edges(3, 1, vec![(0, 1, vec![1])]).unwrap();
        assert!(matches!(
            metric_closure_complete(&g),
            Err(GraphError::DisconnectedGraph(..))
        ));
    }
}
