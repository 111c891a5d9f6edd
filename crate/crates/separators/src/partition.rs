use crate::{out_separator, Direction, WGraph};
use es_tree::EsTree;
use graph_core::{components, EdgeId, VertexId, INF};
use rand::Rng;

/// Both samples of an edge separator overshot their depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("edge separator failed twice in a row")]
pub struct PartitionFailed;

/// Edges whose removal leaves every strongly connected component with
/// weak diameter at most `d`.
pub fn partition<R: Rng + ?Sized>(g: &WGraph, d: u64, zeta: f64, rng: &mut R) -> Result<Vec<EdgeId>, PartitionFailed> {
    let all: Vec<_> = (0..g.n()).collect();
    partition_within(g, &all, d, zeta, rng)
}

/// [`partition`] on the subgraph induced by `vertices`.
///
/// Each component is probed with depth-capped trees from its smallest
/// vertex in both directions. When some vertex lies beyond `d / 2`, a ball
/// of random radius below `d / 4` around it is cut away from the rest, and
/// both sides are processed again, the smaller one first. A failed sample is
/// retried once.
pub fn partition_within<R: Rng + ?Sized>(
    g: &WGraph,
    vertices: &[VertexId],
    d: u64,
    zeta: f64,
    rng: &mut R,
) -> Result<Vec<EdgeId>, PartitionFailed> {
    assert!(d >= 1, "depth must be positive");
    let n = g.n();
    let mut h = g.clone();
    let mut cut = Vec::new();
    let mut stack = vec![vertices.to_vec()];
    let mut mask = vec![false; n];
    while let Some(set) = stack.pop() {
        let comps = components(n, &set, |v, buf| buf.extend(h.out(v).map(|e| h.edge(e).1)));
        for comp in comps {
            if comp.len() < 2 {
                continue;
            }
            for &v in &comp {
                mask[v] = true;
            }
            let probe = |dir| {
                let arcs = (0..h.edge_count()).map(|e| {
                    let (u, v, w) = h.edge(e);
                    (u, v, w, h.is_alive(e) && mask[u] && mask[v])
                });
                let tree = EsTree::from_arcs(n, arcs, comp[0], d / 2, dir, false);
                comp.iter().copied().find(|&v| tree.est(v) == INF)
            };
            // A vertex the root cannot reach is cut off by the ball of
            // vertices reaching it, and the other way round.
            let far = match probe(Direction::Out) {
                Some(t) => Some((t, Direction::In)),
                None => probe(Direction::In).map(|t| (t, Direction::Out)),
            };
            let Some((t, dir)) = far else {
                for &v in &comp {
                    mask[v] = false;
                }
                continue;
            };
            let mut res = out_separator(&h, Some(&mask), t, d as f64 / 4.0, zeta, dir, rng);
            if res.failed {
                res = out_separator(&h, Some(&mask), t, d as f64 / 4.0, zeta, dir, rng);
            }
            for &v in &comp {
                mask[v] = false;
            }
            if res.failed {
                return Err(PartitionFailed);
            }
            for &e in &res.e_sep {
                h.remove(e);
            }
            cut.extend_from_slice(&res.e_sep);
            let ball = res.v_sep;
            let rest: Vec<_> = comp.iter().copied().filter(|v| ball.binary_search(v).is_err()).collect();
            if ball.len() <= rest.len() {
                stack.push(rest);
                stack.push(ball);
            } else {
                stack.push(ball);
                stack.push(rest);
            }
        }
    }
    cut.sort_unstable();
    Ok(cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shallow_graph_needs_no_cut() {
        let g = WGraph::new(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(partition(&g, 4, 5.0, &mut rng), Ok(vec![]));
    }

    #[test]
    fn acyclic_graph_needs_no_cut() {
        let g = WGraph::new(4, [(0, 1, 50), (1, 2, 50), (2, 3, 50)]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(partition(&g, 1, 5.0, &mut rng), Ok(vec![]));
    }

    #[test]
    fn heavy_cycle_is_broken() {
        let g = WGraph::new(3, [(0, 1, 10), (1, 2, 10), (2, 0, 10)]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cut = partition(&g, 8, 5.0, &mut rng).unwrap();
        assert!(!cut.is_empty());
    }
}
