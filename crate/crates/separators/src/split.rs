use crate::{in_sep, out_sep, Direction, LayeredSearch, SGraph, Scope, SeparatorResult};
use ges_tree::GesTree;
use graph_core::VertexId;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitResult {
    /// Marked vertices whose edges were removed, sorted.
    pub s_split: Vec<VertexId>,
    /// Vertex sets of the remaining strongly connected pieces. Every vertex
    /// of `s_split` appears as a singleton.
    pub parts: Vec<Vec<VertexId>>,
    /// Layered searches that had to settle for a best-effort layer.
    pub fallbacks: usize,
}

/// Removes marked vertices from `scope` until every strongly connected
/// piece has marked diameter at most `d`.
///
/// The marked set must meet every cycle of the graph, and `d` must be at
/// least 16.
pub fn split(g: &SGraph, scope: &Scope, d: u64) -> SplitResult {
    assert!(d >= 16, "split needs d >= 16, got {d}");
    let mut out = SplitResult::default();
    split_into(g, scope.clone(), d, &mut out);
    out.s_split.sort_unstable();
    out
}

/// Interleaves an out-search and an in-search by single steps and returns
/// whichever finishes first with a small enough root side, otherwise the
/// result of the other one.
fn race(g: &SGraph, scope: &Scope, r: VertexId, d: u64, cap: usize, fallbacks: &mut usize) -> SeparatorResult {
    let mut a = LayeredSearch::new(g, scope, r, d, Direction::Out);
    let mut b = LayeredSearch::new(g, scope, r, d, Direction::In);
    let (first, other) = loop {
        if let Some(res) = a.step() {
            break (res, b);
        }
        if let Some(res) = b.step() {
            break (res, a);
        }
    };
    *fallbacks += usize::from(first.fallback);
    if first.v_sep.len() <= cap {
        return first;
    }
    let second = other.run();
    *fallbacks += usize::from(second.fallback);
    second
}

fn cut_off(g: &SGraph, scope: &mut Scope, res: &SeparatorResult, out: &mut SplitResult) {
    for &v in res.v_sep.iter().chain(&res.s_sep) {
        scope.remove(g, v);
    }
    out.s_split.extend_from_slice(&res.s_sep);
    out.parts.extend(res.s_sep.iter().map(|&v| vec![v]));
}

fn ges_over(g: &SGraph, scope: &Scope, r: VertexId, depth: u64) -> GesTree {
    let vs = scope.vertices();
    let nodes: Vec<[VertexId; 1]> = vs.iter().map(|&v| [v]).collect();
    let marked: Vec<_> = vs.iter().copied().filter(|&v| g.in_s(v)).collect();
    let edges = g.edges().iter().enumerate().map(|(e, &(u, v))| (e, u, v));
    GesTree::new(&nodes, edges, r, &marked, depth).expect("marked vertices must meet every cycle")
}

fn split_into(g: &SGraph, scope: Scope, d: u64, out: &mut SplitResult) {
    // Root sides of at most two thirds of the input are handed to a
    // recursive call; a larger one means the root is central.
    let cap = 2 * scope.len() / 3;
    let mut rest = scope;
    if let Some(r) = rest.first() {
        // Already shallow around the first vertex: nothing to cut.
        let tree = ges_over(g, &rest, r, d / 2);
        if tree.get_unreachable().is_none() {
            out.parts.push(tree.vertices());
            return;
        }
    }
    while let Some(r) = rest.first() {
        let res = race(g, &rest, r, d / 16, cap, &mut out.fallbacks);
        if res.v_sep.len() <= cap {
            split_into(g, Scope::from_vertices(g, &res.v_sep), d, out);
            cut_off(g, &mut rest, &res, out);
            continue;
        }
        let mut tree = ges_over(g, &rest, r, d / 2);
        while let Some(v) = tree.get_unreachable() {
            let res = if tree.dist_out(v) > d / 2 {
                in_sep(g, &rest, v, d / 4)
            } else {
                out_sep(g, &rest, v, d / 4)
            };
            out.fallbacks += usize::from(res.fallback);
            let gone: Vec<_> = res.v_sep.iter().chain(&res.s_sep).copied().collect();
            tree.delete_vertices(&gone).expect("a far separator never holds the centre");
            split_into(g, Scope::from_vertices(g, &res.v_sep), d, out);
            cut_off(g, &mut rest, &res, out);
        }
        out.parts.push(tree.vertices());
        break;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shallow_cycle_stays_whole() {
        let g = SGraph::all_marked(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let r = split(&g, &Scope::full(&g), 16);
        assert!(r.s_split.is_empty());
        assert_eq!(r.parts, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn dag_falls_apart_into_singletons() {
        let g = SGraph::all_marked(4, [(0, 1), (1, 2), (2, 3), (0, 3)]);
        let r = split(&g, &Scope::full(&g), 16);
        let mut parts = r.parts.clone();
        parts.sort();
        assert_eq!(parts, vec![vec![0], vec![1], vec![2], vec![3]]);
        assert!(r.s_split.is_empty());
    }

    #[test]
    fn empty_scope() {
        let g = SGraph::all_marked(3, [(0, 1)]);
        let r = split(&g, &Scope::from_vertices(&g, &[]), 16);
        assert!(r.parts.is_empty());
    }
}
