use crate::{Direction, WGraph};
use graph_core::{EdgeId, VertexId};
use rand::Rng;
use rand_distr::{Distribution, Exp};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSeparatorResult {
    /// Edges leaving the ball (entering it for [`Direction::In`]).
    pub e_sep: Vec<EdgeId>,
    /// The ball, sorted.
    pub v_sep: Vec<VertexId>,
    /// The sampled radius reached the depth and nothing was computed.
    pub failed: bool,
    pub radius: f64,
    /// Edge relaxations performed, a proxy for the running time.
    pub explored_edges: u64,
}

/// Ball of radius `radius` around `r` in the graph restricted to `within`
/// (all vertices when `None`), and the alive edges crossing its boundary.
///
/// With [`Direction::In`] the ball holds the vertices that reach `r`
/// within the radius and the separator is the set of edges entering it.
pub fn ball_separator(
    g: &WGraph,
    within: Option<&[bool]>,
    r: VertexId,
    radius: f64,
    dir: Direction,
) -> EdgeSeparatorResult {
    let inside = |v: VertexId| within.is_none_or(|m| m[v]);
    assert!(inside(r), "root {r} outside the vertex set");
    let mut dist: HashMap<VertexId, u64> = HashMap::from([(r, 0)]);
    let mut done: HashSet<VertexId> = HashSet::new();
    let mut heap = BinaryHeap::from([Reverse((0u64, r))]);
    let mut ball = Vec::new();
    let mut explored = 0;
    let step = |e: EdgeId| {
        let (u, v, w) = g.edge(e);
        (if dir == Direction::Out { v } else { u }, w)
    };
    while let Some(Reverse((k, v))) = heap.pop() {
        if done.contains(&v) || k > dist[&v] {
            continue;
        }
        if k as f64 > radius {
            break;
        }
        done.insert(v);
        ball.push(v);
        let edges: Vec<EdgeId> = match dir {
            Direction::Out => g.out(v).collect(),
            Direction::In => g.inc(v).collect(),
        };
        for e in edges {
            explored += 1;
            let (x, w) = step(e);
            if !inside(x) {
                continue;
            }
            let nk = k + w;
            if dist.get(&x).is_none_or(|&old| nk < old) {
                dist.insert(x, nk);
                heap.push(Reverse((nk, x)));
            }
        }
    }
    let mut e_sep = Vec::new();
    for &v in &ball {
        let edges: Vec<EdgeId> = match dir {
            Direction::Out => g.out(v).collect(),
            Direction::In => g.inc(v).collect(),
        };
        for e in edges {
            let (x, _) = step(e);
            if inside(x) && !done.contains(&x) {
                e_sep.push(e);
            }
        }
    }
    ball.sort_unstable();
    e_sep.sort_unstable();
    EdgeSeparatorResult {
        e_sep,
        v_sep: ball,
        failed: false,
        radius,
        explored_edges: explored,
    }
}

/// Samples a radius from the exponential distribution with rate `zeta / d`
/// and returns the [`ball_separator`] at that radius, or a failed result if
/// the radius is at least `d`.
pub fn out_separator<R: Rng + ?Sized>(
    g: &WGraph,
    within: Option<&[bool]>,
    r: VertexId,
    d: f64,
    zeta: f64,
    dir: Direction,
    rng: &mut R,
) -> EdgeSeparatorResult {
    assert!(d > 0.0 && zeta > 0.0, "depth and success parameter must be positive");
    let radius = Exp::new(zeta / d).expect("positive rate").sample(rng);
    if radius >= d {
        return EdgeSeparatorResult {
            e_sep: Vec::new(),
            v_sep: Vec::new(),
            failed: true,
            radius,
            explored_edges: 0,
        };
    }
    ball_separator(g, within, r, radius, dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> WGraph {
        WGraph::new(4, [(0, 1, 2), (1, 2, 2), (2, 3, 2), (3, 0, 1)])
    }

    #[test]
    fn radius_two_takes_one_hop() {
        let r = ball_separator(&path(), None, 0, 2.5, Direction::Out);
        assert_eq!(r.v_sep, vec![0, 1]);
        assert_eq!(r.e_sep, vec![1]);
    }

    #[test]
    fn in_ball_uses_entering_edges() {
        let r = ball_separator(&path(), None, 0, 1.0, Direction::In);
        assert_eq!(r.v_sep, vec![0, 3]);
        assert_eq!(r.e_sep, vec![2]);
    }

    #[test]
    fn restriction_hides_edges() {
        let mask = [true, true, false, true];
        let r = ball_separator(&path(), Some(&mask), 0, 100.0, Direction::Out);
        assert_eq!(r.v_sep, vec![0, 1]);
        assert!(r.e_sep.is_empty());
    }
}
