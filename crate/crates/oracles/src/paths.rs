use crate::{Snapshot, UNREACHABLE};
use graph_core::VertexId;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

/// Hop distances from `r`.
pub fn bfs(s: &Snapshot, r: VertexId) -> Vec<u64> {
    let mut dist = vec![UNREACHABLE; s.n()];
    dist[r] = 0;
    let mut queue = VecDeque::from([r]);
    while let Some(v) = queue.pop_front() {
        for &(w, _) in s.out(v) {
            if dist[w] == UNREACHABLE {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Weighted distances from `r` with a binary heap.
pub fn dijkstra(s: &Snapshot, r: VertexId) -> Vec<u64> {
    let mut dist = vec![UNREACHABLE; s.n()];
    dist[r] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u64, r))]);
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(w, c) in s.out(v) {
            let nd = d + c;
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(Reverse((nd, w)));
            }
        }
    }
    dist
}

/// Weighted distances from `r` by repeated relaxation of every edge.
pub fn bellman_ford(s: &Snapshot, r: VertexId) -> Vec<u64> {
    let mut dist = vec![UNREACHABLE; s.n()];
    dist[r] = 0;
    for _ in 0..s.n() {
        let mut changed = false;
        for &(u, v, w) in s.edges() {
            if dist[u] != UNREACHABLE && dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// S-distance from `r`: the fewest members of `in_s` a path passes through,
/// not counting its final vertex. Edge `(a, b)` costs 1 exactly when `a` is
/// in the set. Computed with a 0/1 deque search.
pub fn s_distance(s: &Snapshot, r: VertexId, in_s: &[bool]) -> Vec<u64> {
    let mut dist = vec![UNREACHABLE; s.n()];
    dist[r] = 0;
    let mut deque = VecDeque::from([r]);
    let mut done = vec![false; s.n()];
    while let Some(v) = deque.pop_front() {
        if done[v] {
            continue;
        }
        done[v] = true;
        let c = u64::from(in_s[v]);
        for &(w, _) in s.out(v) {
            if dist[v] + c < dist[w] {
                dist[w] = dist[v] + c;
                if c == 0 {
                    deque.push_front(w);
                } else {
                    deque.push_back(w);
                }
            }
        }
    }
    dist
}

/// S-distance from every vertex to `r`. The cost of an edge depends on its
/// tail, so this is not simply [`s_distance`] on the reversed graph.
pub fn s_distance_to(s: &Snapshot, r: VertexId, in_s: &[bool]) -> Vec<u64> {
    let mut dist = vec![UNREACHABLE; s.n()];
    dist[r] = 0;
    let mut deque = VecDeque::from([r]);
    let mut done = vec![false; s.n()];
    while let Some(v) = deque.pop_front() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for &(u, _) in s.inc(v) {
            let c = u64::from(in_s[u]);
            if dist[v] + c < dist[u] {
                dist[u] = dist[v] + c;
                if c == 0 {
                    deque.push_front(u);
                } else {
                    deque.push_back(u);
                }
            }
        }
    }
    dist
}

/// All-pairs S-distances by Floyd–Warshall; `result[a][b]` is the distance
/// from `a` to `b`.
pub fn s_distance_all_pairs(s: &Snapshot, in_s: &[bool]) -> Vec<Vec<u64>> {
    let n = s.n();
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for &(u, v, _) in s.edges() {
        if u != v {
            d[u][v] = d[u][v].min(u64::from(in_s[u]));
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == UNREACHABLE {
                continue;
            }
            for j in 0..n {
                if d[k][j] != UNREACHABLE && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Largest distance, measured in the whole snapshot, between two members of
/// `xs`. Returns [`UNREACHABLE`] when some pair is disconnected.
pub fn weak_diameter(s: &Snapshot, xs: &[VertexId]) -> u64 {
    let mut best = 0;
    for &x in xs {
        let d = dijkstra(s, x);
        for &y in xs {
            best = best.max(d[y]);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Snapshot {
        Snapshot::unweighted(3, [(0, 1), (1, 2)])
    }

    #[test]
    fn path_distances() {
        assert_eq!(bfs(&path3(), 0), vec![0, 1, 2]);
        assert_eq!(dijkstra(&path3(), 0), vec![0, 1, 2]);
        assert_eq!(bfs(&path3(), 2), vec![UNREACHABLE, UNREACHABLE, 0]);
    }

    #[test]
    fn s_distance_edge_cases() {
        let dag = Snapshot::unweighted(4, [(0, 1), (1, 2), (0, 3)]);
        assert_eq!(s_distance(&dag, 0, &[false; 4]), vec![0; 4]);
        assert_eq!(s_distance(&dag, 0, &[true; 4]), bfs(&dag, 0));
        let cycle = Snapshot::unweighted(3, [(0, 1), (1, 2), (2, 0)]);
        assert_eq!(s_distance(&cycle, 0, &[true, false, false]), vec![0, 1, 1]);
        assert_eq!(s_distance_to(&cycle, 0, &[true, false, false]), vec![0, 0, 0]);
        assert_eq!(s_distance_to(&cycle, 0, &[false, true, false]), vec![0, 1, 0]);
    }

    #[test]
    fn diameter_examples() {
        let cycle = Snapshot::unweighted(3, [(0, 1), (1, 2), (2, 0)]);
        assert_eq!(weak_diameter(&cycle, &[1]), 0);
        assert_eq!(weak_diameter(&cycle, &[0, 1, 2]), 2);
        assert_eq!(weak_diameter(&path3(), &[0, 2]), UNREACHABLE);
    }
}
