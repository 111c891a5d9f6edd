//! Property checkers for separator outputs, phrased over plain vertex and
//! edge lists so they do not depend on the separator types.

use crate::{bfs, dijkstra, s_distance, s_distance_to, scc_labels, weak_diameter, Snapshot, UNREACHABLE};
use graph_core::VertexId;
use std::collections::HashMap;

fn mask(n: usize, vs: &[VertexId]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in vs {
        m[v] = true;
    }
    m
}

/// `snap` without the edges touching `cut`.
fn without_vertex_edges(snap: &Snapshot, cut: &[bool]) -> Snapshot {
    Snapshot::new(snap.n(), snap.edges().iter().copied().filter(|&(u, v, _)| !cut[u] && !cut[v]))
}

fn reach(snap: &Snapshot, r: VertexId, outward: bool) -> Vec<bool> {
    let d = if outward { bfs(snap, r) } else { bfs(&snap.reversed(), r) };
    d.iter().map(|&x| x != UNREACHABLE).collect()
}

fn subsets_of(n: usize, xs: &[VertexId], set: &[bool], what: &str) -> Result<(), String> {
    for &x in xs {
        if x >= n || !set[x] {
            return Err(format!("{what}: vertex {x} outside its allowed set"));
        }
    }
    Ok(())
}

/// Checks a layered vertex separator `(s_sep, v_sep)` around `r`.
///
/// `snap` must already be restricted to `scope`. Distances count the
/// members of `in_s` a path leaves. With `outward` false the separator is
/// read on the reversed reachability relation. The size condition is only
/// checked when `check_size` is set.
#[allow(clippy::too_many_arguments)]
pub fn check_vertex_separator(
    snap: &Snapshot,
    scope: &[bool],
    in_s: &[bool],
    r: VertexId,
    d: u64,
    outward: bool,
    s_sep: &[VertexId],
    v_sep: &[VertexId],
    log_n: f64,
    check_size: bool,
) -> Result<(), String> {
    let n = snap.n();
    let marked_scope: Vec<bool> = (0..n).map(|v| scope[v] && in_s[v]).collect();
    subsets_of(n, s_sep, &marked_scope, "S_Sep")?;
    subsets_of(n, v_sep, scope, "V_Sep")?;
    let s_mask = mask(n, s_sep);
    let v_mask = mask(n, v_sep);
    if s_sep.iter().any(|&s| v_mask[s]) {
        return Err("S_Sep and V_Sep intersect".into());
    }
    if !v_mask[r] {
        return Err(format!("root {r} missing from V_Sep"));
    }
    let cut = without_vertex_edges(snap, &s_mask);
    let reached = reach(&cut, r, outward);
    for v in 0..n {
        if scope[v] && !s_mask[v] && reached[v] != v_mask[v] {
            return Err(format!("vertex {v}: reachable = {}, in V_Sep = {}", reached[v], v_mask[v]));
        }
    }
    let dist = if outward { s_distance(snap, r, in_s) } else { s_distance_to(snap, r, in_s) };
    for &v in v_sep.iter().chain(s_sep) {
        if dist[v] > d {
            return Err(format!("vertex {v} at marked distance {} > {d}", dist[v]));
        }
    }
    // No vertex of V_Sep relates to the far side once S_Sep is cut.
    for &x in v_sep {
        let from_x = reach(&cut, x, outward);
        if let Some(y) = (0..n).find(|&y| scope[y] && !v_mask[y] && !s_mask[y] && from_x[y]) {
            return Err(format!("{x} and far vertex {y} still connected"));
        }
    }
    if check_size {
        let near = v_sep.iter().filter(|&&v| in_s[v]).count();
        let far = (0..n).filter(|&v| marked_scope[v] && !v_mask[v] && !s_mask[v]).count();
        let bound = near.min(far) as f64 * 2.0 * log_n / d as f64;
        if s_sep.len() as f64 > bound + 1e-9 {
            return Err(format!("|S_Sep| = {} above bound {bound:.3} (near {near}, far {far})", s_sep.len()));
        }
    }
    Ok(())
}

/// Checks the output of a recursive split of `scope` at depth `d`.
///
/// Verifies that `parts` partitions `scope`, that it coincides with the
/// strongly connected components once the edges of `s_split` are gone,
/// that every part has pairwise marked distance at most `d`, and, when
/// `check_size` is set, the aggregate size bound with factor `32 log n / d`.
#[allow(clippy::too_many_arguments)]
pub fn check_split(
    snap: &Snapshot,
    scope: &[bool],
    in_s: &[bool],
    d: u64,
    s_split: &[VertexId],
    parts: &[Vec<VertexId>],
    log_n: f64,
    check_size: bool,
) -> Result<(), String> {
    let n = snap.n();
    let mut owner = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        if p.is_empty() {
            return Err(format!("part {i} is empty"));
        }
        for &v in p {
            if !scope[v] {
                return Err(format!("part {i} holds {v} outside the scope"));
            }
            if owner[v] != usize::MAX {
                return Err(format!("vertex {v} in two parts"));
            }
            owner[v] = i;
        }
    }
    if let Some(v) = (0..n).find(|&v| scope[v] && owner[v] == usize::MAX) {
        return Err(format!("vertex {v} in no part"));
    }
    let s_mask = mask(n, s_split);
    for &s in s_split {
        if !in_s[s] || parts[owner[s]].len() != 1 {
            return Err(format!("separator vertex {s} unmarked or not a singleton"));
        }
    }
    let cut = without_vertex_edges(snap, &s_mask);
    let labels = scc_labels(&cut);
    let mut label_owner: HashMap<usize, usize> = HashMap::new();
    for v in (0..n).filter(|&v| scope[v]) {
        if *label_owner.entry(labels[v]).or_insert(owner[v]) != owner[v] {
            return Err(format!("vertex {v} shares a component with another part"));
        }
    }
    for p in parts {
        if p.iter().any(|&v| labels[v] != labels[p[0]]) {
            return Err(format!("part starting at {} is not strongly connected", p[0]));
        }
        if p.len() > 1 {
            for &a in p {
                let da = s_distance(&cut, a, in_s);
                if let Some(&b) = p.iter().find(|&&b| da[b] > d) {
                    return Err(format!("marked distance {a} -> {b} is {} > {d}", da[b]));
                }
            }
        }
    }
    if check_size {
        let total = scope.iter().filter(|&&x| x).count();
        let sum: f64 = parts
            .iter()
            .map(|p| {
                let k = p.iter().filter(|&&v| in_s[v]).count();
                ((total.saturating_sub(k)).max(1) as f64).log2() * k as f64
            })
            .sum();
        let bound = 32.0 * log_n / d as f64 * sum;
        if s_split.len() as f64 > bound + 1e-9 {
            return Err(format!("|S_Split| = {} above bound {bound:.3}", s_split.len()));
        }
    }
    Ok(())
}

/// Checks an exponential-ball edge separator.
///
/// `snap` holds the graph with edge indices matching the ids in `e_sep`,
/// `within` the vertex set the ball was grown in. The ball must be exactly
/// the set reachable from `r` once `e_sep` is removed, every member must be
/// within `d` of `r` there, and every separator edge must cross the
/// boundary.
pub fn check_edge_separator(
    snap: &Snapshot,
    within: &[bool],
    r: VertexId,
    d: f64,
    outward: bool,
    e_sep: &[usize],
    v_sep: &[VertexId],
) -> Result<(), String> {
    let n = snap.n();
    let cut_ids = mask(snap.edges().len(), e_sep);
    let v_mask = mask(n, v_sep);
    for &e in e_sep {
        let (u, v, _) = snap.edges()[e];
        let (inner, outer) = if outward { (u, v) } else { (v, u) };
        if !(within[u] && within[v] && v_mask[inner] && !v_mask[outer]) {
            return Err(format!("edge {e} = ({u}, {v}) does not cross the ball boundary"));
        }
    }
    let kept = Snapshot::new(
        n,
        snap.edges()
            .iter()
            .enumerate()
            .filter(|&(e, &(u, v, _))| !cut_ids[e] && within[u] && within[v])
            .map(|(_, &x)| x),
    );
    let dist = if outward { dijkstra(&kept, r) } else { dijkstra(&kept.reversed(), r) };
    for v in 0..n {
        let reached = within[v] && dist[v] != UNREACHABLE;
        if reached != v_mask[v] {
            return Err(format!("vertex {v}: reachable = {reached}, in ball = {}", v_mask[v]));
        }
        if reached && dist[v] as f64 > d {
            return Err(format!("vertex {v} at distance {} > {d}", dist[v]));
        }
    }
    Ok(())
}

/// Largest weak diameter over the strongly connected components left after
/// removing the edges with indices in `cut`.
pub fn max_component_diameter(snap: &Snapshot, cut: &[usize]) -> u64 {
    let cut_ids = mask(snap.edges().len(), cut);
    let kept = Snapshot::new(
        snap.n(),
        snap.edges().iter().enumerate().filter(|&(e, _)| !cut_ids[e]).map(|(_, &x)| x),
    );
    let labels = scc_labels(&kept);
    let mut groups: HashMap<usize, Vec<VertexId>> = HashMap::new();
    for (v, &l) in labels.iter().enumerate() {
        groups.entry(l).or_default().push(v);
    }
    groups.values().map(|xs| weak_diameter(&kept, xs)).max().unwrap_or(0)
}

/// Checks a generalized topological order of `pruned` that must also have
/// small weak diameter in `g`.
///
/// `node_of` and `tau_of` give, per vertex, its node label and the `τ` of
/// that node. The nodes must be the SCCs of `pruned`, every edge of `pruned`
/// must be an edge of `g`, edges of `pruned` between nodes must go up in
/// `τ`, the intervals `[τ, τ + size)` must tile `[0, n)`, and each node's
/// weak diameter in `g` must be at most `bound(size)`.
pub fn check_topological_order(
    g: &Snapshot,
    pruned: &Snapshot,
    node_of: &[usize],
    tau_of: &[usize],
    bound: impl Fn(usize) -> f64,
) -> Result<(), String> {
    let n = g.n();
    let mut left: HashMap<(VertexId, VertexId, u64), usize> = HashMap::new();
    for &e in g.edges() {
        *left.entry(e).or_default() += 1;
    }
    for &e in pruned.edges() {
        match left.get_mut(&e) {
            Some(k) if *k > 0 => *k -= 1,
            _ => return Err(format!("pruned edge {e:?} is not in the graph")),
        }
    }
    let scc = scc_labels(pruned);
    let mut groups: HashMap<usize, Vec<VertexId>> = HashMap::new();
    for v in 0..n {
        groups.entry(node_of[v]).or_default().push(v);
    }
    for (label, members) in &groups {
        let first = members[0];
        if members.iter().any(|&v| scc[v] != scc[first] || tau_of[v] != tau_of[first]) {
            return Err(format!("node {label} is not one component with one τ"));
        }
        if scc.iter().enumerate().any(|(v, &c)| c == scc[first] && node_of[v] != *label) {
            return Err(format!("node {label} is only part of its component"));
        }
    }
    for &(u, v, _) in pruned.edges() {
        if node_of[u] != node_of[v] && tau_of[u] >= tau_of[v] {
            return Err(format!("pruned edge ({u}, {v}) goes down in τ"));
        }
    }
    let mut spans: Vec<(usize, usize)> = groups.values().map(|m| (tau_of[m[0]], m.len())).collect();
    spans.sort_unstable();
    let mut next = 0;
    for (t, len) in spans {
        if t != next {
            return Err(format!("intervals do not tile: expected {next}, found {t}"));
        }
        next += len;
    }
    for members in groups.values() {
        let d = weak_diameter(g, members);
        if d as f64 > bound(members.len()) {
            return Err(format!("node of size {} has weak diameter {d}", members.len()));
        }
    }
    Ok(())
}

/// Checks that every node of the later stage lies inside one node of the
/// earlier stage and that its interval lies inside that node's interval.
pub fn check_nesting(
    before_node: &[usize],
    before_tau: &[usize],
    node_of: &[usize],
    tau_of: &[usize],
) -> Result<(), String> {
    let size = |labels: &[usize], v: usize| labels.iter().filter(|&&l| l == labels[v]).count();
    for v in 0..node_of.len() {
        for w in 0..node_of.len() {
            if node_of[v] == node_of[w] && before_node[v] != before_node[w] {
                return Err(format!("vertices {v} and {w} were apart and are together again"));
            }
        }
        let (lo, hi) = (before_tau[v], before_tau[v] + size(before_node, v));
        let (a, b) = (tau_of[v], tau_of[v] + size(node_of, v));
        if a < lo || b > hi {
            return Err(format!("interval [{a}, {b}) of vertex {v} leaves [{lo}, {hi})"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_a_hand_made_cut() {
        // path 0 -> 1 -> 2 -> 3, all marked; cutting at 1 leaves {0}.
        let snap = Snapshot::unweighted(4, [(0, 1), (1, 2), (2, 3)]);
        let all = vec![true; 4];
        let r = check_vertex_separator(&snap, &all, &all, 0, 2, true, &[1], &[0], 2.0, false);
        assert_eq!(r, Ok(()));
        let bad = check_vertex_separator(&snap, &all, &all, 0, 2, true, &[], &[0], 2.0, false);
        assert!(bad.is_err());
    }

    #[test]
    fn split_checker_spots_merged_parts() {
        let snap = Snapshot::unweighted(3, [(0, 1), (1, 0), (1, 2)]);
        let all = vec![true; 3];
        assert_eq!(check_split(&snap, &all, &all, 4, &[], &[vec![0, 1], vec![2]], 2.0, true), Ok(()));
        assert!(check_split(&snap, &all, &all, 4, &[], &[vec![0, 1, 2]], 2.0, false).is_err());
        assert!(check_split(&snap, &all, &all, 4, &[], &[vec![0], vec![1], vec![2]], 2.0, false).is_err());
    }

    #[test]
    fn edge_separator_checker() {
        let snap = Snapshot::new(3, [(0, 1, 1), (1, 2, 5)]);
        let all = vec![true; 3];
        assert_eq!(check_edge_separator(&snap, &all, 0, 3.0, true, &[1], &[0, 1]), Ok(()));
        assert!(check_edge_separator(&snap, &all, 0, 3.0, true, &[], &[0, 1]).is_err());
        assert_eq!(max_component_diameter(&snap, &[]), 0);
    }

    #[test]
    fn order_checker_accepts_a_chain_and_rejects_a_descent() {
        let g = Snapshot::unweighted(3, [(0, 1), (1, 2)]);
        assert!(check_topological_order(&g, &g, &[0, 1, 2], &[0, 1, 2], |_| 0.0).is_ok());
        assert!(check_topological_order(&g, &g, &[0, 1, 2], &[1, 0, 2], |_| 0.0).is_err());
        let cyc = Snapshot::unweighted(2, [(0, 1), (1, 0)]);
        assert!(check_topological_order(&cyc, &cyc, &[0, 0], &[0, 0], |_| 1.0).is_ok());
        assert!(check_topological_order(&cyc, &cyc, &[0, 0], &[0, 0], |_| 0.5).is_err());
    }

    #[test]
    fn nesting_checker() {
        assert!(check_nesting(&[0, 0, 0], &[0, 0, 0], &[0, 1, 1], &[2, 0, 0]).is_ok());
        assert!(check_nesting(&[0, 0, 1], &[0, 0, 2], &[0, 1, 2], &[0, 2, 1]).is_err());
        assert!(check_nesting(&[0, 1], &[0, 1], &[0, 0], &[0, 0]).is_err());
    }
}
