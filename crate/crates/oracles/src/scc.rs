use crate::Snapshot;
use graph_core::Partition;

/// Tarjan's algorithm with an explicit stack. Returns component labels in
/// the order components are completed (reverse topological order).
pub fn tarjan(s: &Snapshot) -> Vec<usize> {
    let n = s.n();
    const NONE: usize = usize::MAX;
    let mut index = vec![NONE; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![NONE; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != NONE {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos == 0 && index[v] == NONE {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&(w, _)) = s.out(v).get(*pos) {
                *pos += 1;
                if index[w] == NONE {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// Kosaraju's two-pass algorithm, kept separate from [`tarjan`] so the two
/// can cross-check each other.
pub fn kosaraju(s: &Snapshot) -> Vec<usize> {
    let n = s.n();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some((v, pos)) = stack.pop() {
            if let Some(&(w, _)) = s.out(v).get(pos) {
                stack.push((v, pos + 1));
                if !seen[w] {
                    seen[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = next;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &(u, _) in s.inc(v) {
                if comp[u] == usize::MAX {
                    comp[u] = next;
                    stack.push(u);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Canonical SCC labels: each vertex is labelled with the smallest vertex of
/// its component.
pub fn scc_labels(s: &Snapshot) -> Vec<usize> {
    canonical(&tarjan(s))
}

pub fn scc_partition(s: &Snapshot) -> Partition {
    Partition::from_labels(&tarjan(s))
}

fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut first = std::collections::HashMap::new();
    labels
        .iter()
        .enumerate()
        .map(|(v, &l)| *first.entry(l).or_insert(v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dag_gives_singletons() {
        let s = Snapshot::unweighted(4, [(0, 1), (1, 2), (0, 3)]);
        assert_eq!(scc_labels(&s), vec![0, 1, 2, 3]);
    }

    #[test]
    fn three_cycle_is_one_class() {
        let s = Snapshot::unweighted(3, [(0, 1), (1, 2), (2, 0)]);
        assert_eq!(scc_labels(&s), vec![0, 0, 0]);
        assert_eq!(scc_partition(&s).node_count(), 1);
    }

    #[test]
    fn tarjan_completes_sinks_first() {
        let s = Snapshot::unweighted(3, [(0, 1), (1, 2)]);
        let c = tarjan(&s);
        assert!(c[2] < c[1] && c[1] < c[0]);
    }
}
