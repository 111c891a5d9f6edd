use crate::VertexId;

/// Strongly connected components of the subgraph induced by `members`.
///
/// `succ(v, buf)` must append the out-neighbours of `v` to `buf`; neighbours
/// outside `members` are ignored. Uses Gabow's path-based algorithm with an
/// explicit call stack. Components come out sinks first (reverse topological
/// order of the condensation), each sorted ascending.
pub fn components<F>(n: usize, members: &[VertexId], mut succ: F) -> Vec<Vec<VertexId>>
where
    F: FnMut(VertexId, &mut Vec<VertexId>),
{
    const UNSEEN: usize = usize::MAX;
    const DONE: usize = usize::MAX - 1;
    let mut inside = vec![false; n];
    for &v in members {
        inside[v] = true;
    }
    let mut pre = vec![UNSEEN; n];
    let mut counter = 0;
    let mut path: Vec<VertexId> = Vec::new();
    let mut bounds: Vec<usize> = Vec::new();
    let mut frames: Vec<(VertexId, Vec<VertexId>, usize)> = Vec::new();
    let mut out = Vec::new();

    for &start in members {
        if pre[start] != UNSEEN {
            continue;
        }
        let mut enter = |v: VertexId, pre: &mut Vec<usize>, path: &mut Vec<VertexId>, bounds: &mut Vec<usize>| {
            pre[v] = counter;
            counter += 1;
            path.push(v);
            bounds.push(pre[v]);
            let mut nbrs = Vec::new();
            succ(v, &mut nbrs);
            nbrs.retain(|&w| inside[w]);
            (v, nbrs, 0)
        };
        let f = enter(start, &mut pre, &mut path, &mut bounds);
        frames.push(f);
        while let Some((v, nbrs, pos)) = frames.last_mut() {
            if let Some(&w) = nbrs.get(*pos) {
                *pos += 1;
                match pre[w] {
                    UNSEEN => {
                        let f = enter(w, &mut pre, &mut path, &mut bounds);
                        frames.push(f);
                    }
                    DONE => {}
                    p => {
                        while bounds.last().is_some_and(|&b| b > p) {
                            bounds.pop();
                        }
                    }
                }
                continue;
            }
            let v = *v;
            frames.pop();
            if bounds.last() == Some(&pre[v]) {
                bounds.pop();
                let mut comp = Vec::new();
                loop {
                    let w = path.pop().expect("vertex on path");
                    pre[w] = DONE;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}
