use ges_tree::{GesError, GesTree};
use graph_core::INF;
use oracles::{s_distance, s_distance_to, Snapshot, UNREACHABLE};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random instance whose cost-0 edges respect a hidden order, so the
/// chosen feedback set is valid. Nodes are runs of consecutive non-feedback
/// vertices in that order.
struct Instance {
    n: usize,
    order: Vec<usize>,
    s: Vec<usize>,
    nodes: Vec<Vec<usize>>,
    edges: Vec<(usize, usize, usize)>,
}

fn instance(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut order = vec![0; n];
    for (i, &v) in perm.iter().enumerate() {
        order[v] = i;
    }
    let in_s: Vec<bool> = (0..n).map(|_| rng.random_bool(0.3)).collect();
    let mut edges = Vec::new();
    let m = rng.random_range(n..4 * n);
    while edges.len() < m {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if in_s[a] || order[a] < order[b] {
            edges.push((edges.len(), a, b));
        }
    }
    let mut nodes: Vec<Vec<usize>> = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    for &v in &perm {
        if in_s[v] {
            if !run.is_empty() {
                nodes.push(std::mem::take(&mut run));
            }
            nodes.push(vec![v]);
        } else {
            run.push(v);
            if rng.random_bool(0.4) {
                nodes.push(std::mem::take(&mut run));
            }
        }
    }
    if !run.is_empty() {
        nodes.push(run);
    }
    let s = (0..n).filter(|&v| in_s[v]).collect();
    Instance { n, order, s, nodes, edges }
}

/// Oracle distances per vertex on the contracted graph the tree describes.
fn oracle(t: &GesTree, n: usize) -> (Vec<u64>, Vec<u64>) {
    let nodes = t.nodes();
    let mut node_of = vec![usize::MAX; n];
    for (i, m) in nodes.iter().enumerate() {
        for &v in m {
            node_of[v] = i;
        }
    }
    let snap = Snapshot::unweighted(
        nodes.len(),
        t.edges()
            .map(|(_, a, b)| (node_of[a], node_of[b]))
            .filter(|(x, y)| x != y),
    );
    let in_s: Vec<bool> = nodes.iter().map(|m| m.len() == 1 && t.in_s(m[0])).collect();
    let r = node_of[t.root()];
    let cap = |d: u64| if d == UNREACHABLE || d > t.depth() { INF } else { d };
    let out = s_distance(&snap, r, &in_s);
    let inn = s_distance_to(&snap, r, &in_s);
    let per_vertex = |d: &[u64]| (0..n).map(|v| if node_of[v] == usize::MAX { INF } else { cap(d[node_of[v]]) }).collect();
    (per_vertex(&out), per_vertex(&inn))
}

fn check(t: &GesTree, n: usize) {
    let (out, inn) = oracle(t, n);
    for v in 0..n {
        assert_eq!(t.dist_out(v), out[v], "out distance of {v}");
        assert_eq!(t.dist_in(v), inn[v], "in distance of {v}");
    }
    let bad: Vec<usize> = (0..n).filter(|&v| t.contains(v) && (out[v] == INF || inn[v] == INF)).collect();
    match t.get_unreachable() {
        None => assert!(bad.is_empty()),
        Some(v) => assert!(bad.contains(&v)),
    }
    assert!(t.is_feedback_set());
}

fn run(seed: u64, n: usize, steps: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = instance(&mut rng, n);
    let root = rng.random_range(0..n);
    let depth = rng.random_range(1..6);
    let mut t = GesTree::new(&inst.nodes, inst.edges.iter().copied(), root, &inst.s, depth).unwrap();
    check(&t, n);
    for _ in 0..steps {
        match rng.random_range(0..10) {
            0..=4 => {
                let alive: Vec<usize> = t.edges().map(|(e, ..)| e).collect();
                if let Some(&e) = alive.choose(&mut rng) {
                    t.delete_edge(e).unwrap();
                }
            }
            5 => {
                let vs: Vec<usize> = t.vertices().into_iter().filter(|&v| v != root).collect();
                if let Some(&v) = vs.choose(&mut rng) {
                    t.delete_vertices(&[v]).unwrap();
                }
            }
            6 | 7 => {
                // Prefix/suffix split of a run node by the hidden order.
                let big: Vec<Vec<usize>> = t.nodes().into_iter().filter(|m| m.len() >= 2).collect();
                if let Some(m) = big.choose(&mut rng) {
                    let mut m = m.clone();
                    m.sort_by_key(|&v| inst.order[v]);
                    let cut = rng.random_range(1..m.len());
                    t.split_node(&m[..cut]).unwrap();
                }
            }
            8 => {
                let singles: Vec<usize> = t
                    .nodes()
                    .into_iter()
                    .filter(|m| m.len() == 1 && !t.in_s(m[0]))
                    .map(|m| m[0])
                    .collect();
                if let Some(&v) = singles.choose(&mut rng) {
                    t.augment(&[v]).unwrap();
                }
            }
            _ => {
                // Pull an arbitrary vertex out of its node and make it a
                // feedback vertex, the way a hierarchy refines a level.
                let big: Vec<Vec<usize>> = t.nodes().into_iter().filter(|m| m.len() >= 2).collect();
                if let Some(m) = big.choose(&mut rng) {
                    let &v = m.choose(&mut rng).unwrap();
                    let rest: Vec<usize> = m.iter().copied().filter(|&x| x != v).collect();
                    t.split_node_unchecked(&[vec![v], rest]).unwrap();
                    t.augment(&[v]).unwrap();
                }
            }
        }
        check(&t, n);
    }
}

#[test]
fn random_workloads_match_oracle() {
    for seed in 0..300 {
        let n = 10 + (seed as usize * 7) % 71;
        run(seed, n, 60);
    }
}

#[test]
fn augment_all_gives_hop_distance() {
    let edges = vec![(0, 0, 1), (1, 1, 2), (2, 2, 3), (3, 3, 0), (4, 0, 2)];
    let nodes: Vec<Vec<usize>> = (0..4).map(|v| vec![v]).collect();
    let mut t = GesTree::new(&nodes, edges, 0, &[0], 10).unwrap();
    t.augment(&[1, 2, 3]).unwrap();
    assert_eq!((0..4).map(|v| t.dist_out(v)).collect::<Vec<_>>(), vec![0, 1, 1, 2]);
    assert_eq!((0..4).map(|v| t.dist_in(v)).collect::<Vec<_>>(), vec![0, 3, 2, 1]);
}

#[test]
fn errors_are_reported() {
    let nodes = vec![vec![0], vec![1, 2]];
    let edges = vec![(10, 0, 1), (11, 1, 2), (12, 2, 0)];
    let mut t = GesTree::new(&nodes, edges, 0, &[0], 4).unwrap();
    assert_eq!(t.delete_edge(99), Err(GesError::NoSuchEdge(99)));
    assert_eq!(t.delete_vertices(&[7]), Err(GesError::NoSuchVertex(7)));
    assert_eq!(t.augment(&[1]), Err(GesError::NotSingleton(1)));
    assert!(matches!(t.split_node(&[0, 1]), Err(GesError::BadSplit(_))));
    assert!(GesTree::new(&nodes, vec![], 0, &[1], 4).is_err());
}

#[test]
fn scan_work_stays_within_budget() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let n = 60;
    let inst = instance(&mut rng, n);
    let m = inst.edges.len() as u64;
    let depth = 4;
    let mut t = GesTree::new(&inst.nodes, inst.edges.iter().copied(), 0, &inst.s, depth).unwrap();
    let mut order: Vec<usize> = (0..inst.edges.len()).collect();
    order.shuffle(&mut rng);
    for e in order {
        t.delete_edge(e).unwrap();
    }
    let [a, b] = t.scans();
    assert!(a <= (depth + 1) * m && b <= (depth + 1) * m, "{a} {b} {m}");
    let _ = inst.n;
}
