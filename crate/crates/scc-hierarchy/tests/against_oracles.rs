use oracles::{bfs, scc_labels, Snapshot, UNREACHABLE};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scc_hierarchy::{default_delta, Hierarchy, Reachability};

type Edges = Vec<(usize, usize)>;

fn erdos(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Edges {
    let mut e = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p.min(1.0)) {
                e.push((u, v));
            }
        }
    }
    e
}

/// Long cycles glued by chords, so marked distances exceed small depths.
fn ring_of_rings(n: usize, rng: &mut ChaCha8Rng) -> Edges {
    let mut e: Edges = (0..n).map(|v| (v, (v + 1) % n)).collect();
    for _ in 0..n / 3 {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            e.push((u, v));
        }
    }
    e
}

/// Dense forward arcs between consecutive layers plus a fifth of them
/// reversed: many separator vertices survive up to the last level at
/// small depths.
fn layered_with_back_arcs(n: usize, rng: &mut ChaCha8Rng) -> Edges {
    let width = 5;
    let mut e = Edges::new();
    for u in 0..n {
        let layer = u / width;
        for v in (layer + 1) * width..((layer + 3) * width).min(n) {
            if rng.random_bool(0.4) {
                e.push((u, v));
                if rng.random_bool(0.2) {
                    e.push((v, u));
                }
            }
        }
    }
    e
}

fn alive_pairs(edges: &Edges, gone: &[bool]) -> Edges {
    edges.iter().zip(gone).filter(|(_, &g)| !g).map(|(&e, _)| e).collect()
}

/// Checks the top partition against Tarjan and every level partition
/// against the components left once the next separator's edges are cut.
fn audit(h: &Hierarchy, n: usize, live: &Edges) {
    let want = scc_labels(&Snapshot::unweighted(n, live.iter().copied()));
    let top = h.partition(h.levels()).canonical_labels();
    assert_eq!(top, want, "top partition differs from Tarjan");
    h.check_structure().unwrap();
    for i in 1..=h.levels() {
        let mut cut = vec![false; n];
        for v in h.separator(i) {
            cut[v] = true;
        }
        let kept = live.iter().copied().filter(|&(u, v)| !cut[u] && !cut[v]);
        let labels = scc_labels(&Snapshot::unweighted(n, kept));
        assert_eq!(h.partition(i).canonical_labels(), labels, "partition {i} is not the component split");
    }
}

fn run(n: usize, edges: Edges, delta: u64, seed: u64) -> Hierarchy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut h = Hierarchy::with_delta(n, edges.iter().copied(), delta, seed).unwrap();
    let mut gone = vec![false; edges.len()];
    audit(&h, n, &edges);
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(&mut rng);
    for e in order {
        let (u, v) = edges[e];
        h.delete(u, v).unwrap();
        // The hierarchy deletes the smallest alive id, which may differ
        // from `e` for parallel edges; the multiset is what matters.
        let first = (0..edges.len()).find(|&f| !gone[f] && edges[f] == (u, v)).unwrap();
        gone[first] = true;
        audit(&h, n, &alive_pairs(&edges, &gone));
        assert!(h.budget_holds(), "separator budget exceeded: {:?}", h.separator_sizes());
    }
    h
}

#[test]
fn bridge_between_two_two_cycles() {
    let edges = vec![(0, 1), (1, 0), (2, 3), (3, 2), (1, 2), (3, 0)];
    let mut h = Hierarchy::new(4, edges, 3).unwrap();
    assert!(h.same_scc(0, 3));
    h.delete(3, 0).unwrap();
    assert!(h.same_scc(0, 1) && h.same_scc(2, 3) && !h.same_scc(1, 2));
    h.check_structure().unwrap();
}

#[test]
fn default_depth_matches_tarjan_on_random_graphs() {
    for seed in 0..40 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..40);
        let edges = erdos(n, 2.5 / n as f64, &mut rng);
        let h = run(n, edges, default_delta(n), seed);
        let sizes = h.separator_sizes();
        for w in sizes.windows(2) {
            assert!(w[1] <= w[0].div_ceil(2), "{sizes:?}");
        }
    }
}

#[test]
fn shallow_depth_exercises_every_repair_path() {
    let mut prunes = 0;
    let mut rebuilds = 0;
    for seed in 0..60 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let n = rng.random_range(20..70);
        let edges = if seed % 2 == 0 {
            ring_of_rings(n, &mut rng)
        } else {
            erdos(n, 1.6 / n as f64, &mut rng)
        };
        let delta = [32, 40, 64][seed as usize % 3];
        let h = run(n, edges, delta, seed);
        prunes += h.stats().prunes;
        rebuilds += h.stats().rebuilds.len();
    }
    assert!(prunes > 0 && rebuilds > 0, "prunes {prunes}, rebuilds {rebuilds}");
}

#[test]
fn last_level_never_cuts_a_live_component() {
    for seed in 0..30 {
        let mut rng = ChaCha8Rng::seed_from_u64(300 + seed);
        let n = rng.random_range(30..60);
        let edges = layered_with_back_arcs(n, &mut rng);
        run(n, edges, 32, seed);
    }
}

#[test]
fn full_deletion_sequence_on_120_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(120);
    let edges = erdos(120, 3.0 / 120.0, &mut rng);
    run(120, edges.clone(), default_delta(120), 7);
    run(120, edges, 32, 8);
}

#[test]
fn parallel_edges_need_every_copy_removed() {
    let mut h = Hierarchy::with_delta(2, [(0, 1), (0, 1), (1, 0)], 32, 0).unwrap();
    h.delete(0, 1).unwrap();
    assert!(h.same_scc(0, 1));
    h.delete(0, 1).unwrap();
    assert!(!h.same_scc(0, 1));
}

#[test]
fn cross_component_edges_are_inert() {
    // Two triangles joined one way only.
    let edges = vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)];
    let mut h = Hierarchy::new(6, edges, 2).unwrap();
    assert!(!h.same_scc(2, 3));
    h.delete(2, 3).unwrap();
    assert!(h.same_scc(0, 2) && h.same_scc(3, 5));
    h.check_structure().unwrap();
}

#[test]
fn centers_are_uniform() {
    let cycle: Edges = (0..5).map(|v| (v, (v + 1) % 5)).collect();
    let trials = 10_000;
    let mut counts = [0u32; 5];
    for seed in 0..trials {
        let h = Hierarchy::new(5, cycle.iter().copied(), seed).unwrap();
        let x = h.partition(1).node_of(0);
        counts[h.center(0, x).unwrap()] += 1;
    }
    let expect = trials as f64 / 5.0;
    let sigma = (trials as f64 * 0.2 * 0.8).sqrt();
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    for &c in &counts {
        assert!((c as f64 - expect).abs() <= 3.0 * sigma, "{counts:?}");
    }
    // 4 degrees of freedom: mean 4, standard deviation sqrt(8).
    assert!(chi2 <= 4.0 + 3.0 * 8f64.sqrt(), "chi2 {chi2}, {counts:?}");
}

#[test]
fn centers_repeat_under_a_fixed_seed() {
    let edges: Edges = (0..9).map(|v| (v, (v + 1) % 9)).collect();
    let a = Hierarchy::new(9, edges.iter().copied(), 42).unwrap();
    let b = Hierarchy::new(9, edges.iter().copied(), 42).unwrap();
    let x = a.partition(1).node_of(0);
    assert_eq!(a.center(0, x), b.center(0, x));
}

#[test]
fn reachability_matches_bfs() {
    for seed in 0..40 {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
        let n = rng.random_range(2..50);
        let edges = erdos(n, 2.0 / n as f64, &mut rng);
        let delta = if seed % 2 == 0 { None } else { Some(32) };
        let mut r = Reachability::new(n, edges.iter().copied(), 0, delta, seed).unwrap();
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.shuffle(&mut rng);
        let mut live = edges.clone();
        for e in order {
            let (u, v) = edges[e];
            r.delete(u, v).unwrap();
            let at = live.iter().position(|&p| p == (u, v)).unwrap();
            live.remove(at);
            let dist = bfs(&Snapshot::unweighted(n, live.iter().copied()), 0);
            for (v, &d) in dist.iter().enumerate() {
                assert_eq!(r.reachable(v), d != UNREACHABLE, "seed {seed}, vertex {v}");
            }
        }
    }
}
