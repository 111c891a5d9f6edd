use ato::{Ato, AtoConfig, ChangeSet};
use graph_core::INF;
use oracles::{bfs, dijkstra, Snapshot};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use threshold_sssp::{bucket_of, topological_numbering, BucketedTree, DagBank, SsspError};

type Edges = Vec<(usize, usize, u64)>;

/// Random DAG on a shuffled numbering; returns the edges and the numbering.
fn random_dag(n: usize, p: f64, max_w: u64, rng: &mut ChaCha8Rng) -> (Edges, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut tau = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        tau[v] = i;
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p.min(1.0)) {
                edges.push((order[i], order[j], rng.random_range(1..=max_w)));
            }
        }
    }
    edges.shuffle(rng);
    (edges, tau)
}

fn alive(edges: &Edges, dead: &[bool]) -> Edges {
    edges.iter().zip(dead).filter(|(_, &d)| !d).map(|(&e, _)| e).collect()
}

/// Deletes every edge in random order, checking the band and the charge
/// bound after each stage. Returns the number of band vertices checked.
fn band_run(n: usize, p: f64, max_w: u64, delta: u64, eps: f64, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (edges, tau) = random_dag(n, p, max_w, &mut rng);
    let root = (0..n).find(|&v| tau[v] == 0).unwrap();
    let mut t = BucketedTree::dag(n, &edges, &tau, root, delta, eps).unwrap();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(&mut rng);
    let mut dead = vec![false; edges.len()];
    let mut checked = 0;
    for step in 0..=order.len() {
        if step > 0 {
            let e = order[step - 1];
            t.delete_edge(edges[e].0, edges[e].1).unwrap();
            dead[e] = true;
        }
        let dist = dijkstra(&Snapshot::new(n, alive(&edges, &dead)), root);
        for v in 0..n {
            let est = t.estimate(v);
            assert!(est >= dist[v], "underestimate at {v}: {est} < {}", dist[v]);
            if dist[v] < delta {
                assert_ne!(est, INF, "vertex {v} at {} lost inside the band", dist[v]);
            }
            if dist[v] < delta && 2 * dist[v] >= delta {
                checked += 1;
                assert!(
                    est as f64 <= (1.0 + 4.0 * eps) * dist[v] as f64 + 1e-9,
                    "band miss at {v}: est {est}, dist {}, δ {delta}, ε {eps}",
                    dist[v]
                );
            }
        }
        t.audit().unwrap();
    }
    for v in 0..n {
        for (j, &c) in t.scan_counts(v).iter().enumerate() {
            let step = (2f64.powi(j as i32) * eps * delta as f64 / n as f64).ceil().max(1.0);
            let bound = (1.0 + 4.0 * eps) * delta as f64 / step + 1.0;
            assert!(c as f64 <= bound, "bucket {j} of {v} scanned {c} times, bound {bound}");
        }
    }
    checked
}

#[test]
fn initial_estimates_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let (edges, tau) = random_dag(80, 0.08, 1, &mut rng);
        let root = (0..80).find(|&v| tau[v] == 0).unwrap();
        let t = BucketedTree::dag(80, &edges, &tau, root, 256, 0.25).unwrap();
        let pairs: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        let want = bfs(&Snapshot::unweighted(80, pairs), root);
        for v in 0..80 {
            assert_eq!(t.estimate(v), want[v]);
        }
    }
    let (edges, tau) = random_dag(60, 0.1, 9, &mut rng);
    let t = BucketedTree::dag(60, &edges, &tau, 5, 1000, 0.1).unwrap();
    assert_eq!((0..60).map(|v| t.estimate(v)).collect::<Vec<_>>(), dijkstra(&Snapshot::new(60, edges), 5));
}

#[test]
fn buckets_hold_at_most_two_to_the_j() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (edges, tau) = random_dag(64, 0.3, 4, &mut rng);
        let t = BucketedTree::dag(64, &edges, &tau, 0, 32, 0.1).unwrap();
        for v in 0..64 {
            for j in 0..t.bucket_count() {
                let members: Vec<_> = t.bucket(v, j).collect();
                assert!(members.len() <= 1 << j);
                for u in members {
                    assert_eq!(bucket_of(tau[v] - tau[u]), j);
                }
            }
        }
    }
}

#[test]
fn band_holds_through_full_deletion() {
    let mut checked = 0;
    for (k, &eps) in [0.1, 0.25].iter().enumerate() {
        for seed in 0..12u64 {
            let n = 20 + (seed as usize * 5) % 61;
            let delta = [8, 16, 32, 64, 128][seed as usize % 5];
            let max_w = if seed % 3 == 0 { 1 } else { 6 };
            checked += band_run(n, 0.12, max_w, delta, eps, 100 * k as u64 + seed);
        }
    }
    assert!(checked > 200, "too few band vertices exercised: {checked}");
}

#[test]
fn coarse_steps_still_meet_the_band() {
    // Large εδ/n makes far buckets lazy.
    let mut checked = 0;
    for seed in 0..8 {
        checked += band_run(16, 0.35, 40, 200, 0.25, 900 + seed);
    }
    assert!(checked > 0);
}

#[test]
fn long_jump_error_is_bounded_by_its_bucket() {
    let n = 64;
    let eps = 0.25;
    let delta = 512;
    let mut edges: Edges = (0..n - 1).map(|v| (v, v + 1, 4)).collect();
    edges.push((0, n - 1, 300));
    let tau: Vec<usize> = (0..n).collect();
    let mut t = BucketedTree::dag(n, &edges, &tau, 0, delta, eps).unwrap();
    assert_eq!(t.estimate(n - 1), 4 * (n as u64 - 1));
    t.delete_edge(10, 11).unwrap();
    let j = bucket_of(n - 1);
    let est = t.estimate(n - 1);
    assert!(est >= 300);
    let allowance = 2f64.powi(j as i32 + 1) * eps * delta as f64 / n as f64;
    assert!((est - 300) as f64 <= allowance, "error {} above {allowance}", est - 300);
    t.audit().unwrap();
}

#[test]
fn bank_answers_within_the_band_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for round in 0..6 {
        let n = 30 + 8 * round;
        let (edges, tau) = random_dag(n, 0.15, 7, &mut rng);
        let root = (0..n).find(|&v| tau[v] == 0).unwrap();
        let eps = 0.1;
        let mut bank = DagBank::new(n, &edges, &tau, root, eps).unwrap();
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.shuffle(&mut rng);
        let mut dead = vec![false; edges.len()];
        for &e in order.iter().take(edges.len() * 2 / 3) {
            bank.delete_edge(edges[e].0, edges[e].1).unwrap();
            dead[e] = true;
            let dist = dijkstra(&Snapshot::new(n, alive(&edges, &dead)), root);
            for v in 0..n {
                let got = bank.distance(v);
                assert!(got >= dist[v]);
                if dist[v] == INF {
                    assert_eq!(got, INF);
                } else {
                    assert!(got as f64 <= (1.0 + 4.0 * eps) * dist[v] as f64 + 1e-9);
                }
            }
        }
    }
}

#[test]
fn numbering_helper_rejects_cycles() {
    assert!(topological_numbering(3, &[(0, 1, 1), (1, 2, 1)]).is_ok());
    assert!(matches!(topological_numbering(2, &[(0, 1, 1), (1, 0, 1)]), Err(SsspError::NotADag(..))));
}

// ---- over an approximate topological order ------------------------------

fn random_cyclic(n: usize, p: f64, max_w: u64, rng: &mut ChaCha8Rng) -> Edges {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                edges.push((u, v, rng.random_range(1..=max_w)));
            }
        }
    }
    edges
}

struct Outcome {
    splits: u64,
    contract_checks: usize,
    contract_misses: usize,
}

fn ato_run(n: usize, delta: u64, eps: f64, q: f64, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = random_cyclic(n, 3.0 / n as f64, 4, &mut rng);
    let mut ato = Ato::from_edges(n, edges.iter().copied(), AtoConfig::new(delta), seed).unwrap();
    let root = rng.random_range(0..n);
    let mut t = BucketedTree::over_ato(&ato, root, delta, eps, q).unwrap();
    assert_eq!(t.eta() as f64, ato.diameter_bound(n).ceil());
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(&mut rng);
    let mut dead = vec![false; edges.len()];
    let mut prev: Vec<u64> = (0..n).map(|v| t.estimate(v)).collect();
    let (mut checks, mut misses) = (0, 0);
    for &e in &order {
        let (u, v, _) = edges[e];
        ato.delete(u, v).unwrap();
        dead[e] = true;
        t.delete_with_changes(u, v, &ato, &ato.last_changes()).unwrap();
        t.audit().unwrap();
        t.audit_order(&ato).unwrap();
        let dist = dijkstra(&Snapshot::new(n, alive(&edges, &dead)), root);
        for x in 0..n {
            let est = t.estimate(x);
            assert!(est >= prev[x], "estimate of {x} went down");
            assert!(est >= dist[x], "underestimate at {x}: {est} < {}", dist[x]);
            if dist[x] <= delta {
                let (_, path) = ato.shortest_path(root, x).unwrap();
                let cost = ato.path_cost(&path).unwrap().total as f64;
                if cost <= q * delta as f64 + n as f64 {
                    checks += 1;
                    let cap = dist[x] as f64 + t.eta() as f64 + eps * delta as f64;
                    misses += usize::from(est as f64 > cap);
                }
            }
        }
        prev = (0..n).map(|v| t.estimate(v)).collect();
    }
    Outcome { splits: t.stats().splits, contract_checks: checks, contract_misses: misses }
}

#[test]
fn order_driven_runs_meet_the_contract() {
    let mut splits = 0;
    let mut checks = 0;
    for seed in 0..16 {
        let delta = [16, 32, 64, 128][seed as usize % 4];
        let out = ato_run(50, delta, 0.25, 1.0, 40 + seed);
        assert_eq!(out.contract_misses, 0, "seed {seed}");
        splits += out.splits;
        checks += out.contract_checks;
    }
    assert!(splits > 0, "no split was exercised");
    assert!(checks > 0);
}

#[test]
fn one_split_matches_a_rebuild() {
    // Two 3-cycles joined both ways; cutting one joint splits the node.
    let edges = [(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1), (2, 3, 1), (5, 0, 1)];
    let mut ato = Ato::from_edges(6, edges.iter().copied(), AtoConfig::new(64), 1).unwrap();
    assert_eq!(ato.nodes().len(), 1);
    let mut t = BucketedTree::over_ato(&ato, 0, 64, 0.25, 1.0).unwrap();
    let before = t.node_estimate(t.node_of(0));
    ato.delete(5, 0).unwrap();
    let changes = ato.last_changes();
    assert_eq!(changes.splits.len(), 1);
    assert_eq!(changes.splits[0].parts.len(), 2);
    t.delete_with_changes(5, 0, &ato, &changes).unwrap();
    t.audit().unwrap();
    let fresh = BucketedTree::over_ato(&ato, 0, 64, 0.25, 1.0).unwrap();
    for v in 0..6 {
        assert_eq!(t.node_of(v), fresh.node_of(v));
        assert!(t.estimate(v) >= fresh.estimate(v));
    }
    let other = t.node_of(3);
    assert_ne!(other, t.node_of(0));
    assert!(t.node_estimate(other) >= before);
    assert_eq!(t.estimate(3), fresh.estimate(3));
    for j in 0..t.bucket_count() {
        assert_eq!(t.bucket(other, j).collect::<Vec<_>>(), fresh.bucket(other, j).collect::<Vec<_>>());
    }
}

#[test]
fn mismatched_records_are_rejected() {
    let edges = [(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1), (2, 3, 1), (5, 0, 1)];
    let mut ato = Ato::from_edges(6, edges.iter().copied(), AtoConfig::new(64), 1).unwrap();
    let mut t = BucketedTree::over_ato(&ato, 0, 64, 0.25, 1.0).unwrap();
    ato.delete(5, 0).unwrap();
    let good = ato.last_changes();
    let stale = ChangeSet { from: 5, ..good.clone() };
    assert!(matches!(t.delete_with_changes(5, 0, &ato, &stale), Err(SsspError::InconsistentChangeRecord(_))));
    let empty = ChangeSet { splits: Vec::new(), ..good.clone() };
    assert!(matches!(t.delete_with_changes(5, 0, &ato, &empty), Err(SsspError::InconsistentChangeRecord(_))));
    let mut swapped = good.clone();
    let (a, b) = (swapped.splits[0].parts[0].0, swapped.splits[0].parts[1].0);
    swapped.splits[0].parts[0].0 = b;
    swapped.splits[0].parts[1].0 = a;
    assert!(matches!(t.delete_with_changes(5, 0, &ato, &swapped), Err(SsspError::InconsistentChangeRecord(_))));
    // Rejected records leave the tree untouched.
    t.audit().unwrap();
    t.delete_with_changes(5, 0, &ato, &good).unwrap();
    t.audit().unwrap();
}

#[test]
fn order_mode_without_splits_behaves_like_the_dag() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (edges, _) = random_dag(30, 0.15, 3, &mut rng);
    let mut ato = Ato::from_edges(30, edges.iter().copied(), AtoConfig::new(32), 9).unwrap();
    let root = (0..30).find(|&v| ato.tau_of(v) == 0).unwrap();
    let tau: Vec<usize> = (0..30).map(|v| ato.tau_of(v)).collect();
    // Quality n/δ with doubled ε gives both the same steps.
    let mut a = BucketedTree::over_ato(&ato, root, 32, 0.5, 30.0 / 32.0).unwrap();
    let mut d = BucketedTree::dag(30, &edges, &tau, root, 32, 0.25).unwrap();
    for &(u, v, _) in edges.iter().take(20) {
        ato.delete(u, v).unwrap();
        a.delete_with_changes(u, v, &ato, &ato.last_changes()).unwrap();
        d.delete_edge(u, v).unwrap();
        for x in (0..30).filter(|&x| d.estimate(x) <= a.depth()) {
            assert_eq!(a.node_estimate(a.node_of(x)), d.estimate(x));
        }
    }
}
