use graph_core::{flatten, io, DynamicDigraph, Mode, Partition, Update, VertexMask};
use proptest::prelude::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_edges(rng: &mut ChaCha8Rng, n: usize, m: usize, w: u64) -> Vec<(usize, usize, u64)> {
    (0..m)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(1..=w)))
        .collect()
}

#[test]
fn deleting_everything_in_random_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let edges = random_edges(&mut rng, 30, 200, 5);
    let mut g = DynamicDigraph::from_edges(30, Mode::Decremental, edges.clone()).unwrap();
    let mut order: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    order.shuffle(&mut rng);
    for (u, v) in order {
        g.delete_edge(u, v).unwrap();
        assert!(g.check_mirror());
        assert!(g.replay().unwrap().same_state(&g));
    }
    assert_eq!(g.stage(), 200);
    assert_eq!(g.alive_edge_count(), 0);
}

#[test]
fn inserting_a_path_matches_static_build() {
    let n = 25;
    let mut g = DynamicDigraph::new(n, Mode::Incremental);
    for v in 0..n - 1 {
        g.insert_edge(v, v + 1, 1).unwrap();
    }
    let built = DynamicDigraph::from_pairs(n, Mode::Incremental, (0..n - 1).map(|v| (v, v + 1))).unwrap();
    for v in 0..n {
        let a: Vec<_> = g.out_edges(v).iter().map(|&e| g.edge(e).head).collect();
        let b: Vec<_> = built.out_edges(v).iter().map(|&e| built.edge(e).head).collect();
        assert_eq!(a, b);
    }
}

#[test]
fn hundred_nested_splits_keep_a_partition() {
    let n = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut p = Partition::whole(n);
    let mut history = vec![p.clone()];
    for _ in 0..100 {
        let big: Vec<_> = p.nodes().filter(|(_, m)| m.len() >= 2).map(|(x, _)| x).collect();
        let Some(&node) = big.choose(&mut rng) else { break };
        let mut members = p.members(node).to_vec();
        members.shuffle(&mut rng);
        let k = rng.random_range(2..=members.len().min(4));
        let mut parts = vec![Vec::new(); k];
        for (i, v) in members.into_iter().enumerate() {
            parts[i % k].push(v);
        }
        let ids = p.split_node(node, &parts).unwrap();
        assert!(ids.contains(&node));
        let mut seen = vec![0; n];
        for (x, m) in p.nodes() {
            for &v in m {
                seen[v] += 1;
                assert_eq!(p.node_of(v), x);
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
        history.push(p.clone());
    }
    for w in history.windows(2) {
        assert!(w[1].refines(&w[0]));
    }
    assert!(p.refines(&history[0]));
}

#[test]
fn file_formats_drive_a_graph() {
    let text = "4 3\n0 1 2\n1 2 1\n2 3 4\n";
    let (n, edges) = io::parse_graph(text).unwrap();
    let mut g = DynamicDigraph::from_edges(n, Mode::Mixed, edges).unwrap();
    for up in io::parse_updates("D 0 1\nI 3 0 2\nW 3 0 5\n").unwrap() {
        g.apply(&up).unwrap();
    }
    assert_eq!(
        g.log().records(),
        &[
            Update::Delete { u: 0, v: 1 },
            Update::Insert { u: 3, v: 0, w: 2 },
            Update::IncreaseWeight { u: 3, v: 0, w: 5 }
        ]
    );
    let e = g.find_edge(3, 0).unwrap();
    assert_eq!(g.edge(e).weight, 5);
}

proptest! {
    #[test]
    fn induced_view_matches_filter(seed in 0u64..1000, n in 1usize..20, m in 0usize..60) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = random_edges(&mut rng, n, m, 3);
        let mut g = DynamicDigraph::from_edges(n, Mode::Decremental, edges.clone()).unwrap();
        if let Some(&(u, v, _)) = edges.first() {
            g.delete_edge(u, v).unwrap();
        }
        let xs: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        let mask = VertexMask::from_vertices(n, xs.iter().copied());
        let got: Vec<_> = g.induced(&mask).edges().map(|(e, ..)| e).collect();
        let want: Vec<_> = g
            .alive_edges()
            .filter(|&(_, u, v, _)| xs.contains(&u) && xs.contains(&v))
            .map(|(e, ..)| e)
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn mixed_updates_replay(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 8;
        let mut g = DynamicDigraph::from_edges(n, Mode::Mixed, random_edges(&mut rng, n, 12, 4)).unwrap();
        for _ in 0..30 {
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            let up = match rng.random_range(0..3) {
                0 => Update::Delete { u, v },
                1 => Update::Insert { u, v, w: rng.random_range(1..=4) },
                _ => Update::IncreaseWeight { u, v, w: rng.random_range(1..=4) },
            };
            let _ = g.apply(&up);
            prop_assert!(g.check_mirror());
        }
        prop_assert!(g.replay().unwrap().same_state(&g));
    }

    #[test]
    fn flatten_of_partition_is_everything(n in 1usize..40) {
        let p = Partition::singletons(n);
        let sets: Vec<Vec<usize>> = p.nodes().map(|(_, m)| m.to_vec()).collect();
        prop_assert_eq!(flatten(&sets), (0..n).collect::<Vec<_>>());
    }
}
