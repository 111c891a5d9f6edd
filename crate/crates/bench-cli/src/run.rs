use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use ato::{Ato, AtoConfig};
use es_tree::{Direction, EsTree};
use ges_tree::GesTree;
use graph_core::{DynamicDigraph, EdgeId, Mode, Update, VertexId, INF};
use lazy_es_tree::{TauBank, WeightedGrid};
use oracles::checks::{check_nesting, check_topological_order};
use oracles::{bfs, dijkstra, s_distance, s_distance_to, tarjan, Snapshot, UNREACHABLE};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scc_hierarchy::{Hierarchy, Reachability};
use threshold_sssp::{topological_numbering, BucketedTree, DagBank};

use crate::workload::{Workload, WorkloadMode};
use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum Algo {
    Es,
    Ges,
    Scc,
    Ssr,
    Ato,
    DagSssp,
    AtoSssp,
    IncSssp,
    IncSsspWeighted,
}

impl Algo {
    pub const ALL: [Algo; 9] = [
        Algo::Es,
        Algo::Ges,
        Algo::Scc,
        Algo::Ssr,
        Algo::Ato,
        Algo::DagSssp,
        Algo::AtoSssp,
        Algo::IncSssp,
        Algo::IncSsspWeighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Es => "es",
            Algo::Ges => "ges",
            Algo::Scc => "scc",
            Algo::Ssr => "ssr",
            Algo::Ato => "ato",
            Algo::DagSssp => "dag-sssp",
            Algo::AtoSssp => "ato-sssp",
            Algo::IncSssp => "inc-sssp",
            Algo::IncSsspWeighted => "inc-sssp-weighted",
        }
    }

    /// Workload modes the structure accepts.
    pub fn accepts(self, mode: WorkloadMode) -> bool {
        match self {
            Algo::Es => true,
            Algo::IncSssp | Algo::IncSsspWeighted => mode == WorkloadMode::Incremental,
            _ => mode == WorkloadMode::Decremental,
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| BenchError::BadParams(format!("unknown algo: {s}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub algo: Algo,
    pub eps: f64,
    pub delta: Option<u64>,
    /// Verify every k-th stage; 0 disables.
    pub verify_every: u64,
    pub oracle: bool,
    pub seed: u64,
    /// Corrupt one answer at this stage before comparing.
    pub inject_fault: Option<u64>,
}

impl RunConfig {
    pub fn new(algo: Algo) -> Self {
        RunConfig { algo, eps: 0.5, delta: None, verify_every: 1, oracle: true, seed: 0, inject_fault: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub stage: u64,
    pub op: String,
    pub cumulative_micros: u64,
    pub verified: bool,
    pub max_rel_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub algo: Algo,
    pub n: usize,
    pub seed: u64,
    pub stages: u64,
    pub total_micros: u64,
    /// Time spent recomputing the static oracle after every update.
    pub baseline_micros: u64,
    /// Work counter of the dynamic structure (scans, decrements, ...).
    pub events: u64,
    /// Vertices plus alive edges touched by the per-update recomputation.
    pub baseline_events: u64,
    /// Peak resident set of the process, where the platform reports it.
    pub peak_memory_bytes: Option<u64>,
    pub max_rel_error: Option<f64>,
}

impl Summary {
    pub fn time_ratio(&self) -> f64 {
        self.total_micros as f64 / self.baseline_micros.max(1) as f64
    }

    pub fn event_ratio(&self) -> f64 {
        self.events as f64 / self.baseline_events.max(1) as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub rows: Vec<Row>,
    pub summary: Summary,
}

fn op_text(u: &Update) -> String {
    match *u {
        Update::Delete { u, v } => format!("D {u} {v}"),
        Update::Insert { u, v, w } => format!("I {u} {v} {w}"),
        Update::IncreaseWeight { u, v, w } => format!("W {u} {v} {w}"),
    }
}

/// Compares claimed against true distances. `band` restricts the
/// relative-error cap to vertices with true distance in `[lo, hi)`.
fn compare_distances(
    claimed: &[u64],
    truth: &[u64],
    factor: f64,
    band: (u64, u64),
) -> Result<Option<f64>, String> {
    let mut worst: f64 = 0.0;
    for (v, (&c, &d)) in claimed.iter().zip(truth).enumerate() {
        if d == INF {
            if c != INF {
                return Err(format!("vertex {v}: claimed {c}, unreachable"));
            }
            continue;
        }
        if c < d {
            return Err(format!("vertex {v}: claimed {c} below distance {d}"));
        }
        if d > 0 && d >= band.0 && d < band.1 {
            if c == INF || c as f64 > factor * d as f64 + 1e-9 {
                return Err(format!("vertex {v}: claimed {c} above {factor}·{d}"));
            }
            worst = worst.max((c - d) as f64 / d as f64);
        }
    }
    Ok(Some(worst))
}

/// Claims distance 0 for a non-root vertex, which positive weights rule out.
fn corrupt(values: &mut [u64], root: VertexId) {
    if let Some(v) = (0..values.len()).rev().find(|&v| v != root) {
        values[v] = 0;
    }
}

enum Subject {
    Es(EsTree),
    Ges(GesTree, Vec<bool>),
    Scc(Box<Hierarchy>),
    Ssr(Box<Reachability>),
    Ato(Box<Ato>, Option<(Vec<usize>, Vec<usize>)>),
    DagSssp(DagBank),
    AtoSssp(Box<Ato>, BucketedTree),
    IncSssp(TauBank),
    IncSsspWeighted(WeightedGrid),
}

fn structure<E: fmt::Display>(e: E) -> BenchError {
    BenchError::Structure(e.to_string())
}

fn labels(a: &Ato) -> (Vec<usize>, Vec<usize>) {
    let n = a.n();
    ((0..n).map(|v| a.node_of(v)).collect(), (0..n).map(|v| a.tau_of(v)).collect())
}

impl Subject {
    fn build(w: &Workload, g: &DynamicDigraph, cfg: &RunConfig) -> Result<Self, BenchError> {
        let n = w.n;
        let wmax = w.max_weight();
        let pairs = || g.alive_edges().map(|(_, u, v, _)| (u, v));
        Ok(match cfg.algo {
            Algo::Es => {
                let depth = cfg.delta.unwrap_or(n as u64 * wmax);
                Subject::Es(EsTree::new(g, 0, depth, Direction::Out).map_err(structure)?)
            }
            Algo::Ges => {
                let mut order: Vec<VertexId> = (0..n).collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
                let mut rank = vec![0; n];
                for (i, &v) in order.iter().enumerate() {
                    rank[v] = i;
                }
                let mut in_s = vec![false; n];
                for (_, u, v, _) in g.alive_edges() {
                    if rank[u] >= rank[v] {
                        in_s[u] = true;
                    }
                }
                let s: Vec<VertexId> = (0..n).filter(|&v| in_s[v]).collect();
                let nodes: Vec<Vec<VertexId>> = (0..n).map(|v| vec![v]).collect();
                let depth = cfg.delta.unwrap_or(n as u64);
                let edges = g.alive_edges().map(|(e, u, v, _)| (e, u, v));
                Subject::Ges(GesTree::new(&nodes, edges, 0, &s, depth).map_err(structure)?, in_s)
            }
            Algo::Scc => Subject::Scc(Box::new(
                Hierarchy::from_digraph(g, cfg.delta, cfg.seed).map_err(structure)?,
            )),
            Algo::Ssr => Subject::Ssr(Box::new(
                Reachability::new(n, pairs(), 0, cfg.delta, cfg.seed).map_err(structure)?,
            )),
            Algo::Ato => {
                let delta = cfg.delta.unwrap_or((2 * n as u64).max(16));
                Subject::Ato(Box::new(Ato::new(g, AtoConfig::new(delta), cfg.seed).map_err(structure)?), None)
            }
            Algo::DagSssp => {
                let edges: Vec<_> = g.alive_edges().map(|(_, u, v, w)| (u, v, w)).collect();
                let tau = topological_numbering(n, &edges).map_err(structure)?;
                Subject::DagSssp(DagBank::new(n, &edges, &tau, 0, cfg.eps).map_err(structure)?)
            }
            Algo::AtoSssp => {
                let delta = cfg.delta.unwrap_or((2 * n as u64).max(16));
                let a = Ato::new(g, AtoConfig::new(delta), cfg.seed).map_err(structure)?;
                let t = BucketedTree::over_ato(&a, 0, delta, cfg.eps, 1.0).map_err(structure)?;
                Subject::AtoSssp(Box::new(a), t)
            }
            Algo::IncSssp => {
                let mut b = TauBank::new(n, 0, cfg.eps).map_err(structure)?;
                for (u, v) in pairs() {
                    b.insert_edge(u, v).map_err(structure)?;
                }
                Subject::IncSssp(b)
            }
            Algo::IncSsspWeighted => {
                let mut grid = WeightedGrid::new(n, 0, cfg.eps, wmax).map_err(structure)?;
                for (_, u, v, w) in g.alive_edges() {
                    grid.insert_edge(u, v, w).map_err(structure)?;
                }
                Subject::IncSsspWeighted(grid)
            }
        })
    }

    fn update(&mut self, up: &Update, e: EdgeId) -> Result<(), BenchError> {
        let (u, v) = up.endpoints();
        let refuse = || BenchError::Structure(format!("update {} is not supported here", op_text(up)));
        match self {
            Subject::Es(t) => match *up {
                Update::Delete { .. } => t.delete_edge(u, v).map(|_| ()).map_err(structure),
                Update::Insert { w, .. } => t.insert_edge(u, v, w).map(|_| ()).map_err(structure),
                Update::IncreaseWeight { w, .. } => t.increase_weight(u, v, w).map(|_| ()).map_err(structure),
            },
            Subject::Ges(t, _) => match up {
                Update::Delete { .. } => t.delete_edge(e).map_err(structure),
                _ => Err(refuse()),
            },
            Subject::Scc(h) => match up {
                Update::Delete { .. } => h.delete_edge(e).map_err(structure),
                _ => Err(refuse()),
            },
            Subject::Ssr(r) => match up {
                Update::Delete { .. } => r.delete(u, v).map(|_| ()).map_err(structure),
                _ => Err(refuse()),
            },
            Subject::Ato(a, _) => match up {
                Update::Delete { .. } => a.delete(u, v).map(|_| ()).map_err(structure),
                _ => Err(refuse()),
            },
            Subject::DagSssp(b) => match up {
                Update::Delete { .. } => b.delete_edge(u, v).map_err(structure),
                _ => Err(refuse()),
            },
            Subject::AtoSssp(a, t) => match up {
                Update::Delete { .. } => {
                    a.delete(u, v).map_err(structure)?;
                    let changes = a.last_changes();
                    t.delete_with_changes(u, v, a.as_ref(), &changes).map(|_| ()).map_err(structure)
                }
                _ => Err(refuse()),
            },
            Subject::IncSssp(b) => b.apply(up).map_err(structure),
            Subject::IncSsspWeighted(g) => g.apply(up).map_err(structure),
        }
    }

    fn events(&self) -> u64 {
        match self {
            Subject::Es(t) => t.total_scans(),
            Subject::Ges(t, _) => t.scans().iter().sum(),
            Subject::Scc(h) => h.tree_scans(),
            Subject::Ssr(r) => r.hierarchy().tree_scans(),
            Subject::Ato(a, _) => a.stats().tree_scans + a.stats().removed_edges,
            Subject::DagSssp(b) => {
                b.trees().iter().map(|t| t.stats().bucket_scans + t.stats().edge_checks).sum()
            }
            Subject::AtoSssp(a, t) => {
                a.stats().tree_scans + t.stats().bucket_scans + t.stats().edge_checks
            }
            Subject::IncSssp(b) => b
                .instances()
                .iter()
                .map(|t| t.stats().decrements + t.stats().queue_pushes)
                .sum(),
            Subject::IncSsspWeighted(g) => g
                .instances()
                .iter()
                .map(|c| c.tree.stats().decrements + c.tree.stats().queue_pushes)
                .sum(),
        }
    }

    /// Checks the structure against the oracle on `g`; `Ok` carries the
    /// largest relative error where one is defined.
    fn check(&mut self, g: &DynamicDigraph, eps: f64, fault: bool) -> Result<Option<f64>, String> {
        let snap = Snapshot::of(g);
        let n = g.n();
        let weighted_truth = || {
            dijkstra(&snap, 0).into_iter().map(|d| if d == UNREACHABLE { INF } else { d }).collect::<Vec<_>>()
        };
        match self {
            Subject::Es(t) => {
                let mut got = t.estimates().to_vec();
                if fault {
                    corrupt(&mut got, 0);
                }
                let truth: Vec<u64> =
                    weighted_truth().into_iter().map(|d| if d > t.depth() { INF } else { d }).collect();
                compare_distances(&got, &truth, 1.0, (0, INF))
            }
            Subject::Ges(t, in_s) => {
                let cap = |d: u64| if d == UNREACHABLE || d > t.depth() { INF } else { d };
                let out = s_distance(&snap, 0, in_s);
                let inn = s_distance_to(&snap, 0, in_s);
                for v in 0..n {
                    let mut got = t.dist_out(v);
                    if fault && v == n - 1 {
                        got = got.wrapping_add(1);
                    }
                    if got != cap(out[v]) || t.dist_in(v) != cap(inn[v]) {
                        return Err(format!(
                            "vertex {v}: S-distances {}/{} vs oracle {}/{}",
                            got,
                            t.dist_in(v),
                            cap(out[v]),
                            cap(inn[v])
                        ));
                    }
                }
                Ok(Some(0.0))
            }
            Subject::Scc(h) => {
                let truth = tarjan(&snap);
                let mut ours: Vec<usize> = (0..n).map(|v| h.scc_id(v)).collect();
                if fault && n > 1 {
                    // Join the last vertex to vertex 0's component, or split it off.
                    ours[n - 1] = if ours[n - 1] == ours[0] { usize::MAX } else { ours[0] };
                }
                same_partition(&ours, &truth)?;
                Ok(Some(0.0))
            }
            Subject::Ssr(r) => {
                let truth = bfs(&snap, r.source());
                for (v, &d) in truth.iter().enumerate() {
                    let got = r.reachable(v) != (fault && v == n - 1);
                    if got != (d != UNREACHABLE) {
                        return Err(format!("vertex {v}: reachable {got}, oracle {}", d != UNREACHABLE));
                    }
                }
                Ok(Some(0.0))
            }
            Subject::Ato(a, prev) => {
                let gs = Snapshot::new(a.n(), a.edges().map(|(_, u, v, w)| (u, v, w)));
                let pruned = Snapshot::new(a.n(), a.pruned_edges().map(|(_, u, v, w)| (u, v, w)));
                let (node_of, mut tau_of) = labels(a);
                if fault && n > 0 {
                    tau_of[n - 1] = n + 1;
                }
                check_topological_order(&gs, &pruned, &node_of, &tau_of, |k| a.diameter_bound(k))?;
                if let Some((pn, pt)) = prev.as_ref() {
                    check_nesting(pn, pt, &node_of, &tau_of)?;
                }
                *prev = Some((node_of, tau_of));
                Ok(None)
            }
            Subject::DagSssp(b) => {
                let mut got: Vec<u64> = (0..n).map(|v| b.distance(v)).collect();
                if fault {
                    corrupt(&mut got, 0);
                }
                compare_distances(&got, &weighted_truth(), 1.0 + 4.0 * eps, (0, INF))
            }
            Subject::AtoSssp(_, t) => {
                let mut got: Vec<u64> = (0..n).map(|v| t.estimate(v)).collect();
                if fault {
                    corrupt(&mut got, 0);
                }
                let truth = weighted_truth();
                for (v, (&c, &d)) in got.iter().zip(&truth).enumerate() {
                    if c < d {
                        return Err(format!("vertex {v}: estimate {c} below distance {d}"));
                    }
                }
                let worst = got
                    .iter()
                    .zip(&truth)
                    .filter(|&(&c, &d)| c != INF && d != INF && d > 0)
                    .map(|(&c, &d)| (c - d) as f64 / d as f64)
                    .fold(0.0, f64::max);
                Ok(Some(worst))
            }
            Subject::IncSssp(b) => {
                let mut got = b.global_distances();
                if fault {
                    corrupt(&mut got, 0);
                }
                compare_distances(&got, &weighted_truth(), 1.0 + eps, (0, INF))
            }
            Subject::IncSsspWeighted(grid) => {
                let mut got = grid.distances();
                if fault {
                    corrupt(&mut got, 0);
                }
                compare_distances(&got, &weighted_truth(), 1.0 + eps, (0, INF))
            }
        }
    }
}

fn same_partition(ours: &[usize], truth: &[usize]) -> Result<(), String> {
    use std::collections::HashMap;
    let mut fwd: HashMap<usize, usize> = HashMap::new();
    let mut back: HashMap<usize, usize> = HashMap::new();
    for v in 0..ours.len() {
        let a = *fwd.entry(ours[v]).or_insert(truth[v]);
        let b = *back.entry(truth[v]).or_insert(ours[v]);
        if a != truth[v] || b != ours[v] {
            return Err(format!("vertex {v}: component labels disagree with the oracle"));
        }
    }
    Ok(())
}

fn baseline(algo: Algo, snap: &Snapshot) {
    match algo {
        Algo::Scc => {
            tarjan(snap);
        }
        Algo::Ssr => {
            bfs(snap, 0);
        }
        Algo::Ges => {
            let in_s = vec![true; snap.n()];
            s_distance(snap, 0, &in_s);
            s_distance_to(snap, 0, &in_s);
        }
        _ => {
            dijkstra(snap, 0);
        }
    }
}

fn peak_memory() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

pub fn run(w: &Workload, cfg: &RunConfig) -> Result<RunReport, BenchError> {
    if !cfg.algo.accepts(w.mode) {
        return Err(BenchError::IncompatibleMode { algo: cfg.algo.name(), mode: w.mode.name() });
    }
    if cfg.algo == Algo::IncSssp && w.max_weight() > 1 {
        return Err(BenchError::BadParams("inc-sssp needs unit weights".into()));
    }
    if !(cfg.eps > 0.0 && cfg.eps.is_finite()) {
        return Err(BenchError::BadParams(format!("eps = {}", cfg.eps)));
    }
    let mode = match w.mode {
        WorkloadMode::Decremental => Mode::Decremental,
        WorkloadMode::Incremental => Mode::Incremental,
    };
    let mut g = DynamicDigraph::from_edges(w.n, mode, w.initial.iter().copied())?;
    let mut subject = Subject::build(w, &g, cfg)?;
    let verify_at = |s: u64| cfg.oracle && cfg.verify_every > 0 && s % cfg.verify_every == 0;
    let fail = |stage: u64, witness: String| BenchError::VerificationFailure { stage, witness };
    let mut worst: Option<f64> = None;
    if verify_at(0) {
        let r = subject.check(&g, cfg.eps, cfg.inject_fault == Some(0)).map_err(|e| fail(0, e))?;
        worst = r;
    }
    let mut rows = Vec::with_capacity(w.updates.len());
    let mut micros = 0u64;
    let mut baseline_micros = 0u64;
    let mut baseline_events = 0u64;
    for (i, up) in w.updates.iter().enumerate() {
        let stage = i as u64 + 1;
        let e = g.apply(up)?;
        let t0 = Instant::now();
        subject.update(up, e)?;
        micros += t0.elapsed().as_micros() as u64;
        let snap = Snapshot::of(&g);
        let t1 = Instant::now();
        baseline(cfg.algo, &snap);
        baseline_micros += t1.elapsed().as_micros() as u64;
        baseline_events += (g.n() + g.alive_edge_count()) as u64;
        let verified = verify_at(stage);
        let mut err = None;
        if verified {
            err = subject
                .check(&g, cfg.eps, cfg.inject_fault == Some(stage))
                .map_err(|e| fail(stage, e))?;
            if let Some(x) = err {
                worst = Some(worst.map_or(x, |y| y.max(x)));
            }
        }
        rows.push(Row {
            stage,
            op: op_text(up),
            cumulative_micros: micros,
            verified,
            max_rel_error: if verified { Some(err.unwrap_or(0.0)) } else { None },
        });
    }
    let summary = Summary {
        algo: cfg.algo,
        n: w.n,
        seed: cfg.seed,
        stages: w.updates.len() as u64,
        total_micros: micros,
        baseline_micros,
        events: subject.events(),
        baseline_events,
        peak_memory_bytes: peak_memory(),
        max_rel_error: worst,
    };
    Ok(RunReport { rows, summary })
}
