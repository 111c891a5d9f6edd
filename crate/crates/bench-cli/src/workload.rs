use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use graph_core::io::{parse_graph, parse_updates, write_graph, write_updates};
use graph_core::{Update, VertexId, Weight};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum Model {
    Erdos,
    Path,
    Grid,
    LayeredDag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum WorkloadMode {
    Decremental,
    Incremental,
}

macro_rules! names {
    ($t:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl $t {
            pub fn name(self) -> &'static str {
                match self { $(<$t>::$v => $s),* }
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
        impl FromStr for $t {
            type Err = BenchError;
            fn from_str(s: &str) -> Result<Self, BenchError> {
                match s {
                    $($s => Ok(<$t>::$v),)*
                    _ => Err(BenchError::BadParams(format!("unknown {}: {s}", stringify!($t)))),
                }
            }
        }
    };
}

names!(Model { Erdos => "erdos", Path => "path", Grid => "grid", LayeredDag => "layered-dag" });
names!(WorkloadMode { Decremental => "decremental", Incremental => "incremental" });

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub n: usize,
    /// Edge count; `None` picks the model's default.
    pub m: Option<usize>,
    pub model: Model,
    pub mode: WorkloadMode,
    pub seed: u64,
    pub max_weight: Weight,
}

impl GenParams {
    pub fn new(n: usize, model: Model, mode: WorkloadMode, seed: u64) -> Self {
        GenParams { n, m: None, model, mode, seed, max_weight: 1 }
    }
}

/// An initial graph plus an update sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Workload {
    pub n: usize,
    pub model: Model,
    pub mode: WorkloadMode,
    pub seed: u64,
    pub initial: Vec<(VertexId, VertexId, Weight)>,
    pub updates: Vec<Update>,
}

fn grid_width(n: usize) -> usize {
    let rows = ((n as f64).sqrt().floor() as usize).max(1);
    n.div_ceil(rows)
}

fn layer_of(v: usize, n: usize) -> usize {
    let layers = ((n as f64).sqrt().round() as usize).max(2);
    v * layers / n
}

/// Every arc the model allows, in a fixed order. `None` for Erdős graphs,
/// whose candidate set is all ordered pairs.
fn pool(n: usize, model: Model) -> Option<Vec<(VertexId, VertexId)>> {
    match model {
        Model::Erdos => None,
        Model::Path => Some((0..n.saturating_sub(1)).map(|v| (v, v + 1)).collect()),
        Model::Grid => {
            let c = grid_width(n);
            let mut arcs = Vec::new();
            for v in 0..n {
                let right = (v % c + 1 < c && v + 1 < n).then_some(v + 1);
                let down = (v + c < n).then_some(v + c);
                for w in [right, down].into_iter().flatten() {
                    arcs.push((v, w));
                    arcs.push((w, v));
                }
            }
            Some(arcs)
        }
        Model::LayeredDag => {
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    let (a, b) = (layer_of(u, n), layer_of(v, n));
                    if a < b && b <= a + 2 {
                        arcs.push((u, v));
                    }
                }
            }
            Some(arcs)
        }
    }
}

pub fn gen(p: &GenParams) -> Result<Workload, BenchError> {
    if p.n == 0 {
        return Err(BenchError::BadParams("n must be positive".into()));
    }
    if p.max_weight == 0 {
        return Err(BenchError::BadParams("max weight must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let candidates = pool(p.n, p.model);
    let cap = match &candidates {
        None => p.n * (p.n - 1),
        Some(c) => c.len(),
    };
    let m = p.m.unwrap_or(match p.model {
        Model::Erdos => (4 * p.n).min(cap),
        Model::LayeredDag => (3 * p.n).min(cap),
        Model::Path | Model::Grid => cap,
    });
    if m > cap {
        return Err(BenchError::BadParams(format!(
            "m = {m} exceeds the {} cap of {cap} for n = {}",
            p.model, p.n
        )));
    }
    let pairs: Vec<(VertexId, VertexId)> = match candidates {
        Some(mut c) => {
            c.shuffle(&mut rng);
            c.truncate(m);
            c
        }
        None if 4 * m <= cap => {
            let mut seen = HashSet::new();
            let mut out = Vec::with_capacity(m);
            while out.len() < m {
                let u = rng.random_range(0..p.n);
                let v = rng.random_range(0..p.n);
                if u != v && seen.insert((u, v)) {
                    out.push((u, v));
                }
            }
            out
        }
        None => {
            let mut all: Vec<_> = (0..p.n)
                .flat_map(|u| (0..p.n).filter(move |&v| v != u).map(move |v| (u, v)))
                .collect();
            all.shuffle(&mut rng);
            all.truncate(m);
            all
        }
    };
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, rng.random_range(1..=p.max_weight)))
        .collect();
    let mut order = edges.clone();
    order.shuffle(&mut rng);
    let (initial, updates) = match p.mode {
        WorkloadMode::Decremental => {
            (edges, order.into_iter().map(|(u, v, _)| Update::Delete { u, v }).collect())
        }
        WorkloadMode::Incremental => {
            (Vec::new(), order.into_iter().map(|(u, v, w)| Update::Insert { u, v, w }).collect())
        }
    };
    Ok(Workload { n: p.n, model: p.model, mode: p.mode, seed: p.seed, initial, updates })
}

const TAG: &str = "# dygraph";

impl Workload {
    pub fn max_weight(&self) -> Weight {
        let ups = self.updates.iter().filter_map(|u| match *u {
            Update::Insert { w, .. } | Update::IncreaseWeight { w, .. } => Some(w),
            Update::Delete { .. } => None,
        });
        self.initial.iter().map(|e| e.2).chain(ups).max().unwrap_or(1)
    }

    /// Graph file text (with a metadata comment line) and update file text.
    pub fn to_text(&self) -> (String, String) {
        let head = format!("{TAG} model={} mode={} seed={}\n", self.model, self.mode, self.seed);
        (head + &write_graph(self.n, &self.initial), write_updates(&self.updates))
    }

    pub fn from_text(graph: &str, updates: &str) -> Result<Self, BenchError> {
        let meta = graph
            .lines()
            .find_map(|l| l.strip_prefix(TAG))
            .ok_or_else(|| BenchError::BadParams("graph file lacks the workload header".into()))?;
        let mut model = None;
        let mut mode = None;
        let mut seed = None;
        for kv in meta.split_whitespace() {
            match kv.split_once('=') {
                Some(("model", v)) => model = Some(v.parse()?),
                Some(("mode", v)) => mode = Some(v.parse()?),
                Some(("seed", v)) => {
                    seed = Some(v.parse().map_err(|_| BenchError::BadParams(format!("bad seed {v}")))?)
                }
                _ => return Err(BenchError::BadParams(format!("bad header field {kv}"))),
            }
        }
        let missing = |f: &str| BenchError::BadParams(format!("header lacks {f}"));
        let (n, initial) = parse_graph(graph)?;
        Ok(Workload {
            n,
            model: model.ok_or_else(|| missing("model"))?,
            mode: mode.ok_or_else(|| missing("mode"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
            initial,
            updates: parse_updates(updates)?,
        })
    }

    /// Writes `<base>.graph` and `<base>.updates`.
    pub fn save(&self, base: &Path) -> Result<(), BenchError> {
        let (g, u) = self.to_text();
        std::fs::write(base.with_extension("graph"), g)?;
        std::fs::write(base.with_extension("updates"), u)?;
        Ok(())
    }

    pub fn load(base: &Path) -> Result<Self, BenchError> {
        let g = std::fs::read_to_string(base.with_extension("graph"))?;
        let u = std::fs::read_to_string(base.with_extension("updates"))?;
        Self::from_text(&g, &u)
    }
}
