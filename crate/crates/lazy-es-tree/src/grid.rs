use graph_core::{lg, Update, VertexId, Weight, INF};

use crate::tree::{LazyEsTree, LazyOptions};
use crate::LazyError;

/// Weight unit of the `(τ_hop, τ_depth)` instance.
pub fn alpha(eps: f64, tau_hop: u64, tau_depth: u64) -> f64 {
    eps * tau_depth as f64 / tau_hop as f64
}

/// `w` rounded up to a positive multiple of `alpha`, in units of `alpha`.
pub fn round_and_scale(w: Weight, alpha: f64) -> Weight {
    let q = w as f64 / alpha;
    // Absorb float noise so exact multiples are not pushed up a unit.
    ((q - 1e-9 * q.max(1.0)).ceil() as Weight).max(1)
}

#[derive(Clone, Debug)]
pub struct GridInstance {
    pub tau_hop: u64,
    pub tau_depth: u64,
    pub alpha: f64,
    pub tree: LazyEsTree,
}

impl GridInstance {
    /// The instance's estimate in original weight units.
    pub fn estimate(&self, v: VertexId) -> u64 {
        match self.tree.estimate(v) {
            INF => INF,
            e => {
                let x = self.alpha * e as f64;
                (x - 1e-9 * x.max(1.0)).ceil() as u64
            }
        }
    }
}

/// Weighted incremental distances as a grid of weight-aware lazy trees, one
/// per hop scale `2^i` and weight scale `2^j ≥ 2^i`.
///
/// Each instance uses `ε/4` internally so that rounding, late periodic scans
/// and heaviness together stay inside the `1+ε` band.
#[derive(Clone, Debug)]
pub struct WeightedGrid {
    root: VertexId,
    eps: f64,
    max_weight: Weight,
    cells: Vec<GridInstance>,
}

impl WeightedGrid {
    pub fn new(n: usize, root: VertexId, eps: f64, max_weight: Weight) -> Result<Self, LazyError> {
        Self::with_scale(n, root, eps, max_weight, 1.0)
    }

    pub fn with_scale(
        n: usize,
        root: VertexId,
        eps: f64,
        max_weight: Weight,
        scale: f64,
    ) -> Result<Self, LazyError> {
        if max_weight == 0 {
            return Err(LazyError::BadParameter("max_weight must be positive".into()));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(LazyError::BadParameter(format!("eps = {eps}")));
        }
        let inner = eps / 4.0;
        let hops = lg(n).ceil() as u32;
        let depths = ((n.max(2) as f64) * max_weight as f64).log2().ceil() as u32;
        let mut cells = Vec::new();
        for i in 0..hops {
            for j in i..depths.max(i + 1) {
                let (th, td) = (1u64 << i, 1u64 << j);
                let a = alpha(inner, th, td);
                let opts = LazyOptions::new(th, inner)
                    .weighted(round_and_scale(max_weight, a))
                    .depth((8.0 * th as f64 / inner).ceil() as u64)
                    .scale(scale);
                cells.push(GridInstance {
                    tau_hop: th,
                    tau_depth: td,
                    alpha: a,
                    tree: LazyEsTree::with_options(n, root, opts)?,
                });
            }
        }
        Ok(WeightedGrid { root, eps, max_weight, cells })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn instances(&self) -> &[GridInstance] {
        &self.cells
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<(), LazyError> {
        if w == 0 || w > self.max_weight {
            return Err(LazyError::WeightOutOfRange(w));
        }
        for c in &mut self.cells {
            c.tree.insert_edge(u, v, round_and_scale(w, c.alpha))?;
        }
        Ok(())
    }

    pub fn apply(&mut self, up: &Update) -> Result<(), LazyError> {
        match *up {
            Update::Insert { u, v, w } => self.insert_edge(u, v, w),
            _ => Err(LazyError::ModeViolation("only insertions are supported".into())),
        }
    }

    pub fn weighted_distance(&self, v: VertexId) -> u64 {
        if v == self.root {
            return 0;
        }
        self.cells.iter().map(|c| c.estimate(v)).min().unwrap_or(INF)
    }

    pub fn distances(&self) -> Vec<u64> {
        let n = self.cells.first().map_or(0, |c| c.tree.n());
        (0..n).map(|v| self.weighted_distance(v)).collect()
    }

    pub fn audit(&self) -> Result<(), String> {
        for c in &self.cells {
            c.tree
                .audit()
                .map_err(|e| format!("cell ({}, {}): {e}", c.tau_hop, c.tau_depth))?;
        }
        Ok(())
    }
}
