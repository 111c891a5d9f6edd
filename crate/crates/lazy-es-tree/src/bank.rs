use graph_core::{lg, Update, VertexId, INF};

use crate::tree::{LazyEsTree, LazyOptions};
use crate::LazyError;

/// One unweighted [`LazyEsTree`] per threshold `τ = 2^i`, `i < ⌈lg n⌉`,
/// all fed the same insertions.
#[derive(Clone, Debug)]
pub struct TauBank {
    root: VertexId,
    trees: Vec<LazyEsTree>,
}

impl TauBank {
    pub fn new(n: usize, root: VertexId, eps: f64) -> Result<Self, LazyError> {
        Self::with_scale(n, root, eps, 1.0)
    }

    /// Same as [`TauBank::new`] with both heaviness thresholds multiplied by
    /// `scale`.
    pub fn with_scale(n: usize, root: VertexId, eps: f64, scale: f64) -> Result<Self, LazyError> {
        let levels = lg(n).ceil() as u32;
        let trees = (0..levels)
            .map(|i| LazyEsTree::with_options(n, root, LazyOptions::new(1 << i, eps).scale(scale)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TauBank { root, trees })
    }

    pub fn instances(&self) -> &[LazyEsTree] {
        &self.trees
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), LazyError> {
        for t in &mut self.trees {
            t.insert_edge(u, v, 1)?;
        }
        Ok(())
    }

    pub fn apply(&mut self, up: &Update) -> Result<(), LazyError> {
        for t in &mut self.trees {
            t.apply(up)?;
        }
        Ok(())
    }

    fn best(&self, v: VertexId) -> Option<&LazyEsTree> {
        self.trees
            .iter()
            .filter(|t| t.estimate(v) != INF)
            .min_by_key(|t| t.estimate(v))
    }

    /// Smallest estimate over all thresholds, [`INF`] if none reaches `v`.
    pub fn global_distance(&self, v: VertexId) -> u64 {
        if v == self.root {
            return 0;
        }
        self.best(v).map_or(INF, |t| t.estimate(v))
    }

    pub fn global_distances(&self) -> Vec<u64> {
        let n = self.trees.first().map_or(0, |t| t.n());
        (0..n).map(|v| self.global_distance(v)).collect()
    }

    /// Certificate path in the instance holding the smallest estimate. Its
    /// length (edge count) is at most that estimate.
    pub fn global_path(&self, v: VertexId) -> Result<Option<Vec<(VertexId, VertexId)>>, LazyError> {
        if v == self.root {
            return Ok(Some(Vec::new()));
        }
        match self.best(v) {
            Some(t) => t.path(v),
            None => Ok(None),
        }
    }

    pub fn audit(&self) -> Result<(), String> {
        for t in &self.trees {
            t.audit().map_err(|e| format!("tau {}: {e}", t.tau()))?;
        }
        Ok(())
    }
}
