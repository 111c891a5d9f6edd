use crate::{Direction, EsError, EsTree};
use graph_core::{DynamicDigraph, EdgeId, Mode, VertexId, Weight, INF};

/// One weight scale: a tree over the edges of weight at most `2^i`, each
/// rounded up to a multiple of `unit` and divided by it.
#[derive(Debug, Clone)]
struct Level {
    limit: u128,
    /// Rounding unit `floor(2^i / n^2)`, or 0 when that is below one and the
    /// integer weights are already multiples of it.
    unit: u64,
    tree: EsTree,
    /// Graph edge id to tree edge id.
    map: Vec<Option<EdgeId>>,
}

fn scale(unit: u64, w: Weight) -> Weight {
    if unit == 0 {
        w
    } else {
        w.div_ceil(unit)
    }
}

impl Level {
    fn scale(&self, w: Weight) -> Weight {
        scale(self.unit, w)
    }

    fn keeps(&self, w: Weight) -> bool {
        u128::from(w) <= self.limit
    }

    fn value(&self, v: VertexId) -> u64 {
        match self.tree.est(v) {
            INF => INF,
            d => d.saturating_mul(self.unit.max(1)),
        }
    }
}

/// Approximate distances from a root for graphs with arbitrary positive
/// weights, built from exact depth-capped trees, one per power-of-two scale.
///
/// Every level overestimates, and the level whose scale matches the true
/// distance is off by at most a factor `1 + 2/n`, so the reported value lies
/// in `[dist, (1 + 6ε) dist]` for every `ε >= 1/(3n)`.
#[derive(Debug, Clone)]
pub struct ScaledSssp {
    g: DynamicDigraph,
    root: VertexId,
    epsilon: f64,
    levels: Vec<Level>,
}

fn ceil_lg(x: u128) -> u32 {
    if x <= 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

impl ScaledSssp {
    pub fn new(g: &DynamicDigraph, root: VertexId, epsilon: f64) -> Result<Self, EsError> {
        if g.mode() == Mode::Mixed {
            return Err(EsError::WrongVariant {
                op: "construction on a mixed-mode graph",
                variant: "partially dynamic",
            });
        }
        let n = g.n().max(1) as u128;
        let top = ceil_lg(u128::from(g.max_weight()) * n) + 1;
        let incremental = g.mode() == Mode::Incremental;
        let levels = (0..=top.min(100))
            .map(|i| {
                let limit = 1u128 << i;
                let unit = u64::try_from(limit / (n * n)).unwrap_or(u64::MAX);
                let depth = if unit == 0 {
                    limit
                } else {
                    limit.div_ceil(u128::from(unit)) + n
                };
                let depth = u64::try_from(depth).unwrap_or(INF - 1);
                let mut map = Vec::with_capacity(g.edge_capacity());
                let mut arcs = Vec::new();
                for e in g.edges() {
                    if e.alive && u128::from(e.weight) <= limit {
                        map.push(Some(arcs.len()));
                        arcs.push((e.tail, e.head, scale(unit, e.weight), true));
                    } else {
                        map.push(None);
                    }
                }
                let tree = EsTree::from_arcs(g.n(), arcs, root, depth, Direction::Out, incremental);
                Level { limit, unit, tree, map }
            })
            .collect();
        Ok(Self {
            g: g.clone(),
            root,
            epsilon,
            levels,
        })
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn graph(&self) -> &DynamicDigraph {
        &self.g
    }

    /// Smallest estimate over all scales, [`INF`] if no scale reaches `v`.
    pub fn distance(&self, v: VertexId) -> u64 {
        self.levels.iter().map(|l| l.value(v)).min().unwrap_or(INF)
    }

    pub fn distances(&self) -> Vec<u64> {
        (0..self.g.n()).map(|v| self.distance(v)).collect()
    }

    /// Total repair-loop edge scans across all scales.
    pub fn total_scans(&self) -> u64 {
        self.levels.iter().map(|l| l.tree.total_scans()).sum()
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), EsError> {
        let e = self.g.delete_edge(u, v)?;
        for l in &mut self.levels {
            if let Some(a) = l.map[e].take() {
                l.tree.delete_edge_id(a)?;
            }
        }
        Ok(())
    }

    pub fn increase_weight(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<(), EsError> {
        let e = self.g.increase_weight(u, v, w)?;
        for l in &mut self.levels {
            let Some(a) = l.map[e] else { continue };
            if l.keeps(w) {
                let scaled = l.scale(w);
                l.tree.increase_weight_id(a, scaled)?;
            } else {
                l.map[e] = None;
                l.tree.delete_edge_id(a)?;
            }
        }
        Ok(())
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<(), EsError> {
        let e = self.g.insert_edge(u, v, w)?;
        for l in &mut self.levels {
            debug_assert_eq!(l.map.len(), e);
            if l.keeps(w) {
                let scaled = l.scale(w);
                let a = l.tree.insert_edge(u, v, scaled)?;
                l.map.push(Some(a));
            } else {
                l.map.push(None);
            }
        }
        Ok(())
    }
}
