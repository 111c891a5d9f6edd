use crate::{Ato, AtoError};
use graph_core::{EdgeId, VertexId, Weight};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Both sums of `τ` differences along a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PathCost {
    /// `Σ |τ(tail) − τ(head)|`.
    pub total: u64,
    /// `Σ max(0, τ(tail) − τ(head))`, the steps that go back in the order.
    pub backward: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairQuality {
    pub s: VertexId,
    pub t: VertexId,
    /// Weight of the shortest path used.
    pub weight: Weight,
    pub cost: PathCost,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct QualityReport {
    /// Pairs with a path; unreachable pairs are left out.
    pub pairs: Vec<PairQuality>,
    pub mean_total: f64,
    pub max_total: u64,
    pub mean_backward: f64,
}

impl Ato {
    /// Costs of the path given as consecutive alive edges by id.
    pub fn path_cost(&self, path: &[EdgeId]) -> Result<PathCost, AtoError> {
        let mut cost = PathCost::default();
        let mut at: Option<VertexId> = None;
        for &e in path {
            if !self.is_alive(e) {
                return Err(AtoError::NotAPath(format!("edge {e} is not alive")));
            }
            let (u, v, _) = self.edge(e);
            if at.is_some_and(|a| a != u) {
                return Err(AtoError::NotAPath(format!("edge {e} does not start at {}", at.unwrap_or(u))));
            }
            let (a, b) = (self.tau_of(u) as i64, self.tau_of(v) as i64);
            cost.total += a.abs_diff(b);
            cost.backward += (a - b).max(0) as u64;
            at = Some(v);
        }
        Ok(cost)
    }

    /// [`Ato::path_cost`] for a path given by its vertex sequence, using the
    /// smallest-id alive edge between consecutive vertices.
    pub fn topological_cost(&self, vertices: &[VertexId]) -> Result<PathCost, AtoError> {
        let mut ids = Vec::with_capacity(vertices.len().saturating_sub(1));
        for w in vertices.windows(2) {
            let e = self
                .find_edge(w[0], w[1])
                .ok_or_else(|| AtoError::NotAPath(format!("no edge ({}, {})", w[0], w[1])))?;
            ids.push(e);
        }
        self.path_cost(&ids)
    }

    /// Shortest path from `s` to `t` in the current graph, as edge ids.
    pub fn shortest_path(&self, s: VertexId, t: VertexId) -> Option<(Weight, Vec<EdgeId>)> {
        let mut out: Vec<Vec<(EdgeId, VertexId, Weight)>> = vec![Vec::new(); self.n()];
        for (e, u, v, w) in self.edges() {
            out[u].push((e, v, w));
        }
        let mut dist = vec![Weight::MAX; self.n()];
        let mut via: Vec<Option<EdgeId>> = vec![None; self.n()];
        let mut heap = BinaryHeap::from([Reverse((0, s))]);
        dist[s] = 0;
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if u == t {
                break;
            }
            for &(e, v, w) in &out[u] {
                if d + w < dist[v] {
                    dist[v] = d + w;
                    via[v] = Some(e);
                    heap.push(Reverse((d + w, v)));
                }
            }
        }
        if dist[t] == Weight::MAX {
            return None;
        }
        let mut path = Vec::new();
        let mut x = t;
        while let Some(e) = via[x] {
            path.push(e);
            x = self.edge(e).0;
        }
        path.reverse();
        Some((dist[t], path))
    }

    /// Path costs along shortest paths for each pair; report only.
    pub fn quality_report(&self, pairs: &[(VertexId, VertexId)]) -> QualityReport {
        let mut report = QualityReport::default();
        for &(s, t) in pairs {
            if let Some((weight, path)) = self.shortest_path(s, t) {
                let cost = self.path_cost(&path).expect("shortest paths use alive edges");
                report.pairs.push(PairQuality { s, t, weight, cost });
            }
        }
        let k = report.pairs.len().max(1) as f64;
        report.mean_total = report.pairs.iter().map(|p| p.cost.total as f64).sum::<f64>() / k;
        report.mean_backward = report.pairs.iter().map(|p| p.cost.backward as f64).sum::<f64>() / k;
        report.max_total = report.pairs.iter().map(|p| p.cost.total).max().unwrap_or(0);
        report
    }
}

#[cfg(test)]
mod tests {
    use crate::{Ato, AtoConfig};

    #[test]
    fn single_vertex_path_costs_nothing() {
        let a = Ato::from_edges(2, [(0, 1, 1)], AtoConfig::new(16), 0).unwrap();
        assert_eq!(a.topological_cost(&[1]).unwrap().total, 0);
        assert_eq!(a.path_cost(&[]).unwrap().total, 0);
    }

    #[test]
    fn broken_paths_are_rejected() {
        let a = Ato::from_edges(3, [(0, 1, 1), (2, 1, 1)], AtoConfig::new(16), 0).unwrap();
        assert!(a.path_cost(&[0, 1]).is_err());
        assert!(a.topological_cost(&[0, 2]).is_err());
    }

    #[test]
    fn dag_path_cost_is_the_order_gap() {
        let a = Ato::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 9)], AtoConfig::new(16), 0).unwrap();
        let (w, p) = a.shortest_path(0, 3).unwrap();
        assert_eq!(w, 3);
        let c = a.path_cost(&p).unwrap();
        assert_eq!(c.total as usize, a.tau_of(3) - a.tau_of(0));
        assert_eq!(c.backward, 0);
    }
}
