use crate::{EdgeId, GraphError, InducedSubgraph, VertexId, VertexMask, Weight};

/// Which kinds of updates a graph accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Deletions and weight increases only.
    Decremental,
    /// Insertions only.
    Incremental,
    /// Anything goes. Used for scratch graphs built by tests and tools.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: Weight,
    pub alive: bool,
}

/// One record of the update vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Update {
    Delete { u: VertexId, v: VertexId },
    Insert { u: VertexId, v: VertexId, w: Weight },
    IncreaseWeight { u: VertexId, v: VertexId, w: Weight },
}

impl Update {
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        match *self {
            Update::Delete { u, v }
            | Update::Insert { u, v, .. }
            | Update::IncreaseWeight { u, v, .. } => (u, v),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UpdateLog {
    records: Vec<Update>,
}

impl UpdateLog {
    pub fn records(&self) -> &[Update] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Weighted directed multigraph with a fixed vertex count.
///
/// Deleting an edge marks it dead and unlinks it from both adjacency lists in
/// O(1); the slot in the edge store is never reused. When several parallel
/// edges match a `(u, v)` request, the one with the smallest id is chosen, so
/// every structure that keeps its own copy of the graph resolves the same
/// request to the same edge.
#[derive(Debug, Clone)]
pub struct DynamicDigraph {
    n: usize,
    max_weight: Weight,
    mode: Mode,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
    out_pos: Vec<usize>,
    in_pos: Vec<usize>,
    stage: u64,
    initial: Vec<(VertexId, VertexId, Weight)>,
    log: UpdateLog,
}

impl DynamicDigraph {
    pub fn new(n: usize, mode: Mode) -> Self {
        Self {
            n,
            max_weight: Weight::MAX,
            mode,
            edges: Vec::new(),
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            out_pos: Vec::new(),
            in_pos: Vec::new(),
            stage: 0,
            initial: Vec::new(),
            log: UpdateLog::default(),
        }
    }

    /// Builds the stage-0 graph. Initial edges are not update records.
    pub fn from_edges(
        n: usize,
        mode: Mode,
        edges: impl IntoIterator<Item = (VertexId, VertexId, Weight)>,
    ) -> Result<Self, GraphError> {
        Self::from_edges_capped(n, mode, Weight::MAX, edges)
    }

    pub fn from_edges_capped(
        n: usize,
        mode: Mode,
        max_weight: Weight,
        edges: impl IntoIterator<Item = (VertexId, VertexId, Weight)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new(n, mode);
        g.max_weight = max_weight;
        for (u, v, w) in edges {
            g.check_endpoints(u, v)?;
            g.check_weight(w)?;
            g.link(u, v, w);
            g.initial.push((u, v, w));
        }
        Ok(g)
    }

    /// Unweighted convenience constructor.
    pub fn from_pairs(
        n: usize,
        mode: Mode,
        pairs: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        Self::from_edges(n, mode, pairs.into_iter().map(|(u, v)| (u, v, 1)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn max_weight(&self) -> Weight {
        self.max_weight
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn log(&self) -> &UpdateLog {
        &self.log
    }

    pub fn initial_edges(&self) -> &[(VertexId, VertexId, Weight)] {
        &self.initial
    }

    /// Number of edge slots ever allocated (alive or dead).
    pub fn edge_capacity(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn alive_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.alive).count()
    }

    /// `(id, tail, head, weight)` for every alive edge, in id order.
    pub fn alive_edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId, Weight)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.alive)
            .map(|(id, e)| (id, e.tail, e.head, e.weight))
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_adj[v]
    }

    /// Smallest-id alive edge from `u` to `v`.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.out_adj[u]
            .iter()
            .copied()
            .filter(|&e| self.edges[e].head == v)
            .min()
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        self.require(self.mode != Mode::Incremental, "delete_edge")?;
        let e = self
            .find_edge(u, v)
            .ok_or(GraphError::NoSuchEdge { tail: u, head: v })?;
        self.unlink(e);
        self.record(Update::Delete { u, v });
        Ok(e)
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<EdgeId, GraphError> {
        self.require(self.mode != Mode::Decremental, "insert_edge")?;
        self.check_endpoints(u, v)?;
        self.check_weight(w)?;
        let e = self.link(u, v, w);
        self.record(Update::Insert { u, v, w });
        Ok(e)
    }

    /// Raises the weight of the smallest-id alive `(u, v)` edge in place.
    ///
    /// In decremental mode the new weight must not be smaller than the old
    /// one; the edge keeps its id.
    pub fn increase_weight(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<EdgeId, GraphError> {
        self.require(self.mode != Mode::Incremental, "increase_weight")?;
        self.check_weight(w)?;
        let e = self
            .find_edge(u, v)
            .ok_or(GraphError::NoSuchEdge { tail: u, head: v })?;
        if self.mode == Mode::Decremental && w < self.edges[e].weight {
            return Err(GraphError::ModeViolation {
                op: "decrease weight",
                mode: self.mode,
            });
        }
        self.edges[e].weight = w;
        self.record(Update::IncreaseWeight { u, v, w });
        Ok(e)
    }

    pub fn apply(&mut self, update: &Update) -> Result<EdgeId, GraphError> {
        match *update {
            Update::Delete { u, v } => self.delete_edge(u, v),
            Update::Insert { u, v, w } => self.insert_edge(u, v, w),
            Update::IncreaseWeight { u, v, w } => self.increase_weight(u, v, w),
        }
    }

    /// Rebuilds the graph from its stage-0 edges and its log.
    pub fn replay(&self) -> Result<Self, GraphError> {
        let mut g = Self::from_edges_capped(self.n, self.mode, self.max_weight, self.initial.iter().copied())?;
        for rec in self.log.records() {
            g.apply(rec)?;
        }
        Ok(g)
    }

    /// Exact structural equality: same edge store, same adjacency order, same
    /// stage.
    pub fn same_state(&self, other: &Self) -> bool {
        self.n == other.n
            && self.edges == other.edges
            && self.out_adj == other.out_adj
            && self.in_adj == other.in_adj
            && self.stage == other.stage
    }

    /// The graph with every edge reversed. Edge ids are preserved, so edge `e`
    /// of the result is edge `e` of `self` with its endpoints swapped.
    pub fn reversed(&self) -> Self {
        let mut g = Self::new(self.n, self.mode);
        g.max_weight = self.max_weight;
        for e in &self.edges {
            let id = g.link(e.head, e.tail, e.weight);
            if !e.alive {
                g.unlink(id);
            }
        }
        g.initial = self.initial.iter().map(|&(u, v, w)| (v, u, w)).collect();
        g.stage = self.stage;
        g
    }

    pub fn induced<'g>(&'g self, mask: &'g VertexMask) -> InducedSubgraph<'g> {
        InducedSubgraph::new(self, mask)
    }

    /// Checks that the two adjacency directions mirror each other and agree
    /// with the alive flags.
    pub fn check_mirror(&self) -> bool {
        let mut seen_out = vec![0u32; self.edges.len()];
        let mut seen_in = vec![0u32; self.edges.len()];
        for (v, list) in self.out_adj.iter().enumerate() {
            for (i, &e) in list.iter().enumerate() {
                if self.edges[e].tail != v || self.out_pos[e] != i {
                    return false;
                }
                seen_out[e] += 1;
            }
        }
        for (v, list) in self.in_adj.iter().enumerate() {
            for (i, &e) in list.iter().enumerate() {
                if self.edges[e].head != v || self.in_pos[e] != i {
                    return false;
                }
                seen_in[e] += 1;
            }
        }
        self.edges.iter().enumerate().all(|(id, e)| {
            let want = u32::from(e.alive);
            seen_out[id] == want && seen_in[id] == want
        })
    }

    fn require(&self, ok: bool, op: &'static str) -> Result<(), GraphError> {
        if ok {
            Ok(())
        } else {
            Err(GraphError::ModeViolation { op, mode: self.mode })
        }
    }

    fn check_endpoints(&self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { v: x, n: self.n });
            }
        }
        Ok(())
    }

    fn check_weight(&self, w: Weight) -> Result<(), GraphError> {
        if w == 0 || w > self.max_weight {
            Err(GraphError::WeightOutOfRange {
                weight: w,
                max: self.max_weight,
            })
        } else {
            Ok(())
        }
    }

    fn link(&mut self, u: VertexId, v: VertexId, w: Weight) -> EdgeId {
        let e = self.edges.len();
        self.edges.push(Edge {
            tail: u,
            head: v,
            weight: w,
            alive: true,
        });
        self.out_pos.push(self.out_adj[u].len());
        self.out_adj[u].push(e);
        self.in_pos.push(self.in_adj[v].len());
        self.in_adj[v].push(e);
        e
    }

    fn unlink(&mut self, e: EdgeId) {
        let Edge { tail, head, .. } = self.edges[e];
        self.edges[e].alive = false;
        let p = self.out_pos[e];
        self.out_adj[tail].swap_remove(p);
        if let Some(&moved) = self.out_adj[tail].get(p) {
            self.out_pos[moved] = p;
        }
        let p = self.in_pos[e];
        self.in_adj[head].swap_remove(p);
        if let Some(&moved) = self.in_adj[head].get(p) {
            self.in_pos[moved] = p;
        }
    }

    fn record(&mut self, u: Update) {
        self.stage += 1;
        self.log.records.push(u);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize, mode: Mode) -> DynamicDigraph {
        DynamicDigraph::from_pairs(n, mode, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn delete_removes_out_edge() {
        let mut g = path(3, Mode::Decremental);
        g.delete_edge(1, 2).unwrap();
        assert!(g.out_edges(1).is_empty());
        assert!(g.in_edges(2).is_empty());
        assert_eq!(g.stage(), 1);
        assert!(g.check_mirror());
    }

    #[test]
    fn double_delete_is_an_error() {
        let mut g = path(3, Mode::Decremental);
        g.delete_edge(0, 1).unwrap();
        assert_eq!(
            g.delete_edge(0, 1),
            Err(GraphError::NoSuchEdge { tail: 0, head: 1 })
        );
        assert_eq!(g.stage(), 1);
    }

    #[test]
    fn mode_is_enforced() {
        let mut g = path(3, Mode::Decremental);
        assert!(matches!(
            g.insert_edge(0, 2, 1),
            Err(GraphError::ModeViolation { .. })
        ));
        let mut h = path(3, Mode::Incremental);
        assert!(matches!(
            h.delete_edge(0, 1),
            Err(GraphError::ModeViolation { .. })
        ));
        assert!(matches!(
            h.increase_weight(0, 1, 3),
            Err(GraphError::ModeViolation { .. })
        ));
    }

    #[test]
    fn insert_into_empty_graph() {
        let mut g = DynamicDigraph::new(2, Mode::Incremental);
        let e = g.insert_edge(0, 1, 1).unwrap();
        assert_eq!(g.out_edges(0), &[e]);
        assert_eq!(g.edge(e).head, 1);
    }

    #[test]
    fn parallel_edges_are_distinct() {
        let mut g = DynamicDigraph::new(2, Mode::Incremental);
        let a = g.insert_edge(0, 1, 1).unwrap();
        let b = g.insert_edge(0, 1, 1).unwrap();
        assert_ne!(a, b);
        assert_eq!(g.alive_edge_count(), 2);
        assert_eq!(g.find_edge(0, 1), Some(a));
    }

    #[test]
    fn weight_cap_is_enforced() {
        let mut g = DynamicDigraph::from_edges_capped(2, Mode::Mixed, 10, [(0, 1, 3)]).unwrap();
        assert!(matches!(
            g.insert_edge(1, 0, 11),
            Err(GraphError::WeightOutOfRange { weight: 11, max: 10 })
        ));
        assert!(matches!(
            g.insert_edge(1, 0, 0),
            Err(GraphError::WeightOutOfRange { .. })
        ));
    }

    #[test]
    fn decremental_weight_changes_only_go_up() {
        let mut g = DynamicDigraph::from_edges(2, Mode::Decremental, [(0, 1, 5)]).unwrap();
        assert!(g.increase_weight(0, 1, 4).is_err());
        let e = g.increase_weight(0, 1, 9).unwrap();
        assert_eq!(g.edge(e).weight, 9);
        assert_eq!(g.log().records(), &[Update::IncreaseWeight { u: 0, v: 1, w: 9 }]);
    }

    #[test]
    fn reversed_keeps_ids() {
        let mut g = path(4, Mode::Decremental);
        g.delete_edge(1, 2).unwrap();
        let r = g.reversed();
        for (id, e) in g.edges().iter().enumerate() {
            let f = r.edge(id);
            assert_eq!((f.tail, f.head, f.alive), (e.head, e.tail, e.alive));
        }
        assert!(r.check_mirror());
    }

    #[test]
    fn replay_matches_after_mixed_updates() {
        let mut g = DynamicDigraph::from_pairs(4, Mode::Mixed, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        g.insert_edge(0, 2, 4).unwrap();
        g.delete_edge(1, 2).unwrap();
        g.increase_weight(0, 2, 7).unwrap();
        g.insert_edge(0, 2, 1).unwrap();
        g.delete_edge(0, 2).unwrap();
        assert!(g.replay().unwrap().same_state(&g));
    }
}
