use graph_core::{lg, DynamicDigraph, EdgeId, VertexId, Weight};

/// Static unweighted digraph with a marked vertex set `S`.
///
/// Self-loops are dropped on construction. Parallel edges are kept, each
/// with its own id, so callers can map edges back to the graph they came
/// from.
#[derive(Debug, Clone)]
pub struct SGraph {
    edges: Vec<(VertexId, VertexId)>,
    out: Vec<Vec<VertexId>>,
    inc: Vec<Vec<VertexId>>,
    in_s: Vec<bool>,
    log_n: f64,
}

impl SGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>, s: &[VertexId]) -> Self {
        let mut in_s = vec![false; n];
        for &v in s {
            in_s[v] = true;
        }
        let mut g = Self {
            edges: Vec::new(),
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            in_s,
            log_n: lg(n),
        };
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u != v {
                g.edges.push((u, v));
                g.out[u].push(v);
                g.inc[v].push(u);
            }
        }
        g
    }

    /// Every vertex marked.
    pub fn all_marked(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let all: Vec<_> = (0..n).collect();
        Self::new(n, edges, &all)
    }

    /// Overrides the `log n` used by the layer thresholds, for callers that
    /// run on a piece of a larger graph.
    pub fn with_log_n(mut self, log_n: f64) -> Self {
        self.log_n = log_n;
        self
    }

    pub fn n(&self) -> usize {
        self.in_s.len()
    }

    pub fn log_n(&self) -> f64 {
        self.log_n
    }

    pub fn in_s(&self, v: VertexId) -> bool {
        self.in_s[v]
    }

    pub fn marked(&self) -> Vec<VertexId> {
        (0..self.n()).filter(|&v| self.in_s[v]).collect()
    }

    /// Edges without self-loops, indexed by their position.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn out(&self, v: VertexId) -> &[VertexId] {
        &self.out[v]
    }

    pub fn inc(&self, v: VertexId) -> &[VertexId] {
        &self.inc[v]
    }
}

/// A vertex subset of an [`SGraph`] that remembers how many marked vertices
/// it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scope {
    alive: Vec<bool>,
    len: usize,
    marked: usize,
}

impl Scope {
    pub fn full(g: &SGraph) -> Self {
        Self {
            alive: vec![true; g.n()],
            len: g.n(),
            marked: (0..g.n()).filter(|&v| g.in_s(v)).count(),
        }
    }

    pub fn from_vertices(g: &SGraph, vs: &[VertexId]) -> Self {
        let mut s = Self {
            alive: vec![false; g.n()],
            len: 0,
            marked: 0,
        };
        for &v in vs {
            if !s.alive[v] {
                s.alive[v] = true;
                s.len += 1;
                s.marked += usize::from(g.in_s(v));
            }
        }
        s
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.alive[v]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of marked vertices inside.
    pub fn marked(&self) -> usize {
        self.marked
    }

    pub fn remove(&mut self, g: &SGraph, v: VertexId) {
        if std::mem::take(&mut self.alive[v]) {
            self.len -= 1;
            self.marked -= usize::from(g.in_s(v));
        }
    }

    pub fn first(&self) -> Option<VertexId> {
        self.alive.iter().position(|&a| a)
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        (0..self.alive.len()).filter(|&v| self.alive[v]).collect()
    }

    pub fn mask(&self) -> &[bool] {
        &self.alive
    }
}

/// Weighted digraph with removable edges.
///
/// Edge ids are positions in the construction order and survive removals.
#[derive(Debug, Clone)]
pub struct WGraph {
    edges: Vec<(VertexId, VertexId, Weight)>,
    alive: Vec<bool>,
    out: Vec<Vec<EdgeId>>,
    inc: Vec<Vec<EdgeId>>,
}

impl WGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId, Weight)>) -> Self {
        let mut g = Self {
            edges: Vec::new(),
            alive: Vec::new(),
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
        };
        for (u, v, w) in edges {
            g.push(u, v, w, true);
        }
        g
    }

    /// Copies a dynamic graph; tombstoned edges keep their ids but start
    /// removed.
    pub fn from_digraph(g: &DynamicDigraph) -> Self {
        let mut w = Self::new(g.n(), []);
        for e in g.edges() {
            w.push(e.tail, e.head, e.weight, e.alive);
        }
        w
    }

    fn push(&mut self, u: VertexId, v: VertexId, w: Weight, alive: bool) {
        assert!(u < self.n() && v < self.n(), "edge ({u}, {v}) out of range");
        assert!(w > 0, "weights must be positive");
        let id = self.edges.len();
        self.edges.push((u, v, w));
        self.alive.push(alive);
        self.out[u].push(id);
        self.inc[v].push(id);
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId, Weight) {
        self.edges[e]
    }

    pub fn is_alive(&self, e: EdgeId) -> bool {
        self.alive[e]
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.alive[e] = false;
    }

    /// Alive edge records `(id, tail, head, weight)`.
    pub fn alive_edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId, Weight)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|&(e, _)| self.alive[e])
            .map(|(e, &(u, v, w))| (e, u, v, w))
    }

    pub fn out(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.out[v].iter().copied().filter(|&e| self.alive[e])
    }

    pub fn inc(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.inc[v].iter().copied().filter(|&e| self.alive[e])
    }
}
