use crate::{DynamicDigraph, EdgeId, VertexId, Weight};

/// Membership bitmap over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMask {
    bits: Vec<bool>,
}

impl VertexMask {
    pub fn empty(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    pub fn full(n: usize) -> Self {
        Self { bits: vec![true; n] }
    }

    pub fn from_vertices(n: usize, vs: impl IntoIterator<Item = VertexId>) -> Self {
        let mut m = Self::empty(n);
        for v in vs {
            m.bits[v] = true;
        }
        m
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.bits.get(v).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, v: VertexId) {
        self.bits[v] = true;
    }

    pub fn remove(&mut self, v: VertexId) {
        self.bits[v] = false;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v)
    }
}

/// Read-only view of `g[X]`. It reads the parent graph on every call, so
/// rebuilding the view after an update to the parent shows that update.
#[derive(Debug, Clone, Copy)]
pub struct InducedSubgraph<'g> {
    g: &'g DynamicDigraph,
    mask: &'g VertexMask,
}

impl<'g> InducedSubgraph<'g> {
    pub(crate) fn new(g: &'g DynamicDigraph, mask: &'g VertexMask) -> Self {
        Self { g, mask }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.mask.contains(v)
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + 'g {
        let (g, mask) = (self.g, self.mask);
        let list: &'g [EdgeId] = if mask.contains(v) { g.out_edges(v) } else { &[] };
        list.iter().copied().filter(move |&e| mask.contains(g.edge(e).head))
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + 'g {
        let (g, mask) = (self.g, self.mask);
        let list: &'g [EdgeId] = if mask.contains(v) { g.in_edges(v) } else { &[] };
        list.iter().copied().filter(move |&e| mask.contains(g.edge(e).tail))
    }

    /// Alive edges with both endpoints in the view, in id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId, Weight)> + 'g {
        let mask = self.mask;
        self.g
            .alive_edges()
            .filter(move |&(_, u, v, _)| mask.contains(u) && mask.contains(v))
    }
}
