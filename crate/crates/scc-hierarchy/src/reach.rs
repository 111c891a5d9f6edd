use crate::{Hierarchy, HierarchyError};
use graph_core::{EdgeId, VertexId};

/// Decremental single-source reachability.
///
/// Wraps a [`Hierarchy`] over the input edges plus one edge `v → source`
/// per vertex. Those extra edges come after the input edges and are never
/// deleted, so `v` is reachable from the source exactly when the two share
/// a component.
#[derive(Debug, Clone)]
pub struct Reachability {
    source: VertexId,
    inner: Hierarchy,
    original: usize,
}

impl Reachability {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
        source: VertexId,
        delta: Option<u64>,
        seed: u64,
    ) -> Result<Self, HierarchyError> {
        if source >= n {
            return Err(HierarchyError::VertexOutOfRange(source));
        }
        let mut all: Vec<(VertexId, VertexId)> = edges.into_iter().collect();
        let original = all.len();
        all.extend((0..n).filter(|&v| v != source).map(|v| (v, source)));
        let delta = delta.unwrap_or_else(|| crate::default_delta(n));
        Ok(Self {
            source,
            inner: Hierarchy::with_delta(n, all, delta, seed)?,
            original,
        })
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn reachable(&self, v: VertexId) -> bool {
        self.inner.same_scc(self.source, v)
    }

    /// Deletes the smallest-id alive input edge `(u, v)`.
    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, HierarchyError> {
        match self.inner.find_edge(u, v) {
            Some(e) if e < self.original => {
                self.inner.delete_edge(e)?;
                Ok(e)
            }
            _ => Err(HierarchyError::NoSuchEdge(u, v)),
        }
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        &self.inner
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_loses_a_leaf() {
        let mut r = Reachability::new(4, [(0, 1), (0, 2), (0, 3)], 0, None, 1).unwrap();
        assert!((0..4).all(|v| r.reachable(v)));
        r.delete(0, 2).unwrap();
        assert!(r.reachable(1) && !r.reachable(2) && r.reachable(3));
    }

    #[test]
    fn helper_edges_cannot_be_deleted() {
        let mut r = Reachability::new(3, [(0, 1), (1, 0)], 0, None, 1).unwrap();
        r.delete(1, 0).unwrap();
        assert_eq!(r.delete(1, 0), Err(HierarchyError::NoSuchEdge(1, 0)));
        assert!(r.reachable(1) && !r.reachable(2));
    }
}
