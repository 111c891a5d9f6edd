use crate::{GraphError, NodeId, VertexId};

/// Union of a family of vertex sets, sorted and deduplicated.
pub fn flatten<S: AsRef<[VertexId]>>(sets: &[S]) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = sets.iter().flat_map(|s| s.as_ref().iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Refinement-only partition of `0..n` into nodes.
///
/// The only mutation is [`Partition::split_node`]. When a node is split, the
/// largest part keeps the old id (ties go to the part holding the smallest
/// vertex) and every other part gets a fresh id, so node ids are never reused
/// and a node id always names a subset of what it named before.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    node_of: Vec<NodeId>,
    members: Vec<Vec<VertexId>>,
    generation: u64,
}

impl Partition {
    /// Every vertex in its own node; node `v` holds vertex `v`.
    pub fn singletons(n: usize) -> Self {
        Self {
            node_of: (0..n).collect(),
            members: (0..n).map(|v| vec![v]).collect(),
            generation: 0,
        }
    }

    /// One node holding all `n` vertices (no nodes at all when `n == 0`).
    pub fn whole(n: usize) -> Self {
        if n == 0 {
            return Self::singletons(0);
        }
        Self {
            node_of: vec![0; n],
            members: vec![(0..n).collect()],
            generation: 0,
        }
    }

    /// Builds a partition from per-vertex labels. Node ids are assigned in
    /// order of first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let mut members: Vec<Vec<VertexId>> = Vec::new();
        let mut node_of = Vec::with_capacity(labels.len());
        for (v, &l) in labels.iter().enumerate() {
            let id = *remap.entry(l).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            members[id].push(v);
            node_of.push(id);
        }
        Self {
            node_of,
            members,
            generation: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.node_of.len()
    }

    pub fn node_of(&self, v: VertexId) -> NodeId {
        self.node_of[v]
    }

    pub fn members(&self, node: NodeId) -> &[VertexId] {
        &self.members[node]
    }

    /// Number of node ids handed out so far; all of them are non-empty.
    pub fn node_count(&self) -> usize {
        self.members.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &[VertexId])> {
        self.members.iter().enumerate().map(|(i, m)| (i, m.as_slice()))
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn flatten_nodes(&self, nodes: &[NodeId]) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = nodes.iter().flat_map(|&x| self.members[x].iter().copied()).collect();
        out.sort_unstable();
        out
    }

    /// Replaces `node` by `parts` and returns the id of each part, in the
    /// order the parts were given.
    pub fn split_node(&mut self, node: NodeId, parts: &[Vec<VertexId>]) -> Result<Vec<NodeId>, GraphError> {
        if node >= self.members.len() {
            return Err(GraphError::BadSplit(format!("unknown node {node}")));
        }
        if parts.len() < 2 {
            return Err(GraphError::BadSplit("need at least two parts".into()));
        }
        let total: usize = parts.iter().map(Vec::len).sum();
        if total != self.members[node].len() {
            return Err(GraphError::BadSplit(format!(
                "parts hold {total} vertices, node {node} holds {}",
                self.members[node].len()
            )));
        }
        let mut seen = std::collections::HashSet::with_capacity(total);
        for part in parts {
            if part.is_empty() {
                return Err(GraphError::BadSplit("empty part".into()));
            }
            for &v in part {
                if v >= self.node_of.len() || self.node_of[v] != node || !seen.insert(v) {
                    return Err(GraphError::BadSplit(format!("vertex {v} is not a fresh member of node {node}")));
                }
            }
        }

        let heir = (0..parts.len())
            .max_by(|&a, &b| {
                let key = |i: usize| (parts[i].len(), std::cmp::Reverse(parts[i].iter().min().copied()));
                key(a).cmp(&key(b))
            })
            .expect("at least two parts");
        let mut ids = Vec::with_capacity(parts.len());
        for (i, part) in parts.iter().enumerate() {
            let id = if i == heir {
                node
            } else {
                self.members.push(Vec::new());
                self.members.len() - 1
            };
            let mut sorted = part.clone();
            sorted.sort_unstable();
            for &v in &sorted {
                self.node_of[v] = id;
            }
            self.members[id] = sorted;
            ids.push(id);
        }
        self.generation += 1;
        Ok(ids)
    }

    /// Splits `node` into `part` and the rest of its members. Returns
    /// `(id of part, id of rest)`.
    pub fn split_off(&mut self, node: NodeId, part: &[VertexId]) -> Result<(NodeId, NodeId), GraphError> {
        let inside: std::collections::HashSet<VertexId> = part.iter().copied().collect();
        let rest: Vec<VertexId> = self.members[node].iter().copied().filter(|v| !inside.contains(v)).collect();
        let ids = self.split_node(node, &[part.to_vec(), rest])?;
        Ok((ids[0], ids[1]))
    }

    /// True when every node of `self` lies inside one node of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.members.iter().all(|m| {
            let mut it = m.iter();
            match it.next() {
                None => true,
                Some(&first) => {
                    let target = coarser.node_of(first);
                    it.all(|&v| coarser.node_of(v) == target)
                }
            }
        })
    }

    /// Canonical per-vertex labels: each vertex is labelled by the smallest
    /// vertex of its node. Two partitions are equal as set systems iff their
    /// canonical labels are equal.
    pub fn canonical_labels(&self) -> Vec<VertexId> {
        self.node_of.iter().map(|&x| self.members[x][0]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_examples() {
        assert_eq!(flatten(&[vec![0], vec![1, 2]]), vec![0, 1, 2]);
        assert_eq!(flatten::<Vec<VertexId>>(&[]), Vec::<VertexId>::new());
        let p = Partition::singletons(5);
        let all: Vec<Vec<VertexId>> = p.nodes().map(|(_, m)| m.to_vec()).collect();
        assert_eq!(flatten(&all), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn largest_part_inherits() {
        let mut p = Partition::whole(3);
        let ids = p.split_node(0, &[vec![0, 1], vec![2]]).unwrap();
        assert_eq!(ids[0], 0);
        assert_ne!(ids[1], 0);
        assert_eq!(p.members(0), &[0, 1]);
        assert_eq!(p.generation(), 1);
    }

    #[test]
    fn ties_go_to_smallest_vertex() {
        let mut p = Partition::whole(3);
        let ids = p.split_node(0, &[vec![2], vec![1], vec![0]]).unwrap();
        assert_eq!(ids[2], 0);
        assert_eq!(p.members(0), &[0]);
    }

    #[test]
    fn bad_splits_are_rejected() {
        let mut p = Partition::whole(4);
        assert!(p.split_node(0, &[vec![0, 1, 2, 3]]).is_err());
        assert!(p.split_node(0, &[vec![0, 1], vec![2]]).is_err());
        assert!(p.split_node(0, &[vec![0, 1], vec![1, 2, 3]]).is_err());
        assert!(p.split_node(0, &[vec![0, 1, 2, 3], vec![]]).is_err());
        assert!(p.split_node(7, &[vec![0], vec![1]]).is_err());
        assert_eq!(p.generation(), 0);
    }

    #[test]
    fn labels_round_trip() {
        let p = Partition::from_labels(&[5, 5, 2, 5, 2]);
        assert_eq!(p.node_count(), 2);
        assert_eq!(p.canonical_labels(), vec![0, 0, 2, 0, 2]);
    }
}
