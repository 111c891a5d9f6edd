use es_tree::{Direction, EsTree};
use graph_core::{components, lg, DynamicDigraph, EdgeId, NodeId, Partition, VertexId, Weight, INF};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use separators::{out_separator, partition_within, WGraph};
use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

/// Separator samples tried before giving up on one cut.
const ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtoError {
    #[error("depth {0} is below the minimum of 16")]
    DepthTooSmall(u64),
    #[error("approximation factor must be at least 1")]
    BadAlpha,
    #[error("bundle must hold at least one copy")]
    EmptyBundle,
    #[error("no alive edge ({0}, {1})")]
    NoSuchEdge(VertexId, VertexId),
    #[error("not a path in the current graph: {0}")]
    NotAPath(String),
    #[error("a separator sample overshot its depth {0} times in a row")]
    Fail(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtoConfig {
    /// Depth scale: a node `X` must keep weak diameter about `δ|X|/n`.
    pub delta: u64,
    /// Approximation factor of the center distance structures. The built-in
    /// ones are exact, so 1 is the honest value.
    pub alpha: f64,
    /// Failure parameter; separators use success parameter `(c + 2)·lg n`.
    pub c: f64,
    /// Independent copies kept by an [`AtoBundle`](crate::AtoBundle).
    pub bundle: usize,
}

impl AtoConfig {
    pub fn new(delta: u64) -> Self {
        Self {
            delta,
            alpha: 1.0,
            c: 2.0,
            bundle: 1,
        }
    }

    fn validate(&self) -> Result<(), AtoError> {
        if self.delta < 16 {
            return Err(AtoError::DepthTooSmall(self.delta));
        }
        if !(self.alpha >= 1.0) {
            return Err(AtoError::BadAlpha);
        }
        if self.bundle == 0 {
            return Err(AtoError::EmptyBundle);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtoStats {
    /// Violations resolved by a ball separator.
    pub separators: u64,
    /// Edges removed from the pruned graph, over all causes.
    pub removed_edges: u64,
    /// Separator samples that overshot and were redrawn.
    pub retries: u64,
    pub centers: u64,
    /// Repair scans performed by all center trees.
    pub tree_scans: u64,
}

/// Exact distances from and to a center inside the vertex set it was
/// created for.
#[derive(Debug, Clone)]
struct Center {
    vertex: VertexId,
    out: EsTree,
    inc: EsTree,
}

/// Approximate topological order of a decremental weighted digraph.
///
/// The nodes are the strongly connected components of a pruned copy `G'`
/// of the graph; `τ` numbers them so that every edge of `G'` between two
/// nodes goes up in `τ`, and a node that splits hands its interval
/// `[τ(X), τ(X) + |X|)` down to its pieces. Whenever a node gets too wide
/// for its size, a ball separator cuts through it in `G'`.
#[derive(Debug, Clone)]
pub struct Ato {
    n: usize,
    cfg: AtoConfig,
    zeta: f64,
    g: WGraph,
    pruned: WGraph,
    by_pair: HashMap<(VertexId, VertexId), Vec<EdgeId>>,
    parts: Partition,
    tau: Vec<usize>,
    /// Center index per node id.
    node_center: Vec<usize>,
    centers: Vec<Center>,
    /// Centers whose vertex set spans each edge.
    edge_centers: Vec<Vec<usize>>,
    pending: BTreeSet<NodeId>,
    rng: ChaCha8Rng,
    stats: AtoStats,
    stage: u64,
    splits: Vec<NodeSplit>,
}

/// One node replaced by pieces, in the order the pieces were numbered.
/// The piece keeping the old id is the largest one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSplit {
    pub node: NodeId,
    pub parts: Vec<(NodeId, Vec<VertexId>)>,
}

/// Every split made while moving from stage `from` to stage `to`, in the
/// order they happened. A later entry may split a piece of an earlier one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChangeSet {
    pub from: u64,
    pub to: u64,
    pub splits: Vec<NodeSplit>,
}

impl Ato {
    pub fn new(g: &DynamicDigraph, cfg: AtoConfig, seed: u64) -> Result<Self, AtoError> {
        Self::build(g.n(), WGraph::from_digraph(g), cfg, seed)
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, Weight)>,
        cfg: AtoConfig,
        seed: u64,
    ) -> Result<Self, AtoError> {
        Self::build(n, WGraph::new(n, edges), cfg, seed)
    }

    fn build(n: usize, g: WGraph, cfg: AtoConfig, seed: u64) -> Result<Self, AtoError> {
        cfg.validate()?;
        let mut by_pair: HashMap<_, Vec<EdgeId>> = HashMap::new();
        for e in 0..g.edge_count() {
            let (u, v, _) = g.edge(e);
            by_pair.entry((u, v)).or_default().push(e);
        }
        let mut a = Self {
            n,
            cfg,
            zeta: (cfg.c + 2.0) * lg(n),
            pruned: g.clone(),
            edge_centers: vec![Vec::new(); g.edge_count()],
            g,
            by_pair,
            parts: Partition::singletons(n),
            tau: Vec::new(),
            node_center: Vec::new(),
            centers: Vec::new(),
            pending: BTreeSet::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            stats: AtoStats::default(),
            stage: 0,
            splits: Vec::new(),
        };
        a.init()?;
        a.splits.clear();
        Ok(a)
    }

    /// Carves small-size classes down to small diameter, then orders the
    /// components and settles all violations.
    fn init(&mut self) -> Result<(), AtoError> {
        let delta = self.cfg.delta;
        let rounds = (delta as f64).log2().ceil() as u32;
        let all: Vec<VertexId> = (0..self.n).collect();
        for i in 0..=rounds {
            let limit = self.n as f64 / 2f64.powi(i as i32);
            for x in self.components_within(&all) {
                if x.len() >= 2 && x.len() as f64 <= limit {
                    self.carve(&x, delta >> i)?;
                }
            }
        }
        let mut comps = self.components_within(&all);
        comps.reverse();
        let mut labels = vec![0; self.n];
        for (k, c) in comps.iter().enumerate() {
            for &v in c {
                labels[v] = k;
            }
        }
        self.parts = Partition::from_labels(&labels);
        self.tau = vec![0; self.parts.node_count()];
        let mut next = 0;
        for c in &comps {
            self.tau[self.parts.node_of(c[0])] = next;
            next += c.len();
        }
        for x in 0..self.parts.node_count() {
            let members = self.parts.members(x).to_vec();
            let c = self.new_center(&members);
            self.node_center.push(c);
            self.pending.insert(x);
        }
        self.resolve()
    }

    fn components_within(&self, set: &[VertexId]) -> Vec<Vec<VertexId>> {
        let h = &self.pruned;
        components(self.n, set, |v, buf| buf.extend(h.out(v).map(|e| h.edge(e).1)))
    }

    /// Removes edges of `G'[set]` until its components have diameter at
    /// most `d`; with `d = 0` every edge inside the set goes.
    fn carve(&mut self, set: &[VertexId], d: u64) -> Result<(), AtoError> {
        let cut = if d == 0 {
            let mut inside = vec![false; self.n];
            for &v in set {
                inside[v] = true;
            }
            set.iter()
                .flat_map(|&u| self.pruned.out(u).filter(|&e| inside[self.pruned.edge(e).1]).collect::<Vec<_>>())
                .collect()
        } else {
            let mut tries = 0;
            loop {
                match partition_within(&self.pruned, set, d, self.zeta, &mut self.rng) {
                    Ok(cut) => break cut,
                    Err(_) if tries + 1 < ATTEMPTS => {
                        tries += 1;
                        self.stats.retries += 1;
                    }
                    Err(_) => return Err(AtoError::Fail(ATTEMPTS)),
                }
            }
        };
        for e in cut {
            self.prune(e);
        }
        Ok(())
    }

    fn prune(&mut self, e: EdgeId) {
        if self.pruned.is_alive(e) {
            self.pruned.remove(e);
            self.stats.removed_edges += 1;
        }
    }

    /// Uniformly random center for `members` with trees over `G[members]`
    /// to the depth the node can ever be allowed.
    fn new_center(&mut self, members: &[VertexId]) -> usize {
        let vertex = members[self.rng.random_range(0..members.len())];
        let mut inside = vec![false; self.n];
        for &v in members {
            inside[v] = true;
        }
        let depth = self.cfg.delta * members.len() as u64 / self.n as u64;
        let id = self.centers.len();
        let arcs: Vec<(VertexId, VertexId, Weight, bool)> = (0..self.g.edge_count())
            .map(|e| {
                let (u, v, w) = self.g.edge(e);
                let live = self.g.is_alive(e) && inside[u] && inside[v];
                if live {
                    self.edge_centers[e].push(id);
                }
                (u, v, w, live)
            })
            .collect();
        let out = EsTree::from_arcs(self.n, arcs.iter().copied(), vertex, depth, Direction::Out, false);
        let inc = EsTree::from_arcs(self.n, arcs, vertex, depth, Direction::In, false);
        self.centers.push(Center { vertex, out, inc });
        self.stats.centers += 1;
        id
    }

    /// True when `dist` is above `δ|X|/n` for a node of `size` vertices.
    fn too_far(&self, dist: u64, size: usize) -> bool {
        dist == INF || (dist as u128) * (self.n as u128) > (self.cfg.delta as u128) * (size as u128)
    }

    fn violation(&self, x: NodeId) -> Option<(VertexId, Direction)> {
        let members = self.parts.members(x);
        let c = &self.centers[self.node_center[x]];
        for &t in members {
            if self.too_far(c.inc.est(t), members.len()) {
                return Some((t, Direction::Out));
            }
            if self.too_far(c.out.est(t), members.len()) {
                return Some((t, Direction::In));
            }
        }
        None
    }

    fn resolve(&mut self) -> Result<(), AtoError> {
        while let Some(x) = self.pending.pop_first() {
            let Some((t, dir)) = self.violation(x) else {
                continue;
            };
            self.stats.separators += 1;
            let members = self.parts.members(x).to_vec();
            let size = members.len() as f64;
            let mut mask = vec![false; self.n];
            for &v in &members {
                mask[v] = true;
            }
            let d = size * self.cfg.delta as f64 / (2.0 * self.n as f64);
            let mut tries = 0;
            let sep = loop {
                let s = out_separator(&self.pruned, Some(&mask), t, d, self.zeta, dir, &mut self.rng);
                if !s.failed {
                    break s;
                }
                tries += 1;
                self.stats.retries += 1;
                if tries == ATTEMPTS {
                    return Err(AtoError::Fail(ATTEMPTS));
                }
            };
            for &e in &sep.e_sep {
                self.prune(e);
            }
            let inner = (size * self.cfg.delta as f64 / (4.0 * self.n as f64)).floor() as u64;
            self.carve(&sep.v_sep, inner)?;
            self.refresh(x);
        }
        Ok(())
    }

    /// Re-splits node `x` along the components of `G'[x]`, ordering the
    /// pieces inside the old interval and giving centerless pieces a center.
    fn refresh(&mut self, x: NodeId) {
        let members = self.parts.members(x).to_vec();
        let mut pieces = self.components_within(&members);
        if pieces.len() < 2 {
            self.pending.insert(x);
            return;
        }
        pieces.reverse();
        let ids = self.parts.split_node(x, &pieces).expect("components partition the node");
        let base = self.tau[x];
        let old_center = self.node_center[x];
        let keeper = self.centers[old_center].vertex;
        let top = ids.iter().copied().max().unwrap_or(0);
        if self.tau.len() <= top {
            self.tau.resize(top + 1, 0);
            self.node_center.resize(top + 1, usize::MAX);
        }
        self.splits.push(NodeSplit {
            node: x,
            parts: ids.iter().copied().zip(pieces.iter().cloned()).collect(),
        });
        let mut next = base;
        for (id, piece) in ids.into_iter().zip(&pieces) {
            self.tau[id] = next;
            next += piece.len();
            self.node_center[id] = if piece.binary_search(&keeper).is_ok() {
                old_center
            } else {
                self.new_center(piece)
            };
            self.pending.insert(id);
        }
    }

    // ---- updates -------------------------------------------------------

    /// Deletes the smallest-id alive edge `(u, v)` of the graph.
    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, AtoError> {
        let e = self
            .by_pair
            .get(&(u, v))
            .and_then(|ids| ids.iter().copied().find(|&e| self.g.is_alive(e)))
            .ok_or(AtoError::NoSuchEdge(u, v))?;
        self.stage += 1;
        self.splits.clear();
        self.g.remove(e);
        for k in std::mem::take(&mut self.edge_centers[e]) {
            let c = &mut self.centers[k];
            let before = c.out.total_scans() + c.inc.total_scans();
            c.out.delete_edge_id(e).expect("center trees hold their edges");
            c.inc.delete_edge_id(e).expect("center trees hold their edges");
            self.stats.tree_scans += c.out.total_scans() + c.inc.total_scans() - before;
            let x = self.parts.node_of(c.vertex);
            self.pending.insert(x);
        }
        if self.pruned.is_alive(e) {
            self.pruned.remove(e);
            let x = self.parts.node_of(u);
            if x == self.parts.node_of(v) {
                self.refresh(x);
            }
        }
        self.resolve()?;
        Ok(e)
    }

    // ---- queries -------------------------------------------------------

    /// Number of deletions processed so far.
    pub fn stage(&self) -> u64 {
        self.stage
    }

    /// Splits made by the most recent deletion.
    pub fn last_changes(&self) -> ChangeSet {
        ChangeSet {
            from: self.stage.saturating_sub(1),
            to: self.stage,
            splits: self.splits.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> &AtoConfig {
        &self.cfg
    }

    pub fn partition(&self) -> &Partition {
        &self.parts
    }

    pub fn node_of(&self, v: VertexId) -> NodeId {
        self.parts.node_of(v)
    }

    /// `τ` of the node holding `v`.
    pub fn tau_of(&self, v: VertexId) -> usize {
        self.tau[self.parts.node_of(v)]
    }

    pub fn tau(&self, x: NodeId) -> usize {
        self.tau[x]
    }

    /// `[τ(X), τ(X) + |X|)`.
    pub fn interval(&self, x: NodeId) -> Range<usize> {
        self.tau[x]..self.tau[x] + self.parts.members(x).len()
    }

    /// Current nodes, each exactly once.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.parts.node_count()];
        (0..self.n)
            .filter_map(|v| {
                let x = self.parts.node_of(v);
                (!std::mem::replace(&mut seen[x], true)).then_some(x)
            })
            .collect()
    }

    pub fn center(&self, x: NodeId) -> VertexId {
        self.centers[self.node_center[x]].vertex
    }

    /// Alive edges of the graph as `(id, tail, head, weight)`.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId, Weight)> + '_ {
        self.g.alive_edges()
    }

    /// Alive edges of the pruned graph.
    pub fn pruned_edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId, Weight)> + '_ {
        self.pruned.alive_edges()
    }

    pub fn is_alive(&self, e: EdgeId) -> bool {
        e < self.g.edge_count() && self.g.is_alive(e)
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId, Weight) {
        self.g.edge(e)
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.by_pair.get(&(u, v))?.iter().copied().find(|&e| self.g.is_alive(e))
    }

    /// Bound on the weak diameter of a node of `size` vertices,
    /// `2αδ·size/n`.
    pub fn diameter_bound(&self, size: usize) -> f64 {
        2.0 * self.cfg.alpha * self.cfg.delta as f64 * size as f64 / self.n as f64
    }

    pub fn stats(&self) -> &AtoStats {
        &self.stats
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dag_keeps_singletons_in_topological_order() {
        let a = Ato::from_edges(4, [(2, 0, 1), (0, 1, 1), (1, 3, 1)], AtoConfig::new(16), 0).unwrap();
        assert_eq!(a.nodes().len(), 4);
        assert!(a.tau_of(2) < a.tau_of(0) && a.tau_of(0) < a.tau_of(1) && a.tau_of(1) < a.tau_of(3));
        assert_eq!(a.pruned_edges().count(), 3);
    }

    #[test]
    fn small_cycle_stays_one_node() {
        let a = Ato::from_edges(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)], AtoConfig::new(16), 0).unwrap();
        assert_eq!(a.nodes().len(), 1);
        assert_eq!(a.tau_of(0), 0);
    }

    #[test]
    fn breaking_a_cycle_nests_the_pieces() {
        let edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)];
        let mut a = Ato::from_edges(4, edges, AtoConfig::new(64), 3).unwrap();
        let x = a.node_of(0);
        let outer = a.interval(x);
        a.delete(3, 0).unwrap();
        assert_eq!(a.nodes().len(), 4);
        let taus: Vec<usize> = (0..4).map(|v| a.tau_of(v)).collect();
        assert_eq!(taus, vec![0, 1, 2, 3]);
        assert!(taus.iter().all(|t| outer.contains(t)));
    }

    #[test]
    fn config_is_checked() {
        let e: [(usize, usize, u64); 0] = [];
        assert_eq!(Ato::from_edges(2, e, AtoConfig::new(15), 0).unwrap_err(), AtoError::DepthTooSmall(15));
        let cfg = AtoConfig { alpha: 0.5, ..AtoConfig::new(16) };
        assert_eq!(Ato::from_edges(2, e, cfg, 0).unwrap_err(), AtoError::BadAlpha);
    }
}
