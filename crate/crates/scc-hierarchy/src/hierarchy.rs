use ges_tree::GesTree;
use graph_core::{components, lg, EdgeId, NodeId, Partition, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use separators::{in_sep, out_sep, split, SGraph, Scope, SplitResult};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HierarchyError {
    #[error("no alive edge ({0}, {1})")]
    NoSuchEdge(VertexId, VertexId),
    #[error("edge {0} is not alive")]
    DeadEdge(EdgeId),
    #[error("depth {0} is below the minimum of 32")]
    DepthTooSmall(u64),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(VertexId),
}

/// Default level depth, `64·lg² n` rounded up.
pub fn default_delta(n: usize) -> u64 {
    (64.0 * lg(n) * lg(n)).ceil() as u64
}

/// One tree that had to be thrown away because its violating separator was
/// too large, with the sizes of what replaced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rebuild {
    pub level: usize,
    /// Vertices under the tree when it was created.
    pub initial_size: usize,
    /// Vertices in the largest replacement part.
    pub largest_part: usize,
}

impl Rebuild {
    /// Every replacement part holds at most two thirds of the initial size.
    pub fn balanced(&self) -> bool {
        3 * self.largest_part <= 2 * self.initial_size
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub deletions: u64,
    /// Violations resolved by carving a small side off a tree.
    pub prunes: u64,
    pub rebuilds: Vec<Rebuild>,
    /// Layered searches that settled for a best-effort layer.
    pub fallbacks: u64,
}

#[derive(Debug, Clone)]
struct Tree {
    ges: GesTree,
    initial_size: usize,
}

#[derive(Debug, Clone)]
struct Level {
    in_s: Vec<bool>,
    s_len: usize,
    depth: u64,
    /// Keyed by the node of the next partition the tree spans.
    trees: BTreeMap<NodeId, Tree>,
    dirty: BTreeSet<NodeId>,
}

/// Decremental strongly connected components.
///
/// Level `i` contracts the nodes of partition `i` and measures distances by
/// the number of level-`i` separator vertices passed; every node of
/// partition `i + 1` is a strongly connected piece of that graph and holds a
/// [`GesTree`] around a random center. Deleting an edge repairs the trees
/// bottom up, cutting off whatever drifts too far from its center. The top
/// partition is the SCC partition of the current graph.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    n: usize,
    delta: u64,
    ends: Vec<(VertexId, VertexId)>,
    alive: Vec<bool>,
    /// False for edges between different initial components; they never
    /// matter again and stay out of every tree.
    kept: Vec<bool>,
    out: Vec<Vec<EdgeId>>,
    by_pair: HashMap<(VertexId, VertexId), Vec<EdgeId>>,
    /// `parts[0]` is all singletons, `parts[levels]` the SCCs.
    parts: Vec<Partition>,
    levels: Vec<Level>,
    rng: ChaCha8Rng,
    stats: Stats,
}

impl Hierarchy {
    /// Builds the hierarchy with the default depth.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>, seed: u64) -> Result<Self, HierarchyError> {
        Self::with_delta(n, edges, default_delta(n), seed)
    }

    pub fn from_digraph(g: &graph_core::DynamicDigraph, delta: Option<u64>, seed: u64) -> Result<Self, HierarchyError> {
        let ends = g.edges().iter().map(|e| (e.tail, e.head)).collect();
        let mut h = Self::build(g.n(), ends, delta.unwrap_or_else(|| default_delta(g.n())), seed)?;
        for (e, edge) in g.edges().iter().enumerate() {
            h.alive[e] = edge.alive;
        }
        h.preprocess();
        Ok(h)
    }

    pub fn with_delta(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
        delta: u64,
        seed: u64,
    ) -> Result<Self, HierarchyError> {
        let mut h = Self::build(n, edges.into_iter().collect(), delta, seed)?;
        h.preprocess();
        Ok(h)
    }

    fn build(n: usize, ends: Vec<(VertexId, VertexId)>, delta: u64, seed: u64) -> Result<Self, HierarchyError> {
        if delta < 32 {
            return Err(HierarchyError::DepthTooSmall(delta));
        }
        let mut out = vec![Vec::new(); n];
        let mut by_pair: HashMap<_, Vec<EdgeId>> = HashMap::new();
        for (e, &(u, v)) in ends.iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(HierarchyError::VertexOutOfRange(x));
                }
            }
            out[u].push(e);
            by_pair.entry((u, v)).or_default().push(e);
        }
        let count = lg(n).floor() as usize + 1;
        let top = delta.max(32 * (n as u64 + 1));
        let levels = (0..count)
            .map(|i| Level {
                in_s: vec![i == 0; n],
                s_len: if i == 0 { n } else { 0 },
                depth: if i + 1 == count { top } else { delta },
                trees: BTreeMap::new(),
                dirty: BTreeSet::new(),
            })
            .collect();
        let m = ends.len();
        Ok(Self {
            n,
            delta,
            ends,
            alive: vec![true; m],
            kept: vec![true; m],
            out,
            by_pair,
            parts: vec![Partition::singletons(n)],
            levels,
            rng: ChaCha8Rng::seed_from_u64(seed),
            stats: Stats::default(),
        })
    }

    fn preprocess(&mut self) {
        let all: Vec<VertexId> = (0..self.n).collect();
        let alive = &self.alive;
        let ends = &self.ends;
        let out = &self.out;
        let initial = components(self.n, &all, |v, buf| {
            buf.extend(out[v].iter().filter(|&&e| alive[e]).map(|&e| ends[e].1));
        });
        let mut comp = vec![0; self.n];
        for (c, members) in initial.iter().enumerate() {
            for &v in members {
                comp[v] = c;
            }
        }
        for (e, &(u, v)) in self.ends.iter().enumerate() {
            self.kept[e] = comp[u] == comp[v];
        }

        for i in 0..self.levels.len() {
            let nodes: Vec<Vec<VertexId>> = self.parts[i].nodes().map(|(_, m)| m.to_vec()).collect();
            let edges: Vec<(VertexId, VertexId)> = self.live_edges().map(|e| self.ends[e]).collect();
            let sg = self.node_graph(i, &nodes, edges.into_iter());
            let res = if i + 1 == self.levels.len() {
                exact(&sg)
            } else {
                split(&sg, &Scope::full(&sg), self.levels[i].depth / 2)
            };
            self.stats.fallbacks += res.fallbacks as u64;
            for &x in &res.s_split {
                self.mark(i + 1, nodes[x][0]);
            }
            let mut labels = vec![0; self.n];
            for (p, part) in res.parts.iter().enumerate() {
                for &x in part {
                    for &v in &nodes[x] {
                        labels[v] = p;
                    }
                }
            }
            let next = Partition::from_labels(&labels);
            let spans: Vec<Vec<VertexId>> = next.nodes().map(|(_, m)| m.to_vec()).collect();
            self.parts.push(next);
            for (id, members) in spans.iter().enumerate() {
                let tree = self.new_tree(i, members);
                self.levels[i].trees.insert(id, tree);
            }
        }
    }

    fn live_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.ends.len()).filter(|&e| self.alive[e] && self.kept[e])
    }

    fn mark(&mut self, i: usize, v: VertexId) {
        let level = &mut self.levels[i];
        if !std::mem::replace(&mut level.in_s[v], true) {
            level.s_len += 1;
        }
    }

    /// Contracted graph on `nodes` at level `i`, with local ids in the order
    /// given.
    fn node_graph(&self, i: usize, nodes: &[Vec<VertexId>], edges: impl Iterator<Item = (VertexId, VertexId)>) -> SGraph {
        let mut loc = HashMap::with_capacity(nodes.iter().map(Vec::len).sum());
        for (k, members) in nodes.iter().enumerate() {
            for &v in members {
                loc.insert(v, k);
            }
        }
        let in_s = &self.levels[i].in_s;
        let marked: Vec<usize> = (0..nodes.len()).filter(|&k| nodes[k].len() == 1 && in_s[nodes[k][0]]).collect();
        SGraph::new(nodes.len(), edges.map(|(u, v)| (loc[&u], loc[&v])), &marked).with_log_n(lg(self.n))
    }

    /// Fresh tree over the level-`i` nodes inside `verts` (sorted), rooted at
    /// a uniformly random vertex.
    fn new_tree(&mut self, i: usize, verts: &[VertexId]) -> Tree {
        let mut grouped: BTreeMap<NodeId, Vec<VertexId>> = BTreeMap::new();
        for &v in verts {
            grouped.entry(self.parts[i].node_of(v)).or_default().push(v);
        }
        let nodes: Vec<Vec<VertexId>> = grouped.into_values().collect();
        let mut edges = Vec::new();
        for &u in verts {
            for &e in &self.out[u] {
                let v = self.ends[e].1;
                if self.alive[e] && self.kept[e] && verts.binary_search(&v).is_ok() {
                    edges.push((e, u, v));
                }
            }
        }
        let in_s = &self.levels[i].in_s;
        let marked: Vec<VertexId> = verts.iter().copied().filter(|&v| in_s[v]).collect();
        let root = verts[self.rng.random_range(0..verts.len())];
        let ges = GesTree::new(&nodes, edges, root, &marked, self.levels[i].depth)
            .expect("separator vertices meet every cycle of a level graph");
        Tree {
            ges,
            initial_size: verts.len(),
        }
    }

    // ---- queries -------------------------------------------------------

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// Number of tree levels; partitions are numbered `0..=levels()`.
    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    pub fn depth(&self, i: usize) -> u64 {
        self.levels[i].depth
    }

    pub fn partition(&self, i: usize) -> &Partition {
        &self.parts[i]
    }

    /// The separator set of level `i`, for `i` in `0..=levels()`.
    pub fn separator(&self, i: usize) -> Vec<VertexId> {
        match self.levels.get(i) {
            Some(l) => (0..self.n).filter(|&v| l.in_s[v]).collect(),
            None => Vec::new(),
        }
    }

    /// Sizes of all separator sets, the empty top one included.
    pub fn separator_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.levels.iter().map(|l| l.s_len).collect();
        s.push(0);
        s
    }

    pub fn same_scc(&self, u: VertexId, v: VertexId) -> bool {
        let top = &self.parts[self.levels.len()];
        top.node_of(u) == top.node_of(v)
    }

    /// Top-level node of `v`; equal ids mean strongly connected.
    pub fn scc_id(&self, v: VertexId) -> NodeId {
        self.parts[self.levels.len()].node_of(v)
    }

    /// Center of the tree for node `x` of partition `i + 1`.
    pub fn center(&self, i: usize, x: NodeId) -> Option<VertexId> {
        self.levels[i].trees.get(&x).map(|t| t.ges.root())
    }

    pub fn tree(&self, i: usize, x: NodeId) -> Option<&GesTree> {
        self.levels[i].trees.get(&x).map(|t| &t.ges)
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    /// Edge scans performed by the trees currently held, both directions.
    pub fn tree_scans(&self) -> u64 {
        self.levels
            .iter()
            .flat_map(|l| l.trees.values())
            .map(|t| t.ges.scans().iter().sum::<u64>())
            .sum()
    }

    pub fn is_alive(&self, e: EdgeId) -> bool {
        self.alive.get(e).copied().unwrap_or(false)
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.by_pair.get(&(u, v))?.iter().copied().find(|&e| self.alive[e])
    }

    /// Checks the structural invariants: separator vertices are singletons
    /// one level up, partitions refine upwards, and every tree spans exactly
    /// its node with no vertex out of range.
    pub fn check_structure(&self) -> Result<(), String> {
        for i in 0..self.levels.len() {
            if !self.parts[i].refines(&self.parts[i + 1]) {
                return Err(format!("partition {i} does not refine partition {}", i + 1));
            }
            if i + 1 < self.levels.len() {
                for v in self.separator(i + 1) {
                    if !self.levels[i].in_s[v] {
                        return Err(format!("vertex {v} in separator {} but not {i}", i + 1));
                    }
                    if self.parts[i + 1].members(self.parts[i + 1].node_of(v)).len() != 1 {
                        return Err(format!("separator vertex {v} shares its node at level {}", i + 1));
                    }
                }
            }
            let mut covered = 0;
            for (&x, t) in &self.levels[i].trees {
                let members = self.parts[i + 1].members(x);
                if t.ges.vertices() != members {
                    return Err(format!("tree at level {i} for node {x} spans the wrong vertices"));
                }
                if let Some(v) = t.ges.get_unreachable() {
                    return Err(format!("vertex {v} too far from its center at level {i}"));
                }
                covered += members.len();
            }
            if covered != self.n {
                return Err(format!("trees at level {i} cover {covered} of {} vertices", self.n));
            }
        }
        Ok(())
    }

    /// `|S_{i+1}| ≤ (32 lg² n / δ)·|S_i|` at every level.
    pub fn budget_holds(&self) -> bool {
        let f = 32.0 * lg(self.n) * lg(self.n) / self.delta as f64;
        self.separator_sizes().windows(2).all(|w| w[1] as f64 <= f * w[0] as f64)
    }

    // ---- updates -------------------------------------------------------

    /// Deletes the smallest-id alive edge `(u, v)`.
    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, HierarchyError> {
        let e = self.find_edge(u, v).ok_or(HierarchyError::NoSuchEdge(u, v))?;
        self.delete_edge(e)?;
        Ok(e)
    }

    pub fn delete_edge(&mut self, e: EdgeId) -> Result<(), HierarchyError> {
        if !self.is_alive(e) {
            return Err(HierarchyError::DeadEdge(e));
        }
        self.alive[e] = false;
        self.stats.deletions += 1;
        if !self.kept[e] {
            return Ok(());
        }
        // Gone from every level before any repair, so that splitting a node
        // never re-exposes the edge as a link between its pieces higher up.
        let u = self.ends[e].0;
        for i in 0..self.levels.len() {
            let x = self.parts[i + 1].node_of(u);
            if let Some(t) = self.levels[i].trees.get_mut(&x) {
                if t.ges.has_edge(e) {
                    t.ges.delete_edge(e).expect("edge checked alive");
                    self.levels[i].dirty.insert(x);
                }
            }
        }
        for i in 0..self.levels.len() {
            while let Some(x) = self.levels[i].dirty.pop_first() {
                let far = self.levels[i].trees.get(&x).and_then(|t| t.ges.get_unreachable());
                if let Some(v) = far {
                    self.resolve(i, x, v);
                }
            }
        }
        Ok(())
    }

    /// Cuts the violating vertex `v` away from the tree of node `x`.
    fn resolve(&mut self, i: usize, x: NodeId, v: VertexId) {
        let mut tree = self.levels[i].trees.remove(&x).expect("dirty keys name trees");
        let depth = self.levels[i].depth;
        let nodes = tree.ges.nodes();
        let edges: Vec<(VertexId, VertexId)> = tree.ges.edges().map(|(_, a, b)| (a, b)).collect();
        let sg = self.node_graph(i, &nodes, edges.into_iter());
        let total = tree.ges.vertices().len();
        let flat = |ks: &[usize]| -> Vec<VertexId> {
            let mut vs: Vec<VertexId> = ks.iter().flat_map(|&k| nodes[k].iter().copied()).collect();
            vs.sort_unstable();
            vs
        };
        if i + 1 == self.levels.len() {
            // Nothing sits above the last level to absorb cut vertices, so its
            // nodes follow the strongly connected components exactly.
            let root = tree.ges.root();
            let mut pieces: Vec<Vec<VertexId>> = exact(&sg).parts.iter().map(|p| flat(p)).collect();
            let home = pieces.iter().position(|p| p.binary_search(&root).is_ok()).expect("root is in the tree");
            pieces.swap(0, home);
            let gone: Vec<VertexId> = pieces[1..].iter().flatten().copied().collect();
            if gone.is_empty() {
                let fresh = self.new_tree(i, &pieces[0]);
                self.levels[i].trees.insert(x, fresh);
                return;
            }
            tree.ges.delete_vertices(&gone).expect("the root stays in its own component");
            self.attach(i, x, Vec::new(), pieces, Some(tree));
            return;
        }
        let r = nodes.iter().position(|m| m.binary_search(&v).is_ok()).expect("v is in the tree");
        let sep = if tree.ges.dist_out(v) > depth {
            in_sep(&sg, &Scope::full(&sg), r, depth / 2)
        } else {
            out_sep(&sg, &Scope::full(&sg), r, depth / 2)
        };
        self.stats.fallbacks += u64::from(sep.fallback);
        let side = flat(&sep.v_sep);

        let (cut, pieces, kept) = if 3 * side.len() <= 2 * total {
            self.stats.prunes += 1;
            let mut gone = side.clone();
            gone.extend(flat(&sep.s_sep));
            tree.ges.delete_vertices(&gone).expect("a far separator never holds the center");
            let res = split(&sg, &Scope::from_vertices(&sg, &sep.v_sep), depth / 2);
            self.stats.fallbacks += res.fallbacks as u64;
            let mut cut = res.s_split;
            cut.extend_from_slice(&sep.s_sep);
            let mut pieces = vec![tree.ges.vertices()];
            pieces.extend(res.parts.iter().map(|p| flat(p)));
            pieces.extend(sep.s_sep.iter().map(|&k| nodes[k].clone()));
            (cut, pieces, Some(tree))
        } else {
            let res = split(&sg, &Scope::full(&sg), depth / 2);
            self.stats.fallbacks += res.fallbacks as u64;
            let pieces: Vec<Vec<VertexId>> = res.parts.iter().map(|p| flat(p)).collect();
            self.stats.rebuilds.push(Rebuild {
                level: i,
                initial_size: tree.initial_size,
                largest_part: pieces.iter().map(Vec::len).max().unwrap_or(0),
            });
            (res.s_split, pieces, None)
        };

        if pieces.len() < 2 {
            // Cannot happen with a full split, whose parts are shallow; fall
            // back to a re-centered tree rather than a bogus split.
            let fresh = self.new_tree(i, &pieces[0]);
            self.levels[i].trees.insert(x, fresh);
            return;
        }
        let cut: Vec<VertexId> = cut.iter().map(|&k| nodes[k][0]).collect();
        self.attach(i, x, cut, pieces, kept);
    }

    /// Replaces node `x` of level `i + 1` by `pieces`, reusing `kept` as the
    /// tree of the first piece, and passes the split up one level.
    fn attach(&mut self, i: usize, x: NodeId, cut: Vec<VertexId>, pieces: Vec<Vec<VertexId>>, kept: Option<Tree>) {
        let anchor = pieces[0][0];
        let ids = self.parts[i + 1].split_node(x, &pieces).expect("pieces partition the node");
        let mut rest = kept;
        for (k, (&id, piece)) in ids.iter().zip(&pieces).enumerate() {
            let t = match rest.take() {
                Some(t) if k == 0 => t,
                _ => self.new_tree(i, piece),
            };
            self.levels[i].trees.insert(id, t);
            self.levels[i].dirty.insert(id);
        }
        for &s in &cut {
            if i + 1 < self.levels.len() {
                self.mark(i + 1, s);
            }
        }
        if i + 1 < self.levels.len() {
            let z = self.parts[i + 2].node_of(anchor);
            let t = self.levels[i + 1].trees.get_mut(&z).expect("every node has a tree");
            t.ges.split_node_unchecked(&pieces).expect("pieces partition the node");
            t.ges.augment(&cut).expect("cut vertices are singleton pieces");
            self.levels[i + 1].dirty.insert(z);
        }
    }
}

/// Strongly connected components of `sg` as a split with no cut.
fn exact(sg: &SGraph) -> SplitResult {
    let all: Vec<VertexId> = (0..sg.n()).collect();
    let parts = components(sg.n(), &all, |v, buf| buf.extend_from_slice(sg.out(v)));
    SplitResult { s_split: Vec::new(), parts, fallbacks: 0 }
}
