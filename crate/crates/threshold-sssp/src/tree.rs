use crate::chi::{bucket_of, chi};
use crate::{OrderView, SsspError};
use ato::{Ato, ChangeSet};
use graph_core::{EdgeId, NodeId, VertexId, Weight, INF};
use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

const NEVER: u64 = u64::MAX;

/// Min-selector over the edges from one node to another.
#[derive(Debug, Clone, Default)]
struct Selector {
    heap: BTreeSet<(Weight, EdgeId)>,
    bucket: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeStats {
    /// Bucket scans started, summed over all nodes and buckets.
    pub bucket_scans: u64,
    /// In-neighbors examined during those scans.
    pub edge_checks: u64,
    /// Estimate raises.
    pub increases: u64,
    pub splits: u64,
    /// Edges moved between selectors by splits.
    pub moved_edges: u64,
    /// Selector pairs whose bucket was recomputed after splits.
    pub rebucketed: u64,
}

/// Lazily repaired shortest-path tree from a root over a contracted graph
/// whose nodes carry disjoint `τ`-intervals.
///
/// An in-neighbor `X` of `Y` sits in bucket `j` of `Y` when the interval gap
/// between them lies in `[2^j, 2^(j+1))`, and `Y` only looks at bucket `j`
/// when its own estimate is a multiple of the bucket's step. In DAG mode
/// every node is one vertex and the step of bucket `j` is `⌈2^j εδ/n⌉`;
/// over an [`Ato`] of quality `q` it is `⌈2^j εδ/(qδ + n)⌉`, so that a path
/// whose `τ`-cost is at most `qδ + n` loses at most `εδ`.
#[derive(Debug, Clone)]
pub struct BucketedTree {
    n: usize,
    edges: Vec<(VertexId, VertexId, Weight)>,
    alive: Vec<bool>,
    key: Vec<Option<(NodeId, NodeId)>>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
    by_pair: HashMap<(VertexId, VertexId), Vec<EdgeId>>,
    node_of: Vec<NodeId>,
    size: Vec<usize>,
    used: Vec<bool>,
    tau: Vec<usize>,
    root: VertexId,
    delta: u64,
    eps: f64,
    depth: u64,
    eta: u64,
    steps: Vec<u64>,
    est: Vec<u64>,
    parent: Vec<Option<EdgeId>>,
    children: Vec<BTreeSet<NodeId>>,
    sel: HashMap<(NodeId, NodeId), Selector>,
    buckets: Vec<Vec<BTreeSet<NodeId>>>,
    out_nbrs: Vec<BTreeSet<NodeId>>,
    scan_value: Vec<u64>,
    cursor: Vec<Vec<Option<NodeId>>>,
    counted: Vec<Vec<u64>>,
    scans: Vec<Vec<u64>>,
    queue: BTreeSet<(u64, NodeId)>,
    stage: u64,
    stats: TreeStats,
}

struct Setup {
    edges: Vec<(VertexId, VertexId, Weight, bool)>,
    node_of: Vec<NodeId>,
    tau: Vec<usize>,
    root: VertexId,
    delta: u64,
    eps: f64,
    grain: f64,
    depth: u64,
    eta: u64,
    stage: u64,
}

/// Checks that `tau` numbers `0..n` once each and that every edge goes up.
fn check_order(n: usize, edges: &[(VertexId, VertexId, Weight)], tau: &[usize]) -> Result<(), SsspError> {
    if tau.len() != n {
        return Err(SsspError::BadOrder(format!("{} positions for {n} vertices", tau.len())));
    }
    let mut seen = vec![false; n];
    for &t in tau {
        if t >= n || std::mem::replace(&mut seen[t], true) {
            return Err(SsspError::BadOrder(format!("position {t} is out of range or repeated")));
        }
    }
    match edges.iter().find(|&&(u, v, _)| tau[u] >= tau[v]) {
        Some(&(u, v, _)) => Err(SsspError::NotADag(u, v)),
        None => Ok(()),
    }
}

fn check_params(n: usize, root: VertexId, delta: u64, eps: f64) -> Result<(), SsspError> {
    if root >= n {
        return Err(SsspError::VertexOutOfRange(root));
    }
    if delta == 0 || !(eps > 0.0 && eps.is_finite()) {
        return Err(SsspError::BadParameter(format!("need δ ≥ 1 and ε > 0, got δ = {delta}, ε = {eps}")));
    }
    Ok(())
}

impl BucketedTree {
    /// Tree over a DAG with a fixed topological numbering `tau`, run to
    /// depth `⌊(1+4ε)δ⌋`.
    pub fn dag(
        n: usize,
        edges: &[(VertexId, VertexId, Weight)],
        tau: &[usize],
        root: VertexId,
        delta: u64,
        eps: f64,
    ) -> Result<Self, SsspError> {
        check_params(n, root, delta, eps)?;
        if let Some(&(u, v, _)) = edges.iter().find(|&&(u, v, _)| u >= n || v >= n) {
            return Err(SsspError::VertexOutOfRange(u.max(v)));
        }
        check_order(n, edges, tau)?;
        Ok(Self::build(Setup {
            edges: edges.iter().map(|&(u, v, w)| (u, v, w, true)).collect(),
            node_of: (0..n).collect(),
            tau: tau.to_vec(),
            root,
            delta,
            eps,
            grain: eps * delta as f64 / n as f64,
            depth: ((1.0 + 4.0 * eps) * delta as f64).floor() as u64,
            eta: 0,
            stage: 0,
        }))
    }

    /// Like [`BucketedTree::dag`], computing a topological numbering first.
    pub fn dag_auto(
        n: usize,
        edges: &[(VertexId, VertexId, Weight)],
        root: VertexId,
        delta: u64,
        eps: f64,
    ) -> Result<Self, SsspError> {
        let tau = topological_numbering(n, edges)?;
        Self::dag(n, edges, &tau, root, delta, eps)
    }

    /// Tree over the nodes of `ato` for quality `q`, run to depth
    /// `⌈(1+ε)δ + εn/q⌉`. Vertex estimates are node estimates plus the
    /// order's diameter allowance `2αδ`.
    pub fn over_ato(ato: &Ato, root: VertexId, delta: u64, eps: f64, q: f64) -> Result<Self, SsspError> {
        let n = ato.n();
        check_params(n, root, delta, eps)?;
        if !(q > 0.0 && q.is_finite()) {
            return Err(SsspError::BadParameter(format!("quality must be positive, got {q}")));
        }
        let live: Vec<_> = ato.edges().collect();
        let count = live.iter().map(|&(e, ..)| e + 1).max().unwrap_or(0);
        let mut edges = vec![(0, 0, 1, false); count];
        for (e, u, v, w) in live {
            edges[e] = (u, v, w, true);
        }
        let node_of: Vec<NodeId> = (0..n).map(|v| ato.node_of(v)).collect();
        let slots = node_of.iter().map(|&x| x + 1).max().unwrap_or(0);
        let tau = (0..slots).map(|x| if node_of.contains(&x) { ato.tau(x) } else { 0 }).collect();
        Ok(Self::build(Setup {
            edges,
            node_of,
            tau,
            root,
            delta,
            eps,
            grain: eps * delta as f64 / (q * delta as f64 + n as f64),
            depth: ((1.0 + eps) * delta as f64 + eps * n as f64 / q).ceil() as u64,
            eta: ato.diameter_bound(n).ceil() as u64,
            stage: ato.stage(),
        }))
    }

    fn build(s: Setup) -> Self {
        let n = s.node_of.len();
        let levels = bucket_of(n.max(2)) + 1;
        let steps = (0..levels)
            .map(|j| ((2f64.powi(j as i32) * s.grain) - 1e-9).ceil().max(1.0) as u64)
            .collect();
        let mut t = Self {
            n,
            edges: s.edges.iter().map(|&(u, v, w, _)| (u, v, w)).collect(),
            alive: s.edges.iter().map(|e| e.3).collect(),
            key: vec![None; s.edges.len()],
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            by_pair: HashMap::new(),
            node_of: s.node_of,
            size: Vec::new(),
            used: Vec::new(),
            tau: Vec::new(),
            root: s.root,
            delta: s.delta,
            eps: s.eps,
            depth: s.depth,
            eta: s.eta,
            steps,
            est: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
            sel: HashMap::new(),
            buckets: Vec::new(),
            out_nbrs: Vec::new(),
            scan_value: Vec::new(),
            cursor: Vec::new(),
            counted: Vec::new(),
            scans: Vec::new(),
            queue: BTreeSet::new(),
            stage: s.stage,
            stats: TreeStats::default(),
        };
        t.grow(s.tau.len().max(t.node_of.iter().map(|&x| x + 1).max().unwrap_or(0)));
        t.tau[..s.tau.len()].copy_from_slice(&s.tau);
        for v in 0..n {
            let x = t.node_of[v];
            t.size[x] += 1;
            t.used[x] = true;
        }
        for (e, &(u, v, _)) in t.edges.iter().enumerate() {
            if !t.alive[e] {
                continue;
            }
            t.out_adj[u].push(e);
            t.in_adj[v].push(e);
            t.by_pair.entry((u, v)).or_default().push(e);
        }
        for e in 0..t.edges.len() {
            if t.alive[e] {
                t.attach_edge(e);
            }
        }
        t.initial_distances();
        t
    }

    fn grow(&mut self, slots: usize) {
        if self.size.len() >= slots {
            return;
        }
        let levels = self.steps.len();
        self.size.resize(slots, 0);
        self.used.resize(slots, false);
        self.tau.resize(slots, 0);
        self.est.resize(slots, INF);
        self.parent.resize(slots, None);
        self.children.resize(slots, BTreeSet::new());
        self.buckets.resize(slots, vec![BTreeSet::new(); levels]);
        self.out_nbrs.resize(slots, BTreeSet::new());
        self.scan_value.resize(slots, NEVER);
        self.cursor.resize(slots, vec![None; levels]);
        self.counted.resize(slots, vec![NEVER; levels]);
        self.scans.resize(slots, vec![0; levels]);
    }

    /// Exact distances over the contracted graph, cut off at the depth.
    fn initial_distances(&mut self) {
        let r = self.node_of[self.root];
        self.est[r] = 0;
        let mut heap = BinaryHeap::from([Reverse((0u64, r))]);
        while let Some(Reverse((d, x))) = heap.pop() {
            if d > self.est[x] {
                continue;
            }
            for &y in &self.out_nbrs[x] {
                let (w, e) = self.min_of(x, y);
                let nd = d.saturating_add(w);
                if nd <= self.depth && nd < self.est[y] {
                    self.est[y] = nd;
                    self.parent[y] = Some(e);
                    heap.push(Reverse((nd, y)));
                }
            }
        }
        for y in 0..self.parent.len() {
            if let Some(e) = self.parent[y] {
                let x = self.node_of[self.edges[e].0];
                self.children[x].insert(y);
            }
        }
    }

    // ---- selectors and buckets ------------------------------------------

    fn gap(&self, x: NodeId, y: NodeId) -> usize {
        chi(self.tau[x], self.size[x], self.tau[y], self.size[y])
    }

    fn min_of(&self, x: NodeId, y: NodeId) -> (Weight, EdgeId) {
        *self.sel[&(x, y)].heap.first().expect("selectors are never empty")
    }

    /// Files an alive edge under the current nodes of its endpoints.
    fn attach_edge(&mut self, e: EdgeId) {
        let (u, v, w) = self.edges[e];
        let (x, y) = (self.node_of[u], self.node_of[v]);
        if x == y {
            self.key[e] = None;
            return;
        }
        self.key[e] = Some((x, y));
        let j = bucket_of(self.gap(x, y)).min(self.steps.len() - 1);
        let s = self.sel.entry((x, y)).or_insert_with(|| Selector { heap: BTreeSet::new(), bucket: j });
        let fresh = s.heap.is_empty();
        s.heap.insert((w, e));
        if fresh {
            self.buckets[y][j].insert(x);
            self.out_nbrs[x].insert(y);
        }
    }

    fn detach_edge(&mut self, e: EdgeId) {
        let Some((x, y)) = self.key[e].take() else { return };
        let w = self.edges[e].2;
        let s = self.sel.get_mut(&(x, y)).expect("filed edges have a selector");
        s.heap.remove(&(w, e));
        if s.heap.is_empty() {
            let j = s.bucket;
            self.sel.remove(&(x, y));
            self.buckets[y][j].remove(&x);
            self.out_nbrs[x].remove(&y);
        }
    }

    /// Moves the pair `(x, y)` to the bucket its current gap asks for.
    fn rebucket(&mut self, x: NodeId, y: NodeId) -> bool {
        let j = bucket_of(self.gap(x, y)).min(self.steps.len() - 1);
        let s = self.sel.get_mut(&(x, y)).expect("rebucketed pairs have a selector");
        if s.bucket == j {
            return false;
        }
        let old = std::mem::replace(&mut s.bucket, j);
        self.buckets[y][old].remove(&x);
        self.buckets[y][j].insert(x);
        true
    }

    // ---- tree repair ----------------------------------------------------

    fn root_node(&self) -> NodeId {
        self.node_of[self.root]
    }

    fn link(&mut self, y: NodeId, e: EdgeId) {
        self.parent[y] = Some(e);
        let x = self.node_of[self.edges[e].0];
        self.children[x].insert(y);
    }

    fn unlink(&mut self, y: NodeId) {
        if let Some(e) = self.parent[y].take() {
            let x = self.node_of[self.edges[e].0];
            self.children[x].remove(&y);
        }
    }

    fn enqueue(&mut self, y: NodeId) {
        if y != self.root_node() && self.est[y] != INF {
            self.queue.insert((self.est[y], y));
        }
    }

    fn process(&mut self) {
        while let Some((_, y)) = self.queue.pop_first() {
            if self.parent[y].is_none() {
                self.repair(y);
            }
        }
    }

    /// Looks for a certificate at the current estimate of `y`, scanning only
    /// the buckets whose step divides it; raises `y` to the next value at
    /// which some bucket is due when there is none.
    fn repair(&mut self, y: NodeId) {
        let e = self.est[y];
        if self.scan_value[y] != e {
            self.scan_value[y] = e;
            self.cursor[y].fill(None);
        }
        for j in 0..self.steps.len() {
            if self.buckets[y][j].is_empty() || e % self.steps[j] != 0 {
                continue;
            }
            if self.counted[y][j] != e {
                self.counted[y][j] = e;
                self.scans[y][j] += 1;
                self.stats.bucket_scans += 1;
            }
            let from = self.cursor[y][j];
            let cands: Vec<NodeId> = match from {
                Some(c) => self.buckets[y][j].range(c + 1..).copied().collect(),
                None => self.buckets[y][j].iter().copied().collect(),
            };
            for x in cands {
                self.stats.edge_checks += 1;
                let (w, edge) = self.min_of(x, y);
                if self.est[x] != INF && self.est[x].saturating_add(w) <= e {
                    self.link(y, edge);
                    return;
                }
                self.cursor[y][j] = Some(x);
            }
        }
        let next = (0..self.steps.len())
            .filter(|&j| !self.buckets[y][j].is_empty())
            .map(|j| (e / self.steps[j] + 1) * self.steps[j])
            .min()
            .filter(|&v| v <= self.depth)
            .unwrap_or(INF);
        self.raise(y, next);
        self.enqueue(y);
    }

    fn raise(&mut self, y: NodeId, value: u64) {
        self.est[y] = value;
        self.stats.increases += 1;
        for z in std::mem::take(&mut self.children[y]) {
            self.parent[z] = None;
            self.enqueue(z);
        }
    }

    fn find_alive(&self, u: VertexId, v: VertexId) -> Result<EdgeId, SsspError> {
        self.by_pair
            .get(&(u, v))
            .and_then(|ids| ids.iter().copied().find(|&e| self.alive[e]))
            .ok_or(SsspError::NoSuchEdge(u, v))
    }

    fn remove(&mut self, e: EdgeId) {
        self.alive[e] = false;
        self.detach_edge(e);
        let y = self.node_of[self.edges[e].1];
        if self.parent[y] == Some(e) {
            self.unlink(y);
            self.enqueue(y);
        }
        self.process();
    }

    // ---- updates --------------------------------------------------------

    /// Deletes the smallest-id alive edge `(u, v)` and repairs the tree.
    /// Returns the edge id.
    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, SsspError> {
        let e = self.find_alive(u, v)?;
        self.remove(e);
        Ok(e)
    }

    /// Applies the node splits of one stage of the order, then deletes the
    /// smallest-id alive edge `(u, v)`.
    ///
    /// Splits are applied in record order. The records are validated in full
    /// against the current partition before anything changes; `view` must be
    /// at the stage the records end at and must agree with the partition the
    /// records produce.
    pub fn delete_with_changes(
        &mut self,
        u: VertexId,
        v: VertexId,
        view: &impl OrderView,
        changes: &ChangeSet,
    ) -> Result<EdgeId, SsspError> {
        self.validate(view, changes)?;
        let e = self.find_alive(u, v)?;
        self.apply_changes(view, changes);
        self.remove(e);
        Ok(e)
    }

    fn validate(&self, view: &impl OrderView, changes: &ChangeSet) -> Result<(), SsspError> {
        let bad = |msg: String| Err(SsspError::InconsistentChangeRecord(msg));
        if changes.from != self.stage || changes.to != view.stage() || changes.to < changes.from {
            return bad(format!(
                "records span stages {}..{}, tree is at {} and the order at {}",
                changes.from,
                changes.to,
                self.stage,
                view.stage()
            ));
        }
        let mut node_of = self.node_of.clone();
        let mut size: BTreeMap<NodeId, usize> = BTreeMap::new();
        let live = |x: NodeId, size: &BTreeMap<NodeId, usize>| {
            size.get(&x).copied().unwrap_or_else(|| self.size.get(x).copied().unwrap_or(0))
        };
        let mut used: BTreeSet<NodeId> = (0..self.used.len()).filter(|&x| self.used[x]).collect();
        for rec in &changes.splits {
            let x = rec.node;
            let total = live(x, &size);
            if total == 0 {
                return bad(format!("node {x} does not exist"));
            }
            if rec.parts.len() < 2 || rec.parts.iter().filter(|p| p.0 == x).count() != 1 {
                return bad(format!("split of {x} must list it once among at least two parts"));
            }
            let heir_len = rec.parts.iter().find(|p| p.0 == x).map(|p| p.1.len()).unwrap_or(0);
            let mut seen = BTreeSet::new();
            let mut count = 0;
            for (id, vs) in &rec.parts {
                if *id != x && !used.insert(*id) {
                    return bad(format!("part id {id} of node {x} is already in use"));
                }
                if vs.is_empty() || vs.len() > heir_len {
                    return bad(format!("part {id} of node {x} is empty or larger than the inheriting part"));
                }
                for &v in vs {
                    if v >= node_of.len() || node_of[v] != x || !seen.insert(v) {
                        return bad(format!("vertex {v} is not a fresh member of node {x}"));
                    }
                }
                count += vs.len();
            }
            if count != total {
                return bad(format!("parts of node {x} hold {count} vertices, the node holds {total}"));
            }
            for (id, vs) in &rec.parts {
                size.insert(*id, vs.len());
                for &v in vs {
                    node_of[v] = *id;
                }
            }
        }
        if let Some(v) = (0..self.n).find(|&v| view.node_of(v) != node_of[v]) {
            return bad(format!("records put vertex {v} in node {}, the order has {}", node_of[v], view.node_of(v)));
        }
        Ok(())
    }

    fn apply_changes(&mut self, view: &impl OrderView, changes: &ChangeSet) {
        let mut touched = BTreeSet::new();
        for rec in &changes.splits {
            self.stats.splits += 1;
            let x = rec.node;
            let was_root = self.root_node() == x;
            let top = rec.parts.iter().map(|p| p.0 + 1).max().unwrap_or(0);
            self.grow(top);
            let mut moved = Vec::new();
            for (id, vs) in &rec.parts {
                touched.insert(*id);
                self.tau[*id] = view.tau(*id);
                if *id == x {
                    continue;
                }
                self.used[*id] = true;
                self.size[*id] = vs.len();
                self.size[x] -= vs.len();
                self.est[*id] = self.est[x];
                for &v in vs {
                    self.node_of[v] = *id;
                }
                moved.extend_from_slice(vs);
            }
            for v in moved {
                let incident: Vec<EdgeId> = self.out_adj[v].iter().chain(&self.in_adj[v]).copied().collect();
                for e in incident {
                    if !self.alive[e] {
                        continue;
                    }
                    let (a, b, _) = self.edges[e];
                    let want = (self.node_of[a], self.node_of[b]);
                    let want = (want.0 != want.1).then_some(want);
                    if self.key[e] != want {
                        self.detach_edge(e);
                        self.attach_edge(e);
                        self.stats.moved_edges += 1;
                    }
                }
            }

            // Children follow the piece holding the tail of their tree edge.
            for z in self.children[x].clone() {
                let t = self.node_of[self.edges[self.parent[z].expect("children have parents")].0];
                if t != x {
                    self.children[x].remove(&z);
                    self.children[t].insert(z);
                }
            }
            // The piece holding the head of the tree edge into `x` keeps it,
            // the root piece needs none, and every other piece is pending.
            let certified = if was_root {
                Some(self.root_node())
            } else {
                self.parent[x].map(|e| self.node_of[self.edges[e].1])
            };
            if let (Some(h), Some(e)) = (certified, self.parent[x]) {
                if h != x {
                    self.unlink(x);
                    self.link(h, e);
                }
            }
            for (id, _) in &rec.parts {
                if Some(*id) != certified {
                    self.unlink(*id);
                    self.enqueue(*id);
                }
            }
        }

        for &p in &touched {
            self.scan_value[p] = NEVER;
            let ins: Vec<NodeId> = self.buckets[p].iter().flatten().copied().collect();
            for x in ins {
                self.stats.rebucketed += u64::from(self.rebucket(x, p));
            }
            let outs: Vec<NodeId> = self.out_nbrs[p].iter().copied().collect();
            for z in outs {
                if self.rebucket(p, z) {
                    self.stats.rebucketed += 1;
                    self.scan_value[z] = NEVER;
                }
            }
        }
        self.stage = changes.to;
    }

    // ---- queries --------------------------------------------------------

    /// Estimate for vertex `v`: its node's estimate plus the diameter
    /// allowance, or [`INF`].
    pub fn estimate(&self, v: VertexId) -> u64 {
        match self.est[self.node_of[v]] {
            INF => INF,
            d => d + self.eta,
        }
    }

    pub fn node_estimate(&self, x: NodeId) -> u64 {
        self.est[x]
    }

    pub fn node_of(&self, v: VertexId) -> NodeId {
        self.node_of[v]
    }

    /// Tree edge certifying the estimate of node `x`.
    pub fn parent_edge(&self, x: NodeId) -> Option<EdgeId> {
        self.parent[x]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Largest finite estimate; anything above reads as [`INF`].
    pub fn depth(&self) -> u64 {
        self.depth
    }

    /// Diameter allowance added to vertex estimates (0 in DAG mode).
    pub fn eta(&self) -> u64 {
        self.eta
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn bucket_count(&self) -> usize {
        self.steps.len()
    }

    /// Estimate granularity of bucket `j`.
    pub fn step(&self, j: usize) -> u64 {
        self.steps[j]
    }

    /// In-neighbors of node `y` filed in bucket `j`.
    pub fn bucket(&self, y: NodeId, j: usize) -> impl Iterator<Item = NodeId> + '_ {
        self.buckets[y][j].iter().copied()
    }

    /// Number of scans of each bucket of node `y` so far.
    pub fn scan_counts(&self, y: NodeId) -> &[u64] {
        &self.scans[y]
    }

    pub fn stats(&self) -> &TreeStats {
        &self.stats
    }

    /// Recomputes selectors, buckets and the tree from the alive edges and
    /// reports the first disagreement.
    pub fn audit(&self) -> Result<(), String> {
        let mut sizes = vec![0usize; self.size.len()];
        for v in 0..self.n {
            sizes[self.node_of[v]] += 1;
        }
        if sizes != self.size {
            return Err("node sizes disagree with the vertex map".into());
        }
        let mut want: HashMap<(NodeId, NodeId), BTreeSet<(Weight, EdgeId)>> = HashMap::new();
        for (e, &(u, v, w)) in self.edges.iter().enumerate() {
            let (x, y) = (self.node_of[u], self.node_of[v]);
            if self.alive[e] && x != y {
                want.entry((x, y)).or_default().insert((w, e));
            }
        }
        if want.len() != self.sel.len() {
            return Err(format!("{} selectors, expected {}", self.sel.len(), want.len()));
        }
        for (&(x, y), heap) in &want {
            let Some(s) = self.sel.get(&(x, y)) else {
                return Err(format!("missing selector {x}->{y}"));
            };
            if &s.heap != heap {
                return Err(format!("selector {x}->{y} holds the wrong edges"));
            }
            let j = bucket_of(self.gap(x, y)).min(self.steps.len() - 1);
            if s.bucket != j || !self.buckets[y][j].contains(&x) || !self.out_nbrs[x].contains(&y) {
                return Err(format!("pair {x}->{y} at gap {} is not filed in bucket {j}", self.gap(x, y)));
            }
        }
        let filed: usize = self.buckets.iter().flatten().map(BTreeSet::len).sum();
        let outs: usize = self.out_nbrs.iter().map(BTreeSet::len).sum();
        if filed != want.len() || outs != want.len() {
            return Err("buckets or out-neighbor sets hold stale pairs".into());
        }
        let r = self.root_node();
        if self.est[r] != 0 || self.parent[r].is_some() {
            return Err("root node must sit at 0 without a parent".into());
        }
        for y in (0..self.size.len()).filter(|&y| self.size[y] > 0) {
            let d = self.est[y];
            if d != INF && d > self.depth {
                return Err(format!("node {y} is finite above the depth"));
            }
            match self.parent[y] {
                None if y != r && d != INF => return Err(format!("node {y} has no certificate")),
                None => {}
                Some(e) => {
                    let (a, b, w) = self.edges[e];
                    let x = self.node_of[a];
                    if !self.alive[e] || self.node_of[b] != y || x == y {
                        return Err(format!("tree edge {e} of node {y} is dead or misplaced"));
                    }
                    if self.est[x] == INF || self.est[x] + w > d {
                        return Err(format!("tree edge {e} does not certify node {y}"));
                    }
                    if !self.children[x].contains(&y) {
                        return Err(format!("node {y} is missing from the children of {x}"));
                    }
                }
            }
        }
        let kids: usize = self.children.iter().map(BTreeSet::len).sum();
        if kids != self.parent.iter().flatten().count() {
            return Err("children sets hold stale entries".into());
        }
        Ok(())
    }

    /// Checks the stored interval starts against `view`.
    pub fn audit_order(&self, view: &impl OrderView) -> Result<(), String> {
        for x in (0..self.size.len()).filter(|&x| self.size[x] > 0) {
            if self.tau[x] != view.tau(x) {
                return Err(format!("node {x} starts at {}, the order says {}", self.tau[x], view.tau(x)));
            }
        }
        Ok(())
    }
}

/// Topological numbering by repeatedly taking the smallest source.
pub fn topological_numbering(n: usize, edges: &[(VertexId, VertexId, Weight)]) -> Result<Vec<usize>, SsspError> {
    let mut indeg = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for &(u, v, _) in edges {
        if u >= n || v >= n {
            return Err(SsspError::VertexOutOfRange(u.max(v)));
        }
        indeg[v] += 1;
        out[u].push(v);
    }
    let mut ready: BTreeSet<VertexId> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut tau = vec![usize::MAX; n];
    let mut next = 0;
    while let Some(u) = ready.pop_first() {
        tau[u] = next;
        next += 1;
        for &v in &out[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.insert(v);
            }
        }
    }
    match edges.iter().find(|&&(u, v, _)| tau[u] == usize::MAX || tau[v] == usize::MAX) {
        Some(&(u, v, _)) => Err(SsspError::NotADag(u, v)),
        None => Ok(tau),
    }
}
