//! Shortest-path trees for S-distances over a contracted graph.
//!
//! The graph is a multigraph on nodes, each node a set of original vertices.
//! An edge `(a, b)` costs 1 when the node of `a` is a feedback node and 0
//! otherwise, and a [`GesTree`] keeps these distances from and to the node of
//! a root vertex, capped at a depth. Feedback nodes are single vertices and
//! meet every cycle, so no cycle has cost 0; that is what lets the repair loop
//! re-attach nodes through 0-cost edges without creating loops.
//!
//! Besides edge and vertex deletions the tree supports splitting a node and
//! growing the feedback set, which is how a node hierarchy refines itself
//! without ever inserting edges.

use graph_core::{BucketQueue, EdgeId, VertexId, INF};
use indexmap::IndexSet;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GesError {
    #[error("the feedback set misses a cycle of cost 0")]
    NotFeedbackSet,
    #[error("edge {0} is not an alive edge of this tree")]
    NoSuchEdge(EdgeId),
    #[error("vertex {0} is not an alive vertex of this tree")]
    NoSuchVertex(VertexId),
    #[error("edges run both ways between the split part and the rest of its node")]
    SplitPreconditionViolated,
    #[error("vertex {0} does not form a node on its own")]
    NotSingleton(VertexId),
    #[error("the root vertex {0} cannot be removed")]
    RootRemoval(VertexId),
    #[error("invalid split: {0}")]
    BadSplit(String),
}

/// Which distance a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// From the root.
    Out = 0,
    /// To the root.
    In = 1,
}

const SIDES: [Side; 2] = [Side::Out, Side::In];

#[derive(Debug, Clone)]
struct Node {
    members: Vec<usize>,
    alive: bool,
    in_s: bool,
}

#[derive(Debug, Clone, Copy)]
struct Arc {
    global: EdgeId,
    tail: usize,
    head: usize,
    alive: bool,
}

/// Per-direction tree state, indexed by local node id.
#[derive(Debug, Clone, Default)]
struct Dir {
    est: Vec<u64>,
    parent: Vec<Option<usize>>,
    /// Position in the concatenated scan lists of the node's members.
    cursor: Vec<(usize, usize)>,
    next_min: Vec<u64>,
    queue: BucketQueue,
    scans: u64,
}

impl Dir {
    fn add_node(&mut self, est: u64) {
        self.est.push(est);
        self.parent.push(None);
        self.cursor.push((0, 0));
        self.next_min.push(INF);
    }
}

/// Generalized ES tree; see the crate docs.
///
/// Vertices and edges are addressed by the caller's ids. Internally both are
/// renumbered densely, and nodes get local ids that are never reused.
#[derive(Debug, Clone)]
pub struct GesTree {
    depth: u64,
    root: usize,
    vid: HashMap<VertexId, usize>,
    verts: Vec<VertexId>,
    v_alive: Vec<bool>,
    node_of: Vec<usize>,
    eid: HashMap<EdgeId, usize>,
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    nodes: Vec<Node>,
    dirs: [Dir; 2],
    unreachable: IndexSet<usize>,
}

impl GesTree {
    /// Builds the tree.
    ///
    /// `nodes` lists the vertex sets of the partition; together they form
    /// the vertex universe. Edges with an endpoint outside the universe are
    /// ignored. Every vertex in `s` must form a node on its own, and the
    /// members of `s` must meet every cycle of the contracted graph.
    pub fn new<N: AsRef<[VertexId]>>(
        nodes: &[N],
        edges: impl IntoIterator<Item = (EdgeId, VertexId, VertexId)>,
        root: VertexId,
        s: &[VertexId],
        depth: u64,
    ) -> Result<Self, GesError> {
        let mut t = GesTree {
            depth,
            root: 0,
            vid: HashMap::new(),
            verts: Vec::new(),
            v_alive: Vec::new(),
            node_of: Vec::new(),
            eid: HashMap::new(),
            arcs: Vec::new(),
            out: Vec::new(),
            inc: Vec::new(),
            nodes: Vec::new(),
            dirs: [Dir::default(), Dir::default()],
            unreachable: IndexSet::new(),
        };
        for (x, members) in nodes.iter().enumerate() {
            let mut local = Vec::new();
            for &v in members.as_ref() {
                if t.vid.contains_key(&v) {
                    return Err(GesError::BadSplit(format!("vertex {v} appears in two nodes")));
                }
                let lv = t.verts.len();
                t.vid.insert(v, lv);
                t.verts.push(v);
                t.v_alive.push(true);
                t.node_of.push(x);
                t.out.push(Vec::new());
                t.inc.push(Vec::new());
                local.push(lv);
            }
            if local.is_empty() {
                return Err(GesError::BadSplit(format!("node {x} is empty")));
            }
            t.nodes.push(Node {
                members: local,
                alive: true,
                in_s: false,
            });
        }
        t.root = *t.vid.get(&root).ok_or(GesError::NoSuchVertex(root))?;
        for (global, u, v) in edges {
            let (Some(&a), Some(&b)) = (t.vid.get(&u), t.vid.get(&v)) else {
                continue;
            };
            let id = t.arcs.len();
            t.eid.insert(global, id);
            t.arcs.push(Arc {
                global,
                tail: a,
                head: b,
                alive: true,
            });
            t.out[a].push(id);
            t.inc[b].push(id);
        }
        for &v in s {
            let lv = *t.vid.get(&v).ok_or(GesError::NoSuchVertex(v))?;
            let x = t.node_of[lv];
            if t.nodes[x].members.len() != 1 {
                return Err(GesError::NotSingleton(v));
            }
            t.nodes[x].in_s = true;
        }
        if !t.is_feedback_set() {
            return Err(GesError::NotFeedbackSet);
        }
        for d in SIDES {
            for _ in 0..t.nodes.len() {
                t.dirs[d as usize].add_node(INF);
            }
            t.initial_search(d);
        }
        for x in 0..t.nodes.len() {
            if t.is_unreachable(x) {
                t.unreachable.insert(x);
            }
        }
        Ok(t)
    }

    // ---- queries -------------------------------------------------------

    pub fn depth(&self) -> u64 {
        self.depth
    }

    pub fn root(&self) -> VertexId {
        self.verts[self.root]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vid.get(&v).is_some_and(|&lv| self.v_alive[lv])
    }

    fn local(&self, v: VertexId) -> Result<usize, GesError> {
        match self.vid.get(&v) {
            Some(&lv) if self.v_alive[lv] => Ok(lv),
            _ => Err(GesError::NoSuchVertex(v)),
        }
    }

    /// Capped S-distance from the root to `v`; [`INF`] for removed or
    /// unknown vertices.
    pub fn dist_out(&self, v: VertexId) -> u64 {
        self.dist(Side::Out, v)
    }

    /// Capped S-distance from `v` to the root.
    pub fn dist_in(&self, v: VertexId) -> u64 {
        self.dist(Side::In, v)
    }

    pub fn dist(&self, side: Side, v: VertexId) -> u64 {
        match self.local(v) {
            Ok(lv) => self.dirs[side as usize].est[self.node_of[lv]],
            Err(_) => INF,
        }
    }

    /// A vertex whose distance to or from the root exceeds the depth, if any.
    pub fn get_unreachable(&self) -> Option<VertexId> {
        self.unreachable
            .first()
            .map(|&x| self.verts[self.nodes[x].members[0]])
    }

    /// All vertices of the node holding `v`.
    pub fn node_members(&self, v: VertexId) -> Result<Vec<VertexId>, GesError> {
        let lv = self.local(v)?;
        Ok(self.members_global(self.node_of[lv]))
    }

    fn members_global(&self, x: usize) -> Vec<VertexId> {
        let mut m: Vec<VertexId> = self.nodes[x].members.iter().map(|&lv| self.verts[lv]).collect();
        m.sort_unstable();
        m
    }

    /// Vertex sets of the alive nodes in local-id order.
    pub fn nodes(&self) -> Vec<Vec<VertexId>> {
        (0..self.nodes.len())
            .filter(|&x| self.nodes[x].alive)
            .map(|x| self.members_global(x))
            .collect()
    }

    /// Alive vertices in the tree.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = (0..self.verts.len())
            .filter(|&lv| self.v_alive[lv])
            .map(|lv| self.verts[lv])
            .collect();
        vs.sort_unstable();
        vs
    }

    pub fn in_s(&self, v: VertexId) -> bool {
        self.local(v).is_ok_and(|lv| self.nodes[self.node_of[lv]].in_s)
    }

    pub fn same_node(&self, a: VertexId, b: VertexId) -> bool {
        match (self.local(a), self.local(b)) {
            (Ok(x), Ok(y)) => self.node_of[x] == self.node_of[y],
            _ => false,
        }
    }

    /// Alive edges as `(edge id, tail, head)` in the caller's ids.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.arcs
            .iter()
            .filter(|a| a.alive)
            .map(|a| (a.global, self.verts[a.tail], self.verts[a.head]))
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.eid.get(&e).is_some_and(|&a| self.arcs[a].alive)
    }

    /// Repair-loop scans performed so far in each direction.
    pub fn scans(&self) -> [u64; 2] {
        [self.dirs[0].scans, self.dirs[1].scans]
    }

    /// True when no cycle of cost 0 runs between distinct alive nodes.
    pub fn is_feedback_set(&self) -> bool {
        let k = self.nodes.len();
        let mut indeg = vec![0usize; k];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); k];
        for a in self.arcs.iter().filter(|a| a.alive) {
            let (x, y) = (self.node_of[a.tail], self.node_of[a.head]);
            if x != y && !self.nodes[x].in_s {
                succ[x].push(y);
                indeg[y] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..k).filter(|&x| indeg[x] == 0).collect();
        let mut seen = 0;
        while let Some(x) = stack.pop() {
            seen += 1;
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    stack.push(y);
                }
            }
        }
        seen == k
    }

    // ---- updates -------------------------------------------------------

    pub fn delete_edge(&mut self, e: EdgeId) -> Result<(), GesError> {
        let a = match self.eid.get(&e) {
            Some(&a) if self.arcs[a].alive => a,
            _ => return Err(GesError::NoSuchEdge(e)),
        };
        self.arcs[a].alive = false;
        for d in SIDES {
            self.lose_certificate(d, a);
        }
        self.settle();
        Ok(())
    }

    /// Removes vertices and every edge touching them. Nodes that become
    /// empty disappear; the root cannot be removed.
    pub fn delete_vertices(&mut self, vs: &[VertexId]) -> Result<(), GesError> {
        let mut locals = Vec::with_capacity(vs.len());
        for &v in vs {
            let lv = self.local(v)?;
            if lv == self.root {
                return Err(GesError::RootRemoval(v));
            }
            locals.push(lv);
        }
        for lv in locals {
            if !self.v_alive[lv] {
                continue;
            }
            self.v_alive[lv] = false;
            for i in 0..self.out[lv].len() + self.inc[lv].len() {
                let a = if i < self.out[lv].len() {
                    self.out[lv][i]
                } else {
                    self.inc[lv][i - self.out[lv].len()]
                };
                if self.arcs[a].alive {
                    self.arcs[a].alive = false;
                    for d in SIDES {
                        self.lose_certificate(d, a);
                    }
                }
            }
            let x = self.node_of[lv];
            self.nodes[x].members.retain(|&m| m != lv);
            if self.nodes[x].members.is_empty() {
                self.nodes[x].alive = false;
                self.unreachable.shift_remove(&x);
                for dir in &mut self.dirs {
                    dir.est[x] = INF;
                    dir.parent[x] = None;
                }
            } else {
                for dir in &mut self.dirs {
                    dir.cursor[x] = (0, 0);
                    dir.next_min[x] = INF;
                }
            }
        }
        self.settle();
        Ok(())
    }

    /// Splits `part` off the node that contains it. Edges between `part` and
    /// the rest of that node must all point the same way.
    pub fn split_node(&mut self, part: &[VertexId]) -> Result<(), GesError> {
        let first = *part.first().ok_or_else(|| GesError::BadSplit("empty part".into()))?;
        let x = self.node_of[self.local(first)?];
        let mut inside = vec![false; self.verts.len()];
        for &v in part {
            let lv = self.local(v)?;
            if self.node_of[lv] != x {
                return Err(GesError::BadSplit(format!("vertex {v} lies in another node")));
            }
            inside[lv] = true;
        }
        let (mut forward, mut backward) = (false, false);
        for &m in &self.nodes[x].members {
            for &a in &self.out[m] {
                let arc = self.arcs[a];
                if arc.alive && self.node_of[arc.head] == x && inside[arc.tail] != inside[arc.head] {
                    if inside[arc.tail] {
                        forward = true;
                    } else {
                        backward = true;
                    }
                }
            }
        }
        if forward && backward {
            return Err(GesError::SplitPreconditionViolated);
        }
        let rest: Vec<VertexId> = self.nodes[x]
            .members
            .iter()
            .filter(|&&m| !inside[m])
            .map(|&m| self.verts[m])
            .collect();
        self.split_node_unchecked(&[part.to_vec(), rest])?;
        self.settle();
        Ok(())
    }

    /// Replaces one node by `parts` without checking edge directions and
    /// without re-settling. The caller must restore the feedback property
    /// (typically with [`GesTree::augment`], which settles) before any other
    /// update.
    pub fn split_node_unchecked(&mut self, parts: &[Vec<VertexId>]) -> Result<(), GesError> {
        if parts.len() < 2 {
            return Err(GesError::BadSplit("need at least two parts".into()));
        }
        if parts.iter().any(Vec::is_empty) {
            return Err(GesError::BadSplit("empty part".into()));
        }
        let x = self.node_of[self.local(parts[0][0])?];
        let mut local_parts = Vec::with_capacity(parts.len());
        let mut total = 0;
        let mut seen = std::collections::HashSet::new();
        for p in parts {
            let mut lp = Vec::with_capacity(p.len());
            for &v in p {
                let lv = self.local(v)?;
                if self.node_of[lv] != x || !seen.insert(lv) {
                    return Err(GesError::BadSplit(format!("vertex {v} is not a fresh member of the node")));
                }
                lp.push(lv);
            }
            total += lp.len();
            local_parts.push(lp);
        }
        if total != self.nodes[x].members.len() {
            return Err(GesError::BadSplit("parts do not cover the node".into()));
        }
        let heir = (0..local_parts.len())
            .max_by_key(|&i| (local_parts[i].len(), std::cmp::Reverse(parts[i].iter().min().copied())))
            .expect("two parts");
        let was_unreachable = self.unreachable.contains(&x);
        let mut ids = Vec::with_capacity(local_parts.len());
        for (i, lp) in local_parts.into_iter().enumerate() {
            let id = if i == heir {
                x
            } else {
                self.nodes.push(Node {
                    members: Vec::new(),
                    alive: true,
                    in_s: false,
                });
                for d in SIDES {
                    let est = self.dirs[d as usize].est[x];
                    self.dirs[d as usize].add_node(est);
                }
                self.nodes.len() - 1
            };
            for &lv in &lp {
                self.node_of[lv] = id;
            }
            self.nodes[id].members = lp;
            ids.push(id);
        }
        self.nodes[x].in_s = self.nodes[x].in_s && self.nodes[x].members.len() == 1;
        for d in SIDES {
            let parent = self.dirs[d as usize].parent[x];
            let keeper = parent.map(|a| self.node_of[self.near(d, a)]);
            for &id in &ids {
                let dir = &mut self.dirs[d as usize];
                dir.cursor[id] = (0, 0);
                dir.next_min[id] = INF;
                if Some(id) == keeper {
                    dir.parent[id] = parent;
                } else {
                    dir.parent[id] = None;
                    if dir.est[id] != INF && id != self.node_of[self.root] {
                        dir.queue.push(id, dir.est[id] as usize);
                    }
                }
            }
        }
        if was_unreachable {
            for &id in &ids {
                self.unreachable.insert(id);
            }
        }
        Ok(())
    }

    /// Adds single-vertex nodes to the feedback set and re-settles. Vertices
    /// already in the set are skipped.
    pub fn augment(&mut self, s: &[VertexId]) -> Result<(), GesError> {
        let mut fresh = Vec::new();
        for &v in s {
            let lv = self.local(v)?;
            let x = self.node_of[lv];
            if self.nodes[x].members.len() != 1 {
                return Err(GesError::NotSingleton(v));
            }
            if !self.nodes[x].in_s {
                fresh.push(lv);
            }
        }
        for &lv in &fresh {
            self.nodes[self.node_of[lv]].in_s = true;
        }
        for lv in fresh {
            for i in 0..self.out[lv].len() {
                let a = self.out[lv][i];
                for d in SIDES {
                    self.lose_certificate(d, a);
                }
            }
        }
        self.settle();
        Ok(())
    }

    /// Processes pending repairs in both directions.
    pub fn settle(&mut self) {
        debug_assert!(self.is_feedback_set(), "settling with a cost-0 cycle present");
        for d in SIDES {
            self.repair(d);
        }
    }

    // ---- internals -----------------------------------------------------

    /// Endpoint of `a` inside the node that `a` can certify in direction `d`.
    fn near(&self, d: Side, a: usize) -> usize {
        match d {
            Side::Out => self.arcs[a].head,
            Side::In => self.arcs[a].tail,
        }
    }

    fn far(&self, d: Side, a: usize) -> usize {
        match d {
            Side::Out => self.arcs[a].tail,
            Side::In => self.arcs[a].head,
        }
    }

    fn cost(&self, a: usize) -> u64 {
        u64::from(self.nodes[self.node_of[self.arcs[a].tail]].in_s)
    }

    /// Edges that can certify a member of `lv`'s node in direction `d`.
    fn scan_list(&self, d: Side, lv: usize) -> &[usize] {
        match d {
            Side::Out => &self.inc[lv],
            Side::In => &self.out[lv],
        }
    }

    /// Edges through which `lv`'s node can certify others in direction `d`.
    fn child_list(&self, d: Side, lv: usize) -> &[usize] {
        match d {
            Side::Out => &self.out[lv],
            Side::In => &self.inc[lv],
        }
    }

    fn is_unreachable(&self, x: usize) -> bool {
        self.nodes[x].alive && (self.dirs[0].est[x] == INF || self.dirs[1].est[x] == INF)
    }

    fn initial_search(&mut self, d: Side) {
        let di = d as usize;
        let r = self.node_of[self.root];
        self.dirs[di].est[r] = 0;
        self.dirs[di].queue.push(r, 0);
        while let Some((x, k)) = self.dirs[di].queue.pop_min() {
            let k = k as u64;
            if self.dirs[di].est[x] != k {
                continue;
            }
            for mi in 0..self.nodes[x].members.len() {
                let m = self.nodes[x].members[mi];
                for i in 0..self.child_list(d, m).len() {
                    let a = self.child_list(d, m)[i];
                    if !self.arcs[a].alive {
                        continue;
                    }
                    let y = self.node_of[self.near(d, a)];
                    let cand = k + self.cost(a);
                    let dir = &mut self.dirs[di];
                    if y != x && cand <= self.depth && cand < dir.est[y] {
                        dir.est[y] = cand;
                        dir.parent[y] = Some(a);
                        dir.queue.push(y, cand as usize);
                    }
                }
            }
        }
    }

    fn lose_certificate(&mut self, d: Side, a: usize) {
        let di = d as usize;
        let y = self.node_of[self.near(d, a)];
        if self.dirs[di].parent[y] != Some(a) {
            return;
        }
        self.dirs[di].parent[y] = None;
        let f = self.node_of[self.far(d, a)];
        if self.arcs[a].alive && f != y && self.dirs[di].est[f] != INF {
            let cand = self.dirs[di].est[f] + self.cost(a);
            self.dirs[di].next_min[y] = self.dirs[di].next_min[y].min(cand);
        }
        let est = self.dirs[di].est[y];
        if est != INF {
            self.dirs[di].queue.push(y, est as usize);
        }
    }

    fn repair(&mut self, d: Side) {
        let di = d as usize;
        let root_node = self.node_of[self.root];
        while let Some((x, k)) = self.dirs[di].queue.pop_min() {
            let k = k as u64;
            let dir = &self.dirs[di];
            if x == root_node || !self.nodes[x].alive || dir.est[x] != k || dir.parent[x].is_some() {
                continue;
            }
            let mut found = None;
            let (mut mi, mut pos) = dir.cursor[x];
            'scan: while mi < self.nodes[x].members.len() {
                let m = self.nodes[x].members[mi];
                while pos < self.scan_list(d, m).len() {
                    let a = self.scan_list(d, m)[pos];
                    pos += 1;
                    self.dirs[di].scans += 1;
                    if !self.arcs[a].alive {
                        continue;
                    }
                    let f = self.node_of[self.far(d, a)];
                    let fe = self.dirs[di].est[f];
                    if f == x || fe == INF {
                        continue;
                    }
                    let cand = fe + self.cost(a);
                    debug_assert!(cand >= k, "estimate above an in-neighbour bound");
                    if cand == k {
                        found = Some(a);
                        break 'scan;
                    }
                    let nm = &mut self.dirs[di].next_min[x];
                    *nm = (*nm).min(cand);
                }
                mi += 1;
                pos = 0;
            }
            if found.is_some() {
                let dir = &mut self.dirs[di];
                dir.cursor[x] = (mi, pos);
                dir.parent[x] = found;
                continue;
            }
            let dir = &mut self.dirs[di];
            let raised = dir.next_min[x];
            dir.cursor[x] = (0, 0);
            dir.next_min[x] = INF;
            if raised > self.depth {
                dir.est[x] = INF;
                self.unreachable.insert(x);
            } else {
                dir.est[x] = raised;
                dir.queue.push(x, raised as usize);
            }
            for mi in 0..self.nodes[x].members.len() {
                let m = self.nodes[x].members[mi];
                for i in 0..self.child_list(d, m).len() {
                    let a = self.child_list(d, m)[i];
                    self.lose_certificate(d, a);
                }
            }
        }
    }
}
