use crate::EsError;
use graph_core::{BucketQueue, DynamicDigraph, EdgeId, Mode, VertexId, Weight, INF};

/// Which distances a tree maintains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `dist(root, v)`.
    Out,
    /// `dist(v, root)`, computed on the reversed graph.
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variant {
    Decremental,
    Incremental,
}

impl Variant {
    fn name(self) -> &'static str {
        match self {
            Variant::Decremental => "decremental",
            Variant::Incremental => "incremental",
        }
    }
}

/// An edge as the tree sees it: for [`Direction::In`] tail and head are
/// swapped relative to the input graph.
#[derive(Debug, Clone, Copy)]
struct Arc {
    tail: VertexId,
    head: VertexId,
    weight: Weight,
    alive: bool,
}

/// Even–Shiloach tree to depth `depth`.
///
/// Each vertex keeps a cursor into its (tombstoned) in-list. While the
/// estimate of `v` stays at some value `k`, every in-edge left of the cursor
/// is known not to certify `k`, so scanning resumes where it stopped. When the
/// list runs out the estimate jumps straight to the smallest candidate seen
/// during the pass, which skips the unit steps a weighted graph would
/// otherwise need. Each in-edge is therefore examined at most once per
/// distinct estimate value.
#[derive(Debug, Clone)]
pub struct EsTree {
    root: VertexId,
    depth: u64,
    direction: Direction,
    variant: Variant,
    arcs: Vec<Arc>,
    out: Vec<Vec<EdgeId>>,
    inc: Vec<Vec<EdgeId>>,
    est: Vec<u64>,
    parent: Vec<Option<EdgeId>>,
    cursor: Vec<usize>,
    next_min: Vec<u64>,
    scans: Vec<u64>,
    queue: BucketQueue,
}

impl EsTree {
    /// Builds a tree over the alive edges of `g`. The variant follows the
    /// graph's mode; mixed-mode graphs are rejected. Edge ids of the tree are
    /// the edge ids of `g`.
    pub fn new(g: &DynamicDigraph, root: VertexId, depth: u64, direction: Direction) -> Result<Self, EsError> {
        let incremental = match g.mode() {
            Mode::Decremental => false,
            Mode::Incremental => true,
            Mode::Mixed => {
                return Err(EsError::WrongVariant {
                    op: "construction on a mixed-mode graph",
                    variant: "partially dynamic",
                })
            }
        };
        let arcs = g.edges().iter().map(|e| (e.tail, e.head, e.weight, e.alive));
        Ok(Self::from_arcs(g.n(), arcs, root, depth, direction, incremental))
    }

    /// Builds a tree from raw `(tail, head, weight, alive)` records; the
    /// position of a record is its edge id.
    pub fn from_arcs(
        n: usize,
        arcs: impl IntoIterator<Item = (VertexId, VertexId, Weight, bool)>,
        root: VertexId,
        depth: u64,
        direction: Direction,
        incremental: bool,
    ) -> Self {
        let mut t = Self {
            root,
            depth,
            direction,
            variant: if incremental {
                Variant::Incremental
            } else {
                Variant::Decremental
            },
            arcs: Vec::new(),
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            est: vec![INF; n],
            parent: vec![None; n],
            cursor: vec![0; n],
            next_min: vec![INF; n],
            scans: vec![0; n],
            queue: BucketQueue::new(),
        };
        for (u, v, w, alive) in arcs {
            t.push_arc(u, v, w, alive);
        }
        t.est[root] = 0;
        t.queue.push(root, 0);
        t.relax_from_queue();
        t
    }

    fn push_arc(&mut self, u: VertexId, v: VertexId, weight: Weight, alive: bool) -> EdgeId {
        let (tail, head) = match self.direction {
            Direction::Out => (u, v),
            Direction::In => (v, u),
        };
        let id = self.arcs.len();
        self.arcs.push(Arc {
            tail,
            head,
            weight,
            alive,
        });
        self.out[tail].push(id);
        self.inc[head].push(id);
        id
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn depth(&self) -> u64 {
        self.depth
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn n(&self) -> usize {
        self.est.len()
    }

    /// Current estimate, [`INF`] when the vertex is beyond the depth cap.
    pub fn est(&self, v: VertexId) -> u64 {
        self.est[v]
    }

    pub fn distance(&self, v: VertexId) -> Option<u64> {
        (self.est[v] != INF).then_some(self.est[v])
    }

    pub fn estimates(&self) -> &[u64] {
        &self.est
    }

    pub fn parent_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.parent[v]
    }

    /// In-edge examinations performed for `v` by the repair loop so far.
    pub fn scans(&self, v: VertexId) -> u64 {
        self.scans[v]
    }

    pub fn total_scans(&self) -> u64 {
        self.scans.iter().sum()
    }

    /// Smallest-id alive edge `(u, v)` in the orientation of the input graph.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (tail, head) = match self.direction {
            Direction::Out => (u, v),
            Direction::In => (v, u),
        };
        self.out
            .get(tail)?
            .iter()
            .copied()
            .find(|&a| self.arcs[a].alive && self.arcs[a].head == head)
    }

    fn require(&self, variant: Variant, op: &'static str) -> Result<(), EsError> {
        if self.variant == variant {
            Ok(())
        } else {
            Err(EsError::WrongVariant {
                op,
                variant: self.variant.name(),
            })
        }
    }

    fn lookup(&self, u: VertexId, v: VertexId) -> Result<EdgeId, EsError> {
        self.find_edge(u, v).ok_or(EsError::NoSuchEdge { tail: u, head: v })
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, EsError> {
        let a = self.lookup(u, v)?;
        self.delete_edge_id(a)?;
        Ok(a)
    }

    pub fn delete_edge_id(&mut self, a: EdgeId) -> Result<(), EsError> {
        self.require(Variant::Decremental, "deletion")?;
        if !self.arcs.get(a).is_some_and(|arc| arc.alive) {
            return Err(EsError::DeadEdge(a));
        }
        self.arcs[a].alive = false;
        self.lose_certificate(a);
        self.repair();
        Ok(())
    }

    pub fn increase_weight(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<EdgeId, EsError> {
        let a = self.lookup(u, v)?;
        self.increase_weight_id(a, w)?;
        Ok(a)
    }

    /// Raises the weight of edge `a` to `w`; a smaller `w` is rejected.
    pub fn increase_weight_id(&mut self, a: EdgeId, w: Weight) -> Result<(), EsError> {
        self.require(Variant::Decremental, "weight increase")?;
        if !self.arcs.get(a).is_some_and(|arc| arc.alive) {
            return Err(EsError::DeadEdge(a));
        }
        if w < self.arcs[a].weight {
            return Err(EsError::WrongVariant {
                op: "weight decrease",
                variant: self.variant.name(),
            });
        }
        if w == self.arcs[a].weight {
            return Ok(());
        }
        self.arcs[a].weight = w;
        self.lose_certificate(a);
        self.repair();
        Ok(())
    }

    /// Inserts `(u, v)` with weight `w` and returns its edge id (the next
    /// unused id).
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<EdgeId, EsError> {
        self.require(Variant::Incremental, "insertion")?;
        let a = self.push_arc(u, v, w, true);
        let arc = self.arcs[a];
        if self.est[arc.tail] != INF {
            let cand = self.est[arc.tail].saturating_add(arc.weight);
            if cand <= self.depth && cand < self.est[arc.head] {
                self.est[arc.head] = cand;
                self.parent[arc.head] = Some(a);
                self.queue.push(arc.head, cand as usize);
                self.relax_from_queue();
            }
        }
        Ok(a)
    }

    /// Edge ids of a shortest path. For [`Direction::Out`] the path runs from
    /// the root to `v`; for [`Direction::In`] it runs from `v` to the root.
    /// Either way it is listed in travel order.
    pub fn path(&self, v: VertexId) -> Result<Vec<EdgeId>, EsError> {
        if self.est[v] == INF {
            return Err(EsError::Unreachable(v));
        }
        let mut edges = Vec::new();
        let mut x = v;
        while let Some(a) = self.parent[x] {
            edges.push(a);
            x = self.arcs[a].tail;
        }
        debug_assert_eq!(x, self.root);
        if self.direction == Direction::Out {
            edges.reverse();
        }
        Ok(edges)
    }

    /// Weight of edge `a` as currently stored.
    pub fn weight(&self, a: EdgeId) -> Weight {
        self.arcs[a].weight
    }

    /// Detaches the head of `a` if `a` is its parent. The cursor of the head
    /// already sits past `a`, so the edge's current candidate (if it is still
    /// alive) is folded into the running minimum here instead of being
    /// rescanned.
    fn lose_certificate(&mut self, a: EdgeId) {
        let arc = self.arcs[a];
        let h = arc.head;
        if self.parent[h] != Some(a) {
            return;
        }
        self.parent[h] = None;
        if arc.alive && self.est[arc.tail] != INF {
            let cand = self.est[arc.tail].saturating_add(arc.weight);
            self.next_min[h] = self.next_min[h].min(cand);
        }
        self.queue.push(h, self.est[h] as usize);
    }

    /// Dijkstra-style settling from whatever is in the queue. Used at
    /// construction and after insertions, when estimates only go down.
    fn relax_from_queue(&mut self) {
        while let Some((v, k)) = self.queue.pop_min() {
            let k = k as u64;
            if self.est[v] != k {
                continue;
            }
            for i in 0..self.out[v].len() {
                let a = self.out[v][i];
                let arc = self.arcs[a];
                if !arc.alive {
                    continue;
                }
                let cand = k.saturating_add(arc.weight);
                if cand <= self.depth && cand < self.est[arc.head] {
                    self.est[arc.head] = cand;
                    self.parent[arc.head] = Some(a);
                    self.queue.push(arc.head, cand as usize);
                }
            }
        }
    }

    /// Re-attaches orphaned vertices in increasing order of estimate.
    fn repair(&mut self) {
        while let Some((v, k)) = self.queue.pop_min() {
            let k = k as u64;
            if v == self.root || self.est[v] != k || self.parent[v].is_some() {
                continue;
            }
            let mut found = None;
            while self.cursor[v] < self.inc[v].len() {
                let a = self.inc[v][self.cursor[v]];
                self.cursor[v] += 1;
                self.scans[v] += 1;
                let arc = self.arcs[a];
                if !arc.alive || self.est[arc.tail] == INF {
                    continue;
                }
                let cand = self.est[arc.tail].saturating_add(arc.weight);
                debug_assert!(cand >= k, "estimate above an in-neighbour bound");
                if cand == k {
                    found = Some(a);
                    break;
                }
                self.next_min[v] = self.next_min[v].min(cand);
            }
            if found.is_some() {
                self.parent[v] = found;
                continue;
            }
            let raised = self.next_min[v];
            self.cursor[v] = 0;
            self.next_min[v] = INF;
            if raised > self.depth {
                self.est[v] = INF;
            } else {
                self.est[v] = raised;
                self.queue.push(v, raised as usize);
            }
            for i in 0..self.out[v].len() {
                self.lose_certificate(self.out[v][i]);
            }
        }
    }
}
