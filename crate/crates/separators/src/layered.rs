use crate::{Direction, SGraph, Scope};
use graph_core::VertexId;
use std::collections::{HashMap, HashSet, VecDeque};

/// Outcome of a layered search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorResult {
    /// Marked vertices of the cut layer.
    pub s_sep: Vec<VertexId>,
    /// Vertices on the root's side of the cut, root included.
    pub v_sep: Vec<VertexId>,
    /// Edges relaxed by the search.
    pub explored_edges: u64,
    /// Index of the cut layer, or of the last layer when nothing was cut.
    pub layer: usize,
    /// The whole reachable set fit within the depth, so no cut was made.
    pub no_cut: bool,
    /// No layer within the depth met both size conditions, and the cut was
    /// taken at the best available layer instead.
    pub fallback: bool,
}

/// Resumable layered search around one root.
///
/// Each call to [`step`](Self::step) relaxes at most one edge, so two
/// searches can be interleaved edge by edge and the slower one dropped.
///
/// Layers are the classes of the marked distance: every edge leaving a
/// marked vertex costs one, every other edge costs zero. For the
/// [`Direction::In`] search the edges are walked backwards with the same
/// rule, which puts a marked vertex one layer below its true distance to
/// the root; the layer cap is lowered accordingly so every returned vertex
/// stays within `d` of the root.
#[derive(Debug, Clone)]
pub struct LayeredSearch<'a> {
    g: &'a SGraph,
    scope: &'a Scope,
    dir: Direction,
    root: VertexId,
    last: usize,
    factor: f64,
    dist: HashMap<VertexId, usize>,
    queue: VecDeque<VertexId>,
    settled: Vec<VertexId>,
    is_settled: HashSet<VertexId>,
    current: Option<(VertexId, usize)>,
    layer: usize,
    marked_per_layer: Vec<usize>,
    explored: u64,
    first_thin: Option<usize>,
    thinnest: Option<(usize, usize)>,
    finished: bool,
}

impl<'a> LayeredSearch<'a> {
    pub fn new(g: &'a SGraph, scope: &'a Scope, root: VertexId, d: u64, dir: Direction) -> Self {
        assert!(d >= 1, "depth must be positive");
        assert!(scope.contains(root), "root {root} outside the scope");
        let d = usize::try_from(d).unwrap_or(usize::MAX / 2);
        let last = match dir {
            Direction::Out => d,
            Direction::In => d - 1 + usize::from(g.in_s(root)),
        };
        let mut queue = VecDeque::new();
        queue.push_back(root);
        Self {
            g,
            scope,
            dir,
            root,
            last,
            factor: 2.0 * g.log_n() / d as f64,
            dist: HashMap::from([(root, 0)]),
            queue,
            settled: Vec::new(),
            is_settled: HashSet::new(),
            current: None,
            layer: 0,
            marked_per_layer: vec![0],
            explored: 0,
            first_thin: None,
            thinnest: None,
            finished: false,
        }
    }

    pub fn explored_edges(&self) -> u64 {
        self.explored
    }

    /// Advances by one edge relaxation or one queue pop. Returns the result
    /// once, on the step that completes the search.
    pub fn step(&mut self) -> Option<SeparatorResult> {
        if self.finished {
            return None;
        }
        if let Some((v, pos)) = self.current {
            let nbrs = match self.dir {
                Direction::Out => self.g.out(v),
                Direction::In => self.g.inc(v),
            };
            if let Some(&w) = nbrs.get(pos) {
                self.current = Some((v, pos + 1));
                self.explored += 1;
                if self.scope.contains(w) {
                    self.relax(v, w);
                }
                return None;
            }
            self.current = None;
        }
        let next = loop {
            match self.queue.pop_front() {
                Some(v) if self.is_settled.contains(&v) => continue,
                other => break other,
            }
        };
        let Some(v) = next else {
            return Some(self.finish(self.layer, true, false));
        };
        let k = self.dist[&v];
        if k > self.layer {
            if let Some(res) = self.close_layer() {
                return Some(res);
            }
            self.layer = k;
            self.marked_per_layer.push(0);
        }
        self.is_settled.insert(v);
        self.settled.push(v);
        self.marked_per_layer[k] += usize::from(self.g.in_s(v));
        self.current = Some((v, 0));
        None
    }

    /// Runs to completion.
    pub fn run(mut self) -> SeparatorResult {
        loop {
            if let Some(r) = self.step() {
                return r;
            }
        }
    }

    fn relax(&mut self, v: VertexId, w: VertexId) {
        let cost = usize::from(self.g.in_s(v));
        let nd = self.layer + cost;
        let better = self.dist.get(&w).is_none_or(|&old| nd < old);
        if better {
            self.dist.insert(w, nd);
            if cost == 0 {
                self.queue.push_front(w);
            } else {
                self.queue.push_back(w);
            }
        }
    }

    /// Layer `self.layer` has been fully settled and a deeper one exists.
    fn close_layer(&mut self) -> Option<SeparatorResult> {
        let j = self.layer;
        if j >= 1 {
            let below: usize = self.marked_per_layer[..j].iter().sum();
            let here = self.marked_per_layer[j];
            let beyond = self.scope.marked() - below - here;
            let thin = (here as f64) < below as f64 * self.factor;
            let far_heavy = here as f64 <= beyond as f64 * self.factor;
            if thin && far_heavy {
                return Some(self.finish(j, false, false));
            }
            if thin && self.first_thin.is_none() {
                self.first_thin = Some(j);
            }
            if self.thinnest.is_none_or(|(c, _)| here < c) {
                self.thinnest = Some((here, j));
            }
        }
        if j >= self.last {
            let pick = self
                .first_thin
                .or(self.thinnest.map(|(_, j)| j))
                .unwrap_or(j);
            return Some(self.finish(pick, false, true));
        }
        None
    }

    fn finish(&mut self, j: usize, no_cut: bool, fallback: bool) -> SeparatorResult {
        self.finished = true;
        let mut s_sep = Vec::new();
        let mut v_sep = Vec::new();
        for &v in &self.settled {
            let k = self.dist[&v];
            if no_cut || k < j || (k == j && !self.g.in_s(v)) {
                v_sep.push(v);
            } else if k == j {
                s_sep.push(v);
            }
        }
        s_sep.sort_unstable();
        v_sep.sort_unstable();
        let res = SeparatorResult {
            s_sep: if no_cut { Vec::new() } else { s_sep },
            v_sep,
            explored_edges: self.explored,
            layer: j,
            no_cut,
            fallback,
        };
        debug_assert!(res.v_sep.binary_search(&self.root).is_ok());
        res
    }
}

/// Cuts the out-layers around `r` inside `scope`; see [`LayeredSearch`].
pub fn out_sep(g: &SGraph, scope: &Scope, r: VertexId, d: u64) -> SeparatorResult {
    LayeredSearch::new(g, scope, r, d, Direction::Out).run()
}

/// Cuts the in-layers around `r` inside `scope`; see [`LayeredSearch`].
pub fn in_sep(g: &SGraph, scope: &Scope, r: VertexId, d: u64) -> SeparatorResult {
    LayeredSearch::new(g, scope, r, d, Direction::In).run()
}
