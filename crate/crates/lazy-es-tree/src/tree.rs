use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use graph_core::{lg, Update, VertexId, Weight, INF};

use crate::fenwick::Fenwick;
use crate::LazyError;

/// Construction parameters for one threshold instance.
#[derive(Clone, Debug, PartialEq)]
pub struct LazyOptions {
    pub tau: u64,
    pub eps: f64,
    /// Largest finite estimate. `None` means `⌊2τ(1+ε)⌋`.
    pub depth: Option<u64>,
    /// Weight-aware rules: heaviness `i` only counts edges lighter than
    /// `2^i`, and every out-edge is also rescanned every `max(1, ⌊εw⌋)`
    /// estimate values.
    pub weighted: bool,
    pub max_weight: Weight,
    /// Multiplier on both heaviness thresholds. Values below 1 make heaviness
    /// reachable on small graphs at the price of the accuracy band.
    pub scale: f64,
}

impl LazyOptions {
    pub fn new(tau: u64, eps: f64) -> Self {
        LazyOptions { tau, eps, depth: None, weighted: false, max_weight: 1, scale: 1.0 }
    }

    pub fn weighted(mut self, max_weight: Weight) -> Self {
        self.weighted = true;
        self.max_weight = max_weight;
        self
    }

    pub fn depth(mut self, depth: u64) -> Self {
        self.depth = Some(depth);
        self
    }

    pub fn scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LazyStats {
    pub insertions: u64,
    pub decrements: u64,
    pub queue_pushes: u64,
    pub heaviness_raises: u64,
    pub heaviness_drops: u64,
    pub periodic_scans: u64,
    /// Raises of `h(u)` at an unchanged estimate after an earlier drop.
    pub toggle_checks: u64,
    /// Those raises that happened with fewer new out-edges of `u` than the
    /// gap between the two thresholds.
    pub toggle_violations: u64,
    /// Moves of a vertex to a higher slot of some cache. Stays 0.
    pub position_increases: u64,
}

/// Incremental threshold tree: estimates up to `depth`, with each vertex
/// rescanning its forward neighbourhood only every `2^h(u)` decrements.
#[derive(Clone, Debug)]
pub struct LazyEsTree {
    n: usize,
    root: VertexId,
    tau: u64,
    eps: f64,
    cap: u64,
    weighted: bool,
    max_weight: Weight,
    k_light: f64,
    k_heavy: f64,
    hmax: usize,
    classes: usize,
    est: Vec<u64>,
    h: Vec<usize>,
    cert: Vec<Option<VertexId>>,
    wt: Vec<HashMap<VertexId, Weight>>,
    in_nbrs: Vec<Vec<VertexId>>,
    cache: Vec<BTreeSet<(u64, VertexId)>>,
    pos: Vec<HashMap<VertexId, u64>>,
    fen: Vec<Vec<Fenwick>>,
    expire: Vec<BTreeMap<u64, BTreeSet<VertexId>>>,
    reg: HashMap<(VertexId, VertexId), u64>,
    groups: Vec<BTreeMap<u64, Vec<VertexId>>>,
    queue: VecDeque<(VertexId, VertexId)>,
    queued: HashSet<(VertexId, VertexId)>,
    scans: Vec<Vec<u64>>,
    fresh: Vec<u64>,
    drop_mark: Vec<Option<(u64, u64, usize)>>,
    stats: LazyStats,
}

impl LazyEsTree {
    /// Unweighted instance with the default thresholds, starting from the
    /// empty graph.
    pub fn new(n: usize, root: VertexId, tau: u64, eps: f64) -> Result<Self, LazyError> {
        Self::with_options(n, root, LazyOptions::new(tau, eps))
    }

    pub fn with_options(n: usize, root: VertexId, opts: LazyOptions) -> Result<Self, LazyError> {
        if root >= n {
            return Err(LazyError::VertexOutOfRange(root));
        }
        if opts.tau == 0 {
            return Err(LazyError::BadParameter("tau must be positive".into()));
        }
        if !(opts.eps > 0.0 && opts.eps.is_finite()) {
            return Err(LazyError::BadParameter(format!("eps = {}", opts.eps)));
        }
        if !(opts.scale > 0.0 && opts.scale.is_finite()) {
            return Err(LazyError::BadParameter(format!("scale = {}", opts.scale)));
        }
        if opts.max_weight == 0 {
            return Err(LazyError::BadParameter("max_weight must be positive".into()));
        }
        let cap = opts
            .depth
            .unwrap_or_else(|| (2.0 * opts.tau as f64 * (1.0 + opts.eps)).floor() as u64);
        let k_light = opts.scale * 6.0 * n as f64 * lg(n) / (opts.eps * opts.tau as f64);
        let classes = if opts.weighted { 64 - opts.max_weight.leading_zeros() as usize } else { 1 };
        let hmax = lg(n).ceil() as usize;
        let mut est = vec![cap + 1; n];
        est[root] = 0;
        Ok(LazyEsTree {
            n,
            root,
            tau: opts.tau,
            eps: opts.eps,
            cap,
            weighted: opts.weighted,
            max_weight: opts.max_weight,
            k_light,
            k_heavy: 2.0 * k_light,
            hmax,
            classes,
            est,
            h: vec![0; n],
            cert: vec![None; n],
            wt: vec![HashMap::new(); n],
            in_nbrs: vec![Vec::new(); n],
            cache: vec![BTreeSet::new(); n],
            pos: vec![HashMap::new(); n],
            fen: vec![Vec::new(); n],
            expire: vec![BTreeMap::new(); n],
            reg: HashMap::new(),
            groups: vec![BTreeMap::new(); n],
            queue: VecDeque::new(),
            queued: HashSet::new(),
            scans: vec![vec![0; hmax + 1]; n],
            fresh: vec![0; n],
            drop_mark: vec![None; n],
            stats: LazyStats::default(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Largest finite estimate; `depth() + 1` stands for unreachable.
    pub fn depth(&self) -> u64 {
        self.cap
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn max_heaviness(&self) -> usize {
        self.hmax
    }

    /// Thresholds used for setting/lowering and for raising heaviness, per
    /// unit of `2^i - 1`.
    pub fn thresholds(&self) -> (f64, f64) {
        (self.k_light, self.k_heavy)
    }

    /// Raw estimate in `0..=depth()+1`.
    pub fn raw_estimate(&self, v: VertexId) -> u64 {
        self.est[v]
    }

    /// Estimate, or [`INF`] past the depth.
    pub fn estimate(&self, v: VertexId) -> u64 {
        if self.est[v] > self.cap {
            INF
        } else {
            self.est[v]
        }
    }

    pub fn estimates(&self) -> Vec<u64> {
        (0..self.n).map(|v| self.estimate(v)).collect()
    }

    pub fn heaviness(&self, v: VertexId) -> usize {
        self.h[v]
    }

    /// Tail of the edge whose relaxation last lowered `v`.
    pub fn certificate(&self, v: VertexId) -> Option<VertexId> {
        self.cert[v]
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<Weight> {
        self.wt.get(u)?.get(&v).copied()
    }

    /// Per-`i` scan counters of `Cache_u`.
    pub fn scan_counts(&self, u: VertexId) -> &[u64] {
        &self.scans[u]
    }

    pub fn stats(&self) -> &LazyStats {
        &self.stats
    }

    /// Members of `u`'s forward neighbourhood, in cache order.
    pub fn forward_neighbourhood(&self, u: VertexId) -> Vec<VertexId> {
        self.fn_members(u)
    }

    pub fn apply(&mut self, up: &Update) -> Result<(), LazyError> {
        match *up {
            Update::Insert { u, v, w } => self.insert_edge(u, v, w),
            _ => Err(LazyError::ModeViolation("only insertions are supported".into())),
        }
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<(), LazyError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(LazyError::VertexOutOfRange(x));
            }
        }
        if w == 0 || w > self.max_weight || (!self.weighted && w != 1) {
            return Err(LazyError::WeightOutOfRange(w));
        }
        self.stats.insertions += 1;
        if u == v {
            return Ok(());
        }
        match self.wt[u].get(&v) {
            Some(&old) if old <= w => return Ok(()),
            Some(_) => self.remove_entry(u, v),
            None => self.in_nbrs[v].push(u),
        }
        self.wt[u].insert(v, w);
        let s = self.slot(u, v);
        self.cache[u].insert((s, v));
        self.pos[u].insert(v, s);
        self.fen_add(u, w, s, 1);
        if self.weighted {
            let st = self.step(w);
            self.groups[u].entry(st).or_default().push(v);
        }
        self.fresh[u] += 1;
        if self.in_fn(u, v) {
            self.register(u, v);
        }
        self.increase_heaviness(u);
        if self.est[v] > self.est[u].saturating_add(w) {
            self.push(u, v);
            self.drain();
        }
        Ok(())
    }

    /// Path from the root to `v` along certificate edges, as `(tail, head)`
    /// pairs. `None` if `v` is past the depth.
    pub fn path(&self, v: VertexId) -> Result<Option<Vec<(VertexId, VertexId)>>, LazyError> {
        if v >= self.n {
            return Err(LazyError::VertexOutOfRange(v));
        }
        if self.est[v] > self.cap {
            return Ok(None);
        }
        let mut out = Vec::new();
        let mut x = v;
        while x != self.root {
            let tail = match self.cert[x] {
                Some(u) if self.est[u] + self.wt[u][&x] <= self.est[x] => u,
                _ => self.repair_certificate(x).ok_or_else(|| {
                    LazyError::Internal(format!("no certifying in-edge for vertex {x}"))
                })?,
            };
            out.push((tail, x));
            x = tail;
        }
        out.reverse();
        Ok(Some(out))
    }

    fn repair_certificate(&self, x: VertexId) -> Option<VertexId> {
        self.in_nbrs[x]
            .iter()
            .copied()
            .filter(|&u| self.est[u] + self.wt[u][&x] <= self.est[x])
            .min_by_key(|&u| (self.est[u] + self.wt[u][&x], u))
    }

    fn step(&self, w: Weight) -> u64 {
        ((self.eps * w as f64).floor() as u64).max(1)
    }

    fn class(&self, w: Weight) -> usize {
        if self.weighted {
            63 - w.leading_zeros() as usize
        } else {
            0
        }
    }

    fn counted(&self, w: Weight, i: usize) -> bool {
        !self.weighted || (i < 64 && w < (1u64 << i))
    }

    fn ci(&self, u: VertexId, i: usize) -> i64 {
        let m = 1i64 << i;
        (self.est[u] as i64 - 1).div_euclid(m) * m
    }

    fn slot(&self, u: VertexId, v: VertexId) -> u64 {
        self.est[v].saturating_sub(self.wt[u][&v] - 1)
    }

    fn fen_add(&mut self, u: VertexId, w: Weight, s: u64, delta: i32) {
        let c = self.class(w);
        let len = self.cap as usize + 2;
        let row = &mut self.fen[u];
        if row.len() <= c {
            row.resize_with(c + 1, || Fenwick::new(len));
        }
        row[c].add(s as usize, delta);
    }

    fn count(&self, u: VertexId, i: usize) -> u64 {
        let from = self.ci(u, i).max(0) as usize;
        self.fen[u]
            .iter()
            .enumerate()
            .filter(|&(c, _)| !self.weighted || c < i)
            .map(|(_, f)| f.from(from))
            .sum()
    }

    /// Largest `i < below` whose range count reaches `(2^i - 1)·k`.
    fn level_for(&self, u: VertexId, k: f64, below: usize) -> usize {
        (1..below)
            .rev()
            .find(|&i| self.count(u, i) as f64 >= ((1u64 << i) - 1) as f64 * k)
            .unwrap_or(0)
    }

    fn range_members(&self, u: VertexId, i: usize) -> Vec<VertexId> {
        let from = self.ci(u, i).max(0) as u64;
        self.cache[u].range((from, 0)..).map(|&(_, v)| v).collect()
    }

    fn fn_members(&self, u: VertexId) -> Vec<VertexId> {
        let hu = self.h[u];
        let from = self.ci(u, hu).max(0) as u64;
        self.cache[u]
            .range((from, 0)..)
            .map(|&(_, v)| v)
            .filter(|v| self.counted(self.wt[u][v], hu))
            .collect()
    }

    fn in_fn(&self, u: VertexId, v: VertexId) -> bool {
        self.pos[u][&v] as i64 >= self.ci(u, self.h[u]) && self.counted(self.wt[u][&v], self.h[u])
    }

    fn expire_key(&self, u: VertexId, v: VertexId) -> i64 {
        self.ci(u, self.h[u]) + self.wt[u][&v] as i64 - 1
    }

    fn register(&mut self, u: VertexId, v: VertexId) {
        self.unregister(u, v);
        let key = self.expire_key(u, v);
        if key >= 1 {
            self.expire[v].entry(key as u64).or_default().insert(u);
            self.reg.insert((v, u), key as u64);
        }
    }

    fn unregister(&mut self, u: VertexId, v: VertexId) {
        if let Some(k) = self.reg.remove(&(v, u)) {
            if let Some(set) = self.expire[v].get_mut(&k) {
                set.remove(&u);
                if set.is_empty() {
                    self.expire[v].remove(&k);
                }
            }
        }
    }

    fn place(&mut self, u: VertexId, v: VertexId, to: u64) {
        let from = self.pos[u][&v];
        if from == to {
            return;
        }
        if to > from {
            self.stats.position_increases += 1;
        }
        debug_assert!(to < from, "cache position of {v} in {u} would rise");
        let w = self.wt[u][&v];
        self.cache[u].remove(&(from, v));
        self.cache[u].insert((to, v));
        self.pos[u].insert(v, to);
        self.fen_add(u, w, from, -1);
        self.fen_add(u, w, to, 1);
    }

    fn refresh(&mut self, u: VertexId, v: VertexId) {
        let s = self.slot(u, v);
        self.place(u, v, s);
    }

    fn remove_entry(&mut self, u: VertexId, v: VertexId) {
        self.unregister(u, v);
        let w = self.wt[u][&v];
        let s = self.pos[u].remove(&v).expect("cached edge");
        self.cache[u].remove(&(s, v));
        self.fen_add(u, w, s, -1);
        if self.weighted {
            let st = self.step(w);
            if let Some(list) = self.groups[u].get_mut(&st) {
                list.retain(|&x| x != v);
                if list.is_empty() {
                    self.groups[u].remove(&st);
                }
            }
        }
        self.wt[u].remove(&v);
    }

    fn push(&mut self, x: VertexId, y: VertexId) {
        if self.queued.insert((x, y)) {
            self.queue.push_back((x, y));
            self.stats.queue_pushes += 1;
        }
    }

    fn drain(&mut self) {
        while let Some((x, y)) = self.queue.pop_front() {
            self.queued.remove(&(x, y));
            let w = self.wt[x][&y];
            if self.est[y] > self.est[x].saturating_add(w) {
                self.decrement(x, y);
                self.push(x, y);
            }
        }
    }

    fn decrement(&mut self, u: VertexId, v: VertexId) {
        self.est[v] -= 1;
        self.cert[v] = Some(u);
        self.drop_mark[v] = None;
        self.stats.decrements += 1;
        let d = self.est[v];
        if d % (1u64 << self.h[v]) == 0 {
            self.increase_heaviness(v);
            self.scans[v][self.h[v]] += 1;
            for x in self.fn_members(v) {
                self.refresh(v, x);
                if self.in_fn(v, x) {
                    self.register(v, x);
                } else {
                    self.unregister(v, x);
                }
                self.push(v, x);
            }
            // Refreshing stale positions can push members below the new
            // cache index, which shrinks FN(v) without any expiry event.
            self.decrease_heaviness(v);
        }
        if self.weighted {
            let due: Vec<VertexId> = self.groups[v]
                .iter()
                .filter(|(&s, _)| d % s == 0)
                .flat_map(|(_, heads)| heads.iter().copied())
                .collect();
            if !due.is_empty() {
                self.stats.periodic_scans += 1;
            }
            for x in due {
                self.push(v, x);
            }
        }
        if let Some(owners) = self.expire[v].remove(&(d + 1)) {
            for o in owners {
                self.reg.remove(&(v, o));
                self.refresh(o, v);
                self.decrease_heaviness(o);
            }
        }
    }

    fn increase_heaviness(&mut self, u: VertexId) {
        let ip = self.level_for(u, self.k_heavy, self.hmax + 1);
        if ip <= self.h[u] {
            return;
        }
        self.scans[u][ip] += 1;
        self.stats.heaviness_raises += 1;
        let old = self.h[u];
        for v in self.range_members(u, ip) {
            self.refresh(u, v);
            self.unregister(u, v);
        }
        self.h[u] = self.level_for(u, self.k_light, ip + 1);
        for v in self.fn_members(u) {
            self.register(u, v);
        }
        if self.h[u] > old {
            if let Some((e, f, top)) = self.drop_mark[u] {
                if e == self.est[u] && ip <= top {
                    self.stats.toggle_checks += 1;
                    let need = ((1u64 << ip) - 1) as f64 * self.k_light;
                    if ((self.fresh[u] - f) as f64) < need * (1.0 - 1e-12) {
                        self.stats.toggle_violations += 1;
                    }
                }
            }
        }
    }

    fn decrease_heaviness(&mut self, u: VertexId) {
        let old = self.h[u];
        if self.count(u, old) as f64 >= ((1u64 << old) - 1) as f64 * self.k_light {
            return;
        }
        self.scans[u][old] += 1;
        self.stats.heaviness_drops += 1;
        for v in self.fn_members(u) {
            self.refresh(u, v);
            self.unregister(u, v);
        }
        self.h[u] = self.level_for(u, self.k_light, old);
        for v in self.fn_members(u) {
            self.register(u, v);
            self.push(u, v);
        }
        self.drop_mark[u] = Some((self.est[u], self.fresh[u], old));
    }

    /// Full recomputation of every maintained relation. Returns the first
    /// broken one.
    pub fn audit(&self) -> Result<(), String> {
        if !self.queue.is_empty() {
            return Err("pending queue not drained".into());
        }
        if self.est[self.root] != 0 {
            return Err("root estimate is not 0".into());
        }
        let slack = if self.weighted { 2u64 } else { 1 };
        let mut regs = 0usize;
        for u in 0..self.n {
            if self.h[u] > self.hmax {
                return Err(format!("h({u}) = {} above {}", self.h[u], self.hmax));
            }
            if self.est[u] > self.cap + 1 {
                return Err(format!("estimate of {u} out of range"));
            }
            if self.cache[u].len() != self.wt[u].len() || self.pos[u].len() != self.wt[u].len() {
                return Err(format!("cache of {u} out of sync with its edges"));
            }
            let mut per_class = vec![0u64; self.classes];
            for (&v, &w) in &self.wt[u] {
                let p = self.pos[u][&v];
                if !self.cache[u].contains(&(p, v)) {
                    return Err(format!("cache of {u} lost {v}"));
                }
                if p < self.slot(u, v) {
                    return Err(format!("{v} sits below its estimate in cache of {u}"));
                }
                per_class[self.class(w)] += 1;
                let member = self.in_fn(u, v);
                let key = self.expire_key(u, v);
                match (member && key >= 1, self.reg.get(&(v, u))) {
                    (true, Some(&k)) if k as i64 == key => regs += 1,
                    (false, None) => {}
                    (m, r) => {
                        return Err(format!(
                            "expire entry of {u} at {v}: member {m}, stored {r:?}, wanted {key}"
                        ))
                    }
                }
                if member {
                    let gap = self.est[u].abs_diff(self.est[v]);
                    if gap > slack << self.h[u] {
                        return Err(format!(
                            "forward gap {gap} between {u} and {v} exceeds 2^{}",
                            self.h[u]
                        ));
                    }
                }
                if !self.weighted && self.h[u] == 0 && self.est[v] > self.est[u] + w {
                    return Err(format!("light vertex {u} left edge to {v} unrelaxed"));
                }
            }
            for (c, &k) in per_class.iter().enumerate() {
                let got = self.fen[u].get(c).map_or(0, |f| f.from(0));
                if got != k {
                    return Err(format!("class {c} count of {u} is {got}, expected {k}"));
                }
            }
            for i in self.h[u] + 1..=self.hmax {
                let c = self.count(u, i) as f64;
                if c > ((1u64 << i) - 1) as f64 * self.k_heavy {
                    return Err(format!("range count {c} at level {i} of {u} above the raise threshold"));
                }
            }
            let hu = self.h[u];
            let c = self.count(u, hu) as f64;
            if c < ((1u64 << hu) - 1) as f64 * self.k_light {
                return Err(format!("forward count {c} of {u} below the level-{hu} threshold"));
            }
            if u != self.root && self.est[u] <= self.cap {
                match self.cert[u] {
                    Some(t) if self.wt[t].get(&u).is_some_and(|&w| self.est[t] + w <= self.est[u]) => {}
                    other => return Err(format!("certificate {other:?} of {u} does not hold")),
                }
            }
        }
        if regs != self.reg.len() {
            return Err(format!("{} stray expire entries", self.reg.len() - regs));
        }
        if self.stats.position_increases != 0 {
            return Err("a cache position increased".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_edge_sets_distance_one() {
        let mut t = LazyEsTree::new(4, 0, 2, 0.5).unwrap();
        t.insert_edge(0, 1, 1).unwrap();
        assert_eq!(t.estimate(1), 1);
        assert_eq!(t.estimate(2), INF);
        t.audit().unwrap();
    }

    #[test]
    fn non_improving_edge_leaves_estimates() {
        let mut t = LazyEsTree::new(4, 0, 2, 0.5).unwrap();
        t.insert_edge(0, 1, 1).unwrap();
        t.insert_edge(0, 2, 1).unwrap();
        let before = t.stats().decrements;
        t.insert_edge(1, 2, 1).unwrap();
        assert_eq!(t.stats().decrements, before);
        assert_eq!(t.estimate(2), 1);
    }

    #[test]
    fn chain_beyond_depth_reads_infinite() {
        let mut t = LazyEsTree::new(10, 0, 1, 0.5).unwrap();
        assert_eq!(t.depth(), 3);
        for v in 0..9 {
            t.insert_edge(v, v + 1, 1).unwrap();
        }
        assert_eq!(t.estimate(3), 3);
        assert_eq!(t.estimate(4), INF);
        t.audit().unwrap();
    }

    #[test]
    fn shortcut_propagates_along_a_chain() {
        let mut t = LazyEsTree::new(8, 0, 4, 0.5).unwrap();
        for v in 1..7 {
            t.insert_edge(v, v + 1, 1).unwrap();
        }
        t.insert_edge(0, 1, 1).unwrap();
        assert_eq!(t.estimate(7), 7);
        t.insert_edge(0, 5, 1).unwrap();
        assert_eq!(t.estimate(7), 3);
        assert_eq!(t.path(7).unwrap().unwrap(), vec![(0, 5), (5, 6), (6, 7)]);
        t.audit().unwrap();
    }

    #[test]
    fn empty_cache_is_light_and_deletions_are_refused() {
        let mut t = LazyEsTree::new(3, 0, 1, 0.5).unwrap();
        assert_eq!(t.heaviness(1), 0);
        assert!(matches!(t.apply(&Update::Delete { u: 0, v: 1 }), Err(LazyError::ModeViolation(_))));
        assert!(matches!(t.insert_edge(0, 1, 2), Err(LazyError::WeightOutOfRange(2))));
    }
}
