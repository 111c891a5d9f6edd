use std::collections::{BTreeSet, HashMap, VecDeque};

use graph_core::{Update, VertexId, Weight, INF};

use crate::LazyError;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WarmupStats {
    pub scans: u64,
    pub position_rounds: u64,
    pub became_heavy: u64,
    pub became_light: u64,
}

/// Two-state variant over the whole depth `n`: light vertices rescan their
/// forward neighbourhood on every improvement, heavy ones only after their
/// estimate fell by `s = ⌊n^{1/3}⌋` since the last scan. A vertex becomes
/// heavy at `γ = 6n^{2/3}/ε` forward neighbours and light again at `γ/2`.
/// Distances up to `⌊n^{2/3}⌋` come from an exact breadth-first companion.
#[derive(Clone, Debug)]
pub struct WarmupTree {
    n: usize,
    root: VertexId,
    eps: f64,
    s: u64,
    gamma: f64,
    short_depth: u64,
    est: Vec<u64>,
    heavy: Vec<bool>,
    last_scan: Vec<u64>,
    last_push: Vec<u64>,
    out: Vec<Vec<VertexId>>,
    in_nbrs: Vec<Vec<VertexId>>,
    cache: Vec<BTreeSet<(u64, VertexId)>>,
    pos: Vec<HashMap<VertexId, u64>>,
    short: Vec<u64>,
    pending: VecDeque<VertexId>,
    stats: WarmupStats,
}

impl WarmupTree {
    pub fn new(n: usize, root: VertexId, eps: f64) -> Result<Self, LazyError> {
        Self::with_scale(n, root, eps, 1.0)
    }

    /// `scale` multiplies `γ`.
    pub fn with_scale(n: usize, root: VertexId, eps: f64, scale: f64) -> Result<Self, LazyError> {
        if root >= n {
            return Err(LazyError::VertexOutOfRange(root));
        }
        if !(eps > 0.0 && eps.is_finite() && scale > 0.0 && scale.is_finite()) {
            return Err(LazyError::BadParameter(format!("eps = {eps}, scale = {scale}")));
        }
        let nf = n as f64;
        let s = ((nf.cbrt() + 1e-9).floor() as u64).max(1);
        let inf = n as u64;
        let mut est = vec![inf; n];
        est[root] = 0;
        let mut short = vec![INF; n];
        short[root] = 0;
        Ok(WarmupTree {
            n,
            root,
            eps,
            s,
            gamma: scale * 6.0 * nf.powf(2.0 / 3.0) / eps,
            short_depth: (nf.powf(2.0 / 3.0) + 1e-9).floor() as u64,
            est: est.clone(),
            heavy: vec![false; n],
            last_scan: est.clone(),
            last_push: est,
            out: vec![Vec::new(); n],
            in_nbrs: vec![Vec::new(); n],
            cache: vec![BTreeSet::new(); n],
            pos: vec![HashMap::new(); n],
            short,
            pending: VecDeque::new(),
            stats: WarmupStats::default(),
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Scan period `s` and heavy threshold `γ`.
    pub fn laziness(&self) -> (u64, f64) {
        (self.s, self.gamma)
    }

    pub fn short_depth(&self) -> u64 {
        self.short_depth
    }

    pub fn stats(&self) -> &WarmupStats {
        &self.stats
    }

    pub fn is_heavy(&self, v: VertexId) -> bool {
        self.heavy[v]
    }

    /// Estimate of the lazy part alone, [`INF`] if unreached.
    pub fn lazy_estimate(&self, v: VertexId) -> u64 {
        if self.est[v] >= self.n as u64 {
            INF
        } else {
            self.est[v]
        }
    }

    /// Exact distance when it is at most [`WarmupTree::short_depth`], else
    /// the lazy estimate.
    pub fn distance(&self, v: VertexId) -> u64 {
        if self.short[v] != INF {
            self.short[v]
        } else {
            self.lazy_estimate(v)
        }
    }

    pub fn distances(&self) -> Vec<u64> {
        (0..self.n).map(|v| self.distance(v)).collect()
    }

    pub fn apply(&mut self, up: &Update) -> Result<(), LazyError> {
        match *up {
            Update::Insert { u, v, w } => self.insert_weighted(u, v, w),
            _ => Err(LazyError::ModeViolation("only insertions are supported".into())),
        }
    }

    fn insert_weighted(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<(), LazyError> {
        if w != 1 {
            return Err(LazyError::WeightOutOfRange(w));
        }
        self.insert_edge(u, v)
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), LazyError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(LazyError::VertexOutOfRange(x));
            }
        }
        if u == v || self.pos[u].contains_key(&v) {
            return Ok(());
        }
        self.out[u].push(v);
        self.in_nbrs[v].push(u);
        self.cache[u].insert((self.est[v], v));
        self.pos[u].insert(v, self.est[v]);
        self.check_heavy(u);
        if self.est[v] > self.est[u] + 1 {
            self.lower(v, self.est[u] + 1);
            self.process();
        }
        self.short_insert(u, v);
        Ok(())
    }

    fn short_insert(&mut self, u: VertexId, v: VertexId) {
        if self.short[u] == INF || self.short[u] + 1 >= self.short[v] || self.short[u] + 1 > self.short_depth {
            return;
        }
        self.short[v] = self.short[u] + 1;
        let mut q = VecDeque::from([v]);
        while let Some(x) = q.pop_front() {
            let d = self.short[x] + 1;
            if d > self.short_depth {
                continue;
            }
            for &y in &self.out[x] {
                if d < self.short[y] {
                    self.short[y] = d;
                    q.push_back(y);
                }
            }
        }
    }

    fn fn_size(&self, u: VertexId) -> usize {
        self.cache[u].range((self.est[u] + 2, 0)..).count()
    }

    fn check_heavy(&mut self, u: VertexId) {
        if !self.heavy[u] && self.fn_size(u) as f64 >= self.gamma {
            self.heavy[u] = true;
            self.stats.became_heavy += 1;
        }
    }

    fn lower(&mut self, v: VertexId, to: u64) {
        self.est[v] = to;
        self.pending.push_back(v);
    }

    fn move_to(&mut self, u: VertexId, v: VertexId) {
        let old = self.pos[u][&v];
        let new = self.est[v];
        if new < old {
            self.cache[u].remove(&(old, v));
            self.cache[u].insert((new, v));
            self.pos[u].insert(v, new);
        }
    }

    fn scan(&mut self, u: VertexId) {
        loop {
            self.stats.scans += 1;
            self.last_scan[u] = self.est[u];
            let members: Vec<VertexId> =
                self.cache[u].range((self.est[u] + 2, 0)..).map(|&(_, v)| v).collect();
            for x in members {
                self.move_to(u, x);
                if self.est[x] > self.est[u] + 1 {
                    self.lower(x, self.est[u] + 1);
                }
            }
            // Refreshing positions can shrink the neighbourhood below γ/2.
            if !(self.heavy[u] && self.fn_size(u) as f64 <= self.gamma / 2.0) {
                break;
            }
            self.heavy[u] = false;
            self.stats.became_light += 1;
        }
    }

    fn process(&mut self) {
        while let Some(v) = self.pending.pop_front() {
            if self.last_push[v] >= self.est[v] + self.s {
                self.stats.position_rounds += 1;
                self.last_push[v] = self.est[v];
                for u in self.in_nbrs[v].clone() {
                    self.move_to(u, v);
                    if self.heavy[u] && self.fn_size(u) as f64 <= self.gamma / 2.0 {
                        self.heavy[u] = false;
                        self.stats.became_light += 1;
                        self.scan(u);
                    }
                }
            }
            self.check_heavy(v);
            if !self.heavy[v] || self.last_scan[v] >= self.est[v] + self.s {
                self.scan(v);
            }
        }
    }

    /// Checks the forward-gap bound `s`, exactness of light vertices, and that
    /// cached positions never sit below true estimates.
    pub fn audit(&self) -> Result<(), String> {
        if self.est[self.root] != 0 {
            return Err("root estimate is not 0".into());
        }
        for u in 0..self.n {
            for &v in &self.out[u] {
                let p = self.pos[u][&v];
                if p < self.est[v] || !self.cache[u].contains(&(p, v)) {
                    return Err(format!("position of {v} in cache of {u} is wrong"));
                }
                if p >= self.est[u] + 2 && self.est[u] < self.n as u64 {
                    let gap = self.est[u].abs_diff(self.est[v]);
                    if gap > self.s {
                        return Err(format!("forward gap {gap} between {u} and {v} above {}", self.s));
                    }
                }
                if !self.heavy[u] && self.est[v] > self.est[u] + 1 {
                    return Err(format!("light vertex {u} left edge to {v} unrelaxed"));
                }
                if self.short[u] != INF && self.short[u] < self.short_depth && self.short[v] > self.short[u] + 1 {
                    return Err(format!("companion edge ({u},{v}) unrelaxed"));
                }
            }
            if self.heavy[u] && self.fn_size(u) as f64 <= self.gamma / 2.0 {
                return Err(format!("heavy vertex {u} is below the light threshold"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_follow_n() {
        let t = WarmupTree::new(64, 0, 0.5).unwrap();
        let (s, gamma) = t.laziness();
        assert_eq!(s, 4);
        assert!((gamma - 192.0).abs() < 1e-9);
        assert_eq!(t.short_depth(), 16);
    }

    #[test]
    fn short_distances_come_from_the_companion() {
        let mut t = WarmupTree::with_scale(27, 0, 0.5, 0.01).unwrap();
        for v in 0..26 {
            t.insert_edge(v, v + 1).unwrap();
        }
        assert_eq!(t.distance(9), 9);
        assert_eq!(t.distance(26), t.lazy_estimate(26));
        t.audit().unwrap();
    }
}
