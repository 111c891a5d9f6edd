/// Prefix-count tree over slot indices `0..len`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Fenwick {
    tree: Vec<u32>,
    total: u64,
}

impl Fenwick {
    pub(crate) fn new(len: usize) -> Self {
        Fenwick { tree: vec![0; len + 1], total: 0 }
    }

    pub(crate) fn add(&mut self, idx: usize, delta: i32) {
        let mut i = idx + 1;
        while i < self.tree.len() {
            self.tree[i] = (self.tree[i] as i64 + delta as i64) as u32;
            i += i & i.wrapping_neg();
        }
        self.total = (self.total as i64 + delta as i64) as u64;
    }

    /// Number of entries with index below `idx`.
    fn below(&self, idx: usize) -> u64 {
        let mut i = idx.min(self.tree.len() - 1);
        let mut s = 0u64;
        while i > 0 {
            s += self.tree[i] as u64;
            i -= i & i.wrapping_neg();
        }
        s
    }

    /// Number of entries with index at least `from`.
    pub(crate) fn from(&self, from: usize) -> u64 {
        self.total - self.below(from)
    }
}
