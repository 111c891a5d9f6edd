/// Bucket queue over small integer keys.
///
/// Items are plain indices. The same item may sit in several buckets at once;
/// callers that care compare the popped key against their current value and
/// skip stale entries. Extraction is cheapest when keys are pushed in
/// non-decreasing order relative to the last pop, which is how every
/// shortest-path repair loop in this workspace uses it.
#[derive(Debug, Clone, Default)]
pub struct BucketQueue {
    buckets: Vec<Vec<usize>>,
    cursor: usize,
    len: usize,
}

impl BucketQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_max_key(max_key: usize) -> Self {
        Self {
            buckets: vec![Vec::new(); max_key + 1],
            cursor: 0,
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, item: usize, key: usize) {
        if key >= self.buckets.len() {
            self.buckets.resize_with(key + 1, Vec::new);
        }
        self.buckets[key].push(item);
        self.cursor = self.cursor.min(key);
        self.len += 1;
    }

    pub fn pop_min(&mut self) -> Option<(usize, usize)> {
        if self.len == 0 {
            return None;
        }
        while self.buckets[self.cursor].is_empty() {
            self.cursor += 1;
        }
        let item = self.buckets[self.cursor].pop().expect("non-empty bucket");
        self.len -= 1;
        Some((item, self.cursor))
    }

    pub fn clear(&mut self) {
        for b in &mut self.buckets {
            b.clear();
        }
        self.cursor = 0;
        self.len = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pops_in_key_order() {
        let mut q = BucketQueue::with_max_key(4);
        q.push(7, 3);
        q.push(8, 1);
        q.push(9, 10);
        q.push(6, 1);
        let mut keys = Vec::new();
        while let Some((_, k)) = q.pop_min() {
            keys.push(k);
        }
        assert_eq!(keys, vec![1, 1, 3, 10]);
        assert!(q.is_empty());
    }

    #[test]
    fn push_below_cursor_rewinds() {
        let mut q = BucketQueue::new();
        q.push(1, 5);
        assert_eq!(q.pop_min(), Some((1, 5)));
        q.push(2, 2);
        assert_eq!(q.pop_min(), Some((2, 2)));
    }
}
