//! Gap between two disjoint `τ`-intervals.

/// Distance between the intervals `[tx, tx + sx)` and `[ty, ty + sy)`,
/// counted from the last slot of the lower one to the first slot of the
/// upper one. Adjacent intervals are at gap 1; overlapping ones read as 0.
pub fn chi(tx: usize, sx: usize, ty: usize, sy: usize) -> usize {
    if tx < ty {
        ty.saturating_sub(tx + sx - 1)
    } else {
        tx.saturating_sub(ty + sy - 1)
    }
}

/// Bucket holding a neighbor at gap `chi`: the `j` with `2^j ≤ chi < 2^(j+1)`.
/// A gap of 0 only arises from overlapping intervals and is put in bucket 0.
pub fn bucket_of(chi: usize) -> usize {
    if chi <= 1 {
        0
    } else {
        (usize::BITS - 1 - chi.leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_is_symmetric_and_measured_between_ends() {
        assert_eq!(chi(0, 3, 3, 2), 1);
        assert_eq!(chi(3, 2, 0, 3), 1);
        assert_eq!(chi(0, 1, 7, 1), 7);
        assert_eq!(chi(10, 4, 2, 3), 6);
    }

    #[test]
    fn gap_never_exceeds_start_difference() {
        for tx in 0..12 {
            for sx in 1..5 {
                for ty in tx + sx..20 {
                    for sy in 1..4 {
                        let c = chi(tx, sx, ty, sy);
                        assert!(c <= ty - tx);
                        assert_eq!(c, chi(ty, sy, tx, sx));
                    }
                }
            }
        }
    }

    #[test]
    fn buckets_are_dyadic() {
        assert_eq!(bucket_of(1), 0);
        assert_eq!(bucket_of(2), 1);
        assert_eq!(bucket_of(3), 1);
        assert_eq!(bucket_of(4), 2);
        assert_eq!(bucket_of(1023), 9);
        assert_eq!(bucket_of(1024), 10);
    }
}
