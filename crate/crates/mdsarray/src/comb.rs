//! Small combinatorics helper shared by the exhaustive verification suites.

/// All k-subsets of [0, n) in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost index that can still move
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// All k-subsets of an arbitrary pool, preserving pool order.
pub(crate) fn subsets_of(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    combinations(pool.len(), k)
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| pool[i]).collect())
        .collect()
}
