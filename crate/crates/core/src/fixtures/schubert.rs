//! Critical points of the unitary Morse function on a Grassmannian.

use crate::error::{Error, Result};

/// One index `Σ (i_m - m)` per `k`-subset `i_1 < ... < i_k` of `{1..n}`, sorted.
///
/// With `doubled` every value is multiplied by two, reading the index as a real
/// rather than complex cell dimension.
pub fn schubert_indices(k: usize, n: usize, doubled: bool) -> Result<Vec<i64>> {
    if k > n {
        return Err(Error::InvalidRange(format!("need k <= n, got k = {k}, n = {n}")));
    }
    if k == 0 {
        return Ok(vec![0]);
    }
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (1..=k).collect();
    loop {
        let idx: i64 = subset.iter().enumerate().map(|(m, &i)| i as i64 - (m as i64 + 1)).sum();
        out.push(if doubled { 2 * idx } else { idx });
        // next subset in lexicographic order
        let Some(pos) = (0..k).rev().find(|&p| subset[p] < n - (k - 1 - p)) else { break };
        subset[pos] += 1;
        for q in pos + 1..k {
            subset[q] = subset[q - 1] + 1;
        }
    }
    out.sort_unstable();
    Ok(out)
}
