//! Simplex grids, channel grids and deterministic-map enumeration.

/// All compositions of `n` into `k` nonnegative parts, in lexicographic
/// order of the part vectors (first part smallest first).
pub fn compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    fn rec(n: u32, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=n {
            prefix.push(first);
            rec(n - first, k - 1, prefix, out);
            prefix.pop();
        }
    }
    assert!(k >= 1, "simplex dimension must be positive");
    let mut out = Vec::new();
    rec(n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Number of points of the `k`-simplex grid with denominator `n`:
/// `C(n + k − 1, k − 1)`.
pub fn simplex_grid_size(n: u32, k: usize) -> u128 {
    let (n, r) = (n as u128, (k as u128).saturating_sub(1));
    let mut c: u128 = 1;
    for i in 1..=r {
        c = c * (n + i) / i;
    }
    c
}

/// Grid rows of a simplex as probability vectors.
pub fn simplex_points(n: u32, k: usize) -> Vec<Vec<f64>> {
    compositions(n, k)
        .into_iter()
        .map(|c| c.into_iter().map(|m| m as f64 / n as f64).collect())
        .collect()
}

/// `base^exp`, saturating.
pub fn pow_sat(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// Restricted growth strings of length `len` with at most `max_blocks`
/// distinct values: canonical labellings of set partitions. Stops after
/// `limit` strings; the flag reports truncation.
pub fn restricted_growth_strings(len: usize, max_blocks: usize, limit: usize) -> (Vec<Vec<usize>>, bool) {
    let mut out = Vec::new();
    if len == 0 {
        out.push(Vec::new());
        return (out, false);
    }
    let mut s = vec![0usize; len];
    let mut truncated = false;
    loop {
        if out.len() == limit {
            truncated = true;
            break;
        }
        out.push(s.clone());
        // next string: rightmost position that can still grow
        let mut i = len;
        let mut advanced = false;
        while i > 1 {
            i -= 1;
            let max_prefix = s[..i].iter().copied().max().unwrap_or(0);
            if s[i] <= max_prefix && s[i] + 1 < max_blocks {
                s[i] += 1;
                for v in s.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    (out, truncated)
}
