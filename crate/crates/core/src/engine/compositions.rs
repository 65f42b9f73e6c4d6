//! Weak compositions of `k` pebbles over `n` vertices in colexicographic order:
//! the last vertex's count is the most significant, so the sequence starts at
//! `(k, 0, .., 0)` and ends at `(0, .., 0, k)`. Ranking and unranking let a sweep
//! be cut into deterministic, resumable shards.

use crate::graph::Graph;

use super::Distribution;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is integral; cancel first so the product fits longer
        let g = num_integer::gcd(n - i, i + 1);
        let (num, den) = ((n - i) / g, (i + 1) / g);
        match (acc / den).checked_mul(num) {
            Some(v) => acc = v,
            None => return u128::MAX,
        }
    }
    acc
}

/// Number of ways to put `total` pebbles on `parts` vertices.
pub fn composition_count(total: u64, parts: usize) -> u128 {
    if parts == 0 {
        return u128::from(total == 0);
    }
    binomial(total as u128 + parts as u128 - 1, parts as u128 - 1)
}

/// Position of `c` in colexicographic order.
pub fn rank(c: &[u32]) -> u128 {
    let mut remaining: u128 = c.iter().map(|&x| x as u128).sum();
    let mut r = 0u128;
    for p in (1..c.len()).rev() {
        let last = c[p] as u128;
        // compositions of `remaining` into p + 1 parts whose last part is < c[p]
        let p = p as u128;
        r += binomial(remaining + p, p) - binomial(remaining - last + p, p);
        remaining -= last;
    }
    r
}

/// Inverse of [`rank`]; `None` when `index` is past the end.
pub fn unrank(parts: usize, total: u64, mut index: u128) -> Option<Vec<u32>> {
    if parts == 0 {
        return (total == 0 && index == 0).then(Vec::new);
    }
    if index >= composition_count(total, parts) {
        return None;
    }
    let mut c = vec![0u32; parts];
    let mut remaining = total;
    for p in (1..parts).rev() {
        let mut j = 0u64;
        loop {
            let block = composition_count(remaining - j, p);
            if index < block {
                break;
            }
            index -= block;
            j += 1;
        }
        c[p] = j as u32;
        remaining -= j;
    }
    c[0] = remaining as u32;
    Some(c)
}

/// Colexicographic iterator over weak compositions.
#[derive(Clone, Debug)]
pub struct Compositions {
    next: Option<Vec<u32>>,
}

impl Compositions {
    pub fn new(parts: usize, total: u64) -> Self {
        Self::starting_at(parts, total, 0)
    }

    pub fn starting_at(parts: usize, total: u64, index: u128) -> Self {
        Compositions {
            next: unrank(parts, total, index),
        }
    }

    /// Advances `c` to its colex successor in place; false at the end.
    pub fn advance(c: &mut [u32]) -> bool {
        let n = c.len();
        let Some(i) = c[..n.saturating_sub(1)].iter().position(|&x| x > 0) else {
            return false;
        };
        let v = c[i];
        c[i] = 0;
        c[i + 1] += 1;
        c[0] = v - 1;
        true
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if Self::advance(&mut succ) {
            self.next = Some(succ);
        }
        Some(cur)
    }
}

/// Every distribution of exactly `k` pebbles on `g`, once each, in colex order.
pub fn enumerate_distributions(g: &Graph, k: u64) -> impl Iterator<Item = Distribution> {
    Compositions::new(g.vertex_count(), k).map(Distribution::from_counts)
}
