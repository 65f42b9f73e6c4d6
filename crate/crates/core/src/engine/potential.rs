use num_rational::Ratio;

use crate::graph::{Graph, VertexId};
use crate::scalar::{self, ExactInt, Overflow};

use super::Distribution;

/// Eccentricities above this disable the fixed-width potential used by the search.
pub(crate) const MAX_SCALED_ECC: u32 = 64;

/// Per-target precomputation shared by the solver and the greedy strategies.
#[derive(Clone, Debug)]
pub struct TargetView {
    pub target: VertexId,
    pub dist: Vec<u32>,
    pub ecc: u32,
    /// Neighbors one step closer to the target.
    pub toward: Vec<Vec<VertexId>>,
    /// `2^(ecc - dist(v))`; empty when `ecc > MAX_SCALED_ECC`.
    pub scale: Vec<u128>,
}

impl TargetView {
    pub fn new(g: &Graph, target: VertexId) -> Self {
        let dist: Vec<u32> = g.distances_from(target).into_iter().map(|d| d as u32).collect();
        let ecc = dist.iter().copied().max().unwrap_or(0);
        let toward = (0..g.vertex_count())
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&w| dist[w] + 1 == dist[v])
                    .collect()
            })
            .collect();
        let scale = if ecc <= MAX_SCALED_ECC {
            dist.iter().map(|&d| 1u128 << (ecc - d)).collect()
        } else {
            Vec::new()
        };
        TargetView {
            target,
            dist,
            ecc,
            toward,
            scale,
        }
    }

    /// `potential * 2^ecc`, if the fixed-width form is available.
    pub fn scaled_potential(&self, counts: &[u32]) -> Option<u128> {
        if self.scale.is_empty() {
            return None;
        }
        Some(counts.iter().zip(&self.scale).map(|(&c, &s)| c as u128 * s).sum())
    }

    /// `t * 2^ecc`, the scaled potential a t-solvable distribution must reach.
    pub fn scaled_goal(&self, t: u32) -> Option<u128> {
        (!self.scale.is_empty()).then(|| (t as u128) << self.ecc)
    }
}

/// `sum_v p(v) / 2^dist(v, target)` as an exact fraction.
///
/// A move never increases it, and it stays equal exactly when the move steps
/// one edge closer to the target; so a distribution with potential below `t`
/// cannot put `t` pebbles on the target.
pub fn potential<T: ExactInt>(g: &Graph, d: &Distribution, target: VertexId) -> Result<Ratio<T>, Overflow> {
    let dist = g.distances_from(target);
    let ecc = dist.iter().copied().max().unwrap_or(0) as u32;
    let mut numer = T::zero();
    for (v, c) in d.support() {
        let term = scalar::mul(&scalar::int::<T>(c as i64)?, &scalar::pow2::<T>(ecc - dist[v] as u32)?)?;
        numer = scalar::add(&numer, &term)?;
    }
    Ok(Ratio::new(numer, scalar::pow2(ecc)?))
}
