//! Named roles (`u_i`, `v_i`) for the vertices of a trimmed middle path or a
//! middle cycle sitting inside some ambient graph.

use serde::Serialize;

use crate::graph::{Graph, VertexId, VertexLabel};

use super::StrategyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PathRole {
    /// `u_k`, 1 ≤ k ≤ n−1.
    Spine(usize),
    /// `v_k`, 2 ≤ k ≤ n−1.
    Rung(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CycleRole {
    U(usize),
    V(usize),
}

/// `M(P_n) - {v_1, v_n}`: spine `u_1 .. u_{n-1}`, rungs `v_2 .. v_{n-1}`,
/// with `v_m` adjacent to `u_{m-1}` and `u_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiddlePathLayout {
    pub n: usize,
    pub spine: Vec<VertexId>,
    pub rungs: Vec<VertexId>,
}

impl MiddlePathLayout {
    /// Roles by label in the graph built by `middle_path_trimmed(n)`.
    pub fn standard(g: &Graph, n: usize) -> Result<Self, StrategyError> {
        if n < 3 {
            return Err(StrategyError::Structure(format!(
                "trimmed middle path needs n >= 3, got {n}"
            )));
        }
        let find = |l: VertexLabel| {
            g.id(&l).ok_or_else(|| {
                StrategyError::Structure(format!("no vertex {l}; expected the trimmed middle path of order {n}"))
            })
        };
        let spine = (1..n)
            .map(|i| find(VertexLabel::edge(i, i + 1)))
            .collect::<Result<_, _>>()?;
        let rungs = (2..n)
            .map(|m| find(VertexLabel::Original(m)))
            .collect::<Result<_, _>>()?;
        let layout = MiddlePathLayout { n, spine, rungs };
        if g.vertex_count() != layout.vertices().len() {
            return Err(StrategyError::Structure(format!(
                "{} vertices, expected {}",
                g.vertex_count(),
                2 * n - 3
            )));
        }
        layout.validate(g)?;
        Ok(layout)
    }

    pub fn u(&self, k: usize) -> VertexId {
        self.spine[k - 1]
    }

    pub fn v(&self, m: usize) -> VertexId {
        self.rungs[m - 2]
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        self.spine.iter().chain(&self.rungs).copied().collect()
    }

    pub fn role_of(&self, x: VertexId) -> Option<PathRole> {
        if let Some(i) = self.spine.iter().position(|&s| s == x) {
            return Some(PathRole::Spine(i + 1));
        }
        self.rungs.iter().position(|&r| r == x).map(|i| PathRole::Rung(i + 2))
    }

    pub fn validate(&self, g: &Graph) -> Result<(), StrategyError> {
        let n = self.n;
        let bad = |what: String| Err(StrategyError::Structure(what));
        if self.spine.len() != n - 1 || self.rungs.len() != n - 2 {
            return bad("layout sizes do not match n".into());
        }
        let mut all = self.vertices();
        all.sort_unstable();
        all.dedup();
        if all.len() != 2 * n - 3 || all.last().is_some_and(|&x| x >= g.vertex_count()) {
            return bad("layout vertices repeat or fall outside the graph".into());
        }
        for k in 1..n - 1 {
            if !g.adjacent(self.u(k), self.u(k + 1)) {
                return bad(format!("u_{k} and u_{} are not adjacent", k + 1));
            }
        }
        for m in 2..n {
            if !g.adjacent(self.v(m), self.u(m - 1)) || !g.adjacent(self.v(m), self.u(m)) {
                return bad(format!("v_{m} is not joined to u_{} and u_{m}", m - 1));
            }
        }
        Ok(())
    }
}

/// `M(C_{2n})` with `v_i` the original vertices and `u_i` between `v_i` and `v_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiddleCycleLayout {
    pub n: usize,
    pub u: Vec<VertexId>,
    pub v: Vec<VertexId>,
}

impl MiddleCycleLayout {
    /// Roles by label in the graph built by `middle_cycle(n)`.
    pub fn standard(g: &Graph, n: usize) -> Result<Self, StrategyError> {
        if g.vertex_count() != 4 * n {
            return Err(StrategyError::Structure(format!(
                "{} vertices; the middle graph of C_{} has {}",
                g.vertex_count(),
                2 * n,
                4 * n
            )));
        }
        Self::from_labels(g, n, |l| l)
    }

    /// Infers `n` from the vertex count.
    pub fn detect(g: &Graph) -> Result<Self, StrategyError> {
        let c = g.vertex_count();
        if !c.is_multiple_of(4) || c < 8 {
            return Err(StrategyError::Structure(format!(
                "{c} vertices is not the middle graph of an even cycle"
            )));
        }
        Self::standard(g, c / 4)
    }

    /// Roles found by mapping each canonical label through `map` (used for fibers).
    pub fn from_labels(g: &Graph, n: usize, map: impl Fn(VertexLabel) -> VertexLabel) -> Result<Self, StrategyError> {
        if n < 2 {
            return Err(StrategyError::Structure(format!("middle cycle needs n >= 2, got {n}")));
        }
        let find = |l: VertexLabel| {
            let l = map(l);
            g.id(&l)
                .ok_or_else(|| StrategyError::Structure(format!("no vertex {l}")))
        };
        let len = 2 * n;
        let u = (0..len)
            .map(|i| find(VertexLabel::edge(i, (i + 1) % len)))
            .collect::<Result<_, _>>()?;
        let v = (0..len)
            .map(|i| find(VertexLabel::Original(i)))
            .collect::<Result<_, _>>()?;
        let layout = MiddleCycleLayout { n, u, v };
        layout.validate(g)?;
        Ok(layout)
    }

    fn len(&self) -> usize {
        2 * self.n
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        self.u.iter().chain(&self.v).copied().collect()
    }

    pub fn role_of(&self, x: VertexId) -> Option<CycleRole> {
        if let Some(i) = self.u.iter().position(|&s| s == x) {
            return Some(CycleRole::U(i));
        }
        self.v.iter().position(|&r| r == x).map(CycleRole::V)
    }

    pub fn validate(&self, g: &Graph) -> Result<(), StrategyError> {
        let len = self.len();
        let bad = |what: String| Err(StrategyError::Structure(what));
        let mut all = self.vertices();
        all.sort_unstable();
        all.dedup();
        if self.u.len() != len || self.v.len() != len || all.len() != 2 * len {
            return bad("layout vertices repeat or miscount".into());
        }
        for i in 0..len {
            let prev = (i + len - 1) % len;
            if !g.adjacent(self.u[i], self.u[(i + 1) % len]) {
                return bad(format!("u_{i} and u_{} are not adjacent", (i + 1) % len));
            }
            if !g.adjacent(self.v[i], self.u[i]) || !g.adjacent(self.v[i], self.u[prev]) {
                return bad(format!("v_{i} is not joined to u_{prev} and u_{i}"));
            }
        }
        Ok(())
    }

    /// The same graph relabelled by the rotation `i -> i - r`, so old `u_r` becomes `u_0`.
    pub fn rotated(&self, r: usize) -> Self {
        let len = self.len();
        MiddleCycleLayout {
            n: self.n,
            u: (0..len).map(|i| self.u[(i + r) % len]).collect(),
            v: (0..len).map(|i| self.v[(i + r) % len]).collect(),
        }
    }

    /// Half `A = {u_0, v_1, u_1, .., v_n, u_n}` as a trimmed middle path of
    /// order `n + 2`, with `u'_j = u_{j-1}` and `v'_m = v_{m-1}`.
    pub fn half_a(&self) -> MiddlePathLayout {
        let n = self.n;
        MiddlePathLayout {
            n: n + 2,
            spine: self.u[..=n].to_vec(),
            rungs: self.v[1..=n].to_vec(),
        }
    }

    /// Half `B = {u_0, v_0, u_{2n-1}, .., v_{n+1}, u_n}`, mirrored so `u'_1 = u_0`.
    pub fn half_b(&self) -> MiddlePathLayout {
        let (n, len) = (self.n, self.len());
        MiddlePathLayout {
            n: n + 2,
            spine: (1..=n + 1).map(|j| self.u[(len + 1 - j) % len]).collect(),
            rungs: (2..=n + 1).map(|m| self.v[(len + 2 - m) % len]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{middle_cycle, middle_path_trimmed};

    #[test]
    fn standard_layouts_validate() {
        for n in 3..8 {
            let g = middle_path_trimmed(n).unwrap();
            let l = MiddlePathLayout::standard(&g, n).unwrap();
            assert_eq!(l.role_of(l.u(1)), Some(PathRole::Spine(1)));
            assert_eq!(l.role_of(l.v(n - 1)), Some(PathRole::Rung(n - 1)));
        }
        for n in 2..6 {
            let g = middle_cycle(n).unwrap();
            let l = MiddleCycleLayout::detect(&g).unwrap();
            assert_eq!(l.n, n);
            for r in 0..2 * n {
                let rot = l.rotated(r);
                rot.validate(&g).unwrap();
                assert_eq!(rot.role_of(l.u[r]), Some(CycleRole::U(0)));
                rot.half_a().validate(&g).unwrap();
                rot.half_b().validate(&g).unwrap();
            }
        }
    }

    #[test]
    fn halves_cover_the_cycle() {
        let g = middle_cycle(3).unwrap();
        let l = MiddleCycleLayout::standard(&g, 3).unwrap();
        let (a, b) = (l.half_a(), l.half_b());
        assert_eq!(a.u(1), l.u[0]);
        assert_eq!(b.u(1), l.u[0]);
        assert_eq!(a.u(4), l.u[3]);
        assert_eq!(b.u(4), l.u[3]);
        let mut all: Vec<_> = a.vertices().into_iter().chain(b.vertices()).collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 12);
    }

    #[test]
    fn wrong_graph_is_structural_error() {
        let g = middle_cycle(2).unwrap();
        assert!(MiddlePathLayout::standard(&g, 4).is_err());
        let p = middle_path_trimmed(4).unwrap();
        assert!(MiddleCycleLayout::detect(&p).is_err());
    }
}
