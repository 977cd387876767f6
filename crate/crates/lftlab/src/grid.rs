use crate::error::{LftError, Result};
use crate::scalar::{Rational, Scalar};

/// Equispaced primal points `x0 + i*gamma_x`, `i < n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularGrid<S = Rational> {
    x0: S,
    gamma_x: S,
    n: usize,
}

impl<S: Scalar> RegularGrid<S> {
    /// Gradient-based operations additionally need `n >= 3`; tensor axes may be shorter.
    pub fn new(x0: S, gamma_x: S, n: usize) -> Result<Self> {
        if gamma_x <= S::zero() {
            return Err(LftError::NonPositiveSpacing);
        }
        if n == 0 {
            return Err(LftError::DegenerateGrid { n, min: 1 });
        }
        Ok(Self { x0, gamma_x, n })
    }

    pub fn x0(&self) -> &S {
        &self.x0
    }

    pub fn gamma_x(&self) -> &S {
        &self.gamma_x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn point(&self, i: usize) -> S {
        self.x0.clone() + self.gamma_x.clone() * S::from_i64(i as i64)
    }

    pub fn points(&self) -> Vec<S> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    pub fn last(&self) -> S {
        self.point(self.n - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum DualKind<S> {
    Regular { s0: S, gamma_s: S, k: usize },
    Explicit(Vec<S>),
}

/// Sorted dual points: either equispaced or an explicit (adaptive) sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct DualGrid<S = Rational> {
    kind: DualKind<S>,
}

impl<S: Scalar> DualGrid<S> {
    /// `s0 + j*gamma_s` for `j < k`; `gamma_s = 0` repeats a single point.
    pub fn regular(s0: S, gamma_s: S, k: usize) -> Result<Self> {
        if gamma_s < S::zero() {
            return Err(LftError::UnsortedDual);
        }
        if k == 0 {
            return Err(LftError::InvalidK(k));
        }
        Ok(Self { kind: DualKind::Regular { s0, gamma_s, k } })
    }

    pub fn explicit(points: Vec<S>) -> Result<Self> {
        if points.is_empty() {
            return Err(LftError::InvalidK(0));
        }
        if points.windows(2).any(|w| w[0] > w[1]) {
            return Err(LftError::UnsortedDual);
        }
        Ok(Self { kind: DualKind::Explicit(points) })
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            DualKind::Regular { k, .. } => *k,
            DualKind::Explicit(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_regular(&self) -> bool {
        matches!(self.kind, DualKind::Regular { .. })
    }

    /// Spacing of a regular grid; `None` for explicit grids.
    pub fn gamma_s(&self) -> Option<&S> {
        match &self.kind {
            DualKind::Regular { gamma_s, .. } => Some(gamma_s),
            DualKind::Explicit(_) => None,
        }
    }

    pub fn point(&self, j: usize) -> S {
        match &self.kind {
            DualKind::Regular { s0, gamma_s, .. } => s0.clone() + gamma_s.clone() * S::from_i64(j as i64),
            DualKind::Explicit(p) => p[j].clone(),
        }
    }

    pub fn points(&self) -> Vec<S> {
        (0..self.len()).map(|j| self.point(j)).collect()
    }

    pub fn first(&self) -> S {
        self.point(0)
    }

    pub fn last(&self) -> S {
        self.point(self.len() - 1)
    }

    /// Number of points `s_j <= c`. Constant time on regular grids.
    pub fn count_at_most(&self, c: &S) -> usize {
        match &self.kind {
            DualKind::Regular { s0, gamma_s, k } => {
                if *c < *s0 {
                    0
                } else if gamma_s.is_zero() {
                    *k
                } else {
                    let steps = ((c.clone() - s0.clone()) / gamma_s.clone()).floor_i64();
                    (steps.saturating_add(1).max(0) as u64).min(*k as u64) as usize
                }
            }
            DualKind::Explicit(p) => p.partition_point(|s| s <= c),
        }
    }
}

/// Regular grid from `lo` to `hi` inclusive with `k` points.
pub fn regular_dual_grid<S: Scalar>(range: (S, S), k: usize) -> Result<DualGrid<S>> {
    if k < 2 {
        return Err(LftError::InvalidK(k));
    }
    let (lo, hi) = range;
    if lo > hi {
        return Err(LftError::ReversedRange);
    }
    let gamma_s = (hi - lo.clone()) / S::from_i64(k as i64 - 1);
    DualGrid::regular(lo, gamma_s, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn regular_dual_examples() {
        let g = regular_dual_grid((rat(-1, 2), int(1)), 4).unwrap();
        assert_eq!(g.points(), vec![rat(-1, 2), int(0), rat(1, 2), int(1)]);
        let g = regular_dual_grid((int(0), rat(3, 4)), 5).unwrap();
        assert_eq!(g.points(), vec![int(0), rat(3, 16), rat(6, 16), rat(9, 16), rat(3, 4)]);
        let g = regular_dual_grid((int(0), int(0)), 2).unwrap();
        assert_eq!(g.points(), vec![int(0), int(0)]);
        assert_eq!(regular_dual_grid((int(0), int(1)), 1), Err(LftError::InvalidK(1)));
    }

    #[test]
    fn count_matches_scan() {
        let g = regular_dual_grid((rat(-1, 2), int(1)), 7).unwrap();
        let e = DualGrid::explicit(g.points()).unwrap();
        for num in -12..=12 {
            let c = rat(num, 8);
            let scan = g.points().iter().filter(|s| **s <= c).count();
            assert_eq!(g.count_at_most(&c), scan);
            assert_eq!(e.count_at_most(&c), scan);
        }
    }

    #[test]
    fn grid_rejects_bad_spacing() {
        assert!(RegularGrid::new(int(0), int(0), 3).is_err());
        assert!(DualGrid::explicit(vec![int(1), int(0)]).is_err());
    }
}
