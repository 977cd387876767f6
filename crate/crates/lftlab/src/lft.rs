//! One-dimensional discrete transforms.
//!
//! Optimizer assignment is half-open: dual point `s` goes to the smallest `i`
//! with `s <= c_i`, i.e. the unique `i` with `c_{i-1} < s <= c_i`. When the last
//! dual point reaches `c_{n-2}` it is pinned to `x_{n-1}` instead, so a grid
//! spanning `[c_0, c_{n-2}]` starts at `x_0` and ends at `x_{n-1}`.

use std::ops::Range;

use crate::error::{LftError, Result};
use crate::function::{discrete_gradients, FunctionSpec, GradientVector};
use crate::grid::DualGrid;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateResult<S = Rational> {
    pub dual: DualGrid<S>,
    pub values: Vec<S>,
    pub optimizer_index: Vec<usize>,
}

impl<S: Scalar> ConjugateResult<S> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `f(x_i) + f*(s_j) - s_j x_i` for every pair, indexed `[j][i]`.
    pub fn fenchel_young_gaps(&self, f: &FunctionSpec<S>) -> Vec<Vec<S>> {
        let xs = f.grid().points();
        (0..self.len())
            .map(|j| {
                let s = self.dual.point(j);
                xs.iter()
                    .zip(f.samples())
                    .map(|(x, fx)| fx.clone() + self.values[j].clone() - s.clone() * x.clone())
                    .collect()
            })
            .collect()
    }
}

/// Whether dual index `K-1` is pinned to `x_{n-1}`. A lone dual point is never pinned.
pub fn pins_last<S: Scalar>(g: &GradientVector<S>, dual: &DualGrid<S>) -> bool {
    dual.len() >= 2 && dual.last() >= *g.last()
}

/// Dual indices whose optimizer is `x_i`, from `c_{i-1}`, `c_i` and the grid alone.
///
/// `pin_last` is [`pins_last`] for the instance; it is the only global input.
pub fn assigned_range<S: Scalar>(
    i: usize,
    n: usize,
    c_prev: &S,
    c_cur: &S,
    dual: &DualGrid<S>,
    pin_last: bool,
) -> Range<usize> {
    let k = dual.len();
    let mut lo = if i == 0 { 0 } else { dual.count_at_most(c_prev) };
    let mut hi = if i + 1 == n { k } else { dual.count_at_most(c_cur) };
    if pin_last {
        if i + 1 == n {
            lo = lo.min(k - 1);
        } else {
            hi = hi.min(k - 1);
            lo = lo.min(hi);
        }
    }
    lo..hi.max(lo)
}

/// Optimizer indices by a single merge over gradients and dual points.
///
/// Errors with `OutOfRangeDual` unless every `s_j` lies in `(c_{-1}, c_{n-1}]`.
pub fn optimizer_map<S: Scalar>(g: &GradientVector<S>, dual: &DualGrid<S>) -> Result<Vec<usize>> {
    let (lo, hi) = (g.lower_sentinel(), g.upper_sentinel());
    for j in 0..dual.len() {
        let s = dual.point(j);
        if s <= lo || s > hi {
            return Err(LftError::OutOfRangeDual { index: j });
        }
    }
    Ok(optimizer_map_clamped(g, dual))
}

/// As [`optimizer_map`] with the sentinels at infinity: points below the range
/// go to `x_0`, points above it to `x_{n-1}`.
pub fn optimizer_map_clamped<S: Scalar>(g: &GradientVector<S>, dual: &DualGrid<S>) -> Vec<usize> {
    let c = g.slopes();
    let n = g.n();
    let k = dual.len();
    let pin = pins_last(g, dual);
    let mut out = Vec::with_capacity(k);
    let mut i = 0;
    for j in 0..k {
        let s = dual.point(j);
        while i < n - 1 && c[i] < s {
            i += 1;
        }
        out.push(if pin && j + 1 == k { n - 1 } else { i });
    }
    out
}

/// Sentinel offset used when none is supplied: `gamma_s` if positive, else 1.
pub fn default_epsilon<S: Scalar>(dual: &DualGrid<S>) -> S {
    match dual.gamma_s() {
        Some(g) if *g > S::zero() => g.clone(),
        _ => S::one(),
    }
}

fn evaluate<S: Scalar>(f: &FunctionSpec<S>, dual: DualGrid<S>, optimizer_index: Vec<usize>) -> ConjugateResult<S> {
    let values = optimizer_index
        .iter()
        .enumerate()
        .map(|(j, &i)| dual.point(j) * f.grid().point(i) - f.sample(i).clone())
        .collect();
    ConjugateResult { dual, values, optimizer_index }
}

/// Linear-time transform on a sorted dual grid inside the sentinel-extended range.
pub fn lft_regular<S: Scalar>(f: &FunctionSpec<S>, dual: &DualGrid<S>) -> Result<ConjugateResult<S>> {
    let g = discrete_gradients(f, default_epsilon(dual))?;
    let idx = optimizer_map(&g, dual)?;
    Ok(evaluate(f, dual.clone(), idx))
}

/// Linear-time transform that accepts dual points anywhere on the line.
pub fn lft_regular_clamped<S: Scalar>(f: &FunctionSpec<S>, dual: &DualGrid<S>) -> Result<ConjugateResult<S>> {
    let g = discrete_gradients(f, default_epsilon(dual))?;
    let idx = optimizer_map_clamped(&g, dual);
    Ok(evaluate(f, dual.clone(), idx))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdaptiveVariant {
    /// `s_i = (c_{i-1} + c_i)/2`, endpoints `c_0` and `c_{n-2}`.
    Centered,
    /// `s_i = c_i`, last point `c_{n-2}`.
    Right,
    /// `s_i = c_{i-1}`, first point `c_0`.
    Left,
}

/// Dual points for which `x_i` is an optimizer of `s_i`, one per primal point.
pub fn adaptive_points<S: Scalar>(g: &GradientVector<S>, variant: AdaptiveVariant) -> Vec<S> {
    let c = g.slopes();
    let n = g.n();
    (0..n)
        .map(|i| {
            let left = if i == 0 { &c[0] } else { &c[i - 1] };
            let right = if i + 1 == n { &c[n - 2] } else { &c[i] };
            match variant {
                AdaptiveVariant::Centered => (left.clone() + right.clone()) / S::from_i64(2),
                AdaptiveVariant::Right => right.clone(),
                AdaptiveVariant::Left => left.clone(),
            }
        })
        .collect()
}

/// Transform on the adaptive grid; `optimizer_index[i] = i`.
pub fn lft_adaptive<S: Scalar>(f: &FunctionSpec<S>, variant: AdaptiveVariant) -> Result<ConjugateResult<S>> {
    let g = discrete_gradients(f, S::one())?;
    let dual = DualGrid::explicit(adaptive_points(&g, variant))?;
    Ok(evaluate(f, dual, (0..f.n()).collect()))
}

/// Exhaustive `max_i (s_j x_i - f(x_i))`, smallest maximizing index on ties.
pub fn lft_brute<S: Scalar>(f: &FunctionSpec<S>, dual: &DualGrid<S>) -> ConjugateResult<S> {
    let xs = f.grid().points();
    let mut values = Vec::with_capacity(dual.len());
    let mut optimizer_index = Vec::with_capacity(dual.len());
    for j in 0..dual.len() {
        let s = dual.point(j);
        let mut best = s.clone() * xs[0].clone() - f.sample(0).clone();
        let mut arg = 0;
        for (i, x) in xs.iter().enumerate().skip(1) {
            let v = s.clone() * x.clone() - f.sample(i).clone();
            if v > best {
                best = v;
                arg = i;
            }
        }
        values.push(best);
        optimizer_index.push(arg);
    }
    ConjugateResult { dual: dual.clone(), values, optimizer_index }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ex1, ex2, ex3, unit_grid};
    use crate::function::nontrivial_dual_range;
    use crate::grid::regular_dual_grid;
    use crate::scalar::{int, rat};

    fn spanning(f: &FunctionSpec, k: usize) -> DualGrid {
        let g = discrete_gradients(f, int(1)).unwrap();
        regular_dual_grid(nontrivial_dual_range(&g), k).unwrap()
    }

    #[test]
    fn example_one_regular() {
        let r = lft_regular(&ex1(), &spanning(&ex1(), 4)).unwrap();
        assert_eq!(r.values, vec![rat(-1, 2), rat(-3, 8), rat(-1, 8), rat(1, 4)]);
        // s = 1 = c_3 ties x_3 and x_4; the last dual point is pinned to x_4
        assert_eq!(r.optimizer_index, vec![0, 1, 2, 4]);
        assert_eq!(lft_brute(&ex1(), &r.dual).values, r.values);
    }

    #[test]
    fn example_two_and_three_regular() {
        let r = lft_regular(&ex2(), &spanning(&ex2(), 5)).unwrap();
        assert_eq!(r.values, vec![int(0), rat(3, 64), rat(1, 8), rat(15, 64), rat(6, 16)]);
        let r = lft_regular(&ex3(), &spanning(&ex3(), 5)).unwrap();
        assert_eq!(r.values, vec![int(0), rat(1, 16), rat(1, 8), rat(5, 16), rat(1, 2)]);
        assert_eq!(r.optimizer_index, vec![0, 1, 1, 3, 4]);
    }

    #[test]
    fn adaptive_examples() {
        let r = lft_adaptive(&ex1(), AdaptiveVariant::Centered).unwrap();
        assert_eq!(r.dual.points(), vec![rat(-1, 2), rat(-1, 4), rat(1, 4), rat(3, 4), int(1)]);
        assert_eq!(r.values, vec![rat(-1, 2), rat(-7, 16), rat(-1, 4), rat(1, 16), rat(1, 4)]);
        let r = lft_adaptive(&ex2(), AdaptiveVariant::Right).unwrap();
        assert_eq!(r.dual.points(), vec![int(0), rat(1, 4), rat(1, 2), rat(3, 4), rat(3, 4)]);
        assert_eq!(r.values, vec![int(0), rat(1, 16), rat(3, 16), rat(6, 16), rat(6, 16)]);
        let r = lft_adaptive(&ex2(), AdaptiveVariant::Centered).unwrap();
        assert_eq!(r.values, vec![int(0), rat(1, 32), rat(1, 8), rat(9, 32), rat(6, 16)]);
        let r = lft_adaptive(&ex3(), AdaptiveVariant::Centered).unwrap();
        assert_eq!(r.dual.points(), vec![int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)]);
        assert_eq!(r.values, vec![int(0), rat(1, 16), rat(1, 8), rat(5, 16), rat(1, 2)]);
        let r = lft_adaptive(&ex3(), AdaptiveVariant::Right).unwrap();
        assert_eq!(r.dual.points(), vec![int(0), rat(1, 2), rat(1, 2), int(1), int(1)]);
        let r = lft_adaptive(&ex3(), AdaptiveVariant::Left).unwrap();
        assert_eq!(r.dual.points(), vec![int(0), int(0), rat(1, 2), rat(1, 2), int(1)]);
    }

    #[test]
    fn adaptive_points_are_optimal_at_own_index() {
        for variant in [AdaptiveVariant::Centered, AdaptiveVariant::Right, AdaptiveVariant::Left] {
            for f in [ex1(), ex2(), ex3()] {
                let r = lft_adaptive(&f, variant).unwrap();
                assert_eq!(lft_brute(&f, &r.dual).values, r.values);
            }
        }
    }

    #[test]
    fn linear_tie_goes_to_first_interval() {
        let grid = crate::grid::RegularGrid::new(int(0), rat(1, 2), 3).unwrap();
        let f = FunctionSpec::new(grid, vec![int(0), rat(1, 2), int(1)]).unwrap();
        let g = discrete_gradients(&f, int(1)).unwrap();
        let single = DualGrid::explicit(vec![int(1)]).unwrap();
        assert_eq!(optimizer_map(&g, &single).unwrap(), vec![0]);
        let pair = DualGrid::explicit(vec![rat(1, 2), int(1)]).unwrap();
        assert_eq!(optimizer_map(&g, &pair).unwrap(), vec![0, 2]);
    }

    #[test]
    fn out_of_range_and_clamping() {
        let f = ex1();
        let g = discrete_gradients(&f, rat(1, 2)).unwrap();
        let dual = DualGrid::explicit(vec![int(-1), int(0), rat(3, 2)]).unwrap();
        assert_eq!(optimizer_map(&g, &dual), Err(LftError::OutOfRangeDual { index: 0 }));
        let wide = DualGrid::explicit(vec![int(-5), int(0), int(5)]).unwrap();
        let r = lft_regular_clamped(&f, &wide).unwrap();
        assert_eq!(r.values, lft_brute(&f, &wide).values);
        assert_eq!(r.optimizer_index, vec![0, 1, 4]);
    }

    #[test]
    fn epsilon_does_not_change_assignment() {
        let f = ex3();
        let dual = spanning(&f, 5);
        let base = optimizer_map(&discrete_gradients(&f, int(1)).unwrap(), &dual).unwrap();
        for e in [rat(1, 1000), rat(1, 4), int(7)] {
            assert_eq!(optimizer_map(&discrete_gradients(&f, e).unwrap(), &dual).unwrap(), base);
        }
    }

    #[test]
    fn constant_function_degenerate_range() {
        let f = FunctionSpec::new(unit_grid(4), vec![int(3); 4]).unwrap();
        let dual = spanning(&f, 2);
        assert_eq!(dual.points(), vec![int(0), int(0)]);
        let r = lft_regular(&f, &dual).unwrap();
        assert_eq!(r.values, vec![int(-3), int(-3)]);
    }

    #[test]
    fn brute_handles_nonconvex() {
        let f = FunctionSpec::new(unit_grid(3), vec![int(0), int(1), int(0)]).unwrap();
        let r = lft_brute(&f, &DualGrid::explicit(vec![int(0)]).unwrap());
        assert_eq!((r.values[0].clone(), r.optimizer_index[0]), (int(0), 0));
        assert!(lft_regular(&f, &DualGrid::explicit(vec![int(0)]).unwrap()).is_err());
    }

    #[test]
    fn assigned_ranges_partition_the_grid() {
        for f in [ex1(), ex2(), ex3()] {
            let g = discrete_gradients(&f, int(1)).unwrap();
            for k in 2..12 {
                let dual = regular_dual_grid(nontrivial_dual_range(&g), k).unwrap();
                let map = optimizer_map(&g, &dual).unwrap();
                let pin = pins_last(&g, &dual);
                for i in 0..f.n() {
                    let r = assigned_range(i, f.n(), &g.get(i as isize - 1), &g.get(i as isize), &dual, pin);
                    let expect: Vec<usize> = (0..k).filter(|&j| map[j] == i).collect();
                    assert_eq!(r.collect::<Vec<_>>(), expect);
                }
            }
        }
    }

    #[test]
    fn float_mode_agrees_with_exact() {
        let fr = ex1();
        let grid = crate::grid::RegularGrid::new(0.0, 0.25, 5).unwrap();
        let ff = FunctionSpec::from_fn(grid, |x| x * x - 0.75 * x + 0.5);
        let dual = DualGrid::regular(-0.5, 0.5, 4).unwrap();
        let r = lft_regular(&ff, &dual).unwrap();
        let exact = lft_regular(&fr, &spanning(&fr, 4)).unwrap();
        for (a, b) in r.values.iter().zip(&exact.values) {
            assert!((a - b.to_f64()).abs() < 1e-12);
        }
    }
}
