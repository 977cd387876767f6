//! d-dimensional transforms by nested one-dimensional passes.
//!
//! A pass along axis `l` replaces every line `x_l -> h(.., x_l, ..)` by
//! `s_l -> -max_x (s_l x - h(.., x, ..))`; after all axes the negated values are
//! the conjugate. Lines of intermediate passes need not be convex, so those fall
//! back to exhaustive search; input lines must be convex.

mod tensor;

pub use tensor::{Axis, Shape, TensorGrid, TensorSamples};

use num_traits::Zero;

use crate::error::{LftError, Result};
use crate::function::{second_difference_violation, FunctionSpec};
use crate::grid::{regular_dual_grid, DualGrid, RegularGrid};
use crate::lft::{lft_brute, lft_regular_clamped};
use crate::scalar::{int, Rational};

/// Largest primal size the exhaustive oracle accepts.
pub const BRUTE_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub enum DualPoints {
    /// Product of per-axis grids, row-major like the primal layout.
    Product(Vec<DualGrid>),
    List(Vec<Vec<Rational>>),
}

impl DualPoints {
    pub fn len(&self) -> usize {
        match self {
            DualPoints::Product(g) => g.iter().map(DualGrid::len).product(),
            DualPoints::List(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, flat: usize) -> Vec<Rational> {
        match self {
            DualPoints::Product(g) => {
                let shape = Shape::new(g.iter().map(DualGrid::len).collect());
                g.iter().zip(shape.unflat(flat)).map(|(g, j)| g.point(j)).collect()
            }
            DualPoints::List(p) => p[flat].clone(),
        }
    }

    pub fn to_list(&self) -> Vec<Vec<Rational>> {
        (0..self.len()).map(|f| self.point(f)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorConjugate {
    pub duals: DualPoints,
    pub values: Vec<Rational>,
    /// Primal multi-index attaining each value.
    pub optimizers: Vec<Vec<usize>>,
}

impl TensorConjugate {
    /// Smallest `f(x) + f*(s) - <s, x>` over all pairs; nonnegative by Fenchel-Young.
    pub fn min_fenchel_young_gap(&self, f: &TensorSamples) -> Rational {
        let shape = f.shape();
        let mut best: Option<Rational> = None;
        for (q, v) in self.values.iter().enumerate() {
            let s = self.duals.point(q);
            for p in 0..shape.size() {
                let x = f.point(&shape.unflat(p));
                let gap = f.values()[p].clone() + v.clone() - inner(&s, &x);
                if best.as_ref().is_none_or(|b| gap < *b) {
                    best = Some(gap);
                }
            }
        }
        best.unwrap_or_else(Rational::zero)
    }
}

pub fn inner(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::zero(), |acc, v| acc + v)
}

fn check_line_convex(f: &TensorSamples, axis: usize) -> Result<()> {
    let shape = f.shape();
    for start in shape.line_starts(axis) {
        if second_difference_violation(&f.line(axis, start), &Rational::zero()).is_some() {
            return Err(LftError::NonConvexSlice { axis, offset: start });
        }
    }
    Ok(())
}

/// Convexity of every axis-aligned line.
pub fn check_convex(f: &TensorSamples) -> Result<()> {
    (0..f.d()).try_for_each(|a| check_line_convex(f, a))
}

/// Conjugate of one line and its optimizers.
fn conjugate_line(grid: &RegularGrid, line: Vec<Rational>, dual: &DualGrid) -> (Vec<Rational>, Vec<usize>) {
    let convex = second_difference_violation(&line, &Rational::zero()).is_none();
    let spec = FunctionSpec::new(grid.clone(), line).expect("line length matches axis");
    let r = if spec.n() >= 3 && convex {
        lft_regular_clamped(&spec, dual).expect("convex line of length >= 3")
    } else {
        lft_brute(&spec, dual)
    };
    (r.values, r.optimizer_index)
}

/// One pass: returns `g` along `axis` and the optimizer index of every output entry.
fn pass(f: &TensorSamples, axis: usize, dual: &DualGrid) -> Result<(TensorSamples, Vec<usize>)> {
    let grid = f.primal_axis(axis)?.clone();
    let shape = f.shape();
    let out_shape = shape.with_dim(axis, dual.len());
    let out_stride = out_shape.stride(axis);
    let mut values = vec![Rational::zero(); out_shape.size()];
    let mut opt = vec![0; out_shape.size()];
    for start in shape.line_starts(axis) {
        let (conj, idx) = conjugate_line(&grid, f.line(axis, start), dual);
        let out_start = out_shape.flat(&shape.unflat(start));
        for (j, (v, i)) in conj.into_iter().zip(idx).enumerate() {
            values[out_start + j * out_stride] = -v;
            opt[out_start + j * out_stride] = i;
        }
    }
    let (mut axes, _) = f.clone().into_parts();
    axes[axis] = Axis::Dual(dual.clone());
    Ok((TensorSamples::from_axes(axes, values)?, opt))
}

/// `g(.., s, ..) = -max_x (s x - f(.., x, ..))` along `axis`.
pub fn partial_transform_g(f: &TensorSamples, axis: usize, dual_axis: &DualGrid) -> Result<TensorSamples> {
    if axis >= f.d() {
        return Err(LftError::AxisOutOfRange { axis, d: f.d() });
    }
    f.primal_axis(axis)?;
    check_line_convex(f, axis)?;
    Ok(pass(f, axis, dual_axis)?.0)
}

/// One shared regular grid per axis spanning every line's nontrivial range.
pub fn shared_dual_grids(f: &TensorSamples, ks: &[usize]) -> Result<Vec<DualGrid>> {
    if ks.len() != f.d() {
        return Err(LftError::DimensionMismatch { expected: f.d(), got: ks.len() });
    }
    let shape = f.shape();
    (0..f.d())
        .map(|axis| {
            let grid = f.primal_axis(axis)?;
            let range = if grid.n() < 2 {
                (int(0), int(0))
            } else {
                let mut lo: Option<Rational> = None;
                let mut hi: Option<Rational> = None;
                for start in shape.line_starts(axis) {
                    let line = f.line(axis, start);
                    let first = (line[1].clone() - line[0].clone()) / grid.gamma_x();
                    let last = (line[line.len() - 1].clone() - line[line.len() - 2].clone()) / grid.gamma_x();
                    if lo.as_ref().is_none_or(|l| first < *l) {
                        lo = Some(first);
                    }
                    if hi.as_ref().is_none_or(|h| last > *h) {
                        hi = Some(last);
                    }
                }
                (lo.expect("nonempty"), hi.expect("nonempty"))
            };
            regular_dual_grid(range, ks[axis])
        })
        .collect()
}

/// Nested passes from the last axis to the first.
pub fn lft_nd_regular(f: &TensorSamples, duals: &[DualGrid]) -> Result<TensorConjugate> {
    let order: Vec<usize> = (0..f.d()).rev().collect();
    lft_nd_regular_ordered(f, duals, &order)
}

/// Nested passes in the given axis order.
pub fn lft_nd_regular_ordered(f: &TensorSamples, duals: &[DualGrid], order: &[usize]) -> Result<TensorConjugate> {
    let d = f.d();
    if duals.len() != d || order.len() != d {
        return Err(LftError::DimensionMismatch { expected: d, got: duals.len().min(order.len()) });
    }
    let mut seen = vec![false; d];
    for &a in order {
        if a >= d || std::mem::replace(&mut seen[a], true) {
            return Err(LftError::AxisOutOfRange { axis: a, d });
        }
    }
    if f.grid().is_none() {
        return Err(LftError::NotPrimalAxis(order[0]));
    }
    check_convex(f)?;
    let mut current = f.clone();
    let mut passes = Vec::with_capacity(d);
    for &axis in order {
        let (next, opt) = pass(&current, axis, &duals[axis])?;
        current = next;
        passes.push((axis, opt));
    }
    let shape = current.shape();
    let optimizers = (0..shape.size())
        .map(|flat| {
            let mut idx = shape.unflat(flat);
            let mut dims = shape.dims().to_vec();
            for (axis, opt) in passes.iter().rev() {
                let i = opt[Shape::new(dims.clone()).flat(&idx)];
                idx[*axis] = i;
                dims[*axis] = f.shape().dims()[*axis];
            }
            idx
        })
        .collect();
    let (_, values) = current.into_parts();
    Ok(TensorConjugate {
        duals: DualPoints::Product(duals.to_vec()),
        values: values.into_iter().map(|v| -v).collect(),
        optimizers,
    })
}

/// Exhaustive search over all primal points; smallest lexicographic optimizer on ties.
pub fn lft_nd_brute(f: &TensorSamples, dual_points: &[Vec<Rational>]) -> Result<TensorConjugate> {
    let grid = f.grid().ok_or(LftError::NotPrimalAxis(0))?;
    let n = f.len();
    if n > BRUTE_CAP {
        return Err(LftError::SizeCap { n, cap: BRUTE_CAP });
    }
    let shape = f.shape();
    let xs: Vec<Vec<Rational>> = (0..n).map(|p| grid.point(&shape.unflat(p))).collect();
    let mut values = Vec::with_capacity(dual_points.len());
    let mut optimizers = Vec::with_capacity(dual_points.len());
    for s in dual_points {
        if s.len() != f.d() {
            return Err(LftError::DimensionMismatch { expected: f.d(), got: s.len() });
        }
        let (v, p) = argmax(s, &xs, f.values(), None);
        values.push(v);
        optimizers.push(shape.unflat(p));
    }
    Ok(TensorConjugate { duals: DualPoints::List(dual_points.to_vec()), values, optimizers })
}

/// Exhaustive search on a product of dual grids.
pub fn lft_nd_brute_product(f: &TensorSamples, duals: &[DualGrid]) -> Result<TensorConjugate> {
    let product = DualPoints::Product(duals.to_vec());
    let mut r = lft_nd_brute(f, &product.to_list())?;
    r.duals = product;
    Ok(r)
}

/// Max of `<s, x_p> - f_p`; `prefer` wins ties, otherwise the smallest `p`.
fn argmax(s: &[Rational], xs: &[Vec<Rational>], fv: &[Rational], prefer: Option<usize>) -> (Rational, usize) {
    let mut best = inner(s, &xs[0]) - fv[0].clone();
    let mut arg = 0;
    for p in 1..xs.len() {
        let v = inner(s, &xs[p]) - fv[p].clone();
        if v > best {
            best = v;
            arg = p;
        }
    }
    if let Some(q) = prefer {
        if inner(s, &xs[q]) - fv[q].clone() == best {
            arg = q;
        }
    }
    (best, arg)
}

/// Centered adaptive slope at `i` of a sampled line; zero on single-point lines.
pub(crate) fn centered_slope(line: &[Rational], gamma: &Rational, i: usize) -> Rational {
    let n = line.len();
    if n < 2 {
        return Rational::zero();
    }
    let c = |t: usize| (line[t + 1].clone() - line[t].clone()) / gamma;
    let left = if i == 0 { c(0) } else { c(i - 1) };
    let right = if i + 1 == n { c(n - 2) } else { c(i) };
    (left + right) / int(2)
}

/// Dual point of every primal index: the centered slope of each axis line through it.
pub fn adaptive_dual_points(f: &TensorSamples) -> Result<Vec<Vec<Rational>>> {
    let grid = f.grid().ok_or(LftError::NotPrimalAxis(0))?;
    let shape = f.shape();
    Ok((0..f.len())
        .map(|p| {
            let idx = shape.unflat(p);
            (0..f.d())
                .map(|a| {
                    let mut base = idx.clone();
                    base[a] = 0;
                    let line = f.line(a, shape.flat(&base));
                    centered_slope(&line, grid.axes()[a].gamma_x(), idx[a])
                })
                .collect()
        })
        .collect())
}

/// Adaptive transform with one dual point per primal point and exact values.
///
/// The reported optimizer is the point's own index whenever that index attains
/// the maximum. This always holds for separable inputs; coupled inputs can move it.
pub fn lft_nd_adaptive(f: &TensorSamples) -> Result<TensorConjugate> {
    let grid = f.grid().ok_or(LftError::NotPrimalAxis(0))?;
    check_convex(f)?;
    if f.len() > BRUTE_CAP {
        return Err(LftError::SizeCap { n: f.len(), cap: BRUTE_CAP });
    }
    let shape = f.shape();
    let points = adaptive_dual_points(f)?;
    let xs: Vec<Vec<Rational>> = (0..f.len()).map(|p| grid.point(&shape.unflat(p))).collect();
    let mut values = Vec::with_capacity(f.len());
    let mut optimizers = Vec::with_capacity(f.len());
    for (p, s) in points.iter().enumerate() {
        let (v, arg) = argmax(s, &xs, f.values(), Some(p));
        values.push(v);
        optimizers.push(shape.unflat(arg));
    }
    Ok(TensorConjugate { duals: DualPoints::List(points), values, optimizers })
}

/// `sum_l q(x_l)` on the `d`-fold product of `q`'s grid.
pub fn separable_sum(q: &FunctionSpec, d: usize) -> TensorSamples {
    let grid = TensorGrid::uniform(q.grid().clone(), d);
    let shape = grid.shape();
    let values = (0..shape.size())
        .map(|p| shape.unflat(p).iter().map(|&i| q.sample(i).clone()).fold(Rational::zero(), |a, v| a + v))
        .collect();
    TensorSamples::new(grid, values).expect("matching size")
}

/// `x^T Q x + b.x` on `grid`; convex when `Q` is positive semidefinite.
pub fn quadratic_form(grid: TensorGrid, q: &[Vec<Rational>], b: &[Rational]) -> TensorSamples {
    TensorSamples::from_fn(grid, |x| {
        let mut v = inner(b, x);
        for (r, row) in q.iter().enumerate() {
            for (c, qrc) in row.iter().enumerate() {
                v += qrc * &x[r] * &x[c];
            }
        }
        v
    })
}
