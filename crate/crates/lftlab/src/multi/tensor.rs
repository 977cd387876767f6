use crate::error::{LftError, Result};
use crate::grid::{DualGrid, RegularGrid};
use crate::scalar::Rational;

/// Row-major extents with axis 0 slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl Shape {
    pub fn new(dims: Vec<usize>) -> Self {
        let mut strides = vec![1; dims.len()];
        for a in (0..dims.len().saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * dims[a + 1];
        }
        Self { dims, strides }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    pub fn d(&self) -> usize {
        self.dims.len()
    }

    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn unflat(&self, mut flat: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let i = flat / s;
                flat %= s;
                i
            })
            .collect()
    }

    /// Flat offsets of the first element of every line along `axis`.
    pub fn line_starts(&self, axis: usize) -> Vec<usize> {
        let stride = self.strides[axis];
        let block = stride * self.dims[axis];
        (0..self.size()).filter(|f| f % block < stride).collect()
    }

    pub fn with_dim(&self, axis: usize, len: usize) -> Shape {
        let mut dims = self.dims.clone();
        dims[axis] = len;
        Shape::new(dims)
    }
}

/// Primal axes sharing one spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorGrid {
    axes: Vec<RegularGrid>,
}

impl TensorGrid {
    pub fn new(axes: Vec<RegularGrid>) -> Result<Self> {
        if axes.is_empty() {
            return Err(LftError::DimensionMismatch { expected: 1, got: 0 });
        }
        if axes.iter().any(|a| a.gamma_x() != axes[0].gamma_x()) {
            return Err(LftError::NonUniformSpacing);
        }
        Ok(Self { axes })
    }

    pub fn uniform(grid: RegularGrid, d: usize) -> Self {
        Self { axes: vec![grid; d] }
    }

    pub fn axes(&self) -> &[RegularGrid] {
        &self.axes
    }

    pub fn d(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Shape {
        Shape::new(self.axes.iter().map(|a| a.n()).collect())
    }

    pub fn point(&self, idx: &[usize]) -> Vec<Rational> {
        self.axes.iter().zip(idx).map(|(a, &i)| a.point(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    Primal(RegularGrid),
    Dual(DualGrid),
}

impl Axis {
    pub fn len(&self) -> usize {
        match self {
            Axis::Primal(g) => g.n(),
            Axis::Dual(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, i: usize) -> Rational {
        match self {
            Axis::Primal(g) => g.point(i),
            Axis::Dual(g) => g.point(i),
        }
    }
}

/// Values on a product of axes, row-major. Axes turn from primal to dual as
/// partial transforms are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSamples {
    axes: Vec<Axis>,
    values: Vec<Rational>,
}

impl TensorSamples {
    pub fn new(grid: TensorGrid, values: Vec<Rational>) -> Result<Self> {
        Self::from_axes(grid.axes.into_iter().map(Axis::Primal).collect(), values)
    }

    pub fn from_axes(axes: Vec<Axis>, values: Vec<Rational>) -> Result<Self> {
        let expected: usize = axes.iter().map(Axis::len).product();
        if values.len() != expected {
            return Err(LftError::LengthMismatch { expected, got: values.len() });
        }
        Ok(Self { axes, values })
    }

    pub fn from_fn(grid: TensorGrid, f: impl Fn(&[Rational]) -> Rational) -> Self {
        let shape = grid.shape();
        let values = (0..shape.size()).map(|flat| f(&grid.point(&shape.unflat(flat)))).collect();
        Self { axes: grid.axes.into_iter().map(Axis::Primal).collect(), values }
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn d(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Shape {
        Shape::new(self.axes.iter().map(Axis::len).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, idx: &[usize]) -> &Rational {
        &self.values[self.shape().flat(idx)]
    }

    pub fn point(&self, idx: &[usize]) -> Vec<Rational> {
        self.axes.iter().zip(idx).map(|(a, &i)| a.point(i)).collect()
    }

    pub fn primal_axis(&self, axis: usize) -> Result<&RegularGrid> {
        match self.axes.get(axis) {
            Some(Axis::Primal(g)) => Ok(g),
            Some(Axis::Dual(_)) => Err(LftError::NotPrimalAxis(axis)),
            None => Err(LftError::AxisOutOfRange { axis, d: self.d() }),
        }
    }

    /// The primal grid, when no axis has been transformed.
    pub fn grid(&self) -> Option<TensorGrid> {
        let axes = self
            .axes
            .iter()
            .map(|a| match a {
                Axis::Primal(g) => Some(g.clone()),
                Axis::Dual(_) => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(TensorGrid { axes })
    }

    /// Values along the line through `start` in direction `axis`.
    pub fn line(&self, axis: usize, start: usize) -> Vec<Rational> {
        let shape = self.shape();
        let stride = shape.stride(axis);
        (0..shape.dims()[axis]).map(|t| self.values[start + t * stride].clone()).collect()
    }

    pub(crate) fn into_parts(self) -> (Vec<Axis>, Vec<Rational>) {
        (self.axes, self.values)
    }
}
