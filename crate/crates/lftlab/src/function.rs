use crate::error::{LftError, Result};
use crate::grid::RegularGrid;
use crate::scalar::{Rational, Scalar};

/// Samples `f(x_i)` on a regular grid. Convexity is checked by the operations that need it.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec<S = Rational> {
    grid: RegularGrid<S>,
    samples: Vec<S>,
    closed_form: Option<String>,
    tolerance: S,
}

impl<S: Scalar> FunctionSpec<S> {
    pub fn new(grid: RegularGrid<S>, samples: Vec<S>) -> Result<Self> {
        Self::with_tolerance(grid, samples, S::default_tolerance())
    }

    /// `tolerance` is the absolute slack granted to negative second differences.
    pub fn with_tolerance(grid: RegularGrid<S>, samples: Vec<S>, tolerance: S) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(LftError::LengthMismatch { expected: grid.n(), got: samples.len() });
        }
        Ok(Self { grid, samples, closed_form: None, tolerance })
    }

    pub fn from_fn(grid: RegularGrid<S>, f: impl Fn(&S) -> S) -> Self {
        let samples = grid.points().iter().map(f).collect();
        Self { grid, samples, closed_form: None, tolerance: S::default_tolerance() }
    }

    pub fn with_closed_form(mut self, tag: impl Into<String>) -> Self {
        self.closed_form = Some(tag.into());
        self
    }

    pub fn grid(&self) -> &RegularGrid<S> {
        &self.grid
    }

    pub fn samples(&self) -> &[S] {
        &self.samples
    }

    pub fn sample(&self, i: usize) -> &S {
        &self.samples[i]
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn closed_form(&self) -> Option<&str> {
        self.closed_form.as_deref()
    }

    pub fn tolerance(&self) -> &S {
        &self.tolerance
    }

    /// First interior index whose second difference is negative beyond the tolerance.
    pub fn convexity_violation(&self) -> Option<usize> {
        second_difference_violation(&self.samples, &self.tolerance)
    }

    pub fn check_convex(&self) -> Result<()> {
        match self.convexity_violation() {
            Some(index) => Err(LftError::NonConvexInput { index }),
            None => Ok(()),
        }
    }
}

pub(crate) fn second_difference_violation<S: Scalar>(v: &[S], tol: &S) -> Option<usize> {
    let slack = -tol.clone();
    (1..v.len().saturating_sub(1)).find(|&i| {
        let d2 = v[i + 1].clone() - v[i].clone() - v[i].clone() + v[i - 1].clone();
        d2 < slack
    })
}

/// Forward-difference slopes `c_0..c_{n-2}` with sentinels `c_{-1} = c_0 - eps`
/// and `c_{n-1} = c_{n-2} + eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientVector<S = Rational> {
    c: Vec<S>,
    epsilon: S,
}

impl<S: Scalar> GradientVector<S> {
    pub fn new(c: Vec<S>, epsilon: S) -> Result<Self> {
        if epsilon <= S::zero() {
            return Err(LftError::NonPositiveEpsilon);
        }
        if c.len() < 2 {
            return Err(LftError::DegenerateGrid { n: c.len() + 1, min: 3 });
        }
        Ok(Self { c, epsilon })
    }

    pub fn slopes(&self) -> &[S] {
        &self.c
    }

    pub fn epsilon(&self) -> &S {
        &self.epsilon
    }

    /// Number of primal points `n`.
    pub fn n(&self) -> usize {
        self.c.len() + 1
    }

    /// `c_i` for `-1 <= i <= n-1`, sentinels included.
    pub fn get(&self, i: isize) -> S {
        let last = self.c.len() as isize;
        if i == -1 {
            self.lower_sentinel()
        } else if i == last {
            self.upper_sentinel()
        } else {
            self.c[i as usize].clone()
        }
    }

    pub fn lower_sentinel(&self) -> S {
        self.c[0].clone() - self.epsilon.clone()
    }

    pub fn upper_sentinel(&self) -> S {
        self.c[self.c.len() - 1].clone() + self.epsilon.clone()
    }

    pub fn first(&self) -> &S {
        &self.c[0]
    }

    /// `c_{n-2}`.
    pub fn last(&self) -> &S {
        &self.c[self.c.len() - 1]
    }
}

pub fn discrete_gradients<S: Scalar>(f: &FunctionSpec<S>, epsilon: S) -> Result<GradientVector<S>> {
    if f.n() < 3 {
        return Err(LftError::DegenerateGrid { n: f.n(), min: 3 });
    }
    f.check_convex()?;
    let g = f.grid().gamma_x().clone();
    let c = f.samples().windows(2).map(|w| (w[1].clone() - w[0].clone()) / g.clone()).collect();
    GradientVector::new(c, epsilon)
}

/// `(c_0, c_{n-2})`; outside this interval the optimizer is pinned to an endpoint.
pub fn nontrivial_dual_range<S: Scalar>(g: &GradientVector<S>) -> (S, S) {
    (g.first().clone(), g.last().clone())
}
