//! Multiplicity `W`, slope ratio `nu`, the index set `A` and its relabeling `j(i, m)`.

use crate::error::{LftError, Result};
use crate::function::{FunctionSpec, GradientVector};
use crate::grid::{DualGrid, RegularGrid};
use crate::lft::{assigned_range, lft_regular, pins_last, ConjugateResult};
use crate::scalar::{abs, Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport<S = Rational> {
    /// Largest number of dual points sharing one optimizer.
    pub w: usize,
    /// `floor(max_i (c_i - c_{i-1}) / gamma_s)` over interior `i`; a diagnostic only.
    pub floor_formula_w: usize,
    pub nu: S,
    /// `K / (n W)`.
    pub success_probability: S,
    pub kappa_bound: Option<S>,
    pub n: usize,
    pub k: usize,
}

impl<S: Scalar> WitnessReport<S> {
    /// Attaches `L' / mu` from caller-supplied constants.
    pub fn with_kappa(mut self, lipschitz_gradient: S, strong_convexity: S) -> Self {
        self.kappa_bound = Some(lipschitz_gradient / strong_convexity);
        self
    }

    /// Amplitude-amplification rounds `ceil((pi/4) sqrt(1/p))`.
    pub fn expected_aa_repetitions(&self) -> u64 {
        expected_aa_repetitions(self.success_probability.to_f64())
    }
}

pub fn expected_aa_repetitions(p: f64) -> u64 {
    (std::f64::consts::FRAC_PI_4 * (1.0 / p).sqrt()).ceil() as u64
}

/// Number of dual indices assigned to each primal index.
pub fn multiplicities<S: Scalar>(g: &GradientVector<S>, dual: &DualGrid<S>) -> Vec<usize> {
    let n = g.n();
    let pin = pins_last(g, dual);
    (0..n)
        .map(|i| assigned_range(i, n, &g.get(i as isize - 1), &g.get(i as isize), dual, pin).len())
        .collect()
}

pub fn witness_params<S: Scalar>(
    g: &GradientVector<S>,
    grid: &RegularGrid<S>,
    dual: &DualGrid<S>,
) -> Result<WitnessReport<S>> {
    let gamma_s = match dual.gamma_s() {
        Some(gs) if *gs > S::zero() => gs.clone(),
        _ => return Err(LftError::ZeroSpacing),
    };
    let n = g.n();
    let k = dual.len();
    let w = multiplicities(g, dual).into_iter().max().unwrap_or(0).max(1);
    let c = g.slopes();
    let floor_formula_w = (1..n - 1)
        .map(|i| ((c[i].clone() - c[i - 1].clone()) / gamma_s.clone()).floor_i64().max(0) as usize)
        .max()
        .unwrap_or(0);
    let nu = (g.last().clone() - g.first().clone()) / (grid.last() - grid.x0().clone());
    let success_probability = S::from_i64(k as i64) / S::from_i64((n * w) as i64);
    Ok(WitnessReport { w, floor_formula_w, nu, success_probability, kappa_bound: None, n, k })
}

fn check_index<S: Scalar>(i: usize, m: usize, g: &GradientVector<S>) -> Result<()> {
    if i >= g.n() {
        return Err(LftError::IndexOutOfRange { i, m });
    }
    Ok(())
}

/// Whether `(i, m)` labels a dual index, i.e. `m` is below the multiplicity of `x_i`.
pub fn membership_a<S: Scalar>(i: usize, m: usize, g: &GradientVector<S>, dual: &DualGrid<S>) -> Result<bool> {
    Ok(dual_index_j(i, m, g, dual)?.is_some())
}

/// The `m`-th dual index whose optimizer is `x_i`, if any.
pub fn dual_index_j<S: Scalar>(i: usize, m: usize, g: &GradientVector<S>, dual: &DualGrid<S>) -> Result<Option<usize>> {
    check_index(i, m, g)?;
    let r = assigned_range(i, g.n(), &g.get(i as isize - 1), &g.get(i as isize), dual, pins_last(g, dual));
    Ok((m < r.len()).then(|| r.start + m))
}

/// `max_j |f_cont*(s_j) - f*(s_j)|` against a closed-form continuous conjugate.
pub fn convergence_gap<S: Scalar>(
    f: &FunctionSpec<S>,
    continuous_conjugate: impl Fn(&S) -> S,
    dual: &DualGrid<S>,
) -> Result<S> {
    let r: ConjugateResult<S> = lft_regular(f, dual)?;
    Ok((0..r.len())
        .map(|j| abs(&(continuous_conjugate(&dual.point(j)) - r.values[j].clone())))
        .fold(S::zero(), |m, v| if v > m { v } else { m }))
}
