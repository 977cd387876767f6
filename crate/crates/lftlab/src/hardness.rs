//! Hidden-string instances `f(x) = scale * max_i |x_i - z_i|` on `{0,1}^d`, whose
//! conjugate reveals `z`, and the rescaling that normalizes `W`.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LftError, Result};
use crate::function::{discrete_gradients, FunctionSpec};
use crate::grid::{DualGrid, RegularGrid};
use crate::lft::{default_epsilon, lft_regular};
use crate::multi::{inner, lft_nd_brute, TensorGrid, TensorSamples};
use crate::scalar::{int, Rational};
use crate::witness::multiplicities;

/// Largest `d` for the exhaustive paths.
pub const MAX_BRUTE_D: usize = 16;
/// Largest `d` at which samples are cross-checked by exhaustive search.
pub const CROSS_CHECK_D: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct HiddenStringInstance {
    z: Vec<u8>,
    scale: Rational,
    queries: u64,
}

impl HiddenStringInstance {
    pub fn new(z: Vec<u8>, scale: Rational) -> Result<Self> {
        if z.is_empty() || z.iter().any(|&b| b > 1) {
            return Err(LftError::BadHiddenString);
        }
        Ok(Self { z, scale, queries: 0 })
    }

    /// Scale 1: point queries of the conjugate reveal `z`.
    pub fn point_query(z: Vec<u8>) -> Result<Self> {
        Self::new(z, int(1))
    }

    /// Scale `2^d`: every conjugate value is `<z, s>`.
    pub fn sampling(z: Vec<u8>) -> Result<Self> {
        let d = z.len() as u32;
        Self::new(z, Rational::from_integer(num_bigint::BigInt::from(2).pow(d)))
    }

    /// Parses a string such as `"101"`.
    pub fn parse_bits(text: &str) -> Result<Vec<u8>> {
        text.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(LftError::BadHiddenString),
            })
            .collect()
    }

    pub fn d(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &[u8] {
        &self.z
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// One oracle call.
    pub fn evaluate(&mut self, x: &[Rational]) -> Rational {
        self.queries += 1;
        let dev = x
            .iter()
            .zip(&self.z)
            .map(|(xi, &zi)| (xi - int(zi as i64)).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        self.scale.clone() * dev
    }

    /// All `2^d` samples; costs `2^d` queries.
    pub fn samples(&mut self) -> Result<TensorSamples> {
        if self.d() > MAX_BRUTE_D {
            return Err(LftError::SizeCap { n: self.d(), cap: MAX_BRUTE_D });
        }
        let axis = RegularGrid::new(int(0), int(1), 2)?;
        let grid = TensorGrid::uniform(axis, self.d());
        let shape = grid.shape();
        let values = (0..shape.size()).map(|p| self.evaluate(&grid.point(&shape.unflat(p)))).collect();
        TensorSamples::new(grid, values)
    }
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
}

fn unit(d: usize, j: usize) -> Vec<Rational> {
    (0..d).map(|a| if a == j { int(1) } else { int(0) }).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointQueryRecovery {
    pub recovered: Vec<u8>,
    /// `f*(e_j)` for each `j`.
    pub values: Vec<Rational>,
    pub queries: u64,
}

/// Reads `z_j = f*(e_j)`, each value by exhaustive search over fresh samples.
pub fn recover_via_point_queries(inst: &mut HiddenStringInstance) -> Result<PointQueryRecovery> {
    let d = inst.d();
    let start = inst.queries();
    let mut values = Vec::with_capacity(d);
    for j in 0..d {
        let f = inst.samples()?;
        values.push(lft_nd_brute(&f, &[unit(d, j)])?.values.remove(0));
    }
    let recovered = values.iter().map(|v| u8::from(v.is_one())).collect();
    Ok(PointQueryRecovery { recovered, values, queries: inst.queries() - start })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplePair {
    pub s: Vec<u8>,
    /// `<z, s>`.
    pub value: Rational,
    /// Exhaustive `f*(s)` when `d <= CROSS_CHECK_D`.
    pub brute_value: Option<Rational>,
}

fn draw(inst: &mut HiddenStringInstance, rng: &mut impl Rng) -> Result<SamplePair> {
    let d = inst.d();
    let s: Vec<u8> = (0..d).map(|_| rng.gen_range(0..=1u8)).collect();
    let value = int(s.iter().zip(inst.z()).map(|(a, b)| (a * b) as i64).sum());
    let brute_value = if d <= CROSS_CHECK_D {
        let f = inst.samples()?;
        let point: Vec<Rational> = s.iter().map(|&b| int(b as i64)).collect();
        Some(lft_nd_brute(&f, &[point])?.values.remove(0))
    } else {
        None
    };
    Ok(SamplePair { s, value, brute_value })
}

/// A uniform `s in {0,1}^d` with its conjugate value.
pub fn sample_conjugate_pair(inst: &mut HiddenStringInstance, rng_seed: u64) -> Result<SamplePair> {
    draw(inst, &mut ChaCha8Rng::seed_from_u64(rng_seed))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SamplingOutcome {
    Recovered(Vec<u8>),
    RankDeficient { rank: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingRecovery {
    pub outcome: SamplingOutcome,
    pub equations: Vec<SamplePair>,
    pub queries: u64,
}

impl SamplingRecovery {
    pub fn succeeded(&self) -> bool {
        matches!(self.outcome, SamplingOutcome::Recovered(_))
    }
}

/// Solves `<s_r, x> = <z, s_r>` over `d + t` samples by rational elimination.
pub fn recover_via_sampling(inst: &mut HiddenStringInstance, t: usize, rng_seed: u64) -> Result<SamplingRecovery> {
    let d = inst.d();
    let start = inst.queries();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let equations = (0..d + t).map(|_| draw(inst, &mut rng)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<Rational>> = equations
        .iter()
        .map(|e| {
            let mut r: Vec<Rational> = e.s.iter().map(|&b| int(b as i64)).collect();
            r.push(e.value.clone());
            r
        })
        .collect();
    let outcome = match solve_full_rank(rows, d) {
        Ok(x) => SamplingOutcome::Recovered(x.iter().map(|v| u8::from(v.is_one())).collect()),
        Err(rank) => SamplingOutcome::RankDeficient { rank },
    };
    Ok(SamplingRecovery { outcome, equations, queries: inst.queries() - start })
}

/// Unique solution of an augmented system with `d` unknowns, or its rank.
fn solve_full_rank(mut rows: Vec<Vec<Rational>>, d: usize) -> std::result::Result<Vec<Rational>, usize> {
    let mut rank = 0;
    for col in 0..d {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for v in rows[rank].iter_mut() {
            *v = v.clone() / &pivot;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..=d {
                    let sub = factor.clone() * &rows[rank][c];
                    rows[r][c] -= sub;
                }
            }
        }
        rank += 1;
    }
    if rank < d {
        return Err(rank);
    }
    Ok((0..d).map(|c| rows[c][d].clone()).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rescaled {
    pub f: FunctionSpec,
    pub dual: DualGrid,
    /// `max_i (c_i - c_{i-1}) / gamma_x`.
    pub xi: Rational,
    pub gamma_x: Rational,
    /// `lambda = xi gamma_x^2`, with `f*(s) = lambda f~*(s~)`.
    pub value_scale: Rational,
    /// `s~ = s / (xi gamma_x)`.
    pub dual_scale: Rational,
    pub w: usize,
    pub w_tilde: usize,
    /// Whether `f*(s_j) = lambda f~*(s~_j)` held for every `j`.
    pub mapping_exact: bool,
}

/// Normalizes to unit primal spacing and unit `xi`: `x~ = x/gamma_x`,
/// `f~ = f/(xi gamma_x^2)`, `s~ = s/(xi gamma_x)`.
pub fn rescale_instance(f: &FunctionSpec, dual: &DualGrid) -> Result<Rescaled> {
    let g = discrete_gradients(f, default_epsilon(dual))?;
    let gamma_x = f.grid().gamma_x().clone();
    let c = g.slopes();
    let xi = (1..c.len()).map(|i| (c[i].clone() - &c[i - 1]) / &gamma_x).max().unwrap_or_else(Rational::zero);
    if xi.is_zero() {
        return Err(LftError::ZeroXi);
    }
    let value_scale = xi.clone() * &gamma_x * &gamma_x;
    let dual_scale = xi.clone() * &gamma_x;
    let grid = RegularGrid::new(f.grid().x0().clone() / &gamma_x, int(1), f.n())?;
    let ft = FunctionSpec::new(grid, f.samples().iter().map(|v| v / &value_scale).collect())?;
    let dt = match dual.gamma_s() {
        Some(gs) => DualGrid::regular(dual.first() / &dual_scale, gs / &dual_scale, dual.len())?,
        None => DualGrid::explicit(dual.points().iter().map(|s| s / &dual_scale).collect())?,
    };
    let gt = discrete_gradients(&ft, default_epsilon(&dt))?;
    let w = multiplicities(&g, dual).into_iter().max().unwrap_or(0);
    let w_tilde = multiplicities(&gt, &dt).into_iter().max().unwrap_or(0);
    let a = lft_regular(f, dual)?;
    let b = lft_regular(&ft, &dt)?;
    let mapping_exact = a.values.iter().zip(&b.values).all(|(x, y)| *x == value_scale.clone() * y);
    Ok(Rescaled { f: ft, dual: dt, xi, gamma_x, value_scale, dual_scale, w, w_tilde, mapping_exact })
}

/// `f*(s)` of a hidden-string instance at an arbitrary binary point, in closed form.
pub fn inner_with_z(z: &[u8], s: &[Rational]) -> Rational {
    let zr: Vec<Rational> = z.iter().map(|&b| int(b as i64)).collect();
    inner(&zr, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ex3;
    use crate::function::nontrivial_dual_range;
    use crate::grid::regular_dual_grid;
    use crate::scalar::rat;

    #[test]
    fn point_queries_d3() {
        let mut inst = HiddenStringInstance::point_query(vec![1, 0, 1]).unwrap();
        let r = recover_via_point_queries(&mut inst).unwrap();
        assert_eq!(r.values, vec![int(1), int(0), int(1)]);
        assert_eq!(r.recovered, vec![1, 0, 1]);
        assert_eq!(r.queries, 3 * 8);
        let f = HiddenStringInstance::point_query(vec![1, 0, 1]).unwrap().samples().unwrap();
        assert_eq!(lft_nd_brute(&f, &[unit(3, 1)]).unwrap().values[0], int(0));
    }

    #[test]
    fn point_queries_d1() {
        let mut inst = HiddenStringInstance::point_query(vec![0]).unwrap();
        assert_eq!(recover_via_point_queries(&mut inst).unwrap().values, vec![int(0)]);
    }

    #[test]
    fn counter_counts_every_evaluation() {
        let mut inst = HiddenStringInstance::point_query(vec![1, 1]).unwrap();
        assert_eq!(inst.evaluate(&[int(1), int(1)]), int(0));
        assert_eq!(inst.evaluate(&[int(0), int(1)]), int(1));
        assert_eq!(inst.queries(), 2);
    }

    #[test]
    fn sample_values() {
        let mut inst = HiddenStringInstance::sampling(vec![1, 0, 1]).unwrap();
        for seed in 0..20 {
            let p = sample_conjugate_pair(&mut inst, seed).unwrap();
            assert_eq!(Some(p.value.clone()), p.brute_value);
            if p.s == vec![0, 0, 0] {
                assert_eq!(p.value, int(0));
            }
            if p.s == vec![1, 1, 0] {
                assert_eq!(p.value, int(1));
            }
        }
        assert_eq!(inner_with_z(&[1, 0, 1], &[int(1), int(1), int(0)]), int(1));
    }

    #[test]
    fn sampling_d1_t0() {
        let mut hits = 0;
        for seed in 0..40 {
            let mut inst = HiddenStringInstance::sampling(vec![1]).unwrap();
            let r = recover_via_sampling(&mut inst, 0, seed).unwrap();
            assert_eq!(r.succeeded(), r.equations[0].s == vec![1]);
            if r.succeeded() {
                hits += 1;
                assert_eq!(r.outcome, SamplingOutcome::Recovered(vec![1]));
            }
        }
        assert!(hits > 0 && hits < 40);
    }

    #[test]
    fn elimination() {
        let rows = vec![vec![int(1), int(1), int(3)], vec![int(1), int(-1), int(1)]];
        assert_eq!(solve_full_rank(rows, 2), Ok(vec![int(2), int(1)]));
        let rows = vec![vec![int(1), int(1), int(3)], vec![int(2), int(2), int(6)]];
        assert_eq!(solve_full_rank(rows, 2), Err(1));
    }

    #[test]
    fn rescale_example_three() {
        let g = discrete_gradients(&ex3(), int(1)).unwrap();
        let dual = regular_dual_grid(nontrivial_dual_range(&g), 5).unwrap();
        let r = rescale_instance(&ex3(), &dual).unwrap();
        assert_eq!((r.w, r.w_tilde), (2, 2));
        assert_eq!(r.xi, int(2));
        assert_eq!(r.value_scale, rat(1, 8));
        assert!(r.mapping_exact);
        let gt = discrete_gradients(&r.f, int(1)).unwrap();
        let c = gt.slopes();
        let xi_t = (1..c.len()).map(|i| c[i].clone() - &c[i - 1]).max().unwrap();
        assert_eq!(xi_t, int(1));
    }

    #[test]
    fn rescale_identity() {
        let grid = RegularGrid::new(int(0), int(1), 4).unwrap();
        let f = FunctionSpec::new(grid, vec![int(0), int(0), int(1), int(2)]).unwrap();
        let dual = regular_dual_grid((int(0), int(1)), 3).unwrap();
        let r = rescale_instance(&f, &dual).unwrap();
        assert_eq!(r.f, f);
        assert_eq!(r.dual, dual);
        assert_eq!((r.value_scale.clone(), r.dual_scale.clone()), (int(1), int(1)));
    }

    #[test]
    fn rescale_affine() {
        let grid = RegularGrid::new(int(0), int(1), 4).unwrap();
        let f = FunctionSpec::new(grid, vec![int(0), int(1), int(2), int(3)]).unwrap();
        let dual = regular_dual_grid((int(1), int(1)), 2).unwrap();
        assert_eq!(rescale_instance(&f, &dual), Err(LftError::ZeroXi));
    }
}
