//! The three worked examples on the grid {0, 1/4, 1/2, 3/4, 1}, their continuous
//! conjugates, and seeded random convex instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::function::FunctionSpec;
use crate::grid::RegularGrid;
use crate::scalar::{int, rat, Rational};

/// Lipschitz constant of `x^2 - 3x/4 + 1/2` on [0, 1].
pub fn ex1_lipschitz() -> Rational {
    rat(5, 4)
}

pub fn unit_grid(n: usize) -> RegularGrid {
    RegularGrid::new(int(0), rat(1, n as i64 - 1), n).expect("n >= 2")
}

pub fn ex1_function(x: &Rational) -> Rational {
    x * x - rat(3, 4) * x + rat(1, 2)
}

/// `x^2 - 3x/4 + 1/2` sampled at `n` equispaced points of [0, 1].
pub fn quadratic_ex1(n: usize) -> FunctionSpec {
    FunctionSpec::from_fn(unit_grid(n), ex1_function).with_closed_form("quadratic-ex1")
}

pub fn ex1() -> FunctionSpec {
    quadratic_ex1(5)
}

pub fn ex2() -> FunctionSpec {
    FunctionSpec::new(unit_grid(5), vec![int(0), int(0), rat(1, 16), rat(3, 16), rat(6, 16)])
        .expect("5 samples")
        .with_closed_form("pwl-ex2")
}

pub fn ex3() -> FunctionSpec {
    FunctionSpec::new(unit_grid(5), vec![int(0), int(0), rat(1, 8), rat(1, 4), rat(1, 2)])
        .expect("5 samples")
        .with_closed_form("pwl-ex3")
}

/// Continuous conjugate of [`ex1_function`] restricted to [0, 1].
pub fn ex1_conjugate(s: &Rational) -> Rational {
    if *s < rat(-3, 4) {
        rat(-1, 2)
    } else if *s > rat(5, 4) {
        s - rat(3, 4)
    } else {
        s * s / int(4) + rat(3, 8) * s - rat(23, 64)
    }
}

/// Continuous conjugate of the piecewise-linear interpolant of [`ex2`].
pub fn ex2_conjugate(s: &Rational) -> Rational {
    if *s <= int(0) {
        int(0)
    } else if *s <= rat(1, 4) {
        s / int(4)
    } else if *s <= rat(1, 2) {
        s / int(2) - rat(1, 16)
    } else if *s <= rat(3, 4) {
        rat(3, 4) * s - rat(3, 16)
    } else {
        s - rat(6, 16)
    }
}

/// Continuous conjugate of the piecewise-linear interpolant of [`ex3`].
pub fn ex3_conjugate(s: &Rational) -> Rational {
    if *s <= int(0) {
        int(0)
    } else if *s <= rat(1, 2) {
        s / int(4)
    } else if *s <= int(1) {
        rat(3, 4) * s - rat(1, 4)
    } else {
        s - rat(1, 2)
    }
}

/// Coefficients of `a x^2 + b x + c` with `a > 0`, all small dyadic rationals.
pub fn random_quadratic(rng: &mut impl Rng) -> [Rational; 3] {
    [
        rat(rng.gen_range(1..=16), 4),
        rat(rng.gen_range(-16..=16), 4),
        rat(rng.gen_range(-8..=8), 8),
    ]
}

/// A convex quadratic on a seeded random regular grid with `n` points.
pub fn random_convex_quadratic(seed: u64, n: usize) -> FunctionSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [a, b, c] = random_quadratic(&mut rng);
    let x0 = rat(rng.gen_range(-8..=8), 4);
    let gamma = rat(1, rng.gen_range(1..=8));
    let grid = RegularGrid::new(x0, gamma, n).expect("positive spacing");
    FunctionSpec::from_fn(grid, |x| a.clone() * x * x + b.clone() * x + c.clone())
        .with_closed_form("random-convex-quadratic")
}

/// Random convex piecewise-linear-plus-quadratic samples built from sorted slopes.
pub fn random_convex_samples(rng: &mut impl Rng, n: usize) -> FunctionSpec {
    let mut slopes: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-20..=20)).collect();
    slopes.sort_unstable();
    let gamma = rat(1, rng.gen_range(1..=6));
    let x0 = rat(rng.gen_range(-6..=6), 3);
    let mut v = rat(rng.gen_range(-10..=10), 4);
    let mut samples = vec![v.clone()];
    for c in &slopes {
        v += rat(*c, 4) * gamma.clone();
        samples.push(v.clone());
    }
    let grid = RegularGrid::new(x0, gamma, n).expect("positive spacing");
    FunctionSpec::new(grid, samples).expect("matching length")
}
