#![allow(dead_code)]

use std::io::Write;
use std::sync::{Mutex, MutexGuard};

use lftlab::fixtures::{random_convex_quadratic, random_convex_samples};
use lftlab::multi::{quadratic_form, TensorGrid, TensorSamples};
use lftlab::{int, rat, FunctionSpec, Rational, RegularGrid};
use rand::Rng;

static SERIAL: Mutex<()> = Mutex::new(());

/// Holds the suite-wide lock so wall-clock limits measure one criterion at a time.
pub fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

/// Writes straight to the process stdout so the line survives output capture.
pub fn report(id: &str, ok: bool, detail: &str) {
    let line = format!("criterion {id}: {} {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
}

/// Piecewise-linear samples with repeated slopes, or a sampled quadratic.
pub fn random_1d(rng: &mut impl Rng, n: usize) -> FunctionSpec {
    if rng.gen_bool(0.5) {
        random_convex_samples(rng, n)
    } else {
        random_convex_quadratic(rng.gen(), n)
    }
}

/// `x^T A^T A x + b.x` plus a separable piecewise-linear term; jointly convex.
pub fn random_tensor(rng: &mut impl Rng, dims: &[usize]) -> TensorSamples {
    let d = dims.len();
    let gamma = rat(1, rng.gen_range(1..=4));
    let axes: Vec<RegularGrid> = dims
        .iter()
        .map(|&n| RegularGrid::new(rat(rng.gen_range(-4..=4), 2), gamma.clone(), n).unwrap())
        .collect();
    let a: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    let q: Vec<Vec<Rational>> = (0..d)
        .map(|r| (0..d).map(|c| int((0..d).map(|k| a[k][r] * a[k][c]).sum())).collect())
        .collect();
    let b: Vec<Rational> = (0..d).map(|_| rat(rng.gen_range(-8..=8), 4)).collect();
    let grid = TensorGrid::new(axes.clone()).unwrap();
    let base = quadratic_form(grid.clone(), &q, &b);
    let terms: Vec<FunctionSpec> = dims.iter().map(|&n| random_convex_samples(rng, n)).collect();
    let shape = grid.shape();
    let values = (0..shape.size())
        .map(|p| {
            let idx = shape.unflat(p);
            idx.iter().enumerate().fold(base.values()[p].clone(), |v, (ax, &i)| v + terms[ax].sample(i))
        })
        .collect();
    TensorSamples::new(grid, values).unwrap()
}
