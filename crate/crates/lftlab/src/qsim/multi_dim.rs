//! Nested passes over the axes, last axis first.
//!
//! Each label carries the `3^(l+1)` stencil of current values around its point
//! over the axes not yet transformed. A pass along axis `l` computes, for every
//! in-range neighbor row, the dual indices assigned to the label's coordinate,
//! accepts `(label, m)` when `m` is assigned on every such row, and takes `j`
//! from the center row. All rows are then updated with the center row's
//! optimizer. That update is exact when rows share optimizers (separable input)
//! and is otherwise the subject of the verification report.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::state::{ser_opt_rational, ser_rational, Amplitude, BasisLabel, QState, Register, StepRecord, Word};
use super::{ratio_f64, sample_attempts, SimRun, SizePolicy};
use crate::error::{LftError, Result};
use crate::grid::DualGrid;
use crate::lft::assigned_range;
use crate::multi::{check_convex, lft_nd_adaptive, lft_nd_brute, lft_nd_regular, shared_dual_grids, Shape, TensorGrid, TensorSamples};
use crate::scalar::{int, Rational};
use crate::witness::expected_aa_repetitions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum VerificationStatus {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MismatchEntry {
    pub index: Vec<usize>,
    #[serde(serialize_with = "ser_rational")]
    pub observed: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub expected: Rational,
}

/// Comparison of the final labels with the classical reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub status: VerificationStatus,
    pub rng_seed: u64,
    pub expected_labels: usize,
    pub observed_labels: usize,
    /// Reference indices absent from the final state.
    pub missing_labels: Vec<Vec<usize>>,
    pub value_mismatches: Vec<MismatchEntry>,
    /// Labels whose dual point differs from the reference (adaptive runs).
    pub dual_mismatches: usize,
    /// Labels whose value is the exact conjugate at the label's own dual point.
    pub exact_pairs: usize,
    #[serde(serialize_with = "ser_opt_rational")]
    pub max_abs_error: Option<Rational>,
}

impl VerificationReport {
    pub fn is_match(&self) -> bool {
        self.status == VerificationStatus::Match
    }
}

fn offsets(m: usize) -> Vec<Vec<i64>> {
    (0..3usize.pow(m as u32))
        .map(|mut code| {
            let mut o = vec![0; m];
            for slot in o.iter_mut().rev() {
                *slot = (code % 3) as i64 - 1;
                code /= 3;
            }
            o
        })
        .collect()
}

fn hname(o: &[i64]) -> String {
    let parts: Vec<String> = o.iter().map(|v| v.to_string()).collect();
    format!("h({})", parts.join(","))
}

fn shifted(idx: &[usize], o: &[i64], dims: &[usize]) -> Option<Vec<usize>> {
    idx.iter()
        .zip(o)
        .zip(dims)
        .map(|((&i, &d), &n)| {
            let t = i as i64 + d;
            (t >= 0 && t < n as i64).then_some(t as usize)
        })
        .collect()
}

fn prepare(f: &TensorSamples, policy: SizePolicy) -> Result<(QState, TensorGrid)> {
    let grid = f.grid().ok_or(LftError::NotPrimalAxis(0))?;
    let shape = f.shape();
    for &n in shape.dims() {
        policy.check(n)?;
    }
    check_convex(f)?;
    let d = f.d();
    let offs = offsets(d);
    let labels = (0..f.len())
        .map(|p| {
            let idx = shape.unflat(p);
            let mut l = BasisLabel::new((0..d).map(|a| Register::new(format!("i{a}"), Word::Index(idx[a]))).collect());
            for o in &offs {
                let w = shifted(&idx, o, shape.dims()).map_or(Word::Undefined, |q| Word::Value(f.value(&q).clone()));
                l.push(hname(o), w);
            }
            l
        })
        .collect();
    Ok((QState::uniform(labels)?, grid))
}

struct RowGradients {
    in_range: bool,
    c_prev: Option<Rational>,
    c: Option<Rational>,
}

/// Gradients along `axis` of every stencil row of one label.
fn row_gradients(label: &BasisLabel, axis: usize, dims: &[usize], gamma: &Rational) -> Result<Vec<(Vec<i64>, RowGradients)>> {
    let idx: Vec<usize> = (0..axis).map(|a| label.index(&format!("i{a}"))).collect::<Result<_>>()?;
    offsets(axis)
        .into_iter()
        .map(|r| {
            let in_range = shifted(&idx, &r, &dims[..axis]).is_some();
            let at = |t: i64| -> Result<Option<Rational>> {
                let mut o = r.clone();
                o.push(t);
                Ok(label.value(&hname(&o))?.cloned())
            };
            let (a, b, c) = (at(-1)?, at(0)?, at(1)?);
            let slope = |u: &Option<Rational>, v: &Option<Rational>| match (u, v) {
                (Some(u), Some(v)) => Some((v - u) / gamma),
                _ => None,
            };
            let g = RowGradients { in_range, c_prev: slope(&a, &b), c: slope(&b, &c) };
            Ok((r, g))
        })
        .collect()
}

fn range_of(g: &RowGradients, i: usize, n: usize, dual: &DualGrid) -> std::ops::Range<usize> {
    let zero = Rational::zero();
    assigned_range(i, n, g.c_prev.as_ref().unwrap_or(&zero), g.c.as_ref().unwrap_or(&zero), dual, dual.len() >= 2)
}

struct PassOutcome {
    state: QState,
    expanded: QState,
    acceptance: Rational,
    w: usize,
}

fn regular_pass(state: &QState, axis: usize, dims: &[usize], grid: &TensorGrid, dual: &DualGrid) -> Result<PassOutcome> {
    let gamma = grid.axes()[axis].gamma_x().clone();
    let n = dims[axis];
    let mut per_label = Vec::with_capacity(state.len());
    for label in state.labels() {
        let i = label.index(&format!("i{axis}"))?;
        let rows = row_gradients(label, axis, dims, &gamma)?;
        let ranges: Vec<_> = rows.iter().map(|(r, g)| (r.clone(), g.in_range, range_of(g, i, n, dual))).collect();
        per_label.push((label, i, ranges));
    }
    let center = vec![0; axis];
    let w = per_label
        .iter()
        .map(|(_, _, rs)| rs.iter().find(|(r, _, _)| *r == center).map_or(0, |(_, _, g)| g.len()))
        .max()
        .unwrap_or(0)
        .max(1);
    let weight = Rational::new(1.into(), (state.len() * w).into());
    let mut expanded = Vec::with_capacity(state.len() * w);
    let mut accepted = Vec::new();
    for (label, i, ranges) in &per_label {
        let center_range = &ranges.iter().find(|(r, _, _)| *r == center).expect("center row").2;
        for m in 0..w {
            let flag = ranges.iter().filter(|(_, ok, _)| *ok).all(|(_, _, g)| m < g.len());
            let j = flag.then(|| center_range.start + m);
            let mut l = (*label).clone();
            l.push(format!("m{axis}"), Word::Index(m));
            l.push("flag", Word::Flag(flag));
            l.push(format!("j{axis}"), j.map_or(Word::Undefined, Word::Index));
            expanded.push((l, Amplitude::positive(weight.clone())));
            if let Some(j) = j {
                accepted.push(relabel(label, axis, *i, m, j, grid, dual)?);
            }
        }
    }
    let acceptance = Rational::new(accepted.len().into(), (state.len() * w).into());
    let state = if accepted.is_empty() { QState::default() } else { QState::uniform(accepted)? };
    Ok(PassOutcome { state, expanded: QState::from_terms(expanded)?, acceptance, w })
}

/// Label after a pass: `i_axis -> j_axis`, stencil shrunk by one axis with
/// `h(r) <- h(r, 0) - s_j x_i`.
fn relabel(label: &BasisLabel, axis: usize, i: usize, m: usize, j: usize, grid: &TensorGrid, dual: &DualGrid) -> Result<BasisLabel> {
    let d = grid.d();
    let x = grid.axes()[axis].point(i);
    let s = dual.point(j);
    let mut regs = Vec::new();
    for a in 0..axis {
        regs.push(Register::new(format!("i{a}"), Word::Index(label.index(&format!("i{a}"))?)));
    }
    regs.push(Register::new(format!("j{axis}"), Word::Index(j)));
    for a in axis + 1..d {
        regs.push(Register::new(format!("j{a}"), Word::Index(label.index(&format!("j{a}"))?)));
    }
    let mut out = BasisLabel::new(regs);
    if axis == 0 {
        let h = label.defined_value(&hname(&[0]))?;
        out.push("fstar", Word::Value(s.clone() * &x - h));
    } else {
        for r in offsets(axis) {
            let mut o = r.clone();
            o.push(0);
            let w = match label.value(&hname(&o))? {
                Some(h) => Word::Value(h - s.clone() * &x),
                None => Word::Undefined,
            };
            out.push(hname(&r), w);
        }
    }
    out.garbage = label.garbage.clone();
    out.push_garbage(format!("x_star{axis}"), Word::Value(x));
    out.push_garbage(format!("m{axis}"), Word::Index(m));
    out.push_garbage(format!("i{axis}"), Word::Index(i));
    Ok(out)
}

fn final_values(state: &QState, d: usize, prefix: char) -> Result<BTreeMap<Vec<usize>, (BasisLabel, Rational)>> {
    state
        .labels()
        .map(|l| {
            let idx = (0..d).map(|a| l.index(&format!("{prefix}{a}"))).collect::<Result<Vec<_>>>()?;
            Ok((idx, (l.clone(), l.defined_value("fstar")?.clone())))
        })
        .collect()
}

fn abs_max(a: Option<Rational>, b: Rational) -> Option<Rational> {
    let b = b.abs();
    Some(match a {
        Some(a) if a >= b => a,
        _ => b,
    })
}

/// Regular-grid nested algorithm with per-pass post-selection; the result is
/// checked against the classical nested transform.
pub fn run_qlft_nd_regular(f: &TensorSamples, ks: &[usize], rng_seed: u64, policy: SizePolicy) -> Result<SimRun> {
    for &k in ks {
        policy.check(k)?;
    }
    let duals = shared_dual_grids(f, ks)?;
    let (s0, grid) = prepare(f, policy)?;
    let dims = f.shape().dims().to_vec();
    let d = f.d();
    let mut trace = vec![StepRecord::of("prepare_superposition", &s0, None)];
    let mut state = s0;
    let mut pass_acceptance = Vec::new();
    let mut pass_w = Vec::new();
    for axis in (0..d).rev() {
        let out = regular_pass(&state, axis, &dims, &grid, &duals[axis])?;
        trace.push(StepRecord::of(format!("expand_indicator_axis{axis}"), &out.expanded, None));
        trace.push(StepRecord::of(format!("postselect_axis{axis}"), &out.state, Some(out.acceptance.clone())));
        pass_acceptance.push(out.acceptance);
        pass_w.push(out.w);
        state = out.state;
        if state.is_empty() {
            break;
        }
    }
    let success_probability = if pass_acceptance.len() == d {
        pass_acceptance.iter().fold(int(1), |a, p| a * p)
    } else {
        Rational::zero()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let attempts = sample_attempts(&mut rng, &pass_acceptance);
    let verification = verify_regular(f, &duals, &state, rng_seed)?;
    let p = ratio_f64(&success_probability);
    Ok(SimRun {
        final_state: state,
        expected_aa_repetitions: if p > 0.0 { expected_aa_repetitions(p) } else { 0 },
        success_probability,
        attempts,
        rng_seed,
        step_trace: trace,
        pass_acceptance,
        pass_w,
        dual: duals,
        verification: Some(verification),
    })
}

fn verify_regular(f: &TensorSamples, duals: &[DualGrid], state: &QState, rng_seed: u64) -> Result<VerificationReport> {
    let oracle = lft_nd_regular(f, duals)?;
    let shape = Shape::new(duals.iter().map(DualGrid::len).collect());
    let observed = final_values(state, f.d(), 'j')?;
    let mut missing = Vec::new();
    let mut mismatches = Vec::new();
    let mut max_err = None;
    let mut exact = 0;
    for (q, expected) in oracle.values.iter().enumerate() {
        let idx = shape.unflat(q);
        match observed.get(&idx) {
            None => missing.push(idx),
            Some((_, v)) if v == expected => exact += 1,
            Some((_, v)) => {
                max_err = abs_max(max_err, v - expected);
                mismatches.push(MismatchEntry { index: idx, observed: v.clone(), expected: expected.clone() });
            }
        }
    }
    let ok = missing.is_empty() && mismatches.is_empty() && observed.len() == oracle.values.len();
    Ok(VerificationReport {
        status: if ok { VerificationStatus::Match } else { VerificationStatus::Mismatch },
        rng_seed,
        expected_labels: oracle.values.len(),
        observed_labels: observed.len(),
        missing_labels: missing,
        value_mismatches: mismatches,
        dual_mismatches: 0,
        exact_pairs: exact,
        max_abs_error: max_err,
    })
}

/// Adaptive nested algorithm: every label takes the centered slope of its own
/// center row as dual coordinate. Deterministic, no garbage.
pub fn run_qlft_nd_adaptive(f: &TensorSamples, policy: SizePolicy) -> Result<SimRun> {
    let (s0, grid) = prepare(f, policy)?;
    let dims = f.shape().dims().to_vec();
    let d = f.d();
    let mut trace = vec![StepRecord::of("prepare_superposition", &s0, None)];
    let mut state = s0;
    for axis in (0..d).rev() {
        let gamma = grid.axes()[axis].gamma_x().clone();
        let terms = state
            .iter()
            .map(|(label, amp)| {
                let i = label.index(&format!("i{axis}"))?;
                let rows = row_gradients(label, axis, &dims, &gamma)?;
                let center = &rows.iter().find(|(r, _)| r.iter().all(|&v| v == 0)).expect("center row").1;
                let s = match (&center.c_prev, &center.c) {
                    (Some(a), Some(b)) => (a + b) / int(2),
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => Rational::zero(),
                };
                let x = grid.axes()[axis].point(i);
                let mut regs = (0..d)
                    .map(|a| Ok(Register::new(format!("i{a}"), Word::Index(label.index(&format!("i{a}"))?))))
                    .collect::<Result<Vec<_>>>()?;
                for a in axis + 1..d {
                    regs.push(Register::new(format!("s{a}"), label.word(&format!("s{a}"))?.clone()));
                }
                regs.insert(d, Register::new(format!("s{axis}"), Word::Value(s.clone())));
                let mut out = BasisLabel::new(regs);
                if axis == 0 {
                    out.push("fstar", Word::Value(s * &x - label.defined_value(&hname(&[0]))?));
                } else {
                    for r in offsets(axis) {
                        let mut o = r.clone();
                        o.push(0);
                        let w = label.value(&hname(&o))?.map_or(Word::Undefined, |h| Word::Value(h - s.clone() * &x));
                        out.push(hname(&r), w);
                    }
                }
                Ok((out, amp.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        state = QState::from_terms(terms)?;
        trace.push(StepRecord::of(format!("adaptive_axis{axis}"), &state, Some(int(1))));
    }
    let verification = verify_adaptive(f, &state)?;
    Ok(SimRun {
        final_state: state,
        success_probability: int(1),
        attempts: 1,
        expected_aa_repetitions: 1,
        rng_seed: 0,
        step_trace: trace,
        pass_acceptance: vec![int(1); d],
        pass_w: vec![1; d],
        dual: Vec::new(),
        verification: Some(verification),
    })
}

fn verify_adaptive(f: &TensorSamples, state: &QState) -> Result<VerificationReport> {
    let d = f.d();
    let reference = lft_nd_adaptive(f)?;
    let shape = f.shape();
    let observed = final_values(state, d, 'i')?;
    let mut missing = Vec::new();
    let mut mismatches = Vec::new();
    let mut dual_mismatches = 0;
    let mut max_err = None;
    let mut points = Vec::new();
    let mut got = Vec::new();
    for (p, expected) in reference.values.iter().enumerate() {
        let idx = shape.unflat(p);
        let Some((label, v)) = observed.get(&idx) else {
            missing.push(idx);
            continue;
        };
        let s: Vec<Rational> = (0..d).map(|a| label.defined_value(&format!("s{a}")).cloned()).collect::<Result<_>>()?;
        if s != reference.duals.point(p) {
            dual_mismatches += 1;
        }
        if v != expected {
            max_err = abs_max(max_err, v - expected);
            mismatches.push(MismatchEntry { index: idx, observed: v.clone(), expected: expected.clone() });
        }
        points.push(s);
        got.push(v.clone());
    }
    let truth = lft_nd_brute(f, &points)?;
    let exact_pairs = truth.values.iter().zip(&got).filter(|(a, b)| a == b).count();
    let ok = missing.is_empty() && mismatches.is_empty() && dual_mismatches == 0;
    Ok(VerificationReport {
        status: if ok { VerificationStatus::Match } else { VerificationStatus::Mismatch },
        rng_seed: 0,
        expected_labels: reference.values.len(),
        observed_labels: observed.len(),
        missing_labels: missing,
        value_mismatches: mismatches,
        dual_mismatches,
        exact_pairs,
        max_abs_error: max_err,
    })
}
