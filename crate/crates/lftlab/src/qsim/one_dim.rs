use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::state::{Amplitude, BasisLabel, QState, Register, StepRecord, Word};
use super::{sample_attempts, SimRun, SizePolicy};
use crate::error::{LftError, Result};
use crate::function::FunctionSpec;
use crate::grid::{regular_dual_grid, DualGrid};
use crate::lft::assigned_range;
use crate::scalar::{int, Rational};
use crate::witness::expected_aa_repetitions;

fn value_or_undef(v: Option<&Rational>) -> Word {
    v.map_or(Word::Undefined, |v| Word::Value(v.clone()))
}

/// Uniform superposition over `i` with neighbor coordinates and samples.
pub fn prepare_superposition(f: &FunctionSpec, policy: SizePolicy) -> Result<QState> {
    policy.check(f.n())?;
    f.check_convex()?;
    let n = f.n();
    let xs = f.grid().points();
    let labels = (0..n)
        .map(|i| {
            let prev = i.checked_sub(1);
            let next = (i + 1 < n).then_some(i + 1);
            BasisLabel::new(vec![
                Register::new("i", Word::Index(i)),
                Register::new("x_prev", value_or_undef(prev.map(|p| &xs[p]))),
                Register::new("x", Word::Value(xs[i].clone())),
                Register::new("x_next", value_or_undef(next.map(|p| &xs[p]))),
                Register::new("f_prev", value_or_undef(prev.map(|p| f.sample(p)))),
                Register::new("f", Word::Value(f.sample(i).clone())),
                Register::new("f_next", value_or_undef(next.map(|p| f.sample(p)))),
            ])
        })
        .collect();
    QState::uniform(labels)
}

fn slope(x0: Option<&Rational>, f0: Option<&Rational>, x1: Option<&Rational>, f1: Option<&Rational>) -> Word {
    match (x0, f0, x1, f1) {
        (Some(x0), Some(f0), Some(x1), Some(f1)) => Word::Value((f1 - f0) / (x1 - x0)),
        _ => Word::Undefined,
    }
}

/// Adds `c_prev = c_{i-1}` and `c = c_i`; undefined at the boundary.
pub fn attach_gradients(state: &QState) -> Result<QState> {
    let terms = state
        .iter()
        .map(|(label, amp)| {
            let x = label.value("x")?;
            let f = label.value("f")?;
            let c_prev = slope(label.value("x_prev")?, label.value("f_prev")?, x, f);
            let c = slope(x, f, label.value("x_next")?, label.value("f_next")?);
            let mut l = label.clone();
            l.push("c_prev", c_prev);
            l.push("c", c);
            Ok((l, amp.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    QState::from_terms(terms)
}

/// Dual indices assigned to the label's `i`, from its own registers.
fn label_range(label: &BasisLabel, n: usize, dual: &DualGrid, pin: bool) -> Result<std::ops::Range<usize>> {
    let i = label.index("i")?;
    let zero = Rational::zero();
    let c_prev = label.value("c_prev")?.unwrap_or(&zero).clone();
    let c = label.value("c")?.unwrap_or(&zero).clone();
    if (i > 0 && label.value("c_prev")?.is_none()) || (i + 1 < n && label.value("c")?.is_none()) {
        return Err(LftError::MalformedState("c".into()));
    }
    Ok(assigned_range(i, n, &c_prev, &c, dual, pin))
}

/// Outcome of the indicator measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelection {
    pub w: usize,
    /// `K / (n W)`, exact.
    pub success_probability: Rational,
    /// Geometric number of tries until the indicator reads 1.
    pub attempts: u64,
    /// The `n W`-label state before measurement.
    pub expanded: QState,
}

/// Expands over `m < W`, computes the flag `(i, m) in A` and `j(i, m)`, measures
/// the flag, and relabels the accepted branch by `j`.
///
/// `n` and `c_{n-2}` are read off the state; `W` is the largest assigned range.
pub fn indicator_postselect(state: &QState, dual: &DualGrid, rng_seed: u64) -> Result<(QState, PostSelection)> {
    let n = state.len();
    let last = state
        .labels()
        .find(|l| l.index("i").ok() == Some(n - 1))
        .ok_or_else(|| LftError::MalformedState("i".into()))?;
    let c_last = last.defined_value("c_prev")?.clone();
    let pin = dual.len() >= 2 && dual.last() >= c_last;
    let ranges: Vec<_> = state.labels().map(|l| label_range(l, n, dual, pin)).collect::<Result<_>>()?;
    let w = ranges.iter().map(|r| r.len()).max().unwrap_or(0).max(1);
    let weight = Rational::new(1.into(), (n * w).into());
    let mut expanded = Vec::with_capacity(n * w);
    let mut accepted = Vec::new();
    for (label, range) in state.labels().zip(&ranges) {
        for m in 0..w {
            let j = (m < range.len()).then(|| range.start + m);
            let mut l = label.clone();
            l.push("m", Word::Index(m));
            l.push("flag", Word::Flag(j.is_some()));
            l.push("j", j.map_or(Word::Undefined, Word::Index));
            if let Some(j) = j {
                accepted.push((j, l.clone()));
            }
            expanded.push((l, Amplitude::positive(weight.clone())));
        }
    }
    if accepted.is_empty() {
        return Err(LftError::EmptyAcceptance);
    }
    let expanded = QState::from_terms(expanded)?;
    let k = accepted.len();
    let success_probability = Rational::new(k.into(), (n * w).into());
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let attempts = sample_attempts(&mut rng, std::slice::from_ref(&success_probability));
    let post = accepted.into_iter().map(|(j, l)| {
        let mut out = BasisLabel::new(vec![
            Register::new("j", Word::Index(j)),
            Register::new("x_star", l.word("x").cloned().unwrap_or(Word::Undefined)),
            Register::new("f_x_star", l.word("f").cloned().unwrap_or(Word::Undefined)),
        ]);
        out.push_garbage("m", l.word("m").cloned().unwrap_or(Word::Undefined));
        out.push_garbage("i", l.word("i").cloned().unwrap_or(Word::Undefined));
        out
    });
    let post = QState::uniform(post.collect())?;
    Ok((post, PostSelection { w, success_probability, attempts, expanded }))
}

/// Writes `f*(s_j) = s_j x* - f(x*)`, uncomputes `f(x*)` and moves `x*` to garbage.
pub fn finalize_conjugate(state: &QState, dual: &DualGrid) -> Result<QState> {
    let terms = state
        .iter()
        .map(|(label, amp)| {
            let j = label.index("j")?;
            let x = label.defined_value("x_star")?;
            let fx = label.defined_value("f_x_star")?;
            let mut out = BasisLabel::new(vec![
                Register::new("j", Word::Index(j)),
                Register::new("fstar", Word::Value(dual.point(j) * x - fx)),
            ]);
            out.push_garbage("x_star", Word::Value(x.clone()));
            out.garbage.extend(label.garbage.iter().cloned());
            Ok((out, amp.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    QState::from_terms(terms)
}

/// Dual grid spanning `[c_0, c_{n-2}]` from the two boundary gradients.
pub fn spanning_dual(f: &FunctionSpec, k: usize) -> Result<DualGrid> {
    let n = f.n();
    if n < 3 {
        return Err(LftError::DegenerateGrid { n, min: 3 });
    }
    let g = f.grid().gamma_x();
    let c0 = (f.sample(1).clone() - f.sample(0).clone()) / g;
    let cl = (f.sample(n - 1).clone() - f.sample(n - 2).clone()) / g;
    regular_dual_grid((c0, cl), k)
}

/// Regular-grid algorithm end to end.
pub fn run_qlft_1d_regular(f: &FunctionSpec, k: usize, rng_seed: u64, policy: SizePolicy) -> Result<SimRun> {
    policy.check(k)?;
    let dual = spanning_dual(f, k)?;
    let s0 = prepare_superposition(f, policy)?;
    let s1 = attach_gradients(&s0)?;
    let (s2, post) = indicator_postselect(&s1, &dual, rng_seed)?;
    let s3 = finalize_conjugate(&s2, &dual)?;
    let p = post.success_probability.clone();
    let step_trace = vec![
        StepRecord::of("prepare_superposition", &s0, None),
        StepRecord::of("attach_gradients", &s1, None),
        StepRecord::of("expand_indicator", &post.expanded, None),
        StepRecord::of("postselect", &s2, Some(p.clone())),
        StepRecord::of("finalize_conjugate", &s3, None),
    ];
    Ok(SimRun {
        final_state: s3,
        success_probability: p.clone(),
        attempts: post.attempts,
        expected_aa_repetitions: expected_aa_repetitions(num_traits::ToPrimitive::to_f64(&p).unwrap_or(0.0)),
        rng_seed,
        step_trace,
        pass_acceptance: vec![p],
        pass_w: vec![post.w],
        dual: vec![dual],
        verification: None,
    })
}

/// Adaptive algorithm: every label computes its own centered dual point; no
/// measurement and no garbage.
pub fn run_qlft_1d_adaptive(f: &FunctionSpec, policy: SizePolicy) -> Result<SimRun> {
    let s0 = prepare_superposition(f, policy)?;
    let s1 = attach_gradients(&s0)?;
    let with_s = s1
        .iter()
        .map(|(label, amp)| {
            let c_prev = label.value("c_prev")?;
            let c = label.value("c")?;
            let s = match (c_prev, c) {
                (Some(a), Some(b)) => (a + b) / int(2),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => return Err(LftError::MalformedState("c".into())),
            };
            let mut l = label.clone();
            l.push("s", Word::Value(s));
            Ok((l, amp.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let s2 = QState::from_terms(with_s)?;
    let finished = s2
        .iter()
        .map(|(label, amp)| {
            let x = label.defined_value("x")?;
            let s = label.defined_value("s")?;
            let fx = label.defined_value("f")?;
            let out = BasisLabel::new(vec![
                Register::new("i", Word::Index(label.index("i")?)),
                Register::new("x", Word::Value(x.clone())),
                Register::new("s", Word::Value(s.clone())),
                Register::new("fstar", Word::Value(s * x - fx)),
            ]);
            Ok((out, amp.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let s3 = QState::from_terms(finished)?;
    let one = int(1);
    let points = s3.labels().map(|l| l.defined_value("s").cloned()).collect::<Result<Vec<_>>>()?;
    Ok(SimRun {
        step_trace: vec![
            StepRecord::of("prepare_superposition", &s0, None),
            StepRecord::of("attach_gradients", &s1, None),
            StepRecord::of("adaptive_dual_point", &s2, None),
            StepRecord::of("finalize_conjugate", &s3, Some(one.clone())),
        ],
        final_state: s3,
        success_probability: one.clone(),
        attempts: 1,
        expected_aa_repetitions: 1,
        rng_seed: 0,
        pass_acceptance: vec![one],
        pass_w: vec![1],
        dual: vec![DualGrid::explicit(points)?],
        verification: None,
    })
}
