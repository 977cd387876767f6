//! Register-level simulation of the quantum transform algorithms.
//!
//! States are sparse maps from labeled basis states to exact amplitudes; every
//! step returns a new state. Data registers hold exact rationals. Post-selection
//! keeps the accepted branch deterministically and samples only the number of
//! tries, so the final state never depends on the seed.

mod analog;
mod multi_dim;
mod one_dim;
mod state;

pub use analog::{digital_to_analog, digital_to_analog_register, omega, AnalogConversion};
pub use multi_dim::{run_qlft_nd_adaptive, run_qlft_nd_regular, MismatchEntry, VerificationReport, VerificationStatus};
pub use one_dim::{
    attach_gradients, finalize_conjugate, indicator_postselect, prepare_superposition, run_qlft_1d_adaptive,
    run_qlft_1d_regular, spanning_dual, PostSelection,
};
pub use state::{trace_to_jsonl, Amplitude, BasisLabel, QState, Register, StepRecord, Word};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{LftError, Result};
use crate::grid::DualGrid;
use crate::scalar::{format_rational, Rational};

/// How register sizes that are not powers of two are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SizePolicy {
    /// Reject with `NotPowerOfTwo`.
    #[default]
    Strict,
    /// Embed the points in an index register of `ceil(log2 n)` qubits; unused
    /// basis states carry zero amplitude.
    Embed,
}

impl SizePolicy {
    pub fn check(self, n: usize) -> Result<()> {
        match self {
            SizePolicy::Strict if !n.is_power_of_two() => Err(LftError::NotPowerOfTwo(n)),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRun {
    pub final_state: QState,
    /// Probability that one full run is accepted.
    pub success_probability: Rational,
    /// Sampled number of full runs until acceptance; 0 when acceptance is impossible.
    pub attempts: u64,
    /// `ceil((pi/4) sqrt(1/p))` rounds of amplitude amplification.
    pub expected_aa_repetitions: u64,
    pub rng_seed: u64,
    pub step_trace: Vec<StepRecord>,
    /// Acceptance probability of each post-selection, in execution order.
    pub pass_acceptance: Vec<Rational>,
    /// Size of the `m` register of each pass.
    pub pass_w: Vec<usize>,
    /// Dual grid of each axis (one entry in 1D).
    pub dual: Vec<DualGrid>,
    pub verification: Option<VerificationReport>,
}

impl SimRun {
    /// `(j, f*)` pairs of a 1D run sorted by `j` (or `i` for adaptive runs).
    pub fn values(&self) -> Result<Vec<(usize, Rational)>> {
        let mut out = self
            .final_state
            .labels()
            .map(|l| {
                let idx = l.index("j").or_else(|_| l.index("i"))?;
                Ok((idx, l.defined_value("fstar")?.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort_by_key(|(j, _)| *j);
        Ok(out)
    }

    /// The run a different seed would produce. Only the attempt count depends
    /// on the seed, so this redraws it instead of re-simulating.
    pub fn reseeded(&self, rng_seed: u64) -> SimRun {
        let mut run = self.clone();
        run.rng_seed = rng_seed;
        run.attempts = sample_attempts(&mut ChaCha8Rng::seed_from_u64(rng_seed), &self.pass_acceptance);
        if let Some(v) = run.verification.as_mut() {
            if self.verification.as_ref().is_some_and(|v| v.rng_seed == self.rng_seed) {
                v.rng_seed = rng_seed;
            }
        }
        run
    }

    /// Line-delimited JSON transcript of the step summaries.
    pub fn transcript(&self) -> String {
        trace_to_jsonl(&self.step_trace)
    }

    /// Serializable summary without the state itself.
    pub fn summary(&self) -> RunSummary {
        RunSummary {
            rng_seed: self.rng_seed,
            success_probability: format_rational(&self.success_probability),
            attempts: self.attempts,
            expected_aa_repetitions: self.expected_aa_repetitions,
            pass_acceptance: self.pass_acceptance.iter().map(format_rational).collect(),
            pass_w: self.pass_w.clone(),
            final_labels: self.final_state.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub rng_seed: u64,
    pub success_probability: String,
    pub attempts: u64,
    pub expected_aa_repetitions: u64,
    pub pass_acceptance: Vec<String>,
    pub pass_w: Vec<usize>,
    pub final_labels: usize,
}

/// Exact Bernoulli draw: a 53-bit uniform `u` succeeds iff `u < p 2^53`.
pub(crate) fn bernoulli(rng: &mut impl RngCore, p: &Rational) -> bool {
    let u = Rational::from_integer(BigInt::from(rng.next_u64() >> 11));
    u < p * Rational::from_integer(BigInt::from(1u64 << 53))
}

/// Full runs until every pass accepts in one go; a failed pass restarts the run.
pub(crate) fn sample_attempts(rng: &mut impl RngCore, passes: &[Rational]) -> u64 {
    if passes.iter().any(|p| p.is_zero()) {
        return 0;
    }
    let mut attempts = 0;
    loop {
        attempts += 1;
        if passes.iter().all(|p| bernoulli(rng, p)) {
            return attempts;
        }
    }
}

pub(crate) fn ratio_f64(p: &Rational) -> f64 {
    p.to_f64().unwrap_or(f64::NAN)
}
