use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::state::{Amplitude, QState};
use super::{ratio_f64, sample_attempts};
use crate::error::{LftError, Result};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalogConversion {
    /// `(1/sqrt(alpha)) sum_j v_j |j>` with the value register removed.
    pub state: QState,
    /// `(1/K) sum_j (v_j / max|v|)^2`, the per-try success probability.
    pub omega: Rational,
    /// `sqrt(1/omega)` tries with amplitude amplification.
    pub expected_attempts: f64,
    /// Sampled number of plain repeat-until-success tries.
    pub attempts: u64,
}

/// `(1/K) sum_j (v_j / max_l |v_l|)^2`.
pub fn omega(values: &[Rational]) -> Result<Rational> {
    let max = values.iter().map(|v| v.abs()).max().ok_or(LftError::AllZeroValues)?;
    if max.is_zero() {
        return Err(LftError::AllZeroValues);
    }
    let sum = values.iter().fold(Rational::zero(), |acc, v| acc + v * v);
    Ok(sum / (max.clone() * max) / Rational::from_integer(values.len().into()))
}

/// Moves the `fstar` register into the amplitudes.
pub fn digital_to_analog(state: &QState, rng_seed: u64) -> Result<AnalogConversion> {
    digital_to_analog_register(state, "fstar", rng_seed)
}

/// Moves the named value register of a uniform state into the amplitudes.
pub fn digital_to_analog_register(state: &QState, register: &str, rng_seed: u64) -> Result<AnalogConversion> {
    if !state.is_uniform() || state.is_empty() {
        return Err(LftError::MalformedState("expected a uniform superposition".into()));
    }
    let entries = state
        .labels()
        .map(|l| Ok((l.clone(), l.defined_value(register)?.clone())))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<Rational> = entries.iter().map(|(_, v)| v.clone()).collect();
    let omega = omega(&values)?;
    let alpha = values.iter().fold(Rational::zero(), |acc, v| acc + v * v);
    let terms = entries.into_iter().filter(|(_, v)| !v.is_zero()).map(|(mut l, v)| {
        l.remove(&[register]);
        (l, Amplitude::scaled(&v, &alpha))
    });
    let out = QState::from_terms(terms)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let attempts = sample_attempts(&mut rng, std::slice::from_ref(&omega));
    Ok(AnalogConversion { state: out, expected_attempts: (1.0 / ratio_f64(&omega)).sqrt(), omega, attempts })
}
