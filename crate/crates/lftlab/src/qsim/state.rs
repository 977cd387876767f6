use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{LftError, Result};
use crate::scalar::{format_rational, Rational};

/// Content of one register.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Word {
    Index(usize),
    Value(Rational),
    Flag(bool),
    /// Boundary sentinel; arithmetic on it is an error.
    Undefined,
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Index(i) => write!(f, "{i}"),
            Word::Value(v) => write!(f, "{}", format_rational(v)),
            Word::Flag(b) => write!(f, "{}", u8::from(*b)),
            Word::Undefined => write!(f, "undef"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Register {
    pub name: String,
    pub word: Word,
}

impl Register {
    pub fn new(name: impl Into<String>, word: Word) -> Self {
        Self { name: name.into(), word }
    }
}

/// Named registers in order, with garbage kept apart.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisLabel {
    pub registers: Vec<Register>,
    pub garbage: Vec<Register>,
}

impl BasisLabel {
    pub fn new(registers: Vec<Register>) -> Self {
        Self { registers, garbage: Vec::new() }
    }

    pub fn word(&self, name: &str) -> Result<&Word> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .map(|r| &r.word)
            .ok_or_else(|| LftError::MalformedState(name.to_string()))
    }

    pub fn garbage_word(&self, name: &str) -> Result<&Word> {
        self.garbage
            .iter()
            .find(|r| r.name == name)
            .map(|r| &r.word)
            .ok_or_else(|| LftError::MalformedState(name.to_string()))
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        match self.word(name)? {
            Word::Index(i) => Ok(*i),
            _ => Err(LftError::MalformedState(name.to_string())),
        }
    }

    /// `None` for the undefined sentinel.
    pub fn value(&self, name: &str) -> Result<Option<&Rational>> {
        match self.word(name)? {
            Word::Value(v) => Ok(Some(v)),
            Word::Undefined => Ok(None),
            _ => Err(LftError::MalformedState(name.to_string())),
        }
    }

    pub fn defined_value(&self, name: &str) -> Result<&Rational> {
        self.value(name)?.ok_or_else(|| LftError::MalformedState(name.to_string()))
    }

    pub fn push(&mut self, name: impl Into<String>, word: Word) {
        self.registers.push(Register::new(name, word));
    }

    pub fn push_garbage(&mut self, name: impl Into<String>, word: Word) {
        self.garbage.push(Register::new(name, word));
    }

    /// Drops registers by name, as after uncomputation.
    pub fn remove(&mut self, names: &[&str]) {
        self.registers.retain(|r| !names.contains(&r.name.as_str()));
    }

    pub fn rename(&mut self, from: &str, to: &str) {
        if let Some(r) = self.registers.iter_mut().find(|r| r.name == from) {
            r.name = to.to_string();
        }
    }

    pub fn without_garbage(&self) -> BasisLabel {
        BasisLabel::new(self.registers.clone())
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |rs: &[Register]| rs.iter().map(|r| format!("{}={}", r.name, r.word)).collect::<Vec<_>>().join(",");
        write!(f, "|{}⟩", show(&self.registers))?;
        if !self.garbage.is_empty() {
            write!(f, "|{}⟩", show(&self.garbage))?;
        }
        Ok(())
    }
}

/// A real amplitude stored as its sign and exact square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amplitude {
    pub negative: bool,
    pub squared: Rational,
}

impl Amplitude {
    pub fn positive(squared: Rational) -> Self {
        Self { negative: false, squared }
    }

    /// Amplitude `v / sqrt(alpha)`.
    pub fn scaled(v: &Rational, alpha: &Rational) -> Self {
        Self { negative: v.is_negative(), squared: v * v / alpha }
    }

    pub fn to_f64(&self) -> f64 {
        let m = num_traits::ToPrimitive::to_f64(&self.squared).unwrap_or(f64::NAN).sqrt();
        if self.negative {
            -m
        } else {
            m
        }
    }
}

/// Sparse superposition with unique basis labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QState {
    terms: BTreeMap<BasisLabel, Amplitude>,
}

impl QState {
    pub fn from_terms(terms: impl IntoIterator<Item = (BasisLabel, Amplitude)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (label, amp) in terms {
            let shown = label.to_string();
            if map.insert(label, amp).is_some() {
                return Err(LftError::MalformedState(format!("duplicate label {shown}")));
            }
        }
        Ok(Self { terms: map })
    }

    /// Equal-weight superposition of distinct labels.
    pub fn uniform(labels: Vec<BasisLabel>) -> Result<Self> {
        let w = Rational::new(1.into(), labels.len().into());
        Self::from_terms(labels.into_iter().map(|l| (l, Amplitude::positive(w.clone()))))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &Amplitude)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &BasisLabel> {
        self.terms.keys()
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Option<&Amplitude> {
        self.terms.get(label)
    }

    pub fn norm_squared(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, a| acc + &a.squared)
    }

    pub fn is_normalized(&self) -> bool {
        self.norm_squared().is_one()
    }

    /// Whether every label carries the same squared amplitude.
    pub fn is_uniform(&self) -> bool {
        let mut it = self.terms.values();
        match it.next() {
            Some(first) => it.all(|a| a.squared == first.squared),
            None => true,
        }
    }

    /// Largest number of garbage registers on any label.
    pub fn garbage_registers(&self) -> usize {
        self.terms.keys().map(|l| l.garbage.len()).max().unwrap_or(0)
    }

    /// `(1/sqrt(K)) sum_j |j>|v_j>`.
    pub fn value_encoding(values: &[Rational]) -> Result<Self> {
        Self::uniform(
            values
                .iter()
                .enumerate()
                .map(|(j, v)| BasisLabel::new(vec![Register::new("j", Word::Index(j)), Register::new("fstar", Word::Value(v.clone()))]))
                .collect(),
        )
    }
}

/// Summary of the state after one named step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: String,
    pub label_count: usize,
    #[serde(serialize_with = "ser_rational")]
    pub norm: Rational,
    #[serde(serialize_with = "ser_opt_rational")]
    pub acceptance_probability: Option<Rational>,
}

impl StepRecord {
    pub fn of(step: impl Into<String>, state: &QState, acceptance_probability: Option<Rational>) -> Self {
        Self { step: step.into(), label_count: state.len(), norm: state.norm_squared(), acceptance_probability }
    }
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub(crate) fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

/// One JSON object per line.
pub fn trace_to_jsonl(trace: &[StepRecord]) -> String {
    trace.iter().map(|r| serde_json::to_string(r).expect("serializable") + "\n").collect()
}
