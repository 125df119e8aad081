//! Reduced min-sum (RMSA) decoding with a flooding schedule.
//!
//! The decoder keeps only the per-variable totals `Λ_v` and the per-edge
//! check-to-variable messages `Λ_{c→v}`. The variable-to-check message a
//! check needs is recovered on the fly as the difference `Λ_v − Λ_{c→v}`.
//!
//! The building blocks ([`differences`], [`update_checks`],
//! [`variable_node_update`]) are public so that a partitioned decoder can run
//! the check updates elsewhere and still perform bit-identical arithmetic.

mod arith;
pub mod reference;

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use self::arith::{FixedArith, FloatArith, LlrArithmetic};
use crate::channel::{LlrVector, LLR_MAX};
use crate::code::{syndrome_ok_unchecked, Codeword, ParityCheckMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("length mismatch: expected {expected} priors, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid decoder configuration: {0}")]
    InvalidConfig(String),
    #[error("check {check} has degree {degree}; the decoder needs degree >= 2")]
    DegenerateCheck { check: usize, degree: usize },
    #[error("prior {index} is not finite")]
    NonFinitePrior { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Arithmetic {
    #[default]
    Float64,
    Fixed { total_bits: u32, frac_bits: u32 },
}

impl Arithmetic {
    /// Signed Q8.4: 8 bits in total, 4 of them fractional.
    pub const Q8_4: Self = Self::Fixed {
        total_bits: 8,
        frac_bits: 4,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub max_iter: usize,
    pub early_exit: bool,
    /// Magnitude cap for float arithmetic; `None` disables clamping. Fixed
    /// point always saturates at its Q-format maximum.
    pub clamp: Option<f64>,
    pub arithmetic: Arithmetic,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            max_iter: 30,
            early_exit: true,
            clamp: Some(LLR_MAX),
            arithmetic: Arithmetic::Float64,
        }
    }
}

/// A validated arithmetic, ready to instantiate the generic decoder.
#[derive(Debug, Clone, Copy)]
pub enum AnyArith {
    Float(FloatArith),
    Fixed(FixedArith),
}

impl DecoderConfig {
    /// Same configuration with early exit disabled, so every decode runs
    /// exactly `max_iter` iterations.
    pub fn worst_case(self) -> Self {
        Self {
            early_exit: false,
            ..self
        }
    }

    pub fn arith(&self) -> Result<AnyArith, DecodeError> {
        if self.max_iter == 0 {
            return Err(DecodeError::InvalidConfig("max_iter must be >= 1".into()));
        }
        match self.arithmetic {
            Arithmetic::Float64 => {
                if let Some(c) = self.clamp {
                    if !(c.is_finite() && c > 0.0) {
                        return Err(DecodeError::InvalidConfig(format!("clamp must be positive and finite, got {c}")));
                    }
                }
                Ok(AnyArith::Float(FloatArith { clamp: self.clamp }))
            }
            Arithmetic::Fixed { total_bits, frac_bits } => FixedArith::new(total_bits, frac_bits)
                .map(AnyArith::Fixed)
                .ok_or_else(|| {
                    DecodeError::InvalidConfig(format!(
                        "fixed-point Q{total_bits}.{frac_bits} needs frac < total <= {}",
                        FixedArith::MAX_TOTAL_BITS
                    ))
                }),
        }
    }
}

/// RMSA memory: priors and totals per variable, one message per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderState<V> {
    pub prior: Vec<V>,
    pub total: Vec<V>,
    pub check_msg: Vec<V>,
    pub iteration: usize,
}

impl<V: Copy> DecoderState<V> {
    /// Step 1: totals start at the priors and every check message at zero.
    pub fn new<A: LlrArithmetic<Value = V>>(arith: &A, h: &ParityCheckMatrix, prior: &[f64]) -> Self {
        let prior: Vec<V> = prior.iter().map(|&l| arith.quantize(l)).collect();
        Self {
            total: prior.clone(),
            prior,
            check_msg: vec![arith.zero(); h.edges()],
            iteration: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    pub bits: Codeword,
    pub converged: bool,
    pub iterations_used: usize,
    /// Final `Λ_v`, converted to `f64`.
    pub final_totals: Vec<f64>,
}

pub(crate) fn validate(h: &ParityCheckMatrix, prior: &[f64], cfg: &DecoderConfig) -> Result<AnyArith, DecodeError> {
    let arith = cfg.arith()?;
    if prior.len() != h.n() {
        return Err(DecodeError::LengthMismatch {
            expected: h.n(),
            got: prior.len(),
        });
    }
    if let Some(index) = prior.iter().position(|l| !l.is_finite()) {
        return Err(DecodeError::NonFinitePrior { index });
    }
    if let Some(check) = (0..h.m()).find(|&c| h.row(c).len() < 2) {
        return Err(DecodeError::DegenerateCheck {
            check,
            degree: h.row(check).len(),
        });
    }
    Ok(arith)
}

/// Exclusive sign-product × minimum over `diffs`, written to `out`.
///
/// Uses the two-minimum trick: one pass records the smallest and second
/// smallest magnitude, the position of the smallest and the overall sign
/// parity; each output then excludes its own input in O(1). Zero counts as
/// positive.
pub fn check_node_kernel<A: LlrArithmetic>(arith: &A, diffs: &[A::Value], out: &mut [A::Value]) {
    debug_assert_eq!(diffs.len(), out.len());
    debug_assert!(diffs.len() >= 2);
    let mut negative = false;
    let mut min1 = arith.abs(diffs[0]);
    let mut min2 = arith.abs(diffs[1]);
    let mut argmin = 0;
    if min2 < min1 {
        std::mem::swap(&mut min1, &mut min2);
        argmin = 1;
    }
    for (i, &d) in diffs.iter().enumerate() {
        negative ^= arith.is_negative(d);
        if i < 2 {
            continue;
        }
        let a = arith.abs(d);
        if a < min1 {
            min2 = min1;
            min1 = a;
            argmin = i;
        } else if a < min2 {
            min2 = a;
        }
    }
    for (i, (&d, o)) in diffs.iter().zip(out.iter_mut()).enumerate() {
        let mag = if i == argmin { min2 } else { min1 };
        *o = if negative ^ arith.is_negative(d) { arith.neg(mag) } else { mag };
    }
}

/// Master side: the differences `Λ_v − Λ_{c→v}` for every edge of the
/// checks in `checks`, in edge order.
pub fn differences<A: LlrArithmetic>(
    arith: &A,
    h: &ParityCheckMatrix,
    state: &DecoderState<A::Value>,
    checks: Range<usize>,
    out: &mut Vec<A::Value>,
) {
    out.clear();
    for c in checks {
        let edges = h.row_edges(c);
        out.extend(
            h.row(c)
                .iter()
                .zip(&state.check_msg[edges])
                .map(|(&v, &msg)| arith.sub(state.total[v], msg)),
        );
    }
}

/// Worker side: new check messages for a block of checks, given the
/// block's differences as produced by [`differences`].
pub fn update_checks<A: LlrArithmetic>(
    arith: &A,
    h: &ParityCheckMatrix,
    checks: Range<usize>,
    diffs: &[A::Value],
    out: &mut [A::Value],
) {
    let base = h.edges_of_checks(checks.clone()).start;
    for c in checks {
        let local = h.row_edges(c).start - base..h.row_edges(c).end - base;
        check_node_kernel(arith, &diffs[local.clone()], &mut out[local]);
    }
}

/// Updates the messages of one check node in place.
pub fn check_node_update<A: LlrArithmetic>(
    arith: &A,
    h: &ParityCheckMatrix,
    state: &mut DecoderState<A::Value>,
    c: usize,
    scratch: &mut Vec<A::Value>,
) {
    differences(arith, h, state, c..c + 1, scratch);
    check_node_kernel(arith, scratch, &mut state.check_msg[h.row_edges(c)]);
}

/// `Λ_v = Λ_v^(0) + Σ_{c∈C(v)} Λ_{c→v}`, saturated once at the end.
pub fn variable_node_update<A: LlrArithmetic>(arith: &A, h: &ParityCheckMatrix, state: &mut DecoderState<A::Value>) {
    for v in 0..h.n() {
        let sum = h
            .col_edges(v)
            .iter()
            .fold(state.prior[v], |acc, &e| arith.add_raw(acc, state.check_msg[e]));
        state.total[v] = arith.saturate(sum);
    }
}

/// Bit `v` is 0 iff `Λ_v >= 0`.
pub fn hard_decision<A: LlrArithmetic>(arith: &A, state: &DecoderState<A::Value>) -> Codeword {
    Codeword(state.total.iter().map(|&t| u8::from(arith.is_negative(t))).collect())
}

/// Runs the iteration loop shared by every decoder flavour. `iterate`
/// performs one full iteration and returns the hard decision.
pub(crate) fn drive(
    h: &ParityCheckMatrix,
    cfg: &DecoderConfig,
    mut iterate: impl FnMut() -> Codeword,
) -> (Codeword, bool, usize) {
    let mut bits = Codeword::zeros(h.n());
    let mut ok = false;
    let mut used = 0;
    for j in 1..=cfg.max_iter {
        bits = iterate();
        used = j;
        ok = syndrome_ok_unchecked(h, bits.bits());
        if cfg.early_exit && ok {
            break;
        }
    }
    (bits, ok, used)
}

/// Sequential RMSA decoder over a borrowed matrix.
#[derive(Debug, Clone)]
pub struct RmsaDecoder<'h, A: LlrArithmetic> {
    h: &'h ParityCheckMatrix,
    arith: A,
    state: DecoderState<A::Value>,
    scratch: Vec<A::Value>,
}

impl<'h, A: LlrArithmetic> RmsaDecoder<'h, A> {
    /// Initialises state from `prior`. The caller is responsible for
    /// validation; see [`decode`].
    pub fn new(h: &'h ParityCheckMatrix, prior: &[f64], arith: A) -> Self {
        Self {
            h,
            state: DecoderState::new(&arith, h, prior),
            arith,
            scratch: Vec::with_capacity(h.max_row_degree()),
        }
    }

    /// One flooding iteration: every check, then every variable.
    pub fn iterate(&mut self) -> Codeword {
        for c in 0..self.h.m() {
            check_node_update(&self.arith, self.h, &mut self.state, c, &mut self.scratch);
        }
        variable_node_update(&self.arith, self.h, &mut self.state);
        self.state.iteration += 1;
        hard_decision(&self.arith, &self.state)
    }

    pub fn state(&self) -> &DecoderState<A::Value> {
        &self.state
    }

    pub fn check_messages_f64(&self) -> Vec<f64> {
        self.state.check_msg.iter().map(|&m| self.arith.to_f64(m)).collect()
    }

    pub fn totals_f64(&self) -> Vec<f64> {
        self.state.total.iter().map(|&t| self.arith.to_f64(t)).collect()
    }
}

fn decode_generic<A: LlrArithmetic>(h: &ParityCheckMatrix, prior: &[f64], cfg: &DecoderConfig, arith: A) -> DecodeResult {
    let mut dec = RmsaDecoder::new(h, prior, arith);
    let (bits, converged, iterations_used) = drive(h, cfg, || dec.iterate());
    DecodeResult {
        bits,
        converged,
        iterations_used,
        final_totals: dec.totals_f64(),
    }
}

/// Decodes one word with the reduced min-sum algorithm.
pub fn decode(h: &ParityCheckMatrix, prior: &LlrVector, cfg: &DecoderConfig) -> Result<DecodeResult, DecodeError> {
    Ok(match validate(h, prior.values(), cfg)? {
        AnyArith::Float(a) => decode_generic(h, prior.values(), cfg, a),
        AnyArith::Fixed(a) => decode_generic(h, prior.values(), cfg, a),
    })
}
