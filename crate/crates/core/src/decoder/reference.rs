//! Classic min-sum with explicit variable-to-check messages.
//!
//! Kept as an independent cross-check of the reduced decoder: it stores
//! `q_{v→c}` for every edge and evaluates every exclusion literally, so it
//! shares no update code with [`super::RmsaDecoder`].

use super::{drive, validate, DecodeError, DecodeResult, DecoderConfig};
use crate::channel::LlrVector;
use crate::code::{Codeword, ParityCheckMatrix};

#[derive(Debug, Clone)]
pub struct MinSumReference<'h> {
    h: &'h ParityCheckMatrix,
    clamp: Option<f64>,
    prior: Vec<f64>,
    /// `q_{v→c}`, indexed by edge id.
    var_msg: Vec<f64>,
    /// `r_{c→v}`, indexed by edge id.
    check_msg: Vec<f64>,
    total: Vec<f64>,
}

impl<'h> MinSumReference<'h> {
    pub fn new(h: &'h ParityCheckMatrix, prior: &[f64], clamp: Option<f64>) -> Self {
        let sat = |x: f64| clamp.map_or(x, |c| x.clamp(-c, c));
        let prior: Vec<f64> = prior.iter().map(|&p| sat(p)).collect();
        Self {
            h,
            clamp,
            var_msg: vec![0.0; h.edges()],
            check_msg: vec![0.0; h.edges()],
            total: prior.clone(),
            prior,
        }
    }

    fn sat(&self, x: f64) -> f64 {
        self.clamp.map_or(x, |c| x.clamp(-c, c))
    }

    pub fn iterate(&mut self) -> Codeword {
        let h = self.h;
        // q_{v→c} = Λ_v^(0) + Σ_{c' ∈ C(v)\c} r_{c'→v}
        for v in 0..h.n() {
            let edges = h.col_edges(v);
            for &e in edges {
                let mut q = self.prior[v];
                for &e2 in edges {
                    if e2 != e {
                        q += self.check_msg[e2];
                    }
                }
                self.var_msg[e] = self.sat(q);
            }
        }
        // r_{c→v} = Π sign(q_{v'→c}) · min |q_{v'→c}| over v' ∈ V(c)\v
        for c in 0..h.m() {
            let edges = h.row_edges(c);
            for e in edges.clone() {
                let mut sign = 1.0;
                let mut min = f64::INFINITY;
                for e2 in edges.clone() {
                    if e2 == e {
                        continue;
                    }
                    let q = self.var_msg[e2];
                    if q < 0.0 {
                        sign = -sign;
                    }
                    min = min.min(q.abs());
                }
                self.check_msg[e] = sign * min;
            }
        }
        for v in 0..h.n() {
            let sum: f64 = self.prior[v] + h.col_edges(v).iter().map(|&e| self.check_msg[e]).sum::<f64>();
            self.total[v] = self.sat(sum);
        }
        Codeword(self.total.iter().map(|&t| u8::from(t < 0.0)).collect())
    }

    pub fn check_messages(&self) -> &[f64] {
        &self.check_msg
    }

    pub fn var_messages(&self) -> &[f64] {
        &self.var_msg
    }

    pub fn totals(&self) -> &[f64] {
        &self.total
    }
}

/// Decodes with the reference min-sum. Float arithmetic only; the
/// configured arithmetic is ignored apart from validation.
pub fn decode_minsum_reference(
    h: &ParityCheckMatrix,
    prior: &LlrVector,
    cfg: &DecoderConfig,
) -> Result<DecodeResult, DecodeError> {
    validate(h, prior.values(), cfg)?;
    let mut dec = MinSumReference::new(h, prior.values(), cfg.clamp);
    let (bits, converged, iterations_used) = drive(h, cfg, || dec.iterate());
    Ok(DecodeResult {
        bits,
        converged,
        iterations_used,
        final_totals: dec.totals().to_vec(),
    })
}
