use super::{CostModel, MeshPlacement, ParsimError, ScenarioShape, SimReport};
use crate::channel::LlrVector;
use crate::code::ParityCheckMatrix;
use crate::decoder::{
    self, differences, drive, hard_decision, update_checks, validate, variable_node_update, AnyArith, DecodeResult,
    DecoderConfig, DecoderState, LlrArithmetic,
};
use crate::partition::Partition;

fn partitioned<A: LlrArithmetic>(
    h: &ParityCheckMatrix,
    prior: &[f64],
    cfg: &DecoderConfig,
    p: &Partition,
    arith: A,
) -> DecodeResult {
    let mut state = DecoderState::new(&arith, h, prior);
    let mut outbox: Vec<Vec<A::Value>> = vec![Vec::new(); p.num_slaves];
    let mut inbox: Vec<Vec<A::Value>> = p
        .groups
        .iter()
        .map(|g| vec![arith.zero(); h.edges_of_checks(g.clone()).len()])
        .collect();

    let (bits, converged, iterations_used) = drive(h, cfg, || {
        // scatter
        for (g, buf) in p.groups.iter().zip(outbox.iter_mut()) {
            differences(&arith, h, &state, g.clone(), buf);
        }
        // slaves
        for ((g, diffs), out) in p.groups.iter().zip(&outbox).zip(inbox.iter_mut()) {
            update_checks(&arith, h, g.clone(), diffs, out);
        }
        // gather
        for (g, msgs) in p.groups.iter().zip(&inbox) {
            state.check_msg[h.edges_of_checks(g.clone())].copy_from_slice(msgs);
        }
        variable_node_update(&arith, h, &mut state);
        state.iteration += 1;
        hard_decision(&arith, &state)
    });
    DecodeResult {
        bits,
        converged,
        iterations_used,
        final_totals: state.total.iter().map(|&t| arith.to_f64(t)).collect(),
    }
}

/// Decodes with the master/slave split executed in-process: the master
/// computes each block's differences, the block's check updates run on
/// them, and the master folds the returned messages back in.
pub fn decode_partitioned(
    h: &ParityCheckMatrix,
    prior: &LlrVector,
    cfg: &DecoderConfig,
    p: &Partition,
) -> Result<DecodeResult, ParsimError> {
    p.check_fits(h)?;
    Ok(match validate(h, prior.values(), cfg)? {
        AnyArith::Float(a) => partitioned(h, prior.values(), cfg, p, a),
        AnyArith::Fixed(a) => partitioned(h, prior.values(), cfg, p, a),
    })
}

/// Decodes on a single modeled PE and prices the run.
pub fn simulate_sequential(
    h: &ParityCheckMatrix,
    prior: &LlrVector,
    cfg: &DecoderConfig,
    cm: &CostModel,
) -> Result<(DecodeResult, SimReport), ParsimError> {
    cm.validate()?;
    let result = decoder::decode(h, prior, cfg)?;
    let per_iter = ScenarioShape::sequential(h).iteration(cm);
    let report = SimReport::modeled(1, 0, result.iterations_used, h.n(), per_iter, cm)?;
    Ok((result, report))
}

/// Decodes with the star partition and prices the run; the speedup is
/// taken against the sequential model over the same iteration count.
pub fn simulate_parallel(
    h: &ParityCheckMatrix,
    prior: &LlrVector,
    cfg: &DecoderConfig,
    p: &Partition,
    cm: &CostModel,
    placement: &MeshPlacement,
) -> Result<(DecodeResult, SimReport), ParsimError> {
    cm.validate()?;
    let shape = ScenarioShape::parallel(h, p, placement, cm.word_bytes)?;
    let result = decode_partitioned(h, prior, cfg, p)?;
    let iterations = result.iterations_used;
    let mut report = SimReport::modeled(p.num_slaves + 1, p.num_slaves, iterations, h.n(), shape.iteration(cm), cm)?;
    let seq = ScenarioShape::sequential(h).iteration(cm).scaled(iterations as u64).total();
    report.speedup = Some(seq as f64 / report.modeled_cycles.unwrap() as f64);
    Ok((result, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{llr_init, modulate, transmit, ChannelConfig};
    use crate::code::{generate_regular, hamming_7_4, Codeword};
    use crate::decoder::Arithmetic;
    use crate::partition::make_partition;

    fn noisy(h: &ParityCheckMatrix, ebno: f64, seed: u64) -> LlrVector {
        let ch = ChannelConfig::new(ebno, h.info().rate.max(0.1), seed);
        llr_init(&transmit(&modulate(&Codeword::zeros(h.n())), &ch), &ch)
    }

    #[test]
    fn partitioned_matches_sequential() {
        let h = generate_regular(96, 3, 6, 11).unwrap();
        for arithmetic in [Arithmetic::Float64, Arithmetic::Q8_4] {
            let cfg = DecoderConfig { arithmetic, ..Default::default() };
            for seed in 0..20 {
                let prior = noisy(&h, 1.0, seed);
                let seq = decoder::decode(&h, &prior, &cfg).unwrap();
                for s in [1, 2, 3, 4, 6, 8, 12, 16, 24, 48] {
                    let p = make_partition(h.m(), s).unwrap();
                    assert_eq!(decode_partitioned(&h, &prior, &cfg, &p).unwrap(), seq);
                }
            }
        }
    }

    #[test]
    fn degenerate_model() {
        let h = hamming_7_4();
        let cm = CostModel {
            cycles_per_check_edge: 0,
            cycles_per_var_edge: 0,
            cycles_per_syndrome_edge: 0,
            cycles_iter_fixed: 0,
            ..CostModel::default()
        };
        let prior = LlrVector(vec![1.0; 7]);
        assert_eq!(
            simulate_sequential(&h, &prior, &DecoderConfig::default(), &cm),
            Err(ParsimError::DegenerateCostModel)
        );
    }

    #[test]
    fn single_slave_is_pure_overhead() {
        let h = generate_regular(504, 3, 6, 2).unwrap();
        let prior = noisy(&h, 2.0, 1);
        let cfg = DecoderConfig::default().worst_case();
        let cm = CostModel::default();
        let (_, seq) = simulate_sequential(&h, &prior, &cfg, &cm).unwrap();
        let p = make_partition(h.m(), 1).unwrap();
        let (_, par) = simulate_parallel(&h, &prior, &cfg, &p, &cm, &MeshPlacement::star(2).unwrap()).unwrap();
        assert!(par.modeled_cycles >= seq.modeled_cycles);
        assert!(par.speedup.unwrap() <= 1.0);
    }

    #[test]
    fn placement_must_match_partition() {
        let h = hamming_7_4();
        let p = make_partition(4, 2).unwrap();
        let r = simulate_parallel(
            &h,
            &LlrVector(vec![1.0; 7]),
            &DecoderConfig::default(),
            &p,
            &CostModel::default(),
            &MeshPlacement::star(5).unwrap(),
        );
        assert!(matches!(r, Err(ParsimError::InvalidPlacement(_))));
        let wrong = make_partition(6, 2).unwrap();
        let r = decode_partitioned(&h, &LlrVector(vec![1.0; 7]), &DecoderConfig::default(), &wrong);
        assert!(matches!(r, Err(ParsimError::Partition(_))));
    }
}
