//! Real master/worker execution over blocking rendezvous channels.
//!
//! Each slave block gets one long-lived worker thread. Every iteration the
//! master sends each worker its packed difference block through a
//! zero-capacity channel (the send completes only when the worker takes
//! it), then receives the packed check messages back in slave order.
//! Words travel in the decoder's own representation (`f64` or the
//! fixed-point integer), so results are bit-identical to the sequential
//! decoder.

use std::ops::Range;
use std::sync::mpsc::{sync_channel, Receiver, SyncSender};
use std::thread;
use std::time::Instant;

use super::{ParsimError, SimReport};
use crate::channel::LlrVector;
use crate::code::ParityCheckMatrix;
use crate::decoder::{
    self, differences, drive, hard_decision, update_checks, validate, variable_node_update, AnyArith, DecodeResult,
    DecoderConfig, DecoderState, LlrArithmetic,
};
use crate::partition::{pack_words, unpack_words, Packet, Partition, PartitionError, WireWord};

pub const DEFAULT_REPETITIONS: usize = 100;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn worker<A: LlrArithmetic>(
    h: &ParityCheckMatrix,
    arith: A,
    checks: Range<usize>,
    rx: Receiver<Vec<Packet>>,
    tx: SyncSender<Vec<Packet>>,
) -> Result<(), PartitionError>
where
    A::Value: WireWord,
{
    let mut out = vec![arith.zero(); h.edges_of_checks(checks.clone()).len()];
    while let Ok(packets) = rx.recv() {
        let diffs: Vec<A::Value> = unpack_words(&packets)?;
        update_checks(&arith, h, checks.clone(), &diffs, &mut out);
        if tx.send(pack_words(&out)).is_err() {
            break;
        }
    }
    Ok(())
}

struct Link {
    tx: SyncSender<Vec<Packet>>,
    rx: Receiver<Vec<Packet>>,
}

fn master_decode<A: LlrArithmetic>(
    h: &ParityCheckMatrix,
    prior: &[f64],
    cfg: &DecoderConfig,
    p: &Partition,
    arith: A,
    links: &[Link],
) -> Result<DecodeResult, String>
where
    A::Value: WireWord,
{
    let mut state = DecoderState::new(&arith, h, prior);
    let mut buf = Vec::new();
    let mut failure = None;
    let (bits, converged, iterations_used) = drive(h, cfg, || {
        if failure.is_none() {
            failure = exchange(h, p, &arith, links, &mut state, &mut buf).err();
        }
        variable_node_update(&arith, h, &mut state);
        state.iteration += 1;
        hard_decision(&arith, &state)
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(DecodeResult {
        bits,
        converged,
        iterations_used,
        final_totals: state.total.iter().map(|&t| arith.to_f64(t)).collect(),
    })
}

fn exchange<A: LlrArithmetic>(
    h: &ParityCheckMatrix,
    p: &Partition,
    arith: &A,
    links: &[Link],
    state: &mut DecoderState<A::Value>,
    buf: &mut Vec<A::Value>,
) -> Result<(), String>
where
    A::Value: WireWord,
{
    for (g, link) in p.groups.iter().zip(links) {
        differences(arith, h, state, g.clone(), buf);
        link.tx.send(pack_words(buf)).map_err(|_| "worker hung up".to_string())?;
    }
    for (g, link) in p.groups.iter().zip(links) {
        let packets = link.rx.recv().map_err(|_| "worker hung up".to_string())?;
        let msgs: Vec<A::Value> = unpack_words(&packets).map_err(|e| e.to_string())?;
        let edges = h.edges_of_checks(g.clone());
        if msgs.len() != edges.len() {
            return Err(format!("worker returned {} messages, expected {}", msgs.len(), edges.len()));
        }
        state.check_msg[edges].copy_from_slice(&msgs);
    }
    Ok(())
}

fn run<A: LlrArithmetic>(
    h: &ParityCheckMatrix,
    prior: &[f64],
    cfg: &DecoderConfig,
    p: &Partition,
    arith: A,
    reps: usize,
) -> Result<(DecodeResult, Vec<f64>), ParsimError>
where
    A::Value: WireWord,
{
    thread::scope(|scope| {
        let mut links = Vec::with_capacity(p.num_slaves);
        let mut handles = Vec::with_capacity(p.num_slaves);
        for g in &p.groups {
            let (to_worker, worker_rx) = sync_channel(0);
            let (worker_tx, from_worker) = sync_channel(0);
            let checks = g.clone();
            handles.push(scope.spawn(move || worker(h, arith, checks, worker_rx, worker_tx)));
            links.push(Link {
                tx: to_worker,
                rx: from_worker,
            });
        }

        let mut times = Vec::with_capacity(reps);
        let mut outcome: Result<Option<DecodeResult>, String> = Ok(None);
        for _ in 0..reps {
            let start = Instant::now();
            match master_decode(h, prior, cfg, p, arith, &links) {
                Ok(r) => {
                    times.push(start.elapsed().as_secs_f64());
                    outcome = Ok(Some(r));
                }
                Err(e) => {
                    outcome = Err(e);
                    break;
                }
            }
        }
        drop(links);

        for handle in handles {
            match handle.join() {
                Ok(Ok(())) => {}
                Ok(Err(e)) => return Err(ParsimError::WorkerPanic(e.to_string())),
                Err(panic) => {
                    let msg = panic
                        .downcast_ref::<&str>()
                        .map(|s| s.to_string())
                        .or_else(|| panic.downcast_ref::<String>().cloned())
                        .unwrap_or_else(|| "worker panicked".into());
                    return Err(ParsimError::WorkerPanic(msg));
                }
            }
        }
        match outcome {
            Ok(Some(r)) => Ok((r, times)),
            Ok(None) => Err(ParsimError::Config("repetitions must be >= 1".into())),
            Err(e) => Err(ParsimError::WorkerPanic(e)),
        }
    })
}

/// Runs `reps` decodes of `prior` on `p.num_slaves` worker threads plus the
/// calling thread as master. The report carries the median wall time per
/// decode.
pub fn run_parallel_threads(
    h: &ParityCheckMatrix,
    prior: &LlrVector,
    cfg: &DecoderConfig,
    p: &Partition,
    reps: usize,
) -> Result<(DecodeResult, SimReport), ParsimError> {
    p.check_fits(h)?;
    let (result, times) = match validate(h, prior.values(), cfg)? {
        AnyArith::Float(a) => run(h, prior.values(), cfg, p, a, reps)?,
        AnyArith::Fixed(a) => run(h, prior.values(), cfg, p, a, reps)?,
    };
    let report = SimReport::measured(p.num_slaves + 1, p.num_slaves, result.iterations_used, h.n(), median(times));
    Ok((result, report))
}

/// Wall-clock baseline: `reps` sequential decodes on the calling thread.
pub fn time_sequential(
    h: &ParityCheckMatrix,
    prior: &LlrVector,
    cfg: &DecoderConfig,
    reps: usize,
) -> Result<(DecodeResult, SimReport), ParsimError> {
    if reps == 0 {
        return Err(ParsimError::Config("repetitions must be >= 1".into()));
    }
    let mut times = Vec::with_capacity(reps);
    let mut result = None;
    for _ in 0..reps {
        let start = Instant::now();
        let r = decoder::decode(h, prior, cfg)?;
        times.push(start.elapsed().as_secs_f64());
        result = Some(r);
    }
    let result = result.unwrap();
    let report = SimReport::measured(1, 0, result.iterations_used, h.n(), median(times));
    Ok((result, report))
}
