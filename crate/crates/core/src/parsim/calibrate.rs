//! Fitting the communication and fixed costs to a target speedup curve.

use serde::{Deserialize, Serialize};

use super::{CostModel, MeshPlacement, ParsimError, ScenarioShape};
use crate::code::ParityCheckMatrix;
use crate::partition::make_partition;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedupTarget {
    pub processors: usize,
    pub speedup: f64,
}

const fn target(processors: usize, speedup: f64) -> SpeedupTarget {
    SpeedupTarget { processors, speedup }
}

/// Measured speedups of the 252-check decoder on a 100 MHz mesh MPSoC,
/// by total processor count (master included).
pub const REFERENCE_SPEEDUPS: [SpeedupTarget; 6] = [
    target(3, 0.97),
    target(4, 1.12),
    target(5, 1.25),
    target(7, 1.24),
    target(8, 1.24),
    target(10, 1.22),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub model: CostModel,
    /// `(processors, modeled speedup)` per target.
    pub modeled: Vec<(usize, f64)>,
    pub max_abs_error: f64,
    pub rms_error: f64,
    /// Fitted parameters that ended on an edge of the search box.
    pub at_boundary: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Axis {
    name: &'static str,
    max: u64,
}

const COARSE_STEPS: u64 = 40;
const REFINE_STEPS: u64 = 8;
const REFINE_ROUNDS: usize = 12;

/// Grid search over `(cycles_packet_fixed, cycles_per_hop,
/// cycles_iter_fixed)` minimising the squared speedup error; compute costs
/// and clock are kept from `base`.
///
/// Only shape-preserving points are admitted: every modeled speedup must
/// lie on the same side of 1.0 as its target (targets of exactly 1.0 are
/// unconstrained), and if one target is strictly the largest, the modeled
/// curve must peak at the same scenario. Starts with a coarse grid over the
/// whole box, then repeatedly searches a shrinking grid around the best
/// point. The box is sized from the sequential iteration cost, so the
/// result depends only on `base`'s compute costs, not on its communication
/// costs.
///
/// Fails with `NoFeasiblePoint` if no admissible point exists or the best
/// fit misses some target by more than `tolerance`.
pub fn calibrate(
    base: &CostModel,
    h: &ParityCheckMatrix,
    targets: &[SpeedupTarget],
    tolerance: f64,
) -> Result<Calibration, ParsimError> {
    base.validate()?;
    if targets.is_empty() {
        return Err(ParsimError::Config("no calibration targets".into()));
    }
    let seq_shape = ScenarioShape::sequential(h);
    let shapes = targets
        .iter()
        .map(|t| {
            if t.processors < 2 {
                return Err(ParsimError::Config("calibration targets need at least one slave".into()));
            }
            let p = make_partition(h.m(), t.processors - 1)?;
            ScenarioShape::parallel(h, &p, &MeshPlacement::star(t.processors)?, base.word_bytes)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let speedups = |cm: &CostModel| -> Vec<f64> {
        let seq = seq_shape.iteration(cm).total() as f64;
        shapes.iter().map(|s| seq / s.iteration(cm).total() as f64).collect()
    };
    let peak = unique_argmax(targets.iter().map(|t| t.speedup));
    // Squared error, or infinity when the shape is not preserved.
    let error = |cm: &CostModel| -> f64 {
        let s = speedups(cm);
        let sides_kept = s
            .iter()
            .zip(targets)
            .all(|(s, t)| t.speedup == 1.0 || (*s < 1.0) == (t.speedup < 1.0));
        if !sides_kept || peak.is_some_and(|k| unique_argmax(s.iter().copied()) != Some(k)) {
            return f64::INFINITY;
        }
        s.iter().zip(targets).map(|(s, t)| (s - t.speedup).powi(2)).sum()
    };
    let with = |x: [u64; 3]| CostModel {
        cycles_packet_fixed: x[0],
        cycles_per_hop: x[1],
        cycles_iter_fixed: x[2],
        ..*base
    };

    let work = base.sequential_compute(h.edges() as u64).max(1);
    let axes = [
        Axis { name: "cycles_packet_fixed", max: work / 16 },
        Axis { name: "cycles_per_hop", max: work / 64 },
        Axis { name: "cycles_iter_fixed", max: work },
    ];

    let mut best = [0u64; 3];
    let mut best_err = f64::INFINITY;
    let mut span: [u64; 3] = axes.map(|a| a.max);
    let mut center: [u64; 3] = [0; 3];
    let mut steps = COARSE_STEPS;
    for round in 0..=REFINE_ROUNDS {
        let lo: [u64; 3] = std::array::from_fn(|i| if round == 0 { 0 } else { center[i].saturating_sub(span[i] / 2) });
        let hi: [u64; 3] = std::array::from_fn(|i| if round == 0 { axes[i].max } else { (center[i] + span[i] / 2).min(axes[i].max) });
        let grid = |i: usize| -> Vec<u64> {
            let mut pts: Vec<u64> = (0..=steps).map(|k| lo[i] + (hi[i] - lo[i]) * k / steps).collect();
            pts.dedup();
            pts
        };
        let (g0, g1, g2) = (grid(0), grid(1), grid(2));
        for &a in &g0 {
            for &b in &g1 {
                for &c in &g2 {
                    let x = [a, b, c];
                    let e = error(&with(x));
                    if e < best_err {
                        best_err = e;
                        best = x;
                    }
                }
            }
        }
        center = best;
        span = std::array::from_fn(|i| ((hi[i] - lo[i]) / steps * 2).max(2));
        steps = REFINE_STEPS;
    }

    if !best_err.is_finite() {
        return Err(ParsimError::NoFeasiblePoint {
            max_error: f64::INFINITY,
            tolerance,
        });
    }
    let model = with(best);
    let modeled: Vec<(usize, f64)> = targets.iter().map(|t| t.processors).zip(speedups(&model)).collect();
    let errs: Vec<f64> = modeled.iter().zip(targets).map(|((_, s), t)| (s - t.speedup).abs()).collect();
    let max_abs_error = errs.iter().copied().fold(0.0, f64::max);
    let rms_error = (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt();
    let at_boundary = axes
        .iter()
        .zip(best)
        .filter(|(a, v)| *v == 0 || *v == a.max)
        .map(|(a, _)| a.name.to_string())
        .collect();
    if max_abs_error > tolerance {
        return Err(ParsimError::NoFeasiblePoint {
            max_error: max_abs_error,
            tolerance,
        });
    }
    Ok(Calibration {
        model,
        modeled,
        max_abs_error,
        rms_error,
        at_boundary,
    })
}

fn unique_argmax(values: impl Iterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    let mut tied = false;
    for (i, v) in values.enumerate() {
        match best {
            Some((_, b)) if v < b => {}
            Some((_, b)) if v == b => tied = true,
            _ => {
                best = Some((i, v));
                tied = false;
            }
        }
    }
    best.filter(|_| !tied).map(|(i, _)| i)
}
