//! Master/slave execution of the partitioned decoder.
//!
//! Two execution modes share the same arithmetic:
//!
//! * a deterministic cost-model simulation ([`simulate_sequential`],
//!   [`simulate_parallel`]) that prices a star of processing elements on a
//!   2D mesh in cycles;
//! * a real multi-threaded run ([`run_parallel_threads`]) with one worker
//!   per check-node block and blocking rendezvous channels.
//!
//! Either way the decoded bits are identical to the sequential decoder's.

mod calibrate;
mod cost;
mod sim;
mod threads;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use self::calibrate::{calibrate, Calibration, SpeedupTarget, REFERENCE_SPEEDUPS};
pub use self::cost::{CostModel, MeshPlacement, PhaseBreakdown, ScenarioShape, SlaveLoad};
pub use self::sim::{decode_partitioned, simulate_parallel, simulate_sequential};
pub use self::threads::{run_parallel_threads, time_sequential, DEFAULT_REPETITIONS};
use crate::decoder::DecodeError;
use crate::partition::PartitionError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParsimError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("cost model yields zero modeled time")]
    DegenerateCostModel,
    #[error("invalid cost model: {0}")]
    InvalidCostModel(String),
    #[error("invalid placement: {0}")]
    InvalidPlacement(String),
    #[error("worker failed: {0}")]
    WorkerPanic(String),
    #[error("calibration failed: best max error {max_error:.4} exceeds {tolerance}")]
    NoFeasiblePoint { max_error: f64, tolerance: f64 },
    #[error("invalid config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExecMode {
    CostModel,
    Threads,
}

/// Timing of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub mode: ExecMode,
    pub processors: usize,
    pub num_slaves: usize,
    pub iterations: usize,
    pub n_bits: usize,
    /// Modeled cycles (cost-model mode only).
    pub modeled_cycles: Option<u64>,
    /// Modeled or median measured seconds per decode.
    pub seconds: f64,
    pub throughput_kbps: f64,
    /// Relative to the sequential baseline; `None` for the baseline itself.
    pub speedup: Option<f64>,
    /// Cycles per phase summed over all iterations (cost-model mode only).
    pub breakdown: Option<PhaseBreakdown>,
}

impl SimReport {
    pub(crate) fn modeled(
        processors: usize,
        num_slaves: usize,
        iterations: usize,
        n_bits: usize,
        per_iteration: PhaseBreakdown,
        cm: &CostModel,
    ) -> Result<Self, ParsimError> {
        let breakdown = per_iteration.scaled(iterations as u64);
        let cycles = breakdown.total();
        if cycles == 0 {
            return Err(ParsimError::DegenerateCostModel);
        }
        let seconds = cycles as f64 / cm.clock_hz;
        Ok(Self {
            mode: ExecMode::CostModel,
            processors,
            num_slaves,
            iterations,
            n_bits,
            modeled_cycles: Some(cycles),
            seconds,
            throughput_kbps: n_bits as f64 / seconds / 1e3,
            speedup: None,
            breakdown: Some(breakdown),
        })
    }

    pub(crate) fn measured(processors: usize, num_slaves: usize, iterations: usize, n_bits: usize, seconds: f64) -> Self {
        Self {
            mode: ExecMode::Threads,
            processors,
            num_slaves,
            iterations,
            n_bits,
            modeled_cycles: None,
            seconds,
            throughput_kbps: n_bits as f64 / seconds / 1e3,
            speedup: None,
            breakdown: None,
        }
    }
}

/// On-disk form of a placement override.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementSpec {
    pub width: usize,
    pub height: usize,
    pub master: (usize, usize),
    pub slaves: Vec<(usize, usize)>,
}

/// Key-value simulator configuration (TOML):
///
/// ```toml
/// [cost_model]
/// cycles_packet_fixed = 500
/// clock_hz = 100e6
///
/// [placements.5]          # keyed by processor count
/// width = 3
/// height = 3
/// master = [1, 1]
/// slaves = [[1, 0], [0, 1], [2, 1], [1, 2]]
/// ```
///
/// Cost-model keys left out keep their defaults.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub cost_model: CostModel,
    pub placements: BTreeMap<String, PlacementSpec>,
}

impl SimConfig {
    pub fn from_toml(text: &str) -> Result<Self, ParsimError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ParsimError::Config(e.to_string()))?;
        cfg.cost_model.validate()?;
        for key in cfg.placements.keys() {
            key.parse::<usize>()
                .map_err(|_| ParsimError::Config(format!("placement key {key:?} is not a processor count")))?;
        }
        Ok(cfg)
    }

    /// The configured placement for `processors`, or the default star.
    pub fn placement(&self, processors: usize) -> Result<MeshPlacement, ParsimError> {
        match self.placements.get(&processors.to_string()) {
            Some(p) => MeshPlacement::new(p.width, p.height, p.master, p.slaves.clone()),
            None => MeshPlacement::star(processors),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_overrides() {
        let cfg = SimConfig::from_toml(
            "[cost_model]\ncycles_per_hop = 7\n\n[placements.3]\nwidth = 2\nheight = 2\nmaster = [0, 0]\nslaves = [[1, 1], [0, 1]]\n",
        )
        .unwrap();
        assert_eq!(cfg.cost_model.cycles_per_hop, 7);
        assert_eq!(cfg.cost_model.cycles_per_check_edge, CostModel::default().cycles_per_check_edge);
        assert_eq!(cfg.placement(3).unwrap().hops(), vec![2, 1]);
        assert_eq!(cfg.placement(5).unwrap(), MeshPlacement::star(5).unwrap());
        assert!(SimConfig::from_toml("[cost_model]\nbogus = 1\n").is_err());
        assert!(SimConfig::from_toml("[cost_model]\nclock_hz = 0.0\n").is_err());
        assert!(SimConfig::from_toml("[placements.x]\nwidth=1\nheight=1\nmaster=[0,0]\nslaves=[]\n").is_err());
    }
}
