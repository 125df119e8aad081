//! Analytic cycle accounting for the sequential and star-partitioned decoder.
//!
//! Time is phase-summed per iteration, in integer cycles:
//!
//! * the master sends each slave its difference block in slave order, one
//!   packet at a time (`cycles_packet_fixed + hops · cycles_per_hop` each);
//! * a slave starts its check updates as soon as its own block has arrived;
//! * the master then collects results in slave order, idling whenever the
//!   next slave has not finished yet;
//! * finally the master runs the variable update, the decision/syndrome and
//!   its fixed per-iteration work.
//!
//! Master sends and receives are serialized; that is the star bottleneck.

use serde::{Deserialize, Serialize};

use super::ParsimError;
use crate::code::ParityCheckMatrix;
use crate::partition::{packets_for, Partition, DEFAULT_WORD_BYTES};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostModel {
    pub cycles_per_check_edge: u64,
    pub cycles_per_var_edge: u64,
    pub cycles_per_syndrome_edge: u64,
    pub cycles_packet_fixed: u64,
    pub cycles_per_hop: u64,
    pub cycles_iter_fixed: u64,
    pub clock_hz: f64,
    pub word_bytes: usize,
}

impl Default for CostModel {
    /// Compute costs sized for a soft-float 32-bit core at 100 MHz;
    /// communication and fixed costs fitted to the reference speedup curve
    /// with [`calibrate`](super::calibrate).
    fn default() -> Self {
        Self {
            cycles_per_check_edge: 236,
            cycles_per_var_edge: 46,
            cycles_per_syndrome_edge: 28,
            cycles_packet_fixed: 2456,
            cycles_per_hop: 117,
            cycles_iter_fixed: 50779,
            clock_hz: 100e6,
            word_bytes: DEFAULT_WORD_BYTES,
        }
    }
}

impl CostModel {
    pub fn validate(&self) -> Result<(), ParsimError> {
        if !(self.clock_hz.is_finite() && self.clock_hz > 0.0) {
            return Err(ParsimError::InvalidCostModel(format!("clock_hz must be positive, got {}", self.clock_hz)));
        }
        if self.word_bytes == 0 {
            return Err(ParsimError::InvalidCostModel("word_bytes must be >= 1".into()));
        }
        Ok(())
    }

    /// Compute cycles of one sequential iteration excluding the fixed part.
    pub fn sequential_compute(&self, edges: u64) -> u64 {
        edges * (self.cycles_per_check_edge + self.cycles_per_var_edge + self.cycles_per_syndrome_edge)
    }

    pub fn packet_cycles(&self, hops: u64) -> u64 {
        self.cycles_packet_fixed + hops * self.cycles_per_hop
    }
}

/// Cycles of one iteration, split by phase. The phases add up to the total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PhaseBreakdown {
    /// Variable update, decision, syndrome and fixed overhead on the master
    /// (everything, in the sequential case).
    pub master_compute: u64,
    /// Master idle while slaves finish their check updates.
    pub slave_wait: u64,
    pub scatter: u64,
    pub gather: u64,
}

impl PhaseBreakdown {
    pub fn total(&self) -> u64 {
        self.master_compute + self.slave_wait + self.scatter + self.gather
    }

    pub fn communication(&self) -> u64 {
        self.scatter + self.gather
    }

    pub fn scaled(&self, k: u64) -> Self {
        Self {
            master_compute: self.master_compute * k,
            slave_wait: self.slave_wait * k,
            scatter: self.scatter * k,
            gather: self.gather * k,
        }
    }
}

/// PE grid with the master and its slaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshPlacement {
    pub width: usize,
    pub height: usize,
    pub master_xy: (usize, usize),
    pub slave_xy: Vec<(usize, usize)>,
}

fn manhattan(a: (usize, usize), b: (usize, usize)) -> usize {
    a.0.abs_diff(b.0) + a.1.abs_diff(b.1)
}

impl MeshPlacement {
    pub fn new(
        width: usize,
        height: usize,
        master_xy: (usize, usize),
        slave_xy: Vec<(usize, usize)>,
    ) -> Result<Self, ParsimError> {
        let placement = Self {
            width,
            height,
            master_xy,
            slave_xy,
        };
        let all: Vec<_> = std::iter::once(master_xy).chain(placement.slave_xy.iter().copied()).collect();
        if let Some(xy) = all.iter().find(|&&(x, y)| x >= width || y >= height) {
            return Err(ParsimError::InvalidPlacement(format!("{xy:?} outside {width}x{height} grid")));
        }
        for (i, a) in all.iter().enumerate() {
            if all[i + 1..].contains(a) {
                return Err(ParsimError::InvalidPlacement(format!("PE {a:?} used twice")));
            }
        }
        Ok(placement)
    }

    /// Master in the central PE (the lower-left of the central candidates
    /// on even sides), slaves on the nearest free PEs ordered by hop
    /// distance, then row, then column. The grid is the smallest square
    /// holding every processor.
    pub fn star(processors: usize) -> Result<Self, ParsimError> {
        if processors < 2 {
            return Err(ParsimError::InvalidPlacement("a star needs a master and at least one slave".into()));
        }
        let width = (1..).find(|w| w * w >= processors).unwrap();
        let height = width;
        let master = ((width - 1) / 2, (height - 1) / 2);
        let mut cells: Vec<(usize, usize)> = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .filter(|&xy| xy != master)
            .collect();
        cells.sort_by_key(|&(x, y)| (manhattan((x, y), master), y, x));
        cells.truncate(processors - 1);
        Self::new(width, height, master, cells)
    }

    pub fn num_slaves(&self) -> usize {
        self.slave_xy.len()
    }

    pub fn hops(&self) -> Vec<usize> {
        self.slave_xy.iter().map(|&s| manhattan(s, self.master_xy)).collect()
    }
}

/// What the accounting needs to know about one slave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlaveLoad {
    pub edges: u64,
    pub packets_out: u64,
    pub packets_back: u64,
    pub hops: u64,
}

/// Size of a sequential or partitioned decode, independent of cost
/// parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioShape {
    pub edges: u64,
    pub slaves: Vec<SlaveLoad>,
}

impl ScenarioShape {
    pub fn sequential(h: &ParityCheckMatrix) -> Self {
        Self {
            edges: h.edges() as u64,
            slaves: Vec::new(),
        }
    }

    pub fn parallel(
        h: &ParityCheckMatrix,
        p: &Partition,
        placement: &MeshPlacement,
        word_bytes: usize,
    ) -> Result<Self, ParsimError> {
        p.check_fits(h)?;
        if placement.num_slaves() != p.num_slaves {
            return Err(ParsimError::InvalidPlacement(format!(
                "placement has {} slaves, partition has {}",
                placement.num_slaves(),
                p.num_slaves
            )));
        }
        let slaves = p
            .edge_counts(h)
            .into_iter()
            .zip(placement.hops())
            .map(|(edges, hops)| {
                let packets = packets_for(edges * word_bytes) as u64;
                SlaveLoad {
                    edges: edges as u64,
                    packets_out: packets,
                    packets_back: packets,
                    hops: hops as u64,
                }
            })
            .collect();
        Ok(Self {
            edges: h.edges() as u64,
            slaves,
        })
    }

    pub fn is_sequential(&self) -> bool {
        self.slaves.is_empty()
    }

    /// Cycles of one iteration under `cm`.
    pub fn iteration(&self, cm: &CostModel) -> PhaseBreakdown {
        if self.is_sequential() {
            return PhaseBreakdown {
                master_compute: cm.sequential_compute(self.edges) + cm.cycles_iter_fixed,
                ..Default::default()
            };
        }

        let mut t = 0;
        let mut scatter = 0;
        let mut ready = Vec::with_capacity(self.slaves.len());
        for s in &self.slaves {
            let send = s.packets_out * cm.packet_cycles(s.hops);
            scatter += send;
            t += send;
            ready.push(t + s.edges * cm.cycles_per_check_edge);
        }
        let mut wait = 0;
        let mut gather = 0;
        for (s, &r) in self.slaves.iter().zip(&ready) {
            if r > t {
                wait += r - t;
                t = r;
            }
            let recv = s.packets_back * cm.packet_cycles(s.hops);
            gather += recv;
            t += recv;
        }
        let master_compute = self.edges * (cm.cycles_per_var_edge + cm.cycles_per_syndrome_edge) + cm.cycles_iter_fixed;
        PhaseBreakdown {
            master_compute,
            slave_wait: wait,
            scatter,
            gather,
        }
    }

    /// Largest per-slave check cost in one iteration.
    pub fn max_slave_compute(&self, cm: &CostModel) -> u64 {
        self.slaves.iter().map(|s| s.edges * cm.cycles_per_check_edge).max().unwrap_or(0)
    }
}
