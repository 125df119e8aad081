//! Equal check-node blocks per slave and the 128-byte message contract.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::ParityCheckMatrix;

/// Largest payload carried by one packet.
pub const MAX_PACKET_BYTES: usize = 128;

/// Bytes per LLR word on the modeled wire (a 32-bit word).
pub const DEFAULT_WORD_BYTES: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("{m} checks cannot be split evenly over {num_slaves} slaves")]
    NotDivisible { m: usize, num_slaves: usize },
    #[error("need at least one slave")]
    NoSlaves,
    #[error("partition covers {partition_m} checks but the matrix has {matrix_m}")]
    PartitionMismatch { partition_m: usize, matrix_m: usize },
    #[error("packet of {0} bytes exceeds the {MAX_PACKET_BYTES}-byte limit")]
    PacketOverflow(usize),
    #[error("packet length {len} is not a multiple of the {word}-byte word")]
    RaggedPacket { len: usize, word: usize },
}

/// Contiguous, equally sized blocks of check nodes, one per slave.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub m: usize,
    pub num_slaves: usize,
    pub groups: Vec<Range<usize>>,
}

/// Slave `s` owns checks `[s·m/S, (s+1)·m/S)`.
pub fn make_partition(m: usize, num_slaves: usize) -> Result<Partition, PartitionError> {
    if num_slaves == 0 {
        return Err(PartitionError::NoSlaves);
    }
    if !m.is_multiple_of(num_slaves) {
        return Err(PartitionError::NotDivisible { m, num_slaves });
    }
    let size = m / num_slaves;
    Ok(Partition {
        m,
        num_slaves,
        groups: (0..num_slaves).map(|s| s * size..(s + 1) * size).collect(),
    })
}

impl Partition {
    pub fn group_size(&self) -> usize {
        self.m / self.num_slaves
    }

    pub fn check_fits(&self, h: &ParityCheckMatrix) -> Result<(), PartitionError> {
        if self.m != h.m() {
            return Err(PartitionError::PartitionMismatch {
                partition_m: self.m,
                matrix_m: h.m(),
            });
        }
        Ok(())
    }

    /// Edges adjacent to each slave's checks.
    pub fn edge_counts(&self, h: &ParityCheckMatrix) -> Vec<usize> {
        self.groups.iter().map(|g| h.edges_of_checks(g.clone()).len()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub payload_bytes: usize,
    pub packet_count: usize,
}

impl Transfer {
    pub fn new(payload_bytes: usize) -> Self {
        Self {
            payload_bytes,
            packet_count: packets_for(payload_bytes),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkPlan {
    pub to_slave: Transfer,
    pub to_master: Transfer,
}

/// Per-slave traffic of one iteration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessagePlan {
    pub word_bytes: usize,
    pub links: Vec<LinkPlan>,
}

impl MessagePlan {
    pub fn total_payload(&self) -> usize {
        self.links
            .iter()
            .map(|l| l.to_slave.payload_bytes + l.to_master.payload_bytes)
            .sum()
    }

    pub fn total_packets(&self) -> usize {
        self.links
            .iter()
            .map(|l| l.to_slave.packet_count + l.to_master.packet_count)
            .sum()
    }
}

/// `ceil(bytes / 128)`.
pub fn packets_for(payload_bytes: usize) -> usize {
    payload_bytes.div_ceil(MAX_PACKET_BYTES)
}

/// The master sends one difference per edge and receives one new check
/// message per edge, `word_bytes` each.
pub fn plan_messages(h: &ParityCheckMatrix, p: &Partition, word_bytes: usize) -> Result<MessagePlan, PartitionError> {
    p.check_fits(h)?;
    let links = p
        .edge_counts(h)
        .into_iter()
        .map(|edges| LinkPlan {
            to_slave: Transfer::new(edges * word_bytes),
            to_master: Transfer::new(edges * word_bytes),
        })
        .collect();
    Ok(MessagePlan { word_bytes, links })
}

/// A fixed-width little-endian wire word.
pub trait WireWord: Copy {
    const BYTES: usize;
    fn put(self, out: &mut Vec<u8>);
    fn get(bytes: &[u8]) -> Self;
}

macro_rules! wire_word {
    ($($t:ty),*) => {$(
        impl WireWord for $t {
            const BYTES: usize = std::mem::size_of::<$t>();
            fn put(self, out: &mut Vec<u8>) {
                out.extend_from_slice(&self.to_le_bytes());
            }
            fn get(bytes: &[u8]) -> Self {
                <$t>::from_le_bytes(bytes.try_into().expect("word-sized slice"))
            }
        }
    )*};
}

wire_word!(f32, f64, i16, i32);

/// One packet payload, at most [`MAX_PACKET_BYTES`] long.
pub type Packet = Vec<u8>;

/// Packs words into as few full packets as possible; only the last packet
/// may be short.
pub fn pack_words<W: WireWord>(values: &[W]) -> Vec<Packet> {
    let per_packet = MAX_PACKET_BYTES / W::BYTES;
    values
        .chunks(per_packet)
        .map(|chunk| {
            let mut p = Vec::with_capacity(chunk.len() * W::BYTES);
            chunk.iter().for_each(|&w| w.put(&mut p));
            p
        })
        .collect()
}

pub fn unpack_words<W: WireWord>(packets: &[Packet]) -> Result<Vec<W>, PartitionError> {
    let mut out = Vec::with_capacity(packets.iter().map(Vec::len).sum::<usize>() / W::BYTES);
    for p in packets {
        if p.len() > MAX_PACKET_BYTES {
            return Err(PartitionError::PacketOverflow(p.len()));
        }
        if p.len() % W::BYTES != 0 {
            return Err(PartitionError::RaggedPacket {
                len: p.len(),
                word: W::BYTES,
            });
        }
        out.extend(p.chunks_exact(W::BYTES).map(W::get));
    }
    Ok(out)
}

/// `f32` LLRs in 4-byte little-endian words.
pub fn pack_llrs(values: &[f32]) -> Vec<Packet> {
    pack_words(values)
}

pub fn unpack_llrs(packets: &[Packet]) -> Result<Vec<f32>, PartitionError> {
    unpack_words(packets)
}
