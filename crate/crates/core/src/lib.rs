//! Reduced min-sum LDPC decoding, partitioned over a master and equally
//! loaded check-node slaves.
//!
//! * [`code`]: parity-check matrices, alist I/O, regular code generation.
//! * [`channel`]: BPSK/AWGN transmission and channel LLRs.
//! * [`decoder`]: the reduced min-sum decoder and a classic min-sum
//!   reference.
//! * [`partition`]: check-node blocks and 128-byte packetization.
//! * [`parsim`]: cost-model and multi-threaded execution of the partitioned
//!   decoder.
//! * [`cli`]: the command implementations behind the `ldpc-parsim` binary.

pub mod channel;
pub mod cli;
pub mod code;
pub mod decoder;
pub mod parsim;
pub mod partition;
