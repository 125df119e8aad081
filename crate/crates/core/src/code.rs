//! Sparse parity-check matrices and their Tanner-graph adjacency.
//!
//! A [`ParityCheckMatrix`] stores, for every check node (row), the ascending
//! list of variable nodes (columns) it touches, and the transpose. Edges are
//! numbered row-major, so the edges of a contiguous block of checks occupy a
//! contiguous range of edge ids. Decoders key their per-edge message storage
//! on that numbering.

use std::fmt::Write as _;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("malformed alist (line {line}): {reason}")]
    MalformedAlist { line: usize, reason: String },
    #[error("{kind} {index} has no edges")]
    EmptyRowOrColumn { kind: &'static str, index: usize },
    #[error("infeasible code parameters: {0}")]
    InfeasibleParameters(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

fn malformed(line: usize, reason: impl Into<String>) -> CodeError {
    CodeError::MalformedAlist {
        line,
        reason: reason.into(),
    }
}

/// Sparse binary `m × n` matrix with row and column adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n: usize,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
    /// `row_start[c]` is the id of the first edge of check `c`; one extra
    /// trailing entry holds the edge count.
    row_start: Vec<usize>,
    /// Edge ids matching `col_adj` entry for entry.
    col_edges: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Builds a matrix from per-row variable lists. Rows are sorted; duplicate
    /// or out-of-range indices and empty rows or columns are rejected.
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self, CodeError> {
        if n == 0 || rows.is_empty() {
            return Err(CodeError::InvalidMatrix("matrix must have at least one row and column".into()));
        }
        let mut row_adj = rows;
        for (c, row) in row_adj.iter_mut().enumerate() {
            if row.is_empty() {
                return Err(CodeError::EmptyRowOrColumn { kind: "row", index: c });
            }
            row.sort_unstable();
            if let Some(&v) = row.last().filter(|&&v| v >= n) {
                return Err(CodeError::InvalidMatrix(format!("row {c} references column {v} >= {n}")));
            }
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(CodeError::InvalidMatrix(format!("row {c} has a duplicate edge")));
            }
        }

        let mut row_start = Vec::with_capacity(row_adj.len() + 1);
        let mut col_adj = vec![Vec::new(); n];
        let mut col_edges = vec![Vec::new(); n];
        let mut edge = 0;
        for (c, row) in row_adj.iter().enumerate() {
            row_start.push(edge);
            for &v in row {
                col_adj[v].push(c);
                col_edges[v].push(edge);
                edge += 1;
            }
        }
        row_start.push(edge);
        if let Some(v) = col_adj.iter().position(Vec::is_empty) {
            return Err(CodeError::EmptyRowOrColumn { kind: "column", index: v });
        }

        Ok(Self {
            n,
            row_adj,
            col_adj,
            row_start,
            col_edges,
        })
    }

    /// Builds a matrix from a dense 0/1 row-major description.
    pub fn from_dense(rows: &[&[u8]]) -> Result<Self, CodeError> {
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(CodeError::InvalidMatrix("ragged dense matrix".into()));
        }
        let sparse = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &b)| b != 0).map(|(j, _)| j).collect())
            .collect();
        Self::from_rows(n, sparse)
    }

    /// Number of check nodes (rows).
    pub fn m(&self) -> usize {
        self.row_adj.len()
    }

    /// Number of variable nodes (columns), i.e. the code length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of 1-entries.
    pub fn edges(&self) -> usize {
        self.row_start[self.m()]
    }

    /// `V(c)`, ascending.
    pub fn row(&self, c: usize) -> &[usize] {
        &self.row_adj[c]
    }

    /// `C(v)`, ascending.
    pub fn col(&self, v: usize) -> &[usize] {
        &self.col_adj[v]
    }

    /// Edge ids of `C(v)`, aligned with [`col`](Self::col).
    pub fn col_edges(&self, v: usize) -> &[usize] {
        &self.col_edges[v]
    }

    /// Edge ids belonging to check `c`, aligned with [`row`](Self::row).
    pub fn row_edges(&self, c: usize) -> Range<usize> {
        self.row_start[c]..self.row_start[c + 1]
    }

    /// Edge ids belonging to a contiguous block of checks.
    pub fn edges_of_checks(&self, checks: Range<usize>) -> Range<usize> {
        self.row_start[checks.start]..self.row_start[checks.end]
    }

    /// Edge id of `(c, v)` if `h[c][v] == 1`.
    pub fn edge_index(&self, c: usize, v: usize) -> Option<usize> {
        let row = self.row_adj.get(c)?;
        row.binary_search(&v).ok().map(|pos| self.row_start[c] + pos)
    }

    pub fn max_row_degree(&self) -> usize {
        self.row_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_col_degree(&self) -> usize {
        self.col_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Iterates `(c, v)` pairs in edge-id order.
    pub fn iter_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_adj
            .iter()
            .enumerate()
            .flat_map(|(c, row)| row.iter().map(move |&v| (c, v)))
    }

    pub fn info(&self) -> CodeInfo {
        CodeInfo::new(self.n, self.m())
    }

    /// Rank over GF(2), by Gaussian elimination on packed rows.
    pub fn gf2_rank(&self) -> usize {
        let words = self.n.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = self
            .row_adj
            .iter()
            .map(|row| {
                let mut bits = vec![0u64; words];
                for &v in row {
                    bits[v / 64] |= 1 << (v % 64);
                }
                bits
            })
            .collect();
        let mut rank = 0;
        for col in 0..self.n {
            let (w, b) = (col / 64, 1u64 << (col % 64));
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & b != 0 {
                    row.iter_mut().zip(&pivot_row).for_each(|(x, y)| *x ^= y);
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Dimensions and rate of a code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeInfo {
    pub n: usize,
    /// Information length, taken as `n - m`.
    pub k: usize,
    pub rate: f64,
    /// Always true: `k` assumes `H` has full row rank; no rank is computed.
    pub k_assumes_full_rank: bool,
}

impl CodeInfo {
    pub fn new(n: usize, m: usize) -> Self {
        let k = n.saturating_sub(m);
        Self {
            n,
            k,
            rate: k as f64 / n as f64,
            k_assumes_full_rank: true,
        }
    }
}

/// Hard-decision word over GF(2), one `0`/`1` byte per bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Codeword(pub Vec<u8>);

impl Codeword {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b != 0).count()
    }

    /// Packs bits MSB-first into bytes (the last byte zero-padded) and
    /// renders them as lowercase hex.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.0.len().div_ceil(4));
        for chunk in self.0.chunks(8) {
            let byte = chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | ((b & 1) << (7 - i)));
            write!(out, "{byte:02x}").unwrap();
        }
        out
    }
}

/// True iff `H · xᵀ = 0` over GF(2).
pub fn syndrome_ok(h: &ParityCheckMatrix, x: &Codeword) -> Result<bool, CodeError> {
    if x.len() != h.n() {
        return Err(CodeError::LengthMismatch {
            expected: h.n(),
            got: x.len(),
        });
    }
    Ok(syndrome_ok_unchecked(h, x.bits()))
}

pub(crate) fn syndrome_ok_unchecked(h: &ParityCheckMatrix, bits: &[u8]) -> bool {
    (0..h.m()).all(|c| h.row(c).iter().fold(0u8, |p, &v| p ^ (bits[v] & 1)) == 0)
}

/// Parses an alist document. Zero entries in adjacency lines are padding
/// and are ignored; blank lines are skipped.
pub fn load_alist(text: &str) -> Result<ParityCheckMatrix, CodeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut next_numbers = |what: &str| -> Result<(usize, Vec<usize>), CodeError> {
        let (no, line) = lines
            .next()
            .ok_or_else(|| malformed(0, format!("unexpected end of input, expected {what}")))?;
        let nums = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| malformed(no, format!("bad integer {t:?} in {what}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((no, nums))
    };

    let (no, dims) = next_numbers("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(malformed(no, "expected \"n m\""));
    };
    if n == 0 || m == 0 {
        return Err(malformed(no, "zero dimension"));
    }
    let (no, maxes) = next_numbers("max degrees")?;
    let [max_col, max_row] = maxes[..] else {
        return Err(malformed(no, "expected \"max_col_deg max_row_deg\""));
    };
    let (no, col_deg) = next_numbers("column degrees")?;
    if col_deg.len() != n {
        return Err(malformed(no, format!("expected {n} column degrees, found {}", col_deg.len())));
    }
    let (no, row_deg) = next_numbers("row degrees")?;
    if row_deg.len() != m {
        return Err(malformed(no, format!("expected {m} row degrees, found {}", row_deg.len())));
    }
    if let Some(v) = col_deg.iter().position(|&d| d == 0) {
        return Err(CodeError::EmptyRowOrColumn { kind: "column", index: v });
    }
    if let Some(c) = row_deg.iter().position(|&d| d == 0) {
        return Err(CodeError::EmptyRowOrColumn { kind: "row", index: c });
    }
    if col_deg.iter().max() != Some(&max_col) || row_deg.iter().max() != Some(&max_row) {
        return Err(malformed(no, "max degrees disagree with degree lists"));
    }

    let mut read_lists = |count: usize, degrees: &[usize], bound: usize, what: &str| {
        (0..count)
            .map(|i| {
                let (no, entries) = next_numbers(what)?;
                let list: Vec<usize> = entries.into_iter().filter(|&e| e != 0).map(|e| e - 1).collect();
                if list.len() != degrees[i] {
                    return Err(malformed(
                        no,
                        format!("{what} {} lists {} entries, degree says {}", i + 1, list.len(), degrees[i]),
                    ));
                }
                if let Some(&e) = list.iter().find(|&&e| e >= bound) {
                    return Err(malformed(no, format!("index {} out of range 1..={bound}", e + 1)));
                }
                Ok(list)
            })
            .collect::<Result<Vec<_>, CodeError>>()
    };
    let cols = read_lists(n, &col_deg, m, "column")?;
    let rows = read_lists(m, &row_deg, n, "row")?;

    let h = ParityCheckMatrix::from_rows(n, rows).map_err(|e| match e {
        CodeError::InvalidMatrix(reason) => malformed(0, reason),
        other => other,
    })?;
    for (v, mut list) in cols.into_iter().enumerate() {
        list.sort_unstable();
        if list != h.col(v) {
            return Err(malformed(0, format!("column {} disagrees with the row lists", v + 1)));
        }
    }
    Ok(h)
}

/// Writes the canonical alist form: no zero padding, ascending lists,
/// single spaces, trailing newline.
pub fn save_alist(h: &ParityCheckMatrix) -> String {
    fn line<I: IntoIterator<Item = usize>>(out: &mut String, items: I) {
        let mut first = true;
        for x in items {
            if !first {
                out.push(' ');
            }
            write!(out, "{x}").unwrap();
            first = false;
        }
        out.push('\n');
    }
    let mut out = String::new();
    line(&mut out, [h.n(), h.m()]);
    line(&mut out, [h.max_col_degree(), h.max_row_degree()]);
    line(&mut out, (0..h.n()).map(|v| h.col(v).len()));
    line(&mut out, (0..h.m()).map(|c| h.row(c).len()));
    for v in 0..h.n() {
        line(&mut out, h.col(v).iter().map(|c| c + 1));
    }
    for c in 0..h.m() {
        line(&mut out, h.row(c).iter().map(|v| v + 1));
    }
    out
}

const MAX_RESTARTS: usize = 200;

/// Random `(wc, wr)`-regular matrix of length `n`, deterministic in `seed`.
///
/// Column sockets are shuffled and dealt into rows; a socket that would
/// repeat an edge is swapped with a random compatible socket elsewhere, and
/// the whole deal restarts a bounded number of times if no swap exists.
pub fn generate_regular(n: usize, wc: usize, wr: usize, seed: u64) -> Result<ParityCheckMatrix, CodeError> {
    if wc < 2 || wr < 2 {
        return Err(CodeError::InfeasibleParameters(format!("weights must be >= 2 (wc={wc}, wr={wr})")));
    }
    if n == 0 || !(n * wc).is_multiple_of(wr) {
        return Err(CodeError::InfeasibleParameters(format!("n*wc = {} not divisible by wr = {wr}", n * wc)));
    }
    let m = n * wc / wr;
    if wr > n || wc > m {
        return Err(CodeError::InfeasibleParameters(format!(
            "weights exceed dimensions (n={n}, m={m}, wc={wc}, wr={wr})"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = n * wc;
    'restart: for _ in 0..MAX_RESTARTS {
        let mut sockets: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, wc)).collect();
        sockets.shuffle(&mut rng);
        let row_of = |i: usize| i / wr;
        let in_row = |s: &[usize], r: usize, v: usize, skip: usize| {
            (r * wr..(r + 1) * wr).any(|j| j != skip && s[j] == v)
        };

        for idx in 0..total {
            let r = row_of(idx);
            // Only slots before idx in the current row are dealt.
            if !sockets[r * wr..idx].contains(&sockets[idx]) {
                continue;
            }
            let mut fixed = false;
            for _ in 0..4 * total {
                let j = rng.random_range(0..total);
                let rj = row_of(j);
                if rj == r {
                    continue;
                }
                let (a, b) = (sockets[idx], sockets[j]);
                if sockets[r * wr..idx].contains(&b) {
                    continue;
                }
                // An already-dealt row must stay duplicate-free.
                if j < idx && in_row(&sockets, rj, a, j) {
                    continue;
                }
                sockets.swap(idx, j);
                fixed = true;
                break;
            }
            if !fixed {
                continue 'restart;
            }
        }

        let rows = sockets.chunks(wr).map(<[usize]>::to_vec).collect();
        return ParityCheckMatrix::from_rows(n, rows);
    }
    Err(CodeError::InfeasibleParameters(format!(
        "no duplicate-free ({wc},{wr}) matrix found for n={n} after {MAX_RESTARTS} attempts"
    )))
}

/// A 4×7 parity-check matrix of the (7,4) Hamming code: the three
/// independent Hamming checks plus their GF(2) sum as a redundant fourth row.
pub fn hamming_7_4() -> ParityCheckMatrix {
    ParityCheckMatrix::from_dense(&[
        &[1, 1, 0, 1, 1, 0, 0],
        &[1, 0, 1, 1, 0, 1, 0],
        &[0, 1, 1, 1, 0, 0, 1],
        &[0, 0, 0, 1, 1, 1, 1],
    ])
    .expect("static matrix is valid")
}
