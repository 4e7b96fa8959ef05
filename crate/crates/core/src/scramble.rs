//! The scrambling permutation induced by the mesh placement, and a framed
//! byte-block scrambler built on it.
//!
//! Orientation: `sigma` maps a position to the position whose content lands
//! there, so `scramble(M)[p] = M[sigma(p)]`. Scrambling the label matrix
//! therefore reproduces the placement table. This is a permutation demo, not a
//! cipher.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{GridPosition, Matrix};
use crate::perm::{CycleDecomposition, Permutation};
use crate::placement::placement_of;

/// Largest `n` accepted by [`order_table`].
pub const ORDER_TABLE_MAX_N: usize = 64;

pub fn scramble_permutation(n: usize) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let map = (0..n * n)
        .map(|label| {
            let pair = placement_of(n, GridPosition::from_label(n, label))?;
            Ok(pair.as_position().label(n))
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::from_map(map)
}

/// `result[p] = m[perm(p)]` over row-major labels.
pub fn permute_cells<T: Clone>(m: &Matrix<T>, perm: &Permutation) -> Result<Matrix<T>> {
    let len = m.n() * m.n();
    if perm.len() != len {
        return Err(Error::LabelSetMismatch {
            left: perm.len(),
            right: len,
        });
    }
    let cells = m.as_slice();
    Ok(Matrix::from_cells_unchecked(
        m.n(),
        perm.as_slice()
            .iter()
            .map(|&src| cells[src].clone())
            .collect(),
    ))
}

pub fn scramble<T: Clone>(m: &Matrix<T>) -> Result<Matrix<T>> {
    permute_cells(m, &scramble_permutation(m.n())?)
}

pub fn descramble<T: Clone>(m: &Matrix<T>) -> Result<Matrix<T>> {
    permute_cells(m, &scramble_permutation(m.n())?.inverse())
}

/// `scramble` applied `k` times, via `sigma^k`.
pub fn iterate_scramble<T: Clone>(m: &Matrix<T>, k: u64) -> Result<Matrix<T>> {
    permute_cells(m, &scramble_permutation(m.n())?.pow(k))
}

pub fn scramble_cycles(n: usize) -> Result<CycleDecomposition> {
    Ok(scramble_permutation(n)?.cycles())
}

pub fn scramble_order(n: usize) -> Result<BigUint> {
    Ok(scramble_cycles(n)?.order)
}

/// Tracks repeated application of the scramble on one grid size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScrambleState {
    pub n: usize,
    pub sigma: Permutation,
    pub k_applied: u64,
}

impl ScrambleState {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            sigma: scramble_permutation(n)?,
            k_applied: 0,
        })
    }

    /// Scrambles `m` once more and records the application.
    pub fn apply<T: Clone>(&mut self, m: &Matrix<T>) -> Result<Matrix<T>> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: m.n(),
            });
        }
        let out = permute_cells(m, &self.sigma)?;
        self.k_applied += 1;
        Ok(out)
    }

    /// `sigma^k_applied`: the net permutation applied so far.
    pub fn net(&self) -> Permutation {
        self.sigma.pow(self.k_applied)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRow {
    pub n: usize,
    pub order: u64,
    /// Cycle lengths, ascending, fixed points included.
    pub cycle_lengths: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderTable {
    pub rows: Vec<OrderRow>,
}

pub fn order_table(n_min: usize, n_max: usize) -> Result<OrderTable> {
    if n_min == 0 || n_min > n_max || n_max > ORDER_TABLE_MAX_N {
        return Err(Error::InvalidRange {
            from: n_min,
            to: n_max,
            max: ORDER_TABLE_MAX_N,
        });
    }
    let rows = (n_min..=n_max)
        .map(|n| {
            let d = scramble_cycles(n)?;
            Ok(OrderRow {
                n,
                // Every order up to n = 64 is below 2^56.
                order: d.order.to_u64().expect("order fits in u64 for n <= 64"),
                cycle_lengths: d.lengths(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderTable { rows })
}

fn join_lengths(lens: &[usize], sep: &str) -> String {
    lens.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

impl OrderTable {
    /// Columns `n,order,cycle_lengths`; lengths joined with `;`.
    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["n", "order", "cycle_lengths"])?;
        for row in &self.rows {
            wtr.write_record([
                row.n.to_string(),
                row.order.to_string(),
                join_lengths(&row.cycle_lengths, ";"),
            ])?;
        }
        let bytes = wtr.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is ascii"))
    }

    /// `n order [lengths]`, one row per line.
    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{} {} [{}]",
                row.n,
                row.order,
                join_lengths(&row.cycle_lengths, ",")
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.rows)?)
    }
}

pub const BLOCK_MAGIC: &[u8; 4] = b"MMS1";
/// Original length (u64 BE), n (u8), k (u32 BE).
pub const BLOCK_HEADER_LEN: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockHeader {
    pub original_len: u64,
    pub n: u8,
    pub k: u32,
}

impl BlockHeader {
    pub fn to_bytes(self) -> [u8; BLOCK_HEADER_LEN] {
        let mut out = [0u8; BLOCK_HEADER_LEN];
        out[..8].copy_from_slice(&self.original_len.to_be_bytes());
        out[8] = self.n;
        out[9..].copy_from_slice(&self.k.to_be_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < BLOCK_MAGIC.len() + BLOCK_HEADER_LEN {
            return Err(Error::Malformed("truncated header".into()));
        }
        if &bytes[..4] != BLOCK_MAGIC {
            return Err(Error::Malformed("bad magic".into()));
        }
        let h = &bytes[4..4 + BLOCK_HEADER_LEN];
        Ok(Self {
            original_len: u64::from_be_bytes(h[..8].try_into().expect("8 bytes")),
            n: h[8],
            k: u32::from_be_bytes(h[9..13].try_into().expect("4 bytes")),
        })
    }
}

fn check_block_params(n: usize, k: u32) -> Result<u8> {
    let n8 = u8::try_from(n)
        .ok()
        .filter(|&n| n >= 2)
        .ok_or_else(|| Error::InvalidScrambleParams(format!("n must be in 2..=255, got {n}")))?;
    if k == 0 {
        return Err(Error::InvalidScrambleParams("k must be at least 1".into()));
    }
    Ok(n8)
}

/// Splits `payload` into `n^2`-byte blocks (last one zero padded), scrambles
/// each block `k` times as a row-major grid, and frames the result as
/// `MMS1 | len u64 BE | n u8 | k u32 BE | blocks`.
pub fn block_scramble(payload: &[u8], n: usize, k: u32) -> Result<Vec<u8>> {
    if payload.is_empty() {
        return Err(Error::EmptyPayload);
    }
    let n8 = check_block_params(n, k)?;
    let perm = scramble_permutation(n)?.pow(u64::from(k));
    let block = n * n;
    let header = BlockHeader {
        original_len: payload.len() as u64,
        n: n8,
        k,
    };
    let mut out = Vec::with_capacity(4 + BLOCK_HEADER_LEN + payload.len().div_ceil(block) * block);
    out.extend_from_slice(BLOCK_MAGIC);
    out.extend_from_slice(&header.to_bytes());
    let mut buf = vec![0u8; block];
    for chunk in payload.chunks(block) {
        buf[..chunk.len()].copy_from_slice(chunk);
        buf[chunk.len()..].fill(0);
        out.extend(perm.as_slice().iter().map(|&src| buf[src]));
    }
    Ok(out)
}

/// Inverse of [`block_scramble`]; reads `n` and `k` from the header.
pub fn block_descramble(data: &[u8]) -> Result<Vec<u8>> {
    let header = BlockHeader::parse(data)?;
    let n = usize::from(header.n);
    check_block_params(n, header.k)?;
    if header.original_len == 0 {
        return Err(Error::EmptyPayload);
    }
    let body = &data[4 + BLOCK_HEADER_LEN..];
    let block = n * n;
    let original_len = usize::try_from(header.original_len)
        .map_err(|_| Error::Malformed("length does not fit in memory".into()))?;
    let expected = original_len.div_ceil(block) * block;
    if body.len() != expected {
        return Err(Error::Malformed(format!(
            "body is {} bytes, header implies {expected}",
            body.len()
        )));
    }
    let perm = scramble_permutation(n)?.pow(u64::from(header.k));
    let mut out = Vec::with_capacity(body.len());
    let mut buf = vec![0u8; block];
    for chunk in body.chunks(block) {
        // scrambled[p] = plain[perm(p)], so plain[perm(p)] = scrambled[p].
        for (p, &src) in perm.as_slice().iter().enumerate() {
            buf[src] = chunk[p];
        }
        out.extend_from_slice(&buf);
    }
    out.truncate(original_len);
    Ok(out)
}
