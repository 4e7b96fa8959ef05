//! Discrete-time simulation of the standard and mesh multiply-accumulate
//! arrays.
//!
//! The simulator is schedule driven: on every clock tick each node asks the
//! feed schedule which operand pair (if any) arrives, multiplies it and adds
//! the product into its accumulator. Steps are 1-based and only ticks on which
//! some node performs a MAC are counted.
//!
//! * Mesh: node `(r,c)` hosts `c_ij` with `(i,j) = placement_of(n, (r,c))`
//!   and performs its `k`-th MAC on step `(r - 1) + k`.
//! * Standard: node `(i,j)` hosts `c_ij` and performs its `k`-th MAC on step
//!   `(i - 1) + (j - 1) + k` (skewed feed).

use std::fmt;
use std::io::Write;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{matmul_direct, GridPosition, IndexPair, Matrix};
use crate::placement::{locate, placement_of};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrayKind {
    Standard,
    Mesh,
}

impl fmt::Display for ArrayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArrayKind::Standard => "standard",
            ArrayKind::Mesh => "mesh",
        })
    }
}

impl FromStr for ArrayKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "standard" => Ok(ArrayKind::Standard),
            "mesh" => Ok(ArrayKind::Mesh),
            other => Err(format!("unknown array kind {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub kind: ArrayKind,
    pub n: usize,
    pub trace_enabled: bool,
}

impl SimConfig {
    pub fn new(kind: ArrayKind, n: usize) -> Self {
        Self {
            kind,
            n,
            trace_enabled: false,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace_enabled = true;
        self
    }
}

/// Step on which the node at `pos` performs its MAC number `k` (1-based).
pub fn mac_step(kind: ArrayKind, pos: GridPosition, k: usize) -> usize {
    start_offset(kind, pos) + k
}

fn start_offset(kind: ArrayKind, pos: GridPosition) -> usize {
    match kind {
        ArrayKind::Mesh => pos.r - 1,
        ArrayKind::Standard => (pos.r - 1) + (pos.c - 1),
    }
}

/// Which product component a node accumulates.
pub fn hosted_component(kind: ArrayKind, n: usize, pos: GridPosition) -> Result<IndexPair> {
    match kind {
        ArrayKind::Mesh => placement_of(n, pos),
        ArrayKind::Standard => Ok(GridPosition::checked(n, pos.r, pos.c)?.into()),
    }
}

fn host_position(kind: ArrayKind, n: usize, pair: IndexPair) -> Result<GridPosition> {
    match kind {
        ArrayKind::Mesh => locate(n, pair),
        ArrayKind::Standard => Ok(IndexPair::checked(n, pair.i, pair.j)?.as_position()),
    }
}

/// Closed-form step count: `2n - 1` for the mesh, `3n - 2` for the standard array.
pub fn total_steps(kind: ArrayKind, n: usize) -> usize {
    match kind {
        ArrayKind::Mesh => 2 * n - 1,
        ArrayKind::Standard => 3 * n - 2,
    }
}

/// Step on which each node performs its last MAC.
pub fn finish_time_map(kind: ArrayKind, n: usize) -> Result<Matrix<usize>> {
    Matrix::from_fn(n, |r, c| mac_step(kind, GridPosition::new(r, c), n))
}

/// Earliest step by which every distinct value of a symmetric product is
/// available: each unordered pair `{c_ij, c_ji}` is ready once the earlier of
/// its two hosting mesh nodes finishes. Timing only; values are never read.
pub fn symmetric_readout_time(n: usize) -> Result<usize> {
    let finish = finish_time_map(ArrayKind::Mesh, n)?;
    let mut worst = 0;
    for i in 1..=n {
        for j in i..=n {
            let a = finish[locate(n, IndexPair::new(i, j))?];
            let b = finish[locate(n, IndexPair::new(j, i))?];
            worst = worst.max(a.min(b));
        }
    }
    Ok(worst)
}

/// Upper bound on the symmetric readout step, `floor(3n/2 + 1)`.
pub fn symmetric_readout_bound(n: usize) -> usize {
    3 * n / 2 + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeState<T> {
    pub pos: GridPosition,
    pub hosted: IndexPair,
    pub accumulator: T,
    pub macs_done: usize,
    pub finish_step: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent<T> {
    pub step: usize,
    pub r: usize,
    pub c: usize,
    pub k: usize,
    pub a: T,
    pub b: T,
    pub acc: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimTrace<T> {
    pub events: Vec<TraceEvent<T>>,
}

impl<T> Default for SimTrace<T> {
    fn default() -> Self {
        Self { events: Vec::new() }
    }
}

impl<T: Serialize> SimTrace<T> {
    /// One JSON object per line with fields `step, r, c, k, a, b, acc`.
    pub fn write_json_lines<W: Write>(&self, mut w: W) -> Result<()> {
        for ev in &self.events {
            serde_json::to_writer(&mut w, ev)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_json_lines(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_json_lines(&mut buf)?;
        Ok(String::from_utf8(buf).expect("json is utf-8"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimReport<T> {
    pub kind: ArrayKind,
    pub n: usize,
    pub total_steps: usize,
    pub finish_times: Matrix<usize>,
    /// Product reassembled into standard order.
    pub output: Matrix<T>,
    /// Accumulator values as they sit on the grid.
    pub grid_values: Matrix<T>,
    pub nodes: Vec<NodeState<T>>,
    pub placement_ok: bool,
    pub oracle_ok: bool,
    pub trace: Option<SimTrace<T>>,
}

/// Exported summary: `total_steps`, row-major `finish_times`, and the two verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub total_steps: usize,
    pub finish_times: Vec<Vec<usize>>,
    pub placement_ok: bool,
    pub oracle_ok: bool,
}

impl<T> SimReport<T> {
    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            total_steps: self.total_steps,
            finish_times: self.finish_times.to_rows(),
            placement_ok: self.placement_ok,
            oracle_ok: self.oracle_ok,
        }
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.summary())?)
    }
}

pub fn simulate<T>(config: SimConfig, a: &Matrix<T>, b: &Matrix<T>) -> Result<SimReport<T>>
where
    T: Zero + Clone + PartialEq + Add<Output = T> + Mul<Output = T>,
{
    let n = config.n;
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    for m in [a, b] {
        if m.n() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: m.n(),
            });
        }
    }
    let kind = config.kind;

    let mut nodes = Vec::with_capacity(n * n);
    for r in 1..=n {
        for c in 1..=n {
            let pos = GridPosition::new(r, c);
            nodes.push(NodeState {
                pos,
                hosted: hosted_component(kind, n, pos)?,
                accumulator: T::zero(),
                macs_done: 0,
                finish_step: 0,
            });
        }
    }

    let mut trace = config.trace_enabled.then(SimTrace::default);
    let mut step = 0;
    let mut last_active = 0;
    let mut pending = nodes.len();
    while pending > 0 {
        step += 1;
        let mut active = false;
        for node in nodes.iter_mut() {
            // Feed: the operand pair for MAC k reaches this node on its scheduled step.
            let offset = start_offset(kind, node.pos);
            if step <= offset || step > offset + n {
                continue;
            }
            let k = step - offset;
            debug_assert_eq!(k, node.macs_done + 1);
            let IndexPair { i, j } = node.hosted;
            let lhs = a[(i, k)].clone();
            let rhs = b[(k, j)].clone();
            node.accumulator = node.accumulator.clone() + lhs.clone() * rhs.clone();
            node.macs_done += 1;
            active = true;
            if node.macs_done == n {
                node.finish_step = step;
                pending -= 1;
            }
            if let Some(t) = trace.as_mut() {
                t.events.push(TraceEvent {
                    step,
                    r: node.pos.r,
                    c: node.pos.c,
                    k,
                    a: lhs,
                    b: rhs,
                    acc: node.accumulator.clone(),
                });
            }
        }
        if active {
            last_active = step;
        }
    }

    let finish_times =
        Matrix::from_cells_unchecked(n, nodes.iter().map(|nd| nd.finish_step).collect());
    let grid_values =
        Matrix::from_cells_unchecked(n, nodes.iter().map(|nd| nd.accumulator.clone()).collect());

    let mut placement_ok = nodes.iter().all(|nd| nd.macs_done == n);
    let mut output_cells = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let host = host_position(kind, n, IndexPair::new(i, j))?;
            let node = &nodes[host.label(n)];
            placement_ok &= node.hosted == IndexPair::new(i, j);
            output_cells.push(node.accumulator.clone());
        }
    }
    let output = Matrix::from_cells_unchecked(n, output_cells);
    let oracle_ok = output == matmul_direct(a, b)?;

    let total_steps = nodes.iter().map(|nd| nd.finish_step).max().unwrap_or(0);
    debug_assert_eq!(total_steps, last_active);

    Ok(SimReport {
        kind,
        n,
        total_steps,
        finish_times,
        output,
        grid_values,
        nodes,
        placement_ok,
        oracle_ok,
        trace,
    })
}
