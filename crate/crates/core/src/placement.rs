//! Where each product component `c_ij` forms on the mesh array.
//!
//! Number the anti-diagonals `d = r + c - 1` (so `1..=2n-1`). Along each
//! anti-diagonal one subscript is held fixed at `F = min(d, 2n + 1 - d)`: the
//! first subscript on odd `d`, the second on even `d`. The other subscript
//! starts at the far end of the anti-diagonal and steps down by two, then
//! turns around and climbs back up through the values it skipped:
//!
//! ```text
//! L = min(d, 2n - d)                     anti-diagonal length
//! m = r            (d <= n)              position along it, 1..=L
//!   = r - (d - n)  (d >  n)
//! v = L + 2 - 2m   (2m <= L + 1)
//!   = 2m - L - 1   (otherwise)
//! ```
//!
//! The placement is then `(F, v)` on odd anti-diagonals and `(v, F)` on even
//! ones. For `n = 4` this gives
//!
//! ```text
//! 11 22 33 44
//! 12 31 24 43
//! 32 14 41 23
//! 34 42 13 21
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{GridPosition, IndexPair, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiDiagonalCoords {
    /// Anti-diagonal index `r + c - 1`, in `1..=2n-1`.
    pub d: usize,
    /// Number of cells on the anti-diagonal.
    pub len: usize,
    /// Position along the anti-diagonal, counted from its top row.
    pub m: usize,
    /// The subscript held constant on this anti-diagonal.
    pub fixed: usize,
    /// The subscript that varies along it.
    pub varying: usize,
}

impl AntiDiagonalCoords {
    /// Whether the fixed value sits in the first subscript.
    pub fn fixes_first(&self) -> bool {
        self.d % 2 == 1
    }

    pub fn pair(&self) -> IndexPair {
        if self.fixes_first() {
            IndexPair::new(self.fixed, self.varying)
        } else {
            IndexPair::new(self.varying, self.fixed)
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroDimension)
    } else {
        Ok(())
    }
}

pub fn anti_diagonal_coords(n: usize, pos: GridPosition) -> Result<AntiDiagonalCoords> {
    check_n(n)?;
    let GridPosition { r, c } = GridPosition::checked(n, pos.r, pos.c)?;
    let d = r + c - 1;
    let len = d.min(2 * n - d);
    let m = if d <= n { r } else { r - (d - n) };
    let fixed = d.min(2 * n + 1 - d);
    let varying = if 2 * m <= len + 1 {
        len + 2 - 2 * m
    } else {
        2 * m - len - 1
    };
    Ok(AntiDiagonalCoords {
        d,
        len,
        m,
        fixed,
        varying,
    })
}

/// The component `c_ij` that accumulates at node `pos`.
pub fn placement_of(n: usize, pos: GridPosition) -> Result<IndexPair> {
    Ok(anti_diagonal_coords(n, pos)?.pair())
}

/// The node at which `c_ij` accumulates; two-sided inverse of [`placement_of`].
pub fn locate(n: usize, pair: IndexPair) -> Result<GridPosition> {
    check_n(n)?;
    let IndexPair { i, j } = IndexPair::checked(n, pair.i, pair.j)?;
    // The fixed subscript F = min(d, 2n+1-d) pins d to one of two values per
    // parity; odd d fixes i, even d fixes j.
    let candidates = [
        (i, true),
        (2 * n + 1 - i, true),
        (j, false),
        (2 * n + 1 - j, false),
    ];
    for (d, fixes_first) in candidates {
        if d == 0 || d > 2 * n - 1 || (d % 2 == 1) != fixes_first {
            continue;
        }
        let varying = if fixes_first { j } else { i };
        let len = d.min(2 * n - d);
        if varying > len {
            continue;
        }
        // The descending branch has v with the parity of L, the ascending
        // branch the other parity.
        let m = if (len + varying) % 2 == 0 {
            (len + 2 - varying) / 2
        } else {
            (varying + len).div_ceil(2)
        };
        let r = if d <= n { m } else { m + (d - n) };
        if r == 0 || r > n || d + 1 < r {
            continue;
        }
        let c = d + 1 - r;
        if c == 0 || c > n {
            continue;
        }
        let pos = GridPosition::new(r, c);
        if placement_of(n, pos)? == pair {
            return Ok(pos);
        }
    }
    unreachable!("placement is a bijection; ({i},{j}) must be hosted somewhere for n={n}")
}

/// The full grid of hosted components for one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    table: Matrix<IndexPair>,
}

impl Placement {
    pub fn from_table(table: Matrix<IndexPair>) -> Self {
        Self { table }
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn at(&self, pos: GridPosition) -> IndexPair {
        self.table[pos]
    }

    pub fn row(&self, r: usize) -> &[IndexPair] {
        self.table.row(r)
    }

    pub fn table(&self) -> &Matrix<IndexPair> {
        &self.table
    }

    pub fn is_bijective(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n * n];
        self.table.as_slice().iter().all(|p| {
            if !(1..=n).contains(&p.i) || !(1..=n).contains(&p.j) {
                return false;
            }
            let slot = &mut seen[p.as_position().label(n)];
            !std::mem::replace(slot, true)
        })
    }

    /// Rows of two-digit labels (`"(i,j)"` cells once `n >= 10`), space separated.
    pub fn to_pretty(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        for row in self.table.rows() {
            let cells: Vec<String> = row.iter().map(|p| p.render(n)).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }

    /// One CSV record per row, each cell written as `"i,j"`.
    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        for row in self.table.rows() {
            wtr.write_record(row.iter().map(|p| format!("{},{}", p.i, p.j)))?;
        }
        let bytes = wtr.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is ascii"))
    }

    /// Array of rows, each an array of `[i, j]` pairs.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.json_rows())?)
    }

    pub fn json_rows(&self) -> Vec<Vec<[usize; 2]>> {
        self.table
            .rows()
            .map(|row| row.iter().map(|p| [p.i, p.j]).collect())
            .collect()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rows: Vec<Vec<[usize; 2]>> = serde_json::from_str(s)?;
        let rows = rows
            .into_iter()
            .map(|row| row.into_iter().map(|[i, j]| IndexPair::new(i, j)).collect())
            .collect();
        Ok(Self::from_table(Matrix::from_rows(rows)?))
    }
}

pub fn placement_table(n: usize) -> Result<Placement> {
    check_n(n)?;
    let table = Matrix::from_fn(n, |r, c| {
        placement_of(n, GridPosition::new(r, c)).expect("in range by construction")
    })?;
    Ok(Placement { table })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryClaim {
    /// Row 1 holds `11 22 .. nn`.
    RowOneDiagonal,
    /// Row `r` is row `n + 2 - r` reversed with each pair transposed.
    MirrorRows,
    /// For even `n`, row `n/2 + 1` is its own mirror image.
    MiddleRowSelfSymmetry,
    /// Odd anti-diagonals fix the first subscript, even ones the second, at
    /// `min(d, 2n + 1 - d)`.
    AntiDiagonalFixedSubscript,
    /// Every component appears exactly once.
    Bijective,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryViolation {
    pub claim: SymmetryClaim,
    pub pos: GridPosition,
    pub found: IndexPair,
    pub expected: Option<IndexPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub n: usize,
    pub row_one_diagonal: bool,
    pub mirror_rows: bool,
    /// `None` for odd `n`, where there is no self-paired middle row.
    pub middle_row_self_symmetry: Option<bool>,
    pub anti_diagonal_law: bool,
    pub bijective: bool,
    /// Row pairs `(r, n + 2 - r)` related by the mirror law, `r <= n + 2 - r`.
    pub mirror_pairs: Vec<(usize, usize)>,
    pub violations: Vec<SymmetryViolation>,
}

impl SymmetryReport {
    pub fn all_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every claimed symmetry of a placement table cell by cell. Works on
/// any table, so it can be pointed at printed tables as well as generated ones.
pub fn check_symmetries(placement: &Placement) -> SymmetryReport {
    let n = placement.n();
    let mut violations = Vec::new();
    let mut flag = |claim, pos, found, expected| {
        violations.push(SymmetryViolation {
            claim,
            pos,
            found,
            expected,
        })
    };

    for k in 1..=n {
        let pos = GridPosition::new(1, k);
        let found = placement.at(pos);
        if found != IndexPair::new(k, k) {
            flag(
                SymmetryClaim::RowOneDiagonal,
                pos,
                found,
                Some(IndexPair::new(k, k)),
            );
        }
    }

    let middle = (n.is_multiple_of(2) && n >= 2).then_some(n / 2 + 1);
    for r in 2..=n {
        for c in 1..=n {
            let pos = GridPosition::new(r, c);
            let found = placement.at(pos);
            let partner = GridPosition::new(n + 2 - r, n + 1 - c);
            let expected = placement.at(partner).transposed();
            if found != expected {
                let claim = if Some(r) == middle {
                    SymmetryClaim::MiddleRowSelfSymmetry
                } else {
                    SymmetryClaim::MirrorRows
                };
                flag(claim, pos, found, Some(expected));
            }
        }
    }

    for r in 1..=n {
        for c in 1..=n {
            let pos = GridPosition::new(r, c);
            let found = placement.at(pos);
            let d = r + c - 1;
            let fixed = d.min(2 * n + 1 - d);
            let slot = if d % 2 == 1 { found.i } else { found.j };
            if slot != fixed {
                flag(SymmetryClaim::AntiDiagonalFixedSubscript, pos, found, None);
            }
        }
    }

    let mut seen = std::collections::HashMap::new();
    for r in 1..=n {
        for c in 1..=n {
            let pos = GridPosition::new(r, c);
            let found = placement.at(pos);
            let in_range = (1..=n).contains(&found.i) && (1..=n).contains(&found.j);
            if !in_range || seen.insert(found, pos).is_some() {
                flag(SymmetryClaim::Bijective, pos, found, None);
            }
        }
    }

    let failed = |claim: SymmetryClaim| violations.iter().any(|v| v.claim == claim);
    SymmetryReport {
        n,
        row_one_diagonal: !failed(SymmetryClaim::RowOneDiagonal),
        mirror_rows: !failed(SymmetryClaim::MirrorRows),
        middle_row_self_symmetry: middle.map(|_| !failed(SymmetryClaim::MiddleRowSelfSymmetry)),
        anti_diagonal_law: !failed(SymmetryClaim::AntiDiagonalFixedSubscript),
        bijective: !failed(SymmetryClaim::Bijective),
        mirror_pairs: (2..=n)
            .filter(|&r| r <= n + 2 - r)
            .map(|r| (r, n + 2 - r))
            .collect(),
        violations,
    }
}

pub fn verify_symmetries(n: usize) -> Result<SymmetryReport> {
    Ok(check_symmetries(&placement_table(n)?))
}
