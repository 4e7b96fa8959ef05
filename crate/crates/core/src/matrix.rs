//! Square matrices with 1-based indexing, grid/index coordinate types, and the
//! direct triple-loop product used as the reference for every simulator.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A node coordinate on the array, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPosition {
    pub r: usize,
    pub c: usize,
}

impl GridPosition {
    pub const fn new(r: usize, c: usize) -> Self {
        Self { r, c }
    }

    pub fn checked(n: usize, r: usize, c: usize) -> Result<Self> {
        if (1..=n).contains(&r) && (1..=n).contains(&c) {
            Ok(Self { r, c })
        } else {
            Err(Error::PositionOutOfRange { n, r, c })
        }
    }

    /// Row-major 0-based label index used by [`crate::perm::Permutation`].
    pub fn label(self, n: usize) -> usize {
        (self.r - 1) * n + (self.c - 1)
    }

    pub fn from_label(n: usize, label: usize) -> Self {
        Self {
            r: label / n + 1,
            c: label % n + 1,
        }
    }
}

impl fmt::Display for GridPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r, self.c)
    }
}

/// Subscripts of a product component `c_ij`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IndexPair {
    pub i: usize,
    pub j: usize,
}

impl IndexPair {
    pub const fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    pub fn checked(n: usize, i: usize, j: usize) -> Result<Self> {
        if (1..=n).contains(&i) && (1..=n).contains(&j) {
            Ok(Self { i, j })
        } else {
            Err(Error::PairOutOfRange { n, i, j })
        }
    }

    pub fn transposed(self) -> Self {
        Self {
            i: self.j,
            j: self.i,
        }
    }

    /// The pair read as a grid position (same numbers, different role).
    pub fn as_position(self) -> GridPosition {
        GridPosition::new(self.i, self.j)
    }

    /// Two-digit `"ij"` form for `n <= 9`, `"(i,j)"` otherwise.
    pub fn render(self, n: usize) -> String {
        render_label(n, self.i, self.j)
    }
}

impl From<GridPosition> for IndexPair {
    fn from(p: GridPosition) -> Self {
        Self { i: p.r, j: p.c }
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Concatenated-digit label notation. Only unambiguous while both parts are
/// single digits.
pub fn render_label(n: usize, a: usize, b: usize) -> String {
    if n <= 9 {
        format!("{a}{b}")
    } else {
        format!("({a},{b})")
    }
}

/// An `n x n` matrix stored row-major, addressed with 1-based `(row, col)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<T> {
    n: usize,
    cells: Vec<T>,
}

pub type IntMatrix = Matrix<i64>;

impl<T> Matrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut cells = Vec::with_capacity(n * n);
        for r in 1..=n {
            for c in 1..=n {
                cells.push(f(r, c));
            }
        }
        Ok(Self { n, cells })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Ok(Self {
            n,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&T> {
        if (1..=self.n).contains(&r) && (1..=self.n).contains(&c) {
            self.cells.get((r - 1) * self.n + (c - 1))
        } else {
            None
        }
    }

    pub fn row(&self, r: usize) -> &[T] {
        let start = (r - 1) * self.n;
        &self.cells[start..start + self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.cells.chunks(self.n)
    }

    /// Cells in row-major order.
    pub fn as_slice(&self) -> &[T] {
        &self.cells
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            cells: self.cells.iter().map(f).collect(),
        }
    }

    pub(crate) fn from_cells_unchecked(n: usize, cells: Vec<T>) -> Self {
        debug_assert_eq!(cells.len(), n * n);
        Self { n, cells }
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        let mut it = self.cells.into_iter();
        for _ in 0..n {
            out.push(it.by_ref().take(n).collect());
        }
        out
    }
}

impl<T: Clone> Matrix<T> {
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        Self {
            n,
            cells: (0..n * n)
                .map(|idx| self.cells[(idx % n) * n + idx / n].clone())
                .collect(),
        }
    }
}

impl<T> Index<GridPosition> for Matrix<T> {
    type Output = T;

    fn index(&self, p: GridPosition) -> &T {
        assert!(
            (1..=self.n).contains(&p.r) && (1..=self.n).contains(&p.c),
            "position {p} outside {0}x{0} matrix",
            self.n
        );
        &self.cells[p.label(self.n)]
    }
}

impl<T> IndexMut<GridPosition> for Matrix<T> {
    fn index_mut(&mut self, p: GridPosition) -> &mut T {
        assert!(
            (1..=self.n).contains(&p.r) && (1..=self.n).contains(&p.c),
            "position {p} outside {0}x{0} matrix",
            self.n
        );
        let n = self.n;
        &mut self.cells[p.label(n)]
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self[GridPosition::new(r, c)]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self[GridPosition::new(r, c)]
    }
}

impl<T: Zero + One + Clone> Matrix<T> {
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |r, c| if r == c { T::one() } else { T::zero() })
    }
}

/// The matrix whose cell `(r,c)` holds its own label `(r,c)`. Scrambling it
/// yields the placement table itself.
pub fn label_matrix(n: usize) -> Result<Matrix<IndexPair>> {
    Matrix::from_fn(n, IndexPair::new)
}

/// `C = A B` by the textbook triple loop, `c_ij = sum_k a_ik * b_kj`.
pub fn matmul_direct<T>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>>
where
    T: Zero + Clone + Add<Output = T> + Mul<Output = T>,
{
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    let n = a.n;
    Matrix::from_fn(n, |i, j| {
        (1..=n).fold(T::zero(), |acc, k| {
            acc + a[(i, k)].clone() * b[(k, j)].clone()
        })
    })
}

/// Smallest and largest entry produced by [`random_matrix`].
pub const RANDOM_ENTRY_RANGE: (i64, i64) = (-9, 9);

/// Deterministic integer matrix: entries drawn row-major, uniformly from
/// [`RANDOM_ENTRY_RANGE`], from the given ChaCha8 stream.
pub fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> Result<IntMatrix> {
    let (lo, hi) = RANDOM_ENTRY_RANGE;
    Matrix::from_fn(n, |_, _| rng.gen_range(lo..=hi))
}

/// A reproducible `(A, B)` pair for a seed: one ChaCha8 stream seeded with
/// `seed_from_u64(seed)`, A drawn first, then B.
pub fn random_pair(n: usize, seed: u64) -> Result<(IntMatrix, IntMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_matrix(n, &mut rng)?;
    let b = random_matrix(n, &mut rng)?;
    Ok((a, b))
}
