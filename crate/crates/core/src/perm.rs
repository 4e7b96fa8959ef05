//! Permutations on `0..len` with composition, powers, inverse and disjoint
//! cycle decomposition.
//!
//! Labels are plain indices. For scrambles on an `n x n` grid a label is the
//! row-major index of a [`GridPosition`], so ordering labels numerically
//! orders positions lexicographically by `(r, c)`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{render_label, GridPosition};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Self {
            map: (0..len).collect(),
        }
    }

    /// Builds a permutation from its image list, `map[x] = p(x)`.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &y in &map {
            match seen.get_mut(y) {
                Some(slot) if !*slot => *slot = true,
                _ => return Err(Error::NotBijective(y)),
            }
        }
        Ok(Self { map })
    }

    /// Builds a permutation from disjoint cycles; labels not mentioned are fixed.
    pub fn from_cycles(len: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut map: Vec<usize> = (0..len).collect();
        let mut touched = vec![false; len];
        for cycle in cycles {
            for (idx, &x) in cycle.iter().enumerate() {
                match touched.get_mut(x) {
                    Some(t) if !*t => *t = true,
                    _ => return Err(Error::NotBijective(x)),
                }
                map[x] = cycle[(idx + 1) % cycle.len()];
            }
        }
        Ok(Self { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LabelSetMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Self {
            map: other.map.iter().map(|&y| self.map[y]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Self { map: inv }
    }

    /// `self` composed with itself `k` times, by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut result = Self::identity(self.len());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base).expect("same label set");
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base).expect("same label set");
            }
        }
        result
    }

    /// Canonical cycle form: every label appears once (fixed points as
    /// 1-cycles), each cycle starts at its smallest label, cycles sorted by
    /// their first label.
    pub fn cycles(&self) -> CycleDecomposition {
        let mut seen = vec![false; self.len()];
        let mut cycles = Vec::new();
        // Scanning in ascending order means each cycle is first reached at its
        // minimum label, and cycles come out sorted by that label.
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.map[x];
            }
            cycles.push(cycle);
        }
        let order = cycles
            .iter()
            .fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.len())));
        CycleDecomposition { cycles, order }
    }

    pub fn order(&self) -> BigUint {
        self.cycles().order
    }

    /// Smallest `k >= 1` with `self^k = id`, found by literal iteration.
    /// `None` if it exceeds `limit`.
    pub fn order_by_iteration(&self, limit: u64) -> Option<u64> {
        let mut current = self.clone();
        for k in 1..=limit {
            if current.is_identity() {
                return Some(k);
            }
            current = current.compose(self).expect("same label set");
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
    pub order: BigUint,
}

impl CycleDecomposition {
    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    /// Cycle lengths, ascending.
    pub fn lengths(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles.iter().map(Vec::len).collect();
        lens.sort_unstable();
        lens
    }

    pub fn to_permutation(&self) -> Permutation {
        let len = self.cycles.iter().map(Vec::len).sum();
        Permutation::from_cycles(len, &self.cycles).expect("cycles are disjoint")
    }

    /// Whether `cycle` (given in any rotation) is one of the cycles.
    pub fn contains_rotation_of(&self, cycle: &[usize]) -> bool {
        self.cycles.iter().any(|c| same_up_to_rotation(c, cycle))
    }

    /// Equality with another list of cycles, each compared up to rotation and
    /// the list compared up to order.
    pub fn matches_up_to_rotation(&self, other: &[Vec<usize>]) -> bool {
        self.cycles.len() == other.len() && other.iter().all(|c| self.contains_rotation_of(c))
    }

    /// Cycle notation over grid labels, e.g. `(11) (12 22 21)` for `n = 2`.
    pub fn render_grid(&self, n: usize) -> String {
        self.cycles
            .iter()
            .map(|cycle| {
                let body: Vec<String> = cycle
                    .iter()
                    .map(|&l| {
                        let p = GridPosition::from_label(n, l);
                        render_label(n, p.r, p.c)
                    })
                    .collect();
                format!("({})", body.join(" "))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn same_up_to_rotation(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|shift| (0..a.len()).all(|i| a[(i + shift) % a.len()] == b[i]))
}
