//! Simulation and analysis of the mesh array for `n x n` matrix
//! multiplication.
//!
//! * [`matrix`]: exact square matrices and the direct product used as oracle.
//! * [`perm`]: permutations, powers, cycle decomposition and order.
//! * [`placement`]: the closed-form law placing `c_ij` on the mesh grid, its
//!   inverse, and a symmetry verifier.
//! * [`sim`]: step-by-step simulation of the standard and mesh arrays.
//! * [`scramble`]: the scrambling permutation the placement induces and a
//!   framed byte-block scrambler.
//! * [`conformance`]: comparison against the published reference tables.
//!
//! ```
//! use mesh_array::prelude::*;
//!
//! let (a, b) = random_pair(4, 0).unwrap();
//! let report = simulate(SimConfig::new(ArrayKind::Mesh, 4), &a, &b).unwrap();
//! assert_eq!(report.total_steps, 7);
//! assert!(report.oracle_ok);
//! assert_eq!(placement_table(4).unwrap().to_pretty().lines().next(), Some("11 22 33 44"));
//! ```

pub mod conformance;
pub mod error;
pub mod matrix;
pub mod perm;
pub mod placement;
pub mod scramble;
pub mod sim;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::conformance::{
        paper_conformance, run_suite, ConformanceReport, ReferenceArtifacts, SuiteReport,
        REGISTERED_ERRATA,
    };
    pub use crate::error::{Error, Result};
    pub use crate::matrix::{
        label_matrix, matmul_direct, random_pair, GridPosition, IndexPair, IntMatrix, Matrix,
    };
    pub use crate::perm::{CycleDecomposition, Permutation};
    pub use crate::placement::{
        anti_diagonal_coords, locate, placement_of, placement_table, verify_symmetries,
        AntiDiagonalCoords, Placement, SymmetryReport,
    };
    pub use crate::scramble::{
        block_descramble, block_scramble, descramble, iterate_scramble, order_table, scramble,
        scramble_order, scramble_permutation, OrderTable,
    };
    pub use crate::sim::{
        finish_time_map, simulate, symmetric_readout_bound, symmetric_readout_time, total_steps,
        ArrayKind, SimConfig, SimReport,
    };
}
