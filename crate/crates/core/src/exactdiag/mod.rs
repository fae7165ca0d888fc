//! Exact diagonalization in the maximal-spin sector of each block of
//! equivalent spins.
//!
//! Spins sharing the same transverse and longitudinal field are permutation
//! symmetric, so the low-lying states live in the product of the blocks'
//! maximal-spin multiplets, of dimension `prod_k (n_k + 1)`.

mod basis;
mod hamiltonian;
mod lanczos;
mod oracle;
mod scan;

pub use basis::SymmetricBasis;
pub use hamiltonian::{build_hamiltonian, hamiltonian_derivative, HamiltonianOptions, SparseHamiltonian};
pub use lanczos::{lowest_eigs, EigenOptions, Solver, SpectrumResult};
pub use oracle::{brute_force_oracle, ORACLE_MAX_SPINS};
pub use scan::{adiabatic_numerator, discrete_grid, gap_scan_ed, minimize_gap, AdiabaticEstimate, ScanPoint};
