//! Quantum circuit composition with pre-merged blocks ("chiplets").
//!
//! - [`linalg`]: dense complex matrices and state vectors, Kronecker products.
//! - [`gates`]: the named gate set and embedding into n-qubit operators.
//! - [`circuit`]: layered circuits, chiplet merging/powers and simulation in
//!   full-matrix or state-update mode.
//! - [`qpr`]: symbolic polynomial states where gates act by substituting
//!   qubit variables.
//! - [`qae`]: amplitude estimation built from the pieces above.
//! - [`histogram`]: exact and sampled outcome tables.

pub mod circuit;
pub mod error;
pub mod gates;
pub mod histogram;
pub mod linalg;
pub mod qae;
pub mod qpr;

pub use circuit::{layer_matrix, merge, power, simulate, Chiplet, ChipletLibrary, Circuit, CircuitLayer, SimulationMode};
pub use error::{Error, Result};
pub use gates::{controlled, embed, embed_kron, gate_matrix, Control, Gate, GatePlacement, GateSource, Polarity};
pub use linalg::{apply, dagger, is_unitary, kron, matmul, normalize, ComplexMatrix, StateVector, C64};
pub use histogram::{total_variation, Histogram};
pub use qae::{build_qae, decode_amplitude, grover_q, inverse_qft, qft, run_qae, QaeConfig, QaeExpansion, QaeResult};
pub use qpr::{apply_qpr, collect, eval_qpr, init_qpr, probability, QprOp, QprPolynomial};
