//! Exact normal-ordering engine for differential operators with quarter-integer
//! coordinate exponents and Gaussian-rational coefficients.

pub mod build;
mod diffop;
mod gauss;
pub mod text;
pub mod verify;

pub use build::{
    build_dilation_tail, build_hhat, build_jhat, build_jhat_tail, build_lhat, build_naive_tail,
    build_quantum_jalpha, build_weyl_tail, euler, rho, rho_sq, symmetric_euler,
};
pub use diffop::{commutator, multiply, DiffOp, OpTerm, QuarterExp, TermKey};
pub use gauss::GaussRat;
pub use text::render_lines;
pub use verify::{
    naive_commutator, naive_pattern, verify_aux_relations, verify_dilation_identity, verify_hk,
    verify_naive_noncommute, verify_son, verify_xpj_symmetry, Expectation, OperatorCheck, OperatorReport,
};
