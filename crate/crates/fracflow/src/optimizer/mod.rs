//! Solution of the constrained interface minimization: sparse factorizations
//! for the inner constraint solves, the reduced conjugate-gradient driver and
//! a direct saddle-point solve used as an oracle.

pub mod cg;
pub mod kkt;
pub mod ldl;
pub mod sparse;
pub mod state;

pub use cg::{CgOutcome, GradientEval, PsiLayout, ReducedSystem};
pub use kkt::{dense_constraint, solve_kkt_direct, KktSolution};
pub use ldl::LdlFactor;
pub use sparse::{Coo, Csr};
pub use state::{FiveFieldState, SolveReport};

/// Pointwise exchange fluxes `-eta (trace - h_F)` across the two interface
/// sides; their sum vanishes when the traces straddle the fracture value
/// symmetrically.
pub fn exchange_flux(eta: f64, trace_plus: f64, trace_minus: f64, h_f: f64) -> (f64, f64) {
    (-eta * (trace_plus - h_f), -eta * (trace_minus - h_f))
}
