//! Rigidity checks: the hypothesis chain through `g⁺`, the exterior
//! boundary-value problem, and the three-dimensional uniqueness chains.

pub mod appendix;
pub mod fit;
pub mod laplace;
pub mod main_theorem;

pub use appendix::{horizon_chain_from, photon_chain_from, run_appendix_b_horizon, run_appendix_b_photon, HorizonChain, PhotonChain};
pub use fit::{schwarzschild_fit, SchwarzschildFit};
pub use laplace::{solve_exterior_laplace, LaplaceGrid, RadialProfile};
pub use main_theorem::{run_main_theorem_check, Conclusion, RigidityOptions, RigidityVerdict, Violation};
