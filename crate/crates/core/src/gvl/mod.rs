//! Triviality machinery for the GVL class of the one-sided Reeb families.
//!
//! A 2-form `ω` with coefficient triple `W = (A, B, C)` trivializes the class when
//! it is invariant under the lifted Szekeres flow and `div W = 1`. Invariance is
//! the PDE system checked by [`pde_residual`]; the witnesses in [`witness`]
//! solve it, and [`average_form`] is the time-averaging operator that produces
//! invariant forms from arbitrary ones.

pub mod average;
pub mod cutoff;
pub mod residual;
pub mod sampling;
pub mod ucoords;
pub mod witness;

pub use average::{average_form, AveragedForm, DEFAULT_QUAD_N};
pub use cutoff::{phi_psi_standard, smooth_step, PhiPsi, PhiPsiJets, StandardPhiPsi, ZeroPhiPsi};
pub use residual::pde_residual;
pub use sampling::{AxisRange, GridSpec};
pub use ucoords::{domain_bound, in_guard, nu_log_margin, u_coords, UCoords};
pub use witness::{
    witness_closed, witness_general, witness_reflected, ClosedWitness, GeneralWitness,
    ReflectedWitness, WitnessDomain, MIN_FIELD,
};
