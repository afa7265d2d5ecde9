//! Numerical checks for the Godbillon-Vey-Losik class of Reeb foliations.
//!
//! Frame coordinates `(x0, x1, x2)` on the second-order frame bundle of the
//! line carry lifts of maps and vector fields ([`frame`]). A Szekeres field
//! `V(x) = -exp(-x^-α)` generates the holonomy ([`szekeres`]). The class is
//! trivial on a region when a 2-form `ω ↔ (A, B, C)` is invariant under the
//! lifted flow and has `div W = 1`; [`gvl`] builds and checks such forms and
//! [`probe`] studies what happens at the boundary plane `x0 = 0`.
//!
//! ```
//! use reeb_gvl::frame::{divergence, FramePoint};
//! use reeb_gvl::gvl::{pde_residual, ClosedWitness};
//! use reeb_gvl::szekeres::ReebProfile;
//!
//! let w = ClosedWitness::new(2.0).unwrap();
//! let p = FramePoint::new(0.2, 0.0, 0.0);
//! let r = pde_residual(&ReebProfile::positive(2.0).unwrap(), &w, &p).unwrap();
//! assert!(r.iter().all(|v| v.abs() < 1e-12));
//! assert!((divergence(&w, &p).unwrap() - 1.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod extrapolate;
pub mod frame;
pub mod grid;
pub mod gvl;
pub mod jets;
pub mod probe;
pub mod quadrature;
pub mod report;
pub mod szekeres;

pub use error::{Error, Result};
