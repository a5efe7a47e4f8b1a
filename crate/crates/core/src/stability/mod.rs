//! Constraint enforcement, spectral and asymmetry estimates, and theorem
//! checks for nearly spherical domains.

pub mod asymmetry;
pub mod barycenter;
pub mod constraints;
pub mod poincare;
pub mod report;

pub use asymmetry::{fraenkel, fraenkel_from_radii, fraenkel_origin, offcenter_radial, FraenkelResult};
pub use barycenter::{barycenter_residual, barycenter_scale};
pub use constraints::{fit_constraints, ConstraintFit, CONSTRAINT_TOL, MAX_NEWTON_ITERATIONS};
pub use poincare::poincare_gap;
pub use report::{check_constraints, theorem_report, StabilityReport};
