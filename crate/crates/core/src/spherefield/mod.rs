//! Fields on Sⁿ: polynomial representation, covariant jets, quadrature,
//! spherical harmonics and Hessian integral identities.

pub mod field;
pub mod grid;
pub mod harmonics;
pub mod identities;
pub mod polynomial;

pub use field::{low_mode_coefficients, sobolev_norms, FieldJet, LowModes, NodalJets, RadialField, SobolevNorms};
pub use grid::{GridCertificate, JetFrame, QuadratureGrid};
pub use harmonics::{
    harmonic_basis, harmonic_coefficients, harmonic_combination, harmonic_dimension, random_harmonic_field,
};
pub use identities::{hessian_integral_identities, HessianIdentity, IdentityReport, IdentityResidual};
pub use polynomial::{AmbientPolynomial, Term};
