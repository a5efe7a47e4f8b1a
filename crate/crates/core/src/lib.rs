//! Curvature integrals, quermassintegrals and stability diagnostics for
//! nearly spherical radial graphs ρ(1+u(x)) over Sⁿ in space forms of
//! curvature K ∈ {−1, 0, +1}.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod expansions;
pub mod hypersurface;
pub mod integrals;
pub mod jet;
pub mod numeric;
pub mod optimize;
pub mod spaceform;
pub mod spherefield;
pub mod stability;
pub mod symmpoly;

pub use error::{Error, Result};
pub use spaceform::{Curvature, PolarPoint, SpaceForm, Warp, Weight};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
