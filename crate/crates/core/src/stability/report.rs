//! End-to-end evaluation of the stability inequalities on one surface.

use serde::Serialize;

use super::asymmetry::{fraenkel, fraenkel_origin};
use super::barycenter::{barycenter_residual, barycenter_scale};
use crate::error::{Error, Result};
use crate::expansions::{stability_constant, StabilityTheorem};
use crate::hypersurface::NearlySphericalSurface;
use crate::integrals::{deficit, quermass, volume, weighted_integral};

/// Relative slack on the constraints accepted by [`theorem_report`].
const PRECONDITION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub theorem: StabilityTheorem,
    pub n: usize,
    pub k: i64,
    pub j: i64,
    pub rho: f64,
    pub curvature: i64,
    /// Left side of the inequality.
    pub lhs: f64,
    /// Minimized symmetric difference, normalized like `asymmetry_origin`.
    pub asymmetry: f64,
    /// Origin-centered symmetric difference (divided by the ball volume in
    /// the Euclidean theorems).
    pub asymmetry_origin: f64,
    pub asymmetry_converged: bool,
    pub constant: f64,
    /// The quantity the constant multiplies: asymmetry_origin², or
    /// ‖u‖² + ½‖∇u‖² for the Euclidean lower bound.
    pub measure: f64,
    /// lhs − constant·measure
    pub margin: f64,
    pub eps_hat: f64,
}

impl StabilityReport {
    /// lhs ≥ (1 − η)·constant·measure
    pub fn passes(&self, eta: f64) -> bool {
        self.lhs >= (1.0 - eta) * self.constant * self.measure
    }
}

/// Check A_j(Ω) = ψ_j(ρ) and the barycenter condition to within the report
/// tolerance.
pub fn check_constraints(s: &NearlySphericalSurface, j: i64) -> Result<()> {
    let f = s.form();
    let target = f.ball_quermass(j, s.rho())?;
    let qj = quermass(s, j)?;
    if (qj - target).abs() > PRECONDITION_TOL * target.abs() {
        return Err(Error::Precondition(format!("A_{j} = {qj} differs from the ball value {target}")));
    }
    let scale = barycenter_scale(&f, s.rho()).max(1.0);
    let bar = barycenter_residual(s);
    if bar.iter().any(|b| b.abs() > PRECONDITION_TOL * scale) {
        return Err(Error::Precondition(format!("barycenter residual {bar:?} is not zero")));
    }
    Ok(())
}

pub fn theorem_report(
    s: &NearlySphericalSurface,
    k: i64,
    j: i64,
    theorem: StabilityTheorem,
) -> Result<StabilityReport> {
    let f = s.form();
    let rho = s.rho();
    theorem.check(&f, k, j)?;
    let euclidean = matches!(theorem, StabilityTheorem::T1_2 | StabilityTheorem::VwLower | StabilityTheorem::VwAlpha);
    if euclidean && rho != 1.0 {
        return Err(Error::Precondition(format!("{theorem} is stated about the unit ball, got rho = {rho}")));
    }
    check_constraints(s, j)?;
    let constant = stability_constant(theorem, &f, k, j, rho)?;

    let lhs = match theorem {
        StabilityTheorem::T1_1 => deficit(s, k, j)?.deficit,
        StabilityTheorem::T1_2 => {
            let w = theorem.weight().expect("weighted theorem");
            let ball = f.ball_weighted_integral(k, w, rho)?;
            (weighted_integral(s, k, w)? - ball) / ball
        }
        StabilityTheorem::T1_3Phi | StabilityTheorem::T1_3PhiPrime => {
            let w = theorem.weight().expect("weighted theorem");
            weighted_integral(s, k, w)? - f.ball_weighted_integral(k, w, rho)?
        }
        StabilityTheorem::VwLower => quermass(s, k)? - f.ball_quermass(k, rho)?,
        StabilityTheorem::VwAlpha => {
            let d = deficit(s, k, j)?;
            d.deficit / d.ball_k
        }
    };

    let norm = if euclidean { volume(s) } else { 1.0 };
    let origin = fraenkel_origin(s)? / norm;
    let best = fraenkel(s)?;
    let asymmetry = (best.value / norm).min(origin);
    let measure = match theorem {
        StabilityTheorem::VwLower => s.norms().l2_sq + 0.5 * s.norms().grad_l2_sq,
        _ => origin * origin,
    };
    Ok(StabilityReport {
        theorem,
        n: f.n,
        k,
        j,
        rho,
        curvature: f.curvature.as_int(),
        lhs,
        asymmetry,
        asymmetry_origin: origin,
        asymmetry_converged: best.converged,
        constant,
        measure,
        margin: lhs - constant * measure,
        eps_hat: s.eps_hat(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaceform::{Curvature, SpaceForm};
    use crate::spherefield::{harmonic_combination, QuadratureGrid, RadialField};
    use crate::stability::fit_constraints;
    use std::sync::Arc;

    #[test]
    fn sphere_report_is_trivial() {
        let g = Arc::new(QuadratureGrid::build(2, 8).unwrap());
        let form = SpaceForm::new(Curvature::Hyperbolic, 2).unwrap();
        let s = NearlySphericalSurface::new(form, 1.0, RadialField::zero(2), g).unwrap();
        let r = theorem_report(&s, 1, 0, StabilityTheorem::T1_1).unwrap();
        assert!(r.lhs.abs() < 1e-12 && r.asymmetry_origin < 1e-12 && r.margin.abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_theorem_margin_is_positive() {
        let g = Arc::new(QuadratureGrid::build(2, 16).unwrap());
        let form = SpaceForm::new(Curvature::Hyperbolic, 2).unwrap();
        let shape = harmonic_combination(2, &[(2, 0, 1.0)]).unwrap();
        let fit = fit_constraints(&form, 1.0, 0, &shape, 1e-2, &g).unwrap();
        let r = theorem_report(&fit.surface, 1, 0, StabilityTheorem::T1_1).unwrap();
        assert!(r.margin > 0.0 && r.passes(0.1), "{r:?}");
        assert!(r.asymmetry <= r.asymmetry_origin);
    }

    #[test]
    fn unconstrained_surface_is_rejected() {
        let g = Arc::new(QuadratureGrid::build(2, 8).unwrap());
        let form = SpaceForm::new(Curvature::Hyperbolic, 2).unwrap();
        let s = NearlySphericalSurface::new(form, 1.0, RadialField::constant(2, 0.01), g).unwrap();
        assert!(matches!(theorem_report(&s, 1, 0, StabilityTheorem::T1_1), Err(Error::Precondition(_))));
    }
}
