//! First-order barycenter condition.

use crate::hypersurface::NearlySphericalSurface;
use crate::spaceform::SpaceForm;

/// ∫_{Sⁿ} x_l ∫₀^{ρ(1+u)} s φⁿ(s) ds dA for l = 1..n+1.
pub fn barycenter_residual(s: &NearlySphericalSurface) -> Vec<f64> {
    let f = s.form();
    let grid = s.grid();
    let moments: Vec<f64> = s.node_data().iter().map(|d| f.moment_integral(f.n, d.r)).collect();
    (0..=f.n)
        .map(|l| {
            let v: Vec<f64> = moments.iter().zip(grid.nodes()).map(|(m, x)| m * x[l]).collect();
            grid.integrate(&v)
        })
        .collect()
}

/// ω_n·∫₀^ρ sφⁿ(s) ds, the size of the integrand in [`barycenter_residual`].
pub fn barycenter_scale(form: &SpaceForm, rho: f64) -> f64 {
    form.omega() * form.moment_integral(form.n, rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaceform::Curvature;
    use crate::spherefield::{harmonic_combination, QuadratureGrid, RadialField};
    use std::sync::Arc;

    fn surface(c: Curvature, u: RadialField, rho: f64) -> NearlySphericalSurface {
        let g = Arc::new(QuadratureGrid::build(u.n(), 14).unwrap());
        NearlySphericalSurface::new(SpaceForm::new(c, u.n()).unwrap(), rho, u, g).unwrap()
    }

    #[test]
    fn sphere_and_even_fields_are_balanced() {
        for c in [Curvature::Hyperbolic, Curvature::Flat, Curvature::Spherical] {
            let b = barycenter_residual(&surface(c, RadialField::zero(2), 0.8));
            assert!(b.iter().all(|v| v.abs() < 1e-15));
            let u = harmonic_combination(2, &[(2, 0, 0.05), (2, 3, -0.03)]).unwrap();
            let b = barycenter_residual(&surface(c, u, 0.8));
            assert!(b.iter().all(|v| v.abs() < 1e-12), "{b:?}");
        }
    }

    #[test]
    fn linear_response_to_a_shift() {
        let rho = 1.0;
        for c in [Curvature::Hyperbolic, Curvature::Spherical] {
            let form = SpaceForm::new(c, 2).unwrap();
            let w = form.warp(rho).unwrap();
            for t in [1e-2, 1e-3] {
                let b = barycenter_residual(&surface(c, RadialField::coordinate(2, 0).scale(t), rho));
                // ∫x₁² dA = ω/(n+1)
                let want = rho * rho * w.phi.powi(2) * t * form.omega() / 3.0;
                assert!(((b[0] - want) / want).abs() <= 10.0 * t, "{c:?} t={t}");
                assert!(b[1].abs() < 1e-14 && b[2].abs() < 1e-14);
            }
        }
    }
}
