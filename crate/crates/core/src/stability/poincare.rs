//! Spectral gap above the degree ≤ 1 modes.

use crate::error::{invalid, Result};
use crate::numeric::sphere_area;
use crate::spherefield::{low_mode_coefficients, sobolev_norms, QuadratureGrid, RadialField};

/// ‖∇u₊‖² − 2(n+1)‖u₊‖², u₊ = u minus its degree 0 and 1 components.
/// The grid must integrate u² exactly.
pub fn poincare_gap(u: &RadialField, grid: &QuadratureGrid) -> Result<f64> {
    let n = u.n();
    if grid.n() != n {
        return Err(invalid("grid and field dimensions differ"));
    }
    if grid.exactness() < 2 * u.degree() {
        return Err(invalid(format!(
            "grid exactness {} below twice the field degree {}",
            grid.exactness(),
            u.degree()
        )));
    }
    let low = low_mode_coefficients(u, grid);
    let om = sphere_area(n);
    let y1 = ((n as f64 + 1.0) / om).sqrt();
    let mut plus = u.add_scaled(-low.a0 / om.sqrt(), &RadialField::constant(n, 1.0));
    for (i, a) in low.a1.iter().enumerate() {
        plus = plus.add_scaled(-a * y1, &RadialField::coordinate(n, i));
    }
    let norms = sobolev_norms(&plus, grid);
    Ok(norms.grad_l2_sq - 2.0 * (n as f64 + 1.0) * norms.l2_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spherefield::{harmonic_basis, harmonic_combination};

    #[test]
    fn equality_on_degree_two() {
        for n in 2..4 {
            let g = QuadratureGrid::build(n, 6).unwrap();
            for y in harmonic_basis(n, 2).unwrap() {
                assert!(poincare_gap(&y, &g).unwrap().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degree_three_gap_in_two_dimensions() {
        let g = QuadratureGrid::build(2, 8).unwrap();
        let u = harmonic_combination(2, &[(3, 1, 0.8), (3, 5, -0.3)]).unwrap();
        let l2 = 0.8f64.powi(2) + 0.3f64.powi(2);
        assert!((poincare_gap(&u, &g).unwrap() - 6.0 * l2).abs() < 1e-10);
    }

    #[test]
    fn low_modes_are_ignored() {
        let g = QuadratureGrid::build(2, 6).unwrap();
        let u = harmonic_combination(2, &[(0, 0, 3.0), (1, 2, -1.0), (2, 0, 0.5)]).unwrap();
        assert!(poincare_gap(&u, &g).unwrap().abs() < 1e-10);
        assert!(poincare_gap(&u, &QuadratureGrid::build(2, 3).unwrap()).is_err());
    }

    #[test]
    fn random_field_gap_matches_spectrum() {
        let g = QuadratureGrid::build(2, 10).unwrap();
        let u = crate::spherefield::random_harmonic_field(2, &[0, 1, 2, 3, 4], 11).unwrap();
        let mut want = 0.0;
        for l in 2..5u32 {
            let c = crate::spherefield::harmonic_coefficients(&u, l, &g).unwrap();
            let lam = (l * (l + 1)) as f64;
            want += (lam - 6.0) * c.iter().map(|x| x * x).sum::<f64>();
        }
        let gap = poincare_gap(&u, &g).unwrap();
        assert!((gap - want).abs() <= 1e-9 * want.abs().max(1.0), "{gap} {want}");
    }
}
