//! Integral identities for the Hessian of a field on Sⁿ, checked through
//! their residual scaling under u → t·u.

use nalgebra::SymmetricEigen;
use rayon::prelude::*;
use serde::Serialize;

use super::field::{NodalJets, RadialField};
use super::grid::QuadratureGrid;
use crate::numeric::{fit_residual_slope, rounding_floor, t_ladder, SlopeFit};
use crate::symmpoly::{esf_unchecked, newton_chain};

/// Smallest slope accepted for the O(ε)‖∇u‖² remainders.
pub const MIN_SLOPE: f64 = 2.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HessianIdentity {
    /// ∫ uⁱu_j [T_m]ᵢʲ(D²u) = (m+2)/2 ∫ |∇u|² σ_m(D²u)
    GradientNewton,
    /// ∫ σ_m(D²u) = (n−m+1)/2 ∫ |∇u|² σ_{m−2}(D²u)
    SigmaReduction,
    /// ∫ σ_1(D²u) = 0
    Divergence,
    /// ∫ u σ_m(D²u) = −(m+1)/(2m) ∫ |∇u|² σ_{m−1}(D²u)
    ValueSigma,
    /// ∫ u² σ_m(D²u) = 0 up to the remainder
    SquareSigma,
}

impl HessianIdentity {
    pub fn number(self) -> usize {
        match self {
            HessianIdentity::GradientNewton => 1,
            HessianIdentity::SigmaReduction => 2,
            HessianIdentity::Divergence => 3,
            HessianIdentity::ValueSigma => 4,
            HessianIdentity::SquareSigma => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub identity: HessianIdentity,
    pub m: usize,
    pub ts: Vec<f64>,
    pub residuals: Vec<f64>,
    pub floors: Vec<f64>,
    pub fit: SlopeFit,
}

impl IdentityResidual {
    pub fn passes(&self) -> bool {
        self.fit.passes(MIN_SLOPE)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    /// |∫σ₁(D²u) dA| at t = 1.
    pub divergence_residual: f64,
    /// Rounding-level scale of that integral, ∫|σ₁(D²u)| dA.
    pub divergence_scale: f64,
    pub entries: Vec<IdentityResidual>,
}

impl IdentityReport {
    pub fn all_pass(&self, divergence_tol: f64) -> bool {
        self.divergence_residual <= divergence_tol && self.entries.iter().all(|e| e.passes())
    }
}

/// Per-node integrand data for one scaling of u.
struct NodeTerms {
    /// σ_0..σ_n of D²u
    sigma: Vec<f64>,
    /// uⁱu_j[T_m]ᵢʲ for m = 0..n
    grad_newton: Vec<f64>,
    u: f64,
    grad2: f64,
}

fn node_terms(j: &NodalJets, i: usize) -> NodeTerms {
    let n = j.n;
    let h = j.hess_at(i);
    let eig = SymmetricEigen::new(h.clone());
    let sigma = esf_unchecked(eig.eigenvalues.as_slice());
    let chain = newton_chain(&h, &sigma, n);
    let g = nalgebra::DVector::from_row_slice(j.grad_at(i));
    let grad_newton = chain.iter().map(|t| g.dot(&(t * &g))).collect();
    NodeTerms { sigma, grad_newton, u: j.value[i], grad2: j.grad_norm_sq(i) }
}

/// Left and right sides (and an absolute scale) of one identity.
fn sides(id: HessianIdentity, m: usize, n: usize, t: &[NodeTerms], grid: &QuadratureGrid) -> (f64, f64, f64) {
    let (lhs, rhs): (Vec<f64>, Vec<f64>) = match id {
        HessianIdentity::GradientNewton => {
            t.iter().map(|x| (x.grad_newton[m], (m as f64 + 2.0) / 2.0 * x.grad2 * x.sigma[m])).unzip()
        }
        HessianIdentity::SigmaReduction => {
            t.iter().map(|x| (x.sigma[m], (n - m + 1) as f64 / 2.0 * x.grad2 * x.sigma[m - 2])).unzip()
        }
        HessianIdentity::Divergence => t.iter().map(|x| (x.sigma[1], 0.0)).unzip(),
        HessianIdentity::ValueSigma => t
            .iter()
            .map(|x| (x.u * x.sigma[m], -(m as f64 + 1.0) / (2.0 * m as f64) * x.grad2 * x.sigma[m - 1]))
            .unzip(),
        HessianIdentity::SquareSigma => t.iter().map(|x| (x.u * x.u * x.sigma[m], 0.0)).unzip(),
    };
    let abs: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a.abs() + b.abs()).collect();
    (grid.integrate(&lhs), grid.integrate(&rhs), grid.integrate(&abs))
}

/// Residuals of all five identities for every admissible m, over the
/// standard ladder t ∈ {10⁻¹, 10⁻¹·⁵, 10⁻², 10⁻²·⁵}.
pub fn hessian_integral_identities(u: &RadialField, grid: &QuadratureGrid) -> IdentityReport {
    let n = u.n();
    let base = u.nodal_jets(grid);
    let eval =
        |jets: &NodalJets| -> Vec<NodeTerms> { (0..jets.len()).into_par_iter().map(|i| node_terms(jets, i)).collect() };
    let unit = eval(&base);
    let (div, _, div_scale) = sides(HessianIdentity::Divergence, 1, n, &unit, grid);

    let ts = t_ladder().to_vec();
    let scaled: Vec<Vec<NodeTerms>> = ts.iter().map(|&t| eval(&base.scaled(t))).collect();
    let mut cases = Vec::new();
    for m in 1..=n {
        cases.push((HessianIdentity::GradientNewton, m));
    }
    for m in 2..=n {
        cases.push((HessianIdentity::SigmaReduction, m));
    }
    for m in 1..=n {
        cases.push((HessianIdentity::ValueSigma, m));
    }
    for m in 1..=n {
        cases.push((HessianIdentity::SquareSigma, m));
    }
    let entries = cases
        .into_iter()
        .map(|(id, m)| {
            let mut residuals = Vec::new();
            let mut floors = Vec::new();
            for terms in &scaled {
                let (l, r, s) = sides(id, m, n, terms, grid);
                residuals.push((l - r).abs());
                floors.push(rounding_floor(s));
            }
            let fit = fit_residual_slope(&ts, &residuals, &floors);
            IdentityResidual { identity: id, m, ts: ts.clone(), residuals, floors, fit }
        })
        .collect();
    IdentityReport { divergence_residual: div.abs(), divergence_scale: div_scale, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spherefield::harmonics::harmonic_combination;

    #[test]
    fn constant_field_has_zero_residuals() {
        let g = QuadratureGrid::build(2, 6).unwrap();
        let r = hessian_integral_identities(&RadialField::constant(2, 0.4), &g);
        assert!(r.divergence_residual < 1e-15);
        for e in &r.entries {
            assert!(e.residuals.iter().all(|x| x.abs() < 1e-15));
            assert_eq!(e.fit, SlopeFit::Exact);
        }
    }

    #[test]
    fn degree_two_mode_in_three_dimensions() {
        let g = QuadratureGrid::build(3, 12).unwrap();
        let u = harmonic_combination(3, &[(2, 0, 1.0), (2, 3, 0.5)]).unwrap();
        let r = hessian_integral_identities(&u, &g);
        assert!(r.divergence_residual < 1e-10);
        for e in &r.entries {
            assert!(e.passes(), "{:?}", e);
        }
    }
}
