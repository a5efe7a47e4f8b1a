//! Extrinsic geometry of radial graphs M = {(ρ(1+u(x)), x) : x ∈ Sⁿ},
//! expressed in per-node orthonormal tangent frames.

use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::numeric::binomial;
use crate::spaceform::{Curvature, SpaceForm, Warp};
use crate::spherefield::field::{sobolev_norms_from_jets, FieldJet, NodalJets, RadialField, SobolevNorms};
use crate::spherefield::grid::{JetFrame, QuadratureGrid};
use crate::symmpoly::{esf_unchecked, newton_chain};

/// Geometry of M above one point of Sⁿ.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub form: SpaceForm,
    pub rho: f64,
    pub u: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
    /// r = ρ(1+u)
    pub r: f64,
    pub warp: Warp,
    /// D = √(φ² + ρ²|∇u|²)
    pub d: f64,
}

impl PointGeometry {
    pub fn new(form: SpaceForm, rho: f64, jet: FieldJet) -> Result<Self> {
        let r = rho * (1.0 + jet.value);
        if !(r > 0.0) {
            return Err(Error::Geometry(format!("radial function is not positive: 1+u = {}", 1.0 + jet.value)));
        }
        let warp = form.warp(r)?;
        let d = (warp.phi * warp.phi + rho * rho * jet.gradient.norm_squared()).sqrt();
        Ok(Self { form, rho, u: jet.value, grad: jet.gradient, hess: jet.hessian, r, warp, d })
    }

    fn n(&self) -> usize {
        self.form.n
    }

    /// g = φ²I + ρ²∇u∇uᵀ.
    pub fn first_fundamental(&self) -> DMatrix<f64> {
        let n = self.n();
        let phi = self.warp.phi;
        DMatrix::identity(n, n) * (phi * phi) + &self.grad * self.grad.transpose() * (self.rho * self.rho)
    }

    /// φ^{n−1}·D.
    pub fn area_element(&self) -> f64 {
        self.warp.phi.powi(self.n() as i32 - 1) * self.d
    }

    /// h = (1/D)[2φ′ρ²∇u∇uᵀ + φ²φ′I − φρ·D²u].
    pub fn second_fundamental(&self) -> DMatrix<f64> {
        let n = self.n();
        let Warp { phi, dphi, .. } = self.warp;
        let rho = self.rho;
        let m = &self.grad * self.grad.transpose() * (2.0 * dphi * rho * rho)
            + DMatrix::identity(n, n) * (phi * phi * dphi)
            - &self.hess * (phi * rho);
        m / self.d
    }

    /// W = g⁻¹h.
    pub fn weingarten(&self) -> Result<DMatrix<f64>> {
        let g = self.first_fundamental();
        let chol = Cholesky::new(g).ok_or_else(|| Error::Geometry("metric is not positive definite".into()))?;
        Ok(chol.solve(&self.second_fundamental()))
    }

    /// hⁱ_j = φ′δ/D − ρuⁱ_j/(Dφ) + φ′ρ²uⁱu_j/D³ + ρ³uⁱu_k u^k_j/(D³φ).
    pub fn weingarten_explicit(&self) -> DMatrix<f64> {
        let n = self.n();
        let Warp { phi, dphi, .. } = self.warp;
        let (rho, d) = (self.rho, self.d);
        let d3 = d * d * d;
        let gu = &self.grad;
        let hg = &self.hess * gu;
        DMatrix::identity(n, n) * (dphi / d) - &self.hess * (rho / (d * phi))
            + gu * gu.transpose() * (dphi * rho * rho / d3)
            + gu * hg.transpose() * (rho * rho * rho / (d3 * phi))
    }

    /// Sorted solutions of det(h − κg) = 0 via Cholesky of g and a
    /// symmetric eigensolve of L⁻¹hL⁻ᵀ.
    pub fn principal_curvatures(&self) -> Result<Vec<f64>> {
        let g = self.first_fundamental();
        let chol = Cholesky::new(g).ok_or_else(|| Error::Geometry("metric is not positive definite".into()))?;
        let l = chol.l();
        let h = self.second_fundamental();
        let li = l.clone().try_inverse().ok_or_else(|| Error::Geometry("singular Cholesky factor".into()))?;
        let mut s = &li * h * li.transpose();
        s = (&s + s.transpose()) * 0.5;
        let mut k: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().cloned().collect();
        k.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(k)
    }

    /// σ_0..σ_n of the principal curvatures through the eigenvalue route.
    pub fn sigma_eigen(&self) -> Result<Vec<f64>> {
        Ok(esf_unchecked(&self.principal_curvatures()?))
    }

    /// σ_0..σ_n by the closed-form double sum in σ_m(D²u) and uⁱu_j[T_m]ᵢʲ(D²u).
    pub fn sigma_closed_all(&self) -> Vec<f64> {
        let n = self.n();
        let sig_h = esf_unchecked(SymmetricEigen::new(self.hess.clone()).eigenvalues.as_slice());
        let chain = newton_chain(&self.hess, &sig_h, n);
        let gtg: Vec<f64> = chain.iter().map(|t| self.grad.dot(&(t * &self.grad))).collect();
        closed_form_sigmas(n, self.rho, &self.warp, self.d, &sig_h, &gtg)
    }

    pub fn sigma_k_closed(&self, k: usize) -> Result<f64> {
        if k > self.n() {
            return Err(invalid(format!("k = {k} exceeds n = {}", self.n())));
        }
        Ok(self.sigma_closed_all()[k])
    }
}

/// σ_k(κ) = Σ_m (−1)^m φ′^{k−m}/(D^{k+2}φ^m) C(n−m,k−m) ρ^m
/// [φ²σ_m(D²u) + (k+n−2m)/(n−m) ρ² uⁱu_j[T_m]ᵢʲ], with the m = n bracket
/// coefficient taken as zero because T_n vanishes.
pub(crate) fn closed_form_sigmas(n: usize, rho: f64, w: &Warp, d: f64, sig_h: &[f64], gtg: &[f64]) -> Vec<f64> {
    let Warp { phi, dphi, .. } = *w;
    let mut out = vec![0.0; n + 1];
    out[0] = 1.0;
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc = 0.0;
        for m in 0..=k {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let c = binomial((n - m) as i64, (k - m) as i64);
            let coef = if m == n { 0.0 } else { (k + n - 2 * m) as f64 / (n - m) as f64 };
            let bracket = phi * phi * sig_h[m] + coef * rho * rho * gtg[m];
            acc += sign * dphi.powi((k - m) as i32) / phi.powi(m as i32) * c * rho.powi(m as i32) * bracket;
        }
        *slot = acc / d.powi(k as i32 + 2);
    }
    out
}

/// Per-node data cached by a surface.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeData {
    pub r: f64,
    pub warp: Warp,
    pub d: f64,
    /// φ^{n−1}·D
    pub area: f64,
    /// σ_0..σ_n of the principal curvatures (closed form)
    pub sigma: Vec<f64>,
}

/// The radial graph of ρ(1+u) over Sⁿ, with per-node geometry precomputed
/// on a quadrature grid.
#[derive(Debug, Clone)]
pub struct NearlySphericalSurface {
    form: SpaceForm,
    rho: f64,
    u: RadialField,
    grid: Arc<QuadratureGrid>,
    jets: NodalJets,
    nodes: Vec<NodeData>,
    norms: SobolevNorms,
}

impl NearlySphericalSurface {
    pub fn new(form: SpaceForm, rho: f64, u: RadialField, grid: Arc<QuadratureGrid>) -> Result<Self> {
        if u.n() != form.n || grid.n() != form.n {
            return Err(invalid(format!(
                "dimension mismatch: form n = {}, field n = {}, grid n = {}",
                form.n,
                u.n(),
                grid.n()
            )));
        }
        let jets = u.nodal_jets(&grid);
        Self::from_jets(form, rho, u, grid, jets)
    }

    /// Build from precomputed jets; `jets` must be the nodal jets of `u`.
    pub(crate) fn from_jets(
        form: SpaceForm,
        rho: f64,
        u: RadialField,
        grid: Arc<QuadratureGrid>,
        jets: NodalJets,
    ) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(invalid(format!("rho must be positive, got {rho}")));
        }
        form.check_radius(rho)?;
        let n = form.n;
        let min_1u = jets.value.iter().fold(f64::INFINITY, |m, v| m.min(1.0 + v));
        if !(min_1u > 0.0) {
            return Err(Error::Geometry(format!("min of 1+u over the grid is {min_1u}")));
        }
        if form.curvature == Curvature::Spherical {
            let max_r = jets.value.iter().fold(0.0f64, |m, v| m.max(rho * (1.0 + v)));
            if max_r >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::Geometry(format!("max radius {max_r} >= pi/2")));
            }
        }
        let nodes: Vec<NodeData> = (0..jets.len())
            .into_par_iter()
            .map(|i| {
                let r = rho * (1.0 + jets.value[i]);
                let warp = form.warp_unchecked(r);
                let g = jets.grad_at(i);
                let d = (warp.phi * warp.phi + rho * rho * jets.grad_norm_sq(i)).sqrt();
                let h = jets.hess_at(i);
                let sig_h = esf_unchecked(SymmetricEigen::new(h.clone()).eigenvalues.as_slice());
                let chain = newton_chain(&h, &sig_h, n);
                let gv = DVector::from_row_slice(g);
                let gtg: Vec<f64> = chain.iter().map(|t| gv.dot(&(t * &gv))).collect();
                let sigma = closed_form_sigmas(n, rho, &warp, d, &sig_h, &gtg);
                NodeData { r, warp, d, area: warp.phi.powi(n as i32 - 1) * d, sigma }
            })
            .collect();
        let norms = sobolev_norms_from_jets(&jets, &grid);
        Ok(Self { form, rho, u, grid, jets, nodes, norms })
    }

    pub fn form(&self) -> SpaceForm {
        self.form
    }

    pub fn n(&self) -> usize {
        self.form.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn field(&self) -> &RadialField {
        &self.u
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn jets(&self) -> &NodalJets {
        &self.jets
    }

    pub fn node_data(&self) -> &[NodeData] {
        &self.nodes
    }

    pub fn norms(&self) -> &SobolevNorms {
        &self.norms
    }

    /// ε̂: grid estimate of ‖u‖_{W^{2,∞}}.
    pub fn eps_hat(&self) -> f64 {
        self.norms.eps_hat()
    }

    /// Geometry above grid node i.
    pub fn at_node(&self, i: usize) -> Result<PointGeometry> {
        let n = self.n();
        let jet = FieldJet {
            value: self.jets.value[i],
            gradient: DVector::from_row_slice(self.jets.grad_at(i)),
            hessian: self.jets.hess_at(i),
        };
        debug_assert_eq!(jet.gradient.len(), n);
        PointGeometry::new(self.form, self.rho, jet)
    }

    /// Geometry above an arbitrary frame.
    pub fn at_frame(&self, frame: &JetFrame) -> Result<PointGeometry> {
        PointGeometry::new(self.form, self.rho, self.u.jet(frame))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spherefield::harmonics::harmonic_combination;

    fn surface(c: Curvature, n: usize, rho: f64, u: RadialField) -> NearlySphericalSurface {
        let g = Arc::new(QuadratureGrid::build(n, 8).unwrap());
        NearlySphericalSurface::new(SpaceForm::new(c, n).unwrap(), rho, u, g).unwrap()
    }

    #[test]
    fn round_sphere_geometry() {
        for c in [Curvature::Hyperbolic, Curvature::Flat, Curvature::Spherical] {
            let s = surface(c, 3, 0.8, RadialField::zero(3));
            let w = s.form().warp(0.8).unwrap();
            for i in (0..s.grid().len()).step_by(11) {
                let p = s.at_node(i).unwrap();
                let wg = p.weingarten().unwrap();
                assert!((wg - DMatrix::identity(3, 3) * (w.dphi / w.phi)).amax() < 1e-15);
                assert!((p.area_element() - w.phi.powi(3)).abs() < 1e-15);
                for k in p.principal_curvatures().unwrap() {
                    assert!((k - w.dphi / w.phi).abs() < 1e-14);
                }
                for k in 0..=3 {
                    let want = binomial(3, k as i64) * (w.dphi / w.phi).powi(k as i32);
                    assert!((s.node_data()[i].sigma[k] - want).abs() < 1e-13 * want);
                }
            }
        }
    }

    #[test]
    fn unit_sphere_has_unit_curvatures() {
        let s = surface(Curvature::Flat, 2, 1.0, RadialField::zero(2));
        let p = s.at_node(0).unwrap();
        for k in p.principal_curvatures().unwrap() {
            assert!((k - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_matches_eigen_route_and_explicit_weingarten() {
        let u = harmonic_combination(3, &[(2, 1, 0.05), (3, 4, 0.03), (1, 2, 0.02)]).unwrap();
        let s = surface(Curvature::Hyperbolic, 3, 1.0, u);
        for i in 0..s.grid().len() {
            let p = s.at_node(i).unwrap();
            let e = p.sigma_eigen().unwrap();
            for k in 0..=3 {
                assert!((e[k] - s.node_data()[i].sigma[k]).abs() <= 1e-9 * e[k].abs().max(1e-300));
            }
            let a = p.weingarten().unwrap();
            let b = p.weingarten_explicit();
            assert!((a - b).amax() < 1e-12);
            let g = p.first_fundamental();
            assert!((g.determinant().sqrt() - p.area_element()).abs() < 1e-12 * p.area_element());
        }
    }

    #[test]
    fn rejects_non_star_shaped_input() {
        let g = Arc::new(QuadratureGrid::build(2, 4).unwrap());
        let f = SpaceForm::new(Curvature::Flat, 2).unwrap();
        let u = RadialField::coordinate(2, 0).scale(-2.0);
        assert!(matches!(NearlySphericalSurface::new(f, 1.0, u, g), Err(Error::Geometry(_))));
    }
}
