//! Solving for the degree ≤ 1 modes that enforce A_j(Ω) = ψ_j(ρ) and the
//! barycenter condition.

use std::sync::Arc;

use serde::Serialize;

use super::barycenter::{barycenter_residual, barycenter_scale};
use crate::error::{invalid, Error, Result};
use crate::hypersurface::NearlySphericalSurface;
use crate::integrals::quermass;
use crate::spaceform::SpaceForm;
use crate::spherefield::{harmonic_basis, low_mode_coefficients, NodalJets, QuadratureGrid, RadialField};

/// Relative tolerance on the quermassintegral match; absolute tolerance on
/// each barycenter component.
pub const CONSTRAINT_TOL: f64 = 1e-11;
pub const MAX_NEWTON_ITERATIONS: usize = 50;
const FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone)]
pub struct ConstraintFit {
    pub surface: NearlySphericalSurface,
    pub a0: f64,
    pub a1: Vec<f64>,
    pub iterations: usize,
    /// [relative quermass mismatch, barycenter components]
    pub residuals: Vec<f64>,
}

impl ConstraintFit {
    pub fn field(&self) -> &RadialField {
        self.surface.field()
    }

    pub fn a1_norm(&self) -> f64 {
        self.a1.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn summary(&self) -> ConstraintSummary {
        ConstraintSummary {
            a0: self.a0,
            a1_norm: self.a1_norm(),
            iterations: self.iterations,
            residuals: self.residuals.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintSummary {
    pub a0: f64,
    pub a1_norm: f64,
    pub iterations: usize,
    pub residuals: Vec<f64>,
}

struct Problem<'a> {
    form: SpaceForm,
    rho: f64,
    j: i64,
    grid: &'a Arc<QuadratureGrid>,
    base_field: RadialField,
    base_jets: NodalJets,
    modes: Vec<RadialField>,
    mode_jets: Vec<NodalJets>,
    target: f64,
    bary_scale: f64,
}

impl Problem<'_> {
    fn surface(&self, c: &[f64]) -> Result<NearlySphericalSurface> {
        let mut field = self.base_field.clone();
        let mut jets = self.base_jets.clone();
        for ((ci, m), mj) in c.iter().zip(&self.modes).zip(&self.mode_jets) {
            field = field.add_scaled(*ci, m);
            jets.axpy(*ci, mj);
        }
        NearlySphericalSurface::from_jets(self.form, self.rho, field, self.grid.clone(), jets)
    }

    /// Raw residuals: [A_j − ψ_j(ρ), bar_1, …, bar_{n+1}].
    fn raw(&self, s: &NearlySphericalSurface) -> Result<Vec<f64>> {
        let mut r = vec![quermass(s, self.j)? - self.target];
        r.extend(barycenter_residual(s));
        Ok(r)
    }

    fn scaled(&self, raw: &[f64]) -> Vec<f64> {
        let mut out = vec![raw[0] / self.target.abs()];
        out.extend(raw[1..].iter().map(|b| b / self.bary_scale));
        out
    }

    fn converged(&self, raw: &[f64]) -> bool {
        raw[0].abs() <= CONSTRAINT_TOL * self.target.abs() && raw[1..].iter().all(|b| b.abs() <= CONSTRAINT_TOL)
    }

    fn merit(&self, c: &[f64]) -> Option<(f64, Vec<f64>, NearlySphericalSurface)> {
        let s = self.surface(c).ok()?;
        let raw = self.raw(&s).ok()?;
        let m = self.scaled(&raw).iter().map(|x| x * x).sum::<f64>().sqrt();
        m.is_finite().then_some((m, raw, s))
    }
}

/// Find u = t·shape + a₀Y₀ + Σ a₁ᵢY₁ᵢ with A_j(Ω) = ψ_j(ρ) and vanishing
/// barycenter residual, by damped Newton on the n+2 low-mode coefficients
/// with a central-difference Jacobian.
pub fn fit_constraints(
    form: &SpaceForm,
    rho: f64,
    j: i64,
    shape: &RadialField,
    t: f64,
    grid: &Arc<QuadratureGrid>,
) -> Result<ConstraintFit> {
    let n = form.n;
    if shape.n() != n || grid.n() != n {
        return Err(invalid("shape, grid and space form must share n"));
    }
    if j < -1 || j > n as i64 - 1 {
        return Err(invalid(format!("constraint index {j} outside [-1, {}]", n as i64 - 1)));
    }
    if !t.is_finite() {
        return Err(invalid("t must be finite"));
    }
    let low = low_mode_coefficients(shape, grid);
    let size = grid.integrate_fn(|x| shape.value(x).powi(2)).sqrt();
    if low.a0.abs().max(low.a1_norm()) > 1e-10 * size + 1e-14 {
        return Err(invalid(format!("shape has degree <= 1 content (a0 = {:e}, |a1| = {:e})", low.a0, low.a1_norm())));
    }
    let mut modes = harmonic_basis(n, 0)?;
    modes.extend(harmonic_basis(n, 1)?);
    let base_field = shape.scale(t);
    let p = Problem {
        form: *form,
        rho,
        j,
        grid,
        base_jets: base_field.nodal_jets(grid),
        base_field,
        mode_jets: modes.iter().map(|m| m.nodal_jets(grid)).collect(),
        modes,
        target: form.ball_quermass(j, rho)?,
        bary_scale: barycenter_scale(form, rho),
    };

    let dim = n + 2;
    let mut c = vec![0.0; dim];
    let (mut merit, mut raw, mut surface) =
        p.merit(&c).ok_or_else(|| Error::Geometry("initial surface is not admissible".into()))?;
    let mut iterations = 0;
    while !p.converged(&raw) {
        if iterations == MAX_NEWTON_ITERATIONS {
            return Err(Error::ConstraintFailure { iterations, residuals: p.scaled(&raw) });
        }
        iterations += 1;
        let mut jac = nalgebra::DMatrix::<f64>::zeros(dim, dim);
        for col in 0..dim {
            let mut cp = c.clone();
            let mut cm = c.clone();
            cp[col] += FD_STEP;
            cm[col] -= FD_STEP;
            let fp = p.scaled(&p.raw(&p.surface(&cp)?)?);
            let fm = p.scaled(&p.raw(&p.surface(&cm)?)?);
            for row in 0..dim {
                jac[(row, col)] = (fp[row] - fm[row]) / (2.0 * FD_STEP);
            }
        }
        let rhs = nalgebra::DVector::from_vec(p.scaled(&raw));
        let step = jac
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::ConstraintFailure { iterations, residuals: rhs.as_slice().to_vec() })?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<f64> = c.iter().zip(step.iter()).map(|(a, d)| a - lambda * d).collect();
            if let Some((m, r, s)) = p.merit(&trial) {
                if m < merit || p.converged(&r) {
                    c = trial;
                    merit = m;
                    raw = r;
                    surface = s;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::ConstraintFailure { iterations, residuals: p.scaled(&raw) });
        }
    }
    Ok(ConstraintFit { surface, a0: c[0], a1: c[1..].to_vec(), iterations, residuals: p.scaled(&raw) })
}
