//! Scalar fields on Sⁿ and their covariant jets.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{JetFrame, QuadratureGrid};
use super::polynomial::AmbientPolynomial;
use crate::error::{invalid, Result};
use crate::jet::{Jet, MAX_DIM};
use crate::numeric::sphere_area;

/// u(x) = poly(x) on Sⁿ, extended to ℝⁿ⁺¹∖{0} by U(y) = poly(y/|y|).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialField {
    n: usize,
    poly: AmbientPolynomial,
}

/// Value, gradient and covariant Hessian of a field at one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldJet {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: DMatrix<f64>,
}

impl RadialField {
    pub fn new(n: usize, poly: AmbientPolynomial) -> Result<Self> {
        if poly.nvars() != n + 1 {
            return Err(invalid(format!("polynomial has {} variables, expected {}", poly.nvars(), n + 1)));
        }
        if n > MAX_DIM {
            return Err(invalid(format!("n = {n} exceeds the jet limit {MAX_DIM}")));
        }
        Ok(Self { n, poly })
    }

    pub fn zero(n: usize) -> Self {
        Self { n, poly: AmbientPolynomial::zero(n + 1) }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self { n, poly: AmbientPolynomial::constant(n + 1, c) }
    }

    /// u(x) = x_i (zero based).
    pub fn coordinate(n: usize, i: usize) -> Self {
        Self { n, poly: AmbientPolynomial::coordinate(n + 1, i) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &AmbientPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.poly.eval(x)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { n: self.n, poly: self.poly.scale(c) }
    }

    /// self + c·other
    pub fn add_scaled(&self, c: f64, other: &Self) -> Self {
        Self { n: self.n, poly: self.poly.add_scaled(c, &other.poly) }
    }

    /// Jet of U(x + Σ sᵢeᵢ) at s = 0. Because U is 0-homogeneous the
    /// tangential ambient Hessian is the covariant Hessian of u.
    pub fn jet(&self, frame: &JetFrame) -> FieldJet {
        let j = self.jet_raw(frame);
        let n = self.n;
        FieldJet {
            value: j.v,
            gradient: DVector::from_fn(n, |i, _| j.g[i]),
            hessian: DMatrix::from_fn(n, n, |i, k| 0.5 * (j.h[i][k] + j.h[k][i])),
        }
    }

    pub(crate) fn jet_raw(&self, frame: &JetFrame) -> Jet {
        let n = self.n;
        let d = n + 1;
        let mut tang = [0.0; MAX_DIM];
        let y: Vec<Jet> = (0..d)
            .map(|a| {
                for (i, e) in frame.basis.iter().enumerate() {
                    tang[i] = e[a];
                }
                Jet::affine(n, frame.point[a], &tang)
            })
            .collect();
        let mut norm2 = Jet::constant(n, 0.0);
        for ya in &y {
            norm2 = norm2 + *ya * *ya;
        }
        let inv = norm2.recip_sqrt();
        let z: Vec<Jet> = y.iter().map(|ya| *ya * inv).collect();
        let maxe: Vec<u32> =
            (0..d).map(|a| self.poly.terms().iter().map(|t| t.exponents[a]).max().unwrap_or(0)).collect();
        let powers: Vec<Vec<Jet>> = (0..d)
            .map(|a| {
                let mut p = vec![Jet::constant(n, 1.0)];
                for e in 1..=maxe[a] as usize {
                    let next = p[e - 1] * z[a];
                    p.push(next);
                }
                p
            })
            .collect();
        let mut out = Jet::constant(n, 0.0);
        for t in self.poly.terms() {
            let mut m = Jet::constant(n, t.coefficient);
            for (a, &e) in t.exponents.iter().enumerate() {
                if e > 0 {
                    m = m * powers[a][e as usize];
                }
            }
            out = out + m;
        }
        out
    }

    /// Jets at every grid node, evaluated in parallel and stored in node order.
    pub fn nodal_jets(&self, grid: &QuadratureGrid) -> NodalJets {
        let n = self.n;
        let jets: Vec<Jet> = grid.frames().par_iter().map(|f| self.jet_raw(f)).collect();
        let mut out = NodalJets::zeros(n, jets.len());
        for (i, j) in jets.iter().enumerate() {
            out.value[i] = j.v;
            for a in 0..n {
                out.grad[i * n + a] = j.g[a];
                for b in 0..n {
                    out.hess[(i * n + a) * n + b] = 0.5 * (j.h[a][b] + j.h[b][a]);
                }
            }
        }
        out
    }
}

/// Field jets at every node of a grid, stored contiguously. Jets are linear
/// in the field, so combinations can be formed without re-evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalJets {
    pub n: usize,
    pub value: Vec<f64>,
    pub grad: Vec<f64>,
    pub hess: Vec<f64>,
}

impl NodalJets {
    pub fn zeros(n: usize, len: usize) -> Self {
        Self { n, value: vec![0.0; len], grad: vec![0.0; len * n], hess: vec![0.0; len * n * n] }
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    pub fn grad_at(&self, i: usize) -> &[f64] {
        &self.grad[i * self.n..(i + 1) * self.n]
    }

    pub fn hess_at(&self, i: usize) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_row_slice(n, n, &self.hess[i * n * n..(i + 1) * n * n])
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            value: self.value.iter().map(|v| c * v).collect(),
            grad: self.grad.iter().map(|v| c * v).collect(),
            hess: self.hess.iter().map(|v| c * v).collect(),
        }
    }

    /// self += c·other
    pub fn axpy(&mut self, c: f64, other: &Self) {
        for (a, b) in self.value.iter_mut().zip(&other.value) {
            *a += c * b;
        }
        for (a, b) in self.grad.iter_mut().zip(&other.grad) {
            *a += c * b;
        }
        for (a, b) in self.hess.iter_mut().zip(&other.hess) {
            *a += c * b;
        }
    }

    pub fn grad_norm_sq(&self, i: usize) -> f64 {
        self.grad_at(i).iter().map(|g| g * g).sum()
    }
}

/// L² and sup-type norms of a field on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SobolevNorms {
    pub l2_sq: f64,
    pub grad_l2_sq: f64,
    pub sup_u: f64,
    pub sup_grad: f64,
    pub sup_hess: f64,
}

impl SobolevNorms {
    /// Grid estimate of ‖u‖_{W^{2,∞}}: the largest of the three sup norms.
    pub fn eps_hat(&self) -> f64 {
        self.sup_u.max(self.sup_grad).max(self.sup_hess)
    }
}

pub fn sobolev_norms(u: &RadialField, grid: &QuadratureGrid) -> SobolevNorms {
    sobolev_norms_from_jets(&u.nodal_jets(grid), grid)
}

pub fn sobolev_norms_from_jets(j: &NodalJets, grid: &QuadratureGrid) -> SobolevNorms {
    let len = j.len();
    let u2: Vec<f64> = j.value.iter().map(|v| v * v).collect();
    let g2: Vec<f64> = (0..len).map(|i| j.grad_norm_sq(i)).collect();
    let sup_u = j.value.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sup_grad = g2.iter().fold(0.0f64, |m, v| m.max(v.sqrt()));
    let sup_hess = (0..len)
        .map(|i| {
            let h = j.hess_at(i);
            nalgebra::SymmetricEigen::new(h).eigenvalues.amax()
        })
        .fold(0.0f64, f64::max);
    SobolevNorms { l2_sq: grid.integrate(&u2), grad_l2_sq: grid.integrate(&g2), sup_u, sup_grad, sup_hess }
}

/// Coefficients of u against Y₀ = 1/√ω and Y₁ᵢ = √((n+1)/ω)·xᵢ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowModes {
    pub a0: f64,
    pub a1: Vec<f64>,
}

impl LowModes {
    pub fn a1_norm(&self) -> f64 {
        self.a1.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

pub fn low_mode_coefficients(u: &RadialField, grid: &QuadratureGrid) -> LowModes {
    let vals: Vec<f64> = grid.nodes().iter().map(|x| u.value(x)).collect();
    low_modes_from_values(&vals, grid)
}

pub fn low_modes_from_values(vals: &[f64], grid: &QuadratureGrid) -> LowModes {
    let n = grid.n();
    let om = sphere_area(n);
    let y0 = 1.0 / om.sqrt();
    let y1 = ((n as f64 + 1.0) / om).sqrt();
    let a0 = grid.integrate(vals) * y0;
    let a1 = (0..=n)
        .map(|l| {
            let f: Vec<f64> = vals.iter().zip(grid.nodes()).map(|(v, x)| v * x[l]).collect();
            grid.integrate(&f) * y1
        })
        .collect();
    LowModes { a0, a1 }
}
