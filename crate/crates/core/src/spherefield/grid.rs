//! Tensor-product quadrature on Sⁿ with per-node orthonormal tangent frames.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use super::polynomial::monomial_moment;
use crate::error::{Error, Result};
use crate::numeric::{gamma_half, pairwise_sum, sphere_area};

/// A point of Sⁿ together with an orthonormal basis of its tangent space.
#[derive(Debug, Clone, PartialEq)]
pub struct JetFrame {
    pub point: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

impl JetFrame {
    /// Tangent frame from the Householder reflection that maps the point to
    /// a signed coordinate axis.
    pub fn at(point: &[f64]) -> Self {
        let d = point.len();
        let m = (0..d).max_by(|&a, &b| point[a].abs().partial_cmp(&point[b].abs()).unwrap()).unwrap();
        let s = if point[m] >= 0.0 { 1.0 } else { -1.0 };
        let mut v = point.to_vec();
        v[m] -= s;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let mut basis = Vec::with_capacity(d - 1);
        for j in (0..d).filter(|&j| j != m) {
            // column j of I − 2vvᵀ/vᵀv
            let col: Vec<f64> = (0..d)
                .map(|i| {
                    let id = if i == j { 1.0 } else { 0.0 };
                    if vv > 0.0 {
                        id - 2.0 * v[i] * v[j] / vv
                    } else {
                        id
                    }
                })
                .collect();
            basis.push(col);
        }
        Self { point: point.to_vec(), basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    n: usize,
    exactness: u32,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    frames: Vec<JetFrame>,
}

/// Summary of the build-time certification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCertificate {
    pub n: usize,
    pub exactness: u32,
    pub node_count: usize,
    pub max_norm_error: f64,
    pub weight_sum_error: f64,
    pub max_moment_error: f64,
    pub moments_checked: usize,
}

impl QuadratureGrid {
    /// Gauss–Gegenbauer rules in the n−1 polar angles (weights
    /// (1−t²)^{(n−i−1)/2}) and a uniform azimuthal rule, exact for every
    /// polynomial of degree ≤ L and symmetric under the antipodal map.
    pub fn build(n: usize, l: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::GridConstruction(format!("n must be >= 2, got {n}")));
        }
        if l < 2 {
            return Err(Error::GridConstruction(format!("exactness degree must be >= 2, got {l}")));
        }
        let npts = (l as usize + 2) / 2;
        let mut polar = Vec::with_capacity(n - 1);
        for i in 1..n {
            polar.push(gauss_gegenbauer(npts, (n - i - 1) as u32)?);
        }
        // an even azimuth count makes the grid invariant under x → −x
        let naz = (l as usize + 2) & !1;
        let daz = 2.0 * std::f64::consts::PI / naz as f64;

        let mut nodes = vec![Vec::<f64>::new()];
        let mut weights = vec![1.0];
        let mut sines = vec![1.0];
        for rule in &polar {
            let mut nn = Vec::new();
            let mut ww = Vec::new();
            let mut ss = Vec::new();
            for ((x, w), s) in nodes.iter().zip(&weights).zip(&sines) {
                for (&t, &wt) in rule.0.iter().zip(&rule.1) {
                    let mut p = x.clone();
                    p.push(s * t);
                    nn.push(p);
                    ww.push(w * wt);
                    ss.push(s * (1.0 - t * t).sqrt());
                }
            }
            nodes = nn;
            weights = ww;
            sines = ss;
        }
        let mut all_nodes = Vec::with_capacity(nodes.len() * naz);
        let mut all_weights = Vec::with_capacity(nodes.len() * naz);
        for ((x, w), s) in nodes.iter().zip(&weights).zip(&sines) {
            for a in 0..naz {
                let ang = daz * a as f64;
                let mut p = x.clone();
                p.push(s * ang.cos());
                p.push(s * ang.sin());
                all_nodes.push(p);
                all_weights.push(w * daz);
            }
        }
        let frames = all_nodes.iter().map(|p| JetFrame::at(p)).collect();
        let grid = Self { n, exactness: l, nodes: all_nodes, weights: all_weights, frames };
        grid.certify()?;
        Ok(grid)
    }

    /// Exactness checks: node norms, total weight, and a family of monomial
    /// moments (pure powers and all two-variable products up to degree L).
    pub fn certify(&self) -> Result<GridCertificate> {
        let mut max_norm_error: f64 = 0.0;
        for p in &self.nodes {
            let r: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            max_norm_error = max_norm_error.max((r - 1.0).abs());
        }
        if max_norm_error > 1e-14 {
            return Err(Error::GridConstruction(format!("node norm error {max_norm_error:e}")));
        }
        if self.weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::GridConstruction("non-positive weight".into()));
        }
        let om = sphere_area(self.n);
        let weight_sum_error = (pairwise_sum(&self.weights) - om).abs();
        if weight_sum_error > 1e-12 * om {
            return Err(Error::GridConstruction(format!("weight sum error {weight_sum_error:e}")));
        }
        let d = self.n + 1;
        let l = self.exactness;
        // (a, b, p): the moments of x_a^p·x_b^q for q = 1..=L−p, or the pure
        // power x_a^p when a == b
        let mut tasks = Vec::new();
        for a in 0..d {
            for b in a..d {
                for p in 0..=l {
                    if (a == b && p > 0) || (a != b && p < l) {
                        tasks.push((a, b, p));
                    }
                }
            }
        }
        let cols: Vec<Vec<f64>> = (0..d).map(|a| self.nodes.iter().map(|x| x[a]).collect()).collect();
        let moments_checked: usize = tasks.iter().map(|&(a, b, p)| if a == b { 1 } else { (l - p) as usize }).sum();
        let errs: Vec<f64> = tasks
            .par_iter()
            .map(|&(a, b, p)| {
                let mut vals: Vec<f64> = cols[a].iter().map(|x| x.powi(p as i32)).collect();
                let mut e = vec![0u32; d];
                e[a] = p;
                let qs = if a == b { 0..=0 } else { 1..=(l - p) };
                let mut worst: f64 = 0.0;
                for q in qs {
                    if q > 0 {
                        for (v, x) in vals.iter_mut().zip(&cols[b]) {
                            *v *= x;
                        }
                        e[b] = q;
                    }
                    let (quad, abs) = compensated_moments(&self.weights, &vals);
                    // monomials that vanish at every node up to rounding (x₂x₃ on
                    // a 4-point azimuth) would otherwise divide rounding by rounding
                    let scale = abs.max(1e-3);
                    worst = worst.max((quad - monomial_moment(&e)).abs() / scale);
                }
                worst
            })
            .collect();
        let max_moment_error = errs.iter().cloned().fold(0.0, f64::max);
        if max_moment_error > 1e-12 {
            return Err(Error::GridConstruction(format!("moment error {max_moment_error:e}")));
        }
        Ok(GridCertificate {
            n: self.n,
            exactness: l,
            node_count: self.nodes.len(),
            max_norm_error,
            weight_sum_error,
            max_moment_error,
            moments_checked,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn exactness(&self) -> u32 {
        self.exactness
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn frames(&self) -> &[JetFrame] {
        &self.frames
    }

    /// Σ wᵢ fᵢ with pairwise reduction.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        crate::numeric::weighted_sum(&self.weights, values)
    }

    /// Quadrature of a function of the node position.
    pub fn integrate_fn(&self, f: impl Fn(&[f64]) -> f64 + Sync) -> f64 {
        let vals: Vec<f64> = self.nodes.par_iter().map(|x| f(x)).collect();
        self.integrate(&vals)
    }
}

/// (Σ wᵢvᵢ, Σ wᵢ|vᵢ|) with Neumaier compensation on the first sum.
fn compensated_moments(w: &[f64], v: &[f64]) -> (f64, f64) {
    let (mut sum, mut comp, mut abs) = (0.0f64, 0.0f64, 0.0f64);
    for (wi, vi) in w.iter().zip(v) {
        let x = wi * vi;
        let t = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
        abs += x.abs();
    }
    (sum + comp, abs)
}

/// N-point Gauss rule for the weight (1−t²)^{m/2} on [−1, 1]: Golub–Welsch,
/// a Newton polish of each node, then Christoffel weights.
pub(crate) fn gauss_gegenbauer(npts: usize, m: u32) -> Result<(Vec<f64>, Vec<f64>)> {
    let a = m as f64 / 2.0;
    let beta = |k: usize| {
        let k = k as f64;
        k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0))
    };
    let mu0 = std::f64::consts::PI.sqrt() * gamma_half(m + 2) / gamma_half(m + 3);
    let mut jac = DMatrix::zeros(npts, npts);
    for k in 1..npts {
        let b = beta(k).sqrt();
        jac[(k, k - 1)] = b;
        jac[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(jac);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let sqb: Vec<f64> = (0..=npts).map(|k| beta(k).sqrt()).collect();
    // orthonormal p_0..p_N and p_N′ at t
    let eval = |t: f64| {
        let mut p_prev = 0.0;
        let mut p = 1.0 / mu0.sqrt();
        let mut d_prev = 0.0;
        let mut d = 0.0;
        let mut sumsq = p * p;
        for k in 0..npts {
            let pn = (t * p - if k > 0 { sqb[k] * p_prev } else { 0.0 }) / sqb[k + 1];
            let dn = (p + t * d - if k > 0 { sqb[k] * d_prev } else { 0.0 }) / sqb[k + 1];
            p_prev = p;
            p = pn;
            d_prev = d;
            d = dn;
            if k + 1 < npts {
                sumsq += p * p;
            }
        }
        (p, d, sumsq)
    };
    let mut weights = Vec::with_capacity(npts);
    for t in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, d, _) = eval(*t);
            if d != 0.0 {
                *t -= p / d;
            }
        }
        let (_, _, sumsq) = eval(*t);
        weights.push(1.0 / sumsq);
    }
    // exact symmetry
    for i in 0..npts / 2 {
        let j = npts - 1 - i;
        let t = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -t;
        nodes[j] = t;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if npts % 2 == 1 {
        nodes[npts / 2] = 0.0;
    }
    let total: f64 = weights.iter().sum();
    if (total - mu0).abs() > 1e-13 * mu0 {
        return Err(Error::GridConstruction(format!("Gauss rule weight sum {total} != {mu0}")));
    }
    Ok((nodes, weights))
}
