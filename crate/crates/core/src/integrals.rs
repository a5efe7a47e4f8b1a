//! Global functionals of a nearly spherical surface: volume, curvature
//! integrals, quermassintegrals and isoperimetric deficits.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::hypersurface::NearlySphericalSurface;
use crate::spaceform::{Curvature, Weight};

/// Vol(Ω) = Σ wᵢ I_n(ρ(1+uᵢ)), I_n the closed-form antiderivative of φⁿ.
pub fn volume(s: &NearlySphericalSurface) -> f64 {
    let f = s.form();
    let vals: Vec<f64> = s.node_data().iter().map(|d| f.power_integral(f.n, d.r)).collect();
    s.grid().integrate(&vals)
}

fn check_curvature_index(s: &NearlySphericalSurface, k: i64) -> Result<usize> {
    if k < 0 || k > s.n() as i64 {
        return Err(invalid(format!("curvature index {k} outside [0, {}]", s.n())));
    }
    Ok(k as usize)
}

/// ∫_M σ_k(κ) dμ.
pub fn curvature_integral(s: &NearlySphericalSurface, k: i64) -> Result<f64> {
    let k = check_curvature_index(s, k)?;
    let vals: Vec<f64> = s.node_data().iter().map(|d| d.sigma[k] * d.area).collect();
    Ok(s.grid().integrate(&vals))
}

/// ∫_M Ψ(r) σ_k(κ) dμ.
pub fn weighted_integral(s: &NearlySphericalSurface, k: i64, weight: Weight) -> Result<f64> {
    let k = check_curvature_index(s, k)?;
    let vals: Vec<f64> = s.node_data().iter().map(|d| d.warp.weight(weight) * d.sigma[k] * d.area).collect();
    Ok(s.grid().integrate(&vals))
}

/// A_k(Ω) by the recursion A_{−1} = Vol, A_0 = |M|, A_1 = ∫σ_1 + K·n·Vol,
/// A_k = ∫σ_k + K(n−k+1)/(k−1)·A_{k−2}.
pub fn quermass(s: &NearlySphericalSurface, k: i64) -> Result<f64> {
    let n = s.n() as i64;
    if k < -1 || k > n {
        return Err(invalid(format!("quermassintegral index {k} outside [-1, {n}]")));
    }
    let kk = s.form().k();
    match k {
        -1 => Ok(volume(s)),
        0 => curvature_integral(s, 0),
        1 => Ok(curvature_integral(s, 1)? + kk * n as f64 * if kk != 0.0 { volume(s) } else { 0.0 }),
        _ => {
            let mut v = curvature_integral(s, k)?;
            if kk != 0.0 {
                v += kk * (n - k + 1) as f64 / (k - 1) as f64 * quermass(s, k - 2)?;
            }
            Ok(v)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeficitReport {
    pub k: i64,
    pub j: i64,
    pub quermass_k: f64,
    pub quermass_j: f64,
    /// ρ_j with ψ_j(ρ_j) = A_j(Ω)
    pub matched_radius: f64,
    pub ball_k: f64,
    pub deficit: f64,
}

/// Admissible (k, j) pairs: −1 ≤ j < k ≤ n−1 for K = ±1, k ≤ n for K = 0.
pub fn check_deficit_indices(curvature: Curvature, n: usize, k: i64, j: i64) -> Result<()> {
    let top = if curvature == Curvature::Flat { n as i64 } else { n as i64 - 1 };
    if !(j >= -1 && j < k && k <= top) {
        return Err(invalid(format!("deficit indices (k, j) = ({k}, {j}) need -1 <= j < k <= {top}")));
    }
    Ok(())
}

/// δ_{k,j}(Ω) = A_k(Ω) − ψ_k(ρ_j) where ψ_j(ρ_j) = A_j(Ω).
pub fn deficit(s: &NearlySphericalSurface, k: i64, j: i64) -> Result<DeficitReport> {
    let f = s.form();
    check_deficit_indices(f.curvature, f.n, k, j)?;
    let qk = quermass(s, k)?;
    let qj = quermass(s, j)?;
    let rj = f.ball_radius_from_quermass(j, qj)?;
    let bk = f.ball_quermass(k, rj)?;
    Ok(DeficitReport { k, j, quermass_k: qk, quermass_j: qj, matched_radius: rj, ball_k: bk, deficit: qk - bk })
}
