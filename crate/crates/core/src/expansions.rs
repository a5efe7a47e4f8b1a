//! Second-order expansions of curvature functionals about the geodesic
//! sphere of radius ρ, constraint-induced mean relations, and the stability
//! constants of the main theorems.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hypersurface::NearlySphericalSurface;
use crate::integrals::{curvature_integral, quermass, weighted_integral};
use crate::numeric::{binomial, fit_residual_slope, rounding_floor, SlopeFit};
use crate::spaceform::{Curvature, SpaceForm, Warp, Weight};
use crate::spherefield::{QuadratureGrid, RadialField};

/// Smallest accepted log-log slope for second-order remainders.
pub const MIN_REMAINDER_SLOPE: f64 = 2.7;

/// Raw moments of u over Sⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct UMoments {
    pub int_u: f64,
    pub int_u2: f64,
    pub int_grad2: f64,
}

impl UMoments {
    pub fn of(s: &NearlySphericalSurface) -> Self {
        let norms = s.norms();
        Self { int_u: s.grid().integrate(&s.jets().value), int_u2: norms.l2_sq, int_grad2: norms.grad_l2_sq }
    }
}

/// functional ≈ ω·c0 + cu·∫u + cu2·∫u² + cg2·∫|∇u|², ρ-powers folded in.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct QuadraticFunctionalCoefficients {
    pub c0: f64,
    pub cu: f64,
    pub cu2: f64,
    pub cg2: f64,
}

impl QuadraticFunctionalCoefficients {
    pub fn evaluate(&self, omega: f64, m: &UMoments) -> f64 {
        omega * self.c0 + self.cu * m.int_u + self.cu2 * m.int_u2 + self.cg2 * m.int_grad2
    }

    fn scaled(self, c: f64) -> Self {
        Self { c0: c * self.c0, cu: c * self.cu, cu2: c * self.cu2, cg2: c * self.cg2 }
    }
}

/// c·φ^p·φ′^q, zero when c is zero (so vanishing terms never raise a
/// vanishing φ′ to a negative power).
fn term(w: &Warp, c: f64, p: i64, q: i64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * w.phi.powi(p as i32) * w.dphi.powi(q as i32)
    }
}

fn base(form: &SpaceForm, rho: f64) -> Result<Warp> {
    if !(rho > 0.0) {
        return Err(invalid(format!("rho must be positive, got {rho}")));
    }
    form.warp(rho)
}

fn check_k(form: &SpaceForm, k: i64, lowest: i64) -> Result<()> {
    if k < lowest || k > form.n as i64 {
        return Err(invalid(format!("index {k} outside [{lowest}, {}]", form.n)));
    }
    Ok(())
}

/// A linear combination of warp monomials Σ c·φ′^a·φ^b.
#[derive(Debug, Clone, PartialEq)]
struct WarpPoly(Vec<(f64, i64, i64)>);

impl WarpPoly {
    /// d/dr[φ′^aφ^b] = b·φ′^{a+1}φ^{b−1} − K·a·φ′^{a−1}φ^{b+1}.
    fn derivative(&self, kk: f64) -> Self {
        let mut out = Vec::new();
        for &(c, a, b) in &self.0 {
            if b != 0 {
                out.push((c * b as f64, a + 1, b - 1));
            }
            if a != 0 && kk != 0.0 {
                out.push((-kk * c * a as f64, a - 1, b + 1));
            }
        }
        WarpPoly(out)
    }

    fn eval(&self, w: &Warp) -> f64 {
        self.0.iter().map(|&(c, a, b)| term(w, c, b, a)).sum()
    }
}

/// Coefficients of the Taylor expansion of the m-th summand of σ_k dμ in
/// u and |∇u|² at the round sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorBlocks {
    /// A_0^m, A_1^m, A_2^m
    pub a: [f64; 3],
    /// A^m, the |∇u|² coefficient
    pub a_grad: f64,
    /// B^m, the uⁱu_j[T_m]ᵢʲ coefficient
    pub b: f64,
}

/// A_i^m = (i!)⁻¹(−1)^m ρ^{m+i} C(n−m,k−m)·dⁱ/drⁱ[φ′^{k−m}φ^{n−m−k}](ρ),
/// A^m = (−1)^{m+1}ρ^{m+2}(k+1)/2·C(n−m,k−m)·φ′^{k−m}φ^{n−m−k−2},
/// B^m = (−1)^mρ^{m+2}C(n−m,k−m)(k+n−2m)/(n−m)·φ′^{k−m}φ^{n−m−k−2}.
/// The D^{−(k+1)} factor of the integrand is kept in every block.
pub fn taylor_blocks(form: &SpaceForm, k: usize, m: usize, rho: f64) -> Result<TaylorBlocks> {
    let n = form.n;
    if !(m <= k && k <= n) {
        return Err(invalid(format!("taylor blocks need 0 <= m <= k <= n, got m={m}, k={k}, n={n}")));
    }
    let w = base(form, rho)?;
    let (n, k, m) = (n as i64, k as i64, m as i64);
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let c = binomial(n - m, k - m);
    let f0 = WarpPoly(vec![(1.0, k - m, n - m - k)]);
    let f1 = f0.derivative(form.k());
    let f2 = f1.derivative(form.k());
    let pre = sign * rho.powi(m as i32) * c;
    let a = [pre * f0.eval(&w), pre * f1.eval(&w) * rho, pre * 0.5 * f2.eval(&w) * rho * rho];
    let tail = rho.powi(m as i32 + 2) * c * term(&w, 1.0, n - m - k - 2, k - m);
    let a_grad = -sign * (k + 1) as f64 / 2.0 * tail;
    let b = if m == n { 0.0 } else { sign * (k + n - 2 * m) as f64 / (n - m) as f64 * tail };
    Ok(TaylorBlocks { a, a_grad, b })
}

/// Expansion of ∫_M σ_k dμ.
pub fn expansion_sigma_integral(form: &SpaceForm, k: i64, rho: f64) -> Result<QuadraticFunctionalCoefficients> {
    check_k(form, k, 0)?;
    let w = base(form, rho)?;
    Ok(sigma_blocks(form, &w, k, rho))
}

fn sigma_blocks(form: &SpaceForm, w: &Warp, k: i64, rho: f64) -> QuadraticFunctionalCoefficients {
    let n = form.n as i64;
    let kk = form.k();
    let c = binomial(n, k);
    let (kf, nf) = (k as f64, n as f64);
    let nk = (n - k) as f64;
    QuadraticFunctionalCoefficients {
        c0: c * term(w, 1.0, n - k, k),
        cu: c * rho * (term(w, nk, n - k - 1, k + 1) - term(w, kk * kf, n - k + 1, k - 1)),
        cu2: c
            * rho
            * rho
            * (term(w, nk * (nk - 1.0) / 2.0, n - k - 2, k + 2)
                + term(w, kk * (kf * kf - kf * nf - nf / 2.0), n - k, k)
                + term(w, kk * kk * kf * (kf - 1.0) / 2.0, n - k + 2, k - 2)),
        cg2: c
            * rho
            * rho
            * (term(w, nk * (kf + 1.0) / (2.0 * nf), n - k - 2, k)
                - term(w, kk * kf * (kf - 1.0) / (2.0 * nf), n - k, k - 2)),
    }
}

/// Expansion of ∫_M Ψ σ_k dμ for Ψ ∈ {Φ, φ′}.
pub fn expansion_weighted(
    form: &SpaceForm,
    k: i64,
    rho: f64,
    weight: Weight,
) -> Result<QuadraticFunctionalCoefficients> {
    check_k(form, k, 0)?;
    let w = base(form, rho)?;
    let n = form.n as i64;
    let kk = form.k();
    let c = binomial(n, k);
    let (kf, nf) = (k as f64, n as f64);
    let nk = (n - k) as f64;
    let r2 = rho * rho;
    Ok(match weight {
        Weight::Phi => {
            let s = sigma_blocks(form, &w, k, rho).scaled(w.big_phi);
            QuadraticFunctionalCoefficients {
                c0: s.c0,
                cu: s.cu + c * rho * term(&w, 1.0, n - k + 1, k),
                cu2: s.cu2 + c * r2 * (term(&w, nk + 0.5, n - k, k + 1) - term(&w, kk * kf, n - k + 2, k - 1)),
                cg2: s.cg2 + c * r2 * term(&w, kf / nf, n - k, k - 1),
            }
        }
        Weight::PhiPrime => QuadraticFunctionalCoefficients {
            c0: c * term(&w, 1.0, n - k, k + 1),
            cu: c * rho * (term(&w, nk, n - k - 1, k + 2) - term(&w, kk * (kf + 1.0), n - k + 1, k)),
            cu2: c
                * r2
                * (term(&w, nk * (nk - 1.0) / 2.0, n - k - 2, k + 3)
                    + term(&w, kk * (kf * kf - kf * nf + kf - 1.5 * nf - 0.5), n - k, k + 1)
                    + term(&w, kk * kk * kf * (kf + 1.0) / 2.0, n - k + 2, k - 1)),
            cg2: c
                * r2
                * (term(&w, nk * (kf + 1.0) / (2.0 * nf), n - k - 2, k + 1)
                    - term(&w, kk * kf * (kf + 1.0) / (2.0 * nf), n - k, k - 1)),
        },
    })
}

/// Expansion of A_k(Ω) − A_k(B̄_ρ), −1 ≤ k ≤ n.
pub fn expansion_quermass_diff(form: &SpaceForm, k: i64, rho: f64) -> Result<QuadraticFunctionalCoefficients> {
    check_k(form, k, -1)?;
    let w = base(form, rho)?;
    let n = form.n as i64;
    let nf = n as f64;
    let r2 = rho * rho;
    if k == -1 {
        return Ok(QuadraticFunctionalCoefficients {
            c0: 0.0,
            cu: rho * term(&w, 1.0, n, 0),
            cu2: r2 * term(&w, nf / 2.0, n - 1, 1),
            cg2: 0.0,
        });
    }
    let kk = form.k();
    let c = binomial(n, k);
    let kf = k as f64;
    let nk = (n - k) as f64;
    Ok(QuadraticFunctionalCoefficients {
        c0: 0.0,
        cu: c * rho * term(&w, nk, n - k - 1, k + 1),
        cu2: c
            * r2
            * (term(&w, nk * (nk - 1.0) / 2.0, n - k - 2, k + 2) - term(&w, kk * nk * (kf + 1.0) / 2.0, n - k, k)),
        cg2: c * r2 * term(&w, nk * (kf + 1.0) / (2.0 * nf), n - k - 2, k),
    })
}

/// Predicted ∫u under A_j(Ω) = A_j(B̄_ρ), second-order remainders dropped.
pub fn mean_constraint_relation(form: &SpaceForm, j: i64, rho: f64, m: &UMoments) -> Result<f64> {
    if j < -1 || j > form.n as i64 - 1 {
        return Err(invalid(format!("constraint index {j} outside [-1, {}]", form.n as i64 - 1)));
    }
    let w = base(form, rho)?;
    let nf = form.n as f64;
    let ratio = w.dphi / w.phi;
    if j == -1 {
        return Ok(-(nf / 2.0) * ratio * rho * m.int_u2);
    }
    let jf = j as f64;
    let a = (nf - jf - 1.0) / 2.0 * ratio - form.k() * (jf + 1.0) / 2.0 * (w.phi / w.dphi);
    let b = (jf + 1.0) / (2.0 * nf) * rho / (w.phi * w.dphi);
    Ok(-a * rho * m.int_u2 - b * m.int_grad2)
}

/// The stability constants of the main theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StabilityTheorem {
    /// δ_{k,j} ≥ c·α² in H^{n+1} and S^{n+1}
    #[serde(rename = "T1.1")]
    T1_1,
    /// normalized Φ-weighted deficit ≥ c·ᾱ² in R^{n+1}
    #[serde(rename = "T1.2")]
    T1_2,
    /// Φ-weighted difference ≥ c·α² in H^{n+1}
    #[serde(rename = "T1.3-Phi")]
    T1_3Phi,
    /// φ′-weighted difference ≥ c·α² in H^{n+1}
    #[serde(rename = "T1.3-phi'")]
    T1_3PhiPrime,
    /// A_k(Ω) − A_k(B) ≥ C(n,k,j)(‖u‖² + ½‖∇u‖²) in R^{n+1}
    #[serde(rename = "VW-lower")]
    VwLower,
    /// normalized (k,j)-deficit ≥ c·ᾱ² in R^{n+1}
    #[serde(rename = "VW-alpha")]
    VwAlpha,
}

impl StabilityTheorem {
    pub const ALL: [StabilityTheorem; 6] = [
        StabilityTheorem::T1_1,
        StabilityTheorem::T1_2,
        StabilityTheorem::T1_3Phi,
        StabilityTheorem::T1_3PhiPrime,
        StabilityTheorem::VwLower,
        StabilityTheorem::VwAlpha,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StabilityTheorem::T1_1 => "T1.1",
            StabilityTheorem::T1_2 => "T1.2",
            StabilityTheorem::T1_3Phi => "T1.3-Phi",
            StabilityTheorem::T1_3PhiPrime => "T1.3-phi'",
            StabilityTheorem::VwLower => "VW-lower",
            StabilityTheorem::VwAlpha => "VW-alpha",
        }
    }

    /// Space forms in which the statement is made.
    pub fn admits(self, c: Curvature) -> bool {
        match self {
            StabilityTheorem::T1_1 => c != Curvature::Flat,
            StabilityTheorem::T1_3Phi | StabilityTheorem::T1_3PhiPrime => c == Curvature::Hyperbolic,
            _ => c == Curvature::Flat,
        }
    }

    /// Largest admissible k.
    pub fn max_k(self, n: usize) -> i64 {
        match self {
            StabilityTheorem::T1_2 => n as i64,
            _ => n as i64 - 1,
        }
    }

    pub fn weight(self) -> Option<Weight> {
        match self {
            StabilityTheorem::T1_2 | StabilityTheorem::T1_3Phi => Some(Weight::Phi),
            StabilityTheorem::T1_3PhiPrime => Some(Weight::PhiPrime),
            _ => None,
        }
    }

    pub fn check(self, form: &SpaceForm, k: i64, j: i64) -> Result<()> {
        if !self.admits(form.curvature) {
            return Err(invalid(format!("{self} is not stated for curvature {:?}", form.curvature)));
        }
        let top = self.max_k(form.n);
        if !(j >= -1 && j < k && k >= 0 && k <= top) {
            return Err(invalid(format!("{self} needs -1 <= j < k <= {top}, got (k, j) = ({k}, {j})")));
        }
        Ok(())
    }
}

impl fmt::Display for StabilityTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StabilityTheorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid(format!("unknown theorem {s:?}")))
    }
}

/// The explicit constant of the named inequality.
pub fn stability_constant(theorem: StabilityTheorem, form: &SpaceForm, k: i64, j: i64, rho: f64) -> Result<f64> {
    theorem.check(form, k, j)?;
    let n = form.n as i64;
    let (nf, kf, jf) = (n as f64, k as f64, j as f64);
    let c = binomial(n, k);
    let kj = kf - jf;
    let np1 = nf + 1.0;
    let lead = || -> Result<(Warp, f64)> {
        let w = base(form, rho)?;
        Ok((w, nf * (nf - kf) * kj / (4.0 * form.omega()) * c / w.phi.powi((n + k + 2) as i32)))
    };
    Ok(match theorem {
        StabilityTheorem::T1_1 => {
            let (w, l) = lead()?;
            l * w.dphi.powi(k as i32)
        }
        StabilityTheorem::T1_3Phi => {
            let (w, l) = lead()?;
            l * w.dphi.powi(k as i32 - 2) * w.big_phi
        }
        StabilityTheorem::T1_3PhiPrime => {
            let (w, l) = lead()?;
            l * w.dphi.powi(k as i32 + 1)
        }
        StabilityTheorem::T1_2 => nf * ((nf - kf + 2.0) * kj + 2.0 * kf - 2.0) / (4.0 * np1 * np1),
        StabilityTheorem::VwLower => c * (nf - kf) * kj / (2.0 * nf),
        StabilityTheorem::VwAlpha => nf * (nf - kf) * kj / (4.0 * np1 * np1),
    })
}

/// The u² and |∇u|² coefficients of the constrained weighted differences:
/// Φ-weight (c1, c2) and φ′-weight (c3, c4), ρ² folded in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedStabilityCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl WeightedStabilityCoefficients {
    pub fn phi_combination(&self, n: usize) -> f64 {
        self.c1 + n as f64 * self.c2
    }

    pub fn phi_prime_combination(&self, n: usize) -> f64 {
        self.c3 + n as f64 * self.c4
    }

    /// C₁ + n·C₂ ≥ 0
    pub fn phi_combination_nonnegative(&self, n: usize) -> bool {
        self.phi_combination(n) >= 0.0
    }

    /// C₃ + n·C₄ ≥ 0
    pub fn phi_prime_combination_nonnegative(&self, n: usize) -> bool {
        self.phi_prime_combination(n) >= 0.0
    }
}

fn check_weighted_indices(form: &SpaceForm, k: i64, j: i64) -> Result<()> {
    let n = form.n as i64;
    if !(j >= -1 && j < k && k <= n) {
        return Err(invalid(format!("weighted coefficients need -1 <= j < k <= {n}, got ({k}, {j})")));
    }
    Ok(())
}

pub fn weighted_stability_coefficients(
    form: &SpaceForm,
    k: i64,
    j: i64,
    rho: f64,
) -> Result<WeightedStabilityCoefficients> {
    check_weighted_indices(form, k, j)?;
    let w = base(form, rho)?;
    let n = form.n as i64;
    let kk = form.k();
    let c = binomial(n, k) * rho * rho;
    let (nf, kf, jf) = (n as f64, k as f64, j as f64);
    let nk = nf - kf;
    let p = w.big_phi;
    let c1 = c
        * ((term(&w, nk * (jf - kf) / 2.0, n - k - 2, k) + term(&w, kk * kf * (kf - jf - 2.0) / 2.0, n - k, k - 2))
            * p
            + term(&w, (nf + 1.0) / 2.0, n - k, k + 1)
            + term(&w, (jf + 1.0) / 2.0 - kf, n - k, k - 1));
    let c2 = c
        * ((term(&w, nk * (kf - jf) / (2.0 * nf), n - k - 2, k)
            - term(&w, kk * kf * (kf - jf - 2.0) / (2.0 * nf), n - k, k - 2))
            * p
            + term(&w, (2.0 * kf - jf - 1.0) / (2.0 * nf), n - k, k - 1));
    let c3 = c
        * (term(&w, nk * (jf - kf) / 2.0, n - k - 2, k + 1) - term(&w, kk * (1.0 + nf) / 2.0, n - k, k + 1)
            + term(&w, kk * (kf + 1.0) * (kf - jf - 1.0) / 2.0, n - k, k - 1));
    let c4 = c
        * (term(&w, nk * (kf - jf) / (2.0 * nf), n - k - 2, k + 1)
            - term(&w, kk * (kf + 1.0) * (kf - jf - 1.0) / (2.0 * nf), n - k, k - 1));
    Ok(WeightedStabilityCoefficients { c1, c2, c3, c4 })
}

/// C₂ and C₄ in hyperbolic space, ranges of the weighted theorem.
pub fn stability_coefficient_c2_c4(n: usize, k: i64, j: i64, rho: f64) -> Result<(f64, f64)> {
    let form = SpaceForm::new(Curvature::Hyperbolic, n)?;
    StabilityTheorem::T1_3Phi.check(&form, k, j)?;
    let c = weighted_stability_coefficients(&form, k, j, rho)?;
    Ok((c.c2, c.c4))
}

/// C₂ in the factored hyperbolic form
/// C(n,k)φ^{n−k−2}φ′^{k−2}[(n−k)(k−j)/(2n)Φ + φ²((n(k−j)−j−1)/(2n)φ′ − (n(k−j)−2k)/(2n))]ρ².
pub fn c2_factored(n: usize, k: i64, j: i64, rho: f64) -> Result<f64> {
    let form = SpaceForm::new(Curvature::Hyperbolic, n)?;
    StabilityTheorem::T1_3Phi.check(&form, k, j)?;
    let w = base(&form, rho)?;
    let (nf, kf, jf) = (n as f64, k as f64, j as f64);
    let kj = kf - jf;
    let bracket = (nf - kf) * kj / (2.0 * nf) * w.big_phi
        + w.phi * w.phi * ((nf * kj - jf - 1.0) / (2.0 * nf) * w.dphi - (nf * kj - 2.0 * kf) / (2.0 * nf));
    Ok(binomial(n as i64, k) * term(&w, 1.0, n as i64 - k - 2, k - 2) * bracket * rho * rho)
}

/// Which expansion a residual ladder compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExpansionKind {
    Sigma,
    Weighted(Weight),
    QuermassDiff,
}

impl ExpansionKind {
    pub fn name(self) -> &'static str {
        match self {
            ExpansionKind::Sigma => "sigma",
            ExpansionKind::Weighted(Weight::Phi) => "weighted-Phi",
            ExpansionKind::Weighted(Weight::PhiPrime) => "weighted-phi'",
            ExpansionKind::QuermassDiff => "quermass-diff",
        }
    }

    pub fn coefficients(self, form: &SpaceForm, k: i64, rho: f64) -> Result<QuadraticFunctionalCoefficients> {
        match self {
            ExpansionKind::Sigma => expansion_sigma_integral(form, k, rho),
            ExpansionKind::Weighted(w) => expansion_weighted(form, k, rho, w),
            ExpansionKind::QuermassDiff => expansion_quermass_diff(form, k, rho),
        }
    }

    /// Exact value of the functional and a magnitude for its rounding floor.
    pub fn exact(self, s: &NearlySphericalSurface, k: i64) -> Result<(f64, f64)> {
        Ok(match self {
            ExpansionKind::Sigma => {
                let v = curvature_integral(s, k)?;
                (v, v.abs())
            }
            ExpansionKind::Weighted(w) => {
                let v = weighted_integral(s, k, w)?;
                (v, v.abs())
            }
            ExpansionKind::QuermassDiff => {
                let a = quermass(s, k)?;
                let b = s.form().ball_quermass(k, s.rho())?;
                (a - b, a.abs() + b.abs())
            }
        })
    }
}

impl fmt::Display for ExpansionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// |exact − model| for u = t·shape over a t-ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemainderLadder {
    pub kind: ExpansionKind,
    pub k: i64,
    pub ts: Vec<f64>,
    pub exact: Vec<f64>,
    pub model: Vec<f64>,
    pub residuals: Vec<f64>,
    pub floors: Vec<f64>,
    pub fit: SlopeFit,
}

impl RemainderLadder {
    pub fn passes(&self) -> bool {
        self.fit.passes(MIN_REMAINDER_SLOPE)
    }
}

pub fn remainder_ladder(
    kind: ExpansionKind,
    form: &SpaceForm,
    k: i64,
    rho: f64,
    shape: &RadialField,
    grid: &Arc<QuadratureGrid>,
    ts: &[f64],
) -> Result<RemainderLadder> {
    let coeffs = kind.coefficients(form, k, rho)?;
    let om = form.omega();
    let mut out = RemainderLadder {
        kind,
        k,
        ts: ts.to_vec(),
        exact: Vec::new(),
        model: Vec::new(),
        residuals: Vec::new(),
        floors: Vec::new(),
        fit: SlopeFit::Exact,
    };
    for &t in ts {
        let s = NearlySphericalSurface::new(*form, rho, shape.scale(t), grid.clone())?;
        let (e, scale) = kind.exact(&s, k)?;
        let m = coeffs.evaluate(om, &UMoments::of(&s));
        out.exact.push(e);
        out.model.push(m);
        out.residuals.push((e - m).abs());
        out.floors.push(rounding_floor(scale + m.abs() + om * coeffs.c0.abs()));
    }
    out.fit = fit_residual_slope(&out.ts, &out.residuals, &out.floors);
    Ok(out)
}
