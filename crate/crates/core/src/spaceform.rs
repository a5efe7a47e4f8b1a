//! Space forms of curvature K ∈ {−1, 0, +1}: warp functions, geodesic
//! distance and closed-form ball quantities.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::{binomial, sphere_area};

/// Radii for K=+1 must stay below this cap in every solver.
pub const SPHERICAL_RADIUS_CAP: f64 = FRAC_PI_2 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curvature {
    Hyperbolic,
    Flat,
    Spherical,
}

impl Curvature {
    pub fn k(self) -> f64 {
        match self {
            Curvature::Hyperbolic => -1.0,
            Curvature::Flat => 0.0,
            Curvature::Spherical => 1.0,
        }
    }

    pub fn from_int(k: i64) -> Result<Self> {
        match k {
            -1 => Ok(Curvature::Hyperbolic),
            0 => Ok(Curvature::Flat),
            1 => Ok(Curvature::Spherical),
            _ => Err(invalid(format!("curvature must be -1, 0 or 1, got {k}"))),
        }
    }

    pub fn as_int(self) -> i64 {
        self.k() as i64
    }
}

/// Radial weight Ψ used by weighted curvature integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Weight {
    /// Φ(r) = ∫₀^r φ.
    Phi,
    /// φ′(r).
    PhiPrime,
}

/// φ, φ′ and Φ at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Warp {
    pub phi: f64,
    pub dphi: f64,
    pub big_phi: f64,
}

impl Warp {
    pub fn weight(&self, w: Weight) -> f64 {
        match w {
            Weight::Phi => self.big_phi,
            Weight::PhiPrime => self.dphi,
        }
    }
}

/// A point (r, x) in geodesic polar coordinates about the origin O.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarPoint {
    pub r: f64,
    pub dir: Vec<f64>,
}

/// The space form N^{n+1}(K).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceForm {
    pub curvature: Curvature,
    pub n: usize,
}

impl SpaceForm {
    pub fn new(curvature: Curvature, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("hypersurface dimension n must be >= 2, got {n}")));
        }
        Ok(Self { curvature, n })
    }

    pub fn k(&self) -> f64 {
        self.curvature.k()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + 1
    }

    /// ω_n, the area of the unit n-sphere.
    pub fn omega(&self) -> f64 {
        sphere_area(self.n)
    }

    pub fn check_radius(&self, r: f64) -> Result<()> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
        }
        if self.curvature == Curvature::Spherical && r >= FRAC_PI_2 {
            return Err(Error::Domain(format!("radius {r} >= pi/2 in the sphere")));
        }
        Ok(())
    }

    pub fn warp(&self, r: f64) -> Result<Warp> {
        self.check_radius(r)?;
        Ok(self.warp_unchecked(r))
    }

    pub(crate) fn warp_unchecked(&self, r: f64) -> Warp {
        match self.curvature {
            Curvature::Flat => Warp { phi: r, dphi: 1.0, big_phi: 0.5 * r * r },
            Curvature::Spherical => {
                let s = (0.5 * r).sin();
                Warp { phi: r.sin(), dphi: r.cos(), big_phi: 2.0 * s * s }
            }
            Curvature::Hyperbolic => {
                let s = (0.5 * r).sinh();
                Warp { phi: r.sinh(), dphi: r.cosh(), big_phi: 2.0 * s * s }
            }
        }
    }

    /// Geodesic distance by the haversine form of the law of cosines.
    pub fn geodesic_distance(&self, p: &PolarPoint, q: &PolarPoint) -> Result<f64> {
        self.check_radius(p.r)?;
        self.check_radius(q.r)?;
        if p.dir.len() != self.n + 1 || q.dir.len() != self.n + 1 {
            return Err(invalid("direction vectors must have n+1 components"));
        }
        let chord2: f64 = p.dir.iter().zip(&q.dir).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok(self.distance_from_chord(p.r, q.r, 0.25 * chord2))
    }

    /// Distance between (r1, x1) and (r2, x2) given h = sin²(θ/2) of their angle.
    pub(crate) fn distance_from_chord(&self, r1: f64, r2: f64, h: f64) -> f64 {
        match self.curvature {
            Curvature::Flat => ((r1 - r2).powi(2) + 4.0 * r1 * r2 * h).max(0.0).sqrt(),
            Curvature::Hyperbolic => {
                let a = (0.5 * (r1 - r2)).sinh();
                let s = (a * a + r1.sinh() * r2.sinh() * h).max(0.0).sqrt();
                2.0 * s.asinh()
            }
            Curvature::Spherical => {
                let a = (0.5 * (r1 - r2)).sin();
                let s = (a * a + r1.sin() * r2.sin() * h).max(0.0).sqrt();
                2.0 * s.min(1.0).asin()
            }
        }
    }

    /// I_m(R) = ∫₀^R φ^m dr.
    pub fn power_integral(&self, m: usize, big_r: f64) -> f64 {
        if self.curvature == Curvature::Flat {
            return big_r.powi(m as i32 + 1) / (m as f64 + 1.0);
        }
        if big_r < 1.0 {
            return series_integral(self.k(), m, big_r, false);
        }
        let w = self.warp_unchecked(big_r);
        let k = self.k();
        let mut prev2 = big_r;
        let mut prev1 = w.big_phi;
        if m == 0 {
            return prev2;
        }
        for p in 2..=m {
            let cur = ((p as f64 - 1.0) * prev2 - w.phi.powi(p as i32 - 1) * w.dphi) / (k * p as f64);
            prev2 = prev1;
            prev1 = cur;
        }
        prev1
    }

    /// J_m(R) = ∫₀^R s·φ^m(s) ds.
    pub fn moment_integral(&self, m: usize, big_r: f64) -> f64 {
        if self.curvature == Curvature::Flat {
            return big_r.powi(m as i32 + 2) / (m as f64 + 2.0);
        }
        if big_r < 1.0 {
            return series_integral(self.k(), m, big_r, true);
        }
        let w = self.warp_unchecked(big_r);
        let k = self.k();
        let mut prev2 = 0.5 * big_r * big_r;
        let mut prev1 = (w.phi - big_r * w.dphi) / k;
        if m == 0 {
            return prev2;
        }
        for p in 2..=m {
            let pf = p as f64;
            let cur =
                ((pf - 1.0) * prev2 - big_r * w.phi.powi(p as i32 - 1) * w.dphi + w.phi.powi(p as i32) / pf) / (k * pf);
            prev2 = prev1;
            prev1 = cur;
        }
        prev1
    }

    /// Volume of the geodesic ball of radius R, ω_n·I_n(R).
    pub fn ball_volume(&self, big_r: f64) -> f64 {
        self.omega() * self.power_integral(self.n, big_r)
    }

    fn check_k(&self, k: i64) -> Result<()> {
        if k < -1 || k > self.n as i64 {
            return Err(invalid(format!("quermassintegral index {k} outside [-1, {}]", self.n)));
        }
        Ok(())
    }

    /// ψ_k(ρ), the k-th quermassintegral of the geodesic ball of radius ρ.
    pub fn ball_quermass(&self, k: i64, rho: f64) -> Result<f64> {
        self.check_k(k)?;
        self.check_radius(rho)?;
        Ok(self.quermass_and_derivative(k, rho).0)
    }

    /// (ψ_k(ρ), dψ_k/dρ) from the recursion.
    pub(crate) fn quermass_and_derivative(&self, k: i64, rho: f64) -> (f64, f64) {
        let n = self.n as i64;
        let w = self.warp_unchecked(rho);
        let om = self.omega();
        let kk = self.k();
        match k {
            -1 => (om * self.power_integral(self.n, rho), om * w.phi.powi(self.n as i32)),
            0 => {
                let (v, d) = mono(&w, kk, 0, n);
                (om * v, om * d)
            }
            _ => {
                let c = binomial(n, k);
                let (v, d) = mono(&w, kk, k, n - k);
                let (pv, pd) = self.quermass_and_derivative(k - 2, rho);
                let f = if k == 1 { n as f64 } else { (n - k + 1) as f64 / (k - 1) as f64 };
                (om * c * v + kk * f * pv, om * c * d + kk * f * pd)
            }
        }
    }

    /// Solve ψ_j(ρ) = target for ρ: bisection on the admissible interval,
    /// a sampled monotonicity check, then one Newton polish.
    pub fn ball_radius_from_quermass(&self, j: i64, target: f64) -> Result<f64> {
        self.check_k(j)?;
        if !target.is_finite() {
            return Err(invalid("target must be finite"));
        }
        let f = |r: f64| self.quermass_and_derivative(j, r).0;
        let lo0 = 0.0;
        let mut hi = match self.curvature {
            Curvature::Spherical => SPHERICAL_RADIUS_CAP,
            _ => 1.0,
        };
        if self.curvature != Curvature::Spherical {
            while f(hi) < target && hi < 64.0 {
                hi *= 2.0;
            }
        }
        const SAMPLES: usize = 64;
        let mut last = f(lo0);
        for s in 1..=SAMPLES {
            let v = f(hi * s as f64 / SAMPLES as f64);
            if v <= last {
                return Err(Error::AmbiguousInverse(format!("psi_{j} is not strictly increasing on [0, {hi}]")));
            }
            last = v;
        }
        let (f_lo, f_hi) = (f(lo0), f(hi));
        if !(f_lo <= target && target <= f_hi) {
            return Err(Error::NoSolution(format!(
                "target {target} outside [{f_lo}, {f_hi}] for psi_{j} on [0, {hi}]"
            )));
        }
        let (mut lo, mut up) = (lo0, hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + up);
            if mid <= lo || mid >= up {
                break;
            }
            if f(mid) < target {
                lo = mid;
            } else {
                up = mid;
            }
        }
        let mut r = 0.5 * (lo + up);
        let (v, d) = self.quermass_and_derivative(j, r);
        if d > 0.0 {
            let cand = r - (v - target) / d;
            if cand >= lo0 && cand <= hi && (f(cand) - target).abs() <= (v - target).abs() {
                r = cand;
            }
        }
        Ok(r)
    }

    /// ∫ Ψ σ_k over the centered ball boundary: ω_n C(n,k) φ′^k φ^{n−k} Ψ(ρ).
    pub fn ball_weighted_integral(&self, k: i64, weight: Weight, rho: f64) -> Result<f64> {
        if k < 0 || k > self.n as i64 {
            return Err(invalid(format!("curvature index {k} outside [0, {}]", self.n)));
        }
        let w = self.warp(rho)?;
        Ok(self.ball_curvature_integral_at(k, &w) * w.weight(weight))
    }

    /// ∫ σ_k over the centered ball boundary.
    pub fn ball_curvature_integral(&self, k: i64, rho: f64) -> Result<f64> {
        if k < 0 || k > self.n as i64 {
            return Err(invalid(format!("curvature index {k} outside [0, {}]", self.n)));
        }
        let w = self.warp(rho)?;
        Ok(self.ball_curvature_integral_at(k, &w))
    }

    fn ball_curvature_integral_at(&self, k: i64, w: &Warp) -> f64 {
        let n = self.n as i64;
        self.omega() * binomial(n, k) * w.dphi.powi(k as i32) * w.phi.powi((n - k) as i32)
    }

    /// ξ_{k,l} (Φ) or η_{k,l} (φ′): the weighted ball integral at the radius
    /// whose l-th quermassintegral equals `value`.
    pub fn weighted_composition(&self, k: i64, l: i64, weight: Weight, value: f64) -> Result<f64> {
        let r = self.ball_radius_from_quermass(l, value)?;
        self.ball_weighted_integral(k, weight, r)
    }
}

/// (φ′^a φ^b, d/dr of it) using φ″ = −Kφ.
fn mono(w: &Warp, kk: f64, a: i64, b: i64) -> (f64, f64) {
    let p = |x: f64, e: i64| if e == 0 { 1.0 } else { x.powi(e as i32) };
    let v = p(w.dphi, a) * p(w.phi, b);
    let mut d = 0.0;
    if b > 0 {
        d += b as f64 * p(w.dphi, a + 1) * p(w.phi, b - 1);
    }
    if a > 0 {
        d -= kk * a as f64 * p(w.dphi, a - 1) * p(w.phi, b + 1);
    }
    (v, d)
}

/// Power series of ∫₀^R s^e φ^m ds (e = 0 or 1) for K = ±1 and R < 1.
fn series_integral(kk: f64, m: usize, big_r: f64, moment: bool) -> f64 {
    const TERMS: usize = 30;
    // φ(r)/r = Σ c_i (r²)^i with c_i = (−K)^i/(2i+1)!
    let mut base = vec![0.0; TERMS];
    let mut fact = 1.0;
    for (i, c) in base.iter_mut().enumerate() {
        if i > 0 {
            fact *= (2 * i) as f64 * (2 * i + 1) as f64;
        }
        *c = (-kk).powi(i as i32) / fact;
    }
    let mut pw = vec![0.0; TERMS];
    pw[0] = 1.0;
    for _ in 0..m {
        let mut next = vec![0.0; TERMS];
        for i in 0..TERMS {
            if pw[i] == 0.0 {
                continue;
            }
            for j in 0..TERMS - i {
                next[i + j] += pw[i] * base[j];
            }
        }
        pw = next;
    }
    let shift = if moment { 1 } else { 0 };
    let r2 = big_r * big_r;
    let mut acc = 0.0;
    let mut rp = big_r.powi((m + shift) as i32 + 1);
    for (i, c) in pw.iter().enumerate() {
        acc += c * rp / ((m + shift + 2 * i) as f64 + 1.0);
        rp *= r2;
    }
    acc
}
