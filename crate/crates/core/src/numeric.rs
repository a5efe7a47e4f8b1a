//! Small numerical helpers shared across modules.

use std::f64::consts::PI;

/// Pairwise (cascade) summation. The split points depend only on the length,
/// so the result is bitwise reproducible.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if xs.len() <= BLOCK {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Weighted sum Σ wᵢ fᵢ with pairwise reduction.
pub fn weighted_sum(weights: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), values.len());
    let prods: Vec<f64> = weights.iter().zip(values).map(|(w, v)| w * v).collect();
    pairwise_sum(&prods)
}

/// Binomial coefficient as a float; zero outside 0 ≤ k ≤ n.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c.round()
}

/// Γ(m/2) for a positive integer m, exact recurrence from Γ(1/2)=√π and Γ(1)=1.
pub fn gamma_half(m: u32) -> f64 {
    assert!(m > 0, "gamma_half needs m > 0");
    let (mut g, mut x) = if m.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = m as f64 / 2.0;
    while x < target - 0.25 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Surface area ω_n of the unit n-sphere Sⁿ ⊂ ℝⁿ⁺¹.
pub fn sphere_area(n: usize) -> f64 {
    let mut a = [2.0, 2.0 * PI];
    if n < 2 {
        return a[n];
    }
    let mut out = 0.0;
    for m in 2..=n {
        out = 2.0 * PI / (m as f64 - 1.0) * a[m % 2];
        a[m % 2] = out;
    }
    out
}

/// Least-squares slope of log|y| against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Outcome of a residual-scaling fit.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum SlopeFit {
    /// Every residual sits at the rounding floor; the relation holds exactly.
    Exact,
    Slope(f64),
}

impl SlopeFit {
    pub fn passes(&self, min_slope: f64) -> bool {
        match *self {
            SlopeFit::Exact => true,
            SlopeFit::Slope(s) => s >= min_slope,
        }
    }

    /// Numeric value for tabular output; `inf` stands for an exact relation.
    pub fn value(&self) -> f64 {
        match *self {
            SlopeFit::Exact => f64::INFINITY,
            SlopeFit::Slope(s) => s,
        }
    }
}

/// Fit the residual decay rate. `floors[i]` is the rounding floor of
/// residual i (typically a small multiple of ε times the size of the terms
/// that were differenced); if every residual is below its floor the relation
/// is exact and no slope can be measured.
pub fn fit_residual_slope(ts: &[f64], residuals: &[f64], floors: &[f64]) -> SlopeFit {
    if residuals.iter().zip(floors).all(|(r, f)| r.abs() <= *f) {
        SlopeFit::Exact
    } else {
        SlopeFit::Slope(loglog_slope(ts, residuals))
    }
}

/// Rounding floor used with [`fit_residual_slope`]: 1e3·ε·scale.
pub fn rounding_floor(scale: f64) -> f64 {
    1e3 * f64::EPSILON * scale.abs().max(f64::MIN_POSITIVE)
}

/// The standard residual ladder t ∈ {10⁻¹, 10⁻¹·⁵, 10⁻², 10⁻²·⁵}.
pub fn t_ladder() -> [f64; 4] {
    [1e-1, 10f64.powf(-1.5), 1e-2, 10f64.powf(-2.5)]
}
