//! Polynomials in the ambient coordinates x₁..x_{n+1}.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numeric::gamma_half;

/// Highest total degree accepted for a field polynomial.
pub const MAX_DEGREE: u32 = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: f64,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbientPolynomial {
    nvars: usize,
    terms: Vec<Term>,
}

impl AmbientPolynomial {
    pub fn new(nvars: usize, terms: Vec<Term>) -> Result<Self> {
        if nvars == 0 {
            return Err(invalid("polynomial needs at least one variable"));
        }
        for t in &terms {
            if t.exponents.len() != nvars {
                return Err(invalid(format!("term has {} exponents, expected {nvars}", t.exponents.len())));
            }
            if !t.coefficient.is_finite() {
                return Err(invalid("non-finite coefficient"));
            }
            if t.exponents.iter().sum::<u32>() > MAX_DEGREE {
                return Err(invalid(format!("term degree exceeds {MAX_DEGREE}")));
            }
        }
        Ok(Self::collect(nvars, terms.into_iter().map(|t| (t.exponents, t.coefficient))))
    }

    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        Self::monomial(nvars, c, vec![0; nvars])
    }

    pub fn monomial(nvars: usize, c: f64, exponents: Vec<u32>) -> Self {
        Self::collect(nvars, std::iter::once((exponents, c)))
    }

    /// x_i (zero based index).
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, 1.0, e)
    }

    /// Merge like terms and drop zeros; terms are kept in a canonical order.
    fn collect(nvars: usize, it: impl Iterator<Item = (Vec<u32>, f64)>) -> Self {
        let mut map: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (e, c) in it {
            *map.entry(e).or_insert(0.0) += c;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(exponents, coefficient)| Term { coefficient, exponents })
            .collect();
        Self { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exponents.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * t.exponents.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product::<f64>())
            .sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::collect(self.nvars, self.terms.iter().map(|t| (t.exponents.clone(), c * t.coefficient)))
    }

    /// self + c·other
    pub fn add_scaled(&self, c: f64, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let it = self
            .terms
            .iter()
            .map(|t| (t.exponents.clone(), t.coefficient))
            .chain(other.terms.iter().map(|t| (t.exponents.clone(), c * t.coefficient)));
        Self::collect(self.nvars, it)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let e = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
                out.push((e, a.coefficient * b.coefficient));
            }
        }
        Self::collect(self.nvars, out.into_iter())
    }

    /// Euclidean Laplacian in ℝ^{nvars}.
    pub fn laplacian(&self) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            for (i, &e) in t.exponents.iter().enumerate() {
                if e >= 2 {
                    let mut ex = t.exponents.clone();
                    ex[i] -= 2;
                    out.push((ex, t.coefficient * (e * (e - 1)) as f64));
                }
            }
        }
        Self::collect(self.nvars, out.into_iter())
    }

    /// |x|² · self
    pub fn times_norm_sq(&self) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            for i in 0..self.nvars {
                let mut ex = t.exponents.clone();
                ex[i] += 2;
                out.push((ex, t.coefficient));
            }
        }
        Self::collect(self.nvars, out.into_iter())
    }

    /// Exact integral over the unit sphere S^{nvars−1}.
    pub fn sphere_integral(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient * monomial_moment(&t.exponents)).sum()
    }

    /// Exact L² inner product over the unit sphere.
    pub fn sphere_inner(&self, other: &Self) -> f64 {
        let mut acc = 0.0;
        for a in &self.terms {
            for b in &other.terms {
                let e: Vec<u32> = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
                acc += a.coefficient * b.coefficient * monomial_moment(&e);
            }
        }
        acc
    }

    /// Harmonic projection of a homogeneous polynomial of degree l:
    /// Σ_j a_j |x|^{2j} Δ^j p with a_j = (−1)^j / (2^j j! Π_{i=1}^j (d+2l−2−2i)).
    pub fn harmonic_projection(&self, l: u32) -> Self {
        let d = self.nvars as f64;
        let mut out = self.clone();
        let mut lap = self.clone();
        let mut coef = 1.0;
        let mut j = 1u32;
        loop {
            lap = lap.laplacian();
            if lap.is_zero() {
                break;
            }
            coef *= -1.0 / (2.0 * j as f64 * (d + 2.0 * l as f64 - 2.0 - 2.0 * j as f64));
            let mut term = lap.clone();
            for _ in 0..j {
                term = term.times_norm_sq();
            }
            out = out.add_scaled(coef, &term);
            j += 1;
        }
        out
    }
}

/// ∫_{S^{d−1}} x^α dA = 2 Π Γ((αᵢ+1)/2) / Γ((|α|+d)/2), zero if any αᵢ is odd.
pub fn monomial_moment(exponents: &[u32]) -> f64 {
    if exponents.iter().any(|e| e % 2 == 1) {
        return 0.0;
    }
    let d = exponents.len() as u32;
    let total: u32 = exponents.iter().sum();
    let num: f64 = exponents.iter().map(|&e| gamma_half(e + 1)).product();
    2.0 * num / gamma_half(total + d)
}

/// All exponent vectors of total degree l in `nvars` variables, in
/// lexicographically descending order.
pub fn monomials_of_degree(nvars: usize, l: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() - 1 {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
    }
    rec(0, l, &mut cur, &mut out);
    out
}
