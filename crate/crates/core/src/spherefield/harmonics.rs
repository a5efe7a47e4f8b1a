//! Orthonormal spherical-harmonic bases built from harmonic projections of
//! monomials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::RadialField;
use super::grid::QuadratureGrid;
use super::polynomial::{monomials_of_degree, AmbientPolynomial};
use crate::error::{Error, Result};
use crate::numeric::binomial;

/// Dimension of the degree-l harmonic space on Sⁿ: C(n+l, n) − C(n+l−2, n).
pub fn harmonic_dimension(n: usize, l: u32) -> usize {
    let (n, l) = (n as i64, l as i64);
    (binomial(n + l, n) - binomial(n + l - 2, n)) as usize
}

/// Laplace–Beltrami eigenvalue magnitude l(n+l−1) of degree-l harmonics.
pub fn eigenvalue(n: usize, l: u32) -> f64 {
    (l as f64) * (n as f64 + l as f64 - 1.0)
}

/// L²(Sⁿ)-orthonormal basis of degree-l harmonics. Monomials are projected
/// onto the kernel of the ambient Laplacian in lexicographically descending
/// order, then orthonormalized (twice) under exact sphere inner products.
pub fn harmonic_basis(n: usize, l: u32) -> Result<Vec<RadialField>> {
    let d = n + 1;
    let want = harmonic_dimension(n, l);
    let mut basis: Vec<AmbientPolynomial> = Vec::with_capacity(want);
    for e in monomials_of_degree(d, l) {
        if basis.len() == want {
            break;
        }
        let mut p = AmbientPolynomial::monomial(d, 1.0, e).harmonic_projection(l);
        let norm0 = p.sphere_inner(&p).sqrt();
        if norm0 == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for b in &basis {
                let c = b.sphere_inner(&p);
                p = p.add_scaled(-c, b);
            }
        }
        let norm = p.sphere_inner(&p).sqrt();
        if norm <= 1e-8 * norm0 {
            continue;
        }
        basis.push(p.scale(1.0 / norm));
    }
    if basis.len() != want {
        return Err(Error::BasisConstruction(format!(
            "found {} independent harmonics of degree {l} on S^{n}, expected {want}",
            basis.len()
        )));
    }
    basis.into_iter().map(|p| RadialField::new(n, p)).collect()
}

/// Quadrature inner products of u with every basis element of degree l.
pub fn harmonic_coefficients(u: &RadialField, l: u32, grid: &QuadratureGrid) -> Result<Vec<f64>> {
    let basis = harmonic_basis(u.n(), l)?;
    let uv: Vec<f64> = grid.nodes().iter().map(|x| u.value(x)).collect();
    Ok(basis
        .iter()
        .map(|y| {
            let f: Vec<f64> = grid.nodes().iter().zip(&uv).map(|(x, v)| v * y.value(x)).collect();
            grid.integrate(&f)
        })
        .collect())
}

/// Σ c_i Y_{l,i} over given (degree, index, coefficient) triples.
pub fn harmonic_combination(n: usize, terms: &[(u32, usize, f64)]) -> Result<RadialField> {
    let mut out = RadialField::zero(n);
    let mut cache: Vec<(u32, Vec<RadialField>)> = Vec::new();
    for &(l, idx, c) in terms {
        if !cache.iter().any(|(d, _)| *d == l) {
            cache.push((l, harmonic_basis(n, l)?));
        }
        let b = &cache.iter().find(|(d, _)| *d == l).unwrap().1;
        let y = b.get(idx).ok_or_else(|| {
            Error::InvalidInput(format!("harmonic index {idx} >= dimension {} at degree {l}", b.len()))
        })?;
        out = out.add_scaled(c, y);
    }
    Ok(out)
}

/// Field with independent uniform(−1, 1) coefficients on every basis
/// harmonic of the given degrees, deterministic in `seed`.
pub fn random_harmonic_field(n: usize, degrees: &[u32], seed: u64) -> Result<RadialField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = RadialField::zero(n);
    for &l in degrees {
        for y in harmonic_basis(n, l)? {
            out = out.add_scaled(rng.random_range(-1.0..1.0), &y);
        }
    }
    Ok(out)
}
