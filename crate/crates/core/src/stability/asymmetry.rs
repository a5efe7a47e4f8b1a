//! Symmetric-difference asymmetry between a star-shaped domain and
//! volume-matched geodesic balls.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::hypersurface::NearlySphericalSurface;
use crate::integrals::volume;
use crate::optimize::nelder_mead;
use crate::spaceform::{Curvature, SpaceForm};
use crate::spherefield::QuadratureGrid;

/// Radius at which the ray from O in direction `dir` leaves the geodesic
/// ball of radius R centered at exp_O(center). Requires d(O, c) < R.
pub fn offcenter_radial(form: &SpaceForm, big_r: f64, center: &[f64], dir: &[f64]) -> Result<f64> {
    let s = center.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(s < big_r) {
        return Err(Error::Geometry(format!("center at distance {s} is not inside the ball of radius {big_r}")));
    }
    if form.curvature == Curvature::Spherical && big_r + s >= std::f64::consts::PI {
        return Err(Error::Geometry("ball does not fit in the polar chart".into()));
    }
    Ok(offcenter_unchecked(form.curvature, big_r, s, cos_angle(center, s, dir)))
}

fn cos_angle(center: &[f64], s: f64, dir: &[f64]) -> f64 {
    if s == 0.0 {
        return 1.0;
    }
    (center.iter().zip(dir).map(|(c, x)| c * x).sum::<f64>() / s).clamp(-1.0, 1.0)
}

/// Inverse of the law of cosines cos_K R = f(r, s, θ) for r.
fn offcenter_unchecked(c: Curvature, big_r: f64, s: f64, cos_t: f64) -> f64 {
    if s == 0.0 {
        return big_r;
    }
    let sin2 = (1.0 - cos_t * cos_t).max(0.0);
    match c {
        Curvature::Flat => s * cos_t + (big_r * big_r - s * s * sin2).max(0.0).sqrt(),
        Curvature::Hyperbolic => {
            // cosh R = cosh r cosh s − sinh r sinh s cos θ
            let a = s.cosh();
            let b = s.sinh() * cos_t;
            let m = (1.0 + s.sinh().powi(2) * sin2).sqrt();
            (b / a).atanh() + (big_r.cosh() / m).max(1.0).acosh()
        }
        Curvature::Spherical => {
            // cos R = cos r cos s + sin r sin s cos θ
            let a = s.cos();
            let b = s.sin() * cos_t;
            let m = (a * a + b * b).sqrt();
            b.atan2(a) + (big_r.cos() / m).clamp(-1.0, 1.0).acos()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FraenkelResult {
    /// Smallest symmetric-difference volume found.
    pub value: f64,
    /// Its center in geodesic normal coordinates at O.
    pub center: Vec<f64>,
    /// Symmetric difference with the volume-matched ball centered at O.
    pub origin_value: f64,
    /// Radius of the volume-matched ball.
    pub radius: f64,
    /// False when no start converged; `value` is then the best point seen.
    pub converged: bool,
}

struct Profile<'a> {
    form: SpaceForm,
    grid: &'a QuadratureGrid,
    /// I_n(r(x)) at each node
    inner: Vec<f64>,
    big_r: f64,
}

impl Profile<'_> {
    fn symmetric_difference(&self, center: &[f64]) -> f64 {
        let s = center.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(s < self.big_r) || (self.form.curvature == Curvature::Spherical && self.big_r + s >= std::f64::consts::PI)
        {
            return f64::INFINITY;
        }
        let n = self.form.n;
        let vals: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .zip(&self.inner)
            .map(|(x, a)| {
                let rc = offcenter_unchecked(self.form.curvature, self.big_r, s, cos_angle(center, s, x));
                (a - self.form.power_integral(n, rc)).abs()
            })
            .collect();
        self.grid.integrate(&vals)
    }
}

fn profile<'a>(form: &SpaceForm, grid: &'a QuadratureGrid, radii: &[f64]) -> Result<Profile<'a>> {
    if grid.n() != form.n || radii.len() != grid.len() {
        return Err(invalid("radii must be given at every grid node"));
    }
    if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(Error::Geometry("radial profile must be positive".into()));
    }
    let inner: Vec<f64> = radii.iter().map(|r| form.power_integral(form.n, *r)).collect();
    let vol = grid.integrate(&inner);
    let big_r = form.ball_radius_from_quermass(-1, vol)?;
    Ok(Profile { form: *form, grid, inner, big_r })
}

/// Vol(Ω Δ B̄_R(O)) with ψ_{−1}(R) = Vol(Ω).
pub fn fraenkel_origin(s: &NearlySphericalSurface) -> Result<f64> {
    let f = s.form();
    let big_r = f.ball_radius_from_quermass(-1, volume(s))?;
    let ir = f.power_integral(f.n, big_r);
    let vals: Vec<f64> = s.node_data().iter().map(|d| (f.power_integral(f.n, d.r) - ir).abs()).collect();
    Ok(s.grid().integrate(&vals))
}

pub fn fraenkel(s: &NearlySphericalSurface) -> Result<FraenkelResult> {
    let radii: Vec<f64> = s.node_data().iter().map(|d| d.r).collect();
    fraenkel_from_radii(&s.form(), s.grid(), &radii)
}

/// Minimize the symmetric difference over ball centers, for a star-shaped
/// domain given by its radii at the grid nodes. Starts at O and at ± a small
/// shift along the first-moment direction of the profile.
pub fn fraenkel_from_radii(form: &SpaceForm, grid: &QuadratureGrid, radii: &[f64]) -> Result<FraenkelResult> {
    let p = profile(form, grid, radii)?;
    let d = form.n + 1;
    let origin = vec![0.0; d];
    let origin_value = p.symmetric_difference(&origin);

    let ir = form.power_integral(form.n, p.big_r);
    let mut dir: Vec<f64> = (0..d)
        .map(|l| {
            let v: Vec<f64> = grid.nodes().iter().zip(&p.inner).map(|(x, a)| x[l] * (a - ir)).collect();
            grid.integrate(&v)
        })
        .collect();
    let dn = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    if dn > 0.0 {
        dir.iter_mut().for_each(|x| *x /= dn);
    } else {
        dir[0] = 1.0;
    }
    let spread = radii.iter().fold(0.0f64, |m, r| m.max((r - p.big_r).abs()));
    let shift = spread.clamp(1e-6 * p.big_r, 0.25 * p.big_r);
    let starts = [origin.clone(), dir.iter().map(|x| shift * x).collect(), dir.iter().map(|x| -shift * x).collect()];

    let best = starts
        .iter()
        .map(|x0| nelder_mead(|c| p.symmetric_difference(c), x0, shift, 1e-12 * p.big_r, 0.0, 4000))
        .min_by(|a, b| a.f.total_cmp(&b.f))
        .expect("three starts");
    Ok(FraenkelResult { value: best.f, center: best.x, origin_value, radius: p.big_r, converged: best.converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaceform::PolarPoint;
    use crate::spherefield::{harmonic_combination, RadialField};
    use std::sync::Arc;

    #[test]
    fn offcenter_profile_lies_on_the_sphere() {
        for c in [Curvature::Hyperbolic, Curvature::Flat, Curvature::Spherical] {
            let form = SpaceForm::new(c, 2).unwrap();
            let center = [0.2, -0.1, 0.15];
            let s = center.iter().map(|x| x * x).sum::<f64>().sqrt();
            let cp = PolarPoint { r: s, dir: center.iter().map(|x| x / s).collect() };
            for dir in [[1.0, 0.0, 0.0], [0.0, 0.6, -0.8], [-1.0, 0.0, 0.0]] {
                let r = offcenter_radial(&form, 0.9, &center, &dir).unwrap();
                let d = form.geodesic_distance(&PolarPoint { r, dir: dir.to_vec() }, &cp).unwrap();
                assert!((d - 0.9).abs() < 1e-12, "{c:?}: {d}");
            }
            assert!(offcenter_radial(&form, 0.2, &center, &[1.0, 0.0, 0.0]).is_err());
        }
    }

    #[test]
    fn centered_ball_has_zero_asymmetry() {
        let g = Arc::new(QuadratureGrid::build(2, 10).unwrap());
        let s = NearlySphericalSurface::new(
            SpaceForm::new(Curvature::Hyperbolic, 2).unwrap(),
            1.0,
            RadialField::zero(2),
            g,
        )
        .unwrap();
        assert!(fraenkel_origin(&s).unwrap() < 1e-12);
        assert!(fraenkel(&s).unwrap().value <= 1e-8);
    }

    #[test]
    fn translated_euclidean_ball_is_recovered() {
        let g = QuadratureGrid::build(2, 20).unwrap();
        let form = SpaceForm::new(Curvature::Flat, 2).unwrap();
        let c = [0.05, 0.02, -0.03];
        let radii: Vec<f64> = g.nodes().iter().map(|x| offcenter_radial(&form, 1.0, &c, x).unwrap()).collect();
        let out = fraenkel_from_radii(&form, &g, &radii).unwrap();
        assert!(out.origin_value > 1e-2);
        assert!(out.value <= 1e-6, "{out:?}");
        assert!(out.center.iter().zip(c).all(|(a, b)| (a - b).abs() < 1e-6));
    }

    #[test]
    fn minimized_value_never_exceeds_origin_value() {
        let g = Arc::new(QuadratureGrid::build(2, 14).unwrap());
        let u = harmonic_combination(2, &[(1, 0, 0.02), (2, 1, 0.03), (3, 4, -0.02)]).unwrap();
        for c in [Curvature::Hyperbolic, Curvature::Spherical] {
            let s = NearlySphericalSurface::new(SpaceForm::new(c, 2).unwrap(), 0.7, u.clone(), g.clone()).unwrap();
            let f = fraenkel(&s).unwrap();
            assert!(f.value <= f.origin_value);
            assert!((f.origin_value - fraenkel_origin(&s).unwrap()).abs() <= 1e-12 * f.origin_value);
        }
    }
}
