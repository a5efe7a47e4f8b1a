//! Values frozen from oracles/embedded_surface.py, which integrates the
//! ambient-model embedding of each surface in 30-digit arithmetic.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;
use std::sync::Arc;

use nearsphere::expansions::StabilityTheorem;
use nearsphere::hypersurface::NearlySphericalSurface;
use nearsphere::integrals::{curvature_integral, deficit, quermass, volume, weighted_integral};
use nearsphere::spherefield::{harmonic_combination, QuadratureGrid, RadialField};
use nearsphere::stability::{fit_constraints, fraenkel_origin, theorem_report};
use nearsphere::{Curvature, SpaceForm, Weight};

const REL: f64 = 1e-10;

fn close(label: &str, got: f64, want: f64, rel: f64) {
    assert!((got - want).abs() <= rel * want.abs(), "{label}: got {got:?}, want {want:?}");
}

fn grid(l: u32) -> Arc<QuadratureGrid> {
    Arc::new(QuadratureGrid::build(2, l).unwrap())
}

fn y2() -> RadialField {
    harmonic_combination(2, &[(2, 0, 1.0)]).unwrap()
}

#[test]
fn first_degree_two_harmonic_is_the_zonal_one() {
    let y = y2();
    let c = (45.0 / (16.0 * PI)).sqrt();
    for x in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8], [0.6, 0.0, -0.8]] {
        close("Y2", y.value(&x), c * (x[0] * x[0] - 1.0 / 3.0), 1e-14);
    }
}

#[test]
fn euclidean_shifted_sphere() {
    let form = SpaceForm::new(Curvature::Flat, 2).unwrap();
    let s = NearlySphericalSurface::new(form, 1.0, RadialField::coordinate(2, 0).scale(0.05), grid(40)).unwrap();
    close("volume", volume(&s), 4.199262180298356962078, REL);
    close("sigma_1", curvature_integral(&s, 1).unwrap(), 25.15367470402365443656, REL);
    close("sigma_2", curvature_integral(&s, 2).unwrap(), 12.56637061435917295385, REL);
}

#[test]
fn hyperbolic_degree_two_perturbation() {
    let form = SpaceForm::new(Curvature::Hyperbolic, 2).unwrap();
    let s = NearlySphericalSurface::new(form, 1.0, y2().scale(0.01), grid(40)).unwrap();
    close("volume", volume(&s), 5.111114275773433077151, REL);
    close("area", quermass(&s, 0).unwrap(), 17.35606403555354074168, REL);
    close("sigma_1", curvature_integral(&s, 1).unwrap(), 45.57798691977218271728, REL);
    close("sigma_2", curvature_integral(&s, 2).unwrap(), 29.92243464991271369553, REL);
    close("A_1", quermass(&s, 1).unwrap(), 35.35575836822531656298, REL);
    close("Phi sigma_1", weighted_integral(&s, 1, Weight::Phi).unwrap(), 24.75439568060977746884, REL);
    close("phi' sigma_1", weighted_integral(&s, 1, Weight::PhiPrime).unwrap(), 70.33238260038196018612, REL);
}

#[test]
fn spherical_top_quermass_is_topological() {
    let form = SpaceForm::new(Curvature::Spherical, 2).unwrap();
    let u = y2().scale(0.01).add_scaled(0.02, &RadialField::coordinate(2, 0));
    let s = NearlySphericalSurface::new(form, 0.7, u, grid(40)).unwrap();
    close("A_2", quermass(&s, 2).unwrap(), 4.0 * PI, 1e-12);
}

#[test]
fn constrained_hyperbolic_pipeline() {
    let form = SpaceForm::new(Curvature::Hyperbolic, 2).unwrap();
    let fit = fit_constraints(&form, 1.0, 0, &y2(), 1e-2, &grid(40)).unwrap();
    close("a0", fit.a0, -0.00005262965324875220689039, 1e-8);
    assert!(fit.a1_norm() < 1e-14);
    let s = &fit.surface;
    let d = deficit(s, 1, 0).unwrap();
    close("deficit", d.deficit, 0.0002632636154238216987009, 1e-7);
    // |F(r) − F(R)| has a kink where r = R; Gauss rules converge only
    // algebraically there (same error as plain Gauss–Legendre in x₁)
    let alpha = 0.04220574220002865822439;
    for l in [40, 120] {
        let f = fit_constraints(&form, 1.0, 0, &y2(), 1e-2, &grid(l)).unwrap();
        close("origin asymmetry", fraenkel_origin(&f.surface).unwrap(), alpha, 1e-3);
    }
    let r = theorem_report(s, 1, 0, StabilityTheorem::T1_1).unwrap();
    close("constant", r.constant, 0.05477944622109501707152, 1e-14);
    close("margin", r.margin, 0.0001656836362062332141769, 1e-3);
    assert!(r.margin > 0.0);
}
