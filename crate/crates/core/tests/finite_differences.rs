//! Jets, metrics and shape operators against finite differences of explicit
//! embeddings (Euclidean space, the hyperboloid in R^{1,n+1}, S^{n+1} in R^{n+2}).

use nalgebra::DMatrix;
use nearsphere::hypersurface::PointGeometry;
use nearsphere::spherefield::{random_harmonic_field, JetFrame, RadialField};
use nearsphere::{Curvature, PolarPoint, SpaceForm};

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

fn probe_points(d: usize) -> Vec<Vec<f64>> {
    let mut out = vec![normalize(&vec![1.0; d])];
    let mut p = vec![0.3; d];
    p[0] = -0.8;
    p[d - 1] = 0.5;
    out.push(normalize(&p));
    let mut q = vec![0.0; d];
    q[1] = 1.0;
    out.push(q);
    out
}

/// Point of Sⁿ at s along the chart y(s) = (x + Σ sᵢeᵢ)/|·| of the frame.
fn chart(frame: &JetFrame, s: &[f64]) -> Vec<f64> {
    let mut y = frame.point.clone();
    for (si, e) in s.iter().zip(&frame.basis) {
        for (a, b) in y.iter_mut().zip(e) {
            *a += si * b;
        }
    }
    normalize(&y)
}

#[test]
fn jets_match_great_circle_differences() {
    for n in [2usize, 3] {
        let u = random_harmonic_field(n, &[1, 2, 3, 4], 40 + n as u64).unwrap();
        for x in probe_points(n + 1) {
            let frame = JetFrame::at(&x);
            let jet = u.jet(&frame);
            let h = 1e-4;
            let along = |v: &[f64], s: f64| -> f64 {
                let p: Vec<f64> = x.iter().zip(v).map(|(a, b)| s.cos() * a + s.sin() * b).collect();
                u.value(&p)
            };
            for i in 0..n {
                let e = &frame.basis[i];
                let d1 = (along(e, h) - along(e, -h)) / (2.0 * h);
                assert!((d1 - jet.gradient[i]).abs() < 1e-6, "grad {i}: {d1} vs {}", jet.gradient[i]);
                for j in 0..n {
                    // great circles are geodesics, so second derivatives along
                    // them give the covariant Hessian on the diagonal directions
                    let v = normalize(&e.iter().zip(&frame.basis[j]).map(|(a, b)| a + b).collect::<Vec<_>>());
                    let w = if i == j { e.clone() } else { v };
                    let d2 = (along(&w, h) - 2.0 * along(&w, 0.0) + along(&w, -h)) / (h * h);
                    let want = if i == j {
                        jet.hessian[(i, i)]
                    } else {
                        0.5 * (jet.hessian[(i, i)] + jet.hessian[(j, j)]) + jet.hessian[(i, j)]
                    };
                    assert!((d2 - want).abs() < 1e-6, "hess ({i},{j}): {d2} vs {want}");
                }
            }
        }
    }
}

struct Embedded<'a> {
    form: SpaceForm,
    rho: f64,
    u: &'a RadialField,
    frame: JetFrame,
}

impl Embedded<'_> {
    fn eta(&self) -> Vec<f64> {
        let d = self.form.n + 1;
        match self.form.curvature {
            Curvature::Flat => vec![1.0; d],
            Curvature::Hyperbolic => std::iter::once(-1.0).chain(std::iter::repeat_n(1.0, d)).collect(),
            Curvature::Spherical => vec![1.0; d + 1],
        }
    }

    fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        self.eta().iter().zip(a).zip(b).map(|((e, x), y)| e * x * y).sum()
    }

    fn at_radius(&self, r: f64, y: &[f64]) -> Vec<f64> {
        match self.form.curvature {
            Curvature::Flat => y.iter().map(|v| r * v).collect(),
            Curvature::Hyperbolic => std::iter::once(r.cosh()).chain(y.iter().map(|v| r.sinh() * v)).collect(),
            Curvature::Spherical => std::iter::once(r.cos()).chain(y.iter().map(|v| r.sin() * v)).collect(),
        }
    }

    fn point(&self, s: &[f64]) -> (Vec<f64>, f64, Vec<f64>) {
        let y = chart(&self.frame, s);
        let r = self.rho * (1.0 + self.u.value(&y));
        (self.at_radius(r, &y), r, y)
    }

    fn tangents(&self, s: &[f64], h: f64) -> Vec<Vec<f64>> {
        (0..self.form.n)
            .map(|i| {
                let mut sp = s.to_vec();
                let mut sm = s.to_vec();
                sp[i] += h;
                sm[i] -= h;
                let (a, _, _) = self.point(&sp);
                let (b, _, _) = self.point(&sm);
                a.iter().zip(&b).map(|(x, y)| (x - y) / (2.0 * h)).collect()
            })
            .collect()
    }

    /// Outward unit normal: the null direction of the tangents (and of the
    /// position vector when the model is curved) under the ambient form.
    fn normal(&self, s: &[f64]) -> Vec<f64> {
        let (x, r, y) = self.point(s);
        let mut rows = self.tangents(s, 1e-5);
        if self.form.curvature != Curvature::Flat {
            rows.push(x);
        }
        let eta = self.eta();
        let d = eta.len();
        let mut m = DMatrix::zeros(d, d);
        for (i, row) in rows.iter().enumerate() {
            for j in 0..d {
                m[(i, j)] = eta[j] * row[j];
            }
        }
        let svd = m.svd(false, true);
        let vt = svd.v_t.unwrap();
        let k = (0..d).min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b])).unwrap();
        let mut nv: Vec<f64> = vt.row(k).iter().cloned().collect();
        let nn = self.dot(&nv, &nv).sqrt();
        nv.iter_mut().for_each(|c| *c /= nn);
        let dr = 1e-6;
        let radial: Vec<f64> =
            self.at_radius(r + dr, &y).iter().zip(self.at_radius(r - dr, &y)).map(|(a, b)| a - b).collect();
        if self.dot(&nv, &radial) < 0.0 {
            nv.iter_mut().for_each(|c| *c = -*c);
        }
        nv
    }
}

#[test]
fn metric_and_shape_operator_match_embeddings() {
    for c in [Curvature::Hyperbolic, Curvature::Flat, Curvature::Spherical] {
        for n in [2usize, 3] {
            let form = SpaceForm::new(c, n).unwrap();
            let u = random_harmonic_field(n, &[1, 2, 3], 7 * n as u64).unwrap().scale(0.03);
            for x in probe_points(n + 1) {
                let e = Embedded { form, rho: 0.8, u: &u, frame: JetFrame::at(&x) };
                let geo = PointGeometry::new(form, 0.8, u.jet(&e.frame)).unwrap();
                let zero = vec![0.0; n];
                let t = e.tangents(&zero, 1e-5);
                let g = DMatrix::from_fn(n, n, |i, j| e.dot(&t[i], &t[j]));
                let gm = geo.first_fundamental();
                assert!((&g - &gm).amax() < 1e-6, "{c:?} n={n} metric\n{g}\n{gm}");

                // h_ij = ⟨∂ᵢX, ∂ⱼN⟩ with a fourth-order stencil for ∂N
                let hstep = 1e-3;
                let dn: Vec<Vec<f64>> = (0..n)
                    .map(|j| {
                        let at = |k: f64| {
                            let mut s = zero.clone();
                            s[j] = k * hstep;
                            e.normal(&s)
                        };
                        let (p2, p1, m1, m2) = (at(2.0), at(1.0), at(-1.0), at(-2.0));
                        (0..p1.len()).map(|a| (-p2[a] + 8.0 * p1[a] - 8.0 * m1[a] + m2[a]) / (12.0 * hstep)).collect()
                    })
                    .collect();
                let h = DMatrix::from_fn(n, n, |i, j| e.dot(&t[i], &dn[j]));
                let w = g.clone().try_inverse().unwrap() * h;
                let wm = geo.weingarten().unwrap();
                assert!((&w - &wm).amax() < 1e-5, "{c:?} n={n} shape operator\n{w}\n{wm}");
                assert!((&wm - geo.weingarten_explicit()).amax() < 1e-12);
            }
        }
    }
}

#[test]
fn geodesic_distance_matches_ambient_models() {
    let pts = [(0.3, [0.6, 0.0, 0.8]), (1.1, [0.0, -1.0, 0.0]), (0.7, [-0.48, 0.6, 0.64])];
    for c in [Curvature::Hyperbolic, Curvature::Flat, Curvature::Spherical] {
        let form = SpaceForm::new(c, 2).unwrap();
        let e = Embedded { form, rho: 1.0, u: &RadialField::zero(2), frame: JetFrame::at(&[1.0, 0.0, 0.0]) };
        for (r1, x1) in pts {
            for (r2, x2) in pts {
                if r1 == r2 {
                    // acosh/acos of the ambient product lose half the digits near 1
                    continue;
                }
                let p = e.at_radius(r1, &x1);
                let q = e.at_radius(r2, &x2);
                let want = match c {
                    Curvature::Flat => p.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
                    Curvature::Hyperbolic => (-e.dot(&p, &q)).max(1.0).acosh(),
                    Curvature::Spherical => e.dot(&p, &q).clamp(-1.0, 1.0).acos(),
                };
                let got = form
                    .geodesic_distance(&PolarPoint { r: r1, dir: x1.to_vec() }, &PolarPoint { r: r2, dir: x2.to_vec() })
                    .unwrap();
                assert!((got - want).abs() < 1e-12 * (1.0 + want), "{c:?}: {got} vs {want}");
            }
        }
    }
}
