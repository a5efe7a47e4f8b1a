//! Small derivative-free minimizer and a safeguarded scalar root finder.

/// Result of a Nelder–Mead run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Nelder–Mead with the dimension-adaptive coefficients of Gao and Han.
/// Stops when the simplex diameter falls below `xtol` and the spread of
/// values below `ftol`, or after `max_iter` iterations.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    xtol: f64,
    ftol: f64,
    max_iter: usize,
) -> SimplexOutcome {
    let d = x0.len();
    let df = d as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / df, 0.75 - 0.5 / df, 1.0 - 1.0 / df);
    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..d {
        let mut p = x0.to_vec();
        p[i] += step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let lerp = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect() };

    let mut it = 0;
    let mut converged = false;
    while it < max_iter {
        let mut order: Vec<usize> = (0..=d).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let diam = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diam <= xtol && (vals[d] - vals[0]).abs() <= ftol {
            converged = true;
            break;
        }
        it += 1;

        let mut centroid = vec![0.0; d];
        for p in &pts[..d] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / df;
            }
        }
        let worst = pts[d].clone();
        let xr = lerp(&centroid, &worst, -alpha);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = lerp(&centroid, &worst, -alpha * beta);
            let fe = f(&xe);
            if fe < fr {
                pts[d] = xe;
                vals[d] = fe;
            } else {
                pts[d] = xr;
                vals[d] = fr;
            }
            continue;
        }
        if fr < vals[d - 1] {
            pts[d] = xr;
            vals[d] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[d] {
            let xc = lerp(&centroid, &worst, -alpha * gamma);
            let fc = f(&xc);
            (xc, if fc <= fr { fc } else { f64::INFINITY })
        } else {
            let xc = lerp(&centroid, &worst, gamma);
            let fc = f(&xc);
            (xc, if fc < vals[d] { fc } else { f64::INFINITY })
        };
        if fc.is_finite() {
            pts[d] = xc;
            vals[d] = fc;
            continue;
        }
        for i in 1..=d {
            pts[i] = lerp(&pts[0], &pts[i], delta);
            vals[i] = f(&pts[i]);
        }
    }
    let best = (0..=d).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    SimplexOutcome { x: pts[best].clone(), f: vals[best], iterations: it, converged }
}

/// Root of an increasing function on [lo, hi] with f(lo) ≤ 0 ≤ f(hi):
/// Newton steps that stay inside the bracket, bisection otherwise.
/// `fd` returns (f, f′).
pub fn bracketed_newton(fd: impl Fn(f64) -> (f64, f64), mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (v, d) = fd(x);
        if v == 0.0 {
            return x;
        }
        if v < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - v / d;
        let next = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= tol * (1.0 + x.abs()) || hi - lo <= tol * (1.0 + x.abs()) {
            return next;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let out =
            nelder_mead(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], 0.5, 1e-10, 1e-20, 5000);
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-8 && (out.x[1] + 2.0).abs() < 1e-8);
    }

    #[test]
    fn nonsmooth_cone() {
        let out = nelder_mead(
            |x| x.iter().zip([0.3, -0.1, 0.2]).map(|(a, b)| (a - b).abs()).sum(),
            &[0.0; 3],
            0.1,
            1e-12,
            1e-14,
            5000,
        );
        assert!(out.f < 1e-10, "{out:?}");
    }

    #[test]
    fn newton_root() {
        let r = bracketed_newton(|x| (x.powi(3) - 2.0, 3.0 * x * x), 0.0, 2.0, 1e-15);
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
        let s = bracketed_newton(|x| (x.atan() - 1.0, 1.0 / (1.0 + x * x)), 0.0, 100.0, 1e-15);
        assert!((s - 1f64.tan()).abs() < 1e-12);
    }
}
