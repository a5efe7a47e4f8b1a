use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use nearsphere::expansions::{remainder_ladder, ExpansionKind, StabilityTheorem};
use nearsphere::hypersurface::NearlySphericalSurface;
use nearsphere::integrals::{check_deficit_indices, curvature_integral, deficit, quermass, volume, weighted_integral};
use nearsphere::spherefield::{hessian_integral_identities, sobolev_norms, QuadratureGrid};
use nearsphere::stability::{fit_constraints, fraenkel, theorem_report};
use nearsphere::symmpoly::{
    elementary_symmetric_matrix, elementary_symmetric_traces, kronecker_contraction, newton_operator,
    newton_operator_mixed, sigma_by_expansion, SquareSymmetricMatrix,
};
use nearsphere::{Curvature, SpaceForm, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{int, num, Table};

/// Slack η on the theorem margins: rows pass when lhs ≥ (1 − η)·constant·measure.
pub const SWEEP_ETA: f64 = 0.1;
/// Random matrices per dimension in `identity-tests`.
pub const SYMMETRIC_TRIALS: usize = 50;
pub const SYMMETRIC_TOL: f64 = 1e-12;
pub const TRACE_ROUTE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Exactness certificate of the quadrature grid
    GridInfo,
    /// Every functional of one surface next to its ball value
    Eval,
    /// Quermass deficits δ_{k,j}
    Deficit,
    /// Origin-centered and minimized symmetric differences
    Asymmetry,
    /// Second-order expansion remainders and their decay slopes
    ExpansionCheck,
    /// Stability reports over a parameter grid of constrained surfaces
    StabilitySweep,
    /// Symmetric-function and Hessian integral identities
    IdentityTests,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::GridInfo => "grid-info",
            Command::Eval => "eval",
            Command::Deficit => "deficit",
            Command::Asymmetry => "asymmetry",
            Command::ExpansionCheck => "expansion-check",
            Command::StabilitySweep => "stability-sweep",
            Command::IdentityTests => "identity-tests",
        }
    }
}

pub fn execute(cmd: Command, cfg: &RunConfig, seed: u64) -> Result<Table, CliError> {
    cfg.validate()?;
    match cmd {
        Command::GridInfo => grid_info(cfg),
        Command::Eval => eval(cfg, seed),
        Command::Deficit => deficits(cfg, seed),
        Command::Asymmetry => asymmetry(cfg, seed),
        Command::ExpansionCheck => expansion_check(cfg, seed),
        Command::StabilitySweep => stability_sweep(cfg, seed),
        Command::IdentityTests => identity_tests(cfg, seed),
    }
}

fn grid(cfg: &RunConfig, n: usize) -> Result<Arc<QuadratureGrid>, CliError> {
    Ok(Arc::new(QuadratureGrid::build(n, cfg.grid_exactness)?))
}

/// The configured surface: ρ(1 + t·u), constrained when `constrain_j` is set.
fn surface(cfg: &RunConfig, seed: u64) -> Result<NearlySphericalSurface, CliError> {
    let form = cfg.form()?;
    let g = grid(cfg, cfg.n)?;
    let u = cfg.field(cfg.n, seed)?;
    let t = cfg.task.t.unwrap_or(1.0);
    Ok(match cfg.task.constrain_j {
        Some(j) => fit_constraints(&form, cfg.rho, j, &u, t, &g)?.surface,
        None => NearlySphericalSurface::new(form, cfg.rho, u.scale(t), g)?,
    })
}

fn grid_info(cfg: &RunConfig) -> Result<Table, CliError> {
    let c = QuadratureGrid::build(cfg.n, cfg.grid_exactness)?.certify()?;
    let mut t = Table::new(&[
        "n",
        "exactness",
        "node_count",
        "max_norm_error",
        "weight_sum_error",
        "max_moment_error",
        "moments_checked",
    ]);
    t.push(vec![
        int(c.n),
        int(c.exactness),
        int(c.node_count),
        num(c.max_norm_error),
        num(c.weight_sum_error),
        num(c.max_moment_error),
        int(c.moments_checked),
    ]);
    Ok(t)
}

fn eval(cfg: &RunConfig, seed: u64) -> Result<Table, CliError> {
    let s = surface(cfg, seed)?;
    let f = s.form();
    let rho = cfg.rho;
    let n = f.n as i64;
    let mut t = Table::new(&["quantity", "k", "value", "ball_value", "difference"]);
    let mut row = |q: &str, k: Option<i64>, v: f64, b: f64| {
        t.push(vec![q.to_string(), k.map(int).unwrap_or_default(), num(v), num(b), num(v - b)]);
    };
    row("volume", None, volume(&s), f.ball_volume(rho));
    for k in 0..=n {
        row("curvature_integral", Some(k), curvature_integral(&s, k)?, f.ball_curvature_integral(k, rho)?);
    }
    for (name, w) in [("weighted_Phi", Weight::Phi), ("weighted_phi'", Weight::PhiPrime)] {
        for k in 0..=n {
            row(name, Some(k), weighted_integral(&s, k, w)?, f.ball_weighted_integral(k, w, rho)?);
        }
    }
    for k in -1..=n {
        row("quermass", Some(k), quermass(&s, k)?, f.ball_quermass(k, rho)?);
    }
    let norms = s.norms();
    row("l2_sq", None, norms.l2_sq, 0.0);
    row("grad_l2_sq", None, norms.grad_l2_sq, 0.0);
    row("eps_hat", None, norms.eps_hat(), 0.0);
    t.passed = t.rows.iter().all(|r| r[2].parse::<f64>().is_ok_and(f64::is_finite));
    Ok(t)
}

fn deficits(cfg: &RunConfig, seed: u64) -> Result<Table, CliError> {
    let s = surface(cfg, seed)?;
    let f = s.form();
    let pairs: Vec<(i64, i64)> = match (cfg.task.k, cfg.task.j) {
        (Some(k), Some(j)) => vec![(k, j)],
        _ => (0..=f.n as i64)
            .flat_map(|k| (-1..k).map(move |j| (k, j)))
            .filter(|&(k, j)| check_deficit_indices(f.curvature, f.n, k, j).is_ok())
            .collect(),
    };
    let mut t = Table::new(&["k", "j", "quermass_k", "quermass_j", "matched_radius", "ball_k", "deficit"]);
    for (k, j) in pairs {
        let d = deficit(&s, k, j)?;
        t.passed &= d.deficit >= -1e-10 * d.ball_k.abs();
        t.push(vec![
            int(k),
            int(j),
            num(d.quermass_k),
            num(d.quermass_j),
            num(d.matched_radius),
            num(d.ball_k),
            num(d.deficit),
        ]);
    }
    Ok(t)
}

fn asymmetry(cfg: &RunConfig, seed: u64) -> Result<Table, CliError> {
    let s = surface(cfg, seed)?;
    let f = s.form();
    let r = fraenkel(&s)?;
    let w = f.warp(cfg.rho)?;
    let norms = s.norms();
    let bound = cfg.rho * f.omega().sqrt() * w.phi.powi(f.n as i32) / f.n as f64
        * norms.grad_l2_sq.sqrt()
        * (1.0 + 10.0 * norms.eps_hat());
    let shift = r.center.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut t =
        Table::new(&["volume", "radius", "origin_value", "value", "center_distance", "converged", "origin_bound"]);
    t.push(vec![
        num(volume(&s)),
        num(r.radius),
        num(r.origin_value),
        num(r.value),
        num(shift),
        r.converged.to_string(),
        num(bound),
    ]);
    t.passed = r.value >= 0.0 && r.value <= r.origin_value;
    Ok(t)
}

fn expansion_check(cfg: &RunConfig, seed: u64) -> Result<Table, CliError> {
    let form = cfg.form()?;
    let g = grid(cfg, cfg.n)?;
    let shape = cfg.field(cfg.n, seed)?;
    let ts = cfg.ts();
    let n = cfg.n as i64;
    let kinds = [
        (ExpansionKind::Sigma, 0),
        (ExpansionKind::Weighted(Weight::Phi), 0),
        (ExpansionKind::Weighted(Weight::PhiPrime), 0),
        (ExpansionKind::QuermassDiff, -1),
    ];
    let jobs: Vec<(ExpansionKind, i64)> = kinds
        .iter()
        .flat_map(|&(kind, lo)| (lo..=n).map(move |k| (kind, k)))
        .filter(|&(_, k)| cfg.task.k.is_none_or(|want| want == k))
        .collect();
    if jobs.is_empty() {
        return Err(CliError::Validation(format!("no expansion admits k = {:?}", cfg.task.k)));
    }
    let ladders = jobs
        .par_iter()
        .map(|&(kind, k)| remainder_ladder(kind, &form, k, cfg.rho, &shape, &g, &ts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["kind", "k", "t", "exact", "model", "residual", "floor", "slope", "passed"]);
    for l in &ladders {
        t.passed &= l.passes();
        for i in 0..l.ts.len() {
            t.push(vec![
                l.kind.name().to_string(),
                int(l.k),
                num(l.ts[i]),
                num(l.exact[i]),
                num(l.model[i]),
                num(l.residuals[i]),
                num(l.floors[i]),
                num(l.fit.value()),
                l.passes().to_string(),
            ]);
        }
    }
    Ok(t)
}

fn euclidean(theorem: StabilityTheorem) -> bool {
    theorem.admits(Curvature::Flat)
}

/// One constrained surface and one theorem.
#[derive(Debug, Clone, Copy)]
struct SweepJob {
    theorem: StabilityTheorem,
    curvature: Curvature,
    n: usize,
    rho: f64,
    k: i64,
    j: i64,
    t: f64,
}

fn sweep_jobs(cfg: &RunConfig) -> Result<Vec<SweepJob>, CliError> {
    let sw = cfg.sweep.clone().unwrap_or_default();
    let curvatures = sw.curvatures.unwrap_or_else(|| vec![cfg.curvature]);
    let ns = sw.ns.unwrap_or_else(|| vec![cfg.n]);
    let rhos = sw.rhos.unwrap_or_else(|| vec![cfg.rho]);
    let theorems =
        sw.theorems.or_else(|| cfg.task.theorem.map(|t| vec![t])).unwrap_or_else(|| StabilityTheorem::ALL.to_vec());
    let fixed = match (cfg.task.k, cfg.task.j) {
        (Some(k), Some(j)) => Some(vec![(k, j)]),
        _ => None,
    };
    let indices = sw.indices.or(fixed);
    let ts = cfg.ts();
    let mut jobs = Vec::new();
    for &c in &curvatures {
        let curvature = Curvature::from_int(c)?;
        for &n in &ns {
            let form = SpaceForm::new(curvature, n)?;
            for &rho in &rhos {
                for &theorem in &theorems {
                    let pairs = indices
                        .clone()
                        .unwrap_or_else(|| (0..=theorem.max_k(n)).flat_map(|k| (-1..k).map(move |j| (k, j))).collect());
                    for (k, j) in pairs {
                        if theorem.check(&form, k, j).is_err() || (euclidean(theorem) && rho != 1.0) {
                            continue;
                        }
                        for &t in &ts {
                            jobs.push(SweepJob { theorem, curvature, n, rho, k, j, t });
                        }
                    }
                }
            }
        }
    }
    if jobs.is_empty() {
        return Err(CliError::Validation("the sweep selects no admissible (theorem, curvature, k, j) tuple".into()));
    }
    Ok(jobs)
}

fn stability_sweep(cfg: &RunConfig, seed: u64) -> Result<Table, CliError> {
    let jobs = sweep_jobs(cfg)?;
    let mut grids = BTreeMap::new();
    let mut shapes = BTreeMap::new();
    for job in &jobs {
        if let std::collections::btree_map::Entry::Vacant(e) = grids.entry(job.n) {
            e.insert(grid(cfg, job.n)?);
            shapes.insert(job.n, cfg.field(job.n, seed)?);
        }
    }
    let rows = jobs
        .par_iter()
        .map(|job| -> Result<(bool, Vec<String>), CliError> {
            let form = SpaceForm::new(job.curvature, job.n)?;
            let fit = fit_constraints(&form, job.rho, job.j, &shapes[&job.n], job.t, &grids[&job.n])?;
            let r = theorem_report(&fit.surface, job.k, job.j, job.theorem)?;
            let pass = r.passes(SWEEP_ETA);
            Ok((
                pass,
                vec![
                    job.theorem.name().to_string(),
                    int(r.curvature),
                    int(r.n),
                    int(r.k),
                    int(r.j),
                    num(r.rho),
                    num(job.t),
                    int(fit.iterations),
                    num(fit.a0),
                    num(fit.a1_norm()),
                    num(r.eps_hat),
                    num(r.lhs),
                    num(r.asymmetry),
                    num(r.asymmetry_origin),
                    r.asymmetry_converged.to_string(),
                    num(r.constant),
                    num(r.measure),
                    num(r.margin),
                    pass.to_string(),
                ],
            ))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&[
        "theorem",
        "curvature",
        "n",
        "k",
        "j",
        "rho",
        "t",
        "iterations",
        "a0",
        "a1_norm",
        "eps_hat",
        "lhs",
        "asymmetry",
        "asymmetry_origin",
        "asymmetry_converged",
        "constant",
        "measure",
        "margin",
        "passed",
    ]);
    for (pass, row) in rows {
        t.passed &= pass;
        t.push(row);
    }
    Ok(t)
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> SquareSymmetricMatrix {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SquareSymmetricMatrix::new(m).expect("symmetric by construction")
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
}

/// Worst normalized residuals of the symmetric-function identities on
/// `trials` random matrices of size n.
#[derive(Debug, Clone, Copy, Default)]
struct SymmetricResiduals {
    sigma_routes: f64,
    sigma_traces: f64,
    newton_recursion: f64,
    newton_trace: f64,
    rank_one: f64,
}

fn symmetric_residuals(rng: &mut ChaCha8Rng, n: usize, trials: usize) -> Result<SymmetricResiduals, CliError> {
    let mut r = SymmetricResiduals::default();
    for _ in 0..trials {
        let a = random_symmetric(rng, n);
        let eig = elementary_symmetric_matrix(&a);
        let tr = elementary_symmetric_traces(a.matrix());
        let scale = 1.0 + a.matrix().norm();
        for k in 0..=n {
            let e = sigma_by_expansion(a.matrix(), k)?;
            r.sigma_routes = r.sigma_routes.max((eig[k] - e).abs() / (1.0 + e.abs()));
            r.sigma_traces = r.sigma_traces.max((tr[k] - e).abs() / (1.0 + e.abs()));
        }
        for m in 0..=n {
            let t = newton_operator(&a, m)?;
            if m >= 1 {
                let mixed = newton_operator_mixed(&vec![a.clone(); m])?;
                r.newton_recursion =
                    r.newton_recursion.max((t.matrix() - mixed.matrix()).amax() / scale.powi(m as i32));
            }
            if m < n {
                let want = (n - m) as f64 * eig[m];
                r.newton_trace =
                    r.newton_trace.max((t.matrix().trace() - want).abs() / ((1.0 + eig[m].abs()) * n as f64));
            }
        }
        // two factors sharing a row space w·vᵀ make the contraction vanish
        let w = random_vector(rng, n);
        for len in 2..=n {
            let mut mats = vec![&w * random_vector(rng, n).transpose(), &w * random_vector(rng, n).transpose()];
            for _ in 2..len {
                mats.push(random_symmetric(rng, n).into_inner());
            }
            r.rank_one = r.rank_one.max(kronecker_contraction(&mats)?.abs());
        }
    }
    Ok(r)
}

fn identity_tests(cfg: &RunConfig, seed: u64) -> Result<Table, CliError> {
    let mut t = Table::new(&["suite", "name", "n", "m", "trials", "max_residual", "tolerance", "slope", "passed"]);
    let push = |t: &mut Table,
                suite: &str,
                name: &str,
                n: usize,
                m: Option<usize>,
                trials: usize,
                res: f64,
                tol: f64,
                slope: Option<f64>,
                pass: bool| {
        t.passed &= pass;
        t.push(vec![
            suite.to_string(),
            name.to_string(),
            int(n),
            m.map(int).unwrap_or_default(),
            int(trials),
            num(res),
            num(tol),
            slope.map(num).unwrap_or_default(),
            pass.to_string(),
        ]);
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 2..=5 {
        let r = symmetric_residuals(&mut rng, n, SYMMETRIC_TRIALS)?;
        for (name, res, tol) in [
            ("sigma-eigen-vs-expansion", r.sigma_routes, SYMMETRIC_TOL),
            ("sigma-newton-sums-vs-expansion", r.sigma_traces, TRACE_ROUTE_TOL),
            ("newton-recursion-vs-expansion", r.newton_recursion, SYMMETRIC_TOL),
            ("newton-trace", r.newton_trace, SYMMETRIC_TOL),
            ("shared-rank-one-vanishing", r.rank_one, SYMMETRIC_TOL),
        ] {
            push(&mut t, "symmpoly", name, n, None, SYMMETRIC_TRIALS, res, tol, None, res <= tol);
        }
    }

    let g = grid(cfg, cfg.n)?;
    let u = cfg.field(cfg.n, seed)?;
    let rep = hessian_integral_identities(&u, &g);
    let tol = 1e-10 * (1.0 + sobolev_norms(&u, &g).eps_hat() * g.weights().iter().sum::<f64>());
    let pass = rep.divergence_residual <= tol;
    push(&mut t, "hessian", "divergence", cfg.n, Some(1), 1, rep.divergence_residual, tol, None, pass);
    for e in &rep.entries {
        let res = e.residuals.iter().cloned().fold(0.0, f64::max);
        let floor = e.floors.iter().cloned().fold(0.0, f64::max);
        let name = format!("{:?}", e.identity);
        push(&mut t, "hessian", &name, cfg.n, Some(e.m), e.ts.len(), res, floor, Some(e.fit.value()), e.passes());
    }
    Ok(t)
}
