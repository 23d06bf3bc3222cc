//! Numerical critical points of `|z(u) - w0|^2` on polynomial affine charts,
//! with Morse indices and the rank of the second-fundamental-form part of the
//! Hessian.
//!
//! Complex coordinates are split as `x = (Re u_1, .., Re u_m, Im u_1, .., Im u_m)`.

mod model;
mod numerics;
#[cfg(test)]
mod tests;

pub use model::{affine_line, parabola, segre_p1xp2_chart, AffineChartModel, AffineChartModelJson, ComplexRational, Term};
pub use numerics::{fd_gradient, fd_hessian, symmetric_eigenvalues};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TOL_GRAD: f64 = 1e-8;
pub const TOL_EIG: f64 = 1e-6;
pub const TOL_DEDUP: f64 = 1e-6;
pub const TOL_RANK: f64 = 1e-5;
pub const TOL_PAIR: f64 = 1e-4;
pub const FD_STEP: f64 = 1e-5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubcritError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("Jacobian is rank deficient at u = {at:?}")]
    JacobianRankDeficient { at: Vec<[f64; 2]> },
    #[error("no start converged")]
    NoConvergence,
    #[error("degenerate critical point: smallest |eigenvalue| = {smallest:e}")]
    DegenerateCritical { smallest: f64 },
    #[error("rank of G is ill-conditioned: between {lo} and {hi}")]
    IllConditioned { lo: usize, hi: usize },
    #[error("w0 has {found} entries, the model lives in C^{expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// One converged critical point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointRecord {
    /// Chart coordinates as `[re, im]` pairs.
    pub params: Vec<[f64; 2]>,
    pub z0: Vec<[f64; 2]>,
    pub phi: f64,
    /// Finite-difference gradient norm.
    pub grad_residual: f64,
    /// `|Proj_T (z0 - w0)|`.
    pub orthogonality_residual: f64,
    /// Largest entry of `|H - H^T|` of the finite-difference Hessian.
    pub hessian_asymmetry: f64,
    /// Eigenvalues of the symmetrized finite-difference Hessian, ascending.
    pub eigenvalues: Vec<f64>,
    pub morse_index: usize,
    pub degenerate: bool,
    /// Eigenvalues of the metric-normalized `Re G`, ascending.
    pub re_g_eigenvalues: Vec<f64>,
    /// `max_i |lambda_i + lambda_{2m-1-i}|`.
    pub pairing_residual: f64,
    /// Number of `Re G` eigenvalues below `-1`; must equal `morse_index`.
    pub index_from_re_g: usize,
    pub g_rank: usize,
    /// Set when singular values sit near `TOL_RANK`.
    pub g_rank_interval: Option<(usize, usize)>,
    pub newton_iterations: usize,
}

impl CriticalPointRecord {
    pub fn params_complex(&self) -> Vec<Complex64> {
        self.params.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }
}

/// `morse_index` with the degeneracy check.
pub fn morse_index(record: &CriticalPointRecord) -> Result<usize, SubcritError> {
    if record.degenerate {
        let smallest = record.eigenvalues.iter().map(|e| e.abs()).fold(f64::INFINITY, f64::min);
        return Err(SubcritError::DegenerateCritical { smallest });
    }
    Ok(record.morse_index)
}

/// Complex rank of `G` at the record's point.
pub fn g_rank(record: &CriticalPointRecord) -> Result<usize, SubcritError> {
    morse_index(record)?;
    match record.g_rank_interval {
        Some((lo, hi)) => Err(SubcritError::IllConditioned { lo, hi }),
        None => Ok(record.g_rank),
    }
}

/// Real `2N x 2m` matrix of a holomorphic Jacobian.
pub(crate) fn real_jacobian(j: &DMatrix<Complex64>) -> DMatrix<f64> {
    let (rows, cols) = j.shape();
    DMatrix::from_fn(2 * rows, 2 * cols, |r, c| {
        let z = j[(r % rows, c % cols)];
        // d/dRe u = J, d/dIm u = iJ
        match (r < rows, c < cols) {
            (true, true) => z.re,
            (false, true) => z.im,
            (true, false) => -z.im,
            (false, false) => z.re,
        }
    })
}

fn to_complex(x: &[f64]) -> Vec<Complex64> {
    let m = x.len() / 2;
    (0..m).map(|a| Complex64::new(x[a], x[a + m])).collect()
}

/// `phi(x) = |z(u) - w0|^2` together with its analytic derivatives.
struct Objective<'a> {
    model: &'a AffineChartModel,
    w0: &'a [Complex64],
}

impl Objective<'_> {
    fn value(&self, x: &[f64]) -> f64 {
        let z = self.model.eval(&to_complex(x));
        z.iter().zip(self.w0).map(|(a, b)| (a - b).norm_sqr()).sum()
    }

    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        let u = to_complex(x);
        let m = u.len();
        let r: Vec<Complex64> = self.model.eval(&u).iter().zip(self.w0).map(|(a, b)| a - b).collect();
        let j = self.model.jacobian(&u);
        let mut g = DVector::zeros(2 * m);
        for a in 0..m {
            let c: Complex64 = (0..r.len()).map(|i| r[i].conj() * j[(i, a)]).sum();
            g[a] = 2.0 * c.re;
            g[a + m] = -2.0 * c.im;
        }
        g
    }

    /// Metric `g = Re(J^H J)` in real form and the `Re G` block matrix.
    fn metric_and_re_g(&self, x: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
        let u = to_complex(x);
        let m = u.len();
        let r: Vec<Complex64> = self.model.eval(&u).iter().zip(self.w0).map(|(a, b)| a - b).collect();
        let jr = real_jacobian(&self.model.jacobian(&u));
        let metric = jr.transpose() * &jr;
        let mut gc = DMatrix::<Complex64>::zeros(m, m);
        for (ri, d2) in r.iter().zip(self.model.second_derivatives(&u)) {
            gc += d2 * ri.conj();
        }
        let re_g = DMatrix::from_fn(2 * m, 2 * m, |p, q| {
            let v = gc[(p % m, q % m)];
            match (p < m, q < m) {
                (true, true) => v.re,
                (false, false) => -v.re,
                _ => -v.im,
            }
        });
        (metric, re_g)
    }

    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let (metric, re_g) = self.metric_and_re_g(x);
        (metric + re_g) * 2.0
    }
}

fn solve_step(h: &DMatrix<f64>, g: &DVector<f64>, mu: f64) -> Option<DVector<f64>> {
    if mu == 0.0 {
        h.clone().lu().solve(&(-g))
    } else {
        let n = h.nrows();
        let a = h.transpose() * h + DMatrix::identity(n, n) * mu;
        a.cholesky().map(|c| c.solve(&(-(h.transpose() * g))))
    }
}

/// Damped Newton on `grad phi = 0`, with a Levenberg-Marquardt fallback when
/// the line search fails.
fn newton(obj: &Objective<'_>, mut x: DVector<f64>, bound: f64) -> Option<(DVector<f64>, usize)> {
    let merit = |x: &DVector<f64>| obj.gradient(x.as_slice()).norm_squared();
    let mut mu = 1e-3;
    for it in 0..200 {
        let g = obj.gradient(x.as_slice());
        let gn = g.norm();
        if gn <= 1e-12 * (1.0 + obj.value(x.as_slice()).sqrt()) {
            return Some((x, it));
        }
        if !x.iter().all(|v| v.is_finite()) || x.norm() > 4.0 * bound {
            return None;
        }
        let h = obj.hessian(x.as_slice());
        let f0 = gn * gn;
        let mut accepted = false;
        if let Some(d) = solve_step(&h, &g, 0.0) {
            let mut alpha = 1.0;
            while alpha > 1e-4 {
                let cand = &x + &d * alpha;
                if merit(&cand) < (1.0 - 1e-4 * alpha) * f0 {
                    x = cand;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
        }
        if !accepted {
            loop {
                if mu > 1e12 {
                    return None;
                }
                if let Some(d) = solve_step(&h, &g, mu) {
                    let cand = &x + &d;
                    if merit(&cand) < f0 {
                        x = cand;
                        mu = (mu / 10.0).max(1e-9);
                        break;
                    }
                }
                mu *= 10.0;
            }
        } else {
            mu = (mu / 10.0).max(1e-9);
        }
    }
    let ok = obj.gradient(x.as_slice()).norm() <= 1e-3 * TOL_GRAD;
    ok.then_some((x, 200))
}

/// Spectral data of a converged point.
fn analyse(obj: &Objective<'_>, x: &[f64], iterations: usize) -> CriticalPointRecord {
    let u = to_complex(x);
    let z = obj.model.eval(&u);
    let grad_fd = fd_gradient(|y| obj.value(y), x, FD_STEP);
    let h_fd = fd_hessian(|y| obj.gradient(y).as_slice().to_vec(), x, FD_STEP);
    let asym = (&h_fd - h_fd.transpose()).abs().max();
    let hs = (&h_fd + h_fd.transpose()) * 0.5;
    let eigenvalues = symmetric_eigenvalues(&hs);
    let morse = eigenvalues.iter().filter(|&&e| e < -TOL_EIG).count();
    let degenerate = eigenvalues.iter().any(|e| e.abs() <= TOL_EIG);

    let (metric, _) = obj.metric_and_re_g(x);
    let chol = metric.clone().cholesky().expect("full-rank Jacobian gives a positive metric");
    let l = chol.l();
    let l_inv = l.clone().try_inverse().expect("triangular factor is invertible");
    let re_g = &hs * 0.5 - &metric;
    let normalized = &l_inv * re_g * l_inv.transpose();
    let normalized = (&normalized + normalized.transpose()) * 0.5;
    let re_g_eigenvalues = symmetric_eigenvalues(&normalized);
    let n2 = re_g_eigenvalues.len();
    let pairing_residual =
        (0..n2).map(|i| (re_g_eigenvalues[i] + re_g_eigenvalues[n2 - 1 - i]).abs()).fold(0.0, f64::max);
    let index_from_re_g = re_g_eigenvalues.iter().filter(|&&l| l < -1.0).count();

    let sv = normalized.singular_values();
    let above = sv.iter().filter(|&&s| s > TOL_RANK).count();
    let clear = sv.iter().filter(|&&s| s > 10.0 * TOL_RANK).count();
    let fuzzy_low = sv.iter().filter(|&&s| s > 0.1 * TOL_RANK).count();
    let g_rank = above.div_ceil(2);
    let g_rank_interval = (clear != fuzzy_low).then(|| (clear / 2, fuzzy_low.div_ceil(2)));

    let r: Vec<Complex64> = z.iter().zip(obj.w0).map(|(a, b)| a - b).collect();
    let orthogonality_residual = tangent_projection_norm(&obj.model.jacobian(&u), &r);

    CriticalPointRecord {
        params: u.iter().map(|c| [c.re, c.im]).collect(),
        z0: z.iter().map(|c| [c.re, c.im]).collect(),
        phi: obj.value(x),
        grad_residual: grad_fd.norm(),
        orthogonality_residual,
        hessian_asymmetry: asym,
        eigenvalues,
        morse_index: morse,
        degenerate,
        re_g_eigenvalues,
        pairing_residual,
        index_from_re_g,
        g_rank,
        g_rank_interval,
        newton_iterations: iterations,
    }
}

/// Norm of the Hermitian projection of `r` onto the column span of `j`.
fn tangent_projection_norm(j: &DMatrix<Complex64>, r: &[Complex64]) -> f64 {
    let rv = DVector::from_column_slice(r);
    let gram = j.adjoint() * j;
    let rhs = j.adjoint() * &rv;
    match gram.lu().solve(&rhs) {
        Some(c) => (j * c).norm(),
        None => f64::NAN,
    }
}

/// Multistart damped Newton for the critical points of `|z(u) - w0|^2`.
///
/// Starts have uniformly random direction and radius `R t^3`, `t ~ U(0, 1)`,
/// so most of them lie near the origin where the chart is best conditioned;
/// converged points with `|u| > R` are dropped and the rest deduplicated.
pub fn find_critical_points(
    model: &AffineChartModel,
    w0: &[Complex64],
    starts: usize,
    seed: u64,
) -> Result<Vec<CriticalPointRecord>, SubcritError> {
    if starts == 0 {
        return Err(SubcritError::InvalidModel("starts must be at least 1".into()));
    }
    if w0.len() != model.ambient_dim() {
        return Err(SubcritError::DimensionMismatch { expected: model.ambient_dim(), found: w0.len() });
    }
    let m = model.m();
    let obj = Objective { model, w0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial: Vec<DVector<f64>> = (0..starts)
        .map(|_| {
            let dir = DVector::from_iterator(2 * m, (0..2 * m).map(|_| rng.sample::<f64, _>(StandardNormal)));
            let t: f64 = rng.random();
            dir.normalize() * (model.domain_bound * t.powi(3))
        })
        .collect();
    let converged: Vec<(DVector<f64>, usize)> =
        initial.into_par_iter().filter_map(|x0| newton(&obj, x0, model.domain_bound)).collect();
    if converged.is_empty() {
        return Err(SubcritError::NoConvergence);
    }
    let mut kept: Vec<(DVector<f64>, usize)> = Vec::new();
    for (x, it) in converged {
        if x.norm() > model.domain_bound {
            continue;
        }
        if kept.iter().all(|(y, _)| (y - &x).norm() > TOL_DEDUP) {
            kept.push((x, it));
        }
    }
    let mut records: Vec<CriticalPointRecord> = kept.par_iter().map(|(x, it)| analyse(&obj, x.as_slice(), *it)).collect();
    records.sort_by(|a, b| a.phi.total_cmp(&b.phi));
    Ok(records)
}

/// Summary of one experiment with a random generic `w0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubcritRun {
    pub model: String,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub starts: usize,
    pub w0: Vec<[f64; 2]>,
    /// Number of times `w0` was redrawn because of a degenerate record.
    pub resamples: usize,
    pub records: Vec<CriticalPointRecord>,
}

impl SubcritRun {
    pub fn max_index(&self) -> usize {
        self.records.iter().map(|r| r.morse_index).max().unwrap_or(0)
    }

    pub fn max_g_rank(&self) -> usize {
        self.records.iter().map(|r| r.g_rank).max().unwrap_or(0)
    }
}

/// Draws `w0` from a standard complex Gaussian and runs
/// [`find_critical_points`], redrawing `w0` while some record is degenerate.
pub fn run_experiment(
    model: &AffineChartModel,
    starts: usize,
    seed: u64,
    max_resamples: usize,
) -> Result<SubcritRun, SubcritError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resamples = 0;
    loop {
        let w0: Vec<Complex64> = (0..model.ambient_dim())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let inner_seed: u64 = rng.random();
        let records = find_critical_points(model, &w0, starts, inner_seed)?;
        if records.iter().any(|r| r.degenerate) && resamples < max_resamples {
            resamples += 1;
            continue;
        }
        return Ok(SubcritRun {
            model: model.name.clone(),
            n: model.n,
            k: model.k,
            seed,
            starts,
            w0: w0.iter().map(|c| [c.re, c.im]).collect(),
            resamples,
            records,
        });
    }
}

/// Checks every record of every run against the numerical invariants and the
/// bounds `index <= n - k`, `rank G <= n - k`.
pub fn bound_report(runs: &[SubcritRun]) -> crate::report::CheckReport {
    use crate::report::{CheckReport, CheckStatus};
    let mut report = CheckReport::new();
    let all: Vec<(&SubcritRun, &CriticalPointRecord)> =
        runs.iter().flat_map(|run| run.records.iter().map(move |r| (run, r))).collect();
    let good: Vec<_> = all.iter().filter(|(_, r)| !r.degenerate && r.g_rank_interval.is_none()).collect();
    let total = all.len();
    let degenerate = all.iter().filter(|(_, r)| r.degenerate).count();

    let worst_grad = all.iter().map(|(_, r)| r.grad_residual).fold(0.0, f64::max);
    report.check("fd_gradient", worst_grad <= TOL_GRAD, format!("max residual {worst_grad:.2e} (tolerance {TOL_GRAD:e})"));
    let worst_asym = all.iter().map(|(_, r)| r.hessian_asymmetry).fold(0.0, f64::max);
    report.check(
        "hessian_symmetry",
        worst_asym <= 10.0 * TOL_EIG,
        format!("max asymmetry {worst_asym:.2e} (tolerance {:e})", 10.0 * TOL_EIG),
    );
    let worst_pair = good.iter().map(|(_, r)| r.pairing_residual).fold(0.0, f64::max);
    report.check("re_g_pairing", worst_pair <= TOL_PAIR, format!("max residual {worst_pair:.2e} (tolerance {TOL_PAIR:e})"));
    let mismatched = good.iter().filter(|(_, r)| r.morse_index != r.index_from_re_g).count();
    report.check("index_cross_check", mismatched == 0, format!("{mismatched} records disagree"));

    let bad_index: Vec<_> = good.iter().filter(|(run, r)| r.morse_index + run.k > run.n).collect();
    let max_index = good.iter().map(|(_, r)| r.morse_index).max().unwrap_or(0);
    report.check(
        "index_bound",
        bad_index.is_empty(),
        if bad_index.is_empty() {
            format!("no counterexample found among {} converged points (max index {max_index})", good.len())
        } else {
            format!("{} points exceed n - k", bad_index.len())
        },
    );
    let bad_rank: Vec<_> = good.iter().filter(|(run, r)| r.g_rank + run.k > run.n).collect();
    let max_rank = good.iter().map(|(_, r)| r.g_rank).max().unwrap_or(0);
    report.check(
        "g_rank_bound",
        bad_rank.is_empty(),
        if bad_rank.is_empty() {
            format!("no counterexample found among {} converged points (max rank {max_rank})", good.len())
        } else {
            format!("{} points exceed n - k", bad_rank.len())
        },
    );
    report.push(
        "excluded",
        CheckStatus::Advisory,
        format!("{total} converged points, {degenerate} degenerate, {} ill-conditioned", total - degenerate - good.len()),
    );
    report
}
