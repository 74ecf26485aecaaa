//! Least-favourable diagonal noise for the dual uplink with equal transmit
//! power:
//!
//! `min_A log2 det(G + A) - log2 det(A)` over diagonal `A >= 0`, `Tr A = 1/S`.
//!
//! The objective is convex in `A`. It is minimised in the scaled variable
//! `x = N S diag(A)`, which lives on the simplex `{x >= floor, sum x = N}`.
//! Each iteration tries an equality-constrained Newton step; where that is
//! unavailable (singular Hessian, optimum on the boundary) it falls back to a
//! spectral projected gradient step.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mc::logdet_psd_detailed;

/// Lower bound on `x_i`, i.e. `A_ii >= 1e-12 / (N S)`.
const X_FLOOR: f64 = 1e-12;
const ARMIJO: f64 = 1e-4;
const MEMORY: usize = 10;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaxSolution {
    /// `log2 det(G + A) - log2 det(A)` at the returned `A`.
    pub value: f64,
    pub noise_diag: Vec<f64>,
    pub iterations: usize,
    /// `max_i |P(x - grad) - x|_i` in the scaled variable.
    pub residual: f64,
    pub converged: bool,
}

impl MinimaxSolution {
    pub fn trace(&self) -> f64 {
        self.noise_diag.iter().sum()
    }

    /// Turns an exhausted iteration budget into an error.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence { iterations: self.iterations, residual: self.residual })
        }
    }
}

struct Problem<'a> {
    gram: &'a DMatrix<f64>,
    scale: f64,
}

impl Problem<'_> {
    fn shifted(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut m = self.gram.clone();
        for i in 0..x.len() {
            m[(i, i)] += x[i] / self.scale;
        }
        m
    }

    /// Natural-log objective, `+inf` where `G + A` fails to factor.
    fn value(&self, x: &DVector<f64>) -> f64 {
        match self.shifted(x).cholesky() {
            Some(c) => {
                let ld: f64 = c.l_dirty().diagonal().iter().map(|d| d.ln()).sum();
                2.0 * ld - x.iter().map(|xi| (xi / self.scale).ln()).sum::<f64>()
            }
            None => f64::INFINITY,
        }
    }

    fn inverse(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        Some(self.shifted(x).cholesky()?.inverse())
    }

    fn gradient(&self, x: &DVector<f64>, inv: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_fn(x.len(), |i, _| inv[(i, i)] / self.scale - 1.0 / x[i])
    }

    /// Newton direction on `{sum x = N}`, or `None` where the Hessian does not
    /// factor or the direction is not a descent direction.
    fn newton(&self, x: &DVector<f64>, g: &DVector<f64>, inv: &DMatrix<f64>) -> Option<DVector<f64>> {
        let n = x.len();
        let s2 = self.scale * self.scale;
        let hess = DMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { 1.0 / (x[i] * x[i]) } else { 0.0 };
            d - inv[(i, j)] * inv[(i, j)] / s2
        });
        let chol = hess.cholesky()?;
        let hg = chol.solve(g);
        let h1 = chol.solve(&DVector::from_element(n, 1.0));
        let nu = hg.sum() / h1.sum();
        let d = -(hg - h1 * nu);
        (d.iter().all(|v| v.is_finite()) && g.dot(&d) < 0.0).then_some(d)
    }
}

/// Largest `t <= 1` keeping `x + t d` at least 1% of the way above the floor.
fn max_step(x: &DVector<f64>, d: &DVector<f64>) -> f64 {
    x.iter()
        .zip(d.iter())
        .filter(|(_, di)| **di < 0.0)
        .map(|(xi, di)| 0.99 * (xi - X_FLOOR) / -di)
        .fold(1.0, f64::min)
}

/// Euclidean projection onto `{x >= lo, sum x = total}`.
fn project(v: &DVector<f64>, lo: f64, total: f64) -> DVector<f64> {
    let n = v.len();
    let budget = total - lo * n as f64;
    let mut u: Vec<f64> = v.iter().map(|x| x - lo).collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cum += uj;
        let t = (cum - budget) / (j + 1) as f64;
        if uj - t > 0.0 {
            tau = t;
        }
    }
    v.map(|x| lo + (x - lo - tau).max(0.0))
}

fn residual(x: &DVector<f64>, g: &DVector<f64>) -> f64 {
    let n = x.len() as f64;
    (project(&(x - g), X_FLOOR, n) - x).amax()
}

/// Armijo backtracking from step `t0` along `d` against reference value
/// `f_ref`.
fn line_search(p: &Problem, x: &DVector<f64>, d: &DVector<f64>, t0: f64, slope: f64, f_ref: f64) -> Option<(DVector<f64>, f64)> {
    let mut t = t0;
    for _ in 0..MAX_HALVINGS {
        let trial = x + d * t;
        let ft = p.value(&trial);
        if ft <= f_ref + ARMIJO * t * slope {
            return Some((trial, ft));
        }
        t *= 0.5;
    }
    None
}

pub fn minimax_diag_noise(gram: &DMatrix<f64>, snr: f64, tol: f64) -> Result<MinimaxSolution> {
    minimax_diag_noise_with(gram, snr, SolverOptions { tol, ..SolverOptions::default() })
}

/// Returns the best iterate even when the iteration budget runs out; check
/// `converged`.
pub fn minimax_diag_noise_with(gram: &DMatrix<f64>, snr: f64, opts: SolverOptions) -> Result<MinimaxSolution> {
    if !(snr > 0.0 && snr.is_finite()) {
        return Err(Error::Domain(format!("snr must be positive and finite, got {snr}")));
    }
    logdet_psd_detailed(gram)?;
    let n = gram.nrows();
    if n == 0 {
        return Err(Error::Domain("empty gram matrix".into()));
    }
    let nf = n as f64;
    let p = Problem { gram, scale: nf * snr };

    let no_factor = || Error::NotPsd { eigenvalue: f64::NAN, norm: gram.norm() };
    let mut x = DVector::from_element(n, 1.0);
    let mut f = p.value(&x);
    let mut inv = p.inverse(&x).ok_or_else(no_factor)?;
    let mut g = p.gradient(&x, &inv);
    let mut history = vec![f];
    let mut lambda = 1.0;
    let mut res = residual(&x, &g);
    let mut iterations = 0;

    while res > opts.tol && iterations < opts.max_iter {
        iterations += 1;
        let f_ref = history.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        // rounding noise in log det dominates the Armijo decrease near the
        // optimum; accept steps within it
        let slack = 1e-13 * (1.0 + f_ref.abs());
        let mut accepted = None;
        if let Some(d) = p.newton(&x, &g, &inv) {
            accepted = line_search(&p, &x, &d, max_step(&x, &d), g.dot(&d), f + slack);
        }
        if accepted.is_none() {
            let d = project(&(&x - &g * lambda), X_FLOOR, nf) - &x;
            accepted = line_search(&p, &x, &d, 1.0, g.dot(&d), f_ref + slack);
        }
        let Some((x_new, f_new)) = accepted else { break };
        let Some(inv_new) = p.inverse(&x_new) else { break };
        let g_new = p.gradient(&x_new, &inv_new);
        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        lambda = if sy > 0.0 { (s.dot(&s) / sy).clamp(1e-10, 1e10) } else { 1e10 };
        x = x_new;
        f = f_new;
        g = g_new;
        inv = inv_new;
        history.push(f);
        if history.len() > MEMORY {
            history.remove(0);
        }
        res = residual(&x, &g);
    }

    Ok(MinimaxSolution {
        value: f / std::f64::consts::LN_2,
        noise_diag: x.iter().map(|xi| xi / p.scale).collect(),
        iterations,
        residual: res,
        converged: res <= opts.tol,
    })
}

/// Objective `log2 det(G + A) - log2 det(A)` at an arbitrary diagonal `A`.
pub fn minimax_objective(gram: &DMatrix<f64>, noise_diag: &[f64]) -> Result<f64> {
    let mut m = gram.clone();
    for (i, a) in noise_diag.iter().enumerate() {
        m[(i, i)] += a;
    }
    let ld = logdet_psd_detailed(&m)?.ln;
    Ok((ld - noise_diag.iter().map(|a| a.ln()).sum::<f64>()) / std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_psd(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> DMatrix<f64> {
        let b = DMatrix::from_fn(n, rank, |_, _| rng.random::<f64>() - 0.5);
        &b * b.transpose()
    }

    #[test]
    fn projection_lands_on_simplex() {
        let v = DVector::from_vec(vec![3.0, -1.0, 0.5, 0.2]);
        let x = project(&v, 1e-12, 4.0);
        assert!((x.sum() - 4.0).abs() < 1e-12);
        assert!(x.iter().all(|&xi| xi >= 1e-12));
        let inside = DVector::from_vec(vec![1.0, 1.0, 1.0, 1.0]);
        assert_eq!(project(&inside, 1e-12, 4.0), inside);
    }

    #[test]
    fn scaled_identity_gives_uniform_noise() {
        let (n, c, snr) = (5, 0.7, 10.0);
        let gram = DMatrix::identity(n, n) * c;
        let sol = minimax_diag_noise(&gram, snr, 1e-10).unwrap();
        assert!(sol.converged);
        let a0 = 1.0 / (n as f64 * snr);
        assert!(sol.noise_diag.iter().all(|a| ((a - a0) / a0).abs() < 1e-6));
        let per_cell = sol.value / n as f64;
        assert!((per_cell - (1.0 + c * n as f64 * snr).log2()).abs() < 1e-9);
    }

    #[test]
    fn circulant_matches_eigenvalue_form() {
        let n = 12;
        let snr = 3.0;
        let gram = crate::wyner::wyner_lambda0(n, 0.3, crate::config::Topology::Wraparound) / n as f64;
        let sol = minimax_diag_noise(&gram, snr, 1e-9).unwrap();
        let eig = gram.clone().symmetric_eigen().eigenvalues;
        let closed: f64 = eig.iter().map(|l| (1.0 + n as f64 * snr * l).log2()).sum();
        assert!(((sol.value - closed) / closed).abs() < 1e-6);
    }

    #[test]
    fn random_instances_beat_feasible_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..100 {
            let n = 4;
            let gram = random_psd(&mut rng, n, 1 + case % 4);
            let snr = 10f64.powf(rng.random_range(-1.0..2.0));
            let sol = minimax_diag_noise(&gram, snr, 1e-8).unwrap();
            assert!(sol.converged, "case {case}: residual {}", sol.residual);
            assert!((sol.trace() - 1.0 / snr).abs() < 1e-8 / snr);
            let uniform = vec![1.0 / (n as f64 * snr); n];
            assert!(sol.value <= minimax_objective(&gram, &uniform).unwrap() + 1e-9);
            for _ in 0..100 {
                let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
                let s: f64 = w.iter().sum();
                let probe: Vec<f64> = w.iter().map(|wi| wi / (s * snr)).collect();
                assert!(sol.value <= minimax_objective(&gram, &probe).unwrap() + 1e-9);
            }
        }
    }

    #[test]
    fn value_matches_objective_at_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let gram = random_psd(&mut rng, 8, 8);
        let sol = minimax_diag_noise(&gram, 5.0, 1e-8).unwrap();
        assert!((sol.value - minimax_objective(&gram, &sol.noise_diag).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut g = DMatrix::identity(3, 3);
        g[(0, 0)] = -1.0;
        assert!(minimax_diag_noise(&g, 1.0, 1e-8).is_err());
        assert!(minimax_diag_noise(&DMatrix::identity(3, 3), 0.0, 1e-8).is_err());
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let gram = random_psd(&mut rng, 6, 2);
        let opts = SolverOptions { tol: 1e-14, max_iter: 1 };
        let sol = minimax_diag_noise_with(&gram, 10.0, opts).unwrap();
        assert!(!sol.converged);
        assert!(sol.require_converged().is_err());
    }
}
