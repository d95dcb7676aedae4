//! Small Levenberg-Marquardt least-squares loop for 1-D curve models.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub trait CurveModel {
    fn n_params(&self) -> usize;
    fn eval(&self, x: f64, params: &[f64]) -> f64;
    /// Partial derivatives of `eval` with respect to each parameter.
    fn gradient(&self, x: f64, params: &[f64], out: &mut [f64]);
}

#[derive(Debug, Clone, Copy)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Stop once every parameter moves by less than this relative amount.
    pub rel_tol: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            rel_tol: 1e-9,
        }
    }
}

/// Parameter estimates of a converged (or abandoned) fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub names: Vec<String>,
    pub params: Vec<f64>,
    /// 1-sigma uncertainties; present only for converged fits.
    pub uncertainties: Option<Vec<f64>>,
    /// Weighted residual sum of squares.
    pub rss: f64,
    pub converged: bool,
    pub iterations: usize,
    #[serde(skip)]
    pub covariance: Option<DMatrix<f64>>,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.params[i])
    }

    pub fn uncertainty(&self, name: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == name)?;
        self.uncertainties.as_ref().map(|u| u[i])
    }
}

fn weighted_rss<M: CurveModel>(model: &M, xs: &[f64], ys: &[f64], w: &[f64], p: &[f64]) -> f64 {
    xs.iter()
        .zip(ys)
        .zip(w)
        .map(|((&x, &y), &wi)| wi * (y - model.eval(x, p)).powi(2))
        .sum()
}

/// Minimizes `sum w_i (y_i - f(x_i; p))^2` starting from `init`.
pub fn levenberg_marquardt<M: CurveModel>(
    model: &M,
    names: &[&str],
    xs: &[f64],
    ys: &[f64],
    weights: Option<&[f64]>,
    init: &[f64],
    opts: LmOptions,
) -> FitResult {
    let n = xs.len();
    let k = model.n_params();
    let unit = vec![1.0; n];
    let w = weights.unwrap_or(&unit);
    let mut p = init.to_vec();
    let mut rss = weighted_rss(model, xs, ys, w, &p);
    let mut mu = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    let mut grad = vec![0.0; k];

    let normal_equations = |p: &[f64], grad: &mut [f64]| {
        let mut jtj = DMatrix::<f64>::zeros(k, k);
        let mut jtr = DVector::<f64>::zeros(k);
        for i in 0..n {
            model.gradient(xs[i], p, grad);
            let r = ys[i] - model.eval(xs[i], p);
            for a in 0..k {
                jtr[a] += w[i] * grad[a] * r;
                for b in a..k {
                    jtj[(a, b)] += w[i] * grad[a] * grad[b];
                }
            }
        }
        for a in 0..k {
            for b in 0..a {
                jtj[(a, b)] = jtj[(b, a)];
            }
        }
        (jtj, jtr)
    };

    while iterations < opts.max_iterations {
        iterations += 1;
        let (jtj, jtr) = normal_equations(&p, &mut grad);
        let mut step_taken = false;
        while mu < 1e16 {
            let mut damped = jtj.clone();
            for a in 0..k {
                damped[(a, a)] += mu * jtj[(a, a)].max(1e-300);
            }
            let Some(delta) = damped.cholesky().map(|c| c.solve(&jtr)) else {
                mu *= 10.0;
                continue;
            };
            let trial: Vec<f64> = p.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
            let trial_rss = weighted_rss(model, xs, ys, w, &trial);
            if trial_rss.is_finite() && trial_rss <= rss {
                let small = p
                    .iter()
                    .zip(delta.iter())
                    .all(|(a, d)| d.abs() <= opts.rel_tol * a.abs().max(opts.rel_tol));
                p = trial;
                rss = trial_rss;
                mu = (mu / 10.0).max(1e-12);
                step_taken = true;
                if small {
                    converged = true;
                }
                break;
            }
            mu *= 10.0;
        }
        // No downhill step at any damping: already at the minimum.
        if !step_taken || converged {
            converged = true;
            break;
        }
    }

    let (jtj, _) = normal_equations(&p, &mut grad);
    let dof = n.saturating_sub(k).max(1) as f64;
    let covariance = if converged {
        jtj.try_inverse().map(|inv| inv * (rss / dof))
    } else {
        None
    };
    let uncertainties = covariance
        .as_ref()
        .map(|c| (0..k).map(|i| c[(i, i)].max(0.0).sqrt()).collect());
    FitResult {
        names: names.iter().map(|s| s.to_string()).collect(),
        params: p,
        uncertainties,
        rss,
        converged,
        iterations,
        covariance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Exp;
    impl CurveModel for Exp {
        fn n_params(&self) -> usize {
            2
        }
        fn eval(&self, x: f64, p: &[f64]) -> f64 {
            p[0] * (p[1] * x).exp()
        }
        fn gradient(&self, x: f64, p: &[f64], out: &mut [f64]) {
            let e = (p[1] * x).exp();
            out[0] = e;
            out[1] = p[0] * x * e;
        }
    }

    #[test]
    fn recovers_exact_exponential() {
        let xs: Vec<f64> = (0..30).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 2.5 * (-0.7 * x).exp()).collect();
        let fit = levenberg_marquardt(&Exp, &["a", "k"], &xs, &ys, None, &[1.0, -0.1], LmOptions::default());
        assert!(fit.converged);
        assert!((fit.params[0] - 2.5).abs() < 1e-9);
        assert!((fit.params[1] + 0.7).abs() < 1e-9);
        assert!(fit.uncertainties.unwrap().iter().all(|u| *u >= 0.0));
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let xs: Vec<f64> = (0..30).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 2.5 * (-0.7 * x).exp() + 0.01 * (x * 37.0).sin()).collect();
        let opts = LmOptions {
            max_iterations: 1,
            rel_tol: 1e-15,
        };
        let fit = levenberg_marquardt(&Exp, &["a", "k"], &xs, &ys, None, &[1.0, 0.5], opts);
        assert!(!fit.converged);
        assert!(fit.uncertainties.is_none());
    }
}
