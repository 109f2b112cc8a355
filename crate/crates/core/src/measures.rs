//! Entanglement and squeezing measures on Gaussian states: quadrature
//! covariance matrices, logarithmic negativity, collective EPR variances with
//! phase optimization, and purity.

use crate::error::{Error, Result};
use crate::model::is_stable_eigen;
use crate::steadystate::{Regime, SteadyStateSolution};
use crate::{SystemModel, C64};
use ndarray::{s, Array2, ArrayView2};
use ndarray_linalg::{Determinant, Eigh, UPLO};
use roots::find_roots_quartic;
use std::f64::consts::{FRAC_PI_2, PI};

/// Real covariance matrix of quadratures (x₁, p₁, x₂, p₂, …), vacuum 1/2.
#[derive(Debug, Clone)]
pub struct QuadratureCovariance {
    /// Symmetrized covariances ⟨{R_i, R_j}⟩/2.
    pub sigma: Array2<f64>,
    /// True iff σ + (i/2)Ω is positive semidefinite within tolerance.
    pub physical: bool,
    /// Smallest eigenvalue of σ + (i/2)Ω.
    pub psd_margin: f64,
}

impl QuadratureCovariance {
    /// Wraps a symmetric matrix, computing the uncertainty-relation margin.
    pub fn new(sigma: Array2<f64>) -> Result<Self> {
        let d = sigma.nrows();
        if sigma.ncols() != d || d == 0 || d % 2 != 0 {
            return Err(Error::Config(format!(
                "quadrature covariance must be square with even dimension, got {}x{}",
                d,
                sigma.ncols()
            )));
        }
        let mut h = Array2::<C64>::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                h[[i, j]] = C64::new(sigma[[i, j]], 0.0);
            }
        }
        for k in 0..d / 2 {
            h[[2 * k, 2 * k + 1]] += C64::new(0.0, 0.5);
            h[[2 * k + 1, 2 * k]] -= C64::new(0.0, 0.5);
        }
        let (vals, _) = h
            .eigh(UPLO::Lower)
            .map_err(|e| Error::Eigensolver(e.to_string()))?;
        let psd_margin = vals.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(QuadratureCovariance { sigma, physical: psd_margin >= -1e-9, psd_margin })
    }

    /// Number of modes M′.
    pub fn n_modes(&self) -> usize {
        self.sigma.nrows() / 2
    }
}

/// Quadrature covariance matrix of the selected modes (0 is the cavity).
pub fn to_quadrature_cm(v: &Array2<C64>, modes: &[usize]) -> Result<QuadratureCovariance> {
    let d = v.nrows();
    if v.ncols() != d || d % 2 != 0 {
        return Err(Error::Config(format!("covariance must be square with even dimension, got {}x{}", d, v.ncols())));
    }
    let n_all = d / 2;
    if modes.is_empty() {
        return Err(Error::Config("mode subset must not be empty".into()));
    }
    for (k, &m) in modes.iter().enumerate() {
        if m >= n_all {
            return Err(Error::Config(format!("mode index {m} out of range for {n_all} modes")));
        }
        if modes[..k].contains(&m) {
            return Err(Error::Config(format!("duplicate mode index {m}")));
        }
    }
    let n = modes.len();
    let c = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ic = C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let mut t = Array2::<C64>::zeros((2 * n, d));
    for (k, &m) in modes.iter().enumerate() {
        t[[2 * k, 2 * m]] = c;
        t[[2 * k, 2 * m + 1]] = c;
        t[[2 * k + 1, 2 * m]] = -ic;
        t[[2 * k + 1, 2 * m + 1]] = ic;
    }
    let q = t.dot(v).dot(&t.t());
    let sigma = Array2::from_shape_fn((2 * n, 2 * n), |(i, j)| 0.5 * (q[[i, j]] + q[[j, i]]).re);
    QuadratureCovariance::new(sigma)
}

fn det2(m: ArrayView2<f64>) -> f64 {
    m[[0, 0]] * m[[1, 1]] - m[[0, 1]] * m[[1, 0]]
}

/// Unclamped entanglement exponent −ln(2ν̃); positive exactly when entangled.
pub fn negativity_exponent(q: &QuadratureCovariance) -> Result<f64> {
    if q.sigma.nrows() != 4 {
        return Err(Error::Config(format!(
            "logarithmic negativity needs exactly two modes, got {}",
            q.n_modes()
        )));
    }
    if !q.physical {
        return Err(Error::NonPhysical(format!(
            "covariance violates the uncertainty relation (margin {:.3e})",
            q.psd_margin
        )));
    }
    let s_ = &q.sigma;
    let det_a = det2(s_.slice(s![0..2, 0..2]));
    let det_b = det2(s_.slice(s![2..4, 2..4]));
    let det_c = det2(s_.slice(s![0..2, 2..4]));
    let det_s = s_.det().map_err(|e| Error::LinearSolve(e.to_string()))?;
    let delta = det_a + det_b - 2.0 * det_c;
    let disc = (delta * delta - 4.0 * det_s).max(0.0);
    let nu = (((delta - disc.sqrt()) / 2.0).max(0.0)).sqrt();
    let exponent = -(2.0 * nu).ln();
    if exponent.is_nan() || exponent == f64::INFINITY {
        return Err(Error::NonPhysical(format!(
            "vanishing partial-transpose symplectic eigenvalue (margin {:.3e})",
            q.psd_margin
        )));
    }
    Ok(exponent)
}

/// Logarithmic negativity E_N of a two-mode Gaussian state.
pub fn logarithmic_negativity(q: &QuadratureCovariance) -> Result<f64> {
    Ok(negativity_exponent(q)?.max(0.0))
}

fn variance_form(sigma: &Array2<f64>, theta1: f64, theta2: f64) -> f64 {
    let v = [theta1.cos(), -theta1.sin(), theta2.cos(), -theta2.sin()];
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            acc += v[i] * sigma[[i, j]] * v[j];
        }
    }
    acc
}

fn variance_derivatives(sigma: &Array2<f64>, t1: f64, t2: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let v = [t1.cos(), -t1.sin(), t2.cos(), -t2.sin()];
    let d1 = [-t1.sin(), -t1.cos(), 0.0, 0.0];
    let d2 = [0.0, 0.0, -t2.sin(), -t2.cos()];
    let form = |a: &[f64; 4], b: &[f64; 4]| {
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += a[i] * sigma[[i, j]] * b[j];
            }
        }
        acc
    };
    let head = [v[0], v[1], 0.0, 0.0];
    let tail = [0.0, 0.0, v[2], v[3]];
    let g = [2.0 * form(&d1, &v), 2.0 * form(&d2, &v)];
    let h = [
        [2.0 * (form(&d1, &d1) - form(&head, &v)), 2.0 * form(&d1, &d2)],
        [2.0 * form(&d1, &d2), 2.0 * (form(&d2, &d2) - form(&tail, &v))],
    ];
    (g, h)
}

fn newton_polish(sigma: &Array2<f64>, mut t1: f64, mut t2: f64, mut f: f64) -> (f64, f64, f64) {
    for _ in 0..40 {
        let (g, h) = variance_derivatives(sigma, t1, t2);
        if g[0].abs().max(g[1].abs()) < 1e-14 * (1.0 + f.abs()) {
            break;
        }
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det <= 0.0 || h[0][0] <= 0.0 {
            break;
        }
        let s1 = (h[1][1] * g[0] - h[0][1] * g[1]) / det;
        let s2 = (h[0][0] * g[1] - h[1][0] * g[0]) / det;
        if s1.abs().max(s2.abs()) > 0.2 {
            break;
        }
        let trial = variance_form(sigma, t1 - s1, t2 - s2);
        if trial >= f {
            break;
        }
        t1 -= s1;
        t2 -= s2;
        f = trial;
    }
    (t1, t2, f)
}

/// Variance of x̂_{θ₁}^{(j)} + x̂_{θ₂}^{(k)} for the mode pair; vacuum level 1.
pub fn two_mode_variance(
    sol: &SteadyStateSolution,
    pair: (usize, usize),
    theta1: f64,
    theta2: f64,
    t: f64,
) -> Result<f64> {
    let q = to_quadrature_cm(&sol.evaluate(t), &[pair.0, pair.1])?;
    Ok(variance_form(&q.sigma, theta1, theta2))
}

/// Minimizes the collective variance over both phases.
///
/// Returns (θ₁, θ₂, var_min) with θ₁ canonicalized to [0, π); a phase-blind
/// state reports (0, 0).
pub fn optimal_phases(sol: &SteadyStateSolution, pair: (usize, usize), t: f64) -> Result<(f64, f64, f64)> {
    let q = to_quadrature_cm(&sol.evaluate(t), &[pair.0, pair.1])?;
    Ok(minimize_variance(&q.sigma))
}

fn best_t2_for(sigma: &Array2<f64>, t1: f64) -> (f64, f64) {
    let u = [t1.cos(), -t1.sin()];
    let alpha = 2.0 * (u[0] * sigma[[0, 2]] + u[1] * sigma[[1, 2]]);
    let beta = -2.0 * (u[0] * sigma[[0, 3]] + u[1] * sigma[[1, 3]]);
    let gamma = 0.5 * (sigma[[2, 2]] - sigma[[3, 3]]);
    let delta = -sigma[[2, 3]];
    // stationary angles of the θ₂ section via the tan(θ₂/2) quartic of ∂f/∂θ₂
    let mut p = [
        2.0 * delta - beta,
        8.0 * gamma - 2.0 * alpha,
        -12.0 * delta,
        -(2.0 * alpha + 8.0 * gamma),
        beta + 2.0 * delta,
    ];
    let scale = p.iter().fold(0f64, |m, c| m.max(c.abs()));
    for c in &mut p {
        if c.abs() < 1e-14 * scale {
            *c = 0.0;
        }
    }
    let mut best = (0.0, variance_form(sigma, t1, 0.0));
    let mut consider = |t2: f64| {
        let f = variance_form(sigma, t1, t2);
        if f < best.1 {
            best = (t2, f);
        }
    };
    consider(PI);
    if scale > 0.0 {
        for r in find_roots_quartic(p[0], p[1], p[2], p[3], p[4]).as_ref() {
            consider(2.0 * r.atan());
        }
    }
    for _ in 0..3 {
        let (g, h) = variance_derivatives(sigma, t1, best.0);
        if g[1].abs() < 1e-14 * (1.0 + best.1.abs()) || h[1][1] <= 0.0 {
            break;
        }
        let s = g[1] / h[1][1];
        if s.abs() > 0.5 {
            break;
        }
        let trial = variance_form(sigma, t1, best.0 - s);
        if trial >= best.1 {
            break;
        }
        best = (best.0 - s, trial);
    }
    best
}

/// Global minimum of the collective variance over both phases, with θ₁
/// canonicalized to [0, π); ties keep the earliest candidate so a
/// phase-blind state reports (0, 0).
pub(crate) fn minimize_variance(sigma: &Array2<f64>) -> (f64, f64, f64) {
    const N: usize = 128;
    let tie = |b: f64| 1e-12 * (1.0 + b.abs());
    let step0 = PI / N as f64;
    let mut cols = Vec::with_capacity(N);
    let mut primary = (0usize, 0.0, 0.0, variance_form(sigma, 0.0, 0.0));
    for i in 0..N {
        let t1 = step0 * i as f64;
        let (t2, f) = best_t2_for(sigma, t1);
        if f < primary.3 - tie(primary.3) {
            primary = (i, t1, t2, f);
        }
        cols.push((i, t1, t2, f));
    }
    cols.sort_by(|a, b| a.3.total_cmp(&b.3).then(a.0.cmp(&b.0)));
    let ring_dist = |a: usize, b: usize| {
        let d = a.abs_diff(b);
        d.min(N - d)
    };
    let mut seeds = vec![primary];
    for &col in &cols {
        if seeds.len() == 5 {
            break;
        }
        if seeds.iter().all(|s| ring_dist(s.0, col.0) >= 3) {
            seeds.push(col);
        }
    }
    let mut best = (primary.1, primary.2, primary.3);
    for seed in seeds {
        let mut local = (seed.1, seed.2, seed.3);
        let mut step = step0;
        for _ in 0..50 {
            let center = local;
            for di in -1i32..=1 {
                for dj in -1i32..=1 {
                    let t1 = center.0 + di as f64 * step;
                    let t2 = center.1 + dj as f64 * step;
                    let f = variance_form(sigma, t1, t2);
                    if f < local.2 - tie(local.2) {
                        local = (t1, t2, f);
                    }
                }
            }
            step *= 0.5;
        }
        local = newton_polish(sigma, local.0, local.1, local.2);
        if local.2 < best.2 - tie(best.2) {
            best = local;
        }
    }
    let (mut t1, mut t2, var_min) = (best.0.rem_euclid(2.0 * PI), best.1.rem_euclid(2.0 * PI), best.2);
    if t1 >= PI {
        t1 -= PI;
        t2 = (t2 + PI).rem_euclid(2.0 * PI);
    }
    (t1, t2, var_min)
}

/// Purity 2^{−M′}/√det σ of the reduced Gaussian state.
pub fn purity(q: &QuadratureCovariance) -> Result<f64> {
    let det_s = q.sigma.det().map_err(|e| Error::LinearSolve(e.to_string()))?;
    if det_s <= 0.0 {
        return Err(Error::NonPhysical(format!("covariance determinant {det_s:.3e} is not positive")));
    }
    Ok(0.5f64.powi(q.n_modes() as i32) / det_s.sqrt())
}

/// Entanglement and squeezing summary for one mode pair at time t.
#[derive(Debug, Clone, Copy)]
pub struct EntanglementReport {
    /// Logarithmic negativity.
    pub e_n: f64,
    /// Optimal phase of the first mode, in [0, π).
    pub theta1: f64,
    /// Optimal phase of the second mode, in [0, 2π).
    pub theta2: f64,
    /// Minimal collective variance (vacuum 1).
    pub var_min: f64,
    /// Variance of the conjugate combination at (θ₁ + π/2, θ₂ − π/2).
    pub var_orth: f64,
    /// Purity of the reduced two-mode state.
    pub purity: f64,
    /// Spectral stability of the drift matrix used for this solution.
    pub stable: bool,
}

/// Computes all pairwise measures for one mode pair of a steady state.
pub fn entanglement_report(
    model: &SystemModel,
    sol: &SteadyStateSolution,
    pair: (usize, usize),
    t: f64,
) -> Result<EntanglementReport> {
    let q = to_quadrature_cm(&sol.evaluate(t), &[pair.0, pair.1])?;
    let e_n = logarithmic_negativity(&q)?;
    let (theta1, theta2, var_min) = optimal_phases(sol, pair, t)?;
    let var_orth = two_mode_variance(sol, pair, theta1 + FRAC_PI_2, theta2 - FRAC_PI_2, t)?;
    let p = purity(&q)?;
    let a = match sol.regime {
        Regime::Resonant => model.drift_matrix_resonant(),
        _ => model.drift_matrix_full(),
    };
    Ok(EntanglementReport {
        e_n,
        theta1,
        theta2,
        var_min,
        var_orth,
        purity: p,
        stable: is_stable_eigen(&a)?,
    })
}
