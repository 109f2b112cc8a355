//! Independent cross-check of the steady-state solver: the time-dependent
//! diffusion matrix built from finite-time kernels, and direct RK4
//! integration of V̇ = AV + VAᵀ + B(t).

use crate::error::{Error, Result};
use crate::model::SystemModel;
use crate::reservoir::{steady_kernels, transient_kernels};
use crate::steadystate::{assemble_diffusion, diffusion_pieces, DiffusionPieces};
use crate::C64;
use ndarray::Array2;
use ndarray_linalg::EigVals;

fn combine(parts: &[Array2<C64>; 3], epsilon_l: f64, t: f64) -> Array2<C64> {
    let em = C64::from_polar(1.0, -2.0 * epsilon_l * t);
    let ep = em.conj();
    &parts[0] + &parts[1].mapv(|z| z * em) + &parts[2].mapv(|z| z * ep)
}

/// Diffusion matrix B(t) for evolution that starts from vacuum kernels at t = 0.
pub fn diffusion_at(model: &SystemModel, a: &Array2<C64>, t: f64) -> Result<Array2<C64>> {
    let dp = diffusion_pieces(model);
    let k = transient_kernels(a, &model.opo, model.freq.epsilon_l, t)?;
    Ok(combine(&assemble_diffusion(&dp, &k), model.freq.epsilon_l, t))
}

struct DiffusionEvaluator<'a> {
    model: &'a SystemModel,
    a: &'a Array2<C64>,
    dp: DiffusionPieces,
    t_settle: f64,
    steady: Option<[Array2<C64>; 3]>,
}

impl<'a> DiffusionEvaluator<'a> {
    fn new(model: &'a SystemModel, a: &'a Array2<C64>, max_re: f64, t_end: f64) -> Result<Self> {
        let t_settle = if max_re < 0.0 {
            40.0 / (model.opo.r_minus() - max_re)
        } else {
            f64::INFINITY
        };
        let dp = diffusion_pieces(model);
        let steady = if t_end > t_settle {
            let k = steady_kernels(a, &model.opo, model.freq.epsilon_l)?;
            Some(assemble_diffusion(&dp, &k))
        } else {
            None
        };
        Ok(DiffusionEvaluator { model, a, dp, t_settle, steady })
    }

    fn at(&self, t: f64) -> Result<Array2<C64>> {
        let el = self.model.freq.epsilon_l;
        if t >= self.t_settle {
            if let Some(parts) = &self.steady {
                return Ok(combine(parts, el, t));
            }
        }
        let k = transient_kernels(self.a, &self.model.opo, el, t)?;
        Ok(combine(&assemble_diffusion(&self.dp, &k), el, t))
    }
}

/// Integrates the covariance equation of motion with classical RK4.
///
/// The step is capped at 0.01 / max(|λ|_max, r₊, 2ε_L) regardless of `dt`.
pub fn integrate_covariance(
    model: &SystemModel,
    v_init: &Array2<C64>,
    t_end: f64,
    dt: f64,
) -> Result<Array2<C64>> {
    model.validate()?;
    let d = model.dim();
    if v_init.nrows() != d || v_init.ncols() != d {
        return Err(Error::Config(format!(
            "initial covariance must be {d}x{d}, got {}x{}",
            v_init.nrows(),
            v_init.ncols()
        )));
    }
    if !(t_end >= 0.0) {
        return Err(Error::Config(format!("t_end must be >= 0, got {t_end}")));
    }
    if !(dt > 0.0) {
        return Err(Error::Config(format!("dt must be > 0, got {dt}")));
    }
    let a = model.drift_matrix_full();
    let eigs = a.eigvals().map_err(|e| Error::Eigensolver(e.to_string()))?;
    let max_abs = eigs.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let max_re = eigs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    let rate = max_abs
        .max(model.opo.r_plus())
        .max(2.0 * model.freq.epsilon_l.abs());
    let h_cap = dt.min(0.01 / rate);
    if t_end == 0.0 {
        return Ok(v_init.clone());
    }
    let n_steps = (t_end / h_cap).ceil() as usize;
    let h = t_end / n_steps as f64;
    let beval = DiffusionEvaluator::new(model, &a, max_re, t_end)?;
    let at = a.t().to_owned();
    let rhs = |v: &Array2<C64>, b: &Array2<C64>| -> Array2<C64> { a.dot(v) + v.dot(&at) + b };
    let mut v = v_init.clone();
    let mut b_t = beval.at(0.0)?;
    for i in 0..n_steps {
        let t0 = i as f64 * h;
        let b_half = beval.at(t0 + 0.5 * h)?;
        let b_next = beval.at(t0 + h)?;
        let k1 = rhs(&v, &b_t);
        let k2 = rhs(&(&v + &k1.mapv(|z| z * (0.5 * h))), &b_half);
        let k3 = rhs(&(&v + &k2.mapv(|z| z * (0.5 * h))), &b_half);
        let k4 = rhs(&(&v + &k3.mapv(|z| z * h)), &b_next);
        let incr = (&(&k1 + &k4) + &(k2 + k3).mapv(|z| z * 2.0)).mapv(|z| z * (h / 6.0));
        v = &v + &incr;
        b_t = b_next;
    }
    Ok(v)
}
