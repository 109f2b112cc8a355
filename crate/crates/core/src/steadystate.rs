//! Exact Gaussian steady state: diffusion pieces, the three-component
//! covariance ansatz V(t) = V₀ + V₋e^{−2iε_Lt} + V₊e^{+2iε_Lt}, and the four
//! solution regimes (full, broadband, resonant, ideal).

use crate::error::{Error, Result};
use crate::lyapunov::solve_lyapunov;
use crate::model::{stability_report, SystemModel};
use crate::reservoir::{broadband_moments, steady_kernels};
use crate::C64;
use ndarray::Array2;

/// Level of approximation used to compute a steady state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Finite-bandwidth reservoir, counter-rotating terms kept.
    Full,
    /// White squeezed reservoir with moments n̄, m̄.
    Broadband,
    /// Broadband reservoir plus rotating-wave approximation.
    Resonant,
    /// Perfect-transfer limit: reservoir state mapped onto the modes.
    Ideal,
}

impl Regime {
    /// Lowercase name used in configs and output files.
    pub fn name(self) -> &'static str {
        match self {
            Regime::Full => "full",
            Regime::Broadband => "broadband",
            Regime::Resonant => "resonant",
            Regime::Ideal => "ideal",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Regime::Full),
            "broadband" => Ok(Regime::Broadband),
            "resonant" => Ok(Regime::Resonant),
            "ideal" => Ok(Regime::Ideal),
            other => Err(Error::Config(format!(
                "unknown regime '{other}' (expected full, broadband, resonant, or ideal)"
            ))),
        }
    }
}

/// Constant diffusion matrix C₀ and the squeezed-channel pieces C^(ℓℓ′).
#[derive(Debug, Clone)]
pub struct DiffusionPieces {
    /// Vacuum and thermal contributions, independent of the reservoir state.
    pub c0: Array2<C64>,
    cll: [[Array2<C64>; 2]; 2],
}

impl DiffusionPieces {
    /// Squeezed-channel piece C^(ℓℓ′) with ℓ, ℓ′ ∈ {1, 2}.
    pub fn c(&self, l: usize, lp: usize) -> &Array2<C64> {
        assert!((1..=2).contains(&l) && (1..=2).contains(&lp), "indices are 1 or 2");
        &self.cll[l - 1][lp - 1]
    }
}

/// Splits the diffusion matrix into its reservoir-independent pieces.
pub fn diffusion_pieces(model: &SystemModel) -> DiffusionPieces {
    let d = model.dim();
    let mut c0 = Array2::<C64>::zeros((d, d));
    c0[[0, 1]] = C64::new(2.0 * model.cavity.kappa_a, 0.0);
    for (j, m) in model.modes.iter().enumerate() {
        let r = 2 + 2 * j;
        c0[[r, r + 1]] = C64::new(m.gamma * (m.n_thermal + 1.0), 0.0);
        c0[[r + 1, r]] = C64::new(m.gamma * m.n_thermal, 0.0);
    }
    let entry = C64::new(2.0 * model.cavity.kappa_a_s(), 0.0);
    let piece = |l: usize, lp: usize| {
        let mut c = Array2::<C64>::zeros((d, d));
        c[[l - 1, lp - 1]] = entry;
        c
    };
    DiffusionPieces {
        c0,
        cll: [[piece(1, 1), piece(1, 2)], [piece(2, 1), piece(2, 2)]],
    }
}

/// Steady-state covariances ⟨u_i u_j⟩ in the laser frame.
#[derive(Debug, Clone)]
pub struct SteadyStateSolution {
    /// Stationary component V₀.
    pub v0: Array2<C64>,
    /// Component multiplying e^{−2iε_Lt}.
    pub v_minus: Array2<C64>,
    /// Component multiplying e^{+2iε_Lt}.
    pub v_plus: Array2<C64>,
    /// Modulation frequency ε_L of the oscillating components.
    pub epsilon_l: f64,
    /// Approximation level this solution was computed in.
    pub regime: Regime,
    /// Non-fatal diagnostics collected while solving.
    pub warnings: Vec<String>,
}

impl SteadyStateSolution {
    /// Matrix dimension 2(M+1).
    pub fn dim(&self) -> usize {
        self.v0.nrows()
    }

    /// Covariance matrix Ṽ(t) at time t.
    pub fn evaluate(&self, t: f64) -> Array2<C64> {
        let em = C64::from_polar(1.0, -2.0 * self.epsilon_l * t);
        let ep = em.conj();
        &self.v0 + &self.v_minus.mapv(|z| z * em) + &self.v_plus.mapv(|z| z * ep)
    }
}

/// Covariances rotated back to the laboratory frame at time t.
pub fn frame_transform(sol: &SteadyStateSolution, t: f64) -> Array2<C64> {
    let mut v = sol.evaluate(t);
    let d = v.nrows();
    let phases: Vec<C64> = (0..d)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            C64::from_polar(1.0, s * sol.epsilon_l * t)
        })
        .collect();
    for i in 0..d {
        for j in 0..d {
            v[[i, j]] *= phases[i] * phases[j];
        }
    }
    v
}

fn check_stability(a: &Array2<C64>, warnings: &mut Vec<String>) -> Result<()> {
    let rep = stability_report(a)?;
    if !rep.stable {
        return Err(Error::Unstable { max_re: rep.max_re });
    }
    if rep.marginal {
        warnings.push(format!(
            "drift spectrum is marginal (largest eigenvalue real part {:.3e})",
            rep.max_re
        ));
    }
    Ok(())
}

pub(crate) fn assemble_diffusion(
    dp: &DiffusionPieces,
    k: &crate::reservoir::ReservoirKernels,
) -> [Array2<C64>; 3] {
    let mix = |x: &Array2<C64>, c: &Array2<C64>, y: &Array2<C64>| -> Array2<C64> {
        (x.dot(c) + c.dot(&y.t())).mapv(|z| z * 0.5)
    };
    let b0 = &dp.c0 + &(mix(&k.n_minus, dp.c(1, 2), &k.n_plus) + mix(&k.n_plus, dp.c(2, 1), &k.n_minus));
    let b_minus = mix(&k.m_minus, dp.c(1, 1), &k.m_minus);
    let b_plus = mix(&k.m_plus, dp.c(2, 2), &k.m_plus);
    [b0, b_minus, b_plus]
}

/// Exact steady state for the finite-bandwidth squeezed reservoir.
pub fn steady_state_full(model: &SystemModel) -> Result<SteadyStateSolution> {
    model.validate()?;
    let a = model.drift_matrix_full();
    let mut warnings = Vec::new();
    check_stability(&a, &mut warnings)?;
    let dp = diffusion_pieces(model);
    let k = steady_kernels(&a, &model.opo, model.freq.epsilon_l)?;
    let [b0, b_minus, b_plus] = assemble_diffusion(&dp, &k);
    let el = model.freq.epsilon_l;
    Ok(SteadyStateSolution {
        v0: solve_lyapunov(&a, &b0, C64::new(0.0, 0.0))?,
        v_minus: solve_lyapunov(&a, &b_minus, C64::new(0.0, 2.0 * el))?,
        v_plus: solve_lyapunov(&a, &b_plus, C64::new(0.0, -2.0 * el))?,
        epsilon_l: el,
        regime: Regime::Full,
        warnings,
    })
}

/// Steady state in the broadband (white squeezed reservoir) limit.
pub fn steady_state_broadband(model: &SystemModel) -> Result<SteadyStateSolution> {
    model.validate()?;
    let a = model.drift_matrix_full();
    let mut warnings = Vec::new();
    check_stability(&a, &mut warnings)?;
    let dp = diffusion_pieces(model);
    let bm = broadband_moments(&model.opo);
    let b0 = &dp.c0 + &(dp.c(1, 2) + dp.c(2, 1)).mapv(|z| z * bm.n_bar);
    let b_minus = dp.c(1, 1).mapv(|z| z * bm.m_bar);
    let b_plus = dp.c(2, 2).mapv(|z| z * bm.m_bar);
    let el = model.freq.epsilon_l;
    Ok(SteadyStateSolution {
        v0: solve_lyapunov(&a, &b0, C64::new(0.0, 0.0))?,
        v_minus: solve_lyapunov(&a, &b_minus, C64::new(0.0, 2.0 * el))?,
        v_plus: solve_lyapunov(&a, &b_plus, C64::new(0.0, -2.0 * el))?,
        epsilon_l: el,
        regime: Regime::Broadband,
        warnings,
    })
}

/// Steady state under the additional rotating-wave approximation.
pub fn steady_state_resonant(model: &SystemModel) -> Result<SteadyStateSolution> {
    model.validate()?;
    let a = model.drift_matrix_resonant();
    let mut warnings = Vec::new();
    check_stability(&a, &mut warnings)?;
    let dp = diffusion_pieces(model);
    let bm = broadband_moments(&model.opo);
    let kas = model.cavity.kappa_a_s();
    let mut b = dp.c0.clone();
    b[[0, 0]] = C64::new(2.0 * kas * bm.m_bar, 0.0);
    b[[0, 1]] = C64::new(2.0 * (model.cavity.kappa_a + kas * bm.n_bar), 0.0);
    b[[1, 0]] = C64::new(2.0 * kas * bm.n_bar, 0.0);
    b[[1, 1]] = C64::new(2.0 * kas * bm.m_bar, 0.0);
    let d = model.dim();
    Ok(SteadyStateSolution {
        v0: solve_lyapunov(&a, &b, C64::new(0.0, 0.0))?,
        v_minus: Array2::zeros((d, d)),
        v_plus: Array2::zeros((d, d)),
        epsilon_l: model.freq.epsilon_l,
        regime: Regime::Resonant,
        warnings,
    })
}

/// Perfect-transfer bound: the reservoir state written onto cavity and modes.
pub fn steady_state_ideal(model: &SystemModel) -> Result<SteadyStateSolution> {
    model.validate()?;
    let mut warnings = Vec::new();
    if model.modes.len() != 2 {
        warnings.push(format!(
            "ideal regime assumes two mechanical modes, model has {}",
            model.modes.len()
        ));
    }
    if model.cavity.kappa_a_prime != 0.0 || model.opo.kappa_c_prime != 0.0 {
        warnings.push("ideal regime assumes no uncontrolled losses".into());
    }
    if model.freq.epsilon_a != 0.0 {
        warnings.push("ideal regime assumes a resonant cavity (epsilon_a = 0)".into());
    }
    if model.modes.iter().any(|m| m.gamma * (2.0 * m.n_thermal + 1.0) > 0.0) {
        warnings.push("ideal regime neglects mechanical damping and thermal noise".into());
    }
    if model.modes.len() == 2 {
        let (_, deltas) = model.detunings();
        if (deltas[0] + deltas[1]).abs() > 1e-12 {
            warnings.push("ideal regime assumes opposite detunings delta_1 = -delta_2".into());
        }
        let (g1, g2) = (model.modes[0].coupling.norm(), model.modes[1].coupling.norm());
        if (g1 - g2).abs() > 1e-12 * g1.max(g2).max(1.0) {
            warnings.push("ideal regime assumes equal coupling magnitudes".into());
        }
    }
    let bm = broadband_moments(&model.opo);
    let d = model.dim();
    let mut v0 = Array2::<C64>::zeros((d, d));
    let n = C64::new(bm.n_bar, 0.0);
    let m = C64::new(bm.m_bar, 0.0);
    v0[[0, 1]] = n + 1.0;
    v0[[1, 0]] = n;
    v0[[0, 0]] = m;
    v0[[1, 1]] = m;
    for j in 0..model.modes.len() {
        let r = 2 + 2 * j;
        v0[[r, r + 1]] = n + 1.0;
        v0[[r + 1, r]] = n;
    }
    if model.modes.len() >= 2 {
        v0[[2, 4]] = -m;
        v0[[4, 2]] = -m;
        v0[[3, 5]] = -m;
        v0[[5, 3]] = -m;
    }
    Ok(SteadyStateSolution {
        v0,
        v_minus: Array2::zeros((d, d)),
        v_plus: Array2::zeros((d, d)),
        epsilon_l: model.freq.epsilon_l,
        regime: Regime::Ideal,
        warnings,
    })
}

/// Dispatches to the solver for `regime`.
pub fn steady_state(model: &SystemModel, regime: Regime) -> Result<SteadyStateSolution> {
    match regime {
        Regime::Full => steady_state_full(model),
        Regime::Broadband => steady_state_broadband(model),
        Regime::Resonant => steady_state_resonant(model),
        Regime::Ideal => steady_state_ideal(model),
    }
}
