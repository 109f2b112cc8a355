//! Physical parameters, drift matrices, and stability checks.
//!
//! Operator ordering everywhere is (a, a†, b₁, b₁†, …, b_M, b_M†), giving
//! matrices of dimension d = 2(M+1). All rates and frequencies are in units
//! of a common reference frequency.

use crate::error::{Error, Result};
use crate::{C64, IM};
use ndarray::Array2;
use ndarray_linalg::EigVals;

/// Mechanical resonator parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanicalMode {
    /// Mechanical frequency ω_j (absolute, not a detuning).
    pub omega: f64,
    /// Energy damping rate γ_j.
    pub gamma: f64,
    /// Mean thermal occupation n_{T,j} of the mechanical bath.
    pub n_thermal: f64,
    /// Linearized optomechanical coupling G_j.
    pub coupling: C64,
}

/// Optomechanical cavity decay rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Total cavity amplitude decay rate κ_a.
    pub kappa_a: f64,
    /// Uncontrolled-loss part κ_a′ of κ_a.
    pub kappa_a_prime: f64,
}

impl CavityParams {
    /// Decay rate κ_a − κ_a′ into the squeezed input channel.
    pub fn kappa_a_s(&self) -> f64 {
        self.kappa_a - self.kappa_a_prime
    }
}

/// Degenerate parametric oscillator parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpoParams {
    /// Parametric self-interaction strength χ.
    pub chi: f64,
    /// OPO cavity decay rate κ_c.
    pub kappa_c: f64,
    /// Uncontrolled OPO loss κ_c′.
    pub kappa_c_prime: f64,
}

impl OpoParams {
    /// Anti-squeezed quadrature decay rate r₊ = κ_c + χ.
    pub fn r_plus(&self) -> f64 {
        self.kappa_c + self.chi
    }

    /// Squeezed quadrature decay rate r₋ = κ_c − χ.
    pub fn r_minus(&self) -> f64 {
        self.kappa_c - self.chi
    }

    /// Decay rate κ_c − κ_c′ into the controlled output channel.
    pub fn kappa_c_s(&self) -> f64 {
        self.kappa_c - self.kappa_c_prime
    }
}

/// Detunings of the driving fields: ε_L = ω_s − ω_L and ε_a = ω_a − ω_s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyConfig {
    /// Detuning between squeezed-field carrier and pump.
    pub epsilon_l: f64,
    /// Detuning between cavity and squeezed-field carrier.
    pub epsilon_a: f64,
}

/// Complete parameter set: cavity, mechanical modes, OPO reservoir, detunings.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    /// Optomechanical cavity decay rates.
    pub cavity: CavityParams,
    /// Squeezed-light source.
    pub opo: OpoParams,
    /// Field detunings.
    pub freq: FrequencyConfig,
    /// Mechanical modes, ordered; length M ≥ 1.
    pub modes: Vec<MechanicalMode>,
}

/// Spectral stability diagnostics for a drift matrix.
#[derive(Debug, Clone, Copy)]
pub struct StabilityReport {
    /// True iff every eigenvalue has strictly negative real part.
    pub stable: bool,
    /// Largest real part over the spectrum.
    pub max_re: f64,
    /// True when some |Re λ| is below 10⁻¹²·‖A‖ and the verdict is borderline.
    pub marginal: bool,
}

impl SystemModel {
    /// Matrix dimension 2(M+1).
    pub fn dim(&self) -> usize {
        2 * (self.modes.len() + 1)
    }

    /// Checks all type invariants, returning the first violation.
    pub fn validate(&self) -> Result<()> {
        let c = &self.cavity;
        if !(0.0 <= c.kappa_a_prime && c.kappa_a_prime <= c.kappa_a) {
            return Err(Error::Config(format!(
                "kappa_a_prime must satisfy 0 <= kappa_a_prime <= kappa_a, got {} and {}",
                c.kappa_a_prime, c.kappa_a
            )));
        }
        let o = &self.opo;
        if !(0.0 <= o.chi && o.chi < o.kappa_c) {
            return Err(Error::Config(format!(
                "chi must satisfy 0 <= chi < kappa_c (below threshold), got {} and {}",
                o.chi, o.kappa_c
            )));
        }
        if !(0.0 <= o.kappa_c_prime && o.kappa_c_prime <= o.kappa_c) {
            return Err(Error::Config(format!(
                "kappa_c_prime must satisfy 0 <= kappa_c_prime <= kappa_c, got {} and {}",
                o.kappa_c_prime, o.kappa_c
            )));
        }
        if self.modes.is_empty() {
            return Err(Error::Config("at least one mechanical mode required".into()));
        }
        for (j, m) in self.modes.iter().enumerate() {
            if !(m.omega > 0.0) {
                return Err(Error::Config(format!("mode {}: omega must be > 0, got {}", j + 1, m.omega)));
            }
            if !(m.gamma >= 0.0) {
                return Err(Error::Config(format!("mode {}: gamma must be >= 0, got {}", j + 1, m.gamma)));
            }
            if !(m.n_thermal >= 0.0) {
                return Err(Error::Config(format!(
                    "mode {}: n_thermal must be >= 0, got {}",
                    j + 1,
                    m.n_thermal
                )));
            }
        }
        if !(self.freq.epsilon_l.is_finite() && self.freq.epsilon_a.is_finite()) {
            return Err(Error::Config("detunings must be finite".into()));
        }
        Ok(())
    }

    /// Cavity detuning Δ = ε_a + ε_L and mechanical detunings δ_j = ω_j − ε_L.
    pub fn detunings(&self) -> (f64, Vec<f64>) {
        let delta = self.freq.epsilon_a + self.freq.epsilon_l;
        let deltas = self.modes.iter().map(|m| m.omega - self.freq.epsilon_l).collect();
        (delta, deltas)
    }

    /// Drift matrix of the full linearized dynamics in the laser frame.
    pub fn drift_matrix_full(&self) -> Array2<C64> {
        let d = self.dim();
        let (delta, _) = self.detunings();
        let ka = self.cavity.kappa_a;
        let mut a = Array2::<C64>::zeros((d, d));
        a[[0, 0]] = C64::new(-ka, -delta);
        a[[1, 1]] = C64::new(-ka, delta);
        for (j, m) in self.modes.iter().enumerate() {
            let g = m.coupling;
            let r = 2 + 2 * j;
            a[[0, r]] = IM * g;
            a[[0, r + 1]] = IM * g;
            a[[1, r]] = -IM * g.conj();
            a[[1, r + 1]] = -IM * g.conj();
            a[[r, r]] = C64::new(-m.gamma / 2.0, -m.omega);
            a[[r + 1, r + 1]] = C64::new(-m.gamma / 2.0, m.omega);
            a[[r, 0]] = IM * g.conj();
            a[[r, 1]] = IM * g;
            a[[r + 1, 0]] = -IM * g.conj();
            a[[r + 1, 1]] = -IM * g;
        }
        a
    }

    /// Drift matrix keeping only resonant (co-rotating) processes.
    pub fn drift_matrix_resonant(&self) -> Array2<C64> {
        let d = self.dim();
        let (_, deltas) = self.detunings();
        let ka = self.cavity.kappa_a;
        let ea = self.freq.epsilon_a;
        let mut a = Array2::<C64>::zeros((d, d));
        a[[0, 0]] = C64::new(-ka, -ea);
        a[[1, 1]] = C64::new(-ka, ea);
        for (j, m) in self.modes.iter().enumerate() {
            let g = m.coupling;
            let r = 2 + 2 * j;
            a[[0, r]] = IM * g;
            a[[1, r + 1]] = -IM * g.conj();
            a[[r, r]] = C64::new(-m.gamma / 2.0, -deltas[j]);
            a[[r + 1, r + 1]] = C64::new(-m.gamma / 2.0, deltas[j]);
            a[[r, 0]] = IM * g.conj();
            a[[r + 1, 1]] = -IM * g;
        }
        a
    }
}

/// Spectral stability: true iff max Re(λ) < 0 strictly.
pub fn is_stable_eigen(a: &Array2<C64>) -> Result<bool> {
    Ok(stability_report(a)?.stable)
}

/// Eigenvalue stability check with a marginality flag.
pub fn stability_report(a: &Array2<C64>) -> Result<StabilityReport> {
    let eigs = a
        .eigvals()
        .map_err(|e| Error::Eigensolver(e.to_string()))?;
    let max_re = eigs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let min_abs_re = eigs.iter().map(|l| l.re.abs()).fold(f64::INFINITY, f64::min);
    Ok(StabilityReport {
        stable: max_re < 0.0,
        max_re,
        marginal: min_abs_re < 1e-12 * norm.max(1e-300),
    })
}

/// Closed-form stability bound Δ² + κ_a² − 2Δ Σ G_j²/ω_j > 0 for Δ > 0.
///
/// Stability implies the bound holds; the converse fails once a coupling
/// becomes comparable to its mechanical frequency, so use [`is_stable_eigen`]
/// for a definitive answer.
pub fn is_stable_routh_hurwitz(model: &SystemModel) -> Result<bool> {
    let (delta, _) = model.detunings();
    if delta <= 0.0 {
        return Err(Error::CriterionNotApplicable(format!(
            "requires Delta > 0, got Delta = {delta}; use is_stable_eigen"
        )));
    }
    let ka = model.cavity.kappa_a;
    let s: f64 = model.modes.iter().map(|m| m.coupling.norm_sqr() / m.omega).sum();
    Ok(delta * delta + ka * ka - 2.0 * delta * s > 0.0)
}

/// Mean thermal occupation from the Bose factor at linear frequency `frequency_hz`.
pub fn bose_occupation(frequency_hz: f64, temperature_k: f64) -> f64 {
    const H: f64 = 6.626_070_15e-34;
    const KB: f64 = 1.380_649e-23;
    if temperature_k <= 0.0 {
        return 0.0;
    }
    1.0 / (H * frequency_hz / (KB * temperature_k)).exp_m1()
}
