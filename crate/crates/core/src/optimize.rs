//! Parameter sweeps and derivative-free maximization of entanglement and
//! squeezing over bounded parameter boxes.

use crate::error::{Error, Result};
use crate::measures::{entanglement_report, negativity_exponent, optimal_phases, to_quadrature_cm};
use crate::model::SystemModel;
use crate::steadystate::{steady_state, Regime};
use crate::C64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Model or measurement parameter that sweeps and optimizers vary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamAxis {
    /// Squeezed-carrier detuning ε_L.
    EpsilonL,
    /// Cavity detuning ε_a.
    EpsilonA,
    /// OPO bandwidth r₊, holding the ratio r₋/r₊ fixed.
    RPlus {
        /// Fixed ratio r₋/r₊ ∈ (0, 1].
        ratio: f64,
    },
    /// Collective coupling G₊ = (G₁ + G₂)/2, holding G₋.
    GPlus,
    /// Coupling imbalance G₋ = (G₁ − G₂)/2, holding G₊.
    GMinus,
    /// Cavity decay rate κ_a.
    KappaA,
    /// Uncontrolled cavity loss κ_a′.
    KappaAPrime,
    /// Uncontrolled OPO loss κ_c′.
    KappaCPrime,
    /// Mechanical damping γ, applied to every mode.
    Gamma,
    /// Thermal occupation n_T, applied to every mode.
    NThermal,
    /// Mechanical splitting ω₋ = (ω₁ − ω₂)/2, holding ω₊.
    OmegaMinus,
    /// Measurement time t.
    Time,
}

impl ParamAxis {
    /// Column label used in output files.
    pub fn label(&self) -> &'static str {
        match self {
            ParamAxis::EpsilonL => "epsilon_l",
            ParamAxis::EpsilonA => "epsilon_a",
            ParamAxis::RPlus { .. } => "r_plus",
            ParamAxis::GPlus => "g_plus",
            ParamAxis::GMinus => "g_minus",
            ParamAxis::KappaA => "kappa_a",
            ParamAxis::KappaAPrime => "kappa_a_prime",
            ParamAxis::KappaCPrime => "kappa_c_prime",
            ParamAxis::Gamma => "gamma",
            ParamAxis::NThermal => "n_thermal",
            ParamAxis::OmegaMinus => "omega_minus",
            ParamAxis::Time => "time",
        }
    }

    fn two_mode_couplings(model: &SystemModel) -> Result<(C64, C64)> {
        if model.modes.len() != 2 {
            return Err(Error::Config(format!(
                "axis needs exactly two mechanical modes, model has {}",
                model.modes.len()
            )));
        }
        let g1 = model.modes[0].coupling;
        let g2 = model.modes[1].coupling;
        Ok(((g1 + g2) / 2.0, (g1 - g2) / 2.0))
    }

    /// Applies `value` along this axis to a copy of the model and time.
    pub fn apply(&self, model: &SystemModel, t: f64, value: f64) -> Result<(SystemModel, f64)> {
        let mut m = model.clone();
        match *self {
            ParamAxis::EpsilonL => m.freq.epsilon_l = value,
            ParamAxis::EpsilonA => m.freq.epsilon_a = value,
            ParamAxis::RPlus { ratio } => {
                if !(ratio > 0.0 && ratio <= 1.0) {
                    return Err(Error::Config(format!("r_minus/r_plus ratio must be in (0, 1], got {ratio}")));
                }
                let r_minus = ratio * value;
                m.opo.kappa_c = (value + r_minus) / 2.0;
                m.opo.chi = (value - r_minus) / 2.0;
            }
            ParamAxis::GPlus => {
                let (_, gm) = Self::two_mode_couplings(&m)?;
                m.modes[0].coupling = gm + value;
                m.modes[1].coupling = -gm + value;
            }
            ParamAxis::GMinus => {
                let (gp, _) = Self::two_mode_couplings(&m)?;
                m.modes[0].coupling = gp + value;
                m.modes[1].coupling = gp - value;
            }
            ParamAxis::KappaA => m.cavity.kappa_a = value,
            ParamAxis::KappaAPrime => m.cavity.kappa_a_prime = value,
            ParamAxis::KappaCPrime => m.opo.kappa_c_prime = value,
            ParamAxis::Gamma => {
                for mode in &mut m.modes {
                    mode.gamma = value;
                }
            }
            ParamAxis::NThermal => {
                for mode in &mut m.modes {
                    mode.n_thermal = value;
                }
            }
            ParamAxis::OmegaMinus => {
                if m.modes.len() != 2 {
                    return Err(Error::Config(format!(
                        "omega_minus needs exactly two mechanical modes, model has {}",
                        m.modes.len()
                    )));
                }
                let omega_plus = (m.modes[0].omega + m.modes[1].omega) / 2.0;
                m.modes[0].omega = omega_plus + value;
                m.modes[1].omega = omega_plus - value;
            }
            ParamAxis::Time => return Ok((m, value)),
        }
        Ok((m, t))
    }

    /// Reads this axis's current value from the model and time.
    pub fn current(&self, model: &SystemModel, t: f64) -> Result<f64> {
        let first = || {
            model
                .modes
                .first()
                .ok_or_else(|| Error::Config("model has no mechanical modes".into()))
        };
        Ok(match *self {
            ParamAxis::EpsilonL => model.freq.epsilon_l,
            ParamAxis::EpsilonA => model.freq.epsilon_a,
            ParamAxis::RPlus { .. } => model.opo.r_plus(),
            ParamAxis::GPlus => Self::two_mode_couplings(model)?.0.re,
            ParamAxis::GMinus => Self::two_mode_couplings(model)?.1.re,
            ParamAxis::KappaA => model.cavity.kappa_a,
            ParamAxis::KappaAPrime => model.cavity.kappa_a_prime,
            ParamAxis::KappaCPrime => model.opo.kappa_c_prime,
            ParamAxis::Gamma => first()?.gamma,
            ParamAxis::NThermal => first()?.n_thermal,
            ParamAxis::OmegaMinus => {
                if model.modes.len() != 2 {
                    return Err(Error::Config(format!(
                        "omega_minus needs exactly two mechanical modes, model has {}",
                        model.modes.len()
                    )));
                }
                (model.modes[0].omega - model.modes[1].omega) / 2.0
            }
            ParamAxis::Time => t,
        })
    }
}

pub(crate) fn grid_values(min: f64, max: f64, count: usize, log: bool) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Config("grid needs at least one point".into()));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    if max < min {
        return Err(Error::Config(format!("grid max {max} is below min {min}")));
    }
    if log {
        if min <= 0.0 {
            return Err(Error::Config(format!("logarithmic grid needs min > 0, got {min}")));
        }
        let (a, b) = (min.ln(), max.ln());
        Ok((0..count)
            .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
            .collect())
    } else {
        Ok((0..count)
            .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
            .collect())
    }
}

/// One axis swept over a linear or logarithmic grid.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Swept parameter.
    pub axis: ParamAxis,
    /// First grid point.
    pub min: f64,
    /// Last grid point.
    pub max: f64,
    /// Number of grid points.
    pub count: usize,
    /// Logarithmic spacing when true.
    pub log: bool,
}

impl SweepSpec {
    /// Grid points of this sweep.
    pub fn values(&self) -> Result<Vec<f64>> {
        grid_values(self.min, self.max, self.count, self.log)
    }
}

/// Measures at one sweep point; failures are recorded in `error`.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Parameter value of this point.
    pub value: f64,
    /// Logarithmic negativity of the pair.
    pub e_n: f64,
    /// Minimal collective variance.
    pub var_min: f64,
    /// Conjugate collective variance.
    pub var_orth: f64,
    /// Optimal phase θ₁.
    pub theta1: f64,
    /// Optimal phase θ₂.
    pub theta2: f64,
    /// Drift stability at this point.
    pub stable: bool,
    /// Failure message if the point could not be evaluated.
    pub error: Option<String>,
}

fn evaluate_point(
    model: &SystemModel,
    regime: Regime,
    pair: (usize, usize),
    t: f64,
    axis: &ParamAxis,
    value: f64,
) -> SweepRow {
    let outcome = (|| {
        let (m, tv) = axis.apply(model, t, value)?;
        let sol = steady_state(&m, regime)?;
        entanglement_report(&m, &sol, pair, tv)
    })();
    match outcome {
        Ok(rep) => SweepRow {
            value,
            e_n: rep.e_n,
            var_min: rep.var_min,
            var_orth: rep.var_orth,
            theta1: rep.theta1,
            theta2: rep.theta2,
            stable: rep.stable,
            error: None,
        },
        Err(e) => SweepRow {
            value,
            e_n: f64::NAN,
            var_min: f64::NAN,
            var_orth: f64::NAN,
            theta1: f64::NAN,
            theta2: f64::NAN,
            stable: false,
            error: Some(e.to_string()),
        },
    }
}

/// Evaluates the pair measures along a parameter grid, in parallel.
pub fn sweep(
    model: &SystemModel,
    regime: Regime,
    pair: (usize, usize),
    t: f64,
    spec: &SweepSpec,
) -> Result<Vec<SweepRow>> {
    let values = spec.values()?;
    Ok(values
        .par_iter()
        .map(|&v| evaluate_point(model, regime, pair, t, &spec.axis, v))
        .collect())
}

/// Quantity maximized by the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Pair logarithmic negativity, ranked during the search by the unclamped
    /// exponent −ln(2ν̃) so separable regions still slope toward entanglement.
    LogNegativity,
    /// Phase-optimized two-mode squeezing −10·log₁₀(var_min) in dB.
    SqueezingDb,
}

/// One bounded search direction.
#[derive(Debug, Clone, Copy)]
pub struct BoundedParam {
    /// Varied parameter.
    pub axis: ParamAxis,
    /// Lower bound.
    pub lo: f64,
    /// Upper bound.
    pub hi: f64,
}

/// Multistart Nelder–Mead setup.
#[derive(Debug, Clone)]
pub struct OptimizationSpec {
    /// Search box, one entry per dimension.
    pub params: Vec<BoundedParam>,
    /// Maximized quantity.
    pub objective: Objective,
    /// Steady-state regime the objective is evaluated in.
    pub regime: Regime,
    /// Mode pair the measures refer to.
    pub pair: (usize, usize),
    /// Measurement time.
    pub time: f64,
    /// Per-dimension lattice count for extra seeding; 0 disables.
    pub lattice: usize,
    /// Iteration cap per start.
    pub max_iter: usize,
}

/// Result of a single Nelder–Mead start.
#[derive(Debug, Clone)]
pub struct StartTrace {
    /// Starting point.
    pub start: Vec<f64>,
    /// Best point reached from this start.
    pub params: Vec<f64>,
    /// Search objective at `params` (unclamped exponent for the negativity).
    pub value: f64,
    /// Iterations used.
    pub iterations: usize,
}

/// Best point over all starts, with per-start traces.
#[derive(Debug, Clone)]
pub struct OptimResult {
    /// Coordinates of the best point, ordered as in the spec.
    pub params: Vec<f64>,
    /// Objective value at the best point.
    pub value: f64,
    /// Per-start outcomes in deterministic order.
    pub trace: Vec<StartTrace>,
}

fn objective_value(model: &SystemModel, spec: &OptimizationSpec, x: &[f64]) -> f64 {
    let mut m = model.clone();
    let mut t = spec.time;
    for (bp, &v) in spec.params.iter().zip(x) {
        if !(bp.lo..=bp.hi).contains(&v) {
            return f64::NEG_INFINITY;
        }
        match bp.axis.apply(&m, t, v) {
            Ok((next, tv)) => {
                m = next;
                t = tv;
            }
            Err(_) => return f64::NEG_INFINITY,
        }
    }
    let value = (|| -> Result<f64> {
        let sol = steady_state(&m, spec.regime)?;
        match spec.objective {
            Objective::LogNegativity => {
                let q = to_quadrature_cm(&sol.evaluate(t), &[spec.pair.0, spec.pair.1])?;
                negativity_exponent(&q)
            }
            Objective::SqueezingDb => {
                let (_, _, var_min) = optimal_phases(&sol, spec.pair, t)?;
                if var_min <= 0.0 {
                    return Err(Error::NonPhysical(format!("nonpositive variance {var_min}")));
                }
                Ok(-10.0 * var_min.log10())
            }
        }
    })()
    .unwrap_or(f64::NEG_INFINITY);
    if value.is_nan() {
        f64::NEG_INFINITY
    } else {
        value
    }
}

fn clamp_point(spec: &OptimizationSpec, x: &mut [f64]) {
    for (bp, v) in spec.params.iter().zip(x.iter_mut()) {
        *v = v.clamp(bp.lo, bp.hi);
    }
}

fn nelder_mead(model: &SystemModel, spec: &OptimizationSpec, start: &[f64]) -> StartTrace {
    let k = spec.params.len();
    let f = |x: &[f64]| -objective_value(model, spec, x);
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    let mut base = start.to_vec();
    clamp_point(spec, &mut base);
    simplex.push(base.clone());
    for i in 0..k {
        let mut v = base.clone();
        let step = 0.1 * (spec.params[i].hi - spec.params[i].lo);
        v[i] = if v[i] + step <= spec.params[i].hi { v[i] + step } else { v[i] - step };
        clamp_point(spec, &mut v);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
    let mut iterations = 0;
    for _ in 0..spec.max_iter {
        iterations += 1;
        let mut order: Vec<usize> = (0..=k).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let simplex_sorted: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let values_sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = simplex_sorted;
        values = values_sorted;
        let spread = values[k] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|x| {
                x.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.is_finite() && spread < 1e-12 * (1.0 + values[0].abs()) && diameter < 1e-9 {
            break;
        }
        let centroid: Vec<f64> = (0..k)
            .map(|d| simplex[..k].iter().map(|x| x[d]).sum::<f64>() / k as f64)
            .collect();
        let combine = |coef: f64| -> Vec<f64> {
            let mut x: Vec<f64> = centroid
                .iter()
                .zip(&simplex[k])
                .map(|(c, w)| c + coef * (c - w))
                .collect();
            clamp_point(spec, &mut x);
            x
        };
        let xr = combine(1.0);
        let fr = f(&xr);
        if fr < values[0] {
            let xe = combine(2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[k] = xe;
                values[k] = fe;
            } else {
                simplex[k] = xr;
                values[k] = fr;
            }
        } else if fr < values[k - 1] {
            simplex[k] = xr;
            values[k] = fr;
        } else {
            let (xc, fc) = if fr < values[k] {
                let xc = combine(0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let mut xc: Vec<f64> = centroid
                    .iter()
                    .zip(&simplex[k])
                    .map(|(c, w)| c + 0.5 * (w - c))
                    .collect();
                clamp_point(spec, &mut xc);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < values[k].min(fr) {
                simplex[k] = xc;
                values[k] = fc;
            } else {
                for i in 1..=k {
                    let shrunk: Vec<f64> = simplex[i]
                        .iter()
                        .zip(&simplex[0])
                        .map(|(x, b)| b + 0.5 * (x - b))
                        .collect();
                    simplex[i] = shrunk;
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..=k).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    StartTrace {
        start: base,
        params: simplex[best].clone(),
        value: -values[best],
        iterations,
    }
}

/// Maximizes the objective with deterministic multistart Nelder–Mead.
///
/// Starts from the model's own parameter values (so the result never loses to
/// the seed point), the box center, shuffled corners, and optionally the best
/// lattice points.
pub fn maximize_en(model: &SystemModel, spec: &OptimizationSpec) -> Result<OptimResult> {
    let k = spec.params.len();
    if k == 0 {
        return Err(Error::Config("optimization needs at least one parameter".into()));
    }
    for bp in &spec.params {
        if !(bp.lo <= bp.hi) || !bp.lo.is_finite() || !bp.hi.is_finite() {
            return Err(Error::Config(format!(
                "invalid bounds [{}, {}] for {}",
                bp.lo,
                bp.hi,
                bp.axis.label()
            )));
        }
    }
    let seed: Vec<f64> = spec
        .params
        .iter()
        .map(|b| b.axis.current(model, spec.time).map(|v| v.clamp(b.lo, b.hi)))
        .collect::<Result<_>>()?;
    let center: Vec<f64> = spec.params.iter().map(|b| (b.lo + b.hi) / 2.0).collect();
    let mut corners: Vec<Vec<f64>> = Vec::new();
    if k <= 16 {
        for mask in 0..(1usize << k) {
            corners.push(
                spec.params
                    .iter()
                    .enumerate()
                    .map(|(i, b)| if mask >> i & 1 == 0 { b.lo } else { b.hi })
                    .collect(),
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    corners.shuffle(&mut rng);
    let mut starts = vec![seed, center];
    starts.extend(corners.into_iter().take(7));
    if spec.lattice > 0 {
        let axes: Vec<Vec<f64>> = spec
            .params
            .iter()
            .map(|b| grid_values(b.lo, b.hi, spec.lattice, false))
            .collect::<Result<_>>()?;
        let total: usize = axes.iter().map(|a| a.len()).product();
        let points: Vec<Vec<f64>> = (0..total)
            .map(|mut idx| {
                axes.iter()
                    .map(|a| {
                        let v = a[idx % a.len()];
                        idx /= a.len();
                        v
                    })
                    .collect()
            })
            .collect();
        let mut scored: Vec<(usize, f64)> = points
            .par_iter()
            .map(|p| objective_value(model, spec, p))
            .collect::<Vec<f64>>()
            .into_iter()
            .enumerate()
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        for (idx, value) in scored.into_iter().take(3) {
            if value > f64::NEG_INFINITY {
                starts.push(points[idx].clone());
            }
        }
    }
    let traces: Vec<StartTrace> = starts
        .par_iter()
        .map(|s| nelder_mead(model, spec, s))
        .collect();
    let mut best = 0;
    for (i, tr) in traces.iter().enumerate() {
        if tr.value > traces[best].value {
            best = i;
        }
    }
    if !traces[best].value.is_finite() {
        return Err(Error::NoFeasiblePoint);
    }
    let value = match spec.objective {
        Objective::LogNegativity => traces[best].value.max(0.0),
        Objective::SqueezingDb => traces[best].value,
    };
    Ok(OptimResult {
        params: traces[best].params.clone(),
        value,
        trace: traces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steadystate::tests::fig2b_model;

    #[test]
    fn grids_are_spaced_as_requested() {
        let lin = grid_values(0.0, 1.0, 5, false).unwrap();
        assert_eq!(lin, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let lg = grid_values(1e-2, 1e2, 5, true).unwrap();
        for (got, want) in lg.iter().zip([1e-2, 1e-1, 1.0, 1e1, 1e2]) {
            assert!((got / want - 1.0).abs() < 1e-12);
        }
        assert!(grid_values(-1.0, 1.0, 3, true).is_err());
        assert!(grid_values(0.0, 1.0, 0, false).is_err());
        assert_eq!(grid_values(0.3, 0.9, 1, false).unwrap(), vec![0.3]);
    }

    #[test]
    fn axis_application_semantics() {
        let m = fig2b_model();
        let (m2, _) = ParamAxis::RPlus { ratio: 1.0 / 3.0 }.apply(&m, 0.0, 0.9).unwrap();
        assert!((m2.opo.r_plus() - 0.9).abs() < 1e-12);
        assert!((m2.opo.r_minus() / m2.opo.r_plus() - 1.0 / 3.0).abs() < 1e-12);

        let (m3, _) = ParamAxis::GPlus.apply(&m, 0.0, 0.05).unwrap();
        assert!((m3.modes[0].coupling.re - 0.05).abs() < 1e-15);
        assert!((m3.modes[1].coupling.re - 0.05).abs() < 1e-15);
        let (m4, _) = ParamAxis::GMinus.apply(&m3, 0.0, 0.01).unwrap();
        assert!((m4.modes[0].coupling.re - 0.06).abs() < 1e-15);
        assert!((m4.modes[1].coupling.re - 0.04).abs() < 1e-15);

        let (m5, _) = ParamAxis::OmegaMinus.apply(&m, 0.0, 0.03).unwrap();
        assert!((m5.modes[0].omega - 1.03).abs() < 1e-12);
        assert!((m5.modes[1].omega - 0.97).abs() < 1e-12);

        let (m6, t6) = ParamAxis::Time.apply(&m, 0.0, 1.7).unwrap();
        assert_eq!(m6, m);
        assert_eq!(t6, 1.7);

        let mut single = m.clone();
        single.modes.truncate(1);
        assert!(ParamAxis::GPlus.apply(&single, 0.0, 0.05).is_err());
        assert!(ParamAxis::OmegaMinus.apply(&single, 0.0, 0.01).is_err());
    }

    #[test]
    fn axis_reads_back_current_values() {
        let m = fig2b_model();
        assert!((ParamAxis::RPlus { ratio: 1.0 / 3.0 }.current(&m, 0.0).unwrap() - 1.4).abs() < 1e-12);
        assert!((ParamAxis::GPlus.current(&m, 0.0).unwrap() - 0.03).abs() < 1e-15);
        assert!(ParamAxis::GMinus.current(&m, 0.0).unwrap().abs() < 1e-15);
        assert!((ParamAxis::OmegaMinus.current(&m, 0.0).unwrap() - 0.01).abs() < 1e-12);
        assert_eq!(ParamAxis::Time.current(&m, 1.7).unwrap(), 1.7);
        for axis in [ParamAxis::EpsilonL, ParamAxis::KappaA, ParamAxis::Gamma, ParamAxis::NThermal] {
            let v = axis.current(&m, 0.0).unwrap();
            let (same, _) = axis.apply(&m, 0.0, v).unwrap();
            assert_eq!(same, m);
        }
    }

    #[test]
    fn sweep_recovers_the_reference_point() {
        let spec = SweepSpec { axis: ParamAxis::OmegaMinus, min: 0.0, max: 0.09, count: 10, log: false };
        let rows = sweep(&fig2b_model(), Regime::Full, (1, 2), 0.0, &spec).unwrap();
        assert_eq!(rows.len(), 10);
        assert!((rows[1].value - 0.01).abs() < 1e-15);
        assert!((rows[1].e_n - 1.8968616084827725).abs() < 1e-8);
        assert!(rows[1].error.is_none() && rows[1].stable);
        assert!(rows[0].e_n < 1e-6);
    }

    #[test]
    fn sweep_records_failures_per_point() {
        let spec = SweepSpec { axis: ParamAxis::KappaCPrime, min: 0.5, max: 2.0, count: 4, log: false };
        let rows = sweep(&fig2b_model(), Regime::Full, (1, 2), 0.0, &spec).unwrap();
        assert!(rows[0].error.is_none());
        for row in &rows[1..] {
            let msg = row.error.as_ref().expect("point beyond threshold must fail");
            assert!(msg.contains("kappa_c_prime"));
            assert!(row.e_n.is_nan());
        }
    }

    #[test]
    fn thermal_occupation_degrades_entanglement_monotonically() {
        let spec = SweepSpec { axis: ParamAxis::NThermal, min: 0.0, max: 30.0, count: 4, log: false };
        let rows = sweep(&fig2b_model(), Regime::Full, (1, 2), 0.0, &spec).unwrap();
        for pair in rows.windows(2) {
            assert!(pair[1].e_n < pair[0].e_n);
        }
    }

    fn one_axis_spec(axis: ParamAxis, lo: f64, hi: f64, lattice: usize) -> OptimizationSpec {
        OptimizationSpec {
            params: vec![BoundedParam { axis, lo, hi }],
            objective: Objective::LogNegativity,
            regime: Regime::Full,
            pair: (1, 2),
            time: 0.0,
            lattice,
            max_iter: 150,
        }
    }

    #[test]
    fn optimizer_matches_a_dense_grid_in_one_dimension() {
        let m = fig2b_model();
        let spec = one_axis_spec(ParamAxis::EpsilonA, -0.2, 0.2, 0);
        let res = maximize_en(&m, &spec).unwrap();
        let grid_best = grid_values(-0.2, 0.2, 41, false)
            .unwrap()
            .into_iter()
            .map(|v| objective_value(&m, &spec, &[v]))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(res.value >= grid_best - 1e-6);
        assert!(!res.trace.is_empty());
    }

    #[test]
    fn boundary_optimum_is_never_lost() {
        let m = fig2b_model();
        let spec = one_axis_spec(ParamAxis::NThermal, 5.0, 30.0, 0);
        let res = maximize_en(&m, &spec).unwrap();
        let at_corner = objective_value(&m, &spec, &[5.0]);
        assert!(res.value >= at_corner - 1e-12);
        assert!((res.params[0] - 5.0).abs() < 1e-6);
    }

    #[test]
    fn optimizer_is_deterministic() {
        let m = fig2b_model();
        let mut spec = one_axis_spec(ParamAxis::EpsilonA, -0.1, 0.1, 3);
        spec.max_iter = 60;
        let a = maximize_en(&m, &spec).unwrap();
        let b = maximize_en(&m, &spec).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.value, b.value);
        assert_eq!(a.trace.len(), b.trace.len());
    }

    #[test]
    fn optimizer_never_loses_to_the_seed_model() {
        let m = fig2b_model();
        let spec = one_axis_spec(ParamAxis::EpsilonA, -0.2, 0.2, 0);
        let res = maximize_en(&m, &spec).unwrap();
        assert!((res.trace[0].start[0] - m.freq.epsilon_a).abs() < 1e-15);
        let at_seed = objective_value(&m, &spec, &[m.freq.epsilon_a]);
        assert!(res.value >= at_seed - 1e-12);
    }

    #[test]
    fn infeasible_box_is_reported() {
        let m = fig2b_model();
        let spec = one_axis_spec(ParamAxis::KappaCPrime, 1.5, 2.0, 0);
        assert!(matches!(maximize_en(&m, &spec), Err(Error::NoFeasiblePoint)));
    }

    #[test]
    fn squeezing_objective_matches_reported_variance() {
        let m = fig2b_model();
        let mut spec = one_axis_spec(ParamAxis::Time, 0.0, std::f64::consts::PI, 0);
        spec.objective = Objective::SqueezingDb;
        spec.max_iter = 80;
        let res = maximize_en(&m, &spec).unwrap();
        let sol = crate::steadystate::steady_state_full(&m).unwrap();
        let (_, _, var_min) = optimal_phases(&sol, (1, 2), res.params[0]).unwrap();
        assert!((res.value - (-10.0 * var_min.log10())).abs() < 1e-9);
        assert!(res.value > 0.0);
    }
}
