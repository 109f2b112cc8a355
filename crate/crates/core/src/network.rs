//! Star networks of mechanical pairs around one cavity and their pairwise
//! entanglement structure.

use crate::error::{Error, Result};
use crate::measures::{logarithmic_negativity, to_quadrature_cm};
use crate::model::{MechanicalMode, SystemModel};
use crate::steadystate::SteadyStateSolution;
use crate::C64;
use ndarray::Array2;

/// Star model with `n_pairs` mechanical pairs at ω = ε_L ± (1 + 3(j−1))δ.
///
/// Cavity, OPO, detunings, damping, and thermal occupation are taken from
/// `base`; `couplings` lists G for all 2·n_pairs modes in order.
pub fn build_star_model(
    n_pairs: usize,
    delta_unit: f64,
    couplings: &[C64],
    base: &SystemModel,
) -> Result<SystemModel> {
    if n_pairs == 0 {
        return Err(Error::Config("network needs at least one pair".into()));
    }
    if couplings.len() != 2 * n_pairs {
        return Err(Error::Config(format!(
            "expected {} couplings for {} pairs, got {}",
            2 * n_pairs,
            n_pairs,
            couplings.len()
        )));
    }
    if !(delta_unit > 0.0) {
        return Err(Error::Config(format!("delta_unit must be > 0, got {delta_unit}")));
    }
    let template = base
        .modes
        .first()
        .ok_or_else(|| Error::Config("base model has no mechanical mode".into()))?;
    let el = base.freq.epsilon_l;
    let mut modes = Vec::with_capacity(2 * n_pairs);
    for j in 0..n_pairs {
        let delta = (1.0 + 3.0 * j as f64) * delta_unit;
        for sign in [1.0, -1.0] {
            modes.push(MechanicalMode {
                omega: el + sign * delta,
                gamma: template.gamma,
                n_thermal: template.n_thermal,
                coupling: couplings[modes.len()],
            });
        }
    }
    let model = SystemModel { modes, ..base.clone() };
    model.validate()?;
    Ok(model)
}

/// Logarithmic negativity for every mechanical pair, as a symmetric matrix.
pub fn pairwise_entanglement_map(sol: &SteadyStateSolution, t: f64) -> Result<Array2<f64>> {
    let n = sol.dim() / 2 - 1;
    if n < 2 {
        return Err(Error::Config("pairwise map needs at least two mechanical modes".into()));
    }
    let v = sol.evaluate(t);
    let mut map = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        for k in (j + 1)..n {
            let q = to_quadrature_cm(&v, &[j + 1, k + 1])?;
            let e_n = logarithmic_negativity(&q)?;
            map[[j, k]] = e_n;
            map[[k, j]] = e_n;
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steadystate::tests::fig2b_model;
    use crate::steadystate::steady_state_full;

    #[test]
    fn single_pair_star_reproduces_the_two_mode_system() {
        let base = fig2b_model();
        let g = C64::new(0.03, 0.0);
        let star = build_star_model(1, 0.01, &[g, g], &base).unwrap();
        assert_eq!(star, base);
        let sol = steady_state_full(&star).unwrap();
        let map = pairwise_entanglement_map(&sol, 0.0).unwrap();
        assert!((map[[0, 1]] - 1.8968616084827725).abs() < 1e-8);
        assert_eq!(map[[0, 1]], map[[1, 0]]);
        assert_eq!(map[[0, 0]], 0.0);
    }

    #[test]
    fn detunings_follow_the_star_pattern() {
        let base = fig2b_model();
        let g = C64::new(0.03, 0.0);
        let star = build_star_model(3, 0.01, &vec![g; 6], &base).unwrap();
        let omegas: Vec<f64> = star.modes.iter().map(|m| m.omega).collect();
        let want = [1.01, 0.99, 1.04, 0.96, 1.07, 0.93];
        for (got, w) in omegas.iter().zip(want) {
            assert!((got - w).abs() < 1e-12);
        }
    }

    #[test]
    fn coupling_count_is_checked() {
        let base = fig2b_model();
        let g = C64::new(0.03, 0.0);
        assert!(build_star_model(2, 0.01, &[g, g], &base).is_err());
        assert!(build_star_model(0, 0.01, &[], &base).is_err());
    }

    #[test]
    fn decoupled_mode_shows_no_entanglement() {
        let base = fig2b_model();
        let g = C64::new(0.03, 0.0);
        let zero = C64::new(0.0, 0.0);
        let star = build_star_model(2, 0.01, &[g, g, zero, C64::new(0.015, 0.0)], &base).unwrap();
        let sol = steady_state_full(&star).unwrap();
        let map = pairwise_entanglement_map(&sol, 0.0).unwrap();
        for k in 0..4 {
            assert!(map[[2, k]] < 1e-12, "mode 2 vs {k}");
        }
        assert!(map[[0, 1]] > 0.5);
    }

    #[test]
    fn relabeling_modes_permutes_the_map() {
        let base = fig2b_model();
        let couplings = [
            C64::new(0.03, 0.0),
            C64::new(0.025, 0.0),
            C64::new(0.02, 0.0),
            C64::new(0.015, 0.0),
        ];
        let star = build_star_model(2, 0.01, &couplings, &base).unwrap();
        let mut flipped = star.clone();
        flipped.modes.reverse();
        let map = pairwise_entanglement_map(&steady_state_full(&star).unwrap(), 0.0).unwrap();
        let map_rev = pairwise_entanglement_map(&steady_state_full(&flipped).unwrap(), 0.0).unwrap();
        for j in 0..4 {
            for k in 0..4 {
                assert!((map[[j, k]] - map_rev[[3 - j, 3 - k]]).abs() < 1e-9);
            }
        }
    }
}
