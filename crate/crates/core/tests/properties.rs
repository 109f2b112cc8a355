//! Randomized invariants of the solver stack plus fixed consistency checks
//! that tie the approximation regimes together.

use ndarray::Array2;
use optomech::measures::{logarithmic_negativity, to_quadrature_cm};
use optomech::model::{is_stable_eigen, is_stable_routh_hurwitz, stability_report, CavityParams, FrequencyConfig, MechanicalMode, OpoParams};
use optomech::lyapunov::solve_lyapunov;
use optomech::reservoir::{broadband_moments, squeezing_spectrum};
use optomech::steadystate::{diffusion_pieces, frame_transform, steady_state, steady_state_full, Regime};
use optomech::{SystemModel, C64};
use proptest::prelude::*;

fn frob(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn commutator_defect(v: &Array2<C64>) -> f64 {
    let mut c = v - &v.t();
    for k in 0..v.nrows() / 2 {
        c[[2 * k, 2 * k + 1]] -= 1.0;
        c[[2 * k + 1, 2 * k]] += 1.0;
    }
    frob(&c)
}

#[allow(clippy::too_many_arguments)]
fn build_model(
    kc: f64,
    chi_frac: f64,
    kcp_frac: f64,
    ka: f64,
    kap_frac: f64,
    el: f64,
    ea: f64,
    delta: f64,
    gamma: f64,
    nt: f64,
    g1: f64,
    g2: f64,
) -> SystemModel {
    SystemModel {
        cavity: CavityParams { kappa_a: ka, kappa_a_prime: kap_frac * ka },
        opo: OpoParams { chi: chi_frac * kc, kappa_c: kc, kappa_c_prime: kcp_frac * kc },
        freq: FrequencyConfig { epsilon_l: el, epsilon_a: ea },
        modes: vec![
            MechanicalMode { omega: el + delta, gamma, n_thermal: nt, coupling: C64::new(g1, 0.0) },
            MechanicalMode { omega: el - delta, gamma, n_thermal: nt, coupling: C64::new(g2, 0.0) },
        ],
    }
}

prop_compose! {
    fn arb_model()(
        kc in 0.3f64..2.0,
        chi_frac in 0.0f64..0.95,
        kcp_frac in 0.0f64..1.0,
        ka in 0.02f64..1.5,
        kap_frac in 0.0f64..1.0,
        el in 0.3f64..2.0,
        ea in -0.3f64..0.5,
        delta in 0.001f64..0.3,
        gamma in 1e-6f64..1e-3,
        nt in 0.0f64..30.0,
        g1 in 0.001f64..0.12,
        g2 in 0.001f64..0.12,
    ) -> SystemModel {
        build_model(kc, chi_frac, kcp_frac, ka, kap_frac, el, ea, delta, gamma, nt, g1, g2)
    }
}

fn arb_stable_model() -> impl Strategy<Value = SystemModel> {
    arb_model().prop_filter("stable drift", |m| {
        is_stable_eigen(&m.drift_matrix_full()).unwrap_or(false)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn covariances_satisfy_commutation_relations(m in arb_stable_model(), t in 0.0f64..3.0) {
        for regime in [Regime::Full, Regime::Broadband, Regime::Ideal] {
            let sol = steady_state(&m, regime).unwrap();
            prop_assert!(commutator_defect(&sol.evaluate(t)) < 1e-9);
        }
        if stability_report(&m.drift_matrix_resonant()).unwrap().stable {
            let sol = steady_state(&m, Regime::Resonant).unwrap();
            prop_assert!(commutator_defect(&sol.evaluate(t)) < 1e-9);
        }
    }

    #[test]
    fn quadrature_covariances_are_physical(m in arb_stable_model(), t in 0.0f64..3.0) {
        let sol = steady_state_full(&m).unwrap();
        let v = sol.evaluate(t);
        let all = to_quadrature_cm(&v, &[0, 1, 2]).unwrap();
        prop_assert!(all.psd_margin >= -1e-9, "margin {}", all.psd_margin);
        let pair = to_quadrature_cm(&v, &[1, 2]).unwrap();
        prop_assert!(pair.psd_margin >= -1e-9, "margin {}", pair.psd_margin);
    }

    #[test]
    fn negativity_is_frame_invariant(m in arb_stable_model(), t in 0.0f64..3.0) {
        let sol = steady_state_full(&m).unwrap();
        let plain = logarithmic_negativity(&to_quadrature_cm(&sol.evaluate(t), &[1, 2]).unwrap()).unwrap();
        let rotated = logarithmic_negativity(&to_quadrature_cm(&frame_transform(&sol, t), &[1, 2]).unwrap()).unwrap();
        prop_assert!((plain - rotated).abs() < 1e-10, "{plain} vs {rotated}");
    }

    #[test]
    fn stability_implies_the_routh_hurwitz_bound(m in arb_model()) {
        let (delta, _) = m.detunings();
        prop_assume!(delta > 1e-9);
        let rh = is_stable_routh_hurwitz(&m).unwrap();
        let eig = is_stable_eigen(&m.drift_matrix_full()).unwrap();
        prop_assert!(rh || !eig);
    }

    #[test]
    fn lyapunov_residuals_stay_small(m in arb_stable_model(), mu_im in -2.0f64..2.0) {
        let a = m.drift_matrix_full();
        let q = diffusion_pieces(&m).c0;
        let mu = C64::new(0.0, mu_im);
        let x = solve_lyapunov(&a, &q, mu).unwrap();
        let residual = a.dot(&x) + x.dot(&a.t()) + x.mapv(|z| z * mu) + &q;
        prop_assert!(frob(&residual) / frob(&q) <= 1e-10);
    }

    #[test]
    fn zero_frequency_spectrum_matches_broadband_moments(
        kc in 0.3f64..2.0,
        chi_frac in 0.0f64..0.95,
        kcp_frac in 0.0f64..1.0,
    ) {
        let opo = OpoParams { chi: chi_frac * kc, kappa_c: kc, kappa_c_prime: kcp_frac * kc };
        let bm = broadband_moments(&opo);
        let s0 = squeezing_spectrum(&opo, 0.0);
        prop_assert!((s0 - (2.0 * bm.n_bar + 1.0 - 2.0 * bm.m_bar)).abs() < 1e-12);
        prop_assert!(bm.m_bar.powi(2) <= bm.n_bar * (bm.n_bar + 1.0) + 1e-12);
    }
}

fn mech_en(m: &SystemModel, regime: Regime) -> f64 {
    let sol = steady_state(m, regime).unwrap();
    logarithmic_negativity(&to_quadrature_cm(&sol.evaluate(0.0), &[1, 2]).unwrap()).unwrap()
}

#[test]
fn regimes_collapse_when_all_optical_scales_are_fast() {
    let m = SystemModel {
        cavity: CavityParams { kappa_a: 0.1, kappa_a_prime: 0.0 },
        opo: OpoParams { chi: 5.0, kappa_c: 9.0, kappa_c_prime: 0.0 },
        freq: FrequencyConfig { epsilon_l: 10.0, epsilon_a: 0.004 },
        modes: vec![
            MechanicalMode { omega: 10.01, gamma: 2e-5, n_thermal: 10.0, coupling: C64::new(0.03, 0.0) },
            MechanicalMode { omega: 9.99, gamma: 2e-5, n_thermal: 10.0, coupling: C64::new(0.03, 0.0) },
        ],
    };
    let full = mech_en(&m, Regime::Full);
    let broadband = mech_en(&m, Regime::Broadband);
    let resonant = mech_en(&m, Regime::Resonant);
    assert!((full - 2.063830).abs() < 1e-4);
    assert!((broadband - 2.062726).abs() < 1e-4);
    assert!((resonant - 2.072076).abs() < 1e-4);
    for (a, b) in [(full, broadband), (full, resonant), (broadband, resonant)] {
        let rel = (a - b).abs() / a.min(b);
        assert!(rel < 0.05, "{a} vs {b}: {rel}");
    }
}

#[test]
fn entanglement_oscillates_weakly_over_one_period() {
    let m = SystemModel {
        cavity: CavityParams { kappa_a: 0.1, kappa_a_prime: 0.0 },
        opo: OpoParams { chi: 0.5, kappa_c: 0.9, kappa_c_prime: 0.0 },
        freq: FrequencyConfig { epsilon_l: 1.0, epsilon_a: 0.004 },
        modes: vec![
            MechanicalMode { omega: 1.01, gamma: 2e-5, n_thermal: 10.0, coupling: C64::new(0.03, 0.0) },
            MechanicalMode { omega: 0.99, gamma: 2e-5, n_thermal: 10.0, coupling: C64::new(0.03, 0.0) },
        ],
    };
    let sol = steady_state_full(&m).unwrap();
    let period = std::f64::consts::PI / m.freq.epsilon_l;
    let values: Vec<f64> = (0..41)
        .map(|i| {
            let t = period * i as f64 / 40.0;
            logarithmic_negativity(&to_quadrature_cm(&sol.evaluate(t), &[1, 2]).unwrap()).unwrap()
        })
        .collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let swing = (max - min) / mean;
    assert!(swing < 0.05, "swing {swing}");
    assert!(swing > 0.001, "swing {swing} suspiciously flat");
}
