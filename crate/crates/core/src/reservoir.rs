//! Squeezed-reservoir quantities: scalar correlation kernels, squeezing
//! spectrum, broadband moments, and the matrix kernels of the steady state.

use crate::error::{Error, Result};
use crate::lyapunov::{expm, frobenius, solve_matrix};
use crate::model::OpoParams;
use crate::C64;
use ndarray::Array2;

/// Sign label selecting the + or − branch of a kernel pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// The + branch.
    Plus,
    /// The − branch.
    Minus,
}

/// Matrix-valued reservoir kernels entering the finite-bandwidth steady state.
#[derive(Debug, Clone)]
pub struct ReservoirKernels {
    /// 𝓝̄₊ kernel.
    pub n_plus: Array2<C64>,
    /// 𝓝̄₋ kernel.
    pub n_minus: Array2<C64>,
    /// 𝓜̄₊ kernel.
    pub m_plus: Array2<C64>,
    /// 𝓜̄₋ kernel.
    pub m_minus: Array2<C64>,
}

/// Broadband-limit reservoir moments and equivalent Bogoliubov-bath parameters.
#[derive(Debug, Clone, Copy)]
pub struct BroadbandMoments {
    /// Effective reservoir occupation n̄.
    pub n_bar: f64,
    /// Reservoir self-correlation strength m̄.
    pub m_bar: f64,
    /// Effective thermal occupation n̄_s of the Bogoliubov bath.
    pub n_s: f64,
    /// Squeezing parameter s of the reservoir state.
    pub s: f64,
}

/// Two-time correlation v_±(τ) of the squeezed input field.
pub fn v_kernel(opo: &OpoParams, tau: f64, sign: Sign) -> f64 {
    let (rm, rp) = (opo.r_minus(), opo.r_plus());
    let pre = opo.chi * opo.kappa_c_s() / 2.0;
    let lo = (-rm * tau.abs()).exp() / rm;
    let hi = (-rp * tau.abs()).exp() / rp;
    match sign {
        Sign::Plus => pre * (lo + hi),
        Sign::Minus => pre * (lo - hi),
    }
}

/// Noise spectral density of the maximally squeezed quadrature.
pub fn squeezing_spectrum(opo: &OpoParams, omega: f64) -> f64 {
    let rp = opo.r_plus();
    1.0 - 4.0 * opo.chi * opo.kappa_c_s() / (rp * rp + omega * omega)
}

/// Zero-frequency squeezing in dB below vacuum.
pub fn squeezing_db(opo: &OpoParams) -> f64 {
    -10.0 * squeezing_spectrum(opo, 0.0).log10()
}

/// Broadband-limit moments n̄, m̄ with the derived Bogoliubov-bath parameters.
pub fn broadband_moments(opo: &OpoParams) -> BroadbandMoments {
    let (rm, rp) = (opo.r_minus(), opo.r_plus());
    let pre = opo.chi * opo.kappa_c_s();
    let n_bar = pre * (1.0 / (rm * rm) - 1.0 / (rp * rp));
    let m_bar = pre * (1.0 / (rm * rm) + 1.0 / (rp * rp));
    let disc = ((2.0 * n_bar + 1.0).powi(2) - 4.0 * m_bar * m_bar).max(0.0);
    let n_s = (disc.sqrt() - 1.0) / 2.0;
    let s = if m_bar > 0.0 { ((n_bar - n_s) / m_bar).atanh() } else { 0.0 };
    BroadbandMoments { n_bar, m_bar, n_s, s }
}

/// Resolvent (r((r + s·iε_L)I − A))⁻¹ realized as a linear solve.
fn resolvent(a: &Array2<C64>, opo_r: f64, s: f64, epsilon_l: f64) -> Result<Array2<C64>> {
    let d = a.nrows();
    if opo_r <= 0.0 {
        return Err(Error::ResonantPole(format!(
            "r = {opo_r} (OPO at or above threshold)"
        )));
    }
    let shift = C64::new(opo_r, s * epsilon_l);
    let mut m = a.mapv(|z| -z * opo_r);
    for i in 0..d {
        m[[i, i]] += opo_r * shift;
    }
    let eye = Array2::<C64>::eye(d);
    let y = solve_matrix(&m, &eye)
        .map_err(|_| Error::ResonantPole(format!("shift r ± iε_L = {shift}")))?;
    let res = frobenius(&(m.dot(&y) - &eye)) / (d as f64).sqrt();
    if !res.is_finite() || res > 1e-8 {
        return Err(Error::ResonantPole(format!("shift r ± iε_L = {shift} (residual {res:.3e})")));
    }
    Ok(y)
}

/// Steady-state matrix kernels 𝓝̄_± and 𝓜̄_±.
pub fn steady_kernels(a: &Array2<C64>, opo: &OpoParams, epsilon_l: f64) -> Result<ReservoirKernels> {
    let pre = C64::new(opo.chi * opo.kappa_c_s(), 0.0);
    let (rm, rp) = (opo.r_minus(), opo.r_plus());
    let lo_p = resolvent(a, rm, 1.0, epsilon_l)?;
    let hi_p = resolvent(a, rp, 1.0, epsilon_l)?;
    let lo_m = resolvent(a, rm, -1.0, epsilon_l)?;
    let hi_m = resolvent(a, rp, -1.0, epsilon_l)?;
    Ok(ReservoirKernels {
        n_plus: (&lo_p - &hi_p).mapv(|z| pre * z),
        n_minus: (&lo_m - &hi_m).mapv(|z| pre * z),
        m_plus: (&lo_p + &hi_p).mapv(|z| pre * z),
        m_minus: (&lo_m + &hi_m).mapv(|z| pre * z),
    })
}

/// Finite-time kernels; they vanish at t = 0 and converge to `steady_kernels`.
pub fn transient_kernels(
    a: &Array2<C64>,
    opo: &OpoParams,
    epsilon_l: f64,
    t: f64,
) -> Result<ReservoirKernels> {
    let d = a.nrows();
    let pre = C64::new(opo.chi * opo.kappa_c_s(), 0.0);
    let (rm, rp) = (opo.r_minus(), opo.r_plus());
    let eye = Array2::<C64>::eye(d);
    let term = |r: f64, s: f64| -> Result<Array2<C64>> {
        let resolv = resolvent(a, r, s, epsilon_l)?;
        let shift = C64::new(r, s * epsilon_l);
        let mut x = a.mapv(|z| -z);
        for i in 0..d {
            x[[i, i]] += shift;
        }
        let decay = expm(&x.mapv(|z| -z * t));
        Ok(resolv.dot(&(&eye - &decay)))
    };
    let lo_p = term(rm, 1.0)?;
    let hi_p = term(rp, 1.0)?;
    let lo_m = term(rm, -1.0)?;
    let hi_m = term(rp, -1.0)?;
    Ok(ReservoirKernels {
        n_plus: (&lo_p - &hi_p).mapv(|z| pre * z),
        n_minus: (&lo_m - &hi_m).mapv(|z| pre * z),
        m_plus: (&lo_p + &hi_p).mapv(|z| pre * z),
        m_minus: (&lo_m + &hi_m).mapv(|z| pre * z),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2_opo() -> OpoParams {
        OpoParams { chi: 0.5, kappa_c: 0.9, kappa_c_prime: 0.0 }
    }

    #[test]
    fn v_kernel_reference_values() {
        let opo = fig2_opo();
        assert!((v_kernel(&opo, 0.0, Sign::Minus) - 0.401785714285714).abs() < 1e-12);
        assert!((v_kernel(&opo, 0.0, Sign::Plus) - 0.723214285714286).abs() < 1e-12);
        let off = OpoParams { chi: 0.0, ..opo };
        assert_eq!(v_kernel(&off, 0.3, Sign::Plus), 0.0);
        assert!(v_kernel(&opo, 80.0, Sign::Plus).abs() < 1e-12);
    }

    #[test]
    fn v_kernel_is_even_and_decaying() {
        let opo = fig2_opo();
        for sign in [Sign::Plus, Sign::Minus] {
            let mut prev = v_kernel(&opo, 0.0, sign);
            for k in 1..40 {
                let tau = 0.25 * k as f64;
                let v = v_kernel(&opo, tau, sign);
                assert!((v - v_kernel(&opo, -tau, sign)).abs() < 1e-15);
                assert!(v <= prev + 1e-15);
                prev = v;
            }
        }
    }

    #[test]
    fn spectrum_reference_values() {
        let opo = fig2_opo();
        let s0 = squeezing_spectrum(&opo, 0.0);
        assert!((s0 - 4.0 / 49.0).abs() < 1e-15);
        assert!((squeezing_db(&opo) - 10.881360887005513).abs() < 1e-9);
        let off = OpoParams { chi: 0.0, ..opo };
        assert_eq!(squeezing_spectrum(&off, 0.7), 1.0);
        assert!((squeezing_spectrum(&opo, 1e9) - 1.0).abs() < 1e-12);
        assert!(squeezing_spectrum(&opo, 1.0) > s0);
        assert!((squeezing_spectrum(&opo, 1.0) - squeezing_spectrum(&opo, -1.0)).abs() < 1e-15);
    }

    #[test]
    fn broadband_reference_values() {
        let bm = broadband_moments(&fig2_opo());
        assert!((bm.n_bar - 2.5829081632653055).abs() < 1e-12);
        assert!((bm.m_bar - 3.0420918367346936).abs() < 1e-12);
        assert!((bm.m_bar.powi(2) - bm.n_bar * (bm.n_bar + 1.0)).abs() < 1e-8);
        assert!(bm.n_s.abs() < 1e-9);
        assert!((bm.s.tanh() - (bm.n_bar - bm.n_s) / bm.m_bar).abs() < 1e-12);
    }

    #[test]
    fn broadband_degenerate_cases() {
        let off = OpoParams { chi: 0.0, kappa_c: 0.9, kappa_c_prime: 0.0 };
        let bm = broadband_moments(&off);
        assert_eq!((bm.n_bar, bm.m_bar, bm.n_s, bm.s), (0.0, 0.0, 0.0, 0.0));
        let lossy = OpoParams { chi: 0.5, kappa_c: 0.9, kappa_c_prime: 0.9 };
        let bm = broadband_moments(&lossy);
        assert_eq!((bm.n_bar, bm.m_bar), (0.0, 0.0));
        let partial = OpoParams { chi: 0.5, kappa_c: 0.9, kappa_c_prime: 0.2 };
        let bm = broadband_moments(&partial);
        assert!(bm.n_s > 0.0);
        assert!(bm.m_bar.powi(2) < bm.n_bar * (bm.n_bar + 1.0));
    }

    #[test]
    fn spectrum_matches_moment_combination() {
        for (chi, kc, kcp) in [(0.5, 0.9, 0.0), (0.3, 1.2, 0.4), (0.7, 0.8, 0.1)] {
            let opo = OpoParams { chi, kappa_c: kc, kappa_c_prime: kcp };
            let bm = broadband_moments(&opo);
            let s0 = squeezing_spectrum(&opo, 0.0);
            assert!((s0 - (2.0 * bm.n_bar + 1.0 - 2.0 * bm.m_bar)).abs() < 1e-12);
        }
    }

    #[test]
    fn steady_kernels_scalar_closed_forms() {
        let opo = fig2_opo();
        let bm = broadband_moments(&opo);
        let a0 = Array2::<C64>::zeros((1, 1));
        let k = steady_kernels(&a0, &opo, 0.0).unwrap();
        assert!((k.n_plus[[0, 0]].re - bm.n_bar).abs() < 1e-12);
        assert!((k.m_plus[[0, 0]].re - bm.m_bar).abs() < 1e-12);

        let kappa = 0.3;
        let a1 = Array2::from_elem((1, 1), C64::new(-kappa, 0.0));
        let k = steady_kernels(&a1, &opo, 0.0).unwrap();
        let (rm, rp) = (opo.r_minus(), opo.r_plus());
        let pre = opo.chi * opo.kappa_c_s();
        let n_ref = pre * (1.0 / (rm * (rm + kappa)) - 1.0 / (rp * (rp + kappa)));
        let m_ref = pre * (1.0 / (rm * (rm + kappa)) + 1.0 / (rp * (rp + kappa)));
        assert!((k.n_plus[[0, 0]].re - n_ref).abs() < 1e-12);
        assert!((k.m_minus[[0, 0]].re - m_ref).abs() < 1e-12);
    }

    #[test]
    fn steady_kernels_broadband_limit() {
        let opo = fig2_opo();
        let bm = broadband_moments(&opo);
        let scale = 1e3;
        let wide = OpoParams { chi: opo.chi * scale, kappa_c: opo.kappa_c * scale, kappa_c_prime: 0.0 };
        let m = crate::steadystate::tests::fig2b_model();
        let a = m.drift_matrix_full();
        let k = steady_kernels(&a, &wide, m.freq.epsilon_l).unwrap();
        let eye_n = Array2::<C64>::eye(6).mapv(|z| z * bm.n_bar);
        let eye_m = Array2::<C64>::eye(6).mapv(|z| z * bm.m_bar);
        assert!(frobenius(&(&k.n_plus - &eye_n)) / bm.n_bar < 1e-2);
        assert!(frobenius(&(&k.m_minus - &eye_m)) / bm.m_bar < 1e-2);
    }

    #[test]
    fn steady_kernels_commute_with_basis_change() {
        let m = crate::steadystate::tests::fig2b_model();
        let a = m.drift_matrix_full();
        let mut p = Array2::<C64>::eye(6);
        p[[0, 3]] = C64::new(0.4, -0.2);
        p[[2, 5]] = C64::new(-0.1, 0.6);
        p[[4, 1]] = C64::new(0.3, 0.0);
        let p_inv = solve_matrix(&p, &Array2::<C64>::eye(6)).unwrap();
        let a_t = p.dot(&a).dot(&p_inv);
        let k = steady_kernels(&a, &m.opo, m.freq.epsilon_l).unwrap();
        let kt = steady_kernels(&a_t, &m.opo, m.freq.epsilon_l).unwrap();
        for (orig, trans) in [
            (&k.n_plus, &kt.n_plus),
            (&k.n_minus, &kt.n_minus),
            (&k.m_plus, &kt.m_plus),
            (&k.m_minus, &kt.m_minus),
        ] {
            let moved = p.dot(orig).dot(&p_inv);
            assert!(frobenius(&(&moved - trans)) / frobenius(trans) < 1e-9);
        }
    }

    #[test]
    fn above_threshold_is_a_resonant_pole() {
        let opo = OpoParams { chi: 0.9, kappa_c: 0.9, kappa_c_prime: 0.0 };
        let a = Array2::<C64>::zeros((2, 2));
        assert!(matches!(steady_kernels(&a, &opo, 1.0), Err(Error::ResonantPole(_))));
    }

    #[test]
    fn transient_kernels_vanish_at_zero_time() {
        let m = crate::steadystate::tests::fig2b_model();
        let a = m.drift_matrix_full();
        let k = transient_kernels(&a, &m.opo, m.freq.epsilon_l, 0.0).unwrap();
        for mat in [&k.n_plus, &k.n_minus, &k.m_plus, &k.m_minus] {
            assert!(frobenius(mat) < 1e-14);
        }
    }

    #[test]
    fn transient_kernels_reach_steady_limit() {
        let m = crate::steadystate::tests::fig2b_model();
        let a = m.drift_matrix_full();
        let steady = steady_kernels(&a, &m.opo, m.freq.epsilon_l).unwrap();
        let late = transient_kernels(&a, &m.opo, m.freq.epsilon_l, 150.0).unwrap();
        for (s, l) in [
            (&steady.n_plus, &late.n_plus),
            (&steady.n_minus, &late.n_minus),
            (&steady.m_plus, &late.m_plus),
            (&steady.m_minus, &late.m_minus),
        ] {
            assert!(frobenius(&(s - l)) < 1e-10);
        }
    }

    #[test]
    fn transient_scalar_closed_form() {
        let opo = fig2_opo();
        let a0 = Array2::<C64>::zeros((1, 1));
        let t = 0.8;
        let (rm, rp) = (opo.r_minus(), opo.r_plus());
        let pre = opo.chi * opo.kappa_c_s();
        let k = transient_kernels(&a0, &opo, 0.0, t).unwrap();
        let n_ref = pre * ((1.0 - (-rm * t).exp()) / (rm * rm) - (1.0 - (-rp * t).exp()) / (rp * rp));
        let m_ref = pre * ((1.0 - (-rm * t).exp()) / (rm * rm) + (1.0 - (-rp * t).exp()) / (rp * rp));
        assert!((k.n_plus[[0, 0]].re - n_ref).abs() < 1e-12);
        assert!((k.m_plus[[0, 0]].re - m_ref).abs() < 1e-12);
    }
}
