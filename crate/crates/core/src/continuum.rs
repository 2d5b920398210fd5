//! Thermodynamic-limit rate functions: the grid sums of
//! [`crate::quench::lbar_rate_function`] and
//! [`crate::quench::fidelity_decay_rate`] become (1/2π) ∫₀^π (−ln ·) dk.
//!
//! The integrands have integrable log singularities exactly at the special
//! modes (k_c for the echo minimum, k_0 for the fidelity), so the quadrature
//! splits the interval at the located roots and keeps a tiny offset off each
//! singular abscissa.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::modes::{find_k0_k1_roots, find_kc_roots, AlignmentRoots};
use crate::model::TwoBandModel;
use crate::numeric::integrate_with_cuts;
use crate::quench::{lbar_k, quench_fidelity_k};

/// Absolute quadrature tolerance for the rate integrals.
const QUAD_TOL: f64 = 1e-9;

/// Floor keeping ln(·) finite at roundoff-level zeros.
const LOG_FLOOR: f64 = 1e-300;

/// λ̄ in the thermodynamic limit: −(1/2π) ∫₀^π ln L̄_k dk.
pub fn lbar_rate_continuum(
    model: &dyn TwoBandModel,
    gamma_i: &[f64],
    gamma_f: &[f64],
    k_resolution: usize,
) -> Result<f64> {
    let cuts = find_kc_roots(model, gamma_i, gamma_f, k_resolution)?.roots;
    let integrand = |k: f64| match lbar_k(&model.dvector(gamma_i, k), &model.dvector(gamma_f, k)) {
        Ok(v) => v.max(LOG_FLOOR).ln(),
        Err(_) => f64::NAN,
    };
    finish(integrate_with_cuts(&integrand, 0.0, PI, &cuts, QUAD_TOL))
}

/// α^q in the thermodynamic limit: −(1/2π) ∫₀^π ln F^q_k dk. The decoupled
/// boundary modes carry zero measure and do not enter.
pub fn fidelity_decay_continuum(
    model: &dyn TwoBandModel,
    gamma_i: &[f64],
    gamma_f: &[f64],
    k_resolution: usize,
) -> Result<f64> {
    let cuts = match find_k0_k1_roots(model, gamma_i, gamma_f, k_resolution)? {
        AlignmentRoots::Roots { k0, .. } => k0,
        AlignmentRoots::ContinuumK1 => Vec::new(),
    };
    let integrand =
        |k: f64| match quench_fidelity_k(&model.dvector(gamma_i, k), &model.dvector(gamma_f, k)) {
            Ok(v) => v.max(LOG_FLOOR).ln(),
            Err(_) => f64::NAN,
        };
    finish(integrate_with_cuts(&integrand, 0.0, PI, &cuts, QUAD_TOL))
}

fn finish(integral: f64) -> Result<f64> {
    if !integral.is_finite() {
        return Err(Error::Domain(
            "rate integrand hit a gap closing; parameters are critical".into(),
        ));
    }
    Ok(-integral / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelRegistry;
    use crate::quench::{fidelity_decay_rate, lbar_rate_function, KGrid, QuenchSpec, RateValue};

    #[test]
    fn identical_quench_rates_vanish() {
        let reg = ModelRegistry::with_builtins();
        let m = reg.get("xy").unwrap();
        let gi = [-2.0, 0.8];
        let l = lbar_rate_continuum(m.as_ref(), &gi, &gi, 1024).unwrap();
        let a = fidelity_decay_continuum(m.as_ref(), &gi, &gi, 1024).unwrap();
        assert!(l.abs() < 1e-9, "λ̄ = {l}");
        assert!(a.abs() < 1e-9, "α^q = {a}");
    }

    #[test]
    fn continuum_rate_is_the_large_l_limit_of_the_grid_sum() {
        let reg = ModelRegistry::with_builtins();
        let m = reg.get("xy").unwrap();
        let gi = vec![-2.0, 0.8];
        let gf = vec![-2.0, -2.0]; // no special interior modes anywhere near
        let cont = lbar_rate_continuum(m.as_ref(), &gi, &gf, 1024).unwrap();
        let mut prev_err = f64::INFINITY;
        for length in [200usize, 800, 3200] {
            let spec = QuenchSpec::new(
                m.as_ref(),
                gi.clone(),
                gf.clone(),
                KGrid::new(length).unwrap(),
            )
            .unwrap();
            let finite = match lbar_rate_function(&spec).unwrap() {
                RateValue::Finite(v) => v,
                RateValue::Infinite => panic!("unexpected infinity"),
            };
            let err = (finite - cont).abs();
            assert!(err < prev_err + 1e-12, "no convergence: {err} vs {prev_err}");
            prev_err = err;
        }
        assert!(prev_err < 1e-3, "grid sum should approach the integral");
    }

    #[test]
    fn alpha_q_is_finite_across_a_k0_singularity() {
        // h_f = 0 puts a fidelity zero at the k = 0 edge; the log
        // singularity is integrable and α^q stays finite.
        let reg = ModelRegistry::with_builtins();
        let m = reg.get("xy").unwrap();
        let a = fidelity_decay_continuum(m.as_ref(), &[-2.0, 0.8], &[0.0, -2.0], 2048).unwrap();
        assert!(a.is_finite() && a > 0.0, "α^q = {a}");
        // The finite-L version is infinite there (boundary factor F₀ = 0).
        let spec = QuenchSpec::new(
            m.as_ref(),
            vec![-2.0, 0.8],
            vec![0.0, -2.0],
            KGrid::new(30).unwrap(),
        )
        .unwrap();
        assert!(fidelity_decay_rate(&spec).unwrap().is_infinite());
    }

    #[test]
    fn lbar_rate_has_kinks_at_the_dynamical_boundaries() {
        // Along η_f = −2 the k_c count changes at h* ≈ −1.33458 (tangency),
        // h_f = −1 and h_f = +1; λ̄ stays continuous but its slope jumps.
        let reg = ModelRegistry::with_builtins();
        let m = reg.get("xy").unwrap();
        let gi = [-2.0, 0.8];
        let rate = |h: f64| lbar_rate_continuum(m.as_ref(), &gi, &[h, -2.0], 2048).unwrap();
        let h_star = -1.334_576;
        let step = 2e-3;
        for b in [h_star, -1.0, 1.0] {
            let kink = (rate(b + step) - 2.0 * rate(b) + rate(b - step)).abs();
            let smooth = {
                let h = b - 0.25; // generic nearby point
                (rate(h + step) - 2.0 * rate(h) + rate(h - step)).abs()
            };
            assert!(
                kink > 8.0 * smooth,
                "no kink at {b}: {kink} vs smooth {smooth}"
            );
        }
    }
}
