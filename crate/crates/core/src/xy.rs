//! The anisotropic XY chain in a transverse field, as the built-in two-band
//! model.
//!
//! In momentum space the chain reduces to 2×2 blocks with
//!
//!   d_x(k) = −2h − 2 cos k,   d_y(k) = −2η sin k,   d_z = d₀ = 0,
//!
//! plus decoupled fermion modes at k = 0 and k = π whose ground-state
//! occupations are fixed by the signs of h + 1 and h − 1. Equilibrium phases
//! are separated by h = −1, h = +1 and the segment η = 0 for |h| < 1, and are
//! labeled by the winding number of (d_x, d_y) around the origin.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bloch::{DVector, GAP_TOLERANCE};
use crate::error::{Error, Result};
use crate::model::TwoBandModel;
use crate::quench::{lbar_k, quench_fidelity_k};

/// Transverse field strength h and anisotropy η.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XYParams {
    pub h: f64,
    pub eta: f64,
}

impl XYParams {
    pub fn new(h: f64, eta: f64) -> Self {
        debug_assert!(h.is_finite() && eta.is_finite());
        Self { h, eta }
    }
}

/// Absolute tolerance for classifying a parameter point as lying on a
/// critical line.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// d-vector of the XY k-mode.
pub fn dvector(p: XYParams, k: f64) -> DVector {
    let (sin, cos) = k.sin_cos();
    DVector::planar(-2.0 * p.h - 2.0 * cos, -2.0 * p.eta * sin)
}

fn band_terms(p: XYParams, k: f64) -> (f64, f64, f64) {
    let (sin, cos) = k.sin_cos();
    // (h + cos k, η sin k, (h + cos k)² + η² sin²k); |d|² = 4 × the last.
    let a = p.h + cos;
    let b = p.eta * sin;
    (a, b, a * a + b * b)
}

/// Time-minimum echo of the XY k-mode, evaluated literally from the
/// closed-form parametrization rather than through the d-vectors.
pub fn lbar_closed_form(p_i: XYParams, p_f: XYParams, k: f64) -> Result<f64> {
    let (ai, bi, sq_i) = band_terms(p_i, k);
    let (af, bf, sq_f) = band_terms(p_f, k);
    check_gap(sq_i, k)?;
    check_gap(sq_f, k)?;
    let num = ai * af + bi * bf;
    Ok(num * num / (sq_i * sq_f))
}

/// Quench fidelity of the XY k-mode from the closed-form parametrization.
pub fn fidelity_closed_form(p_i: XYParams, p_f: XYParams, k: f64) -> Result<f64> {
    let (ai, bi, sq_i) = band_terms(p_i, k);
    let (af, bf, sq_f) = band_terms(p_f, k);
    check_gap(sq_i, k)?;
    check_gap(sq_f, k)?;
    let num = ai * af + bi * bf;
    Ok((num / (2.0 * (sq_i * sq_f).sqrt()) + 0.5).clamp(0.0, 1.0).sqrt())
}

fn check_gap(band_sq: f64, k: f64) -> Result<()> {
    // |d| = 2 sqrt(band_sq)
    if 4.0 * band_sq <= GAP_TOLERANCE * GAP_TOLERANCE {
        return Err(Error::GapClosed {
            norm: 2.0 * band_sq.sqrt(),
            k: Some(k),
        });
    }
    Ok(())
}

/// Quench-fidelity factors of the decoupled k = 0 and k = π modes.
///
/// Each factor is 1 when the ground-state occupation of that mode matches
/// across the quench and 0 when it flips, i.e. F₀ = 1 iff h_i + 1 and
/// h_f + 1 share a sign, F_π = 1 iff h_i − 1 and h_f − 1 do.
pub fn boundary_fidelities(p_i: XYParams, p_f: XYParams) -> Result<(u8, u8)> {
    for h in [p_i.h, p_f.h] {
        if (h + 1.0).abs() <= BOUNDARY_TOLERANCE || (h - 1.0).abs() <= BOUNDARY_TOLERANCE {
            return Err(Error::CriticalBoundary { value: h });
        }
    }
    let f0 = ((p_i.h + 1.0) * (p_f.h + 1.0) > 0.0) as u8;
    let fpi = ((p_i.h - 1.0) * (p_f.h - 1.0) > 0.0) as u8;
    Ok((f0, fpi))
}

/// Winding number ν = (1/2π) ∮ dk (d_x ∂_k d_y − d_y ∂_k d_x)/(d_x² + d_y²).
///
/// For the XY d-vector the integrand simplifies to
/// η(1 + h cos k)/[(h + cos k)² + η² sin²k]. The loop k ∈ [−π, π) is sampled
/// on uniform periodic grids doubled from 2¹⁰ to 2²⁰ points until the
/// trapezoid estimate lands within 1e−6 of an integer, which is then
/// returned; failure to snap reports the last estimate.
pub fn winding_number(p: XYParams) -> Result<i32> {
    let mut estimate = f64::NAN;
    let mut n: usize = 1 << 10;
    while n <= (1 << 20) {
        let mut sum = 0.0;
        for j in 0..n {
            let k = -PI + 2.0 * PI * j as f64 / n as f64;
            let (sin, cos) = k.sin_cos();
            let a = p.h + cos;
            let b = p.eta * sin;
            let band_sq = a * a + b * b;
            if 4.0 * band_sq <= GAP_TOLERANCE * GAP_TOLERANCE {
                return Err(Error::GapClosed {
                    norm: 2.0 * band_sq.sqrt(),
                    k: Some(k),
                });
            }
            sum += p.eta * (1.0 + p.h * cos) / band_sq;
        }
        estimate = sum / n as f64;
        let snapped = estimate.round();
        if (estimate - snapped).abs() < 1e-6 {
            return Ok(snapped as i32);
        }
        n <<= 1;
    }
    Err(Error::NonIntegerWinding { estimate })
}

/// Equilibrium phase of the XY chain: one of the four regions of the (h, η)
/// plane, indexed in order along (h, sign η), or Critical on a boundary.
///
/// Region 0: h < −1; region 1: |h| < 1, η > 0; region 2: |h| < 1, η < 0;
/// region 3: h > 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquilibriumPhase {
    Region(u8),
    Critical,
}

pub fn equilibrium_phase(p: XYParams) -> EquilibriumPhase {
    if (p.h + 1.0).abs() <= BOUNDARY_TOLERANCE || (p.h - 1.0).abs() <= BOUNDARY_TOLERANCE {
        return EquilibriumPhase::Critical;
    }
    if p.h.abs() < 1.0 {
        if p.eta.abs() <= BOUNDARY_TOLERANCE {
            return EquilibriumPhase::Critical;
        }
        if p.eta > 0.0 {
            EquilibriumPhase::Region(1)
        } else {
            EquilibriumPhase::Region(2)
        }
    } else if p.h < -1.0 {
        EquilibriumPhase::Region(0)
    } else {
        EquilibriumPhase::Region(3)
    }
}

/// The XY chain as a registrable model with parameters (h, eta).
pub struct XyModel;

fn params(raw: &[f64]) -> XYParams {
    XYParams::new(raw[0], raw[1])
}

impl TwoBandModel for XyModel {
    fn name(&self) -> &str {
        "xy"
    }

    fn parameter_names(&self) -> &[&str] {
        &["h", "eta"]
    }

    fn dvector(&self, raw: &[f64], k: f64) -> DVector {
        dvector(params(raw), k)
    }

    fn boundary_fidelities(&self, gamma_i: &[f64], gamma_f: &[f64]) -> Result<Option<(u8, u8)>> {
        boundary_fidelities(params(gamma_i), params(gamma_f)).map(Some)
    }

    fn is_critical(&self, raw: &[f64]) -> bool {
        equilibrium_phase(params(raw)) == EquilibriumPhase::Critical
    }
}
