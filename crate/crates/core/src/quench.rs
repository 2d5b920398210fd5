//! Per-mode and total Loschmidt echoes, quench fidelities, and their rate
//! functions for a sudden quench γ_i → γ_f.
//!
//! With g = d̂_i·d̂_f the alignment of the pre- and post-quench Bloch vectors
//! of one k-mode:
//!
//!   L_k(t) = 1 − (1 − g²) sin²(|d_f| t)
//!   L̄_k   = g²                       (time minimum, reached at t_{c,n})
//!   F^q_k  = sqrt((1 + g)/2)          (ground-state overlap)
//!   L̄_k   = (2 (F^q_k)² − 1)²        (the identity tying the two together)
//!
//! Totals are products over the interior momentum grid; rate functions are
//! the −(1/L) logs of those products, evaluated in log space so large-L
//! products cannot underflow.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::bloch::{DVector, GAP_TOLERANCE};
use crate::error::{Error, Result};
use crate::model::{check_arity, TwoBandModel};

/// k-mode Loschmidt echo L_k(t) ∈ [0, 1].
pub fn loschmidt_k(d_i: &DVector, d_f: &DVector, t: f64) -> Result<f64> {
    let g = d_i.alignment(d_f)?;
    let s = (d_f.norm() * t).sin();
    Ok((1.0 - (1.0 - g * g) * s * s).max(0.0))
}

/// Time minimum L̄_k = g² of the k-mode echo.
pub fn lbar_k(d_i: &DVector, d_f: &DVector) -> Result<f64> {
    let g = d_i.alignment(d_f)?;
    Ok(g * g)
}

/// k-mode quench fidelity F^q_k = sqrt((1 + g)/2).
pub fn quench_fidelity_k(d_i: &DVector, d_f: &DVector) -> Result<f64> {
    let g = d_i.alignment(d_f)?;
    Ok((0.5 * (1.0 + g)).max(0.0).sqrt())
}

/// L̄_k reconstructed from the fidelity alone: (2 fq² − 1)².
pub fn lbar_from_fidelity(fq: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&fq) {
        return Err(Error::Domain(format!("fidelity {fq} outside [0, 1]")));
    }
    let x = 2.0 * fq.clamp(0.0, 1.0).powi(2) - 1.0;
    Ok(x * x)
}

/// Critical times t_{c,n} = (2n − 1)π / (2|d_f|), n = 1..=n_max.
pub fn critical_times(d_f: &DVector, n_max: usize) -> Result<Vec<f64>> {
    let r = d_f.norm();
    if r <= GAP_TOLERANCE {
        return Err(Error::GapClosed { norm: r, k: None });
    }
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    Ok((1..=n_max)
        .map(|n| (2 * n - 1) as f64 * PI / (2.0 * r))
        .collect())
}

/// Interior momentum grid k_m = 2πm/L, m = 1..=L/2−1, of an even-size chain.
///
/// The boundary modes k = 0, π are decoupled number operators, tracked by the
/// model rather than by the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KGrid {
    length: usize,
    momenta: Vec<f64>,
}

impl KGrid {
    pub fn new(length: usize) -> Result<Self> {
        if length < 2 || length % 2 != 0 {
            return Err(Error::Domain(format!(
                "system size must be a positive even integer, got {length}"
            )));
        }
        let momenta = (1..length / 2)
            .map(|m| 2.0 * PI * m as f64 / length as f64)
            .collect();
        Ok(Self { length, momenta })
    }

    /// System size L (not the mode count).
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }
}

/// A sudden quench of one model: pre- and post-quench parameters plus the
/// momentum grid.
pub struct QuenchSpec<'a> {
    model: &'a dyn TwoBandModel,
    gamma_i: Vec<f64>,
    gamma_f: Vec<f64>,
    kgrid: KGrid,
}

impl<'a> QuenchSpec<'a> {
    pub fn new(
        model: &'a dyn TwoBandModel,
        gamma_i: Vec<f64>,
        gamma_f: Vec<f64>,
        kgrid: KGrid,
    ) -> Result<Self> {
        check_arity(model, &gamma_i)?;
        check_arity(model, &gamma_f)?;
        Ok(Self {
            model,
            gamma_i,
            gamma_f,
            kgrid,
        })
    }

    pub fn model(&self) -> &dyn TwoBandModel {
        self.model
    }

    pub fn gamma_i(&self) -> &[f64] {
        &self.gamma_i
    }

    pub fn gamma_f(&self) -> &[f64] {
        &self.gamma_f
    }

    pub fn kgrid(&self) -> &KGrid {
        &self.kgrid
    }

    /// Pre- and post-quench d-vectors of the mode at momentum k.
    pub fn dvectors(&self, k: f64) -> (DVector, DVector) {
        (
            self.model.dvector(&self.gamma_i, k),
            self.model.dvector(&self.gamma_f, k),
        )
    }
}

/// Time series of the per-mode and total Loschmidt echo with its rate
/// function λ(t) = −(1/L) ln L(t).
#[derive(Debug, Clone, Serialize)]
pub struct LoschmidtSeries {
    pub times: Vec<f64>,
    pub momenta: Vec<f64>,
    /// `per_mode[ki][ti]` = L_{k_ki}(t_ti).
    pub per_mode: Vec<Vec<f64>>,
    pub total: Vec<f64>,
    pub rate: Vec<f64>,
    /// Indices into `times` where the total echo is exactly zero and the rate
    /// is reported as +∞.
    pub rate_infinite_at: Vec<usize>,
}

/// Per-mode echoes over the quench grid and their product, in log space.
pub fn loschmidt_total(spec: &QuenchSpec, times: &[f64]) -> Result<LoschmidtSeries> {
    let momenta = spec.kgrid().momenta().to_vec();
    let mut per_mode = Vec::with_capacity(momenta.len());
    for &k in &momenta {
        let (d_i, d_f) = spec.dvectors(k);
        let row: Vec<f64> = times
            .iter()
            .map(|&t| loschmidt_k(&d_i, &d_f, t))
            .collect::<Result<_>>()
            .map_err(|e| e.at_k(k))?;
        per_mode.push(row);
    }
    let length = spec.kgrid().length() as f64;
    let mut total = Vec::with_capacity(times.len());
    let mut rate = Vec::with_capacity(times.len());
    let mut rate_infinite_at = Vec::new();
    for ti in 0..times.len() {
        let mut log_sum = 0.0;
        let mut exact_zero = false;
        for row in &per_mode {
            let v = row[ti];
            if v == 0.0 {
                exact_zero = true;
                break;
            }
            log_sum += v.ln();
        }
        if exact_zero {
            total.push(0.0);
            rate.push(f64::INFINITY);
            rate_infinite_at.push(ti);
        } else {
            total.push(log_sum.exp());
            rate.push(-log_sum / length);
        }
    }
    Ok(LoschmidtSeries {
        times: times.to_vec(),
        momenta,
        per_mode,
        total,
        rate,
        rate_infinite_at,
    })
}

/// A size-normalized rate that may be exactly +∞ when the underlying product
/// has an exact zero on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RateValue {
    Finite(f64),
    Infinite,
}

impl RateValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, RateValue::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            RateValue::Finite(v) => Some(*v),
            RateValue::Infinite => None,
        }
    }
}

impl fmt::Display for RateValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateValue::Finite(v) => write!(f, "{v}"),
            RateValue::Infinite => write!(f, "inf"),
        }
    }
}

/// λ̄ = −(1/L) Σ_k ln L̄_k over the interior grid; +∞ if a grid mode sits
/// exactly on a k_c.
pub fn lbar_rate_function(spec: &QuenchSpec) -> Result<RateValue> {
    let mut log_sum = 0.0;
    for &k in spec.kgrid().momenta() {
        let (d_i, d_f) = spec.dvectors(k);
        let lb = lbar_k(&d_i, &d_f).map_err(|e| e.at_k(k))?;
        if lb == 0.0 {
            return Ok(RateValue::Infinite);
        }
        log_sum += lb.ln();
    }
    Ok(RateValue::Finite(-log_sum / spec.kgrid().length() as f64))
}

/// α^q = −(1/L) ln F^q with F^q the product of all k-mode fidelities,
/// boundary modes included; +∞ as soon as any factor is exactly zero.
pub fn fidelity_decay_rate(spec: &QuenchSpec) -> Result<RateValue> {
    let mut log_sum = 0.0;
    if let Some((f0, fpi)) = spec
        .model()
        .boundary_fidelities(spec.gamma_i(), spec.gamma_f())?
    {
        if f0 == 0 || fpi == 0 {
            return Ok(RateValue::Infinite);
        }
    }
    for &k in spec.kgrid().momenta() {
        let (d_i, d_f) = spec.dvectors(k);
        let fq = quench_fidelity_k(&d_i, &d_f).map_err(|e| e.at_k(k))?;
        if fq == 0.0 {
            return Ok(RateValue::Infinite);
        }
        log_sum += fq.ln();
    }
    Ok(RateValue::Finite(-log_sum / spec.kgrid().length() as f64))
}
