//! Location and classification of the special momentum modes of a quench:
//! k_c (perpendicular Bloch vectors, F^q = √2/2), k_0 (antiparallel, F^q = 0)
//! and k_1 (parallel, F^q = 1), plus the parameter-plane scans that turn the
//! counts into phase diagrams.
//!
//! Roots are bracketed on a uniform momentum grid and refined by bisection;
//! even-multiplicity touch-zeros are picked up separately from small local
//! minima and refined by golden-section search.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_arity, TwoBandModel};
use crate::numeric::{bisect, golden_min};

/// Default number of momentum-grid intervals for root scans.
pub const DEFAULT_K_RESOLUTION: usize = 4096;

/// Tolerance for classifying a finite-grid mode as k_c/k_0/k_1 by its
/// fidelity value.
pub const CLASS_TOLERANCE: f64 = 1e-8;

/// |g| below which a refined k_c candidate is accepted.
const KC_ACCEPT: f64 = 1e-12;

/// |d̂_i × d̂_f| below which a refined collinear (k_0/k_1) candidate is
/// accepted; this puts |g ∓ 1| below 1e-20.
const COLLINEAR_ACCEPT: f64 = 1e-10;

/// Pre-refinement detection threshold for touch-zero local minima.
const TOUCH_DETECT: f64 = 1e-8;

/// Mode classification of a single momentum by its fidelity value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModeClass {
    Kc,
    K0,
    K1,
    Generic,
}

impl ModeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModeClass::Kc => "kc",
            ModeClass::K0 => "k0",
            ModeClass::K1 => "k1",
            ModeClass::Generic => "generic",
        }
    }
}

/// Classify a mode by its quench fidelity against the special values
/// 0, √2/2 and 1 at [`CLASS_TOLERANCE`].
pub fn classify_fidelity(fq: f64) -> ModeClass {
    if fq <= CLASS_TOLERANCE {
        ModeClass::K0
    } else if (fq - 1.0).abs() <= CLASS_TOLERANCE {
        ModeClass::K1
    } else if (fq - FRAC_1_SQRT_2).abs() <= CLASS_TOLERANCE {
        ModeClass::Kc
    } else {
        ModeClass::Generic
    }
}

/// Alignment samples of one quench over a uniform momentum grid on [0, π].
struct AlignmentSamples {
    ks: Vec<f64>,
    g: Vec<f64>,
    /// z-component of d̂_i × d̂_f; the full cross product when both vectors
    /// are in-plane.
    cross_z: Vec<f64>,
    /// |d̂_i × d̂_f|.
    cross_mag: Vec<f64>,
    planar: bool,
}

fn sample_alignment(
    model: &dyn TwoBandModel,
    gamma_i: &[f64],
    gamma_f: &[f64],
    resolution: usize,
) -> Result<AlignmentSamples> {
    check_arity(model, gamma_i)?;
    check_arity(model, gamma_f)?;
    if resolution < 64 {
        return Err(Error::Domain(format!(
            "root-scan resolution must be at least 64, got {resolution}"
        )));
    }
    let n = resolution + 1;
    let mut ks = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut cross_z = Vec::with_capacity(n);
    let mut cross_mag = Vec::with_capacity(n);
    let mut max_dz: f64 = 0.0;
    for j in 0..n {
        let k = PI * j as f64 / resolution as f64;
        let d_i = model.dvector(gamma_i, k);
        let d_f = model.dvector(gamma_f, k);
        let u = d_i.unit().map_err(|e| e.at_k(k))?;
        let v = d_f.unit().map_err(|e| e.at_k(k))?;
        max_dz = max_dz.max(d_i.dz.abs()).max(d_f.dz.abs());
        ks.push(k);
        g.push((u[0] * v[0] + u[1] * v[1] + u[2] * v[2]).clamp(-1.0, 1.0));
        let cx = u[1] * v[2] - u[2] * v[1];
        let cy = u[2] * v[0] - u[0] * v[2];
        let cz = u[0] * v[1] - u[1] * v[0];
        cross_z.push(cz);
        cross_mag.push((cx * cx + cy * cy + cz * cz).sqrt());
    }
    Ok(AlignmentSamples {
        ks,
        g,
        cross_z,
        cross_mag,
        planar: max_dz < 1e-12,
    })
}

/// Roots of a sampled scalar function of momentum: sign changes refined by
/// bisection plus (optionally gated) touch-zeros refined by golden section.
///
/// `touch_gate`: refine a local minimum of |f| only when its sampled value is
/// already below this bound; `None` refines every local minimum, which the
/// non-planar collinearity search needs because |d̂_i × d̂_f| dips to zero
/// without a sign change.
fn scalar_roots<F: Fn(f64) -> f64>(
    ks: &[f64],
    values: &[f64],
    f: &F,
    accept_tol: f64,
    touch_gate: Option<f64>,
) -> (Vec<f64>, bool) {
    let n = values.len();
    let spacing = ks[1] - ks[0];
    let mut roots = Vec::new();
    let mut push_if_valid = |k: f64, fval: f64, roots: &mut Vec<f64>| {
        if fval.abs() <= accept_tol && k > 0.0 && k < PI {
            roots.push(k);
        }
    };
    for j in 0..n - 1 {
        let (va, vb) = (values[j], values[j + 1]);
        if va == 0.0 {
            push_if_valid(ks[j], 0.0, &mut roots);
        } else if va.signum() != vb.signum() && vb != 0.0 {
            let root = bisect(f, ks[j], ks[j + 1], va);
            push_if_valid(root, f(root), &mut roots);
        }
    }
    if values[n - 1] == 0.0 {
        push_if_valid(ks[n - 1], 0.0, &mut roots);
    }
    // Touch-zeros: interior local minima of |f| with no adjacent sign change.
    for j in 1..n - 1 {
        let m = values[j].abs();
        if m == 0.0 || m > values[j - 1].abs() || m > values[j + 1].abs() {
            continue;
        }
        if values[j - 1].signum() != values[j].signum()
            || values[j].signum() != values[j + 1].signum()
        {
            continue;
        }
        if let Some(gate) = touch_gate {
            if m > gate {
                continue;
            }
        }
        let (k, v) = golden_min(&|k| f(k).abs(), ks[j - 1], ks[j + 1], 1e-12);
        push_if_valid(k, v, &mut roots);
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut deduped: Vec<f64> = Vec::with_capacity(roots.len());
    let mut warning = false;
    for r in roots {
        match deduped.last() {
            Some(&prev) if r - prev < 1e-9 => {} // same root reached twice
            Some(&prev) if r - prev < spacing => {
                warning = true;
                deduped.push(r);
            }
            _ => deduped.push(r),
        }
    }
    (deduped, warning)
}

/// Outcome of a k_c root scan.
#[derive(Debug, Clone, Serialize)]
pub struct RootSearch {
    /// Strictly increasing momenta in (0, π) with |g| < 1e−12.
    pub roots: Vec<f64>,
    /// Set when two accepted roots fell within one grid spacing; the scan may
    /// be under-resolved.
    pub resolution_warning: bool,
}

/// All k ∈ (0, π) where the pre- and post-quench Bloch vectors are
/// perpendicular.
pub fn find_kc_roots(
    model: &dyn TwoBandModel,
    gamma_i: &[f64],
    gamma_f: &[f64],
    resolution: usize,
) -> Result<RootSearch> {
    let s = sample_alignment(model, gamma_i, gamma_f, resolution)?;
    Ok(kc_from_samples(model, gamma_i, gamma_f, &s))
}

fn kc_from_samples(
    model: &dyn TwoBandModel,
    gamma_i: &[f64],
    gamma_f: &[f64],
    s: &AlignmentSamples,
) -> RootSearch {
    let g_at = |k: f64| {
        model
            .dvector(gamma_i, k)
            .alignment(&model.dvector(gamma_f, k))
            .unwrap_or(f64::NAN)
    };
    let (roots, resolution_warning) =
        scalar_roots(&s.ks, &s.g, &g_at, KC_ACCEPT, Some(TOUCH_DETECT));
    RootSearch {
        roots,
        resolution_warning,
    }
}

/// Collinear-mode scan outcome: interior k_0/k_1 roots, or the degenerate
/// whole-line case of an identical quench where every mode is a k_1.
#[derive(Debug, Clone, Serialize)]
pub enum AlignmentRoots {
    Roots {
        k0: Vec<f64>,
        k1: Vec<f64>,
        resolution_warning: bool,
    },
    ContinuumK1,
}

/// All interior momenta where the Bloch vectors are antiparallel (k_0) or
/// parallel (k_1).
pub fn find_k0_k1_roots(
    model: &dyn TwoBandModel,
    gamma_i: &[f64],
    gamma_f: &[f64],
    resolution: usize,
) -> Result<AlignmentRoots> {
    let s = sample_alignment(model, gamma_i, gamma_f, resolution)?;
    Ok(k01_from_samples(model, gamma_i, gamma_f, &s))
}

fn k01_from_samples(
    model: &dyn TwoBandModel,
    gamma_i: &[f64],
    gamma_f: &[f64],
    s: &AlignmentSamples,
) -> AlignmentRoots {
    if s.g.iter().all(|&g| g >= 1.0 - 1e-12) {
        return AlignmentRoots::ContinuumK1;
    }
    let g_at = |k: f64| {
        model
            .dvector(gamma_i, k)
            .alignment(&model.dvector(gamma_f, k))
            .unwrap_or(f64::NAN)
    };
    let cross_at = |k: f64, planar: bool| -> f64 {
        let u = match model.dvector(gamma_i, k).unit() {
            Ok(u) => u,
            Err(_) => return f64::NAN,
        };
        let v = match model.dvector(gamma_f, k).unit() {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        let cz = u[0] * v[1] - u[1] * v[0];
        if planar {
            cz
        } else {
            let cx = u[1] * v[2] - u[2] * v[1];
            let cy = u[2] * v[0] - u[0] * v[2];
            (cx * cx + cy * cy + cz * cz).sqrt()
        }
    };
    let (roots, resolution_warning) = if s.planar {
        scalar_roots(
            &s.ks,
            &s.cross_z,
            &|k| cross_at(k, true),
            COLLINEAR_ACCEPT,
            Some(TOUCH_DETECT),
        )
    } else {
        // No sign information: every local minimum of |d̂_i × d̂_f| is a
        // candidate.
        scalar_roots(
            &s.ks,
            &s.cross_mag,
            &|k| cross_at(k, false),
            COLLINEAR_ACCEPT,
            None,
        )
    };
    let mut k0 = Vec::new();
    let mut k1 = Vec::new();
    for k in roots {
        if g_at(k) < 0.0 {
            k0.push(k);
        } else {
            k1.push(k);
        }
    }
    AlignmentRoots::Roots {
        k0,
        k1,
        resolution_warning,
    }
}

/// True when the quench admits a DQPT in the thermodynamic limit, i.e. when a
/// k_c-mode exists.
pub fn dqpt_exists(model: &dyn TwoBandModel, gamma_i: &[f64], gamma_f: &[f64]) -> Result<bool> {
    Ok(!find_kc_roots(model, gamma_i, gamma_f, DEFAULT_K_RESOLUTION)?
        .roots
        .is_empty())
}

/// Full special-mode census of one quench.
#[derive(Debug, Clone, Serialize)]
pub struct ModeReport {
    pub kc_roots: Vec<f64>,
    pub k0_roots: Vec<f64>,
    pub k1_roots: Vec<f64>,
    /// Fidelity factors of the decoupled k = 0, π modes, each 0 or 1, for
    /// models that have them.
    pub boundary_fidelities: Option<(u8, u8)>,
    /// Identical quench: every momentum is a k_1-mode.
    pub continuum_k1: bool,
    pub resolution_warning: bool,
}

impl ModeReport {
    pub fn n_kc(&self) -> usize {
        self.kc_roots.len()
    }

    /// Interior k_0 roots plus boundary modes with fidelity 0.
    pub fn n_k0(&self) -> usize {
        self.k0_roots.len() + self.boundary_zeros()
    }

    /// Interior k_1 roots plus boundary modes with fidelity 1. In the
    /// continuum-k_1 case this counts only the discrete contributions.
    pub fn n_k1(&self) -> usize {
        let boundary_ones = match self.boundary_fidelities {
            Some((f0, fpi)) => (f0 == 1) as usize + (fpi == 1) as usize,
            None => 0,
        };
        self.k1_roots.len() + boundary_ones
    }

    fn boundary_zeros(&self) -> usize {
        match self.boundary_fidelities {
            Some((f0, fpi)) => (f0 == 0) as usize + (fpi == 0) as usize,
            None => 0,
        }
    }

    pub fn dqpt_exists(&self) -> bool {
        !self.kc_roots.is_empty()
    }
}

/// Sufficient condition for a DQPT: the quench fidelity has at least one
/// k_0-mode and one k_1-mode (boundary modes included). Whenever this holds,
/// the alignment passes through zero between them, so a k_c-mode exists.
pub fn sufficient_condition_holds(report: &ModeReport) -> bool {
    report.n_k0() >= 1 && report.n_k1() >= 1
}

/// Compute a [`ModeReport`] for one quench with a single sampling pass.
pub fn mode_report(
    model: &dyn TwoBandModel,
    gamma_i: &[f64],
    gamma_f: &[f64],
    resolution: usize,
) -> Result<ModeReport> {
    let s = sample_alignment(model, gamma_i, gamma_f, resolution)?;
    let kc = kc_from_samples(model, gamma_i, gamma_f, &s);
    let k01 = k01_from_samples(model, gamma_i, gamma_f, &s);
    let boundary_fidelities = model.boundary_fidelities(gamma_i, gamma_f)?;
    let (k0_roots, k1_roots, continuum_k1, k01_warning) = match k01 {
        AlignmentRoots::Roots {
            k0,
            k1,
            resolution_warning,
        } => (k0, k1, false, resolution_warning),
        AlignmentRoots::ContinuumK1 => (Vec::new(), Vec::new(), true, false),
    };
    Ok(ModeReport {
        kc_roots: kc.roots,
        k0_roots,
        k1_roots,
        boundary_fidelities,
        continuum_k1,
        resolution_warning: kc.resolution_warning || k01_warning,
    })
}

/// One scan axis: which parameter component it varies and its sample points.
#[derive(Debug, Clone, Serialize)]
pub struct AxisSpec {
    pub index: usize,
    pub label: String,
    pub start: f64,
    pub stop: f64,
    pub samples: usize,
}

impl AxisSpec {
    pub fn new(index: usize, label: impl Into<String>, start: f64, stop: f64, samples: usize) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::Domain("axis range must be finite".into()));
        }
        if samples == 0 {
            return Err(Error::Domain("axis needs at least one sample".into()));
        }
        if samples > 1 && stop <= start {
            return Err(Error::Domain(format!(
                "axis range [{start}, {stop}] is empty"
            )));
        }
        Ok(Self {
            index,
            label: label.into(),
            start,
            stop,
            samples,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.samples == 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.samples - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.samples).map(|i| self.value(i)).collect()
    }
}

/// Mode counts of one scan cell.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CellCounts {
    pub n_kc: usize,
    pub n_k0: usize,
    pub n_k1: usize,
    pub dqpt_exists: bool,
    pub sufficient_condition: bool,
    pub continuum_k1: bool,
}

/// Per-cell scan outcome; cells on a critical line carry no counts.
#[derive(Debug, Clone, Serialize)]
pub enum CellOutcome {
    Counts(CellCounts),
    Critical,
    Failed(String),
}

/// Row-major grid of cell outcomes over two parameter axes.
#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub axis1: AxisSpec,
    pub axis2: AxisSpec,
    pub cells: Vec<CellOutcome>,
}

impl ScanResult {
    /// Cell at axis1 index `i`, axis2 index `j`.
    pub fn cell(&self, i: usize, j: usize) -> &CellOutcome {
        &self.cells[i * self.axis2.samples + j]
    }
}

fn evaluate_cell(
    model: &dyn TwoBandModel,
    gamma_i: &[f64],
    gamma_f: &[f64],
    resolution: usize,
) -> CellOutcome {
    if model.is_critical(gamma_f) {
        return CellOutcome::Critical;
    }
    match mode_report(model, gamma_i, gamma_f, resolution) {
        Ok(r) => CellOutcome::Counts(CellCounts {
            n_kc: r.n_kc(),
            n_k0: r.n_k0(),
            n_k1: r.n_k1(),
            dqpt_exists: r.dqpt_exists(),
            sufficient_condition: sufficient_condition_holds(&r),
            continuum_k1: r.continuum_k1,
        }),
        Err(Error::GapClosed { .. }) | Err(Error::CriticalBoundary { .. }) => CellOutcome::Critical,
        Err(e) => CellOutcome::Failed(e.to_string()),
    }
}

/// Scan a post-quench parameter plane into per-cell mode counts.
///
/// Cells are independent and evaluated in parallel; the result vector is
/// assembled in deterministic row-major order.
pub fn scan_phase_diagram(
    model: &dyn TwoBandModel,
    gamma_i: &[f64],
    gamma_f_base: &[f64],
    axis1: &AxisSpec,
    axis2: &AxisSpec,
    k_resolution: usize,
) -> Result<ScanResult> {
    check_arity(model, gamma_i)?;
    check_arity(model, gamma_f_base)?;
    if axis1.index >= model.arity() || axis2.index >= model.arity() {
        return Err(Error::Domain("axis parameter index out of range".into()));
    }
    if axis1.index == axis2.index {
        return Err(Error::Domain("scan axes must vary distinct parameters".into()));
    }
    if model.is_critical(gamma_i) {
        return Err(Error::Precondition(
            "pre-quench parameters sit on a critical line".into(),
        ));
    }
    let (v1, v2) = (axis1.values(), axis2.values());
    let cells: Vec<CellOutcome> = (0..v1.len() * v2.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / v2.len(), idx % v2.len());
            let mut gamma_f = gamma_f_base.to_vec();
            gamma_f[axis1.index] = v1[i];
            gamma_f[axis2.index] = v2[j];
            evaluate_cell(model, gamma_i, &gamma_f, k_resolution)
        })
        .collect();
    Ok(ScanResult {
        axis1: axis1.clone(),
        axis2: axis2.clone(),
        cells,
    })
}
