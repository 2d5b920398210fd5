//! Exact algebra of 2×2 Hermitian k-mode blocks H = d·σ + d₀·I.
//!
//! Everything downstream (echoes, fidelities, mode classification) reduces to
//! the d-vector of each momentum mode: its eigenpairs, overlaps between
//! eigenstates, and the closed-form propagator
//!
//!   e^{-iHt} = e^{-i d₀ t} [cos(|d|t)·I − i sin(|d|t)·(d̂·σ)],
//!
//! which is exact for the Pauli structure, so no numerical diagonalization
//! enters the time evolution.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gap threshold below which a k-mode counts as degenerate (gap-closing).
pub const GAP_TOLERANCE: f64 = 1e-12;

/// Pauli coefficients (d_x, d_y, d_z) plus the identity coefficient d₀ of a
/// two-band k-mode Hamiltonian.
///
/// d₀ shifts both bands identically: it contributes only a global phase to
/// the dynamics and is excluded from `norm` and the unit vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DVector {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub d0: f64,
}

impl DVector {
    pub fn new(dx: f64, dy: f64, dz: f64, d0: f64) -> Self {
        debug_assert!(
            dx.is_finite() && dy.is_finite() && dz.is_finite() && d0.is_finite(),
            "d-vector components must be finite"
        );
        Self { dx, dy, dz, d0 }
    }

    /// In-plane vector (d_x, d_y, 0, 0), the shape every chain model in this
    /// crate produces.
    pub fn planar(dx: f64, dy: f64) -> Self {
        Self::new(dx, dy, 0.0, 0.0)
    }

    /// |d| without the d₀ component.
    pub fn norm(&self) -> f64 {
        (self.dx * self.dx + self.dy * self.dy + self.dz * self.dz).sqrt()
    }

    /// True when the gap 2|d| is closed to within [`GAP_TOLERANCE`].
    pub fn is_degenerate(&self) -> bool {
        self.norm() <= GAP_TOLERANCE
    }

    /// Unit vector d̂ on the Bloch sphere.
    pub fn unit(&self) -> Result<[f64; 3]> {
        let r = self.norm();
        if r <= GAP_TOLERANCE {
            return Err(Error::GapClosed { norm: r, k: None });
        }
        Ok([self.dx / r, self.dy / r, self.dz / r])
    }

    /// Bloch-sphere alignment g = d̂·d̂′ ∈ [−1, 1], clamped against rounding.
    ///
    /// g = 0 marks a k_c-mode, g = −1 a k_0-mode and g = +1 a k_1-mode.
    pub fn alignment(&self, other: &DVector) -> Result<f64> {
        let a = self.unit()?;
        let b = other.unit()?;
        let g = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        debug_assert!(g.abs() <= 1.0 + 1e-14);
        Ok(g.clamp(-1.0, 1.0))
    }

    /// Assemble d·σ + d₀·I.
    pub fn matrix(&self) -> HermitianMatrix2 {
        HermitianMatrix2::from_dvector(self)
    }

    /// Lower-band eigenstate (eigenvalue d₀ − |d|), in canonical phase.
    pub fn ground_state(&self) -> Result<SpinorState> {
        let r = self.norm();
        if r <= GAP_TOLERANCE {
            return Err(Error::GapClosed { norm: r, k: None });
        }
        // Two algebraically equivalent eigenvector forms; pick the one whose
        // normalization 2r(r∓dz) stays away from zero.
        let (a, b) = if self.dz <= 0.0 {
            (C64::new(self.dz - r, 0.0), C64::new(self.dx, self.dy))
        } else {
            (C64::new(-self.dx, self.dy), C64::new(self.dz + r, 0.0))
        };
        Ok(SpinorState::canonical(a, b))
    }

    /// Upper-band eigenstate (eigenvalue d₀ + |d|), orthogonal to the ground
    /// state, in canonical phase.
    pub fn excited_state(&self) -> Result<SpinorState> {
        let r = self.norm();
        if r <= GAP_TOLERANCE {
            return Err(Error::GapClosed { norm: r, k: None });
        }
        let (a, b) = if self.dz >= 0.0 {
            (C64::new(self.dz + r, 0.0), C64::new(self.dx, self.dy))
        } else {
            (C64::new(self.dx, -self.dy), C64::new(r - self.dz, 0.0))
        };
        Ok(SpinorState::canonical(a, b))
    }

    /// Apply e^{-iHt} to a state via the closed-form propagator.
    ///
    /// Norm-preserving by construction; for |d| = 0 it degenerates to the
    /// pure phase e^{-i d₀ t}.
    pub fn evolve(&self, t: f64, state: &SpinorState) -> SpinorState {
        debug_assert!(t.is_finite());
        let phase = (-C64::i() * C64::from(self.d0 * t)).exp();
        let r = self.norm();
        if r <= GAP_TOLERANCE {
            return SpinorState {
                a: phase * state.a,
                b: phase * state.b,
            };
        }
        let (nx, ny, nz) = (self.dx / r, self.dy / r, self.dz / r);
        let (sin, cos) = (r * t).sin_cos();
        let i_sin = C64::i() * C64::from(sin);
        let a = C64::from(cos) * state.a
            - i_sin * (C64::from(nz) * state.a + C64::new(nx, -ny) * state.b);
        let b = C64::from(cos) * state.b
            + i_sin * (C64::from(nz) * state.b - C64::new(nx, ny) * state.a);
        SpinorState {
            a: phase * a,
            b: phase * b,
        }
    }
}

/// A normalized two-component state on the band basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorState {
    pub a: C64,
    pub b: C64,
}

impl SpinorState {
    /// Build from amplitudes, rejecting states more than 1e−12 off unit norm.
    pub fn new(a: C64, b: C64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("state norm {norm} is not 1")));
        }
        Ok(Self { a, b })
    }

    /// Normalize and fix the global phase: the largest-modulus amplitude is
    /// made real and non-negative, ties broken toward `a`.
    pub fn canonical(a: C64, b: C64) -> Self {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        debug_assert!(norm > 0.0, "cannot canonicalize the zero vector");
        let pivot = if a.norm() >= b.norm() { a } else { b };
        let phase = pivot / C64::from(pivot.norm());
        let scale = phase.conj() / C64::from(norm);
        Self {
            a: scale * a,
            b: scale * b,
        }
    }

    /// Re-express this state in the canonical global phase.
    pub fn canonicalized(&self) -> Self {
        Self::canonical(self.a, self.b)
    }

    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr()).sqrt()
    }

    /// Complex inner product ⟨self|other⟩.
    pub fn overlap(&self, other: &SpinorState) -> C64 {
        self.a.conj() * other.a + self.b.conj() * other.b
    }

    /// |⟨self|other⟩|, independent of either global phase.
    pub fn overlap_modulus(&self, other: &SpinorState) -> f64 {
        self.overlap(other).norm()
    }
}

/// A 2×2 Hermitian matrix, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix2 {
    m: [[C64; 2]; 2],
}

impl HermitianMatrix2 {
    /// d·σ + d₀·I; Hermitian by construction, trace 2·d₀.
    pub fn from_dvector(d: &DVector) -> Self {
        Self {
            m: [
                [C64::new(d.d0 + d.dz, 0.0), C64::new(d.dx, -d.dy)],
                [C64::new(d.dx, d.dy), C64::new(d.d0 - d.dz, 0.0)],
            ],
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Largest entry-wise deviation from the conjugate transpose.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Matrix-vector product H|s⟩ as raw (unnormalized) amplitudes.
    pub fn apply(&self, state: &SpinorState) -> (C64, C64) {
        (
            self.m[0][0] * state.a + self.m[0][1] * state.b,
            self.m[1][0] * state.a + self.m[1][1] * state.b,
        )
    }

    /// ⟨s|H|s⟩.
    pub fn expectation(&self, state: &SpinorState) -> C64 {
        let (ha, hb) = self.apply(state);
        state.a.conj() * ha + state.b.conj() * hb
    }

    /// ⟨s|H²|s⟩ = ‖H|s⟩‖², real because H is Hermitian.
    pub fn squared_expectation(&self, state: &SpinorState) -> f64 {
        let (ha, hb) = self.apply(state);
        ha.norm_sqr() + hb.norm_sqr()
    }
}

/// Largest entry magnitude of the anticommutator {H₁, H₂} = H₁H₂ + H₂H₁.
pub fn anticommutator_defect(h1: &HermitianMatrix2, h2: &HermitianMatrix2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut entry = C64::new(0.0, 0.0);
            for l in 0..2 {
                entry += h1.m[i][l] * h2.m[l][j] + h2.m[i][l] * h1.m[l][j];
            }
            worst = worst.max(entry.norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    /// Eigenvalues of a 2×2 matrix straight from the characteristic
    /// polynomial, independent of the d-vector route.
    fn eigvals(m: &HermitianMatrix2) -> (f64, f64) {
        let tr = m.trace();
        let det = m.entry(0, 0) * m.entry(1, 1) - m.entry(0, 1) * m.entry(1, 0);
        let disc = (tr * tr - C64::from(4.0) * det).sqrt();
        let lo = (tr - disc) / C64::from(2.0);
        let hi = (tr + disc) / C64::from(2.0);
        assert!(lo.im.abs() < 1e-12 && hi.im.abs() < 1e-12);
        (lo.re, hi.re)
    }

    #[test]
    fn zero_dvector_builds_zero_matrix() {
        let m = DVector::new(0.0, 0.0, 0.0, 0.0).matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.entry(i, j), C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn sigma_z_matrix() {
        let m = DVector::new(0.0, 0.0, 1.0, 0.0).matrix();
        assert_eq!(m.entry(0, 0), C64::new(1.0, 0.0));
        assert_eq!(m.entry(1, 1), C64::new(-1.0, 0.0));
        assert_eq!(m.entry(0, 1), C64::new(0.0, 0.0));
    }

    #[test]
    fn planar_matrix_matches_direct_eigendecomposition() {
        // Off-diagonal entries 2 ± 1.6i, zero diagonal.
        let d = DVector::new(2.0, -1.6, 0.0, 0.0);
        let m = d.matrix();
        assert_eq!(m.entry(0, 1), C64::new(2.0, 1.6));
        assert_eq!(m.entry(1, 0), C64::new(2.0, -1.6));
        assert_eq!(m.entry(0, 0), C64::new(0.0, 0.0));
        let (lo, hi) = eigvals(&m);
        approx(lo, -(4.0f64 + 2.56).sqrt(), 1e-12);
        approx(hi, (4.0f64 + 2.56).sqrt(), 1e-12);
        assert!(m.hermiticity_defect() == 0.0);
    }

    #[test]
    fn sigma_z_eigenstates() {
        let d = DVector::new(0.0, 0.0, 1.0, 0.0);
        let gs = d.ground_state().unwrap();
        assert!((gs.a.norm()) < 1e-15 && (gs.b - C64::from(1.0)).norm() < 1e-15);
        let es = d.excited_state().unwrap();
        assert!((es.a - C64::from(1.0)).norm() < 1e-15 && es.b.norm() < 1e-15);
    }

    #[test]
    fn sigma_x_eigenstates() {
        let d = DVector::new(1.0, 0.0, 0.0, 0.0);
        let gs = d.ground_state().unwrap();
        approx(gs.a.re, FRAC_1_SQRT_2, 1e-15);
        approx(gs.b.re, -FRAC_1_SQRT_2, 1e-15);
        let es = d.excited_state().unwrap();
        approx(es.a.re, FRAC_1_SQRT_2, 1e-15);
        approx(es.b.re, FRAC_1_SQRT_2, 1e-15);
    }

    #[test]
    fn d0_does_not_move_eigenstates() {
        let base = DVector::new(2.0, -1.6, 0.0, 0.0).ground_state().unwrap();
        let shifted = DVector::new(2.0, -1.6, 0.0, 5.0).ground_state().unwrap();
        assert!((base.a - shifted.a).norm() < 1e-15);
        assert!((base.b - shifted.b).norm() < 1e-15);
    }

    #[test]
    fn eigenstates_are_orthonormal() {
        let d = DVector::new(0.3, -1.2, 0.7, 0.4);
        let gs = d.ground_state().unwrap();
        let es = d.excited_state().unwrap();
        approx(gs.norm(), 1.0, 1e-12);
        approx(es.norm(), 1.0, 1e-12);
        assert!(gs.overlap_modulus(&es) < 1e-12);
    }

    #[test]
    fn gap_closed_is_flagged() {
        let d = DVector::new(0.0, 0.0, 0.0, 1.0);
        assert!(matches!(d.ground_state(), Err(Error::GapClosed { .. })));
        assert!(matches!(d.unit(), Err(Error::GapClosed { .. })));
    }

    #[test]
    fn overlap_of_sigma_z_and_sigma_x_ground_states() {
        let g1 = DVector::new(0.0, 0.0, 1.0, 0.0).ground_state().unwrap();
        let g2 = DVector::new(1.0, 0.0, 0.0, 0.0).ground_state().unwrap();
        approx(g1.overlap_modulus(&g2), FRAC_1_SQRT_2, 1e-15);
        approx(g1.overlap_modulus(&g1), 1.0, 1e-15);
    }

    #[test]
    fn evolve_at_zero_time_is_identity() {
        let d = DVector::new(0.4, 0.9, -0.2, 0.7);
        let s = d.ground_state().unwrap();
        let out = d.evolve(0.0, &s);
        assert!((out.a - s.a).norm() < 1e-15 && (out.b - s.b).norm() < 1e-15);
    }

    #[test]
    fn eigenstate_evolution_is_a_phase() {
        let d = DVector::new(0.0, 0.0, 1.0, 0.0);
        let s = SpinorState::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        let out = d.evolve(PI, &s);
        // e^{-i(-1)π}|s⟩ = −|s⟩
        assert!((out.b + C64::from(1.0)).norm() < 1e-12);
        approx(out.overlap_modulus(&s), 1.0, 1e-12);
    }

    #[test]
    fn half_period_propagator_is_minus_identity() {
        let d = DVector::new(1.1, -0.3, 0.6, 0.0);
        let t = PI / d.norm();
        for s in [
            SpinorState::new(C64::from(1.0), C64::from(0.0)).unwrap(),
            SpinorState::new(C64::from(0.0), C64::from(1.0)).unwrap(),
        ] {
            let out = d.evolve(t, &s);
            assert!((out.a + s.a).norm() < 1e-12 && (out.b + s.b).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_evolution_is_a_pure_phase() {
        let d = DVector::new(0.0, 0.0, 0.0, 0.8);
        let s = SpinorState::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let out = d.evolve(2.0, &s);
        let phase = (-C64::i() * C64::from(1.6)).exp();
        assert!((out.a - phase * s.a).norm() < 1e-14);
        assert!((out.b - phase * s.b).norm() < 1e-14);
    }

    #[test]
    fn anticommutator_of_sigma_z_and_sigma_x_vanishes() {
        let hz = DVector::new(0.0, 0.0, 1.0, 0.0).matrix();
        let hx = DVector::new(1.0, 0.0, 0.0, 0.0).matrix();
        assert_eq!(anticommutator_defect(&hz, &hx), 0.0);
    }

    #[test]
    fn non_unit_state_is_rejected() {
        assert!(SpinorState::new(C64::from(1.0), C64::from(1.0)).is_err());
    }
}
