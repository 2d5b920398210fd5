//! Scalar root-finding and quadrature helpers used by the mode scans and the
//! thermodynamic-limit rate functions.

/// Bisection on a bracketed sign change. Shrinks the bracket to machine
/// resolution and returns the midpoint; the caller decides whether the
/// residual |f| is small enough to accept.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    debug_assert!(a < b);
    for _ in 0..128 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // interval at floating-point resolution
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimization of `f` on [a, b]; returns (argmin, min).
/// Assumes `f` is unimodal on the bracket.
pub fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Adaptive Simpson quadrature with absolute tolerance.
///
/// Integrable endpoint singularities are fine as long as the caller offsets
/// the limits off the singular abscissae; NaN from the integrand propagates
/// to the result.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, 64)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || m <= a || m >= b {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrate `f` over [a, b] split at `cuts` (singular abscissae), nudging
/// each segment end by `offset` so singular points are never evaluated.
pub fn integrate_with_cuts<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    cuts: &[f64],
    abs_tol: f64,
) -> f64 {
    const OFFSET: f64 = 1e-13;
    let mut edges = vec![a];
    for &c in cuts {
        if c > a && c < b {
            edges.push(c);
        }
    }
    edges.push(b);
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let seg_tol = abs_tol / edges.len() as f64;
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += adaptive_simpson(f, w[0] + OFFSET, w[1] - OFFSET, seg_tol);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bisect_finds_cosine_root() {
        let f = |x: f64| x.cos();
        let root = bisect(&f, 1.0, 2.0, f(1.0));
        assert!((root - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn golden_min_finds_parabola_vertex() {
        let (x, v) = golden_min(&|x: f64| (x - 0.3) * (x - 0.3) + 2.0, -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-10);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn simpson_integrates_sine() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, PI, 1e-10);
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn log_singularity_is_integrable() {
        // ∫₀¹ ln x dx = −1
        let v = integrate_with_cuts(&|x: f64| x.ln(), 0.0, 1.0, &[], 1e-9);
        assert!((v + 1.0).abs() < 1e-7, "got {v}");
    }

    #[test]
    fn interior_cut_is_respected() {
        // ∫₀² ln|x−1| dx = −2
        let v = integrate_with_cuts(&|x: f64| (x - 1.0).abs().ln(), 0.0, 2.0, &[1.0], 1e-9);
        assert!((v + 2.0).abs() < 1e-7, "got {v}");
    }
}
