//! Adaptive Simpson quadrature for smooth 1-d integrands.

/// ∫_a^b f(x) dx with absolute tolerance `tol`, by recursive interval
/// bisection with Richardson error control.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &dyn Fn(f64) -> f64,
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
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        return left + right + err / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(&|x| x * x * x, 0.0, 2.0, 1e-12);
        assert_abs_diff_eq!(v, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn oscillatory() {
        let v = adaptive_simpson(&|x| (10.0 * x).sin(), 0.0, 1.0, 1e-12);
        assert_abs_diff_eq!(v, (1.0 - (10.0f64).cos()) / 10.0, epsilon = 1e-11);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(adaptive_simpson(&|x| x, 3.0, 3.0, 1e-12), 0.0);
    }

    #[test]
    fn reversed_interval_is_signed() {
        let fwd = adaptive_simpson(&|x| x.exp(), 0.0, 1.0, 1e-12);
        let rev = adaptive_simpson(&|x| x.exp(), 1.0, 0.0, 1e-12);
        assert_abs_diff_eq!(fwd, -rev, epsilon = 1e-12);
        assert_abs_diff_eq!(fwd, std::f64::consts::E - 1.0, epsilon = 1e-11);
    }
}
