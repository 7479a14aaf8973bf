//! Adaptive Simpson quadrature, 1-D and tensor 2-D.

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adapt(&f, a, fa, b, fb, m, fm, whole, tol, 40)
}

/// Integrates `f(x, y)` over the rectangle `[x0,x1] x [y0,y1]` to roughly the
/// given absolute tolerance (inner sweeps run at a proportionally tighter one).
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    tol: f64,
) -> f64 {
    if x0 == x1 || y0 == y1 {
        return 0.0;
    }
    let inner_tol = tol / (x1 - x0).abs().max(1.0) * 0.5;
    integrate_1d(
        |x| integrate_1d(|y| f(x, y), y0, y1, inner_tol),
        x0,
        x1,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate_1d(|x| 3.0 * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 8.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_area() {
        // int exp(-x^2) over R ~ sqrt(pi); truncate at +-8.
        let v = integrate_1d(|x| (-x * x).exp(), -8.0, 8.0, 1e-12);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn product_2d() {
        let v = integrate_2d(|x, y| x * y, 0.0, 1.0, 0.0, 2.0, 1e-12);
        assert!((v - 1.0).abs() < 1e-8);
    }
}
