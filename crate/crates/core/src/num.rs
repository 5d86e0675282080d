//! Shared numerics: adaptive quadrature, root bracketing, concave line search,
//! and the fixed float format used by report files.

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
///
/// Deterministic: the refinement order depends only on `(a, b, tol)` and the
/// integrand values, never on timing or threads.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson_rule(a, b, fa, fm, fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

fn simpson_rule(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
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
    let left = simpson_rule(a, m, fa, flm, fm);
    let right = simpson_rule(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Bisection for a root of `f` on `[lo, hi]`, assuming `f(lo)` and `f(hi)`
/// have opposite signs. Shrinks the bracket to `width` and returns its midpoint.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, width: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    let mut sign_lo = flo.is_sign_negative();
    for _ in 0..200 {
        if hi - lo <= width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.is_sign_negative() == sign_lo {
            lo = mid;
            flo = fm;
            sign_lo = flo.is_sign_negative();
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section maximization of a concave (or unimodal) function on `[a, b]`.
/// Returns `(argmax, max)` once the bracket width falls below `tol`.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..120 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Standard normal draw by Box-Muller; keeps the dependency surface small and
/// the stream layout stable.
pub fn standard_normal<R: rand::Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Format a float like C's `%.12g`: 12 significant digits, trailing zeros
/// stripped, scientific notation outside the fixed-point range.
pub fn fmt_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let exp = x.abs().log10().floor() as i32;
    // %g picks %e when exponent < -4 or >= precision.
    if exp < -4 || exp >= 12 {
        let s = format!("{:.*e}", 11, x);
        // Rust renders "1.5e3"; printf renders "1.5e+03".
        let (mantissa, e) = s.split_once('e').expect("exponent present");
        let mantissa = strip_trailing_zeros(mantissa);
        let e_val: i32 = e.parse().expect("valid exponent");
        format!("{}e{}{:02}", mantissa, if e_val < 0 { '-' } else { '+' }, e_val.abs())
    } else {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        strip_trailing_zeros(&s).to_string()
    }
}

fn strip_trailing_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simpson_matches_closed_forms() {
        let i = adaptive_simpson(&|t: f64| t * t, 0.0, 1.0, 1e-12);
        assert_relative_eq!(i, 1.0 / 3.0, max_relative = 1e-12);
        let i = adaptive_simpson(&|t: f64| (-t).exp(), 0.0, 50.0, 1e-12);
        assert_relative_eq!(i, 1.0, max_relative = 1e-10);
        let i = adaptive_simpson(&|t: f64| t.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert_relative_eq!(i, 2.0, max_relative = 1e-10);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(&|t: f64| t * t - 2.0, 0.0, 2.0, 1e-12);
        assert_relative_eq!(r, std::f64::consts::SQRT_2, epsilon = 1e-11);
    }

    #[test]
    fn golden_max_finds_parabola_peak() {
        // Argmax of a smooth peak resolves to ~sqrt(machine eps) only.
        let (x, v) = golden_max(&|t: f64| -(t - 0.3) * (t - 0.3) + 2.0, -4.0, 5.0, 1e-10);
        assert_relative_eq!(x, 0.3, epsilon = 1e-6);
        assert_relative_eq!(v, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn g12_format_matches_printf() {
        assert_eq!(fmt_g12(0.0), "0");
        assert_eq!(fmt_g12(1.0), "1");
        assert_eq!(fmt_g12(-1.5), "-1.5");
        assert_eq!(fmt_g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g12(1e-5), "1e-05");
        assert_eq!(fmt_g12(1.25e13), "1.25e+13");
        assert_eq!(fmt_g12(0.0001), "0.0001");
        assert_eq!(fmt_g12(123456789012.0), "123456789012");
    }
}
