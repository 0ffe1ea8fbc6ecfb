//! Small numerical kernels: geometric grids, log-domain sums, 1-D searches
//! and a tanh-sinh rule for endpoint-singular integrals.

/// `n` geometrically spaced points from `a` to `b` inclusive.
pub fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a && n >= 2);
    let (la, lb) = (a.ln(), b.ln());
    let step = (lb - la) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == 0 {
                a
            } else if i == n - 1 {
                b
            } else {
                (la + step * i as f64).exp()
            }
        })
        .collect()
}

/// ln(e^a + e^b) without overflow.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// ln(e^a - e^b) for a >= b.
pub fn log_sub(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if b >= a {
        return f64::NEG_INFINITY;
    }
    a + (-(b - a).exp()).ln_1p()
}

/// ln of the integral over [u0, u1] of a positive function whose logarithm is
/// linear between the endpoint values `lg0`, `lg1` (exact for power laws
/// under the substitution s = e^u).
pub fn log_expfit_segment(u0: f64, u1: f64, lg0: f64, lg1: f64) -> f64 {
    let du = u1 - u0;
    if lg0 == f64::NEG_INFINITY || lg1 == f64::NEG_INFINITY {
        // exponential fit degenerates; use the trapezoid
        return du.ln() + log_add(lg0, lg1) - std::f64::consts::LN_2;
    }
    let d = lg1 - lg0;
    if d.abs() < 1e-8 {
        return du.ln() + lg0 + 0.5 * d;
    }
    let (hi, lo) = if d > 0.0 { (lg1, lg0) } else { (lg0, lg1) };
    du.ln() + log_sub(hi, lo) - d.abs().ln()
}

/// Median of a slice (copied and sorted); NaN-free input expected.
pub fn median(xs: &[f64]) -> f64 {
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Golden-section maximisation of a unimodal `f` on [a, b].
/// Returns (argmax, max).
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, rtol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= rtol * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Bisection for an increasing predicate boundary: `pred(lo)` false,
/// `pred(hi)` true. Returns the final bracket.
pub fn bisect_bool<F: FnMut(f64) -> bool>(mut pred: F, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Tanh-sinh quadrature of `f` over (a, b); tolerant of integrable endpoint
/// singularities because nodes never touch the endpoints.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut total = 0.0;
    let mut prev = f64::NAN;
    let mut h = 0.5;
    let mut first = true;
    for _level in 0..10 {
        let mut sum = 0.0;
        let step = if first { 1 } else { 2 };
        let start = if first { 0 } else { 1 };
        let mut k = start;
        loop {
            let t = k as f64 * h;
            let sh = 0.5 * std::f64::consts::PI * t.sinh();
            let ch = 0.5 * std::f64::consts::PI * t.cosh();
            let w = ch / sh.cosh().powi(2);
            // distance from the endpoints, computed without cancellation
            let dist = half / (sh.exp() * sh.cosh());
            let xr = b - dist;
            let xl = a + dist;
            let (right_ok, left_ok) = (xr < b, xl > a);
            if w < 1e-300 || !(right_ok || left_ok) {
                break;
            }
            let term = if k == 0 {
                f(mid) * w
            } else {
                let fr = if right_ok { f(xr) } else { 0.0 };
                let fl = if left_ok { f(xl) } else { 0.0 };
                (fr + fl) * w
            };
            if !term.is_finite() {
                break;
            }
            sum += term;
            if k > 0 && term.abs() < 1e-18 * sum.abs() && t > 3.0 {
                break;
            }
            k += step;
        }
        if first {
            total = sum * h;
            first = false;
        } else {
            total = 0.5 * total + sum * h;
        }
        let est = total * half;
        if (est - prev).abs() <= 1e-14 * est.abs() {
            return est;
        }
        prev = est;
        h *= 0.5;
    }
    total * half
}
