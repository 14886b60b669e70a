//! Quadrature helpers: Gauss–Legendre rules, double-exponential (exp-sinh)
//! integration on the half line, and periodic trapezoid sums.

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1],
/// computed by Newton iteration on P_n from the Chebyshev initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Memoized Gauss–Legendre rule (node construction is O(n²)).
pub fn gauss_legendre_cached(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n).or_insert_with(|| Arc::new(gauss_legendre(n))).clone()
}

/// ∫_a^b f(x) dx by an n-point Gauss–Legendre rule.
pub fn integrate_gl<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let rule = gauss_legendre_cached(n);
    let (nodes, weights) = (&rule.0, &rule.1);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(weights.iter()) {
        sum += *w * f(mid + half * x);
    }
    sum * half
}

/// ∫_0^∞ f(x) dx by exp-sinh substitution x = exp((π/2) sinh t), with the
/// step halved until two successive levels agree to `tol` (relative).
///
/// Suited to integrands with only polynomial decay x^{−1−δ}, δ > 0: the
/// substitution turns both tails double-exponential.
pub fn exp_sinh<F: Fn(f64) -> Complex64>(f: F, tol: f64) -> Result<Complex64> {
    const T_MAX: f64 = 5.2;
    let eval = |t: f64| -> Complex64 {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let x = (half_pi * t.sinh()).exp();
        let dx = half_pi * t.cosh() * x;
        if !x.is_finite() || !dx.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let v = f(x) * dx;
        if v.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let mut h = 0.65;
    let mut n = (T_MAX / h) as i64;
    let mut prev = {
        let mut s = eval(0.0);
        for k in 1..=n {
            s += eval(k as f64 * h) + eval(-(k as f64) * h);
        }
        s * h
    };
    for _ in 0..10 {
        // refine: new points are the odd multiples of h/2
        h *= 0.5;
        n *= 2;
        let mut s = Complex64::new(0.0, 0.0);
        let mut k = 1;
        while k <= n {
            s += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let cur = prev * 0.5 + s * h;
        let err = (cur - prev).norm();
        if err <= tol * cur.norm().max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged(tol))
}

/// (1/n) Σ_k f(k/n): the trapezoid rule for 1-periodic functions, which is
/// spectrally accurate for smooth periodic integrands.
pub fn trapezoid_periodic<F: FnMut(f64) -> Complex64>(mut f: F, n: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        sum += f(k as f64 / n as f64);
    }
    sum / n as f64
}
