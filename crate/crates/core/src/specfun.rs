//! Cylindrical Bessel functions of integer order and real argument.
//!
//! `J_n` comes from Miller's backward recurrence normalized by
//! `J_0 + 2 Σ J_{2k} = 1`. `Y_0` and `Y_1` follow from Neumann series over the
//! same `J` sequence; higher `Y_n` and `K_n` use upward recurrence, which is
//! stable for both. `I_n` is summed from its (positive) power series, and
//! `K_0`, `K_1` use the power series for small arguments and a trapezoidal
//! rule on `∫ exp(−x cosh t) cosh(νt) dt` otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest supported order.
pub const MAX_ORDER: usize = 60;
/// Largest supported argument.
pub const MAX_ARGUMENT: f64 = 200.0;
const OVERFLOW: f64 = 1e300;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecialFunctionError {
    #[error("argument {x} outside the domain of {function}")]
    Domain { function: &'static str, x: f64 },
    #[error("order {order} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge { order: usize },
    #[error("{function}({order}, {x}) overflows")]
    Overflow { function: &'static str, order: usize, x: f64 },
}

type Result<T> = std::result::Result<T, SpecialFunctionError>;

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(SpecialFunctionError::OrderTooLarge { order });
    }
    Ok(())
}

fn check_positive(function: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() || x > MAX_ARGUMENT {
        return Err(SpecialFunctionError::Domain { function, x });
    }
    Ok(())
}

fn check_nonnegative(function: &'static str, x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() || x > MAX_ARGUMENT {
        return Err(SpecialFunctionError::Domain { function, x });
    }
    Ok(())
}

fn check_overflow(function: &'static str, order: usize, x: f64, value: f64) -> Result<f64> {
    if !value.is_finite() || value.abs() > OVERFLOW {
        return Err(SpecialFunctionError::Overflow { function, order, x });
    }
    Ok(value)
}

/// `J_0(x), …, J_{n_max}(x)` plus enough higher orders for the Neumann series.
///
/// The returned vector has length at least `n_max + 1`; trailing entries are
/// negligibly small.
fn bessel_j_sequence(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    let reach = (n_max as f64).max(x);
    let mut start = (reach + 30.0 + 10.0 * reach.cbrt()) as usize;
    start += start % 2;
    let mut values = vec![0.0; start + 2];
    let mut next = 0.0;
    let mut current = 1e-300;
    let mut norm = 0.0;
    for m in (1..=start).rev() {
        values[m] = current;
        if m % 2 == 0 {
            norm += 2.0 * current;
        }
        let prev = 2.0 * m as f64 / x * current - next;
        next = current;
        current = prev;
        if current.abs() > 1e250 {
            for v in values[m..].iter_mut() {
                *v *= 1e-250;
            }
            next *= 1e-250;
            current *= 1e-250;
            norm *= 1e-250;
        }
    }
    values[0] = current;
    norm += current;
    for v in values.iter_mut() {
        *v /= norm;
    }
    values.truncate(start.max(n_max + 1));
    values
}

/// `(J_0, J_1, Y_0, Y_1)` at `x > 0` from a single Miller sweep.
fn j01_y01(x: f64) -> (f64, f64, f64, f64) {
    let j = bessel_j_sequence(1, x);
    let log_term = (x / 2.0).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = 2.0 / PI * (log_term * j[0] - 2.0 * s0);
    let y1 = -2.0 / PI * (j[0] / x - log_term * j[1] - s1);
    (j[0], j[1], y0, y1)
}

/// Bessel function of the first kind `J_n(x)`, `x ≥ 0`.
pub fn bessel_j(n: usize, x: f64) -> Result<f64> {
    check_order(n)?;
    check_nonnegative("J", x)?;
    Ok(bessel_j_sequence(n, x)[n])
}

/// `J_0(x), …, J_{n_max}(x)`.
pub fn bessel_j_all(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_order(n_max)?;
    check_nonnegative("J", x)?;
    let mut v = bessel_j_sequence(n_max, x);
    v.truncate(n_max + 1);
    Ok(v)
}

/// `Y_0(x), …, Y_{n_max}(x)`.
pub fn bessel_y_all(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_order(n_max)?;
    check_positive("Y", x)?;
    let (_, _, y0, y1) = j01_y01(x);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(y0);
    if n_max >= 1 {
        out.push(y1);
    }
    for n in 1..n_max {
        let next = 2.0 * n as f64 / x * out[n] - out[n - 1];
        out.push(check_overflow("Y", n + 1, x, next)?);
    }
    Ok(out)
}

/// Bessel function of the second kind `Y_n(x)`, `x > 0`.
pub fn bessel_y(n: usize, x: f64) -> Result<f64> {
    Ok(bessel_y_all(n, x)?[n])
}

/// Hankel function `H^{(1)}_n(x) = J_n(x) + i Y_n(x)`.
pub fn hankel1(n: usize, x: f64) -> Result<Complex64> {
    Ok(Complex64::new(bessel_j(n, x)?, bessel_y(n, x)?))
}

/// `H^{(1)}_0(x), …, H^{(1)}_{n_max}(x)`.
pub fn hankel1_all(n_max: usize, x: f64) -> Result<Vec<Complex64>> {
    let j = bessel_j_all(n_max, x)?;
    let y = bessel_y_all(n_max, x)?;
    Ok(j.into_iter().zip(y).map(|(a, b)| Complex64::new(a, b)).collect())
}

/// `(H^{(1)}_0(x), H^{(1)}_1(x))` for kernel evaluation; `x` must be positive.
pub fn hankel01(x: f64) -> (Complex64, Complex64) {
    let (j0, j1, y0, y1) = j01_y01(x);
    (Complex64::new(j0, y0), Complex64::new(j1, y1))
}

/// `(J_0(x), J_1(x))` for kernel evaluation.
pub fn bessel_j01(x: f64) -> (f64, f64) {
    let j = bessel_j_sequence(1, x);
    (j[0], j[1])
}

/// Derivative `J_n'(x)`.
pub fn bessel_j_prime(n: usize, x: f64) -> Result<f64> {
    let j = bessel_j_all(n + 1, x)?;
    Ok(if n == 0 { -j[1] } else { 0.5 * (j[n - 1] - j[n + 1]) })
}

/// Derivative `H^{(1)'}_n(x)`.
pub fn hankel1_prime(n: usize, x: f64) -> Result<Complex64> {
    let h = hankel1_all(n + 1, x)?;
    Ok(if n == 0 { -h[1] } else { 0.5 * (h[n - 1] - h[n + 1]) })
}

/// Modified Bessel function of the first kind `I_n(x)`, `x ≥ 0`.
pub fn bessel_i(n: usize, x: f64) -> Result<f64> {
    check_order(n)?;
    check_nonnegative("I", x)?;
    check_overflow("I", n, x, bessel_i_series(n, x))
}

fn bessel_i_series(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = 1.0;
    for m in 1..=n {
        term *= half / m as f64;
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + n as f64));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        k += 1.0;
    }
    sum
}

/// `(K_0(x), K_1(x))` for `x > 0`.
fn bessel_k01(x: f64) -> (f64, f64) {
    if x <= 2.0 {
        let half = 0.5 * x;
        let q = half * half;
        let log_term = half.ln();
        let i0 = bessel_i_series(0, x);
        let i1 = bessel_i_series(1, x);
        // K_0 = −ln(x/2) I_0 + Σ ψ(k+1) q^k/(k!)²
        // K_1 = 1/x + ln(x/2) I_1 − (x/4) Σ (ψ(k+1)+ψ(k+2)) q^k/(k!(k+1)!)
        let mut psi_k1 = -EULER_GAMMA;
        let mut term0 = 1.0;
        let mut term1 = 1.0;
        let mut sum0 = psi_k1 * term0;
        let mut sum1 = (2.0 * psi_k1 + 1.0) * term1;
        for k in 1..60 {
            let kf = k as f64;
            psi_k1 += 1.0 / kf;
            let psi_k2 = psi_k1 + 1.0 / (kf + 1.0);
            term0 *= q / (kf * kf);
            term1 *= q / (kf * (kf + 1.0));
            sum0 += psi_k1 * term0;
            sum1 += (psi_k1 + psi_k2) * term1;
            if term0 < 1e-18 && term1 < 1e-18 {
                break;
            }
        }
        let k0 = -log_term * i0 + sum0;
        let k1 = 1.0 / x + log_term * i1 - 0.5 * half * sum1;
        (k0, k1)
    } else {
        // exp(−x cosh t) < 1e−320 once x cosh t > 740
        let t_max = (740.0 / x).acosh().max(1.0);
        let h = 0.05;
        let steps = (t_max / h).ceil() as usize;
        let mut k0 = 0.5 * (-x).exp();
        let mut k1 = k0;
        for s in 1..=steps {
            let t = s as f64 * h;
            let e = (-x * t.cosh()).exp();
            k0 += e;
            k1 += e * t.cosh();
        }
        (k0 * h, k1 * h)
    }
}

/// `K_0(x), …, K_{n_max}(x)`.
pub fn bessel_k_all(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_order(n_max)?;
    check_positive("K", x)?;
    let (k0, k1) = bessel_k01(x);
    let mut out = vec![check_overflow("K", 0, x, k0)?];
    if n_max >= 1 {
        out.push(check_overflow("K", 1, x, k1)?);
    }
    for n in 1..n_max {
        let next = out[n - 1] + 2.0 * n as f64 / x * out[n];
        out.push(check_overflow("K", n + 1, x, next)?);
    }
    Ok(out)
}

/// Modified Bessel function of the second kind `K_n(x)`, `x > 0`.
pub fn bessel_k(n: usize, x: f64) -> Result<f64> {
    Ok(bessel_k_all(n, x)?[n])
}

/// `(I_0, I_1, K_0, K_1)` for kernel evaluation at `x > 0`.
pub fn modified_bessel01(x: f64) -> (f64, f64, f64, f64) {
    let (k0, k1) = bessel_k01(x);
    (bessel_i_series(0, x), bessel_i_series(1, x), k0, k1)
}

/// First positive zero of `J_0`.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// Smallest wavenumber `k` with `k²` a Dirichlet eigenvalue of `−Δ` on a disc of radius `a`.
pub fn first_dirichlet_eigen_wavenumber(radius: f64) -> f64 {
    assert!(radius > 0.0, "disc radius must be positive");
    J0_FIRST_ZERO / radius
}
