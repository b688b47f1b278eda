//! The 2D fundamental solution `Φ(x,y) = (i/4) H₀⁽¹⁾(k|x−y|)` and its
//! wavenumber-`i` counterpart `K₀(|x−y|)/2π`, split for log-singular quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::specfun::{bessel_j01, hankel01, modified_bessel01, EULER_GAMMA};

/// Wavenumber of a Helmholtz kernel: a positive real `k` or the imaginary unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wavenumber {
    Real(f64),
    Imaginary,
}

impl Wavenumber {
    /// `k²`, which is `−1` for the imaginary wavenumber.
    pub fn squared(self) -> f64 {
        match self {
            Wavenumber::Real(k) => k * k,
            Wavenumber::Imaginary => -1.0,
        }
    }

    pub fn real(self) -> Option<f64> {
        match self {
            Wavenumber::Real(k) => Some(k),
            Wavenumber::Imaginary => None,
        }
    }
}

/// Kernel values at one separation `r > 0`.
///
/// With `Φ(r) = A(r) ln r² + B(r)`, `log_coeff` is `A(r)` and `dlog_coeff` is `A'(r)`.
#[derive(Debug, Clone, Copy)]
pub struct KernelValues {
    pub phi: Complex64,
    pub dphi: Complex64,
    pub log_coeff: f64,
    pub dlog_coeff: f64,
}

/// `A(0)`, shared by both wavenumber types.
pub const LOG_COEFF_AT_ZERO: f64 = -1.0 / (4.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    pub wavenumber: Wavenumber,
}

impl Kernel {
    pub fn new(wavenumber: Wavenumber) -> Self {
        Self { wavenumber }
    }

    pub fn real(k: f64) -> Self {
        Self::new(Wavenumber::Real(k))
    }

    /// `Φ(x, y)`; symmetric in its arguments.
    pub fn phi(&self, x: [f64; 2], y: [f64; 2]) -> Complex64 {
        self.eval((x[0] - y[0]).hypot(x[1] - y[1])).phi
    }

    pub fn eval(&self, r: f64) -> KernelValues {
        match self.wavenumber {
            Wavenumber::Real(k) => {
                let (h0, h1) = hankel01(k * r);
                let i_quarter = Complex64::new(0.0, 0.25);
                let (j0, j1) = (h0.re, h1.re);
                KernelValues {
                    phi: i_quarter * h0,
                    dphi: -i_quarter * k * h1,
                    log_coeff: -j0 / (4.0 * PI),
                    dlog_coeff: k * j1 / (4.0 * PI),
                }
            }
            Wavenumber::Imaginary => {
                let (i0, i1, k0, k1) = modified_bessel01(r);
                KernelValues {
                    phi: Complex64::new(k0 / (2.0 * PI), 0.0),
                    dphi: Complex64::new(-k1 / (2.0 * PI), 0.0),
                    log_coeff: -i0 / (4.0 * PI),
                    dlog_coeff: -i1 / (4.0 * PI),
                }
            }
        }
    }

    /// Log coefficient alone; cheaper than [`Kernel::eval`] when only `A(r)` is needed.
    pub fn log_coeff(&self, r: f64) -> f64 {
        match self.wavenumber {
            Wavenumber::Real(k) => -bessel_j01(k * r).0 / (4.0 * PI),
            Wavenumber::Imaginary => -modified_bessel01(r).0 / (4.0 * PI),
        }
    }

    /// `lim_{r→0} Φ(r) − A(r) ln r²`.
    pub fn regular_part_at_zero(&self) -> Complex64 {
        match self.wavenumber {
            Wavenumber::Real(k) => Complex64::new(-((0.5 * k).ln() + EULER_GAMMA) / (2.0 * PI), 0.25),
            Wavenumber::Imaginary => Complex64::new(-((0.5f64).ln() + EULER_GAMMA) / (2.0 * PI), 0.0),
        }
    }
}

/// `γ₂ = e^{iπ/4}/√(8πk)`, the factor between `u^s ~ γ₂ e^{ikr}/√r u∞` and the far-field pattern.
pub fn gamma2(k: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (8.0 * PI * k).sqrt(), PI / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_symmetric() {
        let kern = Kernel::real(2.5);
        let (x, y) = ([0.3, -1.2], [2.0, 0.7]);
        assert_eq!(kern.phi(x, y), kern.phi(y, x));
    }

    #[test]
    fn log_split_recovers_regular_part() {
        for kern in [Kernel::real(3.0), Kernel::new(Wavenumber::Imaginary)] {
            let r = 1e-6;
            let v = kern.eval(r);
            let regular = v.phi - v.log_coeff * (r * r).ln();
            assert!((regular - kern.regular_part_at_zero()).norm() < 1e-9);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for kern in [Kernel::real(1.7), Kernel::new(Wavenumber::Imaginary)] {
            for &r in &[0.2, 1.0, 3.5] {
                let h = 1e-6;
                let v = kern.eval(r);
                let fd = (kern.eval(r + h).phi - kern.eval(r - h).phi) / (2.0 * h);
                assert!((fd - v.dphi).norm() < 1e-7);
                let fd_log = (kern.eval(r + h).log_coeff - kern.eval(r - h).log_coeff) / (2.0 * h);
                assert!((fd_log - v.dlog_coeff).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn imaginary_wavenumber_is_continuation() {
        // (i/4) H0(i r) = K0(r)/(2π)
        let kern = Kernel::new(Wavenumber::Imaginary);
        let r = 0.8;
        let expected = crate::specfun::bessel_k(0, r).unwrap() / (2.0 * PI);
        assert!((kern.eval(r).phi.re - expected).abs() < 1e-15);
    }

    #[test]
    fn gamma2_value() {
        let g = gamma2(2.0);
        assert!((g.norm() - 1.0 / (16.0 * PI).sqrt()).abs() < 1e-15);
        assert!((g.arg() - PI / 4.0).abs() < 1e-15);
    }
}
