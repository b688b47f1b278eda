//! Separation-of-variables far fields for a single disc.
//!
//! For an incident plane wave in direction `(cos α, sin α)` scattered by a disc of
//! radius `a` centred at the origin, `u^s = Σ_m i^m c_m H_m(kr) e^{im(φ−α)}` and, with
//! the `γ₂` normalization used throughout the crate, `u∞(x̂) = −4i Σ_m c_m e^{im(φ−α)}`.
//! Off-origin discs pick up the phase `e^{ik(θ−x̂)·c}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::specfun::{bessel_j_all, hankel1_all, SpecialFunctionError, MAX_ORDER};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Physics on the disc boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "lowercase")]
pub enum DiscCondition {
    Dirichlet,
    Neumann,
    /// `∂u/∂ν + iλu = 0`.
    Impedance { lambda: f64 },
    /// Penetrable disc with constant contrast, interior wavenumber `k√(1+q)`.
    Transmission { q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscOracle {
    pub center: Point,
    pub radius: f64,
    pub wavenumber: f64,
    pub condition: DiscCondition,
}

/// Values and derivatives of `J_m` and `H_m` for `m = 0..=order`.
fn with_derivatives(order: usize, x: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<Complex64>, Vec<Complex64>), SpecialFunctionError> {
    let j = bessel_j_all(order + 1, x)?;
    let h = hankel1_all(order + 1, x)?;
    let jp = (0..=order)
        .map(|m| if m == 0 { -j[1] } else { 0.5 * (j[m - 1] - j[m + 1]) })
        .collect();
    let hp = (0..=order)
        .map(|m| if m == 0 { -h[1] } else { 0.5 * (h[m - 1] - h[m + 1]) })
        .collect();
    Ok((j[..=order].to_vec(), jp, h[..=order].to_vec(), hp))
}

impl DiscOracle {
    pub fn new(center: Point, radius: f64, wavenumber: f64, condition: DiscCondition) -> Self {
        Self {
            center,
            radius,
            wavenumber,
            condition,
        }
    }

    /// Series truncation order: enough terms for double precision, bounded by what the
    /// special functions support.
    pub fn order(&self) -> usize {
        let mut x = self.wavenumber * self.radius;
        if let DiscCondition::Transmission { q } = self.condition {
            x = x.max(x * (1.0 + q).sqrt());
        }
        ((x + 10.0 * x.cbrt() + 15.0).ceil() as usize).min(MAX_ORDER - 1)
    }

    /// Coefficients `c_m`, `m = 0..=order`; `c_{−m} = c_m`.
    pub fn coefficients(&self) -> Result<Vec<Complex64>, SpecialFunctionError> {
        let k = self.wavenumber;
        let x = k * self.radius;
        let order = self.order();
        let (j, jp, h, hp) = with_derivatives(order, x)?;
        let coeffs = match self.condition {
            DiscCondition::Dirichlet => (0..=order).map(|m| -j[m] / h[m]).collect(),
            DiscCondition::Neumann => (0..=order).map(|m| -jp[m] / hp[m]).collect(),
            DiscCondition::Impedance { lambda } => (0..=order)
                .map(|m| -(k * jp[m] + I * lambda * j[m]) / (k * hp[m] + I * lambda * h[m]))
                .collect(),
            DiscCondition::Transmission { q } => {
                let k1 = k * (1.0 + q).sqrt();
                let (ji, jpi, _, _) = with_derivatives(order, k1 * self.radius)?;
                (0..=order)
                    .map(|m| {
                        let num = k * jp[m] * ji[m] - k1 * jpi[m] * j[m];
                        let den = k1 * jpi[m] * h[m] - k * hp[m] * ji[m];
                        num / den
                    })
                    .collect()
            }
        };
        Ok(coeffs)
    }

    /// `u∞(x̂, θ)` for unit vectors `x̂` and `θ`.
    pub fn far_field(&self, xhat: Point, theta: Point) -> Result<Complex64, SpecialFunctionError> {
        Ok(self.far_field_with(&self.coefficients()?, xhat, theta))
    }

    fn far_field_with(&self, coeffs: &[Complex64], xhat: Point, theta: Point) -> Complex64 {
        let angle = xhat[1].atan2(xhat[0]) - theta[1].atan2(theta[0]);
        let mut sum = coeffs[0];
        for (m, c) in coeffs.iter().enumerate().skip(1) {
            sum += 2.0 * c * (m as f64 * angle).cos();
        }
        let c = self.center;
        let shift = self.wavenumber * ((theta[0] - xhat[0]) * c[0] + (theta[1] - xhat[1]) * c[1]);
        -4.0 * I * sum * Complex64::from_polar(1.0, shift)
    }

    /// Far-field matrix `F[i][j] = u∞(x̂_i, x̂_j)` on `n` equispaced directions.
    pub fn far_field_matrix(&self, n: usize) -> Result<Vec<Complex64>, SpecialFunctionError> {
        let coeffs = self.coefficients()?;
        let dirs = unit_directions(n);
        let mut out = Vec::with_capacity(n * n);
        for &xhat in &dirs {
            for &theta in &dirs {
                out.push(self.far_field_with(&coeffs, xhat, theta));
            }
        }
        Ok(out)
    }
}

/// `(cos(2πj/n), sin(2πj/n))`, `j = 0..n`.
pub fn unit_directions(n: usize) -> Vec<Point> {
    (0..n)
        .map(|j| {
            let a = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            [a.cos(), a.sin()]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_c0_value() {
        let o = DiscOracle::new([0.0, 0.0], 1.0, 2.0, DiscCondition::Dirichlet);
        let c = o.coefficients().unwrap();
        assert!((c[0] - Complex64::new(-0.1614, 0.3678)).norm() < 5e-4, "{}", c[0]);
    }

    #[test]
    fn lossless_coefficients_satisfy_unitarity() {
        // |1 + 2c_m| = 1 for energy-conserving boundaries
        for cond in [
            DiscCondition::Dirichlet,
            DiscCondition::Neumann,
            DiscCondition::Transmission { q: 0.5 },
            DiscCondition::Transmission { q: -0.5 },
        ] {
            let o = DiscOracle::new([0.0, 0.0], 1.0, 2.0, cond);
            for c in o.coefficients().unwrap() {
                assert!(((1.0 + 2.0 * c).norm() - 1.0).abs() < 1e-12, "{cond:?}");
            }
        }
    }

    #[test]
    fn impedance_is_absorbing() {
        let o = DiscOracle::new([0.0, 0.0], 1.0, 2.0, DiscCondition::Impedance { lambda: 1.0 });
        for (m, c) in o.coefficients().unwrap().into_iter().enumerate() {
            let s = (1.0 + 2.0 * c).norm();
            assert!(s <= 1.0 + 1e-12);
            if m <= 4 {
                assert!(s < 1.0 - 1e-3, "m={m}: {s}");
            }
        }
    }

    #[test]
    fn large_impedance_approaches_dirichlet() {
        let d = DiscOracle::new([0.0, 0.0], 1.0, 2.0, DiscCondition::Dirichlet).coefficients().unwrap();
        let i = DiscOracle::new([0.0, 0.0], 1.0, 2.0, DiscCondition::Impedance { lambda: 1e6 })
            .coefficients()
            .unwrap();
        for (a, b) in d.iter().zip(&i) {
            assert!((a - b).norm() < 1e-5);
        }
    }

    #[test]
    fn zero_contrast_scatters_nothing() {
        let o = DiscOracle::new([0.0, 0.0], 1.0, 2.0, DiscCondition::Transmission { q: 0.0 });
        assert!(o.coefficients().unwrap().iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn tiny_disc_scatters_weakly() {
        let o = DiscOracle::new([0.0, 0.0], 1e-3, 2.0, DiscCondition::Dirichlet);
        let c = o.coefficients().unwrap();
        assert!(c[1..].iter().all(|c| c.norm() <= 1e-5));
        assert!(c[0].norm() < 0.3);
    }

    #[test]
    fn reciprocity() {
        let o = DiscOracle::new([0.4, -0.7], 1.0, 2.0, DiscCondition::Neumann);
        let (x, t) = ([0.6f64.cos(), 0.6f64.sin()], [2.1f64.cos(), 2.1f64.sin()]);
        let a = o.far_field(x, t).unwrap();
        let b = o.far_field([-t[0], -t[1]], [-x[0], -x[1]]).unwrap();
        assert!((a - b).norm() < 1e-13);
    }
}
