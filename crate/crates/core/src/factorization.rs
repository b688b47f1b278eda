//! The factorization-method inverse step: `F# = |Re(e^{−it}F)| + |Im F|`, its
//! eigensystem, the Picard-series indicator and its evaluation on a sampling
//! grid, plus scoring against known geometry and CSV/PGM export.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::farfield::FarFieldMatrix;
use crate::geometry::{Curve, Point, Region};
use crate::linalg::{abs_operator, hermitian_eig, ComplexMatrix, HermitianEigensystem, LinalgError};

/// Default relative spectral cutoff of the Picard series.
pub const DEFAULT_TRUNCATION: f64 = 1e-8;
/// Allowed negative excursion of the smallest eigenvalue of `F#`, relative to the largest.
pub const PSD_TOLERANCE: f64 = 1e-10;
/// Exterior points closer than this to Ω₁ are left out of the contrast ratio.
pub const SCORE_GUARD: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FactorizationError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("F# is not positive semidefinite: smallest eigenvalue {min} vs largest {max}")]
    NotPositive { min: f64, max: f64 },
    #[error("degenerate spectrum: largest eigenvalue {0} is not positive")]
    DegenerateSpectrum(f64),
    #[error("no unmasked grid point lies inside Ω1")]
    NoInteriorPoints,
    #[error("no unmasked grid point lies outside Ω1")]
    NoExteriorPoints,
    #[error("sampling window {0}")]
    BadWindow(String),
}

/// `F#` with its eigensystem in the weighted `L²` inner product of the direction grid.
#[derive(Debug, Clone)]
pub struct SharpOperator {
    pub provenance: Vec<String>,
    pub phase: f64,
    pub wavenumber: f64,
    /// Quadrature weight of the direction grid.
    pub weight: f64,
    /// Matrix of `F#` acting on grid values (includes the quadrature weight).
    pub matrix: ComplexMatrix,
    /// Eigenvalues (descending, clamped at zero) and Euclidean-orthonormal eigenvectors;
    /// `ψ_n = v_n / √w` is the weighted-orthonormal eigenfunction.
    pub eigensystem: HermitianEigensystem,
    /// Smallest eigenvalue before clamping.
    pub raw_min_eigenvalue: f64,
    grid_directions: Vec<Point>,
}

/// `F# = |Re(e^{−it}F)| + |Im F|` for the far-field operator of `f`.
///
/// Pass `t = 0` for the variants that use the plain real part.
pub fn build_sharp(f: &FarFieldMatrix, t: f64) -> Result<SharpOperator, FactorizationError> {
    let op = f.operator();
    build_sharp_from_operator(&op, t, f.grid.weight(), f.wavenumber, f.provenance.clone(), f.grid.directions())
}

fn build_sharp_from_operator(
    op: &ComplexMatrix,
    t: f64,
    weight: f64,
    wavenumber: f64,
    provenance: Vec<String>,
    grid_directions: Vec<Point>,
) -> Result<SharpOperator, FactorizationError> {
    // Equal weights make the weight-similarity transform the identity, so the
    // operator matrix is already Hermitian in the weighted inner product.
    let rotated = op.scale(Complex64::from_polar(1.0, -t));
    let re = abs_operator(&rotated.hermitian_part())?;
    let im = abs_operator(&op.skew_hermitian_part())?;
    let matrix = re.add(&im)?.hermitian_part();
    let mut eigensystem = hermitian_eig(&matrix)?;
    let max = eigensystem.eigenvalues[0];
    let min = *eigensystem.eigenvalues.last().unwrap();
    if max <= 0.0 {
        return Err(FactorizationError::DegenerateSpectrum(max));
    }
    if min < -PSD_TOLERANCE * max {
        return Err(FactorizationError::NotPositive { min, max });
    }
    for l in &mut eigensystem.eigenvalues {
        *l = l.max(0.0);
    }
    Ok(SharpOperator {
        provenance,
        phase: t,
        wavenumber,
        weight,
        matrix,
        eigensystem,
        raw_min_eigenvalue: min,
        grid_directions,
    })
}

impl SharpOperator {
    /// Builds `F#` for a raw operator matrix (already including quadrature weights) on an
    /// `n`-direction grid; mainly for tests.
    pub fn from_operator(op: &ComplexMatrix, t: f64, wavenumber: f64) -> Result<Self, FactorizationError> {
        let n = op.rows();
        let dirs = (0..n)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / n as f64;
                [a.cos(), a.sin()]
            })
            .collect();
        build_sharp_from_operator(op, t, 2.0 * PI / n as f64, wavenumber, vec!["raw".into()], dirs)
    }

    pub fn dim(&self) -> usize {
        self.eigensystem.dim()
    }

    /// `φ_z(x̂_j) = e^{−ikz·x̂_j}`.
    pub fn test_function(&self, z: Point) -> Vec<Complex64> {
        self.grid_directions
            .iter()
            .map(|d| Complex64::from_polar(1.0, -self.wavenumber * (z[0] * d[0] + z[1] * d[1])))
            .collect()
    }

    /// Number of eigenpairs kept by the cutoff `λ > ε_rel·λ₁`.
    pub fn retained(&self, relative_cutoff: f64) -> usize {
        let tau = relative_cutoff * self.eigensystem.eigenvalues[0];
        self.eigensystem.eigenvalues.iter().take_while(|&&l| l > tau).count()
    }

    /// `W(z) = [Σ_{λ_n > τ} |⟨φ_z, ψ_n⟩_w|² / λ_n]^{−1}`, `τ = ε_rel·λ₁`.
    pub fn picard_indicator(&self, z: Point, relative_cutoff: f64) -> f64 {
        self.indicator_with(z, self.retained(relative_cutoff))
    }

    /// Indicator using exactly the `count` largest eigenpairs.
    pub fn indicator_with(&self, z: Point, count: usize) -> f64 {
        let phi = self.test_function(z);
        let vecs = &self.eigensystem.eigenvectors;
        let n = self.dim();
        let mut series = 0.0;
        for (col, &lambda) in self.eigensystem.eigenvalues.iter().enumerate().take(count) {
            let mut dot = Complex64::new(0.0, 0.0);
            for (row, p) in phi.iter().enumerate().take(n) {
                dot += vecs[(row, col)].conj() * p;
            }
            series += self.weight * dot.norm_sqr() / lambda;
        }
        1.0 / series
    }
}

/// Rectangular sampling window `[x0, x1] × [y0, y1]` with `resolution` points per axis,
/// endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub resolution: usize,
}

impl Window {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64, resolution: usize) -> Result<Self, FactorizationError> {
        if !(x1 > x0 && y1 > y0) {
            return Err(FactorizationError::BadWindow(format!("[{x0}, {x1}] × [{y0}, {y1}] is empty")));
        }
        if resolution < 2 {
            return Err(FactorizationError::BadWindow(format!("resolution {resolution} must be at least 2")));
        }
        Ok(Self {
            x0,
            x1,
            y0,
            y1,
            resolution,
        })
    }

    /// Larger of the two grid spacings.
    pub fn spacing(&self) -> f64 {
        let r = (self.resolution - 1) as f64;
        ((self.x1 - self.x0) / r).max((self.y1 - self.y0) / r)
    }

    /// Points in row-major order, `y` slowest.
    pub fn points(&self) -> Vec<Point> {
        let r = (self.resolution - 1) as f64;
        let mut pts = Vec::with_capacity(self.resolution * self.resolution);
        for iy in 0..self.resolution {
            for ix in 0..self.resolution {
                pts.push([
                    self.x0 + (self.x1 - self.x0) * ix as f64 / r,
                    self.y0 + (self.y1 - self.y0) * iy as f64 / r,
                ]);
            }
        }
        pts
    }
}

/// Indicator values on a window; masked points carry `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorGrid {
    pub window: Window,
    pub points: Vec<Point>,
    pub values: Vec<Option<f64>>,
}

impl IndicatorGrid {
    pub fn unmasked(&self) -> impl Iterator<Item = (Point, f64)> + '_ {
        self.points
            .iter()
            .zip(&self.values)
            .filter_map(|(p, v)| v.map(|v| (*p, v)))
    }

    pub fn unmasked_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    /// Writes `x,y,indicator,masked`; masked rows leave the indicator empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,indicator,masked\n");
        for (p, v) in self.points.iter().zip(&self.values) {
            match v {
                Some(w) => writeln!(out, "{},{},{:e},0", p[0], p[1], w),
                None => writeln!(out, "{},{},,1", p[0], p[1]),
            }
            .expect("string write");
        }
        out
    }

    /// Plain PGM (P2, maxval 65535): `W` scaled linearly over unmasked points, masked
    /// points black, top row at the largest `y`.
    pub fn to_pgm(&self) -> String {
        let res = self.window.resolution;
        let (lo, hi) = self
            .unmasked()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, w)| (lo.min(w), hi.max(w)));
        let span = if hi > lo { hi - lo } else { 1.0 };
        let mut out = format!("P2\n{res} {res}\n65535\n");
        for iy in (0..res).rev() {
            let row: Vec<String> = (0..res)
                .map(|ix| match self.values[iy * res + ix] {
                    Some(w) => (((w - lo) / span * 65535.0).round() as u32).min(65535).to_string(),
                    None => "0".to_string(),
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Evaluates the indicator at every window point outside the closure of `mask`
/// dilated by one grid cell.
pub fn reconstruct(sharp: &SharpOperator, window: Window, mask: Option<&Curve>, relative_cutoff: f64) -> IndicatorGrid {
    let points = window.points();
    let region = mask.map(Region::new);
    let dilation = window.spacing();
    let count = sharp.retained(relative_cutoff);
    let values = points
        .par_iter()
        .map(|&z| {
            let masked = region.as_ref().is_some_and(|r| r.signed_distance(z) <= dilation);
            (!masked).then(|| sharp.indicator_with(z, count))
        })
        .collect();
    IndicatorGrid { window, points, values }
}

/// Classification quality of an indicator grid against the true Ω₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// Median `W` inside Ω₁ over median `W` at points at least [`SCORE_GUARD`] away.
    pub contrast: f64,
    /// Best Jaccard index of `{W ≥ θ max W}` against Ω₁ over `θ ∈ {0.1, …, 0.9}`.
    pub jaccard: f64,
    pub best_threshold: f64,
    pub inside_points: usize,
    pub outside_points: usize,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn threshold_and_score(grid: &IndicatorGrid, omega1: &Curve) -> Result<Metrics, FactorizationError> {
    let region = Region::new(omega1);
    let samples: Vec<(f64, f64)> = grid.unmasked().map(|(p, w)| (region.signed_distance(p), w)).collect();
    let inside: Vec<f64> = samples.iter().filter(|(d, _)| *d < 0.0).map(|&(_, w)| w).collect();
    let outside: Vec<f64> = samples.iter().filter(|(d, _)| *d >= SCORE_GUARD).map(|&(_, w)| w).collect();
    if inside.is_empty() {
        return Err(FactorizationError::NoInteriorPoints);
    }
    if outside.is_empty() {
        return Err(FactorizationError::NoExteriorPoints);
    }
    let (inside_points, outside_points) = (inside.len(), outside.len());
    let contrast = median(inside) / median(outside);
    let max = samples.iter().map(|&(_, w)| w).fold(f64::NEG_INFINITY, f64::max);
    let mut best = (0.0, 0.1);
    for step in 1..=9 {
        let theta = step as f64 / 10.0;
        let (mut both, mut either) = (0usize, 0usize);
        for &(d, w) in &samples {
            let predicted = w >= theta * max;
            let truth = d < 0.0;
            both += (predicted && truth) as usize;
            either += (predicted || truth) as usize;
        }
        let j = both as f64 / either as f64;
        if j > best.0 {
            best = (j, theta);
        }
    }
    Ok(Metrics {
        contrast,
        jaccard: best.0,
        best_threshold: best.1,
        inside_points,
        outside_points,
    })
}
