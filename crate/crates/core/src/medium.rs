//! Penetrable medium plus an impenetrable obstacle: a Lippmann–Schwinger
//! equation on a uniform cell grid over the contrast support, coupled to a
//! combined-field boundary integral equation on the obstacle.
//!
//! The scattered field is represented as
//! `u^s = k² ∫ Φ(·,y) q(y) u(y) dy + Σ (D − iηS)φ`, with the total field `u`
//! sampled at cell centres and `φ` at the obstacle's Nyström nodes. Cells
//! straddling the support boundary are weighted by their covered area, so the
//! volume quadrature sees the true shape rather than a staircase. The cell that
//! contains the target point is integrated analytically over the disc of equal
//! area.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bie::{apply_condition, incident_data, plane_wave, BoundaryOperators, CurveSet, ExteriorSolver, ForwardSolution, Obstacle};
use crate::geometry::{closures_disjoint, BoundaryCondition, ContrastForm, ContrastSpec, Point, Region, Scene, SceneCase};
use crate::kernel::{Kernel, Wavenumber};
use crate::linalg::{ComplexMatrix, LinalgError, LuFactorization};
use crate::specfun::hankel01;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Subsamples per cell side used to measure partially covered cells.
const SUBSAMPLES: usize = 8;
/// Smallest contrast magnitude accepted without a warning inside the support.
const MIN_CONTRAST: f64 = 0.01;
/// Largest relative contrast change across one cell accepted without a warning.
const MAX_CELL_VARIATION: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MediumError {
    #[error("grid size m = {0} must be at least 8")]
    GridTooSmall(usize),
    #[error("scene is not a medium scene")]
    NotMediumScene,
    #[error("contrast support and obstacle closures intersect")]
    Overlap,
    #[error("coupled system is singular: {0}")]
    Singular(#[source] LinalgError),
    #[error(transparent)]
    Boundary(#[from] crate::bie::BieError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Uniform `m × m` cell grid covering the contrast support with a two-cell margin.
#[derive(Debug, Clone)]
pub struct VolumeGrid {
    pub m: usize,
    /// Cell side length.
    pub h: f64,
    /// Lower-left corner of the grid.
    pub origin: Point,
    /// Grid indices `(i, j)` of the cells that intersect the support.
    pub indices: Vec<(usize, usize)>,
    /// Cell centres, parallel to `indices`.
    pub centers: Vec<Point>,
    /// `∫_cell q` for every retained cell.
    pub weighted_contrast: Vec<Complex64>,
    /// Non-fatal quality notes (coarse grid, vanishing contrast).
    pub warnings: Vec<String>,
}

impl VolumeGrid {
    pub fn new(contrast: &ContrastSpec, m: usize) -> Result<Self, MediumError> {
        if m < 8 {
            return Err(MediumError::GridTooSmall(m));
        }
        let (lo, hi) = contrast.support.bounding_box();
        let side = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let h = side / (m - 4) as f64;
        let mid = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
        let origin = [mid[0] - 0.5 * m as f64 * h, mid[1] - 0.5 * m as f64 * h];
        let region = Region::new(&contrast.support);
        let half_diag = 0.5 * h * std::f64::consts::SQRT_2;
        let constant = contrast.form == ContrastForm::Constant;

        let cells: Vec<Option<((usize, usize), Point, Complex64, f64)>> = (0..m * m)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / m, idx % m);
                let c = [origin[0] + (i as f64 + 0.5) * h, origin[1] + (j as f64 + 0.5) * h];
                let d = region.signed_distance(c);
                if d > half_diag {
                    return None;
                }
                if d < -half_diag && constant {
                    return Some(((i, j), c, contrast.value * h * h, 0.0));
                }
                let mut sum = ZERO;
                let (mut qmin, mut qmax) = (f64::INFINITY, 0.0f64);
                let step = h / SUBSAMPLES as f64;
                for a in 0..SUBSAMPLES {
                    for b in 0..SUBSAMPLES {
                        let x = [
                            c[0] - 0.5 * h + (a as f64 + 0.5) * step,
                            c[1] - 0.5 * h + (b as f64 + 0.5) * step,
                        ];
                        if d < -half_diag || region.contains(x) {
                            let q = contrast.eval_inside(x);
                            sum += q;
                            qmin = qmin.min(q.norm());
                            qmax = qmax.max(q.norm());
                        }
                    }
                }
                if sum == ZERO {
                    return None;
                }
                let variation = if d < -half_diag { qmax - qmin } else { 0.0 };
                Some(((i, j), c, sum * step * step, variation))
            })
            .collect();

        let mut grid = Self {
            m,
            h,
            origin,
            indices: Vec::new(),
            centers: Vec::new(),
            weighted_contrast: Vec::new(),
            warnings: Vec::new(),
        };
        let q0 = contrast.value.norm();
        let mut max_variation = 0.0f64;
        for (idx, c, qw, var) in cells.into_iter().flatten() {
            grid.indices.push(idx);
            grid.centers.push(c);
            grid.weighted_contrast.push(qw);
            max_variation = max_variation.max(var);
        }
        if max_variation > MAX_CELL_VARIATION * q0 {
            grid.warnings.push(format!(
                "grid too coarse: contrast varies by {:.0}% of |q₀| across one cell",
                100.0 * max_variation / q0
            ));
        }
        let weakest = contrast
            .interior_samples(64)
            .iter()
            .map(|q| q.norm())
            .fold(f64::INFINITY, f64::min);
        if weakest < MIN_CONTRAST {
            grid.warnings.push(format!(
                "contrast magnitude drops to {weakest:.2e} inside the support (below {MIN_CONTRAST})"
            ));
        }
        Ok(grid)
    }

    /// Same cells with every contrast value multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            weighted_contrast: self.weighted_contrast.iter().map(|q| q * factor).collect(),
            ..self.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// `∫ q` over the support, approximated by the grid.
    pub fn total_contrast(&self) -> Complex64 {
        self.weighted_contrast.iter().sum()
    }
}

/// `∫_{|y|<R} Φ(0, y) dy` for the Helmholtz kernel with real wavenumber `k`.
fn disc_integral(k: f64, radius: f64) -> Complex64 {
    let (_, h1) = hankel01(k * radius);
    I * PI * radius / (2.0 * k) * h1 - 1.0 / (k * k)
}

/// Factored coupled system for one grid, obstacle and wavenumber.
#[derive(Debug, Clone)]
pub struct MediumSolver {
    pub wavenumber: f64,
    pub eta: f64,
    pub grid: Arc<VolumeGrid>,
    obstacle: Option<(Arc<CurveSet>, BoundaryCondition)>,
    lu: LuFactorization,
}

/// Total field on the cells and obstacle density of one solve.
#[derive(Debug, Clone)]
pub struct MediumSolution {
    pub incident: Point,
    pub wavenumber: f64,
    pub grid: Arc<VolumeGrid>,
    /// Total field at the cell centres.
    pub total_field: Vec<Complex64>,
    /// Obstacle part of the representation, if an obstacle is present.
    pub boundary: Option<ForwardSolution>,
}

impl MediumSolver {
    /// Assembles and factors the coupled system. `obstacle` may be omitted to solve the
    /// pure transmission problem.
    pub fn new(grid: Arc<VolumeGrid>, obstacle: Option<&Obstacle>, k: f64, n: usize) -> Result<Self, MediumError> {
        let nc = grid.len();
        let kernel = Kernel::real(k);
        let k2 = k * k;
        let eta = k;

        // Cell-to-cell kernel depends only on the index offset.
        let m = grid.m;
        let span = 2 * m - 1;
        let self_term = k2 * disc_integral(k, grid.h / PI.sqrt());
        let table: Vec<Complex64> = (0..span * span)
            .into_par_iter()
            .map(|t| {
                let (di, dj) = (t / span, t % span);
                let (di, dj) = (di as f64 - (m - 1) as f64, dj as f64 - (m - 1) as f64);
                if di == 0.0 && dj == 0.0 {
                    ZERO
                } else {
                    k2 * kernel.eval(grid.h * di.hypot(dj)).phi
                }
            })
            .collect();
        let qbar: Vec<Complex64> = grid.weighted_contrast.iter().map(|q| q / (grid.h * grid.h)).collect();

        let (set, condition) = match obstacle {
            Some(o) => {
                let set = Arc::new(CurveSet::new(std::slice::from_ref(&o.curve), n)?);
                (Some(set), Some(o.condition))
            }
            None => (None, None),
        };
        let nb = set.as_ref().map_or(0, |s| s.len());
        let dim = nc + nb;
        let mut a = ComplexMatrix::zeros(dim, dim);

        let weights = set.as_ref().map(|s| s.weights()).unwrap_or_default();
        let bpoints = set.as_ref().map(|s| s.points()).unwrap_or_default();
        let bnormals = set.as_ref().map(|s| s.normals()).unwrap_or_default();

        // Cell rows: u_c − k²∫Φ q u − layer(φ) = u^i.
        a.as_mut_slice()[..nc * dim]
            .par_chunks_mut(dim)
            .enumerate()
            .for_each(|(c, row)| {
                let (ic, jc) = grid.indices[c];
                for c2 in 0..nc {
                    let (i2, j2) = grid.indices[c2];
                    let t = (ic + m - 1 - i2) * span + (jc + m - 1 - j2);
                    row[c2] = if c2 == c {
                        -self_term * qbar[c]
                    } else {
                        -table[t] * grid.weighted_contrast[c2]
                    };
                }
                row[c] += 1.0;
                let x = grid.centers[c];
                for j in 0..nb {
                    let y = bpoints[j];
                    let nu = bnormals[j];
                    let d = [x[0] - y[0], x[1] - y[1]];
                    let r = d[0].hypot(d[1]);
                    let v = kernel.eval(r);
                    let dny = -v.dphi * (nu[0] * d[0] + nu[1] * d[1]) / r;
                    row[nc + j] = -weights[j] * (dny - I * eta * v.phi);
                }
            });

        // Obstacle rows: B[layer(φ) + k²∫Φ q u] = −B u^i.
        if let (Some(set), Some(cond)) = (&set, condition) {
            let ops = BoundaryOperators::assemble(set.clone(), Wavenumber::Real(k));
            let block = ExteriorSolver::system_matrix(&ops, &[cond], eta);
            a.as_mut_slice()[nc * dim..]
                .par_chunks_mut(dim)
                .enumerate()
                .for_each(|(i, row)| {
                    let x = bpoints[i];
                    let nu = bnormals[i];
                    for c in 0..nc {
                        let y = grid.centers[c];
                        let d = [x[0] - y[0], x[1] - y[1]];
                        let r = d[0].hypot(d[1]);
                        let v = kernel.eval(r);
                        let dnx = v.dphi * (nu[0] * d[0] + nu[1] * d[1]) / r;
                        row[c] = k2 * grid.weighted_contrast[c] * apply_condition(cond, v.phi, dnx);
                    }
                    row[nc..].copy_from_slice(block.row(i));
                });
        }

        let lu = LuFactorization::new(&a).map_err(MediumError::Singular)?;
        Ok(Self {
            wavenumber: k,
            eta,
            grid,
            obstacle: set.zip(condition),
            lu,
        })
    }

    /// Builds the grid from a medium scene and solves with Ω₂ as the obstacle.
    pub fn from_scene(scene: &Scene, m: usize, n: usize) -> Result<Self, MediumError> {
        let contrast = match (&scene.case, &scene.contrast) {
            (SceneCase::Medium, Some(c)) => c,
            _ => return Err(MediumError::NotMediumScene),
        };
        if !closures_disjoint(&contrast.support, &scene.omega2) {
            return Err(MediumError::Overlap);
        }
        let grid = Arc::new(VolumeGrid::new(contrast, m)?);
        let obstacle = Obstacle::new(scene.omega2.clone(), scene.omega2_condition());
        Self::new(grid, Some(&obstacle), scene.wavenumber, n)
    }

    pub fn dim(&self) -> usize {
        self.lu.dim()
    }

    fn rhs(&self, theta: Point) -> Vec<Complex64> {
        let k = self.wavenumber;
        let mut rhs: Vec<Complex64> = self
            .grid
            .centers
            .iter()
            .map(|&x| plane_wave(k, theta, x, [0.0, 0.0]).0)
            .collect();
        if let Some((set, cond)) = &self.obstacle {
            rhs.extend(incident_data(set, &[*cond], k, theta));
        }
        rhs
    }

    fn wrap(&self, theta: Point, x: Vec<Complex64>) -> MediumSolution {
        let nc = self.grid.len();
        let boundary = self.obstacle.as_ref().map(|(set, _)| ForwardSolution {
            incident: Some(theta),
            wavenumber: self.wavenumber,
            eta: self.eta,
            curves: set.clone(),
            density: x[nc..].to_vec(),
        });
        let mut total = x;
        total.truncate(nc);
        MediumSolution {
            incident: theta,
            wavenumber: self.wavenumber,
            grid: self.grid.clone(),
            total_field: total,
            boundary,
        }
    }

    pub fn solve_plane_wave(&self, theta: Point) -> Result<MediumSolution, MediumError> {
        let x = self.lu.solve_vec(&self.rhs(theta))?;
        Ok(self.wrap(theta, x))
    }

    /// Solves for several incident directions with the shared factorization.
    pub fn solve_plane_waves(&self, thetas: &[Point]) -> Result<Vec<MediumSolution>, MediumError> {
        let mut b = ComplexMatrix::zeros(self.dim(), thetas.len());
        for (j, &t) in thetas.iter().enumerate() {
            b.set_column(j, &self.rhs(t));
        }
        let x = self.lu.solve(&b)?;
        Ok(thetas
            .iter()
            .enumerate()
            .map(|(j, &t)| self.wrap(t, x.column_vec(j)))
            .collect())
    }
}

/// Convenience wrapper: builds the solver for a medium scene and solves one incident wave.
pub fn solve_medium_obstacle(scene: &Scene, theta: Point, m: usize, n: usize) -> Result<MediumSolution, MediumError> {
    MediumSolver::from_scene(scene, m, n)?.solve_plane_wave(theta)
}

impl MediumSolution {
    /// Far-field pattern in the crate's `γ₂` normalization.
    pub fn far_field(&self, xhat: Point) -> Complex64 {
        let k = self.wavenumber;
        let volume: Complex64 = self
            .grid
            .centers
            .iter()
            .zip(&self.grid.weighted_contrast)
            .zip(&self.total_field)
            .map(|((y, qw), u)| Complex64::from_polar(1.0, -k * (xhat[0] * y[0] + xhat[1] * y[1])) * qw * u)
            .sum();
        let layer = self.boundary.as_ref().map_or(ZERO, |b| b.far_field(xhat));
        k * k * volume + layer
    }

    pub fn far_field_many(&self, directions: &[Point]) -> Vec<Complex64> {
        directions.iter().map(|&d| self.far_field(d)).collect()
    }

    /// Scattered field at a point outside the support and away from the obstacle.
    pub fn near_field(&self, x: Point) -> Complex64 {
        let k = self.wavenumber;
        let kernel = Kernel::real(k);
        let volume: Complex64 = self
            .grid
            .centers
            .iter()
            .zip(&self.grid.weighted_contrast)
            .zip(&self.total_field)
            .map(|((y, qw), u)| kernel.eval((x[0] - y[0]).hypot(x[1] - y[1])).phi * qw * u)
            .sum();
        let layer = self.boundary.as_ref().map_or(ZERO, |b| b.near_field(x));
        k * k * volume + layer
    }

    /// Largest relative Helmholtz residual `|Δu^s + k²u^s| / (k² max|u^s|)` over `points`,
    /// with the Laplacian from a fourth-order finite-difference stencil.
    pub fn helmholtz_residual(&self, points: &[Point]) -> f64 {
        let k2 = self.wavenumber * self.wavenumber;
        let step = 1e-2 / self.wavenumber.max(1.0);
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for &x in points {
            let u = |dx: f64, dy: f64| self.near_field([x[0] + dx, x[1] + dy]);
            let centre = u(0.0, 0.0);
            let mut lap = -60.0 * centre;
            for (a, b) in [(1.0, 0.0), (0.0, 1.0)] {
                lap += 16.0 * (u(a * step, b * step) + u(-a * step, -b * step));
                lap -= u(2.0 * a * step, 2.0 * b * step) + u(-2.0 * a * step, -2.0 * b * step);
            }
            lap /= 12.0 * step * step;
            worst = worst.max((lap + k2 * centre).norm());
            scale = scale.max(centre.norm());
        }
        worst / (k2 * scale)
    }
}
