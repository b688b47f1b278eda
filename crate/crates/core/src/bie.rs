//! Nyström boundary integral solver for exterior Helmholtz problems on one or
//! several disjoint smooth curves.
//!
//! Every curve carries a combined-field density `φ` with
//! `u^s = Σ (D − iηS) φ`, `η = k`. Diagonal blocks use Kress' quadrature for
//! logarithmic kernels; the hypersingular operator goes through the Maue
//! identity `Nφ = d/ds S(dφ/ds) + k² ν·S(νφ)` with trigonometric
//! differentiation. Cross-curve blocks have smooth kernels and use the
//! trapezoidal rule.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::geometry::{closures_disjoint, curve_sample, BoundaryCondition, BoundaryNodes, Curve, Point};
use crate::kernel::{Kernel, Wavenumber, LOG_COEFF_AT_ZERO};
use crate::linalg::{ComplexMatrix, LinalgError, LuFactorization};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BieError {
    #[error("curves {0} and {1} intersect or touch")]
    CurvesIntersect(usize, usize),
    #[error("node parameter n = {0} must be even and at least 16")]
    BadNodeCount(usize),
    #[error("no curves given")]
    Empty,
    #[error("boundary data has the wrong shape: {0}")]
    BadBoundaryData(String),
    #[error("block system is singular: {0}")]
    Singular(#[source] LinalgError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which boundary integral operator a matrix discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Single layer `S`.
    S,
    /// Double layer `K` (normal derivative in the source point).
    K,
    /// Adjoint double layer `K'` (normal derivative in the target point).
    KPrime,
    /// Hypersingular `N`.
    N,
}

/// Nyström nodes of several curves, concatenated.
#[derive(Debug, Clone)]
pub struct CurveSet {
    pub curves: Vec<Curve>,
    pub nodes: Vec<BoundaryNodes>,
    offsets: Vec<usize>,
}

impl CurveSet {
    pub fn new(curves: &[Curve], n: usize) -> Result<Self, BieError> {
        if curves.is_empty() {
            return Err(BieError::Empty);
        }
        if n < 16 || !n.is_multiple_of(2) {
            return Err(BieError::BadNodeCount(n));
        }
        for a in 0..curves.len() {
            for b in a + 1..curves.len() {
                if !closures_disjoint(&curves[a], &curves[b]) {
                    return Err(BieError::CurvesIntersect(a, b));
                }
            }
        }
        let nodes: Vec<BoundaryNodes> = curves.iter().map(|c| curve_sample(c, n)).collect();
        let mut offsets = vec![0];
        for nd in &nodes {
            offsets.push(offsets.last().unwrap() + nd.len());
        }
        Ok(Self {
            curves: curves.to_vec(),
            nodes,
            offsets,
        })
    }

    pub fn n(&self) -> usize {
        self.nodes[0].n
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn range(&self, curve: usize) -> std::ops::Range<usize> {
        self.offsets[curve]..self.offsets[curve + 1]
    }

    /// `(curve index, local index)` of every global node.
    fn locate(&self, global: usize) -> (usize, usize) {
        let c = self.offsets.partition_point(|&o| o <= global) - 1;
        (c, global - self.offsets[c])
    }

    /// Trapezoidal quadrature weight `(π/n)|p'(s_j)|` for every node.
    pub fn weights(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .flat_map(|nd| nd.speed.iter().map(move |&s| PI / nd.n as f64 * s))
            .collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.nodes.iter().flat_map(|nd| nd.points.iter().copied()).collect()
    }

    pub fn normals(&self) -> Vec<Point> {
        self.nodes.iter().flat_map(|nd| nd.normals.iter().copied()).collect()
    }
}

/// Kress weights `R_j(t_i)`, which depend only on `(i − j) mod 2n`.
fn kress_weights(n: usize) -> Vec<f64> {
    let m = 2 * n;
    (0..m)
        .map(|d| {
            let t = PI * d as f64 / n as f64;
            let mut s = 0.0;
            for k in 1..n {
                s += (k as f64 * t).cos() / k as f64;
            }
            -2.0 * PI / n as f64 * s - PI / (n * n) as f64 * (n as f64 * t).cos()
        })
        .collect()
}

/// Spectral differentiation matrix on `2n` equispaced periodic nodes.
fn trig_diff_matrix(n: usize) -> Vec<f64> {
    let m = 2 * n;
    let h = PI / n as f64;
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let sign = if (i + m - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                d[i * m + j] = 0.5 * sign / (0.5 * (i as f64 - j as f64) * h).tan();
            }
        }
    }
    d
}

/// All four boundary operators of a curve set at one wavenumber.
#[derive(Debug, Clone)]
pub struct BoundaryOperators {
    pub wavenumber: Wavenumber,
    pub curves: Arc<CurveSet>,
    pub s: ComplexMatrix,
    pub k: ComplexMatrix,
    pub kp: ComplexMatrix,
    pub n: ComplexMatrix,
}

impl BoundaryOperators {
    pub fn assemble(curves: Arc<CurveSet>, wavenumber: Wavenumber) -> Self {
        let kernel = Kernel::new(wavenumber);
        let m = curves.len();
        let n = curves.n();
        let kress = kress_weights(n);
        let trap = PI / n as f64;
        let reg0 = kernel.regular_part_at_zero();

        let mut s = ComplexMatrix::zeros(m, m);
        let mut dl = ComplexMatrix::zeros(m, m);
        let mut adl = ComplexMatrix::zeros(m, m);
        // Φ without Jacobian (for the tangential part of N) and Φ ν_x·ν_y |y'|.
        let mut plain = ComplexMatrix::zeros(m, m);
        let mut nn = ComplexMatrix::zeros(m, m);

        for gi in 0..m {
            let (ci, li) = curves.locate(gi);
            let ndi = &curves.nodes[ci];
            let x = ndi.points[li];
            let nu_x = ndi.normals[li];
            for gj in 0..m {
                let (cj, lj) = curves.locate(gj);
                let ndj = &curves.nodes[cj];
                let y = ndj.points[lj];
                let nu_y = ndj.normals[lj];
                let jac = ndj.speed[lj];
                let nudot = nu_x[0] * nu_y[0] + nu_x[1] * nu_y[1];

                if ci != cj {
                    let d = [x[0] - y[0], x[1] - y[1]];
                    let r = d[0].hypot(d[1]);
                    let v = kernel.eval(r);
                    let ny_d = nu_y[0] * d[0] + nu_y[1] * d[1];
                    let nx_d = nu_x[0] * d[0] + nu_x[1] * d[1];
                    s[(gi, gj)] = trap * v.phi * jac;
                    dl[(gi, gj)] = -trap * v.dphi * (ny_d / r) * jac;
                    adl[(gi, gj)] = trap * v.dphi * (nx_d / r) * jac;
                    plain[(gi, gj)] = trap * v.phi;
                    nn[(gi, gj)] = trap * v.phi * nudot * jac;
                    continue;
                }

                let kw = kress[(li + 2 * n - lj) % (2 * n)];
                if li == lj {
                    let speed = jac;
                    let regular = reg0 + LOG_COEFF_AT_ZERO * (speed * speed).ln();
                    let d1 = ndi.d1[li];
                    let d2 = ndi.d2[li];
                    let curv_term = (d1[1] * d2[0] - d1[0] * d2[1]) / (4.0 * PI * speed * speed);
                    s[(gi, gj)] = kw * LOG_COEFF_AT_ZERO * speed + trap * regular * speed;
                    dl[(gi, gj)] = Complex64::new(trap * curv_term, 0.0);
                    adl[(gi, gj)] = Complex64::new(trap * curv_term, 0.0);
                    plain[(gi, gj)] = kw * LOG_COEFF_AT_ZERO + trap * regular;
                    nn[(gi, gj)] = kw * LOG_COEFF_AT_ZERO * speed + trap * regular * speed;
                    continue;
                }

                let d = [x[0] - y[0], x[1] - y[1]];
                let r = d[0].hypot(d[1]);
                let v = kernel.eval(r);
                let dt = ndi.params[li] - ndj.params[lj];
                let lg = (4.0 * (0.5 * dt).sin().powi(2)).ln();
                let ny_d = nu_y[0] * d[0] + nu_y[1] * d[1];
                let nx_d = nu_x[0] * d[0] + nu_x[1] * d[1];

                let split = |full: Complex64, log_part: f64| kw * log_part + trap * (full - log_part * lg);
                s[(gi, gj)] = split(v.phi * jac, v.log_coeff * jac);
                dl[(gi, gj)] = split(-v.dphi * (ny_d / r) * jac, -v.dlog_coeff * (ny_d / r) * jac);
                adl[(gi, gj)] = split(v.dphi * (nx_d / r) * jac, v.dlog_coeff * (nx_d / r) * jac);
                plain[(gi, gj)] = split(v.phi, v.log_coeff);
                nn[(gi, gj)] = split(v.phi * nudot * jac, v.log_coeff * nudot * jac);
            }
        }

        // N = diag(1/|x'|) D Φ D + k² (ν·ν Φ)
        let diff = trig_diff_matrix(n);
        let block = 2 * n;
        let mut dpd = ComplexMatrix::zeros(m, m);
        for ci in 0..curves.nodes.len() {
            for cj in 0..curves.nodes.len() {
                let (ri, rj) = (curves.range(ci), curves.range(cj));
                // tmp = Φ_block · D
                let mut tmp = vec![ZERO; block * block];
                for a in 0..block {
                    for c in 0..block {
                        let p = plain[(ri.start + a, rj.start + c)];
                        if p == ZERO {
                            continue;
                        }
                        for b in 0..block {
                            tmp[a * block + b] += p * diff[c * block + b];
                        }
                    }
                }
                for a in 0..block {
                    let inv_speed = 1.0 / curves.nodes[ci].speed[a];
                    for c in 0..block {
                        let dac = diff[a * block + c];
                        if dac == 0.0 {
                            continue;
                        }
                        for b in 0..block {
                            dpd[(ri.start + a, rj.start + b)] += dac * inv_speed * tmp[c * block + b];
                        }
                    }
                }
            }
        }
        let k2 = wavenumber.squared();
        let hyper = dpd.add(&nn.scale_real(k2)).expect("same shape");

        Self {
            wavenumber,
            curves,
            s,
            k: dl,
            kp: adl,
            n: hyper,
        }
    }

    pub fn get(&self, kind: OperatorKind) -> &ComplexMatrix {
        match kind {
            OperatorKind::S => &self.s,
            OperatorKind::K => &self.k,
            OperatorKind::KPrime => &self.kp,
            OperatorKind::N => &self.n,
        }
    }
}

/// A single discretized boundary operator with its quadrature weights.
#[derive(Debug, Clone)]
pub struct BoundaryOperatorMatrix {
    pub kind: OperatorKind,
    pub wavenumber: Wavenumber,
    pub curves: Arc<CurveSet>,
    pub matrix: ComplexMatrix,
    pub weights: Vec<f64>,
}

impl BoundaryOperatorMatrix {
    /// `W^{1/2} A W^{−1/2}`: the matrix of the operator in an orthonormal basis of
    /// the weighted inner product `⟨a,b⟩_w = Σ w_j a_j conj(b_j)`.
    pub fn weight_normalized(&self) -> ComplexMatrix {
        let w = &self.weights;
        ComplexMatrix::from_fn(w.len(), w.len(), |i, j| self.matrix[(i, j)] * (w[i] / w[j]).sqrt())
    }

    /// `⟨a, b⟩_w`.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter()
            .zip(b)
            .zip(&self.weights)
            .map(|((x, y), w)| x * y.conj() * *w)
            .sum()
    }
}

/// Discretizes `S`, `K`, `K'` or `N` on a set of disjoint curves.
pub fn assemble_boundary_operator(
    kind: OperatorKind,
    curves: &[Curve],
    wavenumber: Wavenumber,
    n: usize,
) -> Result<BoundaryOperatorMatrix, BieError> {
    let set = Arc::new(CurveSet::new(curves, n)?);
    let ops = BoundaryOperators::assemble(set.clone(), wavenumber);
    Ok(BoundaryOperatorMatrix {
        kind,
        wavenumber,
        weights: set.weights(),
        curves: set,
        matrix: ops.get(kind).clone(),
    })
}

/// A curve together with the condition imposed on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle {
    pub curve: Curve,
    pub condition: BoundaryCondition,
}

impl Obstacle {
    pub fn new(curve: Curve, condition: BoundaryCondition) -> Self {
        Self { curve, condition }
    }
}

/// Assembled and factored block system for an exterior problem.
#[derive(Debug, Clone)]
pub struct ExteriorSolver {
    pub wavenumber: f64,
    pub eta: f64,
    pub conditions: Vec<BoundaryCondition>,
    pub curves: Arc<CurveSet>,
    lu: LuFactorization,
}

/// Scattered field of one solve: combined-field densities on every curve.
#[derive(Debug, Clone)]
pub struct ForwardSolution {
    pub incident: Option<Point>,
    pub wavenumber: f64,
    pub eta: f64,
    pub curves: Arc<CurveSet>,
    /// Densities per node, concatenated over curves.
    pub density: Vec<Complex64>,
}

/// Plane wave `e^{ikθ·x}` and its normal derivative.
pub fn plane_wave(k: f64, theta: Point, x: Point, normal: Point) -> (Complex64, Complex64) {
    let phase = k * (theta[0] * x[0] + theta[1] * x[1]);
    let u = Complex64::from_polar(1.0, phase);
    let dn = I * k * (theta[0] * normal[0] + theta[1] * normal[1]) * u;
    (u, dn)
}

impl ExteriorSolver {
    /// Assembles the combined-field block system and factors it once.
    pub fn new(obstacles: &[Obstacle], k: f64, n: usize) -> Result<Self, BieError> {
        let curves: Vec<Curve> = obstacles.iter().map(|o| o.curve.clone()).collect();
        let set = Arc::new(CurveSet::new(&curves, n)?);
        let ops = BoundaryOperators::assemble(set.clone(), Wavenumber::Real(k));
        let conditions: Vec<BoundaryCondition> = obstacles.iter().map(|o| o.condition).collect();
        let system = Self::system_matrix(&ops, &conditions, k);
        let lu = LuFactorization::new(&system).map_err(BieError::Singular)?;
        Ok(Self {
            wavenumber: k,
            eta: k,
            conditions,
            curves: set,
            lu,
        })
    }

    /// Combined-field block matrix: row block `c` applies the condition of curve `c`
    /// to `Σ (D − iηS)φ`.
    pub(crate) fn system_matrix(ops: &BoundaryOperators, conditions: &[BoundaryCondition], eta: f64) -> ComplexMatrix {
        let set = &ops.curves;
        let m = set.len();
        let ieta = I * eta;
        let mut a = ComplexMatrix::zeros(m, m);
        for (c, cond) in conditions.iter().enumerate() {
            for gi in set.range(c) {
                for gj in 0..m {
                    let delta = if gi == gj { 0.5 } else { 0.0 };
                    let value = delta + ops.k[(gi, gj)] - ieta * ops.s[(gi, gj)];
                    let normal = ops.n[(gi, gj)] - ieta * (ops.kp[(gi, gj)] - delta);
                    a[(gi, gj)] = match *cond {
                        BoundaryCondition::Dirichlet => value,
                        BoundaryCondition::Neumann => normal,
                        BoundaryCondition::Impedance(lambda) => normal + I * lambda * value,
                    };
                }
            }
        }
        a
    }

    fn plane_wave_rhs(&self, theta: Point) -> Vec<Complex64> {
        incident_data(&self.curves, &self.conditions, self.wavenumber, theta)
    }

    fn wrap(&self, incident: Option<Point>, density: Vec<Complex64>) -> ForwardSolution {
        ForwardSolution {
            incident,
            wavenumber: self.wavenumber,
            eta: self.eta,
            curves: self.curves.clone(),
            density,
        }
    }

    /// Scattered field for the incident plane wave `e^{ikθ·x}`.
    pub fn solve_plane_wave(&self, theta: Point) -> Result<ForwardSolution, BieError> {
        let density = self.lu.solve_vec(&self.plane_wave_rhs(theta))?;
        Ok(self.wrap(Some(theta), density))
    }

    /// Solves for several incident directions with one factorization.
    pub fn solve_plane_waves(&self, thetas: &[Point]) -> Result<Vec<ForwardSolution>, BieError> {
        let m = self.curves.len();
        let mut rhs = ComplexMatrix::zeros(m, thetas.len());
        for (j, &theta) in thetas.iter().enumerate() {
            rhs.set_column(j, &self.plane_wave_rhs(theta));
        }
        let x = self.lu.solve(&rhs)?;
        Ok(thetas
            .iter()
            .enumerate()
            .map(|(j, &theta)| self.wrap(Some(theta), x.column_vec(j)))
            .collect())
    }

    /// Radiating solution with explicit boundary data `f` (one value per node), i.e. the
    /// boundary operator applied to `u^s` equals `f`.
    pub fn solve_boundary_data(&self, data: &[Complex64]) -> Result<ForwardSolution, BieError> {
        if data.len() != self.curves.len() {
            return Err(BieError::BadBoundaryData(format!(
                "expected {} values, got {}",
                self.curves.len(),
                data.len()
            )));
        }
        Ok(self.wrap(None, self.lu.solve_vec(data)?))
    }

    /// Relative residual of the boundary condition, measured on a grid `refine` times finer
    /// than the solve grid using the trigonometric interpolant of the density.
    pub fn boundary_residual(&self, sol: &ForwardSolution, refine: usize) -> Result<f64, BieError> {
        let theta = sol
            .incident
            .ok_or_else(|| BieError::BadBoundaryData("residual check needs a plane-wave solution".into()))?;
        let fine_n = self.curves.n() * refine;
        let fine = Arc::new(CurveSet::new(&self.curves.curves, fine_n)?);
        let ops = BoundaryOperators::assemble(fine.clone(), Wavenumber::Real(self.wavenumber));
        let system = Self::system_matrix(&ops, &self.conditions, self.eta);
        let mut density = Vec::with_capacity(fine.len());
        for c in 0..self.curves.nodes.len() {
            density.extend(trig_interpolate(&sol.density[self.curves.range(c)], 2 * fine_n));
        }
        let applied = system.matvec(&density)?;
        let fine_solver_rhs = incident_data(&fine, &self.conditions, self.wavenumber, theta);
        let num: f64 = applied
            .iter()
            .zip(&fine_solver_rhs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let den: f64 = fine_solver_rhs.iter().map(|b| b.norm_sqr()).sum::<f64>().sqrt();
        Ok(num / den)
    }
}

/// `−B u^i` at every node for the plane wave `e^{ikθ·x}`, `B` the per-curve boundary operator.
pub(crate) fn incident_data(set: &CurveSet, conditions: &[BoundaryCondition], k: f64, theta: Point) -> Vec<Complex64> {
    let mut rhs = Vec::with_capacity(set.len());
    for (c, nd) in set.nodes.iter().enumerate() {
        for j in 0..nd.len() {
            let (u, dn) = plane_wave(k, theta, nd.points[j], nd.normals[j]);
            rhs.push(-apply_condition(conditions[c], u, dn));
        }
    }
    rhs
}

/// `Bv` from the trace and normal derivative of `v`.
pub(crate) fn apply_condition(condition: BoundaryCondition, value: Complex64, normal: Complex64) -> Complex64 {
    match condition {
        BoundaryCondition::Dirichlet => value,
        BoundaryCondition::Neumann => normal,
        BoundaryCondition::Impedance(lambda) => normal + I * lambda * value,
    }
}

/// Trigonometric interpolation of periodic samples onto `m` equispaced points.
pub fn trig_interpolate(values: &[Complex64], m: usize) -> Vec<Complex64> {
    let len = values.len();
    let half = len / 2;
    // DFT coefficients c_p for p in −half..half, Nyquist split evenly.
    let coeff = |p: i64| -> Complex64 {
        values
            .iter()
            .enumerate()
            .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (p as f64) * j as f64 / len as f64))
            .sum::<Complex64>()
            / len as f64
    };
    let coeffs: Vec<(i64, Complex64)> = (-(half as i64)..=(half as i64))
        .map(|p| {
            let c = coeff(p);
            if p.unsigned_abs() as usize == half && len.is_multiple_of(2) {
                (p, 0.5 * c)
            } else {
                (p, c)
            }
        })
        .collect();
    (0..m)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / m as f64;
            coeffs
                .iter()
                .map(|&(p, c)| c * Complex64::from_polar(1.0, p as f64 * t))
                .sum()
        })
        .collect()
}

impl ForwardSolution {
    /// Far-field pattern `u∞(x̂)` in the normalization `u^s ≈ γ₂ e^{ikr}/√r u∞`.
    pub fn far_field(&self, direction: Point) -> Complex64 {
        let k = self.wavenumber;
        let weights = self.curves.weights();
        let mut acc = ZERO;
        let mut g = 0;
        for nd in &self.curves.nodes {
            for j in 0..nd.len() {
                let y = nd.points[j];
                let nu = nd.normals[j];
                let phase = Complex64::from_polar(1.0, -k * (direction[0] * y[0] + direction[1] * y[1]));
                let factor = -I * k * (direction[0] * nu[0] + direction[1] * nu[1]) - I * self.eta;
                acc += weights[g] * factor * phase * self.density[g];
                g += 1;
            }
        }
        acc
    }

    pub fn far_field_many(&self, directions: &[Point]) -> Vec<Complex64> {
        directions.iter().map(|&d| self.far_field(d)).collect()
    }

    /// Scattered field `u^s(x)` at a point away from the boundary.
    pub fn near_field(&self, x: Point) -> Complex64 {
        let kernel = Kernel::real(self.wavenumber);
        let weights = self.curves.weights();
        let mut acc = ZERO;
        let mut g = 0;
        for nd in &self.curves.nodes {
            for j in 0..nd.len() {
                let y = nd.points[j];
                let nu = nd.normals[j];
                let d = [x[0] - y[0], x[1] - y[1]];
                let r = d[0].hypot(d[1]);
                let v = kernel.eval(r);
                let dphi_dny = -v.dphi * (nu[0] * d[0] + nu[1] * d[1]) / r;
                acc += weights[g] * (dphi_dny - I * self.eta * v.phi) * self.density[g];
                g += 1;
            }
        }
        acc
    }
}
