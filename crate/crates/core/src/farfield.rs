//! Far-field operators on a uniform direction grid: assembly from the forward
//! solvers, the artificial operators of the a-priori domains, the modified sums
//! per variant, noise injection and the `FFOP v1` text format.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::bie::{BieError, ExteriorSolver, Obstacle};
use crate::geometry::{BoundaryCondition, Curve, Point, Scene, SceneCase, Variant};
use crate::linalg::ComplexMatrix;
use crate::medium::{MediumError, MediumSolver};

/// Tag carried by every far-field matrix; see the crate docs for the convention.
pub const NORMALIZATION: &str = "gamma2";
pub const FORMAT_VERSION: &str = "FFOP v1";
/// Largest relative noise level accepted by [`add_noise`].
pub const MAX_NOISE: f64 = 0.2;

#[derive(Debug, thiserror::Error)]
pub enum FarFieldError {
    #[error("direction count {0} must be even and at least 16")]
    BadGrid(usize),
    #[error("direction grids differ ({0} vs {1})")]
    GridMismatch(usize, usize),
    #[error("wavenumbers differ ({0} vs {1})")]
    WavenumberMismatch(f64, f64),
    #[error("normalization tags differ ({0:?} vs {1:?})")]
    NormalizationMismatch(String, String),
    #[error("missing-domain: {0}")]
    MissingDomain(String),
    #[error("noise level {0} outside [0, {MAX_NOISE}]")]
    BadNoise(f64),
    #[error(transparent)]
    Boundary(#[from] BieError),
    #[error(transparent)]
    Medium(#[from] MediumError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported format version {0:?} (expected \"{FORMAT_VERSION}\")")]
    UnsupportedVersion(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FarFieldError {
    /// Errors caused by inconsistent operands rather than bad input geometry or I/O.
    pub fn is_consistency_error(&self) -> bool {
        matches!(
            self,
            FarFieldError::GridMismatch(..) | FarFieldError::WavenumberMismatch(..) | FarFieldError::NormalizationMismatch(..)
        )
    }
}

/// `N` equispaced directions `x̂_j = (cos 2πj/N, sin 2πj/N)` with weights `2π/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectionGrid {
    n: usize,
}

impl DirectionGrid {
    pub fn new(n: usize) -> Result<Self, FarFieldError> {
        if n < 16 || !n.is_multiple_of(2) {
            return Err(FarFieldError::BadGrid(n));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn direction(&self, j: usize) -> Point {
        let a = 2.0 * PI * j as f64 / self.n as f64;
        [a.cos(), a.sin()]
    }

    pub fn directions(&self) -> Vec<Point> {
        (0..self.n).map(|j| self.direction(j)).collect()
    }
}

/// `F[i][j] = u∞(x̂_i, θ_j)` with metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldMatrix {
    pub grid: DirectionGrid,
    pub wavenumber: f64,
    pub normalization: String,
    /// Names of the component operators summed into this matrix, in order.
    pub provenance: Vec<String>,
    pub entries: ComplexMatrix,
    pub seed: Option<u64>,
    pub noise: Option<f64>,
}

impl FarFieldMatrix {
    pub fn new(grid: DirectionGrid, wavenumber: f64, provenance: &str, entries: ComplexMatrix) -> Self {
        assert_eq!(entries.rows(), grid.len());
        assert_eq!(entries.cols(), grid.len());
        Self {
            grid,
            wavenumber,
            normalization: NORMALIZATION.to_string(),
            provenance: vec![provenance.to_string()],
            entries,
            seed: None,
            noise: None,
        }
    }

    pub fn zeros(grid: DirectionGrid, wavenumber: f64, provenance: &str) -> Self {
        Self::new(grid, wavenumber, provenance, ComplexMatrix::zeros(grid.len(), grid.len()))
    }

    pub fn n(&self) -> usize {
        self.grid.len()
    }

    /// The discretized integral operator `(Fg)(x̂_i) = Σ_j w u∞(x̂_i, θ_j) g_j`.
    pub fn operator(&self) -> ComplexMatrix {
        self.entries.scale_real(self.grid.weight())
    }

    /// Same matrix with every entry multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.scale_real(factor),
            ..self.clone()
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), FarFieldError> {
        if self.grid != other.grid {
            return Err(FarFieldError::GridMismatch(self.n(), other.n()));
        }
        if self.wavenumber != other.wavenumber {
            return Err(FarFieldError::WavenumberMismatch(self.wavenumber, other.wavenumber));
        }
        if self.normalization != other.normalization {
            return Err(FarFieldError::NormalizationMismatch(
                self.normalization.clone(),
                other.normalization.clone(),
            ));
        }
        Ok(())
    }
}

/// Discretization sizes for synthesizing far-field operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverParams {
    /// Boundary node parameter (`2n` nodes per curve).
    pub boundary_nodes: usize,
    /// Volume grid size `m` for penetrable media.
    pub volume_grid: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            boundary_nodes: 64,
            volume_grid: 48,
        }
    }
}

impl SolverParams {
    /// Parameters scaled by `factor`, rounded to admissible (even) sizes.
    pub fn refined(&self, factor: f64) -> Self {
        let even = |v: usize| {
            let r = (v as f64 * factor).round() as usize;
            r + r % 2
        };
        Self {
            boundary_nodes: even(self.boundary_nodes),
            volume_grid: even(self.volume_grid),
        }
    }
}

fn columns_from(grid: DirectionGrid, far: impl Fn(usize, &[Point]) -> Vec<Complex64>) -> ComplexMatrix {
    let dirs = grid.directions();
    let mut entries = ComplexMatrix::zeros(grid.len(), grid.len());
    for j in 0..grid.len() {
        entries.set_column(j, &far(j, &dirs));
    }
    entries
}

/// Far-field operator of an exterior boundary value problem on the given obstacles.
pub fn exterior_far_field_operator(
    obstacles: &[Obstacle],
    k: f64,
    grid: DirectionGrid,
    nodes: usize,
    provenance: &str,
) -> Result<FarFieldMatrix, FarFieldError> {
    let solver = ExteriorSolver::new(obstacles, k, nodes)?;
    let sols = solver.solve_plane_waves(&grid.directions())?;
    let entries = columns_from(grid, |j, dirs| sols[j].far_field_many(dirs));
    Ok(FarFieldMatrix::new(grid, k, provenance, entries))
}

/// The measured operator of a scene: both components scattering together.
pub fn assemble_far_field_operator(
    scene: &Scene,
    grid: DirectionGrid,
    params: SolverParams,
) -> Result<FarFieldMatrix, FarFieldError> {
    let k = scene.wavenumber;
    match scene.case {
        SceneCase::Mixed => {
            let obstacles = [
                Obstacle::new(scene.omega1.clone(), BoundaryCondition::Dirichlet),
                Obstacle::new(scene.omega2.clone(), scene.omega2_condition()),
            ];
            exterior_far_field_operator(&obstacles, k, grid, params.boundary_nodes, "F_mix(Ω1,Ω2)")
        }
        SceneCase::Medium => {
            let solver = MediumSolver::from_scene(scene, params.volume_grid, params.boundary_nodes)?;
            let sols = solver.solve_plane_waves(&grid.directions())?;
            let entries = columns_from(grid, |j, dirs| sols[j].far_field_many(dirs));
            Ok(FarFieldMatrix::new(grid, k, "F_mix(Ω1q,Ω2)", entries))
        }
    }
}

/// Artificial far-field operators on the a-priori domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArtificialKind {
    DirB2,
    DirB1B2,
    ImpB1B3,
    ImpB3,
    ImpB2,
}

impl ArtificialKind {
    pub fn name(self) -> &'static str {
        match self {
            ArtificialKind::DirB2 => "F_Dir(B2)",
            ArtificialKind::DirB1B2 => "F_Dir(B1∪B2)",
            ArtificialKind::ImpB1B3 => "F_Imp(B1∪B3)",
            ArtificialKind::ImpB3 => "F_Imp(B3)",
            ArtificialKind::ImpB2 => "F_Imp(B2)",
        }
    }

    fn curves(self, scene: &Scene) -> Result<Vec<Curve>, FarFieldError> {
        let need = |c: &Option<Curve>, label: &str| {
            c.clone()
                .ok_or_else(|| FarFieldError::MissingDomain(format!("{} requires {label}", self.name())))
        };
        Ok(match self {
            ArtificialKind::DirB2 | ArtificialKind::ImpB2 => vec![scene.b2.clone()],
            ArtificialKind::DirB1B2 => vec![need(&scene.b1, "B1")?, scene.b2.clone()],
            ArtificialKind::ImpB1B3 => vec![need(&scene.b1, "B1")?, need(&scene.b3, "B3")?],
            ArtificialKind::ImpB3 => vec![need(&scene.b3, "B3")?],
        })
    }

    fn condition(self, lambda0: f64) -> BoundaryCondition {
        match self {
            ArtificialKind::DirB2 | ArtificialKind::DirB1B2 => BoundaryCondition::Dirichlet,
            _ => BoundaryCondition::Impedance(lambda0),
        }
    }
}

/// Artificial operators added to the measured one, in summation order.
pub fn variant_components(variant: Variant) -> &'static [ArtificialKind] {
    match variant {
        Variant::T12 => &[ArtificialKind::DirB2, ArtificialKind::ImpB1B3],
        Variant::T14 => &[ArtificialKind::DirB2, ArtificialKind::ImpB3],
        Variant::T36 => &[ArtificialKind::DirB1B2],
        Variant::T46 => &[ArtificialKind::ImpB2],
        Variant::BaselineLiu | Variant::BaselineKirschLiu => &[ArtificialKind::DirB2],
    }
}

/// Far-field operator of the exterior problem on the listed a-priori curves only.
pub fn artificial_operator(
    kind: ArtificialKind,
    scene: &Scene,
    grid: DirectionGrid,
    nodes: usize,
) -> Result<FarFieldMatrix, FarFieldError> {
    let condition = kind.condition(scene.lambda0);
    let obstacles: Vec<Obstacle> = kind
        .curves(scene)?
        .into_iter()
        .map(|c| Obstacle::new(c, condition))
        .collect();
    exterior_far_field_operator(&obstacles, scene.wavenumber, grid, nodes, kind.name())
}

/// Entrywise sum of the measured operator and the artificial parts; never re-solves.
pub fn modify_operator(
    variant: Variant,
    measured: &FarFieldMatrix,
    parts: &[FarFieldMatrix],
) -> Result<FarFieldMatrix, FarFieldError> {
    let expected = variant_components(variant);
    if parts.len() != expected.len() {
        return Err(FarFieldError::MissingDomain(format!(
            "variant {variant} needs {} artificial operators, got {}",
            expected.len(),
            parts.len()
        )));
    }
    let mut out = measured.clone();
    for part in parts {
        measured.check_compatible(part)?;
        out.entries = out.entries.add(&part.entries).expect("grids checked");
        out.provenance.extend(part.provenance.iter().cloned());
    }
    Ok(out)
}

/// Assembles the artificial operators of `variant` and adds them to `measured`.
pub fn modified_operator_for(
    variant: Variant,
    scene: &Scene,
    measured: &FarFieldMatrix,
    nodes: usize,
) -> Result<FarFieldMatrix, FarFieldError> {
    if (measured.wavenumber - scene.wavenumber).abs() > 0.0 {
        return Err(FarFieldError::WavenumberMismatch(measured.wavenumber, scene.wavenumber));
    }
    let parts = variant_components(variant)
        .iter()
        .map(|&kind| artificial_operator(kind, scene, measured.grid, nodes))
        .collect::<Result<Vec<_>, _>>()?;
    modify_operator(variant, measured, &parts)
}

/// `F + δ‖F‖_F E/‖E‖_F` with complex Gaussian `E` drawn from a seeded generator.
pub fn add_noise(f: &FarFieldMatrix, level: f64, seed: u64) -> Result<FarFieldMatrix, FarFieldError> {
    if !(0.0..=MAX_NOISE).contains(&level) {
        return Err(FarFieldError::BadNoise(level));
    }
    let mut out = f.clone();
    out.seed = Some(seed);
    out.noise = Some(level);
    if level == 0.0 {
        return Ok(out);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = f.n();
    let e: Vec<Complex64> = (0..n * n)
        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        .collect();
    let e_norm = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let factor = level * f.entries.norm_frobenius() / e_norm;
    for (dst, z) in out.entries.as_mut_slice().iter_mut().zip(e) {
        *dst += factor * z;
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    n: usize,
    k: f64,
    normalization: String,
    provenance: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    noise: Option<f64>,
}

/// Writes the `FFOP v1` text form: version line, JSON header, then `N²` row-major `re im` lines.
pub fn write_far_field<W: Write>(f: &FarFieldMatrix, mut out: W) -> Result<(), FarFieldError> {
    let header = Header {
        n: f.n(),
        k: f.wavenumber,
        normalization: f.normalization.clone(),
        provenance: f.provenance.clone(),
        seed: f.seed,
        noise: f.noise,
    };
    let mut text = String::with_capacity(48 * f.n() * f.n() + 256);
    text.push_str(FORMAT_VERSION);
    text.push('\n');
    text.push_str(&serde_json::to_string(&header).expect("header serializes"));
    text.push('\n');
    for z in f.entries.as_slice() {
        writeln!(text, "{:.16e} {:.16e}", z.re, z.im).expect("string write");
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

pub fn read_far_field<R: BufRead>(input: R) -> Result<FarFieldMatrix, FarFieldError> {
    let mut lines = input.lines();
    let parse_err = |line: usize, message: String| FarFieldError::Parse { line, message };
    let version = lines.next().ok_or_else(|| parse_err(1, "empty file".into()))??;
    if version.trim_end() != FORMAT_VERSION {
        if version.starts_with("FFOP ") {
            return Err(FarFieldError::UnsupportedVersion(version.trim_end().to_string()));
        }
        return Err(parse_err(1, format!("expected \"{FORMAT_VERSION}\", found {version:?}")));
    }
    let header_line = lines.next().ok_or_else(|| parse_err(2, "missing header".into()))??;
    let header: Header = serde_json::from_str(&header_line).map_err(|e| parse_err(2, format!("malformed header: {e}")))?;
    let grid = DirectionGrid::new(header.n).map_err(|e| parse_err(2, e.to_string()))?;
    if !header.k.is_finite() || header.k <= 0.0 {
        return Err(parse_err(2, format!("wavenumber {} must be positive", header.k)));
    }
    let count = header.n * header.n;
    let mut data = Vec::with_capacity(count);
    for idx in 0..count {
        let line_no = idx + 3;
        let line = lines
            .next()
            .ok_or_else(|| parse_err(line_no, format!("file truncated: expected {count} entries, found {idx}")))??;
        let mut parts = line.split_whitespace();
        let mut value = || -> Result<f64, FarFieldError> {
            let tok = parts.next().ok_or_else(|| parse_err(line_no, "expected two numbers".into()))?;
            tok.parse::<f64>()
                .map_err(|e| parse_err(line_no, format!("bad number {tok:?}: {e}")))
        };
        let (re, im) = (value()?, value()?);
        if parts.next().is_some() {
            return Err(parse_err(line_no, "extra tokens after two numbers".into()));
        }
        data.push(Complex64::new(re, im));
    }
    for (extra, line) in lines.enumerate() {
        if !line?.trim().is_empty() {
            return Err(parse_err(count + 3 + extra, "dimension mismatch: more entries than n² ".into()));
        }
    }
    let entries = ComplexMatrix::from_row_major(header.n, header.n, data).map_err(|e| parse_err(3, e.to_string()))?;
    Ok(FarFieldMatrix {
        grid,
        wavenumber: header.k,
        normalization: header.normalization,
        provenance: header.provenance,
        entries,
        seed: header.seed,
        noise: header.noise,
    })
}

pub fn save_far_field(f: &FarFieldMatrix, path: &std::path::Path) -> Result<(), FarFieldError> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_far_field(f, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_far_field(path: &std::path::Path) -> Result<FarFieldMatrix, FarFieldError> {
    let file = std::fs::File::open(path)?;
    read_far_field(std::io::BufReader::new(file))
}
