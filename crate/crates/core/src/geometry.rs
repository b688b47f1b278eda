//! Scene description: analytic boundary curves, the five domains with their
//! boundary conditions, contrast functions, and assumption checks.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type Point = [f64; 2];

/// Boundary samples used for containment and distance tests.
pub const VALIDATION_SAMPLES: usize = 4096;
/// Minimum signed-distance margin for a containment or disjointness check to pass.
pub const VALIDATION_MARGIN: f64 = 1e-9;
/// Smallest admissible phase margin returned by [`select_phase`].
pub const MIN_PHASE_MARGIN: f64 = 0.05;
/// Number of trial phases scanned by [`select_phase`].
pub const PHASE_GRID: usize = 4096;

const KITE_OFFSET: f64 = 0.65;
const KITE_HEIGHT: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid contrast: {0}")]
    InvalidContrast(String),
    #[error("no admissible phase: best margin {margin:.4} is below {MIN_PHASE_MARGIN}")]
    NoAdmissiblePhase { margin: f64 },
    #[error("scene validation failed: {0}")]
    Validation(ValidationReport),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Circle,
    Ellipse,
    /// `(cos s + 0.65 cos 2s − 0.65, 1.5 sin s)`, scaled by `scale`.
    Kite,
}

/// A smooth closed curve traversed counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    kind: CurveKind,
    center: Point,
    /// Circle: `(r, r)`. Ellipse: semi-axes. Kite: `(scale, scale)`.
    axes: [f64; 2],
    rotation: f64,
}

impl Curve {
    pub fn circle(center: Point, radius: f64) -> Result<Self, GeometryError> {
        Self::new(CurveKind::Circle, center, [radius, radius], 0.0)
    }

    pub fn ellipse(center: Point, semi_axes: [f64; 2], rotation: f64) -> Result<Self, GeometryError> {
        Self::new(CurveKind::Ellipse, center, semi_axes, rotation)
    }

    pub fn kite(center: Point, scale: f64, rotation: f64) -> Result<Self, GeometryError> {
        Self::new(CurveKind::Kite, center, [scale, scale], rotation)
    }

    pub fn new(kind: CurveKind, center: Point, axes: [f64; 2], rotation: f64) -> Result<Self, GeometryError> {
        if !(axes[0] > 0.0 && axes[1] > 0.0) || !axes.iter().chain(&center).all(|v| v.is_finite()) {
            return Err(GeometryError::InvalidCurve(format!(
                "{kind:?} needs finite center and positive size, got center {center:?} size {axes:?}"
            )));
        }
        if !rotation.is_finite() {
            return Err(GeometryError::InvalidCurve("rotation must be finite".into()));
        }
        Ok(Self {
            kind,
            center,
            axes,
            rotation,
        })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn axes(&self) -> [f64; 2] {
        self.axes
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    /// Radius when the curve is a circle.
    pub fn as_circle(&self) -> Option<(Point, f64)> {
        (self.kind == CurveKind::Circle).then_some((self.center, self.axes[0]))
    }

    pub fn translated(&self, d: Point) -> Self {
        Self {
            center: [self.center[0] + d[0], self.center[1] + d[1]],
            ..self.clone()
        }
    }

    /// Position and first two derivatives in the unrotated local frame.
    fn local(&self, s: f64) -> [Point; 3] {
        let (sn, cs) = s.sin_cos();
        let [a, b] = self.axes;
        match self.kind {
            CurveKind::Circle | CurveKind::Ellipse => [[a * cs, b * sn], [-a * sn, b * cs], [-a * cs, -b * sn]],
            CurveKind::Kite => {
                let (s2, c2) = (2.0 * s).sin_cos();
                [
                    [a * (cs + KITE_OFFSET * c2 - KITE_OFFSET), a * KITE_HEIGHT * sn],
                    [a * (-sn - 2.0 * KITE_OFFSET * s2), a * KITE_HEIGHT * cs],
                    [a * (-cs - 4.0 * KITE_OFFSET * c2), -a * KITE_HEIGHT * sn],
                ]
            }
        }
    }

    fn rotate(&self, v: Point) -> Point {
        let (sn, cs) = self.rotation.sin_cos();
        [cs * v[0] - sn * v[1], sn * v[0] + cs * v[1]]
    }

    /// `p(s)`, `p'(s)`, `p''(s)`.
    pub fn eval(&self, s: f64) -> [Point; 3] {
        let [p, d1, d2] = self.local(s);
        let p = self.rotate(p);
        [[p[0] + self.center[0], p[1] + self.center[1]], self.rotate(d1), self.rotate(d2)]
    }

    pub fn point(&self, s: f64) -> Point {
        self.eval(s)[0]
    }

    /// Closed polygon with `samples` vertices at equispaced parameters.
    pub fn polygon(&self, samples: usize) -> Vec<Point> {
        (0..samples)
            .map(|j| self.point(2.0 * PI * j as f64 / samples as f64))
            .collect()
    }

    /// Axis-aligned bounding box `(min, max)` from dense sampling.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in self.polygon(VALIDATION_SAMPLES) {
            for c in 0..2 {
                lo[c] = lo[c].min(p[c]);
                hi[c] = hi[c].max(p[c]);
            }
        }
        (lo, hi)
    }

    /// Approximate area enclosed (shoelace on the validation polygon).
    pub fn area(&self) -> f64 {
        if let Some((_, r)) = self.as_circle() {
            return PI * r * r;
        }
        let poly = self.polygon(VALIDATION_SAMPLES);
        shoelace(&poly)
    }

    /// Signed distance to the curve, negative inside.
    pub fn signed_distance(&self, x: Point) -> f64 {
        if let Some((c, r)) = self.as_circle() {
            return dist(x, c) - r;
        }
        Region::new(self).signed_distance(x)
    }

    pub fn contains(&self, x: Point) -> bool {
        self.signed_distance(x) < 0.0
    }
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn shoelace(poly: &[Point]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

/// A curve's dense polygon, reused for many point queries.
#[derive(Debug, Clone)]
pub struct Region {
    circle: Option<(Point, f64)>,
    polygon: Vec<Point>,
}

impl Region {
    pub fn new(curve: &Curve) -> Self {
        Self {
            circle: curve.as_circle(),
            polygon: curve.polygon(VALIDATION_SAMPLES),
        }
    }

    pub fn contains(&self, x: Point) -> bool {
        if let Some((c, r)) = self.circle {
            return dist(x, c) < r;
        }
        winding_inside(&self.polygon, x)
    }

    pub fn signed_distance(&self, x: Point) -> f64 {
        if let Some((c, r)) = self.circle {
            return dist(x, c) - r;
        }
        let n = self.polygon.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            best = best.min(segment_distance(x, self.polygon[i], self.polygon[(i + 1) % n]));
        }
        if winding_inside(&self.polygon, x) {
            -best
        } else {
            best
        }
    }
}

fn segment_distance(x: Point, a: Point, b: Point) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ax = [x[0] - a[0], x[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ax[0] * ab[0] + ax[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (ax[0] - t * ab[0]).hypot(ax[1] - t * ab[1])
}

/// Crossing-number point-in-polygon test.
fn winding_inside(poly: &[Point], x: Point) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (poly[i], poly[j]);
        if (pi[1] > x[1]) != (pj[1] > x[1]) {
            let cross = pj[0] + (x[1] - pj[1]) / (pi[1] - pj[1]) * (pi[0] - pj[0]);
            if x[0] < cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Nyström nodes `s_j = π j / n`, `j = 0..2n`, with geometry evaluated at each.
#[derive(Debug, Clone)]
pub struct BoundaryNodes {
    pub n: usize,
    pub params: Vec<f64>,
    pub points: Vec<Point>,
    pub d1: Vec<Point>,
    pub d2: Vec<Point>,
    /// `|p'(s)|`.
    pub speed: Vec<f64>,
    /// Outward unit normal.
    pub normals: Vec<Point>,
}

impl BoundaryNodes {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Signed curvature `(x' y'' − y' x'') / |p'|³`.
    pub fn curvature(&self, j: usize) -> f64 {
        let (d1, d2) = (self.d1[j], self.d2[j]);
        (d1[0] * d2[1] - d1[1] * d2[0]) / self.speed[j].powi(3)
    }
}

/// Samples a curve at `2n` equispaced parameters.
///
/// # Panics
/// If `n < 8` or `n` is odd.
pub fn curve_sample(curve: &Curve, n: usize) -> BoundaryNodes {
    assert!(n >= 8 && n.is_multiple_of(2), "node parameter n must be even and ≥ 8, got {n}");
    let m = 2 * n;
    let mut nodes = BoundaryNodes {
        n,
        params: Vec::with_capacity(m),
        points: Vec::with_capacity(m),
        d1: Vec::with_capacity(m),
        d2: Vec::with_capacity(m),
        speed: Vec::with_capacity(m),
        normals: Vec::with_capacity(m),
    };
    for j in 0..m {
        let s = PI * j as f64 / n as f64;
        let [p, d1, d2] = curve.eval(s);
        let speed = d1[0].hypot(d1[1]);
        nodes.params.push(s);
        nodes.points.push(p);
        nodes.d1.push(d1);
        nodes.d2.push(d2);
        nodes.speed.push(speed);
        nodes.normals.push([d1[1] / speed, -d1[0] / speed]);
    }
    nodes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContrastForm {
    Constant,
    /// `q₀ (1 − ρ²)` with `ρ` the normalized radial coordinate of a circle or ellipse.
    RadialBump,
}

/// Contrast `q` supported on Ω₁.
#[derive(Debug, Clone, PartialEq)]
pub struct ContrastSpec {
    pub form: ContrastForm,
    pub value: Complex64,
    pub support: Curve,
}

impl ContrastSpec {
    pub fn new(form: ContrastForm, value: Complex64, support: Curve) -> Result<Self, GeometryError> {
        let spec = Self { form, value, support };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<(), GeometryError> {
        if self.value.im < 0.0 {
            return Err(GeometryError::InvalidContrast(format!(
                "Im q₀ = {} must be nonnegative",
                self.value.im
            )));
        }
        if !(self.value.norm() > 0.0) {
            return Err(GeometryError::InvalidContrast("|q₀| must be positive".into()));
        }
        if self.form == ContrastForm::RadialBump && self.support.kind() == CurveKind::Kite {
            return Err(GeometryError::InvalidContrast(
                "radial-bump contrast needs a circle or ellipse support".into(),
            ));
        }
        Ok(())
    }

    /// `q(x)`, zero outside the support.
    pub fn eval(&self, x: Point) -> Complex64 {
        if !self.support.contains(x) {
            return Complex64::new(0.0, 0.0);
        }
        self.eval_inside(x)
    }

    /// `q(x)` for a point already known to lie in the support.
    pub fn eval_inside(&self, x: Point) -> Complex64 {
        match self.form {
            ContrastForm::Constant => self.value,
            ContrastForm::RadialBump => {
                let c = self.support.center();
                let (sn, cs) = self.support.rotation().sin_cos();
                let d = [x[0] - c[0], x[1] - c[1]];
                let local = [cs * d[0] + sn * d[1], -sn * d[0] + cs * d[1]];
                let [a, b] = self.support.axes();
                let rho2 = (local[0] / a).powi(2) + (local[1] / b).powi(2);
                self.value * (1.0 - rho2).max(0.0)
            }
        }
    }

    /// Contrast values on a `samples × samples` grid of interior points of the support.
    pub fn interior_samples(&self, samples: usize) -> Vec<Complex64> {
        let (lo, hi) = self.support.bounding_box();
        let region = Region::new(&self.support);
        let mut out = Vec::new();
        for i in 0..samples {
            for j in 0..samples {
                let x = [
                    lo[0] + (hi[0] - lo[0]) * (i as f64 + 0.5) / samples as f64,
                    lo[1] + (hi[1] - lo[1]) * (j as f64 + 0.5) / samples as f64,
                ];
                if region.contains(x) {
                    out.push(self.eval_inside(x));
                }
            }
        }
        out
    }
}

/// Boundary condition imposed on an obstacle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    /// `∂u/∂ν + iλ₀u = f` with `λ₀ > 0`.
    Impedance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SceneCase {
    /// Ω₁ sound-soft, Ω₂ sound-hard.
    Mixed,
    /// Ω₁ penetrable with contrast `q`, Ω₂ sound-soft.
    Medium,
}

/// Which modified far-field operator the reconstruction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `F_mix + F_Dir(B2) + F_Imp(B1∪B3)`, `F# = |Re F| + |Im F|`.
    #[serde(rename = "T1.2")]
    T12,
    /// `F_mix(q) + F_Dir(B2) + F_Imp(B3)`, `F# = |Re(e^{−it}F)| + |Im F|`, `t ∈ (π/2, 3π/2)`.
    #[serde(rename = "T1.4")]
    T14,
    /// `F_mix + F_Dir(B1∪B2)`.
    #[serde(rename = "T3.6")]
    T36,
    /// `F_mix(q) + F_Imp(B2)`, `t ∈ [0, π/2) ∪ (3π/2, 2π)`.
    #[serde(rename = "T4.6")]
    T46,
    /// `F_mix + F_Dir(B2)` with the plain `|Re F| + |Im F|`.
    #[serde(rename = "baseline-liu")]
    BaselineLiu,
    /// `F_mix(q) + F_Dir(B2)` with the phase-rotated real part.
    #[serde(rename = "baseline-kirschliu")]
    BaselineKirschLiu,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::T12,
        Variant::T14,
        Variant::T36,
        Variant::T46,
        Variant::BaselineLiu,
        Variant::BaselineKirschLiu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::T12 => "T1.2",
            Variant::T14 => "T1.4",
            Variant::T36 => "T3.6",
            Variant::T46 => "T4.6",
            Variant::BaselineLiu => "baseline-liu",
            Variant::BaselineKirschLiu => "baseline-kirschliu",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s)
    }

    pub fn case(self) -> SceneCase {
        match self {
            Variant::T12 | Variant::T36 | Variant::BaselineLiu => SceneCase::Mixed,
            Variant::T14 | Variant::T46 | Variant::BaselineKirschLiu => SceneCase::Medium,
        }
    }

    /// Whether `F#` uses the phase-rotated real part `Re(e^{−it}F)`.
    pub fn uses_phase(self) -> bool {
        self.case() == SceneCase::Medium
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Geometry and physics of a two-component scatterer plus the a-priori domains.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub case: SceneCase,
    pub omega1: Curve,
    /// Present exactly in the medium case.
    pub contrast: Option<ContrastSpec>,
    pub omega2: Curve,
    pub b1: Option<Curve>,
    pub b2: Curve,
    pub b3: Option<Curve>,
    pub wavenumber: f64,
    pub lambda0: f64,
    pub variant: Variant,
}

impl Scene {
    /// Ω₁ is sound-soft in the mixed case.
    pub fn omega1_condition(&self) -> Option<BoundaryCondition> {
        (self.case == SceneCase::Mixed).then_some(BoundaryCondition::Dirichlet)
    }

    pub fn omega2_condition(&self) -> BoundaryCondition {
        match self.case {
            SceneCase::Mixed => BoundaryCondition::Neumann,
            SceneCase::Medium => BoundaryCondition::Dirichlet,
        }
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        Self {
            variant,
            ..self.clone()
        }
    }
}

/// One failed assumption check.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, message: impl Into<String>) {
        self.violations.push(Violation { message: message.into() });
    }

    pub fn into_result(self) -> Result<(), GeometryError> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(GeometryError::Validation(self))
        }
    }

    pub fn mentions(&self, needle: &str) -> bool {
        self.violations.iter().any(|v| v.message.contains(needle))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<&str> = self.violations.iter().map(|v| v.message.as_str()).collect();
        f.write_str(&msgs.join("; "))
    }
}

/// `closure(inner) ⊂ outer`.
pub fn closure_contained(inner: &Curve, outer: &Curve) -> bool {
    if let (Some((ci, ri)), Some((co, ro))) = (inner.as_circle(), outer.as_circle()) {
        return dist(ci, co) + ri <= ro - VALIDATION_MARGIN;
    }
    let region = Region::new(outer);
    inner
        .polygon(VALIDATION_SAMPLES)
        .into_iter()
        .all(|p| region.signed_distance(p) <= -VALIDATION_MARGIN)
}

/// `closure(a) ∩ closure(b) = ∅`.
pub fn closures_disjoint(a: &Curve, b: &Curve) -> bool {
    if let (Some((ca, ra)), Some((cb, rb))) = (a.as_circle(), b.as_circle()) {
        return dist(ca, cb) >= ra + rb + VALIDATION_MARGIN;
    }
    let ra = Region::new(a);
    let rb = Region::new(b);
    a.polygon(VALIDATION_SAMPLES)
        .into_iter()
        .all(|p| rb.signed_distance(p) >= VALIDATION_MARGIN)
        && b.polygon(VALIDATION_SAMPLES)
            .into_iter()
            .all(|p| ra.signed_distance(p) >= VALIDATION_MARGIN)
}

/// Checks the geometric and physical assumptions required by the scene's variant.
pub fn validate_scene(scene: &Scene) -> ValidationReport {
    let mut report = ValidationReport::default();
    if !(scene.wavenumber > 0.0 && scene.wavenumber.is_finite()) {
        report.push(format!("wavenumber k = {} must be positive", scene.wavenumber));
    }
    if !(scene.lambda0 > 0.0 && scene.lambda0.is_finite()) {
        report.push(format!("impedance λ₀ = {} must be positive", scene.lambda0));
    }
    if scene.variant.case() != scene.case {
        report.push(format!(
            "variant {} does not apply to the {:?} case",
            scene.variant, scene.case
        ));
    }
    match (scene.case, &scene.contrast) {
        (SceneCase::Medium, None) => report.push("medium case requires a contrast q on Ω1"),
        (SceneCase::Mixed, Some(_)) => report.push("mixed case takes no contrast"),
        (SceneCase::Medium, Some(q)) => {
            if q.value.im < 0.0 {
                report.push("Im q < 0 on Ω1");
            }
            if !(q.value.norm() > 0.0) {
                report.push("|q| is not bounded below on Ω1");
            }
            if q.value.norm() > 5.0 {
                report.push("|q| > 5 is outside the supported contrast range");
            }
            if q.support != scene.omega1 {
                report.push("contrast support must be ∂Ω1");
            }
        }
        _ => {}
    }

    if !closures_disjoint(&scene.omega1, &scene.omega2) {
        report.push("closure(Ω1) ∩ closure(Ω2) ≠ ∅");
    }
    if !closure_contained(&scene.omega2, &scene.b2) {
        report.push("closure(Ω2) ⊄ B2");
    }
    if !closures_disjoint(&scene.omega1, &scene.b2) {
        report.push("closure(Ω1) ∩ closure(B2) ≠ ∅");
    }
    let needs_b1 = matches!(scene.variant, Variant::T12 | Variant::T36);
    let needs_b3 = matches!(scene.variant, Variant::T12 | Variant::T14);
    if needs_b1 {
        match &scene.b1 {
            None => report.push(format!("missing-domain: variant {} requires B1", scene.variant)),
            Some(b1) => {
                if !closure_contained(b1, &scene.omega1) {
                    report.push("closure(B1) ⊄ Ω1");
                }
            }
        }
    }
    if needs_b3 {
        match &scene.b3 {
            None => report.push(format!("missing-domain: variant {} requires B3", scene.variant)),
            Some(b3) => {
                if !closure_contained(b3, &scene.b2) {
                    report.push("closure(B3) ⊄ B2");
                }
            }
        }
    }
    if scene.case == SceneCase::Medium {
        if let Some(q) = &scene.contrast {
            match select_phase(q) {
                Ok(sel) => {
                    let ok = match scene.variant {
                        Variant::T14 => sel.variant == Variant::T14,
                        Variant::T46 => sel.variant == Variant::T46,
                        _ => true,
                    };
                    if !ok {
                        report.push(format!(
                            "contrast phase selects {} (t = {:.4}), not {}",
                            sel.variant, sel.t, scene.variant
                        ));
                    }
                }
                Err(e) => report.push(e.to_string()),
            }
        }
    }
    report
}

/// Chosen phase `t` for `Re(e^{−it}F)` and the variant it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSelection {
    pub t: f64,
    /// `min Re(e^{−it}q)/|q|` over the sampled support.
    pub margin: f64,
    pub variant: Variant,
}

fn admissible_phase(j: usize) -> bool {
    j != PHASE_GRID / 4 && j != 3 * PHASE_GRID / 4
}

/// Picks `t` maximizing `min_Ω1 Re(e^{−it} q)/|q|` on a uniform phase grid.
pub fn select_phase(contrast: &ContrastSpec) -> Result<PhaseSelection, GeometryError> {
    let mut samples = contrast.interior_samples(64);
    samples.retain(|q| q.norm() > 0.0);
    if samples.is_empty() {
        samples.push(contrast.value);
    }
    phase_from_samples(&samples)
}

/// Phase selection for an explicit list of contrast samples.
pub fn phase_from_samples(samples: &[Complex64]) -> Result<PhaseSelection, GeometryError> {
    let units: Vec<Complex64> = samples.iter().map(|q| q / q.norm()).collect();
    let mut best: Option<(usize, f64)> = None;
    for j in (0..PHASE_GRID).filter(|&j| admissible_phase(j)) {
        let t = 2.0 * PI * j as f64 / PHASE_GRID as f64;
        let rot = Complex64::from_polar(1.0, -t);
        let margin = units.iter().map(|u| (rot * u).re).fold(f64::INFINITY, f64::min);
        if best.is_none_or(|(_, m)| margin > m) {
            best = Some((j, margin));
        }
    }
    let (j, margin) = best.expect("phase grid is non-empty");
    if margin < MIN_PHASE_MARGIN {
        return Err(GeometryError::NoAdmissiblePhase { margin });
    }
    let t = 2.0 * PI * j as f64 / PHASE_GRID as f64;
    let variant = if t > FRAC_PI_2 && t < 3.0 * FRAC_PI_2 {
        Variant::T14
    } else {
        Variant::T46
    };
    Ok(PhaseSelection { t, margin, variant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn disc(x: f64, y: f64, r: f64) -> Curve {
        Curve::circle([x, y], r).unwrap()
    }

    fn two_disc_scene() -> Scene {
        Scene {
            case: SceneCase::Mixed,
            omega1: disc(-3.0, 0.0, 1.0),
            contrast: None,
            omega2: disc(3.0, 0.0, 1.0),
            b1: Some(disc(-3.0, 0.0, 0.3)),
            b2: disc(3.0, 0.0, 1.5),
            b3: Some(disc(3.5, 0.5, 0.4)),
            wavenumber: 2.0,
            lambda0: 1.0,
            variant: Variant::T12,
        }
    }

    #[test]
    fn circle_nodes() {
        let nodes = curve_sample(&disc(0.0, 0.0, 1.0), 8);
        assert_eq!(nodes.len(), 16);
        for j in 0..16 {
            let p = nodes.points[j];
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-15);
            assert!((nodes.speed[j] - 1.0).abs() < 1e-15);
            // outward normal of the unit circle is the position itself
            assert!((nodes.normals[j][0] - p[0]).abs() < 1e-15);
            assert!((nodes.normals[j][1] - p[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn ellipse_nodes_on_curve() {
        let nodes = curve_sample(&Curve::ellipse([0.0, 0.0], [2.0, 1.0], 0.0).unwrap(), 16);
        for p in &nodes.points {
            assert!(((p[0] / 2.0).powi(2) + p[1] * p[1] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn kite_derivatives_match_closed_form() {
        let kite = Curve::kite([0.0, 0.0], 1.0, 0.0).unwrap();
        let nodes = curve_sample(&kite, 32);
        for j in 0..nodes.len() {
            let s = nodes.params[j];
            let p = [s.cos() + 0.65 * (2.0 * s).cos() - 0.65, 1.5 * s.sin()];
            let d1 = [-s.sin() - 1.3 * (2.0 * s).sin(), 1.5 * s.cos()];
            let d2 = [-s.cos() - 2.6 * (2.0 * s).cos(), -1.5 * s.sin()];
            for c in 0..2 {
                assert!((nodes.points[j][c] - p[c]).abs() < 1e-14);
                assert!((nodes.d1[j][c] - d1[c]).abs() < 1e-14);
                assert!((nodes.d2[j][c] - d2[c]).abs() < 1e-14);
            }
            let nrm = nodes.normals[j];
            assert!((nrm[0] * d1[0] + nrm[1] * d1[1]).abs() < 1e-14);
        }
    }

    #[test]
    fn kite_derivatives_match_finite_differences() {
        let kite = Curve::kite([-3.0, 0.0], 1.3, 0.4).unwrap();
        let h = 1e-5;
        for &s in &[0.1, 1.7, 3.0, 5.5] {
            let [_, d1, d2] = kite.eval(s);
            let (pp, pm) = (kite.point(s + h), kite.point(s - h));
            let p0 = kite.point(s);
            for c in 0..2 {
                assert!(((pp[c] - pm[c]) / (2.0 * h) - d1[c]).abs() < 1e-8);
                assert!(((pp[c] - 2.0 * p0[c] + pm[c]) / (h * h) - d2[c]).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn normals_point_outward() {
        for curve in [
            disc(1.0, 2.0, 0.5),
            Curve::ellipse([0.0, 1.0], [2.0, 0.7], 0.9).unwrap(),
            Curve::kite([-3.0, 0.0], 1.0, 0.0).unwrap(),
        ] {
            let nodes = curve_sample(&curve, 32);
            for j in 0..nodes.len() {
                let p = nodes.points[j];
                let nrm = nodes.normals[j];
                let out = [p[0] + 1e-4 * nrm[0], p[1] + 1e-4 * nrm[1]];
                let inn = [p[0] - 1e-4 * nrm[0], p[1] - 1e-4 * nrm[1]];
                assert!(!curve.contains(out) && curve.contains(inn));
            }
        }
    }

    #[test]
    fn kite_area() {
        // ∮ x dy = 1.5 ∫ (cos s + 0.65 cos 2s − 0.65) cos s ds = 1.5 π
        let kite = Curve::kite([0.0, 0.0], 1.0, 0.0).unwrap();
        assert!((kite.area() - 1.5 * PI).abs() < 1e-5);
    }

    #[test]
    fn valid_two_disc_scene_passes() {
        let report = validate_scene(&two_disc_scene());
        assert!(report.is_ok(), "{report}");
    }

    #[test]
    fn small_b2_fails() {
        let mut scene = two_disc_scene();
        scene.b2 = disc(3.0, 0.0, 0.9);
        scene.b3 = Some(disc(3.0, 0.0, 0.2));
        let report = validate_scene(&scene);
        assert!(report.mentions("closure(Ω2) ⊄ B2"), "{report}");
    }

    #[test]
    fn overlapping_b2_fails_disjointness() {
        let mut scene = two_disc_scene();
        scene.omega1 = disc(0.0, 0.0, 1.0);
        scene.b1 = Some(disc(0.0, 0.0, 0.3));
        scene.b2 = disc(2.0, 0.0, 1.5);
        scene.omega2 = disc(2.0, 0.0, 0.5);
        scene.b3 = Some(disc(2.0, 0.0, 0.2));
        let report = validate_scene(&scene);
        assert!(report.mentions("closure(Ω1) ∩ closure(B2) ≠ ∅"), "{report}");
    }

    #[test]
    fn missing_b3_reported() {
        let mut scene = two_disc_scene();
        scene.b3 = None;
        let report = validate_scene(&scene);
        assert!(report.mentions("missing-domain"));
        scene.variant = Variant::BaselineLiu;
        assert!(validate_scene(&scene).is_ok());
    }

    #[test]
    fn kite_scene_validates() {
        let mut scene = two_disc_scene();
        scene.omega1 = Curve::kite([-3.0, 0.0], 1.0, 0.0).unwrap();
        scene.b3 = Some(disc(3.4, 0.4, 0.4));
        assert!(validate_scene(&scene).is_ok());
        scene.b1 = Some(disc(-3.0, 0.0, 1.2));
        assert!(validate_scene(&scene).mentions("closure(B1) ⊄ Ω1"));
    }

    #[test]
    fn sampled_checks_agree_with_circle_arithmetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let a = disc(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(0.2..1.5));
            let b = disc(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(0.2..1.5));
            // ellipses with equal semi-axes take the sampled path
            let ea = Curve::ellipse(a.center(), a.axes(), 0.0).unwrap();
            let eb = Curve::ellipse(b.center(), b.axes(), 0.0).unwrap();
            let d = dist(a.center(), b.center());
            let (ra, rb) = (a.axes()[0], b.axes()[0]);
            let gap_disjoint = d - ra - rb;
            let gap_inside = rb - d - ra;
            if gap_disjoint.abs() > 1e-3 {
                assert_eq!(closures_disjoint(&ea, &eb), gap_disjoint > 0.0);
                assert_eq!(closures_disjoint(&a, &b), gap_disjoint > 0.0);
            }
            if gap_inside.abs() > 1e-3 {
                assert_eq!(closure_contained(&ea, &eb), gap_inside > 0.0);
                assert_eq!(closure_contained(&a, &b), gap_inside > 0.0);
            }
        }
    }

    fn medium(q: Complex64) -> ContrastSpec {
        ContrastSpec::new(ContrastForm::Constant, q, disc(-3.0, 0.0, 1.0)).unwrap()
    }

    #[test]
    fn phase_for_negative_contrast() {
        let sel = select_phase(&medium(Complex64::new(-0.5, 0.0))).unwrap();
        assert!((sel.t - PI).abs() < 1e-15);
        assert!((sel.margin - 1.0).abs() < 1e-12);
        assert_eq!(sel.variant, Variant::T14);
    }

    #[test]
    fn phase_for_positive_contrast() {
        let sel = select_phase(&medium(Complex64::new(0.5, 0.0))).unwrap();
        assert_eq!(sel.t, 0.0);
        assert!((sel.margin - 1.0).abs() < 1e-12);
        assert_eq!(sel.variant, Variant::T46);
    }

    #[test]
    fn phase_for_imaginary_contrast() {
        // brute-force oracle: best admissible grid phase for sin t
        let step = 2.0 * PI / PHASE_GRID as f64;
        let oracle = (0..PHASE_GRID)
            .filter(|&j| j != PHASE_GRID / 4 && j != 3 * PHASE_GRID / 4)
            .map(|j| (j as f64 * step).sin())
            .fold(f64::NEG_INFINITY, f64::max);
        let sel = select_phase(&medium(Complex64::new(0.0, 1.0))).unwrap();
        assert!((sel.t - FRAC_PI_2).abs() <= step * (1.0 + 1e-12));
        assert!(sel.t != FRAC_PI_2);
        assert!((sel.margin - oracle).abs() < 1e-12);
        assert!(1.0 - sel.margin < step * step);
        let expected = if sel.t > FRAC_PI_2 { Variant::T14 } else { Variant::T46 };
        assert_eq!(sel.variant, expected);
    }

    #[test]
    fn no_admissible_phase() {
        let samples = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        assert!(matches!(
            phase_from_samples(&samples),
            Err(GeometryError::NoAdmissiblePhase { .. })
        ));
    }

    #[test]
    fn phase_margin_holds_on_dense_samples() {
        let spec = ContrastSpec::new(
            ContrastForm::RadialBump,
            Complex64::new(-0.4, 0.2),
            Curve::ellipse([0.0, 0.0], [1.0, 0.6], 0.3).unwrap(),
        )
        .unwrap();
        let sel = select_phase(&spec).unwrap();
        let rot = Complex64::from_polar(1.0, -sel.t);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut checked = 0;
        while checked < 10_000 {
            let x = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let q = spec.eval(x);
            if q.norm() == 0.0 {
                continue;
            }
            assert!((rot * q).re / q.norm() >= sel.margin - 1e-12);
            checked += 1;
        }
    }

    #[test]
    fn contrast_invariants() {
        assert!(ContrastSpec::new(ContrastForm::Constant, Complex64::new(0.5, -0.1), disc(0.0, 0.0, 1.0)).is_err());
        assert!(ContrastSpec::new(ContrastForm::Constant, Complex64::new(0.0, 0.0), disc(0.0, 0.0, 1.0)).is_err());
        assert!(ContrastSpec::new(
            ContrastForm::RadialBump,
            Complex64::new(0.5, 0.0),
            Curve::kite([0.0, 0.0], 1.0, 0.0).unwrap()
        )
        .is_err());
        let q = medium(Complex64::new(0.5, 0.1));
        assert_eq!(q.eval([10.0, 0.0]), Complex64::new(0.0, 0.0));
        assert_eq!(q.eval([-3.0, 0.0]), Complex64::new(0.5, 0.1));
    }
}
