//! JSON scene configuration.
//!
//! ```json
//! {
//!   "case": "mixed", "k": 3.0, "lambda0": 1.0, "variant": "T1.2",
//!   "omega1": {"kind": "kite", "center": [-3, 0], "radius": 1.0, "rotation": 0.0},
//!   "omega2": {"kind": "circle", "center": [3, 0], "radius": 1.0},
//!   "b1": {"kind": "circle", "center": [-3, 0], "radius": 0.3},
//!   "b2": {"kind": "circle", "center": [3, 0], "radius": 1.5},
//!   "b3": {"kind": "circle", "center": [3.4, 0.4], "radius": 0.4}
//! }
//! ```
//!
//! For a kite `radius` is the scale factor. In the medium case `omega1` carries
//! `"q": {"form": "constant" | "radial-bump", "re": …, "im": …}`. Unknown keys are
//! rejected everywhere.

use serde::Deserialize;

use scatterfm::geometry::{select_phase, validate_scene, ContrastForm, ContrastSpec};
use scatterfm::{Complex64, Curve, CurveKind, Scene, SceneCase, Variant};

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeConfig {
    pub kind: CurveKind,
    pub center: [f64; 2],
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub semi_axes: Option<[f64; 2]>,
    #[serde(default)]
    pub rotation: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContrastConfig {
    pub form: ContrastForm,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Shape fields plus the optional contrast; only Ω₁ may carry `q`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Omega1Config {
    pub kind: CurveKind,
    pub center: [f64; 2],
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub semi_axes: Option<[f64; 2]>,
    #[serde(default)]
    pub rotation: f64,
    #[serde(default)]
    pub q: Option<ContrastConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub case: SceneCase,
    pub k: f64,
    #[serde(default = "default_lambda0")]
    pub lambda0: f64,
    #[serde(default)]
    pub variant: Option<String>,
    pub omega1: Omega1Config,
    pub omega2: ShapeConfig,
    #[serde(default)]
    pub b1: Option<ShapeConfig>,
    pub b2: ShapeConfig,
    #[serde(default)]
    pub b3: Option<ShapeConfig>,
}

fn default_lambda0() -> f64 {
    1.0
}

fn build_curve(
    label: &str,
    kind: CurveKind,
    center: [f64; 2],
    radius: Option<f64>,
    semi_axes: Option<[f64; 2]>,
    rotation: f64,
) -> Result<Curve, CliError> {
    let invalid = |msg: String| CliError::Validation(format!("{label}: {msg}"));
    let curve = match (kind, radius, semi_axes) {
        (CurveKind::Circle, Some(r), None) => Curve::circle(center, r),
        (CurveKind::Ellipse, None, Some(ab)) => Curve::ellipse(center, ab, rotation),
        (CurveKind::Kite, Some(s), None) => Curve::kite(center, s, rotation),
        (CurveKind::Ellipse, _, _) => return Err(invalid("an ellipse needs `semi_axes` and no `radius`".into())),
        (_, _, _) => return Err(invalid(format!("a {kind:?} needs `radius` and no `semi_axes`").to_lowercase())),
    };
    curve.map_err(|e| invalid(e.to_string()))
}

impl ShapeConfig {
    fn curve(&self, label: &str) -> Result<Curve, CliError> {
        build_curve(label, self.kind, self.center, self.radius, self.semi_axes, self.rotation)
    }
}

impl SceneConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("scene JSON: {e}")))
    }

    /// Builds and validates the scene. `variant` overrides the one in the file.
    pub fn to_scene(&self, variant: Option<Variant>, lambda0: Option<f64>) -> Result<Scene, CliError> {
        let s = &self.omega1;
        let omega1 = build_curve("omega1", s.kind, s.center, s.radius, s.semi_axes, s.rotation)?;
        let contrast = match &self.omega1.q {
            Some(q) => Some(
                ContrastSpec::new(q.form, Complex64::new(q.re, q.im), omega1.clone())
                    .map_err(|e| CliError::Validation(format!("omega1.q: {e}")))?,
            ),
            None => None,
        };
        let file_variant = match &self.variant {
            Some(name) => Some(parse_variant(name)?),
            None => None,
        };
        let variant = match variant.or(file_variant) {
            Some(v) => v,
            None => match (self.case, &contrast) {
                (SceneCase::Mixed, _) => Variant::T12,
                (SceneCase::Medium, Some(q)) => select_phase(q).map_err(|e| CliError::Validation(e.to_string()))?.variant,
                (SceneCase::Medium, None) => {
                    return Err(CliError::Validation("medium case requires a contrast q on omega1".into()))
                }
            },
        };
        let optional = |c: &Option<ShapeConfig>, label: &str| c.as_ref().map(|c| c.curve(label)).transpose();
        let scene = Scene {
            case: self.case,
            omega1,
            contrast,
            omega2: self.omega2.curve("omega2")?,
            b1: optional(&self.b1, "b1")?,
            b2: self.b2.curve("b2")?,
            b3: optional(&self.b3, "b3")?,
            wavenumber: self.k,
            lambda0: lambda0.unwrap_or(self.lambda0),
            variant,
        };
        let report = validate_scene(&scene);
        if !report.is_ok() {
            return Err(CliError::Validation(report.to_string()));
        }
        Ok(scene)
    }
}

pub fn parse_variant(name: &str) -> Result<Variant, CliError> {
    Variant::parse(name).ok_or_else(|| {
        let known: Vec<&str> = Variant::ALL.iter().map(|v| v.name()).collect();
        CliError::Validation(format!("unknown variant {name:?} (expected one of {})", known.join(", ")))
    })
}

pub fn load_scene(path: &std::path::Path, variant: Option<Variant>, lambda0: Option<f64>) -> Result<Scene, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    SceneConfig::parse(&text)?.to_scene(variant, lambda0)
}
