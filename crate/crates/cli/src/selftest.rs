//! Invariant suites run by `scatterfm selftest`.
//!
//! Each suite prints one JSON line `{"suite", "status", "detail"}`; the command
//! fails if any suite fails. Faults can be injected into individual fixtures to
//! confirm that the suites actually detect the defects they guard against.

use std::f64::consts::PI;

use scatterfm::bie::{assemble_boundary_operator, ExteriorSolver, Obstacle, OperatorKind};
use scatterfm::factorization::{build_sharp, reconstruct, threshold_and_score, Window, DEFAULT_TRUNCATION};
use scatterfm::farfield::{
    add_noise, artificial_operator, exterior_far_field_operator, read_far_field, write_far_field, ArtificialKind,
    DirectionGrid,
};
use scatterfm::geometry::{select_phase, validate_scene, ContrastForm, ContrastSpec};
use scatterfm::kernel::Wavenumber;
use scatterfm::linalg::{hermitian_eig, LuFactorization};
use scatterfm::medium::{MediumSolver, VolumeGrid};
use scatterfm::oracle::{unit_directions, DiscCondition, DiscOracle};
use scatterfm::specfun::{bessel_j, bessel_y};
use scatterfm::{BoundaryCondition, Complex64, ComplexMatrix, Curve, Scene, SceneCase, Variant};

use crate::CliError;

/// Faults the harness knows how to inject.
pub const FAULTS: [&str; 3] = ["sign-flip-single-layer", "shift-incidence", "perturb-bessel"];

type SuiteResult = Result<String, String>;

struct Suite {
    name: &'static str,
    run: fn(Option<&str>) -> SuiteResult,
}

fn check(ok: bool, detail: String) -> SuiteResult {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn disc(c: [f64; 2], r: f64) -> Curve {
    Curve::circle(c, r).expect("valid circle")
}

fn mixed_scene() -> Scene {
    Scene {
        case: SceneCase::Mixed,
        omega1: Curve::kite([-3.0, 0.0], 1.0, 0.0).expect("valid kite"),
        contrast: None,
        omega2: disc([3.0, 0.0], 1.0),
        b1: Some(disc([-3.0, 0.0], 0.3)),
        b2: disc([3.0, 0.0], 1.5),
        b3: Some(disc([3.4, 0.4], 0.4)),
        wavenumber: 2.0,
        lambda0: 1.0,
        variant: Variant::T12,
    }
}

fn suite_wronskian(fault: Option<&str>) -> SuiteResult {
    let mut worst = 0.0f64;
    for n in 0..20 {
        for x in [0.3, 1.0, 4.5, 11.0, 19.5] {
            let mut j = bessel_j(n, x).map_err(err)?;
            if fault == Some("perturb-bessel") {
                j *= 1.0 + 1e-6;
            }
            let w = bessel_j(n + 1, x).map_err(err)? * bessel_y(n, x).map_err(err)? - j * bessel_y(n + 1, x).map_err(err)?;
            worst = worst.max((w * PI * x / 2.0 - 1.0).abs());
        }
    }
    check(worst < 1e-10, format!("max relative Wronskian defect {worst:.2e}"))
}

fn suite_bessel_values(_: Option<&str>) -> SuiteResult {
    // J0(1), Y0(1), J5(10)
    let cases = [
        (bessel_j(0, 1.0).map_err(err)?, 0.765_197_686_557_966_6),
        (bessel_y(0, 1.0).map_err(err)?, 0.088_256_964_215_676_96),
        (bessel_j(5, 10.0).map_err(err)?, -0.234_061_528_186_793_7),
    ];
    let worst = cases.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    check(worst < 1e-13, format!("max deviation from tabulated values {worst:.2e}"))
}

fn suite_eigensolver(_: Option<&str>) -> SuiteResult {
    let n = 12;
    let a = ComplexMatrix::from_fn(n, n, |i, j| {
        let (x, y) = (i as f64, j as f64);
        Complex64::new((x * y + 1.0).cos() + (x + y).sin(), (x - y).sin() * 0.5)
    })
    .hermitian_part();
    let e = hermitian_eig(&a).map_err(err)?;
    let mut worst = 0.0f64;
    for k in 0..n {
        let v = e.vector(k);
        let av = a.matvec(&v).map_err(err)?;
        let r: f64 = av.iter().zip(&v).map(|(x, y)| (x - y * e.eigenvalues[k]).norm_sqr()).sum();
        worst = worst.max(r.sqrt());
    }
    let sorted = e.eigenvalues.windows(2).all(|w| w[0] >= w[1]);
    check(worst < 1e-10 && sorted, format!("max eigenpair residual {worst:.2e}, descending order {sorted}"))
}

fn suite_lu(_: Option<&str>) -> SuiteResult {
    let n = 20;
    let a = ComplexMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { 4.0 } else { 0.0 };
        Complex64::new(d + ((i * 7 + j * 3) % 5) as f64 * 0.1, ((i + 2 * j) % 3) as f64 * 0.2)
    });
    let x: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, 1.0)).collect();
    let b = a.matvec(&x).map_err(err)?;
    let sol = LuFactorization::new(&a).map_err(err)?.solve_vec(&b).map_err(err)?;
    let worst = sol.iter().zip(&x).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    check(worst < 1e-12, format!("max solution error {worst:.2e}"))
}

fn suite_geometry(_: Option<&str>) -> SuiteResult {
    let c = disc([0.5, -0.25], 1.3);
    let area_err = (c.area() - PI * 1.69).abs();
    let e = Curve::ellipse([0.0, 0.0], [2.0, 0.5], 0.3).map_err(err)?;
    let e_err = (e.area() - PI).abs();
    let inside = c.contains([0.5, 0.5]) && !c.contains([2.0, 0.0]);
    check(
        area_err < 1e-10 && e_err < 1e-5 && inside,
        format!("circle area error {area_err:.1e}, ellipse {e_err:.1e}, containment {inside}"),
    )
}

fn suite_validation(_: Option<&str>) -> SuiteResult {
    let good = validate_scene(&mixed_scene());
    let mut bad = mixed_scene();
    bad.b2 = disc([3.0, 0.0], 0.9);
    let report = validate_scene(&bad);
    let mut missing = mixed_scene();
    missing.b3 = None;
    let missing = validate_scene(&missing);
    check(
        good.is_ok() && report.mentions("closure(Ω2) ⊄ B2") && missing.mentions("missing-domain"),
        format!("valid scene ok {}, small B2 flagged {}, missing B3 flagged {}", good.is_ok(), !report.is_ok(), !missing.is_ok()),
    )
}

fn suite_phase(_: Option<&str>) -> SuiteResult {
    let support = disc([0.0, 0.0], 1.0);
    let neg = select_phase(&ContrastSpec::new(ContrastForm::Constant, Complex64::new(-0.5, 0.0), support.clone()).map_err(err)?)
        .map_err(err)?;
    let pos = select_phase(&ContrastSpec::new(ContrastForm::Constant, Complex64::new(0.5, 0.0), support).map_err(err)?)
        .map_err(err)?;
    check(
        (neg.t - PI).abs() < 1e-12 && neg.variant == Variant::T14 && pos.t == 0.0 && pos.variant == Variant::T46,
        format!("q0=-0.5 → t={:.4} {}, q0=0.5 → t={:.4} {}", neg.t, neg.variant, pos.t, pos.variant),
    )
}

fn suite_single_layer_coercivity(fault: Option<&str>) -> SuiteResult {
    let curve = Curve::ellipse([0.0, 0.0], [1.2, 0.7], 0.4).map_err(err)?;
    let s = assemble_boundary_operator(OperatorKind::S, &[curve], Wavenumber::Imaginary, 24).map_err(err)?;
    let mut m = s.weight_normalized().hermitian_part();
    if fault == Some("sign-flip-single-layer") {
        m = m.scale_real(-1.0);
    }
    let e = hermitian_eig(&m).map_err(err)?;
    let min = *e.eigenvalues.last().unwrap_or(&f64::NAN);
    check(min > 0.0, format!("smallest eigenvalue of S at wavenumber i: {min:.3e} (must be > 0)"))
}

fn suite_hypersingular_coercivity(_: Option<&str>) -> SuiteResult {
    let curve = Curve::ellipse([0.0, 0.0], [1.2, 0.7], 0.4).map_err(err)?;
    let n = assemble_boundary_operator(OperatorKind::N, &[curve], Wavenumber::Imaginary, 24).map_err(err)?;
    let e = hermitian_eig(&n.weight_normalized().hermitian_part()).map_err(err)?;
    let max = e.eigenvalues[0];
    check(max < 0.0, format!("largest eigenvalue of N at wavenumber i: {max:.3e} (must be < 0)"))
}

fn suite_single_layer_sign(_: Option<&str>) -> SuiteResult {
    let curve = Curve::kite([0.0, 0.0], 1.0, 0.0).map_err(err)?;
    let s = assemble_boundary_operator(OperatorKind::S, &[curve], Wavenumber::Real(2.5), 24).map_err(err)?;
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..20u32 {
        let phi: Vec<Complex64> = (0..48)
            .map(|j| {
                let a = (seed as f64 + 1.0) * (j as f64 * 0.37).sin();
                Complex64::new(a.cos(), (a * 1.7 + seed as f64).sin())
            })
            .collect();
        let sphi = s.matrix.matvec(&phi).map_err(err)?;
        worst = worst.max(s.inner(&phi, &sphi).im / s.inner(&phi, &phi).re);
    }
    check(worst <= 1e-10, format!("max Im⟨φ,Sφ⟩/‖φ‖² at k = 2.5: {worst:.3e} (must be ≤ 0)"))
}

fn disc_error(condition: BoundaryCondition, oracle_condition: DiscCondition) -> Result<f64, String> {
    let k = 2.0;
    let oracle = DiscOracle::new([0.0, 0.0], 1.0, k, oracle_condition);
    let solver = ExteriorSolver::new(&[Obstacle::new(disc([0.0, 0.0], 1.0), condition)], k, 32).map_err(err)?;
    let (mut num, mut den) = (0.0, 0.0);
    for theta in unit_directions(4) {
        let sol = solver.solve_plane_wave(theta).map_err(err)?;
        for x in unit_directions(32) {
            let exact = oracle.far_field(x, theta).map_err(err)?;
            num += (sol.far_field(x) - exact).norm_sqr();
            den += exact.norm_sqr();
        }
    }
    Ok((num / den).sqrt())
}

fn suite_disc_dirichlet(_: Option<&str>) -> SuiteResult {
    let e = disc_error(BoundaryCondition::Dirichlet, DiscCondition::Dirichlet)?;
    check(e <= 1e-6, format!("relative far-field error {e:.2e} (≤ 1e-6)"))
}

fn suite_disc_neumann_impedance(_: Option<&str>) -> SuiteResult {
    let n = disc_error(BoundaryCondition::Neumann, DiscCondition::Neumann)?;
    let i = disc_error(BoundaryCondition::Impedance(1.0), DiscCondition::Impedance { lambda: 1.0 })?;
    check(n <= 1e-5 && i <= 1e-5, format!("Neumann {n:.2e}, impedance {i:.2e} (≤ 1e-5)"))
}

fn suite_reciprocity(fault: Option<&str>) -> SuiteResult {
    let scene = mixed_scene();
    let obstacles = [
        Obstacle::new(scene.omega1.clone(), BoundaryCondition::Dirichlet),
        Obstacle::new(scene.omega2.clone(), BoundaryCondition::Neumann),
    ];
    let f = exterior_far_field_operator(&obstacles, 2.0, DirectionGrid::new(16).map_err(err)?, 32, "F").map_err(err)?;
    let n = f.n();
    let entries = if fault == Some("shift-incidence") {
        // pair each column with the neighbouring incident direction
        scatterfm::ComplexMatrix::from_fn(n, n, |i, j| f.entries[(i, (j + 1) % n)])
    } else {
        f.entries.clone()
    };
    let scale = entries.norm_max();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let d = entries[(i, j)] - entries[((j + n / 2) % n, (i + n / 2) % n)];
            worst = worst.max(d.norm() / scale);
        }
    }
    check(worst <= 1e-6, format!("max relative reciprocity defect {worst:.2e} (≤ 1e-6)"))
}

fn suite_translation(_: Option<&str>) -> SuiteResult {
    let (k, d) = (2.0, [0.8, -1.1]);
    let g = DirectionGrid::new(16).map_err(err)?;
    let at = |c: [f64; 2]| {
        exterior_far_field_operator(&[Obstacle::new(disc(c, 0.8), BoundaryCondition::Dirichlet)], k, g, 24, "F")
    };
    let (f0, fd) = (at([0.0, 0.0]).map_err(err)?, at(d).map_err(err)?);
    let dirs = g.directions();
    let mut worst = 0.0f64;
    for (i, x) in dirs.iter().enumerate() {
        for (j, t) in dirs.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, k * ((t[0] - x[0]) * d[0] + (t[1] - x[1]) * d[1]));
            worst = worst.max((fd.entries[(i, j)] - phase * f0.entries[(i, j)]).norm());
        }
    }
    check(worst <= 1e-8, format!("max translation-phase defect {worst:.2e} (≤ 1e-8)"))
}

fn suite_impedance_positivity(_: Option<&str>) -> SuiteResult {
    let scene = Scene {
        wavenumber: 3.0,
        ..mixed_scene()
    };
    let f = artificial_operator(ArtificialKind::ImpB3, &scene, DirectionGrid::new(16).map_err(err)?, 24).map_err(err)?;
    let e = hermitian_eig(&f.operator().skew_hermitian_part()).map_err(err)?;
    let min = *e.eigenvalues.last().unwrap_or(&f64::NAN);
    check(min > 0.0, format!("smallest eigenvalue of Im F_Imp(B3): {min:.3e} (must be > 0)"))
}

fn suite_medium_reduction(_: Option<&str>) -> SuiteResult {
    let k = 2.0;
    let spec = ContrastSpec::new(ContrastForm::Constant, Complex64::new(0.5, 0.0), disc([-3.0, 0.0], 1.0)).map_err(err)?;
    let zero = std::sync::Arc::new(VolumeGrid::new(&spec, 16).map_err(err)?.scaled(0.0));
    let obstacle = Obstacle::new(disc([3.0, 0.0], 1.0), BoundaryCondition::Dirichlet);
    let medium = MediumSolver::new(zero, Some(&obstacle), k, 24).map_err(err)?;
    let bie = ExteriorSolver::new(std::slice::from_ref(&obstacle), k, 24).map_err(err)?;
    let theta = [1.0, 0.0];
    let (a, b) = (medium.solve_plane_wave(theta).map_err(err)?, bie.solve_plane_wave(theta).map_err(err)?);
    let worst = unit_directions(16)
        .into_iter()
        .map(|x| (a.far_field(x) - b.far_field(x)).norm())
        .fold(0.0, f64::max);
    check(worst <= 1e-8, format!("q ≡ 0 medium vs boundary solve {worst:.2e} (≤ 1e-8)"))
}

fn suite_sharp(_: Option<&str>) -> SuiteResult {
    let scene = mixed_scene();
    let g = DirectionGrid::new(16).map_err(err)?;
    let obstacles = [
        Obstacle::new(scene.omega1.clone(), BoundaryCondition::Dirichlet),
        Obstacle::new(scene.omega2.clone(), BoundaryCondition::Neumann),
    ];
    let f = exterior_far_field_operator(&obstacles, scene.wavenumber, g, 24, "F").map_err(err)?;
    let sharp = build_sharp(&f, 0.0).map_err(err)?;
    let ratio = sharp.raw_min_eigenvalue / sharp.eigensystem.eigenvalues[0];
    let window = Window::new(-5.0, 5.0, -3.0, 3.0, 21).map_err(err)?;
    let m1 = threshold_and_score(&reconstruct(&sharp, window, Some(&scene.b2), DEFAULT_TRUNCATION), &scene.omega1);
    let doubled = build_sharp(&f.scaled(2.0), 0.0).map_err(err)?;
    let m2 = threshold_and_score(&reconstruct(&doubled, window, Some(&scene.b2), DEFAULT_TRUNCATION), &scene.omega1);
    let same = match (m1, m2) {
        (Ok(a), Ok(b)) => a.contrast == b.contrast && a.jaccard == b.jaccard,
        _ => false,
    };
    check(
        ratio >= -1e-10 && same,
        format!("F# λmin/λmax {ratio:.2e} (≥ −1e-10), metrics invariant under F → 2F: {same}"),
    )
}

fn suite_ffop(_: Option<&str>) -> SuiteResult {
    let oracle = DiscOracle::new([0.3, 0.0], 0.7, 1.5, DiscCondition::Transmission { q: 0.4 });
    let g = DirectionGrid::new(16).map_err(err)?;
    let entries = ComplexMatrix::from_row_major(16, 16, oracle.far_field_matrix(16).map_err(err)?).map_err(err)?;
    let f = scatterfm::farfield::FarFieldMatrix::new(g, 1.5, "oracle", entries);
    let noisy = add_noise(&f, 0.05, 7).map_err(err)?;
    let again = add_noise(&f, 0.05, 7).map_err(err)?;
    let mut buf = Vec::new();
    write_far_field(&noisy, &mut buf).map_err(err)?;
    let back = read_far_field(buf.as_slice()).map_err(err)?;
    check(
        back == noisy && again == noisy,
        format!("round trip exact {}, seeded noise reproducible {}", back == noisy, again == noisy),
    )
}

const SUITES: [Suite; 18] = [
    Suite { name: "bessel wronskian", run: suite_wronskian },
    Suite { name: "bessel tabulated values", run: suite_bessel_values },
    Suite { name: "hermitian eigensolver", run: suite_eigensolver },
    Suite { name: "lu solve", run: suite_lu },
    Suite { name: "curve geometry", run: suite_geometry },
    Suite { name: "scene validation", run: suite_validation },
    Suite { name: "phase selection", run: suite_phase },
    Suite { name: "single-layer coercivity (wavenumber i)", run: suite_single_layer_coercivity },
    Suite { name: "hypersingular coercivity (wavenumber i)", run: suite_hypersingular_coercivity },
    Suite { name: "single-layer sign (real wavenumber)", run: suite_single_layer_sign },
    Suite { name: "disc far field (dirichlet)", run: suite_disc_dirichlet },
    Suite { name: "disc far field (neumann, impedance)", run: suite_disc_neumann_impedance },
    Suite { name: "far-field reciprocity", run: suite_reciprocity },
    Suite { name: "translation phase", run: suite_translation },
    Suite { name: "impedance operator positivity", run: suite_impedance_positivity },
    Suite { name: "medium zero-contrast reduction", run: suite_medium_reduction },
    Suite { name: "F# positivity and scaling", run: suite_sharp },
    Suite { name: "FFOP round trip and noise determinism", run: suite_ffop },
];

pub fn run(fault: Option<&str>) -> Result<(), CliError> {
    if let Some(f) = fault {
        if !FAULTS.contains(&f) {
            return Err(CliError::Validation(format!("unknown fault {f:?} (known: {})", FAULTS.join(", "))));
        }
    }
    let mut failed = Vec::new();
    for suite in &SUITES {
        let outcome = std::panic::catch_unwind(|| (suite.run)(fault))
            .unwrap_or_else(|_| Err("suite panicked".to_string()));
        let (status, detail) = match outcome {
            Ok(d) => ("pass", d),
            Err(d) => {
                failed.push(suite.name);
                ("fail", d)
            }
        };
        println!("{}", serde_json::json!({ "suite": suite.name, "status": status, "detail": detail }));
    }
    println!("{}", serde_json::json!({ "suites": SUITES.len(), "failed": failed.len() }));
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::SelftestFailed(failed.join(", ")))
    }
}
