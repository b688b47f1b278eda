//! Acceptance criteria A1–A9, one pass/fail line each.
//!
//! Runs as a plain binary (no libtest harness) so the report is always printed.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scatterfm::bie::{assemble_boundary_operator, ExteriorSolver, Obstacle, OperatorKind};
use scatterfm::factorization::{build_sharp, reconstruct, threshold_and_score, Metrics, SharpOperator, Window, DEFAULT_TRUNCATION};
use scatterfm::farfield::{
    add_noise, artificial_operator, assemble_far_field_operator, modified_operator_for, ArtificialKind, DirectionGrid,
    FarFieldMatrix, SolverParams,
};
use scatterfm::geometry::{select_phase, ContrastForm, ContrastSpec, Curve, Point, Scene, SceneCase, Variant};
use scatterfm::kernel::Wavenumber;
use scatterfm::linalg::hermitian_eig;
use scatterfm::medium::{MediumSolver, VolumeGrid};
use scatterfm::oracle::{unit_directions, DiscCondition, DiscOracle};
use scatterfm::specfun::{bessel_j, bessel_y, hankel1, J0_FIRST_ZERO};
use scatterfm::{BoundaryCondition, Complex64};

const DIRECTIONS: usize = 64;
const RECON_NODES: usize = 64;
const DATA_PARAMS: SolverParams = SolverParams {
    boundary_nodes: 96,
    volume_grid: 48,
};
const NOISE: f64 = 0.01;
const SEED: u64 = 20240601;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, pass: bool, secs: f64, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("{id} {} ({secs:.1}s) {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

// ---------------------------------------------------------------- A1 oracle

/// Double-double number `hi + lo`, enough for the cancelling power series at x ≤ 20.
#[derive(Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn from(x: f64) -> Self {
        Dd(x, 0.0)
    }
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }
    fn add(self, o: Dd) -> Dd {
        let (s, e) = Self::two_sum(self.0, o.0);
        let e = e + self.1 + o.1;
        let (h, l) = Self::two_sum(s, e);
        Dd(h, l)
    }
    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        let e = e + self.0 * o.1 + self.1 * o.0;
        let (h, l) = Self::two_sum(p, e);
        Dd(h, l)
    }
    fn div_f(self, d: f64) -> Dd {
        let q = self.0 / d;
        let r = self.add(Dd::from(q).mul(Dd::from(-d)));
        let (h, l) = Self::two_sum(q, r.0 / d);
        Dd(h, l)
    }
    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }
    fn val(self) -> f64 {
        self.0 + self.1
    }
}

fn dd_pow(x: Dd, n: usize) -> Dd {
    (0..n).fold(Dd::from(1.0), |acc, _| acc.mul(x))
}

/// `J_n(x)` from its power series in double-double arithmetic.
fn series_j(n: usize, x: f64) -> Dd {
    let half = Dd::from(x).div_f(2.0);
    let q = half.mul(half).neg();
    let mut term = (1..=n).fold(dd_pow(half, n), |t, j| t.div_f(j as f64));
    let mut sum = term;
    for k in 1..200 {
        term = term.mul(q).div_f((k * (k + n)) as f64);
        sum = sum.add(term);
        if term.0.abs() < 1e-34 * sum.0.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// `Y_n(x)` from the Neumann-type power series; the `2γ J_n/π` piece is kept separate.
fn series_y(n: usize, x: f64) -> f64 {
    const GAMMA: f64 = 0.577_215_664_901_532_9;
    let half = Dd::from(x).div_f(2.0);
    let j = series_j(n, x);
    // finite sum −(1/π) Σ_{k<n} (n−k−1)!/k! (x/2)^{2k−n}
    let mut finite = Dd::from(0.0);
    for k in 0..n {
        let mut c = Dd::from(1.0);
        for f in 1..=(n - k - 1) {
            c = c.mul(Dd::from(f as f64));
        }
        for f in 1..=k {
            c = c.div_f(f as f64);
        }
        let p = 2 * k as i64 - n as i64;
        let pow = if p >= 0 {
            dd_pow(half, p as usize)
        } else {
            (0..(-p)).fold(Dd::from(1.0), |acc, _| acc.div_f(half.0))
        };
        finite = finite.add(c.mul(pow));
    }
    // −(1/π) Σ_k (H_k + H_{n+k}) (−x²/4)^k (x/2)^n / (k!(n+k)!)
    let q = half.mul(half).neg();
    let mut term = (1..=n).fold(dd_pow(half, n), |t, j| t.div_f(j as f64));
    let harmonic = |m: usize| (1..=m).fold(Dd::from(0.0), |h, i| h.add(Dd::from(1.0).div_f(i as f64)));
    let mut series = term.mul(harmonic(n));
    for k in 1..200 {
        term = term.mul(q).div_f((k * (k + n)) as f64);
        let contrib = term.mul(harmonic(k).add(harmonic(n + k)));
        series = series.add(contrib);
        if contrib.0.abs() < 1e-34 * series.0.abs().max(1e-300) && term.0.abs() < 1e-34 {
            break;
        }
    }
    let log_part = 2.0 / PI * ((0.5 * x).ln() + GAMMA) * j.val();
    log_part - (finite.val() + series.val()) / PI
}

fn a1(report: &mut Report) {
    let start = Instant::now();
    let mut xs = vec![0.05, 0.1, 0.5, 1.0, 2.0, 2.5, 5.0, 7.3, 10.0, 12.5, 15.0, 17.7, 20.0];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    xs.extend((0..12).map(|_| rng.random_range(0.05..20.0)));
    let (mut worst, mut worst_w) = (0.0f64, 0.0f64);
    for n in 0..=20 {
        for &x in &xs {
            let jo = series_j(n, x).val();
            let yo = series_y(n, x);
            let j = bessel_j(n, x).unwrap();
            let y = bessel_y(n, x).unwrap();
            let h = hankel1(n, x).unwrap();
            let scale_j = jo.abs().max(1.0);
            let scale_y = yo.abs().max(1.0);
            worst = worst
                .max((j - jo).abs() / scale_j)
                .max((y - yo).abs() / scale_y)
                .max((h - Complex64::new(jo, yo)).norm() / scale_y);
            if n < 20 {
                let w = bessel_j(n + 1, x).unwrap() * y - j * bessel_y(n + 1, x).unwrap();
                worst_w = worst_w.max((w - 2.0 / (PI * x)).abs() * PI * x / 2.0);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report.line(
        "A1",
        worst <= 1e-12 && worst_w <= 1e-10 && secs < 1.0,
        secs,
        format!("special functions: max series deviation {worst:.2e} (≤1e-12), Wronskian {worst_w:.2e} (≤1e-10)"),
    );
}

// ---------------------------------------------------------------- A2

fn disc_far_field_error(cond: BoundaryCondition, n: usize) -> f64 {
    let oracle_cond = match cond {
        BoundaryCondition::Dirichlet => DiscCondition::Dirichlet,
        BoundaryCondition::Neumann => DiscCondition::Neumann,
        BoundaryCondition::Impedance(lambda) => DiscCondition::Impedance { lambda },
    };
    let oracle = DiscOracle::new([0.0, 0.0], 1.0, 2.0, oracle_cond);
    let solver = ExteriorSolver::new(&[Obstacle::new(Curve::circle([0.0, 0.0], 1.0).unwrap(), cond)], 2.0, n).unwrap();
    let (mut num, mut den) = (0.0, 0.0);
    for theta in unit_directions(8) {
        let sol = solver.solve_plane_wave(theta).unwrap();
        for x in unit_directions(128) {
            let exact = oracle.far_field(x, theta).unwrap();
            num += (sol.far_field(x) - exact).norm_sqr();
            den += exact.norm_sqr();
        }
    }
    (num / den).sqrt()
}

fn a2(report: &mut Report) {
    let start = Instant::now();
    let d = disc_far_field_error(BoundaryCondition::Dirichlet, 32);
    let nn = disc_far_field_error(BoundaryCondition::Neumann, 32);
    let imp = disc_far_field_error(BoundaryCondition::Impedance(1.0), 32);
    let secs = start.elapsed().as_secs_f64();
    report.line(
        "A2",
        d <= 1e-6 && nn <= 1e-5 && imp <= 1e-5 && secs < 5.0,
        secs,
        format!("BIE vs disc series (64 nodes): Dirichlet {d:.2e} (≤1e-6), Neumann {nn:.2e} (≤1e-5), impedance {imp:.2e} (≤1e-5)"),
    );
}

// ---------------------------------------------------------------- A3

fn a3(report: &mut Report) {
    let start = Instant::now();
    let k = 1.0;
    let spec = ContrastSpec::new(ContrastForm::Constant, Complex64::new(0.5, 0.0), Curve::circle([0.0, 0.0], 1.0).unwrap()).unwrap();
    let grid = Arc::new(VolumeGrid::new(&spec, 64).unwrap());
    let solver = MediumSolver::new(grid, None, k, 16).unwrap();
    let oracle = DiscOracle::new([0.0, 0.0], 1.0, k, DiscCondition::Transmission { q: 0.5 });
    let thetas = unit_directions(4);
    let sols = solver.solve_plane_waves(&thetas).unwrap();
    let (mut num, mut den) = (0.0, 0.0);
    for (sol, &theta) in sols.iter().zip(&thetas) {
        for x in unit_directions(64) {
            let exact = oracle.far_field(x, theta).unwrap();
            num += (sol.far_field(x) - exact).norm_sqr();
            den += exact.norm_sqr();
        }
    }
    let err = (num / den).sqrt();

    // q ≡ 0 with a sound-soft obstacle reduces to the boundary solve
    let k = 2.0;
    let spec = ContrastSpec::new(ContrastForm::Constant, Complex64::new(0.5, 0.0), Curve::circle([-3.0, 0.0], 1.0).unwrap()).unwrap();
    let zero = Arc::new(VolumeGrid::new(&spec, 32).unwrap().scaled(0.0));
    let obstacle = Obstacle::new(Curve::circle([3.0, 0.0], 1.0).unwrap(), BoundaryCondition::Dirichlet);
    let medium = MediumSolver::new(zero, Some(&obstacle), k, 48).unwrap();
    let bie = ExteriorSolver::new(std::slice::from_ref(&obstacle), k, 48).unwrap();
    let mut reduction = 0.0f64;
    for theta in unit_directions(4) {
        let (a, b) = (medium.solve_plane_wave(theta).unwrap(), bie.solve_plane_wave(theta).unwrap());
        for x in unit_directions(32) {
            reduction = reduction.max((a.far_field(x) - b.far_field(x)).norm() / b.far_field(x).norm().max(1.0));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report.line(
        "A3",
        err <= 1e-3 && reduction <= 1e-8 && secs < 60.0,
        secs,
        format!("medium vs transmission series (m=64): {err:.2e} (≤1e-3); q≡0 reduction {reduction:.2e} (≤1e-8)"),
    );
}

// ---------------------------------------------------------------- scenes

fn disc(c: Point, r: f64) -> Curve {
    Curve::circle(c, r).unwrap()
}

fn kite_scene() -> Scene {
    Scene {
        case: SceneCase::Mixed,
        omega1: Curve::kite([-3.0, 0.0], 1.0, 0.0).unwrap(),
        contrast: None,
        omega2: disc([3.0, 0.0], 1.0),
        b1: Some(disc([-3.0, 0.0], 0.3)),
        b2: disc([3.0, 0.0], 1.5),
        b3: Some(disc([3.4, 0.4], 0.4)),
        wavenumber: 3.0,
        lambda0: 1.0,
        variant: Variant::T12,
    }
}

fn eigenvalue_scene() -> Scene {
    Scene {
        omega1: disc([-3.0, 0.0], 1.0),
        wavenumber: J0_FIRST_ZERO,
        ..kite_scene()
    }
}

fn medium_scene(q0: f64) -> (Scene, f64) {
    let contrast = ContrastSpec::new(ContrastForm::Constant, Complex64::new(q0, 0.0), disc([-3.0, 0.0], 2.0)).unwrap();
    let phase = select_phase(&contrast).unwrap();
    let scene = Scene {
        case: SceneCase::Medium,
        omega1: disc([-3.0, 0.0], 2.0),
        contrast: Some(contrast),
        omega2: disc([3.0, 0.0], 1.0),
        b1: None,
        b2: disc([3.0, 0.0], 1.5),
        b3: Some(disc([3.4, 0.4], 0.4)),
        wavenumber: 2.0,
        lambda0: 1.0,
        variant: phase.variant,
    };
    (scene, phase.t)
}

fn window() -> Window {
    Window::new(-6.0, 6.0, -6.0, 6.0, 80).unwrap()
}

/// Everything A8 needs from one end-to-end run.
struct Run {
    name: String,
    scene: Scene,
    sharp: SharpOperator,
    modified: FarFieldMatrix,
    phase: f64,
    metrics: Metrics,
}

fn measured(scene: &Scene) -> FarFieldMatrix {
    let grid = DirectionGrid::new(DIRECTIONS).unwrap();
    let clean = assemble_far_field_operator(scene, grid, DATA_PARAMS).unwrap();
    add_noise(&clean, NOISE, SEED).unwrap()
}

fn run_variant(name: &str, scene: &Scene, data: &FarFieldMatrix, variant: Variant, phase: f64) -> Run {
    let modified = modified_operator_for(variant, scene, data, RECON_NODES).unwrap();
    let t = if variant.uses_phase() { phase } else { 0.0 };
    let sharp = build_sharp(&modified, t).unwrap();
    let grid = reconstruct(&sharp, window(), Some(&scene.b2), DEFAULT_TRUNCATION);
    let metrics = threshold_and_score(&grid, &scene.omega1).unwrap();
    Run {
        name: format!("{name}/{variant}"),
        scene: scene.clone(),
        sharp,
        modified,
        phase: t,
        metrics,
    }
}

fn a5(report: &mut Report, runs: &mut Vec<Run>) {
    let start = Instant::now();
    let scene = kite_scene();
    let data = measured(&scene);
    let run = run_variant("kite", &scene, &data, Variant::T12, 0.0);
    let m = run.metrics;
    runs.push(run);
    let secs = start.elapsed().as_secs_f64();
    report.line(
        "A5",
        m.contrast >= 10.0 && m.jaccard >= 0.5 && secs < 300.0,
        secs,
        format!("kite + disc, T1.2, 1% noise: contrast {:.1} (≥10), Jaccard {:.3} (≥0.5)", m.contrast, m.jaccard),
    );
}

fn a6(report: &mut Report, runs: &mut Vec<Run>) {
    let start = Instant::now();
    let scene = eigenvalue_scene();
    let data = measured(&scene);
    let modified = run_variant("eigenvalue", &scene, &data, Variant::T12, 0.0);
    let baseline = run_variant("eigenvalue", &scene, &data, Variant::BaselineLiu, 0.0);
    let (m, b) = (modified.metrics, baseline.metrics);
    runs.push(modified);
    runs.push(baseline);
    let secs = start.elapsed().as_secs_f64();
    report.line(
        "A6",
        m.contrast >= 5.0 && m.jaccard >= 0.5,
        secs,
        format!(
            "k = j01: T1.2 contrast {:.1} (≥5), Jaccard {:.3} (≥0.5); baseline-liu contrast {:.1}, Jaccard {:.3} (reported)",
            m.contrast, m.jaccard, b.contrast, b.jaccard
        ),
    );
}

fn a7(report: &mut Report, runs: &mut Vec<Run>) -> FarFieldMatrix {
    let start = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    let mut last_data = None;
    for q0 in [-0.5, 0.5] {
        let (scene, t) = medium_scene(q0);
        let expected = if q0 < 0.0 { (PI, Variant::T14) } else { (0.0, Variant::T46) };
        let phase_ok = (t - expected.0).abs() < 1e-9 && scene.variant == expected.1;
        let data = measured(&scene);
        let run = run_variant("medium", &scene, &data, scene.variant, t);
        let m = run.metrics;
        pass &= phase_ok && m.contrast >= 5.0 && m.jaccard >= 0.5;
        details.push(format!(
            "q0={q0}: t={t:.4} {} contrast {:.1} (≥5), Jaccard {:.3} (≥0.5)",
            scene.variant, m.contrast, m.jaccard
        ));
        runs.push(run);
        last_data = Some(data);
    }
    let secs = start.elapsed().as_secs_f64();
    report.line("A7", pass && secs < 600.0, secs, details.join("; "));
    last_data.unwrap()
}

fn a8(report: &mut Report, runs: &[Run]) {
    let start = Instant::now();
    let mut pass = true;
    let mut worst_ratio = f64::INFINITY;
    let mut scaling_exact = true;
    for run in runs {
        let lmax = run.sharp.eigensystem.eigenvalues[0];
        let ratio = run.sharp.raw_min_eigenvalue / lmax;
        worst_ratio = worst_ratio.min(ratio);
        pass &= run.sharp.raw_min_eigenvalue >= -1e-10 * lmax;

        let doubled = build_sharp(&run.modified.scaled(2.0), run.phase).unwrap();
        let grid = reconstruct(&doubled, window(), Some(&run.scene.b2), DEFAULT_TRUNCATION);
        let m2 = threshold_and_score(&grid, &run.scene.omega1).unwrap();
        let same = m2.contrast == run.metrics.contrast && m2.jaccard == run.metrics.jaccard;
        if !same {
            println!(
                "   scaling mismatch in {}: contrast {} vs {}, Jaccard {} vs {}",
                run.name, run.metrics.contrast, m2.contrast, run.metrics.jaccard, m2.jaccard
            );
        }
        scaling_exact &= same;
    }
    // truncation stability on the kite scene
    let kite = &runs[0];
    let contrasts: Vec<f64> = [1e-6, 1e-8, 1e-10]
        .iter()
        .map(|&eps| {
            let grid = reconstruct(&kite.sharp, window(), Some(&kite.scene.b2), eps);
            threshold_and_score(&grid, &kite.scene.omega1).unwrap().contrast
        })
        .collect();
    let lo = contrasts.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = contrasts.iter().copied().fold(0.0, f64::max);
    let drift = (hi - lo) / lo;
    pass &= scaling_exact && drift < 0.2;
    let secs = start.elapsed().as_secs_f64();
    report.line(
        "A8",
        pass,
        secs,
        format!(
            "min over runs of F# λmin/λmax {worst_ratio:.2e} over {} runs (≥−1e-10); scaling F→2F exact: {scaling_exact}; truncation drift {:.1}% (<20%)",
            runs.len(),
            100.0 * drift
        ),
    );
}

// ---------------------------------------------------------------- A4

fn a4(report: &mut Report) {
    let start = Instant::now();
    let scene = kite_scene();
    let mut pass = true;
    let mut notes = Vec::new();

    let curves = [scene.b2.clone(), scene.omega1.clone()];
    let (mut s_min, mut n_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for curve in &curves {
        let s = assemble_boundary_operator(OperatorKind::S, std::slice::from_ref(curve), Wavenumber::Imaginary, 32).unwrap();
        let n = assemble_boundary_operator(OperatorKind::N, std::slice::from_ref(curve), Wavenumber::Imaginary, 32).unwrap();
        let es = hermitian_eig(&s.weight_normalized().hermitian_part()).unwrap();
        let en = hermitian_eig(&n.weight_normalized().hermitian_part()).unwrap();
        s_min = s_min.min(*es.eigenvalues.last().unwrap());
        n_max = n_max.max(en.eigenvalues[0]);
    }
    pass &= s_min > 0.0 && n_max < 0.0;
    notes.push(format!("S_i min eig {s_min:.2e} (>0), N_i max eig {n_max:.2e} (<0)"));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = assemble_boundary_operator(OperatorKind::S, std::slice::from_ref(&scene.omega1), Wavenumber::Real(3.0), 32).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let phi: Vec<Complex64> = (0..64)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let sphi = s.matrix.matvec(&phi).unwrap();
        worst = worst.max(s.inner(&phi, &sphi).im / s.inner(&phi, &phi).re);
    }
    pass &= worst <= 1e-10;
    notes.push(format!("max Im⟨φ,Sφ⟩/‖φ‖² {worst:.2e} (≤1e-10)"));

    // Im F_Imp is positive definite, but its eigenvalues decay factorially with the
    // Fourier mode; on 64 directions the top modes of the small B3 sit at roundoff.
    // 16 directions keep every discrete mode above double precision.
    let imp_min = |n: usize| {
        let imp = artificial_operator(ArtificialKind::ImpB3, &scene, DirectionGrid::new(n).unwrap(), 32).unwrap();
        let e = hermitian_eig(&imp.operator().skew_hermitian_part()).unwrap();
        (*e.eigenvalues.last().unwrap(), e.eigenvalues[0])
    };
    let (lo16, hi16) = imp_min(16);
    let (lo64, hi64) = imp_min(DIRECTIONS);
    pass &= lo16 > 0.0 && lo64 >= -1e-12 * hi64;
    notes.push(format!(
        "Im F_Imp(B3) min eig {lo16:.2e} on 16 directions (>0; λmax {hi16:.2e}), {lo64:.2e} on 64 (roundoff, ≥−1e-12·λmax)"
    ));

    let (mut absorbing, _) = medium_scene(0.5);
    let contrast = ContrastSpec::new(ContrastForm::Constant, Complex64::new(0.5, 0.2), absorbing.omega1.clone()).unwrap();
    absorbing.contrast = Some(contrast);
    let f = assemble_far_field_operator(&absorbing, DirectionGrid::new(32).unwrap(), SolverParams { boundary_nodes: 32, volume_grid: 32 }).unwrap();
    let e = hermitian_eig(&f.operator().skew_hermitian_part()).unwrap();
    let (lo, hi) = (*e.eigenvalues.last().unwrap(), e.eigenvalues[0]);
    pass &= lo >= -1e-8 * hi.abs().max(1.0);
    notes.push(format!("Im F (Im q>0) min eig {lo:.2e} (≥−1e-8)"));

    let secs = start.elapsed().as_secs_f64();
    report.line("A4", pass && secs < 10.0, secs, notes.join("; "));
}

// ---------------------------------------------------------------- A9

fn reciprocity_defect(f: &FarFieldMatrix) -> f64 {
    let n = f.n();
    let scale = f.entries.norm_max().max(1.0);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            // u∞(x̂_i, θ_j) vs u∞(−θ_j, −x̂_i)
            let a = f.entries[(i, j)];
            let b = f.entries[((j + n / 2) % n, (i + n / 2) % n)];
            worst = worst.max((a - b).norm() / scale);
        }
    }
    worst
}

fn a9(report: &mut Report, medium_data: &FarFieldMatrix) {
    let start = Instant::now();
    let grid = DirectionGrid::new(DIRECTIONS).unwrap();
    let clean = assemble_far_field_operator(&kite_scene(), grid, SolverParams { boundary_nodes: 64, volume_grid: 0 }).unwrap();
    let bie = reciprocity_defect(&clean);

    // the medium data carries noise, so reciprocity is checked on a clean solve
    let (scene, _) = medium_scene(-0.5);
    let clean_medium = assemble_far_field_operator(&scene, DirectionGrid::new(32).unwrap(), DATA_PARAMS).unwrap();
    let medium = reciprocity_defect(&clean_medium);
    assert_eq!(medium_data.n(), DIRECTIONS);

    let k = 2.0;
    let d = [1.3, -0.6];
    let obstacle = |c: Point| [Obstacle::new(disc(c, 1.0), BoundaryCondition::Dirichlet)];
    let g16 = DirectionGrid::new(16).unwrap();
    let f0 = scatterfm::farfield::exterior_far_field_operator(&obstacle([0.0, 0.0]), k, g16, 32, "F0").unwrap();
    let fd = scatterfm::farfield::exterior_far_field_operator(&obstacle(d), k, g16, 32, "Fd").unwrap();
    let dirs = g16.directions();
    let mut translation = 0.0f64;
    for i in 0..16 {
        for j in 0..16 {
            let (x, t) = (dirs[i], dirs[j]);
            let phase = Complex64::from_polar(1.0, k * ((t[0] - x[0]) * d[0] + (t[1] - x[1]) * d[1]));
            translation = translation.max((fd.entries[(i, j)] - phase * f0.entries[(i, j)]).norm());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report.line(
        "A9",
        bie <= 1e-6 && medium <= 1e-4 && translation <= 1e-8,
        secs,
        format!("reciprocity BIE {bie:.2e} (≤1e-6), medium {medium:.2e} (≤1e-4); translation {translation:.2e} (≤1e-8)"),
    );
}

fn main() {
    let mut report = Report { failures: 0 };
    let mut runs = Vec::new();
    a1(&mut report);
    a2(&mut report);
    a3(&mut report);
    a4(&mut report);
    a5(&mut report, &mut runs);
    a6(&mut report, &mut runs);
    let medium_data = a7(&mut report, &mut runs);
    a8(&mut report, &runs);
    a9(&mut report, &medium_data);
    if report.failures > 0 {
        println!("acceptance: {} criteria failed", report.failures);
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
