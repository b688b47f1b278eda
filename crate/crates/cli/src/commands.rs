use std::fs::File;
use std::io::Write;
use std::path::Path;

use scatterfm::factorization::{build_sharp, reconstruct as reconstruct_grid, threshold_and_score, Window};
use scatterfm::farfield::{
    add_noise, assemble_far_field_operator, load_far_field, modified_operator_for, write_far_field, DirectionGrid,
    FarFieldMatrix, SolverParams, NORMALIZATION,
};
use scatterfm::geometry::select_phase;
use scatterfm::oracle::{DiscCondition, DiscOracle};
use scatterfm::ComplexMatrix;

use crate::scene::{load_scene, parse_variant};
use crate::{CliError, ForwardArgs, OracleArgs, ReconstructArgs};

fn require_input(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Io(format!("{}: no such file", path.display())))
    }
}

/// Creates the file, refusing to replace an existing one unless `force`.
fn create_output(path: &Path, force: bool) -> Result<File, CliError> {
    if path.exists() && !force {
        return Err(CliError::Io(format!(
            "{} exists; pass --force to overwrite",
            path.display()
        )));
    }
    File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_bytes(path: &Path, force: bool, bytes: &[u8]) -> Result<(), CliError> {
    let mut file = create_output(path, force)?;
    file.write_all(bytes)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_ffop(path: &Path, force: bool, f: &FarFieldMatrix) -> Result<(), CliError> {
    let mut buf = Vec::new();
    write_far_field(f, &mut buf)?;
    write_bytes(path, force, &buf)
}

fn parse_list(text: &str, count: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let values = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Validation(format!("{what} {text:?}: {e}")))?;
    if values.len() != count {
        return Err(CliError::Validation(format!("{what} {text:?}: expected {count} comma-separated values")));
    }
    Ok(values)
}

pub fn parse_window(text: &str) -> Result<Window, CliError> {
    let v = parse_list(text, 5, "--grid")?;
    let res = v[4];
    if res.fract() != 0.0 || res < 2.0 {
        return Err(CliError::Validation(format!("--grid resolution {res} must be an integer ≥ 2")));
    }
    Ok(Window::new(v[0], v[1], v[2], v[3], res as usize)?)
}

pub fn forward(args: &ForwardArgs) -> Result<(), CliError> {
    require_input(&args.scene)?;
    let scene = load_scene(&args.scene, None, args.lambda0)?;
    let grid = DirectionGrid::new(args.ndirs)?;
    let params = SolverParams {
        boundary_nodes: args.nodes,
        volume_grid: args.volume_grid,
    };
    let clean = assemble_far_field_operator(&scene, grid, params)?;
    let data = add_noise(&clean, args.noise, args.seed)?;
    write_ffop(&args.output.out, args.output.force, &data)?;
    println!(
        "wrote {} (n = {}, k = {}, provenance {})",
        args.output.out.display(),
        data.n(),
        data.wavenumber,
        data.provenance.join(" + ")
    );
    Ok(())
}

pub fn reconstruct(args: &ReconstructArgs) -> Result<(), CliError> {
    require_input(&args.scene)?;
    require_input(&args.data)?;
    let variant = args.variant.as_deref().map(parse_variant).transpose()?;
    let scene = load_scene(&args.scene, variant, args.lambda0)?;
    let window = parse_window(&args.grid)?;
    let measured = load_far_field(&args.data)?;
    if measured.normalization != NORMALIZATION {
        return Err(CliError::Consistency(format!(
            "normalization tag {:?} in {} (expected {NORMALIZATION:?})",
            measured.normalization,
            args.data.display()
        )));
    }
    if measured.wavenumber != scene.wavenumber {
        return Err(CliError::Consistency(format!(
            "data wavenumber {} differs from scene wavenumber {}",
            measured.wavenumber, scene.wavenumber
        )));
    }
    let t = match (&scene.contrast, scene.variant.uses_phase()) {
        (Some(q), true) => select_phase(q).map_err(|e| CliError::Validation(e.to_string()))?.t,
        _ => 0.0,
    };
    let modified = modified_operator_for(scene.variant, &scene, &measured, args.nodes)?;
    let sharp = build_sharp(&modified, t)?;
    let grid = reconstruct_grid(&sharp, window, Some(&scene.b2), args.truncation);
    write_bytes(&args.output.out, args.output.force, grid.to_csv().as_bytes())?;
    if let Some(pgm) = &args.pgm {
        write_bytes(pgm, args.output.force, grid.to_pgm().as_bytes())?;
    }
    let summary = match threshold_and_score(&grid, &scene.omega1) {
        Ok(m) => serde_json::json!({
            "variant": scene.variant.name(),
            "phase": t,
            "provenance": modified.provenance,
            "retained": sharp.retained(args.truncation),
            "unmasked": grid.unmasked_count(),
            "contrast": m.contrast,
            "jaccard": m.jaccard,
            "best_threshold": m.best_threshold,
        }),
        Err(e) => serde_json::json!({
            "variant": scene.variant.name(),
            "phase": t,
            "provenance": modified.provenance,
            "retained": sharp.retained(args.truncation),
            "unmasked": grid.unmasked_count(),
            "metrics_unavailable": e.to_string(),
        }),
    };
    println!("{summary}");
    Ok(())
}

pub fn oracle(args: &OracleArgs) -> Result<(), CliError> {
    let condition = match args.condition.as_str() {
        "dirichlet" => DiscCondition::Dirichlet,
        "neumann" => DiscCondition::Neumann,
        "impedance" => DiscCondition::Impedance { lambda: args.lambda0 },
        "transmission" => DiscCondition::Transmission { q: args.q },
        other => {
            return Err(CliError::Validation(format!(
                "unknown condition {other:?} (dirichlet, neumann, impedance, transmission)"
            )))
        }
    };
    if !(args.radius > 0.0 && args.k > 0.0) {
        return Err(CliError::Validation("radius and k must be positive".into()));
    }
    let c = parse_list(&args.center, 2, "--center")?;
    let disc = DiscOracle::new([c[0], c[1]], args.radius, args.k, condition);
    let coeffs = disc
        .coefficients()
        .map_err(|e| CliError::Solver(e.to_string()))?;
    let mut table = String::from("m,re,im\n");
    for (m, c) in coeffs.iter().enumerate() {
        table.push_str(&format!("{m},{:.16e},{:.16e}\n", c.re, c.im));
    }
    print!("{table}");
    if let Some(out) = &args.out {
        let grid = DirectionGrid::new(args.ndirs)?;
        let entries = disc
            .far_field_matrix(args.ndirs)
            .map_err(|e| CliError::Solver(e.to_string()))?;
        let entries = ComplexMatrix::from_row_major(args.ndirs, args.ndirs, entries)
            .map_err(|e| CliError::Solver(e.to_string()))?;
        let provenance = format!("oracle({}, a={}, k={})", args.condition, args.radius, args.k);
        write_ffop(out, args.force, &FarFieldMatrix::new(grid, args.k, &provenance, entries))?;
    }
    Ok(())
}
