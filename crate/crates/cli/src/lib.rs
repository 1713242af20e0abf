//! Experiment runner behind the `curved-dirac` binary.
//!
//! A run is validated in full, computed in memory and only then written, so
//! a failing run leaves no files behind.

pub mod config;
pub mod table;

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use curved_dirac::analytic::{
    effective_potential_full, effective_potential_simple, flat_boundary_roots, normalize_density, spinor_profile,
};
use curved_dirac::postproc::{
    density_from_solutions, find_peaks_relative, fit_spectrum, Peak, SpectrumFit, DEFAULT_RELATIVE_PROMINENCE,
    MIN_FIT_POINTS,
};
use curved_dirac::solver::{convergence_study, EigenPath, SolveOptions, TRACKED_LEVELS};
use curved_dirac::{
    assemble, eigen_solve, solve_spinor_pair, Execution, QuantumNumbers, SurfaceKind, SurfaceSpec,
};
use serde::Serialize;

pub use config::{CommandName, PartialConfig, Plan, RunConfig};
use table::{float, Table};

/// Version of the summary JSON layout.
pub const SUMMARY_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// Why a run stopped. Each kind maps to its own exit status.
#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    Numerical(anyhow::Error),
    Io(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, err) = match self {
            Failure::Config(e) => ("config error", e),
            Failure::Numerical(e) => ("numerical failure", e),
            Failure::Io(e) => ("i/o error", e),
        };
        write!(f, "{kind}: {err:#}")
    }
}

impl std::error::Error for Failure {}

/// Validates `cfg` and computes every output file without touching disk.
pub fn execute(cfg: &RunConfig) -> Result<Vec<OutputFile>, Failure> {
    let plan = cfg.validate().map_err(Failure::Config)?;
    let result = match cfg.command {
        CommandName::Geometry => geometry(cfg, &plan),
        CommandName::Analytic => analytic(cfg, &plan),
        CommandName::Solve => solve(cfg, &plan),
        CommandName::Converge => converge(cfg, &plan),
        CommandName::Compare => compare(cfg, &plan),
    };
    result.map_err(Failure::Numerical)
}

pub fn write_outputs(dir: &Path, files: &[OutputFile]) -> Result<Vec<PathBuf>, Failure> {
    let io = |e: anyhow::Error| Failure::Io(e);
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create {}", dir.display()))
        .map_err(io)?;
    files
        .iter()
        .map(|file| {
            let path = dir.join(&file.name);
            std::fs::write(&path, &file.contents)
                .with_context(|| format!("cannot write {}", path.display()))
                .map_err(io)?;
            Ok(path)
        })
        .collect()
}

/// [`execute`] followed by [`write_outputs`] into `cfg.out`.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>, Failure> {
    let files = execute(cfg)?;
    write_outputs(&cfg.out, &files)
}

fn csv(name: String, table: &Table) -> OutputFile {
    OutputFile {
        name,
        contents: table.render(),
    }
}

/// Lower limit of the phase integral: the volcano integrand diverges at the
/// origin, so it starts at `r_min` there.
fn phase_origin(spec: &SurfaceSpec, r_min: f64) -> f64 {
    match spec.kind() {
        SurfaceKind::Volcano => r_min,
        _ => 0.0,
    }
}

fn geometry(cfg: &RunConfig, plan: &Plan) -> anyhow::Result<Vec<OutputFile>> {
    let spec = &plan.spec;
    let radii = plan.grid.nodes();
    let mu = spec.geometric_phase_profile(&radii, phase_origin(spec, plan.grid.r_min()))?;
    let mut table = Table::new(["r", "z", "f", "F", "A_theta", "R", "mu"]);
    for (&r, mu) in radii.iter().zip(mu) {
        let fields = spec.fields(r)?;
        table.push_floats(&[
            r,
            spec.profile_height(r),
            fields.f,
            fields.fermi_factor,
            fields.pseudo_gauge,
            fields.curvature,
            mu,
        ]);
    }
    Ok(vec![csv(format!("geometry_{}.csv", cfg.surface.name()), &table)])
}

fn analytic(cfg: &RunConfig, plan: &Plan) -> anyhow::Result<Vec<OutputFile>> {
    let (spec, grid) = (&plan.spec, &plan.grid);
    let a = QuantumNumbers::a(cfg.m);
    let b = QuantumNumbers::b(cfg.m);
    let exec = Execution::default();
    let psi_a = spinor_profile(spec, a, cfg.kappa, grid, exec)?;
    let psi_b = spinor_profile(spec, b, cfg.kappa, grid, exec)?;
    let (scale, _) = normalize_density(&psi_a, &psi_b)?;
    let factor = scale * scale;
    let mut table = Table::new(["r", "U2_simple_A", "U2_simple_B", "U2_full_A", "U2_full_B", "psiA2", "psiB2"]);
    for (i, r) in grid.nodes().into_iter().enumerate() {
        table.push_floats(&[
            r,
            effective_potential_simple(spec, a, r)?,
            effective_potential_simple(spec, b, r)?,
            effective_potential_full(spec, a, r)?,
            effective_potential_full(spec, b, r)?,
            psi_a.values()[i].powi(2) * factor,
            psi_b.values()[i].powi(2) * factor,
        ]);
    }
    Ok(vec![csv(format!("analytic_{}.csv", cfg.tag()), &table)])
}

#[derive(Serialize)]
struct ModeSummary {
    index: usize,
    #[serde(rename = "kappa_A")]
    kappa_a: f64,
    #[serde(rename = "kappa_B")]
    kappa_b: f64,
    total_probability: f64,
    #[serde(rename = "peaks_A")]
    peaks_a: Vec<Peak>,
    #[serde(rename = "peaks_B")]
    peaks_b: Vec<Peak>,
    peaks_rho: Vec<Peak>,
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    schema: u32,
    config: &'a RunConfig,
    #[serde(rename = "kappa_A")]
    kappa_a: &'a [f64],
    #[serde(rename = "kappa_B")]
    kappa_b: &'a [f64],
    #[serde(rename = "path_A")]
    path_a: EigenPath,
    #[serde(rename = "path_B")]
    path_b: EigenPath,
    #[serde(rename = "fit_A")]
    fit_a: Option<SpectrumFit>,
    #[serde(rename = "fit_B")]
    fit_b: Option<SpectrumFit>,
    peak_relative_prominence: f64,
    modes: Vec<ModeSummary>,
    wall_clock_seconds: f64,
}

fn fit_if_possible(kappas: &[f64]) -> anyhow::Result<Option<SpectrumFit>> {
    if kappas.len() < MIN_FIT_POINTS {
        return Ok(None);
    }
    Ok(Some(fit_spectrum(kappas)?))
}

fn solve(cfg: &RunConfig, plan: &Plan) -> anyhow::Result<Vec<OutputFile>> {
    let started = Instant::now();
    let tag = cfg.tag();
    let (a, b) = solve_spinor_pair(&plan.spec, cfg.m, &plan.grid, cfg.eigencount)?;

    let mut files = Vec::new();
    let mut spectrum = Table::new(["n", "kappa_A", "kappa_B"]);
    for (n, (ka, kb)) in a.kappas.iter().zip(&b.kappas).enumerate() {
        spectrum.push(vec![(n + 1).to_string(), float(*ka), float(*kb)]);
    }
    files.push(csv(format!("spectrum_{tag}.csv"), &spectrum));

    let mut modes = Vec::new();
    for &index in &cfg.modes {
        let density = density_from_solutions(&a, &b, index)?;
        let (psi_a, psi_b) = (a.modes[index - 1].values(), b.modes[index - 1].values());
        let mut table = Table::new(["r", "psiA", "psiB", "densityA", "densityB", "rho"]);
        for (i, r) in plan.grid.nodes().into_iter().enumerate() {
            table.push_floats(&[
                r,
                psi_a[i],
                psi_b[i],
                density.density_a.values()[i],
                density.density_b.values()[i],
                density.rho.values()[i],
            ]);
        }
        files.push(csv(format!("mode_{tag}_n{index}.csv"), &table));
        modes.push(ModeSummary {
            index,
            kappa_a: density.kappa_a,
            kappa_b: density.kappa_b,
            total_probability: density.total_probability(),
            peaks_a: find_peaks_relative(&density.density_a, DEFAULT_RELATIVE_PROMINENCE),
            peaks_b: find_peaks_relative(&density.density_b, DEFAULT_RELATIVE_PROMINENCE),
            peaks_rho: find_peaks_relative(&density.rho, DEFAULT_RELATIVE_PROMINENCE),
        });
    }

    let summary = SolveSummary {
        schema: SUMMARY_SCHEMA,
        config: cfg,
        kappa_a: &a.kappas,
        kappa_b: &b.kappas,
        path_a: a.path,
        path_b: b.path,
        fit_a: fit_if_possible(&a.kappas)?,
        fit_b: fit_if_possible(&b.kappas)?,
        peak_relative_prominence: DEFAULT_RELATIVE_PROMINENCE,
        modes,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    files.push(OutputFile {
        name: format!("summary_{tag}.json"),
        contents: json,
    });
    Ok(files)
}

fn converge(cfg: &RunConfig, plan: &Plan) -> anyhow::Result<Vec<OutputFile>> {
    let tag = cfg.tag();
    let study = convergence_study(&plan.spec, plan.qn, &plan.grid, cfg.levels, SolveOptions::default())?;
    let kappa_cols = (1..=TRACKED_LEVELS).map(|n| format!("kappa_{n}"));
    let mut levels = Table::new(["level".to_string(), "intervals".into(), "h".into()].into_iter().chain(kappa_cols));
    for (j, level) in study.levels.iter().enumerate() {
        let mut row = vec![j.to_string(), level.intervals.to_string(), float(level.h)];
        row.extend(level.kappas.iter().map(|&k| float(k)));
        levels.push(row);
    }
    let order_cols = (1..=TRACKED_LEVELS).map(|n| format!("order_{n}"));
    let mut orders = Table::new(["first_level".to_string()].into_iter().chain(order_cols));
    for (j, p) in study.orders.iter().enumerate() {
        let mut row = vec![j.to_string()];
        row.extend(p.iter().map(|&v| float(v)));
        orders.push(row);
    }
    Ok(vec![
        csv(format!("converge_{tag}.csv"), &levels),
        csv(format!("converge_orders_{tag}.csv"), &orders),
    ])
}

/// Flat-surface spectra of both sublattices against the regular Bessel
/// roots, whatever surface the config names.
fn compare(cfg: &RunConfig, plan: &Plan) -> anyhow::Result<Vec<OutputFile>> {
    let flat = SurfaceSpec::flat();
    let count = cfg.eigencount;
    let mut columns = Vec::new();
    for qn in [QuantumNumbers::a(cfg.m), QuantumNumbers::b(cfg.m)] {
        let numeric = eigen_solve(&assemble(&flat, qn, &plan.grid)?, count)?.kappas;
        let exact = flat_boundary_roots(qn, plan.grid.r_max(), count)?;
        columns.push((numeric, exact));
    }
    let mut table = Table::new([
        "n",
        "kappa_num_A",
        "kappa_exact_A",
        "abs_error_A",
        "kappa_num_B",
        "kappa_exact_B",
        "abs_error_B",
    ]);
    for n in 0..count {
        let mut row = vec![(n + 1).to_string()];
        for (numeric, exact) in &columns {
            row.extend([float(numeric[n]), float(exact[n]), float((numeric[n] - exact[n]).abs())]);
        }
        table.push(row);
    }
    Ok(vec![csv(format!("compare_flat_m{}_2.csv", cfg.m.twice()), &table)])
}
