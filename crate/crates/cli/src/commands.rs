use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use floquet_core::analytic::{
    drive_offset, geometric_phase, quasienergy, static_energy, FloquetMode, ModeIndex,
};
use floquet_core::model::{ModelSpec, ResonanceCheck};
use floquet_core::numerics::{Grid1D, Grid2D, KineticOrder};
use floquet_core::verify::{
    berry_phase_numeric, default_grid, floquet_residual, floquet_residual_2d, limit_suite,
    momentum_shift_crosscheck, monodromy_check, period_fidelity, period_fidelity_2d,
    VerificationReport,
};

use crate::config::{LoadedConfig, RunConfig, SweepConfig};
use crate::output::{fmt_num, svg_heatmap, svg_line_plot, CsvWriter, VERSION};

/// Process exit codes, per the tool contract.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_BAD_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub struct CommandError {
    pub code: i32,
    pub message: String,
}

impl CommandError {
    fn config(msg: impl Into<String>) -> Self {
        CommandError { code: EXIT_BAD_CONFIG, message: msg.into() }
    }

    fn numerical(msg: impl Into<String>) -> Self {
        CommandError { code: EXIT_NUMERICAL, message: msg.into() }
    }
}

fn core_err(e: floquet_core::Error) -> CommandError {
    use floquet_core::Error as E;
    match e {
        E::InvalidParameter(_)
        | E::Resonance(_)
        | E::Incommensurate { .. }
        | E::IndexRange { .. }
        | E::UnsupportedVariant(_)
        | E::InvalidGrid(_)
        | E::UnstableSpectrum { .. } => CommandError::config(e.to_string()),
        E::Quadrature { .. } | E::Numerical(_) | E::DimensionMismatch { .. } => {
            CommandError::numerical(e.to_string())
        }
    }
}

pub fn first_index(spec: &ModelSpec) -> u32 {
    match spec {
        ModelSpec::LinearSingleDrive { .. } | ModelSpec::LinearDualDrive { .. } => 1,
        _ => 0,
    }
}

fn grid_from_config(cfg: &RunConfig) -> Result<Grid1D, CommandError> {
    match &cfg.grid {
        Some(g) => Grid1D::new(g.min, g.max, g.points).map_err(core_err),
        None => default_grid(&cfg.model).map_err(core_err),
    }
}

fn grid2_from_config(cfg: &RunConfig) -> Result<Grid2D, CommandError> {
    let g1 = match &cfg.grid {
        Some(g) => Grid1D::new(g.min, g.max, g.points).map_err(core_err)?,
        None => Grid1D::new(-7.0, 7.0, 128).map_err(core_err)?,
    };
    Ok(Grid2D { g1, g2: g1 })
}

fn kinetic_order(cfg: &RunConfig) -> Result<KineticOrder, CommandError> {
    let name = cfg.propagation.as_ref().map(|p| p.order.as_str()).unwrap_or("fourth");
    match name {
        "second" => Ok(KineticOrder::Second),
        "fourth" => Ok(KineticOrder::Fourth),
        other => Err(CommandError::config(format!(
            "propagation.order must be \"second\" or \"fourth\", got \"{other}\""
        ))),
    }
}

fn check_resonance_upfront(spec: &ModelSpec) -> Result<(), CommandError> {
    if let ResonanceCheck::Resonant(d) = spec.check_resonance() {
        return Err(CommandError::config(format!("{d}")));
    }
    Ok(())
}

fn ensure_out_dir(dir: &Path) -> Result<(), CommandError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CommandError::config(format!("output directory {}: {e}", dir.display())))
}

fn tol(cfg: &RunConfig, name: &str, default: f64) -> f64 {
    cfg.tolerances.get(name).copied().unwrap_or(default)
}

/// `quasienergy`: one CSV row per mode up to n_max.
pub fn cmd_quasienergy(
    loaded: &LoadedConfig,
    out_dir: &Path,
    n_max: u32,
) -> Result<PathBuf, CommandError> {
    let cfg = &loaded.run;
    check_resonance_upfront(&cfg.model)?;
    ensure_out_dir(out_dir)?;
    let offset = drive_offset(&cfg.model).map_err(core_err)?;
    let mut csv = CsvWriter::new(&loaded.hash);
    csv.row(["index", "quasienergy", "undriven_energy", "drive_shift"]);
    let lo = first_index(&cfg.model);
    for n in lo..=n_max.max(lo) {
        let idx = ModeIndex::new(n);
        let e0 = static_energy(&cfg.model, idx).map_err(core_err)?;
        let e = quasienergy(&cfg.model, idx).map_err(core_err)?;
        csv.row([n.to_string(), fmt_num(e), fmt_num(e0), fmt_num(offset)]);
    }
    let path = out_dir.join("quasienergy.csv");
    csv.write(&path).map_err(CommandError::config)?;
    Ok(path)
}

/// `mode`: snapshot of u_n(x, t) on the grid as CSV, plus optional SVG.
pub fn cmd_mode(
    loaded: &LoadedConfig,
    out_dir: &Path,
    index: ModeIndex,
    t: f64,
) -> Result<Vec<PathBuf>, CommandError> {
    let cfg = &loaded.run;
    check_resonance_upfront(&cfg.model)?;
    ensure_out_dir(out_dir)?;
    let mode = FloquetMode::build(&cfg.model, index).map_err(core_err)?;
    let formats = cfg.output.clone().unwrap_or_default().formats;
    let mut written = Vec::new();

    if cfg.model.dim() == 1 {
        let grid = grid_from_config(cfg)?;
        let xs = grid.points();
        let us: Vec<Complex64> = xs
            .iter()
            .map(|&x| mode.eval(&[x], t).map_err(core_err))
            .collect::<Result<_, _>>()?;
        let mut csv = CsvWriter::new(&loaded.hash);
        csv.row(["x", "re_u", "im_u", "abs2_u"]);
        for (x, u) in xs.iter().zip(&us) {
            csv.row([fmt_num(*x), fmt_num(u.re), fmt_num(u.im), fmt_num(u.norm_sqr())]);
        }
        let path = out_dir.join("mode.csv");
        csv.write(&path).map_err(CommandError::config)?;
        written.push(path);
        if formats.iter().any(|f| f == "svg") {
            let abs2: Vec<f64> = us.iter().map(|u| u.norm_sqr()).collect();
            let re: Vec<f64> = us.iter().map(|u| u.re).collect();
            let svg = svg_line_plot(
                &xs,
                &[("abs2", &abs2), ("re", &re)],
                &loaded.hash,
                &format!("mode n={} t={}", index.n, fmt_num(t)),
            );
            let path = out_dir.join("mode.svg");
            std::fs::write(&path, svg).map_err(|e| CommandError::config(e.to_string()))?;
            written.push(path);
        }
    } else {
        let grid = grid2_from_config(cfg)?;
        let mut csv = CsvWriter::new(&loaded.hash);
        csv.row(["x1", "x2", "re_u", "im_u", "abs2_u"]);
        let mut abs2 = Vec::with_capacity(grid.len());
        for i1 in 0..grid.g1.n {
            let x1 = grid.g1.point(i1);
            for i2 in 0..grid.g2.n {
                let x2 = grid.g2.point(i2);
                let u = mode.eval(&[x1, x2], t).map_err(core_err)?;
                abs2.push(u.norm_sqr());
                csv.row([
                    fmt_num(x1),
                    fmt_num(x2),
                    fmt_num(u.re),
                    fmt_num(u.im),
                    fmt_num(u.norm_sqr()),
                ]);
            }
        }
        let path = out_dir.join("mode.csv");
        csv.write(&path).map_err(CommandError::config)?;
        written.push(path);
        if formats.iter().any(|f| f == "svg") {
            let svg = svg_heatmap(
                &abs2,
                grid.g1.n,
                grid.g2.n,
                &loaded.hash,
                &format!("mode ({},{}) t={}", index.n, index.n2, fmt_num(t)),
            );
            let path = out_dir.join("mode.svg");
            std::fs::write(&path, svg).map_err(|e| CommandError::config(e.to_string()))?;
            written.push(path);
        }
    }
    Ok(written)
}

pub const ALL_SUITES: [&str; 6] = ["residual", "period", "monodromy", "berry", "limits", "shift"];

#[derive(Serialize)]
struct SuiteEntry {
    check: String,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct SuiteDocument {
    version: String,
    config_sha256: String,
    all_passed: bool,
    entries: Vec<SuiteEntry>,
}

fn run_check(
    name: &str,
    result: Result<Vec<VerificationReport>, floquet_core::Error>,
    entries: &mut Vec<SuiteEntry>,
) {
    match result {
        Ok(reports) => {
            for r in reports {
                entries.push(SuiteEntry {
                    check: name.to_string(),
                    status: "ok".into(),
                    report: Some(r),
                    error: None,
                });
            }
        }
        Err(e) => entries.push(SuiteEntry {
            check: name.to_string(),
            status: "error".into(),
            report: None,
            error: Some(e.to_string()),
        }),
    }
}

/// `verify`: run the selected checks, write a JSON document, and return
/// (path, all_passed).
pub fn cmd_verify(
    loaded: &LoadedConfig,
    out_dir: &Path,
    suites: &[String],
) -> Result<(PathBuf, bool), CommandError> {
    let cfg = &loaded.run;
    check_resonance_upfront(&cfg.model)?;
    ensure_out_dir(out_dir)?;
    for s in suites {
        if !ALL_SUITES.contains(&s.as_str()) {
            return Err(CommandError::config(format!(
                "unknown suite `{s}`; valid: {}",
                ALL_SUITES.join(",")
            )));
        }
    }
    let spec = &cfg.model;
    let lo = first_index(spec);
    let order = kinetic_order(cfg)?;
    let steps = cfg.propagation.clone().unwrap_or_default().steps;
    let is_2d = spec.dim() == 2;
    let oscillator = matches!(
        spec,
        ModelSpec::HarmonicDriven { .. } | ModelSpec::CoupledDriven { .. }
    );

    let mut entries = Vec::new();
    let want = |name: &str| suites.iter().any(|s| s == name);

    if want("residual") {
        let res = if is_2d {
            let grid = Grid2D {
                g1: Grid1D::new(-4.0, 4.0, 128).unwrap(),
                g2: Grid1D::new(-4.0, 4.0, 128).unwrap(),
            };
            let t = tol(cfg, "residual_rel", 1e-5);
            [ModeIndex::pair(0, 0), ModeIndex::pair(1, 0)]
                .into_iter()
                .map(|i| floquet_residual_2d(spec, i, &grid, 4, t))
                .collect()
        } else {
            let grid = grid_from_config(cfg)?;
            let t = tol(cfg, "residual_rel", 1e-6);
            [ModeIndex::new(lo), ModeIndex::new(lo + 1)]
                .into_iter()
                .map(|i| floquet_residual(spec, i, &grid, 8, t))
                .collect()
        };
        run_check("residual", res, &mut entries);
    }
    if want("period") {
        let infid = tol(cfg, "infidelity", 1e-5);
        let ph = tol(cfg, "phase_error_rad", 1e-3);
        let res = if is_2d {
            let grid = grid2_from_config(cfg)?;
            period_fidelity_2d(spec, ModeIndex::pair(0, 0), &grid, steps.min(1024), order, infid, ph)
                .map(|r| vec![r])
        } else {
            let grid = grid_from_config(cfg)?;
            period_fidelity(spec, ModeIndex::new(lo), &grid, steps, order, infid, ph)
                .map(|r| vec![r])
        };
        run_check("period", res, &mut entries);
    }
    if want("monodromy") {
        if is_2d {
            entries.push(SuiteEntry {
                check: "monodromy".into(),
                status: "skipped".into(),
                report: None,
                error: Some("monodromy extraction is implemented for the 1D variants".into()),
            });
        } else {
            let grid = match &cfg.grid {
                Some(g) => Grid1D::new(g.min, g.max, 256).map_err(core_err)?,
                None => {
                    let d = default_grid(spec).map_err(core_err)?;
                    Grid1D::new(d.min, d.max, 256).map_err(core_err)?
                }
            };
            let t = tol(cfg, "eigenphase_rad", 2e-3);
            run_check(
                "monodromy",
                monodromy_check(spec, &grid, steps, order, 3, t).map(|r| vec![r]),
                &mut entries,
            );
        }
    }
    if want("berry") {
        if oscillator {
            let t = tol(cfg, "berry_rel", if is_2d { 5e-3 } else { 1e-3 });
            let res = if is_2d {
                let grid = grid2_from_config(cfg)?;
                berry_phase_numeric(spec, ModeIndex::pair(0, 0), None, Some(&grid), 256, t, false)
            } else {
                let grid = grid_from_config(cfg)?;
                berry_phase_numeric(spec, ModeIndex::new(0), Some(&grid), None, 512, t, false)
            };
            run_check("berry", res.map(|r| vec![r]), &mut entries);
        } else {
            entries.push(SuiteEntry {
                check: "berry".into(),
                status: "skipped".into(),
                report: None,
                error: Some("geometric phase is defined for the oscillator variants".into()),
            });
        }
    }
    if want("limits") {
        run_check("limits", limit_suite(spec).map(|r| vec![r]), &mut entries);
    }
    if want("shift") {
        if is_2d {
            entries.push(SuiteEntry {
                check: "shift".into(),
                status: "skipped".into(),
                report: None,
                error: Some("momentum-shift crosscheck is 1D".into()),
            });
        } else {
            let grid = grid_from_config(cfg)?;
            let period = spec.separate().map_err(core_err)?.period;
            let t = tol(cfg, "shift_dev", 1e-8);
            run_check(
                "shift",
                momentum_shift_crosscheck(spec, ModeIndex::new(lo), &grid, 0.37 * period, t)
                    .map(|r| vec![r]),
                &mut entries,
            );
        }
    }

    let all_passed = entries.iter().all(|e| match e.status.as_str() {
        "ok" => e.report.as_ref().is_some_and(|r| r.passed),
        "skipped" => true,
        _ => false,
    });
    let doc = SuiteDocument {
        version: VERSION.to_string(),
        config_sha256: loaded.hash.clone(),
        all_passed,
        entries,
    };
    let path = out_dir.join("verify.json");
    let json = serde_json::to_string_pretty(&doc)
        .map_err(|e| CommandError::numerical(e.to_string()))?;
    std::fs::write(&path, json).map_err(|e| CommandError::config(e.to_string()))?;
    Ok((path, all_passed))
}

/// `sweep`: resonance pre-scan, then one row per parameter value.
pub fn cmd_sweep(loaded: &LoadedConfig, out_dir: &Path) -> Result<PathBuf, CommandError> {
    let cfg = &loaded.run;
    let sweep: &SweepConfig = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CommandError::config("config has no [sweep] section"))?;
    ensure_out_dir(out_dir)?;

    let values: Vec<f64> = (0..sweep.count)
        .map(|i| {
            sweep.start
                + (sweep.stop - sweep.start) * i as f64 / (sweep.count - 1) as f64
        })
        .collect();

    // pre-scan: reject the whole sweep if any point is resonant or invalid
    let mut offending = Vec::new();
    let mut specs = Vec::with_capacity(values.len());
    for &v in &values {
        let s = crate::config::set_parameter(&cfg.model, &sweep.parameter, v)
            .map_err(CommandError::config)?;
        match (s.validate(), s.check_resonance()) {
            (Err(e), _) => offending.push(format!("{v} ({e})")),
            (_, ResonanceCheck::Resonant(d)) => offending.push(format!("{v} ({d})")),
            _ => specs.push((v, s)),
        }
    }
    if !offending.is_empty() {
        return Err(CommandError::config(format!(
            "sweep range contains invalid/resonant points for `{}`: {}",
            sweep.parameter,
            offending.join("; ")
        )));
    }

    let rows: Result<Vec<(f64, f64, Option<f64>)>, CommandError> = specs
        .par_iter()
        .map(|(v, s)| {
            let idx = ModeIndex::new(first_index(s));
            let e = quasienergy(s, idx).map_err(core_err)?;
            let berry = match s {
                ModelSpec::HarmonicDriven { .. } | ModelSpec::CoupledDriven { .. } => {
                    Some(geometric_phase(s))
                }
                _ => None,
            };
            Ok((*v, e, berry))
        })
        .collect();
    let rows = rows?;

    let mut csv = CsvWriter::new(&loaded.hash);
    csv.row([sweep.parameter.as_str(), "quasienergy_lowest", "berry_phase"]);
    for (v, e, b) in &rows {
        csv.row([fmt_num(*v), fmt_num(*e), b.map(fmt_num).unwrap_or_default()]);
    }
    let path = out_dir.join("sweep.csv");
    csv.write(&path).map_err(CommandError::config)?;
    Ok(path)
}

/// Resolve the output directory: --out flag beats config, which beats "out".
pub fn resolve_out_dir(loaded: &LoadedConfig, flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(out) = &loaded.run.output {
        if let Some(d) = &out.directory {
            return PathBuf::from(d);
        }
    }
    PathBuf::from("out")
}
