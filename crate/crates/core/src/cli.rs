//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{RunConfig, Selector};
use crate::degrees::{
    omega_invariant, representation_maximal_orbit_types, IrreducibleLabel, OmegaInvariant,
    OmegaMode,
};
use crate::dynamics::{continue_orbit, find_periodic_orbit, symmetry_deviation, ShootingOptions};
use crate::error::{Error, Result};
use crate::format::{float, to_json};
use crate::model::{find_equilibrium, gradient, Equilibrium, PotentialParams};
use crate::spectrum::{
    critical_set, dense_slice_eigenvalues, eigenvalues_with_multiplicity, CriticalValue,
    SpectralReport,
};
use crate::symmetry::Lattice;

#[derive(Debug, Parser)]
#[command(
    name = "equivibe",
    version,
    about = "Symmetric vibrations of dihedral particle rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Overrides,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symmetric equilibrium radius and configuration.
    Equilibrium,
    /// Isotypical Hessian blocks and eigenvalues.
    Spectrum,
    /// Critical frequencies `l / sqrt(mu)`.
    CriticalSet {
        /// Print an aligned table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Bifurcation invariants at chosen crossings.
    Invariants,
    /// Periodic orbits near chosen crossings, written as CSV and SVG.
    Simulate,
    /// Everything above, per crossing.
    Atlas,
}

#[derive(Debug, Args)]
struct Overrides {
    /// JSON configuration file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long = "A", global = true, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long = "B", global = true, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    sigma: Option<f64>,
    #[arg(long, global = true)]
    l_max: Option<usize>,
    /// `paper_style` or `literal`.
    #[arg(long, global = true)]
    omega_mode: Option<OmegaMode>,
    #[arg(long, global = true)]
    omega_l_max: Option<usize>,
    /// Labelled eigenvalues `j[sign]:mu,...` or `reference`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    eigenvalues: Option<String>,
    /// Crossing `j,l[,sign]`; repeatable.
    #[arg(long = "crossing", global = true, allow_hyphen_values = true)]
    crossings: Vec<String>,
    /// Orbit amplitude as a fraction of r0.
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    dt: Option<f64>,
    #[arg(long, global = true)]
    periods: Option<usize>,
    /// Mode `j,l[,sign]` to simulate; repeatable.
    #[arg(long = "mode", global = true, allow_hyphen_values = true)]
    modes: Vec<String>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

impl Overrides {
    fn apply(self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { c.$f = v; } )* };
        }
        set!(
            n,
            a,
            b,
            sigma,
            l_max,
            omega_mode,
            omega_l_max,
            eps,
            dt,
            periods
        );
        if self.eigenvalues.is_some() {
            c.eigenvalues = self.eigenvalues;
        }
        if self.out_dir.is_some() {
            c.out_dir = self.out_dir;
        }
        if !self.crossings.is_empty() {
            c.crossings = self.crossings;
        }
        if !self.modes.is_empty() {
            c.modes = self.modes;
        }
        c.validate()?;
        Ok(c)
    }
}

/// Cap the global pool at `EQUIVIBE_THREADS` when set.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("EQUIVIBE_THREADS") {
        let k: usize = v.trim().parse().ok().filter(|&k| k > 0).ok_or_else(|| {
            Error::Config(format!("EQUIVIBE_THREADS={v:?} is not a positive integer"))
        })?;
        // a second initialization in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
    Ok(())
}

/// Run with explicit arguments; JSON goes to `out`, errors as JSON to
/// `err`. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            return report_error(&Error::Config(e.to_string().trim().to_string()), err);
        }
    };
    match init_threads().and_then(|_| execute(cli, out)) {
        Ok(()) => 0,
        Err(e) => report_error(&e, err),
    }
}

fn report_error(e: &Error, err: &mut dyn Write) -> i32 {
    let code = e.exit_code();
    let doc = json!({"error": e.kind(), "message": e.to_string(), "exit_code": code});
    let _ = writeln!(err, "{}", serde_json::to_string(&doc).unwrap_or_default());
    code
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let cfg = cli.opts.apply()?;
    let p = cfg.params()?;
    match cli.command {
        Command::Equilibrium => emit(out, &cfg, "equilibrium.json", &equilibrium_doc(&p)?),
        Command::Spectrum => {
            let doc = spectrum_doc(&cfg, &p)?;
            emit(out, &cfg, "spectrum.json", &doc)
        }
        Command::CriticalSet { table } => {
            let (_, report) = spectrum_for(&cfg, &p)?;
            let cs = critical_set(&report, cfg.l_max)?;
            let rows: Vec<CriticalRow> = cs.iter().map(CriticalRow::from).collect();
            let text = critical_table(&rows);
            if let Some(dir) = &cfg.out_dir {
                write_file(dir, "critical_set.txt", text.as_bytes())?;
            }
            if table {
                out.write_all(text.as_bytes())?;
                Ok(())
            } else {
                emit(out, &cfg, "critical_set.json", &rows)
            }
        }
        Command::Invariants => {
            let (_, report) = spectrum_for(&cfg, &p)?;
            let crossings = select_crossings(&report, &cfg.crossing_selectors()?, 1)?;
            let docs = invariants(&report, &crossings, cfg.omega_mode)?;
            emit(out, &cfg, "invariants.json", &docs)
        }
        Command::Simulate => {
            let doc = simulate(&cfg, &p)?;
            emit(out, &cfg, "simulate.json", &doc)
        }
        Command::Atlas => {
            let doc = atlas(&cfg, &p)?;
            emit(out, &cfg, "atlas.json", &doc)
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, cfg: &RunConfig, name: &str, doc: &T) -> Result<()> {
    let text = to_json(doc)?;
    if let Some(dir) = &cfg.out_dir {
        write_file(dir, name, text.as_bytes())?;
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), bytes)?;
    Ok(())
}

#[derive(Serialize)]
struct EquilibriumDoc {
    params: PotentialParams,
    r0: f64,
    phi_min: f64,
    gradient_norm: f64,
    u0: Vec<[f64; 2]>,
}

fn equilibrium_doc(p: &PotentialParams) -> Result<EquilibriumDoc> {
    let eq = find_equilibrium(p)?;
    Ok(EquilibriumDoc {
        params: *p,
        r0: eq.r0,
        phi_min: eq.phi_min,
        gradient_norm: gradient(&eq.u0, p)?.norm(),
        u0: eq.u0.points.clone(),
    })
}

/// The equilibrium (when computed) and the spectrum the run works with.
fn spectrum_for(
    cfg: &RunConfig,
    p: &PotentialParams,
) -> Result<(Option<Equilibrium>, SpectralReport)> {
    match cfg.supplied_spectrum()? {
        Some(r) => Ok((None, r)),
        None => {
            let eq = find_equilibrium(p)?;
            let r = SpectralReport::compute(&eq, p)?;
            Ok((Some(eq), r))
        }
    }
}

#[derive(Serialize)]
struct ModeRow {
    label: String,
    component: usize,
    irrep: String,
    mu: f64,
    real_multiplicity: usize,
}

fn mode_rows(r: &SpectralReport) -> Vec<ModeRow> {
    r.modes
        .iter()
        .map(|m| ModeRow {
            label: m.label(),
            component: m.component,
            irrep: m.irrep.to_string(),
            mu: m.mu,
            real_multiplicity: m.real_multiplicity,
        })
        .collect()
}

fn spectrum_doc(cfg: &RunConfig, p: &PotentialParams) -> Result<serde_json::Value> {
    let (eq, r) = spectrum_for(cfg, p)?;
    let mult = eigenvalues_with_multiplicity(&r);
    let dense = match &eq {
        Some(eq) => Some(dense_slice_eigenvalues(eq, p)?),
        None => None,
    };
    Ok(json!({
        "n": r.n,
        "r0": r.r0,
        "source": if eq.is_some() { "computed" } else { "supplied" },
        "modes": mode_rows(&r),
        "multiplicities": mult,
        "blocks": r.blocks,
        "dense_slice_eigenvalues": dense,
        "max_cross_term": r.max_cross_term,
        "closed_form_deviation": r.closed_form_deviation,
        "notes": r.notes,
    }))
}

#[derive(Debug, Clone, Serialize)]
struct CriticalRow {
    label: String,
    j: usize,
    l: usize,
    sign: Option<char>,
    irrep: String,
    mu: f64,
    lambda: f64,
    limit_period: f64,
}

impl From<&CriticalValue> for CriticalRow {
    fn from(c: &CriticalValue) -> Self {
        Self {
            label: c.label(),
            j: c.j,
            l: c.l,
            sign: c.branch.map(|p| p.symbol()),
            irrep: c.irrep.to_string(),
            mu: c.mu,
            lambda: c.lambda,
            limit_period: c.limit_period,
        }
    }
}

fn critical_table(rows: &[CriticalRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<18} {:>4} {:>16} {:>16} {:>16}",
        "label", "irrep", "mu", "lambda", "period"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<18} {:>4} {:>16} {:>16} {:>16}",
            r.label,
            r.irrep,
            float(r.mu),
            float(r.lambda),
            float(r.limit_period)
        );
    }
    s
}

/// Crossings matching the selectors, or every crossing with `l <= l_max`
/// when there are none.
fn select_crossings(
    report: &SpectralReport,
    sel: &[Selector],
    l_max: usize,
) -> Result<Vec<CriticalValue>> {
    let top = sel.iter().map(|s| s.l).max().unwrap_or(l_max).max(1);
    let all = critical_set(report, top)?;
    if sel.is_empty() {
        return Ok(all.into_iter().filter(|c| c.l <= l_max).collect());
    }
    let mut out = Vec::new();
    for s in sel {
        let hits: Vec<&CriticalValue> = all
            .iter()
            .filter(|c| c.j == s.j && c.l == s.l && (s.sign.is_none() || c.branch == s.sign))
            .collect();
        match hits.as_slice() {
            [one] => out.push((*one).clone()),
            [] => {
                return Err(Error::Config(format!(
                    "no crossing {},{} in this spectrum",
                    s.j, s.l
                )))
            }
            many => {
                let names: Vec<String> = many.iter().map(|c| c.label()).collect();
                return Err(Error::Config(format!(
                    "crossing {},{} is ambiguous, add a sign: {}",
                    s.j,
                    s.l,
                    names.join(", ")
                )));
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct OmegaDoc {
    label: String,
    j: usize,
    l: usize,
    irrep: String,
    lambda: f64,
    limit_period: f64,
    mode: OmegaMode,
    factors: Vec<String>,
    expansion: String,
    terms: crate::burnside::BurnsideElement,
    maximal_orbit_types: Vec<String>,
    predicted_branches: Vec<String>,
    predicted_branch_count: usize,
}

impl From<OmegaInvariant> for OmegaDoc {
    fn from(w: OmegaInvariant) -> Self {
        let c = &w.crossing;
        Self {
            label: w.label.clone(),
            j: c.j,
            l: c.l,
            irrep: c.irrep.to_string(),
            lambda: c.lambda,
            limit_period: c.limit_period,
            mode: w.mode,
            factors: w.factors.clone(),
            expansion: w.value.to_string(),
            maximal_orbit_types: w
                .maximal_orbit_types
                .iter()
                .map(|s| s.name.clone())
                .collect(),
            predicted_branch_count: w.maximal_orbit_types.len(),
            predicted_branches: w
                .predicted_branches
                .iter()
                .map(|s| s.name.clone())
                .collect(),
            terms: w.value,
        }
    }
}

fn invariants(
    report: &SpectralReport,
    crossings: &[CriticalValue],
    mode: OmegaMode,
) -> Result<Vec<OmegaDoc>> {
    crossings
        .par_iter()
        .map(|c| omega_invariant(report, c, mode).map(OmegaDoc::from))
        .collect()
}

#[derive(Serialize)]
struct OrbitDoc {
    label: String,
    seed_mu: f64,
    seed_lambda: f64,
    lambda: f64,
    relative_shift: f64,
    amplitude: f64,
    residual: f64,
    iterations: usize,
    energy_drift: f64,
    drift_periods: usize,
    symmetry: Vec<serde_json::Value>,
    csv: Option<String>,
    svg: Option<String>,
}

fn simulate(cfg: &RunConfig, p: &PotentialParams) -> Result<Vec<OrbitDoc>> {
    if cfg.eigenvalues.is_some() {
        return Err(Error::Config(
            "simulate needs the computed spectrum, drop --eigenvalues".into(),
        ));
    }
    let eq = find_equilibrium(p)?;
    let report = SpectralReport::compute(&eq, p)?;
    let crossings = select_crossings(&report, &cfg.mode_selectors()?, 1)?;
    let dir = cfg
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("equivibe-out"));
    let opts = ShootingOptions {
        dt: cfg.dt,
        ..Default::default()
    };
    let lat = Lattice::get(p.n)?;
    let docs: Vec<Result<OrbitDoc>> = crossings
        .par_iter()
        .map(|c| {
            let orbit = find_periodic_orbit(&eq, &report, c, cfg.eps * eq.r0, p, &opts)?;
            let stride = (orbit.trajectory.times.len() / 64).max(1);
            let long = continue_orbit(&orbit, cfg.periods, p, stride)?;
            let mut symmetry = Vec::new();
            for id in
                representation_maximal_orbit_types(p.n, IrreducibleLabel::Folded(c.irrep, c.l))?
            {
                symmetry.push(json!({
                    "class": lat.name(id),
                    "deviation": symmetry_deviation(&orbit.trajectory, id)?,
                }));
            }
            let stem = orbit.label.replace(['{', '}'], "").replace(',', "_");
            std::fs::create_dir_all(&dir)?;
            let csv_path = dir.join(format!("{stem}.csv"));
            orbit
                .trajectory
                .write_csv(std::fs::File::create(&csv_path)?)?;
            let svg_path = dir.join(format!("{stem}.svg"));
            std::fs::write(&svg_path, orbit.trajectory.to_svg(&orbit.label))?;
            Ok(OrbitDoc {
                label: orbit.label.clone(),
                seed_mu: orbit.seed_mu,
                seed_lambda: orbit.seed_lambda,
                lambda: orbit.lambda,
                relative_shift: orbit.lambda / orbit.seed_lambda - 1.0,
                amplitude: orbit.amplitude,
                residual: orbit.residual,
                iterations: orbit.trace.len() - 1,
                energy_drift: long.max_energy_drift,
                drift_periods: cfg.periods,
                symmetry,
                csv: Some(csv_path.display().to_string()),
                svg: Some(svg_path.display().to_string()),
            })
        })
        .collect();
    docs.into_iter().collect()
}

fn atlas(cfg: &RunConfig, p: &PotentialParams) -> Result<serde_json::Value> {
    let (eq, report) = spectrum_for(cfg, p)?;
    let cs = critical_set(&report, cfg.l_max)?;
    let crossings: Vec<CriticalValue> = cs
        .iter()
        .filter(|c| c.l <= cfg.omega_l_max)
        .cloned()
        .collect();
    let omegas = invariants(&report, &crossings, cfg.omega_mode)?;
    let entries: Vec<serde_json::Value> = omegas
        .into_iter()
        .map(|w| {
            json!({
                "label": w.label,
                "irrep": w.irrep,
                "lambda": w.lambda,
                "limit_period": w.limit_period,
                "predicted_orbit_types": w.maximal_orbit_types,
                "predicted_branch_count": w.predicted_branch_count,
                "omega": w.expansion,
                "factors": w.factors,
            })
        })
        .collect();
    Ok(json!({
        "params": p,
        "r0": report.r0,
        "equilibrium_source": if eq.is_some() { "computed" } else { "supplied" },
        "omega_mode": cfg.omega_mode,
        "modes": mode_rows(&report),
        "critical_set": cs.iter().map(CriticalRow::from).collect::<Vec<_>>(),
        "crossings": entries,
    }))
}
