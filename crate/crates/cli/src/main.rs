//! squidsim: command-line front end for the vibrating-loop flux qubit
//! simulator. Every subcommand reads one JSON config, writes deterministic
//! artifacts under --out (floats at 12 significant digits, LF endings), and
//! exits 0 on success, 2 on config problems, 3 on domain problems, 4 on
//! failed cross validation.
//!
//! Tabular artifacts honor --format (csv or json); structured reports are
//! always JSON. The two-level reduction and everything downstream of it
//! (visibility, report, sweep rows) is taken at the symmetric bias point;
//! `device.bias` moves only the spectrum artifacts and the bias sweep.

use clap::{Args, Parser, Subcommand};
use squidsim_core::config::{Config, OutputFormat};
use squidsim_core::error::{Error, Result};
use squidsim_core::format::sci;
use squidsim_core::output::{write_text, JsonValue, Table};
use squidsim_core::params::DerivedParams;
use squidsim_core::report::{CheckResult, FeasibilityReport};
use squidsim_core::visibility::VisibilityModel;
use squidsim_core::{overlap, params, potential, report, spectrum, sweep, validate, visibility};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "squidsim",
    version,
    about = "Simulator for an rf SQUID flux qubit with a vibrating loop segment",
    long_about = "Solves the flux double-well eigenproblem for an rf SQUID whose loop \
contains a vibrating beam, reduces it to a two-level model coupled to the beam mode, \
and evaluates the resulting decoherence and recoherence of the Rabi visibility."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Path to the JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Directory for output artifacts, created if missing.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Table format, csv or json; overrides the config `output.format`.
    #[arg(long, value_name = "FMT")]
    format: Option<String>,

    /// Worker threads; falls back to SQUIDSIM_WORKERS, then all cores.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce device parameters to their dimensionless groups and scales.
    Derive(Common),
    /// Solve the flux eigenproblem; export states, levels, and bias sweep.
    Spectrum(Common),
    /// Evaluate the Rabi-visibility time series and recoherence peaks.
    Visibility(Common),
    /// Run the feasibility report with its design checks.
    Report(Common),
    /// Cross-check the independent evaluation routes against each other.
    Validate(Common),
    /// Sweep one device parameter; requires a `sweep` block in the config.
    Sweep(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Derive(c)
            | Command::Spectrum(c)
            | Command::Visibility(c)
            | Command::Report(c)
            | Command::Validate(c)
            | Command::Sweep(c) => c,
        }
    }
}

/// Shared per-invocation state after the config is loaded.
struct Run {
    cfg: Config,
    out: PathBuf,
    format: OutputFormat,
}

fn resolve_workers(flag: Option<usize>) -> Result<Option<usize>> {
    let requested = match flag {
        Some(n) => Some(n),
        None => match std::env::var("SQUIDSIM_WORKERS") {
            Ok(raw) => Some(raw.trim().parse::<usize>().map_err(|_| {
                Error::Config(format!(
                    "SQUIDSIM_WORKERS must be a positive integer, got {raw:?}"
                ))
            })?),
            Err(std::env::VarError::NotPresent) => None,
            Err(e) => return Err(Error::Config(format!("SQUIDSIM_WORKERS: {e}"))),
        },
    };
    if requested == Some(0) {
        return Err(Error::Config(
            "worker count must be at least 1".into(),
        ));
    }
    Ok(requested)
}

fn prepare(common: &Common) -> Result<Run> {
    if let Some(n) = resolve_workers(common.workers)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let cfg = Config::from_path(&common.config)?;
    let format = match &common.format {
        Some(name) => OutputFormat::parse(name)?,
        None => cfg.output.format,
    };
    Ok(Run {
        cfg,
        out: common.out.clone(),
        format,
    })
}

fn write_table(run: &Run, stem: &str, table: &Table) -> Result<PathBuf> {
    let path = run.out.join(format!("{stem}.{}", run.format.extension()));
    write_text(&path, &table.render(run.format))?;
    Ok(path)
}

fn write_json(run: &Run, stem: &str, value: &JsonValue) -> Result<PathBuf> {
    let path = run.out.join(format!("{stem}.json"));
    let mut text = value.render();
    text.push('\n');
    write_text(&path, &text)?;
    Ok(path)
}

fn obj(fields: Vec<(&str, JsonValue)>) -> JsonValue {
    JsonValue::Object(fields.into_iter().map(|(k, v)| (k.to_owned(), v)).collect())
}

fn num(x: f64) -> JsonValue {
    JsonValue::Number(x)
}

fn derived_json(d: &DerivedParams) -> JsonValue {
    obj(vec![
        ("u0", num(d.u0)),
        ("u0_kelvin", num(d.u0_kelvin)),
        ("beta_l", num(d.beta_l)),
        ("beta_c", num(d.beta_c)),
        ("beta_h", num(d.beta_h)),
        ("omega_lc", num(d.omega_lc)),
        ("x_zero_point", num(d.x_zero_point)),
        ("x_flux_quantum", num(d.x_flux_quantum)),
        ("n_thermal", num(d.n_thermal)),
        ("thermal_length", JsonValue::number_opt(d.thermal_length)),
    ])
}

fn check_json(c: &CheckResult) -> JsonValue {
    obj(vec![
        ("name", JsonValue::String(c.name.to_owned())),
        ("description", JsonValue::String(c.description.to_owned())),
        ("value", num(c.value)),
        ("bound", num(c.bound)),
        ("direction", JsonValue::String(c.direction.to_owned())),
        ("pass", JsonValue::Bool(c.pass)),
    ])
}

fn print_check(c: &CheckResult) {
    println!(
        "check {:28} {}  value {} ({} {})",
        c.name,
        if c.pass { "pass" } else { "FAIL" },
        sci(c.value),
        c.direction,
        sci(c.bound)
    );
}

fn report_json(rep: &FeasibilityReport) -> JsonValue {
    let t = &rep.two_level;
    let c = &rep.coupling;
    obj(vec![
        ("derived", derived_json(&rep.derived)),
        (
            "two_level",
            obj(vec![
                ("delta", num(t.delta)),
                ("eta", num(t.eta)),
                ("eta_lsq", num(t.eta_lsq)),
                ("b_star", num(t.b_star)),
                ("fit_window", num(t.fit_window)),
                ("fit_residual_max", num(t.fit_residual_max)),
                ("gap_ratio", num(t.gap_ratio)),
            ]),
        ),
        (
            "coupling",
            obj(vec![
                ("force", num(c.force)),
                ("equilibrium_shift", num(c.equilibrium_shift)),
                ("alpha0", num(c.alpha0)),
                ("zeta", num(c.zeta)),
                ("rabi_angular_frequency", num(c.rabi_angular_frequency)),
            ]),
        ),
        ("gamma_pull", num(rep.gamma_pull)),
        ("recoherence_time", num(rep.recoherence_time)),
        ("nu_d_first", num(rep.nu_d_first)),
        ("min_overlap", num(rep.min_overlap)),
        ("high_t_damping_exponent", num(rep.high_t_damping_exponent)),
        ("zener_exponent", num(rep.zener_exponent)),
        ("thermal_ratio", num(rep.thermal_ratio)),
        (
            "checks",
            JsonValue::Array(rep.checks.iter().map(check_json).collect()),
        ),
        ("feasible", JsonValue::Bool(rep.feasible)),
    ])
}

fn cmd_derive(run: &Run) -> Result<()> {
    let derived = params::derive(&run.cfg.device, &run.cfg.constants)?;
    let path = write_json(run, "derived", &derived_json(&derived))?;
    for (name, value) in [
        ("u0", derived.u0),
        ("u0_kelvin", derived.u0_kelvin),
        ("beta_l", derived.beta_l),
        ("beta_c", derived.beta_c),
        ("beta_h", derived.beta_h),
        ("omega_lc", derived.omega_lc),
        ("x_zero_point", derived.x_zero_point),
        ("x_flux_quantum", derived.x_flux_quantum),
        ("n_thermal", derived.n_thermal),
    ] {
        println!("{name} = {}", sci(value));
    }
    match derived.thermal_length {
        Some(l) => println!("thermal_length = {}", sci(l)),
        None => println!("thermal_length = null"),
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_spectrum(run: &Run) -> Result<()> {
    let cfg = &run.cfg;
    let derived = params::derive(&cfg.device, &cfg.constants)?;
    let grid = cfg.grid()?;
    let levels = cfg.grid.levels;
    let bias = cfg.device.bias;
    let solved = spectrum::solve(bias, derived.beta_l, derived.beta_c, &grid, levels)?;
    let defects = spectrum::convergence_defects(bias, derived.beta_l, derived.beta_c, &grid, levels)?;

    // Waterfall presentation: each psi_n rides on its own lambda_n so the
    // states sit at their energies inside the u/U0 curve.
    let mut state_columns: Vec<String> = vec!["phi".into(), "u_over_U0".into()];
    for n in 0..levels {
        state_columns.push(format!("psi{n}"));
    }
    let column_refs: Vec<&str> = state_columns.iter().map(|s| s.as_str()).collect();
    let mut states = Table::new(&column_refs);
    for i in 0..grid.points {
        let phi = grid.node(i);
        let mut row = vec![phi, potential::potential_u(phi, bias, derived.beta_l)];
        for (state, &lambda) in solved.states.iter().zip(solved.levels.iter()) {
            row.push(state[i] + lambda);
        }
        states.push_row(row);
    }
    let states_path = write_table(run, "eigenstates", &states)?;

    let mut level_table = Table::new(&["level", "lambda", "richardson_defect"]);
    for (n, (&lambda, &defect)) in solved.levels.iter().zip(defects.iter()).enumerate() {
        level_table.push_row(vec![n as f64, lambda, defect]);
    }
    let levels_path = write_table(run, "levels", &level_table)?;

    // The sweep tracks the avoided crossing, so it always solves the two
    // qubit levels regardless of how many the state export carries.
    let biases: Vec<f64> = (0..41).map(|i| -0.5 + i as f64 / 40.0).collect();
    let swept = spectrum::bias_sweep(&biases, derived.beta_l, derived.beta_c, &grid, 2)?;
    let mut sweep_table = Table::new(&["bias", "lambda0", "lambda1"]);
    for (&b, lambdas) in biases.iter().zip(swept.iter()) {
        sweep_table.push_row(vec![b, lambdas[0], lambdas[1]]);
    }
    let sweep_path = write_table(run, "bias_sweep", &sweep_table)?;

    // Potential surface over beam displacement: the deflection x threads
    // flux and shifts the effective bias by 2 pi B l x / Phi_0.  One x_phi
    // of travel re-threads a full flux quantum, so spanning +-x_phi shows
    // the corrugation of the washboard, not just a sliver near rest.
    let flux_per_meter =
        2.0 * std::f64::consts::PI * cfg.device.coupling_bl / cfg.constants.flux_quantum;
    let mut surface = Table::new(&["x_meters", "flux_wb", "u_joules"]);
    let stride = (grid.points + 511) / 512;
    for j in 0..9 {
        let x = derived.x_flux_quantum * (j as f64 - 4.0) / 4.0;
        let shifted = bias + flux_per_meter * x;
        for i in (0..grid.points).step_by(stride) {
            let phi = grid.node(i);
            surface.push_row(vec![
                x,
                phi * cfg.constants.flux_quantum / (2.0 * std::f64::consts::PI),
                derived.u0 * potential::potential_u(phi, shifted, derived.beta_l),
            ]);
        }
    }
    let surface_path = write_table(run, "surface", &surface)?;

    for (n, &lambda) in solved.levels.iter().enumerate() {
        println!("lambda_{n} = {}", sci(lambda));
    }
    if solved.levels.len() > 1 {
        println!("half_gap = {}", sci(0.5 * (solved.levels[1] - solved.levels[0])));
    }
    for path in [&states_path, &levels_path, &sweep_path, &surface_path] {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_visibility(run: &Run) -> Result<()> {
    let cfg = &run.cfg;
    let grid = cfg.grid()?;
    let rep = report::feasibility(&cfg.device, &cfg.constants, &grid)?;
    let model = VisibilityModel::new(&rep.coupling, &cfg.device, &rep.derived);
    let method = overlap::by_name(&cfg.simulation.overlap_method)?;

    let t_rec = model.recoherence_time(1);
    let times = visibility::time_grid(
        t_rec * cfg.simulation.recoherence_periods as f64,
        cfg.simulation.time_points,
    )?;
    let series = visibility::series(&model, method.as_ref(), &times)?;

    let mut table = Table::new(&[
        "t_seconds",
        "re_nu0",
        "im_nu0",
        "abs_nu0",
        "nu_d",
        "abs_nu",
        "P_state",
    ]);
    for i in 0..series.times.len() {
        table.push_row(vec![
            series.times[i],
            series.nu_pull[i].re,
            series.nu_pull[i].im,
            series.nu_pull[i].norm(),
            series.nu_dissipative[i],
            series.visibility[i],
            series.probability[i],
        ]);
    }
    let series_path = write_table(run, "visibility", &table)?;

    let peaks = visibility::recoherence_peaks(&model, method.as_ref(), cfg.simulation.recoherence_count)?;
    let coupling = obj(vec![
        ("force", num(rep.coupling.force)),
        ("equilibrium_shift", num(rep.coupling.equilibrium_shift)),
        ("alpha0", num(rep.coupling.alpha0)),
        ("zeta", num(rep.coupling.zeta)),
        (
            "rabi_angular_frequency",
            num(rep.coupling.rabi_angular_frequency),
        ),
    ]);
    let meta = obj(vec![
        (
            "overlap_method",
            JsonValue::String(method.name().to_owned()),
        ),
        ("coupling", coupling),
        ("temperature", num(cfg.device.temperature)),
        ("omega0", num(model.omega0)),
        ("n_thermal", num(model.n_thermal)),
        ("quality_factor", num(model.quality_factor)),
        ("gamma_pull", num(model.gamma_pull())),
        ("recoherence_time", num(t_rec)),
        ("nu_d_first", num(model.nu_dissipative(t_rec))),
        (
            "high_t_damping_exponent",
            num(visibility::high_t_damping_exponent(
                &model,
                cfg.device.temperature,
                &cfg.constants,
            )),
        ),
        ("zener_exponent", num(model.zener_exponent())),
        (
            "peaks",
            JsonValue::Array(
                peaks
                    .iter()
                    .map(|p| {
                        obj(vec![
                            ("index", JsonValue::Integer(p.index as i64)),
                            ("time", num(p.time)),
                            ("visibility", num(p.visibility)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ]);
    let meta_path = write_json(run, "visibility_meta", &meta)?;

    println!("overlap_method = {}", method.name());
    println!("gamma_pull = {}", sci(model.gamma_pull()));
    println!("recoherence_time = {}", sci(t_rec));
    for p in &peaks {
        println!(
            "peak {} at t = {}: visibility {}",
            p.index,
            sci(p.time),
            sci(p.visibility)
        );
    }
    println!("wrote {}", series_path.display());
    println!("wrote {}", meta_path.display());
    Ok(())
}

fn cmd_report(run: &Run) -> Result<()> {
    let grid = run.cfg.grid()?;
    let rep = report::feasibility(&run.cfg.device, &run.cfg.constants, &grid)?;
    let path = write_json(run, "report", &report_json(&rep))?;
    for c in &rep.checks {
        print_check(c);
    }
    println!("feasible = {}", rep.feasible);
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_validate(run: &Run) -> Result<()> {
    let grid = run.cfg.grid()?;
    let vr = validate::run(&run.cfg.device, &run.cfg.constants, &grid, run.cfg.grid.levels)?;
    let json = obj(vec![
        (
            "checks",
            JsonValue::Array(vr.checks.iter().map(check_json).collect()),
        ),
        ("pass", JsonValue::Bool(vr.pass)),
    ]);
    let path = write_json(run, "validation", &json)?;
    for c in &vr.checks {
        print_check(c);
    }
    println!("wrote {}", path.display());
    // The artifact is written even when a check fails; the exit code alone
    // carries the verdict.
    vr.ensure()?;
    println!("all cross checks passed");
    Ok(())
}

fn cmd_sweep(run: &Run) -> Result<()> {
    let cfg = &run.cfg;
    let sc = cfg.sweep_required()?;
    let grid = cfg.grid()?;
    let points = sweep::run(&cfg.device, &cfg.constants, &grid, sc)?;
    let table = sweep::table(sc.parameter.name(), &points);
    let path = write_table(run, "sweep", &table)?;
    let feasible = points.iter().filter(|p| p.report.feasible).count();
    println!(
        "swept {} over {} points: {} feasible",
        sc.parameter.name(),
        points.len(),
        feasible
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn dispatch(command: &Command) -> Result<()> {
    let run = prepare(command.common())?;
    match command {
        Command::Derive(_) => cmd_derive(&run),
        Command::Spectrum(_) => cmd_spectrum(&run),
        Command::Visibility(_) => cmd_visibility(&run),
        Command::Report(_) => cmd_report(&run),
        Command::Validate(_) => cmd_validate(&run),
        Command::Sweep(_) => cmd_sweep(&run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
