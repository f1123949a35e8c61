//! `hardy-fock` command-line front end.

// `!(x < tol)` is used on purpose so that NaN fails a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hardy_fock::barut_girardello::{bg_factor_parts, bg_function};
use hardy_fock::config::RunConfig;
use hardy_fock::disk_analytic::boundary;
use hardy_fock::factorization::factorize;
use hardy_fock::fock_state::{number_distribution, FockState, DEFAULT_TRUNCATION};
use hardy_fock::state_spec::StateSpec;
use hardy_fock::verify::{all_passed, run_suite};
use hardy_fock::weyl::{apply, WeylElement};
use hardy_fock::wigner::wigner_grid;
use hardy_fock::Error;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

/// Truncation and grid of the acceptance configuration, used by `verify`
/// when `--n` / `--grid` are not given.
const VERIFY_TRUNCATION: usize = 64;
const VERIFY_GRID: usize = 512;

#[derive(Parser)]
#[command(name = "hardy-fock", version, about = "Inner-outer factorisation of oscillator states in the unit disk")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Truncation N (default 256; 64 for verify)
    #[arg(long = "n", global = true)]
    truncation: Option<usize>,
    /// Boundary grid size M, a power of two >= 2N (default 4N; 512 for verify)
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, global = true, default_value_t = hardy_fock::factorization::DEFAULT_OUTER_TOL)]
    outer_tol: f64,
    #[arg(long, global = true, default_value_t = hardy_fock::factorization::DEFAULT_EDGE_MARGIN)]
    edge_margin: f64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (default stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// State spec file (JSON)
    #[arg(long, global = true, conflicts_with = "json")]
    spec: Option<PathBuf>,
    /// Inline state spec, e.g. '{"kind":"su11_cs","z":[0.5,0]}'
    #[arg(long, global = true)]
    json: Option<String>,
    /// Weyl element m:beta:gamma applied to the state first
    #[arg(long, global = true)]
    weyl: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Amplitudes, norm defect and number distribution
    State,
    /// Inner-outer factorisation report
    Factor,
    /// Boundary function and phase distribution on the midpoint grid
    PhaseDist,
    /// Number-phase Wigner function on (n, theta)
    Wigner {
        /// Largest n (default N - 1)
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Barut-Girardello function along the ray u = t e^{i arg}
    Bg {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        arg: f64,
        #[arg(long, default_value_t = 2.0)]
        t_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Run the invariant suite; exit status 0 iff every check passes
    Verify,
}

enum Failure {
    Spec(String),
    Numeric(String),
    Io(String),
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Spec(m) => Failure::Spec(m),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Spec(m)) => {
            eprintln!("error: invalid state spec: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(4)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let o = &cli.opts;
    let verify = matches!(cli.command, Command::Verify);
    let n = o
        .truncation
        .unwrap_or(if verify { VERIFY_TRUNCATION } else { DEFAULT_TRUNCATION });
    let mut config = RunConfig::with_truncation(n);
    config.grid = match (o.grid, verify && o.truncation.is_none()) {
        (Some(m), _) => m,
        (None, true) => VERIFY_GRID,
        (None, false) => config.grid,
    };
    config.outer_tol = o.outer_tol;
    config.edge_margin = o.edge_margin;
    config.validate()?;

    if verify {
        return cmd_verify(&config, o);
    }
    let state = load_state(o, &config)?;
    // a shift extends the truncation, so the grid must follow
    if state.len() != config.truncation {
        config.truncation = state.len();
        if o.grid.is_none() {
            config.grid = (4 * state.len()).next_power_of_two();
        }
        config.validate()?;
    }
    let text = match &cli.command {
        Command::State => cmd_state(&state, o.format.unwrap_or(Format::Json))?,
        Command::Factor => cmd_factor(&state, &config, o.format.unwrap_or(Format::Json))?,
        Command::PhaseDist => cmd_phase_dist(&state, &config, o.format.unwrap_or(Format::Csv))?,
        Command::Wigner { n_max } => {
            let n_max = n_max.unwrap_or(state.len() - 1);
            cmd_wigner(&state, &config, n_max, o.format.unwrap_or(Format::Csv))?
        }
        Command::Bg { arg, t_max, points } => {
            cmd_bg(&state, &config, *arg, *t_max, *points, o.format.unwrap_or(Format::Csv))?
        }
        Command::Verify => unreachable!("handled above"),
    };
    emit(o, &text)
}

fn load_state(o: &GlobalOpts, config: &RunConfig) -> Result<FockState, Failure> {
    let text = match (&o.spec, &o.json) {
        (Some(path), None) => fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        (None, Some(inline)) => inline.clone(),
        _ => return Err(Failure::Spec("give the state with --spec <file> or --json '<spec>'".into())),
    };
    let spec = StateSpec::from_json(&text)?;
    let state = spec.build(config.truncation)?;
    Ok(match &o.weyl {
        Some(w) => apply(&w.parse::<WeylElement>()?, &state),
        None => state,
    })
}

fn emit(o: &GlobalOpts, text: &str) -> Result<(), Failure> {
    match &o.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serialises");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cmd_state(state: &FockState, format: Format) -> Result<String, Failure> {
    let probs = number_distribution(state);
    Ok(match format {
        Format::Json => to_json(&json!({
            "truncation": state.len(),
            "norm_defect": state.norm_defect(),
            "coeffs": state.coeffs(),
            "number_distribution": probs,
        })),
        Format::Csv => csv_text(
            &["n", "re", "im", "probability"],
            state.coeffs().iter().zip(&probs).enumerate().map(|(n, (c, p))| {
                vec![n.to_string(), c.re.to_string(), c.im.to_string(), p.to_string()]
            }),
        )?,
    })
}

fn cmd_factor(state: &FockState, config: &RunConfig, format: Format) -> Result<String, Failure> {
    let fs = factorize(state, &config.factor_config())?;
    Ok(match format {
        Format::Json => to_json(&fs.report()),
        Format::Csv => csv_text(
            &["n", "outer_re", "outer_im", "inner_re", "inner_im"],
            fs.outer_coeffs.iter().zip(&fs.inner_coeffs).enumerate().map(|(n, (b, c))| {
                vec![
                    n.to_string(),
                    b.re.to_string(),
                    b.im.to_string(),
                    c.re.to_string(),
                    c.im.to_string(),
                ]
            }),
        )?,
    })
}

fn cmd_phase_dist(state: &FockState, config: &RunConfig, format: Format) -> Result<String, Failure> {
    let samples = boundary(state, config.grid)?;
    let density = samples.phase_density();
    Ok(match format {
        Format::Json => to_json(&json!({
            "grid": config.grid,
            "theta": samples.theta,
            "theta_fn": samples.values,
            "phase_density": density,
        })),
        Format::Csv => csv_text(
            &["theta", "re_theta_fn", "im_theta_fn", "phase_density"],
            samples.theta.iter().zip(&samples.values).zip(&density).map(|((t, v), p)| {
                vec![t.to_string(), v.re.to_string(), v.im.to_string(), p.to_string()]
            }),
        )?,
    })
}

fn cmd_wigner(state: &FockState, config: &RunConfig, n_max: usize, format: Format) -> Result<String, Failure> {
    let grid = wigner_grid(state, n_max, config.grid)?;
    Ok(match format {
        Format::Json => {
            let number = grid
                .number_marginal()
                .iter()
                .zip(number_distribution(state))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let phase = grid
                .phase_marginal()
                .iter()
                .zip(boundary(state, config.grid)?.phase_density())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            to_json(&json!({
                "n_max": grid.n_max,
                "grid": config.grid,
                "number_marginal_residual": number,
                "phase_marginal_residual": phase,
                "max_imaginary_residue": grid.max_imag,
            }))
        }
        Format::Csv => {
            let rows = grid.values.iter().enumerate().flat_map(|(n, row)| {
                grid.theta
                    .iter()
                    .zip(row)
                    .map(move |(t, s)| vec![n.to_string(), t.to_string(), s.to_string()])
            });
            csv_text(&["n", "theta", "S"], rows)?
        }
    })
}

fn cmd_bg(
    state: &FockState,
    config: &RunConfig,
    arg: f64,
    t_max: f64,
    points: usize,
    format: Format,
) -> Result<String, Failure> {
    if points < 2 || !(t_max > 0.0) || !arg.is_finite() {
        return Err(Failure::Numeric("need --points >= 2, --t-max > 0 and a finite --arg".into()));
    }
    let u_fn = bg_function(state);
    let dir = Complex64::from_polar(1.0, arg);
    let samples: Vec<(f64, Complex64, Complex64)> = (0..points)
        .map(|k| {
            let t = t_max * k as f64 / (points - 1) as f64;
            let u = dir * t;
            (t, u, u_fn.eval(u))
        })
        .collect();
    if t_max > u_fn.radius_hint {
        eprintln!(
            "warning: t_max = {t_max} exceeds the validated radius {:.3} of the truncated series",
            u_fn.radius_hint
        );
    }
    Ok(match format {
        Format::Csv => csv_text(
            &["t", "re_u", "im_u", "re_U", "im_U"],
            samples.iter().map(|(t, u, v)| {
                vec![t.to_string(), u.re.to_string(), u.im.to_string(), v.re.to_string(), v.im.to_string()]
            }),
        )?,
        Format::Json => {
            let fs = factorize(state, &config.factor_config())?;
            let (u_in, u_out) = bg_factor_parts(&fs);
            let ray: Vec<_> = samples
                .iter()
                .map(|(t, u, v)| json!({"t": t, "u": u, "U": v}))
                .collect();
            to_json(&json!({
                "ray": ray,
                "radius_hint": u_fn.radius_hint,
                "atoms": {"U": u_fn.atom, "U_in": u_in.atom, "U_out": u_out.atom},
            }))
        }
    })
}

fn cmd_verify(config: &RunConfig, o: &GlobalOpts) -> Result<(), Failure> {
    let checks = run_suite(config)?;
    let text = match o.format {
        Some(Format::Json) => to_json(&checks),
        Some(Format::Csv) => csv_text(
            &["group", "name", "value", "tolerance", "passed"],
            checks.iter().map(|c| {
                vec![
                    c.group.to_string(),
                    c.name.clone(),
                    c.value.to_string(),
                    c.tolerance.to_string(),
                    c.passed.to_string(),
                ]
            }),
        )?,
        None => {
            let mut s = String::new();
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!("{tag} [{}] {}: {:.3e} (tol {:.1e})", c.group, c.name, c.value, c.tolerance));
                if let Some(d) = &c.detail {
                    s.push_str(&format!(" -- {d}"));
                }
                s.push('\n');
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            s.push_str(&format!(
                "{} checks, {} failed (N = {}, M = {})\n",
                checks.len(),
                failed,
                config.truncation,
                config.grid
            ));
            s
        }
    };
    emit(o, &text)?;
    if all_passed(&checks) {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}
