//! Command-line front end: classify moduli points, solve tubes, sweep the
//! boundary curvatures and tube families, decide embeddedness and foliation,
//! run isoperimetric profiles, and export meshes.
//!
//! Output is fully deterministic: there is no randomness anywhere, grid rows
//! are emitted in grid order regardless of the internal parallelism, and
//! repeated runs with the same flags are byte-identical.
//!
//! Exit codes: 0 success, 1 domain/precondition error, 2 numeric failure,
//! 64 usage error.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use cmc_tubes::*;
use serde::Deserialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

mod output;

use output::{family_csv, h0_csv, tube_json};

#[derive(Parser, Debug)]
#[command(
    name = "cmc-tubes",
    version,
    about = "Screw-motion CMC tubes in E(kappa, tau)"
)]
struct Cli {
    /// Root-finding tolerance (energy variable).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Quadrature tolerance (absolute and relative).
    #[arg(long = "quad-tol", global = true)]
    quad_tol: Option<f64>,
    /// Emit JSON where the default output is plain text.
    #[arg(long, global = true)]
    json: bool,
    /// JSON config file mirroring the global flags; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone, Copy)]
struct SpaceArgs {
    /// Base curvature kappa (kappa != 4 tau^2).
    #[arg(long, allow_negative_numbers = true)]
    kappa: f64,
    /// Bundle curvature tau >= 0.
    #[arg(long)]
    tau: f64,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classify the moduli point (H, J): sphere type, helicoid, nodoid, or tube.
    Classify {
        #[command(flatten)]
        space: SpaceArgs,
        /// Screw-motion pitch.
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long = "H", allow_negative_numbers = true)]
        h: f64,
        #[arg(long = "J", allow_negative_numbers = true)]
        j: f64,
    },
    /// Solve the tube energy at fixed pitch and mean curvature (JSON output).
    Tube {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long = "H")]
        h: f64,
        /// Scan nodes across the energy interval.
        #[arg(long)]
        scan: Option<usize>,
    },
    /// Boundary mean curvatures over a pitch grid (CSV: a,H0,roots_found,status).
    H0 {
        #[command(flatten)]
        space: SpaceArgs,
        /// Pitch grid lo:hi:n.
        #[arg(long = "a-grid", value_parser = parse_grid, allow_hyphen_values = true)]
        a_grid: Grid,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tube family over a mean-curvature grid (CSV).
    Family {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        /// Mean-curvature grid lo:hi:n.
        #[arg(long = "H-grid", value_parser = parse_grid)]
        h_grid: Grid,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embeddedness verdict for a solved tube (JSON output).
    #[command(group(clap::ArgGroup::new("target").required(true).args(["a", "m"])))]
    Embed {
        #[command(flatten)]
        space: SpaceArgs,
        /// Pitch (non-compact criterion).
        #[arg(long, conflicts_with = "m", allow_negative_numbers = true)]
        a: Option<f64>,
        /// Turn count for the compact closing pitch (compact criterion).
        #[arg(long)]
        m: Option<u32>,
        #[arg(long = "H")]
        h: f64,
    },
    /// Foliation verdict for the fully symmetric families (JSON output).
    Foliation {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
    },
    /// Isoperimetric (volume, area) sweep of compact tubes (CSV).
    Isoprofile {
        #[command(flatten)]
        space: SpaceArgs,
        /// Turn counts, comma separated (pitches a_{1,m}).
        #[arg(long = "m-list", value_delimiter = ',')]
        m_list: Vec<u32>,
        #[arg(long = "H-grid", value_parser = parse_grid)]
        h_grid: Grid,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a tube and export its screw surface as an OBJ mesh.
    Mesh {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long = "H")]
        h: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 129)]
        res_sigma: usize,
        #[arg(long, default_value_t = 129)]
        res_theta: usize,
        /// Rotation span; defaults to one full turn.
        #[arg(long)]
        theta_span: Option<f64>,
    },
    /// Print the universal foliation constant.
    X0,
}

#[derive(Debug, Clone)]
struct Grid(Vec<f64>);

fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("grid must be lo:hi:n".into());
    }
    let lo: f64 = parts[0].parse().map_err(|_| "bad grid start")?;
    let hi: f64 = parts[1].parse().map_err(|_| "bad grid end")?;
    let n: usize = parts[2].parse().map_err(|_| "bad grid count")?;
    if n == 0 {
        return Err("grid needs at least one point".into());
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err("grid endpoints must be finite".into());
    }
    let pts = if n == 1 {
        vec![lo]
    } else {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    };
    Ok(Grid(pts))
}

/// Config file mirroring the global flags.
#[derive(Debug, Deserialize, Default)]
struct Config {
    schema: Option<String>,
    tol: Option<f64>,
    quad_tol: Option<f64>,
    json: Option<bool>,
}

struct Settings {
    roots: RootFindSettings,
    quad: QuadratureSettings,
    json: bool,
}

fn resolve_settings(cli: &Cli) -> Result<Settings> {
    let mut cfg = Config::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        cfg = serde_json::from_str(&text)
            .map_err(|e| Error::Domain(format!("config parse error: {e}")))?;
        match cfg.schema.as_deref() {
            Some("cmc-tubes/1") => {}
            Some(other) => {
                return Err(Error::Domain(format!(
                    "unsupported config schema {other:?} (expected \"cmc-tubes/1\")"
                )))
            }
            None => {
                return Err(Error::Domain(
                    "config file is missing the \"schema\" field".into(),
                ))
            }
        }
    }
    let tol = cli.tol.or(cfg.tol).unwrap_or(1e-13);
    let quad_tol = cli.quad_tol.or(cfg.quad_tol).unwrap_or(1e-10);
    let roots = RootFindSettings {
        tol,
        ..Default::default()
    }
    .validated()?;
    let quad = QuadratureSettings {
        abs_tol: quad_tol,
        rel_tol: quad_tol,
        ..Default::default()
    }
    .validated()?;
    Ok(Settings {
        roots,
        quad,
        json: cli.json || cfg.json.unwrap_or(false),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    if let Ok(threads) = std::env::var("CMC_TUBES_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numeric() || matches!(e, Error::Io { .. }) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn write_text(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        }),
        None => {
            print!("{text}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let s = resolve_settings(cli)?;
    match &cli.cmd {
        Cmd::X0 => {
            let x0 = solve_x0();
            if s.json {
                println!("{}", serde_json::json!({ "x0": x0 }));
            } else {
                println!("{x0:.12}");
            }
            Ok(())
        }
        Cmd::Classify { space, a, h, j } => {
            let sp = AmbientSpace::new(space.kappa, space.tau)?;
            let pitch = Pitch::new(*a)?;
            let class = classify(&sp, pitch, *h, *j, 1e-9, &s.quad)?;
            if s.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "space": sp, "pitch": a, "H": h, "J": j,
                        "class": class.as_str(),
                    })
                );
            } else {
                println!("{class}");
            }
            Ok(())
        }
        Cmd::Tube { space, a, h, scan } => {
            let sp = AmbientSpace::new(space.kappa, space.tau)?;
            let pitch = Pitch::new(*a)?;
            let mut roots = s.roots;
            if let Some(n) = scan {
                if *n < 8 {
                    return Err(Error::Domain("--scan must be >= 8".into()));
                }
                roots.scan_points = *n;
            }
            let sol = tube_energy(&sp, pitch, *h, &roots, &s.quad)?;
            println!("{}", tube_json(&sp, &sol));
            Ok(())
        }
        Cmd::H0 { space, a_grid, out } => {
            let sp = AmbientSpace::new(space.kappa, space.tau)?;
            let text = h0_csv(&sp, &a_grid.0, &s.roots, &s.quad);
            write_text(out, &text)
        }
        Cmd::Family {
            space,
            a,
            h_grid,
            out,
        } => {
            let sp = AmbientSpace::new(space.kappa, space.tau)?;
            let pitch = Pitch::new(*a)?;
            let report = tube_family(&sp, pitch, &h_grid.0, &s.roots, &s.quad);
            write_text(out, &family_csv(&report))
        }
        Cmd::Embed { space, a, m, h } => {
            let sp = AmbientSpace::new(space.kappa, space.tau)?;
            let record = match (a, m) {
                (Some(a), None) => {
                    let pitch = Pitch::new(*a)?;
                    let tube = tube_energy(&sp, pitch, *h, &s.roots, &s.quad)?;
                    let verdict = embedded_noncompact(&sp, pitch, &tube);
                    DecisionRecord::embedding_noncompact(&sp, pitch, &tube, verdict)
                }
                (None, Some(m)) => {
                    let pitch = sp.berger_pitch(1, *m)?.pitch;
                    let tube = tube_energy(&sp, pitch, *h, &s.roots, &s.quad)?;
                    let diag = embedded_berger(&sp, *m, &tube)?;
                    DecisionRecord::embedding_berger(&sp, &diag)
                }
                _ => {
                    return Err(Error::Domain(
                        "embed needs exactly one of --a or --m".into(),
                    ))
                }
            };
            println!(
                "{}",
                serde_json::to_string(&record).expect("serializable record")
            );
            Ok(())
        }
        Cmd::Foliation { space, a } => {
            let sp = AmbientSpace::new(space.kappa, space.tau)?;
            let pitch = Pitch::new(*a)?;
            let verdict = foliation_decision(&sp, pitch)?;
            let record = DecisionRecord::foliation(&sp, pitch, &verdict);
            println!(
                "{}",
                serde_json::to_string(&record).expect("serializable record")
            );
            Ok(())
        }
        Cmd::Isoprofile {
            space,
            m_list,
            h_grid,
            out,
        } => {
            if m_list.is_empty() {
                return Err(Error::Domain("--m-list must not be empty".into()));
            }
            let sp = AmbientSpace::new(space.kappa, space.tau)?;
            let rows = profile_sweep(&sp, m_list, &h_grid.0, &s.roots, &s.quad)?;
            let mut buf = Vec::new();
            write_sweep_csv(&rows, &mut buf).expect("in-memory write");
            write_text(out, &String::from_utf8(buf).expect("ascii csv"))
        }
        Cmd::Mesh {
            space,
            a,
            h,
            out,
            res_sigma,
            res_theta,
            theta_span,
        } => {
            let sp = AmbientSpace::new(space.kappa, space.tau)?;
            let pitch = Pitch::new(*a)?;
            let tube = tube_energy(&sp, pitch, *h, &s.roots, &s.quad)?;
            let span = theta_span.unwrap_or(2.0 * std::f64::consts::PI);
            let grid = sample_surface(&sp, pitch, &tube, *res_sigma, *res_theta, span, &s.quad)?;
            write_obj(&grid, Chart::Cylindrical, out)?;
            eprintln!(
                "wrote {} ({} vertices, J = {:.12e})",
                out.display(),
                res_sigma * res_theta,
                tube.point.j()
            );
            Ok(())
        }
    }
}
