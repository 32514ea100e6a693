//! Command pipeline: diagonalize → classify → simulate / compare / grid.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use trimer_core::dynrep::{evaluate_dynrep, label_counts};
use trimer_core::io::csv::{classification_csv, density_csv, families_csv, fmt_g12, trajectory_csv};
use trimer_core::io::{load_cache, parse_config, parse_state_spec, save_cache, RunConfig};
use trimer_core::session::{solve, Session};
use trimer_core::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "trimer", version, about = "Three-well Bose-Hubbard eigenstate analysis")]
pub struct Cli {
    /// key = value configuration file; defaults apply to missing keys
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diagonalize the Hamiltonian and write the eigendata cache
    Diagonalize,
    /// Classify all eigenstates and write classification and family CSVs
    Classify,
    /// Write the particle-number trajectory of a superposition
    Simulate {
        /// State spec, e.g. "C:0,3 + C:0,4" or "#5"
        #[arg(long)]
        state: String,
        /// Duration in units of T = 2π/Δ
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Output file (default: <out_dir>/trajectory.csv)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print exact matrix elements and offsets next to the idealized predictions
    Compare {
        #[arg(long)]
        state: String,
    },
    /// Write the chart density of one eigenstate
    Grid {
        #[arg(long)]
        index: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Exit code for an error category.
pub fn exit_code(err: &Error) -> i32 {
    match err.category() {
        "parameter" | "argument" | "parse" => 2,
        "cache" => 3,
        "resolve" => 4,
        _ => 1,
    }
}

pub fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", p.display())))?;
            parse_config(&text)
        }
        None => Ok(RunConfig::default()),
    }
}

/// Runs one command; human-readable output goes to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    fs::create_dir_all(&cfg.out_dir)?;
    fs::write(cfg.out_dir.join("config.resolved"), cfg.to_text())?;

    match &cli.command {
        Command::Diagonalize => {
            let eig = solve(&cfg.params, cfg.tol)?;
            save_cache(&cfg.cache_path, &cfg.params, &eig)?;
            writeln!(
                out,
                "{} eigenstates, max residual {:e}; cache written to {}",
                eig.len(),
                eig.max_residual,
                cfg.cache_path.display()
            )?;
        }
        Command::Classify => {
            let s = session(&cfg)?;
            let cpath = cfg.out_dir.join("classification.csv");
            let fpath = cfg.out_dir.join("families.csv");
            fs::write(&cpath, classification_csv(&s.classes))?;
            fs::write(&fpath, families_csv(&s.families))?;
            let counts: Vec<String> = label_counts(&s.classes).iter().map(|(l, n)| format!("{l}={n}")).collect();
            writeln!(out, "{}", counts.join(" "))?;
            writeln!(out, "{} families; wrote {} and {}", s.families.len(), cpath.display(), fpath.display())?;
        }
        Command::Simulate { state, tmax, samples, output } => {
            let s = session(&cfg)?;
            let spec = parse_state_spec(state)?;
            let sp = s.resolve(&spec)?;
            let traj = s.trajectory(&sp, tmax.unwrap_or(cfg.t_max), samples.unwrap_or(cfg.samples))?;
            let path = output.clone().unwrap_or_else(|| cfg.out_dir.join("trajectory.csv"));
            fs::write(&path, trajectory_csv(&traj))?;
            writeln!(
                out,
                "states {} and {}, beat frequency {}; wrote {}",
                sp.a,
                sp.b,
                fmt_g12(traj.beat_frequency),
                path.display()
            )?;
        }
        Command::Compare { state } => {
            let s = session(&cfg)?;
            let spec = parse_state_spec(state)?;
            let sp = s.resolve(&spec)?;
            out.write_all(compare_report(&s, &sp)?.as_bytes())?;
        }
        Command::Grid { index, output } => {
            let eig = load_cache(&cfg.cache_path, &cfg.params)?;
            if *index >= eig.len() {
                return Err(Error::InvalidArgument(format!("index {index} out of range (0..{})", eig.len())));
            }
            let basis = trimer_core::model::FockBasis::enumerate(cfg.params.n_particles)?;
            let field = evaluate_dynrep(&basis, eig.vector(*index), cfg.grid()?)?;
            let path = output.clone().unwrap_or_else(|| cfg.out_dir.join(format!("density_{index}.csv")));
            fs::write(&path, density_csv(&field.density()))?;
            writeln!(out, "wrote {}", path.display())?;
        }
    }
    Ok(())
}

fn session(cfg: &RunConfig) -> Result<Session> {
    let eig = load_cache(&cfg.cache_path, &cfg.params)?;
    Session::new(cfg.params, eig, cfg.grid()?, cfg.thresholds)
}

fn compare_report(s: &Session, sp: &trimer_core::dynamics::SuperpositionSpec) -> Result<String> {
    let cmp = s.compare(sp)?;
    let mut r = String::new();
    let (ca, cb) = (&s.classes[sp.a], &s.classes[sp.b]);
    let _ = writeln!(r, "state a: #{} {} {:?}", sp.a, ca.label, ca.qn);
    let _ = writeln!(r, "state b: #{} {} {:?}", sp.b, cb.label, cb.qn);
    let _ = writeln!(r, "beat frequency: {}", fmt_g12(s.eig.energies[sp.a] - s.eig.energies[sp.b]));
    match (&cmp.family, &cmp.fit) {
        (Some(k), Some(f)) => {
            let _ = writeln!(r, "family: {k}, m_eff = {}, omega = {}", fmt_g12(f.m_eff), fmt_g12(f.omega));
        }
        _ => {
            let _ = writeln!(r, "no analytic prediction: {}", cmp.note.as_deref().unwrap_or("unknown"));
        }
    }
    let na = || "n/a".to_string();
    let pct = |x: Option<f64>| x.map_or_else(na, |v| format!("{:+.1}%", 100.0 * v));
    let _ = writeln!(r, "site,exact_element,exact_amplitude,analytic_amplitude,amplitude_rel_error,exact_offset,analytic_offset,offset_rel_error");
    for c in &cmp.sites {
        let _ = writeln!(
            r,
            "{},{},{},{},{},{},{},{}",
            c.site,
            fmt_g12(c.exact_element),
            fmt_g12(c.exact_amplitude),
            c.analytic_amplitude.map_or_else(na, fmt_g12),
            pct(c.amplitude_rel_error()),
            fmt_g12(c.exact_offset),
            c.analytic_offset.map_or_else(na, fmt_g12),
            pct(c.offset_rel_error()),
        );
    }
    Ok(r)
}
