use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use shrinklab::decomposition::check_usc;
use shrinklab::scene::{parse_scene_with, run_sequence, run_shrink_with, RunOptions};
use shrinklab::shrink::ShrinkOptions;
use shrinklab::{Exec, LoadedScene, Point2, QuotientGraph, Result};

#[derive(Parser)]
#[command(name = "shrinklab", version, about = "Build and certify shrinking homeomorphisms for planar scenes")]
struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shrink every element below epsilon and certify the result.
    Shrink {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        epsilon: f64,
        /// Number of SVG frames interpolating identity to the final map.
        #[arg(long, default_value_t = 0)]
        frames: usize,
        #[arg(long, default_value = "frames")]
        out: PathBuf,
        /// Write the TOML report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also run the approximating sequence for n = 1..=NMAX.
        #[arg(long, value_name = "NMAX")]
        sequence: Option<usize>,
        /// Record wall time in the report.
        #[arg(long)]
        timing: bool,
        /// Skip the inner filtration levels (negative control).
        #[arg(long, hide = true)]
        skip_inner: bool,
    },
    /// Load a scene and certify its invariants, nullity and upper semi-continuity.
    Check {
        #[arg(long)]
        scene: PathBuf,
    },
    /// Quotient distance between the classes of two points.
    QuotientDist {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: Point2,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: Point2,
    },
    /// Dump the contracted quotient graph as "u v w" lines.
    ExportGraph {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_point(s: &str) -> std::result::Result<Point2, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected X,Y, got {s:?}"))?;
    let x: f64 = x.trim().parse().map_err(|e| format!("{x:?}: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("{y:?}: {e}"))?;
    Ok(Point2::new(x, y))
}

fn load(exec: Exec, path: &Path) -> Result<LoadedScene> {
    let text = fs::read_to_string(path)?;
    parse_scene_with(exec, &text)
}

fn run(cli: Cli) -> Result<bool> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match cli.command {
        Command::Shrink { scene, epsilon, frames, out, report, sequence, timing, skip_inner } => {
            let loaded = load(exec, &scene)?;
            let shrink = ShrinkOptions { exec, skip_inner };
            let outcome = run_shrink_with(&loaded, epsilon, RunOptions { shrink, frames, timing })?;
            let mut text = outcome.report.to_toml();
            let mut pass = outcome.report.pass;
            if let Some(n_max) = sequence {
                let seq = run_sequence(&loaded, n_max, shrink)?;
                pass &= seq.pass;
                text.push('\n');
                text.push_str(&seq.to_toml());
            }
            if !outcome.frames.is_empty() {
                fs::create_dir_all(&out)?;
                for (i, svg) in outcome.frames.iter().enumerate() {
                    fs::write(out.join(format!("frame_{i:03}.svg")), svg)?;
                }
            }
            match report {
                Some(path) => fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(pass)
        }
        Command::Check { scene } => {
            let loaded = load(exec, &scene)?;
            let d = loaded.decomposition.decomposition()?;
            let usc = check_usc(&d);
            println!("scene = {:?}", loaded.name());
            println!("elements = {}", d.elements().len());
            println!("filtration_length = {}", loaded.decomposition.filtration_length());
            println!("scene_points = {}", loaded.scene.sample.len());
            for (t, c) in usc.null.thresholds.iter().zip(&usc.null.counts) {
                println!("count_above {t:.6e} = {c}");
            }
            println!("null = {}", usc.null.verdict);
            println!("compact = {}", usc.compact);
            println!("usc = {}", usc.pass);
            Ok(usc.pass)
        }
        Command::QuotientDist { scene, from, to } => {
            let loaded = load(exec, &scene)?;
            let d = loaded.decomposition.decomposition()?;
            let graph = QuotientGraph::new(&loaded.scene, &d);
            let a = graph.project(from)?;
            let b = graph.project(to)?;
            let dist = graph.distance(a, b);
            println!("{dist:.17e}");
            Ok(dist.is_finite())
        }
        Command::ExportGraph { scene, out } => {
            let loaded = load(exec, &scene)?;
            let d = loaded.decomposition.decomposition()?;
            let graph = QuotientGraph::new(&loaded.scene, &d);
            match out {
                Some(path) => graph.export_edges(std::io::BufWriter::new(fs::File::create(path)?))?,
                None => graph.export_edges(std::io::stdout().lock())?,
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
