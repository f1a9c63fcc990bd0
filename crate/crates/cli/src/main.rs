mod suite;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use monopart::generate::{gen_coloring, GenMode};
use monopart::io::{read_certificate, read_coloring, write_certificate, write_coloring};
use monopart::oracle::min_partition_exact;
use monopart::pipeline::{partition_bipartite_with_stats, partition_with_stats};
use monopart::{ColoredCompleteGraph, Error, GraphFamily, Partial, PipelineParams, TheoreticalParams};

const EXIT_REJECT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "monopart", version, about = "Monochromatic partitions of 2-edge-colored complete graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Random,
    Split,
    Adversarial,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a coloring.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "random")]
        mode: Mode,
        /// Red probability (random mode).
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Size of the first class (split mode); defaults to n/2.
        #[arg(long)]
        s: Option<usize>,
        /// Family whose member is the avoided pattern (adversarial mode).
        #[arg(long, default_value = "cycles")]
        pattern: String,
        /// Pattern size (adversarial mode).
        #[arg(long, default_value_t = 4)]
        pattern_n: usize,
        /// Edge-flip proposals (adversarial mode).
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition a coloring into monochromatic copies.
    Partition {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        family1: String,
        /// Blue family; defaults to the red one.
        #[arg(long)]
        family2: Option<String>,
        /// Use the doubled-family route (family1 must be bipartite).
        #[arg(long)]
        bipartite: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum number of pieces.
        #[arg(long, default_value_t = 4096)]
        budget: usize,
        /// Wall-clock limit in seconds for the searches.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        cert_out: Option<PathBuf>,
        /// Print the proof's parameter formulas for this Δ and enforce the
        /// cylinder step's size hypothesis.
        #[arg(long)]
        theoretical: bool,
    },
    /// Check a certificate against a coloring.
    Verify {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        family1: String,
        #[arg(long)]
        family2: Option<String>,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Exact minimum partition (at most 12 vertices).
    Oracle {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        family1: String,
        #[arg(long)]
        family2: Option<String>,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Run a fixed instance suite and print one tab-separated line per run.
    Bench {
        #[arg(long, value_enum, default_value = "smoke")]
        suite: suite::Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_to_string(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_coloring(path: &Path) -> anyhow::Result<ColoredCompleteGraph> {
    read_coloring(&read_to_string(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn families(f1: &str, f2: Option<&str>) -> anyhow::Result<(GraphFamily, GraphFamily)> {
    let a = GraphFamily::parse(f1)?;
    let b = match f2 {
        Some(s) => GraphFamily::parse(s)?,
        None => a.clone(),
    };
    Ok((a, b))
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Gen {
            n,
            mode,
            p,
            s,
            pattern,
            pattern_n,
            budget,
            seed,
            out,
        } => {
            let mode = match mode {
                Mode::Random => GenMode::Random { p },
                Mode::Split => GenMode::BipartiteSplit { s: s.unwrap_or(n / 2) },
                Mode::Adversarial => GenMode::Adversarial {
                    pattern: GraphFamily::parse(&pattern)?.member(pattern_n)?,
                    budget,
                },
            };
            let generated = gen_coloring(n, &mode, seed)?;
            if let Some(r) = generated.residual {
                eprintln!("residual monochromatic copies: {r}");
            }
            emit(&write_coloring(&generated.coloring), out.as_deref())?;
            Ok(0)
        }
        Command::Partition {
            coloring,
            family1,
            family2,
            bipartite,
            seed,
            budget,
            time_limit,
            cert_out,
            theoretical,
        } => {
            let g = load_coloring(&coloring)?;
            let (f1, f2) = families(&family1, family2.as_deref())?;
            if theoretical {
                let t = TheoreticalParams::for_max_degree(f1.max_degree().max(f2.max_degree()));
                eprintln!("{t}");
                eprintln!("(formulas only; the run uses the practical parameters)");
            }
            if budget == 0 {
                bail!("--budget must be positive");
            }
            let params = PipelineParams {
                seed,
                piece_budget: budget,
                time_limit: time_limit.map(Duration::from_secs_f64),
                theoretical_mode: theoretical,
                ..PipelineParams::default()
            };
            let result = if bipartite {
                if family2.as_deref().is_some_and(|f| f != family1) {
                    bail!("--bipartite uses one family for both colors");
                }
                if !f1.is_bipartite() {
                    bail!("--bipartite needs a bipartite family, `{}` is not", f1.name());
                }
                partition_bipartite_with_stats(&g, &f1, &params)
            } else {
                partition_with_stats(&g, &f1, &f2, &params)
            };
            match result {
                Ok(out) => {
                    eprintln!("pieces: {}", out.certificate.len());
                    eprintln!("{:?}", out.stats);
                    emit(&write_certificate(&out.certificate), cert_out.as_deref())?;
                    Ok(0)
                }
                Err(Error::Budget { reason, partial }) => {
                    eprintln!("budget exhausted: {reason}");
                    if let (Partial::Certificate(c), Some(path)) = (*partial, cert_out.as_deref()) {
                        emit(&write_certificate(&c), Some(path))?;
                        eprintln!("partial certificate ({} pieces) written to {}", c.len(), path.display());
                    }
                    Ok(EXIT_BUDGET)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify {
            coloring,
            family1,
            family2,
            cert,
        } => {
            let g = load_coloring(&coloring)?;
            let (f1, f2) = families(&family1, family2.as_deref())?;
            let cert = read_certificate(&read_to_string(&cert)?).with_context(|| format!("parsing {}", cert.display()))?;
            let report = monopart::verify_certificate(&g, &f1, &f2, &cert);
            if report.accepted() {
                println!("accept: {} pieces", cert.len());
                Ok(0)
            } else {
                println!("reject: {} violations", report.violations.len());
                for v in &report.violations {
                    println!("  {v}");
                }
                Ok(EXIT_REJECT)
            }
        }
        Command::Oracle {
            coloring,
            family1,
            family2,
            cert_out,
        } => {
            let g = load_coloring(&coloring)?;
            let (f1, f2) = families(&family1, family2.as_deref())?;
            let (count, cert) = min_partition_exact(&g, &f1, &f2)?;
            println!("minimum pieces: {count}");
            if let Some(p) = cert_out {
                emit(&write_certificate(&cert), Some(&p))?;
            }
            Ok(0)
        }
        Command::Bench { suite, seed } => {
            let mut rejected = false;
            for row in suite::run(suite, seed)? {
                println!("{row}");
                rejected |= !row.verified;
            }
            Ok(if rejected { EXIT_REJECT } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
