use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use escim::report::{render_corpus_text, render_text, CorpusReport, Emit, FileReport};
use escim::weyuker::{generate_source, run_matrix, GeneratorConfig, Sample};
use escim::{analyze_source, SiMode, WeightTable};

#[derive(Parser)]
#[command(
    name = "escim",
    version,
    about = "Scope-aware cognitive complexity for MiniC programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Delta,
    Minmax,
    Absolute,
}

impl From<Mode> for SiMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Delta => SiMode::Delta,
            Mode::Minmax => SiMode::MinMax,
            Mode::Absolute => SiMode::Absolute,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Measure one or more programs.
    Analyze {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long = "si-mode", value_enum, default_value = "delta")]
        si_mode: Mode,
        /// JSON weight table; missing kinds keep their defaults.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Comma-separated sections: metrics, erm, ledger, granules.
        #[arg(long, default_value = "metrics,granules")]
        emit: String,
        /// Treat paths as directories and analyze every `.mc` file below them.
        #[arg(long)]
        corpus: bool,
    },
    /// Check the Weyuker properties on the bundled corpus plus generated programs.
    Weyuker {
        /// Extra programs to add to the sample.
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Check one mode only (default: all three).
        #[arg(long = "si-mode", value_enum)]
        si_mode: Option<Mode>,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of generated programs.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Leave the bundled corpus out of the sample.
        #[arg(long = "no-corpus")]
        no_corpus: bool,
    },
    /// Print random, valid MiniC programs.
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long = "max-depth", default_value_t = 4)]
        max_depth: usize,
        #[arg(long = "max-stmts", default_value_t = 30)]
        max_stmts: usize,
    },
}

fn load_weights(path: Option<&Path>) -> Result<WeightTable> {
    match path {
        Some(p) => Ok(WeightTable::load(p)?),
        None => Ok(WeightTable::default()),
    }
}

fn collect_mc(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    if dir.is_file() {
        out.push(dir.to_path_buf());
        return Ok(());
    }
    let entries = std::fs::read_dir(dir).with_context(|| format!("cannot read {}", dir.display()))?;
    for e in entries {
        let p = e?.path();
        if p.is_dir() {
            collect_mc(&p, out)?;
        } else if p.extension().is_some_and(|x| x == "mc") {
            out.push(p);
        }
    }
    Ok(())
}

fn analyze_file(path: &Path, mode: SiMode, weights: &WeightTable, emit: Emit) -> Result<FileReport> {
    let source = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let name = path.display().to_string();
    Ok(match analyze_source(&name, &source, mode, weights) {
        Ok(a) => FileReport::from_analysis(&a, emit.ledger),
        Err(e) => FileReport::from_error(&name, mode, &e),
    })
}

fn json(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn run(cli: Cli) -> Result<(String, u8)> {
    match cli.command {
        Command::Analyze {
            paths,
            format,
            si_mode,
            weights,
            emit,
            corpus,
        } => {
            let weights = load_weights(weights.as_deref())?;
            let emit = Emit::parse(&emit).map_err(anyhow::Error::msg)?;
            let mode = SiMode::from(si_mode);
            let mut files = Vec::new();
            if corpus {
                for p in &paths {
                    collect_mc(p, &mut files)?;
                }
                files.sort();
            } else {
                files = paths;
            }
            let reports = files
                .iter()
                .map(|f| analyze_file(f, mode, &weights, emit))
                .collect::<Result<Vec<_>>>()?;
            let status = if reports.iter().all(FileReport::is_ok) { 0 } else { 1 };
            let out = if corpus {
                let c = CorpusReport::new(reports);
                match format {
                    Format::Json => json(&c)?,
                    Format::Text => render_corpus_text(&c, emit),
                }
            } else {
                match (format, reports.as_slice()) {
                    (Format::Json, [one]) => json(one)?,
                    (Format::Json, many) => json(&many)?,
                    (Format::Text, many) => many.iter().map(|r| render_text(r, emit)).collect(),
                }
            };
            Ok((out, status))
        }
        Command::Weyuker {
            paths,
            format,
            si_mode,
            weights,
            seed,
            samples,
            no_corpus,
        } => {
            let weights = load_weights(weights.as_deref())?;
            let mut sample = Sample::build(!no_corpus, seed, samples, &weights);
            for p in &paths {
                let source = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
                sample
                    .add_source(&p.display().to_string(), &source)
                    .map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))?;
            }
            let modes: Vec<SiMode> = match si_mode {
                Some(m) => vec![m.into()],
                None => SiMode::ALL.to_vec(),
            };
            let table = run_matrix(&sample, &modes, !no_corpus);
            let out = match format {
                Format::Json => json(&table)?,
                Format::Text => table.render_text(),
            };
            Ok((out, 0))
        }
        Command::Generate {
            seed,
            count,
            max_depth,
            max_stmts,
        } => {
            let cfg = GeneratorConfig { max_depth, max_stmts };
            let mut out = String::new();
            for k in 0..count {
                if count > 1 {
                    out.push_str(&format!("// seed {}\n", seed + k));
                }
                out.push_str(&generate_source(seed + k, cfg));
            }
            Ok((out, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, status)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(status)
        }
        Err(e) => {
            eprintln!("escim: {e:#}");
            ExitCode::from(2)
        }
    }
}
