use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use fvs_kernel::generate::{flower, grid, planted_fvs, random_multigraph};
use fvs_kernel::oracle::{brute_fvs, OracleError};
use fvs_kernel::{
    doubled_to_fraction, explicit_packing, kernelize, min_cycle_cover, CoverError, CoverOutcome,
    KernelError, MultiGraph, Verdict, VertexId,
};
use thiserror::Error;

use crate::format::{emit, parse, ParseError};

#[derive(Debug, Parser)]
#[command(
    name = "fvs-kernel",
    version,
    about = "Feedback vertex set kernelization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce an instance to an equivalent small one.
    Kernelize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        output: PathBuf,
        /// Print loop statistics to stdout.
        #[arg(long)]
        stats: bool,
    },
    /// Half-integral minimum s-cycle cover with its packing certificate.
    Cover {
        #[arg(long)]
        input: PathBuf,
        /// 1-based source vertex.
        #[arg(long)]
        source: u32,
        /// Stop once the packing exceeds this size.
        #[arg(long)]
        budget: Option<u32>,
    },
    /// Exact feedback vertex set by exhaustive search (small inputs only).
    SolveBrute {
        #[arg(long)]
        input: PathBuf,
    },
    /// Generate a deterministic instance.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        petals: Option<usize>,
        #[arg(long, default_value_t = 3)]
        petal_len: usize,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        /// Defaults to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    PlantedFvs,
    RandomMultigraph,
    Flower,
    Grid,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("input rejected: {0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

fn read_graph(path: &Path) -> Result<MultiGraph, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    parse(&text)
        .map(|i| i.graph)
        .map_err(|source| CliError::Parse {
            path: path.into(),
            source,
        })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Kernelize {
            input,
            k,
            output,
            stats,
        } => run_kernelize(&input, k, &output, stats, out),
        Command::Cover {
            input,
            source,
            budget,
        } => run_cover(&input, source, budget, out),
        Command::SolveBrute { input } => run_solve_brute(&input, out),
        Command::Gen {
            family,
            seed,
            n,
            m,
            k,
            petals,
            petal_len,
            rows,
            cols,
            output,
        } => {
            let need = |v: Option<usize>, name: &str| {
                v.ok_or_else(|| CliError::Usage(format!("--{name} is required for {family:?}")))
            };
            let (g, params) = match family {
                Family::PlantedFvs => {
                    let (n, k, m) = (need(n, "n")?, need(k, "k")?, need(m, "m")?);
                    if k > n {
                        return Err(CliError::Usage("--k exceeds --n".into()));
                    }
                    (planted_fvs(n, k, m, seed), format!("n={n} k={k} m={m}"))
                }
                Family::RandomMultigraph => {
                    let (n, m) = (need(n, "n")?, need(m, "m")?);
                    if n == 0 && m > 0 {
                        return Err(CliError::Usage("edges need at least one vertex".into()));
                    }
                    (random_multigraph(n, m, seed), format!("n={n} m={m}"))
                }
                Family::Flower => {
                    let petals = need(petals, "petals")?;
                    if petal_len < 2 {
                        return Err(CliError::Usage("--petal-len must be at least 2".into()));
                    }
                    (
                        flower(petals, petal_len),
                        format!("petals={petals} petal_len={petal_len}"),
                    )
                }
                Family::Grid => {
                    let (r, c) = (need(rows, "rows")?, need(cols, "cols")?);
                    (grid(r, c), format!("rows={r} cols={c}"))
                }
            };
            let name = family
                .to_possible_value()
                .map(|v| v.get_name().to_string())
                .unwrap_or_default();
            let (text, _) = emit(&g, &[format!("gen {name} seed={seed} {params}")]);
            match output {
                Some(path) => write_file(&path, &text),
                None => out.write_all(text.as_bytes()).map_err(stdout_err),
            }
        }
    }
}

fn run_kernelize(
    input: &Path,
    k: u32,
    output: &Path,
    stats: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let g = read_graph(input)?;
    let outcome = kernelize(&g, k as i64).map_err(|e| match e {
        KernelError::NegativeParameter(_) => CliError::Usage(e.to_string()),
        other => CliError::Internal(other.to_string()),
    })?;
    let text = match &outcome.verdict {
        Verdict::Reduced { graph, k_prime } => {
            let mut comments = vec!["verdict reduced".to_string(), format!("kprime {k_prime}")];
            comments.extend(forced_lines(&outcome.log.forced));
            comments.push(format!("iterations {}", outcome.stats.iterations));
            let (dense, old_of_new) = graph.compacted();
            comments.extend(
                old_of_new
                    .iter()
                    .enumerate()
                    .map(|(i, v)| format!("vertex {} {}", i + 1, v.0 + 1)),
            );
            emit(&dense, &comments).0
        }
        Verdict::TriviallyNo => {
            let mut triangle = MultiGraph::with_vertices(3);
            for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                triangle
                    .add_edge(VertexId(a), VertexId(b))
                    .expect("in range");
            }
            let comments = [
                "verdict no".to_string(),
                "kprime 0".to_string(),
                format!("iterations {}", outcome.stats.iterations),
            ];
            emit(&triangle, &comments).0
        }
    };
    write_file(output, &text)?;
    if stats {
        let s = &outcome.stats;
        writeln!(
            out,
            "iterations {}\ncovers {}\ns_removals {}\nheavy_removals {}\nreductions {}\naugmentations {}\nforced {}",
            s.iterations,
            s.covers_computed,
            s.s_removals,
            s.heavy_removals,
            s.reductions_applied,
            s.augmentations,
            outcome.log.forced.len()
        )
        .map_err(stdout_err)?;
    }
    Ok(())
}

fn forced_lines(forced: &[VertexId]) -> impl Iterator<Item = String> + '_ {
    forced.iter().map(|v| format!("forced {}", v.0 + 1))
}

fn run_cover(
    input: &Path,
    source: u32,
    budget: Option<u32>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let g = read_graph(input)?;
    if source == 0 || source as usize > g.vertex_count() {
        return Err(CliError::Usage(format!(
            "--source {source} outside 1..={}",
            g.vertex_count()
        )));
    }
    let s = VertexId(source - 1);
    let budget_doubled = budget.map_or(usize::MAX, |k| 2 * k as usize);
    let outcome = min_cycle_cover(&g, s, budget_doubled).map_err(|e| match e {
        CoverError::SelfLoop(v) => CliError::Input(format!("self-loop at vertex {}", v.0 + 1)),
        other => CliError::Internal(other.to_string()),
    })?;
    let mut report = String::new();
    match &outcome {
        CoverOutcome::ExceedsBudget { packing, .. } => {
            report.push_str("EXCEEDS_BUDGET\n");
            report.push_str(&format!(
                "packing_weight {}\n",
                doubled_to_fraction(packing.size_doubled())
            ));
        }
        CoverOutcome::Cover { cover, packing, .. } => {
            let cert =
                explicit_packing(&g, packing).map_err(|e| CliError::Internal(e.to_string()))?;
            if cert.weight_doubled() != cover.size_doubled() {
                return Err(CliError::Internal(format!(
                    "certificate weight {} differs from cover size {}",
                    cert.weight_doubled(),
                    cover.size_doubled()
                )));
            }
            report.push_str(&format!(
                "size {}\n",
                doubled_to_fraction(cover.size_doubled())
            ));
            report.push_str(&format!("size_doubled {}\n", cover.size_doubled()));
            for (v, val) in cover.nonzero() {
                report.push_str(&format!(
                    "x({})={} doubled {}\n",
                    v.0 + 1,
                    val,
                    val.doubled()
                ));
            }
            report.push_str(&format!(
                "packing_weight {}\npacking_cycles {}\n",
                doubled_to_fraction(cert.weight_doubled()),
                cert.cycles.len()
            ));
        }
    }
    report.push_str(&format!("augmentations {}\n", outcome.augmentations()));
    out.write_all(report.as_bytes()).map_err(stdout_err)
}

fn run_solve_brute(input: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let g = read_graph(input)?;
    let res = brute_fvs(&g).map_err(|e| match e {
        OracleError::TooLarge { .. } => CliError::Usage(e.to_string()),
        other => CliError::Internal(other.to_string()),
    })?;
    let witness: Vec<String> = res.witness.iter().map(|v| (v.0 + 1).to_string()).collect();
    writeln!(out, "fvs {}\nwitness {}", res.size, witness.join(" ")).map_err(stdout_err)
}
