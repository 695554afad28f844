use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use varray_cli::commands::{self, VerifyMode};
use varray_cli::specfile::BuildParams;
use varray_cli::CliError;
use varray_core::{Exec, Poly, SyndromeMode};

#[derive(Parser)]
#[command(
    name = "varray",
    version,
    about = "Binary MDS array codes over cyclic polynomial rings"
)]
struct Cli {
    /// Run stripe batches on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write its spec file.
    Spec(SpecArgs),
    /// Split a file into data and parity shards.
    Encode {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
    },
    /// Rebuild a file from surviving shards.
    Decode {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "shard-dir")]
        shard_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Columns to treat as erased (comma separated); default is autodetect.
        #[arg(long, value_delimiter = ',')]
        missing: Option<Vec<usize>>,
        /// Rewrite the erased shards after decoding.
        #[arg(long)]
        repair: bool,
    },
    /// Check that a spec is MDS.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "conditions")]
        mode: ModeArg,
        /// Pattern limit for exhaustive mode (overrides the environment).
        #[arg(long)]
        limit: Option<u128>,
    },
    /// Count syndrome XORs and time encoding.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "fast")]
        mode: SyndromeArg,
        #[arg(long, default_value_t = 16)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the report as JSON to this path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// One of cauchy-vesip, vand-vetbr, vand-vesip4, gen-rdp, br.
    #[arg(long)]
    family: String,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 1)]
    tau: usize,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    n0: Option<usize>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Cauchy row points as hex coefficient integers (comma separated).
    #[arg(long, value_delimiter = ',')]
    a: Vec<String>,
    /// Cauchy column points as hex coefficient integers (comma separated).
    #[arg(long, value_delimiter = ',')]
    b: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Conditions,
}

#[derive(Clone, Copy, ValueEnum)]
enum SyndromeArg {
    Naive,
    Fast,
}

fn parse_points(v: &[String]) -> Result<Vec<Poly>, CliError> {
    v.iter()
        .map(|s| Poly::from_hex(s).map_err(CliError::from))
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    match cli.command {
        Command::Spec(a) => {
            let bp = BuildParams {
                family: a.family,
                p: a.p,
                tau: a.tau,
                r: a.r,
                n0: a.n0,
                n1: a.n1,
                n: a.n,
                a: parse_points(&a.a)?,
                b: parse_points(&a.b)?,
            };
            println!("{}", commands::cmd_spec(&bp, a.out.as_deref())?);
        }
        Command::Encode {
            spec,
            input,
            out_dir,
        } => {
            let s = commands::cmd_encode(&spec, &input, &out_dir, exec)?;
            println!(
                "encoded {} bytes into {} stripes, wrote {} shards to {}",
                s.payload_len,
                s.stripes,
                s.shards,
                out_dir.display()
            );
        }
        Command::Decode {
            spec,
            shard_dir,
            out,
            missing,
            repair,
        } => {
            let s =
                commands::cmd_decode(&spec, &shard_dir, &out, missing.as_deref(), repair, exec)?;
            for (j, why) in &s.rejected {
                eprintln!("warning: shard {j} rejected: {why}");
            }
            println!(
                "decoded {} bytes to {} (erased columns {:?})",
                s.payload_len,
                out.display(),
                s.missing
            );
            if !s.repaired.is_empty() {
                println!("repaired shards {:?}", s.repaired);
            }
        }
        Command::Verify { spec, mode, limit } => {
            let limit = match limit {
                Some(l) => l,
                None => commands::exhaustive_limit_from_env()?,
            };
            let mode = match mode {
                ModeArg::Exhaustive => VerifyMode::Exhaustive,
                ModeArg::Conditions => VerifyMode::Conditions,
            };
            println!("{}", commands::cmd_verify(&spec, mode, limit, exec)?);
        }
        Command::Bench {
            spec,
            mode,
            trials,
            seed,
            report,
        } => {
            let mode = match mode {
                SyndromeArg::Naive => SyndromeMode::Naive,
                SyndromeArg::Fast => SyndromeMode::Fast,
            };
            let rep = commands::cmd_bench(&spec, mode, trials, seed, report.as_deref(), exec)?;
            println!(
                "{} p={} tau={} r={} n={} mode={}",
                rep.family, rep.p, rep.tau, rep.r, rep.n, rep.mode
            );
            for (phase, n) in &rep.xors_by_phase {
                if *n > 0 {
                    println!("  {phase:<14} {n}");
                }
            }
            println!(
                "  total          {} over {} data bits",
                rep.total_xors, rep.data_bits
            );
            println!(
                "  xors/data bit  {:.4} (naive {:.4})",
                rep.xors_per_data_bit, rep.naive_xors_per_data_bit
            );
            if let Some(t) = rep.theoretical_xors_per_data_bit {
                println!("  asymptotic     {t}");
            }
            for b in &rep.baselines {
                println!(
                    "  baseline {:<8} p={} r={}: {:.4} xors/data bit (asymptotic {})",
                    b.code, b.p, b.r, b.xors_per_data_bit, b.asymptotic
                );
            }
            println!("  encode         {:.1} MiB/s", rep.encode_mib_per_second);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
