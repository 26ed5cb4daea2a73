//! `mixcodes`: encode, pool, damage and decode sets of strings from the
//! command line.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mixture_codes::bhcode::{verify_bh, Verification};
use mixture_codes::bounds::{summary, EntropyMode};
use mixture_codes::channel::{corrupt, erasure_experiment, CorruptionPattern, ExperimentConfig, Placement};
use mixture_codes::codec::LeadRun;
use mixture_codes::composition::pool;
use mixture_codes::ecc::{Scheme, SchemeConfig};
use mixture_codes::gf2::DEFAULT_BUDGET;
use mixture_codes::oracle::{exhaustive_bh_search, greedy_extend, verify_hmc, HmcVerdict, Readout, SearchMode};
use mixture_codes::pipeline::{CodebookConfig, Decoder, Encoded, Status};
use mixture_codes::{tables, BitString, CompositionMultiset, Error};

#[derive(Parser)]
#[command(name = "mixcodes", version, about = "Codes for pooled prefix and suffix compositions")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest number of subsets or nodes an exhaustive search may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Encode source strings into codewords with their layout.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Source strings, one per line or a JSON array; `-` reads stdin.
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Pool codewords into a composition multiset.
    Pool {
        /// Output of `encode` or bare strings; `-` reads stdin.
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Apply an erasure and substitution pattern to a pool.
    Corrupt {
        /// `{"erase": [...], "subst": [...]}`.
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Decode a pool; exits 3 when several sets explain it.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value = "-")]
        input: String,
        /// Number of pooled strings, when the pool is damaged.
        #[arg(long)]
        hbar: Option<usize>,
        /// Read the pool as complete but with altered compositions.
        #[arg(long)]
        substitution: bool,
    },
    /// Tabulate rate bounds.
    Bounds {
        /// Comma-separated list.
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4, 6, 8])]
        h: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Gaussian)]
        mode: Mode,
    },
    /// Check a set of strings exhaustively.
    Verify {
        /// Strings to check; alternatively `--code`.
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        code: Option<String>,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long, value_enum, default_value_t = Kind::Bh)]
        kind: Kind,
    },
    /// Search for B_h sets of short strings.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long, value_enum, default_value_t = SearchArg::MaxGreedy)]
        mode: SearchArg,
        /// Strings to start the greedy search from.
        #[arg(long)]
        extend: Option<String>,
    },
    /// Seeded erasure trials, one CSV row each.
    Experiment {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 2)]
        hbar: usize,
        /// Compositions removed per trial.
        #[arg(long, default_value_t = 1)]
        erasures: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = PlacementArg::Uniform)]
        placement: PlacementArg,
    },
}

#[derive(Args)]
struct CodeArgs {
    /// Shipped table name, codebook config JSON file, or parity-check matrix file.
    #[arg(long)]
    code: String,
    #[arg(long, default_value_t = 2)]
    h: usize,
    #[arg(long, value_enum)]
    lead: Option<LeadArg>,
    /// Add redundancy against missing compositions.
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long, default_value_t = 1)]
    t: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum LeadArg {
    Strict,
    Ceil,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    OneStep,
    TwoStep,
    Integral,
    Prime,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Gaussian,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Bh,
    Hmc,
    Prefix,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchArg {
    MaxGreedy,
    ExactMax,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlacementArg {
    Uniform,
    Adversarial,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Code(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SearchSpaceTooLarge { .. } => 5,
        Error::AmbiguousSolution(_) => 3,
        Error::DecodeFailure(_)
        | Error::NoSolution
        | Error::TooManyErasures { .. }
        | Error::Conflict { .. }
        | Error::CountMismatch { .. }
        | Error::NegativeIncrement { .. }
        | Error::InconsistentPoolSize { .. } => 4,
        _ => 2,
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }
}

/// A JSON array, or one string per line with `#` comments.
fn parse_strings(text: &str) -> Result<Vec<BitString>, Failure> {
    if text.trim_start().starts_with('[') {
        return Ok(serde_json::from_str(text)?);
    }
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.parse().map_err(Failure::Lib))
        .collect()
}

fn codebook_config(args: &CodeArgs) -> Result<CodebookConfig, Failure> {
    let mut cfg = if tables::by_name(&args.code).is_some() {
        CodebookConfig { h: args.h, table: Some(args.code.clone()), ..Default::default() }
    } else {
        let text = fs::read_to_string(&args.code).map_err(|e| Failure::Usage(format!("{}: {e}", args.code)))?;
        if text.trim_start().starts_with('{') {
            CodebookConfig::from_json(&text)?
        } else {
            CodebookConfig { h: args.h, matrix: Some(text), ..Default::default() }
        }
    };
    if let Some(lead) = args.lead {
        cfg.lead = match lead {
            LeadArg::Strict => LeadRun::Strict,
            LeadArg::Ceil => LeadRun::Ceil,
        };
    }
    if let Some(scheme) = args.scheme {
        let scheme = match scheme {
            SchemeArg::OneStep => Scheme::OneStep,
            SchemeArg::TwoStep => Scheme::TwoStep,
            SchemeArg::Integral => Scheme::Integral,
            SchemeArg::Prime => Scheme::Prime,
        };
        cfg.ecc = Some(SchemeConfig { scheme, t: args.t, code: None, flag_code: None, h: cfg.h, lead: cfg.lead });
    }
    Ok(cfg)
}

fn decoder(args: &CodeArgs) -> Result<Decoder, Failure> {
    Ok(Decoder::from_config(&codebook_config(args)?)?)
}

fn json<T: Serialize>(out: &mut impl Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn csv_rows<T: Serialize>(out: &mut impl Write, rows: &[T]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn md_table(out: &mut impl Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    writeln!(out, "| {} |", header.join(" | "))?;
    writeln!(out, "|{}|", header.iter().map(|_| "---").collect::<Vec<_>>().join("|"))?;
    for r in rows {
        writeln!(out, "| {} |", r.join(" | "))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct PoolRow {
    zeros: usize,
    ones: usize,
    mult: usize,
}

fn emit_pool(out: &mut impl Write, p: &CompositionMultiset, format: Format) -> Result<(), Failure> {
    let rows: Vec<PoolRow> = p.iter().map(|(c, mult)| PoolRow { zeros: c.zeros, ones: c.ones, mult }).collect();
    match format {
        Format::Json => writeln!(out, "{}", p.to_json())?,
        Format::Csv => csv_rows(out, &rows)?,
        Format::Md => {
            let body: Vec<Vec<String>> = p.iter().map(|(c, m)| vec![c.to_string(), m.to_string()]).collect();
            md_table(out, &["composition", "mult"], &body)?;
        }
    }
    Ok(())
}

fn emit_strings(out: &mut impl Write, strings: &[BitString], format: Format) -> Result<(), Failure> {
    match format {
        Format::Json => json(out, &strings),
        _ => {
            for s in strings {
                writeln!(out, "{s}")?;
            }
            Ok(())
        }
    }
}

fn opt(x: Option<impl ToString>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    match cli.command {
        Command::Encode { code, input } => {
            let dec = decoder(&code)?;
            let sources = parse_strings(&read_input(&input)?)?;
            let words: Vec<Encoded> = sources.iter().map(|s| dec.encode(s)).collect::<Result<_, _>>()?;
            match cli.format {
                Format::Json => json(out, &words)?,
                _ => emit_strings(out, &words.into_iter().map(|w| w.bits).collect::<Vec<_>>(), cli.format)?,
            }
        }
        Command::Pool { input } => {
            let text = read_input(&input)?;
            let words: Vec<BitString> = match serde_json::from_str::<Vec<Encoded>>(&text) {
                Ok(encoded) => encoded.into_iter().map(|e| e.bits).collect(),
                Err(_) => parse_strings(&text)?,
            };
            emit_pool(out, &pool(&words)?, cli.format)?;
        }
        Command::Corrupt { pattern, input } => {
            let pattern = CorruptionPattern::from_json(&read_input(&pattern)?)?;
            let observed = CompositionMultiset::from_json(&read_input(&input)?)?;
            emit_pool(out, &corrupt(&observed, &pattern)?, cli.format)?;
        }
        Command::Decode { code, input, hbar, substitution } => {
            let dec = decoder(&code)?;
            let observed = CompositionMultiset::from_json(&read_input(&input)?)?;
            let report = dec.decode(&observed, hbar, substitution, cli.budget)?;
            match cli.format {
                Format::Json => json(out, &report)?,
                _ => emit_strings(out, &report.strings, cli.format)?,
            }
            if report.status == Status::Ambiguous {
                return Err(Failure::Code(3));
            }
        }
        Command::Bounds { h, mode } => {
            let mode = match mode {
                Mode::Gaussian => EntropyMode::Gaussian,
                Mode::Exact => EntropyMode::Exact,
            };
            let rows = summary(&h, mode)?;
            match cli.format {
                Format::Json => json(out, &rows)?,
                Format::Csv => csv_rows(out, &rows)?,
                Format::Md => {
                    let body: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.h.to_string(),
                                format!("{:.4}", r.naive_bh_upper),
                                opt(r.bh_upper_tight.map(|v| format!("{v:.4}"))),
                                opt(r.mc_upper.as_ref()),
                                format!("{:.4}", r.mc_lower),
                                opt(r.gap.map(|v| format!("{v:.4}"))),
                            ]
                        })
                        .collect();
                    md_table(out, &["h", "naive B_h", "tighter B_h", "mixture upper", "mixture lower", "gap"], &body)?;
                }
            }
        }
        Command::Verify { input, code, h, kind } => {
            let strings = match (input, code) {
                (Some(path), None) => parse_strings(&read_input(&path)?)?,
                (None, Some(code)) => {
                    let dec = decoder(&CodeArgs { code, h, lead: None, scheme: None, t: 0 })?;
                    match (&dec, kind) {
                        (Decoder::Plain(cb), Kind::Bh) => cb.bh().strings().to_vec(),
                        _ => dec.universe()?,
                    }
                }
                _ => return Err(Failure::Usage("give exactly one of --input and --code".into())),
            };
            let valid = match kind {
                Kind::Bh => {
                    let v = verify_bh(&strings, h, cli.budget)?;
                    json(out, &v)?;
                    v == Verification::Valid
                }
                Kind::Hmc | Kind::Prefix => {
                    let readout = if matches!(kind, Kind::Hmc) { Readout::Full } else { Readout::Prefix };
                    let v = verify_hmc(&strings, h, readout, cli.budget)?;
                    json(out, &v)?;
                    v == HmcVerdict::Valid
                }
            };
            if !valid {
                return Err(Failure::Code(1));
            }
        }
        Command::Search { n, h, mode, extend } => {
            let found = match (mode, extend) {
                (SearchArg::MaxGreedy, Some(path)) => {
                    let seed = parse_strings(&read_input(&path)?)?;
                    let all: Vec<BitString> = (0..1u64 << n).map(|v| BitString::from_index(v, n)).collect();
                    greedy_extend(&seed, &all, h)?
                }
                (SearchArg::MaxGreedy, None) => exhaustive_bh_search(n, h, SearchMode::MaxGreedy, cli.budget)?,
                (SearchArg::ExactMax, None) => exhaustive_bh_search(n, h, SearchMode::ExactMax, cli.budget)?,
                (SearchArg::ExactMax, Some(_)) => return Err(Failure::Usage("--extend works with the greedy mode only".into())),
            };
            emit_strings(out, &found, cli.format)?;
        }
        Command::Experiment { code, hbar, erasures, trials, placement } => {
            let universe = decoder(&code)?.universe()?;
            let placement = match placement {
                PlacementArg::Uniform => Placement::Uniform,
                PlacementArg::Adversarial => Placement::Adversarial,
            };
            let config = ExperimentConfig { seed: cli.seed, trials, hbar, t: erasures, placement };
            let rows = erasure_experiment(&config, &universe)?;
            match cli.format {
                Format::Json => json(out, &rows)?,
                _ => csv_rows(out, &rows)?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Code(c)) => ExitCode::from(c),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
