use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use surface_decode::noise::parse_probability;
use surface_decode::sim::{simulate, to_csv, ChannelKind, DecoderKind, Probability, RunConfig};
use surface_decode::smlc::{Backend, SmlcDecoder};
use surface_decode::smw::{decode_smw, default_profile, Solver};
use surface_decode::verify::{run_suite, Budget, Suite};
use surface_decode::{build_lattice, ChainFile, CodeFamily, Error, Family, LatticePair, Side};

/// Exact minimum-weight and most-likely-coset decoding for surface codes.
#[derive(Parser)]
#[command(name = "surface-decode", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo logical error rates, one CSV row per p.
    Simulate(SimulateArgs),
    /// Decode one syndrome file and print the result as JSON.
    Decode(DecodeArgs),
    /// Run invariant campaigns; exits 1 if any check fails.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON run config; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long = "L")]
    distance: Option<usize>,
    /// Comma-separated, decimals or fractions such as 1/10.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<String>>,
    #[arg(long, value_enum)]
    channel: Option<ChannelKind>,
    #[arg(long, value_enum)]
    decoder: Option<DecoderKind>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    backend: Option<Backend>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report mean decode time (the CSV is then no longer reproducible).
    #[arg(long)]
    timing: bool,
    /// Also run the other SMW solver and count weight disagreements.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Args)]
struct DecodeArgs {
    /// Syndrome in chain-file JSON.
    #[arg(long)]
    syndrome: PathBuf,
    /// Must match the file when given.
    #[arg(long)]
    family: Option<Family>,
    #[arg(long = "L")]
    distance: Option<usize>,
    #[arg(long)]
    side: Option<Side>,
    #[arg(long, value_enum, default_value = "smw-separator")]
    decoder: DecoderKind,
    /// Flip probability per qubit; required by SMLC.
    #[arg(long)]
    p: Option<String>,
    #[arg(long, value_enum)]
    backend: Option<Backend>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    suite: Suite,
    /// Random instances per campaign.
    #[arg(long, default_value_t = Budget::default().instances)]
    instances: usize,
    #[arg(long, default_value_t = Budget::default().max_degree)]
    max_degree: usize,
    #[arg(long, default_value_t = Budget::default().max_code_len)]
    max_code_len: usize,
    #[arg(long, default_value_t = Budget::default().seed)]
    seed: u64,
}

fn run_config(args: SimulateArgs) -> Result<RunConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(x) = args.family {
        cfg.family = x;
    }
    if let Some(x) = args.distance {
        cfg.distance = x;
    }
    if let Some(x) = args.p {
        cfg.p = x.into_iter().map(Probability::Text).collect();
    }
    if let Some(x) = args.channel {
        cfg.channel = x;
    }
    if let Some(x) = args.decoder {
        cfg.decoder = x;
    }
    if let Some(x) = args.trials {
        cfg.trials = x;
    }
    if let Some(x) = args.seed {
        cfg.seed = x;
    }
    if let Some(x) = args.backend {
        cfg.backend = Some(x);
    }
    if args.out.is_some() {
        cfg.out = args.out;
    }
    cfg.timing |= args.timing;
    cfg.cross_check |= args.cross_check;
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Error> {
    let cfg = run_config(args)?;
    let rows = simulate(&cfg)?;
    emit(cfg.out.as_deref(), &to_csv(&rows))
}

fn cmd_decode(args: DecodeArgs) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.syndrome)?;
    let file = ChainFile::parse(&text)?;
    let family = CodeFamily::new(args.family.unwrap_or(file.family), args.distance.unwrap_or(file.distance))?;
    let side = args.side.unwrap_or(file.side);
    let lat = build_lattice(family, side)?;
    let s = file.to_chain(&lat)?;
    let json = match args.decoder {
        DecoderKind::SmwBlossom | DecoderKind::SmwSeparator => {
            let solver = if args.decoder == DecoderKind::SmwBlossom {
                Solver::Blossom
            } else {
                Solver::Separator
            };
            let r = decode_smw(&lat, &s, &default_profile(&lat), solver)?;
            ChainFile::from_chain(&lat, &r.error).to_json()
        }
        DecoderKind::Smlc => {
            let p = args
                .p
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("SMLC decoding needs --p".into()))?;
            let p = parse_probability(p)?;
            let pair = LatticePair::new(family)?;
            let n = lat.n_qubits();
            let backend = args.backend.unwrap_or(Backend::default_for(n));
            let d = SmlcDecoder::new(&pair, side, &vec![p; n], backend)?.decide(&s)?;
            d.to_json(&lat).to_string()
        }
    };
    emit(args.out.as_deref(), &(json + "\n"))
}

fn cmd_verify(args: VerifyArgs) -> Result<bool, Error> {
    let budget = Budget {
        max_degree: args.max_degree,
        max_code_len: args.max_code_len,
        instances: args.instances,
        seed: args.seed,
    };
    let report = run_suite(args.suite, &budget);
    print!("{}", report.to_text());
    Ok(report.passed())
}

fn init_threads() -> Result<(), Error> {
    if let Ok(v) = std::env::var("LATTICE_DECODE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("LATTICE_DECODE_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Invariant(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| match cli.command {
        Command::Simulate(a) => cmd_simulate(a).map(|()| true),
        Command::Decode(a) => cmd_decode(a).map(|()| true),
        Command::Verify(a) => cmd_verify(a),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_user_error() { 2 } else { 1 })
        }
    }
}
