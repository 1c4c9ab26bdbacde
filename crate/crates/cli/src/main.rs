//! Command-line front end: Eb/N0 sweeps, prebuilt figure families, and
//! code-construction dumps. A structured config file seeds the experiment
//! and individual flags override it.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use polar_pcm::construction::{
    build_layout, compute_reliability, effective_rate, CodeConfig, DecoderKind, Scheme,
};
use polar_pcm::harness::{
    ebn0_grid, run_figure, run_sweep, sweep_csv, ExperimentSpec, FigureId, FigureOverrides,
    SystemKind,
};
use polar_pcm::pcm::ChunkScheme;

#[derive(Parser)]
#[command(name = "pcm", version, about = "Polar code chunk-sharing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one system over an Eb/N0 sweep and emit CSV.
    Sweep(SweepArgs),
    /// Run a prebuilt multi-system experiment family (f4 through f11).
    Figure(FigureArgs),
    /// Print the code construction for a parameter set.
    Construct(ConstructArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Structured config file mirroring the experiment fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// System to simulate.
    #[arg(long)]
    system: Option<SystemArg>,
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Directory for the output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure id: f4..f11 (or bare 4..11).
    id: String,
    #[command(flatten)]
    run: RunArgs,
    /// Directory for the output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Directory for the output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Code-shape flags shared by the subcommands.
#[derive(Args)]
struct CodeArgs {
    /// Block length N (power of two).
    #[arg(long)]
    n: Option<usize>,
    /// Information bits per block, CRC included.
    #[arg(long)]
    k: Option<usize>,
    /// CRC bits per block.
    #[arg(long)]
    kcrc: Option<usize>,
    /// Shared (mutual) information bits per block.
    #[arg(long)]
    kp: Option<usize>,
    /// Blocks per chunk.
    #[arg(long)]
    m: Option<usize>,
    /// List size for list decoding.
    #[arg(long)]
    list_size: Option<usize>,
    /// Decoder family.
    #[arg(long, value_enum)]
    decoder: Option<DecoderArg>,
    /// Mutual-bit sharing scheme.
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Design SNR in dB for the reliability computation.
    #[arg(long)]
    design_snr: Option<f64>,
}

/// Sweep-control flags shared by `sweep` and `figure`.
#[derive(Args)]
struct RunArgs {
    /// Eb/N0 grid as start:step:stop, or a single dB value.
    #[arg(long)]
    ebn0: Option<String>,
    /// Master seed for the reproducible noise streams.
    #[arg(long)]
    seed: Option<u64>,
    /// Chunk errors collected before a point stops.
    #[arg(long)]
    min_errors: Option<u64>,
    /// Hard cap on chunks per point.
    #[arg(long)]
    max_chunks: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderArg {
    Sc,
    Scl,
    Bp,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Pairwise,
    General,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    StandaloneSc,
    StandaloneBp,
    StandaloneScl,
    PcmSc,
    PcmBp,
    PcmScl,
}

impl SystemArg {
    fn kind(self) -> SystemKind {
        match self {
            SystemArg::StandaloneSc => SystemKind::StandaloneSc,
            SystemArg::StandaloneBp => SystemKind::StandaloneBp,
            SystemArg::StandaloneScl => SystemKind::StandaloneScl,
            SystemArg::PcmSc => SystemKind::PcmSc,
            SystemArg::PcmBp => SystemKind::PcmBp,
            SystemArg::PcmScl => SystemKind::PcmScl,
        }
    }
}

/// Reported once at top level and mapped to the exit code.
enum CliError {
    /// Bad parameters, bad config file, or failed validation.
    Invalid(String),
    /// The run itself failed after validation.
    Runtime(String),
}

fn parse_ebn0(text: &str) -> Result<Vec<f64>, CliError> {
    let invalid = || CliError::Invalid(format!("bad --ebn0 {text:?}; expected start:step:stop"));
    let parts: Vec<&str> = text.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| invalid())?;
    match nums.as_slice() {
        [single] => Ok(vec![*single]),
        [start, step, stop] if *step > 0.0 && stop >= start => Ok(ebn0_grid(*start, *step, *stop)),
        _ => Err(invalid()),
    }
}

fn apply_code_flags(config: &mut CodeConfig, code: &CodeArgs) {
    if let Some(n) = code.n {
        config.n = n;
    }
    if let Some(k) = code.k {
        config.k = k;
    }
    if let Some(kcrc) = code.kcrc {
        config.k_crc = kcrc;
    }
    if let Some(kp) = code.kp {
        config.k_p = kp;
    }
    if let Some(m) = code.m {
        config.m = m;
    }
    if let Some(l) = code.list_size {
        config.list_size = l;
    }
    if let Some(d) = code.decoder {
        config.decoder_kind = match d {
            DecoderArg::Sc => DecoderKind::Sc,
            DecoderArg::Scl => DecoderKind::Scl,
            DecoderArg::Bp => DecoderKind::Bp,
        };
    }
    if let Some(snr) = code.design_snr {
        config.design_snr_db = snr;
    }
}

/// The decoder flag also moves the system within its family, so
/// `--decoder bp` on a chunked sweep selects the chunked BP system.
fn align_system(system: SystemKind, decoder: Option<DecoderArg>) -> SystemKind {
    let Some(decoder) = decoder else {
        return system;
    };
    let chunked = system.is_chunked();
    match (decoder, chunked) {
        (DecoderArg::Sc, true) => SystemKind::PcmSc,
        (DecoderArg::Bp, true) => SystemKind::PcmBp,
        (DecoderArg::Scl, true) => SystemKind::PcmScl,
        (DecoderArg::Sc, false) => SystemKind::StandaloneSc,
        (DecoderArg::Bp, false) => SystemKind::StandaloneBp,
        (DecoderArg::Scl, false) => SystemKind::StandaloneScl,
    }
}

fn load_spec(path: &Path) -> Result<ExperimentSpec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("bad config {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, filename: &str, csv: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{csv}");
            Ok(())
        }
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join(filename);
            fs::write(&path, csv)
                .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let mut spec = match &args.config {
        Some(path) => load_spec(path)?,
        None => ExperimentSpec {
            system: SystemKind::PcmSc,
            config: CodeConfig::default(),
            scheme: ChunkScheme::Pairwise,
            ebn0_points: Vec::new(),
            min_chunk_errors: 100,
            max_chunks: 1_000_000,
            master_seed: 0,
        },
    };

    if let Some(system) = args.system {
        spec.system = system.kind();
    }
    spec.system = align_system(spec.system, args.code.decoder);
    apply_code_flags(&mut spec.config, &args.code);
    if let Some(scheme) = args.code.scheme {
        spec.scheme = match scheme {
            SchemeArg::Pairwise => ChunkScheme::Pairwise,
            SchemeArg::General => ChunkScheme::General,
        };
    }
    if let Some(ebn0) = &args.run.ebn0 {
        spec.ebn0_points = parse_ebn0(ebn0)?;
    }
    if let Some(seed) = args.run.seed {
        spec.master_seed = seed;
    }
    if let Some(min) = args.run.min_errors {
        spec.min_chunk_errors = min;
    }
    if let Some(max) = args.run.max_chunks {
        spec.max_chunks = max;
    }
    if spec.ebn0_points.is_empty() {
        return Err(CliError::Invalid(
            "no Eb/N0 points; pass --ebn0 or a config file with ebn0_points".into(),
        ));
    }
    spec.validate()
        .map_err(|e| CliError::Invalid(e.to_string()))?;

    let result = run_sweep(&spec).map_err(|e| CliError::Runtime(e.to_string()))?;
    let name = format!("sweep_{}.csv", system_slug(spec.system));
    emit(args.out.as_deref(), &name, &sweep_csv(&result))
}

fn system_slug(system: SystemKind) -> &'static str {
    match system {
        SystemKind::StandaloneSc => "standalone_sc",
        SystemKind::StandaloneBp => "standalone_bp",
        SystemKind::StandaloneScl => "standalone_scl",
        SystemKind::PcmSc => "pcm_sc",
        SystemKind::PcmBp => "pcm_bp",
        SystemKind::PcmScl => "pcm_scl",
    }
}

fn cmd_figure(args: FigureArgs) -> Result<(), CliError> {
    let id = FigureId::from_str(&args.id).map_err(|e| CliError::Invalid(e.to_string()))?;
    let overrides = FigureOverrides {
        ebn0_points: args.run.ebn0.as_deref().map(parse_ebn0).transpose()?,
        min_chunk_errors: args.run.min_errors,
        max_chunks: args.run.max_chunks,
        master_seed: args.run.seed,
    };
    let figure = run_figure(id, &overrides).map_err(|e| CliError::Runtime(e.to_string()))?;
    emit(args.out.as_deref(), &figure.filename, &figure.csv)
}

fn cmd_construct(args: ConstructArgs) -> Result<(), CliError> {
    let mut config = CodeConfig::default();
    apply_code_flags(&mut config, &args.code);
    config
        .validate()
        .map_err(|e| CliError::Invalid(e.to_string()))?;

    let reliability = compute_reliability(&config);
    let layout = build_layout(&reliability, &config);
    let mut csv = String::from("index,bit_error_prob,role\n");
    for i in 0..config.n {
        let role = if layout.mutual_set.contains(&i) {
            "mutual"
        } else if layout.info_set.contains(&i) {
            "info"
        } else {
            "frozen"
        };
        csv.push_str(&format!(
            "{},{},{}\n",
            i, reliability.per_bit_error_prob[i], role
        ));
    }
    eprintln!(
        "n={} k={} k_crc={} k_p={} m={} shared_rate={:.6} repeated_rate={:.6}",
        config.n,
        config.k,
        config.k_crc,
        config.k_p,
        config.m,
        effective_rate(&config, Scheme::General),
        effective_rate(&config, Scheme::DirectExtension),
    );
    emit(args.out.as_deref(), "construct.csv", &csv)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let outcome = match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Figure(args) => cmd_figure(args),
        Command::Construct(args) => cmd_construct(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
