mod bench;
mod certificate;
mod sbm;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serpar::ternary::cycle_sign_product;
use serpar::{
    certify_ternary, generate, minimalize_certificate, reduce, search_wheel, BinaryCertificate, ExtensionOrder,
    GenConfig, Mode, ReduceOptions, TernaryCertificate, WeightMode,
};

use certificate::{Document, Verdict};

#[derive(Parser)]
#[command(name = "serpar", version, about = "Certifying recognition of series-parallel binary and ternary matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a matrix is series-parallel and write a certificate.
    /// Exits 0 if it is, 1 if it is not, 2 on errors.
    Recognize {
        file: PathBuf,
        /// Shrink a wheel certificate to an inclusion-wise minimal one.
        #[arg(long)]
        minimal_certificate: bool,
        #[command(flatten)]
        weights: WeightArgs,
        /// Certificate output path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply all series-parallel reductions and print them.
    Reduce {
        file: PathBuf,
        /// Write the remaining core here, with index maps in `<OUT>.map.json`.
        #[arg(long)]
        core: Option<PathBuf>,
        #[command(flatten)]
        weights: WeightArgs,
    },
    /// Check a certificate against a matrix. Exits 0 iff it verifies.
    Verify { matrix: PathBuf, cert: PathBuf },
    /// Generate a random instance by series-parallel extensions and flips.
    Generate {
        #[command(flatten)]
        params: GenArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time reduction and certificate search over a sweep of generated
    /// instances and print CSV.
    Bench {
        #[command(flatten)]
        params: SweepArgs,
        /// Number of seeds per configuration.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        /// Worker threads running independent instances.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightChoice {
    Deterministic,
    Random,
}

#[derive(Args)]
struct WeightArgs {
    #[arg(long, value_enum, default_value = "deterministic")]
    weights: WeightChoice,
    /// Seed for random weights.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl WeightArgs {
    fn options(&self) -> ReduceOptions {
        let weights = match self.weights {
            WeightChoice::Deterministic => WeightMode::Deterministic,
            WeightChoice::Random => WeightMode::Randomized { seed: self.seed },
        };
        ReduceOptions { weights, ..ReduceOptions::default() }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Binary,
    Ternary,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Shuffled,
    Sequential,
}

#[derive(Args)]
struct GenArgs {
    /// `key = value` file with generator settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Order of the extension steps.
    #[arg(long, value_enum)]
    order: Option<OrderArg>,
}

impl GenArgs {
    fn base(&self) -> anyhow::Result<GenConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                GenConfig::parse_config(&text).with_context(|| format!("in {}", path.display()))?
            }
            None => GenConfig::default(),
        };
        if let Some(mode) = self.mode {
            config.mode = match mode {
                ModeArg::Binary => Mode::Binary,
                ModeArg::Ternary => Mode::Ternary,
            };
        }
        if let Some(order) = self.order {
            config.order = match order {
                OrderArg::Shuffled => ExtensionOrder::Shuffled,
                OrderArg::Sequential => ExtensionOrder::Sequential,
            };
        }
        Ok(config)
    }

    fn config(&self) -> anyhow::Result<GenConfig> {
        let mut config = self.base()?;
        config.n = self.n.unwrap_or(config.n);
        config.alpha = self.alpha.unwrap_or(config.alpha);
        config.beta = self.beta.unwrap_or(config.beta);
        config.gamma = self.gamma.unwrap_or(config.gamma);
        config.delta = self.delta.unwrap_or(config.delta);
        config.p = self.p.unwrap_or(config.p);
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct SweepArgs {
    /// `key = value` file with generator settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    /// Defaults to `1 - alpha - gamma` when only gamma is swept.
    #[arg(long, value_delimiter = ',')]
    beta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    gamma: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    delta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    order: Option<OrderArg>,
}

impl SweepArgs {
    fn configs(&self, seeds: std::ops::Range<u64>) -> anyhow::Result<Vec<GenConfig>> {
        let base = GenArgs {
            config: self.config.clone(),
            n: None,
            alpha: None,
            beta: None,
            gamma: None,
            delta: None,
            p: None,
            mode: self.mode,
            order: self.order,
        }
        .base()?;
        let or = |v: &Vec<f64>, default: f64| if v.is_empty() { vec![default] } else { v.clone() };
        let ns = if self.n.is_empty() { vec![base.n] } else { self.n.clone() };
        let mut out = Vec::new();
        for &n in &ns {
            for &alpha in &or(&self.alpha, base.alpha) {
                for &gamma in &or(&self.gamma, base.gamma) {
                    let betas = match (&self.beta[..], self.gamma.is_empty()) {
                        ([], false) => vec![1.0 - alpha - gamma],
                        ([], true) => vec![base.beta],
                        (b, _) => b.to_vec(),
                    };
                    for &beta in &betas {
                        for &delta in &or(&self.delta, base.delta) {
                            for &p in &or(&self.p, base.p) {
                                for seed in seeds.clone() {
                                    let config = GenConfig { n, alpha, beta, gamma, delta, p, seed, ..base.clone() };
                                    config.validate().with_context(|| format!("invalid sweep point {config:?}"))?;
                                    out.push(config);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn write_json(value: &impl Serialize, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => Ok(std::io::stdout().write_all(text.as_bytes())?),
    }
}

fn recognize(file: &Path, minimal: bool, options: &ReduceOptions, out: Option<&Path>) -> anyhow::Result<Verdict> {
    let matrix = sbm::read(file)?;
    let document = match matrix.mode() {
        Mode::Binary => {
            let mut cert = search_wheel(&matrix, options)?.certificate;
            if let (true, BinaryCertificate::Wheel { wheel, .. }) = (minimal, &mut cert) {
                *wheel = minimalize_certificate(wheel, &matrix)?;
            }
            Document::from_binary(&cert)
        }
        Mode::Ternary => {
            let mut cert = certify_ternary(&matrix, options)?.certificate;
            if let (true, TernaryCertificate::SignedWheel { wheel, values, cycle_sign_product: product, .. }) =
                (minimal, &mut cert)
            {
                *wheel = minimalize_certificate(wheel, &matrix.support())?;
                *values = matrix.dense_submatrix(&wheel.rows, &wheel.cols)?;
                *product = cycle_sign_product(&matrix, &wheel.rows, &wheel.cols).expect("a verified wheel");
            }
            Document::from_ternary(&cert)
        }
    };
    write_json(&document, out)?;
    Ok(document.result)
}

#[derive(Serialize)]
struct IndexMap {
    orig_row: Vec<usize>,
    orig_col: Vec<usize>,
}

fn reduce_file(file: &Path, core: Option<&Path>, options: &ReduceOptions) -> anyhow::Result<()> {
    let mut matrix = sbm::read(file)?;
    let outcome = reduce(&mut matrix, options);
    let mut document = Document::series_parallel(&outcome.reductions);
    if !outcome.is_series_parallel() {
        document.result = Verdict::NotSeriesParallel;
    }
    write_json(&document, None)?;
    if let Some(path) = core {
        let (compact, rows, cols) = matrix.compact();
        sbm::write(&compact, path)?;
        let map =
            IndexMap { orig_row: rows.iter().map(|r| r + 1).collect(), orig_col: cols.iter().map(|c| c + 1).collect() };
        let mut map_path = path.as_os_str().to_owned();
        map_path.push(".map.json");
        write_json(&map, Some(Path::new(&map_path)))?;
    }
    Ok(())
}

fn verify(matrix: &Path, cert: &Path) -> anyhow::Result<Result<Verdict, String>> {
    let matrix = sbm::read(matrix)?;
    let text = std::fs::read_to_string(cert).with_context(|| format!("cannot read {}", cert.display()))?;
    let document: Document =
        serde_json::from_str(&text).with_context(|| format!("{} is not a certificate", cert.display()))?;
    Ok(document.verify(&matrix).map(|()| document.result))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Recognize { file, minimal_certificate, weights, out } => {
            match recognize(&file, minimal_certificate, &weights.options(), out.as_deref())? {
                Verdict::SeriesParallel => Ok(ExitCode::SUCCESS),
                Verdict::NotSeriesParallel => Ok(ExitCode::from(1)),
            }
        }
        Command::Reduce { file, core, weights } => {
            reduce_file(&file, core.as_deref(), &weights.options())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { matrix, cert } => match verify(&matrix, &cert)? {
            Ok(verdict) => {
                let what = match verdict {
                    Verdict::SeriesParallel => "series-parallel",
                    Verdict::NotSeriesParallel => "not series-parallel",
                };
                println!("certificate verified: {what}");
                Ok(ExitCode::SUCCESS)
            }
            Err(violation) => {
                println!("certificate rejected: {violation}");
                Ok(ExitCode::from(1))
            }
        },
        Command::Generate { params, seed, out } => {
            let mut config = params.config()?;
            config.seed = seed.unwrap_or(config.seed);
            sbm::write(&generate(&config)?, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { params, seeds, first_seed, jobs } => {
            if seeds == 0 {
                bail!("--seeds must be at least 1");
            }
            let configs = params.configs(first_seed..first_seed + seeds)?;
            let lines = bench::run_all(&configs, &ReduceOptions::default(), jobs)?;
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{}", bench::HEADER)?;
            for line in lines {
                writeln!(stdout, "{line}")?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
