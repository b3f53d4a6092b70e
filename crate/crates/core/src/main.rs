use clap::{Args, Parser, Subcommand};
use relcass::cone::{box_scan_oracle, case2_instances};
use relcass::report::{
    build_datum, certificate_json, cone_pair_json, parse_suites, report_json, report_summary,
    run, RunConfig,
};
use relcass::{certify, Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "relcass",
    version,
    about = "Exact verification of involution structure, split-cone containments, and \
             square-integrability certificates for GL over a quadratic extension"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit the JSON report.
    Run(RunArgs),
    /// Involution and root-structure checks only.
    Structure(StructureArgs),
    /// Cone containments with full certificates, as a JSON array.
    Cones(ConesArgs),
    /// Certify the configured induced representation.
    Certify(CertifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Odd residue prime of the base valuation.
    #[arg(long)]
    p: Option<u64>,
    /// Discriminant of the quadratic extension, as a rational like 2 or 1/5.
    #[arg(long)]
    d: Option<String>,
    /// Matrix size m (even ranks enable the certify suite).
    #[arg(long)]
    rank: Option<usize>,
    /// Comma-separated suite names, or 'all'.
    #[arg(long)]
    suites: Option<String>,
    /// Seed for all sampled checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Inducing factor, e.g. steinberg:k=2,rho=chi1.
    #[arg(long)]
    tau: Option<String>,
    /// Galois pairing of labels, e.g. chi1:chi2,eta.
    #[arg(long)]
    sigma_pairs: Option<String>,
    /// JSON config file; explicit flags win on conflict.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StructureArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConesArgs {
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Matrix size m = 2n; must be even and at least 4.
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    sigma_pairs: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Structure(args) => cmd_structure(args),
        Command::Cones(args) => cmd_cones(args),
        Command::Certify(args) => cmd_certify(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// JSON goes to the --out file (summary to stdout) or to stdout itself
/// (summary to stderr), so piped output is always exactly the JSON.
fn emit(out: &Option<PathBuf>, json: &str, summary: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, json)
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            print!("{summary}");
        }
        None => {
            print!("{json}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn merged_config(args: &RunArgs) -> Result<RunConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(p) = args.p {
        config.p = p;
    }
    if let Some(d) = &args.d {
        config.d = d.clone();
    }
    if let Some(rank) = args.rank {
        config.rank = rank;
    }
    if let Some(suites) = &args.suites {
        config.suites = parse_suites(suites)?;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(tau) = &args.tau {
        config.tau = tau.clone();
    }
    if let Some(pairs) = &args.sigma_pairs {
        config.sigma_pairs = pairs.clone();
    }
    Ok(config)
}

fn cmd_run(args: RunArgs) -> Result<u8> {
    let config = merged_config(&args)?;
    let report = run(&config)?;
    emit(&args.out, &report_json(&report), &report_summary(&report))?;
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_structure(args: StructureArgs) -> Result<u8> {
    let config = RunConfig {
        p: args.p.unwrap_or(RunConfig::default().p),
        d: args.d.unwrap_or(RunConfig::default().d),
        rank: args.rank.unwrap_or(RunConfig::default().rank),
        suites: vec!["structure".into()],
        seed: args.seed.unwrap_or(0),
        ..RunConfig::default()
    };
    let report = run(&config)?;
    emit(&args.out, &report_json(&report), &report_summary(&report))?;
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_cones(args: ConesArgs) -> Result<u8> {
    let rank = args.rank.unwrap_or(RunConfig::default().rank);
    if !(2..=10).contains(&rank) {
        return Err(Error::Config(format!(
            "rank must be between 2 and 10, got {rank}"
        )));
    }
    let mut all_hold = true;
    let mut pairs = Vec::new();
    for (inst, data) in case2_instances(rank)? {
        all_hold &= data.holds;
        let scan = box_scan_oracle(&inst, 3);
        all_hold &= scan.clean();
        pairs.push(cone_pair_json(&inst, &data, &scan));
    }
    let mut json = serde_json::to_string_pretty(&pairs).expect("pairs serialize");
    json.push('\n');
    let summary = format!(
        "{} second-case containments at rank {rank}: {}\n",
        pairs.len(),
        if all_hold { "all certified" } else { "FAIL" }
    );
    emit(&args.out, &json, &summary)?;
    Ok(if all_hold { 0 } else { 1 })
}

fn cmd_certify(args: CertifyArgs) -> Result<u8> {
    let rank = args.rank.unwrap_or(RunConfig::default().rank);
    if rank % 2 != 0 || rank < 4 {
        return Err(Error::Config(format!(
            "certify needs an even rank of at least 4, got {rank}"
        )));
    }
    let defaults = RunConfig::default();
    let tau = args.tau.unwrap_or(defaults.tau);
    let sigma_pairs = args.sigma_pairs.unwrap_or(defaults.sigma_pairs);
    let datum = build_datum(rank / 2, &tau, &sigma_pairs)?;
    let cert = certify::certify_rds(&datum)?;
    let mut json = serde_json::to_string_pretty(&certificate_json(&cert)).expect("serializes");
    json.push('\n');
    let summary = format!("{}: {}\n", cert.tau_prime_label, cert.verdict);
    emit(&args.out, &json, &summary)?;
    Ok(if cert.rds { 0 } else { 1 })
}
