use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qhdim::classifier::{classify, dimension_with};
use qhdim::degeneration::{Certifier, CertifierConfig, DEFAULT_BUDGET};
use qhdim::minus_one::{default_delta_max, enumerate_homogeneous_configurations};
use qhdim::oracle::{measure_dim, OracleConfig, MERSENNE_31};
use qhdim::tables::{configuration_table, qh_class_table, special_table, Table};
use qhdim::verify::{sweep, SweepBounds};
use qhdim::{DimensionResult, Evidence, QuasiHomogeneousSystem};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "qhdim",
    version,
    about = "Dimensions of plane linear systems L(d, m0, n, m)"
)]
struct Cli {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Certifier memo cache file.
    #[arg(long, global = true, env = "QHDIM_CACHE")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct SystemArgs {
    /// Degree
    d: i64,
    /// Multiplicity at p0
    m0: i64,
    /// Number of equal-multiplicity points
    n: i64,
    /// Their multiplicity
    m: i64,
}

impl SystemArgs {
    fn system(&self) -> qhdim::Result<QuasiHomogeneousSystem> {
        QuasiHomogeneousSystem::new(self.d, self.m0, self.n, self.m)
    }
}

#[derive(Args, Clone)]
struct OracleArgs {
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    trials: u32,
    #[arg(long, default_value_t = MERSENNE_31)]
    prime: u64,
}

impl OracleArgs {
    fn config(&self) -> OracleConfig {
        OracleConfig {
            prime: self.prime,
            trials: self.trials,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableName {
    Obirreg23,
    Qh1list,
    Compound,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, status and evidence.
    Dim(SystemArgs),
    /// Speciality report with the fixed-part decomposition.
    Classify(SystemArgs),
    /// Quasi-homogeneous (-1)-classes or configurations.
    Enumerate {
        /// Largest equal multiplicity m
        #[arg(long)]
        m_max: i64,
        /// (-1)-configurations instead of single classes
        #[arg(long)]
        configurations: bool,
        /// Only homogeneous configurations (m0 = 0).
        #[arg(long, conflicts_with = "configurations")]
        homogeneous: bool,
        /// List the infinite families member by member up to --e-max.
        #[arg(long)]
        expand: bool,
        #[arg(long, default_value_t = qhdim::minus_one::DEFAULT_E_MAX)]
        e_max: i64,
    },
    /// Measure the dimension by rank over a prime field.
    Oracle {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Compare the classifier with the oracle on a box of systems.
    Verify {
        #[arg(long)]
        d_max: i64,
        #[arg(long)]
        n_max: i64,
        #[arg(long, default_value_t = 3)]
        m_max: i64,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Print a reference table.
    Table {
        #[arg(value_enum)]
        name: TableName,
        #[arg(long)]
        m_max: Option<i64>,
    },
    /// Prove emptiness or non-speciality by degenerations.
    Certify {
        #[command(flatten)]
        system: SystemArgs,
        /// Print the proof steps.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Use the oracle for subsystems nothing else resolves.
        #[arg(long)]
        oracle_fallback: bool,
    },
}

enum Failure {
    Usage(String),
    Mismatch,
}

impl From<qhdim::Error> for Failure {
    fn from(e: qhdim::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_certifier(cli: &Cli, config: CertifierConfig) -> Certifier {
    let c = Certifier::new(config);
    if let Some(path) = &cli.cache {
        if path.exists() {
            if let Err(e) = c.load(path) {
                eprintln!("warning: ignoring cache {}: {e}", path.display());
            }
        }
    }
    c
}

fn save_certifier(cli: &Cli, c: &Certifier) {
    if let Some(path) = &cli.cache {
        if let Err(e) = c.save(path) {
            eprintln!("warning: could not write cache {}: {e}", path.display());
        }
    }
}

fn evidence_summary(r: &DimensionResult) -> String {
    match &r.evidence {
        Evidence::Rule { rule } => rule.to_string(),
        Evidence::SpecialTable { family, .. } => format!("special family {family}"),
        Evidence::Classification => "not in the special table (m <= 3)".into(),
        Evidence::Degeneration { certificate } => {
            format!("degeneration certificate ({})", certificate.outcome)
        }
        Evidence::Conjecture {
            decomposition,
            e_max,
        } => match decomposition {
            Some(dec) => format!(
                "conjecture: fixed part of {} curve(s), residual {} (catalog degree <= {e_max})",
                dec.fixed_parts.len(),
                dec.residual
            ),
            None => format!("conjecture: no (-1)-curve splits off (catalog degree <= {e_max})"),
        },
        Evidence::Oracle { config, .. } => format!("oracle at seed {:#x}", config.seed),
    }
}

fn print_table(cli: &Cli, t: &Table) {
    if cli.json {
        println!("{}", t.to_json());
    } else if cli.csv {
        print!("{}", t.to_csv());
    } else {
        print!("{}", t.to_plain());
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Dim(args) => {
            let l = args.system()?;
            let certifier = load_certifier(cli, CertifierConfig::default());
            let r = dimension_with(&l, Some(&certifier));
            save_certifier(cli, &certifier);
            let inv = l.invariants();
            if cli.json {
                let out = json!({
                    "schema": SCHEMA_VERSION,
                    "system": l,
                    "dim": r.dim,
                    "v": inv.v,
                    "e": inv.e,
                    "status": r.status,
                    "evidence": r.evidence,
                });
                println!("{out}");
            } else if cli.csv {
                println!("d,m0,n,m,dim,v,e,status");
                let (d, m0, n, m) = l.tuple();
                println!(
                    "{d},{m0},{n},{m},{},{},{},{}",
                    r.dim, inv.v, inv.e, r.status
                );
            } else {
                println!(
                    "{l}: dim {} ({}), v = {}, e = {}",
                    r.dim, r.status, inv.v, inv.e
                );
                println!("  {}", evidence_summary(&r));
            }
        }
        Command::Classify(args) => {
            let l = args.system()?;
            let report = classify(&l);
            if cli.json {
                let mut out = serde_json::to_value(&report).expect("serializable");
                out["schema"] = json!(SCHEMA_VERSION);
                println!("{out}");
            } else if cli.csv {
                println!("d,m0,n,m,dim,v,e,status,special,residual");
                let (d, m0, n, m) = l.tuple();
                let residual = report
                    .decomposition
                    .as_ref()
                    .map(|dec| dec.residual.to_string())
                    .unwrap_or_default();
                println!(
                    "{d},{m0},{n},{m},{},{},{},{},{},{residual}",
                    report.result.dim,
                    report.invariants.v,
                    report.invariants.e,
                    report.result.status,
                    report.special
                );
            } else {
                let r = &report.result;
                let verdict = if report.special {
                    "special"
                } else {
                    "non-special"
                };
                println!(
                    "{l}: {verdict}, dim {} ({}), v = {}",
                    r.dim, r.status, report.invariants.v
                );
                println!("  {}", evidence_summary(r));
                if let Some(dec) = &report.decomposition {
                    for (curve, mult) in &dec.fixed_parts {
                        println!("  fixed: {mult} x {curve}");
                    }
                    println!("  residual: {} with v = {}", dec.residual, dec.residual_v);
                }
            }
        }
        Command::Enumerate {
            m_max,
            configurations,
            homogeneous,
            expand,
            e_max,
        } => {
            if *homogeneous {
                let systems =
                    enumerate_homogeneous_configurations(*m_max, default_delta_max(*m_max));
                let t = Table {
                    name: "homogeneous",
                    header: vec!["d", "m0", "n", "m"],
                    rows: systems
                        .iter()
                        .map(|s| {
                            let (d, m0, n, m) = s.tuple();
                            qhdim::tables::Row {
                                cells: [d, m0, n, m].iter().map(i64::to_string).collect(),
                            }
                        })
                        .collect(),
                };
                print_table(cli, &t);
            } else if *configurations {
                print_table(cli, &configuration_table(*m_max, *expand, *e_max));
            } else {
                print_table(cli, &qh_class_table(*m_max, *expand, *e_max));
            }
        }
        Command::Oracle { system, oracle } => {
            let l = system.system()?;
            let r = measure_dim(&l, &oracle.config())?;
            let inv = l.invariants();
            let trials = match &r.evidence {
                Evidence::Oracle { trial_dims, .. } => trial_dims.clone(),
                _ => Vec::new(),
            };
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "schema": SCHEMA_VERSION,
                        "system": l,
                        "dim": r.dim,
                        "v": inv.v,
                        "e": inv.e,
                        "special": r.dim > inv.e,
                        "status": r.status,
                        "config": oracle.config(),
                        "trial_dims": trials,
                    })
                );
            } else if cli.csv {
                println!("d,m0,n,m,dim,v,e,special");
                let (d, m0, n, m) = l.tuple();
                println!(
                    "{d},{m0},{n},{m},{},{},{},{}",
                    r.dim,
                    inv.v,
                    inv.e,
                    r.dim > inv.e
                );
            } else {
                println!(
                    "{l}: measured dim {} (v = {}, e = {}{}), trials {:?}",
                    r.dim,
                    inv.v,
                    inv.e,
                    if r.dim > inv.e { ", special" } else { "" },
                    trials
                );
            }
        }
        Command::Verify {
            d_max,
            n_max,
            m_max,
            oracle,
        } => {
            let bounds = SweepBounds {
                d_max: *d_max,
                n_max: *n_max,
                m_max: *m_max,
            };
            let report = sweep(bounds, &oracle.config())?;
            if cli.json {
                let mut out = serde_json::to_value(&report).expect("serializable");
                out["schema"] = json!(SCHEMA_VERSION);
                println!("{out}");
            } else {
                println!(
                    "checked {} systems ({} special, {} conjectural skipped), {} mismatches",
                    report.checked,
                    report.special,
                    report.conjectural,
                    report.mismatches.len()
                );
                for m in &report.mismatches {
                    println!(
                        "  {}: predicted {} ({}), measured {} [{}]",
                        m.system, m.predicted, m.status, m.measured, m.reason
                    );
                }
            }
            if !report.ok() {
                return Err(Failure::Mismatch);
            }
        }
        Command::Table { name, m_max } => {
            let e_max = qhdim::minus_one::DEFAULT_E_MAX;
            let t = match name {
                TableName::Obirreg23 => special_table(),
                TableName::Qh1list => qh_class_table(m_max.unwrap_or(7), false, e_max),
                TableName::Compound => configuration_table(m_max.unwrap_or(10), false, e_max),
            };
            print_table(cli, &t);
        }
        Command::Certify {
            system,
            trace,
            budget,
            oracle_fallback,
        } => {
            let l = system.system()?;
            let certifier = load_certifier(
                cli,
                CertifierConfig {
                    budget: *budget,
                    oracle_fallback: oracle_fallback.then(OracleConfig::default),
                    ..CertifierConfig::default()
                },
            );
            let cert = certifier.certify(&l)?;
            save_certifier(cli, &certifier);
            if cli.json {
                let mut out = serde_json::to_value(&cert).expect("serializable");
                out["schema"] = json!(SCHEMA_VERSION);
                println!("{out}");
            } else {
                let dim = cert.dim.map_or("unknown".to_string(), |d| d.to_string());
                let flag = if cert.oracle_assisted {
                    " (oracle-assisted)"
                } else {
                    ""
                };
                println!("{l}: {}{flag}, dim {dim}", cert.outcome);
                if *trace {
                    print!("{}", cert.trace());
                }
            }
        }
    }
    Ok(())
}
