use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fracfactor::constructions::{random_graph, verify_sharpness, ConstructionKind};
use fracfactor::criticality::{is_fractional_id_factor_critical, Limits};
use fracfactor::factor::{find_fractional_factor, validate_assignment, FactorOutcome, FactorParams};
use fracfactor::graph::Graph;
use fracfactor::hypothesis::check_theorem1_hypotheses;
use fracfactor::sweep::{parse_probability, run_sweep, EnsembleSpec, SweepConfig};
use fracfactor::Error;

const EXIT_HOLDS: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "fracfactor", version, about = "Fractional [a,b]-factors and ID-factor-criticality")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for random generation; overrides ensemble seeds in sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest order for the 2^n subset scan.
    #[arg(long, global = true, default_value_t = fracfactor::factor::DEFAULT_BRUTE_FORCE_LIMIT)]
    brute_limit: usize,
    /// Largest order for the criticality check.
    #[arg(long, global = true, default_value_t = fracfactor::criticality::DEFAULT_CRITICALITY_LIMIT)]
    crit_limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Edge-list file (`n m` header, then `u v` lines).
    graph: PathBuf,
    #[arg(short, long)]
    a: u32,
    #[arg(short, long)]
    b: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the graph has a fractional [a,b]-factor.
    CheckFactor {
        #[command(flatten)]
        graph: GraphArgs,
        /// Print the indicator function when one exists.
        #[arg(long)]
        witness: bool,
    },
    /// Decide fractional ID-[a,b]-factor-criticality.
    CheckCritical {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Evaluate the order, minimum-degree and neighborhood conditions.
    CheckHypotheses {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Run a verification sweep described by a TOML config.
    VerifyTheorem { config: PathBuf },
    /// Generate a construction or a random graph.
    Gen(GenArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Remark1,
    Remark2,
    Random,
}

#[derive(Args, Debug)]
struct GenArgs {
    kind: GenKind,
    #[arg(short, long, default_value_t = 1)]
    a: u32,
    #[arg(short, long, default_value_t = 1)]
    b: u32,
    #[arg(short, long, default_value_t = 1)]
    t: usize,
    /// Order of a random graph.
    #[arg(short, long, default_value_t = 10)]
    n: usize,
    /// Edge probability of a random graph, as `p/q`.
    #[arg(short, long, default_value = "1/2")]
    p: String,
    /// Edge-list destination; the labels sidecar goes next to it as
    /// `<out>.labels.json`. Defaults to stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Check the construction's claimed properties.
    #[arg(long)]
    verify: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::ResourceLimit { .. } => EXIT_RESOURCE,
                Error::Inconsistency(_) => EXIT_FAILS,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let limits = Limits {
        brute_force: cli.brute_limit,
        criticality: cli.crit_limit,
    };
    match &cli.command {
        Command::CheckFactor { graph, witness } => check_factor(cli, graph, *witness, limits),
        Command::CheckCritical { graph } => check_critical(cli, graph, limits),
        Command::CheckHypotheses { graph } => check_hypotheses(cli, graph),
        Command::VerifyTheorem { config } => verify_theorem(cli, config, limits),
        Command::Gen(args) => generate(cli, args, limits),
    }
}

fn load(args: &GraphArgs) -> Result<(Graph, FactorParams), Error> {
    let params = FactorParams::new(args.a, args.b)?;
    let text = fs::read_to_string(&args.graph)?;
    Ok((Graph::parse_edge_list(&text)?, params))
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json output"));
}

fn check_factor(cli: &Cli, args: &GraphArgs, witness: bool, limits: Limits) -> Result<u8, Error> {
    let (g, params) = load(args)?;
    match find_fractional_factor(&g, params, limits.brute_force)? {
        FactorOutcome::Feasible(h) => {
            let check = validate_assignment(&g, params, &h)?;
            if !check.valid {
                return Err(Error::Inconsistency("solver produced an invalid indicator function".into()));
            }
            match cli.format {
                Format::Text => {
                    println!("fractional {params}-factor exists");
                    if witness {
                        print!("{}", h.to_text());
                    }
                }
                Format::Json => {
                    let values: Vec<_> = h
                        .iter()
                        .map(|((u, v), x)| json!({"u": u, "v": v, "h": format!("{}/{}", x.numer(), x.denom())}))
                        .collect();
                    let mut doc = json!({"feasible": true, "a": params.a(), "b": params.b()});
                    if witness {
                        doc["witness"] = values.into();
                    }
                    print_json(&doc);
                }
            }
            Ok(EXIT_HOLDS)
        }
        FactorOutcome::Infeasible(cert) => {
            match cli.format {
                Format::Text => {
                    println!("no fractional {params}-factor");
                    match &cert {
                        Some(c) => println!("certificate: {c}"),
                        None => println!("(order above the brute-force limit: no certificate extracted)"),
                    }
                }
                Format::Json => print_json(&json!({
                    "feasible": false, "a": params.a(), "b": params.b(), "certificate": cert,
                })),
            }
            Ok(EXIT_FAILS)
        }
    }
}

fn check_critical(cli: &Cli, args: &GraphArgs, limits: Limits) -> Result<u8, Error> {
    let (g, params) = load(args)?;
    let report = is_fractional_id_factor_critical(&g, params, limits)?;
    match cli.format {
        Format::Text => {
            let verdict = if report.verdict { "is" } else { "is NOT" };
            println!("graph {verdict} fractional ID-{params}-factor-critical");
            println!("independent sets checked: {}", report.independent_sets_checked);
            if let Some(set) = &report.failing_set {
                println!("failing independent set: {set}");
            }
            if let Some(cert) = report.certificate_in_original_labels() {
                println!("certificate for G - I (original labels): {cert}");
            }
        }
        Format::Json => {
            let mut doc = serde_json::to_value(&report).expect("report serializes");
            doc["certificate_original_labels"] = serde_json::to_value(report.certificate_in_original_labels())
                .expect("certificate serializes");
            print_json(&doc);
        }
    }
    Ok(if report.verdict { EXIT_HOLDS } else { EXIT_FAILS })
}

fn check_hypotheses(cli: &Cli, args: &GraphArgs) -> Result<u8, Error> {
    let (g, params) = load(args)?;
    let report = check_theorem1_hypotheses(&g, params)?;
    match cli.format {
        Format::Text => print!("{report}"),
        Format::Json => print_json(&serde_json::to_value(&report).expect("report serializes")),
    }
    Ok(if report.all_hold() { EXIT_HOLDS } else { EXIT_FAILS })
}

fn verify_theorem(cli: &Cli, path: &Path, limits: Limits) -> Result<u8, Error> {
    let mut config = SweepConfig::parse(&fs::read_to_string(path)?)?;
    if let Some(seed) = cli.seed {
        for e in &mut config.ensembles {
            if let EnsembleSpec::Random { seed: s, .. } = e {
                *s = seed;
            }
        }
    }
    // command-line caps apply only when given explicitly
    if cli.brute_limit != fracfactor::factor::DEFAULT_BRUTE_FORCE_LIMIT {
        config.limits.brute_force = limits.brute_force;
    }
    if cli.crit_limit != fracfactor::criticality::DEFAULT_CRITICALITY_LIMIT {
        config.limits.criticality = limits.criticality;
    }
    let summary = run_sweep(&config)?;
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    if let Some(out) = &config.output {
        fs::write(out, format!("{json}\n"))?;
    }
    match cli.format {
        Format::Text => print!("{summary}"),
        Format::Json => println!("{json}"),
    }
    Ok(if summary.is_clean() { EXIT_HOLDS } else { EXIT_FAILS })
}

fn generate(cli: &Cli, args: &GenArgs, limits: Limits) -> Result<u8, Error> {
    let (graph, labels, kind) = match args.kind {
        GenKind::Random => {
            let p = parse_probability(&args.p)?;
            (random_graph(args.n, p, cli.seed.unwrap_or(0))?, None, None)
        }
        GenKind::Remark1 | GenKind::Remark2 => {
            let kind = if args.kind == GenKind::Remark1 {
                ConstructionKind::Remark1
            } else {
                ConstructionKind::Remark2
            };
            let params = FactorParams::new(args.a, args.b)?;
            let (g, labels) = kind.build(params, args.t)?;
            (g, Some(labels), Some((kind, params)))
        }
    };

    match &args.out {
        Some(out) => {
            fs::write(out, graph.to_edge_list())?;
            if let Some(labels) = &labels {
                fs::write(sidecar_path(out), labels.to_sidecar())?;
            }
        }
        None => print!("{}", graph.to_edge_list()),
    }

    if args.verify {
        let Some((kind, params)) = kind else {
            return Err(Error::InvalidInput("--verify applies to remark1 and remark2 only".into()));
        };
        // an Inconsistency error here means a claimed property failed
        let report = verify_sharpness(kind, params, args.t, limits)?;
        match cli.format {
            Format::Text => eprint!("{report}"),
            Format::Json => eprintln!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
        }
    }
    Ok(EXIT_HOLDS)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".labels.json");
    PathBuf::from(name)
}
