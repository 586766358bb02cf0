use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seqalloc_core::ceei::ceei_test;
use seqalloc_core::efficiency::{find_dominating_via_cycle, find_dominator, utilities};
use seqalloc_core::experiments::run_experiment;
use seqalloc_core::io::{
    allocation_json, parse_allocation, parse_instance, parse_sequence, sequence_json,
};
use seqalloc_core::sequences::{enumerate_relation, sequence_or_witness};
use seqalloc_core::{
    execute_sequence, Allocation, EfficiencyLevel, Error, ExperimentConfig, FairShares,
    FairnessLevel, Instance, Rational, Sequencing,
};

#[derive(Parser)]
#[command(name = "seqalloc", version, about = "Picking sequences, efficiency and fairness of allocations")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Efficiency and fairness levels of one allocation, with witnesses.
    Analyze {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        allocation: PathBuf,
    },
    /// Every allocation a sequence can generate.
    Sequence {
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated 1-based agents ("2,1,2") or a JSON file.
        #[arg(long)]
        sequence: String,
    },
    /// Equilibrium prices for an allocation, if any.
    Ceei {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        allocation: PathBuf,
    },
    /// The full sequence/allocation relation.
    Enumerate {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Census of random instances.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

struct Report {
    text: String,
    json: Value,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Error> {
    parse_instance(&read(path)?).map_err(|e| with_file(e, path))
}

fn load_allocation(path: &Path, inst: &Instance) -> Result<Allocation, Error> {
    parse_allocation(&read(path)?, inst).map_err(|e| with_file(e, path))
}

fn with_file(e: Error, path: &Path) -> Error {
    match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn strings(items: &[Rational]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn analyze(inst: &Instance, alloc: &Allocation) -> Result<Report, Error> {
    let mut text = String::new();
    let mut out = serde_json::Map::new();
    let utils = utilities(inst, alloc);
    writeln!(text, "allocation: {alloc}").unwrap();
    writeln!(text, "utilities: ({})", join(&utils)).unwrap();
    out.insert("allocation".into(), allocation_json(alloc));
    out.insert("utilities".into(), json!(strings(&utils)));

    let shares = FairShares::compute(inst)?;
    let mut prices = None;
    let fairness = shares.level(inst, alloc, |i, a| {
        prices = ceei_test(i, a)?;
        Ok(prices.is_some())
    })?;

    let witness = sequence_or_witness(inst, alloc);
    let exhaustive_dominator = match &witness {
        Sequencing::Frustrating(_) => None,
        Sequencing::Sequenceable(_) => find_dominator(inst, alloc)?,
    };
    let efficiency = match (&witness, &exhaustive_dominator) {
        (Sequencing::Frustrating(_), _) => EfficiencyLevel::NS,
        (_, Some(_)) => EfficiencyLevel::SnP,
        (_, None) => EfficiencyLevel::PO,
    };
    writeln!(text, "efficiency: {efficiency}").unwrap();
    writeln!(text, "fairness: {}", fairness.name()).unwrap();
    out.insert("efficiency".into(), json!(efficiency.name()));
    out.insert("fairness".into(), json!(fairness.name()));

    match &witness {
        Sequencing::Sequenceable(seq) => {
            writeln!(text, "sequence: {seq}").unwrap();
            out.insert("sequence".into(), sequence_json(seq));
        }
        Sequencing::Frustrating(sub) => {
            let domain = sub.domain();
            writeln!(text, "frustrating domain: {domain}").unwrap();
            writeln!(text, "frustrating sub-allocation: {sub}").unwrap();
            let domain_json: Vec<usize> = domain.iter().map(|o| o + 1).collect();
            out.insert("frustrating_domain".into(), json!(domain_json));
        }
    }

    if efficiency == EfficiencyLevel::NS {
        if let Some((cycle, dominator)) = find_dominating_via_cycle(inst, alloc) {
            let du = utilities(inst, &dominator);
            writeln!(text, "trading cycle: {cycle}").unwrap();
            writeln!(text, "dominator: {dominator}").unwrap();
            writeln!(text, "dominator utilities: ({})", join(&du)).unwrap();
            out.insert("trading_cycle".into(), cycle.to_json());
            out.insert(
                "dominator".into(),
                json!({"allocation": allocation_json(&dominator), "utilities": strings(&du)}),
            );
        }
    } else if let Some(dominator) = &exhaustive_dominator {
        let du = utilities(inst, dominator);
        writeln!(text, "dominator: {dominator}").unwrap();
        writeln!(text, "dominator utilities: ({})", join(&du)).unwrap();
        out.insert(
            "dominator".into(),
            json!({"allocation": allocation_json(dominator), "utilities": strings(&du)}),
        );
    }

    if let (FairnessLevel::Ceei, Some(p)) = (fairness, &prices) {
        writeln!(text, "prices: {p}").unwrap();
        writeln!(text, "prices (decimal): ({})", decimals(&p.decimals())).unwrap();
        out.insert("prices".into(), p.to_json());
        out.insert("prices_decimal".into(), json!(p.decimals()));
    }

    writeln!(text, "fair shares:").unwrap();
    for i in 0..inst.num_agents() {
        writeln!(
            text,
            "  agent {}: maxmin {}, proportional {}, minmax {}",
            i + 1,
            shares.maxmin(i),
            shares.proportional(i),
            shares.minmax(i)
        )
        .unwrap();
    }
    out.insert("fair_shares".into(), shares.report(fairness)["agents"].clone());
    Ok(Report {
        text,
        json: Value::Object(out),
    })
}

fn decimals(values: &[f64]) -> String {
    join(&values.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>())
}

fn sequence(inst: &Instance, arg: &str) -> Result<Report, Error> {
    let path = Path::new(arg);
    let seq = if path.is_file() {
        parse_sequence(&read(path)?).map_err(|e| with_file(e, path))?
    } else {
        parse_sequence(arg)?
    };
    let allocations = execute_sequence(inst, &seq)?;
    let mut text = format!("sequence: {seq}\n");
    for a in &allocations {
        let u = utilities(inst, a);
        writeln!(text, "{a}  utilities ({})", join(&u)).unwrap();
    }
    let json = json!({
        "sequence": sequence_json(&seq),
        "allocations": allocations
            .iter()
            .map(|a| json!({"allocation": allocation_json(a), "utilities": strings(&utilities(inst, a))}))
            .collect::<Vec<_>>(),
    });
    Ok(Report { text, json })
}

fn ceei(inst: &Instance, alloc: &Allocation) -> Result<Report, Error> {
    Ok(match ceei_test(inst, alloc)? {
        Some(p) => Report {
            text: format!(
                "CEEI\nprices: {p}\nprices (decimal): ({})\n",
                decimals(&p.decimals())
            ),
            json: json!({"ceei": true, "prices": p.to_json(), "prices_decimal": p.decimals()}),
        },
        None => Report {
            text: "not CEEI\n".into(),
            json: json!({"ceei": false}),
        },
    })
}

fn enumerate(inst: &Instance) -> Result<Report, Error> {
    let relation = enumerate_relation(inst)?;
    let mut text = String::new();
    for (seq, alloc) in &relation.pairs {
        writeln!(text, "{seq} -> {alloc}").unwrap();
    }
    let preimages = relation.preimages();
    let unreached: Vec<Allocation> = seqalloc_core::AllocationIter::new(inst.num_agents(), inst.num_objects())
        .filter(|a| !preimages.contains_key(a))
        .collect();
    writeln!(text, "edges: {}", relation.len()).unwrap();
    writeln!(text, "non-sequenceable: {}", join(&unreached)).unwrap();
    let mut json = relation.to_json();
    json["non_sequenceable"] = json!(unreached.iter().map(allocation_json).collect::<Vec<_>>());
    Ok(Report { text, json })
}

fn experiment(config: &Path, seed: Option<u64>, out_dir: &Path) -> Result<Report, Error> {
    let mut cfg: ExperimentConfig = serde_json::from_str(&read(config)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", config.display())))?;
    if let Some(s) = seed {
        cfg.generator.seed = s;
    }
    let report = run_experiment(&cfg.generator, cfg.instances)?;
    fs::create_dir_all(out_dir)
        .map_err(|e| Error::Domain(format!("{}: {e}", out_dir.display())))?;
    let write = |name: &str, body: String| {
        let path = out_dir.join(name);
        fs::write(&path, body).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
    };
    let json = report.to_json();
    write("counts.csv", report.to_csv())?;
    write("plot_data.csv", report.plot_data_csv())?;
    write(
        "report.json",
        serde_json::to_string_pretty(&json).expect("serializable report") + "\n",
    )?;
    let mut text = format!(
        "{} instances, {} allocations\nmean counts:\n",
        report.instances.len(),
        report.total()
    );
    write!(text, "{:>4}", "").unwrap();
    for f in FairnessLevel::ALL {
        write!(text, "{:>10}", f.name()).unwrap();
    }
    text.push('\n');
    for e in EfficiencyLevel::ALL {
        write!(text, "{:>4}", e.name()).unwrap();
        for f in FairnessLevel::ALL {
            write!(text, "{:>10.2}", report.aggregate[e.index()][f.index()].mean).unwrap();
        }
        text.push('\n');
    }
    writeln!(text, "wrote counts.csv, plot_data.csv, report.json to {}", out_dir.display()).unwrap();
    Ok(Report {
        text,
        json: json!({"total": report.total(), "instances": report.instances.len(), "out_dir": out_dir.display().to_string()}),
    })
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Analyze { instance, allocation } => {
            let inst = load_instance(instance)?;
            let alloc = load_allocation(allocation, &inst)?;
            analyze(&inst, &alloc)
        }
        Command::Sequence { instance, sequence: s } => sequence(&load_instance(instance)?, s),
        Command::Ceei { instance, allocation } => {
            let inst = load_instance(instance)?;
            let alloc = load_allocation(allocation, &inst)?;
            ceei(&inst, &alloc)
        }
        Command::Enumerate { instance } => enumerate(&load_instance(instance)?),
        Command::Experiment { config, seed, out_dir } => experiment(config, *seed, out_dir),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::Capacity(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("serializable output")
                ),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
