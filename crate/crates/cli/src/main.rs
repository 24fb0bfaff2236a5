use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kgdf_core::corpus::{self, CorpusEntry};
use kgdf_core::gdf::{self, Gdf};
use kgdf_core::poly::rational_json;
use kgdf_core::skein;
use kgdf_core::state::{self, JonesModel, StateAssignment, TraceReport};
use kgdf_core::verify::{self, Limits, Suite};

#[derive(Parser)]
#[command(name = "kgdf", version, about = "Dubrovnik polynomial and Gauss diagram formulas from Gauss codes")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Corpus file (`name: code` lines) or a file holding a single Gauss code.
    #[arg(long, conflicts_with = "code")]
    input: Option<PathBuf>,
    /// Gauss code given inline, e.g. "O1- U2- O3- U1- O2- U3-".
    #[arg(long, allow_hyphen_values = true)]
    code: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Kauffman,
    Homfly,
}

#[derive(Subcommand)]
enum Command {
    /// DK, HOMFLY-PT, Jones and the p_{k,l} table of every knot.
    Invariants {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        max_order: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Builds A_{k,l} or a Jones formula and writes it as JSON.
    Gdf {
        #[arg(long, requires = "l", conflicts_with = "model")]
        k: Option<u32>,
        #[arg(long, requires = "k")]
        l: Option<u32>,
        #[arg(long, value_enum, requires = "order")]
        model: Option<Model>,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairs a GDF file with every knot of the input.
    Pair {
        #[arg(long)]
        gdf: PathBuf,
        #[command(flatten)]
        input: Input,
    },
    /// Runs a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Defaults to the built-in corpus.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Prints the traversal record of one state.
    StateTrace {
        #[command(flatten)]
        input: Input,
        /// Comma-separated labels, one per arrow in increasing id order.
        #[arg(long)]
        state: String,
        /// Knot to trace when the input holds several.
        #[arg(long)]
        knot: Option<String>,
    },
}

enum Failure {
    Input(anyhow::Error),
    Check(anyhow::Error),
}

type Outcome = Result<(), Failure>;

fn input_err<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn check_err<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Check(e.into())
}

fn read_entries(input: &Input) -> Result<Vec<CorpusEntry>, Failure> {
    match (&input.input, &input.code) {
        (_, Some(code)) => Ok(vec![CorpusEntry::new("input", code).map_err(input_err)?]),
        (Some(path), None) => read_corpus_file(path),
        (None, None) => Err(Failure::Input(anyhow!("one of --input or --code is required"))),
    }
}

fn read_corpus_file(path: &Path) -> Result<Vec<CorpusEntry>, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(input_err)?;
    corpus::parse_input(&text).with_context(|| format!("parsing {}", path.display())).map_err(input_err)
}

fn invariants_json(e: &CorpusEntry, max_order: u32) -> Result<Value, Failure> {
    let g = &e.diagram;
    let d = skein::dubrovnik_d(g);
    let dk = skein::dubrovnik_dk(g);
    let h = skein::homfly(g);
    let jd = skein::jones_from_dk_poly(&dk).map_err(check_err)?;
    let jh = skein::jones_from_homfly_poly(&h).map_err(check_err)?;
    if jd != jh {
        return Err(Failure::Check(anyhow!("{}: Jones routes disagree: {jd} vs {jh}", e.name)));
    }
    let p = skein::coefficient_table(&dk, max_order).map_err(check_err)?;
    let table: Vec<Value> = p.iter().map(|((k, l), c)| json!({"k": k, "l": l, "value": rational_json(c)})).collect();
    Ok(json!({
        "name": e.name,
        "code": e.code,
        "arrows": g.arrow_count(),
        "writhe": g.writhe(),
        "D": {"text": d.to_string(), "terms": d.to_json()},
        "DK": {"text": dk.to_string(), "terms": dk.to_json()},
        "HOMFLY": {"text": h.to_string(), "terms": h.to_json()},
        "jones": jd.to_string(),
        "p": table,
    }))
}

fn cmd_invariants(input: &Input, max_order: u32, format: Format) -> Outcome {
    let entries = read_entries(input)?;
    let mut docs = Vec::new();
    for e in &entries {
        docs.push(invariants_json(e, max_order)?);
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&Value::Array(docs)).expect("serializable")),
        Format::Text => {
            for doc in &docs {
                println!("knot {}", doc["name"].as_str().unwrap_or_default());
                println!("  code    {}", doc["code"].as_str().unwrap_or_default());
                println!("  writhe  {}", doc["writhe"]);
                println!("  D       {}", doc["D"]["text"].as_str().unwrap_or_default());
                println!("  DK      {}", doc["DK"]["text"].as_str().unwrap_or_default());
                println!("  HOMFLY  {}", doc["HOMFLY"]["text"].as_str().unwrap_or_default());
                println!("  Jones   {}", doc["jones"].as_str().unwrap_or_default());
                for entry in doc["p"].as_array().into_iter().flatten() {
                    let c = kgdf_core::poly::rational_from_json(&entry["value"]).expect("written above");
                    println!("  p{}_{}    {}", entry["k"], entry["l"], c);
                }
            }
        }
    }
    Ok(())
}

fn cmd_gdf(k: Option<u32>, l: Option<u32>, model: Option<Model>, order: Option<u32>, out: Option<&Path>) -> Outcome {
    let (name, formula) = match (k, l, model, order) {
        (Some(k), Some(l), None, _) => {
            let table = gdf::cached_table(k + l).map_err(input_err)?;
            (format!("A_{{{k},{l}}}"), table.a_kl(k, l))
        }
        (None, None, Some(m), Some(o)) => {
            let table = gdf::cached_table(o).map_err(input_err)?;
            let (model, tag) = match m {
                Model::Kauffman => (JonesModel::Kauffman, "DK"),
                Model::Homfly => (JonesModel::Homfly, "H"),
            };
            (format!("A_{o}^{tag}"), table.a_jones(model, o))
        }
        _ => return Err(Failure::Input(anyhow!("give either --k and --l, or --model and --order"))),
    };
    let (unsigned, rest) = gdf::collapse_mixed(&formula).map_err(check_err)?;
    let mut doc = formula.to_json();
    doc["name"] = json!(name);
    doc["collapse"] = json!({
        "unsigned": unsigned.to_json()["terms"],
        "signed": rest.to_json()["terms"],
        "strict": rest.is_empty(),
    });
    let text = serde_json::to_string_pretty(&doc).expect("serializable");
    match out {
        Some(path) => {
            fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display())).map_err(input_err)?;
            println!("{name}: {} signed terms", formula.len());
            println!("unsigned {unsigned}");
            if !rest.is_empty() {
                println!("signed {rest}");
            }
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_pair(gdf_path: &Path, input: &Input) -> Outcome {
    let text = fs::read_to_string(gdf_path).with_context(|| format!("reading {}", gdf_path.display())).map_err(input_err)?;
    let value: Value = serde_json::from_str(&text).context("GDF file is not JSON").map_err(input_err)?;
    let f = Gdf::from_json(&value).map_err(input_err)?;
    for e in read_entries(input)? {
        println!("{} {}", e.name, gdf::pair(&f, &e.diagram));
    }
    Ok(())
}

fn cmd_verify(suite: &str, input: Option<&Path>) -> Outcome {
    let suite: Suite = suite.parse().map_err(|e: String| Failure::Input(anyhow!(e)))?;
    let entries = match input {
        Some(path) => read_corpus_file(path)?,
        None => corpus::default_corpus(),
    };
    let report = verify::run_suite(suite, &entries, &Limits::default()).map_err(check_err)?;
    print!("{report}");
    let (pass, fail) = report.count();
    println!("SUMMARY {} pass={pass} fail={fail}", suite.name());
    if fail > 0 {
        return Err(Failure::Check(anyhow!("{fail} checks failed")));
    }
    Ok(())
}

fn cmd_state_trace(input: &Input, spec: &str, knot: Option<&str>) -> Outcome {
    let entries = read_entries(input)?;
    let entry = match knot {
        Some(name) => entries.iter().find(|e| e.name == name).ok_or_else(|| Failure::Input(anyhow!("no knot `{name}`")))?,
        None if entries.len() == 1 => &entries[0],
        None => return Err(Failure::Input(anyhow!("input has {} knots; pick one with --knot", entries.len()))),
    };
    let sigma = StateAssignment::parse_for(&entry.diagram, spec).map_err(input_err)?;
    let trace = state::run_process(&entry.diagram, &sigma);
    println!("{}", TraceReport(&trace));
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.jobs {
        configure_jobs(n).map_err(input_err)?;
    }
    match &cli.command {
        Command::Invariants { input, max_order, format } => cmd_invariants(input, *max_order, *format),
        Command::Gdf { k, l, model, order, out } => cmd_gdf(*k, *l, *model, *order, out.as_deref()),
        Command::Pair { gdf, input } => cmd_pair(gdf, input),
        Command::Verify { suite, input } => cmd_verify(suite, input.as_deref()),
        Command::StateTrace { input, state, knot } => cmd_state_trace(input, state, knot.as_deref()),
    }
}

#[cfg(feature = "parallel")]
fn configure_jobs(n: usize) -> anyhow::Result<()> {
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")
}

#[cfg(not(feature = "parallel"))]
fn configure_jobs(_n: usize) -> anyhow::Result<()> {
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
