use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use causet_lab::histories::{check_dom_axioms, full_specifications, random_events, AxiomScope};
use causet_lab::hunter::{hunt_with_checkpoint, Filter, SearchConfig};
use causet_lab::io::{
    axioms_json, ccs_json, causet_json, common_cause_json, event_json, gap_json, identity_json, load_model,
    matrix_json, measure_json, parse_event_text, parse_region_text, region_json, replication_json, verdict_json,
    CONVENTION,
};
use causet_lab::measure::{
    find_ccs, is_ccs, is_common_cause, is_correlated, CcsSearch, Relevance, ScreeningOptions, ZeroScreener,
};
use causet_lab::principles::{gap_closure_check, replicate_so1_to_so2, Caps, Engine};
use causet_lab::suite::{run_theorems, SuiteConfig};
use causet_lab::{check_principle, implication_matrix, CheckOptions, Error, Model, Principle, Rational, Region};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "causet-lab", version, about = "Screening-off principles on finite causal sets")]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a model and report its causet and domain-axiom check.
    Validate(ModelArg),
    /// Region operations for one pair, or the identity check over all pairs.
    Regions {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Full specifications of a region.
    Fullspec {
        #[command(flatten)]
        model: ModelArg,
        /// Comma-separated element names; empty for the empty region.
        #[arg(long, default_value = "")]
        region: String,
    },
    /// Check the four domain axioms.
    DomAxioms {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = 3)]
        family_size: usize,
        /// Check over this many seeded random events instead of the default universe.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Common-cause check for one screener, or a search for common-cause systems.
    Ccs {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Candidate common cause; without it, search for systems.
        #[arg(long)]
        cause: Option<String>,
        /// Partition to test, cells separated by `;`.
        #[arg(long, conflicts_with = "cause")]
        partition: Option<String>,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[arg(long, value_enum, default_value_t = SearchArg::All)]
        search: SearchArg,
        #[arg(long, value_enum, default_value_t = RelevanceArg::Printed)]
        relevance: RelevanceArg,
        #[arg(long, value_enum, default_value_t = ZeroArg::Vacuous)]
        zero_screener: ZeroArg,
    },
    /// Check one or all principles.
    Check {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value = "all")]
        principle: String,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Check even if the domain map fails its axioms.
        #[arg(long)]
        force: bool,
        /// Evaluate the definitions over every event.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Replay the SO1 ⇒ SO2 argument on a region pair, or on every pair.
    Replicate {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Compare the screeners the argument produces with those SO2 needs.
    Gap {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Search small causets and sampled measures for separations.
    Hunt(HuntArgs),
    /// Run the theorem suite over every causet up to a size.
    Theorems {
        #[arg(long, default_value_t = 4)]
        max_elements: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct ModelArg {
    /// Model or causet JSON file.
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long, requires = "b")]
    a: Option<String>,
    #[arg(long, requires = "a")]
    b: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// e.g. `region=3,algebra=256`; also `witnesses=N` and `strict`.
    #[arg(long, value_parser = parse_caps, default_value = "region=3,algebra=256")]
    caps: Caps,
    #[arg(long, value_enum, default_value_t = ZeroArg::Vacuous)]
    zero_screener: ZeroArg,
}

#[derive(Args)]
struct HuntArgs {
    #[arg(long, default_value_t = 3)]
    max_elements: usize,
    #[arg(long, default_value_t = 2)]
    alphabet: usize,
    #[arg(long, default_value_t = 5)]
    measures: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    denominator_bound: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Comma-separated: nonempty-flanks, finite-pair.
    #[arg(long, value_delimiter = ',')]
    filters: Vec<String>,
    /// Add the perfectly correlated measure on the constant histories.
    #[arg(long)]
    diagonal: bool,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZeroArg {
    Vacuous,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelevanceArg {
    Printed,
    Conditional,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchArg {
    All,
    Regions,
}

impl From<ZeroArg> for ZeroScreener {
    fn from(z: ZeroArg) -> Self {
        match z {
            ZeroArg::Vacuous => ZeroScreener::Vacuous,
            ZeroArg::Strict => ZeroScreener::Strict,
        }
    }
}

fn parse_caps(text: &str) -> Result<Caps, String> {
    let mut caps = Caps::default();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item == "strict" {
            caps.strict = true;
            continue;
        }
        let (key, value) = item.split_once('=').ok_or_else(|| format!("expected key=value, got `{item}`"))?;
        let value: usize = value.parse().map_err(|_| format!("`{value}` is not a count"))?;
        match key {
            "region" => caps.max_region_size = value,
            "algebra" => caps.max_algebra = value,
            "witnesses" => caps.max_witnesses = value,
            _ => return Err(format!("unknown cap `{key}`")),
        }
    }
    Ok(caps)
}

impl SweepArgs {
    fn options(&self) -> CheckOptions {
        CheckOptions { caps: self.caps, zero: self.zero_screener.into(), ..Default::default() }
    }
}

/// Failure with the flag or file it concerns.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

fn flag<T>(name: &str, r: causet_lab::Result<T>) -> Result<T, Usage> {
    r.map_err(|e| Usage(format!("--{name}: {e}")))
}

struct Outcome {
    ok: bool,
    body: Value,
}

fn report(ok: bool, mut body: Value) -> Outcome {
    if let Value::Object(map) = &mut body {
        map.insert("convention".into(), json!(CONVENTION));
    }
    Outcome { ok, body }
}

fn pair_list(model: &Model<Rational>, pair: &PairArgs) -> Result<Vec<(Region, Region)>, Usage> {
    let causet = model.causet();
    match (&pair.a, &pair.b) {
        (Some(a), Some(b)) => {
            let ra = flag("a", parse_region_text(causet, a))?;
            let rb = flag("b", parse_region_text(causet, b))?;
            if !flag("a", causet.is_spacelike(ra, rb))? {
                return Err(Usage("--a/--b: regions are not space-like".into()));
            }
            Ok(vec![(ra, rb)])
        }
        _ => Ok(causet.spacelike_pairs()),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Usage> {
    match &cli.command {
        Command::Validate(m) => {
            let model = load_model(&m.model)?;
            let space = model.space();
            let axioms = axioms_json(space, model.axioms());
            Ok(report(
                model.axioms().all_passed(),
                json!({
                    "valid": true,
                    "causet": causet_json(model.causet()),
                    "alphabet": space.alphabet(),
                    "histories": space.len(),
                    "canonical_dom": model.dom().is_canonical(),
                    "measure": measure_json(space, model.measure()),
                    "dom_axioms": axioms,
                }),
            ))
        }
        Command::Regions { model, pair } => {
            let model = load_model(&model.model)?;
            let causet = model.causet();
            let pairs = pair_list(&model, pair)?;
            let mut all_hold = true;
            let mut rows = Vec::new();
            for (a, b) in pairs {
                let id = causet.verify_crucial_identity(a, b)?;
                all_hold &= id.holds();
                let region = |r: Region| -> Result<Value, Usage> {
                    Ok(json!({
                        "region": region_json(causet, r),
                        "past": region_json(causet, causet.past(r)?),
                        "complement": region_json(causet, causet.causal_complement(r)?),
                        "closure": region_json(causet, causet.causal_closure(r)?),
                        "causally_finite": causet.is_causally_finite(r)?,
                    }))
                };
                rows.push(json!({
                    "a": region(a)?,
                    "b": region(b)?,
                    "mutual_past": region_json(causet, causet.mutual_past(a, b)?),
                    "truncated_joint_past": region_json(causet, causet.truncated_joint_past(a, b)?),
                    "identity": identity_json(causet, &id),
                }));
            }
            Ok(report(all_hold, json!({ "pairs": rows.len(), "all_hold": all_hold, "results": rows })))
        }
        Command::Fullspec { model, region } => {
            let model = load_model(&model.model)?;
            let space = model.space();
            let r = flag("region", parse_region_text(model.causet(), region))?;
            let phi = full_specifications(space, model.dom(), r)?;
            let partition = causet_lab::histories::check_partition(space, &phi);
            Ok(report(
                partition.is_ok(),
                json!({
                    "region": region_json(model.causet(), r),
                    "count": phi.len(),
                    "is_partition": partition.is_ok(),
                    "partition_error": partition.err().map(|e| e.to_string()),
                    "full_specifications": phi.iter().map(|&e| event_json(space, e)).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::DomAxioms { model, family_size, sample, seed } => {
            let model = load_model(&model.model)?;
            let space = model.space();
            let scope = match sample {
                Some(k) => AxiomScope::sampled(random_events(space, *k, *seed), *family_size),
                None => AxiomScope { family_size: *family_size, ..AxiomScope::default_for(space, model.dom()) },
            };
            let r = check_dom_axioms(space, model.dom(), &scope)?;
            Ok(report(r.all_passed(), axioms_json(space, &r)))
        }
        Command::Ccs { model, a, b, cause, partition, max_size, search, relevance, zero_screener } => {
            let model = load_model(&model.model)?;
            let space = model.space();
            let m = model.measure();
            let ea = flag("a", parse_event_text(space, a))?;
            let eb = flag("b", parse_event_text(space, b))?;
            let correlated = is_correlated(m, ea, eb);
            let zero: ZeroScreener = (*zero_screener).into();
            if let Some(c) = cause {
                let ec = flag("cause", parse_event_text(space, c))?;
                let options = ScreeningOptions {
                    relevance: match relevance {
                        RelevanceArg::Printed => Relevance::Printed,
                        RelevanceArg::Conditional => Relevance::Conditional,
                    },
                    zero,
                };
                let v = is_common_cause(m, ea, eb, ec, options);
                return Ok(report(v.qualifies, json!({ "correlated": correlated, "common_cause": common_cause_json(&v) })));
            }
            if let Some(p) = partition {
                let cells = p
                    .split(';')
                    .map(|cell| parse_event_text(space, cell))
                    .collect::<causet_lab::Result<Vec<_>>>();
                let cells = flag("partition", cells)?;
                let v = flag("partition", is_ccs(space, m, ea, eb, &cells, zero))?;
                return Ok(report(v.qualifies, json!({ "correlated": correlated, "ccs": ccs_json(&v) })));
            }
            let mode = match search {
                SearchArg::All => CcsSearch::AllPartitions,
                SearchArg::Regions => CcsSearch::Regions,
            };
            let found = find_ccs(space, model.dom(), m, ea, eb, *max_size, mode)?;
            Ok(report(
                !found.is_empty(),
                json!({
                    "correlated": correlated,
                    "systems": found
                        .iter()
                        .map(|p| p.iter().map(|&e| event_json(space, e)).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Check { model, principle, sweep, force, exhaustive } => {
            let model = load_model(&model.model)?;
            let mut options = sweep.options();
            options.force = *force;
            if *exhaustive {
                options.engine = Engine::Exhaustive;
            }
            let space = model.space();
            if principle == "all" {
                let matrix = implication_matrix(&model, &options)?;
                let ok = matrix.signature().iter().all(|&h| h);
                return Ok(report(ok, matrix_json(space, &matrix)));
            }
            let p = Principle::parse(principle)
                .ok_or_else(|| Usage(format!("--principle: unknown principle `{principle}`")))?;
            let v = check_principle(&model, p, &options)?;
            Ok(report(v.satisfied, verdict_json(space, &v)))
        }
        Command::Replicate { model, pair, sweep } => {
            let model = load_model(&model.model)?;
            let options = sweep.options();
            let mut ok = true;
            let mut rows = Vec::new();
            for (a, b) in pair_list(&model, pair)? {
                let r = replicate_so1_to_so2(&model, a, b, &options)?;
                ok &= !r.applicable || r.passed();
                rows.push(replication_json(model.space(), &r));
            }
            Ok(report(ok, json!({ "passed": ok, "results": rows })))
        }
        Command::Gap { model, pair } => {
            let model = load_model(&model.model)?;
            let mut ok = true;
            let mut rows = Vec::new();
            for (a, b) in pair_list(&model, pair)? {
                let g = gap_closure_check(model.space(), model.dom(), a, b)?;
                ok &= g.equal;
                rows.push(gap_json(model.space(), &g));
            }
            Ok(report(ok, json!({ "all_equal": ok, "results": rows })))
        }
        Command::Hunt(_) => unreachable!("hunt prints JSON lines"),
        Command::Theorems { max_elements, alphabet, seed } => {
            let mut config = SuiteConfig::new(*max_elements);
            config.alphabet = *alphabet;
            config.seed = *seed;
            let r = run_theorems(&config)?;
            Ok(report(r.passed(), r.to_json()))
        }
    }
}

fn hunt(args: &HuntArgs, pretty: bool) -> Result<bool, Usage> {
    let filters = args
        .filters
        .iter()
        .map(|f| Filter::parse(f).ok_or_else(|| Usage(format!("--filters: unknown filter `{f}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let config = SearchConfig {
        max_elements: args.max_elements,
        alphabet: args.alphabet,
        measures_per_model: args.measures,
        seed: args.seed,
        denominator_bound: args.denominator_bound,
        caps: args.sweep.caps,
        zero: args.sweep.zero_screener.into(),
        workers: args.workers,
        filters,
        include_diagonal: args.diagonal,
    };
    let r = hunt_with_checkpoint(&config, args.checkpoint.as_deref(), args.resume)?;
    let lines = r.to_json_lines();
    if pretty {
        let mut out = String::new();
        for line in lines.lines() {
            let v: Value = serde_json::from_str(line).expect("valid JSON line");
            out.push_str(&serde_json::to_string_pretty(&v).expect("serializable"));
            out.push('\n');
        }
        emit(&out);
    } else {
        emit(&lines);
    }
    Ok(r.findings.is_empty() && r.summary.witness_failures == 0)
}

/// Writes to standard output; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Hunt(args) => hunt(args, cli.pretty),
        _ => run(&cli).map(|out| {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&out.body)
            } else {
                serde_json::to_string(&out.body)
            };
            emit(&format!("{}\n", text.expect("serializable")));
            out.ok
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(message)) => {
            eprintln!("error: {}", message.replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
