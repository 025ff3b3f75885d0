//! The `alcft` command line.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use alcft_core::engine::{EntailmentProblem, EntailmentVerdict, Mode, SearchConfig};
use alcft_core::klm::{
    run_trials, search_counterexample, ConceptShape, Postulate, PostulateVerdict, TrialConfig, Witness,
};
use alcft_core::mlp::verify_network_faithfulness;
use alcft_core::syntax::WeightedKb;
use alcft_core::weighted::{self, PairViolation, PairViolationKind};
use alcft_core::{FuzzyInterpretation, Logic};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::fint::{parse_interpretation, serialize_interpretation};
use crate::fkb::{parse_axiom, parse_kb, serialize_kb};
use crate::fnet::{parse_network, parse_stimuli};
use crate::parallel::{parallel_search, Parallelism};
use crate::records;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    /// The check succeeded or the property holds within bounds.
    Ok = 0,
    /// Refuted, violated or not a model.
    Violated = 1,
    /// Bad arguments or unreadable input.
    Usage = 2,
    /// No verdict because the bounds were cut short by the budget or a timeout.
    Truncated = 3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Records,
}

#[derive(Debug, Parser)]
#[command(name = "alcft", version, about = "Reasoning workbench for fuzzy ALC with typicality")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_logic(s: &str) -> Result<Logic, String> {
    s.parse().map_err(|e: alcft_core::algebra::UnknownLogic| e.to_string())
}

fn parse_postulate(s: &str) -> Result<Postulate, String> {
    s.parse().map_err(|e: alcft_core::klm::KlmError| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntailMode {
    Plain,
    Fm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KlmMode {
    /// Randomized trials.
    Verify,
    /// Exhaustive atomic search, then randomized search.
    FindCounterexample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FileKind {
    Auto,
    Kb,
    Interp,
    Net,
    Stimuli,
}

#[derive(Debug, Args)]
pub struct Bounds {
    /// Largest domain size enumerated.
    #[arg(long)]
    pub max_domain: Option<usize>,
    /// Degrees range over the grid {0, 1/q, ..., 1}.
    #[arg(long)]
    pub denominator: Option<u32>,
    /// Maximum number of interpretations examined.
    #[arg(long, default_value_t = SearchConfig::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Syntax-check a .fkb, .fint, .fnet or .fstim file.
    Parse {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = FileKind::Auto)]
        kind: FileKind,
        /// Print the canonical serialization.
        #[arg(long)]
        canonical: bool,
    },
    /// Check whether an interpretation is a faithful multipreference model.
    CheckModel {
        kb: PathBuf,
        interpretation: PathBuf,
        /// Evaluate in this logic instead of the knowledge base's.
        #[arg(long, value_parser = parse_logic)]
        logic: Option<Logic>,
    },
    /// Search for a bounded countermodel to an axiom.
    Entail {
        kb: PathBuf,
        /// Goal axiom in .fkb syntax, e.g. "T(Penguin) <= Fly <= 0.5".
        goal: String,
        #[arg(long, value_enum, default_value_t = EntailMode::Fm)]
        mode: EntailMode,
        #[arg(long, value_parser = parse_logic)]
        logic: Option<Logic>,
        #[command(flatten)]
        bounds: Bounds,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Write the countermodel, if any, to this .fint file.
        #[arg(long)]
        countermodel_out: Option<PathBuf>,
    },
    /// Test a KLM-style postulate in one logic.
    KlmTest {
        #[arg(long, value_parser = parse_postulate)]
        postulate: Postulate,
        #[arg(long, value_parser = parse_logic)]
        logic: Logic,
        #[arg(long, value_enum, default_value_t = KlmMode::Verify)]
        mode: KlmMode,
        /// Randomized trials in verify mode.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Export a network's knowledge base and interpretation and check faithfulness.
    Mlp {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        stimuli: PathBuf,
        /// Directory for <stem>.fkb, <stem>.fint and <stem>.report.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// A failure that ends the run with [`Exit::Usage`].
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: crate::ParseError },
    #[error("goal: {0}")]
    Goal(crate::ParseError),
    #[error("{0}")]
    Other(String),
    #[error(transparent)]
    Output(#[from] io::Error),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn parsed<T>(path: &Path, r: Result<T, crate::ParseError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

fn load_kb(path: &Path) -> Result<WeightedKb, CliError> {
    parsed(path, parse_kb(&read(path)?))
}

fn other(e: impl std::fmt::Display) -> CliError {
    CliError::Other(e.to_string())
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to `err`.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return Exit::Usage;
            }
            let _ = write!(out, "{}", e.render());
            return Exit::Ok;
        }
    };
    match run(&cli, out, err) {
        Ok(exit) => exit,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            Exit::Usage
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Exit, CliError> {
    let records = cli.format == Format::Records;
    match &cli.command {
        Command::Parse { file, kind, canonical } => parse_cmd(file, *kind, *canonical, records, out),
        Command::CheckModel { kb, interpretation, logic } => check_model(kb, interpretation, *logic, records, out, err),
        Command::Entail { kb, goal, mode, logic, bounds, jobs, timeout, countermodel_out } => {
            let kb = load_kb(kb)?;
            let goal = parse_axiom(goal, &kb.signature).map_err(CliError::Goal)?;
            let logic = logic.unwrap_or(kb.logic);
            let mode = match mode {
                EntailMode::Plain => Mode::Plain,
                EntailMode::Fm => Mode::Fm,
            };
            let config = SearchConfig::new(logic, bounds.max_domain.unwrap_or(2), bounds.denominator.unwrap_or(4))
                .with_budget(bounds.budget)
                .with_mode(mode)
                .with_seed(bounds.seed);
            let timeout = match timeout {
                Some(t) if !t.is_finite() || *t < 0.0 => return Err(other("--timeout must be a nonnegative number")),
                t => t.map(Duration::from_secs_f64),
            };
            let mut kb = kb;
            kb.logic = logic;
            let problem = EntailmentProblem { kb: Some(&kb), goal: &goal, mode };
            let verdict = parallel_search(&problem, &config, Parallelism { jobs: *jobs, timeout }).map_err(other)?;
            if let (Some(path), Some(cm)) = (countermodel_out, verdict.countermodel()) {
                write_file(path, &serialize_interpretation(cm))?;
            }
            report_entail(&goal.to_string(), &config, &verdict, records, out)
        }
        Command::KlmTest { postulate, logic, mode, trials, bounds } => {
            klm(*postulate, *logic, *mode, *trials, bounds, records, out)
        }
        Command::Mlp { net, stimuli, out_dir } => mlp(net, stimuli, out_dir.as_deref(), records, out),
    }
}

fn detect(path: &Path) -> Option<FileKind> {
    match path.extension()?.to_str()? {
        "fkb" => Some(FileKind::Kb),
        "fint" => Some(FileKind::Interp),
        "fnet" => Some(FileKind::Net),
        "fstim" => Some(FileKind::Stimuli),
        _ => None,
    }
}

fn parse_cmd(
    path: &Path,
    kind: FileKind,
    canonical: bool,
    records: bool,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    let kind = match kind {
        FileKind::Auto => {
            detect(path).ok_or_else(|| other(format!("{}: cannot tell the file kind; pass --kind", path.display())))?
        }
        k => k,
    };
    let text = read(path)?;
    let (name, summary, canon) = match kind {
        FileKind::Kb => {
            let kb = parsed(path, parse_kb(&text))?;
            let summary = format!(
                "{} concepts, {} roles, {} individuals, {} distinguished, {} tbox, {} weighted, {} abox",
                kb.signature.concepts.len(),
                kb.signature.roles.len(),
                kb.signature.individuals.len(),
                kb.distinguished.len(),
                kb.tbox.len(),
                kb.weighted.len(),
                kb.abox.len()
            );
            ("kb", summary, serialize_kb(&kb))
        }
        FileKind::Interp => {
            let i = parsed(path, parse_interpretation(&text))?;
            let summary = format!("domain of {}, {} concepts", i.size(), i.concept_valuations().count());
            ("interpretation", summary, serialize_interpretation(&i))
        }
        FileKind::Net => {
            let net = parsed(path, parse_network(&text))?;
            let summary = format!("{} units, {} synapses", net.units().len(), net.synapses().len());
            ("network", summary, crate::fnet::serialize_network(&net))
        }
        FileKind::Stimuli => {
            let s = parsed(path, parse_stimuli(&text))?;
            let summary = format!("{} stimuli of dimension {}", s.len(), s.dimension());
            ("stimuli", summary, crate::fnet::serialize_stimuli(&s))
        }
        FileKind::Auto => unreachable!(),
    };
    if records {
        records::write(out, &records::header("parse"))?;
        let mut r = json!({ "record": "parsed", "kind": name, "summary": summary });
        if canonical {
            r["canonical"] = json!(canon);
        }
        records::write(out, &r)?;
    } else {
        writeln!(out, "ok: {name} ({summary})")?;
        if canonical {
            write!(out, "{canon}")?;
        }
    }
    Ok(Exit::Ok)
}

fn describe_pair(v: &PairViolation, domain: &[String]) -> String {
    let (x, y) = (&domain[v.x], &domain[v.y]);
    match v.kind {
        PairViolationKind::PreferenceWithoutWeight => format!(
            "{}: {x} <_{} {y} ({} > {}) but W({x}) = {} is not above W({y}) = {}",
            v.concept, v.concept, v.degree_x, v.degree_y, v.weight_x, v.weight_y
        ),
        PairViolationKind::WeightWithoutPreference => format!(
            "{}: W({x}) = {} > W({y}) = {} but not {x} <_{} {y} ({} vs {})",
            v.concept, v.weight_x, v.weight_y, v.concept, v.degree_x, v.degree_y
        ),
    }
}

fn check_model(
    kb_path: &Path,
    interp_path: &Path,
    logic: Option<Logic>,
    records: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Exit, CliError> {
    let kb = load_kb(kb_path)?;
    let text = read(interp_path)?;
    let interp = parsed(interp_path, parse_interpretation(&text))?;
    let logic = logic.unwrap_or(kb.logic);
    let declares_logic = text.lines().any(|l| l.trim_start().starts_with("logic"));
    if declares_logic && interp.logic() != logic {
        writeln!(err, "warning: interpretation declares {}, evaluating in {logic}", interp.logic())?;
    }
    let interp = prepare_interpretation(interp, &kb, logic);
    let fm = weighted::is_fm_model(&interp, &kb).map_err(other)?;
    let coherence = weighted::is_coherent(&interp, &kb).map_err(other)?;
    let tables = weighted::weight_tables(&interp, &kb).map_err(other)?;
    let domain = interp.domain();
    let verdict = fm.is_fm_model();

    if records {
        records::write(out, &records::header("check-model"))?;
        for v in &fm.strict.violations {
            records::write(out, &records::strict_violation(v))?;
        }
        for t in &tables {
            records::write(out, &records::weight_table(t, domain))?;
        }
        for v in &coherence.violations {
            records::write(out, &records::pair_violation(v, domain))?;
        }
        records::write(
            out,
            &json!({
                "record": "verdict",
                "logic": logic.name(),
                "strict": fm.strict.holds(),
                "faithful": fm.faithfulness.holds(),
                "coherent": coherence.holds(),
                "fm_model": verdict,
            }),
        )?;
    } else {
        let yes = |b: bool| if b { "holds" } else { "violated" };
        writeln!(out, "logic: {logic}")?;
        writeln!(out, "strict part: {}", yes(fm.strict.holds()))?;
        for v in &fm.strict.violations {
            writeln!(out, "  {}: {} has degree {}", v.path, v.axiom, v.degree)?;
        }
        writeln!(out, "weights:")?;
        let width = tables.iter().map(|t| t.concept.len()).max().unwrap_or(0);
        for t in &tables {
            let cells: Vec<String> = domain.iter().zip(&t.weights).map(|(x, w)| format!("{x}={w}")).collect();
            writeln!(out, "  W_{:<width$}  {}", t.concept, cells.join("  "))?;
        }
        writeln!(out, "faithfulness: {}", yes(fm.faithfulness.holds()))?;
        for v in &fm.faithfulness.violations {
            writeln!(out, "  {}", describe_pair(v, domain))?;
        }
        writeln!(out, "coherence: {}", yes(coherence.holds()))?;
        for v in coherence.violations.iter().filter(|v| v.kind == PairViolationKind::WeightWithoutPreference) {
            writeln!(out, "  {}", describe_pair(v, domain))?;
        }
        writeln!(out, "fm-model: {}", if verdict { "yes" } else { "no" })?;
    }
    Ok(if verdict { Exit::Ok } else { Exit::Violated })
}

fn report_entail(
    goal: &str,
    config: &SearchConfig,
    verdict: &EntailmentVerdict,
    records: bool,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    let stats = verdict.stats();
    let incomplete = stats.truncated || stats.cancelled;
    let mode = match config.mode {
        Mode::Plain => "plain",
        Mode::Fm => "fm",
    };
    if records {
        records::write(out, &records::header("entail"))?;
        let mut s = records::search_stats(stats);
        s["logic"] = json!(config.logic.name());
        s["mode"] = json!(mode);
        s["goal"] = json!(goal);
        records::write(out, &s)?;
        let v = match verdict {
            EntailmentVerdict::Refuted { countermodel, index, .. } => json!({
                "record": "verdict",
                "verdict": "refuted",
                "index": index.to_string(),
                "countermodel": records::interpretation(countermodel),
            }),
            EntailmentVerdict::NoCountermodelWithinBounds { .. } => {
                json!({ "record": "verdict", "verdict": "no-countermodel-within-bounds", "complete": !incomplete })
            }
        };
        records::write(out, &v)?;
    } else {
        writeln!(out, "goal: {goal}")?;
        writeln!(
            out,
            "search: mode {mode}, logic {}, |domain| <= {}, q = {}",
            config.logic, config.max_domain, config.denominator
        )?;
        let space = stats.space.map_or_else(|| "more than 2^128".to_string(), |n| n.to_string());
        writeln!(out, "examined {} of {space} interpretations ({} models)", stats.examined, stats.models)?;
        match verdict {
            EntailmentVerdict::Refuted { countermodel, index, .. } => {
                writeln!(out, "verdict: refuted by interpretation #{index}")?;
                write!(out, "{}", indent(&serialize_interpretation(countermodel)))?;
            }
            EntailmentVerdict::NoCountermodelWithinBounds { .. } => {
                writeln!(out, "verdict: no countermodel within bounds")?;
                if stats.truncated {
                    writeln!(out, "warning: the budget of {} stopped the search early", config.budget)?;
                }
                if stats.cancelled {
                    writeln!(out, "warning: the timeout stopped the search early")?;
                }
            }
        }
    }
    Ok(match verdict {
        EntailmentVerdict::Refuted { .. } => Exit::Violated,
        _ if incomplete => Exit::Truncated,
        _ => Exit::Ok,
    })
}

fn human_witness(w: &Witness, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "witness: {}", w.instantiation)?;
    for (ax, d) in &w.premises {
        writeln!(out, "  premise    {ax}   (degree {d})")?;
    }
    writeln!(out, "  conclusion {}   (degree {})", w.conclusion.0, w.conclusion.1)?;
    write!(out, "{}", indent(&serialize_interpretation(&w.interpretation)))
}

fn klm(
    postulate: Postulate,
    logic: Logic,
    mode: KlmMode,
    trials: u64,
    bounds: &Bounds,
    records: bool,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    if records {
        records::write(out, &records::header("klm-test"))?;
    }
    match mode {
        KlmMode::Verify => {
            let cfg = TrialConfig {
                trials,
                max_domain: bounds.max_domain.unwrap_or(5),
                max_denominator: bounds.denominator.unwrap_or(6),
                ..TrialConfig::standard(bounds.seed)
            };
            if cfg.max_domain == 0 || cfg.max_denominator == 0 {
                return Err(other("--max-domain and --denominator must be positive"));
            }
            let report = run_trials(postulate, logic, &cfg).map_err(other)?;
            if records {
                records::write(
                    out,
                    &json!({
                        "record": "trials",
                        "postulate": postulate.name(),
                        "logic": logic.name(),
                        "trials": report.trials,
                        "non_vacuous": report.non_vacuous,
                        "uncertified": report.uncertified,
                        "violations": report.violation_count,
                        "seed": bounds.seed,
                    }),
                )?;
                for w in &report.witnesses {
                    records::write(out, &records::witness(w))?;
                }
            } else {
                writeln!(out, "{postulate} in {logic}: {} trials, seed {}", report.trials, bounds.seed)?;
                writeln!(
                    out,
                    "non-vacuous {}, uncertified {}, violations {}",
                    report.non_vacuous, report.uncertified, report.violation_count
                )?;
                if let Some(w) = report.witnesses.first() {
                    human_witness(w, out)?;
                }
            }
            Ok(if report.violation_count == 0 { Exit::Ok } else { Exit::Violated })
        }
        KlmMode::FindCounterexample => {
            let config = SearchConfig::new(logic, bounds.max_domain.unwrap_or(3), bounds.denominator.unwrap_or(4))
                .with_budget(bounds.budget)
                .with_seed(bounds.seed);
            let report = search_counterexample(postulate, &config, &ConceptShape::default()).map_err(other)?;
            if records {
                records::write(
                    out,
                    &json!({
                        "record": "search",
                        "postulate": postulate.name(),
                        "logic": logic.name(),
                        "examined": report.examined,
                        "uncertified": report.uncertified,
                        "atomic_complete": report.atomic_complete,
                        "budget_exhausted": report.budget_exhausted,
                        "violated": report.verdict.is_violated(),
                    }),
                )?;
                if let PostulateVerdict::Violated(w) = &report.verdict {
                    records::write(out, &records::witness(w))?;
                }
            } else {
                writeln!(out, "{postulate} in {logic}: examined {}", report.examined)?;
                match &report.verdict {
                    PostulateVerdict::Violated(w) => human_witness(w, out)?,
                    PostulateVerdict::Holds { .. } => {
                        let scope = if report.atomic_complete {
                            "all atomic instances over the bounded space, then random instances"
                        } else {
                            "part of the atomic instances (budget exhausted)"
                        };
                        writeln!(out, "no violation found; searched {scope}")?;
                    }
                }
            }
            Ok(match report.verdict {
                PostulateVerdict::Violated(_) => Exit::Violated,
                _ if !report.atomic_complete => Exit::Truncated,
                _ => Exit::Ok,
            })
        }
    }
}

fn mlp(
    net_path: &Path,
    stimuli_path: &Path,
    out_dir: Option<&Path>,
    records: bool,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    let net = parsed(net_path, parse_network(&read(net_path)?))?;
    let stimuli = parsed(stimuli_path, parse_stimuli(&read(stimuli_path)?))?;
    let report = verify_network_faithfulness(&net, &stimuli).map_err(other)?;
    let domain = report.interpretation.domain();

    let mut text: Vec<u8> = Vec::new();
    if records {
        records::write(&mut text, &records::header("mlp"))?;
        for t in &report.tables {
            records::write(&mut text, &records::weight_table(t, domain))?;
        }
        for v in &report.coherence.violations {
            records::write(&mut text, &records::pair_violation(v, domain))?;
        }
        records::write(
            &mut text,
            &json!({
                "record": "verdict",
                "units": net.units().len(),
                "weighted_inclusions": report.kb.weighted.len(),
                "stimuli": stimuli.len(),
                "faithful": report.is_faithful(),
                "coherent": report.is_coherent(),
            }),
        )?;
    } else {
        writeln!(
            text,
            "network: {} units, {} weighted inclusions, {} stimuli",
            net.units().len(),
            report.kb.weighted.len(),
            stimuli.len()
        )?;
        writeln!(text, "faithful: {}", if report.is_faithful() { "yes" } else { "no" })?;
        for v in &report.fm.faithfulness.violations {
            writeln!(text, "  {}", describe_pair(v, domain))?;
        }
        writeln!(text, "coherent: {}", if report.is_coherent() { "yes" } else { "no" })?;
        for v in report.coherence.violations.iter().filter(|v| v.kind == PairViolationKind::WeightWithoutPreference) {
            writeln!(text, "  {}", describe_pair(v, domain))?;
        }
    }

    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
        let stem = net_path.file_stem().and_then(|s| s.to_str()).unwrap_or("network");
        let kb_file = dir.join(format!("{stem}.fkb"));
        let int_file = dir.join(format!("{stem}.fint"));
        let rep_file = dir.join(format!("{stem}.report"));
        write_file(&kb_file, &serialize_kb(&report.kb))?;
        write_file(&int_file, &serialize_interpretation(&report.interpretation))?;
        write_file(&rep_file, &String::from_utf8(text.clone()).expect("utf-8"))?;
        if !records {
            for f in [&kb_file, &int_file, &rep_file] {
                writeln!(text, "wrote {}", f.display())?;
            }
        }
    }
    out.write_all(&text)?;
    Ok(if report.is_faithful() { Exit::Ok } else { Exit::Violated })
}

/// Interpretation with every concept and role of `kb` declared, in `logic`.
fn prepare_interpretation(mut interp: FuzzyInterpretation, kb: &WeightedKb, logic: Logic) -> FuzzyInterpretation {
    interp.set_logic(logic);
    interp.declare(&kb.signature);
    interp
}
