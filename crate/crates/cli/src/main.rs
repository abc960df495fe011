use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use nltab::abduction::{learn, AbductionConfig};
use nltab::harness::{
    attach_llfs, classify_all, ensemble_sets, evaluate, filter_split, hybrid, load_dataset, read_predictions,
    write_predictions, PredictionSet, Problem, Provenance,
};
use nltab::ingest::{load_llfs, load_syntactic, serialize_records, LlfDoc};
use nltab::kb::{load_prolog_kb, parse_learned, write_learned, Kb};
use nltab::llf::Pipeline;
use nltab::tableau::{Config, Proof, Prover};
use nltab::Label;

#[derive(Parser)]
#[command(name = "nltab", version, about = "Natural-logic tableau prover for inference problems")]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct ProverArgs {
    /// Prolog WordNet files or directories of `.pl` files.
    #[arg(long, num_args = 1..)]
    kb: Vec<PathBuf>,
    /// Learned-relation file to overlay on the KB.
    #[arg(long)]
    learned_kb: Option<PathBuf>,
    /// Prover configuration (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct DataArgs {
    /// Problems in SICK-style TSV.
    dataset: PathBuf,
    /// Logical form files covering the dataset sentences.
    #[arg(long, required = true, num_args = 1..)]
    llf: Vec<PathBuf>,
    /// Only problems of this split (TRAIN, TRIAL, TEST).
    #[arg(long)]
    split: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Convert syntactic records to logical forms.
    Convert {
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Prove one premise/hypothesis pair and print the proof.
    Prove {
        /// Logical form file holding both sentences.
        llf: PathBuf,
        premise: String,
        hypothesis: String,
        #[command(flatten)]
        prover: ProverArgs,
        /// Directory for the rendered proofs.
        #[arg(long)]
        proof_out: Option<PathBuf>,
    },
    /// Classify a dataset and report accuracy.
    Eval {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        prover: ProverArgs,
        /// Where to write the predictions.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Directory for a rendered proof per decided problem.
        #[arg(long)]
        proof_out: Option<PathBuf>,
    },
    /// Abduce lexical relations from a dataset.
    Learn {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        prover: ProverArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Audit report of supporting problems.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Combine prediction files by non-neutral voting.
    Ensemble {
        #[arg(required = true, num_args = 1..)]
        predictions: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Score the result against this dataset.
        #[arg(long)]
        gold: Option<PathBuf>,
    },
    /// Let decided prover labels override external predictions.
    Hybrid {
        prover: PathBuf,
        external: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        gold: Option<PathBuf>,
    },
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn model_name(p: &Path) -> String {
    p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned())
}

impl ProverArgs {
    fn prover(&self) -> Result<Prover> {
        let config = match &self.config {
            Some(p) => {
                let src = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Config::from_toml(&src).with_context(|| format!("parsing {}", p.display()))?
            }
            None => Config::default(),
        };
        let mut kb = if self.kb.is_empty() {
            Kb::empty()
        } else {
            let (wn, errors) = load_prolog_kb(&self.kb)?;
            for e in &errors {
                log::warn!("{e}");
            }
            log::info!("loaded {} synsets", wn.synset_count());
            Kb::new(wn)
        };
        if let Some(p) = &self.learned_kb {
            let src = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let set = parse_learned(&src).with_context(|| format!("parsing {}", p.display()))?;
            log::info!("loaded {} learned relations", set.len());
            kb = kb.with_learned(set);
        }
        Ok(Prover::new(kb, config))
    }
}

fn read_llfs(paths: &[PathBuf]) -> Result<Vec<LlfDoc>> {
    let mut docs = Vec::new();
    for p in paths {
        let loaded = load_llfs(p).with_context(|| format!("reading {}", p.display()))?;
        if !loaded.skipped.is_empty() {
            log::warn!("{}: {} records rejected", p.display(), loaded.skipped.len());
        }
        docs.extend(loaded.items);
    }
    Ok(docs)
}

impl DataArgs {
    fn problems(&self) -> Result<Vec<Problem>> {
        let ds = load_dataset(&self.dataset).with_context(|| format!("reading {}", self.dataset.display()))?;
        let mut problems = match &self.split {
            Some(s) => filter_split(ds.problems, s),
            None => ds.problems,
        };
        let covered = attach_llfs(&mut problems, &read_llfs(&self.llf)?);
        log::info!("{covered} of {} problems have both logical forms", problems.len());
        Ok(problems)
    }
}

fn write_proof(dir: &Path, name: &str, proof: &Proof) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(format!("{name}.proof"));
    fs::write(&path, proof.render()).with_context(|| format!("writing {}", path.display()))
}

fn convert(inputs: &[PathBuf], output: Option<&Path>) -> Result<()> {
    let pipeline = Pipeline::default();
    let mut records = Vec::new();
    let mut failed = 0;
    for p in inputs {
        let loaded = load_syntactic(p).with_context(|| format!("reading {}", p.display()))?;
        for e in &loaded.skipped {
            log::warn!("{}: {e}", p.display());
        }
        for doc in &loaded.items {
            match pipeline.convert(doc) {
                Ok(llf) => records.push(llf.to_record()),
                Err(e) => {
                    failed += 1;
                    log::warn!("{}: {e}", doc.sentence_id);
                }
            }
        }
    }
    log::info!("converted {} sentences, {failed} failed", records.len());
    emit(output, &serialize_records(&records))
}

fn prove(llf: &Path, premise: &str, hypothesis: &str, args: &ProverArgs, proof_out: Option<&Path>) -> Result<()> {
    let docs = read_llfs(&[llf.to_path_buf()])?;
    let find =
        |id: &str| docs.iter().find(|d| d.id == id).map(|d| &d.term).with_context(|| format!("no logical form {id}"));
    let prover = args.prover()?;
    let out = prover.prove(find(premise)?, find(hypothesis)?);
    emit(None, &format!("{}\n", out.label))?;
    if out.exhausted() {
        log::warn!("budget exhausted");
    }
    let proof = out.decisive().unwrap_or(&out.entailment);
    emit(None, &proof.render())?;
    if let Some(dir) = proof_out {
        write_proof(dir, &format!("{premise}-{hypothesis}-entailment"), &out.entailment)?;
        if let Some(c) = &out.contradiction {
            write_proof(dir, &format!("{premise}-{hypothesis}-contradiction"), c)?;
        }
    }
    Ok(())
}

fn eval(data: &DataArgs, args: &ProverArgs, output: Option<&Path>, proof_out: Option<&Path>) -> Result<()> {
    let problems = data.problems()?;
    let prover = args.prover()?;
    let preds = classify_all(&problems, &prover);
    if let Some(dir) = proof_out {
        for p in &problems {
            let (Some((prem, hyp)), true) = (p.llfs(), preds.get(&p.id).is_some_and(|l| !l.is_neutral())) else {
                continue;
            };
            if let Some(proof) = prover.prove(prem, hyp).decisive() {
                write_proof(dir, &p.id, proof)?;
            }
        }
    }
    let report = evaluate(&problems, &preds)?;
    emit(None, &format!("{} problems, accuracy {}%\n{report}\n", problems.len(), report.confusion.accuracy_display()))?;
    if let Some(p) = output {
        emit(Some(p), &write_predictions(&preds))?;
    }
    Ok(())
}

fn learn_cmd(data: &DataArgs, args: &ProverArgs, output: Option<&Path>, report: Option<&Path>) -> Result<()> {
    let problems = data.problems()?;
    let prover = args.prover()?;
    let learned = learn(&problems, &prover.kb, &prover.config, &AbductionConfig::default());
    log::info!("learned {} relations, {} conflicts dropped", learned.relations.len(), learned.conflicts.len());
    if let Some(p) = report {
        emit(Some(p), &learned.report())?;
    }
    emit(output, &write_learned(&learned.relations))
}

fn score(gold: Option<&Path>, set: &PredictionSet) -> Result<()> {
    let Some(path) = gold else { return Ok(()) };
    let ds = load_dataset(path).with_context(|| format!("reading {}", path.display()))?;
    let problems: Vec<Problem> = ds.problems.into_iter().filter(|p| set.predictions.contains_key(&p.id)).collect();
    let report = evaluate(&problems, &set.predictions)?;
    eprintln!("{}: accuracy {}% on {} problems", set.model, report.confusion.accuracy_display(), problems.len());
    eprint!("{report}");
    Ok(())
}

fn read_set(path: &Path, provenance: Provenance) -> Result<PredictionSet> {
    Ok(PredictionSet::new(&model_name(path), provenance, read_predictions(path)?))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            bail!("--jobs must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match &cli.cmd {
        Command::Convert { inputs, output } => convert(inputs, output.as_deref()),
        Command::Prove { llf, premise, hypothesis, prover, proof_out } => {
            prove(llf, premise, hypothesis, prover, proof_out.as_deref())
        }
        Command::Eval { data, prover, output, proof_out } => {
            eval(data, prover, output.as_deref(), proof_out.as_deref())
        }
        Command::Learn { data, prover, output, report } => {
            learn_cmd(data, prover, output.as_deref(), report.as_deref())
        }
        Command::Ensemble { predictions, output, gold } => {
            let sets = predictions.iter().map(|p| read_set(p, Provenance::Prover)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&PredictionSet> = sets.iter().collect();
            let out = ensemble_sets("ensemble", &refs)?;
            score(gold.as_deref(), &out)?;
            emit(output.as_deref(), &write_predictions(&out.predictions))
        }
        Command::Hybrid { prover, external, output, gold } => {
            let out = hybrid(&read_set(prover, Provenance::Prover)?, &read_set(external, Provenance::External)?)?;
            let overridden = out.predictions.values().filter(|l| **l != Label::Neutral).count();
            log::info!("{overridden} non-neutral labels in the combined set");
            score(gold.as_deref(), &out)?;
            emit(output.as_deref(), &write_predictions(&out.predictions))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed pipe downstream (`nltab ... | head`) is not a failure.
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
