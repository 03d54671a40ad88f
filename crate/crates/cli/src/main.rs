//! `arsent`: command-line front end for the sentiment pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or parse error.

mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufRead, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use arsent_core::classifier::{
    grid_search, read_svmlight, train, write_svmlight, Model, TrainConfig,
};
use arsent_core::eval::{
    cohen_kappa, read_corpus, read_ratings, split_corpus, EvaluationReport, Topic,
};
use arsent_core::expansion::{
    expand_lexicon, CandidateSource, ExpansionMode, FixtureProvider, OperatorAnswer,
    PendingReviewLog, ReviewItem, Reviewer, SynsetResult,
};
use arsent_core::normalize_text;
use arsent_core::pipeline::{predict_topics, run_experiment, vectorize, Prediction, Resources};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{FileConfig, Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "arsent",
    version,
    about = "Lexicon-based sentiment analysis for Arabic (MSA and Egyptian dialect) text",
    arg_required_else_help = true
)]
struct Cli {
    #[command(flatten)]
    resources: ResourceArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[command(next_help_heading = "Resources")]
struct ResourceArgs {
    /// TOML run configuration; flags override its values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory holding the resource files under their default names
    #[arg(long, global = true, value_name = "DIR")]
    data_dir: Option<PathBuf>,
    /// Polarity lexicon TSV
    #[arg(long, global = true, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Idiom lexicon TSV
    #[arg(long, global = true, value_name = "FILE")]
    idioms: Option<PathBuf>,
    /// Negator list
    #[arg(long, global = true, value_name = "FILE")]
    negators: Option<PathBuf>,
    /// Intensifier list
    #[arg(long, global = true, value_name = "FILE")]
    intensifiers: Option<PathBuf>,
    /// Question-term list
    #[arg(long, global = true, value_name = "FILE")]
    questions: Option<PathBuf>,
    /// Supplication/wish-term list
    #[arg(long, global = true, value_name = "FILE")]
    wishful: Option<PathBuf>,
    /// Stopword list
    #[arg(long, global = true, value_name = "FILE")]
    stopwords: Option<PathBuf>,
    /// POS lookup table (word<TAB>tag)
    #[arg(long, global = true, value_name = "FILE")]
    tags: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the normalized form of a text file ("-" reads stdin)
    Normalize { input: PathBuf },
    /// Grow the lexicon from a corpus using a synonym provider
    Expand(ExpandArgs),
    /// Write SVM-light feature vectors for a labeled corpus
    Extract {
        #[arg(long, value_name = "FILE")]
        corpus: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[command(flatten)]
        split: SplitArgs,
    },
    /// Train a linear model from an SVM-light file
    Train {
        #[arg(long, value_name = "FILE")]
        features: PathBuf,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Shuffling seed
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        hyper: HyperArgs,
    },
    /// Write `id<TAB>label<TAB>margin` for each topic
    Predict {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, value_name = "FILE")]
        corpus: PathBuf,
        /// Output file (default: stdout)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[command(flatten)]
        split: SplitArgs,
    },
    /// Split, train on the training part and report on the test part
    Evaluate(EvaluateArgs),
    /// Cohen's kappa for a ratings file (mean pairwise for 3+ raters)
    Kappa {
        #[arg(long, value_name = "FILE")]
        ratings: PathBuf,
    },
    /// Rule-based net score per topic, without a classifier
    Score {
        #[arg(long, value_name = "FILE")]
        corpus: PathBuf,
        /// Output file (default: stdout)
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ExpandArgs {
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Synonym/antonym fixture TSV
    #[arg(long, value_name = "FILE")]
    provider: PathBuf,
    /// Ask about out-of-vocabulary words on the terminal
    #[arg(long)]
    interactive: bool,
    /// Write the grown lexicon here instead of overwriting --lexicon
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Append unresolved words to this review file
    #[arg(long, value_name = "FILE")]
    pending: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Part {
    All,
    Train,
    Dev,
    Test,
}

#[derive(Debug, Args)]
struct SplitArgs {
    /// Which part of the corpus split to use
    #[arg(long, value_enum, default_value = "all")]
    split: Part,
    /// Split seed
    #[arg(long)]
    seed: Option<u64>,
    /// Split without keeping genre proportions
    #[arg(long)]
    no_stratify: bool,
}

#[derive(Debug, Args)]
struct HyperArgs {
    /// L2 regularization strength
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    /// Scale each slot by its largest training value
    #[arg(long)]
    scaling: bool,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long, value_name = "FILE")]
    corpus: PathBuf,
    /// Save the trained model here
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Split seed
    #[arg(long)]
    seed: Option<u64>,
    /// Shuffling seed for training
    #[arg(long)]
    train_seed: Option<u64>,
    /// Split without keeping genre proportions
    #[arg(long)]
    no_stratify: bool,
    /// Write test-set predictions here
    #[arg(long, value_name = "FILE")]
    predictions: Option<PathBuf>,
    /// Pick lambda and epochs by accuracy on the dev part first
    #[arg(long)]
    tune: bool,
    /// Write the report as TSV instead of a table
    #[arg(long)]
    tsv: bool,
    #[command(flatten)]
    hyper: HyperArgs,
}

/// Bad invocation rather than bad data.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() {
    std::process::exit(run(std::env::args_os()));
}

fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                1
            } else {
                2
            }
        }
    }
}

fn run_config(r: &ResourceArgs, mut o: Overrides) -> Result<RunConfig> {
    let file = match &r.config {
        Some(p) if !p.is_file() => {
            return Err(usage(format!("config file not found: {}", p.display())))
        }
        Some(p) => Some(FileConfig::load(p)?),
        None => None,
    };
    o.data_dir = r.data_dir.clone();
    o.lexicon = r.lexicon.clone();
    o.idioms = r.idioms.clone();
    o.negators = r.negators.clone();
    o.intensifiers = r.intensifiers.clone();
    o.questions = r.questions.clone();
    o.wishful = r.wishful.clone();
    o.stopwords = r.stopwords.clone();
    o.tags = r.tags.clone();
    let cfg = RunConfig::resolve(file, &o);
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(usage(format!("file not found: {}", path.display())))
    }
}

fn load_resources(cfg: &RunConfig) -> Result<Resources> {
    let mut res = Resources::load(&cfg.resources)?;
    res.shifters = cfg.shifters;
    Ok(res)
}

fn load_corpus(path: &Path) -> Result<Vec<Topic>> {
    require_file(path)?;
    Ok(read_corpus(path)?)
}

fn select(corpus: Vec<Topic>, cfg: &RunConfig, part: Part) -> Result<Vec<Topic>> {
    if part == Part::All {
        return Ok(corpus);
    }
    let split = split_corpus(&corpus, &cfg.split)?;
    Ok(match part {
        Part::Train => split.train,
        Part::Dev => split.dev,
        _ => split.test,
    })
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn render_predictions(predictions: &[Prediction]) -> String {
    let mut out = String::new();
    for p in predictions {
        let _ = writeln!(out, "{}\t{}\t{:.6}", p.id, p.label, p.margin);
    }
    out
}

fn dispatch(cli: Cli) -> Result<()> {
    let r = &cli.resources;
    match cli.command {
        Command::Normalize { input } => {
            let mut text = String::new();
            if input.as_os_str() == "-" {
                io::stdin().read_to_string(&mut text)?;
            } else {
                require_file(&input)?;
                text = fs::read_to_string(&input)
                    .with_context(|| format!("cannot read {}", input.display()))?;
            }
            write_output(None, &format!("{}\n", normalize_text(&text)))
        }
        Command::Expand(args) => expand(r, args),
        Command::Extract { corpus, out, split } => {
            let cfg = run_config(r, split_overrides(&split))?;
            let topics = select(load_corpus(&corpus)?, &cfg, split.split)?;
            let res = load_resources(&cfg)?;
            let data = vectorize(&res.analyzer(), &topics)?;
            write_svmlight(&data, &out)?;
            eprintln!("{} vectors -> {}", data.len(), out.display());
            Ok(())
        }
        Command::Train {
            features,
            model,
            seed,
            hyper,
        } => {
            let mut o = hyper_overrides(&hyper);
            o.train_seed = seed;
            let cfg = run_config(r, o)?;
            require_file(&features)?;
            let data = read_svmlight(&features)?;
            let m = train(&data, &cfg.train)?;
            m.save(&model)?;
            eprintln!(
                "trained on {} vectors, training accuracy {:.5}% -> {}",
                data.len(),
                m.accuracy(&data)? * 100.0,
                model.display()
            );
            Ok(())
        }
        Command::Predict {
            model,
            corpus,
            out,
            split,
        } => {
            let cfg = run_config(r, split_overrides(&split))?;
            require_file(&model)?;
            let m = Model::load(&model)?;
            let topics = select(load_corpus(&corpus)?, &cfg, split.split)?;
            let res = load_resources(&cfg)?;
            let predictions = predict_topics(&res.analyzer(), &m, &topics)?;
            write_output(out.as_deref(), &render_predictions(&predictions))
        }
        Command::Evaluate(args) => evaluate(r, args),
        Command::Kappa { ratings } => {
            require_file(&ratings)?;
            let items = read_ratings(&ratings)?;
            let k = cohen_kappa(&items)?;
            let raters = items.first().map_or(0, Vec::len);
            write_output(
                None,
                &format!(
                    "items\t{}\nraters\t{}\nkappa\t{:.6}\n",
                    items.len(),
                    raters,
                    k
                ),
            )
        }
        Command::Score { corpus, out } => {
            let cfg = run_config(r, Overrides::default())?;
            let topics = load_corpus(&corpus)?;
            let res = load_resources(&cfg)?;
            let analyzer = res.analyzer();
            let mut text = String::new();
            let (mut agree, mut labeled) = (0, 0);
            for t in &topics {
                let s = analyzer.lexicon_rule_score(&t.text)?;
                let _ = writeln!(text, "{}\t{}\t{}", t.id, s.net, s.label);
                if let Some(gold) = t.label {
                    labeled += 1;
                    agree += usize::from(gold == s.label);
                }
            }
            write_output(out.as_deref(), &text)?;
            if labeled > 0 {
                eprintln!(
                    "agreement with gold: {agree}/{labeled} ({:.2}%)",
                    agree as f64 * 100.0 / labeled as f64
                );
            }
            Ok(())
        }
    }
}

fn split_overrides(s: &SplitArgs) -> Overrides {
    Overrides {
        split_seed: s.seed,
        no_stratify: s.no_stratify,
        ..Default::default()
    }
}

fn hyper_overrides(h: &HyperArgs) -> Overrides {
    Overrides {
        lambda: h.lambda,
        epochs: h.epochs,
        scaling: h.scaling,
        ..Default::default()
    }
}

struct TerminalReviewer<R> {
    input: R,
}

impl<R: BufRead> Reviewer for TerminalReviewer<R> {
    fn review(&mut self, item: &ReviewItem, syn: &SynsetResult) -> OperatorAnswer {
        let related = |words: &[(String, Option<String>)]| {
            words
                .iter()
                .map(|(w, _)| w.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        eprintln!();
        eprintln!("word:        {}", item.word);
        eprintln!("translation: {}", syn.translation.as_deref().unwrap_or("-"));
        eprintln!("synonyms:    {}", related(&syn.synonyms));
        eprintln!("antonyms:    {}", related(&syn.antonyms));
        loop {
            eprint!("[p]ositive, [n]egative, [r]eject, [s]kip: ");
            let mut line = String::new();
            match self.input.read_line(&mut line) {
                Ok(0) | Err(_) => return OperatorAnswer::Skip,
                Ok(_) => match line.parse() {
                    Ok(answer) => return answer,
                    Err(e) => eprintln!("{e}"),
                },
            }
        }
    }
}

fn expand(r: &ResourceArgs, args: ExpandArgs) -> Result<()> {
    let cfg = run_config(r, Overrides::default())?;
    require_file(&args.provider)?;
    let corpus = load_corpus(&args.corpus)?;
    let res = load_resources(&cfg)?;
    let provider = FixtureProvider::load(&args.provider)?;
    let log = args.pending.as_ref().map(PendingReviewLog::new);
    let source = CandidateSource {
        stopwords: &res.stopwords,
        tagger: &res.tagger,
    };
    let stdin = io::stdin();
    let mut reviewer = TerminalReviewer {
        input: stdin.lock(),
    };
    let mode = if args.interactive {
        ExpansionMode::Interactive {
            reviewer: &mut reviewer,
            pending: log.as_ref(),
        }
    } else {
        ExpansionMode::Batch {
            pending: log.as_ref(),
        }
    };
    let (grown, report) = expand_lexicon(&corpus, &res.lexicon, &provider, mode, source)?;
    let out = args.out.unwrap_or_else(|| cfg.resources.lexicon.clone());
    grown.save(&out)?;
    for e in &report.provider_errors {
        eprintln!("warning: {e}");
    }
    write_output(None, &format!("{report}\n"))?;
    eprintln!("{} entries -> {}", grown.len(), out.display());
    Ok(())
}

fn evaluate(r: &ResourceArgs, args: EvaluateArgs) -> Result<()> {
    let mut o = hyper_overrides(&args.hyper);
    o.split_seed = args.seed;
    o.train_seed = args.train_seed;
    o.no_stratify = args.no_stratify;
    let cfg = run_config(r, o)?;
    let corpus = load_corpus(&args.corpus)?;
    let res = load_resources(&cfg)?;
    let analyzer = res.analyzer();
    let split = split_corpus(&corpus, &cfg.split)?;

    let mut train_cfg = cfg.train;
    if args.tune {
        if split.dev.is_empty() {
            return Err(usage("--tune needs a non-empty dev split"));
        }
        let train_set = vectorize(&analyzer, &split.train)?;
        let dev_set = vectorize(&analyzer, &split.dev)?;
        let (best, acc) = grid_search(
            &train_set,
            &dev_set,
            &[1e-4, 1e-3, 1e-2, 1e-1],
            &[50, 100, 200, 400],
            &train_cfg,
        )?;
        eprintln!(
            "tuned: lambda={} epochs={} (dev accuracy {:.5}%)",
            best.lambda,
            best.epochs,
            acc * 100.0
        );
        train_cfg = best;
    }

    let exp = run_experiment(&analyzer, &split, &train_cfg)?;
    if let Some(p) = &args.model {
        exp.model.save(p)?;
    }
    if let Some(p) = &args.predictions {
        write_output(Some(p), &render_predictions(&exp.predictions))?;
    }
    write_output(
        None,
        &render_report(&exp.report, &train_cfg, &split_sizes(&split), args.tsv),
    )
}

fn split_sizes(s: &arsent_core::eval::CorpusSplit) -> [usize; 3] {
    [s.train.len(), s.dev.len(), s.test.len()]
}

fn render_report(
    report: &EvaluationReport,
    cfg: &TrainConfig,
    sizes: &[usize; 3],
    tsv: bool,
) -> String {
    if tsv {
        return report.to_tsv();
    }
    format!(
        "split train/dev/test: {}/{}/{}\nmodel: lambda={} epochs={} seed={} scaling={}\n\n{}",
        sizes[0],
        sizes[1],
        sizes[2],
        cfg.lambda,
        cfg.epochs,
        cfg.seed,
        cfg.scaling,
        report.to_text()
    )
}
