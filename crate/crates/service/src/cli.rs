//! The `kgrec` command line. Machine-readable output goes to stdout,
//! diagnostics to stderr.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kgrec_core::baselines::{BaselineError, ProjectTopicMatrix, TopFilter};
use kgrec_core::classify::{
    read_archive, read_dataset, write_archive, ClassifierKind, ClassifierModel, ClassifyError,
    ModelArchive, RepositoryRecord, TrainConfig, VectorizerModel,
};
use kgrec_core::curation::Curation;
use kgrec_core::eval::{
    asr_at_k, augmentation_cases, fcr, full_cases, map_at_k, render_table, run_experiment, split,
    write_csv, EvalError, EvaluationCase, ExperimentConfig, ExperimentReport, Judgments,
    RelevanceSource, System, TestCase,
};
use kgrec_core::recommend::{stack, Augmenter, RecommendError, RecommenderConfig};
use kgrec_core::spread::{compute_weights, Kgrec, SpreadError};
use kgrec_core::store::seed::seed_graph;
use kgrec_core::store::snapshot;
use kgrec_core::store::EntityState;
use serde::Deserialize;
use thiserror::Error;

use crate::auth::TokenIssuer;
use crate::engine::{Command, Engine};
use crate::http::{load_models, serve, AppState};
use crate::persist::{
    encode_snapshot, init_seed, load_snapshot, recover, write_atomic, Durable, Paths, PersistError,
};
use crate::popularity::{fetch_popularity, GithubConfig, PopularityCache, PopularityError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Persist(#[from] PersistError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Spread(#[from] SpreadError),
    #[error(transparent)]
    Recommend(#[from] RecommendError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Popularity(#[from] PopularityError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn io_at(path: impl AsRef<Path>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.as_ref().display().to_string();
    move |source| CliError::Io { path, source }
}

#[derive(Debug, Parser)]
#[command(
    name = "kgrec",
    version,
    about = "Topic recommendation over a curated knowledge graph"
)]
pub struct Cli {
    /// Snapshot file; its journal and secret live next to it.
    #[arg(
        long,
        env = "KGREC_SNAPSHOT",
        global = true,
        default_value = "kgrec-snapshot.jsonl"
    )]
    pub snapshot: PathBuf,
    /// Popularity cache applied before weights are computed.
    #[arg(long, global = true)]
    pub popularity_cache: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, global = true, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, global = true, default_value_t = 5)]
    pub k: usize,
    #[arg(long, global = true, default_value_t = 3)]
    pub m: usize,
    #[arg(long, global = true, default_value_t = 2)]
    pub g: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Snapshot import and export.
    Kg {
        #[command(subcommand)]
        action: KgAction,
    },
    /// Topic weights.
    Weights {
        #[command(subcommand)]
        action: WeightsAction,
    },
    /// Train a classifier on a JSONL dataset.
    Train(TrainArgs),
    /// Rank topics related to the given ones.
    Augment {
        #[arg(long, value_delimiter = ',', required = true)]
        topics: Vec<String>,
    },
    /// Recommend topics for a text.
    Recommend(RecommendArgs),
    /// Score recommendation lists or run an experiment.
    Evaluate(EvaluateArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
    /// Topic popularity counts.
    Popularity {
        #[command(subcommand)]
        action: PopularityAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum KgAction {
    /// Validate a snapshot file and install it as `--snapshot`.
    Import {
        #[arg(required_unless_present = "seed_graph")]
        file: Option<PathBuf>,
        /// Install the built-in seed graph instead.
        #[arg(long, conflicts_with = "file")]
        seed_graph: bool,
    },
    /// Write the current state, journal included, as a snapshot.
    Export {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeightsAction {
    /// Print `topic  W  P  D` for every accepted topic.
    Compute,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Lr,
    Mnb,
}

impl From<KindArg> for ClassifierKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Lr => ClassifierKind::LogisticRegressionOvr,
            KindArg::Mnb => ClassifierKind::MultinomialNaiveBayes,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value = "lr")]
    pub kind: KindArg,
    #[arg(long)]
    pub out: PathBuf,
    /// Inverse regularization strength.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AugmenterArg {
    Kgrec,
    Topfilter,
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Text to classify; read from stdin when neither this nor --text-file is given.
    #[arg(long, conflicts_with = "text_file")]
    pub text: Option<String>,
    #[arg(long)]
    pub text_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "kgrec")]
    pub augmenter: AugmenterArg,
    /// Project dataset backing the topfilter augmenter.
    #[arg(long, required_if_eq("augmenter", "topfilter"))]
    pub data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// JSONL of judged lists: {"system", "project", "recommended", "relevance"}.
    #[arg(long, conflicts_with = "data", required_unless_present = "data")]
    pub cases: Option<PathBuf>,
    /// Project dataset to split and run systems on.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Classifier archive; switches to text-only cases with stacked systems.
    #[arg(long, requires = "data")]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    /// Share of each test project's topics hidden from augmenters.
    #[arg(long, default_value_t = 0.5)]
    pub holdout: f64,
    #[arg(long)]
    pub sample: Option<usize>,
    /// Human judgments (JSONL); replaces ground truth for relevance.
    #[arg(long)]
    pub judgments: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub listen: SocketAddr,
    /// Directory of `*.model` archives, served under their file stem.
    #[arg(long)]
    pub models: Option<PathBuf>,
    #[arg(long, env = "KGREC_MAINTAINER_TOKEN", hide_env_values = true)]
    pub maintainer_token: Option<String>,
    /// Mutations between snapshot checkpoints; 0 checkpoints only on shutdown.
    #[arg(long, default_value_t = 100)]
    pub checkpoint_every: u64,
}

#[derive(Debug, Subcommand)]
pub enum PopularityAction {
    /// Query GitHub for repository counts and write the cache.
    Fetch {
        /// Topics to fetch; defaults to every accepted topic of the snapshot.
        #[arg(long, value_delimiter = ',')]
        topics: Vec<String>,
        #[arg(long, default_value = "https://api.github.com")]
        api: String,
        #[arg(long, env = "GITHUB_TOKEN", hide_env_values = true)]
        token: Option<String>,
        /// Output cache; defaults to --popularity-cache.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 2100)]
        pace_ms: u64,
    },
}

impl Cli {
    fn recommender(&self) -> Result<RecommenderConfig, CliError> {
        let cfg = RecommenderConfig {
            k: self.k,
            m: self.m,
            g: self.g,
            alpha: self.alpha,
            beta: self.beta,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn paths(&self) -> Paths {
        Paths::for_snapshot(&self.snapshot)
    }

    /// Current state with the popularity cache, if any, applied.
    fn load_engine(&self) -> Result<Engine, CliError> {
        if !self.snapshot.exists() {
            return Err(CliError::Usage(format!(
                "snapshot {} does not exist; create one with `kgrec kg import --seed-graph`",
                self.snapshot.display()
            )));
        }
        let (mut engine, rec) = recover(&self.paths())?;
        if rec.replayed > 0 {
            log::info!("replayed {} journal entries", rec.replayed);
        }
        if let Some(p) = &self.popularity_cache {
            let cache = PopularityCache::load(p)?;
            let missing = cache.apply(&mut engine.graph);
            if !missing.is_empty() {
                eprintln!(
                    "warning: {} accepted topics have no popularity count",
                    missing.len()
                );
            }
        }
        Ok(engine)
    }
}

fn read_records(path: &Path) -> Result<Vec<RepositoryRecord>, CliError> {
    let f = File::open(path).map_err(io_at(path))?;
    Ok(read_dataset(BufReader::new(f))?)
}

fn read_model(path: &Path) -> Result<ModelArchive, CliError> {
    let f = File::open(path).map_err(io_at(path))?;
    Ok(read_archive(BufReader::new(f))?)
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => write_atomic(p, bytes).map_err(CliError::from),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(io_at("<stdout>")),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Commands::Kg { action } => kg(&cli, action),
        Commands::Weights {
            action: WeightsAction::Compute,
        } => weights(&cli),
        Commands::Train(args) => train(args),
        Commands::Augment { topics } => augment(&cli, topics),
        Commands::Recommend(args) => recommend(&cli, args),
        Commands::Evaluate(args) => evaluate(&cli, args),
        Commands::Serve(args) => run_server(&cli, args),
        Commands::Popularity { action } => popularity(&cli, action),
    }
}

fn kg(cli: &Cli, action: &KgAction) -> Result<(), CliError> {
    match action {
        KgAction::Import {
            file,
            seed_graph: seed,
        } => {
            let engine = if *seed {
                Engine::new(seed_graph(), Curation::default())
            } else {
                let path = file.as_ref().expect("clap requires a file");
                Engine::from(load_snapshot(path)?)
            };
            let paths = cli.paths();
            write_atomic(&paths.snapshot, &encode_snapshot(&engine, 0))?;
            if paths.journal.exists() {
                std::fs::remove_file(&paths.journal).map_err(io_at(&paths.journal))?;
            }
            eprintln!(
                "installed {} topics and {} relationships into {}",
                engine.graph.topic_count(),
                engine.graph.relationship_count(),
                paths.snapshot.display()
            );
            Ok(())
        }
        KgAction::Export { out } => {
            let engine = cli.load_engine()?;
            let (_, rec) = recover(&cli.paths())?;
            let mut buf = Vec::new();
            snapshot::export(&mut buf, &engine.graph, &engine.curation, rec.sequence)
                .map_err(io_at("<buffer>"))?;
            write_out(out.as_deref(), &buf)
        }
    }
}

fn weights(cli: &Cli) -> Result<(), CliError> {
    let engine = cli.load_engine()?;
    let w = compute_weights(&engine.graph, cli.alpha, cli.beta)?;
    let mut rows: Vec<(&str, f64, f64, f64)> = w
        .weights
        .iter()
        .filter_map(|(t, &wt)| {
            let name = engine.graph.topic(*t).ok()?.full_name.as_str();
            Some((name, wt, w.popularity[t], w.degree_score[t]))
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(b.0));
    let mut out = String::from("topic\tW\tP\tD\n");
    for (n, wt, p, d) in rows {
        out.push_str(&format!("{n}\t{wt:.6}\t{p:.6}\t{d:.6}\n"));
    }
    write_out(None, out.as_bytes())
}

fn train(args: &TrainArgs) -> Result<(), CliError> {
    let records = read_records(&args.data)?;
    let vectorizer = VectorizerModel::fit(&records)?;
    let cfg = TrainConfig {
        c: args.c,
        max_iter: args.max_iter,
        ..Default::default()
    };
    let classifier = ClassifierModel::train(args.kind.into(), &records, &vectorizer, &cfg)?;
    let unconverged = classifier.unconverged().len();
    eprintln!(
        "trained {} labels on {} records, {} features{}",
        classifier.labels().len(),
        records.len(),
        vectorizer.len(),
        if unconverged > 0 {
            format!("; {unconverged} labels did not converge")
        } else {
            String::new()
        }
    );
    let archive = ModelArchive {
        vectorizer,
        classifier,
    };
    let mut buf = Vec::new();
    write_archive(&mut buf, &archive)?;
    write_atomic(&args.out, &buf)?;
    Ok(())
}

fn augment(cli: &Cli, topics: &[String]) -> Result<(), CliError> {
    let engine = cli.load_engine()?;
    let kg = Kgrec::from_graph(&engine.graph, cli.alpha, cli.beta)?;
    let seeds = kg.seed_from_names(topics.iter().map(|t| (t.as_str(), 1.0)))?;
    let res = kg.augment(&seeds, cli.k)?;
    if res.failed {
        eprintln!("no related topics found");
    }
    let mut out = String::new();
    for (t, s) in &res.ranked {
        out.push_str(&format!("{}\t{s:.6}\n", kg.name(*t).unwrap_or_default()));
    }
    write_out(None, out.as_bytes())
}

fn read_text(args: &RecommendArgs) -> Result<String, CliError> {
    if let Some(t) = &args.text {
        return Ok(t.clone());
    }
    if let Some(p) = &args.text_file {
        return std::fs::read_to_string(p).map_err(io_at(p));
    }
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(io_at("<stdin>"))?;
    Ok(s)
}

fn recommend(cli: &Cli, args: &RecommendArgs) -> Result<(), CliError> {
    let cfg = cli.recommender()?;
    let model = read_model(&args.model)?;
    let text = read_text(args)?;
    let picks = model.classifier.top(&model.vectorizer, &text, cfg.m);
    let list = match args.augmenter {
        AugmenterArg::Kgrec => {
            let engine = cli.load_engine()?;
            let kg = Kgrec::from_graph(&engine.graph, cfg.alpha, cfg.beta)?;
            stack(&picks, &kg, &cfg)?
        }
        AugmenterArg::Topfilter => {
            let records = read_records(args.data.as_deref().expect("clap requires data"))?;
            let tf = TopFilter::new(ProjectTopicMatrix::from_records(&records)?);
            stack(&picks, &tf, &cfg)?
        }
    };
    if list.partial {
        eprintln!("augmentation found fewer than {} topics", cfg.g);
    }
    let mut out = String::new();
    for (i, r) in list.items.iter().enumerate() {
        let source = serde_json::to_string(&r.source).unwrap_or_default();
        out.push_str(&format!(
            "{}\t{}\t{:.6}\t{}\n",
            i + 1,
            r.topic,
            r.score,
            source.trim_matches('"')
        ));
    }
    write_out(None, out.as_bytes())
}

#[derive(Deserialize)]
struct JudgedList {
    #[serde(default = "default_system")]
    system: String,
    project: String,
    recommended: Vec<String>,
    relevance: Vec<bool>,
}

fn default_system() -> String {
    "system".into()
}

fn score_judged(path: &Path, k: usize) -> Result<Vec<ExperimentReport>, CliError> {
    let f = File::open(path).map_err(io_at(path))?;
    let mut systems: Vec<(String, Vec<EvaluationCase>)> = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(io_at(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let j: JudgedList = serde_json::from_str(&line)
            .map_err(|e| CliError::Usage(format!("{}:{}: {e}", path.display(), i + 1)))?;
        let case = EvaluationCase::new(j.project, j.recommended, j.relevance)?;
        match systems.iter_mut().find(|(s, _)| *s == j.system) {
            Some((_, cases)) => cases.push(case),
            None => systems.push((j.system, vec![case])),
        }
    }
    if systems.is_empty() {
        return Err(EvalError::EmptyInput.into());
    }
    let optional = |r: Result<f64, EvalError>| match r {
        Ok(v) => Ok(Some(v)),
        Err(EvalError::EmptyInput) => Ok(None),
        Err(e) => Err(e),
    };
    systems
        .into_iter()
        .map(|(system, cases)| {
            Ok(ExperimentReport {
                system,
                mode: "judged".into(),
                cases: cases.len(),
                failed: cases.iter().filter(|c| c.failed).count(),
                fcr: fcr(&cases)?,
                sample_cases: None,
                fcr_sample: None,
                asr: optional(asr_at_k(&cases, k))?,
                map: optional(map_at_k(&cases, k))?,
                k,
                config: format!("k={k} source={}", path.display()),
            })
        })
        .collect()
}

fn names(v: Vec<(String, f64)>) -> Vec<String> {
    v.into_iter().map(|x| x.0).collect()
}

fn evaluate(cli: &Cli, args: &EvaluateArgs) -> Result<(), CliError> {
    let reports = if let Some(path) = &args.cases {
        score_judged(path, cli.k)?
    } else {
        let records = read_records(args.data.as_deref().expect("clap requires data"))?;
        let (train, test) = split(&records, args.train_fraction, cli.seed)?;
        let engine = cli.load_engine()?;
        let kg = Kgrec::from_graph(&engine.graph, cli.alpha, cli.beta)?;
        let tf = TopFilter::new(ProjectTopicMatrix::from_records(&train)?);
        let judgments = match &args.judgments {
            Some(p) => Some(Judgments::read(BufReader::new(
                File::open(p).map_err(io_at(p))?,
            ))?),
            None => None,
        };
        let relevance = judgments
            .as_ref()
            .map_or(RelevanceSource::GroundTruth, RelevanceSource::Judgments);
        let exp = ExperimentConfig {
            k: cli.k,
            sample: args.sample,
            seed: cli.seed,
            ..Default::default()
        };
        let given = |c: &TestCase| c.given.iter().map(|t| (t.clone(), 1.0)).collect::<Vec<_>>();
        let none = BTreeSet::new();
        match &args.model {
            None => {
                let cases = augmentation_cases(&test, args.holdout, cli.seed);
                let systems = [
                    System::new("KGRec", |c: &TestCase| {
                        names(kg.augment_topics(&given(c), cli.k, &none))
                    }),
                    System::new("TopFilter", |c: &TestCase| {
                        names(tf.augment_topics(&given(c), cli.k, &none))
                    }),
                ];
                run_experiment(&systems, &cases, relevance, &exp)?
            }
            Some(model_path) => {
                let cfg = cli.recommender()?;
                let model = read_model(model_path)?;
                let label = match model.classifier.kind() {
                    ClassifierKind::LogisticRegressionOvr => "LR",
                    ClassifierKind::MultinomialNaiveBayes => "MNB",
                };
                let picks = |c: &TestCase, n| model.classifier.top(&model.vectorizer, &c.text, n);
                let stacked = |c: &TestCase, a: &dyn Augmenter| {
                    stack(&picks(c, cfg.m), a, &cfg)
                        .map(|l| l.topics().into_iter().map(str::to_string).collect())
                        .unwrap_or_default()
                };
                let cases = full_cases(&test);
                let systems = [
                    System::new(label, |c: &TestCase| names(picks(c, cfg.k))),
                    System::new(format!("{label}+KGRec"), |c: &TestCase| stacked(c, &kg)),
                    System::new(format!("{label}+TopFilter"), |c: &TestCase| stacked(c, &tf)),
                ];
                run_experiment(&systems, &cases, relevance, &exp)?
            }
        }
    };
    if let Some(p) = &args.csv {
        let mut buf = Vec::new();
        write_csv(&mut buf, &reports).map_err(io_at(p))?;
        write_atomic(p, &buf)?;
    }
    write_out(None, render_table(&reports).as_bytes())
}

fn run_server(cli: &Cli, args: &ServeArgs) -> Result<(), CliError> {
    let cfg = cli.recommender()?;
    let paths = cli.paths();
    if init_seed(&paths.snapshot)? {
        eprintln!(
            "initialized {} with the seed graph",
            paths.snapshot.display()
        );
    }
    let (durable, rec) = Durable::open(paths.clone(), args.checkpoint_every)?;
    if rec.replayed > 0 {
        eprintln!(
            "recovered sequence {} ({} journal entries replayed)",
            rec.sequence, rec.replayed
        );
    }
    let tokens = TokenIssuer::load_or_create(&paths.secret, args.maintainer_token.clone())?;
    let models = match &args.models {
        Some(dir) => load_models(dir)?,
        None => Default::default(),
    };
    let state = AppState::new(durable, tokens, models, cfg);
    if let Some(p) = &cli.popularity_cache {
        let cache = PopularityCache::load(p)?;
        let view = state.view();
        let (counts, missing) = cache.counts_for(&view.engine.graph);
        if !missing.is_empty() {
            eprintln!(
                "warning: {} accepted topics have no popularity count",
                missing.len()
            );
        }
        let changed = counts.iter().any(|(name, &n)| {
            view.engine
                .graph
                .topic_by_name(name)
                .is_some_and(|t| t.popularity_count != n)
        });
        if changed {
            state
                .execute(&Command::SetPopularity { counts })
                .map_err(|e| CliError::Usage(format!("applying popularity: {}", e.body)))?;
        }
    }
    let runtime = tokio::runtime::Runtime::new().map_err(io_at("<runtime>"))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(args.listen)
            .await
            .map_err(io_at(args.listen.to_string()))?;
        let addr = listener
            .local_addr()
            .map_err(io_at(args.listen.to_string()))?;
        println!("listening on {addr}");
        std::io::stdout().flush().map_err(io_at("<stdout>"))?;
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        serve(listener, state, shutdown)
            .await
            .map_err(io_at(addr.to_string()))
    })
}

fn popularity(cli: &Cli, action: &PopularityAction) -> Result<(), CliError> {
    let PopularityAction::Fetch {
        topics,
        api,
        token,
        out,
        pace_ms,
    } = action;
    let out = out
        .clone()
        .or_else(|| cli.popularity_cache.clone())
        .ok_or_else(|| CliError::Usage("give --out or --popularity-cache".into()))?;
    let topics: Vec<String> = if topics.is_empty() {
        let (engine, _) = recover(&cli.paths())?;
        engine
            .graph
            .topics()
            .filter(|t| t.state == EntityState::Accepted)
            .map(|t| t.full_name.clone())
            .collect()
    } else {
        topics.clone()
    };
    let fallback = out
        .exists()
        .then(|| PopularityCache::load(&out))
        .transpose()?;
    let cfg = GithubConfig {
        base_url: api.clone(),
        token: token.clone(),
        pace: Duration::from_millis(*pace_ms),
        ..Default::default()
    };
    let runtime = tokio::runtime::Runtime::new().map_err(io_at("<runtime>"))?;
    let cache = runtime.block_on(fetch_popularity(&topics, &cfg, fallback.as_ref()))?;
    cache.save(&out)?;
    let mut text = String::new();
    for (t, n) in &cache.counts {
        text.push_str(&format!("{t}\t{n}\n"));
    }
    write_out(None, text.as_bytes())
}
