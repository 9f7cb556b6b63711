//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (parse failures,
//! starved samples, failed audits). Diagnostics go to stderr; data goes
//! to files under `--out` or to stdout.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use progcode::classifiers::Algorithm;
use progcode::config::{parse_config, RunConfig};
use progcode::corpus::{
    attach_context, majority_filter, merge_and_dedup, parse_annotations, parse_coders,
    parse_transcripts, Code, InstancePool,
};
use progcode::evaluation::{balanced_sample, cross_validate};
use progcode::experiments::{
    prepare_pool, production_learners, run_exp1, run_exp2, run_exp3, PreparedLine,
};
use progcode::synth::{audit, generate};

const USAGE: &str = "\
usage: progcode <command> [options]

commands:
  gen-corpus   generate a synthetic corpus into --out
  ingest       parse and merge a corpus, print pool statistics
  audit        check experiment preconditions on a corpus
  eval         one balanced cross-validated evaluation
  exp1         word-count group experiment
  exp2         tracked-instance consistency experiment
  exp3         context-window experiment
  report       consolidate experiment grids under --out into report.md

options:
  --config PATH        key = value run configuration
  --seed N             master seed (overrides the config file)
  --jobs N             parallel cell workers (default: available cores)
  --out DIR            output directory (all writes stay inside it)
  --transcripts PATH   transcripts.tsv
  --annotations PATH   annotations.tsv
  --coders PATH        coders.tsv (enables the majority filter when
                       corpus.majority_filter = on)
  --corpus DIR         shorthand for the three TSVs in one directory
  --scope S            physician_only | all
  --algo A             eval only: nb | rf | svm
  --min-words N        eval only: group threshold
  --n-per-class N      eval only: balanced sample size
  --dump               ingest only: write instances.tsv debug dump to --out
";

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn data(e: impl Display) -> CliError {
        CliError::Data(e.to_string())
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = match dispatch(&args) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{USAGE}");
            1
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

#[derive(Default)]
struct Flags {
    config: Option<PathBuf>,
    seed: Option<u64>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    transcripts: Option<PathBuf>,
    annotations: Option<PathBuf>,
    coders: Option<PathBuf>,
    scope: Option<String>,
    algo: Option<String>,
    min_words: Option<usize>,
    n_per_class: Option<usize>,
    dump: bool,
}

fn parse_flags(args: &[String]) -> Result<Flags, CliError> {
    let mut flags = Flags::default();
    let mut it = args.iter();
    let need = |name: &str, v: Option<&String>| {
        v.cloned()
            .ok_or_else(|| CliError::Usage(format!("{name} needs a value")))
    };
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => flags.config = Some(PathBuf::from(need(arg, it.next())?)),
            "--seed" => {
                flags.seed = Some(
                    need(arg, it.next())?
                        .parse()
                        .map_err(|_| CliError::Usage("--seed must be an integer".into()))?,
                )
            }
            "--jobs" => {
                let n: usize = need(arg, it.next())?
                    .parse()
                    .map_err(|_| CliError::Usage("--jobs must be a positive integer".into()))?;
                if n == 0 {
                    return Err(CliError::Usage("--jobs must be at least 1".into()));
                }
                flags.jobs = Some(n);
            }
            "--out" => flags.out = Some(PathBuf::from(need(arg, it.next())?)),
            "--transcripts" => flags.transcripts = Some(PathBuf::from(need(arg, it.next())?)),
            "--annotations" => flags.annotations = Some(PathBuf::from(need(arg, it.next())?)),
            "--coders" => flags.coders = Some(PathBuf::from(need(arg, it.next())?)),
            "--corpus" => {
                let dir = PathBuf::from(need(arg, it.next())?);
                flags.transcripts = Some(dir.join("transcripts.tsv"));
                flags.annotations = Some(dir.join("annotations.tsv"));
                flags.coders = Some(dir.join("coders.tsv"));
            }
            "--scope" => flags.scope = Some(need(arg, it.next())?),
            "--algo" => flags.algo = Some(need(arg, it.next())?),
            "--min-words" => {
                flags.min_words = Some(need(arg, it.next())?.parse().map_err(|_| {
                    CliError::Usage("--min-words must be a non-negative integer".into())
                })?)
            }
            "--n-per-class" => {
                flags.n_per_class = Some(need(arg, it.next())?.parse().map_err(|_| {
                    CliError::Usage("--n-per-class must be a positive integer".into())
                })?)
            }
            "--dump" => flags.dump = true,
            other => return Err(CliError::Usage(format!("unknown option `{other}`"))),
        }
    }
    Ok(flags)
}

fn load_run_config(flags: &Flags) -> Result<RunConfig, CliError> {
    let mut cfg = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            parse_config(&text).map_err(CliError::data)?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = flags.seed {
        cfg.apply_master_seed(seed);
    }
    if let Some(t) = &flags.transcripts {
        cfg.transcripts = Some(t.clone());
    }
    if let Some(a) = &flags.annotations {
        cfg.annotations = Some(a.clone());
    }
    if let Some(c) = &flags.coders {
        cfg.coders = Some(c.clone());
    }
    if let Some(o) = &flags.out {
        cfg.out_dir = Some(o.clone());
    }
    if let Some(j) = flags.jobs {
        cfg.jobs = Some(j);
    }
    if let Some(s) = &flags.scope {
        cfg.scope = match s.as_str() {
            "physician_only" => progcode::corpus::Scope::PhysicianOnly,
            "all" => progcode::corpus::Scope::All,
            other => return Err(CliError::Usage(format!("unknown scope `{other}`"))),
        };
    }
    Ok(cfg)
}

fn effective_jobs(cfg: &RunConfig) -> usize {
    cfg.jobs.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(std::num::NonZeroUsize::get)
            .unwrap_or(1)
    })
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    cfg.out_dir
        .clone()
        .ok_or_else(|| CliError::Usage("--out DIR is required for this command".into()))
}

fn read_corpus_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

struct LoadedCorpus {
    pool: InstancePool,
    n_utterances: usize,
    n_annotations: usize,
}

fn load_corpus(cfg: &RunConfig) -> Result<LoadedCorpus, CliError> {
    let t_path = cfg
        .transcripts
        .clone()
        .ok_or_else(|| CliError::Usage("--transcripts (or corpus.transcripts) is required".into()))?;
    let a_path = cfg
        .annotations
        .clone()
        .ok_or_else(|| CliError::Usage("--annotations (or corpus.annotations) is required".into()))?;
    let utterances = parse_transcripts(&read_corpus_file(&t_path)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", t_path.display())))?;
    let mut annotations = parse_annotations(&read_corpus_file(&a_path)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", a_path.display())))?;
    if cfg.majority_filter {
        let c_path = cfg.coders.clone().ok_or_else(|| {
            CliError::Usage("corpus.majority_filter = on requires --coders".into())
        })?;
        let roster = parse_coders(&read_corpus_file(&c_path)?)
            .map_err(|e| CliError::Data(format!("{}: {e}", c_path.display())))?;
        annotations = majority_filter(&annotations, &roster).map_err(CliError::data)?;
    }
    let n_utterances = utterances.len();
    let n_annotations = annotations.len();
    let pool = merge_and_dedup(&utterances, &annotations, cfg.scope).map_err(CliError::data)?;
    let pool = attach_context(&pool, &utterances, cfg.context_mode);
    Ok(LoadedCorpus {
        pool,
        n_utterances,
        n_annotations,
    })
}

fn dispatch(args: &[String]) -> Result<(), CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Usage("missing command".into()));
    };
    let flags = parse_flags(&args[1..])?;
    match command.as_str() {
        "gen-corpus" => cmd_gen_corpus(&flags),
        "ingest" => cmd_ingest(&flags),
        "audit" => cmd_audit(&flags),
        "eval" => cmd_eval(&flags),
        "exp1" => cmd_exp(&flags, 1),
        "exp2" => cmd_exp(&flags, 2),
        "exp3" => cmd_exp(&flags, 3),
        "report" => cmd_report(&flags),
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}

fn cmd_gen_corpus(flags: &Flags) -> Result<(), CliError> {
    let cfg = load_run_config(flags)?;
    let dir = out_dir(&cfg)?;
    let corpus = generate(&cfg.gen).map_err(CliError::data)?;
    corpus.write_files(&dir).map_err(CliError::data)?;
    println!(
        "seed = {}\ntranscript_lines = {}\nannotation_rows = {}\ncases = {}",
        cfg.gen.seed,
        corpus.transcripts_tsv.lines().count() - 1,
        corpus.annotations_tsv.lines().count() - 1,
        corpus.coders_tsv.lines().count() - 1,
    );
    Ok(())
}

fn cmd_ingest(flags: &Flags) -> Result<(), CliError> {
    let cfg = load_run_config(flags)?;
    let loaded = load_corpus(&cfg)?;
    println!("seed = {}", cfg.seed);
    println!("utterances = {}", loaded.n_utterances);
    println!("annotations = {}", loaded.n_annotations);
    for (code, lines) in loaded.pool.iter() {
        println!("bucket {code} = {}", lines.len());
    }
    if flags.dump {
        let dir = out_dir(&cfg)?;
        fs::create_dir_all(&dir).map_err(CliError::data)?;
        let prepared = prepare_pool(&loaded.pool, &cfg.pre);
        let mut dump = String::new();
        for lines in prepared.buckets.values() {
            for pl in lines {
                dump.push_str(&pl.single.dump_row());
                dump.push('\n');
            }
        }
        fs::write(dir.join("instances.tsv"), dump).map_err(CliError::data)?;
    }
    Ok(())
}

fn cmd_audit(flags: &Flags) -> Result<(), CliError> {
    let cfg = load_run_config(flags)?;
    let loaded = load_corpus(&cfg)?;
    let mut classes = cfg.classes.clone();
    classes.push(Code::NotCoded);
    let report = audit(&loaded.pool, &cfg.pre, &classes, cfg.exp1_n_per_class);
    print!("{}", report.to_text());
    if report.ok() {
        Ok(())
    } else {
        Err(CliError::Data(format!(
            "audit failed: {}",
            report.failures.join("; ")
        )))
    }
}

fn cmd_eval(flags: &Flags) -> Result<(), CliError> {
    let mut cfg = load_run_config(flags)?;
    if let Some(algo) = &flags.algo {
        cfg.eval_algorithm = Algorithm::parse(algo)
            .ok_or_else(|| CliError::Usage(format!("unknown algorithm `{algo}`")))?;
    }
    if let Some(mw) = flags.min_words {
        cfg.eval_min_words = mw;
    }
    if let Some(n) = flags.n_per_class {
        cfg.eval_n_per_class = n;
    }
    let dir = out_dir(&cfg)?;
    let loaded = load_corpus(&cfg)?;
    let prepared = prepare_pool(&loaded.pool, &cfg.pre);
    let mut classes = cfg.classes.clone();
    if cfg.eval_include_not_coded {
        classes.push(Code::NotCoded);
    }
    let basis = cfg.pre.word_count_basis;
    let min_words = cfg.eval_min_words;
    let sample = balanced_sample(
        &prepared.buckets,
        &classes,
        cfg.eval_n_per_class,
        |pl: &PreparedLine| pl.single.words(basis) >= min_words,
        progcode::seed::derive(cfg.seed, &[4, 0]),
    )
    .map_err(CliError::data)?;
    let instances: Vec<&progcode::preprocess::Instance> = sample
        .values()
        .flat_map(|v| v.iter().map(|pl| &pl.single))
        .collect();
    let learner = cfg.train.learner(cfg.eval_algorithm);
    let jobs = effective_jobs(&cfg);
    let harness = cfg.harness(jobs);
    let mut echo: Vec<(String, String)> = vec![
        ("command".into(), "eval".into()),
        ("algorithm".into(), cfg.eval_algorithm.name().into()),
        ("min_words".into(), cfg.eval_min_words.to_string()),
        ("n_per_class".into(), cfg.eval_n_per_class.to_string()),
        ("seed".into(), cfg.seed.to_string()),
    ];
    echo.extend(harness.echo());
    let report = cross_validate(
        learner.as_ref(),
        &instances,
        cfg.features_k,
        cfg.eval_k_folds,
        progcode::seed::derive(cfg.seed, &[4, 1]),
        &echo,
    )
    .map_err(CliError::data)?;
    let eval_dir = dir.join("eval");
    fs::create_dir_all(&eval_dir).map_err(CliError::data)?;
    fs::write(eval_dir.join("confusion.csv"), report.confusion_csv()).map_err(CliError::data)?;
    fs::write(eval_dir.join("predictions.tsv"), report.predictions_tsv())
        .map_err(CliError::data)?;
    fs::write(eval_dir.join("summary.md"), report.summary_md()).map_err(CliError::data)?;
    // chi-square audit view over the whole sampled set
    let (vocab, fset) =
        progcode::evaluation::training_features(&instances, cfg.features_k).map_err(CliError::data)?;
    fs::write(
        eval_dir.join("features.csv"),
        progcode::features::feature_report_csv(&vocab, &fset),
    )
    .map_err(CliError::data)?;
    println!(
        "algorithm = {}\ninstances = {}\naccuracy = {:.6}\nmicro_f1 = {:.6}\nmacro_f1 = {:.6}",
        report.algorithm,
        report.confusion.total(),
        report.metrics.accuracy,
        report.metrics.micro_f1,
        report.metrics.macro_f1
    );
    Ok(())
}

fn cmd_exp(flags: &Flags, which: u8) -> Result<(), CliError> {
    let cfg = load_run_config(flags)?;
    let dir = out_dir(&cfg)?;
    let loaded = load_corpus(&cfg)?;
    let prepared = prepare_pool(&loaded.pool, &cfg.pre);
    let jobs = effective_jobs(&cfg);
    let harness = cfg.harness(jobs);
    let (name, report) = match which {
        1 => {
            let c = cfg.exp1_config();
            let learners = production_learners(&c.algorithms, &cfg.train);
            ("exp1", run_exp1(&prepared, &c, &harness, &learners).map_err(CliError::data)?)
        }
        2 => {
            let c = cfg.exp2_config();
            let learners = production_learners(&c.exp1.algorithms, &cfg.train);
            (
                "exp2",
                run_exp2(&prepared, &c, &harness, &learners, None).map_err(CliError::data)?,
            )
        }
        _ => {
            let c = cfg.exp3_config();
            let learners = production_learners(&c.algorithms, &cfg.train);
            ("exp3", run_exp3(&prepared, &c, &harness, &learners).map_err(CliError::data)?)
        }
    };
    let exp_dir = dir.join(name);
    report.write(&exp_dir).map_err(CliError::data)?;
    for cell in &report.cells {
        eprintln!(
            "{name} {} {} r{}: accuracy {:.4}",
            cell.axis, cell.algorithm, cell.resample, cell.report.metrics.accuracy
        );
    }
    println!("wrote {}", exp_dir.display());
    Ok(())
}

fn cmd_report(flags: &Flags) -> Result<(), CliError> {
    let cfg = load_run_config(flags)?;
    let dir = out_dir(&cfg)?;
    let mut out = String::from("# Combined experiment report\n");
    let mut found = false;
    for name in ["exp1", "exp2", "exp3"] {
        let grid = dir.join(name).join("grid.csv");
        if !grid.exists() {
            continue;
        }
        found = true;
        let content = read_corpus_file(&grid)?;
        out.push_str(&format!("\n## {name}\n\n```\n"));
        // grids are small; inline them minus the echo comments
        for line in content.lines().filter(|l| !l.starts_with('#')) {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("```\n");
        let summary = dir.join(name).join("summary.md");
        if summary.exists() {
            let text = read_corpus_file(&summary)?;
            if let Some(at) = text.find("## Aggregates") {
                out.push('\n');
                out.push_str(&text[at..]);
            }
        }
    }
    if !found {
        return Err(CliError::Data(format!(
            "no experiment grids found under {}",
            dir.display()
        )));
    }
    fs::write(dir.join("report.md"), &out).map_err(CliError::data)?;
    println!("wrote {}", dir.join("report.md").display());
    Ok(())
}
