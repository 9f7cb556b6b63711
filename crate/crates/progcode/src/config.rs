//! Run configuration: a flat `key = value` file with section prefixes.
//!
//! Unknown keys are rejected so typos fail loudly. Command-line flags
//! (`--seed`, `--jobs`, paths) override whatever the file says, and the
//! effective values are echoed into every report.

use std::path::PathBuf;

use thiserror::Error;

use crate::classifiers::{Algorithm, FeaturesPerSplit, TrainParams};
use crate::corpus::{Code, ContextMode, Scope};
use crate::experiments::{Exp1Config, Exp2Config, Exp3Config, Harness};
use crate::preprocess::{PreprocessConfig, TaggerMode, WordCountBasis};
use crate::synth::GenConfig;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("config line {line}: {msg}")]
    Bad { line: usize, msg: String },
}

fn bad(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::Bad {
        line,
        msg: msg.into(),
    }
}

/// Everything a run needs, with the documented defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub transcripts: Option<PathBuf>,
    pub annotations: Option<PathBuf>,
    pub coders: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub scope: Scope,
    pub context_mode: ContextMode,
    /// Optional strict-majority pre-pass (off by default: it starves
    /// pools when interrater agreement is low).
    pub majority_filter: bool,
    pub pre: PreprocessConfig,
    pub features_k: usize,
    pub train: TrainParams,
    /// Experiment class set without `NotCoded`.
    pub classes: Vec<Code>,
    pub exp1_n_per_class: usize,
    pub exp1_resamples: usize,
    pub exp1_k_folds: usize,
    pub exp1_algorithms: Vec<Algorithm>,
    pub exp1_thresholds: [usize; 3],
    pub exp3_n_per_class: usize,
    pub exp3_resamples: usize,
    pub exp3_k_folds: usize,
    pub exp3_algorithms: Vec<Algorithm>,
    pub exp3_min_words: usize,
    pub eval_algorithm: Algorithm,
    pub eval_n_per_class: usize,
    pub eval_min_words: usize,
    pub eval_k_folds: usize,
    pub eval_include_not_coded: bool,
    pub gen: GenConfig,
    pub seed: u64,
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            transcripts: None,
            annotations: None,
            coders: None,
            out_dir: None,
            scope: Scope::PhysicianOnly,
            context_mode: ContextMode::SameSpeaker,
            majority_filter: false,
            pre: PreprocessConfig::default(),
            features_k: 100,
            train: TrainParams::default(),
            classes: Code::EXPERIMENT.to_vec(),
            exp1_n_per_class: 190,
            exp1_resamples: 4,
            exp1_k_folds: 10,
            exp1_algorithms: Algorithm::ALL.to_vec(),
            exp1_thresholds: [1, 3, 5],
            exp3_n_per_class: 190,
            exp3_resamples: 4,
            exp3_k_folds: 10,
            exp3_algorithms: Algorithm::ALL.to_vec(),
            exp3_min_words: 5,
            eval_algorithm: Algorithm::Svm,
            eval_n_per_class: 190,
            eval_min_words: 1,
            eval_k_folds: 10,
            eval_include_not_coded: true,
            gen: GenConfig::default(),
            seed: 42,
            jobs: None,
        }
    }
}

impl RunConfig {
    /// `--seed` semantics: one master seed drives generation and every
    /// experiment.
    pub fn apply_master_seed(&mut self, seed: u64) {
        self.seed = seed;
        self.gen.seed = seed;
    }

    pub fn exp1_config(&self) -> Exp1Config {
        let mut classes = self.classes.clone();
        classes.push(Code::NotCoded);
        Exp1Config {
            thresholds: self.exp1_thresholds,
            classes,
            n_per_class: self.exp1_n_per_class,
            algorithms: self.exp1_algorithms.clone(),
            resamples: self.exp1_resamples,
            k_folds: self.exp1_k_folds,
            seed: self.seed,
        }
    }

    pub fn exp2_config(&self) -> Exp2Config {
        Exp2Config {
            exp1: self.exp1_config(),
        }
    }

    pub fn exp3_config(&self) -> Exp3Config {
        Exp3Config {
            classes: self.classes.clone(),
            min_words: self.exp3_min_words,
            n_per_class: self.exp3_n_per_class,
            algorithms: self.exp3_algorithms.clone(),
            resamples: self.exp3_resamples,
            k_folds: self.exp3_k_folds,
            seed: self.seed,
        }
    }

    pub fn harness(&self, jobs: usize) -> Harness {
        Harness {
            features_k: self.features_k,
            train: self.train.clone(),
            pre: self.pre.clone(),
            jobs,
        }
    }
}

fn parse_bool(line: usize, v: &str) -> Result<bool, ConfigError> {
    match v {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        _ => Err(bad(line, format!("expected on/off, got `{v}`"))),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, v: &str, what: &str) -> Result<T, ConfigError> {
    v.parse()
        .map_err(|_| bad(line, format!("bad {what}: `{v}`")))
}

fn parse_range(line: usize, v: &str) -> Result<(u32, u32), ConfigError> {
    let (lo, hi) = v
        .split_once("..")
        .ok_or_else(|| bad(line, format!("expected lo..hi, got `{v}`")))?;
    Ok((
        parse_num(line, lo.trim(), "range start")?,
        parse_num(line, hi.trim(), "range end")?,
    ))
}

fn parse_algorithms(line: usize, v: &str) -> Result<Vec<Algorithm>, ConfigError> {
    v.split(',')
        .map(|s| {
            Algorithm::parse(s.trim()).ok_or_else(|| bad(line, format!("unknown algorithm `{s}`")))
        })
        .collect()
}

fn parse_codes(line: usize, v: &str) -> Result<Vec<Code>, ConfigError> {
    v.split(',')
        .map(|s| {
            Code::parse(s.trim()).ok_or_else(|| bad(line, format!("unknown code `{s}`")))
        })
        .collect()
}

/// Parses config text into a [`RunConfig`], starting from defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut explicit_gen_seed = false;
    let mut master_seed: Option<u64> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| bad(line, format!("expected `key = value`, got `{trimmed}`")))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "corpus.transcripts" => cfg.transcripts = Some(PathBuf::from(value)),
            "corpus.annotations" => cfg.annotations = Some(PathBuf::from(value)),
            "corpus.coders" => cfg.coders = Some(PathBuf::from(value)),
            "out_dir" => cfg.out_dir = Some(PathBuf::from(value)),
            "scope" => {
                cfg.scope = match value {
                    "physician_only" => Scope::PhysicianOnly,
                    "all" => Scope::All,
                    _ => return Err(bad(line, format!("unknown scope `{value}`"))),
                }
            }
            "context" => {
                cfg.context_mode = match value {
                    "same_speaker" => ContextMode::SameSpeaker,
                    "other_speaker" => ContextMode::OtherSpeaker,
                    _ => return Err(bad(line, format!("unknown context mode `{value}`"))),
                }
            }
            "corpus.majority_filter" => cfg.majority_filter = parse_bool(line, value)?,
            "preprocess.pos_filter" => cfg.pre.pos_filter_enabled = parse_bool(line, value)?,
            "preprocess.tagger" => {
                cfg.pre.tagger = match value {
                    "lexicon" => TaggerMode::Lexicon,
                    "none" => TaggerMode::None,
                    _ => return Err(bad(line, format!("unknown tagger `{value}`"))),
                }
            }
            "preprocess.word_count_basis" => {
                cfg.pre.word_count_basis = match value {
                    "terms" => WordCountBasis::Terms,
                    "raw_tokens" => WordCountBasis::RawTokens,
                    _ => return Err(bad(line, format!("unknown basis `{value}`"))),
                }
            }
            "features.k_per_class" => cfg.features_k = parse_num(line, value, "integer")?,
            "nb.alpha" => cfg.train.nb.alpha = parse_num(line, value, "float")?,
            "rf.n_trees" => cfg.train.rf.n_trees = parse_num(line, value, "integer")?,
            "rf.features_per_split" => {
                cfg.train.rf.features_per_split = if value == "sqrt" {
                    FeaturesPerSplit::Sqrt
                } else {
                    FeaturesPerSplit::Fixed(parse_num(line, value, "integer")?)
                }
            }
            "rf.bootstrap" => cfg.train.rf.bootstrap = parse_bool(line, value)?,
            "rf.max_depth" => {
                cfg.train.rf.max_depth = if value == "none" {
                    None
                } else {
                    Some(parse_num(line, value, "integer")?)
                }
            }
            "rf.min_leaf" => cfg.train.rf.min_leaf = parse_num(line, value, "integer")?,
            "rf.seed" => cfg.train.rf.seed = parse_num(line, value, "integer")?,
            "svm.c" => cfg.train.svm.c = parse_num(line, value, "float")?,
            "svm.max_epochs" => cfg.train.svm.max_epochs = parse_num(line, value, "integer")?,
            "svm.tol" => cfg.train.svm.tol = parse_num(line, value, "float")?,
            "svm.seed" => cfg.train.svm.seed = parse_num(line, value, "integer")?,
            "classes" => {
                let codes = parse_codes(line, value)?;
                if codes.contains(&Code::NotCoded) {
                    return Err(bad(
                        line,
                        "`classes` lists manual codes only; NotCoded joins automatically where applicable",
                    ));
                }
                cfg.classes = codes;
            }
            "exp1.n_per_class" => cfg.exp1_n_per_class = parse_num(line, value, "integer")?,
            "exp1.resamples" => cfg.exp1_resamples = parse_num(line, value, "integer")?,
            "exp1.k_folds" => cfg.exp1_k_folds = parse_num(line, value, "integer")?,
            "exp1.algorithms" => cfg.exp1_algorithms = parse_algorithms(line, value)?,
            "exp1.thresholds" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(bad(line, "expected three thresholds"));
                }
                cfg.exp1_thresholds = [
                    parse_num(line, parts[0], "threshold")?,
                    parse_num(line, parts[1], "threshold")?,
                    parse_num(line, parts[2], "threshold")?,
                ];
            }
            "exp3.n_per_class" => cfg.exp3_n_per_class = parse_num(line, value, "integer")?,
            "exp3.resamples" => cfg.exp3_resamples = parse_num(line, value, "integer")?,
            "exp3.k_folds" => cfg.exp3_k_folds = parse_num(line, value, "integer")?,
            "exp3.algorithms" => cfg.exp3_algorithms = parse_algorithms(line, value)?,
            "exp3.min_words" => cfg.exp3_min_words = parse_num(line, value, "integer")?,
            "eval.algorithm" => {
                cfg.eval_algorithm = Algorithm::parse(value)
                    .ok_or_else(|| bad(line, format!("unknown algorithm `{value}`")))?
            }
            "eval.n_per_class" => cfg.eval_n_per_class = parse_num(line, value, "integer")?,
            "eval.min_words" => cfg.eval_min_words = parse_num(line, value, "integer")?,
            "eval.k_folds" => cfg.eval_k_folds = parse_num(line, value, "integer")?,
            "eval.include_not_coded" => {
                cfg.eval_include_not_coded = parse_bool(line, value)?
            }
            "gen.n_cases" => cfg.gen.n_cases = parse_num(line, value, "integer")?,
            "gen.lines_per_case" => cfg.gen.lines_per_case = parse_range(line, value)?,
            "gen.coders_per_case" => cfg.gen.coders_per_case = parse_range(line, value)?,
            "gen.disagreement_rate" => {
                cfg.gen.disagreement_rate = parse_num(line, value, "float")?
            }
            "gen.context_signal_rate" => {
                cfg.gen.context_signal_rate = parse_num(line, value, "float")?
            }
            "gen.length_mixture" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(bad(line, "expected three mixture weights"));
                }
                cfg.gen.length_mixture = [
                    parse_num(line, parts[0], "weight")?,
                    parse_num(line, parts[1], "weight")?,
                    parse_num(line, parts[2], "weight")?,
                ];
            }
            "gen.seed" => {
                cfg.gen.seed = parse_num(line, value, "integer")?;
                explicit_gen_seed = true;
            }
            "seed" => master_seed = Some(parse_num(line, value, "integer")?),
            "jobs" => cfg.jobs = Some(parse_num(line, value, "integer")?),
            _ if key.starts_with("gen.target.") => {
                let name = &key["gen.target.".len()..];
                let code = Code::parse(name)
                    .ok_or_else(|| bad(line, format!("unknown code `{name}`")))?;
                let n: u32 = parse_num(line, value, "integer")?;
                cfg.gen.per_code_target.insert(code, n);
            }
            _ => return Err(bad(line, format!("unknown key `{key}`"))),
        }
    }

    if let Some(seed) = master_seed {
        let keep_gen = explicit_gen_seed;
        let gen_seed = cfg.gen.seed;
        cfg.apply_master_seed(seed);
        if keep_gen {
            cfg.gen.seed = gen_seed;
        }
    }
    Ok(cfg)
}
