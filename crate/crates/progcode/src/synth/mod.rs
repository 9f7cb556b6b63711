//! Seeded synthetic corpus generator and pool audit.
//!
//! The generator plants coded physician lines with per-code lexical
//! signal, coder disagreement, and same-speaker lead-in runs, then emits
//! the three TSV files the corpus module ingests. Identical seed and
//! config give byte-identical output.
//!
//! Structure of generated dialogue: every physician block (optional
//! lead-ins plus one target or filler line) is followed by one or two
//! patient lines, so same-speaker context runs never bleed across
//! blocks. Lead-ins are short (under five terms) and carry exactly one
//! signal term each, which keeps the `NotCoded` pool lexically diffuse
//! while still making the with-context variant strictly more
//! informative.

pub mod lexicon;

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{Code, InstancePool};
use crate::preprocess::{preprocess_line, PreprocessConfig, Variant};
use crate::seed;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator config: {0}")]
    BadConfig(String),
    #[error("infeasible config: {needed} generated lines exceed capacity {capacity} (n_cases x max lines_per_case)")]
    Infeasible { needed: usize, capacity: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n_cases: usize,
    /// Inclusive range of target lines per case.
    pub lines_per_case: (u32, u32),
    /// Inclusive range of coders assigned per case.
    pub coders_per_case: (u32, u32),
    /// Planted instances per code; the `NotCoded` entry is the number of
    /// untagged physician filler lines.
    pub per_code_target: BTreeMap<Code, u32>,
    /// Probability that a planted line gets a second, different code
    /// from another coder.
    pub disagreement_rate: f64,
    /// Probability that a planted line is preceded by 1-3 same-speaker
    /// lead-in lines sharing its code's lexicon.
    pub context_signal_rate: f64,
    /// Weights for post-preprocessing word-count bands {1,2} / {3,4} / {>=5}.
    pub length_mixture: [f64; 3],
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        let mut per_code_target = BTreeMap::new();
        for code in Code::EXPERIMENT {
            per_code_target.insert(code, 600);
        }
        for code in [
            Code::CancKnowl,
            Code::OpenDoor,
            Code::UnderSProg,
            Code::BestWorstCase,
            Code::DoubFram,
        ] {
            per_code_target.insert(code, 40);
        }
        per_code_target.insert(Code::NotCoded, 650);
        GenConfig {
            n_cases: 150,
            lines_per_case: (100, 170),
            coders_per_case: (2, 3),
            per_code_target,
            disagreement_rate: 0.10,
            context_signal_rate: 0.75,
            length_mixture: [0.25, 0.25, 0.50],
            seed: 42,
        }
    }
}

impl GenConfig {
    fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: String| Err(GenError::BadConfig(msg));
        if self.n_cases == 0 || self.n_cases > 9999 {
            return bad(format!("n_cases {} out of range 1..=9999", self.n_cases));
        }
        if self.lines_per_case.0 < 1 || self.lines_per_case.0 > self.lines_per_case.1 {
            return bad(format!("lines_per_case range {:?}", self.lines_per_case));
        }
        if self.coders_per_case.0 < 1 || self.coders_per_case.0 > self.coders_per_case.1 {
            return bad(format!("coders_per_case range {:?}", self.coders_per_case));
        }
        for rate in [self.disagreement_rate, self.context_signal_rate] {
            if !(0.0..=1.0).contains(&rate) {
                return bad(format!("rate {rate} outside [0, 1]"));
            }
        }
        if self.length_mixture.iter().any(|w| *w < 0.0)
            || self.length_mixture.iter().sum::<f64>() <= 0.0
        {
            return bad(format!("length_mixture {:?}", self.length_mixture));
        }
        Ok(())
    }
}

/// The three TSV payloads, ready to write.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedCorpus {
    pub transcripts_tsv: String,
    pub annotations_tsv: String,
    pub coders_tsv: String,
}

impl GeneratedCorpus {
    pub fn write_files(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("transcripts.tsv"), &self.transcripts_tsv)?;
        std::fs::write(dir.join("annotations.tsv"), &self.annotations_tsv)?;
        std::fs::write(dir.join("coders.tsv"), &self.coders_tsv)?;
        Ok(())
    }
}

struct Planted {
    code: Code,
    second_code: Option<Code>,
    agree_dup: bool,
}

struct Unit {
    leadins: Vec<String>,
    doctor_text: String,
    planted: Option<Planted>,
    patient_texts: Vec<String>,
}

impl Unit {
    fn line_count(&self) -> usize {
        self.leadins.len() + 1 + self.patient_texts.len()
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, items: &[&'a str]) -> &'a str {
    items[rng.random_range(0..items.len())]
}

/// Interleaves the content terms with glue words and sentence dressing.
fn compose(rng: &mut ChaCha8Rng, content: &[&str]) -> String {
    let mut words: Vec<String> = Vec::new();
    if rng.random_bool(0.6) {
        words.push(pick(rng, lexicon::GLUE).to_string());
        if rng.random_bool(0.3) {
            words.push(pick(rng, lexicon::GLUE).to_string());
        }
    }
    for (i, term) in content.iter().enumerate() {
        words.push((*term).to_string());
        if i + 1 < content.len() {
            for _ in 0..rng.random_range(0..=2u32) {
                words.push(pick(rng, lexicon::GLUE).to_string());
            }
        }
    }
    if rng.random_bool(0.4) {
        words.push(pick(rng, lexicon::GLUE).to_string());
    }
    let mut text = words.join(" ");
    if let Some(first) = text.get(0..1) {
        let upper = first.to_uppercase();
        text.replace_range(0..1, &upper);
    }
    text.push(if rng.random_bool(0.15) { '?' } else { '.' });
    text
}

/// Number of content terms for one line, drawn from the band mixture.
fn draw_terms(rng: &mut ChaCha8Rng, mixture: &[f64; 3]) -> usize {
    let total: f64 = mixture.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let band = if u < mixture[0] {
        0
    } else {
        u -= mixture[0];
        if u < mixture[1] {
            1
        } else {
            2
        }
    };
    match band {
        0 => rng.random_range(1..=2),
        1 => rng.random_range(3..=4),
        _ => rng.random_range(5..=8),
    }
}

/// Share of planted lines whose own wording is deliberately ambiguous
/// between the target code and one confuser code. Their lead-ins still
/// speak the target's vocabulary, so attaching context resolves them;
/// without it they hold single-line accuracy below the ceiling.
const AMBIGUITY_RATE: f64 = 0.35;

fn confuser_code(rng: &mut ChaCha8Rng, code: Code) -> Code {
    let others: Vec<Code> = Code::EXPERIMENT
        .iter()
        .copied()
        .filter(|c| *c != code)
        .collect();
    others[rng.random_range(0..others.len())]
}

fn planted_unit(rng: &mut ChaCha8Rng, code: Code, config: &GenConfig) -> Unit {
    let signal = lexicon::signal_terms(code);
    let ambiguous = rng.random_bool(AMBIGUITY_RATE);
    let confuser = lexicon::signal_terms(confuser_code(rng, code));
    let n_terms = draw_terms(rng, &config.length_mixture);
    let content: Vec<&str> = (0..n_terms)
        .map(|_| {
            let u: f64 = rng.random();
            if ambiguous {
                // narrow target edge: 0.40 target, 0.35 confuser
                if u < 0.40 {
                    pick(rng, signal)
                } else if u < 0.75 {
                    pick(rng, confuser)
                } else {
                    pick(rng, lexicon::FILLER)
                }
            } else if u < 0.75 {
                pick(rng, signal)
            } else {
                pick(rng, lexicon::FILLER)
            }
        })
        .collect();
    let doctor_text = compose(rng, &content);

    let leadins = if config.context_signal_rate > 0.0
        && rng.random_bool(config.context_signal_rate)
    {
        let count = rng.random_range(1..=3u32);
        (0..count)
            .map(|_| {
                let n = rng.random_range(2..=4usize);
                let n_signal = rng.random_range(1..=2usize).min(n);
                let terms: Vec<&str> = (0..n)
                    .map(|j| {
                        if j < n_signal {
                            pick(rng, signal)
                        } else {
                            pick(rng, lexicon::FILLER)
                        }
                    })
                    .collect();
                compose(rng, &terms)
            })
            .collect()
    } else {
        Vec::new()
    };

    let patient_texts = patient_block(rng);

    let second_code = if config.disagreement_rate > 0.0
        && rng.random_bool(config.disagreement_rate)
    {
        let others: Vec<Code> = Code::MANUAL.iter().copied().filter(|c| *c != code).collect();
        Some(others[rng.random_range(0..others.len())])
    } else {
        None
    };
    let agree_dup = rng.random_bool(0.15);

    Unit {
        leadins,
        doctor_text,
        planted: Some(Planted {
            code,
            second_code,
            agree_dup,
        }),
        patient_texts,
    }
}

fn filler_unit(rng: &mut ChaCha8Rng, config: &GenConfig) -> Unit {
    let n_terms = draw_terms(rng, &config.length_mixture);
    let content: Vec<&str> = (0..n_terms).map(|_| pick(rng, lexicon::FILLER)).collect();
    Unit {
        leadins: Vec::new(),
        doctor_text: compose(rng, &content),
        planted: None,
        patient_texts: patient_block(rng),
    }
}

fn patient_block(rng: &mut ChaCha8Rng) -> Vec<String> {
    let count = rng.random_range(1..=2u32);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=5usize);
            let terms: Vec<&str> = (0..n).map(|_| pick(rng, lexicon::FILLER)).collect();
            compose(rng, &terms)
        })
        .collect()
}

/// Generates the three TSV streams for the configured corpus.
pub fn generate(config: &GenConfig) -> Result<GeneratedCorpus, GenError> {
    config.validate()?;
    let mut rng = seed::rng_for(config.seed, &[0x9e_17]);

    // Planted units in code declaration order, then untagged filler.
    let mut units: Vec<Unit> = Vec::new();
    for code in Code::MANUAL {
        let target = config.per_code_target.get(&code).copied().unwrap_or(0);
        for _ in 0..target {
            units.push(planted_unit(&mut rng, code, config));
        }
    }
    let filler_target = config
        .per_code_target
        .get(&Code::NotCoded)
        .copied()
        .unwrap_or(0);
    for _ in 0..filler_target {
        units.push(filler_unit(&mut rng, config));
    }
    seed::shuffle(&mut units, &mut rng);

    let needed: usize = units.iter().map(Unit::line_count).sum();
    let capacity = config.n_cases * config.lines_per_case.1 as usize;
    if needed > capacity {
        return Err(GenError::Infeasible { needed, capacity });
    }

    // Per-case targets, scaled to the actual unit supply so the units
    // spread over every case; the last case absorbs rounding leftovers.
    let raw_targets: Vec<f64> = (0..config.n_cases)
        .map(|_| f64::from(rng.random_range(config.lines_per_case.0..=config.lines_per_case.1)))
        .collect();
    let raw_total: f64 = raw_targets.iter().sum();
    let scale = needed as f64 / raw_total;
    let targets: Vec<usize> = raw_targets
        .iter()
        .map(|t| (t * scale).round().max(1.0) as usize)
        .collect();

    let coder_counts: Vec<u32> = (0..config.n_cases)
        .map(|_| rng.random_range(config.coders_per_case.0..=config.coders_per_case.1))
        .collect();

    let mut transcripts = String::from("case_id\tline_no\tspeaker\ttext\n");
    let mut annotations: Vec<(String, u32, String, Code)> = Vec::new();
    let mut coders_tsv = String::from("case_id\tn_coders\n");

    let mut next_unit = 0usize;
    for case_no in 0..config.n_cases {
        let case_id = format!("c{:04}", case_no + 1);
        let n_coders = coder_counts[case_no];
        let last_case = case_no + 1 == config.n_cases;
        let mut line_no: u32 = 0;

        while next_unit < units.len() && ((line_no as usize) < targets[case_no] || last_case) {
            let unit = &units[next_unit];
            next_unit += 1;
            for lead in &unit.leadins {
                line_no += 1;
                transcripts.push_str(&format!("{case_id}\t{line_no}\tD\t{lead}\n"));
            }
            line_no += 1;
            transcripts.push_str(&format!("{case_id}\t{line_no}\tD\t{}\n", unit.doctor_text));
            if let Some(planted) = &unit.planted {
                let primary = rng.random_range(1..=n_coders);
                annotations.push((case_id.clone(), line_no, format!("r{primary}"), planted.code));
                if n_coders >= 2 {
                    if let Some(second) = planted.second_code {
                        let coder = draw_other(&mut rng, n_coders, primary);
                        annotations.push((case_id.clone(), line_no, format!("r{coder}"), second));
                    }
                    if planted.agree_dup {
                        let coder = draw_other(&mut rng, n_coders, primary);
                        annotations.push((
                            case_id.clone(),
                            line_no,
                            format!("r{coder}"),
                            planted.code,
                        ));
                    }
                }
            }
            for pt in &unit.patient_texts {
                line_no += 1;
                transcripts.push_str(&format!("{case_id}\t{line_no}\tP\t{pt}\n"));
            }
        }
        if line_no == 0 {
            // ran out of units; keep the case non-empty
            let terms: Vec<&str> = (0..3).map(|_| pick(&mut rng, lexicon::FILLER)).collect();
            let text = compose(&mut rng, &terms);
            line_no += 1;
            transcripts.push_str(&format!("{case_id}\t{line_no}\tP\t{text}\n"));
        }
        coders_tsv.push_str(&format!("{case_id}\t{n_coders}\n"));
    }
    debug_assert_eq!(next_unit, units.len(), "last case absorbs leftovers");

    annotations
        .sort_by(|a, b| (&a.0, a.1, &a.2, a.3.ord()).cmp(&(&b.0, b.1, &b.2, b.3.ord())));
    let mut annotations_tsv = String::from("case_id\tline_no\tcoder_id\tcode\n");
    for (case, line, coder, code) in annotations {
        annotations_tsv.push_str(&format!("{case}\t{line}\t{coder}\t{code}\n"));
    }

    Ok(GeneratedCorpus {
        transcripts_tsv: transcripts,
        annotations_tsv,
        coders_tsv,
    })
}

fn draw_other(rng: &mut ChaCha8Rng, n_coders: u32, primary: u32) -> u32 {
    loop {
        let c = rng.random_range(1..=n_coders);
        if c != primary {
            return c;
        }
    }
}

/// Word-count group thresholds used by the audit and the experiments.
pub const GROUP_THRESHOLDS: [usize; 3] = [1, 3, 5];
pub const GROUP_NAMES: [&str; 3] = ["A", "B", "C"];

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub per_class_total: BTreeMap<Code, usize>,
    /// Usable-instance counts per class at word-count thresholds 1/3/5.
    pub per_class_groups: BTreeMap<Code, [usize; 3]>,
    /// Share of coded (non-`NotCoded`) audited lines with non-empty
    /// context.
    pub context_availability: f64,
    pub required_per_group: usize,
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("class\ttotal\tgroup_A\tgroup_B\tgroup_C\n");
        for (code, groups) in &self.per_class_groups {
            out.push_str(&format!(
                "{code}\t{}\t{}\t{}\t{}\n",
                self.per_class_total.get(code).copied().unwrap_or(0),
                groups[0],
                groups[1],
                groups[2]
            ));
        }
        out.push_str(&format!(
            "context_availability\t{:.4}\n",
            self.context_availability
        ));
        out.push_str(&format!("required_per_group\t{}\n", self.required_per_group));
        if self.ok() {
            out.push_str("status\tok\n");
        } else {
            for f in &self.failures {
                out.push_str(&format!("failure\t{f}\n"));
            }
        }
        out
    }
}

/// Checks that every audited class clears `required` usable instances in
/// each word-count group, and reports context availability.
pub fn audit(
    pool: &InstancePool,
    pre_config: &PreprocessConfig,
    classes: &[Code],
    required: usize,
) -> AuditReport {
    let mut per_class_total = BTreeMap::new();
    let mut per_class_groups = BTreeMap::new();
    let mut failures = Vec::new();
    let mut coded_lines = 0usize;
    let mut coded_with_context = 0usize;

    for &class in classes {
        let bucket = pool.bucket(class);
        per_class_total.insert(class, bucket.len());
        let mut groups = [0usize; 3];
        for line in bucket {
            let inst = preprocess_line(line, Variant::Single, pre_config);
            for (gi, &threshold) in GROUP_THRESHOLDS.iter().enumerate() {
                if inst.words(pre_config.word_count_basis) >= threshold {
                    groups[gi] += 1;
                }
            }
            if class != Code::NotCoded {
                coded_lines += 1;
                if !line.context.is_empty() {
                    coded_with_context += 1;
                }
            }
        }
        for (gi, name) in GROUP_NAMES.iter().enumerate() {
            if groups[gi] < required {
                failures.push(format!(
                    "class {class} group {name}: {} < {required}",
                    groups[gi]
                ));
            }
        }
        per_class_groups.insert(class, groups);
    }

    AuditReport {
        per_class_total,
        per_class_groups,
        context_availability: if coded_lines == 0 {
            0.0
        } else {
            coded_with_context as f64 / coded_lines as f64
        },
        required_per_group: required,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{
        attach_context, merge_and_dedup, parse_annotations, parse_coders, parse_transcripts,
        ContextMode, Scope,
    };

    fn small_config() -> GenConfig {
        let mut per_code_target = BTreeMap::new();
        for code in Code::EXPERIMENT {
            per_code_target.insert(code, 60);
        }
        per_code_target.insert(Code::NotCoded, 70);
        GenConfig {
            n_cases: 30,
            lines_per_case: (30, 60),
            per_code_target,
            seed: 7,
            ..GenConfig::default()
        }
    }

    #[test]
    fn same_seed_gives_byte_identical_output() {
        let config = small_config();
        let a = generate(&config).unwrap();
        let b = generate(&config).unwrap();
        assert_eq!(a, b);
        let other = generate(&GenConfig {
            seed: 8,
            ..small_config()
        })
        .unwrap();
        assert_ne!(a.transcripts_tsv, other.transcripts_tsv);
    }

    #[test]
    fn generated_corpus_parses_cleanly() {
        let corpus = generate(&small_config()).unwrap();
        let utts = parse_transcripts(&corpus.transcripts_tsv).unwrap();
        let anns = parse_annotations(&corpus.annotations_tsv).unwrap();
        let coders = parse_coders(&corpus.coders_tsv).unwrap();
        assert!(!utts.is_empty());
        assert!(!anns.is_empty());
        assert_eq!(coders.len(), 30);
        // every annotation resolves; merge succeeds
        merge_and_dedup(&utts, &anns, Scope::PhysicianOnly).unwrap();
    }

    #[test]
    fn zero_disagreement_means_one_code_per_line() {
        let config = GenConfig {
            disagreement_rate: 0.0,
            ..small_config()
        };
        let corpus = generate(&config).unwrap();
        let anns = parse_annotations(&corpus.annotations_tsv).unwrap();
        let mut codes_per_line: BTreeMap<(String, u32), std::collections::BTreeSet<Code>> =
            BTreeMap::new();
        for a in anns {
            codes_per_line
                .entry((a.case_id, a.line_no))
                .or_default()
                .insert(a.code);
        }
        assert!(codes_per_line.values().all(|s| s.len() == 1));
    }

    #[test]
    fn bucket_sizes_meet_the_planted_targets() {
        let mut config = small_config();
        config.per_code_target.insert(Code::SurvTime, 250);
        config.n_cases = 80;
        let corpus = generate(&config).unwrap();
        let utts = parse_transcripts(&corpus.transcripts_tsv).unwrap();
        let anns = parse_annotations(&corpus.annotations_tsv).unwrap();
        let pool = merge_and_dedup(&utts, &anns, Scope::PhysicianOnly).unwrap();
        assert!(
            pool.bucket(Code::SurvTime).len() >= 250,
            "planted 250, bucket has {}",
            pool.bucket(Code::SurvTime).len()
        );
    }

    #[test]
    fn zero_context_rate_gives_zero_availability() {
        let config = GenConfig {
            context_signal_rate: 0.0,
            ..small_config()
        };
        let corpus = generate(&config).unwrap();
        let utts = parse_transcripts(&corpus.transcripts_tsv).unwrap();
        let anns = parse_annotations(&corpus.annotations_tsv).unwrap();
        let pool = merge_and_dedup(&utts, &anns, Scope::PhysicianOnly).unwrap();
        let pool = attach_context(&pool, &utts, ContextMode::SameSpeaker);
        let report = audit(&pool, &PreprocessConfig::default(), &Code::EXPERIMENT, 1);
        assert_eq!(report.context_availability, 0.0);
    }

    #[test]
    fn context_rate_shows_up_as_availability() {
        let corpus = generate(&small_config()).unwrap();
        let utts = parse_transcripts(&corpus.transcripts_tsv).unwrap();
        let anns = parse_annotations(&corpus.annotations_tsv).unwrap();
        let pool = merge_and_dedup(&utts, &anns, Scope::PhysicianOnly).unwrap();
        let pool = attach_context(&pool, &utts, ContextMode::SameSpeaker);
        let report = audit(&pool, &PreprocessConfig::default(), &Code::EXPERIMENT, 1);
        // configured 0.75; disagreement copies shift it a little
        assert!(
            (report.context_availability - 0.75).abs() < 0.1,
            "availability {}",
            report.context_availability
        );
    }

    #[test]
    fn audit_passes_proportionally_scaled_requirements() {
        let corpus = generate(&small_config()).unwrap();
        let utts = parse_transcripts(&corpus.transcripts_tsv).unwrap();
        let anns = parse_annotations(&corpus.annotations_tsv).unwrap();
        let pool = merge_and_dedup(&utts, &anns, Scope::PhysicianOnly).unwrap();
        let pool = attach_context(&pool, &utts, ContextMode::SameSpeaker);
        let mut classes = Code::EXPERIMENT.to_vec();
        classes.push(Code::NotCoded);
        // 60 planted per class with half the mixture mass at >=5 words:
        // 20 per group is the scaled-down version of 190-of-600
        let report = audit(&pool, &PreprocessConfig::default(), &classes, 20);
        assert!(report.ok(), "failures: {:?}", report.failures);
    }

    #[test]
    fn single_word_mixture_fails_group_c() {
        let config = GenConfig {
            length_mixture: [1.0, 0.0, 0.0],
            ..small_config()
        };
        let corpus = generate(&config).unwrap();
        let utts = parse_transcripts(&corpus.transcripts_tsv).unwrap();
        let anns = parse_annotations(&corpus.annotations_tsv).unwrap();
        let pool = merge_and_dedup(&utts, &anns, Scope::PhysicianOnly).unwrap();
        let report = audit(&pool, &PreprocessConfig::default(), &[Code::SurvTime], 1);
        let groups = report.per_class_groups[&Code::SurvTime];
        assert_eq!(groups[2], 0, "no line should reach 5 terms");
        assert!(!report.ok());
    }

    #[test]
    fn infeasible_config_is_rejected() {
        let config = GenConfig {
            n_cases: 2,
            lines_per_case: (5, 10),
            ..small_config()
        };
        assert!(matches!(
            generate(&config).unwrap_err(),
            GenError::Infeasible { .. }
        ));
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert!(matches!(
            generate(&GenConfig {
                disagreement_rate: 1.5,
                ..small_config()
            })
            .unwrap_err(),
            GenError::BadConfig(_)
        ));
        assert!(matches!(
            generate(&GenConfig {
                length_mixture: [0.0, 0.0, 0.0],
                ..small_config()
            })
            .unwrap_err(),
            GenError::BadConfig(_)
        ));
        assert!(matches!(
            generate(&GenConfig {
                lines_per_case: (20, 10),
                ..small_config()
            })
            .unwrap_err(),
            GenError::BadConfig(_)
        ));
    }
}
