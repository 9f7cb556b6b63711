//! Text preprocessing: raw utterance text to a multiset of stemmed
//! content terms.
//!
//! The pipeline is `tokenize -> pos_tag -> content_filter -> stem ->
//! remove_stopwords`, applied per line (transcripts are already
//! line-delimited utterances). Every stage is a pure function, so lines
//! can be processed in parallel and identical input always yields the
//! identical instance.

mod porter;
mod tagger;

pub use porter::stem;
pub use tagger::tag;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::corpus::{Code, CodedLine};

/// Coarse part-of-speech classes. Only the content/function distinction
/// matters downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Other,
}

impl Pos {
    pub fn is_content(self) -> bool {
        !matches!(self, Pos::Other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub pos: Pos,
}

/// Whether an instance is built from the target line alone or from the
/// line plus its attached context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    Single,
    WithContext,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Single => "single",
            Variant::WithContext => "with_context",
        }
    }
}

/// Stable identifier for one preprocessed instance.
///
/// Sorts by (case, line, code, variant), the canonical order used for
/// reproducible sampling and truncation everywhere.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InstanceId {
    pub case_id: String,
    pub line_no: u32,
    pub code: Code,
    pub variant: Variant,
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}",
            self.case_id,
            self.line_no,
            self.code,
            self.variant.name()
        )
    }
}

/// Preprocessed term multiset for one coded line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub id: InstanceId,
    pub label: Code,
    /// Stemmed content terms, in token order; multiset semantics.
    pub terms: Vec<String>,
    /// Multiset cardinality of `terms`.
    pub word_count: usize,
    /// Token count before filtering, for the alternate grouping basis.
    pub raw_token_count: usize,
}

impl Instance {
    /// Instances with an empty term multiset carry no evidence and are
    /// excluded from pools downstream.
    pub fn usable(&self) -> bool {
        self.word_count >= 1
    }

    pub fn words(&self, basis: WordCountBasis) -> usize {
        match basis {
            WordCountBasis::Terms => self.word_count,
            WordCountBasis::RawTokens => self.raw_token_count,
        }
    }

    /// One debug-dump row: `id<TAB>label<TAB>term term term...`
    pub fn dump_row(&self) -> String {
        format!("{}\t{}\t{}", self.id, self.label, self.terms.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TaggerMode {
    #[default]
    Lexicon,
    /// Bypass tagging (and with it the content filter) entirely.
    None,
}

/// What the group thresholds (#words >= n) count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WordCountBasis {
    /// Post-preprocessing term count (default).
    #[default]
    Terms,
    /// Raw token count before filtering.
    RawTokens,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreprocessConfig {
    pub pos_filter_enabled: bool,
    pub tagger: TaggerMode,
    pub word_count_basis: WordCountBasis,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            pos_filter_enabled: true,
            tagger: TaggerMode::Lexicon,
            word_count_basis: WordCountBasis::Terms,
        }
    }
}

impl PreprocessConfig {
    /// Identifier of the embedded stopword list, echoed in reports.
    pub fn stopword_list_id(&self) -> &'static str {
        "embedded-english-v1"
    }
}

/// Splits on whitespace, strips leading/trailing punctuation, lowercases,
/// and drops tokens that end up empty or without any alphabetic
/// character. Internal apostrophes and hyphens survive. Total: never
/// fails.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let trimmed = raw.trim_matches(|c: char| !c.is_alphanumeric());
            if trimmed.is_empty() {
                return None;
            }
            let lower = trimmed.to_lowercase();
            if !lower.chars().any(|c| c.is_alphabetic()) {
                return None;
            }
            Some(lower)
        })
        .collect()
}

/// Assigns each token exactly one coarse tag.
pub fn pos_tag(tokens: &[String]) -> Vec<Token> {
    tokens
        .iter()
        .map(|t| Token {
            surface: t.clone(),
            pos: tagger::tag(t),
        })
        .collect()
}

/// Keeps nouns, verbs, adjectives, and adverbs. Identity when disabled.
pub fn content_filter(tokens: Vec<Token>, enabled: bool) -> Vec<Token> {
    if !enabled {
        return tokens;
    }
    tokens.into_iter().filter(|t| t.pos.is_content()).collect()
}

const STOPWORDS: &str = include_str!("stopwords.txt");

/// Stopword surfaces plus their stems, so a stemmed term is caught
/// whether the list names its surface or its stem ("doing" -> "do").
fn stopword_stems() -> &'static BTreeSet<String> {
    static SET: OnceLock<BTreeSet<String>> = OnceLock::new();
    SET.get_or_init(|| {
        let mut set = BTreeSet::new();
        for word in STOPWORDS.lines() {
            let word = word.trim();
            if word.is_empty() {
                continue;
            }
            set.insert(word.to_string());
            set.insert(stem(word));
        }
        set
    })
}

/// Drops stemmed terms whose surface or stem is stoplisted.
pub fn remove_stopwords(terms: Vec<String>) -> Vec<String> {
    let stops = stopword_stems();
    terms.into_iter().filter(|t| !stops.contains(t)).collect()
}

/// Runs the whole pipeline for one coded line.
///
/// `Variant::WithContext` concatenates the context texts and the target
/// text in dialogue order before tokenizing. An empty term multiset marks
/// the instance unusable rather than failing.
pub fn preprocess_line(line: &CodedLine, variant: Variant, config: &PreprocessConfig) -> Instance {
    let text = match variant {
        Variant::Single => line.utterance.text.clone(),
        Variant::WithContext => {
            let mut parts: Vec<&str> = line.context.iter().map(|u| u.text.as_str()).collect();
            parts.push(&line.utterance.text);
            parts.join(" ")
        }
    };
    let tokens = tokenize(&text);
    let raw_token_count = tokens.len();
    let surfaces: Vec<String> = match config.tagger {
        TaggerMode::Lexicon => content_filter(pos_tag(&tokens), config.pos_filter_enabled)
            .into_iter()
            .map(|t| t.surface)
            .collect(),
        TaggerMode::None => tokens,
    };
    let stems: Vec<String> = surfaces.iter().map(|s| stem(s)).collect();
    let terms = remove_stopwords(stems);
    let word_count = terms.len();
    Instance {
        id: InstanceId {
            case_id: line.utterance.case_id.clone(),
            line_no: line.utterance.line_no,
            code: line.code,
            variant,
        },
        label: line.code,
        terms,
        word_count,
        raw_token_count,
    }
}
