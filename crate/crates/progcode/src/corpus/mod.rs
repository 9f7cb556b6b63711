//! Corpus model: transcripts, coder annotations, and the rules that turn
//! them into per-code instance pools.
//!
//! A transcript is a sequence of utterances (one speaker turn per line).
//! Human coders tag lines with codes from the prognosis-communication
//! manual. Merging collapses duplicate (line, code) pairs from multiple
//! coders, keeps a line once per distinct code, and routes untagged
//! physician lines into the `NotCoded` pool.

mod parse;

pub use parse::{parse_annotations, parse_coders, parse_transcripts, ParseError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// The eleven manual codes plus the derived `NotCoded` sentinel.
///
/// Declaration order is load-bearing: prediction ties everywhere in the
/// crate break toward the earlier variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    CancKnowl,
    OpenDoor,
    UnderSProg,
    ChgforWorse,
    FurQol,
    PallCare,
    AdvDirect,
    Curability,
    SurvTime,
    BestWorstCase,
    DoubFram,
    /// Sentinel for physician lines carrying no manual code. Never valid in
    /// annotation input; always derived during merging.
    NotCoded,
}

impl Code {
    pub const ALL: [Code; 12] = [
        Code::CancKnowl,
        Code::OpenDoor,
        Code::UnderSProg,
        Code::ChgforWorse,
        Code::FurQol,
        Code::PallCare,
        Code::AdvDirect,
        Code::Curability,
        Code::SurvTime,
        Code::BestWorstCase,
        Code::DoubFram,
        Code::NotCoded,
    ];

    /// The six codes frequent enough to compare in the experiments; the
    /// other five manual codes are parsed and pooled but excluded from
    /// experiment class sets by configuration.
    pub const EXPERIMENT: [Code; 6] = [
        Code::ChgforWorse,
        Code::FurQol,
        Code::PallCare,
        Code::AdvDirect,
        Code::Curability,
        Code::SurvTime,
    ];

    /// The eleven codes that may appear in annotation files.
    pub const MANUAL: [Code; 11] = [
        Code::CancKnowl,
        Code::OpenDoor,
        Code::UnderSProg,
        Code::ChgforWorse,
        Code::FurQol,
        Code::PallCare,
        Code::AdvDirect,
        Code::Curability,
        Code::SurvTime,
        Code::BestWorstCase,
        Code::DoubFram,
    ];

    /// Case-sensitive parse over the full 12-value set.
    pub fn parse(name: &str) -> Option<Code> {
        Code::ALL.iter().copied().find(|c| c.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Code::CancKnowl => "CancKnowl",
            Code::OpenDoor => "OpenDoor",
            Code::UnderSProg => "UnderSProg",
            Code::ChgforWorse => "ChgforWorse",
            Code::FurQol => "FurQol",
            Code::PallCare => "PallCare",
            Code::AdvDirect => "AdvDirect",
            Code::Curability => "Curability",
            Code::SurvTime => "SurvTime",
            Code::BestWorstCase => "BestWorstCase",
            Code::DoubFram => "DoubFram",
            Code::NotCoded => "NotCoded",
        }
    }

    /// Codes only ever applied to physician utterances.
    pub fn physician_only(self) -> bool {
        matches!(self, Code::CancKnowl | Code::OpenDoor | Code::UnderSProg)
    }

    /// Position in declaration order; the universal tie-break key.
    pub fn ord(self) -> usize {
        Code::ALL.iter().position(|c| *c == self).unwrap()
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The experiment class set without `NotCoded` (used by the context
/// experiment); the other two experiments add `NotCoded` to it.
pub const EXPERIMENT_CODES: [Code; 6] = Code::EXPERIMENT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Speaker {
    Doctor,
    Patient,
}

impl Speaker {
    pub fn tag(self) -> &'static str {
        match self {
            Speaker::Doctor => "D",
            Speaker::Patient => "P",
        }
    }
}

/// One transcript line: a single speaker turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utterance {
    pub case_id: String,
    /// 1-based, unique within a case, increasing in file order.
    pub line_no: u32,
    pub speaker: Speaker,
    pub text: String,
}

impl Utterance {
    pub fn key(&self) -> (String, u32) {
        (self.case_id.clone(), self.line_no)
    }
}

/// One coder's tag on one line. `NotCoded` never appears here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub case_id: String,
    pub line_no: u32,
    pub coder_id: String,
    pub code: Code,
}

/// An utterance paired with exactly one code, the unit of classification.
///
/// `context` holds the maximal run of immediately preceding utterances in
/// the same case spoken by the same speaker (empty until
/// [`attach_context`] runs, and empty afterwards for lines whose
/// predecessor is the other speaker).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedLine {
    pub utterance: Utterance,
    pub code: Code,
    pub context: Vec<Utterance>,
}

impl CodedLine {
    fn new(utterance: Utterance, code: Code) -> Self {
        CodedLine {
            utterance,
            code,
            context: Vec::new(),
        }
    }
}

/// Which utterances participate in pool construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scope {
    /// Only physician lines enter buckets; patient lines are dropped.
    #[default]
    PhysicianOnly,
    All,
}

/// Which preceding lines count as context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContextMode {
    /// Maximal run of immediately preceding lines by the same speaker.
    #[default]
    SameSpeaker,
    /// Maximal run of immediately preceding lines by the other speaker.
    OtherSpeaker,
}

/// Per-code buckets of coded lines, including the `NotCoded` bucket.
///
/// Bucket lists are in canonical order (case id, then line number), so
/// seeded sampling downstream is reproducible.
#[derive(Debug, Clone, Default)]
pub struct InstancePool {
    buckets: BTreeMap<Code, Vec<CodedLine>>,
}

impl InstancePool {
    pub fn bucket(&self, code: Code) -> &[CodedLine] {
        self.buckets.get(&code).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Codes with a (possibly empty) bucket, in declaration order.
    pub fn codes(&self) -> impl Iterator<Item = Code> + '_ {
        self.buckets.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Code, &[CodedLine])> {
        self.buckets.iter().map(|(c, v)| (*c, v.as_slice()))
    }

    pub fn total_lines(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("annotation references missing utterance ({case_id}, line {line_no})")]
    DanglingAnnotation { case_id: String, line_no: u32 },
    #[error("case {case_id} appears in annotations but not in the coder roster")]
    MissingCoderCount { case_id: String },
}

/// Merges transcripts and annotations into per-code pools.
///
/// For each (case, line), the set of distinct codes assigned by any coder
/// yields one [`CodedLine`] per code; duplicate (line, code) pairs from
/// multiple coders collapse to one. Utterances with no annotation populate
/// the `NotCoded` bucket. Under [`Scope::PhysicianOnly`], patient
/// utterances are dropped before any of this happens.
pub fn merge_and_dedup(
    utterances: &[Utterance],
    annotations: &[Annotation],
    scope: Scope,
) -> Result<InstancePool, CorpusError> {
    let known: BTreeSet<(&str, u32)> = utterances
        .iter()
        .map(|u| (u.case_id.as_str(), u.line_no))
        .collect();
    for ann in annotations {
        if !known.contains(&(ann.case_id.as_str(), ann.line_no)) {
            return Err(CorpusError::DanglingAnnotation {
                case_id: ann.case_id.clone(),
                line_no: ann.line_no,
            });
        }
    }

    let mut codes_by_line: BTreeMap<(&str, u32), BTreeSet<Code>> = BTreeMap::new();
    for ann in annotations {
        codes_by_line
            .entry((ann.case_id.as_str(), ann.line_no))
            .or_default()
            .insert(ann.code);
    }

    let mut buckets: BTreeMap<Code, Vec<CodedLine>> = BTreeMap::new();
    buckets.insert(Code::NotCoded, Vec::new());

    // Utterances sorted canonically so bucket order is reproducible
    // regardless of input file order.
    let mut ordered: Vec<&Utterance> = utterances.iter().collect();
    ordered.sort_by(|a, b| (&a.case_id, a.line_no).cmp(&(&b.case_id, b.line_no)));

    for utt in ordered {
        if scope == Scope::PhysicianOnly && utt.speaker == Speaker::Patient {
            continue;
        }
        match codes_by_line.get(&(utt.case_id.as_str(), utt.line_no)) {
            Some(codes) => {
                for &code in codes {
                    buckets
                        .entry(code)
                        .or_default()
                        .push(CodedLine::new(utt.clone(), code));
                }
            }
            None => buckets
                .get_mut(&Code::NotCoded)
                .unwrap()
                .push(CodedLine::new(utt.clone(), Code::NotCoded)),
        }
    }

    Ok(InstancePool { buckets })
}

/// Keeps (case, line, code) only when strictly more than half of the
/// case's coders assigned that code.
///
/// Optional pre-pass before [`merge_and_dedup`]; off by default since low
/// interrater agreement starves the pools on realistic data. Output is a
/// subset of the input in input order, and re-applying is a fixpoint.
pub fn majority_filter(
    annotations: &[Annotation],
    coders_per_case: &BTreeMap<String, u32>,
) -> Result<Vec<Annotation>, CorpusError> {
    let mut coders: BTreeMap<(&str, u32, Code), BTreeSet<&str>> = BTreeMap::new();
    for ann in annotations {
        if !coders_per_case.contains_key(&ann.case_id) {
            return Err(CorpusError::MissingCoderCount {
                case_id: ann.case_id.clone(),
            });
        }
        coders
            .entry((ann.case_id.as_str(), ann.line_no, ann.code))
            .or_default()
            .insert(ann.coder_id.as_str());
    }

    Ok(annotations
        .iter()
        .filter(|ann| {
            let n = coders_per_case[&ann.case_id];
            let agree = coders[&(ann.case_id.as_str(), ann.line_no, ann.code)].len() as u32;
            agree * 2 > n
        })
        .cloned()
        .collect())
}

/// Attaches each coded line's preceding same-speaker run as its context.
///
/// The run is maximal and gap-free: it stops at the first preceding line
/// spoken by the other speaker (or, in [`ContextMode::OtherSpeaker`], the
/// first by the same speaker). A line at the start of its case gets empty
/// context.
pub fn attach_context(
    pool: &InstancePool,
    utterances: &[Utterance],
    mode: ContextMode,
) -> InstancePool {
    // Case -> utterances in file order, with a (case, line) -> position index.
    let mut by_case: BTreeMap<&str, Vec<&Utterance>> = BTreeMap::new();
    for u in utterances {
        by_case.entry(u.case_id.as_str()).or_default().push(u);
    }
    let mut pos: BTreeMap<(&str, u32), usize> = BTreeMap::new();
    for (case, lines) in &by_case {
        for (i, u) in lines.iter().enumerate() {
            pos.insert((case, u.line_no), i);
        }
    }

    let mut buckets: BTreeMap<Code, Vec<CodedLine>> = BTreeMap::new();
    for (code, lines) in pool.iter() {
        let out = lines
            .iter()
            .map(|cl| {
                let case = cl.utterance.case_id.as_str();
                let lines = &by_case[case];
                let at = pos[&(case, cl.utterance.line_no)];
                let target = cl.utterance.speaker;
                let keep = |s: Speaker| match mode {
                    ContextMode::SameSpeaker => s == target,
                    ContextMode::OtherSpeaker => s != target,
                };
                let mut start = at;
                while start > 0 && keep(lines[start - 1].speaker) {
                    start -= 1;
                }
                let mut ctx: Vec<Utterance> =
                    lines[start..at].iter().map(|u| (*u).clone()).collect();
                // In OtherSpeaker mode the run directly above the target is
                // by the other speaker; in SameSpeaker mode it is the
                // target's own run. Either way it is contiguous.
                if mode == ContextMode::OtherSpeaker && start == at {
                    ctx.clear();
                }
                CodedLine {
                    utterance: cl.utterance.clone(),
                    code: cl.code,
                    context: ctx,
                }
            })
            .collect();
        buckets.insert(code, out);
    }
    InstancePool { buckets }
}
