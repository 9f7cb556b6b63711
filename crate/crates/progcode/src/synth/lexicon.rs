//! Signal vocabularies for the generator.
//!
//! Each code's signal terms are seeded from the coding manual's example
//! sentences for that code, so generated text resembles the target
//! domain. The six experiment codes get rich, stem-disjoint lexicons
//! (class separability on generated data depends on it); the five rarely
//! used codes get token lexicons. Filler words are shared by every
//! speaker and carry no class signal.

use crate::corpus::Code;

/// Signal terms for one code. Every entry survives the preprocessing
/// pipeline: content-tagged, not stoplisted, non-empty after stemming.
pub fn signal_terms(code: Code) -> &'static [&'static str] {
    match code {
        Code::ChgforWorse => &[
            "progressing",
            "chemo",
            "worse",
            "trajectory",
            "symptoms",
            "tumor",
            "markers",
            "elevated",
            "growing",
            "spreading",
        ],
        Code::FurQol => &[
            "road",
            "energy",
            "socialize",
            "future",
            "quality",
            "life",
            "activities",
            "hobbies",
            "independence",
        ],
        Code::PallCare => &[
            "palliative",
            "comfort",
            "stopping",
            "focusing",
            "thoughts",
            "considering",
        ],
        Code::AdvDirect => &[
            "family",
            "discussed",
            "issues",
            "support",
            "power",
            "attorney",
            "directives",
            "wishes",
        ],
        Code::Curability => &[
            "cure",
            "rid",
            "cancer",
            "treatments",
            "completely",
            "longer",
            "eliminate",
        ],
        Code::SurvTime => &[
            "christmas",
            "months",
            "survive",
            "survival",
            "weeks",
            "estimate",
        ],
        Code::CancKnowl => &["understand", "tell", "knowledge"],
        Code::OpenDoor => &["know", "holds", "curious"],
        Code::UnderSProg => &["prognosis", "understanding"],
        Code::BestWorstCase => &["scenario", "best", "worst"],
        Code::DoubFram => &["research", "relapse", "percent", "framing"],
        Code::NotCoded => &[],
    }
}

/// Shared content words with no class signal.
pub const FILLER: &[&str] = &[
    "today",
    "talk",
    "visit",
    "morning",
    "nurse",
    "office",
    "appointment",
    "review",
    "results",
    "blood",
    "pressure",
    "sleep",
    "appetite",
    "walking",
    "daughter",
    "son",
    "wife",
    "husband",
    "drive",
    "home",
    "questions",
    "plan",
    "schedule",
    "insurance",
    "pharmacy",
    "refill",
    "dose",
    "tablet",
    "water",
    "exercise",
    "weather",
    "weekend",
    "garden",
    "coffee",
    "breakfast",
    "lunch",
    "dinner",
    "phone",
    "letter",
    "paperwork",
    "parking",
    "waiting",
    "room",
    "chair",
    "window",
    "tired",
    "chart",
    "folder",
    "signature",
    "stairs",
    "hallway",
    "reception",
    "billing",
    "notes",
    "clipboard",
    "badge",
    "printer",
    "calendar",
];

/// Function words woven between content words; all of them are dropped
/// by the pipeline (closed-class and stoplisted).
pub const GLUE: &[&str] = &[
    "the", "a", "i", "you", "we", "it", "is", "are", "was", "do", "and", "but", "or", "so",
    "to", "of", "in", "on", "at", "about", "have", "has", "that", "this", "not", "will",
    "can", "with",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CodedLine, Speaker, Utterance, EXPERIMENT_CODES};
    use crate::preprocess::{preprocess_line, stem, PreprocessConfig, Variant};
    use std::collections::BTreeSet;

    fn survives(word: &str) -> bool {
        let line = CodedLine {
            utterance: Utterance {
                case_id: "t".into(),
                line_no: 1,
                speaker: Speaker::Doctor,
                text: word.to_string(),
            },
            code: Code::NotCoded,
            context: vec![],
        };
        let inst = preprocess_line(&line, Variant::Single, &PreprocessConfig::default());
        inst.word_count == 1
    }

    #[test]
    fn every_signal_and_filler_term_survives_preprocessing() {
        for code in Code::ALL {
            for term in signal_terms(code) {
                assert!(survives(term), "signal term {term} ({code}) was dropped");
            }
        }
        for term in FILLER {
            assert!(survives(term), "filler term {term} was dropped");
        }
    }

    #[test]
    fn glue_words_never_survive_preprocessing() {
        for word in GLUE {
            assert!(!survives(word), "glue word {word} survived");
        }
    }

    #[test]
    fn experiment_code_stems_are_pairwise_disjoint() {
        let stemmed: Vec<(Code, BTreeSet<String>)> = EXPERIMENT_CODES
            .iter()
            .map(|&c| (c, signal_terms(c).iter().map(|t| stem(t)).collect()))
            .collect();
        for (i, (ca, sa)) in stemmed.iter().enumerate() {
            for (cb, sb) in stemmed.iter().skip(i + 1) {
                let overlap: Vec<&String> = sa.intersection(sb).collect();
                assert!(
                    overlap.is_empty(),
                    "{ca} and {cb} share stems: {overlap:?}"
                );
            }
        }
    }

    #[test]
    fn filler_stems_do_not_collide_with_experiment_signal() {
        let filler: BTreeSet<String> = FILLER.iter().map(|t| stem(t)).collect();
        for &code in &EXPERIMENT_CODES {
            for term in signal_terms(code) {
                assert!(
                    !filler.contains(&stem(term)),
                    "filler collides with {code} signal term {term}"
                );
            }
        }
    }
}
