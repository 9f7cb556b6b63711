//! Coarse part-of-speech tagging for the content-word filter.
//!
//! Three layers, first hit wins: a closed-class lexicon (function words
//! tag as `Other`), suffix heuristics, then `Noun` as the default. The
//! downstream filter only distinguishes content tags from `Other`, so a
//! coarse tagger is all the pipeline needs.

use super::Pos;

/// Function words: pronouns, determiners, prepositions, conjunctions,
/// auxiliaries, and their common contractions.
const CLOSED_CLASS: &[&str] = &[
    // pronouns
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves", "you", "your",
    "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers",
    "herself", "it", "its", "itself", "they", "them", "their", "theirs", "themselves", "who",
    "whom", "whose", "what", "which", "this", "that", "these", "those", "anybody", "anyone",
    "anything", "everybody", "everyone", "everything", "somebody", "someone", "something",
    "nobody", "nothing", "none",
    // determiners
    "a", "an", "the", "each", "every", "either", "neither", "some", "any", "no", "all", "both",
    "few", "many", "much", "most", "other", "another", "such", "same",
    // prepositions
    "of", "in", "to", "for", "with", "on", "at", "by", "from", "up", "down", "about", "into",
    "over", "under", "above", "below", "between", "among", "through", "during", "before",
    "after", "against", "around", "near", "off", "out", "across", "behind", "beyond", "within",
    "without", "toward", "towards", "upon", "onto", "per", "via", "beneath",
    // conjunctions
    "and", "but", "or", "nor", "so", "yet", "if", "because", "although", "though", "while",
    "whereas", "unless", "until", "when", "whenever", "where", "wherever", "since", "than",
    "whether", "as", "once",
    // auxiliaries and modals
    "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having",
    "do", "does", "did", "doing", "will", "would", "shall", "should", "can", "could", "may",
    "might", "must", "ought", "not", "cannot",
    // contractions
    "i'm", "i've", "i'll", "i'd", "you're", "you've", "you'll", "you'd", "he's", "he'll",
    "he'd", "she's", "she'll", "she'd", "it's", "it'll", "we're", "we've", "we'll", "we'd",
    "they're", "they've", "they'll", "they'd", "isn't", "aren't", "wasn't", "weren't", "don't",
    "doesn't", "didn't", "won't", "wouldn't", "can't", "couldn't", "shouldn't", "mustn't",
    "haven't", "hasn't", "hadn't", "let's", "that's", "there's", "here's", "what's", "who's",
];

fn closed_class(surface: &str) -> bool {
    CLOSED_CLASS.contains(&surface)
}

/// Tags one lowercased token.
pub fn tag(surface: &str) -> Pos {
    if closed_class(surface) {
        return Pos::Other;
    }
    if surface.ends_with("ly") {
        return Pos::Adverb;
    }
    if ["ous", "ful", "ive", "able"]
        .iter()
        .any(|s| surface.ends_with(s))
    {
        return Pos::Adjective;
    }
    if ["ize", "ed", "ing"].iter().any(|s| surface.ends_with(s)) {
        return Pos::Verb;
    }
    Pos::Noun
}
