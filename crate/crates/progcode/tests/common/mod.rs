//! Shared helpers for the integration and acceptance suites.

#![allow(dead_code)]

pub mod cart_ref;
pub mod porter_ref;

use std::path::{Path, PathBuf};

use progcode::corpus::{
    attach_context, merge_and_dedup, parse_annotations, parse_transcripts, ContextMode, Scope,
};
use progcode::experiments::{prepare_pool, PreparedPool};
use progcode::preprocess::PreprocessConfig;
use progcode::synth::{generate, GenConfig, GeneratedCorpus};

/// Path to the checked-in Porter oracle file.
pub fn porter_oracle_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/porter_oracle.tsv")
}

/// Generates a corpus and ingests it end to end with default settings.
pub fn generated_pool(config: &GenConfig) -> (GeneratedCorpus, PreparedPool) {
    let corpus = generate(config).expect("feasible generator config");
    let utterances = parse_transcripts(&corpus.transcripts_tsv).expect("valid transcripts");
    let annotations = parse_annotations(&corpus.annotations_tsv).expect("valid annotations");
    let pool =
        merge_and_dedup(&utterances, &annotations, Scope::PhysicianOnly).expect("no dangling");
    let pool = attach_context(&pool, &utterances, ContextMode::SameSpeaker);
    (corpus, prepare_pool(&pool, &PreprocessConfig::default()))
}

/// Recursively collects relative paths of all files under a directory.
pub fn file_tree(root: &Path) -> Vec<PathBuf> {
    fn walk(dir: &Path, root: &Path, out: &mut Vec<PathBuf>) {
        let mut entries: Vec<_> = std::fs::read_dir(dir)
            .unwrap_or_else(|e| panic!("read_dir {}: {e}", dir.display()))
            .map(|e| e.unwrap().path())
            .collect();
        entries.sort();
        for path in entries {
            if path.is_dir() {
                walk(&path, root, out);
            } else {
                out.push(path.strip_prefix(root).unwrap().to_path_buf());
            }
        }
    }
    let mut out = Vec::new();
    walk(root, root, &mut out);
    out
}
