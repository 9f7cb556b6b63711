//! TSV parsers for the three corpus input files.
//!
//! All three formats are UTF-8, tab-separated, one header row, and reject
//! rows with the wrong column count (tabs are forbidden inside text).
//! Row numbers in errors are 1-based and include the header.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use super::{Annotation, Code, Speaker, Utterance};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("row {row}: expected {expected} tab-separated columns, found {found}")]
    ColumnCount {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}: bad header, expected `{expected}`")]
    BadHeader { row: usize, expected: String },
    #[error("row {row}: unknown speaker `{token}` (expected D or P)")]
    UnknownSpeaker { row: usize, token: String },
    #[error("row {row}: unknown code `{token}`")]
    UnknownCode { row: usize, token: String },
    #[error("row {row}: `{field}` is not a positive integer: `{token}`")]
    BadNumber {
        row: usize,
        field: &'static str,
        token: String,
    },
    #[error("row {row}: duplicate line ({case_id}, {line_no})")]
    DuplicateLine {
        row: usize,
        case_id: String,
        line_no: u32,
    },
    #[error("row {row}: line_no {line_no} does not increase within case {case_id}")]
    NonIncreasingLine {
        row: usize,
        case_id: String,
        line_no: u32,
    },
    #[error("row {row}: empty `{field}`")]
    EmptyField { row: usize, field: &'static str },
    #[error("empty input: missing header row")]
    Empty,
}

const TRANSCRIPT_HEADER: &str = "case_id\tline_no\tspeaker\ttext";
const ANNOTATION_HEADER: &str = "case_id\tline_no\tcoder_id\tcode";
const CODERS_HEADER: &str = "case_id\tn_coders";

/// Splits a data row into exactly `n` columns, or errors.
fn columns(row: usize, line: &str, n: usize) -> Result<Vec<&str>, ParseError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != n {
        return Err(ParseError::ColumnCount {
            row,
            expected: n,
            found: cols.len(),
        });
    }
    Ok(cols)
}

fn check_header(input: &str, expected: &str) -> Result<(), ParseError> {
    let first = input.lines().next().ok_or(ParseError::Empty)?;
    if first != expected {
        return Err(ParseError::BadHeader {
            row: 1,
            expected: expected.to_string(),
        });
    }
    Ok(())
}

fn parse_line_no(row: usize, field: &'static str, token: &str) -> Result<u32, ParseError> {
    match token.parse::<u32>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(ParseError::BadNumber {
            row,
            field,
            token: token.to_string(),
        }),
    }
}

/// Parses `transcripts.tsv`. One utterance per data row, in file order.
pub fn parse_transcripts(input: &str) -> Result<Vec<Utterance>, ParseError> {
    check_header(input, TRANSCRIPT_HEADER)?;
    let mut out = Vec::new();
    let mut seen: BTreeSet<(String, u32)> = BTreeSet::new();
    let mut last_line: BTreeMap<String, u32> = BTreeMap::new();

    for (i, line) in input.lines().enumerate().skip(1) {
        let row = i + 1;
        if line.is_empty() {
            continue;
        }
        let cols = columns(row, line, 4)?;
        let case_id = cols[0].to_string();
        if case_id.is_empty() {
            return Err(ParseError::EmptyField {
                row,
                field: "case_id",
            });
        }
        let line_no = parse_line_no(row, "line_no", cols[1])?;
        let speaker = match cols[2] {
            "D" => Speaker::Doctor,
            "P" => Speaker::Patient,
            other => {
                return Err(ParseError::UnknownSpeaker {
                    row,
                    token: other.to_string(),
                })
            }
        };
        let text = cols[3].to_string();
        if text.is_empty() {
            return Err(ParseError::EmptyField { row, field: "text" });
        }
        if !seen.insert((case_id.clone(), line_no)) {
            return Err(ParseError::DuplicateLine {
                row,
                case_id,
                line_no,
            });
        }
        if let Some(&prev) = last_line.get(&case_id) {
            if line_no <= prev {
                return Err(ParseError::NonIncreasingLine {
                    row,
                    case_id,
                    line_no,
                });
            }
        }
        last_line.insert(case_id.clone(), line_no);
        out.push(Utterance {
            case_id,
            line_no,
            speaker,
            text,
        });
    }
    Ok(out)
}

/// Parses `annotations.tsv`. Code names are validated against the eleven
/// manual codes; the `NotCoded` sentinel is rejected as input.
pub fn parse_annotations(input: &str) -> Result<Vec<Annotation>, ParseError> {
    check_header(input, ANNOTATION_HEADER)?;
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate().skip(1) {
        let row = i + 1;
        if line.is_empty() {
            continue;
        }
        let cols = columns(row, line, 4)?;
        let case_id = cols[0].to_string();
        if case_id.is_empty() {
            return Err(ParseError::EmptyField {
                row,
                field: "case_id",
            });
        }
        let line_no = parse_line_no(row, "line_no", cols[1])?;
        let coder_id = cols[2].to_string();
        if coder_id.is_empty() {
            return Err(ParseError::EmptyField {
                row,
                field: "coder_id",
            });
        }
        let code = match Code::parse(cols[3]) {
            Some(c) if c != Code::NotCoded => c,
            _ => {
                return Err(ParseError::UnknownCode {
                    row,
                    token: cols[3].to_string(),
                })
            }
        };
        out.push(Annotation {
            case_id,
            line_no,
            coder_id,
            code,
        });
    }
    Ok(out)
}

/// Parses `coders.tsv` (case -> number of assigned coders).
pub fn parse_coders(input: &str) -> Result<BTreeMap<String, u32>, ParseError> {
    check_header(input, CODERS_HEADER)?;
    let mut out = BTreeMap::new();
    for (i, line) in input.lines().enumerate().skip(1) {
        let row = i + 1;
        if line.is_empty() {
            continue;
        }
        let cols = columns(row, line, 2)?;
        let n = parse_line_no(row, "n_coders", cols[1])?;
        out.insert(cols[0].to_string(), n);
    }
    Ok(out)
}
