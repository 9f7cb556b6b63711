//! Porter stemmer, classic rule set (steps 1a through 5b).
//!
//! Conventions pinned here so every caller sees the same stems:
//! step 2 uses `abli -> able` and has no `logi` rule; words shorter than
//! three letters and tokens containing anything other than lowercase
//! ASCII letters are returned unchanged.

/// `true` when `w[i]` acts as a consonant ('y' counts as a consonant only
/// at position 0 or after a vowel).
fn cons(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => {
            if i == 0 {
                true
            } else {
                !cons(w, i - 1)
            }
        }
        _ => true,
    }
}

/// The measure m of a stem: the number of vowel-consonant sequences.
fn measure(w: &[u8]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..w.len() {
        let vowel = !cons(w, i);
        if prev_vowel && !vowel {
            m += 1;
        }
        prev_vowel = vowel;
    }
    m
}

fn has_vowel(w: &[u8]) -> bool {
    (0..w.len()).any(|i| !cons(w, i))
}

/// Stem ends in a double consonant (tt, ss, ...).
fn ends_double_cons(w: &[u8]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && cons(w, n - 1)
}

/// Stem ends consonant-vowel-consonant where the final consonant is not
/// w, x, or y.
fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && cons(w, n - 3)
        && !cons(w, n - 2)
        && cons(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

fn ends_with(w: &[u8], suffix: &str) -> bool {
    w.len() >= suffix.len() && &w[w.len() - suffix.len()..] == suffix.as_bytes()
}

fn set_suffix(w: &mut Vec<u8>, old_len: usize, new: &str) {
    let keep = w.len() - old_len;
    w.truncate(keep);
    w.extend_from_slice(new.as_bytes());
}

/// Rules within one step, longest suffix first so the first match is the
/// longest match. A matched suffix consumes the step even when its
/// measure condition fails.
fn apply_table(w: &mut Vec<u8>, rules: &[(&str, &str)], min_measure: usize) {
    for &(suffix, replacement) in rules {
        if ends_with(w, suffix) {
            let stem = &w[..w.len() - suffix.len()];
            if measure(stem) > min_measure {
                set_suffix(w, suffix.len(), replacement);
            }
            return;
        }
    }
}

fn step_1a(w: &mut Vec<u8>) {
    if ends_with(w, "sses") {
        set_suffix(w, 4, "ss");
    } else if ends_with(w, "ies") {
        set_suffix(w, 3, "i");
    } else if !ends_with(w, "ss") && ends_with(w, "s") {
        set_suffix(w, 1, "");
    }
}

fn step_1b(w: &mut Vec<u8>) {
    if ends_with(w, "eed") {
        if measure(&w[..w.len() - 3]) > 0 {
            set_suffix(w, 3, "ee");
        }
        return;
    }
    let removed = if ends_with(w, "ed") && has_vowel(&w[..w.len() - 2]) {
        set_suffix(w, 2, "");
        true
    } else if ends_with(w, "ing") && has_vowel(&w[..w.len() - 3]) {
        set_suffix(w, 3, "");
        true
    } else {
        false
    };
    if !removed {
        return;
    }
    if ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz") {
        w.push(b'e');
    } else if ends_double_cons(w) && !matches!(w[w.len() - 1], b'l' | b's' | b'z') {
        w.truncate(w.len() - 1);
    } else if measure(w) == 1 && ends_cvc(w) {
        w.push(b'e');
    }
}

fn step_1c(w: &mut Vec<u8>) {
    if ends_with(w, "y") && has_vowel(&w[..w.len() - 1]) {
        let n = w.len();
        w[n - 1] = b'i';
    }
}

const STEP2: &[(&str, &str)] = &[
    ("ational", "ate"),
    ("ization", "ize"),
    ("iveness", "ive"),
    ("fulness", "ful"),
    ("ousness", "ous"),
    ("tional", "tion"),
    ("biliti", "ble"),
    ("entli", "ent"),
    ("ousli", "ous"),
    ("ation", "ate"),
    ("alism", "al"),
    ("aliti", "al"),
    ("iviti", "ive"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("izer", "ize"),
    ("abli", "able"),
    ("alli", "al"),
    ("ator", "ate"),
    ("eli", "e"),
];

const STEP3: &[(&str, &str)] = &[
    ("icate", "ic"),
    ("ative", ""),
    ("alize", "al"),
    ("iciti", "ic"),
    ("ical", "ic"),
    ("ness", ""),
    ("ful", ""),
];

const STEP4: &[&str] = &[
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ion", "ism", "ate", "iti",
    "ous", "ive", "ize", "al", "er", "ic", "ou",
];

fn step_4(w: &mut Vec<u8>) {
    for &suffix in STEP4 {
        if ends_with(w, suffix) {
            let stem = &w[..w.len() - suffix.len()];
            let stem_ok = if suffix == "ion" {
                matches!(stem.last(), Some(b's') | Some(b't'))
            } else {
                true
            };
            if stem_ok && measure(stem) > 1 {
                set_suffix(w, suffix.len(), "");
            }
            return;
        }
    }
}

fn step_5a(w: &mut Vec<u8>) {
    if ends_with(w, "e") {
        let stem = &w[..w.len() - 1];
        let m = measure(stem);
        if m > 1 || (m == 1 && !ends_cvc(stem)) {
            w.truncate(w.len() - 1);
        }
    }
}

fn step_5b(w: &mut Vec<u8>) {
    if ends_with(w, "l") && ends_double_cons(w) && measure(w) > 1 {
        w.truncate(w.len() - 1);
    }
}

/// Stems one token. Tokens containing anything other than lowercase ASCII
/// letters, and words of one or two letters, pass through unchanged.
pub fn stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut w = word.as_bytes().to_vec();
    step_1a(&mut w);
    step_1b(&mut w);
    step_1c(&mut w);
    apply_table(&mut w, STEP2, 0);
    apply_table(&mut w, STEP3, 0);
    step_4(&mut w);
    step_5a(&mut w);
    step_5b(&mut w);
    String::from_utf8(w).expect("stemming preserves ASCII")
}
