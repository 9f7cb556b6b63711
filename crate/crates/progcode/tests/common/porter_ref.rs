//! Independent reference stemmer for the oracle vocabulary.
//!
//! Deliberately structured differently from the library's table-driven
//! stemmer: a byte buffer with end index `k` and stem index `j`, rules
//! grouped by switch on a pivot character, conditions evaluated through
//! the buffer indices. Same classic rule set (abli -> able, no logi
//! rule, words of one or two letters unchanged).

pub struct RefStemmer {
    b: Vec<u8>,
    k: i64,
    j: i64,
}

impl RefStemmer {
    fn at(&self, i: i64) -> u8 {
        self.b[i as usize]
    }

    fn cons(&self, i: i64) -> bool {
        match self.at(i) {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => {
                if i == 0 {
                    true
                } else {
                    !self.cons(i - 1)
                }
            }
            _ => true,
        }
    }

    /// Measure of the stem b[0..=j].
    fn m(&self) -> i64 {
        let mut n = 0;
        let mut i = 0;
        loop {
            if i > self.j {
                return n;
            }
            if !self.cons(i) {
                break;
            }
            i += 1;
        }
        i += 1;
        loop {
            loop {
                if i > self.j {
                    return n;
                }
                if self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
            n += 1;
            loop {
                if i > self.j {
                    return n;
                }
                if !self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
        }
    }

    fn vowel_in_stem(&self) -> bool {
        (0..=self.j).any(|i| !self.cons(i))
    }

    fn double_cons(&self, j: i64) -> bool {
        j >= 1 && self.at(j) == self.at(j - 1) && self.cons(j)
    }

    fn cvc(&self, i: i64) -> bool {
        if i < 2 || !self.cons(i) || self.cons(i - 1) || !self.cons(i - 2) {
            return false;
        }
        !matches!(self.at(i), b'w' | b'x' | b'y')
    }

    fn ends(&mut self, s: &str) -> bool {
        let length = s.len() as i64;
        let bytes = s.as_bytes();
        if bytes[s.len() - 1] != self.at(self.k) {
            return false;
        }
        if length > self.k + 1 {
            return false;
        }
        let start = (self.k - length + 1) as usize;
        if &self.b[start..=self.k as usize] != bytes {
            return false;
        }
        self.j = self.k - length;
        true
    }

    fn set_to(&mut self, s: &str) {
        self.b.truncate((self.j + 1) as usize);
        self.b.extend_from_slice(s.as_bytes());
        self.k = self.j + s.len() as i64;
    }

    fn r(&mut self, s: &str) {
        if self.m() > 0 {
            self.set_to(s);
        }
    }

    fn step1ab(&mut self) {
        if self.at(self.k) == b's' {
            if self.ends("sses") {
                self.k -= 2;
            } else if self.ends("ies") {
                self.set_to("i");
            } else if self.at(self.k - 1) != b's' {
                self.k -= 1;
            }
        }
        if self.ends("eed") {
            if self.m() > 0 {
                self.k -= 1;
            }
        } else if (self.ends("ed") || self.ends("ing")) && self.vowel_in_stem() {
            self.k = self.j;
            if self.ends("at") {
                self.set_to("ate");
            } else if self.ends("bl") {
                self.set_to("ble");
            } else if self.ends("iz") {
                self.set_to("ize");
            } else if self.double_cons(self.k) {
                self.k -= 1;
                let ch = self.at(self.k);
                if ch == b'l' || ch == b's' || ch == b'z' {
                    self.k += 1;
                }
            } else {
                self.j = self.k;
                if self.m() == 1 && self.cvc(self.k) {
                    self.set_to("e");
                }
            }
        }
    }

    fn step1c(&mut self) {
        if self.ends("y") && self.vowel_in_stem() {
            self.b[self.k as usize] = b'i';
        }
    }

    fn step2(&mut self) {
        if self.k < 1 {
            return;
        }
        match self.at(self.k - 1) {
            b'a' => {
                if self.ends("ational") {
                    self.r("ate");
                } else if self.ends("tional") {
                    self.r("tion");
                }
            }
            b'c' => {
                if self.ends("enci") {
                    self.r("ence");
                } else if self.ends("anci") {
                    self.r("ance");
                }
            }
            b'e' => {
                if self.ends("izer") {
                    self.r("ize");
                }
            }
            b'l' => {
                if self.ends("abli") {
                    self.r("able");
                } else if self.ends("alli") {
                    self.r("al");
                } else if self.ends("entli") {
                    self.r("ent");
                } else if self.ends("eli") {
                    self.r("e");
                } else if self.ends("ousli") {
                    self.r("ous");
                }
            }
            b'o' => {
                if self.ends("ization") {
                    self.r("ize");
                } else if self.ends("ation") {
                    self.r("ate");
                } else if self.ends("ator") {
                    self.r("ate");
                }
            }
            b's' => {
                if self.ends("alism") {
                    self.r("al");
                } else if self.ends("iveness") {
                    self.r("ive");
                } else if self.ends("fulness") {
                    self.r("ful");
                } else if self.ends("ousness") {
                    self.r("ous");
                }
            }
            b't' => {
                if self.ends("aliti") {
                    self.r("al");
                } else if self.ends("iviti") {
                    self.r("ive");
                } else if self.ends("biliti") {
                    self.r("ble");
                }
            }
            _ => {}
        }
    }

    fn step3(&mut self) {
        match self.at(self.k) {
            b'e' => {
                if self.ends("icate") {
                    self.r("ic");
                } else if self.ends("ative") {
                    self.r("");
                } else if self.ends("alize") {
                    self.r("al");
                }
            }
            b'i' => {
                if self.ends("iciti") {
                    self.r("ic");
                }
            }
            b'l' => {
                if self.ends("ical") {
                    self.r("ic");
                } else if self.ends("ful") {
                    self.r("");
                }
            }
            b's' => {
                if self.ends("ness") {
                    self.r("");
                }
            }
            _ => {}
        }
    }

    fn step4(&mut self) {
        if self.k < 1 {
            return;
        }
        let matched = match self.at(self.k - 1) {
            b'a' => self.ends("al"),
            b'c' => self.ends("ance") || self.ends("ence"),
            b'e' => self.ends("er"),
            b'i' => self.ends("ic"),
            b'l' => self.ends("able") || self.ends("ible"),
            b'n' => {
                self.ends("ant") || self.ends("ement") || self.ends("ment") || self.ends("ent")
            }
            b'o' => {
                (self.ends("ion")
                    && self.j >= 0
                    && (self.at(self.j) == b's' || self.at(self.j) == b't'))
                    || self.ends("ou")
            }
            b's' => self.ends("ism"),
            b't' => self.ends("ate") || self.ends("iti"),
            b'u' => self.ends("ous"),
            b'v' => self.ends("ive"),
            b'z' => self.ends("ize"),
            _ => false,
        };
        if matched && self.m() > 1 {
            self.k = self.j;
        }
    }

    fn step5(&mut self) {
        self.j = self.k;
        if self.at(self.k) == b'e' {
            let a = self.m();
            if a > 1 || (a == 1 && !self.cvc(self.k - 1)) {
                self.k -= 1;
            }
        }
        if self.at(self.k) == b'l' && self.double_cons(self.k) {
            self.j = self.k;
            if self.m() > 1 {
                self.k -= 1;
            }
        }
    }
}

/// Reference stem of one token; mirrors the library contract (short and
/// non-lowercase-ASCII tokens unchanged).
pub fn ref_stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut s = RefStemmer {
        b: word.as_bytes().to_vec(),
        k: word.len() as i64 - 1,
        j: 0,
    };
    s.step1ab();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5();
    s.b.truncate((s.k + 1) as usize);
    String::from_utf8(s.b).expect("ascii stays ascii")
}

/// Base words for the oracle vocabulary. General English plus the
/// generator's domain vocabulary, expanded with Porter-relevant suffixes
/// by [`reference_vocabulary`].
const BASE_WORDS: &[&str] = &[
    "abandon", "ability", "absorb", "accept", "accident", "account", "accuse", "achieve",
    "acid", "act", "adapt", "add", "address", "adjust", "admire", "admit", "adopt", "advance",
    "advise", "affect", "agree", "aim", "air", "alarm", "allow", "amaze", "amuse", "analyze",
    "anchor", "anger", "announce", "annoy", "answer", "appear", "apply", "approve", "argue",
    "arm", "arrange", "arrest", "arrive", "ask", "assist", "assume", "attach", "attack",
    "attend", "attract", "avoid", "awake", "back", "bake", "balance", "band", "bank", "bare",
    "bargain", "base", "bat", "bathe", "battle", "beam", "bear", "beat", "beg", "begin",
    "behave", "believe", "belong", "bend", "benefit", "bet", "bind", "bite", "blame", "blast",
    "bleed", "blend", "bless", "blind", "block", "bloom", "blot", "blow", "blush", "board",
    "boast", "boil", "bolt", "bomb", "book", "boot", "border", "bore", "borrow", "bounce",
    "bow", "box", "brake", "branch", "brave", "breathe", "breed", "bribe", "bridge", "brief",
    "bring", "broad", "bruise", "brush", "bubble", "budge", "build", "bump", "burn", "burst",
    "bury", "buzz", "calculate", "calm", "camp", "care", "carry", "carve", "cause", "cease",
    "celebrate", "center", "chain", "challenge", "chance", "change", "charge", "charm",
    "chase", "cheat", "check", "cheer", "chew", "chill", "chip", "choke", "chop", "claim",
    "clap", "clean", "clear", "climb", "cling", "clip", "close", "cloud", "coach", "coil",
    "collect", "color", "comb", "combine", "command", "commit", "compare", "compete",
    "complain", "complete", "concern", "conclude", "condition", "conduct", "confess",
    "confirm", "confuse", "connect", "consent", "consist", "contain", "continue", "contract",
    "control", "convert", "convince", "cook", "cool", "copy", "correct", "cost", "cough",
    "count", "cover", "crack", "crash", "crawl", "create", "creep", "cross", "crowd",
    "crush", "cry", "cycle", "damage", "dance", "dare", "dash", "deal", "decay", "decide",
    "declare", "decorate", "deliver", "demand", "deny", "depart", "depend", "describe",
    "desert", "deserve", "design", "desire", "destroy", "detect", "develop", "devote",
    "differ", "dig", "digest", "direct", "disagree", "disappear", "disapprove", "discover",
    "dislike", "divide", "double", "doubt", "drag", "drain", "dream", "dress", "drip",
    "drop", "drown", "drum", "dry", "dust", "earn", "ease", "educate", "elect", "embarrass",
    "employ", "empty", "enclose", "encourage", "end", "engage", "enjoy", "enter", "entertain",
    "escape", "examine", "excite", "excuse", "exist", "expand", "expect", "expel", "explain",
    "explode", "explore", "express", "extend", "face", "fade", "fail", "fancy", "fasten",
    "fear", "fence", "fetch", "file", "fill", "film", "fire", "fit", "fix", "flap", "flash",
    "float", "flood", "flow", "flower", "fold", "follow", "fool", "force", "form", "found",
    "frame", "free", "frighten", "fry", "gather", "gaze", "glow", "glue", "grab", "grant",
    "grate", "grease", "greet", "grin", "grip", "groan", "guarantee", "guard", "guess",
    "guide", "hammer", "hand", "handle", "hang", "happen", "harass", "harm", "hate", "haunt",
    "head", "heal", "heap", "heat", "help", "hook", "hop", "hope", "hover", "hug", "hum",
    "hunt", "hurry", "identify", "ignore", "imagine", "impress", "improve", "include",
    "increase", "inform", "inject", "injure", "instruct", "intend", "interest", "interfere",
    "introduce", "invent", "invite", "irritate", "itch", "jail", "jam", "jog", "join", "joke",
    "judge", "juggle", "jump", "kick", "kill", "kiss", "kneel", "knit", "knock", "knot",
    "label", "land", "last", "laugh", "launch", "learn", "level", "license", "lick", "lie",
    "lighten", "list", "listen", "live", "load", "lock", "look", "love", "man", "manage",
    "march", "mark", "marry", "match", "mate", "matter", "measure", "meddle", "melt",
    "memorize", "mend", "mess", "milk", "mine", "miss", "mix", "moan", "moor", "mourn",
    "move", "muddle", "mug", "multiply", "murder", "nail", "name", "need", "nest", "nod",
    "note", "notice", "number", "obey", "object", "observe", "obtain", "occur", "offend",
    "offer", "open", "order", "overflow", "owe", "own", "pack", "paddle", "paint", "park",
    "part", "pass", "paste", "pat", "pause", "peck", "pedal", "peel", "peep", "perform",
    "permit", "phone", "pick", "pinch", "pine", "place", "plant", "play", "please", "plug",
    "point", "poke", "polish", "pop", "possess", "post", "pour", "practice", "pray", "preach",
    "precede", "prefer", "prepare", "present", "preserve", "press", "pretend", "prevent",
    "prick", "print", "produce", "program", "promise", "protect", "provide", "pull", "pump",
    "punch", "puncture", "punish", "push", "question", "queue", "race", "radiate", "rain",
    "raise", "reach", "realize", "receive", "recognize", "record", "reduce", "reflect",
    "refuse", "regret", "reign", "reject", "rejoice", "relate", "relax", "release", "rely",
    "remain", "remember", "remind", "remove", "repair", "repeat", "replace", "reply",
    "report", "reproduce", "request", "rescue", "retire", "return", "rhyme", "rinse", "risk",
    "rob", "rock", "rot", "rub", "ruin", "rule", "rush", "sack", "sail", "satisfy", "save",
    "saw", "scare", "scatter", "scold", "scorch", "scrape", "scratch", "scream", "screw",
    "scribble", "scrub", "seal", "search", "separate", "serve", "settle", "shade", "share",
    "shave", "shelter", "shiver", "shock", "shop", "shrug", "sigh", "sign", "signal", "sin",
    "sip", "ski", "skip", "slap", "slip", "slow", "smash", "smell", "smile", "smoke",
    "snatch", "sneeze", "sniff", "snore", "snow", "soak", "soothe", "sound", "spare", "spark",
    "sparkle", "spell", "spill", "spoil", "spot", "spray", "sprout", "squash", "squeak",
    "squeal", "squeeze", "stamp", "stare", "start", "stay", "steer", "step", "stir", "stitch",
    "stop", "store", "strap", "strengthen", "stretch", "strip", "stroke", "stuff", "subtract",
    "succeed", "suck", "suffer", "suggest", "suit", "supply", "suppose", "surprise",
    "surround", "suspect", "suspend", "sway", "switch", "tame", "tap", "taste", "tease",
    "telephone", "tempt", "terrify", "test", "thank", "thaw", "tick", "tickle", "tie", "time",
    "tip", "tire", "touch", "tour", "tow", "trace", "trade", "train", "transport", "trap",
    "travel", "treat", "tremble", "trick", "trip", "trot", "trouble", "trust", "try", "tug",
    "tumble", "turn", "twist", "type", "undress", "unfasten", "unite", "unlock", "unpack",
    "untidy", "use", "vanish", "visit", "wail", "wait", "walk", "wander", "want", "warm",
    "warn", "wash", "waste", "watch", "wave", "weigh", "welcome", "whine", "whip", "whirl",
    "whisper", "whistle", "wink", "wipe", "wish", "wobble", "wonder", "work", "worry",
    "wrap", "wreck", "wrestle", "wriggle", "yawn", "yell", "zip", "zoom",
];

/// Porter-relevant suffixes used to expand the base words.
const SUFFIXES: &[&str] = &[
    "s", "es", "ies", "ed", "ing", "eed", "ly", "ally", "fully", "ational", "tional", "enci",
    "anci", "izer", "abli", "alli", "entli", "eli", "ousli", "ization", "ation", "ator",
    "alism", "iveness", "fulness", "ousness", "aliti", "iviti", "biliti", "icate", "ative",
    "alize", "iciti", "ical", "ful", "ness", "al", "ance", "ence", "er", "ic", "able",
    "ible", "ant", "ement", "ment", "ent", "ion", "ism", "ate", "iti", "ous", "ive", "ize",
    "y",
];

fn attach(base: &str, suffix: &str) -> String {
    let first = suffix.as_bytes()[0];
    let vowel_initial = matches!(first, b'a' | b'e' | b'i' | b'o' | b'u');
    if vowel_initial && base.ends_with('e') {
        format!("{}{}", &base[..base.len() - 1], suffix)
    } else {
        format!("{base}{suffix}")
    }
}

/// Deterministic oracle vocabulary: base words, their suffix expansions,
/// and the generator's domain vocabulary. Sorted and deduplicated.
pub fn reference_vocabulary() -> Vec<String> {
    let mut words: Vec<String> = Vec::new();
    for base in BASE_WORDS {
        words.push((*base).to_string());
        for suffix in SUFFIXES {
            words.push(attach(base, suffix));
        }
    }
    for code in progcode::corpus::Code::ALL {
        for term in progcode::synth::lexicon::signal_terms(code) {
            words.push((*term).to_string());
        }
    }
    for term in progcode::synth::lexicon::FILLER {
        words.push((*term).to_string());
    }
    words.sort();
    words.dedup();
    words
}
