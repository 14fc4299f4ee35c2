use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;

use super::TokenCorpus;
use crate::error::{Error, Result, Undefined};
use crate::outcome::{log10_ratio, Metric};

/// File stems of the six word lists, in report order.
pub const LEXICON_NAMES: [&str; 6] = [
    "positive",
    "negative",
    "anger_mild",
    "anger_typical",
    "anger_violent",
    "calm",
];

const DEFAULTS: [&str; 6] = [
    include_str!("../../data/lexicons/positive.txt"),
    include_str!("../../data/lexicons/negative.txt"),
    include_str!("../../data/lexicons/anger_mild.txt"),
    include_str!("../../data/lexicons/anger_typical.txt"),
    include_str!("../../data/lexicons/anger_violent.txt"),
    include_str!("../../data/lexicons/calm.txt"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    pub name: String,
    pub words: BTreeSet<String>,
}

impl Lexicon {
    /// One word per line; blank lines and `#` comments ignored.
    pub fn parse(name: &str, content: &str) -> Result<Self> {
        let words: BTreeSet<String> = content
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        if words.is_empty() {
            return Err(Error::Config(format!("lexicon `{name}` is empty")));
        }
        Ok(Lexicon {
            name: name.to_string(),
            words,
        })
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconSet {
    pub positive: Lexicon,
    pub negative: Lexicon,
    pub anger_mild: Lexicon,
    pub anger_typical: Lexicon,
    pub anger_violent: Lexicon,
    pub calm: Lexicon,
}

impl LexiconSet {
    fn from_lists(mut lists: Vec<Lexicon>) -> Self {
        let calm = lists.pop().unwrap();
        let anger_violent = lists.pop().unwrap();
        let anger_typical = lists.pop().unwrap();
        let anger_mild = lists.pop().unwrap();
        let negative = lists.pop().unwrap();
        let positive = lists.pop().unwrap();
        LexiconSet {
            positive,
            negative,
            anger_mild,
            anger_typical,
            anger_violent,
            calm,
        }
    }

    /// The word lists shipped with the crate.
    pub fn builtin() -> Self {
        let lists = LEXICON_NAMES
            .iter()
            .zip(DEFAULTS)
            .map(|(name, content)| {
                Lexicon::parse(name, content).expect("bundled lexicon is non-empty")
            })
            .collect();
        Self::from_lists(lists)
    }

    /// Loads `<name>.txt` for each of the six lexicons from `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        if !dir.is_dir() {
            return Err(Error::Config(format!(
                "lexicon directory `{}` does not exist",
                dir.display()
            )));
        }
        let mut lists = Vec::with_capacity(6);
        for name in LEXICON_NAMES {
            let path = dir.join(format!("{name}.txt"));
            let content = std::fs::read_to_string(&path).map_err(|e| {
                Error::Config(format!("cannot read lexicon `{}`: {e}", path.display()))
            })?;
            let lex = Lexicon::parse(name, &content).map_err(|_| {
                Error::Config(format!("lexicon file `{}` is empty", path.display()))
            })?;
            lists.push(lex);
        }
        Ok(Self::from_lists(lists))
    }

    /// `(name, content)` pairs of the built-in lists, for writing them out.
    pub fn builtin_files() -> impl Iterator<Item = (&'static str, &'static str)> {
        LEXICON_NAMES.into_iter().zip(DEFAULTS)
    }
}

/// Matched-token fractions per lexicon and the two log ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SentimentReport {
    pub s_pos: f64,
    pub s_neg: f64,
    pub s_anger_mild: f64,
    pub s_anger_typical: f64,
    pub s_anger_violent: f64,
    pub s_calm: f64,
    pub r_sent: Metric<f64>,
    pub r_angr: Metric<f64>,
    pub total_tokens: usize,
}

impl SentimentReport {
    pub fn s_anger_total(&self) -> f64 {
        self.s_anger_mild + self.s_anger_typical + self.s_anger_violent
    }
}

/// `log10(s_pos / s_neg)` and `log10(s_calm / (mild + typical + violent))`.
pub fn sentiment_ratios(
    s_pos: f64,
    s_neg: f64,
    s_calm: f64,
    s_anger_mild: f64,
    s_anger_typical: f64,
    s_anger_violent: f64,
) -> (Metric<f64>, Metric<f64>) {
    let anger = s_anger_mild + s_anger_typical + s_anger_violent;
    (
        log10_ratio(s_pos, s_neg, Undefined::ZeroDenominator),
        log10_ratio(s_calm, anger, Undefined::ZeroDenominator),
    )
}

pub fn sentiment_scores(corpus: &TokenCorpus, lexicons: &LexiconSet) -> Result<SentimentReport> {
    if corpus.total_tokens == 0 {
        return Err(Undefined::EmptyCorpus.into());
    }
    let total = corpus.total_tokens as f64;
    let share = |lex: &Lexicon| {
        let hits: usize = corpus
            .vocabulary
            .iter()
            .filter(|(w, _)| lex.contains(w))
            .map(|(_, &c)| c)
            .sum();
        hits as f64 / total
    };
    let s_pos = share(&lexicons.positive);
    let s_neg = share(&lexicons.negative);
    let s_anger_mild = share(&lexicons.anger_mild);
    let s_anger_typical = share(&lexicons.anger_typical);
    let s_anger_violent = share(&lexicons.anger_violent);
    let s_calm = share(&lexicons.calm);
    let (r_sent, r_angr) = sentiment_ratios(
        s_pos,
        s_neg,
        s_calm,
        s_anger_mild,
        s_anger_typical,
        s_anger_violent,
    );
    Ok(SentimentReport {
        s_pos,
        s_neg,
        s_anger_mild,
        s_anger_typical,
        s_anger_violent,
        s_calm,
        r_sent,
        r_angr,
        total_tokens: corpus.total_tokens,
    })
}
