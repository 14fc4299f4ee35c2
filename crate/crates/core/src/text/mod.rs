//! Tweet text analytics: tokenization, term salience, lexicon sentiment,
//! bigram mutual information and risk-factor phrase matching.
//!
//! Salience is relative frequency: a term's count over all tokens in the
//! corpus (for bigrams, over all adjacent pairs).

mod bigram;
mod lexicon;
mod risk;
mod tokenize;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Result, Undefined};

pub use bigram::{bigram_stats, BigramStat};
pub use lexicon::{
    sentiment_ratios, sentiment_scores, Lexicon, LexiconSet, SentimentReport, LEXICON_NAMES,
};
pub use risk::{
    risk_factor_match, RiskCategory, RiskCategoryReport, RiskFactorConfig, RiskFactorReport,
};
pub use tokenize::tokenize;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TokenCorpus {
    pub documents: Vec<Vec<String>>,
    pub vocabulary: BTreeMap<String, usize>,
    pub total_tokens: usize,
}

impl TokenCorpus {
    pub fn from_documents(documents: Vec<Vec<String>>) -> Self {
        let mut vocabulary = BTreeMap::new();
        let mut total_tokens = 0;
        for doc in &documents {
            for tok in doc {
                *vocabulary.entry(tok.clone()).or_insert(0) += 1;
            }
            total_tokens += doc.len();
        }
        TokenCorpus {
            documents,
            vocabulary,
            total_tokens,
        }
    }

    pub fn from_texts<S: AsRef<str>>(texts: impl IntoIterator<Item = S>) -> Self {
        Self::from_documents(texts.into_iter().map(|t| tokenize(t.as_ref())).collect())
    }

    pub fn push(&mut self, doc: Vec<String>) {
        for tok in &doc {
            *self.vocabulary.entry(tok.clone()).or_insert(0) += 1;
        }
        self.total_tokens += doc.len();
        self.documents.push(doc);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermStat {
    pub count: usize,
    pub salience: f64,
}

pub fn term_stats(corpus: &TokenCorpus) -> Result<BTreeMap<String, TermStat>> {
    if corpus.total_tokens == 0 {
        return Err(Undefined::EmptyCorpus.into());
    }
    let total = corpus.total_tokens as f64;
    Ok(corpus
        .vocabulary
        .iter()
        .map(|(w, &count)| {
            (
                w.clone(),
                TermStat {
                    count,
                    salience: count as f64 / total,
                },
            )
        })
        .collect())
}

/// Words dropped when picking group labels; they carry no topic.
const STOPWORDS: &[&str] = &[
    "a", "about", "after", "all", "am", "an", "and", "are", "as", "at", "be", "been", "but", "by",
    "can", "do", "for", "from", "get", "has", "have", "he", "her", "him", "his", "how", "i", "i'm",
    "if", "in", "into", "is", "it", "it's", "its", "just", "me", "my", "no", "not", "of", "on",
    "one", "or", "our", "out", "rt", "she", "so", "some", "than", "that", "the", "their", "them",
    "then", "there", "they", "this", "to", "up", "us", "was", "we", "were", "what", "when", "who",
    "will", "with", "you", "your",
];

/// Most salient content words: highest count first, ties alphabetical.
/// Stopwords, `@handles` and single characters are skipped.
pub fn top_terms(corpus: &TokenCorpus, limit: usize) -> Vec<(String, TermStat)> {
    let Ok(stats) = term_stats(corpus) else {
        return Vec::new();
    };
    let mut terms: Vec<(String, TermStat)> = stats
        .into_iter()
        .filter(|(w, _)| {
            !w.starts_with('@') && w.chars().count() > 1 && !STOPWORDS.contains(&w.as_str())
        })
        .collect();
    terms.sort_by(|a, b| b.1.count.cmp(&a.1.count).then_with(|| a.0.cmp(&b.0)));
    terms.truncate(limit);
    terms
}
