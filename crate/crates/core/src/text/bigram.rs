use std::collections::BTreeMap;

use serde::Serialize;

use super::TokenCorpus;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BigramStat {
    pub first: String,
    pub second: String,
    pub count: usize,
    /// Share of all adjacent pairs in the corpus.
    pub salience: f64,
    /// Pointwise mutual information in bits.
    pub mutual_information: f64,
}

/// Adjacent-token pairs within each document (never across documents).
///
/// PMI is `log2(p(w1 w2) / (p(w1) p(w2)))` with the pair probability taken
/// over all bigrams and the unigram probabilities over all tokens. Pairs
/// seen fewer than `min_count` times are dropped. Output is ordered by
/// count descending, then by pair.
pub fn bigram_stats(corpus: &TokenCorpus, min_count: usize) -> Vec<BigramStat> {
    let mut counts: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for doc in &corpus.documents {
        for pair in doc.windows(2) {
            *counts
                .entry((pair[0].as_str(), pair[1].as_str()))
                .or_insert(0) += 1;
        }
    }
    let total_bigrams: usize = counts.values().sum();
    if total_bigrams == 0 {
        return Vec::new();
    }
    let b = total_bigrams as f64;
    let t = corpus.total_tokens as f64;
    let mut out: Vec<BigramStat> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_count.max(1))
        .map(|((w1, w2), count)| {
            let p12 = count as f64 / b;
            let p1 = corpus.vocabulary[w1] as f64 / t;
            let p2 = corpus.vocabulary[w2] as f64 / t;
            BigramStat {
                first: w1.to_string(),
                second: w2.to_string(),
                count,
                salience: p12,
                mutual_information: (p12 / (p1 * p2)).log2(),
            }
        })
        .collect();
    out.sort_by(|x, y| {
        y.count
            .cmp(&x.count)
            .then_with(|| (&x.first, &x.second).cmp(&(&y.first, &y.second)))
    });
    out
}
