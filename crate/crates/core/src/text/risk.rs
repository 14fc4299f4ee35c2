use std::path::Path;

use serde::{Deserialize, Serialize};

use super::tokenize;
use crate::error::{Error, Result, Undefined};
use crate::outcome::Metric;

const DEFAULT_CONFIG: &str = include_str!("../../data/risk_factors.toml");

pub const CATEGORY_COUNT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiskCategory {
    pub name: String,
    /// Identifier phrases, already tokenized.
    pub phrases: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiskFactorConfig {
    pub categories: Vec<RiskCategory>,
}

#[derive(Deserialize)]
struct RawConfig {
    category: Vec<RawCategory>,
}

#[derive(Deserialize)]
struct RawCategory {
    name: String,
    identifiers: Vec<String>,
}

impl RiskFactorConfig {
    /// Parses the TOML form: twelve `[[category]]` tables, each with a
    /// `name` and a non-empty `identifiers` phrase list.
    pub fn parse(content: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(content)
            .map_err(|e| Error::Config(format!("risk factor config: {e}")))?;
        if raw.category.len() != CATEGORY_COUNT {
            return Err(Error::Config(format!(
                "risk factor config must define {CATEGORY_COUNT} categories, found {}",
                raw.category.len()
            )));
        }
        let categories = raw
            .category
            .into_iter()
            .map(|c| {
                let phrases: Vec<Vec<String>> = c
                    .identifiers
                    .iter()
                    .map(|p| tokenize(p))
                    .filter(|p| !p.is_empty())
                    .collect();
                if phrases.is_empty() {
                    return Err(Error::Config(format!(
                        "risk category `{}` has no identifiers",
                        c.name
                    )));
                }
                Ok(RiskCategory {
                    name: c.name,
                    phrases,
                })
            })
            .collect::<Result<_>>()?;
        Ok(RiskFactorConfig { categories })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read risk config `{}`: {e}", path.display()))
        })?;
        Self::parse(&content).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_CONFIG).expect("bundled risk config is valid")
    }

    pub fn builtin_source() -> &'static str {
        DEFAULT_CONFIG
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskCategoryReport {
    /// 1-based category number.
    pub index: usize,
    pub name: String,
    pub matched_tweets: usize,
    /// Tokens covered by identifier phrases.
    pub token_hits: usize,
    pub salience: Metric<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskFactorReport {
    pub categories: Vec<RiskCategoryReport>,
    pub documents: usize,
    pub total_tokens: usize,
}

impl RiskFactorReport {
    /// 1-based indices of the categories a single document matches.
    pub fn matched_indices(&self) -> Vec<usize> {
        self.categories
            .iter()
            .filter(|c| c.matched_tweets > 0)
            .map(|c| c.index)
            .collect()
    }
}

/// Positions of `doc` covered by any of `phrases` as a contiguous run.
fn covered(doc: &[String], phrases: &[Vec<String>]) -> Vec<bool> {
    let mut mask = vec![false; doc.len()];
    for phrase in phrases {
        if phrase.len() > doc.len() {
            continue;
        }
        for start in 0..=doc.len() - phrase.len() {
            if doc[start..start + phrase.len()] == phrase[..] {
                mask[start..start + phrase.len()].fill(true);
            }
        }
    }
    mask
}

/// A document matches a category when it contains one of the category's
/// identifier phrases as a contiguous token run. Salience is the number of
/// covered tokens over all tokens.
pub fn risk_factor_match(
    documents: &[Vec<String>],
    config: &RiskFactorConfig,
) -> Result<RiskFactorReport> {
    if config.categories.len() != CATEGORY_COUNT {
        return Err(Error::Config(format!(
            "risk factor config must define {CATEGORY_COUNT} categories, found {}",
            config.categories.len()
        )));
    }
    let total_tokens: usize = documents.iter().map(Vec::len).sum();
    let categories = config
        .categories
        .iter()
        .enumerate()
        .map(|(i, cat)| {
            let mut matched_tweets = 0;
            let mut token_hits = 0;
            for doc in documents {
                let hits = covered(doc, &cat.phrases).iter().filter(|&&c| c).count();
                if hits > 0 {
                    matched_tweets += 1;
                    token_hits += hits;
                }
            }
            let salience = if total_tokens == 0 {
                Metric::Undefined(Undefined::EmptyCorpus)
            } else {
                Metric::Value(token_hits as f64 / total_tokens as f64)
            };
            RiskCategoryReport {
                index: i + 1,
                name: cat.name.clone(),
                matched_tweets,
                token_hits,
                salience,
            }
        })
        .collect();
    Ok(RiskFactorReport {
        categories,
        documents: documents.len(),
        total_tokens,
    })
}
