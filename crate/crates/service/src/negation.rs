//! Flags negation cue words in a description so a reviewer can check
//! whether a coded reaction was actually denied. No interpretation is done.

use std::collections::HashSet;

use adrcode::tokenize;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegationWarning {
    pub word: String,
    /// Character offsets into the description.
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Default)]
pub struct NegationScanner {
    words: HashSet<String>,
}

impl NegationScanner {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            words: words.into_iter().map(|w| w.as_ref().trim().to_lowercase()).collect(),
        }
    }

    pub fn scan(&self, text: &str) -> Vec<NegationWarning> {
        tokenize(text)
            .into_iter()
            .filter(|(w, _)| self.words.contains(w))
            .map(|(word, span)| NegationWarning {
                word,
                start: span.start,
                end: span.end,
            })
            .collect()
    }
}
