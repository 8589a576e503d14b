//! Description -> dictionary terms: vote, weigh, sort, release.

pub mod release;
pub mod similarity;
pub mod vote;
pub mod weights;

use serde::{Deserialize, Serialize};

use crate::bundle::DictionaryBundle;
use crate::textprep::{preprocess, TokenSequence};

pub use release::{is_word_prefix, release, sort_voted, Release, ScoredTerm, Thresholds};
pub use similarity::pair_distance;
pub use vote::{vote, VoteRecord};
pub use weights::{compute_weights, Scorer, Weights};

/// Number of candidates a reviewer is shown.
pub const DEFAULT_DISPLAY_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EncoderConfig {
    #[serde(flatten)]
    pub thresholds: Thresholds,
    pub display_cap: usize,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self {
            thresholds: Thresholds::default(),
            display_cap: DEFAULT_DISPLAY_CAP,
        }
    }
}

/// One released term in the serialized result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedTerm {
    pub llt_code: String,
    pub llt_text: String,
    pub pt_code: String,
    pub pt_text: String,
    pub weights: Weights,
    pub voters: Vec<usize>,
    pub voted: Vec<usize>,
    pub stem_used: bool,
}

/// Released terms in release order plus per-token coverage marks.
///
/// `selected` always holds the full list; `truncated` records whether the
/// display cap would cut it. Use [`EncodingResult::capped`] for presentation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EncodingResult {
    pub selected: Vec<SelectedTerm>,
    pub covered_tokens: Vec<bool>,
    pub truncated: bool,
}

impl EncodingResult {
    /// Copy keeping only the first `cap` selected terms.
    pub fn capped(&self, cap: usize) -> EncodingResult {
        EncodingResult {
            selected: self.selected.iter().take(cap).cloned().collect(),
            covered_tokens: self.covered_tokens.clone(),
            truncated: self.selected.len() > cap,
        }
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.selected.iter().map(|s| s.llt_code.as_str())
    }
}

/// Every intermediate product of one encoding, for inspection.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub tokens: TokenSequence,
    /// All voted terms in rank order, thresholds not applied.
    pub ranked: Vec<ScoredTerm>,
    pub release: Release,
    pub result: EncodingResult,
}

/// Run the full pipeline on `text`.
pub fn encode(text: &str, bundle: &DictionaryBundle, config: &EncoderConfig) -> EncodingResult {
    encode_detailed(text, bundle, config).result
}

pub fn encode_detailed(text: &str, bundle: &DictionaryBundle, config: &EncoderConfig) -> Encoding {
    let tokens = preprocess(text, bundle.stop_words(), bundle.stemmer());
    encode_tokens(tokens, bundle, config)
}

/// Pipeline from an already preprocessed token sequence.
pub fn encode_tokens(tokens: TokenSequence, bundle: &DictionaryBundle, config: &EncoderConfig) -> Encoding {
    let dictionary = bundle.dictionary();
    let votes = vote(&tokens, bundle.exact(), bundle.stemmed());
    let mut scorer = Scorer::new(&tokens);
    let mut ranked: Vec<ScoredTerm> = votes
        .into_values()
        .map(|record| {
            let weights = scorer.weights(&record, dictionary.term(record.term));
            ScoredTerm { record, weights }
        })
        .collect();
    sort_voted(&mut ranked, dictionary);
    let release = release(&ranked, tokens.len(), dictionary, &config.thresholds);

    let selected: Vec<SelectedTerm> = release
        .selected
        .iter()
        .map(|&i| {
            let s = &ranked[i];
            let term = dictionary.term(s.record.term);
            SelectedTerm {
                llt_code: term.code.clone(),
                llt_text: term.text.clone(),
                pt_code: term.pt_code.clone(),
                pt_text: term.pt_text.clone(),
                weights: s.weights,
                voters: s.record.voters.clone(),
                voted: s.record.voted.clone(),
                stem_used: s.record.stem_used,
            }
        })
        .collect();
    let result = EncodingResult {
        truncated: selected.len() > config.display_cap,
        selected,
        covered_tokens: release.covered.clone(),
    };
    Encoding {
        tokens,
        ranked,
        release,
        result,
    }
}
