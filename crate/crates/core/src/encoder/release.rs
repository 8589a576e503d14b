//! Ranking voted terms and releasing the winners.

use std::collections::{BTreeMap, HashSet};
use std::ops::Bound;

use serde::{Deserialize, Serialize};

use super::vote::VoteRecord;
use super::weights::Weights;
use crate::dictionary::{Dictionary, Term, TermId};

/// A voted term with its criteria.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredTerm {
    pub record: VoteRecord,
    pub weights: Weights,
}

/// Release-time filters: terms with `c3 >= c3_max` or `c5 >= c5_max` are
/// never selected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub c3_max: f64,
    pub c5_max: u64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { c3_max: 0.5, c5_max: 3 }
    }
}

impl Thresholds {
    /// No filtering at all.
    pub fn disabled() -> Self {
        Self {
            c3_max: f64::INFINITY,
            c5_max: u64::MAX,
        }
    }

    pub fn admits(&self, w: &Weights) -> bool {
        w.c3 < self.c3_max && w.c5 < self.c5_max
    }
}

/// Ascending on `(c1, c2, c3, c4, c5)`, full ties by term code.
pub fn sort_voted(scored: &mut [ScoredTerm], dictionary: &Dictionary) {
    scored.sort_by(|a, b| {
        a.weights.cmp_criteria(&b.weights).then_with(|| {
            dictionary
                .term(a.record.term)
                .code
                .cmp(&dictionary.term(b.record.term).code)
        })
    });
}

/// True when `prefix` is a case-folded string prefix of `full` that ends on
/// a word boundary. Equal texts count as prefixes.
pub fn is_word_prefix(prefix: &Term, full: &Term) -> bool {
    let p = prefix.text.to_lowercase();
    let f = full.text.to_lowercase();
    f.starts_with(p.as_str()) && ends_word(&f, p.len())
}

/// `text[..at]` stops on a word boundary of `text`.
fn ends_word(text: &str, at: usize) -> bool {
    text[at..].chars().next().is_none_or(|c| !c.is_alphabetic())
}

/// Outcome of the release loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Release {
    /// Indexes into the sorted slice, in selection order.
    pub selected: Vec<usize>,
    /// One mark per description token.
    pub covered: Vec<bool>,
}

/// Walk the ranked terms and select a covering subset.
///
/// A term passing the thresholds is selected when it was voted without
/// stemming or still has an uncovered voter, is not selected yet, and is not
/// a word prefix of a selected term. Selecting marks all its voters and
/// evicts selected terms that are word prefixes of it. The walk stops as
/// soon as every token that voted for something is covered.
pub fn release(sorted: &[ScoredTerm], token_count: usize, dictionary: &Dictionary, thresholds: &Thresholds) -> Release {
    let mut covered = vec![false; token_count];
    let mut coverable = vec![false; token_count];
    for s in sorted {
        for &i in &s.record.voters {
            coverable[i] = true;
        }
    }
    let mut pending = coverable.iter().filter(|&&c| c).count();
    // release order, with evicted entries set to None
    let mut slots: Vec<Option<usize>> = Vec::new();
    // case-folded text of each selected term -> its slot
    let mut by_text: BTreeMap<String, usize> = BTreeMap::new();
    let mut chosen_terms: HashSet<TermId> = HashSet::new();

    for (idx, cand) in sorted.iter().enumerate() {
        if pending == 0 {
            break;
        }
        if !thresholds.admits(&cand.weights) {
            continue;
        }
        let rec = &cand.record;
        let uncovered = rec.voters.iter().any(|&i| !covered[i]);
        if rec.stem_used && !uncovered {
            continue;
        }
        if chosen_terms.contains(&rec.term) {
            continue;
        }
        let folded = dictionary.term(rec.term).text.to_lowercase();
        let is_prefix_of_selected = by_text
            .range::<str, _>((Bound::Included(folded.as_str()), Bound::Unbounded))
            .take_while(|(k, _)| k.starts_with(folded.as_str()))
            .any(|(k, _)| ends_word(k, folded.len()));
        if is_prefix_of_selected {
            continue;
        }
        for &i in &rec.voters {
            if !covered[i] {
                covered[i] = true;
                pending -= 1;
            }
        }
        // evict selected terms that are word prefixes of this one
        for end in (1..=folded.len()).filter(|&e| folded.is_char_boundary(e) && ends_word(&folded, e)) {
            if let Some(slot) = by_text.remove(&folded[..end]) {
                slots[slot] = None;
            }
        }
        by_text.insert(folded, slots.len());
        slots.push(Some(idx));
        chosen_terms.insert(rec.term);
    }
    Release {
        selected: slots.into_iter().flatten().collect(),
        covered,
    }
}
