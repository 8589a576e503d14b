//! The five ranking criteria of a voted term.
//!
//! All five are "lower is better":
//!
//! * `c1` coverage: share of the term's words left unmatched.
//! * `c2` type of coverage: 1 when any vote came through a stem match.
//! * `c3` coverage distance: pair distance between the term text and the
//!   term rebuilt from the voting description words.
//! * `c4` coverage density: span of the voting tokens over the term size.
//! * `c5` coverage distribution: sum of the voted term positions.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::similarity::{bigram_set_distance, push_word_bigrams};
use super::vote::VoteRecord;
use crate::dictionary::Term;
use crate::textprep::TokenSequence;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub c1: f64,
    pub c2: u8,
    pub c3: f64,
    pub c4: f64,
    pub c5: u64,
}

impl Weights {
    /// Lexicographic comparison on `(c1, c2, c3, c4, c5)`.
    pub fn cmp_criteria(&self, other: &Self) -> Ordering {
        self.c1
            .total_cmp(&other.c1)
            .then(self.c2.cmp(&other.c2))
            .then(self.c3.total_cmp(&other.c3))
            .then(self.c4.total_cmp(&other.c4))
            .then(self.c5.cmp(&other.c5))
    }
}

/// Size of a maximum matching between voters and the term positions each can
/// match. Without repeated words or stem collisions this is `voters.len()`.
pub fn matched_word_count(record: &VoteRecord, term_size: usize) -> usize {
    fn augment(voter: usize, candidates: &[Vec<u16>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &p in &candidates[voter] {
            let p = p as usize;
            if seen[p] {
                continue;
            }
            seen[p] = true;
            if owner[p].is_none_or(|other| augment(other, candidates, owner, seen)) {
                owner[p] = Some(voter);
                return true;
            }
        }
        false
    }

    let mut owner = vec![None; term_size];
    let mut matched = 0;
    for voter in 0..record.candidates.len() {
        let mut seen = vec![false; term_size];
        if augment(voter, &record.candidates, &mut owner, &mut seen) {
            matched += 1;
            if matched == term_size {
                break;
            }
        }
    }
    matched
}

/// The term rebuilt from the description: voting token surfaces in voters
/// order, joined by single spaces.
pub fn rebuilt_text(record: &VoteRecord, tokens: &TokenSequence) -> String {
    let mut out = String::new();
    for (k, &i) in record.voters.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        out.push_str(&tokens.tokens[i].surface);
    }
    out
}

pub fn compute_weights(record: &VoteRecord, term: &Term, tokens: &TokenSequence) -> Weights {
    Scorer::new(tokens).weights(record, term)
}

/// Weights for many terms voted by the same description. Token bigrams are
/// computed once and scratch buffers are reused.
pub struct Scorer {
    token_bigrams: Vec<Vec<(char, char)>>,
    term_buf: Vec<(char, char)>,
    rebuilt_buf: Vec<(char, char)>,
}

impl Scorer {
    pub fn new(tokens: &TokenSequence) -> Self {
        let token_bigrams = tokens
            .iter()
            .map(|t| {
                let mut v = Vec::new();
                push_word_bigrams(&t.surface, &mut v);
                v
            })
            .collect();
        Self {
            token_bigrams,
            term_buf: Vec::new(),
            rebuilt_buf: Vec::new(),
        }
    }

    /// c3 is `pair_distance(term.text, rebuilt_text(record))`: term words
    /// and token surfaces are the letter runs those texts split into.
    pub fn weights(&mut self, record: &VoteRecord, term: &Term) -> Weights {
        let size = term.size() as f64;
        let matched = matched_word_count(record, term.size());
        let (min, max) = match (record.voters.first(), record.voters.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0, 0),
        };
        self.term_buf.clear();
        for w in &term.words {
            push_word_bigrams(w, &mut self.term_buf);
        }
        self.rebuilt_buf.clear();
        for &i in &record.voters {
            self.rebuilt_buf.extend_from_slice(&self.token_bigrams[i]);
        }
        Weights {
            c1: (term.size() - matched) as f64 / size,
            c2: u8::from(record.stem_used),
            c3: bigram_set_distance(&mut self.term_buf, &mut self.rebuilt_buf),
            c4: ((max - min) + 1) as f64 / size,
            c5: record.voted.iter().map(|&p| p as u64).sum(),
        }
    }
}
