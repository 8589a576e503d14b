//! Single-pass voting over the exact and stemmed meta-dictionaries.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::dictionary::{PostingSource, TermId};
use crate::textprep::TokenSequence;

/// Votes a term collected during the scan.
///
/// `voters[k]` is the description token that voted term position `voted[k]`.
/// Each token votes a term at most once, so `voters` is strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VoteRecord {
    pub term: TermId,
    pub voters: Vec<usize>,
    pub voted: Vec<usize>,
    pub stem_used: bool,
    /// Every term position the k-th voter could have matched.
    #[serde(skip)]
    pub candidates: Vec<Vec<u16>>,
}

impl VoteRecord {
    fn new(term: TermId) -> Self {
        Self {
            term,
            voters: Vec::new(),
            voted: Vec::new(),
            stem_used: false,
            candidates: Vec::new(),
        }
    }

    fn push(&mut self, token: usize, positions: &[u16]) {
        self.voters.push(token);
        self.voted.push(pick_position(positions, &self.voted));
        self.candidates.push(positions.to_vec());
    }

    fn voted_by(&self, token: usize) -> bool {
        self.voters.last() == Some(&token)
    }
}

/// The first candidate position not voted yet, else the first candidate.
/// Repeated description words thereby spread over repeated term words.
pub fn pick_position(candidates: &[u16], voted: &[usize]) -> usize {
    candidates
        .iter()
        .map(|&p| p as usize)
        .find(|p| !voted.contains(p))
        .unwrap_or(candidates[0] as usize)
}

/// Scan the tokens once. Each token probes the exact index with its surface
/// and the stemmed index with its stem; a term already voted by this token
/// through the exact index ignores the stem match.
pub fn vote<E, S>(tokens: &TokenSequence, exact: &E, stemmed: &S) -> BTreeMap<TermId, VoteRecord>
where
    E: PostingSource + ?Sized,
    S: PostingSource + ?Sized,
{
    let mut records: HashMap<TermId, VoteRecord> = HashMap::new();
    for (i, token) in tokens.iter().enumerate() {
        for posting in exact.postings(&token.surface) {
            records
                .entry(posting.term)
                .or_insert_with(|| VoteRecord::new(posting.term))
                .push(i, &posting.positions);
        }
        for posting in stemmed.postings(&token.stem) {
            let record = records
                .entry(posting.term)
                .or_insert_with(|| VoteRecord::new(posting.term));
            if !record.voted_by(i) {
                record.push(i, &posting.positions);
                record.stem_used = true;
            }
        }
    }
    records.into_iter().collect()
}
