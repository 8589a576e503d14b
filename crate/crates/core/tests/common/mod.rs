//! Reference implementations used as test oracles.
//!
//! Nothing here touches the meta-dictionaries or the encoder internals:
//! votes come from a brute-force (token x term x position) loop, weights
//! from the formulas with an exhaustive matching count, and release from a
//! per-voter-index loop written after the published pseudocode.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use adrcode::textprep::{Stemmer, Token, TokenSequence};
use adrcode::{DictionaryBundle, Span, StopWords, Term};
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleVote {
    pub voters: Vec<usize>,
    pub voted: Vec<usize>,
    pub stem_used: bool,
    pub candidates: Vec<Vec<u16>>,
}

fn first_free(positions: &[u16], voted: &[usize]) -> usize {
    for &p in positions {
        if !voted.contains(&(p as usize)) {
            return p as usize;
        }
    }
    positions[0] as usize
}

/// Brute force voting: exact pass then stem pass for each token.
pub fn vote_oracle(tokens: &TokenSequence, terms: &[Term], stemmer: &dyn Stemmer) -> BTreeMap<u32, OracleVote> {
    let mut out: BTreeMap<u32, OracleVote> = BTreeMap::new();
    for (i, tok) in tokens.tokens.iter().enumerate() {
        for (t, term) in terms.iter().enumerate() {
            let exact: Vec<u16> = (0..term.words.len())
                .filter(|&p| term.words[p] == tok.surface)
                .map(|p| p as u16)
                .collect();
            let stemmed: Vec<u16> = (0..term.words.len())
                .filter(|&p| stemmer.stem(&term.words[p]) == tok.stem)
                .map(|p| p as u16)
                .collect();
            if exact.is_empty() && stemmed.is_empty() {
                continue;
            }
            let rec = out.entry(t as u32).or_insert(OracleVote {
                voters: vec![],
                voted: vec![],
                stem_used: false,
                candidates: vec![],
            });
            if !exact.is_empty() {
                let p = first_free(&exact, &rec.voted);
                rec.voters.push(i);
                rec.voted.push(p);
                rec.candidates.push(exact);
            } else {
                let p = first_free(&stemmed, &rec.voted);
                rec.voters.push(i);
                rec.voted.push(p);
                rec.candidates.push(stemmed);
                rec.stem_used = true;
            }
        }
    }
    out
}

/// Maximum matching size by the deficiency form of Hall's theorem,
/// enumerating every subset of term positions.
pub fn matching_by_hall(candidates: &[Vec<u16>], size: usize) -> usize {
    let mut worst = 0i64;
    for mask in 0u32..(1 << size) {
        let s = mask.count_ones() as i64;
        let neighbours = candidates
            .iter()
            .filter(|c| c.iter().any(|&p| mask & (1 << p) != 0))
            .count() as i64;
        worst = worst.max(s - neighbours);
    }
    size - worst as usize
}

pub fn bigram_distance(a: &str, b: &str) -> f64 {
    fn grams(s: &str) -> HashMap<(char, char), usize> {
        let mut m = HashMap::new();
        for w in s.split(|c: char| !c.is_alphabetic()) {
            let lower: Vec<char> = w.to_lowercase().chars().collect();
            for pair in lower.windows(2) {
                *m.entry((pair[0], pair[1])).or_insert(0) += 1;
            }
        }
        m
    }
    let (ga, gb) = (grams(a), grams(b));
    let na: usize = ga.values().sum();
    let nb: usize = gb.values().sum();
    if na == 0 && nb == 0 {
        return 0.0;
    }
    if na == 0 || nb == 0 {
        return 1.0;
    }
    let shared: usize = ga.iter().map(|(k, v)| (*v).min(*gb.get(k).unwrap_or(&0))).sum();
    1.0 - 2.0 * shared as f64 / (na + nb) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleScored {
    pub term: u32,
    pub code: String,
    pub text: String,
    pub vote: OracleVote,
    pub w: (f64, u8, f64, f64, u64),
}

pub fn weights_oracle(v: &OracleVote, term: &Term, tokens: &TokenSequence) -> (f64, u8, f64, f64, u64) {
    let size = term.words.len() as f64;
    let m = matching_by_hall(&v.candidates, term.words.len());
    let rebuilt: Vec<&str> = v.voters.iter().map(|&i| tokens.tokens[i].surface.as_str()).collect();
    let min = *v.voters.iter().min().unwrap();
    let max = *v.voters.iter().max().unwrap();
    (
        (size - m as f64) / size,
        if v.stem_used { 1 } else { 0 },
        bigram_distance(&term.text, &rebuilt.join(" ")),
        (max - min + 1) as f64 / size,
        v.voted.iter().map(|&p| p as u64).sum(),
    )
}

/// Votes, weights and ranking, all from the reference routines.
pub fn ranked_oracle(tokens: &TokenSequence, terms: &[Term], stemmer: &dyn Stemmer) -> Vec<OracleScored> {
    let mut v: Vec<OracleScored> = vote_oracle(tokens, terms, stemmer)
        .into_iter()
        .map(|(t, vote)| {
            let term = &terms[t as usize];
            OracleScored {
                term: t,
                code: term.code.clone(),
                text: term.text.clone(),
                w: weights_oracle(&vote, term, tokens),
                vote,
            }
        })
        .collect();
    v.sort_by(|a, b| {
        a.w.0
            .partial_cmp(&b.w.0)
            .unwrap()
            .then(a.w.1.cmp(&b.w.1))
            .then(a.w.2.partial_cmp(&b.w.2).unwrap())
            .then(a.w.3.partial_cmp(&b.w.3).unwrap())
            .then(a.w.4.cmp(&b.w.4))
            .then(a.code.cmp(&b.code))
    });
    v
}

fn prefix(candidate: &str, of: &str) -> bool {
    let c = candidate.to_lowercase();
    let o = of.to_lowercase();
    if !o.starts_with(&c) {
        return false;
    }
    match o[c.len()..].chars().next() {
        None => true,
        Some(ch) => !ch.is_alphabetic(),
    }
}

/// Release loop written index by index. Returns selected entries (indexes
/// into `sorted`) in release order, and the marks.
pub fn release_oracle(
    sorted: &[(String, Vec<usize>, bool, f64, u64)],
    n_tokens: usize,
    c3_max: f64,
    c5_max: u64,
) -> (Vec<usize>, Vec<bool>) {
    let mut mark = vec![false; n_tokens];
    let mut can_be_marked = vec![false; n_tokens];
    for s in sorted {
        for &i in &s.1 {
            can_be_marked[i] = true;
        }
    }
    let mut selected: Vec<usize> = Vec::new();
    for t in 0..sorted.len() {
        let all_done = (0..n_tokens).all(|j| !can_be_marked[j] || mark[j]);
        if all_done {
            break;
        }
        let (text, voters, stem_usage, c3, c5) = &sorted[t];
        if !(*c3 < c3_max && *c5 < c5_max) {
            continue;
        }
        let mut chosen = false;
        for &index in voters {
            if chosen {
                mark[index] = true;
                continue;
            }
            let is_prefix_of_selected = selected.iter().any(|&s| prefix(text, &sorted[s].0));
            if (!*stem_usage || !mark[index]) && !selected.contains(&t) && !is_prefix_of_selected {
                mark[index] = true;
                selected.retain(|&s| !prefix(&sorted[s].0, text));
                selected.push(t);
                chosen = true;
            }
        }
    }
    (selected, mark)
}

/// Full reference pipeline; returns released term codes in order.
pub fn encode_oracle(tokens: &TokenSequence, terms: &[Term], stemmer: &dyn Stemmer) -> Vec<String> {
    let ranked = ranked_oracle(tokens, terms, stemmer);
    let rows: Vec<_> = ranked
        .iter()
        .map(|r| (r.text.clone(), r.vote.voters.clone(), r.vote.stem_used, r.w.2, r.w.4))
        .collect();
    let (sel, _) = release_oracle(&rows, tokens.tokens.len(), 0.5, 3);
    sel.into_iter().map(|i| ranked[i].code.clone()).collect()
}

/// A random small instance: terms of <= 4 words over a tiny vocabulary, a
/// stemmer that merges random word pairs, and <= 12 tokens.
pub struct Instance {
    pub terms: Vec<Term>,
    pub stemmer: Arc<dyn Stemmer>,
    pub tokens: TokenSequence,
}

const VOCAB: &[&str] = &[
    "alfa", "beta", "gamma", "delta", "eco", "foxtrot", "golf", "hotel", "india", "juliet", "kilo", "lima",
];

pub fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab_len = rng.random_range(4..=VOCAB.len());
    let vocab = &VOCAB[..vocab_len];
    // random stem classes: each word maps to one of k class stems
    let classes = rng.random_range(2..=vocab_len);
    let table: HashMap<String, String> = VOCAB
        .iter()
        .map(|w| (w.to_string(), format!("s{}", rng.random_range(0..classes))))
        .collect();
    let table = Arc::new(table);
    let stemmer: Arc<dyn Stemmer> = {
        let table = table.clone();
        Arc::new(move |w: &str| table.get(w).cloned().unwrap_or_else(|| w.to_string()))
    };

    let n_terms = rng.random_range(1..=20);
    let mut terms = Vec::new();
    let mut texts = std::collections::HashSet::new();
    while terms.len() < n_terms {
        let len = rng.random_range(1..=4);
        let words: Vec<&str> = (0..len).map(|_| vocab[rng.random_range(0..vocab.len())]).collect();
        let text = words.join(" ");
        if !texts.insert(text.clone()) {
            continue;
        }
        let code = format!("C{:03}", rng.random_range(0..1000));
        if terms.iter().any(|t: &Term| t.code == code) {
            continue;
        }
        terms.push(Term::new(code, text, "P", "p").unwrap());
    }
    terms.shuffle(&mut rng);

    let n_tokens = rng.random_range(0..=12);
    let mut pos = 0;
    let tokens = (0..n_tokens)
        .map(|_| {
            let surface = if rng.random_bool(0.15) {
                "zulu".to_string()
            } else {
                VOCAB[rng.random_range(0..VOCAB.len())].to_string()
            };
            let span = Span {
                start: pos,
                end: pos + surface.chars().count(),
            };
            pos = span.end + 1;
            Token {
                stem: stemmer.stem(&surface),
                surface,
                span,
            }
        })
        .collect::<Vec<_>>();
    let original = tokens.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ");
    Instance {
        terms,
        stemmer,
        tokens: TokenSequence { tokens, original },
    }
}

impl Instance {
    pub fn bundle(&self) -> DictionaryBundle {
        DictionaryBundle::new(self.terms.clone(), StopWords::empty(), self.stemmer.clone())
    }
}
