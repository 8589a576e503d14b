//! Seeded synthetic dictionaries and descriptions for load tests and demos.
//!
//! Real terminologies are licensed, so scale testing runs on pseudo-words
//! assembled from Italian-looking syllables. Word frequencies follow a
//! Zipf-Mandelbrot law, so a few words appear in many terms but none in more
//! than a few percent of them, as in real dictionaries.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dictionary::Term;

const ONSETS: &[&str] = &[
    "b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "cr", "tr", "st", "sp", "gl",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ia", "io"];

/// Mandelbrot offset `q`; flattens the head of the rank distribution.
const ZIPF_OFFSET: f64 = 25.0;

#[derive(Debug, Clone)]
pub struct Generator {
    rng: ChaCha8Rng,
    vocabulary: Vec<String>,
}

impl Generator {
    /// `vocabulary_size` distinct pseudo-words, reproducible from `seed`.
    pub fn new(seed: u64, vocabulary_size: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = std::collections::HashSet::with_capacity(vocabulary_size);
        let mut vocabulary = Vec::with_capacity(vocabulary_size);
        while vocabulary.len() < vocabulary_size {
            let syllables = rng.random_range(2..=4);
            let mut w = String::new();
            for _ in 0..syllables {
                w.push_str(ONSETS[rng.random_range(0..ONSETS.len())]);
                w.push_str(VOWELS[rng.random_range(0..VOWELS.len())]);
            }
            if seen.insert(w.clone()) {
                vocabulary.push(w);
            }
        }
        Self { rng, vocabulary }
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    /// A vocabulary word, skewed towards low indexes.
    pub fn word(&mut self) -> &str {
        let u: f64 = self.rng.random();
        let n = self.vocabulary.len() as f64;
        // inverse CDF of a continuous 1/(r + q) law on ranks [0, n)
        let lo = ZIPF_OFFSET + 1.0;
        let x = lo * ((n + ZIPF_OFFSET) / lo).powf(u);
        let idx = (x - lo) as usize;
        &self.vocabulary[idx.min(self.vocabulary.len() - 1)]
    }

    /// `count` terms of 1..=`max_words` words; codes `S0000001`...,
    /// preferred terms group ten low-level terms each.
    pub fn terms(&mut self, count: usize, max_words: usize) -> Vec<Term> {
        (0..count)
            .map(|i| {
                let len = self.rng.random_range(1..=max_words.max(1));
                let text: Vec<String> = (0..len).map(|_| self.word().to_string()).collect();
                let text = text.join(" ");
                let pt = i / 10;
                Term::new(format!("S{:07}", i + 1), text.clone(), format!("SP{pt:06}"), text)
                    .expect("synthetic words are letters")
            })
            .collect()
    }

    /// Free text of roughly `chars` characters made of vocabulary words,
    /// commas and the occasional number.
    pub fn description(&mut self, chars: usize) -> String {
        let mut out = String::new();
        while out.chars().count() < chars {
            if !out.is_empty() {
                out.push_str(if self.rng.random_bool(0.15) { ", " } else { " " });
            }
            if self.rng.random_bool(0.05) {
                out.push_str(&self.rng.random_range(1..100u32).to_string());
            } else {
                let w = self.word().to_string();
                out.push_str(&w);
            }
        }
        out.chars().take(chars).collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
