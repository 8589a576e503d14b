//! A small shipped Italian dictionary for demos and tests.
//!
//! Codes are synthetic (`91xxxxx` for low-level terms, `92xxxxx` for
//! preferred terms) and do not correspond to any licensed terminology.

use std::sync::Arc;

use crate::bundle::DictionaryBundle;
use crate::dictionary::{load_dictionary, Term};
use crate::textprep::{Language, SnowballStemmer, StopWords};

pub const ITALIAN_FIXTURE_CSV: &str = include_str!("../data/fixture_it.csv");

pub fn italian_terms() -> Vec<Term> {
    load_dictionary(ITALIAN_FIXTURE_CSV.as_bytes()).expect("shipped fixture is valid")
}

/// Fixture terms, default Italian stop words and the Italian stemmer.
pub fn italian_bundle() -> DictionaryBundle {
    DictionaryBundle::new(
        italian_terms(),
        StopWords::italian(),
        Arc::new(SnowballStemmer::new(Language::Italian)),
    )
}
