//! Term dictionary loading and the word-level inverted indexes.
//!
//! A dictionary file is a UTF-8 CSV with header and four columns:
//! `llt_code,llt_text,pt_code,pt_text`. Each row becomes a [`Term`]; the
//! meta-dictionaries map every word (or every word stem) to the postings of
//! the terms containing it.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

use serde::Serialize;

use crate::textprep::{self, Stemmer};

/// Index of a term inside its [`Dictionary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TermId(pub u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One low-level term with its link to the preferred term above it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub code: String,
    pub text: String,
    /// Lower-cased words in order; never empty.
    pub words: Vec<String>,
    pub pt_code: String,
    pub pt_text: String,
}

impl Term {
    /// Build a term, tokenizing `text` the same way descriptions are.
    /// Returns `None` when the text contains no letters.
    pub fn new(
        code: impl Into<String>,
        text: impl Into<String>,
        pt_code: impl Into<String>,
        pt_text: impl Into<String>,
    ) -> Option<Self> {
        let text = text.into();
        let words = textprep::words(&text);
        if words.is_empty() {
            return None;
        }
        Some(Self {
            code: code.into(),
            text,
            words,
            pt_code: pt_code.into(),
            pt_text: pt_text.into(),
        })
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    /// The normalized text: words joined by single spaces.
    pub fn normalized(&self) -> String {
        self.words.join(" ")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DictionaryError {
    #[error("i/o error reading dictionary: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Csv { line: u64, source: csv::Error },
    #[error("line {line}: expected 4 columns (llt_code, llt_text, pt_code, pt_text), found {found}")]
    ColumnCount { line: u64, found: usize },
    #[error("line {line}: term text is empty")]
    EmptyText { line: u64 },
    #[error("line {line}: empty term code")]
    EmptyCode { line: u64 },
    #[error("line {line}: duplicate term code {code:?} (first seen on line {first_line})")]
    DuplicateCode { line: u64, first_line: u64, code: String },
}

/// Read terms from a 4-column CSV stream with a header row.
pub fn load_dictionary<R: Read>(source: R) -> Result<Vec<Term>, DictionaryError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source);
    let mut terms = Vec::new();
    let mut seen: HashMap<String, u64> = HashMap::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line = reader.position().line();
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(source) => {
                let line = source.position().map(|p| p.line()).unwrap_or(line);
                return Err(DictionaryError::Csv { line, source });
            }
        }
        let line = record.position().map(|p| p.line()).unwrap_or(line);
        if record.len() != 4 {
            return Err(DictionaryError::ColumnCount {
                line,
                found: record.len(),
            });
        }
        let code = record[0].trim();
        if code.is_empty() {
            return Err(DictionaryError::EmptyCode { line });
        }
        if let Some(&first_line) = seen.get(code) {
            return Err(DictionaryError::DuplicateCode {
                line,
                first_line,
                code: code.to_string(),
            });
        }
        let term = Term::new(code, record[1].trim(), record[2].trim(), record[3].trim())
            .ok_or(DictionaryError::EmptyText { line })?;
        seen.insert(code.to_string(), line);
        terms.push(term);
    }
    Ok(terms)
}

pub fn load_dictionary_file(path: impl AsRef<Path>) -> Result<Vec<Term>, DictionaryError> {
    load_dictionary(io::BufReader::new(File::open(path)?))
}

/// The loaded term list with code lookup.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    terms: Vec<Term>,
    by_code: HashMap<String, TermId>,
}

impl Dictionary {
    /// Panics if two terms share a code; [`load_dictionary`] already rejects that.
    pub fn new(terms: Vec<Term>) -> Self {
        let mut by_code = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            let prev = by_code.insert(t.code.clone(), TermId(i as u32));
            assert!(prev.is_none(), "duplicate term code {}", t.code);
        }
        Self { terms, by_code }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term(&self, id: TermId) -> &Term {
        &self.terms[id.index()]
    }

    pub fn id_of(&self, code: &str) -> Option<TermId> {
        self.by_code.get(code).copied()
    }

    pub fn by_code(&self, code: &str) -> Option<&Term> {
        self.id_of(code).map(|id| self.term(id))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Occurrences of one key word inside one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Posting {
    pub term: TermId,
    /// Sorted, distinct, 0-based word positions.
    pub positions: Vec<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexVariant {
    Exact,
    Stemmed,
}

/// Anything the voting scan can probe for postings.
pub trait PostingSource {
    fn postings(&self, key: &str) -> &[Posting];
}

/// Inverted index from a word (or word stem) to the terms containing it.
#[derive(Debug, Clone)]
pub struct MetaDictionary {
    variant: IndexVariant,
    entries: HashMap<String, Vec<Posting>>,
}

impl MetaDictionary {
    pub fn variant(&self) -> IndexVariant {
        self.variant
    }

    /// Number of distinct keys.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Posting])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Total number of postings over all keys.
    pub fn posting_count(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }
}

impl PostingSource for MetaDictionary {
    fn postings(&self, key: &str) -> &[Posting] {
        self.entries.get(key).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// One pass over every (term, position, word) triple. In exact mode the
/// stemmer is never called.
pub fn build_meta_dictionary(terms: &[Term], variant: IndexVariant, stemmer: &dyn Stemmer) -> MetaDictionary {
    let mut entries: HashMap<String, Vec<Posting>> = HashMap::new();
    for (i, term) in terms.iter().enumerate() {
        let id = TermId(i as u32);
        for (pos, word) in term.words.iter().enumerate() {
            let key = match variant {
                IndexVariant::Exact => word.clone(),
                IndexVariant::Stemmed => stemmer.stem(word),
            };
            let list = entries.entry(key).or_default();
            // terms are visited in order, so this term's posting is the last one if present
            match list.last_mut() {
                Some(p) if p.term == id => p.positions.push(pos as u16),
                _ => list.push(Posting {
                    term: id,
                    positions: vec![pos as u16],
                }),
            }
        }
    }
    MetaDictionary { variant, entries }
}
