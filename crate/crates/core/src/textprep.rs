//! Turning raw narrative text into the token stream the voting scan consumes.
//!
//! The pipeline is tokenize -> stop-word filter -> stem. Tokens are maximal
//! runs of Unicode letters; everything else (digits, punctuation, symbols,
//! whitespace) separates tokens and is dropped. Dictionary terms go through
//! the same tokenizer but skip the stop-word filter.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, BufRead};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Character offsets `[start, end)` into the original text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    /// Slice `text` by character offsets.
    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        let mut indices = text.char_indices().map(|(b, _)| b).chain(std::iter::once(text.len()));
        let start = indices.nth(self.start).unwrap_or(text.len());
        let end = if self.end > self.start {
            indices.nth(self.end - self.start - 1).unwrap_or(text.len())
        } else {
            start
        };
        &text[start..end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub stem: String,
    pub span: Span,
}

/// Preprocessed description: surviving tokens plus the untouched input.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct TokenSequence {
    pub tokens: Vec<Token>,
    pub original: String,
}

impl TokenSequence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.tokens.iter()
    }
}

/// Split `text` into lower-cased letter runs with their character spans.
pub fn tokenize(text: &str) -> Vec<(String, Span)> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start = 0;
    let mut pos = 0;
    for ch in text.chars() {
        if ch.is_alphabetic() {
            if current.is_empty() {
                start = pos;
            }
            current.extend(ch.to_lowercase());
        } else if !current.is_empty() {
            out.push((std::mem::take(&mut current), Span { start, end: pos }));
        }
        pos += 1;
    }
    if !current.is_empty() {
        out.push((current, Span { start, end: pos }));
    }
    out
}

/// Lower-cased word sequence of `text`, as used for dictionary terms.
pub fn words(text: &str) -> Vec<String> {
    tokenize(text).into_iter().map(|(w, _)| w).collect()
}

/// A set of lower-cased words ignored on the description side.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

const DEFAULT_ITALIAN: &str = include_str!("../data/stopwords_it.txt");

impl StopWords {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The shipped Italian list: articles, prepositions and conjunctions.
    /// Negation words are deliberately absent.
    pub fn italian() -> Self {
        Self::parse(DEFAULT_ITALIAN)
    }

    /// One word per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        Self(
            text.lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty())
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn from_reader<R: BufRead>(reader: R) -> io::Result<Self> {
        let mut text = String::new();
        for line in reader.lines() {
            text.push_str(&line?);
            text.push('\n');
        }
        Ok(Self::parse(&text))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for StopWords {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self(iter.into_iter().map(|s| s.into().to_lowercase()).collect())
    }
}

/// Order-preserving filter dropping every token whose surface is a stop word.
pub fn remove_stop_words<T: AsRef<str>>(tokens: Vec<(T, Span)>, stop: &StopWords) -> Vec<(T, Span)> {
    tokens.into_iter().filter(|(w, _)| !stop.contains(w.as_ref())).collect()
}

/// Word -> root form. Implementations must be deterministic.
pub trait Stemmer: Send + Sync {
    fn stem(&self, word: &str) -> String;
}

impl<F> Stemmer for F
where
    F: Fn(&str) -> String + Send + Sync,
{
    fn stem(&self, word: &str) -> String {
        self(word)
    }
}

impl<S: Stemmer + ?Sized> Stemmer for Arc<S> {
    fn stem(&self, word: &str) -> String {
        (**self).stem(word)
    }
}

/// Leaves words untouched; disables stem matching in practice.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityStemmer;

impl Stemmer for IdentityStemmer {
    fn stem(&self, word: &str) -> String {
        word.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Language {
    Italian,
    English,
    French,
    German,
    Spanish,
    Portuguese,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported language code {0:?}")]
pub struct UnknownLanguage(pub String);

impl FromStr for Language {
    type Err = UnknownLanguage;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "it" | "ita" | "italian" => Language::Italian,
            "en" | "eng" | "english" => Language::English,
            "fr" | "fra" | "french" => Language::French,
            "de" | "deu" | "german" => Language::German,
            "es" | "spa" | "spanish" => Language::Spanish,
            "pt" | "por" | "portuguese" => Language::Portuguese,
            other => return Err(UnknownLanguage(other.to_string())),
        })
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code = match self {
            Language::Italian => "it",
            Language::English => "en",
            Language::French => "fr",
            Language::German => "de",
            Language::Spanish => "es",
            Language::Portuguese => "pt",
        };
        f.write_str(code)
    }
}

/// Snowball (Porter-family) stemmer for a configured language.
pub struct SnowballStemmer {
    language: Language,
    inner: rust_stemmers::Stemmer,
}

impl SnowballStemmer {
    pub fn new(language: Language) -> Self {
        use rust_stemmers::Algorithm;
        let algorithm = match language {
            Language::Italian => Algorithm::Italian,
            Language::English => Algorithm::English,
            Language::French => Algorithm::French,
            Language::German => Algorithm::German,
            Language::Spanish => Algorithm::Spanish,
            Language::Portuguese => Algorithm::Portuguese,
        };
        Self {
            language,
            inner: rust_stemmers::Stemmer::create(algorithm),
        }
    }

    pub fn language(&self) -> Language {
        self.language
    }
}

impl fmt::Debug for SnowballStemmer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SnowballStemmer")
            .field("language", &self.language)
            .finish()
    }
}

impl Stemmer for SnowballStemmer {
    fn stem(&self, word: &str) -> String {
        let stem = self.inner.stem(word);
        // a stem is never empty
        if stem.is_empty() {
            word.to_string()
        } else {
            stem.into_owned()
        }
    }
}

/// Tokenize, drop stop words, attach stems.
pub fn preprocess(text: &str, stop: &StopWords, stemmer: &dyn Stemmer) -> TokenSequence {
    let tokens = remove_stop_words(tokenize(text), stop)
        .into_iter()
        .map(|(surface, span)| Token {
            stem: stemmer.stem(&surface),
            surface,
            span,
        })
        .collect();
    TokenSequence {
        tokens,
        original: text.to_string(),
    }
}
