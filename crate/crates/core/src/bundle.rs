//! Everything the encoder needs, built once and shared read-only.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::dictionary::{
    build_meta_dictionary, load_dictionary, Dictionary, DictionaryError, IndexVariant, MetaDictionary, Term,
};
use crate::textprep::{Language, SnowballStemmer, Stemmer, StopWords};

/// Terms, both meta-dictionaries, stop list and stemmer.
pub struct DictionaryBundle {
    dictionary: Dictionary,
    exact: MetaDictionary,
    stemmed: MetaDictionary,
    stop_words: StopWords,
    stemmer: Arc<dyn Stemmer>,
    version: String,
}

impl DictionaryBundle {
    pub fn new(terms: Vec<Term>, stop_words: StopWords, stemmer: Arc<dyn Stemmer>) -> Self {
        let version = content_version(&terms);
        Self::with_version(terms, stop_words, stemmer, version)
    }

    pub fn with_version(
        terms: Vec<Term>,
        stop_words: StopWords,
        stemmer: Arc<dyn Stemmer>,
        version: impl Into<String>,
    ) -> Self {
        let exact = build_meta_dictionary(&terms, IndexVariant::Exact, &*stemmer);
        let stemmed = build_meta_dictionary(&terms, IndexVariant::Stemmed, &*stemmer);
        Self {
            dictionary: Dictionary::new(terms),
            exact,
            stemmed,
            stop_words,
            stemmer,
            version: version.into(),
        }
    }

    /// Load a dictionary CSV and build the bundle with a Snowball stemmer.
    pub fn from_csv_file(
        path: impl AsRef<Path>,
        stop_words: StopWords,
        language: Language,
    ) -> Result<Self, DictionaryError> {
        let bytes = std::fs::read(path)?;
        let terms = load_dictionary(bytes.as_slice())?;
        let version = format!("sha256:{}", short_hash(&bytes));
        Ok(Self::with_version(
            terms,
            stop_words,
            Arc::new(SnowballStemmer::new(language)),
            version,
        ))
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dictionary
    }

    pub fn exact(&self) -> &MetaDictionary {
        &self.exact
    }

    pub fn stemmed(&self) -> &MetaDictionary {
        &self.stemmed
    }

    pub fn stop_words(&self) -> &StopWords {
        &self.stop_words
    }

    pub fn stemmer(&self) -> &dyn Stemmer {
        &*self.stemmer
    }

    /// Opaque identifier of the dictionary content, echoed in service responses.
    pub fn version(&self) -> &str {
        &self.version
    }
}

impl fmt::Debug for DictionaryBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DictionaryBundle")
            .field("terms", &self.dictionary.len())
            .field("exact_keys", &self.exact.len())
            .field("stemmed_keys", &self.stemmed.len())
            .field("stop_words", &self.stop_words.len())
            .field("version", &self.version)
            .finish()
    }
}

fn short_hash(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn content_version(terms: &[Term]) -> String {
    let mut h = Sha256::new();
    for t in terms {
        for field in [&t.code, &t.text, &t.pt_code, &t.pt_text] {
            h.update(field.as_bytes());
            h.update([0u8]);
        }
    }
    let digest = h.finalize();
    let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}
