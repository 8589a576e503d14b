//! Dictionary-driven coding of free-text adverse drug reaction reports.
//!
//! A description is tokenized, cleaned of stop words and stemmed. A single
//! scan over the tokens lets every dictionary term containing a token (or
//! its stem) collect a vote. Voted terms are ranked on five coverage
//! criteria and a covering, prefix-free subset is released.
//!
//! ```
//! use adrcode::{encode, fixtures, EncoderConfig};
//!
//! let bundle = fixtures::italian_bundle();
//! let result = encode("cefalea e febbre per due giorni", &bundle, &EncoderConfig::default());
//! let terms: Vec<_> = result.selected.iter().map(|s| s.llt_text.as_str()).collect();
//! assert_eq!(terms, ["Cefalea", "Febbre"]);
//! ```

pub mod benchmark;
pub mod bundle;
pub mod dictionary;
pub mod encoder;
pub mod fixtures;
pub mod synthetic;
pub mod textprep;

pub use bundle::DictionaryBundle;
pub use dictionary::{
    build_meta_dictionary, load_dictionary, load_dictionary_file, Dictionary, DictionaryError, IndexVariant,
    MetaDictionary, Posting, PostingSource, Term, TermId,
};
pub use encoder::{
    encode, encode_detailed, pair_distance, EncoderConfig, Encoding, EncodingResult, SelectedTerm, Thresholds, Weights,
};
pub use textprep::{preprocess, tokenize, Language, SnowballStemmer, Span, Stemmer, StopWords, Token, TokenSequence};
