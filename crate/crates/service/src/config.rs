//! Service configuration: an optional TOML file, then `ADRCODE_*` environment
//! overrides.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use adrcode::encoder::{EncoderConfig, Thresholds, DEFAULT_DISPLAY_CAP};
use adrcode::{DictionaryBundle, DictionaryError, Language, StopWords};
use serde::Deserialize;

/// Negation cues flagged by default. Flagging only, never interpreted.
pub const DEFAULT_NEGATION_WORDS: &[&str] = &[
    "non", "no", "senza", "mai", "nessun", "nessuno", "nessuna", "né", "neanche", "nemmeno", "neppure", "assenza",
    "assente",
];

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    /// Dictionary CSV. Without one the service answers 503 on encoding routes.
    pub dictionary: Option<PathBuf>,
    /// Stop-word file; the built-in list for Italian, none otherwise.
    pub stopwords: Option<PathBuf>,
    pub language: String,
    pub c3_max: f64,
    pub c5_max: u64,
    pub display_cap: usize,
    /// Session logs live here. `None` keeps sessions in memory only.
    pub data_dir: Option<PathBuf>,
    pub listen: SocketAddr,
    pub negation_words: Vec<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        let t = Thresholds::default();
        Self {
            dictionary: None,
            stopwords: None,
            language: "it".into(),
            c3_max: t.c3_max,
            c5_max: t.c5_max,
            display_cap: DEFAULT_DISPLAY_CAP,
            data_dir: Some(PathBuf::from("adrcode-data")),
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            negation_words: DEFAULT_NEGATION_WORDS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config file {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("invalid value for {var}: {value:?}")]
    Env { var: String, value: String },
    #[error(transparent)]
    Language(#[from] adrcode::textprep::UnknownLanguage),
    #[error("cannot read stop words {path}: {source}")]
    StopWords { path: PathBuf, source: std::io::Error },
    #[error("cannot load dictionary {path}: {source}")]
    Dictionary { path: PathBuf, source: DictionaryError },
}

impl ServiceConfig {
    /// File (if any) then the process environment.
    pub fn load(file: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = match file {
            Some(path) => Self::from_file(path)?,
            None => Self::default(),
        };
        config.apply_env(std::env::vars())?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_owned(),
            source,
        })
    }

    /// Apply `ADRCODE_*` overrides from `vars`. Unknown variables are ignored.
    pub fn apply_env<I, K, V>(&mut self, vars: I) -> Result<(), ConfigError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: Into<String>,
    {
        for (key, value) in vars {
            let value: String = value.into();
            let bad = || ConfigError::Env {
                var: key.as_ref().to_string(),
                value: value.clone(),
            };
            match key.as_ref() {
                "ADRCODE_DICTIONARY" => self.dictionary = non_empty(&value).map(PathBuf::from),
                "ADRCODE_STOPWORDS" => self.stopwords = non_empty(&value).map(PathBuf::from),
                "ADRCODE_LANGUAGE" => self.language = value.trim().to_string(),
                "ADRCODE_C3_MAX" => self.c3_max = value.trim().parse().map_err(|_| bad())?,
                "ADRCODE_C5_MAX" => self.c5_max = value.trim().parse().map_err(|_| bad())?,
                "ADRCODE_DISPLAY_CAP" => self.display_cap = value.trim().parse().map_err(|_| bad())?,
                "ADRCODE_DATA_DIR" => self.data_dir = non_empty(&value).map(PathBuf::from),
                "ADRCODE_LISTEN" => self.listen = value.trim().parse().map_err(|_| bad())?,
                "ADRCODE_NEGATION_WORDS" => {
                    self.negation_words = value.split(',').filter_map(non_empty).map(str::to_string).collect()
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn encoder_config(&self) -> EncoderConfig {
        EncoderConfig {
            thresholds: Thresholds {
                c3_max: self.c3_max,
                c5_max: self.c5_max,
            },
            display_cap: self.display_cap,
        }
    }

    pub fn language(&self) -> Result<Language, ConfigError> {
        Ok(self.language.parse()?)
    }

    pub fn stop_words(&self) -> Result<StopWords, ConfigError> {
        match &self.stopwords {
            Some(path) => std::fs::read_to_string(path)
                .map(|t| StopWords::parse(&t))
                .map_err(|source| ConfigError::StopWords {
                    path: path.clone(),
                    source,
                }),
            None if self.language()? == Language::Italian => Ok(StopWords::italian()),
            None => Ok(StopWords::empty()),
        }
    }

    /// Build the bundle, or `None` when no dictionary is configured.
    pub fn bundle(&self) -> Result<Option<DictionaryBundle>, ConfigError> {
        let Some(path) = &self.dictionary else {
            return Ok(None);
        };
        let bundle = DictionaryBundle::from_csv_file(path, self.stop_words()?, self.language()?).map_err(|source| {
            ConfigError::Dictionary {
                path: path.clone(),
                source,
            }
        })?;
        Ok(Some(bundle))
    }
}

fn non_empty(s: &str) -> Option<&str> {
    let s = s.trim();
    (!s.is_empty()).then_some(s)
}
