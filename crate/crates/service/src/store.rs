//! Session persistence.
//!
//! Layout under the data directory:
//!
//! ```text
//! index.jsonl              one {"session_id", "created_at"} line per session
//! sessions/<id>.jsonl      created / decision / validated events
//! ```
//!
//! Every event is appended and fsynced before the request is acknowledged.
//! On open the logs are replayed; a torn last line (crash mid-write) is cut
//! off, anything else unreadable is reported as corruption.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use adrcode::Dictionary;
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::session::{
    resolve_final_codes, Action, Decision, DecisionRequest, FinalTerm, Origin, ReviewSession, Status,
};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("unknown session {0}")]
    NotFound(String),
    #[error("session {0} is already validated")]
    Validated(String),
    #[error("undecided displayed terms: {}", .0.join(", "))]
    Undecided(Vec<String>),
    #[error("{0}")]
    Invalid(String),
    #[error("{path}:{line}: corrupt log entry: {message}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
enum Event {
    Created {
        session: Box<ReviewSession>,
    },
    Decision {
        decision: Decision,
    },
    Validated {
        validated_at: DateTime<Utc>,
        final_set: Vec<FinalTerm>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct IndexEntry {
    session_id: String,
    created_at: DateTime<Utc>,
}

struct Slot {
    session: ReviewSession,
    log: Option<File>,
}

/// Sessions keyed by id. Writes to one session are serialized by its lock.
pub struct Store {
    dir: Option<PathBuf>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Slot>>>>,
    index: Mutex<Option<File>>,
}

impl Store {
    /// Sessions live only as long as the process.
    pub fn in_memory() -> Self {
        Self {
            dir: None,
            sessions: RwLock::default(),
            index: Mutex::new(None),
        }
    }

    /// Open (creating if needed) a data directory and replay it.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(dir.join("sessions"))?;
        let index_path = dir.join("index.jsonl");
        let (entries, good) = read_lines::<IndexEntry>(&index_path)?;
        let index = open_append(&index_path, good)?;

        let mut sessions = HashMap::new();
        for entry in entries {
            let path = session_path(&dir, &entry.session_id);
            if sessions.contains_key(&entry.session_id) || !path.exists() {
                continue;
            }
            let (events, good) = read_lines::<Event>(&path)?;
            let Some(session) = fold(events, &path)? else {
                continue;
            };
            let log = open_append(&path, good)?;
            sessions.insert(
                entry.session_id,
                Arc::new(Mutex::new(Slot {
                    session,
                    log: Some(log),
                })),
            );
        }
        Ok(Self {
            dir: Some(dir),
            sessions: RwLock::new(sessions),
            index: Mutex::new(Some(index)),
        })
    }

    pub fn data_dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Persist and register a new session.
    pub fn create(&self, session: ReviewSession) -> Result<ReviewSession, StoreError> {
        let id = session.session_id.clone();
        let mut log = None;
        if let Some(dir) = &self.dir {
            let path = session_path(dir, &id);
            let mut file = OpenOptions::new().append(true).create_new(true).open(&path)?;
            append(
                &mut file,
                &Event::Created {
                    session: Box::new(session.clone()),
                },
            )?;
            File::open(dir.join("sessions"))?.sync_all()?;
            let mut index = self.index.lock().unwrap();
            if let Some(index) = index.as_mut() {
                append(
                    index,
                    &IndexEntry {
                        session_id: id.clone(),
                        created_at: session.created_at,
                    },
                )?;
            }
            log = Some(file);
        }
        self.sessions.write().unwrap().insert(
            id,
            Arc::new(Mutex::new(Slot {
                session: session.clone(),
                log,
            })),
        );
        Ok(session)
    }

    pub fn get(&self, id: &str) -> Result<ReviewSession, StoreError> {
        Ok(self.slot(id)?.lock().unwrap().session.clone())
    }

    /// Record a decision on a displayed term.
    pub fn decide(&self, id: &str, req: DecisionRequest, dictionary: &Dictionary) -> Result<ReviewSession, StoreError> {
        let slot = self.slot(id)?;
        let mut slot = slot.lock().unwrap();
        if slot.session.status == Status::Validated {
            return Err(StoreError::Validated(id.to_string()));
        }
        if !slot.session.displayed_codes().any(|c| c == req.target_llt_code) {
            return Err(StoreError::Invalid(format!(
                "{} is not a displayed term of this session",
                req.target_llt_code
            )));
        }
        match (req.action, &req.replacement_llt_code) {
            (Action::Replace, None) => return Err(StoreError::Invalid("replace needs replacement_llt_code".into())),
            (Action::Replace, Some(code)) if dictionary.by_code(code).is_none() => {
                return Err(StoreError::Invalid(format!("{code} is not in the dictionary")))
            }
            (Action::Accept | Action::Reject, Some(_)) => {
                return Err(StoreError::Invalid(
                    "replacement_llt_code is only allowed with replace".into(),
                ))
            }
            _ => {}
        }
        let decision = Decision {
            target_llt_code: req.target_llt_code,
            action: req.action,
            replacement_llt_code: req.replacement_llt_code,
            decided_at: Utc::now(),
        };
        if let Some(log) = slot.log.as_mut() {
            append(
                log,
                &Event::Decision {
                    decision: decision.clone(),
                },
            )?;
        }
        slot.session.decisions.push(decision);
        Ok(slot.session.clone())
    }

    /// Compute the final set and freeze the session.
    pub fn validate(&self, id: &str, dictionary: &Dictionary) -> Result<ReviewSession, StoreError> {
        let slot = self.slot(id)?;
        let mut slot = slot.lock().unwrap();
        if slot.session.status == Status::Validated {
            return Err(StoreError::Validated(id.to_string()));
        }
        let codes = resolve_final_codes(slot.session.displayed_codes(), &slot.session.decisions)
            .map_err(StoreError::Undecided)?;
        let final_set = codes
            .into_iter()
            .map(|(code, origin)| {
                let proposed = slot.session.proposal.selected.iter().find(|s| s.llt_code == code);
                let (llt_text, pt_code, pt_text) = match (origin, proposed, dictionary.by_code(&code)) {
                    (Origin::Accepted, Some(s), _) => (s.llt_text.clone(), s.pt_code.clone(), s.pt_text.clone()),
                    (_, _, Some(t)) => (t.text.clone(), t.pt_code.clone(), t.pt_text.clone()),
                    _ => return Err(StoreError::Invalid(format!("{code} is not in the dictionary"))),
                };
                Ok(FinalTerm {
                    llt_code: code,
                    llt_text,
                    pt_code,
                    pt_text,
                    origin,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let validated_at = Utc::now();
        if let Some(log) = slot.log.as_mut() {
            append(
                log,
                &Event::Validated {
                    validated_at,
                    final_set: final_set.clone(),
                },
            )?;
        }
        slot.session.status = Status::Validated;
        slot.session.validated_at = Some(validated_at);
        slot.session.final_set = Some(final_set);
        Ok(slot.session.clone())
    }

    fn slot(&self, id: &str) -> Result<Arc<Mutex<Slot>>, StoreError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| StoreError::NotFound(id.to_string()))
    }
}

fn session_path(dir: &Path, id: &str) -> PathBuf {
    dir.join("sessions").join(format!("{id}.jsonl"))
}

fn append<T: Serialize>(file: &mut File, value: &T) -> io::Result<()> {
    let mut line = serde_json::to_vec(value)?;
    line.push(b'\n');
    file.write_all(&line)?;
    file.sync_data()
}

/// Open for appending after cutting the file to `good` bytes.
fn open_append(path: &Path, good: u64) -> io::Result<File> {
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    if file.metadata()?.len() != good {
        file.set_len(good)?;
        file.sync_data()?;
    }
    Ok(file)
}

/// Parse a JSON-lines file. Returns the records and the byte length of the
/// intact prefix; only the final line may be torn.
fn read_lines<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(Vec<T>, u64), StoreError> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok((Vec::new(), 0)),
        Err(e) => return Err(e.into()),
    };
    let mut out = Vec::new();
    let mut good = 0usize;
    let mut rest = &bytes[..];
    let mut line_no = 0;
    while !rest.is_empty() {
        line_no += 1;
        let (line, complete) = match rest.iter().position(|&b| b == b'\n') {
            Some(n) => (&rest[..n], true),
            None => (rest, false),
        };
        let consumed = line.len() + usize::from(complete);
        match serde_json::from_slice::<T>(line) {
            Ok(v) if complete => out.push(v),
            // torn tail
            _ if consumed == rest.len() => break,
            Ok(_) => unreachable!("an incomplete line is always the last"),
            Err(e) => {
                return Err(StoreError::Corrupt {
                    path: path.to_owned(),
                    line: line_no,
                    message: e.to_string(),
                })
            }
        }
        good += consumed;
        rest = &rest[consumed..];
    }
    Ok((out, good as u64))
}

fn fold(events: Vec<Event>, path: &Path) -> Result<Option<ReviewSession>, StoreError> {
    let mut events = events.into_iter();
    let Some(first) = events.next() else {
        return Ok(None);
    };
    let corrupt = |message: &str| StoreError::Corrupt {
        path: path.to_owned(),
        line: 0,
        message: message.to_string(),
    };
    let Event::Created { session } = first else {
        return Err(corrupt("log does not start with a created event"));
    };
    let mut session = *session;
    for event in events {
        match event {
            Event::Created { .. } => return Err(corrupt("second created event")),
            Event::Decision { decision } => session.decisions.push(decision),
            Event::Validated {
                validated_at,
                final_set,
            } => {
                session.status = Status::Validated;
                session.validated_at = Some(validated_at);
                session.final_set = Some(final_set);
            }
        }
    }
    Ok(Some(session))
}
