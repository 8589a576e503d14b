//! Review sessions: a proposal, the reviewer's decisions, the final set.

use adrcode::encoder::SelectedTerm;
use adrcode::{encode_detailed, DictionaryBundle, EncoderConfig};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::negation::{NegationScanner, NegationWarning};

/// A surviving description token as the review screen shows it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenView {
    pub surface: String,
    pub stem: String,
    pub start: usize,
    pub end: usize,
    /// Marked by the release step (any selected term, shown or not).
    pub covered: bool,
    /// Displayed terms this token voted for.
    pub matched_by: Vec<String>,
    /// Every displayed term it voted for lacks the surface word, so the
    /// match came through stemming only.
    pub stem_only: bool,
}

/// What `/encode` returns and what a session is opened on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proposal {
    pub dictionary_version: String,
    /// Released terms in release order, cut to the display cap.
    pub selected: Vec<SelectedTerm>,
    pub truncated: bool,
    pub total_selected: usize,
    pub tokens: Vec<TokenView>,
    pub negations: Vec<NegationWarning>,
}

/// Encode `text` and shape it for review. Also returns the uncapped list.
pub fn propose(
    text: &str,
    bundle: &DictionaryBundle,
    config: &EncoderConfig,
    negations: &NegationScanner,
) -> (Proposal, Vec<SelectedTerm>) {
    let enc = encode_detailed(text, bundle, config);
    let shown = enc.result.capped(config.display_cap);
    let tokens = enc
        .tokens
        .iter()
        .enumerate()
        .map(|(i, tok)| {
            let voted: Vec<&SelectedTerm> = shown.selected.iter().filter(|s| s.voters.contains(&i)).collect();
            let stem_only = !voted.is_empty()
                && voted.iter().all(|s| {
                    bundle
                        .dictionary()
                        .by_code(&s.llt_code)
                        .is_some_and(|t| !t.words.contains(&tok.surface))
                });
            TokenView {
                surface: tok.surface.clone(),
                stem: tok.stem.clone(),
                start: tok.span.start,
                end: tok.span.end,
                covered: enc.result.covered_tokens[i],
                matched_by: voted.iter().map(|s| s.llt_code.clone()).collect(),
                stem_only,
            }
        })
        .collect();
    let proposal = Proposal {
        dictionary_version: bundle.version().to_string(),
        total_selected: enc.result.selected.len(),
        truncated: shown.truncated,
        selected: shown.selected,
        tokens,
        negations: negations.scan(text),
    };
    (proposal, enc.result.selected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Accept,
    Reject,
    Replace,
}

/// Request body of a decision.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionRequest {
    pub target_llt_code: String,
    pub action: Action,
    #[serde(default)]
    pub replacement_llt_code: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub target_llt_code: String,
    pub action: Action,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replacement_llt_code: Option<String>,
    pub decided_at: DateTime<Utc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Open,
    Validated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Accepted,
    Replacement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalTerm {
    pub llt_code: String,
    pub llt_text: String,
    pub pt_code: String,
    pub pt_text: String,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewSession {
    pub session_id: String,
    pub description: String,
    pub status: Status,
    pub created_at: DateTime<Utc>,
    #[serde(default)]
    pub validated_at: Option<DateTime<Utc>>,
    pub proposal: Proposal,
    /// Full release list; only `proposal.selected` is up for review.
    pub all_selected: Vec<SelectedTerm>,
    pub decisions: Vec<Decision>,
    #[serde(default)]
    pub final_set: Option<Vec<FinalTerm>>,
}

impl ReviewSession {
    pub fn displayed_codes(&self) -> impl Iterator<Item = &str> {
        self.proposal.selected.iter().map(|s| s.llt_code.as_str())
    }
}

/// Final codes from the decision log alone: displayed terms in display
/// order, each resolved by its latest decision. Err lists undecided targets.
pub fn resolve_final_codes<'a>(
    displayed: impl IntoIterator<Item = &'a str>,
    decisions: &[Decision],
) -> Result<Vec<(String, Origin)>, Vec<String>> {
    let mut out: Vec<(String, Origin)> = Vec::new();
    let mut undecided = Vec::new();
    for code in displayed {
        let Some(last) = decisions.iter().rev().find(|d| d.target_llt_code == code) else {
            undecided.push(code.to_string());
            continue;
        };
        let pick = match last.action {
            Action::Accept => Some((code.to_string(), Origin::Accepted)),
            Action::Reject => None,
            Action::Replace => last.replacement_llt_code.clone().map(|c| (c, Origin::Replacement)),
        };
        if let Some((c, origin)) = pick {
            if !out.iter().any(|(x, _)| *x == c) {
                out.push((c, origin));
            }
        }
    }
    if undecided.is_empty() {
        Ok(out)
    } else {
        Err(undecided)
    }
}
