//! Term lookup for the replacement picker.

use adrcode::textprep::words;
use adrcode::Dictionary;
use serde::Serialize;

pub const MAX_LIMIT: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermHit {
    pub llt_code: String,
    pub llt_text: String,
    pub pt_code: String,
    pub pt_text: String,
    /// Word index in the term where the query matched.
    pub position: usize,
}

/// Terms whose word sequence contains the query as a word prefix: all query
/// words but the last match whole words, the last one starts a word.
/// Ranked by match position, then text length, then code.
pub fn search_terms(dictionary: &Dictionary, query: &str, limit: usize) -> Vec<TermHit> {
    let q = words(query);
    let Some((last, head)) = q.split_last() else {
        return Vec::new();
    };
    let mut hits: Vec<(usize, usize, &adrcode::Term)> = dictionary
        .terms()
        .iter()
        .filter_map(|t| {
            let n = head.len() + 1;
            (0..t.words.len().saturating_sub(n - 1))
                .find(|&p| t.words[p..p + head.len()] == *head && t.words[p + head.len()].starts_with(last.as_str()))
                .map(|p| (p, t.text.chars().count(), t))
        })
        .collect();
    hits.sort_by(|a, b| (a.0, a.1, &a.2.code).cmp(&(b.0, b.1, &b.2.code)));
    hits.into_iter()
        .take(limit)
        .map(|(position, _, t)| TermHit {
            llt_code: t.code.clone(),
            llt_text: t.text.clone(),
            pt_code: t.pt_code.clone(),
            pt_text: t.pt_text.clone(),
            position,
        })
        .collect()
}
