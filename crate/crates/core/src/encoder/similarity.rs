//! Letter-pair string distance.
//!
//! Bigrams are taken inside each word separately, so swapping words leaves
//! the distance unchanged.

use crate::textprep;

/// Adjacent letter pairs of every word of `s`, case-folded, sorted.
pub fn letter_bigrams(s: &str) -> Vec<(char, char)> {
    let mut out = Vec::new();
    for word in textprep::words(s) {
        push_word_bigrams(&word, &mut out);
    }
    out.sort_unstable();
    out
}

fn multiset_intersection(a: &[(char, char)], b: &[(char, char)]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Append the adjacent letter pairs of one already lower-cased word.
pub(crate) fn push_word_bigrams(word: &str, out: &mut Vec<(char, char)>) {
    let mut prev = None;
    for c in word.chars() {
        if let Some(p) = prev {
            out.push((p, c));
        }
        prev = Some(c);
    }
}

/// Distance between two bigram multisets; sorts both in place.
pub(crate) fn bigram_set_distance(a: &mut [(char, char)], b: &mut [(char, char)]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => 1.0,
        _ => {
            a.sort_unstable();
            b.sort_unstable();
            let shared = multiset_intersection(a, b);
            1.0 - (2 * shared) as f64 / (a.len() + b.len()) as f64
        }
    }
}

/// `1 - 2|A ∩ B| / (|A| + |B|)` over letter-bigram multisets.
///
/// Two bigram-free strings are at distance 0; exactly one bigram-free string
/// is at distance 1.
pub fn pair_distance(s: &str, r: &str) -> f64 {
    bigram_set_distance(&mut letter_bigrams(s), &mut letter_bigrams(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn night_nacht() {
        assert!((pair_distance("night", "nacht") - 0.75).abs() < 1e-12);
    }

    #[test]
    fn identity_and_disjoint() {
        assert_eq!(pair_distance("shock anafilattico", "shock anafilattico"), 0.0);
        assert_eq!(pair_distance("ab", "cd"), 1.0);
        assert_eq!(pair_distance("", ""), 0.0);
        assert_eq!(pair_distance("", "ab"), 1.0);
    }

    #[test]
    fn word_order_and_case_do_not_matter() {
        assert_eq!(pair_distance("Rash Cutaneo", "cutaneo rash"), 0.0);
    }

    #[test]
    fn bigrams_stay_inside_words() {
        // "ab cd" has {ab, cd}; "abcd" has {ab, bc, cd}
        let d = pair_distance("ab cd", "abcd");
        assert!((d - (1.0 - 4.0 / 5.0)).abs() < 1e-12);
    }

    #[test]
    fn repeated_bigrams_count_as_multiset() {
        // "aaa" -> {aa, aa}; "aa" -> {aa}
        let d = pair_distance("aaa", "aa");
        assert!((d - (1.0 - 2.0 / 3.0)).abs() < 1e-12);
    }
}
