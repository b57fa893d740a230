//! Small text utilities shared across modules.
//!
//! Offsets exposed in public types are *character* offsets (Unicode scalar
//! values), matching what the model service reports. Helpers here convert
//! between those and byte ranges.

/// Number of characters in `s`.
pub fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Byte index of the `n`th character, or `s.len()` when `n` is past the end.
pub fn byte_offset(s: &str, n: usize) -> usize {
    s.char_indices().nth(n).map_or(s.len(), |(i, _)| i)
}

/// Character offset of byte position `b` (which must lie on a char boundary).
pub fn char_offset(s: &str, b: usize) -> usize {
    s[..b].chars().count()
}

/// Slice `s` by character offsets. Returns `None` when out of range.
pub fn char_slice(s: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let mut it = s.char_indices().map(|(i, _)| i).chain(std::iter::once(s.len()));
    let b0 = it.nth(start)?;
    let b1 = if end == start {
        b0
    } else {
        it.nth(end - start - 1)?
    };
    Some(&s[b0..b1])
}

/// First `n` characters of `s`.
pub fn char_prefix(s: &str, n: usize) -> &str {
    &s[..byte_offset(s, n)]
}

/// A word token with its byte range in the source string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub start: usize,
    pub end: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '’' || c == '-'
}

/// Split into word tokens (alphanumerics plus inner apostrophes/hyphens).
pub fn tokens(s: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (start, is_word_char(c)) {
            (None, true) => start = Some(i),
            (Some(st), false) => {
                push_token(s, st, i, &mut out);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(st) = start {
        push_token(s, st, s.len(), &mut out);
    }
    out
}

fn push_token<'a>(s: &'a str, mut start: usize, mut end: usize, out: &mut Vec<Token<'a>>) {
    // Trim leading/trailing joiners so "'quoted'" and "end-" yield bare words.
    let trim = |c: char| c == '\'' || c == '’' || c == '-';
    let raw = &s[start..end];
    let lead = raw.len() - raw.trim_start_matches(trim).len();
    start += lead;
    let raw = &s[start..end];
    end = start + raw.trim_end_matches(trim).len();
    if start < end {
        out.push(Token {
            text: &s[start..end],
            start,
            end,
        });
    }
}

/// Lower-cased word tokens.
pub fn folded_tokens(s: &str) -> Vec<String> {
    tokens(s).into_iter().map(|t| t.text.to_lowercase()).collect()
}

/// Case-fold and collapse whitespace/punctuation so that "Barack  Obama" and
/// "barack obama" compare equal. Underscores count as spaces.
pub fn normalize_name(s: &str) -> String {
    let replaced = s.replace('_', " ");
    folded_tokens(&replaced).join(" ")
}

/// Collapse runs of horizontal whitespace and trim every line; blank lines
/// are squeezed to a single paragraph break.
pub fn squeeze_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut blank_run = false;
    for line in s.lines() {
        let line = line.split_whitespace().collect::<Vec<_>>().join(" ");
        if line.is_empty() {
            blank_run = !out.is_empty();
            continue;
        }
        if !out.is_empty() {
            out.push_str(if blank_run { "\n\n" } else { "\n" });
        }
        blank_run = false;
        out.push_str(&line);
    }
    out
}

/// Whether `needle` (already folded tokens) occurs as a contiguous token run
/// in `hay`. A trailing `*` on a needle token matches any suffix.
pub fn contains_token_seq(hay: &[String], needle: &[String]) -> bool {
    if needle.is_empty() || needle.len() > hay.len() {
        return false;
    }
    hay.windows(needle.len())
        .any(|w| w.iter().zip(needle).all(|(h, n)| token_matches(h, n)))
}

/// Count contiguous occurrences of `needle` in `hay` (see [`contains_token_seq`]).
pub fn count_token_seq(hay: &[String], needle: &[String]) -> usize {
    if needle.is_empty() || needle.len() > hay.len() {
        return 0;
    }
    hay.windows(needle.len())
        .filter(|w| w.iter().zip(needle).all(|(h, n)| token_matches(h, n)))
        .count()
}

fn token_matches(hay: &str, pattern: &str) -> bool {
    match pattern.strip_suffix('*') {
        Some(prefix) => hay.starts_with(prefix),
        None => hay == pattern,
    }
}

/// Cosine similarity; zero vectors compare as 0.
pub fn cosine(a: &[f32], b: &[f32]) -> f64 {
    let mut dot = 0.0f64;
    let mut na = 0.0f64;
    let mut nb = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        dot += *x as f64 * *y as f64;
        na += *x as f64 * *x as f64;
        nb += *y as f64 * *y as f64;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na.sqrt() * nb.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_slicing_handles_multibyte() {
        let s = "Da‘ish fighters";
        assert_eq!(char_slice(s, 0, 6), Some("Da‘ish"));
        assert_eq!(char_slice(s, 7, 15), Some("fighters"));
        assert_eq!(char_slice(s, 7, 16), None);
        assert_eq!(char_slice(s, 3, 3), Some(""));
        assert_eq!(char_prefix(s, 3), "Da‘");
        assert_eq!(char_offset(s, byte_offset(s, 4)), 4);
    }

    #[test]
    fn tokens_trim_joiners() {
        let t: Vec<_> = tokens("'Hindu' nationalists -- rioted, U.S.-backed")
            .into_iter()
            .map(|t| t.text)
            .collect();
        assert_eq!(t, ["Hindu", "nationalists", "rioted", "U", "S", "backed"]);
    }

    #[test]
    fn normalize_treats_underscore_as_space() {
        assert_eq!(normalize_name("DEFENSE_MINISTER"), "defense minister");
        assert_eq!(normalize_name("  Barack   Obama "), "barack obama");
    }

    #[test]
    fn token_sequence_with_wildcard() {
        let hay = folded_tokens("Protesters rioted in the capital");
        assert!(contains_token_seq(&hay, &["riot*".to_string()]));
        assert!(contains_token_seq(&hay, &["the".into(), "capital".into()]));
        assert!(!contains_token_seq(&hay, &["riot".to_string()]));
        assert_eq!(count_token_seq(&hay, &["the".to_string()]), 1);
    }

    #[test]
    fn squeeze_keeps_paragraphs() {
        assert_eq!(squeeze_whitespace("  a   b \n\n\n c\t d\n"), "a b\n\nc d");
    }
}
