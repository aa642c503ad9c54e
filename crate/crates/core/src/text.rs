//! Language codes, lemma normalization and code-point text helpers.

use std::fmt;

use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Two-letter uppercase language code as used in corpus files (`AR`, `EN`, `FR`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lang(String);

impl Lang {
    pub fn new(code: impl Into<String>) -> Self {
        Lang(code.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_arabic(&self) -> bool {
        self.0.eq_ignore_ascii_case("AR")
    }

    /// Uppercase ASCII letters, exactly two of them.
    pub fn is_well_formed(&self) -> bool {
        self.0.len() == 2 && self.0.bytes().all(|b| b.is_ascii_uppercase())
    }

    /// Script direction for rendering; offsets are always logical.
    pub fn direction(&self) -> &'static str {
        match self.0.as_str() {
            "AR" | "FA" | "HE" | "UR" => "rtl",
            _ => "ltr",
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Lang {
    fn from(s: &str) -> Self {
        Lang(s.to_string())
    }
}

/// Languages accepted without a warning.
pub fn default_languages() -> Vec<Lang> {
    ["AR", "EN", "FR"].into_iter().map(Lang::from).collect()
}

/// The eight harakat (U+064B..=U+0652) plus tatweel (U+0640).
pub fn is_arabic_diacritic(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{0652}' | '\u{0640}')
}

/// Index key for a lemma: NFC, and for Arabic with harakat and tatweel removed.
pub fn normalize_lemma(lang: &Lang, lemma: &str) -> String {
    let nfc: String = lemma.nfc().collect();
    if lang.is_arabic() {
        nfc.chars().filter(|&c| !is_arabic_diacritic(c)).collect()
    } else {
        nfc
    }
}

/// Length in Unicode scalar values; all span offsets count these.
pub fn char_len(text: &str) -> usize {
    text.chars().count()
}

/// Substring by inclusive code-point offsets. `None` when out of range.
pub fn char_slice(text: &str, start: usize, end: usize) -> Option<String> {
    if start > end {
        return None;
    }
    let s: String = text.chars().skip(start).take(end - start + 1).collect();
    if char_len(&s) == end - start + 1 {
        Some(s)
    } else {
        None
    }
}

/// Characters that make up a word for whitespace/punctuation tokenization.
pub(crate) fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining_mark(c) || c == '\u{0640}' || c == '\'' || c == '’'
}

/// One word found by [`tokenize`], with inclusive code-point offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub start: usize,
    pub end: usize,
    pub text: String,
}

/// Split on whitespace and punctuation.
pub fn tokenize(text: &str) -> Vec<Word> {
    let mut words = Vec::new();
    let mut current: Option<(usize, String)> = None;
    for (i, c) in text.chars().enumerate() {
        if is_word_char(c) {
            match &mut current {
                Some((_, buf)) => buf.push(c),
                None => current = Some((i, c.to_string())),
            }
        } else if let Some((start, buf)) = current.take() {
            words.push(Word {
                start,
                end: i - 1,
                text: buf,
            });
        }
    }
    if let Some((start, buf)) = current {
        let end = start + char_len(&buf) - 1;
        words.push(Word { start, end, text: buf });
    }
    words
}

/// Locate `needle` in `haystack` at or after code point `from`, ignoring
/// Arabic diacritics on both sides when `lang` is Arabic. The returned span
/// covers the match in the original text, including diacritics that trail
/// its last letter.
pub fn find_form(lang: &Lang, haystack: &str, needle: &str, from: usize) -> Option<(usize, usize)> {
    let strip = lang.is_arabic();
    let keep = |c: &char| !(strip && is_arabic_diacritic(*c));
    let hay: Vec<(usize, char)> = haystack.chars().enumerate().filter(|(_, c)| keep(c)).collect();
    let pat: Vec<char> = needle.nfc().filter(keep).collect();
    if pat.is_empty() || pat.len() > hay.len() {
        return None;
    }
    let all: Vec<char> = haystack.chars().collect();
    for w in 0..=hay.len() - pat.len() {
        if hay[w].0 < from {
            continue;
        }
        if hay[w..w + pat.len()].iter().map(|(_, c)| *c).eq(pat.iter().copied()) {
            let start = hay[w].0;
            let mut end = hay[w + pat.len() - 1].0;
            while strip && end + 1 < all.len() && is_arabic_diacritic(all[end + 1]) {
                end += 1;
            }
            return Some((start, end));
        }
    }
    None
}
