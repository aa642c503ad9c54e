//! Semi-automatic annotation proposals: find frame-evoking targets via the
//! lexicon and emit AUTO annotation sets for review.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::annotation::{AnnotationSet, Labels, Layer, LayerName, Span, SpanLabel, Status, TokenLabel};
use crate::corpus::SentenceVersion;
use crate::diagnostic::{Diagnostic, Location};
use crate::error::{Error, Result};
use crate::lexicon::FrameLexicon;
use crate::text::{char_len, char_slice, find_form, normalize_lemma, tokenize, Lang};

/// Span labels handed to [`attach_precomputed_layers`] under the SDL name.
pub const SDL_NEEDS_TOKENS: &str = "ANN016";

/// Value of `cBy` on machine-proposed labels.
pub const PROPOSER: &str = "AUTO";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetCandidate {
    pub span: Span,
    pub surface: String,
    pub lemma: String,
    pub language: Lang,
    /// Most specific first: by number of lexical units in the frame, then name.
    pub candidate_frames: Vec<String>,
    /// Display name of the first matching lexical unit of each candidate frame.
    pub lexical_units: Vec<String>,
}

fn rank_frames(lexicon: &FrameLexicon, language: &Lang, lemma: &str) -> (Vec<String>, Vec<String>) {
    let mut per_frame: BTreeMap<&str, (usize, String)> = BTreeMap::new();
    for lu in lexicon.lookup_lus(language, lemma, None) {
        per_frame.entry(&lu.frame).or_insert_with(|| (0, lu.display_name())).0 += 1;
    }
    let mut ranked: Vec<(&str, usize, String)> = per_frame.into_iter().map(|(frame, (n, lu))| (frame, n, lu)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    ranked.into_iter().map(|(frame, _, lu)| (frame.to_string(), lu)).unzip()
}

/// Lemma guesses for a surface form, most literal first. English regular
/// inflections are undone; other languages only try the form itself.
pub fn lemma_candidates(language: &Lang, surface: &str) -> Vec<String> {
    let mut out = vec![surface.to_string()];
    let lower = surface.to_lowercase();
    out.push(lower.clone());
    if language.as_str() == "EN" {
        let strip = |suffix: &str| lower.strip_suffix(suffix).map(str::to_string);
        let undouble = |stem: &str| {
            let b = stem.as_bytes();
            (b.len() >= 2 && b[b.len() - 1] == b[b.len() - 2]).then(|| stem[..stem.len() - 1].to_string())
        };
        for (suffix, replacement) in [("ies", "y"), ("ied", "y")] {
            if let Some(stem) = strip(suffix) {
                out.push(stem + replacement);
            }
        }
        for suffix in ["ing", "ed"] {
            if let Some(stem) = strip(suffix) {
                out.push(stem.clone());
                out.push(format!("{stem}e"));
                out.extend(undouble(&stem));
            }
        }
        for suffix in ["es", "s", "d"] {
            if let Some(stem) = strip(suffix) {
                out.push(stem);
            }
        }
    }
    out.retain(|c| !c.is_empty());
    let mut seen = HashSet::new();
    out.retain(|c| seen.insert(c.clone()));
    out
}

/// Candidate targets in `sentence`. With a token layer, each token whose
/// lemma has a lexical unit in the sentence language becomes a candidate,
/// located by its form; otherwise the text is split on whitespace and
/// punctuation and surface forms are looked up.
pub fn find_targets(
    sentence: &SentenceVersion,
    lexicon: &FrameLexicon,
    tokens: Option<&[TokenLabel]>,
) -> Vec<TargetCandidate> {
    let lang = &sentence.language;
    let text = &sentence.text;
    let mut out = Vec::new();
    match tokens {
        Some(tokens) => {
            let mut ordered: Vec<&TokenLabel> = tokens.iter().collect();
            ordered.sort_by_key(|t| t.token_id);
            let mut taken: Vec<Span> = Vec::new();
            for token in ordered {
                let Some(span) = locate(lang, text, &token.form, &taken) else {
                    continue;
                };
                taken.push(span);
                if token.lemma.is_empty() {
                    continue;
                }
                let (frames, lus) = rank_frames(lexicon, lang, &token.lemma);
                if frames.is_empty() {
                    continue;
                }
                out.push(TargetCandidate {
                    span,
                    surface: char_slice(text, span.start, span.end).unwrap_or_default(),
                    lemma: normalize_lemma(lang, &token.lemma),
                    language: lang.clone(),
                    candidate_frames: frames,
                    lexical_units: lus,
                });
            }
            out.sort_by_key(|c| c.span);
        }
        None => {
            for word in tokenize(text) {
                let hit = lemma_candidates(lang, &word.text).into_iter().find_map(|lemma| {
                    let (frames, lus) = rank_frames(lexicon, lang, &lemma);
                    (!frames.is_empty()).then_some((lemma, frames, lus))
                });
                if let Some((lemma, frames, lus)) = hit {
                    out.push(TargetCandidate {
                        span: Span::new(word.start, word.end),
                        surface: word.text,
                        lemma: normalize_lemma(lang, &lemma),
                        language: lang.clone(),
                        candidate_frames: frames,
                        lexical_units: lus,
                    });
                }
            }
        }
    }
    out
}

/// First occurrence of `form` not overlapping an already located token.
fn locate(lang: &Lang, text: &str, form: &str, taken: &[Span]) -> Option<Span> {
    let mut from = 0;
    loop {
        let (start, end) = find_form(lang, text, form, from)?;
        let span = Span::new(start, end);
        if !taken.iter().any(|t| t.overlaps(&span)) {
            return Some(span);
        }
        from = start + 1;
    }
}

fn check_span(span: Span, text: &str) -> Result<()> {
    let len = char_len(text);
    if span.fits(len) {
        Ok(())
    } else {
        Err(Error::SpanOutOfBounds {
            start: span.start,
            end: span.end,
            len,
        })
    }
}

/// One AUTO set per candidate frame, with ids counting up from `next_id`.
/// FE, GF and PT layers are left empty for the annotator.
pub fn propose(
    sentence: &SentenceVersion,
    target: &TargetCandidate,
    next_id: u64,
    created_date: &str,
) -> Result<Vec<AnnotationSet>> {
    check_span(target.span, &sentence.text)?;
    let mut target_label = SpanLabel::spanning("Target", target.span.start, target.span.end);
    target_label.created_by = Some(PROPOSER.to_string());
    Ok(target
        .candidate_frames
        .iter()
        .enumerate()
        .map(|(i, frame)| AnnotationSet {
            id: next_id + i as u64,
            sentence_id: sentence.id,
            frame: Some(frame.clone()),
            lexical_unit: target.lexical_units.get(i).cloned(),
            status: Status::Auto,
            created_date: created_date.to_string(),
            layers: vec![
                Layer::spans(LayerName::Fe, Vec::new()),
                Layer::spans(LayerName::Gf, Vec::new()),
                Layer::spans(LayerName::Pt, Vec::new()),
                Layer::spans(LayerName::Target, vec![target_label.clone()]),
            ],
        })
        .collect())
}

/// Append analyzer output (dependency tokens and span layers such as BAMA,
/// AWP, SUMO) at rank 1. Existing layers are left untouched.
pub fn attach_precomputed_layers(
    set: &AnnotationSet,
    sentence_text: &str,
    sdl: Option<Vec<TokenLabel>>,
    span_layers: Vec<(LayerName, Vec<SpanLabel>)>,
) -> Result<AnnotationSet> {
    let mut out = set.clone();
    let mut add = |layer: Layer| -> Result<()> {
        if out.layer(&layer.name, layer.rank).is_some() {
            return Err(Error::DuplicateLayer {
                name: layer.name.to_string(),
                rank: layer.rank,
            });
        }
        out.layers.push(layer);
        Ok(())
    };
    if let Some(tokens) = sdl {
        add(Layer::tokens(tokens))?;
    }
    for (name, labels) in span_layers {
        if name == LayerName::Sdl {
            return Err(Error::Integrity(vec![Diagnostic::error(
                SDL_NEEDS_TOKENS,
                Location::layer(set.id, "SDL"),
                "the SDL layer takes token labels",
            )]));
        }
        for label in &labels {
            if let Some(span) = label.span() {
                check_span(span, sentence_text)?;
            }
        }
        add(Layer {
            name,
            rank: 1,
            labels: Labels::Spans(labels),
        })?;
    }
    Ok(out)
}
