use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use super::*;
use crate::diagnostic::{Diagnostic, Location};
use crate::lexicon::FrameLexicon;
use crate::text::char_len;

/// One frame element realization with its grammatical function and phrase
/// type. Null-instantiated elements have no span, GF or PT.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Triple {
    pub fe: String,
    pub gf: Option<String>,
    pub pt: Option<String>,
    pub span: Option<Span>,
    pub itype: Option<NullInstantiation>,
}

/// Checks that need nothing but the set itself: inverted spans and
/// duplicate layers.
pub fn structural_diagnostics(set: &AnnotationSet) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for layer in &set.layers {
        if !seen.insert((&layer.name, layer.rank)) {
            out.push(Diagnostic::error(
                DUPLICATE_LAYER,
                Location::layer(set.id, layer.name.as_str()),
                format!("layer {} at rank {} appears more than once", layer.name, layer.rank),
            ));
        }
        for (i, label) in layer.span_labels().iter().enumerate() {
            if let Some(span) = label.span() {
                if span.start > span.end {
                    out.push(Diagnostic::error(
                        INVERTED_SPAN,
                        Location::label(set.id, layer.name.as_str(), i),
                        format!(
                            "label `{}` ends at {} before it starts at {}",
                            label.name, span.end, span.start
                        ),
                    ));
                }
            }
        }
    }
    out
}

/// Join the rank-1 FE labels to GF and PT labels on identical spans.
pub fn fe_triples(set: &AnnotationSet) -> (Vec<Triple>, Vec<Diagnostic>) {
    let gf = set.span_labels(&LayerName::Gf);
    let pt = set.span_labels(&LayerName::Pt);
    let find =
        |labels: &[SpanLabel], span: Span| labels.iter().find(|l| l.span() == Some(span)).map(|l| l.name.clone());
    let mut triples = Vec::new();
    let mut diagnostics = Vec::new();
    for (i, fe) in set.span_labels(&LayerName::Fe).iter().enumerate() {
        match fe.extent {
            Extent::Null(t) => triples.push(Triple {
                fe: fe.name.clone(),
                gf: None,
                pt: None,
                span: None,
                itype: Some(t),
            }),
            Extent::Span(span) => {
                let g = find(gf, span);
                let p = find(pt, span);
                // inverted spans are reported structurally
                if (g.is_none() || p.is_none()) && span.start <= span.end {
                    let missing = match (&g, &p) {
                        (None, None) => "GF and PT labels",
                        (None, _) => "a GF label",
                        _ => "a PT label",
                    };
                    diagnostics.push(Diagnostic::error(
                        MISALIGNED_TRIPLE,
                        Location::label(set.id, "FE", i),
                        format!("FE `{}` at {span} has no {missing} with the same span", fe.name),
                    ));
                }
                triples.push(Triple {
                    fe: fe.name.clone(),
                    gf: g,
                    pt: p,
                    span: Some(span),
                    itype: None,
                });
            }
        }
    }
    (triples, diagnostics)
}

fn check_target(set: &AnnotationSet, out: &mut Vec<Diagnostic>) {
    let layers: Vec<&Layer> = set.layers.iter().filter(|l| l.name == LayerName::Target).collect();
    let problem = match layers.as_slice() {
        [] => Some("the set has no Target layer".to_string()),
        [layer] => match layer.span_labels() {
            [label] if label.span().is_some() => None,
            [_] => Some("the Target label has no span".to_string()),
            labels => Some(format!("the Target layer has {} labels, expected one", labels.len())),
        },
        many => Some(format!("the set has {} Target layers, expected one", many.len())),
    };
    if let Some(message) = problem {
        out.push(Diagnostic::error(TARGET_LAYER, Location::set(set.id), message));
    }
}

fn check_bounds(set: &AnnotationSet, text_len: usize, out: &mut Vec<Diagnostic>) {
    for layer in &set.layers {
        for (i, label) in layer.span_labels().iter().enumerate() {
            let Some(span) = label.span() else { continue };
            if span.start <= span.end && span.end >= text_len {
                out.push(Diagnostic::error(
                    SPAN_OUT_OF_BOUNDS,
                    Location::label(set.id, layer.name.as_str(), i),
                    format!(
                        "label `{}` at {span} exceeds the sentence length {text_len}",
                        label.name
                    ),
                ));
            }
        }
    }
}

fn check_tokens(set: &AnnotationSet, layer: &Layer, out: &mut Vec<Diagnostic>) {
    let tokens = layer.token_labels();
    if tokens.is_empty() {
        return;
    }
    let at = || Location::layer(set.id, layer.name.as_str());
    let mut heads: HashMap<u32, u32> = HashMap::new();
    for (i, t) in tokens.iter().enumerate() {
        if heads.insert(t.token_id, t.head_id).is_some() {
            out.push(Diagnostic::error(
                SDL_DANGLING_HEAD,
                Location::label(set.id, layer.name.as_str(), i),
                format!("token id {} is used more than once", t.token_id),
            ));
        }
    }
    let roots = tokens.iter().filter(|t| t.head_id == 0).count();
    if roots != 1 {
        out.push(Diagnostic::error(
            SDL_ROOT,
            at(),
            format!("expected exactly one root token (Head_ID 0), found {roots}"),
        ));
    }
    let mut dangling = false;
    for (i, t) in tokens.iter().enumerate() {
        if t.head_id != 0 && !heads.contains_key(&t.head_id) {
            dangling = true;
            out.push(Diagnostic::error(
                SDL_DANGLING_HEAD,
                Location::label(set.id, layer.name.as_str(), i),
                format!("token {} points to missing head {}", t.token_id, t.head_id),
            ));
        }
    }
    if dangling {
        return;
    }
    let cyclic: BTreeSet<u32> = tokens
        .iter()
        .filter(|t| {
            let mut at = t.token_id;
            for _ in 0..=heads.len() {
                match heads.get(&at) {
                    Some(0) | None => return false,
                    Some(&h) => at = h,
                }
            }
            true
        })
        .map(|t| t.token_id)
        .collect();
    if !cyclic.is_empty() {
        let ids: Vec<String> = cyclic.iter().map(u32::to_string).collect();
        out.push(Diagnostic::error(
            SDL_CYCLE,
            at(),
            format!("head links from tokens {} never reach the root", ids.join(", ")),
        ));
    }
}

fn check_frame(set: &AnnotationSet, lexicon: &FrameLexicon, frame_name: &str, out: &mut Vec<Diagnostic>) {
    let Some(frame) = lexicon.frame(frame_name) else {
        out.push(Diagnostic::error(
            UNKNOWN_FRAME,
            Location::set(set.id),
            format!("frame `{frame_name}` is not in the lexicon"),
        ));
        return;
    };
    let labels = set.span_labels(&LayerName::Fe);
    let mut realized: BTreeSet<&str> = BTreeSet::new();
    let mut nulls: BTreeSet<&str> = BTreeSet::new();
    for (i, label) in labels.iter().enumerate() {
        if frame.element(&label.name).is_none() {
            out.push(Diagnostic::error(
                UNKNOWN_FE,
                Location::label(set.id, "FE", i),
                format!("`{}` is not a frame element of {}", label.name, frame.name),
            ));
            continue;
        }
        match label.extent {
            Extent::Span(_) => realized.insert(&label.name),
            Extent::Null(_) => nulls.insert(&label.name),
        };
    }
    for name in realized.intersection(&nulls) {
        out.push(Diagnostic::warning(
            REALIZED_AND_NULL,
            Location::layer(set.id, "FE"),
            format!("`{name}` is both realized and marked as null-instantiated"),
        ));
    }
    let realized_list: Vec<&str> = realized.iter().copied().collect();
    for (i, a) in realized_list.iter().enumerate() {
        for b in &realized_list[i + 1..] {
            if frame.mutually_exclusive(a, b) {
                out.push(Diagnostic::error(
                    EXCLUDES_VIOLATION,
                    Location::layer(set.id, "FE"),
                    format!("`{a}` and `{b}` exclude each other in {}", frame.name),
                ));
            }
        }
    }
    for core in frame.core_elements() {
        let name = core.name.as_str();
        let excused = realized.iter().any(|r| frame.mutually_exclusive(name, r));
        if !realized.contains(name) && !nulls.contains(name) && !excused {
            out.push(Diagnostic::warning(
                MISSING_CORE_FE,
                Location::layer(set.id, "FE"),
                format!(
                    "core element `{name}` of {} is neither realized nor null-instantiated",
                    frame.name
                ),
            ));
        }
    }
}

/// All findings for one set against its sentence text and, when given, the
/// lexicon entry of its frame.
pub fn validate_annotation(
    set: &AnnotationSet,
    sentence_text: &str,
    lexicon: Option<&FrameLexicon>,
) -> Vec<Diagnostic> {
    let mut out = structural_diagnostics(set);
    check_target(set, &mut out);
    check_bounds(set, char_len(sentence_text), &mut out);
    for layer in set.layers.iter().filter(|l| l.name == LayerName::Sdl) {
        check_tokens(set, layer, &mut out);
    }
    out.extend(fe_triples(set).1);
    if let (Some(lexicon), Some(frame)) = (lexicon, set.frame.as_deref()) {
        check_frame(set, lexicon, frame, &mut out);
    }
    out
}
