mod common;

use common::*;
use framealign_core::annotation::{
    validate_annotation, AnnotationSet, Layer, LayerName, NullInstantiation, SpanLabel, Status, EXCLUDES_VIOLATION,
    INVERTED_SPAN, MISALIGNED_TRIPLE, MISSING_CORE_FE,
};
use framealign_core::lexicon::{validate_lexicon, FrameRelation, LexiconDocument, RelationKind};
use framealign_core::Diagnostic;

const TEXT: &str = "The stone dropped down the slope to the river.";

fn fe_layers(fe: Vec<SpanLabel>) -> Vec<Layer> {
    let spans: Vec<(usize, usize)> = fe.iter().filter_map(|l| l.span()).map(|s| (s.start, s.end)).collect();
    let tags = |name: &str| spans.iter().map(|&(s, e)| SpanLabel::spanning(name, s, e)).collect();
    vec![
        Layer::spans(LayerName::Fe, fe),
        Layer::spans(LayerName::Gf, tags("Dep")),
        Layer::spans(LayerName::Pt, tags("PP")),
        Layer::spans(LayerName::Target, vec![SpanLabel::spanning("Target", 10, 16)]),
    ]
}

/// A Motion_directional set with every core element accounted for.
fn clean() -> AnnotationSet {
    AnnotationSet {
        id: 1,
        sentence_id: 1,
        frame: Some("Motion_directional".into()),
        lexical_unit: Some("drop.v".into()),
        status: Status::Manual,
        created_date: String::new(),
        layers: fe_layers(vec![
            SpanLabel::spanning("Theme", 0, 8),
            SpanLabel::spanning("Path", 18, 31),
            SpanLabel::spanning("Goal", 33, 44),
            SpanLabel::null("Direction", NullInstantiation::Indefinite),
            SpanLabel::null("Source", NullInstantiation::Definite),
        ]),
    }
}

fn codes(diags: &[Diagnostic]) -> Vec<&str> {
    diags.iter().map(|d| d.code.as_str()).collect()
}

fn check(set: &AnnotationSet) -> Vec<Diagnostic> {
    validate_annotation(set, TEXT, Some(&motion_lexicon()))
}

#[test]
fn baseline_is_clean() {
    assert!(check(&clean()).is_empty(), "{:?}", check(&clean()));
}

#[test]
fn inverted_span() {
    let mut set = clean();
    let fe = set.layers.iter_mut().find(|l| l.name == LayerName::Fe).unwrap();
    let mut labels = fe.span_labels().to_vec();
    labels[0] = SpanLabel::spanning("Theme", 8, 0);
    *fe = Layer::spans(LayerName::Fe, labels);
    assert_eq!(codes(&check(&set)), [INVERTED_SPAN]);
}

#[test]
fn misaligned_triple() {
    let mut set = clean();
    let gf = set.layers.iter_mut().find(|l| l.name == LayerName::Gf).unwrap();
    *gf = Layer::spans(
        LayerName::Gf,
        vec![
            SpanLabel::spanning("Ext", 0, 8),
            SpanLabel::spanning("Dep", 18, 30),
            SpanLabel::spanning("Dep", 33, 44),
        ],
    );
    assert_eq!(codes(&check(&set)), [MISALIGNED_TRIPLE]);
}

#[test]
fn goal_and_area_exclude_each_other() {
    let mut set = clean();
    set.layers = fe_layers(vec![
        SpanLabel::spanning("Theme", 0, 8),
        SpanLabel::spanning("Area", 18, 31),
        SpanLabel::spanning("Goal", 33, 44),
        SpanLabel::null("Direction", NullInstantiation::Indefinite),
        SpanLabel::null("Source", NullInstantiation::Definite),
        SpanLabel::null("Path", NullInstantiation::Indefinite),
    ]);
    assert_eq!(codes(&check(&set)), [EXCLUDES_VIOLATION]);
}

#[test]
fn missing_core_element() {
    let mut set = clean();
    set.layers = fe_layers(vec![
        SpanLabel::spanning("Theme", 0, 8),
        SpanLabel::spanning("Path", 18, 31),
        SpanLabel::spanning("Goal", 33, 44),
        SpanLabel::null("Source", NullInstantiation::Definite),
    ]);
    let diags = check(&set);
    assert_eq!(codes(&diags), [MISSING_CORE_FE]);
    assert!(diags[0].message.contains("Direction"));
}

#[test]
fn inheritance_cycle() {
    let mut doc = LexiconDocument::parse(&read("motion_lexicon.json")).unwrap();
    assert!(validate_lexicon(&doc.clone().into()).is_empty());
    doc.relations
        .push(FrameRelation::new(RelationKind::InheritsFrom, "Motion", "Fleeing"));
    let diags = validate_lexicon(&doc.into());
    assert_eq!(codes(&diags), ["LEX002"]);
    for frame in ["Motion", "Self_motion", "Fleeing"] {
        assert!(diags[0].message.contains(frame), "{}", diags[0].message);
    }
}
