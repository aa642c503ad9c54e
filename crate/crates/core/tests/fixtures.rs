mod common;

use common::*;
use framealign_core::annotation::{
    fe_triples, parse_annotation_set, serialize_annotation_set, validate_annotation, LayerName, Span, SpanLabel,
    Status, TokenLabel, Triple,
};
use framealign_core::corpus::{aligned_pairs, parse_corpus, serialize_corpus, SentenceVersion};
use framealign_core::evocation::{attach_precomputed_layers, find_targets, propose, TargetCandidate};
use framealign_core::{error_count, Error, Lang};

#[test]
fn corpus_fragment_round_trips() {
    let text = read("corpus_fragment.xml");
    let corpus = parse_corpus(&text).unwrap();
    assert_eq!(corpus.documents[0].paragraphs.len(), 2);
    let once = serialize_corpus(&corpus).remove(0);
    let again = parse_corpus(&once).unwrap();
    assert_eq!(again, corpus);
    assert_eq!(serialize_corpus(&again).remove(0), once);
    // trailing space in the French version survives
    let (_, fr) = corpus.documents[0].sentence(241).unwrap();
    assert!(fr.text.ends_with("là "));
}

#[test]
fn corpus_fragment_alignment() {
    let corpus = parse_corpus(&read("corpus_fragment.xml")).unwrap();
    let alignment = aligned_pairs(&corpus, &Lang::from("EN"), &Lang::from("AR"));
    let ids: Vec<(u64, u64)> = alignment.pairs.iter().map(|p| (p.source.id, p.target.id)).collect();
    assert_eq!(ids, [(240, 239), (243, 242)]);
    assert!(alignment.skipped.is_empty());

    let fr = aligned_pairs(&corpus, &Lang::from("EN"), &Lang::from("FR"));
    assert_eq!(fr.pairs.len(), 1);
    assert_eq!(fr.skipped.len(), 1);
    assert_eq!(fr.skipped[0].pid, "p71");
}

fn crawl_set() -> framealign_core::annotation::AnnotationSet {
    parse_annotation_set(&read("annotation_set.xml"), 1).unwrap()
}

#[test]
fn annotation_set_fidelity() {
    let set = crawl_set();
    assert_eq!(set.id, 199);
    assert_eq!(set.status, Status::AutoApproved);
    assert_eq!(set.created_date, "08/12/2014");
    let (triples, diags) = fe_triples(&set);
    assert!(diags.is_empty(), "{diags:?}");
    let t = |fe: &str, gf: &str, pt: &str, s: usize, e: usize| Triple {
        fe: fe.into(),
        gf: Some(gf.into()),
        pt: Some(pt.into()),
        span: Some(Span::new(s, e)),
        itype: None,
    };
    assert_eq!(
        triples,
        [
            t("Self_mover", "SBJp", "NP", 5, 5),
            t("Self_mover", "SBJ", "NP-nom", 7, 16),
            t("Path", "POBJ", "ADVP[ظرف]", 18, 39),
        ]
    );
    assert_eq!(set.layers.len(), 8);
    assert_eq!(set.layer(&LayerName::Sdl, 1).unwrap().token_labels().len(), 6);
    assert_eq!(set.span_labels(&LayerName::Sumo).len(), 3);
    assert_eq!(set.span_labels(&LayerName::Awp)[3].name, "P;CAT:ADVI;TEN:_ ");
}

#[test]
fn annotation_set_round_trip_is_identity() {
    let set = crawl_set();
    let text = serialize_annotation_set(&set);
    let back = parse_annotation_set(&text, 1).unwrap();
    assert_eq!(back, set);
    assert_eq!(serialize_annotation_set(&back), text);
}

#[test]
fn annotation_set_validates_against_sentence() {
    let mut set = crawl_set();
    let sentence = crawl_sentence();
    assert_eq!(sentence.chars().count(), 40);
    assert_eq!(error_count(&validate_annotation(&set, &sentence, None)), 0);
    set.frame = Some("Self_motion".into());
    let diags = validate_annotation(&set, &sentence, Some(&motion_lexicon()));
    assert!(diags.is_empty(), "{diags:?}");
}

#[test]
fn frame_description_graph_and_lus() {
    let lex = motion_lexicon();
    assert!(lex.is_descendant("Motion_directional", "Motion").unwrap());
    assert!(!lex.is_descendant("Motion", "Motion_directional").unwrap());
    let en = Lang::from("EN");
    for lemma in [
        "angle", "descend", "dip", "drop", "fall", "plunge", "plummet", "rise", "slant", "topple",
    ] {
        let frames: Vec<String> = lex.evoked_frames(&en, lemma).into_iter().collect();
        assert_eq!(frames, ["Motion_directional"], "{lemma}");
    }
    let md = lex.frame("Motion_directional").unwrap();
    assert_eq!(md.core_elements().count(), 6);
    assert!(md.mutually_exclusive("Goal", "Area"));
    assert!(md.mutually_exclusive("Area", "Path"));
    assert!(!md.mutually_exclusive("Goal", "Path"));
    assert_eq!(
        md.element("Theme").unwrap().semantic_type.as_deref(),
        Some("Physical_object")
    );
    // diacritic-insensitive Arabic lookup
    let ar = Lang::from("AR");
    assert!(lex.evoked_frames(&ar, "تدحرج").contains("Motion_directional"));
    assert!(lex.evoked_frames(&ar, "انهار").contains("Motion_directional"));
    let path = lex
        .relation_path(
            "Sidereal_appearance",
            "Motion_directional",
            &framealign_core::lexicon::RelationKind::ALL,
        )
        .unwrap()
        .unwrap();
    assert_eq!(path.len(), 1);
}

fn sentence(id: u64, lang: &str, text: &str) -> SentenceVersion {
    SentenceVersion {
        id,
        language: Lang::from(lang),
        text: text.into(),
    }
}

#[test]
fn evocation_on_corpus_sentences() {
    let lex = motion_lexicon();
    let s = sentence(243, "EN", "rubbish and small pebbles rolled away from their feet");
    let found = find_targets(&s, &lex, None);
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].surface, "rolled");
    assert_eq!(found[0].candidate_frames, ["Motion"]);

    let s = sentence(240, "EN", "When they began to go down this,");
    assert!(find_targets(&s, &lex, None).is_empty());

    let s = sentence(242, "AR", "تدحرجت القاذورات و الحصى الصغير من بين أقدامهم");
    let tokens = vec![TokenLabel {
        token_id: 1,
        head_id: 0,
        label: "VS".into(),
        pos: "V".into(),
        lemma: "تدحرج".into(),
        form: "تدحرجت".into(),
        morph: String::new(),
    }];
    let found = find_targets(&s, &lex, Some(&tokens));
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].candidate_frames, ["Motion_directional"]);
}

#[test]
fn proposals_on_the_arabic_sentence() {
    let lex = motion_lexicon();
    let s = sentence(1, "AR", &crawl_sentence());
    let target = TargetCandidate {
        span: Span::new(0, 5),
        surface: "زَحَفَ".into(),
        lemma: "زحف".into(),
        language: Lang::from("AR"),
        candidate_frames: vec!["Self_motion".into()],
        lexical_units: vec!["زَحَفَ.v".into()],
    };
    let sets = propose(&s, &target, 500, "01/01/2026").unwrap();
    assert_eq!(sets.len(), 1);
    let set = &sets[0];
    assert_eq!(set.status, Status::Auto);
    assert_eq!(set.target_span(), Some(Span::new(0, 5)));
    let diags = validate_annotation(set, &s.text, Some(&lex));
    assert_eq!(error_count(&diags), 0, "{diags:?}");
    for name in [LayerName::Fe, LayerName::Gf, LayerName::Pt] {
        assert!(set.layer(&name, 1).unwrap().labels.is_empty());
    }

    let two = TargetCandidate {
        candidate_frames: vec!["Self_motion".into(), "Motion".into()],
        lexical_units: vec!["a.v".into(), "b.v".into()],
        ..target.clone()
    };
    let sets = propose(&s, &two, 7, "").unwrap();
    assert_eq!(sets.len(), two.candidate_frames.len());
    assert_ne!(sets[0].id, sets[1].id);
    assert_eq!(sets[0].target_span(), sets[1].target_span());

    let sumo = vec![
        SpanLabel::spanning("Motion+", 0, 5),
        SpanLabel::spanning("SocialRole+", 7, 16),
        SpanLabel::spanning("Artifact+_Mineral+", 24, 31),
    ];
    let with = attach_precomputed_layers(&sets[0], &s.text, None, vec![(LayerName::Sumo, sumo)]).unwrap();
    assert_eq!(with.span_labels(&LayerName::Sumo).len(), 3);
    assert_eq!(&with.layers[..sets[0].layers.len()], &sets[0].layers[..]);
    let twice = attach_precomputed_layers(
        &with,
        &s.text,
        None,
        vec![(LayerName::Bama, vec![]), (LayerName::Bama, vec![])],
    );
    assert!(matches!(twice, Err(Error::DuplicateLayer { .. })));
}

#[test]
fn every_proposal_over_the_table_corpus_validates() {
    let lex = motion_lexicon();
    let (corpus, _) = shift_corpus();
    let mut next = 1;
    let mut proposed = 0;
    for (_, s) in corpus.documents[0].sentences() {
        for c in find_targets(s, &lex, None) {
            let sets = propose(s, &c, next, "").unwrap();
            assert_eq!(sets.len(), c.candidate_frames.len());
            next += sets.len() as u64;
            for set in &sets {
                let diags = validate_annotation(set, &s.text, Some(&lex));
                assert_eq!(error_count(&diags), 0, "{diags:?}");
                proposed += 1;
            }
        }
    }
    assert!(proposed >= 72, "{proposed}");
}
