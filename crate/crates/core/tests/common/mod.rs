#![allow(dead_code)]

use std::path::PathBuf;

use framealign_core::annotation::{parse_annotations_file, AnnotationSet};
use framealign_core::corpus::{parse_corpus, Corpus};
use framealign_core::lexicon::{load_lexicon, FrameLexicon};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn motion_lexicon() -> FrameLexicon {
    load_lexicon(&read("motion_lexicon.json")).unwrap()
}

pub fn crawl_sentence() -> String {
    read("annotation_sentence.txt").trim_end_matches('\n').to_string()
}

pub fn shift_corpus() -> (Corpus, Vec<AnnotationSet>) {
    let corpus = parse_corpus(&read("shift_workspace/documents/hobbit-ch06.xml")).unwrap();
    let sets = parse_annotations_file(&read("shift_workspace/annotations/hobbit-ch06.xml"), true).unwrap();
    (corpus, sets)
}
