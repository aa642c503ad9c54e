//! JSON lexicon files.
//!
//! ```json
//! {
//!   "semantic_types": [{"name": "Goal"}],
//!   "frames": [{"name": "Motion_directional", "definition": "...",
//!               "frame_elements": [{"name": "Goal", "coreness": "core",
//!                                   "semantic_type": "Goal", "excludes": ["Area"]}]}],
//!   "relations": [{"kind": "inherits_from", "source": "Motion_directional", "target": "Motion"}],
//!   "lexical_units": [{"lemma": "fall", "pos": "v", "language": "EN", "frame": "Motion_directional"}]
//! }
//! ```

use serde::{Deserialize, Serialize};

use super::{Frame, FrameLexicon, FrameRelation, LexicalUnit, SemanticType};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconDocument {
    #[serde(default)]
    pub semantic_types: Vec<SemanticType>,
    #[serde(default)]
    pub frames: Vec<Frame>,
    #[serde(default)]
    pub relations: Vec<FrameRelation>,
    #[serde(default)]
    pub lexical_units: Vec<LexicalUnit>,
}

impl LexiconDocument {
    pub fn parse(source: &str) -> Result<Self> {
        serde_json::from_str(source).map_err(|e| Error::parse(e.line() as u32, e.column() as u32, e.to_string()))
    }
}

impl From<LexiconDocument> for FrameLexicon {
    fn from(doc: LexiconDocument) -> Self {
        FrameLexicon::assemble(doc.semantic_types, doc.frames, doc.relations, doc.lexical_units)
    }
}

/// Parse a lexicon file and check its integrity.
pub fn load_lexicon(source: &str) -> Result<FrameLexicon> {
    let doc = LexiconDocument::parse(source)?;
    FrameLexicon::new(doc.semantic_types, doc.frames, doc.relations, doc.lexical_units)
}

/// Canonical text form: fixed key order, two-space indent, trailing newline.
pub fn serialize_lexicon(lexicon: &FrameLexicon) -> String {
    let doc = LexiconDocument {
        semantic_types: lexicon.semantic_types().to_vec(),
        frames: lexicon.frames().to_vec(),
        relations: lexicon.relations().to_vec(),
        lexical_units: lexicon.lexical_units().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("lexicon serializes");
    text.push('\n');
    text
}
