//! In-memory frame lexicon: frames and their elements, semantic types,
//! lexical units per language, and the frame-to-frame relation graph.
//!
//! A [`FrameLexicon`] is immutable once built. [`FrameLexicon::new`] and
//! [`load_lexicon`] only return lexicons that pass [`validate_lexicon`];
//! [`FrameLexicon::assemble`] skips the check so that broken lexicons can be
//! inspected.

mod format;
mod graph;
mod validate;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{normalize_lemma, Lang};

pub use format::{load_lexicon, serialize_lexicon, LexiconDocument};
pub use validate::validate_lexicon;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticType {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coreness {
    Core,
    Peripheral,
    ExtraThematic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameElement {
    pub name: String,
    pub coreness: Coreness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semantic_type: Option<String>,
    #[serde(default)]
    pub excludes: BTreeSet<String>,
}

impl FrameElement {
    pub fn core(name: &str) -> Self {
        FrameElement {
            name: name.to_string(),
            coreness: Coreness::Core,
            semantic_type: None,
            excludes: BTreeSet::new(),
        }
    }

    pub fn is_core(&self) -> bool {
        self.coreness == Coreness::Core
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub name: String,
    #[serde(default)]
    pub definition: String,
    #[serde(default)]
    pub frame_elements: Vec<FrameElement>,
}

impl Frame {
    pub fn element(&self, name: &str) -> Option<&FrameElement> {
        self.frame_elements.iter().find(|fe| fe.name == name)
    }

    pub fn core_elements(&self) -> impl Iterator<Item = &FrameElement> {
        self.frame_elements.iter().filter(|fe| fe.is_core())
    }

    /// Whether either element lists the other in its `excludes` set.
    pub fn mutually_exclusive(&self, a: &str, b: &str) -> bool {
        let lists = |x: &str, y: &str| self.element(x).is_some_and(|fe| fe.excludes.contains(y));
        lists(a, b) || lists(b, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    InheritsFrom,
    Uses,
    HasSubframe,
    CausativeOf,
    InchoativeOf,
    Precedes,
}

impl RelationKind {
    pub const ALL: [RelationKind; 6] = [
        RelationKind::InheritsFrom,
        RelationKind::Uses,
        RelationKind::HasSubframe,
        RelationKind::CausativeOf,
        RelationKind::InchoativeOf,
        RelationKind::Precedes,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationKind::InheritsFrom => "inherits_from",
            RelationKind::Uses => "uses",
            RelationKind::HasSubframe => "has_subframe",
            RelationKind::CausativeOf => "causative_of",
            RelationKind::InchoativeOf => "inchoative_of",
            RelationKind::Precedes => "precedes",
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A typed edge. "Is used by" is stored as a `uses` edge from the user.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrameRelation {
    pub kind: RelationKind,
    pub source: String,
    pub target: String,
}

impl FrameRelation {
    pub fn new(kind: RelationKind, source: &str, target: &str) -> Self {
        FrameRelation {
            kind,
            source: source.to_string(),
            target: target.to_string(),
        }
    }

    pub(crate) fn other_end(&self, frame: &str) -> Option<&str> {
        if self.source == frame {
            Some(&self.target)
        } else if self.target == frame {
            Some(&self.source)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    V,
    N,
    A,
    Adv,
    Prep,
}

impl Pos {
    pub fn as_str(self) -> &'static str {
        match self {
            Pos::V => "v",
            Pos::N => "n",
            Pos::A => "a",
            Pos::Adv => "adv",
            Pos::Prep => "prep",
        }
    }

    pub fn parse(s: &str) -> Option<Pos> {
        match s {
            "v" => Some(Pos::V),
            "n" => Some(Pos::N),
            "a" => Some(Pos::A),
            "adv" => Some(Pos::Adv),
            "prep" => Some(Pos::Prep),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LexicalUnit {
    pub lemma: String,
    pub pos: Pos,
    pub language: Lang,
    pub frame: String,
}

impl LexicalUnit {
    pub fn new(lemma: &str, pos: Pos, language: &str, frame: &str) -> Self {
        LexicalUnit {
            lemma: lemma.to_string(),
            pos,
            language: Lang::from(language),
            frame: frame.to_string(),
        }
    }

    /// FrameNet-style display name, e.g. `fall.v`.
    pub fn display_name(&self) -> String {
        format!("{}.{}", self.lemma, self.pos.as_str())
    }
}

#[derive(Debug, Clone, Default)]
pub struct FrameLexicon {
    semantic_types: Vec<SemanticType>,
    frames: Vec<Frame>,
    relations: Vec<FrameRelation>,
    lexical_units: Vec<LexicalUnit>,
    frame_index: HashMap<String, usize>,
    type_index: HashMap<String, usize>,
    lu_index: HashMap<(Lang, String), Vec<usize>>,
    // relation indices incident to each frame, in input order
    incident: Vec<Vec<usize>>,
}

impl PartialEq for FrameLexicon {
    fn eq(&self, other: &Self) -> bool {
        self.semantic_types == other.semantic_types
            && self.frames == other.frames
            && self.relations == other.relations
            && self.lexical_units == other.lexical_units
    }
}

impl Eq for FrameLexicon {}

impl FrameLexicon {
    /// Build and validate; every error-severity finding is returned at once.
    pub fn new(
        semantic_types: Vec<SemanticType>,
        frames: Vec<Frame>,
        relations: Vec<FrameRelation>,
        lexical_units: Vec<LexicalUnit>,
    ) -> Result<Self> {
        let lexicon = Self::assemble(semantic_types, frames, relations, lexical_units);
        let errors: Vec<_> = validate_lexicon(&lexicon)
            .into_iter()
            .filter(|d| d.is_error())
            .collect();
        if errors.is_empty() {
            Ok(lexicon)
        } else {
            Err(Error::Integrity(errors))
        }
    }

    /// Build indices without checking invariants. The first definition wins
    /// when names are duplicated.
    pub fn assemble(
        semantic_types: Vec<SemanticType>,
        frames: Vec<Frame>,
        relations: Vec<FrameRelation>,
        lexical_units: Vec<LexicalUnit>,
    ) -> Self {
        let mut frame_index = HashMap::new();
        for (i, f) in frames.iter().enumerate() {
            frame_index.entry(f.name.clone()).or_insert(i);
        }
        let mut type_index = HashMap::new();
        for (i, t) in semantic_types.iter().enumerate() {
            type_index.entry(t.name.clone()).or_insert(i);
        }
        let mut lu_index: HashMap<(Lang, String), Vec<usize>> = HashMap::new();
        for (i, lu) in lexical_units.iter().enumerate() {
            let key = (lu.language.clone(), normalize_lemma(&lu.language, &lu.lemma));
            lu_index.entry(key).or_default().push(i);
        }
        let mut incident = vec![Vec::new(); frames.len()];
        for (r, rel) in relations.iter().enumerate() {
            if rel.source == rel.target {
                continue;
            }
            for end in [&rel.source, &rel.target] {
                if let Some(&f) = frame_index.get(end.as_str()) {
                    incident[f].push(r);
                }
            }
        }
        FrameLexicon {
            semantic_types,
            frames,
            relations,
            lexical_units,
            frame_index,
            type_index,
            lu_index,
            incident,
        }
    }

    pub fn semantic_types(&self) -> &[SemanticType] {
        &self.semantic_types
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn relations(&self) -> &[FrameRelation] {
        &self.relations
    }

    pub fn lexical_units(&self) -> &[LexicalUnit] {
        &self.lexical_units
    }

    pub fn frame(&self, name: &str) -> Option<&Frame> {
        self.frame_index.get(name).map(|&i| &self.frames[i])
    }

    pub fn contains_frame(&self, name: &str) -> bool {
        self.frame_index.contains_key(name)
    }

    pub fn semantic_type(&self, name: &str) -> Option<&SemanticType> {
        self.type_index.get(name).map(|&i| &self.semantic_types[i])
    }

    pub(crate) fn require_frame(&self, name: &str) -> Result<usize> {
        self.frame_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownFrame(name.to_string()))
    }

    pub(crate) fn incident_relations(&self, frame: usize) -> impl Iterator<Item = &FrameRelation> {
        self.incident[frame].iter().map(|&r| &self.relations[r])
    }

    /// Lexical units for a lemma in one language, matched after lemma
    /// normalization, optionally filtered by part of speech. Sorted by
    /// frame name, then part of speech.
    pub fn lookup_lus(&self, language: &Lang, lemma: &str, pos: Option<Pos>) -> Vec<&LexicalUnit> {
        let key = (language.clone(), normalize_lemma(language, lemma));
        let mut found: Vec<&LexicalUnit> = self
            .lu_index
            .get(&key)
            .into_iter()
            .flatten()
            .map(|&i| &self.lexical_units[i])
            .filter(|lu| pos.is_none_or(|p| lu.pos == p))
            .collect();
        found.sort_by(|a, b| a.frame.cmp(&b.frame).then(a.pos.cmp(&b.pos)));
        found
    }

    /// Names of all frames the lemma evokes in `language`.
    pub fn evoked_frames(&self, language: &Lang, lemma: &str) -> BTreeSet<String> {
        self.lookup_lus(language, lemma, None)
            .into_iter()
            .map(|lu| lu.frame.clone())
            .collect()
    }
}
