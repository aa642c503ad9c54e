//! Stand-off layered annotation of frame-evoking targets.
//!
//! An [`AnnotationSet`] annotates one target in one sentence. Span layers
//! (FE, GF, PT, Target, BAMA, AWP, SUMO and any other name) hold
//! [`SpanLabel`]s with inclusive code-point offsets; the SDL layer holds
//! dependency [`TokenLabel`]s.

mod format;
mod validate;
mod workflow;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use format::{parse_annotation_set, parse_annotations_file, serialize_annotation_set, serialize_annotations_file};
pub use validate::{fe_triples, structural_diagnostics, validate_annotation, Triple};
pub use workflow::{replace_span_layer, set_null_instantiation, transition, transition_status, Action};

pub const INVERTED_SPAN: &str = "ANN001";
pub const MALFORMED_EXTENT: &str = "ANN002";
pub const DUPLICATE_LAYER: &str = "ANN003";
pub const TARGET_LAYER: &str = "ANN004";
pub const SPAN_OUT_OF_BOUNDS: &str = "ANN005";
pub const SDL_ROOT: &str = "ANN006";
pub const SDL_DANGLING_HEAD: &str = "ANN007";
pub const SDL_CYCLE: &str = "ANN008";
pub const MISALIGNED_TRIPLE: &str = "ANN009";
pub const EXCLUDES_VIOLATION: &str = "ANN010";
pub const MISSING_CORE_FE: &str = "ANN011";
pub const UNKNOWN_FE: &str = "ANN012";
pub const UNKNOWN_FRAME: &str = "ANN013";
pub const REALIZED_AND_NULL: &str = "ANN014";
pub const UNKNOWN_STATUS: &str = "ANN015";

/// Null instantiation type of an unexpressed frame element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NullInstantiation {
    #[serde(rename = "CNI")]
    Constructional,
    #[serde(rename = "DNI")]
    Definite,
    #[serde(rename = "INI")]
    Indefinite,
}

impl NullInstantiation {
    pub fn as_str(self) -> &'static str {
        match self {
            NullInstantiation::Constructional => "CNI",
            NullInstantiation::Definite => "DNI",
            NullInstantiation::Indefinite => "INI",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "CNI" => Some(NullInstantiation::Constructional),
            "DNI" => Some(NullInstantiation::Definite),
            "INI" => Some(NullInstantiation::Indefinite),
            _ => None,
        }
    }
}

/// Inclusive code-point range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn fits(&self, len: usize) -> bool {
        self.start <= self.end && self.end < len
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.start, self.end)
    }
}

/// A label either covers a span or marks a null-instantiated element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extent {
    Span(Span),
    Null(NullInstantiation),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpanLabelRepr", into = "SpanLabelRepr")]
pub struct SpanLabel {
    pub name: String,
    pub extent: Extent,
    pub fe_id: Option<i64>,
    pub created_by: Option<String>,
}

impl SpanLabel {
    pub fn spanning(name: &str, start: usize, end: usize) -> Self {
        SpanLabel {
            name: name.to_string(),
            extent: Extent::Span(Span::new(start, end)),
            fe_id: None,
            created_by: None,
        }
    }

    pub fn null(name: &str, itype: NullInstantiation) -> Self {
        SpanLabel {
            name: name.to_string(),
            extent: Extent::Null(itype),
            fe_id: None,
            created_by: None,
        }
    }

    pub fn span(&self) -> Option<Span> {
        match self.extent {
            Extent::Span(s) => Some(s),
            Extent::Null(_) => None,
        }
    }

    pub fn itype(&self) -> Option<NullInstantiation> {
        match self.extent {
            Extent::Span(_) => None,
            Extent::Null(t) => Some(t),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SpanLabelRepr {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    itype: Option<NullInstantiation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fe_id: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    created_by: Option<String>,
}

impl TryFrom<SpanLabelRepr> for SpanLabel {
    type Error = String;

    fn try_from(r: SpanLabelRepr) -> Result<Self, String> {
        let extent = match (r.start, r.end, r.itype) {
            (Some(start), Some(end), None) => Extent::Span(Span::new(start, end)),
            (None, None, Some(t)) => Extent::Null(t),
            _ => return Err(format!("label `{}` needs either start and end or an itype", r.name)),
        };
        Ok(SpanLabel {
            name: r.name,
            extent,
            fe_id: r.fe_id,
            created_by: r.created_by,
        })
    }
}

impl From<SpanLabel> for SpanLabelRepr {
    fn from(l: SpanLabel) -> Self {
        let (start, end, itype) = match l.extent {
            Extent::Span(s) => (Some(s.start), Some(s.end), None),
            Extent::Null(t) => (None, None, Some(t)),
        };
        SpanLabelRepr {
            name: l.name,
            start,
            end,
            itype,
            fe_id: l.fe_id,
            created_by: l.created_by,
        }
    }
}

/// One node of the syntactic dependency layer. Field names on the wire
/// follow the SDL attribute names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenLabel {
    #[serde(rename = "Token_ID")]
    pub token_id: u32,
    #[serde(rename = "Head_ID")]
    pub head_id: u32,
    #[serde(rename = "Label")]
    pub label: String,
    #[serde(rename = "PoS", default)]
    pub pos: String,
    #[serde(rename = "Lemma", default)]
    pub lemma: String,
    #[serde(rename = "form", default)]
    pub form: String,
    #[serde(rename = "BAMA", default)]
    pub morph: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum LayerName {
    Fe,
    Gf,
    Pt,
    Target,
    Sdl,
    Bama,
    Awp,
    Sumo,
    Other(String),
}

impl LayerName {
    pub fn as_str(&self) -> &str {
        match self {
            LayerName::Fe => "FE",
            LayerName::Gf => "GF",
            LayerName::Pt => "PT",
            LayerName::Target => "Target",
            LayerName::Sdl => "SDL",
            LayerName::Bama => "BAMA",
            LayerName::Awp => "AWP",
            LayerName::Sumo => "SUMO",
            LayerName::Other(s) => s,
        }
    }
}

impl From<&str> for LayerName {
    fn from(s: &str) -> Self {
        match s {
            "FE" => LayerName::Fe,
            "GF" => LayerName::Gf,
            "PT" => LayerName::Pt,
            "Target" => LayerName::Target,
            "SDL" => LayerName::Sdl,
            "BAMA" => LayerName::Bama,
            "AWP" => LayerName::Awp,
            "SUMO" => LayerName::Sumo,
            other => LayerName::Other(other.to_string()),
        }
    }
}

impl From<String> for LayerName {
    fn from(s: String) -> Self {
        LayerName::from(s.as_str())
    }
}

impl From<LayerName> for String {
    fn from(n: LayerName) -> Self {
        n.as_str().to_string()
    }
}

impl fmt::Display for LayerName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Labels {
    Tokens(Vec<TokenLabel>),
    Spans(Vec<SpanLabel>),
}

impl Labels {
    pub fn len(&self) -> usize {
        match self {
            Labels::Tokens(t) => t.len(),
            Labels::Spans(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LayerRepr")]
pub struct Layer {
    pub name: LayerName,
    pub rank: u32,
    pub labels: Labels,
}

#[derive(Deserialize)]
struct LayerRepr {
    name: LayerName,
    #[serde(default = "first_rank")]
    rank: u32,
    #[serde(default)]
    labels: Option<Labels>,
}

fn first_rank() -> u32 {
    1
}

impl TryFrom<LayerRepr> for Layer {
    type Error = String;

    fn try_from(r: LayerRepr) -> Result<Self, String> {
        let is_sdl = r.name == LayerName::Sdl;
        let labels = match r.labels {
            None => Labels::empty_for(&r.name),
            Some(l) if l.is_empty() => Labels::empty_for(&r.name),
            Some(Labels::Tokens(_)) if !is_sdl => return Err(format!("layer {} takes span labels", r.name)),
            Some(Labels::Spans(_)) if is_sdl => return Err("layer SDL takes token labels".into()),
            Some(l) => l,
        };
        Ok(Layer {
            name: r.name,
            rank: r.rank,
            labels,
        })
    }
}

impl Labels {
    fn empty_for(name: &LayerName) -> Labels {
        if *name == LayerName::Sdl {
            Labels::Tokens(Vec::new())
        } else {
            Labels::Spans(Vec::new())
        }
    }
}

impl Layer {
    pub fn spans(name: LayerName, labels: Vec<SpanLabel>) -> Self {
        Layer {
            name,
            rank: 1,
            labels: Labels::Spans(labels),
        }
    }

    pub fn tokens(labels: Vec<TokenLabel>) -> Self {
        Layer {
            name: LayerName::Sdl,
            rank: 1,
            labels: Labels::Tokens(labels),
        }
    }

    pub fn span_labels(&self) -> &[SpanLabel] {
        match &self.labels {
            Labels::Spans(s) => s,
            Labels::Tokens(_) => &[],
        }
    }

    pub fn token_labels(&self) -> &[TokenLabel] {
        match &self.labels {
            Labels::Tokens(t) => t,
            Labels::Spans(_) => &[],
        }
    }
}

/// Review status. Unrecognized values read from disk are kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum Status {
    Auto,
    AutoApproved,
    Manual,
    Rejected,
    Other(String),
}

impl Status {
    pub fn as_str(&self) -> &str {
        match self {
            Status::Auto => "AUTO",
            Status::AutoApproved => "AUTO_APP",
            Status::Manual => "MANUAL",
            Status::Rejected => "REJECTED",
            Status::Other(s) => s,
        }
    }

    pub fn is_approved(&self) -> bool {
        matches!(self, Status::AutoApproved | Status::Manual)
    }
}

impl From<&str> for Status {
    fn from(s: &str) -> Self {
        match s {
            "AUTO" => Status::Auto,
            "AUTO_APP" => Status::AutoApproved,
            "MANUAL" => Status::Manual,
            "REJECTED" => Status::Rejected,
            other => Status::Other(other.to_string()),
        }
    }
}

impl From<String> for Status {
    fn from(s: String) -> Self {
        Status::from(s.as_str())
    }
}

impl From<Status> for String {
    fn from(s: Status) -> Self {
        s.as_str().to_string()
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnnotationSet {
    pub id: u64,
    pub sentence_id: u64,
    #[serde(default)]
    pub frame: Option<String>,
    /// Display name of the evoking lexical unit, e.g. `fall.v`.
    #[serde(default)]
    pub lexical_unit: Option<String>,
    pub status: Status,
    #[serde(default)]
    pub created_date: String,
    #[serde(default)]
    pub layers: Vec<Layer>,
}

impl AnnotationSet {
    pub fn layer(&self, name: &LayerName, rank: u32) -> Option<&Layer> {
        self.layers.iter().find(|l| &l.name == name && l.rank == rank)
    }

    pub(crate) fn layer_mut(&mut self, name: &LayerName, rank: u32) -> Option<&mut Layer> {
        self.layers.iter_mut().find(|l| &l.name == name && l.rank == rank)
    }

    /// Span labels of the rank-1 layer with this name; empty when absent.
    pub fn span_labels(&self, name: &LayerName) -> &[SpanLabel] {
        self.layer(name, 1).map_or(&[], Layer::span_labels)
    }

    /// The span of the single Target label, when there is exactly one.
    pub fn target_span(&self) -> Option<Span> {
        let targets: Vec<&Layer> = self.layers.iter().filter(|l| l.name == LayerName::Target).collect();
        match targets.as_slice() {
            [layer] => match layer.span_labels() {
                [label] => label.span(),
                _ => None,
            },
            _ => None,
        }
    }

    /// Lemma part of the lexical unit name (`fall.v` → `fall`).
    pub fn lemma(&self) -> Option<&str> {
        let lu = self.lexical_unit.as_deref()?;
        Some(match lu.rsplit_once('.') {
            Some((lemma, pos)) if crate::lexicon::Pos::parse(pos).is_some() => lemma,
            _ => lu,
        })
    }
}
