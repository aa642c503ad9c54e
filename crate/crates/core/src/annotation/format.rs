//! Annotation XML.
//!
//! A single set:
//!
//! ```xml
//! <annotationSet ID="199" status="AUTO_APP" cDate="08/12/2014" frameName="Self_motion">
//!   <layer name="FE" rank="1">
//!     <label name="Self_mover" start="5" end="5" feID="285" cBy="AUTO_APP"/>
//!   </layer>
//!   <layer name="SDL" rank="1">
//!     <label Label="VS" Head_ID="0" PoS="V" BAMA=";VERB_PERFECT" Lemma="زحف" form="زحف" Token_ID="1"/>
//!   </layer>
//! </annotationSet>
//! ```
//!
//! A per-document annotations file groups sets by sentence:
//! `<annotations><sentence ID="239"><annotationSet …/></sentence></annotations>`.

use roxmltree::Node;

use super::{
    structural_diagnostics, AnnotationSet, Extent, Labels, Layer, LayerName, NullInstantiation, Span, SpanLabel,
    Status, TokenLabel, MALFORMED_EXTENT, UNKNOWN_STATUS,
};
use crate::diagnostic::{Diagnostic, Location};
use crate::error::{Error, Result};
use crate::xml;

const SPAN_ATTRS: &[&str] = &["name", "start", "end", "itype", "feID", "cBy"];
const TOKEN_ATTRS: &[&str] = &["Label", "Head_ID", "PoS", "BAMA", "Lemma", "form", "Token_ID"];
const SET_ATTRS: &[&str] = &["ID", "status", "cDate", "frameName", "luName"];

fn check_attrs(node: Node<'_, '_>, allowed: &[&str]) -> Result<()> {
    for attr in node.attributes() {
        if !allowed.contains(&attr.name()) {
            return Err(xml::syntax_error(
                node,
                format!("unexpected attribute `{}` on <{}>", attr.name(), node.tag_name().name()),
            ));
        }
    }
    Ok(())
}

fn read_span_label(
    node: Node<'_, '_>,
    set_id: u64,
    layer: &LayerName,
    index: usize,
    problems: &mut Vec<Diagnostic>,
) -> Result<SpanLabel> {
    check_attrs(node, SPAN_ATTRS)?;
    let name = xml::required_attr(node, "name")?.to_string();
    let offset = |attr: &str| -> Result<Option<usize>> {
        node.attribute(attr)
            .map(|v| xml::parse_number(node, attr, v))
            .transpose()
    };
    let itype = match node.attribute("itype") {
        None => None,
        Some(v) => Some(
            NullInstantiation::parse(v)
                .ok_or_else(|| xml::syntax_error(node, format!("unknown itype {v:?}; expected CNI, DNI or INI")))?,
        ),
    };
    let extent = match (offset("start")?, offset("end")?, itype) {
        (Some(start), Some(end), None) => Extent::Span(Span::new(start, end)),
        (None, None, Some(t)) => Extent::Null(t),
        _ => {
            problems.push(Diagnostic::error(
                MALFORMED_EXTENT,
                Location::label(set_id, layer.as_str(), index),
                format!(
                    "label `{name}` (line {}) must have either start and end or an itype",
                    xml::line_of(node)
                ),
            ));
            Extent::Span(Span::new(0, 0))
        }
    };
    let fe_id = node
        .attribute("feID")
        .map(|v| xml::parse_number(node, "feID", v))
        .transpose()?;
    Ok(SpanLabel {
        name,
        extent,
        fe_id,
        created_by: node.attribute("cBy").map(str::to_string),
    })
}

fn read_token_label(node: Node<'_, '_>) -> Result<TokenLabel> {
    check_attrs(node, TOKEN_ATTRS)?;
    let text = |attr: &str| node.attribute(attr).unwrap_or_default().to_string();
    Ok(TokenLabel {
        token_id: xml::parse_number(node, "Token_ID", xml::required_attr(node, "Token_ID")?)?,
        head_id: xml::parse_number(node, "Head_ID", xml::required_attr(node, "Head_ID")?)?,
        label: xml::required_attr(node, "Label")?.to_string(),
        pos: text("PoS"),
        lemma: text("Lemma"),
        form: text("form"),
        morph: text("BAMA"),
    })
}

fn read_set(node: Node<'_, '_>, sentence_id: u64, strict: bool) -> Result<AnnotationSet> {
    xml::expect_name(node, "annotationSet")?;
    check_attrs(node, SET_ATTRS)?;
    let id = xml::parse_number(node, "ID", xml::required_attr(node, "ID")?)?;
    let mut problems = Vec::new();
    let status = Status::from(xml::required_attr(node, "status")?);
    if strict {
        if let Status::Other(s) = &status {
            problems.push(Diagnostic::error(
                UNKNOWN_STATUS,
                Location::set(id),
                format!("unknown status {s:?}"),
            ));
        }
    }
    let mut set = AnnotationSet {
        id,
        sentence_id,
        frame: node.attribute("frameName").map(str::to_string),
        lexical_unit: node.attribute("luName").map(str::to_string),
        status,
        created_date: node.attribute("cDate").unwrap_or_default().to_string(),
        layers: Vec::new(),
    };
    for layer_node in xml::element_children(node)? {
        xml::expect_name(layer_node, "layer")?;
        check_attrs(layer_node, &["name", "rank"])?;
        let name = LayerName::from(xml::required_attr(layer_node, "name")?);
        let rank = match layer_node.attribute("rank") {
            Some(r) => xml::parse_number(layer_node, "rank", r)?,
            None => 1,
        };
        let children = xml::element_children(layer_node)?;
        for child in &children {
            xml::expect_name(*child, "label")?;
        }
        let labels = if name == LayerName::Sdl {
            Labels::Tokens(children.into_iter().map(read_token_label).collect::<Result<_>>()?)
        } else {
            let mut spans = Vec::with_capacity(children.len());
            for (i, child) in children.into_iter().enumerate() {
                spans.push(read_span_label(child, id, &name, i, &mut problems)?);
            }
            Labels::Spans(spans)
        };
        set.layers.push(Layer { name, rank, labels });
    }
    problems.extend(structural_diagnostics(&set));
    if problems.is_empty() {
        Ok(set)
    } else {
        Err(Error::Integrity(problems))
    }
}

/// Parse one `<annotationSet>` fragment belonging to `sentence_id`.
/// Unknown statuses are preserved.
pub fn parse_annotation_set(fragment: &str, sentence_id: u64) -> Result<AnnotationSet> {
    let tree = xml::parse(fragment)?;
    read_set(tree.root_element(), sentence_id, false)
}

/// Parse a per-document annotations file. In strict mode unknown statuses
/// are integrity errors.
pub fn parse_annotations_file(text: &str, strict: bool) -> Result<Vec<AnnotationSet>> {
    let tree = xml::parse(text)?;
    let root = tree.root_element();
    xml::expect_name(root, "annotations")?;
    let mut sets = Vec::new();
    let mut problems = Vec::new();
    for sentence in xml::element_children(root)? {
        xml::expect_name(sentence, "sentence")?;
        let sid = xml::parse_number(sentence, "ID", xml::required_attr(sentence, "ID")?)?;
        for node in xml::element_children(sentence)? {
            match read_set(node, sid, strict) {
                Ok(set) => sets.push(set),
                Err(Error::Integrity(d)) => problems.extend(d),
                Err(e) => return Err(e),
            }
        }
    }
    if problems.is_empty() {
        Ok(sets)
    } else {
        Err(Error::Integrity(problems))
    }
}

fn write_set(out: &mut String, set: &AnnotationSet, indent: &str) {
    let id = set.id.to_string();
    let mut pairs: Vec<(&str, &str)> = vec![
        ("ID", &id),
        ("status", set.status.as_str()),
        ("cDate", &set.created_date),
    ];
    if let Some(f) = &set.frame {
        pairs.push(("frameName", f));
    }
    if let Some(lu) = &set.lexical_unit {
        pairs.push(("luName", lu));
    }
    out.push_str(indent);
    out.push_str("<annotationSet");
    xml::attrs(out, &pairs);
    if set.layers.is_empty() {
        out.push_str("/>\n");
        return;
    }
    out.push_str(">\n");
    for layer in &set.layers {
        let rank = layer.rank.to_string();
        out.push_str(indent);
        out.push_str("  <layer");
        xml::attrs(out, &[("name", layer.name.as_str()), ("rank", &rank)]);
        if layer.labels.is_empty() {
            out.push_str("/>\n");
            continue;
        }
        out.push_str(">\n");
        match &layer.labels {
            Labels::Spans(labels) => {
                for label in labels {
                    write_span_label(out, label, indent);
                }
            }
            Labels::Tokens(tokens) => {
                for token in tokens {
                    write_token_label(out, token, indent);
                }
            }
        }
        out.push_str(indent);
        out.push_str("  </layer>\n");
    }
    out.push_str(indent);
    out.push_str("</annotationSet>\n");
}

fn write_span_label(out: &mut String, label: &SpanLabel, indent: &str) {
    let (start, end) = match label.extent {
        Extent::Span(s) => (s.start.to_string(), s.end.to_string()),
        Extent::Null(_) => (String::new(), String::new()),
    };
    let fe_id = label.fe_id.map(|v| v.to_string());
    let mut pairs: Vec<(&str, &str)> = vec![("name", &label.name)];
    match label.extent {
        Extent::Span(_) => {
            pairs.push(("start", &start));
            pairs.push(("end", &end));
        }
        Extent::Null(t) => pairs.push(("itype", t.as_str())),
    }
    if let Some(v) = &fe_id {
        pairs.push(("feID", v));
    }
    if let Some(v) = &label.created_by {
        pairs.push(("cBy", v));
    }
    out.push_str(indent);
    out.push_str("    <label");
    xml::attrs(out, &pairs);
    out.push_str("/>\n");
}

fn write_token_label(out: &mut String, token: &TokenLabel, indent: &str) {
    let head = token.head_id.to_string();
    let id = token.token_id.to_string();
    out.push_str(indent);
    out.push_str("    <label");
    xml::attrs(
        out,
        &[
            ("Label", &token.label),
            ("Head_ID", &head),
            ("PoS", &token.pos),
            ("BAMA", &token.morph),
            ("Lemma", &token.lemma),
            ("form", &token.form),
            ("Token_ID", &id),
        ],
    );
    out.push_str("/>\n");
}

/// Canonical XML fragment for one set (no declaration, no sentence wrapper).
pub fn serialize_annotation_set(set: &AnnotationSet) -> String {
    let mut out = String::new();
    write_set(&mut out, set, "");
    out
}

/// Canonical annotations file. Sets are grouped by sentence id in ascending
/// order, keeping their relative order within a sentence.
pub fn serialize_annotations_file(sets: &[AnnotationSet]) -> String {
    let mut sorted: Vec<&AnnotationSet> = sets.iter().collect();
    sorted.sort_by_key(|s| s.sentence_id);
    let mut out = String::from(xml::DECLARATION);
    if sorted.is_empty() {
        out.push_str("<annotations/>\n");
        return out;
    }
    out.push_str("<annotations>\n");
    let mut i = 0;
    while i < sorted.len() {
        let sid = sorted[i].sentence_id;
        out.push_str(&format!("  <sentence ID=\"{sid}\">\n"));
        while i < sorted.len() && sorted[i].sentence_id == sid {
            write_set(&mut out, sorted[i], "    ");
            i += 1;
        }
        out.push_str("  </sentence>\n");
    }
    out.push_str("</annotations>\n");
    out
}
