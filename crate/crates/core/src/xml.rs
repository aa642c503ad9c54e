//! Shared helpers for the corpus and annotation XML formats.

use std::fmt::Write;

use roxmltree::{Document, Node};

use crate::error::{Error, Result};

pub(crate) const DECLARATION: &str = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";

pub(crate) fn parse(text: &str) -> Result<Document<'_>> {
    let text = text.strip_prefix('\u{FEFF}').unwrap_or(text);
    Document::parse(text).map_err(|e| {
        let pos = e.pos();
        Error::parse(pos.row, pos.col, e.to_string())
    })
}

pub(crate) fn line_of(node: Node<'_, '_>) -> u32 {
    node.document().text_pos_at(node.range().start).row
}

pub(crate) fn syntax_error(node: Node<'_, '_>, message: impl Into<String>) -> Error {
    let pos = node.document().text_pos_at(node.range().start);
    Error::parse(pos.row, pos.col, message)
}

pub(crate) fn expect_name(node: Node<'_, '_>, name: &str) -> Result<()> {
    if node.tag_name().name() == name {
        Ok(())
    } else {
        Err(syntax_error(
            node,
            format!("expected <{name}>, found <{}>", node.tag_name().name()),
        ))
    }
}

/// Child elements, rejecting stray non-whitespace text.
pub(crate) fn element_children<'a, 'i>(node: Node<'a, 'i>) -> Result<Vec<Node<'a, 'i>>> {
    let mut out = Vec::new();
    for child in node.children() {
        if child.is_element() {
            out.push(child);
        } else if child.is_text() && !child.text().unwrap_or("").trim().is_empty() {
            return Err(syntax_error(
                child,
                format!("unexpected text inside <{}>", node.tag_name().name()),
            ));
        }
    }
    Ok(out)
}

pub(crate) fn required_attr<'a>(node: Node<'a, '_>, name: &str) -> Result<&'a str> {
    node.attribute(name).ok_or_else(|| {
        syntax_error(
            node,
            format!("<{}> is missing attribute `{name}`", node.tag_name().name()),
        )
    })
}

pub(crate) fn parse_number<T: std::str::FromStr>(node: Node<'_, '_>, name: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| {
        syntax_error(
            node,
            format!(
                "attribute `{name}` of <{}> is not a valid number: {value:?}",
                node.tag_name().name()
            ),
        )
    })
}

/// Concatenated text content of an element with no element children.
pub(crate) fn text_content(node: Node<'_, '_>) -> Result<String> {
    let mut text = String::new();
    for child in node.children() {
        if child.is_element() {
            return Err(syntax_error(
                child,
                format!("unexpected element inside <{}>", node.tag_name().name()),
            ));
        }
        if let Some(t) = child.text() {
            text.push_str(t);
        }
    }
    Ok(text)
}

/// Escape for a double-quoted attribute value. Whitespace other than the
/// plain space is written as a character reference so that attribute-value
/// normalization leaves it intact.
pub(crate) fn escape_attr(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\t' | '\n' | '\r' => {
                let _ = write!(out, "&#{};", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn escape_text(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

/// Writes `name="value"` pairs with a leading space each.
pub(crate) fn attrs(out: &mut String, pairs: &[(&str, &str)]) {
    for (name, value) in pairs {
        let _ = write!(out, " {name}=\"{}\"", escape_attr(value));
    }
}
