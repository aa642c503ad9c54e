use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AnnotationSet, Extent, Labels, Layer, LayerName, NullInstantiation, SpanLabel, Status};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Approve,
    Edit,
    Reject,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::Approve, Action::Edit, Action::Reject];

    pub fn as_str(self) -> &'static str {
        match self {
            Action::Approve => "approve",
            Action::Edit => "edit",
            Action::Reject => "reject",
        }
    }

    pub fn parse(s: &str) -> Option<Action> {
        match s {
            "approve" => Some(Action::Approve),
            "edit" => Some(Action::Edit),
            "reject" => Some(Action::Reject),
            _ => None,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The review state machine.
///
/// | from     | approve  | edit   | reject   |
/// |----------|----------|--------|----------|
/// | AUTO     | AUTO_APP | MANUAL | REJECTED |
/// | AUTO_APP | -        | MANUAL | -        |
/// | MANUAL   | -        | MANUAL | -        |
/// | REJECTED | -        | -      | -        |
pub fn transition(status: &Status, action: Action) -> Result<Status> {
    use Action::*;
    match (status, action) {
        (Status::Auto, Approve) => Ok(Status::AutoApproved),
        (Status::Auto | Status::AutoApproved | Status::Manual, Edit) => Ok(Status::Manual),
        (Status::Auto, Reject) => Ok(Status::Rejected),
        _ => Err(Error::IllegalTransition {
            status: status.to_string(),
            action: action.to_string(),
        }),
    }
}

/// A copy of `set` with its status advanced by `action`.
pub fn transition_status(set: &AnnotationSet, action: Action) -> Result<AnnotationSet> {
    let status = transition(&set.status, action)?;
    Ok(AnnotationSet { status, ..set.clone() })
}

fn fe_labels_mut(set: &mut AnnotationSet) -> &mut Vec<SpanLabel> {
    if set.layer(&LayerName::Fe, 1).is_none() {
        set.layers.insert(0, Layer::spans(LayerName::Fe, Vec::new()));
    }
    match &mut set.layer_mut(&LayerName::Fe, 1).expect("FE layer present").labels {
        Labels::Spans(labels) => labels,
        Labels::Tokens(_) => unreachable!("FE layers hold span labels"),
    }
}

/// Mark `fe_name` as null-instantiated on the rank-1 FE layer, replacing an
/// earlier mark for the same element.
pub fn set_null_instantiation(set: &AnnotationSet, fe_name: &str, itype: NullInstantiation) -> Result<AnnotationSet> {
    let mut out = set.clone();
    let labels = fe_labels_mut(&mut out);
    if labels
        .iter()
        .any(|l| l.name == fe_name && matches!(l.extent, Extent::Span(_)))
    {
        return Err(Error::AlreadyRealized(fe_name.to_string()));
    }
    match labels.iter_mut().find(|l| l.name == fe_name) {
        Some(existing) => existing.extent = Extent::Null(itype),
        None => labels.push(SpanLabel::null(fe_name, itype)),
    }
    Ok(out)
}

/// Replace the labels of the rank-1 span layer `name`, adding the layer at
/// the end when it does not exist yet.
pub fn replace_span_layer(set: &AnnotationSet, name: LayerName, labels: Vec<SpanLabel>) -> AnnotationSet {
    let mut out = set.clone();
    match out.layer_mut(&name, 1) {
        Some(layer) => layer.labels = Labels::Spans(labels),
        None => out.layers.push(Layer::spans(name, labels)),
    }
    out
}
