use std::collections::{BTreeSet, HashMap, HashSet};

use super::{FrameLexicon, RelationKind};
use crate::diagnostic::{Diagnostic, Location};

/// Dangling frame reference from a relation or lexical unit.
pub const DANGLING_FRAME: &str = "LEX001";
pub const INHERITANCE_CYCLE: &str = "LEX002";
pub const EXCLUDES_UNKNOWN_FE: &str = "LEX003";
pub const DUPLICATE_FRAME: &str = "LEX004";
pub const DUPLICATE_FE: &str = "LEX005";
pub const DUPLICATE_LU: &str = "LEX006";
pub const SELF_RELATION: &str = "LEX007";
pub const FE_EXCLUDES_ITSELF: &str = "LEX008";
pub const BAD_TYPE_HIERARCHY: &str = "LEX009";
pub const UNKNOWN_SEMANTIC_TYPE: &str = "LEX010";
pub const DUPLICATE_SEMANTIC_TYPE: &str = "LEX011";

/// Check every lexicon invariant. An empty result means the lexicon is sound.
pub fn validate_lexicon(lexicon: &FrameLexicon) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    check_semantic_types(lexicon, &mut out);
    check_frames(lexicon, &mut out);
    check_relations(lexicon, &mut out);
    check_lexical_units(lexicon, &mut out);
    check_inheritance_cycles(lexicon, &mut out);
    out
}

fn check_semantic_types(lexicon: &FrameLexicon, out: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for st in lexicon.semantic_types() {
        if !seen.insert(st.name.as_str()) {
            out.push(Diagnostic::error(
                DUPLICATE_SEMANTIC_TYPE,
                Location::item(format!("semantic type {}", st.name)),
                format!("semantic type `{}` is defined more than once", st.name),
            ));
        }
    }
    for st in lexicon.semantic_types() {
        let mut chain = HashSet::from([st.name.as_str()]);
        let mut at = st;
        while let Some(parent) = &at.parent {
            let Some(next) = lexicon.semantic_type(parent) else {
                out.push(Diagnostic::error(
                    BAD_TYPE_HIERARCHY,
                    Location::item(format!("semantic type {}", at.name)),
                    format!("parent type `{parent}` is not defined"),
                ));
                break;
            };
            if !chain.insert(next.name.as_str()) {
                out.push(Diagnostic::error(
                    BAD_TYPE_HIERARCHY,
                    Location::item(format!("semantic type {}", st.name)),
                    format!("parent chain from `{}` never reaches a root", st.name),
                ));
                break;
            }
            at = next;
        }
    }
}

fn check_frames(lexicon: &FrameLexicon, out: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for frame in lexicon.frames() {
        let at = || Location::item(format!("frame {}", frame.name));
        if !seen.insert(frame.name.as_str()) {
            out.push(Diagnostic::error(
                DUPLICATE_FRAME,
                at(),
                format!("frame `{}` is defined more than once", frame.name),
            ));
        }
        let mut names = HashSet::new();
        for fe in &frame.frame_elements {
            if !names.insert(fe.name.as_str()) {
                out.push(Diagnostic::error(
                    DUPLICATE_FE,
                    at(),
                    format!("frame element `{}` is defined more than once", fe.name),
                ));
            }
        }
        for fe in &frame.frame_elements {
            if let Some(st) = &fe.semantic_type {
                if lexicon.semantic_type(st).is_none() {
                    out.push(Diagnostic::error(
                        UNKNOWN_SEMANTIC_TYPE,
                        Location::item(format!("frame {} FE {}", frame.name, fe.name)),
                        format!("semantic type `{st}` is not defined"),
                    ));
                }
            }
            for excluded in &fe.excludes {
                if *excluded == fe.name {
                    out.push(Diagnostic::error(
                        FE_EXCLUDES_ITSELF,
                        Location::item(format!("frame {} FE {}", frame.name, fe.name)),
                        format!("frame element `{}` excludes itself", fe.name),
                    ));
                } else if !names.contains(excluded.as_str()) {
                    out.push(Diagnostic::error(
                        EXCLUDES_UNKNOWN_FE,
                        Location::item(format!("frame {} FE {}", frame.name, fe.name)),
                        format!("excludes `{excluded}`, which is not an element of this frame"),
                    ));
                }
            }
        }
    }
}

fn check_relations(lexicon: &FrameLexicon, out: &mut Vec<Diagnostic>) {
    for (i, rel) in lexicon.relations().iter().enumerate() {
        let at = || Location::item(format!("relation {i} ({} {} {})", rel.source, rel.kind, rel.target));
        for end in [&rel.source, &rel.target] {
            if !lexicon.contains_frame(end) {
                out.push(Diagnostic::error(
                    DANGLING_FRAME,
                    at(),
                    format!("frame `{end}` is not defined"),
                ));
            }
        }
        if rel.source == rel.target {
            out.push(Diagnostic::error(
                SELF_RELATION,
                at(),
                format!("frame `{}` is related to itself", rel.source),
            ));
        }
    }
}

fn check_lexical_units(lexicon: &FrameLexicon, out: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for lu in lexicon.lexical_units() {
        let at = || Location::item(format!("LU {} {}", lu.language, lu.display_name()));
        if !lexicon.contains_frame(&lu.frame) {
            out.push(Diagnostic::error(
                DANGLING_FRAME,
                at(),
                format!("frame `{}` is not defined", lu.frame),
            ));
        }
        if !seen.insert((&lu.lemma, lu.pos, &lu.language, &lu.frame)) {
            out.push(Diagnostic::error(
                DUPLICATE_LU,
                at(),
                format!("lexical unit is listed more than once for frame `{}`", lu.frame),
            ));
        }
    }
}

/// One finding per strongly connected group of frames in the inheritance graph.
fn check_inheritance_cycles(lexicon: &FrameLexicon, out: &mut Vec<Diagnostic>) {
    let mut parents: HashMap<&str, Vec<&str>> = HashMap::new();
    for rel in lexicon.relations() {
        if rel.kind == RelationKind::InheritsFrom
            && rel.source != rel.target
            && lexicon.contains_frame(&rel.source)
            && lexicon.contains_frame(&rel.target)
        {
            parents.entry(&rel.source).or_default().push(&rel.target);
        }
    }
    let reach = |from: &str| -> HashSet<&str> {
        let mut seen = HashSet::new();
        let mut stack = vec![from];
        while let Some(f) = stack.pop() {
            for &p in parents.get(f).into_iter().flatten() {
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        seen
    };
    let reachable: HashMap<&str, HashSet<&str>> = parents.keys().map(|&f| (f, reach(f))).collect();
    let mut reported: HashSet<&str> = HashSet::new();
    let mut names: Vec<&str> = parents.keys().copied().collect();
    names.sort_unstable();
    for f in names {
        if reported.contains(f) || !reachable[f].contains(f) {
            continue;
        }
        let group: BTreeSet<&str> = reachable[f]
            .iter()
            .copied()
            .filter(|g| reachable.get(g).is_some_and(|r| r.contains(f)))
            .collect();
        reported.extend(group.iter().copied());
        let members: Vec<&str> = group.into_iter().collect();
        out.push(Diagnostic::error(
            INHERITANCE_CYCLE,
            Location::item(format!("frame {}", members[0])),
            format!("inheritance cycle through {}", members.join(", ")),
        ));
    }
}
