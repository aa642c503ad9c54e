use std::collections::{HashMap, HashSet, VecDeque};

use super::{FrameLexicon, FrameRelation, RelationKind};
use crate::error::Result;

impl FrameLexicon {
    /// True when `child` reaches `ancestor` by following `inherits_from`
    /// edges from source to target. Every frame is its own descendant.
    pub fn is_descendant(&self, child: &str, ancestor: &str) -> Result<bool> {
        let start = self.require_frame(child)?;
        self.require_frame(ancestor)?;
        if child == ancestor {
            return Ok(true);
        }
        let mut seen = HashSet::from([child]);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let name = self.frames[f].name.as_str();
            for rel in self.incident_relations(f) {
                if rel.kind != RelationKind::InheritsFrom || rel.source != name {
                    continue;
                }
                if rel.target == ancestor {
                    return Ok(true);
                }
                if seen.insert(rel.target.as_str()) {
                    queue.push_back(self.frame_index[rel.target.as_str()]);
                }
            }
        }
        Ok(false)
    }

    /// Shortest chain of relations of the given kinds linking `from` to `to`,
    /// traversing edges in either direction. At each expansion neighbours are
    /// visited in frame-name order. `Some(vec![])` when `from == to`.
    pub fn relation_path(&self, from: &str, to: &str, kinds: &[RelationKind]) -> Result<Option<Vec<FrameRelation>>> {
        let start = self.require_frame(from)?;
        self.require_frame(to)?;
        if from == to {
            return Ok(Some(Vec::new()));
        }
        // frame name -> edge used to reach it
        let mut parent: HashMap<&str, &FrameRelation> = HashMap::new();
        let mut seen = HashSet::from([from]);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let name = self.frames[f].name.as_str();
            let mut steps: Vec<(&str, &FrameRelation)> = self
                .incident_relations(f)
                .filter(|rel| kinds.contains(&rel.kind))
                .filter_map(|rel| rel.other_end(name).map(|other| (other, rel)))
                .collect();
            steps.sort_by(|a, b| a.0.cmp(b.0).then(a.1.kind.cmp(&b.1.kind)));
            for (next, rel) in steps {
                if !seen.insert(next) {
                    continue;
                }
                parent.insert(next, rel);
                if next == to {
                    return Ok(Some(unwind(&parent, from, to)));
                }
                queue.push_back(self.frame_index[next]);
            }
        }
        Ok(None)
    }
}

fn unwind(parent: &HashMap<&str, &FrameRelation>, from: &str, to: &str) -> Vec<FrameRelation> {
    let mut path = Vec::new();
    let mut at = to;
    while at != from {
        let rel = parent[at];
        path.push(rel.clone());
        at = rel.other_end(at).expect("parent edge touches node");
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::super::{Frame, FrameLexicon, FrameRelation, RelationKind};
    use crate::error::Error;

    fn frames(names: &[&str]) -> Vec<Frame> {
        names
            .iter()
            .map(|n| Frame {
                name: n.to_string(),
                definition: String::new(),
                frame_elements: vec![],
            })
            .collect()
    }

    fn motion() -> FrameLexicon {
        use RelationKind::*;
        FrameLexicon::new(
            vec![],
            frames(&[
                "Motion",
                "Motion_directional",
                "Self_motion",
                "Fleeing",
                "Cause_motion",
                "Island",
            ]),
            vec![
                FrameRelation::new(InheritsFrom, "Motion_directional", "Motion"),
                FrameRelation::new(InheritsFrom, "Self_motion", "Motion"),
                FrameRelation::new(InheritsFrom, "Fleeing", "Self_motion"),
                FrameRelation::new(CausativeOf, "Cause_motion", "Motion"),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn descendant_follows_inheritance_transitively() {
        let lex = motion();
        assert!(lex.is_descendant("Motion_directional", "Motion").unwrap());
        assert!(lex.is_descendant("Fleeing", "Motion").unwrap());
        assert!(lex.is_descendant("Motion", "Motion").unwrap());
        assert!(!lex.is_descendant("Motion", "Fleeing").unwrap());
        // causative_of is not inheritance
        assert!(!lex.is_descendant("Cause_motion", "Motion").unwrap());
    }

    #[test]
    fn unknown_frames_are_reported() {
        let lex = motion();
        assert!(matches!(lex.is_descendant("Nope", "Motion"), Err(Error::UnknownFrame(f)) if f == "Nope"));
        assert!(matches!(
            lex.relation_path("Motion", "Nope", &RelationKind::ALL),
            Err(Error::UnknownFrame(_))
        ));
    }

    #[test]
    fn path_walks_edges_backwards() {
        let lex = motion();
        let path = lex
            .relation_path("Motion", "Fleeing", &[RelationKind::InheritsFrom])
            .unwrap()
            .unwrap();
        assert_eq!(path.len(), 2);
        assert_eq!(path[0].source, "Self_motion");
        assert_eq!(path[1].source, "Fleeing");
        assert_eq!(lex.relation_path("Island", "Island", &[]).unwrap(), Some(vec![]));
        assert_eq!(lex.relation_path("Island", "Motion", &RelationKind::ALL).unwrap(), None);
        assert_eq!(
            lex.relation_path("Cause_motion", "Motion", &[RelationKind::InheritsFrom])
                .unwrap(),
            None
        );
    }

    #[test]
    fn ties_prefer_lexicographically_smaller_frames() {
        use RelationKind::*;
        // A reaches D through B or C; B sorts first.
        let lex = FrameLexicon::new(
            vec![],
            frames(&["A", "C", "B", "D"]),
            vec![
                FrameRelation::new(Uses, "A", "C"),
                FrameRelation::new(Uses, "A", "B"),
                FrameRelation::new(Uses, "C", "D"),
                FrameRelation::new(Uses, "B", "D"),
            ],
            vec![],
        )
        .unwrap();
        let path = lex.relation_path("A", "D", &[Uses]).unwrap().unwrap();
        assert_eq!(path[0].target, "B");
    }
}
