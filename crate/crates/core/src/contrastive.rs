//! Cross-language comparison of approved annotations: pairing, the
//! frame-shift table, shift classification and framing parallelism.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

use crate::annotation::AnnotationSet;
use crate::corpus::Corpus;
use crate::diagnostic::{Diagnostic, Location};
use crate::error::{Error, Result};
use crate::lexicon::{FrameLexicon, FrameRelation, RelationKind};
use crate::text::Lang;

pub const UNPAIRED: &str = "CON001";
pub const INVALID_PAIRING: &str = "CON002";
pub const MISSING_FRAME: &str = "CON003";
pub const ORPHAN_SET: &str = "CON004";

/// Longest relation path, in edges, for a shift to count as related.
pub const DEFAULT_THRESHOLD: usize = 2;

/// Most example lemmas kept per shift-table row.
pub const MAX_EXAMPLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnotationPair<'a> {
    pub source: &'a AnnotationSet,
    pub target: &'a AnnotationSet,
    pub paragraph: &'a str,
}

/// An explicit cross-reference between a source-language and a
/// target-language annotation set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairingRecord {
    pub source: u64,
    pub target: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingFile {
    #[serde(default)]
    pub pairs: Vec<PairingRecord>,
}

fn usable(set: &AnnotationSet) -> bool {
    set.status.is_approved() && set.frame.is_some()
}

fn pair_order(set: &AnnotationSet) -> (usize, u64) {
    (set.target_span().map_or(usize::MAX, |s| s.start), set.id)
}

/// Pair approved sets paragraph by paragraph. Explicit records win; the
/// rest are matched in order of target position. Anything left over is
/// reported.
pub fn pair_annotations<'a>(
    corpus: &'a Corpus,
    sets: &'a [AnnotationSet],
    src: &Lang,
    tgt: &Lang,
    records: &[PairingRecord],
) -> (Vec<AnnotationPair<'a>>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let mut by_sentence: HashMap<u64, Vec<&AnnotationSet>> = HashMap::new();
    for set in sets {
        if !set.status.is_approved() {
            continue;
        }
        if corpus.sentence(set.sentence_id).is_none() {
            diags.push(Diagnostic::warning(
                ORPHAN_SET,
                Location::set(set.id),
                format!("sentence {} is not in the corpus", set.sentence_id),
            ));
            continue;
        }
        if set.frame.is_none() {
            diags.push(Diagnostic::warning(
                MISSING_FRAME,
                Location::set(set.id),
                "approved set has no frame",
            ));
            continue;
        }
        by_sentence.entry(set.sentence_id).or_default().push(set);
    }

    // set id -> (paragraph key, side)
    let mut placement: HashMap<u64, (usize, bool)> = HashMap::new();
    let mut paragraphs: Vec<(&str, Vec<&AnnotationSet>, Vec<&AnnotationSet>)> = Vec::new();
    for doc in &corpus.documents {
        for para in &doc.paragraphs {
            let side = |lang: &Lang| -> Vec<&AnnotationSet> {
                let mut v: Vec<&AnnotationSet> = para
                    .version(lang)
                    .and_then(|s| by_sentence.get(&s.id))
                    .map(|v| v.iter().copied().filter(|s| usable(s)).collect())
                    .unwrap_or_default();
                v.sort_by_key(|s| pair_order(s));
                v
            };
            let (s, t) = (side(src), side(tgt));
            if s.is_empty() && t.is_empty() {
                continue;
            }
            let key = paragraphs.len();
            placement.extend(s.iter().map(|x| (x.id, (key, true))));
            placement.extend(t.iter().map(|x| (x.id, (key, false))));
            paragraphs.push((para.pid.as_str(), s, t));
        }
    }

    let mut explicit: BTreeMap<usize, Vec<(u64, u64)>> = BTreeMap::new();
    let mut claimed: HashSet<u64> = HashSet::new();
    for rec in records {
        let valid = match (placement.get(&rec.source), placement.get(&rec.target)) {
            (Some(&(ps, true)), Some(&(pt, false))) if ps == pt => {
                !claimed.contains(&rec.source) && !claimed.contains(&rec.target)
            }
            _ => false,
        };
        if valid {
            claimed.insert(rec.source);
            claimed.insert(rec.target);
            explicit
                .entry(placement[&rec.source].0)
                .or_default()
                .push((rec.source, rec.target));
        } else {
            diags.push(Diagnostic::warning(
                INVALID_PAIRING,
                Location::set(rec.source),
                format!(
                    "pairing {} -> {} does not link unclaimed {src} and {tgt} sets of one paragraph",
                    rec.source, rec.target
                ),
            ));
        }
    }

    let mut pairs = Vec::new();
    for (key, (pid, s, t)) in paragraphs.iter().enumerate() {
        let find = |side: &[&'a AnnotationSet], id: u64| *side.iter().find(|x| x.id == id).expect("placed set");
        for &(a, b) in explicit.get(&key).into_iter().flatten() {
            pairs.push(AnnotationPair {
                source: find(s, a),
                target: find(t, b),
                paragraph: pid,
            });
        }
        let rest_s: Vec<&AnnotationSet> = s.iter().copied().filter(|x| !claimed.contains(&x.id)).collect();
        let rest_t: Vec<&AnnotationSet> = t.iter().copied().filter(|x| !claimed.contains(&x.id)).collect();
        for (a, b) in rest_s.iter().zip(&rest_t) {
            pairs.push(AnnotationPair {
                source: a,
                target: b,
                paragraph: pid,
            });
        }
        let n = rest_s.len().min(rest_t.len());
        for left in rest_s[n..].iter().chain(&rest_t[n..]) {
            diags.push(Diagnostic::warning(
                UNPAIRED,
                Location::set(left.id),
                format!("no counterpart in paragraph {pid}"),
            ));
        }
    }
    (pairs, diags)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftRow {
    pub source_frame: String,
    pub target_frame: String,
    pub count: u64,
    pub example_lemmas: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftTable {
    pub rows: Vec<ShiftRow>,
    pub total: u64,
}

impl ShiftTable {
    pub fn count(&self, source: &str, target: &str) -> u64 {
        self.rows
            .iter()
            .find(|r| r.source_frame == source && r.target_frame == target)
            .map_or(0, |r| r.count)
    }
}

/// Tally pairs by (source frame, target frame). Rows are ordered by count
/// descending, then source and target frame name.
pub fn shift_table(pairs: &[AnnotationPair<'_>]) -> ShiftTable {
    let mut rows: BTreeMap<(&str, &str), ShiftRow> = BTreeMap::new();
    for pair in pairs {
        let (Some(s), Some(t)) = (pair.source.frame.as_deref(), pair.target.frame.as_deref()) else {
            continue;
        };
        let row = rows.entry((s, t)).or_insert_with(|| ShiftRow {
            source_frame: s.to_string(),
            target_frame: t.to_string(),
            count: 0,
            example_lemmas: Vec::new(),
        });
        row.count += 1;
        if let Some(lemma) = pair.target.lemma() {
            if row.example_lemmas.len() < MAX_EXAMPLES && !row.example_lemmas.iter().any(|l| l == lemma) {
                row.example_lemmas.push(lemma.to_string());
            }
        }
    }
    let mut rows: Vec<ShiftRow> = rows.into_values().collect();
    rows.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| a.source_frame.cmp(&b.source_frame))
            .then_with(|| a.target_frame.cmp(&b.target_frame))
    });
    let total = rows.iter().map(|r| r.count).sum();
    ShiftTable { rows, total }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "path", rename_all = "snake_case")]
pub enum ShiftClass {
    Identical,
    Related(Vec<FrameRelation>),
    Unrelated,
}

/// Identical frames, frames linked by a relation chain of at most
/// `threshold` edges, or neither.
pub fn classify_shift(source: &str, target: &str, lexicon: &FrameLexicon, threshold: usize) -> Result<ShiftClass> {
    if !lexicon.contains_frame(source) {
        return Err(Error::UnknownFrame(source.to_string()));
    }
    if !lexicon.contains_frame(target) {
        return Err(Error::UnknownFrame(target.to_string()));
    }
    if source == target {
        return Ok(ShiftClass::Identical);
    }
    Ok(match lexicon.relation_path(source, target, &RelationKind::ALL)? {
        Some(path) if path.len() <= threshold => ShiftClass::Related(path),
        _ => ShiftClass::Unrelated,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedRow {
    #[serde(flatten)]
    pub row: ShiftRow,
    #[serde(flatten)]
    pub class: ShiftClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub rows: Vec<ClassifiedRow>,
    pub total: u64,
    pub same_frame: u64,
    pub related_shift: u64,
    pub unrelated_shift: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub parallelism: Option<Ratio<u64>>,
    pub percentage: Option<u64>,
}

fn ser_ratio<S: Serializer>(value: &Option<Ratio<u64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Fraction {
        numerator: u64,
        denominator: u64,
    }
    value
        .map(|r| Fraction {
            numerator: *r.numer(),
            denominator: *r.denom(),
        })
        .serialize(s)
}

impl AnalysisReport {
    pub fn table(&self) -> ShiftTable {
        ShiftTable {
            rows: self.rows.iter().map(|r| r.row.clone()).collect(),
            total: self.total,
        }
    }

    /// same_frame / total, with the fraction left unreduced.
    pub fn parallelism_parts(&self) -> Result<(u64, u64)> {
        match self.total {
            0 => Err(Error::DivisionUndefined),
            total => Ok((self.same_frame, total)),
        }
    }
}

/// `numer / denom` as a whole percentage, halves rounded up.
pub fn round_percentage(numer: u64, denom: u64) -> Result<u64> {
    if denom == 0 {
        return Err(Error::DivisionUndefined);
    }
    Ok((200 * numer + denom) / (2 * denom))
}

pub fn analysis_report(table: &ShiftTable, lexicon: &FrameLexicon, threshold: usize) -> Result<AnalysisReport> {
    let mut report = AnalysisReport {
        rows: Vec::with_capacity(table.rows.len()),
        total: table.total,
        same_frame: 0,
        related_shift: 0,
        unrelated_shift: 0,
        parallelism: None,
        percentage: None,
    };
    for row in &table.rows {
        let class = classify_shift(&row.source_frame, &row.target_frame, lexicon, threshold)?;
        *match class {
            ShiftClass::Identical => &mut report.same_frame,
            ShiftClass::Related(_) => &mut report.related_shift,
            ShiftClass::Unrelated => &mut report.unrelated_shift,
        } += row.count;
        report.rows.push(ClassifiedRow {
            row: row.clone(),
            class,
        });
    }
    if table.total > 0 {
        report.parallelism = Some(Ratio::new(report.same_frame, table.total));
        report.percentage = Some(round_percentage(report.same_frame, table.total)?);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    Markdown,
}

impl ExportFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(ExportFormat::Csv),
            "markdown" | "md" => Some(ExportFormat::Markdown),
            _ => None,
        }
    }
}

pub const CSV_HEADER: [&str; 4] = ["source_frame", "target_frame", "count", "example_lemmas"];
const TOTAL_LABEL: &str = "Total";

pub fn export_table(report: &AnalysisReport, format: ExportFormat) -> String {
    match format {
        ExportFormat::Csv => export_csv(report),
        ExportFormat::Markdown => export_markdown(report),
    }
}

fn export_csv(report: &AnalysisReport) -> String {
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::NonNumeric)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = "writing to memory";
    w.write_record(CSV_HEADER).expect(io);
    if !report.rows.is_empty() {
        for r in &report.rows {
            let count = r.row.count.to_string();
            let lemmas = r.row.example_lemmas.join(";");
            w.write_record([&r.row.source_frame, &r.row.target_frame, &count, &lemmas])
                .expect(io);
        }
        w.write_record([TOTAL_LABEL, "", &report.total.to_string(), ""])
            .expect(io);
    }
    String::from_utf8(w.into_inner().expect(io)).expect("csv output is UTF-8")
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn export_markdown(report: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str("| Source frame | Target frame | Count | Example lemmas |\n");
    out.push_str("|---|---|---:|---|\n");
    if report.rows.is_empty() {
        return out;
    }
    for r in &report.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            md_cell(&r.row.source_frame),
            md_cell(&r.row.target_frame),
            r.row.count,
            md_cell(&r.row.example_lemmas.join(", "))
        );
    }
    let _ = writeln!(out, "| {TOTAL_LABEL} |  | {} |  |", report.total);
    out.push('\n');
    if let (Some(ratio), Some(pct)) = (report.parallelism, report.percentage) {
        let _ = writeln!(out, "Parallelism: {}/{} ({pct}%)", report.same_frame, report.total);
        debug_assert_eq!(ratio, Ratio::new(report.same_frame, report.total));
    }
    let _ = writeln!(out, "Same frame: {}", report.same_frame);
    let _ = writeln!(out, "Related shifts: {}", report.related_shift);
    let _ = writeln!(out, "Unrelated shifts: {}", report.unrelated_shift);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::{Layer, LayerName, SpanLabel, Status};
    use crate::corpus::{Document, Paragraph, SentenceVersion};
    use crate::lexicon::{Frame, FrameRelation, RelationKind};

    fn corpus() -> Corpus {
        let v = |id, lang: &str| SentenceVersion {
            id,
            language: Lang::from(lang),
            text: "abcdefghij".into(),
        };
        Corpus {
            documents: vec![Document {
                novel: "N".into(),
                chapter: "1".into(),
                paragraphs: vec![
                    Paragraph {
                        pid: "1".into(),
                        versions: vec![v(1, "EN"), v(2, "AR")],
                    },
                    Paragraph {
                        pid: "2".into(),
                        versions: vec![v(3, "EN"), v(4, "AR")],
                    },
                ],
            }],
        }
    }

    fn set(id: u64, sentence: u64, frame: &str, start: usize, status: Status) -> AnnotationSet {
        AnnotationSet {
            id,
            sentence_id: sentence,
            frame: Some(frame.into()),
            lexical_unit: Some(format!("w{id}.v")),
            status,
            created_date: String::new(),
            layers: vec![Layer::spans(
                LayerName::Target,
                vec![SpanLabel::spanning("Target", start, start + 1)],
            )],
        }
    }

    fn lexicon() -> FrameLexicon {
        let f = |n: &str| Frame {
            name: n.into(),
            definition: String::new(),
            frame_elements: vec![],
        };
        FrameLexicon::new(
            vec![],
            vec![f("A"), f("B"), f("C"), f("D")],
            vec![
                FrameRelation::new(RelationKind::InheritsFrom, "B", "A"),
                FrameRelation::new(RelationKind::Uses, "C", "B"),
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn singleton_and_surplus_pairing() {
        let c = corpus();
        let sets = vec![
            set(10, 1, "A", 0, Status::Manual),
            set(11, 2, "A", 0, Status::AutoApproved),
            set(12, 3, "A", 0, Status::Manual),
            set(13, 3, "B", 4, Status::Manual),
            set(14, 4, "B", 2, Status::Manual),
            set(15, 4, "C", 5, Status::Auto),
        ];
        let (pairs, diags) = pair_annotations(&c, &sets, &"EN".into(), &"AR".into(), &[]);
        let ids: Vec<(u64, u64)> = pairs.iter().map(|p| (p.source.id, p.target.id)).collect();
        assert_eq!(ids, [(10, 11), (12, 14)]);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, UNPAIRED);
        assert_eq!(diags[0].location.set_id, Some(13));
    }

    #[test]
    fn explicit_records_take_precedence() {
        let c = corpus();
        let sets = vec![
            set(12, 3, "A", 0, Status::Manual),
            set(13, 3, "B", 4, Status::Manual),
            set(14, 4, "B", 2, Status::Manual),
        ];
        let records = [
            PairingRecord { source: 13, target: 14 },
            PairingRecord { source: 12, target: 99 },
        ];
        let (pairs, diags) = pair_annotations(&c, &sets, &"EN".into(), &"AR".into(), &records);
        assert_eq!(pairs.len(), 1);
        assert_eq!((pairs[0].source.id, pairs[0].target.id), (13, 14));
        let codes: Vec<&str> = diags.iter().map(|d| d.code.as_str()).collect();
        assert_eq!(codes, [INVALID_PAIRING, UNPAIRED]);
    }

    #[test]
    fn orphans_and_frameless_sets_are_reported() {
        let c = corpus();
        let mut frameless = set(1, 1, "A", 0, Status::Manual);
        frameless.frame = None;
        let sets = vec![frameless, set(2, 77, "A", 0, Status::Manual)];
        let (pairs, diags) = pair_annotations(&c, &sets, &"EN".into(), &"AR".into(), &[]);
        assert!(pairs.is_empty());
        let codes: Vec<&str> = diags.iter().map(|d| d.code.as_str()).collect();
        assert_eq!(codes, [MISSING_FRAME, ORPHAN_SET]);
    }

    #[test]
    fn table_sorting_and_examples() {
        let sets: Vec<AnnotationSet> = (0..8)
            .map(|i| set(i, 1, if i < 2 { "B" } else { "A" }, 0, Status::Manual))
            .collect();
        let pairs = vec![
            AnnotationPair {
                source: &sets[0],
                target: &sets[2],
                paragraph: "1",
            },
            AnnotationPair {
                source: &sets[3],
                target: &sets[4],
                paragraph: "1",
            },
            AnnotationPair {
                source: &sets[5],
                target: &sets[6],
                paragraph: "1",
            },
            AnnotationPair {
                source: &sets[1],
                target: &sets[6],
                paragraph: "1",
            },
        ];
        let t = shift_table(&pairs);
        assert_eq!(t.total, 4);
        assert_eq!((t.rows[0].source_frame.as_str(), t.rows[0].count), ("A", 2));
        assert_eq!((t.rows[1].source_frame.as_str(), t.rows[1].count), ("B", 2));
        assert_eq!(t.rows[1].example_lemmas, ["w2", "w6"]);
        assert_eq!(shift_table(&[]), ShiftTable::default());
    }

    #[test]
    fn classification() {
        let lex = lexicon();
        assert_eq!(classify_shift("A", "A", &lex, 2).unwrap(), ShiftClass::Identical);
        assert!(matches!(classify_shift("A", "B", &lex, 2).unwrap(), ShiftClass::Related(p) if p.len() == 1));
        assert!(matches!(classify_shift("A", "C", &lex, 2).unwrap(), ShiftClass::Related(p) if p.len() == 2));
        assert_eq!(classify_shift("A", "C", &lex, 1).unwrap(), ShiftClass::Unrelated);
        assert_eq!(classify_shift("A", "D", &lex, 2).unwrap(), ShiftClass::Unrelated);
        assert!(matches!(classify_shift("A", "Z", &lex, 2), Err(Error::UnknownFrame(f)) if f == "Z"));
    }

    #[test]
    fn percentages_round_half_up() {
        assert_eq!(round_percentage(61, 72).unwrap(), 85);
        assert_eq!(round_percentage(1, 8).unwrap(), 13);
        assert_eq!(round_percentage(1, 3).unwrap(), 33);
        assert_eq!(round_percentage(1, 1).unwrap(), 100);
        assert!(round_percentage(1, 0).is_err());
    }

    #[test]
    fn reports() {
        let lex = lexicon();
        let row = |s: &str, t: &str, n| ShiftRow {
            source_frame: s.into(),
            target_frame: t.into(),
            count: n,
            example_lemmas: vec![],
        };
        let t = ShiftTable {
            rows: vec![row("A", "A", 1)],
            total: 1,
        };
        let r = analysis_report(&t, &lex, 2).unwrap();
        assert_eq!(r.parallelism, Some(Ratio::new(1, 1)));
        assert_eq!(r.percentage, Some(100));

        let empty = analysis_report(&ShiftTable::default(), &lex, 2).unwrap();
        assert_eq!(empty.parallelism, None);
        assert!(matches!(empty.parallelism_parts(), Err(Error::DivisionUndefined)));
        assert_eq!(export_table(&empty, ExportFormat::Csv).lines().count(), 1);
        assert_eq!(export_table(&empty, ExportFormat::Markdown).lines().count(), 2);

        let t = ShiftTable {
            rows: vec![row("A", "A", 3), row("A", "C", 1), row("B", "D", 1)],
            total: 5,
        };
        let r = analysis_report(&t, &lex, 2).unwrap();
        assert_eq!((r.same_frame, r.related_shift, r.unrelated_shift), (3, 1, 1));
        let md = export_table(&r, ExportFormat::Markdown);
        assert!(md.contains("| A | C | 1 |  |"));
        assert!(md.contains("Parallelism: 3/5 (60%)"));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["parallelism"]["numerator"], 3);
        assert_eq!(json["rows"][1]["class"], "related");
    }
}
