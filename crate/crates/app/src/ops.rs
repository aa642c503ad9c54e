//! Workspace operations. The CLI and the HTTP service both call these, so a
//! command and its endpoint cannot drift apart.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, MutexGuard};

use framealign_core::annotation::{
    parse_annotations_file, replace_span_layer, set_null_instantiation, transition, transition_status,
    validate_annotation, Action, AnnotationSet, LayerName, NullInstantiation, SpanLabel, TokenLabel,
};
use framealign_core::contrastive::{analysis_report, pair_annotations, shift_table, AnalysisReport, PairingFile};
use framealign_core::corpus::{
    cross_document_diagnostics, ingest_plaintext, read_document, validate_document, Corpus, Document,
};
use framealign_core::evocation::{find_targets, propose as propose_sets, TargetCandidate};
use framealign_core::lexicon::{validate_lexicon, FrameLexicon, LexiconDocument};
use framealign_core::{error_count, Diagnostic, Lang, Location, Severity};
use serde::Serialize;

use crate::error::{AppError, Result};
use crate::workspace::{
    document_name, Workspace, ANNOTATIONS_DIR, DOCUMENTS_DIR, LEXICON_FILE, PAIRINGS_DIR, STATE_FILE, TOKENS_DIR,
};

pub const UNREADABLE_FILE: &str = "WS001";
pub const DANGLING_SENTENCE: &str = "WS002";
pub const DUPLICATE_SET_ID: &str = "WS003";
pub const STALE_COUNTER: &str = "WS004";
pub const BAD_PAIRING: &str = "WS005";

/// Writers take the lock of the document they touch, then the state lock
/// if they allocate ids. Readers take nothing.
#[derive(Debug, Default)]
pub struct Locks {
    documents: Mutex<HashMap<String, Arc<Mutex<()>>>>,
    state: Mutex<()>,
}

impl Locks {
    pub fn document(&self, name: &str) -> Arc<Mutex<()>> {
        let mut map = self.documents.lock().unwrap_or_else(|e| e.into_inner());
        map.entry(name.to_string()).or_default().clone()
    }

    fn state(&self) -> MutexGuard<'_, ()> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }
}

fn hold(lock: &Mutex<()>) -> MutexGuard<'_, ()> {
    lock.lock().unwrap_or_else(|e| e.into_inner())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileDiagnostic {
    pub file: String,
    #[serde(flatten)]
    pub diagnostic: Diagnostic,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub diagnostics: Vec<FileDiagnostic>,
    pub errors: usize,
    pub warnings: usize,
}

impl ValidationReport {
    fn add(&mut self, file: &str, diagnostics: impl IntoIterator<Item = Diagnostic>) {
        for diagnostic in diagnostics {
            match diagnostic.severity {
                Severity::Error => self.errors += 1,
                Severity::Warning => self.warnings += 1,
            }
            self.diagnostics.push(FileDiagnostic {
                file: file.to_string(),
                diagnostic,
            });
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            out.push_str(&format!(
                "{} {} {} {}: {}\n",
                d.diagnostic.severity, d.diagnostic.code, d.file, d.diagnostic.location, d.diagnostic.message
            ));
        }
        out.push_str(&format!("{} errors, {} warnings\n", self.errors, self.warnings));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DocumentSummary {
    pub name: String,
    pub novel: String,
    pub chapter: String,
    pub languages: Vec<Lang>,
    pub paragraphs: usize,
    pub sentences: usize,
    pub sets: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentenceView {
    pub id: u64,
    pub language: Lang,
    pub direction: &'static str,
    pub text: String,
    pub sets: Vec<AnnotationSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParagraphView {
    pub document: String,
    pub pid: String,
    pub versions: Vec<SentenceView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetView {
    pub document: String,
    pub set: AnnotationSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analysis {
    #[serde(flatten)]
    pub report: AnalysisReport,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ingested {
    pub document: String,
    pub paragraphs: usize,
    pub sentences: usize,
}

fn file(dir: &str, name: &str, ext: &str) -> String {
    format!("{dir}/{name}.{ext}")
}

fn unreadable(item: &str, err: &AppError) -> Diagnostic {
    Diagnostic::error(UNREADABLE_FILE, Location::item(item), err.to_string())
}

fn max_set_id(sets: &[AnnotationSet]) -> u64 {
    sets.iter().map(|s| s.id).max().unwrap_or(0)
}

/// A workspace plus the locks that serialize its writers.
#[derive(Debug)]
pub struct Service {
    pub workspace: Workspace,
    locks: Locks,
}

impl Service {
    pub fn new(workspace: Workspace) -> Self {
        Service {
            workspace,
            locks: Locks::default(),
        }
    }

    fn ws(&self) -> &Workspace {
        &self.workspace
    }

    /// Check every file of the workspace. Nothing is written.
    pub fn validate(&self) -> Result<ValidationReport> {
        let ws = self.ws();
        let mut report = ValidationReport::default();

        let lexicon = match ws
            .lexicon_text()
            .map(|t| LexiconDocument::parse(&t).map_err(AppError::from))
        {
            Ok(Ok(doc)) => {
                let lexicon = FrameLexicon::from(doc);
                report.add(LEXICON_FILE, validate_lexicon(&lexicon));
                Some(lexicon)
            }
            Ok(Err(e)) | Err(e) => {
                report.add(LEXICON_FILE, [unreadable(LEXICON_FILE, &e)]);
                None
            }
        };

        let options = ws.config.corpus_options();
        let mut corpus = Corpus::default();
        let mut names = Vec::new();
        for name in ws.document_names()? {
            let path = file(DOCUMENTS_DIR, &name, "xml");
            match ws.document_text(&name).and_then(|t| Ok(read_document(&t)?)) {
                Ok(doc) => {
                    report.add(&path, validate_document(&doc, &options));
                    corpus.documents.push(doc);
                    names.push(name);
                }
                Err(e) => report.add(&path, [unreadable(&path, &e)]),
            }
        }
        report.add(DOCUMENTS_DIR, cross_document_diagnostics(&corpus));
        let documents: HashMap<&str, &Document> = names.iter().map(String::as_str).zip(&corpus.documents).collect();

        let mut set_ids: HashMap<u64, String> = HashMap::new();
        let mut set_documents: HashMap<u64, String> = HashMap::new();
        let mut max_set = 0;
        for name in ws.names_in(ANNOTATIONS_DIR, "xml")? {
            let path = file(ANNOTATIONS_DIR, &name, "xml");
            let Some(text) = ws.annotations_text(&name)? else {
                continue;
            };
            let sets = match parse_annotations_file(&text, ws.config.strict) {
                Ok(sets) => sets,
                Err(framealign_core::Error::Integrity(diags)) => {
                    report.add(&path, diags);
                    continue;
                }
                Err(e) => {
                    report.add(&path, [unreadable(&path, &e.into())]);
                    continue;
                }
            };
            max_set = max_set.max(max_set_id(&sets));
            let doc = documents.get(name.as_str());
            for set in &sets {
                if let Some(first) = set_ids.insert(set.id, path.clone()) {
                    report.add(
                        &path,
                        [Diagnostic::error(
                            DUPLICATE_SET_ID,
                            Location::set(set.id),
                            format!("set id {} is already used in {first}", set.id),
                        )],
                    );
                }
                set_documents.insert(set.id, name.clone());
                match doc.and_then(|d| d.sentence(set.sentence_id)) {
                    Some((_, sentence)) => {
                        report.add(&path, validate_annotation(set, &sentence.text, lexicon.as_ref()));
                    }
                    None => report.add(
                        &path,
                        [Diagnostic::error(
                            DANGLING_SENTENCE,
                            Location::set(set.id),
                            format!("sentence {} is not in document {name}", set.sentence_id),
                        )],
                    ),
                }
            }
        }

        for name in ws.names_in(PAIRINGS_DIR, "json")? {
            let path = file(PAIRINGS_DIR, &name, "json");
            let Some(text) = ws.pairings_text(&name)? else { continue };
            match serde_json::from_str::<PairingFile>(&text) {
                Ok(pairing) => {
                    for (i, record) in pairing.pairs.iter().enumerate() {
                        for id in [record.source, record.target] {
                            if set_documents.get(&id) != Some(&name) {
                                report.add(
                                    &path,
                                    [Diagnostic::error(
                                        BAD_PAIRING,
                                        Location::item(format!("pair {i}")),
                                        format!("set {id} is not an annotation set of document {name}"),
                                    )],
                                );
                            }
                        }
                    }
                }
                Err(e) => report.add(
                    &path,
                    [Diagnostic::error(
                        BAD_PAIRING,
                        Location::item(path.clone()),
                        e.to_string(),
                    )],
                ),
            }
        }

        for name in ws.names_in(TOKENS_DIR, "json")? {
            let path = file(TOKENS_DIR, &name, "json");
            let id: Option<u64> = name.parse().ok();
            let parsed = id
                .ok_or_else(|| AppError::Usage("token files are named by sentence id".into()))
                .and_then(|id| ws.tokens(id));
            if let Err(e) = parsed {
                report.add(&path, [unreadable(&path, &e)]);
            }
        }

        match ws.state_text().and_then(|t| match t {
            Some(_) => ws.state().map(Some),
            None => Ok(None),
        }) {
            Ok(Some(state)) => {
                let max_sentence = corpus
                    .documents
                    .iter()
                    .map(|d| d.next_sentence_id().saturating_sub(1))
                    .max()
                    .unwrap_or(0);
                for (counter, next, max) in [
                    ("next_sentence_id", state.next_sentence_id, max_sentence),
                    ("next_set_id", state.next_set_id, max_set),
                ] {
                    if next <= max {
                        report.add(
                            STATE_FILE,
                            [Diagnostic::warning(
                                STALE_COUNTER,
                                Location::item(counter),
                                format!("{counter} is {next} but id {max} is already taken"),
                            )],
                        );
                    }
                }
            }
            Ok(None) => {}
            Err(e) => report.add(STATE_FILE, [unreadable(STATE_FILE, &e)]),
        }
        Ok(report)
    }

    pub fn documents(&self) -> Result<Vec<DocumentSummary>> {
        let ws = self.ws();
        let mut out = Vec::new();
        for name in ws.document_names()? {
            let (doc, _) = ws.load_document(&name)?;
            let sets = ws.load_annotations(&name)?;
            let mut languages: Vec<Lang> = doc.sentences().map(|(_, v)| v.language.clone()).collect();
            languages.sort();
            languages.dedup();
            out.push(DocumentSummary {
                name,
                languages,
                paragraphs: doc.paragraphs.len(),
                sentences: doc.sentences().count(),
                sets: sets.len(),
                novel: doc.novel,
                chapter: doc.chapter,
            });
        }
        Ok(out)
    }

    pub fn paragraph(&self, document: &str, pid: &str) -> Result<ParagraphView> {
        let ws = self.ws();
        let (doc, _) = ws.load_document(document)?;
        let para = doc
            .paragraph(pid)
            .ok_or_else(|| AppError::NotFound(format!("paragraph {pid} of {document}")))?;
        let sets = ws.load_annotations(document)?;
        let versions = para
            .versions
            .iter()
            .map(|v| SentenceView {
                id: v.id,
                direction: v.language.direction(),
                language: v.language.clone(),
                text: v.text.clone(),
                sets: sets.iter().filter(|s| s.sentence_id == v.id).cloned().collect(),
            })
            .collect();
        Ok(ParagraphView {
            document: document.to_string(),
            pid: pid.to_string(),
            versions,
        })
    }

    /// Add a new document built from one plain text per language.
    pub fn ingest(
        &self,
        texts: &BTreeMap<Lang, String>,
        novel: &str,
        chapter: &str,
        name: Option<&str>,
    ) -> Result<Ingested> {
        let ws = self.ws();
        if texts.is_empty() {
            return Err(AppError::Usage("at least one --text LANG=PATH is required".into()));
        }
        let name = name.map_or_else(|| document_name(novel, chapter), str::to_string);
        ws.document_path(&name)?;
        let lock = self.locks.document(&name);
        let _doc = hold(&lock);
        if ws.has_document(&name) {
            return Err(AppError::Usage(format!("document {name} already exists")));
        }
        let _state = self.locks.state();
        let mut state = ws.state()?;
        let mut seed = state.next_sentence_id;
        for other in ws.document_names()? {
            seed = seed.max(ws.load_document(&other)?.0.next_sentence_id());
        }
        let doc = ingest_plaintext(texts, novel, chapter, seed, 1)?;
        ws.save_document(&name, &doc)?;
        ws.save_annotations(&name, &[])?;
        state.next_sentence_id = doc.next_sentence_id().max(seed);
        ws.save_state(&state)?;
        Ok(Ingested {
            document: name,
            paragraphs: doc.paragraphs.len(),
            sentences: doc.sentences().count(),
        })
    }

    fn next_set_id(&self) -> Result<u64> {
        let ws = self.ws();
        let mut next = ws.state()?.next_set_id;
        for name in ws.names_in(ANNOTATIONS_DIR, "xml")? {
            next = next.max(max_set_id(&ws.load_annotations(&name)?) + 1);
        }
        Ok(next)
    }

    /// Run frame evocation over a document, or one sentence of it, and store
    /// the new AUTO sets. A frame already annotated on the same target span
    /// is not proposed again.
    pub fn propose(&self, document: &str, sentence: Option<u64>, date: &str) -> Result<Vec<AnnotationSet>> {
        let ws = self.ws();
        let lock = self.locks.document(document);
        let _doc = hold(&lock);
        let (doc, _) = ws.load_document(document)?;
        let lexicon = ws.lexicon()?;
        let mut sets = ws.load_annotations(document)?;
        let sentences: Vec<_> = match sentence {
            Some(id) => vec![
                doc.sentence(id)
                    .ok_or_else(|| AppError::NotFound(format!("sentence {id} in {document}")))?
                    .1,
            ],
            None => doc.sentences().map(|(_, v)| v).collect(),
        };

        let _state = self.locks.state();
        let mut next = self.next_set_id()?;
        let mut created = Vec::new();
        for sentence in sentences {
            let tokens: Option<Vec<TokenLabel>> = ws.tokens(sentence.id)?;
            for candidate in find_targets(sentence, &lexicon, tokens.as_deref()) {
                let taken: HashSet<&str> = sets
                    .iter()
                    .filter(|s| s.sentence_id == sentence.id && s.target_span() == Some(candidate.span))
                    .filter_map(|s| s.frame.as_deref())
                    .collect();
                let (frames, lus): (Vec<String>, Vec<String>) = candidate
                    .candidate_frames
                    .iter()
                    .zip(&candidate.lexical_units)
                    .filter(|(f, _)| !taken.contains(f.as_str()))
                    .map(|(f, l)| (f.clone(), l.clone()))
                    .unzip();
                let fresh = TargetCandidate {
                    candidate_frames: frames,
                    lexical_units: lus,
                    ..candidate
                };
                let new = propose_sets(sentence, &fresh, next, date)?;
                next += new.len() as u64;
                created.extend(new);
            }
        }
        if !created.is_empty() {
            sets.extend(created.iter().cloned());
            ws.save_annotations(document, &sets)?;
            let mut state = ws.state()?;
            state.next_set_id = next;
            ws.save_state(&state)?;
        }
        Ok(created)
    }

    /// Propose for a sentence given only its id.
    pub fn propose_sentence(&self, sentence: u64, date: &str) -> Result<Vec<AnnotationSet>> {
        let document = self.document_of_sentence(sentence)?;
        self.propose(&document, Some(sentence), date)
    }

    fn document_of_sentence(&self, id: u64) -> Result<String> {
        for name in self.ws().document_names()? {
            if self.ws().load_document(&name)?.0.sentence(id).is_some() {
                return Ok(name);
            }
        }
        Err(AppError::NotFound(format!("sentence {id}")))
    }

    fn document_of_set(&self, id: u64) -> Result<String> {
        for name in self.ws().names_in(ANNOTATIONS_DIR, "xml")? {
            if self.ws().load_annotations(&name)?.iter().any(|s| s.id == id) {
                return Ok(name);
            }
        }
        Err(AppError::NotFound(format!("annotation set {id}")))
    }

    pub fn set(&self, id: u64) -> Result<SetView> {
        let document = self.document_of_set(id)?;
        let set = self
            .ws()
            .load_annotations(&document)?
            .into_iter()
            .find(|s| s.id == id)
            .ok_or_else(|| AppError::NotFound(format!("annotation set {id}")))?;
        Ok(SetView { document, set })
    }

    /// Replace one set under its document lock. `change` gets the current set
    /// and the text of its sentence.
    fn update(&self, id: u64, change: impl FnOnce(&AnnotationSet, &str) -> Result<AnnotationSet>) -> Result<SetView> {
        let ws = self.ws();
        let document = self.document_of_set(id)?;
        let lock = self.locks.document(&document);
        let _doc = hold(&lock);
        let mut sets = ws.load_annotations(&document)?;
        let index = sets
            .iter()
            .position(|s| s.id == id)
            .ok_or_else(|| AppError::NotFound(format!("annotation set {id}")))?;
        let (doc, _) = ws.load_document(&document)?;
        let text = doc
            .sentence(sets[index].sentence_id)
            .map(|(_, v)| v.text.clone())
            .ok_or_else(|| AppError::NotFound(format!("sentence {}", sets[index].sentence_id)))?;
        let updated = change(&sets[index], &text)?;
        sets[index] = updated.clone();
        ws.save_annotations(&document, &sets)?;
        Ok(SetView { document, set: updated })
    }

    fn checked_edit(&self, edited: AnnotationSet, text: &str) -> Result<AnnotationSet> {
        let status = transition(&edited.status, Action::Edit)?;
        let edited = AnnotationSet { status, ..edited };
        let lexicon = self.ws().lexicon()?;
        let diags = validate_annotation(&edited, text, Some(&lexicon));
        if error_count(&diags) > 0 {
            return Err(AppError::Validation(
                diags.into_iter().filter(Diagnostic::is_error).collect(),
            ));
        }
        Ok(edited)
    }

    pub fn review(&self, id: u64, action: Action) -> Result<SetView> {
        match action {
            Action::Edit => self.update(id, |set, text| self.checked_edit(set.clone(), text)),
            _ => self.update(id, |set, _| Ok(transition_status(set, action)?)),
        }
    }

    /// Replace the FE, GF or PT labels of a set. The result must validate.
    pub fn put_layer(&self, id: u64, layer: &str, labels: Vec<SpanLabel>) -> Result<SetView> {
        let name = LayerName::from(layer);
        if !matches!(name, LayerName::Fe | LayerName::Gf | LayerName::Pt) {
            return Err(AppError::Usage(format!(
                "layer {layer} is not editable; use FE, GF or PT"
            )));
        }
        self.update(id, |set, text| {
            self.checked_edit(replace_span_layer(set, name, labels), text)
        })
    }

    pub fn mark_null(&self, id: u64, fe: &str, itype: NullInstantiation) -> Result<SetView> {
        self.update(id, |set, text| {
            self.checked_edit(set_null_instantiation(set, fe, itype)?, text)
        })
    }

    /// Shift table and parallelism of every approved `src`/`tgt` pair in the
    /// workspace.
    pub fn analyze(&self, src: &Lang, tgt: &Lang, threshold: Option<usize>) -> Result<Analysis> {
        let ws = self.ws();
        let lexicon = ws.lexicon()?;
        let mut corpus = Corpus::default();
        let mut sets = Vec::new();
        let mut records = Vec::new();
        for name in ws.document_names()? {
            corpus.documents.push(ws.load_document(&name)?.0);
            sets.extend(ws.load_annotations(&name)?);
            records.extend(ws.load_pairings(&name)?.pairs);
        }
        let (pairs, diagnostics) = pair_annotations(&corpus, &sets, src, tgt, &records);
        let table = shift_table(&pairs);
        let report = analysis_report(&table, &lexicon, threshold.unwrap_or(ws.config.relatedness_threshold))?;
        Ok(Analysis { report, diagnostics })
    }
}
