//! Paragraph-aligned multilingual corpus.
//!
//! One XML file holds one [`Document`] (a chapter of a novel):
//!
//! ```xml
//! <corpus novel="The Hobbit" chapter="6">
//!   <prg pID="p70">
//!     <p lang="AR" ID="239">…</p>
//!     <p lang="EN" ID="240">When they began to go down this,</p>
//!   </prg>
//! </corpus>
//! ```
//!
//! The `<corpus>` root and its attributes are an extension; paragraph and
//! sentence markup is kept exactly as digitized.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::diagnostic::{Diagnostic, Location};
use crate::error::{Error, Result};
use crate::text::{default_languages, Lang};
use crate::xml;

pub const DUPLICATE_PID: &str = "COR001";
pub const DUPLICATE_SENTENCE_ID: &str = "COR002";
pub const DUPLICATE_LANGUAGE: &str = "COR003";
pub const UNKNOWN_LANGUAGE: &str = "COR004";
pub const EMPTY_TEXT: &str = "COR005";
pub const MALFORMED_PID: &str = "COR006";
pub const ZERO_SENTENCE_ID: &str = "COR007";
pub const DUPLICATE_DOCUMENT: &str = "COR008";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceVersion {
    pub id: u64,
    pub language: Lang,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paragraph {
    pub pid: String,
    pub versions: Vec<SentenceVersion>,
}

impl Paragraph {
    pub fn version(&self, language: &Lang) -> Option<&SentenceVersion> {
        self.versions.iter().find(|v| &v.language == language)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub novel: String,
    pub chapter: String,
    pub paragraphs: Vec<Paragraph>,
}

impl Document {
    pub fn sentences(&self) -> impl Iterator<Item = (&Paragraph, &SentenceVersion)> {
        self.paragraphs
            .iter()
            .flat_map(|p| p.versions.iter().map(move |v| (p, v)))
    }

    pub fn sentence(&self, id: u64) -> Option<(&Paragraph, &SentenceVersion)> {
        self.sentences().find(|(_, v)| v.id == id)
    }

    pub fn paragraph(&self, pid: &str) -> Option<&Paragraph> {
        self.paragraphs.iter().find(|p| p.pid == pid)
    }

    /// One past the largest sentence id, or 1 for an empty document.
    pub fn next_sentence_id(&self) -> u64 {
        self.sentences().map(|(_, v)| v.id + 1).max().unwrap_or(1)
    }

    /// Paragraph number following the last `p<N>` paragraph.
    pub fn next_paragraph_number(&self) -> u32 {
        self.paragraphs
            .iter()
            .filter_map(|p| pid_number(&p.pid))
            .max()
            .map_or(1, |n| n + 1)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

impl Corpus {
    pub fn sentence(&self, id: u64) -> Option<(&Document, &Paragraph, &SentenceVersion)> {
        self.documents
            .iter()
            .find_map(|d| d.sentence(id).map(|(p, v)| (d, p, v)))
    }
}

#[derive(Debug, Clone)]
pub struct CorpusOptions {
    /// Reject unknown language codes instead of warning about them.
    pub strict: bool,
    pub languages: Vec<Lang>,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            strict: false,
            languages: default_languages(),
        }
    }
}

fn pid_number(pid: &str) -> Option<u32> {
    let digits = pid.strip_prefix('p')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Findings for one document. Sentence ids are checked within the document;
/// [`validate_corpus`] extends the check across documents.
pub fn validate_document(doc: &Document, options: &CorpusOptions) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut pids = HashSet::new();
    let mut ids = HashSet::new();
    for para in &doc.paragraphs {
        let at = || Location::item(para.pid.clone());
        if pid_number(&para.pid).is_none() {
            out.push(Diagnostic::error(
                MALFORMED_PID,
                at(),
                format!("paragraph id {:?} is not of the form p<N>", para.pid),
            ));
        }
        if !pids.insert(para.pid.as_str()) {
            out.push(Diagnostic::error(
                DUPLICATE_PID,
                at(),
                format!("paragraph id {} appears more than once", para.pid),
            ));
        }
        let mut langs = HashSet::new();
        for v in &para.versions {
            let at = || Location::item(format!("{} ID={}", para.pid, v.id));
            if v.id == 0 {
                out.push(Diagnostic::error(ZERO_SENTENCE_ID, at(), "sentence ids start at 1"));
            }
            if !ids.insert(v.id) {
                out.push(Diagnostic::error(
                    DUPLICATE_SENTENCE_ID,
                    at(),
                    format!("sentence id {} appears more than once", v.id),
                ));
            }
            if !langs.insert(&v.language) {
                out.push(Diagnostic::error(
                    DUPLICATE_LANGUAGE,
                    at(),
                    format!("paragraph {} has more than one {} version", para.pid, v.language),
                ));
            }
            if !options.languages.contains(&v.language) {
                let message = format!("language code {:?} is not configured", v.language.as_str());
                out.push(if options.strict {
                    Diagnostic::error(UNKNOWN_LANGUAGE, at(), message)
                } else {
                    Diagnostic::warning(UNKNOWN_LANGUAGE, at(), message)
                });
            }
            if v.text.trim().is_empty() {
                out.push(Diagnostic::error(EMPTY_TEXT, at(), "sentence text is empty"));
            }
        }
    }
    out
}

pub fn validate_corpus(corpus: &Corpus, options: &CorpusOptions) -> Vec<Diagnostic> {
    let mut out: Vec<Diagnostic> = corpus
        .documents
        .iter()
        .flat_map(|doc| validate_document(doc, options))
        .collect();
    out.extend(cross_document_diagnostics(corpus));
    out
}

/// Duplicate documents and sentence ids shared between documents.
pub fn cross_document_diagnostics(corpus: &Corpus) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut docs = HashSet::new();
    let mut owner: HashMap<u64, usize> = HashMap::new();
    for (i, doc) in corpus.documents.iter().enumerate() {
        if !docs.insert((&doc.novel, &doc.chapter)) {
            out.push(Diagnostic::error(
                DUPLICATE_DOCUMENT,
                Location::item(format!("{} / {}", doc.novel, doc.chapter)),
                "the same novel and chapter appear in two documents",
            ));
        }
        for (para, v) in doc.sentences() {
            if let Some(&j) = owner.get(&v.id) {
                if j != i {
                    out.push(Diagnostic::error(
                        DUPLICATE_SENTENCE_ID,
                        Location::item(format!("{} ID={}", para.pid, v.id)),
                        format!("sentence id {} is also used in another document", v.id),
                    ));
                }
            } else {
                owner.insert(v.id, i);
            }
        }
    }
    out
}

fn split_errors(diagnostics: Vec<Diagnostic>) -> Result<Vec<Diagnostic>> {
    let (errors, warnings): (Vec<_>, Vec<_>) = diagnostics.into_iter().partition(|d| d.is_error());
    if errors.is_empty() {
        Ok(warnings)
    } else {
        Err(Error::Integrity(errors))
    }
}

/// Parse one corpus file, returning the document and any warnings.
pub fn parse_document(text: &str, options: &CorpusOptions) -> Result<(Document, Vec<Diagnostic>)> {
    let doc = read_document(text)?;
    let warnings = split_errors(validate_document(&doc, options))?;
    Ok((doc, warnings))
}

/// Parse one corpus file without integrity checks.
pub fn read_document(text: &str) -> Result<Document> {
    let tree = xml::parse(text)?;
    let root = tree.root_element();
    xml::expect_name(root, "corpus")?;
    let mut doc = Document {
        novel: root.attribute("novel").unwrap_or_default().to_string(),
        chapter: root.attribute("chapter").unwrap_or_default().to_string(),
        paragraphs: Vec::new(),
    };
    for prg in xml::element_children(root)? {
        xml::expect_name(prg, "prg")?;
        let mut para = Paragraph {
            pid: xml::required_attr(prg, "pID")?.to_string(),
            versions: Vec::new(),
        };
        for p in xml::element_children(prg)? {
            xml::expect_name(p, "p")?;
            let lang = xml::required_attr(p, "lang")?;
            let id = xml::parse_number(p, "ID", xml::required_attr(p, "ID")?)?;
            para.versions.push(SentenceVersion {
                id,
                language: Lang::from(lang),
                text: xml::text_content(p)?,
            });
        }
        doc.paragraphs.push(para);
    }
    Ok(doc)
}

/// Parse a single-document corpus file with default options.
pub fn parse_corpus(text: &str) -> Result<Corpus> {
    let (doc, _) = parse_document(text, &CorpusOptions::default())?;
    Ok(Corpus { documents: vec![doc] })
}

/// Canonical XML for one document.
pub fn serialize_document(doc: &Document) -> String {
    let mut out = String::from(xml::DECLARATION);
    out.push_str("<corpus");
    xml::attrs(&mut out, &[("novel", &doc.novel), ("chapter", &doc.chapter)]);
    if doc.paragraphs.is_empty() {
        out.push_str("/>\n");
        return out;
    }
    out.push_str(">\n");
    for para in &doc.paragraphs {
        out.push_str("  <prg");
        xml::attrs(&mut out, &[("pID", &para.pid)]);
        out.push_str(">\n");
        for v in &para.versions {
            out.push_str("    <p");
            xml::attrs(&mut out, &[("lang", v.language.as_str()), ("ID", &v.id.to_string())]);
            out.push('>');
            out.push_str(&xml::escape_text(&v.text));
            out.push_str("</p>\n");
        }
        out.push_str("  </prg>\n");
    }
    out.push_str("</corpus>\n");
    out
}

/// Serialize a corpus as one XML text per document, in document order.
pub fn serialize_corpus(corpus: &Corpus) -> Vec<String> {
    corpus.documents.iter().map(serialize_document).collect()
}

/// Blank-line separated paragraphs; hard line breaks inside a paragraph
/// collapse to single spaces.
pub fn split_paragraphs(text: &str) -> Vec<String> {
    let mut paragraphs = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            if !current.is_empty() {
                paragraphs.push(current.join(" "));
                current.clear();
            }
        } else {
            current.push(line);
        }
    }
    if !current.is_empty() {
        paragraphs.push(current.join(" "));
    }
    paragraphs
}

/// Build a document from per-language plain texts.
pub fn ingest_plaintext(
    texts: &BTreeMap<Lang, String>,
    novel: &str,
    chapter: &str,
    id_seed: u64,
    first_paragraph: u32,
) -> Result<Document> {
    let lists = texts
        .iter()
        .map(|(lang, text)| (lang.clone(), split_paragraphs(text)))
        .collect();
    ingest_paragraphs(&lists, novel, chapter, id_seed, first_paragraph)
}

/// Build a document from per-language paragraph lists of equal length.
/// Paragraphs are numbered from `first_paragraph`; sentence ids ascend from
/// `id_seed`, paragraph by paragraph, languages in code order.
pub fn ingest_paragraphs(
    lists: &BTreeMap<Lang, Vec<String>>,
    novel: &str,
    chapter: &str,
    id_seed: u64,
    first_paragraph: u32,
) -> Result<Document> {
    let counts: BTreeMap<String, usize> = lists.iter().map(|(lang, ps)| (lang.to_string(), ps.len())).collect();
    let mut distinct: Vec<usize> = counts.values().copied().collect();
    distinct.dedup();
    if distinct.len() > 1 {
        return Err(Error::Alignment(counts));
    }
    let n = distinct.first().copied().unwrap_or(0);
    let mut next_id = id_seed;
    let mut doc = Document {
        novel: novel.to_string(),
        chapter: chapter.to_string(),
        paragraphs: Vec::with_capacity(n),
    };
    for k in 0..n {
        let mut para = Paragraph {
            pid: format!("p{}", first_paragraph as usize + k),
            versions: Vec::with_capacity(lists.len()),
        };
        for (lang, ps) in lists {
            para.versions.push(SentenceVersion {
                id: next_id,
                language: lang.clone(),
                text: ps[k].clone(),
            });
            next_id += 1;
        }
        doc.paragraphs.push(para);
    }
    let options = CorpusOptions {
        strict: false,
        languages: lists.keys().cloned().collect(),
    };
    split_errors(validate_document(&doc, &options))?;
    Ok(doc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedPair<'a> {
    pub paragraph: &'a str,
    pub source: &'a SentenceVersion,
    pub target: &'a SentenceVersion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedParagraph<'a> {
    pub novel: &'a str,
    pub chapter: &'a str,
    pub pid: &'a str,
    pub missing: Vec<Lang>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alignment<'a> {
    pub pairs: Vec<AlignedPair<'a>>,
    pub skipped: Vec<SkippedParagraph<'a>>,
}

/// One sentence pair per paragraph that has both languages, in document
/// and paragraph order.
pub fn aligned_pairs<'a>(corpus: &'a Corpus, src: &Lang, tgt: &Lang) -> Alignment<'a> {
    let mut out = Alignment::default();
    for doc in &corpus.documents {
        for para in &doc.paragraphs {
            match (para.version(src), para.version(tgt)) {
                (Some(source), Some(target)) => out.pairs.push(AlignedPair {
                    paragraph: &para.pid,
                    source,
                    target,
                }),
                (s, t) => {
                    let mut missing = Vec::new();
                    if s.is_none() {
                        missing.push(src.clone());
                    }
                    if t.is_none() && src != tgt {
                        missing.push(tgt.clone());
                    }
                    out.skipped.push(SkippedParagraph {
                        novel: &doc.novel,
                        chapter: &doc.chapter,
                        pid: &para.pid,
                        missing,
                    });
                }
            }
        }
    }
    out
}
