//! On-disk layout:
//!
//! ```text
//! framealign.toml          config
//! lexicon.json             frame lexicon
//! state.json               next-id counters
//! documents/<name>.xml     one corpus document per file
//! annotations/<name>.xml   annotation sets of that document
//! pairings/<name>.json     explicit cross-language pairings
//! tokens/<sentence>.json   precomputed token layer of one sentence
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use framealign_core::annotation::{parse_annotations_file, serialize_annotations_file, AnnotationSet, TokenLabel};
use framealign_core::contrastive::{PairingFile, DEFAULT_THRESHOLD};
use framealign_core::corpus::{parse_document, serialize_document, CorpusOptions, Document};
use framealign_core::lexicon::{load_lexicon, serialize_lexicon, FrameLexicon};
use framealign_core::text::default_languages;
use framealign_core::{Diagnostic, Lang};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};

pub const CONFIG_FILE: &str = "framealign.toml";
pub const LEXICON_FILE: &str = "lexicon.json";
pub const STATE_FILE: &str = "state.json";
pub const DOCUMENTS_DIR: &str = "documents";
pub const ANNOTATIONS_DIR: &str = "annotations";
pub const PAIRINGS_DIR: &str = "pairings";
pub const TOKENS_DIR: &str = "tokens";

/// Overrides `--workspace` when set.
pub const WORKSPACE_ENV: &str = "FRAMEALIGN_WORKSPACE";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub bind: String,
    pub port: u16,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            bind: "127.0.0.1".into(),
            port: 8080,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub languages: Vec<Lang>,
    /// Unknown language codes are errors rather than warnings.
    pub strict: bool,
    /// Longest relation path for a frame shift to count as related.
    pub relatedness_threshold: usize,
    pub server: ServerConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            languages: default_languages(),
            strict: false,
            relatedness_threshold: DEFAULT_THRESHOLD,
            server: ServerConfig::default(),
        }
    }
}

impl Config {
    pub fn corpus_options(&self) -> CorpusOptions {
        CorpusOptions {
            strict: self.strict,
            languages: self.languages.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct State {
    pub next_sentence_id: u64,
    pub next_set_id: u64,
}

impl Default for State {
    fn default() -> Self {
        State {
            next_sentence_id: 1,
            next_set_id: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Workspace {
    root: PathBuf,
    pub config: Config,
}

/// Replace `path` with `contents` by writing a sibling temporary file and
/// renaming it over the target.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| AppError::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| AppError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| AppError::io(path, e))?;
    tmp.persist(path).map_err(|e| AppError::io(path, e.error))?;
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| AppError::io(path, e))
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    match fs::read_to_string(path) {
        Ok(text) => Ok(Some(text)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(AppError::io(path, e)),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('.')
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

/// `Hound of the Baskervilles`, `14` → `hound-of-the-baskervilles-14`
pub fn document_name(novel: &str, chapter: &str) -> String {
    let mut out = String::new();
    for c in format!("{novel} {chapter}").chars() {
        if c.is_alphanumeric() {
            out.extend(c.to_lowercase());
        } else if !out.ends_with('-') && !out.is_empty() {
            out.push('-');
        }
    }
    out.trim_end_matches('-').to_string()
}

impl Workspace {
    /// Create the layout under `root`. Fails if a config file is already there.
    pub fn init(root: &Path) -> Result<Workspace> {
        let config_path = root.join(CONFIG_FILE);
        if config_path.exists() {
            return Err(AppError::Usage(format!("{} is already a workspace", root.display())));
        }
        for dir in [DOCUMENTS_DIR, ANNOTATIONS_DIR, PAIRINGS_DIR, TOKENS_DIR] {
            let path = root.join(dir);
            fs::create_dir_all(&path).map_err(|e| AppError::io(&path, e))?;
        }
        let config = Config::default();
        let ws = Workspace {
            root: root.to_path_buf(),
            config,
        };
        write_atomic(&config_path, &toml::to_string(&ws.config).expect("config serializes"))?;
        if !ws.lexicon_path().exists() {
            write_atomic(&ws.lexicon_path(), &serialize_lexicon(&FrameLexicon::default()))?;
        }
        ws.save_state(&State::default())?;
        Ok(ws)
    }

    pub fn open(root: &Path) -> Result<Workspace> {
        let path = root.join(CONFIG_FILE);
        let text = match read_optional(&path)? {
            Some(text) => text,
            None => {
                return Err(AppError::Usage(format!(
                    "{} is not a workspace (no {CONFIG_FILE}); run `init` first",
                    root.display()
                )))
            }
        };
        let config = toml::from_str(&text).map_err(|e| AppError::Config {
            path,
            message: e.message().to_string(),
        })?;
        Ok(Workspace {
            root: root.to_path_buf(),
            config,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn lexicon_path(&self) -> PathBuf {
        self.root.join(LEXICON_FILE)
    }

    pub fn lexicon_text(&self) -> Result<String> {
        read(&self.lexicon_path())
    }

    pub fn lexicon(&self) -> Result<FrameLexicon> {
        Ok(load_lexicon(&self.lexicon_text()?)?)
    }

    fn named(&self, dir: &str, name: &str, ext: &str) -> Result<PathBuf> {
        if !valid_name(name) {
            return Err(AppError::Usage(format!("invalid document name {name:?}")));
        }
        Ok(self.root.join(dir).join(format!("{name}.{ext}")))
    }

    pub fn document_path(&self, name: &str) -> Result<PathBuf> {
        self.named(DOCUMENTS_DIR, name, "xml")
    }

    pub fn annotations_path(&self, name: &str) -> Result<PathBuf> {
        self.named(ANNOTATIONS_DIR, name, "xml")
    }

    pub fn pairings_path(&self, name: &str) -> Result<PathBuf> {
        self.named(PAIRINGS_DIR, name, "json")
    }

    /// Document names in sorted order.
    pub fn document_names(&self) -> Result<Vec<String>> {
        self.names_in(DOCUMENTS_DIR, "xml")
    }

    /// Stems of the `ext` files in a workspace directory; missing means none.
    pub fn names_in(&self, dir: &str, ext: &str) -> Result<Vec<String>> {
        let dir = self.root.join(dir);
        let entries = match fs::read_dir(&dir) {
            Ok(entries) => entries,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(AppError::io(&dir, e)),
        };
        let mut names = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| AppError::io(&dir, e))?.path();
            if path.extension().is_some_and(|x| x == ext) {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    if valid_name(stem) {
                        names.push(stem.to_string());
                    }
                }
            }
        }
        names.sort();
        Ok(names)
    }

    pub fn has_document(&self, name: &str) -> bool {
        self.document_path(name).is_ok_and(|p| p.exists())
    }

    pub fn document_text(&self, name: &str) -> Result<String> {
        let path = self.document_path(name)?;
        read_optional(&path)?.ok_or_else(|| AppError::NotFound(format!("document {name}")))
    }

    pub fn load_document(&self, name: &str) -> Result<(Document, Vec<Diagnostic>)> {
        Ok(parse_document(
            &self.document_text(name)?,
            &self.config.corpus_options(),
        )?)
    }

    pub fn save_document(&self, name: &str, doc: &Document) -> Result<()> {
        write_atomic(&self.document_path(name)?, &serialize_document(doc))
    }

    pub fn annotations_text(&self, name: &str) -> Result<Option<String>> {
        read_optional(&self.annotations_path(name)?)
    }

    /// Sets of a document; a missing file means none yet.
    pub fn load_annotations(&self, name: &str) -> Result<Vec<AnnotationSet>> {
        match self.annotations_text(name)? {
            Some(text) => Ok(parse_annotations_file(&text, false)?),
            None => Ok(Vec::new()),
        }
    }

    pub fn save_annotations(&self, name: &str, sets: &[AnnotationSet]) -> Result<()> {
        write_atomic(&self.annotations_path(name)?, &serialize_annotations_file(sets))
    }

    pub fn load_pairings(&self, name: &str) -> Result<PairingFile> {
        let path = self.pairings_path(name)?;
        match read_optional(&path)? {
            Some(text) => serde_json::from_str(&text).map_err(|e| AppError::Config {
                path,
                message: e.to_string(),
            }),
            None => Ok(PairingFile::default()),
        }
    }

    pub fn pairings_text(&self, name: &str) -> Result<Option<String>> {
        read_optional(&self.pairings_path(name)?)
    }

    pub fn tokens_text(&self, sentence_id: u64) -> Result<Option<String>> {
        read_optional(&self.root.join(TOKENS_DIR).join(format!("{sentence_id}.json")))
    }

    pub fn state_text(&self) -> Result<Option<String>> {
        read_optional(&self.root.join(STATE_FILE))
    }

    pub fn tokens(&self, sentence_id: u64) -> Result<Option<Vec<TokenLabel>>> {
        let path = self.root.join(TOKENS_DIR).join(format!("{sentence_id}.json"));
        match read_optional(&path)? {
            Some(text) => serde_json::from_str(&text).map(Some).map_err(|e| AppError::Config {
                path,
                message: e.to_string(),
            }),
            None => Ok(None),
        }
    }

    pub fn save_tokens(&self, sentence_id: u64, tokens: &[TokenLabel]) -> Result<()> {
        let dir = self.root.join(TOKENS_DIR);
        fs::create_dir_all(&dir).map_err(|e| AppError::io(&dir, e))?;
        write_atomic(&dir.join(format!("{sentence_id}.json")), &json(&tokens))
    }

    pub fn state(&self) -> Result<State> {
        let path = self.root.join(STATE_FILE);
        match read_optional(&path)? {
            Some(text) => serde_json::from_str(&text).map_err(|e| AppError::Config {
                path,
                message: e.to_string(),
            }),
            None => Ok(State::default()),
        }
    }

    pub fn save_state(&self, state: &State) -> Result<()> {
        write_atomic(&self.root.join(STATE_FILE), &json(state))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(document_name("The Hobbit", "6"), "the-hobbit-6");
        assert_eq!(
            document_name("  Hound of the Baskervilles!", "14"),
            "hound-of-the-baskervilles-14"
        );
        assert!(valid_name("hobbit-ch06"));
        assert!(!valid_name("../etc"));
        assert!(!valid_name(""));
    }

    #[test]
    fn config_defaults_fill_missing_keys() {
        let c: Config = toml::from_str("strict = true\n").unwrap();
        assert!(c.strict);
        assert_eq!(c.relatedness_threshold, 2);
        assert_eq!(c.server.port, 8080);
        assert!(toml::from_str::<Config>("colour = 1\n").is_err());
        let back: Config = toml::from_str(&toml::to_string(&Config::default()).unwrap()).unwrap();
        assert_eq!(back, Config::default());
    }
}
