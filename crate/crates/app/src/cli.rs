use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use framealign_core::contrastive::{export_table, ExportFormat};
use framealign_core::Lang;

use crate::error::{AppError, Result};
use crate::ops::Service;
use crate::workspace::{Workspace, WORKSPACE_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "framealign",
    version,
    about = "Frame-semantic annotation of aligned parallel corpora"
)]
pub struct Cli {
    /// Workspace directory; FRAMEALIGN_WORKSPACE takes precedence.
    #[arg(long, short = 'w', global = true, default_value = ".")]
    pub workspace: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnalysisFormat {
    Csv,
    #[value(alias = "md")]
    Markdown,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create an empty workspace.
    Init,
    /// Build a corpus document from plain-text files, one per language.
    Ingest {
        #[arg(long)]
        novel: String,
        #[arg(long)]
        chapter: String,
        /// Document name; derived from novel and chapter when omitted.
        #[arg(long)]
        name: Option<String>,
        /// LANG=PATH, repeated per language.
        #[arg(long = "text", required = true, value_parser = parse_text_arg)]
        texts: Vec<(String, PathBuf)>,
    },
    /// Check lexicon, corpus, annotations and pairings.
    Validate {
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Exit 0 when only warnings are found.
        #[arg(long)]
        allow_warnings: bool,
    },
    /// Write AUTO annotation sets for every frame-evoking target.
    Propose {
        #[arg(long)]
        document: String,
        #[arg(long)]
        sentence: Option<u64>,
        /// Creation date stamped on new sets; today (dd/mm/yyyy) by default.
        #[arg(long)]
        date: Option<String>,
    },
    /// Print the frame-shift table for a language pair.
    Analyze {
        #[arg(long)]
        src: String,
        #[arg(long)]
        tgt: String,
        #[arg(long, value_enum, default_value_t = AnalysisFormat::Markdown)]
        format: AnalysisFormat,
        #[arg(long)]
        threshold: Option<usize>,
    },
    /// Start the review API.
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        bind: Option<String>,
    },
}

fn parse_text_arg(s: &str) -> std::result::Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((lang, path)) if !lang.is_empty() && !path.is_empty() => Ok((lang.to_string(), PathBuf::from(path))),
        _ => Err(format!("expected LANG=PATH, got {s:?}")),
    }
}

fn today() -> String {
    chrono::Local::now().format("%d/%m/%Y").to_string()
}

fn error_line(err: &AppError) -> String {
    err.to_json().to_string()
}

/// Parse `args` (program name first) and run the command. The workspace
/// comes from `env_workspace` when given, else from `--workspace`.
pub fn run_with<I, T>(args: I, env_workspace: Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let usage = AppError::Usage(e.to_string().trim_end().to_string());
            let _ = writeln!(err, "{}", error_line(&usage));
            return usage.exit_code();
        }
    };
    let root = env_workspace.unwrap_or_else(|| cli.workspace.clone());
    match execute(&root, cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", error_line(&e));
            e.exit_code()
        }
    }
}

/// [`run_with`] reading the workspace override from the environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var_os(WORKSPACE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from);
    run_with(args, env, out, err)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| AppError::io("<stdout>", e))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

fn execute(root: &Path, command: Command, out: &mut dyn Write) -> Result<i32> {
    if let Command::Init = command {
        let ws = Workspace::init(root)?;
        emit(out, &format!("initialized workspace {}\n", ws.root().display()))?;
        return Ok(0);
    }
    let service = Service::new(Workspace::open(root)?);
    match command {
        Command::Init => unreachable!("handled above"),
        Command::Ingest {
            novel,
            chapter,
            name,
            texts,
        } => {
            let mut by_lang = BTreeMap::new();
            for (lang, path) in texts {
                let text = std::fs::read_to_string(&path).map_err(|e| AppError::io(&path, e))?;
                if by_lang.insert(Lang::new(lang.clone()), text).is_some() {
                    return Err(AppError::Usage(format!("language {lang} given twice")));
                }
            }
            let done = service.ingest(&by_lang, &novel, &chapter, name.as_deref())?;
            emit(
                out,
                &format!(
                    "ingested {}: {} paragraphs, {} sentences\n",
                    done.document, done.paragraphs, done.sentences
                ),
            )?;
            Ok(0)
        }
        Command::Validate { format, allow_warnings } => {
            let report = service.validate()?;
            match format {
                ReportFormat::Text => emit(out, &report.to_text())?,
                ReportFormat::Json => emit(out, &to_json(&report))?,
            }
            let failed = report.errors > 0 || (report.warnings > 0 && !allow_warnings);
            Ok(i32::from(failed))
        }
        Command::Propose {
            document,
            sentence,
            date,
        } => {
            let date = date.unwrap_or_else(today);
            let sets = service.propose(&document, sentence, &date)?;
            emit(out, &format!("proposed {} sets in {document}\n", sets.len()))?;
            for set in &sets {
                emit(
                    out,
                    &format!(
                        "{}\tsentence {}\t{}\t{}\n",
                        set.id,
                        set.sentence_id,
                        set.frame.as_deref().unwrap_or("-"),
                        set.lexical_unit.as_deref().unwrap_or("-")
                    ),
                )?;
            }
            Ok(0)
        }
        Command::Analyze {
            src,
            tgt,
            format,
            threshold,
        } => {
            let analysis = service.analyze(&Lang::new(src), &Lang::new(tgt), threshold)?;
            let text = match format {
                AnalysisFormat::Csv => export_table(&analysis.report, ExportFormat::Csv),
                AnalysisFormat::Markdown => export_table(&analysis.report, ExportFormat::Markdown),
                AnalysisFormat::Json => to_json(&analysis),
            };
            emit(out, &text)?;
            Ok(0)
        }
        Command::Serve { port, bind } => {
            let config = service.workspace.config.server.clone();
            let port = port.unwrap_or(config.port);
            let bind = bind.unwrap_or(config.bind);
            emit(out, &format!("serving {} on http://{bind}:{port}\n", root.display()))?;
            let _ = out.flush();
            let runtime = tokio::runtime::Runtime::new().map_err(|e| AppError::io("<runtime>", e))?;
            runtime
                .block_on(crate::http::serve(service, &bind, port))
                .map_err(|e| AppError::io(format!("{bind}:{port}"), e))?;
            Ok(0)
        }
    }
}
