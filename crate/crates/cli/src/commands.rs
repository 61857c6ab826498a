use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use authn_catalog::catalog::{self, LintLevel, LoadError};
use authn_catalog::naming::{classification_name, readable_name};
use authn_catalog::query::{self, Target};
use authn_catalog::CatalogDocument;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::api::{self, AppState, Snapshot};
use crate::bundle;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_LOAD: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "catalog", version, about = "Validate, name, query, export and serve an authenticator catalog")]
pub struct Cli {
    /// Catalog file.
    #[arg(long, short = 'c', global = true, env = "CATALOG_PATH")]
    pub catalog: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Lenient,
    Strict,
}

impl From<Level> for LintLevel {
    fn from(level: Level) -> Self {
        match level {
            Level::Lenient => LintLevel::Lenient,
            Level::Strict => LintLevel::Strict,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Techniques,
    Authenticators,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Techniques => Target::Techniques,
            TargetArg::Authenticators => Target::Authenticators,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lint the catalog; one `id<TAB>rule<TAB>message` line per violation.
    Validate {
        #[arg(long, value_enum, default_value = "lenient")]
        level: Level,
    },
    /// Print an entry's classification name.
    Name {
        id: String,
        #[arg(long)]
        readable: bool,
        /// Drop `multi` from multi-factor readable names.
        #[arg(long, requires = "readable")]
        omit_multi: bool,
    },
    /// Filter entries, e.g. `factor=multi-factor & subject-interaction=passive`.
    Query {
        query: String,
        #[arg(long, value_enum, default_value = "techniques")]
        target: TargetArg,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Group counts of the fundamental facets.
    Stats {
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Write catalog.json, names.json and stats.json.
    Export {
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Serve the read-only JSON API. SIGHUP reloads the catalog file.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        address: SocketAddr,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_LOAD;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_LOAD
        }
    }
}

fn read(path: Option<&Path>) -> Result<(PathBuf, Vec<u8>), String> {
    let path = path.ok_or("no catalog given; pass --catalog or set CATALOG_PATH")?;
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((path.to_owned(), bytes))
}

fn describe(e: &LoadError) -> String {
    match e {
        LoadError::Schema { detail, violations } => {
            let mut text = detail.clone();
            for v in violations {
                text.push_str("\n  ");
                text.push_str(&v.to_line());
            }
            text
        }
        other => other.to_string(),
    }
}

pub fn load_document(path: Option<&Path>) -> Result<CatalogDocument, String> {
    let (path, bytes) = read(path)?;
    catalog::load(&bytes)
        .map(|l| l.document)
        .map_err(|e| format!("{}: {}", path.display(), describe(&e)))
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let path = cli.catalog.as_deref();
    let doc = match &cli.command {
        Command::Validate { .. } => None,
        _ => match load_document(path) {
            Ok(d) => Some(d),
            Err(e) => {
                writeln!(err, "error: {e}")?;
                return Ok(EXIT_LOAD);
            }
        },
    };
    match cli.command {
        Command::Validate { level } => validate(path, level.into(), out, err),
        Command::Name {
            id,
            readable,
            omit_multi,
        } => name(&doc.expect("loaded"), &id, readable, omit_multi, out, err),
        Command::Query {
            query,
            target,
            format,
        } => run_query(&doc.expect("loaded"), &query, target.into(), format, out, err),
        Command::Stats { format } => stats(&doc.expect("loaded"), format, out),
        Command::Export { out_dir } => {
            bundle::write_bundle(&doc.expect("loaded"), &out_dir)?;
            writeln!(out, "wrote {}", out_dir.display())?;
            Ok(EXIT_OK)
        }
        Command::Serve { address } => serve(doc.expect("loaded"), path, address, err),
    }
}

fn validate(path: Option<&Path>, level: LintLevel, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let document = match read(path).and_then(|(p, bytes)| {
        catalog::parse(&bytes).map_err(|e| format!("{}: {}", p.display(), describe(&e)))
    }) {
        Ok(d) => d,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_LOAD);
        }
    };
    let report = catalog::lint(&document, level);
    for item in &report.violations {
        writeln!(out, "{}", item.to_line())?;
    }
    for item in &report.waived {
        writeln!(err, "waived: {}", item.to_line())?;
    }
    writeln!(
        err,
        "{} violation(s) at {level} level ({} authenticators, {} techniques)",
        report.violations.len(),
        document.authenticators.len(),
        document.techniques.len()
    )?;
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_FINDINGS })
}

fn name(
    doc: &CatalogDocument,
    id: &str,
    readable: bool,
    omit_multi: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let found = doc
        .technique(id)
        .map(|t| (&t.assignment, &doc.schemes.technique))
        .or_else(|| doc.authenticator(id).map(|a| (&a.assignment, &doc.schemes.authenticator)));
    let Some((assignment, scheme)) = found else {
        writeln!(err, "error: unknown entry `{id}`")?;
        return Ok(EXIT_FINDINGS);
    };
    let text = if readable {
        readable_name(assignment, scheme, omit_multi).map_err(|e| e.to_string())
    } else {
        classification_name(assignment, scheme)
            .map(|n| n.to_string())
            .map_err(|e| e.to_string())
    };
    match text {
        Ok(text) => {
            writeln!(out, "{text}")?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(EXIT_FINDINGS)
        }
    }
}

#[derive(Serialize)]
struct Row {
    id: String,
    name: String,
    classification_name: String,
}

/// Ids selected by a textual query, in result order.
pub fn query_ids(doc: &CatalogDocument, target: Target, text: &str) -> Result<Vec<String>, query::QueryError> {
    Ok(query::evaluate_str(doc, target, text)?
        .iter()
        .map(|e| e.id().to_owned())
        .collect())
}

fn run_query(
    doc: &CatalogDocument,
    text: &str,
    target: Target,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let entries = match query::evaluate_str(doc, target, text) {
        Ok(e) => e,
        Err(e) => {
            writeln!(err, "{}", e.caret_diagnostic(text))?;
            return Ok(EXIT_FINDINGS);
        }
    };
    let scheme = target.scheme(doc);
    let rows: Vec<Row> = entries
        .iter()
        .map(|e| Row {
            id: e.id().to_owned(),
            name: e.name().to_owned(),
            classification_name: classification_name(e.assignment(), scheme)
                .map(|n| n.to_string())
                .unwrap_or_default(),
        })
        .collect();
    match format {
        Format::Json => out.write_all(&bundle::to_pretty_json(&rows))?,
        Format::Table => {
            let w_id = rows.iter().map(|r| r.id.len()).max().unwrap_or(0).max(2);
            let w_name = rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(4);
            writeln!(out, "{:w_id$}  {:w_name$}  CLASSIFICATION", "ID", "NAME")?;
            for r in &rows {
                writeln!(out, "{:w_id$}  {:w_name$}  {}", r.id, r.name, r.classification_name)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn stats(doc: &CatalogDocument, format: Format, out: &mut dyn Write) -> io::Result<i32> {
    match format {
        Format::Json => out.write_all(&bundle::to_pretty_json(&bundle::catalog_stats(doc)))?,
        Format::Table => {
            writeln!(out, "techniques\t{}", doc.techniques.len())?;
            writeln!(out, "authenticators\t{}", doc.authenticators.len())?;
            for (facet, counts) in bundle::fundamental_counts(doc) {
                for (value, count) in counts {
                    writeln!(out, "{facet}\t{value}\t{count}")?;
                }
            }
            for (group, count) in query::technique_groups(doc) {
                writeln!(out, "group\t{group}\t{count}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn serve(doc: CatalogDocument, path: Option<&Path>, address: SocketAddr, err: &mut dyn Write) -> io::Result<i32> {
    let snapshot = Snapshot::new(doc).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    let state = AppState::new(snapshot);
    let path = path.map(Path::to_owned);
    writeln!(err, "serving on http://{address}")?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        spawn_reloader(state.clone(), path);
        let listener = tokio::net::TcpListener::bind(address).await?;
        axum::serve(listener, api::router(state)).await
    })?;
    Ok(EXIT_OK)
}

#[cfg(unix)]
fn spawn_reloader(state: AppState, path: Option<PathBuf>) {
    use tokio::signal::unix::{signal, SignalKind};
    tokio::spawn(async move {
        let Ok(mut hangup) = signal(SignalKind::hangup()) else {
            return;
        };
        while hangup.recv().await.is_some() {
            let reloaded = load_document(path.as_deref())
                .and_then(|d| Snapshot::new(d).map_err(|e| e.to_string()));
            match reloaded {
                Ok(s) => {
                    state.replace(s);
                    eprintln!("catalog reloaded");
                }
                Err(e) => eprintln!("reload failed, keeping previous catalog: {e}"),
            }
        }
    });
}

#[cfg(not(unix))]
fn spawn_reloader(_state: AppState, _path: Option<PathBuf>) {}
