//! Line-delimited corpus ingestion: one JSON object per publication.
//!
//! Invalid records are reported with their line number, never silently
//! dropped. Parsing is order-preserving and deterministic.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};

use serde::Deserialize;
use serde_json::json;

use super::{AuthorRecord, DocType, FieldScheme, Publication, Reference};

/// One diagnostic tied to a corpus line. A diagnostic either rejects the
/// record (malformed JSON, unknown code, duplicate id, empty byline) or, for
/// references with no subject categories, reports a dropped reference while
/// the record itself is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordError {
    pub line: u64,
    pub reason: String,
}

impl RecordError {
    /// Tab-separated form for the diagnostic stream: `line_no<TAB>reason`.
    pub fn diagnostic_line(&self) -> String {
        format!("{}\t{}", self.line, self.reason)
    }
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

/// Outcome of a corpus parse: publications in input order plus diagnostics.
#[derive(Debug, Default)]
pub struct ParsedCorpus {
    pub publications: Vec<Publication>,
    pub errors: Vec<RecordError>,
}

#[derive(Deserialize)]
struct RawRecord {
    pub_id: String,
    year: i32,
    doc_type: String,
    authors: Vec<RawAuthor>,
    references: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct RawAuthor {
    id: String,
    #[serde(default)]
    field: Option<String>,
}

/// Parses a line-delimited corpus, resolving field and subject-category
/// codes against the scheme. IO failures abort; record-level problems are
/// collected as [`RecordError`]s.
pub fn parse_corpus(
    source: impl BufRead,
    scheme: &FieldScheme,
) -> std::io::Result<ParsedCorpus> {
    let mut out = ParsedCorpus::default();
    let mut seen_ids: HashSet<String> = HashSet::new();

    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let line_no = idx as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                out.errors.push(RecordError {
                    line: line_no,
                    reason: format!("invalid record: {e}"),
                });
                continue;
            }
        };
        if let Some(p) = resolve(raw, scheme, line_no, &mut out.errors) {
            if seen_ids.insert(p.pub_id.clone()) {
                out.publications.push(p);
            } else {
                out.errors.push(RecordError {
                    line: line_no,
                    reason: format!("duplicate pub_id '{}'", p.pub_id),
                });
            }
        }
    }
    Ok(out)
}

fn resolve(
    raw: RawRecord,
    scheme: &FieldScheme,
    line_no: u64,
    errors: &mut Vec<RecordError>,
) -> Option<Publication> {
    if raw.authors.is_empty() {
        errors.push(RecordError {
            line: line_no,
            reason: format!("publication '{}' has an empty author list", raw.pub_id),
        });
        return None;
    }

    let mut authors = Vec::with_capacity(raw.authors.len());
    for a in raw.authors {
        let field = match a.field {
            None => None,
            Some(code) => match scheme.field_id(&code) {
                Some(id) => Some(id),
                None => {
                    errors.push(RecordError {
                        line: line_no,
                        reason: format!("unknown field code '{code}'"),
                    });
                    return None;
                }
            },
        };
        authors.push(AuthorRecord {
            author_id: a.id,
            field,
        });
    }

    let mut references = Vec::with_capacity(raw.references.len());
    let mut dropped = 0usize;
    for codes in &raw.references {
        if codes.is_empty() {
            // A reference with no resolvable subject categories cannot enter
            // the counting; drop it and keep the record.
            dropped += 1;
            continue;
        }
        let mut ids = Vec::with_capacity(codes.len());
        for code in codes {
            match scheme.scs().id(code) {
                Some(id) => ids.push(id),
                None => {
                    errors.push(RecordError {
                        line: line_no,
                        reason: format!("unknown subject category code '{code}'"),
                    });
                    return None;
                }
            }
        }
        references.push(Reference::new(ids).expect("non-empty by construction"));
    }
    if dropped > 0 {
        errors.push(RecordError {
            line: line_no,
            reason: format!(
                "publication '{}': dropped {dropped} reference(s) with no subject categories",
                raw.pub_id
            ),
        });
    }

    Some(Publication {
        pub_id: raw.pub_id,
        year: raw.year,
        doc_type: DocType::from_wire(&raw.doc_type),
        authors,
        references,
    })
}

/// JSON value in the corpus wire shape, codes resolved back from the scheme.
pub fn publication_json(p: &Publication, scheme: &FieldScheme) -> serde_json::Value {
    json!({
        "pub_id": p.pub_id,
        "year": p.year,
        "doc_type": p.doc_type.wire(),
        "authors": p.authors.iter().map(|a| json!({
            "id": a.author_id,
            "field": a.field.map(|f| scheme.field(f).code.clone()),
        })).collect::<Vec<_>>(),
        "references": p.references.iter().map(|r| {
            r.sc_ids().iter().map(|&sc| scheme.scs().code(sc)).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

/// Writes publications in the line-delimited corpus format.
pub fn write_corpus(
    mut sink: impl Write,
    publications: &[Publication],
    scheme: &FieldScheme,
) -> std::io::Result<()> {
    for p in publications {
        serde_json::to_writer(&mut sink, &publication_json(p, scheme))?;
        sink.write_all(b"\n")?;
    }
    Ok(())
}
