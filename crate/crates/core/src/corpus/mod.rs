//! Bibliographic data model, corpus ingestion, inclusion filters and the
//! full-counting assignment of references to subject categories.

mod parse;
mod scheme;

pub use parse::{parse_corpus, publication_json, write_corpus, ParsedCorpus, RecordError};
pub use scheme::{
    load_field_scheme, load_sc_registry, write_field_scheme, write_sc_registry, Discipline,
    DisciplineId, Field, FieldId, FieldScheme, ScId, ScRegistry, SchemeError,
};

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("reference carries no subject categories")]
    EmptyReference,
    #[error("publication '{0}' has no references; filter before counting")]
    NoReferences(String),
    #[error("count vector is empty")]
    EmptyCounts,
}

/// Document type as carried by the corpus format.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DocType {
    Article,
    ProceedingsPaper,
    BookChapter,
    Other(String),
}

impl DocType {
    pub fn from_wire(s: &str) -> Self {
        match s {
            "article" => Self::Article,
            "proceedings" => Self::ProceedingsPaper,
            "chapter" => Self::BookChapter,
            other => Self::Other(other.to_owned()),
        }
    }

    pub fn wire(&self) -> &str {
        match self {
            Self::Article => "article",
            Self::ProceedingsPaper => "proceedings",
            Self::BookChapter => "chapter",
            Self::Other(s) => s,
        }
    }
}

/// One byline entry. `field` is `None` when the record marks the author as
/// unclassified (e.g. a foreign co-author outside the field registry).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorRecord {
    pub author_id: String,
    pub field: Option<FieldId>,
}

/// A cited work, reduced to the subject categories of its journal.
/// The set is non-empty, sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reference {
    sc_ids: Vec<ScId>,
}

impl Reference {
    pub fn new(ids: impl IntoIterator<Item = ScId>) -> Result<Self, CorpusError> {
        let set: BTreeSet<ScId> = ids.into_iter().collect();
        if set.is_empty() {
            return Err(CorpusError::EmptyReference);
        }
        Ok(Self {
            sc_ids: set.into_iter().collect(),
        })
    }

    pub fn sc_ids(&self) -> &[ScId] {
        &self.sc_ids
    }
}

/// One bibliographic record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Publication {
    pub pub_id: String,
    pub year: i32,
    pub doc_type: DocType,
    pub authors: Vec<AuthorRecord>,
    pub references: Vec<Reference>,
}

impl Publication {
    pub fn all_authors_classified(&self) -> bool {
        self.authors.iter().all(|a| a.field.is_some())
    }
}

/// Sparse subject-category counts `x_i` for one reference list, with the
/// full-counting total `X = Σ x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScCountVector {
    counts: BTreeMap<ScId, u64>,
    total: u64,
}

impl ScCountVector {
    /// Collects counts, summing duplicate keys and dropping zero entries.
    /// Errors when nothing positive remains.
    pub fn new(counts: impl IntoIterator<Item = (ScId, u64)>) -> Result<Self, CorpusError> {
        let mut map = BTreeMap::new();
        for (sc, n) in counts {
            if n == 0 {
                continue;
            }
            match map.entry(sc) {
                Entry::Vacant(e) => {
                    e.insert(n);
                }
                Entry::Occupied(mut e) => *e.get_mut() += n,
            }
        }
        if map.is_empty() {
            return Err(CorpusError::EmptyCounts);
        }
        let total = map.values().sum();
        Ok(Self { counts: map, total })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct categories present.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ScId, u64)> + '_ {
        self.counts.iter().map(|(&sc, &n)| (sc, n))
    }

    /// The distinct categories present, in ascending id order.
    pub fn present(&self) -> impl Iterator<Item = ScId> + '_ {
        self.counts.keys().copied()
    }
}

/// Full-counting assignment: every subject category of every reference
/// receives one count, so the total may exceed the number of references.
pub fn reference_sc_counts(publication: &Publication) -> Result<ScCountVector, CorpusError> {
    if publication.references.is_empty() {
        return Err(CorpusError::NoReferences(publication.pub_id.clone()));
    }
    ScCountVector::new(
        publication
            .references
            .iter()
            .flat_map(|r| r.sc_ids().iter().map(|&sc| (sc, 1))),
    )
}

/// Inclusion filters applied before scoring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterConfig {
    pub allowed_doc_types: BTreeSet<DocType>,
    pub require_references: bool,
    pub require_all_authors_classified: bool,
}

impl Default for FilterConfig {
    /// Research document types only, at least one usable reference, and a
    /// fully classified byline.
    fn default() -> Self {
        Self {
            allowed_doc_types: [
                DocType::Article,
                DocType::ProceedingsPaper,
                DocType::BookChapter,
            ]
            .into_iter()
            .collect(),
            require_references: true,
            require_all_authors_classified: true,
        }
    }
}

/// Why a publication was dropped. Checks run in this order and a record is
/// attributed to the first failing rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExclusionReason {
    DocType,
    UnclassifiedAuthors,
    NoReferences,
}

impl ExclusionReason {
    pub fn label(self) -> &'static str {
        match self {
            Self::DocType => "doc_type",
            Self::UnclassifiedAuthors => "unclassified_authors",
            Self::NoReferences => "no_references",
        }
    }
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Keeps exactly the publications passing every enabled filter and counts
/// the dropped ones by first failing rule, so that
/// `kept.len() + report.values().sum() == input.len()`.
pub fn apply_filters(
    publications: Vec<Publication>,
    cfg: &FilterConfig,
) -> (Vec<Publication>, BTreeMap<ExclusionReason, u64>) {
    let mut kept = Vec::with_capacity(publications.len());
    let mut report = BTreeMap::new();
    for p in publications {
        match first_failure(&p, cfg) {
            None => kept.push(p),
            Some(reason) => *report.entry(reason).or_insert(0) += 1,
        }
    }
    (kept, report)
}

fn first_failure(p: &Publication, cfg: &FilterConfig) -> Option<ExclusionReason> {
    if !cfg.allowed_doc_types.contains(&p.doc_type) {
        return Some(ExclusionReason::DocType);
    }
    if cfg.require_all_authors_classified && !p.all_authors_classified() {
        return Some(ExclusionReason::UnclassifiedAuthors);
    }
    if cfg.require_references && p.references.is_empty() {
        return Some(ExclusionReason::NoReferences);
    }
    None
}
