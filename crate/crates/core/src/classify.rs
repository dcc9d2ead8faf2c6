//! The authors method: profile a publication's byline and assign it to one
//! of the three subpopulations (single-author, multi-author single-field,
//! multi-field).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{DisciplineId, FieldId, FieldScheme, Publication};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("publication '{pub_id}': author '{author_id}' is unclassified")]
    UnclassifiedAuthor { pub_id: String, author_id: String },
    #[error("publication '{0}' has no authors")]
    NoAuthors(String),
}

/// Distinct-count profile of a byline. Authors are deduplicated by id, so
/// `n_authors` counts people.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BylineProfile {
    pub n_authors: usize,
    pub n_fields: usize,
    pub n_disciplines: usize,
    pub field_ids: BTreeSet<FieldId>,
    pub discipline_ids: BTreeSet<DisciplineId>,
}

impl BylineProfile {
    /// The byline's discipline when it spans exactly one.
    pub fn sole_discipline(&self) -> Option<DisciplineId> {
        if self.n_disciplines == 1 {
            self.discipline_ids.iter().next().copied()
        } else {
            None
        }
    }
}

/// Subpopulation assignment, a total function of the byline profile.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum SubpopulationLabel {
    SingleAuthor,
    MultiAuthorSingleField,
    MultiField,
}

impl SubpopulationLabel {
    pub const ALL: [Self; 3] = [
        Self::SingleAuthor,
        Self::MultiAuthorSingleField,
        Self::MultiField,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::SingleAuthor => "single_author",
            Self::MultiAuthorSingleField => "multi_author_single_field",
            Self::MultiField => "multi_field",
        }
    }
}

impl fmt::Display for SubpopulationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Profiles a byline: distinct authors, distinct fields and distinct
/// disciplines. Every author must carry a field; unclassified bylines are
/// expected to be filtered upstream.
pub fn byline_profile(
    publication: &Publication,
    scheme: &FieldScheme,
) -> Result<BylineProfile, ClassifyError> {
    if publication.authors.is_empty() {
        return Err(ClassifyError::NoAuthors(publication.pub_id.clone()));
    }
    let mut seen = BTreeSet::new();
    let mut field_ids = BTreeSet::new();
    for author in &publication.authors {
        if !seen.insert(author.author_id.as_str()) {
            continue; // duplicated byline entry for the same person
        }
        let field = author.field.ok_or_else(|| ClassifyError::UnclassifiedAuthor {
            pub_id: publication.pub_id.clone(),
            author_id: author.author_id.clone(),
        })?;
        field_ids.insert(field);
    }
    let discipline_ids: BTreeSet<DisciplineId> = field_ids
        .iter()
        .map(|&f| scheme.discipline_of(f))
        .collect();
    Ok(BylineProfile {
        n_authors: seen.len(),
        n_fields: field_ids.len(),
        n_disciplines: discipline_ids.len(),
        field_ids,
        discipline_ids,
    })
}

/// Assigns the subpopulation: one author can never be interdisciplinary,
/// nor can co-authors sharing a single field; two or more fields make the
/// publication multi-field.
pub fn classify(profile: &BylineProfile) -> SubpopulationLabel {
    if profile.n_authors == 1 {
        SubpopulationLabel::SingleAuthor
    } else if profile.n_fields == 1 {
        SubpopulationLabel::MultiAuthorSingleField
    } else {
        SubpopulationLabel::MultiField
    }
}

/// Wire form of one classified publication. `discipline` carries the byline
/// discipline code when the byline spans exactly one discipline; it feeds
/// the by-discipline report tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub pub_id: String,
    pub label: SubpopulationLabel,
    pub n_authors: usize,
    pub n_fields: usize,
    pub n_disciplines: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discipline: Option<String>,
}

impl LabelRecord {
    pub fn new(
        pub_id: impl Into<String>,
        profile: &BylineProfile,
        scheme: &FieldScheme,
    ) -> Self {
        Self {
            pub_id: pub_id.into(),
            label: classify(profile),
            n_authors: profile.n_authors,
            n_fields: profile.n_fields,
            n_disciplines: profile.n_disciplines,
            discipline: profile
                .sole_discipline()
                .map(|d| scheme.discipline(d).code.clone()),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("label record encodes")
    }

    pub fn parse_json_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}
