//! Classification registries: subject categories on the reference side,
//! fields grouped under disciplines on the author side.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use thiserror::Error;

/// Index into the subject-category registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScId(pub usize);

/// Index into the field list of a [`FieldScheme`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldId(pub usize);

/// Index into the discipline list of a [`FieldScheme`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DisciplineId(pub usize);

impl fmt::Display for ScId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("failed reading registry: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: field '{field}' names unknown discipline '{discipline}'")]
    UnknownDiscipline {
        line: u64,
        field: String,
        discipline: String,
    },
    #[error("duplicate {kind} code '{code}'")]
    DuplicateCode { kind: &'static str, code: String },
    #[error("registry holds no {0}")]
    Empty(&'static str),
}

/// Ordered subject-category registry with code lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScRegistry {
    entries: Vec<(String, String)>,
    by_code: HashMap<String, ScId>,
}

impl ScRegistry {
    pub fn new(entries: Vec<(String, String)>) -> Result<Self, SchemeError> {
        if entries.is_empty() {
            return Err(SchemeError::Empty("subject categories"));
        }
        let mut by_code = HashMap::with_capacity(entries.len());
        for (i, (code, _)) in entries.iter().enumerate() {
            if by_code.insert(code.clone(), ScId(i)).is_some() {
                return Err(SchemeError::DuplicateCode {
                    kind: "subject category",
                    code: code.clone(),
                });
            }
        }
        Ok(Self { entries, by_code })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn id(&self, code: &str) -> Option<ScId> {
        self.by_code.get(code).copied()
    }

    pub fn code(&self, id: ScId) -> &str {
        &self.entries[id.0].0
    }

    pub fn name(&self, id: ScId) -> &str {
        &self.entries[id.0].1
    }

    pub fn iter(&self) -> impl Iterator<Item = (ScId, &str, &str)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, (c, n))| (ScId(i), c.as_str(), n.as_str()))
    }
}

/// One author-side field, resolved to its discipline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    pub code: String,
    pub name: String,
    pub discipline: DisciplineId,
}

/// One discipline grouping several fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discipline {
    pub code: String,
    pub name: String,
}

/// Two-level author classification (fields under disciplines) plus the
/// reference-side subject-category registry. Immutable after load.
#[derive(Debug, Clone)]
pub struct FieldScheme {
    scs: ScRegistry,
    fields: Vec<Field>,
    disciplines: Vec<Discipline>,
    field_by_code: HashMap<String, FieldId>,
}

impl FieldScheme {
    /// Assembles a scheme from raw parts, validating code uniqueness and
    /// that every field resolves to a known discipline.
    pub fn from_parts(
        disciplines: Vec<(String, String)>,
        fields: Vec<(String, String, String)>,
        scs: Vec<(String, String)>,
    ) -> Result<Self, SchemeError> {
        let scs = ScRegistry::new(scs)?;
        if disciplines.is_empty() {
            return Err(SchemeError::Empty("disciplines"));
        }
        if fields.is_empty() {
            return Err(SchemeError::Empty("fields"));
        }

        let mut discipline_by_code = HashMap::with_capacity(disciplines.len());
        let disciplines: Vec<Discipline> = disciplines
            .into_iter()
            .map(|(code, name)| Discipline { code, name })
            .collect();
        for (i, d) in disciplines.iter().enumerate() {
            if discipline_by_code
                .insert(d.code.clone(), DisciplineId(i))
                .is_some()
            {
                return Err(SchemeError::DuplicateCode {
                    kind: "discipline",
                    code: d.code.clone(),
                });
            }
        }

        let mut field_by_code = HashMap::with_capacity(fields.len());
        let mut resolved = Vec::with_capacity(fields.len());
        for (i, (code, name, disc_code)) in fields.into_iter().enumerate() {
            let discipline = *discipline_by_code.get(&disc_code).ok_or_else(|| {
                SchemeError::UnknownDiscipline {
                    line: 0,
                    field: code.clone(),
                    discipline: disc_code.clone(),
                }
            })?;
            if field_by_code.insert(code.clone(), FieldId(i)).is_some() {
                return Err(SchemeError::DuplicateCode {
                    kind: "field",
                    code,
                });
            }
            resolved.push(Field {
                code,
                name,
                discipline,
            });
        }

        Ok(Self {
            scs,
            fields: resolved,
            disciplines,
            field_by_code,
        })
    }

    pub fn scs(&self) -> &ScRegistry {
        &self.scs
    }

    pub fn n_fields(&self) -> usize {
        self.fields.len()
    }

    pub fn n_disciplines(&self) -> usize {
        self.disciplines.len()
    }

    pub fn field(&self, id: FieldId) -> &Field {
        &self.fields[id.0]
    }

    pub fn discipline(&self, id: DisciplineId) -> &Discipline {
        &self.disciplines[id.0]
    }

    pub fn field_id(&self, code: &str) -> Option<FieldId> {
        self.field_by_code.get(code).copied()
    }

    /// Discipline that the given field belongs to.
    pub fn discipline_of(&self, field: FieldId) -> DisciplineId {
        self.fields[field.0].discipline
    }

    pub fn fields(&self) -> impl Iterator<Item = (FieldId, &Field)> {
        self.fields.iter().enumerate().map(|(i, f)| (FieldId(i), f))
    }

    pub fn disciplines(&self) -> impl Iterator<Item = (DisciplineId, &Discipline)> {
        self.disciplines
            .iter()
            .enumerate()
            .map(|(i, d)| (DisciplineId(i), d))
    }
}

/// Loads the two-section field registry (`[disciplines]` then `[fields]`)
/// together with the subject-category registry file.
///
/// Registry lines are tab-separated: `code<TAB>name` for disciplines and
/// subject categories, `code<TAB>name<TAB>discipline_code` for fields.
/// Blank lines are skipped.
pub fn load_field_scheme(
    scheme: impl BufRead,
    sc_registry: impl BufRead,
) -> Result<FieldScheme, SchemeError> {
    let scs = parse_sc_registry(sc_registry)?;
    let (disciplines, fields) = parse_scheme_sections(scheme)?;
    FieldScheme::from_parts(disciplines, fields, scs)
}

/// Loads a standalone subject-category registry (`code<TAB>name` lines).
pub fn load_sc_registry(source: impl BufRead) -> Result<ScRegistry, SchemeError> {
    ScRegistry::new(parse_sc_registry(source)?)
}

/// Writes the field registry in the two-section format read back by
/// [`load_field_scheme`].
pub fn write_field_scheme(
    mut sink: impl std::io::Write,
    scheme: &FieldScheme,
) -> std::io::Result<()> {
    writeln!(sink, "[disciplines]")?;
    for (_, d) in scheme.disciplines() {
        writeln!(sink, "{}\t{}", d.code, d.name)?;
    }
    writeln!(sink, "[fields]")?;
    for (_, f) in scheme.fields() {
        let disc = &scheme.discipline(f.discipline).code;
        writeln!(sink, "{}\t{}\t{}", f.code, f.name, disc)?;
    }
    Ok(())
}

/// Writes a subject-category registry as `code<TAB>name` lines.
pub fn write_sc_registry(
    mut sink: impl std::io::Write,
    registry: &ScRegistry,
) -> std::io::Result<()> {
    for (_, code, name) in registry.iter() {
        writeln!(sink, "{code}\t{name}")?;
    }
    Ok(())
}

fn parse_sc_registry(source: impl BufRead) -> Result<Vec<(String, String)>, SchemeError> {
    let mut entries = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let line_no = idx as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (code, name) = line.split_once('\t').ok_or_else(|| SchemeError::Malformed {
            line: line_no,
            message: "expected code<TAB>name".into(),
        })?;
        entries.push((code.trim().to_owned(), name.trim().to_owned()));
    }
    Ok(entries)
}

enum Section {
    None,
    Disciplines,
    Fields,
}

type RawParts = (Vec<(String, String)>, Vec<(String, String, String)>);

fn parse_scheme_sections(source: impl BufRead) -> Result<RawParts, SchemeError> {
    let mut disciplines = Vec::new();
    let mut fields: Vec<(String, String, String, u64)> = Vec::new();
    let mut section = Section::None;

    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let line_no = idx as u64 + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match trimmed {
            "[disciplines]" => {
                section = Section::Disciplines;
                continue;
            }
            "[fields]" => {
                section = Section::Fields;
                continue;
            }
            _ => {}
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        match section {
            Section::None => {
                return Err(SchemeError::Malformed {
                    line: line_no,
                    message: "data before a [disciplines] or [fields] section header".into(),
                })
            }
            Section::Disciplines => {
                if cols.len() != 2 {
                    return Err(SchemeError::Malformed {
                        line: line_no,
                        message: "expected code<TAB>name".into(),
                    });
                }
                disciplines.push((cols[0].to_owned(), cols[1].to_owned()));
            }
            Section::Fields => {
                if cols.len() != 3 {
                    return Err(SchemeError::Malformed {
                        line: line_no,
                        message: "expected code<TAB>name<TAB>discipline_code".into(),
                    });
                }
                fields.push((cols[0].to_owned(), cols[1].to_owned(), cols[2].to_owned(), line_no));
            }
        }
    }

    // Resolve dangling discipline references here so the error can carry the
    // offending line number.
    let known: HashMap<&str, ()> = disciplines.iter().map(|(c, _)| (c.as_str(), ())).collect();
    for (field, _, disc, line_no) in &fields {
        if !known.contains_key(disc.as_str()) {
            return Err(SchemeError::UnknownDiscipline {
                line: *line_no,
                field: field.clone(),
                discipline: disc.clone(),
            });
        }
    }

    Ok((
        disciplines,
        fields.into_iter().map(|(c, n, d, _)| (c, n, d)).collect(),
    ))
}
