//! Cognitive distance between subject categories: cross-citation counting,
//! cosine similarity over citing profiles, and the disparity matrix
//! `Dis = 1 - S` with text-file persistence.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::corpus::ScId;
use crate::format_f64;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("citation record {record}: subject category {sc} out of range (dim {dim})")]
    ScOutOfRange { record: usize, sc: usize, dim: usize },
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("header/dim mismatch: header says {header}, file has {found} rows")]
    DimMismatch { header: usize, found: usize },
    #[error("row {row} has {found} entries, expected {dim}")]
    NonSquare { row: usize, found: usize, dim: usize },
    #[error("entry ({row},{col}) out of range: {value}")]
    EntryOutOfRange { row: usize, col: usize, value: f64 },
    #[error("matrix is asymmetric at ({row},{col})")]
    Asymmetric { row: usize, col: usize },
    #[error("nonzero diagonal at {row}: {value}")]
    NonzeroDiagonal { row: usize, value: f64 },
    #[error("expected kind '{expected}', file says '{found}'")]
    KindMismatch { expected: &'static str, found: String },
}

/// Dense square grid of f64, row-major. Shared storage for the three
/// matrix kinds.
#[derive(Debug, Clone, PartialEq)]
struct Grid {
    dim: usize,
    values: Vec<f64>,
}

impl Grid {
    fn zeros(dim: usize) -> Self {
        Self {
            dim,
            values: vec![0.0; dim * dim],
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.dim + j] = v;
    }
}

/// Raw cross-citation counts: `count(i, j)` citations issued from subject
/// category `i` to subject category `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCitationMatrix {
    dim: usize,
    counts: Vec<u64>,
}

impl CrossCitationMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.dim + j]
    }

    /// Sum of all cells.
    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }
}

/// One citation event between two sets of subject categories (the citing
/// journal's and the cited journal's).
#[derive(Debug, Clone)]
pub struct CitationRecord {
    pub citing: Vec<ScId>,
    pub cited: Vec<ScId>,
}

/// Accumulates citation records under full counting: each record adds one
/// count to every (citing, cited) pair of its cartesian product. The result
/// is independent of record order.
pub fn build_cross_citation_matrix(
    records: impl IntoIterator<Item = CitationRecord>,
    dim: usize,
) -> Result<CrossCitationMatrix, MatrixError> {
    let mut counts = vec![0u64; dim * dim];
    for (idx, record) in records.into_iter().enumerate() {
        for sc in record.citing.iter().chain(record.cited.iter()) {
            if sc.0 >= dim {
                return Err(MatrixError::ScOutOfRange {
                    record: idx,
                    sc: sc.0,
                    dim,
                });
            }
        }
        for &i in &record.citing {
            for &j in &record.cited {
                counts[i.0 * dim + j.0] += 1;
            }
        }
    }
    Ok(CrossCitationMatrix { dim, counts })
}

/// Symmetric cosine similarities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    grid: Grid,
}

impl SimilarityMatrix {
    pub fn dim(&self) -> usize {
        self.grid.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.grid.get(i, j)
    }

    pub fn save(&self, sink: impl Write) -> Result<(), MatrixError> {
        save_grid(&self.grid, KIND_SIMILARITY, sink)
    }

    pub fn load(source: impl BufRead) -> Result<Self, MatrixError> {
        let grid = load_grid(source, KIND_SIMILARITY)?;
        validate_unit_range(&grid)?;
        validate_symmetry(&grid)?;
        Ok(Self { grid })
    }
}

/// Cosine similarity between citing profiles (matrix rows, diagonal
/// included). A category that never cites has similarity 0 to every other
/// category and self-similarity 1 by convention.
pub fn cosine_similarity(m: &CrossCitationMatrix) -> SimilarityMatrix {
    let dim = m.dim;
    let rows: Vec<&[u64]> = m.counts.chunks(dim.max(1)).collect();
    let norms: Vec<f64> = rows
        .iter()
        .map(|r| r.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt())
        .collect();

    let mut grid = Grid::zeros(dim);
    for i in 0..dim {
        grid.set(i, i, 1.0);
        for j in (i + 1)..dim {
            let v = if norms[i] == 0.0 || norms[j] == 0.0 {
                0.0
            } else {
                let dot: f64 = rows[i]
                    .iter()
                    .zip(rows[j])
                    .map(|(&a, &b)| (a as f64) * (b as f64))
                    .sum();
                (dot / (norms[i] * norms[j])).clamp(0.0, 1.0)
            };
            grid.set(i, j, v);
            grid.set(j, i, v);
        }
    }
    SimilarityMatrix { grid }
}

/// Pairwise cognitive distance `1 - S` in `[0, 1]`, zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DisparityMatrix {
    grid: Grid,
}

impl DisparityMatrix {
    pub fn dim(&self) -> usize {
        self.grid.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.grid.get(i, j)
    }

    #[inline]
    pub fn between(&self, a: ScId, b: ScId) -> f64 {
        self.grid.get(a.0, b.0)
    }

    /// Builds a matrix from explicit rows, enforcing the type invariants
    /// (square, entries in `[0, 1]`, symmetric, zero diagonal).
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, MatrixError> {
        let dim = rows.len();
        let mut grid = Grid::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(MatrixError::NonSquare {
                    row: i,
                    found: row.len(),
                    dim,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                grid.set(i, j, v);
            }
        }
        validate_unit_range(&grid)?;
        validate_symmetry(&grid)?;
        validate_zero_diagonal(&grid)?;
        Ok(Self { grid })
    }

    pub fn save(&self, sink: impl Write) -> Result<(), MatrixError> {
        save_grid(&self.grid, KIND_DISPARITY, sink)
    }

    pub fn load(source: impl BufRead) -> Result<Self, MatrixError> {
        let grid = load_grid(source, KIND_DISPARITY)?;
        validate_unit_range(&grid)?;
        validate_symmetry(&grid)?;
        validate_zero_diagonal(&grid)?;
        Ok(Self { grid })
    }
}

/// Elementwise complement of the similarity matrix.
pub fn to_disparity(s: &SimilarityMatrix) -> DisparityMatrix {
    let dim = s.dim();
    let mut grid = Grid::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            grid.set(i, j, 1.0 - s.get(i, j));
        }
    }
    DisparityMatrix { grid }
}

const KIND_DISPARITY: &str = "disparity";
const KIND_SIMILARITY: &str = "similarity";

const SYMMETRY_TOL: f64 = 1e-12;

fn validate_unit_range(grid: &Grid) -> Result<(), MatrixError> {
    for i in 0..grid.dim {
        for j in 0..grid.dim {
            let v = grid.get(i, j);
            if !(0.0..=1.0).contains(&v) || v.is_nan() {
                return Err(MatrixError::EntryOutOfRange {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
    }
    Ok(())
}

fn validate_symmetry(grid: &Grid) -> Result<(), MatrixError> {
    for i in 0..grid.dim {
        for j in (i + 1)..grid.dim {
            if (grid.get(i, j) - grid.get(j, i)).abs() > SYMMETRY_TOL {
                return Err(MatrixError::Asymmetric { row: i, col: j });
            }
        }
    }
    Ok(())
}

fn validate_zero_diagonal(grid: &Grid) -> Result<(), MatrixError> {
    for i in 0..grid.dim {
        let v = grid.get(i, i);
        if v.abs() > SYMMETRY_TOL {
            return Err(MatrixError::NonzeroDiagonal { row: i, value: v });
        }
    }
    Ok(())
}

fn save_grid(grid: &Grid, kind: &str, mut sink: impl Write) -> Result<(), MatrixError> {
    writeln!(sink, "dim={} kind={kind}", grid.dim)?;
    let mut line = String::new();
    for i in 0..grid.dim {
        line.clear();
        for j in 0..grid.dim {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&format_f64(grid.get(i, j)));
        }
        writeln!(sink, "{line}")?;
    }
    Ok(())
}

fn load_grid(source: impl BufRead, expected_kind: &'static str) -> Result<Grid, MatrixError> {
    let mut lines = source.lines();
    let header = lines.next().ok_or(MatrixError::Malformed {
        line: 1,
        message: "empty file".into(),
    })??;
    let (dim, kind) = parse_header(&header)?;
    if kind != expected_kind {
        return Err(MatrixError::KindMismatch {
            expected: expected_kind,
            found: kind,
        });
    }

    let mut grid = Grid::zeros(dim);
    let mut rows = 0usize;
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line_no = idx as u64 + 2;
        if line.trim().is_empty() {
            continue;
        }
        if rows >= dim {
            return Err(MatrixError::DimMismatch {
                header: dim,
                found: rows + 1,
            });
        }
        let mut cols = 0usize;
        for token in line.split_ascii_whitespace() {
            if cols >= dim {
                cols += 1;
                break;
            }
            let v: f64 = token.parse().map_err(|_| MatrixError::Malformed {
                line: line_no,
                message: format!("bad entry '{token}'"),
            })?;
            grid.set(rows, cols, v);
            cols += 1;
        }
        if cols != dim {
            return Err(MatrixError::NonSquare {
                row: rows,
                found: cols,
                dim,
            });
        }
        rows += 1;
    }
    if rows != dim {
        return Err(MatrixError::DimMismatch {
            header: dim,
            found: rows,
        });
    }
    Ok(grid)
}

fn parse_header(header: &str) -> Result<(usize, String), MatrixError> {
    let malformed = |msg: &str| MatrixError::Malformed {
        line: 1,
        message: msg.to_owned(),
    };
    let mut dim = None;
    let mut kind = None;
    for part in header.split_ascii_whitespace() {
        match part.split_once('=') {
            Some(("dim", v)) => {
                dim = Some(v.parse::<usize>().map_err(|_| malformed("bad dim"))?)
            }
            Some(("kind", v)) => kind = Some(v.to_owned()),
            _ => return Err(malformed("expected 'dim=<N> kind=<kind>'")),
        }
    }
    match (dim, kind) {
        (Some(d), Some(k)) => Ok((d, k)),
        _ => Err(malformed("expected 'dim=<N> kind=<kind>'")),
    }
}
