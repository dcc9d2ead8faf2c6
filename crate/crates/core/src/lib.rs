//! Batch analytics for measuring the interdisciplinarity of research output.
//!
//! Two measurement routes are implemented over a corpus of publications:
//!
//! * the **reference-list method** — disciplinary diversity of the cited
//!   references, decomposed into variety, balance, disparity and the
//!   integrated diversity index (module [`diversity`], with the cognitive
//!   distance matrix built in [`disparity`]);
//! * the **authors method** — disciplinary diversity of the byline, used to
//!   split a corpus into single-author, multi-author single-field and
//!   multi-field subpopulations (module [`classify`]).
//!
//! Module [`corpus`] owns the data model and file formats, [`aggregate`]
//! produces grouped summary tables and distributions, and [`synth`] generates
//! deterministic synthetic corpora with independently computed golden scores
//! for validation.

pub mod aggregate;
pub mod classify;
pub mod corpus;
pub mod disparity;
pub mod diversity;
pub mod synth;

/// Toolkit version recorded in report provenance headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats a real with 17 significant digits, enough to round-trip any f64.
///
/// All file formats that carry reals (matrix files, score records, report
/// tables) go through this single formatter so emitted bytes are stable.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}
