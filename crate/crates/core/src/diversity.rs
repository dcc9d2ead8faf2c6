//! Reference-list diversity indicators: variety, balance (one minus the Gini
//! concentration), average disparity, the Rao-Stirling value and the
//! integrated diversity index `ID = 1 / Σ p_i p_j (1 - Dis_ij)`.

use serde::Deserialize;
use thiserror::Error;

use crate::corpus::{reference_sc_counts, CorpusError, Publication, ScCountVector, ScId};
use crate::disparity::DisparityMatrix;
use crate::format_f64;

#[derive(Debug, Error)]
pub enum DiversityError {
    #[error("subject category {sc} out of range for matrix of dim {dim}")]
    ScOutOfRange { sc: usize, dim: usize },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// All per-publication indicators plus the proportion vector they were
/// computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityScore {
    /// Number of distinct subject categories in the reference list.
    pub variety: usize,
    /// Evenness of the counts, in `[1/V, 1]`.
    pub balance: f64,
    /// Unweighted mean pairwise disparity over the present categories.
    pub avg_disparity: f64,
    /// `Σ_{i≠j} p_i p_j Dis_ij`, in `[0, 1)`.
    pub rao_stirling: f64,
    /// `1 / Σ_{i,j} p_i p_j (1 - Dis_ij)`, at least 1.
    pub integrated_diversity: f64,
    /// Sparse `p_i = x_i / X`, summing to 1, ascending by category id.
    pub proportions: Vec<(ScId, f64)>,
}

/// Number of distinct subject categories with a positive count.
pub fn variety(counts: &ScCountVector) -> usize {
    counts.len()
}

/// Balance `B = 1 - G` with the counts sorted non-decreasing and indexed
/// `i = 1..V`: `B = 1 - Σ(2i - V - 1) x_i / (V Σ x_i)`.
///
/// The weighted sum is accumulated in integers and divided once, so the
/// result does not depend on how sorting breaks ties.
pub fn balance(counts: &ScCountVector) -> f64 {
    let mut xs: Vec<u64> = counts.iter().map(|(_, n)| n).collect();
    xs.sort_unstable();
    let v = xs.len() as i128;
    let mut weighted = 0i128;
    for (idx, &x) in xs.iter().enumerate() {
        let i = idx as i128 + 1;
        weighted += (2 * i - v - 1) * x as i128;
    }
    let denom = v * counts.total() as i128;
    1.0 - (weighted as f64) / (denom as f64)
}

/// Unweighted average disparity over ordered pairs of distinct present
/// categories, `Σ_{i≠j} Dis_ij / (V (V - 1))`; zero when only one category
/// is present.
pub fn average_disparity(
    present: &[ScId],
    d: &DisparityMatrix,
) -> Result<f64, DiversityError> {
    check_range(present.iter().copied(), d)?;
    let v = present.len();
    if v < 2 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for &a in present {
        for &b in present {
            if a != b {
                sum += d.between(a, b);
            }
        }
    }
    Ok(sum / (v * (v - 1)) as f64)
}

/// `Σ_{i≠j} p_i p_j Dis_ij` over ordered pairs.
pub fn rao_stirling(
    counts: &ScCountVector,
    d: &DisparityMatrix,
) -> Result<f64, DiversityError> {
    let p = proportions(counts, d)?;
    let mut sum = 0.0;
    for &(a, pa) in &p {
        for &(b, pb) in &p {
            if a != b {
                sum += pa * pb * d.between(a, b);
            }
        }
    }
    Ok(sum)
}

/// Integrated diversity `1 / Σ p_i p_j (1 - Dis_ij)` summed over all pairs,
/// the self-pairs entering with `Dis_ii = 0`. A single-category reference
/// list scores exactly 1.
pub fn integrated_diversity(
    counts: &ScCountVector,
    d: &DisparityMatrix,
) -> Result<f64, DiversityError> {
    let p = proportions(counts, d)?;
    let mut denom = 0.0;
    for &(a, pa) in &p {
        for &(b, pb) in &p {
            let closeness = if a == b { 1.0 } else { 1.0 - d.between(a, b) };
            denom += pa * pb * closeness;
        }
    }
    // Σ p_i p_j (1 - Dis) ≤ (Σ p_i)² = 1 analytically; rounding may overshoot
    // by an ulp, which would put ID below its lower bound of 1.
    let denom = denom.min(1.0);
    assert!(denom > 0.0, "integrated diversity denominator must be positive");
    Ok(1.0 / denom)
}

/// Scores one publication with the reference list method.
pub fn score_publication(
    publication: &Publication,
    d: &DisparityMatrix,
) -> Result<DiversityScore, DiversityError> {
    let counts = reference_sc_counts(publication)?;
    score_counts(&counts, d)
}

/// Scores a pre-computed count vector (all four indicators plus the
/// Rao-Stirling value).
pub fn score_counts(
    counts: &ScCountVector,
    d: &DisparityMatrix,
) -> Result<DiversityScore, DiversityError> {
    let present: Vec<ScId> = counts.present().collect();
    let p = proportions(counts, d)?;
    Ok(DiversityScore {
        variety: variety(counts),
        balance: balance(counts),
        avg_disparity: average_disparity(&present, d)?,
        rao_stirling: rao_stirling(counts, d)?,
        integrated_diversity: integrated_diversity(counts, d)?,
        proportions: p,
    })
}

fn check_range(
    ids: impl IntoIterator<Item = ScId>,
    d: &DisparityMatrix,
) -> Result<(), DiversityError> {
    for sc in ids {
        if sc.0 >= d.dim() {
            return Err(DiversityError::ScOutOfRange {
                sc: sc.0,
                dim: d.dim(),
            });
        }
    }
    Ok(())
}

fn proportions(
    counts: &ScCountVector,
    d: &DisparityMatrix,
) -> Result<Vec<(ScId, f64)>, DiversityError> {
    check_range(counts.present(), d)?;
    let total = counts.total() as f64;
    Ok(counts.iter().map(|(sc, n)| (sc, n as f64 / total)).collect())
}

/// Wire form of one scored publication, as emitted on the score stream.
/// Reals are printed with 17 significant digits so output bytes are stable.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ScoreRecord {
    pub pub_id: String,
    pub variety: usize,
    pub balance: f64,
    pub avg_disparity: f64,
    pub rao_stirling: f64,
    pub integrated_diversity: f64,
}

impl ScoreRecord {
    pub fn new(pub_id: impl Into<String>, score: &DiversityScore) -> Self {
        Self {
            pub_id: pub_id.into(),
            variety: score.variety,
            balance: score.balance,
            avg_disparity: score.avg_disparity,
            rao_stirling: score.rao_stirling,
            integrated_diversity: score.integrated_diversity,
        }
    }

    pub fn to_json_line(&self) -> String {
        format!(
            r#"{{"pub_id":{},"variety":{},"balance":{},"avg_disparity":{},"rao_stirling":{},"integrated_diversity":{}}}"#,
            serde_json::to_string(&self.pub_id).expect("string encodes"),
            self.variety,
            format_f64(self.balance),
            format_f64(self.avg_disparity),
            format_f64(self.rao_stirling),
            format_f64(self.integrated_diversity),
        )
    }

    pub fn parse_json_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}
