//! Grouped indicator averages, cross-table comparison arrows, descriptive
//! statistics, integrated-diversity distributions and top-k rankings over a
//! scored and classified corpus.

mod render;

pub use render::{
    comparison_csv, comparison_json, histograms_csv, histograms_json, stats_csv, stats_json,
    summary_table_csv, summary_table_json, top_k_csv, top_k_json, Provenance,
};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::classify::{LabelRecord, SubpopulationLabel};
use crate::diversity::ScoreRecord;

#[derive(Debug, Error)]
pub enum AggregateError {
    #[error("score for '{0}' has no matching label record")]
    MissingLabel(String),
    #[error("duplicate pub_id '{0}' in score stream")]
    DuplicateScore(String),
    #[error("publication '{pub_id}' is missing attribute '{attribute}' required by the grouping")]
    MissingAttribute { pub_id: String, attribute: &'static str },
    #[error("bucket cap must be at least 2, got {0}")]
    BadBucketCap(u64),
    #[error("bin width must be positive, got {0}")]
    BadBinWidth(f64),
    #[error("top-k requires k >= 1")]
    BadTopK,
}

/// One publication with everything the aggregations need: indicator values,
/// subpopulation label and byline attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperFacts {
    pub pub_id: String,
    pub variety: usize,
    pub balance: f64,
    pub avg_disparity: f64,
    pub rao_stirling: f64,
    pub integrated_diversity: f64,
    pub label: SubpopulationLabel,
    pub n_authors: usize,
    pub n_fields: usize,
    pub n_disciplines: usize,
    pub discipline: Option<String>,
}

impl PaperFacts {
    pub fn from_parts(score: &ScoreRecord, label: &LabelRecord) -> Self {
        Self {
            pub_id: score.pub_id.clone(),
            variety: score.variety,
            balance: score.balance,
            avg_disparity: score.avg_disparity,
            rao_stirling: score.rao_stirling,
            integrated_diversity: score.integrated_diversity,
            label: label.label,
            n_authors: label.n_authors,
            n_fields: label.n_fields,
            n_disciplines: label.n_disciplines,
            discipline: label.discipline.clone(),
        }
    }

    /// Joins score and label streams on `pub_id`. Every score must have a
    /// label; labels without scores are ignored (their papers were never
    /// scoreable).
    pub fn join(
        scores: &[ScoreRecord],
        labels: &[LabelRecord],
    ) -> Result<Vec<PaperFacts>, AggregateError> {
        let by_id: HashMap<&str, &LabelRecord> =
            labels.iter().map(|l| (l.pub_id.as_str(), l)).collect();
        let mut seen: HashMap<&str, ()> = HashMap::with_capacity(scores.len());
        let mut rows = Vec::with_capacity(scores.len());
        for s in scores {
            if seen.insert(s.pub_id.as_str(), ()).is_some() {
                return Err(AggregateError::DuplicateScore(s.pub_id.clone()));
            }
            let label = by_id
                .get(s.pub_id.as_str())
                .ok_or_else(|| AggregateError::MissingLabel(s.pub_id.clone()))?;
            rows.push(PaperFacts::from_parts(s, label));
        }
        Ok(rows)
    }
}

/// Grouping axis for summary tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKey {
    ByDiscipline,
    ByAuthorCount,
    ByFieldCount,
    ByDisciplineCount,
    ByFieldCountThenAuthorCount,
}

/// Grouping request; `bucket_cap` pools everything at or above the cap into
/// a final "N or more" bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupSpec {
    pub key: GroupKey,
    pub bucket_cap: Option<u64>,
}

impl GroupSpec {
    pub fn new(key: GroupKey) -> Self {
        Self {
            key,
            bucket_cap: None,
        }
    }

    pub fn capped(key: GroupKey, cap: u64) -> Self {
        Self {
            key,
            bucket_cap: Some(cap),
        }
    }
}

/// A numeric group, either exact or pooled at the cap. The derived ordering
/// puts exact values ascending and the capped bucket last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Bucket {
    Exact(u64),
    Capped(u64),
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact(n) => write!(f, "{n}"),
            Self::Capped(n) => write!(f, "{n} or more"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum GroupValue {
    Bucket(Bucket),
    Pair(Bucket, Bucket),
    Name(String),
}

impl fmt::Display for GroupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bucket(b) => b.fmt(f),
            Self::Pair(fields, authors) => write!(f, "fields={fields} authors={authors}"),
            Self::Name(s) => f.write_str(s),
        }
    }
}

fn bucketed(n: u64, cap: Option<u64>) -> Bucket {
    match cap {
        Some(c) if n >= c => Bucket::Capped(c),
        _ => Bucket::Exact(n),
    }
}

/// One row of a summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub group_label: String,
    pub n_papers: u64,
    pub share: f64,
    pub avg_variety: f64,
    pub avg_balance: f64,
    pub avg_disparity: f64,
    pub avg_id: f64,
}

#[derive(Default)]
struct Accumulator {
    n: u64,
    variety: f64,
    balance: f64,
    disparity: f64,
    id: f64,
}

/// Groups papers by the requested key and averages the four indicators per
/// group.
/// Rows come out sorted by group label (numeric ascending, capped bucket
/// last, names lexicographic); empty groups are simply absent.
///
/// Accumulation is a left fold over (group, pub_id)-sorted input, so the
/// result is bit-identical no matter how the caller ordered the rows.
pub fn summarize_by(
    rows: &[PaperFacts],
    spec: &GroupSpec,
) -> Result<Vec<SummaryRow>, AggregateError> {
    if let Some(cap) = spec.bucket_cap {
        if cap < 2 {
            return Err(AggregateError::BadBucketCap(cap));
        }
    }
    let mut keyed: Vec<(GroupValue, &PaperFacts)> = rows
        .iter()
        .map(|row| group_value(row, spec).map(|key| (key, row)))
        .collect::<Result<_, _>>()?;
    keyed.sort_by(|(ka, a), (kb, b)| ka.cmp(kb).then_with(|| a.pub_id.cmp(&b.pub_id)));

    let mut groups: BTreeMap<GroupValue, Accumulator> = BTreeMap::new();
    for (key, row) in keyed {
        let acc = groups.entry(key).or_default();
        acc.n += 1;
        acc.variety += row.variety as f64;
        acc.balance += row.balance;
        acc.disparity += row.avg_disparity;
        acc.id += row.integrated_diversity;
    }
    let total = rows.len() as f64;
    Ok(groups
        .into_iter()
        .map(|(key, acc)| {
            let n = acc.n as f64;
            SummaryRow {
                group_label: key.to_string(),
                n_papers: acc.n,
                share: n / total,
                avg_variety: acc.variety / n,
                avg_balance: acc.balance / n,
                avg_disparity: acc.disparity / n,
                avg_id: acc.id / n,
            }
        })
        .collect())
}

fn group_value(row: &PaperFacts, spec: &GroupSpec) -> Result<GroupValue, AggregateError> {
    let cap = spec.bucket_cap;
    Ok(match spec.key {
        GroupKey::ByDiscipline => {
            let d = row
                .discipline
                .as_ref()
                .ok_or_else(|| AggregateError::MissingAttribute {
                    pub_id: row.pub_id.clone(),
                    attribute: "discipline",
                })?;
            GroupValue::Name(d.clone())
        }
        GroupKey::ByAuthorCount => GroupValue::Bucket(bucketed(row.n_authors as u64, cap)),
        GroupKey::ByFieldCount => GroupValue::Bucket(bucketed(row.n_fields as u64, cap)),
        GroupKey::ByDisciplineCount => {
            GroupValue::Bucket(bucketed(row.n_disciplines as u64, cap))
        }
        GroupKey::ByFieldCountThenAuthorCount => GroupValue::Pair(
            bucketed(row.n_fields as u64, cap),
            bucketed(row.n_authors as u64, cap),
        ),
    })
}

/// The four table indicators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Indicator {
    Variety,
    Balance,
    AvgDisparity,
    IntegratedDiversity,
}

impl Indicator {
    pub const ALL: [Self; 4] = [
        Self::Variety,
        Self::Balance,
        Self::AvgDisparity,
        Self::IntegratedDiversity,
    ];

    /// Column name in summary tables.
    pub fn column(self) -> &'static str {
        match self {
            Self::Variety => "avg_variety",
            Self::Balance => "avg_balance",
            Self::AvgDisparity => "avg_disparity",
            Self::IntegratedDiversity => "avg_id",
        }
    }

    /// Per-paper indicator name.
    pub fn label(self) -> &'static str {
        match self {
            Self::Variety => "variety",
            Self::Balance => "balance",
            Self::AvgDisparity => "avg_disparity",
            Self::IntegratedDiversity => "integrated_diversity",
        }
    }

    fn of_row(self, row: &SummaryRow) -> f64 {
        match self {
            Self::Variety => row.avg_variety,
            Self::Balance => row.avg_balance,
            Self::AvgDisparity => row.avg_disparity,
            Self::IntegratedDiversity => row.avg_id,
        }
    }

    fn of_paper(self, p: &PaperFacts) -> f64 {
        match self {
            Self::Variety => p.variety as f64,
            Self::Balance => p.balance,
            Self::AvgDisparity => p.avg_disparity,
            Self::IntegratedDiversity => p.integrated_diversity,
        }
    }
}

/// Direction of `other` relative to `base`, with equality at 1e-12.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arrow {
    Up,
    Down,
    Equal,
}

impl Arrow {
    pub fn label(self) -> &'static str {
        match self {
            Self::Up => "up",
            Self::Down => "down",
            Self::Equal => "equal",
        }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

const ARROW_EQUALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ArrowRow {
    pub group_label: String,
    pub indicator: Indicator,
    pub base: f64,
    pub other: f64,
    pub arrow: Arrow,
}

/// Comparison of two summary tables joined on group label. Labels present in
/// only one table are reported, not treated as errors.
#[derive(Debug, Clone, PartialEq)]
pub struct TableComparison {
    pub rows: Vec<ArrowRow>,
    pub base_only: Vec<String>,
    pub other_only: Vec<String>,
}

pub fn compare_tables(base: &[SummaryRow], other: &[SummaryRow]) -> TableComparison {
    let other_by_label: HashMap<&str, &SummaryRow> =
        other.iter().map(|r| (r.group_label.as_str(), r)).collect();
    let base_labels: HashMap<&str, ()> =
        base.iter().map(|r| (r.group_label.as_str(), ())).collect();

    let mut rows = Vec::new();
    let mut base_only = Vec::new();
    for b in base {
        match other_by_label.get(b.group_label.as_str()) {
            None => base_only.push(b.group_label.clone()),
            Some(o) => {
                for ind in Indicator::ALL {
                    let (bv, ov) = (ind.of_row(b), ind.of_row(o));
                    let arrow = if (ov - bv).abs() <= ARROW_EQUALITY_TOL {
                        Arrow::Equal
                    } else if ov > bv {
                        Arrow::Up
                    } else {
                        Arrow::Down
                    };
                    rows.push(ArrowRow {
                        group_label: b.group_label.clone(),
                        indicator: ind,
                        base: bv,
                        other: ov,
                        arrow,
                    });
                }
            }
        }
    }
    let other_only = other
        .iter()
        .filter(|o| !base_labels.contains_key(o.group_label.as_str()))
        .map(|o| o.group_label.clone())
        .collect();
    TableComparison {
        rows,
        base_only,
        other_only,
    }
}

/// Five-number summary per indicator. The standard deviation uses the
/// population divisor N; the median is the midpoint of the two central
/// values for even counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatSummary {
    pub average: f64,
    pub median: f64,
    pub st_dev: f64,
    pub min: f64,
    pub max: f64,
}

pub fn stat_summary(values: &[f64]) -> Option<StatSummary> {
    if values.is_empty() {
        return None;
    }
    // Sums run over the sorted values, making the summary independent of
    // input order.
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let variance = sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        let hi = sorted.len() / 2;
        (sorted[hi - 1] + sorted[hi]) / 2.0
    };
    Some(StatSummary {
        average: mean,
        median,
        st_dev: variance.sqrt(),
        min: sorted[0],
        max: *sorted.last().unwrap(),
    })
}

pub type StatsBySubpopulation = BTreeMap<SubpopulationLabel, BTreeMap<Indicator, StatSummary>>;

/// Descriptive statistics of the four indicators per subpopulation. Empty
/// subpopulations are omitted from the result.
pub fn descriptive_stats(rows: &[PaperFacts]) -> StatsBySubpopulation {
    let mut out = StatsBySubpopulation::new();
    for label in SubpopulationLabel::ALL {
        let members: Vec<&PaperFacts> = rows.iter().filter(|r| r.label == label).collect();
        if members.is_empty() {
            continue;
        }
        let mut per_indicator = BTreeMap::new();
        for ind in Indicator::ALL {
            let values: Vec<f64> = members.iter().map(|r| ind.of_paper(r)).collect();
            per_indicator.insert(ind, stat_summary(&values).expect("non-empty"));
        }
        out.insert(label, per_indicator);
    }
    out
}

/// Distribution of integrated diversity over one population. Papers with
/// `ID = 1` exactly are held out of the bins and counted separately.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    /// `counts.len() + 1` edges starting at 1; empty when nothing was binned.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub unity_count: u64,
    pub total: u64,
}

impl Histogram {
    pub fn share_at_unity(&self) -> f64 {
        self.unity_count as f64 / self.total as f64
    }

    pub fn shares(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.total as f64)
            .collect()
    }
}

/// Bins integrated-diversity values above 1 on `[1, max]` with the given
/// width; exact ones are counted apart.
pub fn id_distribution(ids: &[f64], bin_width: f64) -> Result<Histogram, AggregateError> {
    if bin_width.is_nan() || bin_width <= 0.0 {
        return Err(AggregateError::BadBinWidth(bin_width));
    }
    let total = ids.len() as u64;
    let mut unity_count = 0u64;
    let mut indices = Vec::new();
    for &id in ids {
        if id == 1.0 {
            unity_count += 1;
        } else {
            indices.push(((id - 1.0) / bin_width).floor().max(0.0) as usize);
        }
    }
    let n_bins = indices.iter().max().map_or(0, |&m| m + 1);
    let mut counts = vec![0u64; n_bins];
    for idx in indices {
        counts[idx] += 1;
    }
    let bin_edges = if n_bins == 0 {
        Vec::new()
    } else {
        (0..=n_bins).map(|k| 1.0 + k as f64 * bin_width).collect()
    };
    Ok(Histogram {
        bin_width,
        bin_edges,
        counts,
        unity_count,
        total,
    })
}

/// One histogram per subpopulation present in the input.
pub fn id_distributions(
    rows: &[PaperFacts],
    bin_width: f64,
) -> Result<BTreeMap<SubpopulationLabel, Histogram>, AggregateError> {
    let mut out = BTreeMap::new();
    for label in SubpopulationLabel::ALL {
        let ids: Vec<f64> = rows
            .iter()
            .filter(|r| r.label == label)
            .map(|r| r.integrated_diversity)
            .collect();
        if ids.is_empty() {
            continue;
        }
        out.insert(label, id_distribution(&ids, bin_width)?);
    }
    Ok(out)
}

/// One entry of the top-k ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct TopEntry {
    pub pub_id: String,
    pub integrated_diversity: f64,
    pub variety: usize,
}

/// The k papers with the highest integrated diversity, ties broken by
/// descending variety then ascending pub_id. Asking for more than the
/// population returns everything, ranked.
pub fn top_k_by_id(rows: &[PaperFacts], k: usize) -> Result<Vec<TopEntry>, AggregateError> {
    if k == 0 {
        return Err(AggregateError::BadTopK);
    }
    let mut ranked: Vec<&PaperFacts> = rows.iter().collect();
    ranked.sort_by(|a, b| {
        b.integrated_diversity
            .total_cmp(&a.integrated_diversity)
            .then(b.variety.cmp(&a.variety))
            .then(a.pub_id.cmp(&b.pub_id))
    });
    Ok(ranked
        .into_iter()
        .take(k)
        .map(|r| TopEntry {
            pub_id: r.pub_id.clone(),
            integrated_diversity: r.integrated_diversity,
            variety: r.variety,
        })
        .collect())
}
