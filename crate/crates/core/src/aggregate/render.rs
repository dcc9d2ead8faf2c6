//! Report rendering: every table is emitted both as CSV (snake_case header
//! row) and as a JSON document, each carrying a provenance header.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{Histogram, StatsBySubpopulation, SummaryRow, TableComparison, TopEntry};
use crate::format_f64;

/// Input digests and toolkit version stamped onto every report. The
/// standard-deviation divisor is recorded so consumers can convert.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub corpus_digest: String,
    pub matrix_digest: String,
    pub version: String,
}

impl Provenance {
    pub fn header_line(&self) -> String {
        format!(
            "# corpus_sha256={} matrix_sha256={} toolkit_version={} stdev=population",
            self.corpus_digest, self.matrix_digest, self.version
        )
    }

    fn json(&self) -> Value {
        json!({
            "corpus_sha256": self.corpus_digest,
            "matrix_sha256": self.matrix_digest,
            "toolkit_version": self.version,
            "stdev": "population",
        })
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn summary_table_csv(rows: &[SummaryRow], prov: &Provenance) -> String {
    let mut out = String::new();
    out.push_str(&prov.header_line());
    out.push('\n');
    out.push_str("group_label,n_papers,share,avg_variety,avg_balance,avg_disparity,avg_id\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_field(&r.group_label),
            r.n_papers,
            format_f64(r.share),
            format_f64(r.avg_variety),
            format_f64(r.avg_balance),
            format_f64(r.avg_disparity),
            format_f64(r.avg_id),
        ));
    }
    out
}

pub fn summary_table_json(rows: &[SummaryRow], prov: &Provenance) -> Value {
    json!({
        "provenance": prov.json(),
        "rows": rows.iter().map(|r| json!({
            "group_label": r.group_label,
            "n_papers": r.n_papers,
            "share": r.share,
            "avg_variety": r.avg_variety,
            "avg_balance": r.avg_balance,
            "avg_disparity": r.avg_disparity,
            "avg_id": r.avg_id,
        })).collect::<Vec<_>>(),
    })
}

pub fn comparison_csv(cmp: &TableComparison, prov: &Provenance) -> String {
    let mut out = String::new();
    out.push_str(&prov.header_line());
    out.push('\n');
    out.push_str("group_label,indicator,base,other,arrow\n");
    for r in &cmp.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_field(&r.group_label),
            r.indicator.column(),
            format_f64(r.base),
            format_f64(r.other),
            r.arrow,
        ));
    }
    for label in &cmp.base_only {
        out.push_str(&format!("{},unmatched_in_other,,,\n", csv_field(label)));
    }
    for label in &cmp.other_only {
        out.push_str(&format!("{},unmatched_in_base,,,\n", csv_field(label)));
    }
    out
}

pub fn comparison_json(cmp: &TableComparison, prov: &Provenance) -> Value {
    json!({
        "provenance": prov.json(),
        "rows": cmp.rows.iter().map(|r| json!({
            "group_label": r.group_label,
            "indicator": r.indicator.column(),
            "base": r.base,
            "other": r.other,
            "arrow": r.arrow.label(),
        })).collect::<Vec<_>>(),
        "base_only": cmp.base_only,
        "other_only": cmp.other_only,
    })
}

pub fn stats_csv(stats: &StatsBySubpopulation, prov: &Provenance) -> String {
    let mut out = String::new();
    out.push_str(&prov.header_line());
    out.push('\n');
    out.push_str("subpopulation,indicator,average,median,st_dev,min,max\n");
    for (label, per_indicator) in stats {
        for (ind, s) in per_indicator {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                label,
                ind.label(),
                format_f64(s.average),
                format_f64(s.median),
                format_f64(s.st_dev),
                format_f64(s.min),
                format_f64(s.max),
            ));
        }
    }
    out
}

pub fn stats_json(stats: &StatsBySubpopulation, prov: &Provenance) -> Value {
    json!({
        "provenance": prov.json(),
        "subpopulations": stats.iter().map(|(label, per_indicator)| {
            json!({
                "subpopulation": label.label(),
                "indicators": per_indicator.iter().map(|(ind, s)| json!({
                    "indicator": ind.label(),
                    "average": s.average,
                    "median": s.median,
                    "st_dev": s.st_dev,
                    "min": s.min,
                    "max": s.max,
                })).collect::<Vec<_>>(),
            })
        }).collect::<Vec<_>>(),
    })
}

/// Histogram renderer over any named partition (subpopulations, field
/// counts). The exact-unity share is emitted as its own row.
pub fn histograms_csv(groups: &BTreeMap<String, Histogram>, prov: &Provenance) -> String {
    let mut out = String::new();
    out.push_str(&prov.header_line());
    out.push('\n');
    out.push_str("group,kind,bin_lo,bin_hi,count,share\n");
    for (name, h) in groups {
        out.push_str(&format!(
            "{},unity,1,1,{},{}\n",
            csv_field(name),
            h.unity_count,
            format_f64(h.share_at_unity()),
        ));
        for (i, &count) in h.counts.iter().enumerate() {
            out.push_str(&format!(
                "{},bin,{},{},{},{}\n",
                csv_field(name),
                format_f64(h.bin_edges[i]),
                format_f64(h.bin_edges[i + 1]),
                count,
                format_f64(count as f64 / h.total as f64),
            ));
        }
    }
    out
}

pub fn histograms_json(groups: &BTreeMap<String, Histogram>, prov: &Provenance) -> Value {
    json!({
        "provenance": prov.json(),
        "groups": groups.iter().map(|(name, h)| json!({
            "group": name,
            "bin_width": h.bin_width,
            "bin_edges": h.bin_edges,
            "counts": h.counts,
            "unity_count": h.unity_count,
            "share_at_unity": h.share_at_unity(),
            "total": h.total,
        })).collect::<Vec<_>>(),
    })
}

pub fn top_k_csv(entries: &[TopEntry], prov: &Provenance) -> String {
    let mut out = String::new();
    out.push_str(&prov.header_line());
    out.push('\n');
    out.push_str("rank,pub_id,integrated_diversity,variety\n");
    for (i, e) in entries.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            i + 1,
            csv_field(&e.pub_id),
            format_f64(e.integrated_diversity),
            e.variety,
        ));
    }
    out
}

pub fn top_k_json(entries: &[TopEntry], prov: &Provenance) -> Value {
    json!({
        "provenance": prov.json(),
        "rows": entries.iter().enumerate().map(|(i, e)| json!({
            "rank": i + 1,
            "pub_id": e.pub_id,
            "integrated_diversity": e.integrated_diversity,
            "variety": e.variety,
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::{compare_tables, id_distribution};

    fn prov() -> Provenance {
        Provenance {
            corpus_digest: "abc".into(),
            matrix_digest: "def".into(),
            version: "0.1.0".into(),
        }
    }

    fn row(label: &str) -> SummaryRow {
        SummaryRow {
            group_label: label.into(),
            n_papers: 2,
            share: 1.0,
            avg_variety: 3.0,
            avg_balance: 0.5,
            avg_disparity: 0.25,
            avg_id: 2.0,
        }
    }

    #[test]
    fn csv_has_provenance_then_header_then_rows() {
        let csv = summary_table_csv(&[row("fields=2 authors=3")], &prov());
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# corpus_sha256=abc matrix_sha256=def"));
        assert!(lines[0].contains("stdev=population"));
        assert_eq!(
            lines[1],
            "group_label,n_papers,share,avg_variety,avg_balance,avg_disparity,avg_id"
        );
        assert!(lines[2].starts_with("fields=2 authors=3,2,"));
    }

    #[test]
    fn fields_with_commas_are_quoted() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn arrows_encode_as_words() {
        let base = vec![row("g")];
        let mut other = vec![row("g")];
        other[0].avg_id = 3.0;
        let cmp = compare_tables(&base, &other);
        let csv = comparison_csv(&cmp, &prov());
        assert!(csv.contains("g,avg_id,"));
        assert!(csv.lines().any(|l| l.ends_with(",up")));
        assert!(csv.lines().any(|l| l.ends_with(",equal")));
        let doc = comparison_json(&cmp, &prov());
        assert_eq!(doc["rows"][3]["arrow"], "up");
    }

    #[test]
    fn histogram_rows_carry_unity_and_bins() {
        let h = id_distribution(&[1.0, 1.3, 2.6], 0.5).unwrap();
        let mut groups = BTreeMap::new();
        groups.insert("single_author".to_owned(), h);
        let csv = histograms_csv(&groups, &prov());
        assert!(csv.contains("single_author,unity,1,1,1,"));
        assert!(csv.lines().filter(|l| l.contains(",bin,")).count() >= 2);
        let doc = histograms_json(&groups, &prov());
        assert_eq!(doc["groups"][0]["unity_count"], 1);
    }

    #[test]
    fn json_documents_embed_provenance() {
        let doc = summary_table_json(&[row("g")], &prov());
        assert_eq!(doc["provenance"]["corpus_sha256"], "abc");
        assert_eq!(doc["provenance"]["stdev"], "population");
        assert_eq!(doc["rows"][0]["group_label"], "g");
    }
}
