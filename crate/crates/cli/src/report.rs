//! Assembles the full report set from joined score and label streams:
//! grouped summary tables, comparison arrows, descriptive statistics,
//! integrated-diversity distributions and the top-k ranking.

use std::collections::BTreeMap;

use idiv_core::aggregate::{
    comparison_csv, comparison_json, compare_tables, descriptive_stats, histograms_csv,
    histograms_json, id_distribution, id_distributions, stats_csv, stats_json, summarize_by,
    summary_table_csv, summary_table_json, top_k_by_id, top_k_csv, top_k_json, GroupKey,
    GroupSpec, Histogram, PaperFacts, Provenance,
};
use idiv_core::classify::SubpopulationLabel;

use crate::util::{CliError, Result};

/// Parses a `--group-by` value: `discipline`, `authors`, `fields`,
/// `disciplines` or `fields-authors`, each optionally suffixed `:cap`.
pub fn parse_group_spec(value: &str) -> Result<GroupSpec> {
    let (key_part, cap_part) = match value.split_once(':') {
        Some((k, c)) => (k, Some(c)),
        None => (value, None),
    };
    let key = match key_part {
        "discipline" => GroupKey::ByDiscipline,
        "authors" => GroupKey::ByAuthorCount,
        "fields" => GroupKey::ByFieldCount,
        "disciplines" => GroupKey::ByDisciplineCount,
        "fields-authors" => GroupKey::ByFieldCountThenAuthorCount,
        other => return Err(CliError::input(format!("unknown group key '{other}'"))),
    };
    let bucket_cap = match cap_part {
        None => None,
        Some(c) => Some(
            c.parse::<u64>()
                .map_err(|_| CliError::input(format!("bad bucket cap '{c}'")))?,
        ),
    };
    Ok(GroupSpec { key, bucket_cap })
}

pub struct ReportOptions {
    pub bin_width: f64,
    pub top_k: usize,
    pub custom_group: Option<GroupSpec>,
}

/// Renders every report file as (name, bytes), in name order. Tables over
/// empty subsets are omitted, mirroring how populated rows work within one
/// table.
pub fn assemble(
    facts: &[PaperFacts],
    options: &ReportOptions,
    prov: &Provenance,
) -> Result<Vec<(String, Vec<u8>)>> {
    let mut files: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    fn add_table(
        files: &mut BTreeMap<String, Vec<u8>>,
        prov: &Provenance,
        name: &str,
        rows: &[idiv_core::aggregate::SummaryRow],
    ) {
        if rows.is_empty() {
            return;
        }
        files.insert(
            format!("{name}.csv"),
            summary_table_csv(rows, prov).into_bytes(),
        );
        files.insert(
            format!("{name}.json"),
            pretty(&summary_table_json(rows, prov)),
        );
    }

    let subset = |label: SubpopulationLabel| -> Vec<PaperFacts> {
        facts.iter().filter(|f| f.label == label).cloned().collect()
    };
    let single_author = subset(SubpopulationLabel::SingleAuthor);
    let multi_single = subset(SubpopulationLabel::MultiAuthorSingleField);
    let multi_field = subset(SubpopulationLabel::MultiField);

    let agg = |e: idiv_core::aggregate::AggregateError| CliError::input(e.to_string());

    // by-UDA averages for the two single-field subpopulations, plus arrows
    let by_discipline = GroupSpec::new(GroupKey::ByDiscipline);
    let t_single = summarize_by(&single_author, &by_discipline).map_err(agg)?;
    let t_multi_single = summarize_by(&multi_single, &by_discipline).map_err(agg)?;
    add_table(&mut files, prov, "single_author_by_discipline", &t_single);
    add_table(&mut files, prov, "multi_author_single_field_by_discipline", &t_multi_single);
    if !t_single.is_empty() && !t_multi_single.is_empty() {
        let cmp = compare_tables(&t_single, &t_multi_single);
        files.insert(
            "multi_vs_single_author_arrows.csv".into(),
            comparison_csv(&cmp, prov).into_bytes(),
        );
        files.insert(
            "multi_vs_single_author_arrows.json".into(),
            pretty(&comparison_json(&cmp, prov)),
        );
    }

    // single-field papers (one or more authors) by author count
    let single_field: Vec<PaperFacts> = single_author
        .iter()
        .chain(multi_single.iter())
        .cloned()
        .collect();
    let t_by_authors =
        summarize_by(&single_field, &GroupSpec::capped(GroupKey::ByAuthorCount, 5))
            .map_err(agg)?;
    add_table(&mut files, prov, "single_field_by_authors", &t_by_authors);

    // multi-field papers by field count, by (field, author) pairs and by
    // discipline count
    add_table(
        &mut files,
        prov,
        "multi_field_by_fields",
        &summarize_by(&multi_field, &GroupSpec::capped(GroupKey::ByFieldCount, 5))
            .map_err(agg)?,
    );
    add_table(
        &mut files,
        prov,
        "multi_field_by_fields_authors",
        &summarize_by(
            &multi_field,
            &GroupSpec::new(GroupKey::ByFieldCountThenAuthorCount),
        )
        .map_err(agg)?,
    );
    add_table(
        &mut files,
        prov,
        "multi_field_by_disciplines",
        &summarize_by(
            &multi_field,
            &GroupSpec::capped(GroupKey::ByDisciplineCount, 3),
        )
        .map_err(agg)?,
    );

    if let Some(spec) = &options.custom_group {
        add_table(
            &mut files,
            prov,
            "custom_grouping",
            &summarize_by(facts, spec).map_err(agg)?,
        );
    }

    let stats = descriptive_stats(facts);
    if !stats.is_empty() {
        files.insert(
            "descriptive_stats.csv".into(),
            stats_csv(&stats, prov).into_bytes(),
        );
        files.insert(
            "descriptive_stats.json".into(),
            pretty(&stats_json(&stats, prov)),
        );
    }

    let by_subpop = id_distributions(facts, options.bin_width).map_err(agg)?;
    if !by_subpop.is_empty() {
        let named: BTreeMap<String, Histogram> = by_subpop
            .into_iter()
            .map(|(label, h)| (label.label().to_owned(), h))
            .collect();
        files.insert(
            "id_distribution_by_subpopulation.csv".into(),
            histograms_csv(&named, prov).into_bytes(),
        );
        files.insert(
            "id_distribution_by_subpopulation.json".into(),
            pretty(&histograms_json(&named, prov)),
        );
    }

    // distribution over multi-field papers, partitioned by field count
    let mut by_fields: BTreeMap<String, Histogram> = BTreeMap::new();
    let field_counts: std::collections::BTreeSet<usize> =
        multi_field.iter().map(|f| f.n_fields).collect();
    for n in field_counts {
        let ids: Vec<f64> = multi_field
            .iter()
            .filter(|f| f.n_fields == n)
            .map(|f| f.integrated_diversity)
            .collect();
        by_fields.insert(
            format!("fields={n}"),
            id_distribution(&ids, options.bin_width).map_err(agg)?,
        );
    }
    if !by_fields.is_empty() {
        files.insert(
            "id_distribution_by_field_count.csv".into(),
            histograms_csv(&by_fields, prov).into_bytes(),
        );
        files.insert(
            "id_distribution_by_field_count.json".into(),
            pretty(&histograms_json(&by_fields, prov)),
        );
    }

    if !single_author.is_empty() {
        let top = top_k_by_id(&single_author, options.top_k).map_err(agg)?;
        files.insert(
            "top_single_author.csv".into(),
            top_k_csv(&top, prov).into_bytes(),
        );
        files.insert("top_single_author.json".into(), pretty(&top_k_json(&top, prov)));
    }

    Ok(files.into_iter().collect())
}

fn pretty(value: &serde_json::Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report values encode");
    bytes.push(b'\n');
    bytes
}
