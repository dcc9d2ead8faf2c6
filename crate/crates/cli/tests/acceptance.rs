//! Acceptance suite. Each test pins one release criterion at its stated
//! tolerance and prints a pass line; run with `--nocapture` to see the
//! measurements.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use rand::prelude::IndexedRandom;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use idiv_core::aggregate::{
    descriptive_stats, summarize_by, GroupKey, GroupSpec, Indicator, PaperFacts,
};
use idiv_core::classify::{byline_profile, classify, LabelRecord, SubpopulationLabel};
use idiv_core::corpus::{
    apply_filters, AuthorRecord, DocType, FieldId, FilterConfig, Publication, Reference,
    ScCountVector, ScId,
};
use idiv_core::disparity::{cosine_similarity, to_disparity, CrossCitationMatrix, DisparityMatrix};
use idiv_core::diversity::{
    balance, integrated_diversity, rao_stirling, score_counts, score_publication, ScoreRecord,
};
use idiv_core::synth::{generate_corpus, generate_disparity, CountRange, SynthParams};

fn pass(line: &str) {
    println!("[PASS] {line}");
}

fn random_disparity(dim: usize, rng: &mut ChaCha8Rng) -> DisparityMatrix {
    let mut rows = vec![vec![0.0f64; dim]; dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v: f64 = rng.random_range(0.0..=1.0);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    DisparityMatrix::from_rows(rows).expect("random matrix is valid")
}

fn random_counts(dim: usize, max_count: u64, rng: &mut ChaCha8Rng) -> ScCountVector {
    let v = rng.random_range(1..=dim);
    let ids = index::sample(rng, dim, v);
    ScCountVector::new(
        ids.into_iter()
            .map(|i| (ScId(i), rng.random_range(1..=max_count))),
    )
    .expect("non-empty counts")
}

/// Criterion 1: |ID - 1/(1-RS)| <= 1e-9 over >= 10,000 random inputs in
/// under five seconds.
#[test]
fn criterion_01_identity_link() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let dim = rng.random_range(2..=40);
        let d = random_disparity(dim, &mut rng);
        let counts = random_counts(dim, 1_000_000, &mut rng);
        let rs = rao_stirling(&counts, &d).unwrap();
        let id = integrated_diversity(&counts, &d).unwrap();
        let delta = (id - 1.0 / (1.0 - rs)).abs();
        worst = worst.max(delta);
        assert!(delta <= 1e-9, "identity violated: id={id} rs={rs} delta={delta}");
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "identity sweep took {elapsed:.2}s, budget is 5s");
    pass(&format!(
        "criterion 1: identity link, 10000 inputs, worst delta {worst:.2e}, {elapsed:.2}s"
    ));
}

/// Criterion 2: balance equals the mean-absolute-difference Gini within
/// 1e-12 over >= 10,000 random count vectors (V up to 252, counts to 1e6).
#[test]
fn criterion_02_gini_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let v = rng.random_range(1..=252usize);
        let xs: Vec<u64> = (0..v).map(|_| rng.random_range(1..=1_000_000)).collect();
        let counts =
            ScCountVector::new(xs.iter().enumerate().map(|(i, &n)| (ScId(i), n))).unwrap();
        let mean = xs.iter().sum::<u64>() as f64 / v as f64;
        let mut abs_diff = 0.0;
        for &a in &xs {
            for &b in &xs {
                abs_diff += (a as f64 - b as f64).abs();
            }
        }
        let oracle = 1.0 - abs_diff / (2.0 * (v * v) as f64 * mean);
        let delta = (balance(&counts) - oracle).abs();
        worst = worst.max(delta);
        assert!(delta <= 1e-12, "balance disagrees with Gini oracle by {delta}");
    }
    pass(&format!(
        "criterion 2: Gini oracle, 10000 vectors, worst delta {worst:.2e}"
    ));
}

/// Criterion 3: indicator ranges hold for all random inputs — V in
/// [1, n_scs], B in [1/V, 1], avg disparity in [0,1], ID >= 1, matrix
/// entries in [0,1] with zero diagonal.
#[test]
fn criterion_03_range_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for round in 0..10_000 {
        let dim = rng.random_range(1..=30);
        let d = if round % 2 == 0 {
            random_disparity(dim, &mut rng)
        } else {
            let blocks = rng.random_range(1..=dim);
            generate_disparity(dim, blocks, 0.1, 0.9, 0.05, rng.random()).unwrap()
        };
        for i in 0..dim {
            assert_eq!(d.get(i, i), 0.0);
            for j in 0..dim {
                assert!((0.0..=1.0).contains(&d.get(i, j)));
            }
        }
        let counts = random_counts(dim, 1_000_000, &mut rng);
        let s = score_counts(&counts, &d).unwrap();
        assert!(s.variety >= 1 && s.variety <= dim);
        let v = s.variety as f64;
        assert!(s.balance >= 1.0 / v && s.balance <= 1.0, "B={} V={v}", s.balance);
        assert!((0.0..=1.0).contains(&s.avg_disparity));
        assert!((0.0..1.0).contains(&s.rao_stirling));
        assert!(s.integrated_diversity >= 1.0);
    }
    pass("criterion 3: range suite over 10000 random inputs");
}

/// Criterion 4: single-category publications score exactly
/// (V, B, avg dis, RS, ID) = (1, 1, 0, 0, 1).
#[test]
fn criterion_04_single_category_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..10_000 {
        let dim = rng.random_range(1..=40);
        let d = random_disparity(dim, &mut rng);
        let sc = rng.random_range(0..dim);
        let n_refs = rng.random_range(1..=50);
        let publication = Publication {
            pub_id: "b".into(),
            year: 2010,
            doc_type: DocType::Article,
            authors: vec![AuthorRecord {
                author_id: "a".into(),
                field: Some(FieldId(0)),
            }],
            references: (0..n_refs)
                .map(|_| Reference::new([ScId(sc)]).unwrap())
                .collect(),
        };
        let s = score_publication(&publication, &d).unwrap();
        assert_eq!(s.variety, 1);
        assert_eq!(s.balance, 1.0);
        assert_eq!(s.avg_disparity, 0.0);
        assert_eq!(s.rao_stirling, 0.0);
        assert_eq!(s.integrated_diversity, 1.0);
    }
    pass("criterion 4: single-category boundary is exact over 10000 publications");
}

fn facts_for(out: &idiv_core::synth::SynthOutput) -> (Vec<ScoreRecord>, Vec<LabelRecord>) {
    let scores: Vec<ScoreRecord> = out
        .publications
        .iter()
        .map(|p| ScoreRecord::new(&p.pub_id, &score_publication(p, &out.disparity).unwrap()))
        .collect();
    let labels: Vec<LabelRecord> = out
        .publications
        .iter()
        .map(|p| LabelRecord::new(&p.pub_id, &byline_profile(p, &out.scheme).unwrap(), &out.scheme))
        .collect();
    (scores, labels)
}

/// Criterion 5: on a 10,000-publication synthetic corpus every score agrees
/// with the independent brute-force evaluator within 1e-9, and the report
/// tables agree with brute-force group means within 1e-9.
#[test]
fn criterion_05_cross_implementation_oracle() {
    let params = SynthParams {
        seed: 505,
        pubs_per_subpop: [3400, 3300, 3300],
        ..SynthParams::default()
    };
    let out = generate_corpus(&params).unwrap();
    assert_eq!(out.publications.len(), 10_000);

    let (scores, labels) = facts_for(&out);
    for (s, g) in scores.iter().zip(&out.golden) {
        assert_eq!(s.pub_id, g.pub_id);
        assert_eq!(s.variety, g.variety, "{}", s.pub_id);
        assert!((s.balance - g.balance).abs() <= 1e-9, "{}", s.pub_id);
        assert!((s.avg_disparity - g.avg_disparity).abs() <= 1e-9, "{}", s.pub_id);
        assert!((s.rao_stirling - g.rao_stirling).abs() <= 1e-9, "{}", s.pub_id);
        assert!(
            (s.integrated_diversity - g.integrated_diversity).abs() <= 1e-9,
            "{}",
            s.pub_id
        );
    }

    // report tables against brute-force means over the golden stream
    let facts = PaperFacts::join(&scores, &labels).unwrap();
    let golden_by_id: BTreeMap<&str, &ScoreRecord> =
        out.golden.iter().map(|g| (g.pub_id.as_str(), g)).collect();

    let check_table = |table: &[idiv_core::aggregate::SummaryRow],
                       group_of: &dyn Fn(&LabelRecord) -> Option<String>| {
        let mut expected: BTreeMap<String, (u64, f64, f64, f64, f64)> = BTreeMap::new();
        for label in &labels {
            let Some(group) = group_of(label) else { continue };
            let g = golden_by_id[label.pub_id.as_str()];
            let e = expected.entry(group).or_insert((0, 0.0, 0.0, 0.0, 0.0));
            e.0 += 1;
            e.1 += g.variety as f64;
            e.2 += g.balance;
            e.3 += g.avg_disparity;
            e.4 += g.integrated_diversity;
        }
        assert_eq!(table.len(), expected.len());
        for row in table {
            let (n, v, b, dis, id) = expected[&row.group_label];
            let nf = n as f64;
            assert_eq!(row.n_papers, n, "{}", row.group_label);
            assert!((row.avg_variety - v / nf).abs() <= 1e-9, "{}", row.group_label);
            assert!((row.avg_balance - b / nf).abs() <= 1e-9, "{}", row.group_label);
            assert!((row.avg_disparity - dis / nf).abs() <= 1e-9, "{}", row.group_label);
            assert!((row.avg_id - id / nf).abs() <= 1e-9, "{}", row.group_label);
        }
    };

    // by author count with the "5 or more" bucket, over all papers
    let by_authors = summarize_by(&facts, &GroupSpec::capped(GroupKey::ByAuthorCount, 5)).unwrap();
    check_table(&by_authors, &|l| {
        Some(if l.n_authors >= 5 {
            "5 or more".to_owned()
        } else {
            l.n_authors.to_string()
        })
    });

    // single-author papers by discipline
    let single: Vec<PaperFacts> = facts
        .iter()
        .filter(|f| f.label == SubpopulationLabel::SingleAuthor)
        .cloned()
        .collect();
    let by_discipline = summarize_by(&single, &GroupSpec::new(GroupKey::ByDiscipline)).unwrap();
    check_table(&by_discipline, &|l| {
        if l.label == SubpopulationLabel::SingleAuthor {
            l.discipline.clone()
        } else {
            None
        }
    });

    // subpopulation averages (the Table 8 shape)
    let stats = descriptive_stats(&facts);
    for (label, per_indicator) in &stats {
        let members: Vec<&ScoreRecord> = labels
            .iter()
            .filter(|l| l.label == *label)
            .map(|l| golden_by_id[l.pub_id.as_str()])
            .collect();
        let nf = members.len() as f64;
        let mean_id = members.iter().map(|g| g.integrated_diversity).sum::<f64>() / nf;
        let mean_v = members.iter().map(|g| g.variety as f64).sum::<f64>() / nf;
        assert!((per_indicator[&Indicator::IntegratedDiversity].average - mean_id).abs() <= 1e-9);
        assert!((per_indicator[&Indicator::Variety].average - mean_v).abs() <= 1e-9);
    }

    // the exact-unity share of each subpopulation equals its fraction of
    // single-category papers (ID = 1 iff one category, diagonal is zero)
    let hists = idiv_core::aggregate::id_distributions(&facts, 0.25).unwrap();
    for (label, hist) in &hists {
        let single_category = labels
            .iter()
            .filter(|l| l.label == *label && golden_by_id[l.pub_id.as_str()].variety == 1)
            .count() as u64;
        assert_eq!(hist.unity_count, single_category, "{label}");
    }
    pass("criterion 5: cross-implementation oracle on 10000 publications at 1e-9");
}

/// Criterion 6: classification partitions every corpus, table shares sum to
/// one, and filtering conserves counts — including degenerate corpora.
#[test]
fn criterion_06_partition_conservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let scheme = idiv_core::synth::generate_scheme(12, 6, 3);

    let random_corpus = |rng: &mut ChaCha8Rng, shape: u8, n: usize| -> Vec<Publication> {
        (0..n)
            .map(|i| {
                let n_authors = match shape {
                    1 => 1,                            // degenerate: all single-author
                    2 => rng.random_range(2..=5),      // degenerate: all one field
                    _ => rng.random_range(1..=5),
                };
                let one_field = rng.random_range(0..6);
                let authors: Vec<AuthorRecord> = (0..n_authors)
                    .map(|a| AuthorRecord {
                        author_id: format!("p{i}-a{a}"),
                        field: if shape == 0 && rng.random_bool(0.1) {
                            None
                        } else if shape == 2 {
                            Some(FieldId(one_field))
                        } else {
                            Some(FieldId(rng.random_range(0..6)))
                        },
                    })
                    .collect();
                let n_refs = rng.random_range(0..=6);
                Publication {
                    pub_id: format!("p{i}"),
                    year: 2010,
                    doc_type: [
                        DocType::Article,
                        DocType::ProceedingsPaper,
                        DocType::BookChapter,
                        DocType::Other("review".into()),
                    ]
                    .choose(rng)
                    .unwrap()
                    .clone(),
                    authors,
                    references: (0..n_refs)
                        .map(|_| Reference::new([ScId(rng.random_range(0..12))]).unwrap())
                        .collect(),
                }
            })
            .collect()
    };

    for round in 0..60 {
        let shape = match round {
            0 => 1,
            1 => 2,
            _ => 0,
        };
        let corpus_size = rng.random_range(1..=120);
        let corpus = random_corpus(&mut rng, shape, corpus_size);
        let n_input = corpus.len();
        let (kept, exclusions) = apply_filters(corpus, &FilterConfig::default());
        assert_eq!(
            kept.len() + exclusions.values().sum::<u64>() as usize,
            n_input,
            "count conservation"
        );

        let mut by_label: BTreeMap<SubpopulationLabel, usize> = BTreeMap::new();
        let mut facts = Vec::new();
        for (i, p) in kept.iter().enumerate() {
            let profile = byline_profile(p, &scheme).unwrap();
            let label = classify(&profile);
            *by_label.entry(label).or_default() += 1;
            // exactly one label fits
            assert_eq!(
                SubpopulationLabel::ALL.iter().filter(|&&l| l == label).count(),
                1
            );
            facts.push(PaperFacts {
                pub_id: p.pub_id.clone(),
                variety: 1 + i % 5,
                balance: 0.5,
                avg_disparity: 0.5,
                rao_stirling: 0.25,
                integrated_diversity: 1.0 + (i % 7) as f64,
                label,
                n_authors: profile.n_authors,
                n_fields: profile.n_fields,
                n_disciplines: profile.n_disciplines,
                discipline: profile
                    .sole_discipline()
                    .map(|d| scheme.discipline(d).code.clone()),
            });
        }
        assert_eq!(by_label.values().sum::<usize>(), kept.len());

        if !facts.is_empty() {
            for spec in [
                GroupSpec::capped(GroupKey::ByAuthorCount, 5),
                GroupSpec::new(GroupKey::ByFieldCount),
                GroupSpec::new(GroupKey::ByDisciplineCount),
            ] {
                let table = summarize_by(&facts, &spec).unwrap();
                let share_sum: f64 = table.iter().map(|r| r.share).sum();
                assert!((share_sum - 1.0).abs() <= 1e-9, "shares sum to {share_sum}");
                assert_eq!(
                    table.iter().map(|r| r.n_papers).sum::<u64>(),
                    facts.len() as u64
                );
            }
        }
    }
    pass("criterion 6: partition conservation over 60 randomized corpora (2 degenerate)");
}

/// Criterion 7: synth, score and report are byte-deterministic across runs
/// and across --threads values.
#[test]
fn criterion_07_determinism() {
    let bin = env!("CARGO_BIN_EXE_idiv");
    let dir = tempfile::tempdir().unwrap();
    let arg = |p: &str| dir.path().join(p).to_string_lossy().into_owned();

    let run_ok = |args: &[&str]| {
        let out = Command::new(bin).args(args).output().unwrap();
        assert!(out.status.success(), "{args:?}: {out:?}");
    };

    for round in ["r1", "r2"] {
        run_ok(&[
            "synth", "--out", &arg(round), "--seed", "77", "--pubs", "200,150,150",
        ]);
    }
    let synth_files = [
        "corpus.jsonl",
        "disparity.txt",
        "golden_scores.jsonl",
        "scheme.tsv",
        "sc_registry.tsv",
    ];
    for name in synth_files {
        assert_eq!(
            std::fs::read(dir.path().join("r1").join(name)).unwrap(),
            std::fs::read(dir.path().join("r2").join(name)).unwrap(),
            "synth output {name} is not deterministic"
        );
    }

    let scheme_args = [
        "--scheme".to_owned(),
        arg("r1/scheme.tsv"),
        "--sc-registry".to_owned(),
        arg("r1/sc_registry.tsv"),
    ];
    for (name, threads) in [("t1a", "1"), ("t1b", "1"), ("t4a", "4"), ("t4b", "4")] {
        let out_path = arg(&format!("scores_{name}.jsonl"));
        let mut args: Vec<String> = vec![
            "score".into(),
            "--corpus".into(),
            arg("r1/corpus.jsonl"),
            "--matrix".into(),
            arg("r1/disparity.txt"),
            "--out".into(),
            out_path,
            "--threads".into(),
            threads.into(),
        ];
        args.extend(scheme_args.iter().cloned());
        let out = Command::new(bin).args(&args).output().unwrap();
        assert!(out.status.success());
    }
    let score_bytes: Vec<Vec<u8>> = ["t1a", "t1b", "t4a", "t4b"]
        .iter()
        .map(|n| std::fs::read(dir.path().join(format!("scores_{n}.jsonl"))).unwrap())
        .collect();
    assert_eq!(score_bytes[0], score_bytes[1], "score not deterministic across runs");
    assert_eq!(score_bytes[0], score_bytes[2], "score depends on --threads");
    assert_eq!(score_bytes[2], score_bytes[3], "4-thread score not deterministic");

    run_ok(&[
        "classify", "--corpus", &arg("r1/corpus.jsonl"), "--scheme", &arg("r1/scheme.tsv"),
        "--sc-registry", &arg("r1/sc_registry.tsv"), "--out", &arg("labels.jsonl"),
    ]);
    for round in ["rep1", "rep2"] {
        run_ok(&[
            "report", "--scores", &arg("scores_t1a.jsonl"), "--labels", &arg("labels.jsonl"),
            "--out", &arg(round), "--corpus", &arg("r1/corpus.jsonl"),
            "--matrix", &arg("r1/disparity.txt"),
        ]);
    }
    let mut names: Vec<String> = std::fs::read_dir(dir.path().join("rep1"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert!(!names.is_empty());
    for name in &names {
        assert_eq!(
            std::fs::read(dir.path().join("rep1").join(name)).unwrap(),
            std::fs::read(dir.path().join("rep2").join(name)).unwrap(),
            "report output {name} is not deterministic"
        );
    }
    pass(&format!(
        "criterion 7: determinism of synth, score (threads 1 and 4) and report ({} files)",
        names.len()
    ));
}

/// Criterion 8: on a synthetic corpus the subpopulation averages of variety
/// and integrated diversity increase strictly from single-author to
/// multi-author single-field to multi-field.
#[test]
fn criterion_08_qualitative_trend() {
    let params = SynthParams {
        seed: 808,
        pubs_per_subpop: [2000, 2000, 2000],
        ..SynthParams::default()
    };
    let out = generate_corpus(&params).unwrap();
    let (scores, labels) = facts_for(&out);
    let facts = PaperFacts::join(&scores, &labels).unwrap();
    let stats = descriptive_stats(&facts);

    let order = [
        SubpopulationLabel::SingleAuthor,
        SubpopulationLabel::MultiAuthorSingleField,
        SubpopulationLabel::MultiField,
    ];
    let avg = |l: SubpopulationLabel, ind: Indicator| stats[&l][&ind].average;
    let varieties: Vec<f64> = order.iter().map(|&l| avg(l, Indicator::Variety)).collect();
    let ids: Vec<f64> = order
        .iter()
        .map(|&l| avg(l, Indicator::IntegratedDiversity))
        .collect();
    assert!(
        varieties[0] < varieties[1] && varieties[1] < varieties[2],
        "variety not increasing: {varieties:?}"
    );
    assert!(ids[0] < ids[1] && ids[1] < ids[2], "ID not increasing: {ids:?}");
    pass(&format!(
        "criterion 8: avg variety {varieties:.3?} and avg ID {ids:.3?} strictly increasing"
    ));
}

/// Criterion 9: scoring 100,000 publications (about 30 references each,
/// 252-category dense matrix) stays under 10 s single-threaded, speeds up
/// with 4 threads, and output bytes do not change.
#[test]
fn criterion_09_throughput() {
    let params = SynthParams {
        seed: 909,
        pubs_per_subpop: [34_000, 33_000, 33_000],
        n_scs: 252,
        n_fields: 28,
        n_disciplines: 14,
        scs_per_field: 12,
        distinct_scs: [
            CountRange::new(4, 10),
            CountRange::new(5, 12),
            CountRange::new(6, 14),
        ],
        extra_refs: CountRange::new(16, 28),
        ..SynthParams::default()
    };
    let out = generate_corpus(&params).unwrap();
    assert_eq!(out.publications.len(), 100_000);
    let mean_refs = out
        .publications
        .iter()
        .map(|p| p.references.len())
        .sum::<usize>() as f64
        / 100_000.0;
    assert!((25.0..=35.0).contains(&mean_refs), "mean refs {mean_refs}");

    let serialize = |mut records: Vec<ScoreRecord>| -> Vec<u8> {
        records.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));
        let mut bytes = Vec::new();
        for r in &records {
            bytes.extend_from_slice(r.to_json_line().as_bytes());
            bytes.push(b'\n');
        }
        bytes
    };

    let t0 = Instant::now();
    let sequential: Vec<ScoreRecord> = out
        .publications
        .iter()
        .map(|p| ScoreRecord::new(&p.pub_id, &score_publication(p, &out.disparity).unwrap()))
        .collect();
    let t_seq = t0.elapsed().as_secs_f64();
    assert!(t_seq < 10.0, "single-threaded scoring took {t_seq:.2}s, budget 10s");

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let t1 = Instant::now();
    let parallel: Vec<ScoreRecord> = pool.install(|| {
        out.publications
            .par_iter()
            .map(|p| ScoreRecord::new(&p.pub_id, &score_publication(p, &out.disparity).unwrap()))
            .collect()
    });
    let t_par = t1.elapsed().as_secs_f64();

    assert_eq!(
        serialize(sequential),
        serialize(parallel),
        "thread count changed output bytes"
    );

    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let speedup = t_seq / t_par;
    // near-linear floor: 60% of the ideal speedup for min(4, cores) workers
    let floor = 0.6 * (cores.min(4) as f64);
    if cores >= 2 {
        assert!(
            speedup >= floor,
            "speedup {speedup:.2}x below {floor:.2}x floor ({cores} cores)"
        );
    }
    pass(&format!(
        "criterion 9: 100k publications, mean {mean_refs:.1} refs; sequential {t_seq:.2}s, \
         4 threads {t_par:.2}s, speedup {speedup:.2}x on {cores} cores"
    ));
}

/// Criterion 10: matrix save/load is value-exact at 252x252 and the cosine
/// of hand-built 3x3 count matrices matches hand-computed values to 1e-12.
#[test]
fn criterion_10_matrix_round_trip_and_cosine() {
    // random block matrix with jitter
    let d = generate_disparity(252, 14, 0.1, 0.9, 0.05, 1010).unwrap();
    let mut buf = Vec::new();
    d.save(&mut buf).unwrap();
    let d2 = DisparityMatrix::load(buf.as_slice()).unwrap();
    for i in 0..252 {
        for j in 0..252 {
            assert!(
                d.get(i, j) == d2.get(i, j),
                "round trip not value-exact at ({i},{j})"
            );
        }
    }

    // fully random symmetric matrix
    let mut rng = ChaCha8Rng::seed_from_u64(1011);
    let r = random_disparity(252, &mut rng);
    let mut buf2 = Vec::new();
    r.save(&mut buf2).unwrap();
    let r2 = DisparityMatrix::load(buf2.as_slice()).unwrap();
    for i in 0..252 {
        for j in 0..252 {
            assert!(r.get(i, j) == r2.get(i, j));
        }
    }

    // hand-built 3x3 count matrices
    fn counts3(rows: [[u64; 3]; 3]) -> CrossCitationMatrix {
        let records: Vec<idiv_core::disparity::CitationRecord> = rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter().enumerate().flat_map(move |(j, &n)| {
                    (0..n).map(move |_| idiv_core::disparity::CitationRecord {
                        citing: vec![ScId(i)],
                        cited: vec![ScId(j)],
                    })
                })
            })
            .collect();
        idiv_core::disparity::build_cross_citation_matrix(records, 3).unwrap()
    }

    // rows (1,1,0), (1,0,0), (0,0,5): s01 = 1/sqrt(2), s02 = s12 = 0
    let s = cosine_similarity(&counts3([[1, 1, 0], [1, 0, 0], [0, 0, 5]]));
    assert!((s.get(0, 1) - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-12);
    assert!(s.get(0, 2).abs() <= 1e-12);
    assert!(s.get(1, 2).abs() <= 1e-12);
    let dis = to_disparity(&s);
    assert!((dis.get(0, 1) - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() <= 1e-12);

    // rows (1,2,2), (2,1,2), (2,2,1): every off-diagonal cosine is 8/9
    let s2 = cosine_similarity(&counts3([[1, 2, 2], [2, 1, 2], [2, 2, 1]]));
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        assert!((s2.get(i, j) - 8.0 / 9.0).abs() <= 1e-12);
        assert!((s2.get(j, i) - 8.0 / 9.0).abs() <= 1e-12);
    }
    pass("criterion 10: 252x252 round trips value-exact; hand cosines within 1e-12");
}
