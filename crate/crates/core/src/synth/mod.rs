//! Deterministic synthetic corpora for validation, demos and performance
//! runs. Generation is a pure function of the parameters including the seed
//! (ChaCha8 keyed by the 64-bit seed), so outputs are reproducible across
//! platforms and runs.

pub mod golden;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{AuthorRecord, DocType, FieldScheme, Publication, Reference, ScId};
use crate::disparity::DisparityMatrix;
use crate::diversity::ScoreRecord;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid parameter: {0}")]
    Param(String),
}

fn param_err(msg: impl Into<String>) -> SynthError {
    SynthError::Param(msg.into())
}

/// Inclusive integer range sampled uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountRange {
    pub min: u32,
    pub max: u32,
}

impl CountRange {
    pub const fn new(min: u32, max: u32) -> Self {
        Self { min, max }
    }

    fn validate(&self, what: &str, floor: u32) -> Result<(), SynthError> {
        if self.min < floor {
            return Err(param_err(format!("{what}: min must be at least {floor}")));
        }
        if self.min > self.max {
            return Err(param_err(format!("{what}: min exceeds max")));
        }
        Ok(())
    }

    fn sample(&self, rng: &mut impl Rng) -> u32 {
        rng.random_range(self.min..=self.max)
    }
}

/// Everything the generator needs. Per-subpopulation arrays are indexed
/// single-author, multi-author single-field, multi-field.
#[derive(Debug, Clone)]
pub struct SynthParams {
    pub seed: u64,
    pub pubs_per_subpop: [u32; 3],
    /// Authors on multi-author papers.
    pub authors_multi: CountRange,
    /// Distinct byline fields on multi-field papers.
    pub byline_fields: CountRange,
    /// Distinct subject categories cited, per subpopulation. Widening these
    /// ranges across the three subpopulations is what guarantees the
    /// group-level diversity ordering.
    pub distinct_scs: [CountRange; 3],
    /// References beyond the one guaranteed per distinct category.
    pub extra_refs: CountRange,
    /// How many subject categories a field's papers draw from.
    pub scs_per_field: u32,
    pub n_scs: u32,
    pub n_fields: u32,
    pub n_disciplines: u32,
    /// Disparity between categories of the same discipline block.
    pub within: f64,
    /// Disparity between categories of different blocks.
    pub across: f64,
    /// Uniform jitter added to off-diagonal disparities, at most 0.05.
    pub jitter: f64,
    pub year_range: (i32, i32),
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            seed: 42,
            pubs_per_subpop: [400, 300, 300],
            authors_multi: CountRange::new(2, 6),
            byline_fields: CountRange::new(2, 3),
            distinct_scs: [
                CountRange::new(1, 4),
                CountRange::new(2, 7),
                CountRange::new(4, 10),
            ],
            extra_refs: CountRange::new(2, 10),
            scs_per_field: 8,
            n_scs: 40,
            n_fields: 8,
            n_disciplines: 4,
            within: 0.1,
            across: 0.9,
            jitter: 0.02,
            year_range: (2006, 2016),
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.n_scs == 0 || self.n_fields == 0 || self.n_disciplines == 0 {
            return Err(param_err("scheme dimensions must be positive"));
        }
        if self.n_disciplines > self.n_scs {
            return Err(param_err(
                "need at least one subject category per discipline block",
            ));
        }
        if self.n_disciplines > self.n_fields {
            return Err(param_err("need at least one field per discipline"));
        }
        if self.scs_per_field == 0 {
            return Err(param_err("scs_per_field must be positive"));
        }
        self.authors_multi.validate("authors_multi", 2)?;
        self.byline_fields.validate("byline_fields", 2)?;
        if self.pubs_per_subpop[2] > 0 && self.byline_fields.min > self.n_fields {
            return Err(param_err("byline_fields exceeds the number of fields"));
        }
        for (i, r) in self.distinct_scs.iter().enumerate() {
            r.validate(&format!("distinct_scs[{i}]"), 1)?;
        }
        self.extra_refs.validate("extra_refs", 0)?;
        validate_disparity_params(self.within, self.across, self.jitter)?;
        if self.year_range.0 > self.year_range.1 {
            return Err(param_err("year range is reversed"));
        }
        Ok(())
    }
}

fn validate_disparity_params(within: f64, across: f64, jitter: f64) -> Result<(), SynthError> {
    if !(0.0..=1.0).contains(&within) || !(0.0..=1.0).contains(&across) || within >= across {
        return Err(param_err("need 0 <= within < across <= 1"));
    }
    if !(0.0..=0.05).contains(&jitter) {
        return Err(param_err("jitter must lie in [0, 0.05]"));
    }
    Ok(())
}

/// Even partition of `n` categories into `k` blocks: block `b` spans
/// `[floor(b n / k), floor((b+1) n / k))`.
fn block_of(sc: usize, n_scs: usize, n_disciplines: usize) -> usize {
    sc * n_disciplines / n_scs
}

fn block_range(b: usize, n_scs: usize, n_disciplines: usize) -> std::ops::Range<usize> {
    (b * n_scs / n_disciplines)..((b + 1) * n_scs / n_disciplines)
}

/// Block-structured disparity matrix: same-block pairs sit at `within`,
/// cross-block pairs at `across`, plus seeded jitter clamped to `[0, 1]`.
/// Symmetric with a zero diagonal.
pub fn generate_disparity(
    n_scs: usize,
    n_disciplines: usize,
    within: f64,
    across: f64,
    jitter: f64,
    seed: u64,
) -> Result<DisparityMatrix, SynthError> {
    if n_scs == 0 || n_disciplines == 0 || n_disciplines > n_scs {
        return Err(param_err("need 1 <= n_disciplines <= n_scs"));
    }
    validate_disparity_params(within, across, jitter)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = vec![vec![0.0f64; n_scs]; n_scs];
    for i in 0..n_scs {
        for j in (i + 1)..n_scs {
            let base = if block_of(i, n_scs, n_disciplines) == block_of(j, n_scs, n_disciplines)
            {
                within
            } else {
                across
            };
            let noise = if jitter > 0.0 {
                rng.random_range(0.0..=jitter)
            } else {
                0.0
            };
            let v = (base + noise).clamp(0.0, 1.0);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    DisparityMatrix::from_rows(rows).map_err(|e| param_err(e.to_string()))
}

/// Synthetic registries sized to the parameters: fields are assigned to
/// disciplines in contiguous runs, mirroring the block partition of the
/// subject categories.
pub fn generate_scheme(n_scs: u32, n_fields: u32, n_disciplines: u32) -> FieldScheme {
    let disciplines: Vec<(String, String)> = (0..n_disciplines)
        .map(|d| (format!("UDA{:02}", d + 1), format!("Discipline {}", d + 1)))
        .collect();
    let fields: Vec<(String, String, String)> = (0..n_fields)
        .map(|f| {
            let d = (f as usize * n_disciplines as usize) / n_fields as usize;
            (
                format!("FLD{:03}", f + 1),
                format!("Field {}", f + 1),
                disciplines[d].0.clone(),
            )
        })
        .collect();
    let scs: Vec<(String, String)> = (0..n_scs)
        .map(|s| (format!("SC{:03}", s + 1), format!("Category {}", s + 1)))
        .collect();
    FieldScheme::from_parts(disciplines, fields, scs).expect("generated registries are valid")
}

/// Corpus, scheme, disparity matrix and golden per-paper scores, all
/// derived deterministically from the parameters.
#[derive(Debug)]
pub struct SynthOutput {
    pub scheme: FieldScheme,
    pub disparity: DisparityMatrix,
    pub publications: Vec<Publication>,
    pub golden: Vec<ScoreRecord>,
}

/// Generates the three subpopulations. Single-field papers cite within one
/// field's category pool; multi-field papers cite the union of their fields'
/// pools, and the per-subpopulation `distinct_scs` ranges widen in that
/// order, which pins the group-level diversity ordering by construction.
/// Golden scores come from the brute-force evaluator in [`golden`].
pub fn generate_corpus(params: &SynthParams) -> Result<SynthOutput, SynthError> {
    params.validate()?;
    let n_scs = params.n_scs as usize;
    let n_fields = params.n_fields as usize;
    let n_disciplines = params.n_disciplines as usize;

    let scheme = generate_scheme(params.n_scs, params.n_fields, params.n_disciplines);
    let disparity = generate_disparity(
        n_scs,
        n_disciplines,
        params.within,
        params.across,
        params.jitter,
        params.seed,
    )?;
    let pools = field_pools(params);

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let total: u32 = params.pubs_per_subpop.iter().sum();
    let mut publications = Vec::with_capacity(total as usize);
    let mut seq = 0u32;

    for (subpop, &n_papers) in params.pubs_per_subpop.iter().enumerate() {
        for _ in 0..n_papers {
            seq += 1;
            let pub_id = format!("P{seq:07}");
            let (authors, pool) = match subpop {
                0 => {
                    let f = rng.random_range(0..n_fields);
                    (authors_for(&pub_id, &[f], 1, &mut rng), pools[f].clone())
                }
                1 => {
                    let f = rng.random_range(0..n_fields);
                    let n_authors = params.authors_multi.sample(&mut rng) as usize;
                    (
                        authors_for(&pub_id, &[f], n_authors, &mut rng),
                        pools[f].clone(),
                    )
                }
                _ => {
                    let k = (params.byline_fields.sample(&mut rng) as usize).min(n_fields);
                    let fields: Vec<usize> = index::sample(&mut rng, n_fields, k).into_vec();
                    let n_authors =
                        (params.authors_multi.sample(&mut rng) as usize).max(k);
                    let mut pool: Vec<usize> =
                        fields.iter().flat_map(|&f| pools[f].iter().copied()).collect();
                    pool.sort_unstable();
                    pool.dedup();
                    (authors_for(&pub_id, &fields, n_authors, &mut rng), pool)
                }
            };

            let references =
                references_from_pool(&pool, params.distinct_scs[subpop], params.extra_refs, &mut rng);
            publications.push(Publication {
                pub_id,
                year: rng.random_range(params.year_range.0..=params.year_range.1),
                doc_type: DocType::Article,
                authors,
                references,
            });
        }
    }

    let golden = publications
        .iter()
        .map(|p| golden::brute_force_score(p, &disparity).expect("generated papers have refs"))
        .collect();

    Ok(SynthOutput {
        scheme,
        disparity,
        publications,
        golden,
    })
}

/// Subject-category pool per field, confined to the field's discipline
/// block. Fields sharing a block get rotated windows over it.
fn field_pools(params: &SynthParams) -> Vec<Vec<usize>> {
    let n_scs = params.n_scs as usize;
    let n_fields = params.n_fields as usize;
    let n_disciplines = params.n_disciplines as usize;

    let mut rank_within = vec![0usize; n_fields];
    let mut seen = vec![0usize; n_disciplines];
    for f in 0..n_fields {
        let d = f * n_disciplines / n_fields;
        rank_within[f] = seen[d];
        seen[d] += 1;
    }

    (0..n_fields)
        .map(|f| {
            let d = f * n_disciplines / n_fields;
            let block = block_range(d, n_scs, n_disciplines);
            let size = block.len();
            let take = (params.scs_per_field as usize).min(size);
            let offset = rank_within[f] * 3 % size;
            (0..take)
                .map(|k| block.start + (offset + k) % size)
                .collect()
        })
        .collect()
}

fn authors_for(
    pub_id: &str,
    fields: &[usize],
    n_authors: usize,
    rng: &mut impl Rng,
) -> Vec<AuthorRecord> {
    (0..n_authors)
        .map(|i| {
            // the first authors cover every byline field once
            let f = if i < fields.len() {
                fields[i]
            } else {
                fields[rng.random_range(0..fields.len())]
            };
            AuthorRecord {
                author_id: format!("{pub_id}-a{}", i + 1),
                field: Some(crate::corpus::FieldId(f)),
            }
        })
        .collect()
}

/// Picks the paper's distinct categories from the pool, guarantees one
/// reference per category, then adds extra references citing one or two of
/// the chosen categories.
fn references_from_pool(
    pool: &[usize],
    distinct: CountRange,
    extra: CountRange,
    rng: &mut impl Rng,
) -> Vec<Reference> {
    let v = (distinct.sample(rng) as usize).min(pool.len()).max(1);
    let chosen: Vec<usize> = index::sample(rng, pool.len(), v)
        .into_iter()
        .map(|i| pool[i])
        .collect();

    let mut refs: Vec<Reference> = chosen
        .iter()
        .map(|&sc| Reference::new([ScId(sc)]).expect("single category"))
        .collect();
    for _ in 0..extra.sample(rng) {
        let width = if chosen.len() > 1 && rng.random_bool(0.3) {
            2
        } else {
            1
        };
        let ids = index::sample(rng, chosen.len(), width)
            .into_iter()
            .map(|i| ScId(chosen[i]));
        refs.push(Reference::new(ids).expect("non-empty"));
    }
    refs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{byline_profile, classify, SubpopulationLabel};
    use crate::corpus::write_corpus;

    #[test]
    fn block_matrix_without_jitter_is_an_indicator() {
        let d = generate_disparity(6, 3, 0.0, 1.0, 0.0, 7).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let same_block = i == j || block_of(i, 6, 3) == block_of(j, 6, 3);
                let expected = if same_block { 0.0 } else { 1.0 };
                assert_eq!(d.get(i, j), expected, "at ({i},{j})");
            }
        }
    }

    #[test]
    fn single_block_is_constant_off_diagonal() {
        let d = generate_disparity(5, 1, 0.3, 0.9, 0.0, 7).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let expected = if i == j { 0.0 } else { 0.3 };
                assert!((d.get(i, j) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn disparity_generation_is_deterministic() {
        let a = generate_disparity(20, 4, 0.1, 0.9, 0.05, 123).unwrap();
        let b = generate_disparity(20, 4, 0.1, 0.9, 0.05, 123).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_parameters_are_rejected() {
        assert!(generate_disparity(5, 2, 0.9, 0.1, 0.0, 1).is_err());
        assert!(generate_disparity(5, 2, 0.5, 0.5, 0.0, 1).is_err());
        assert!(generate_disparity(5, 2, 0.1, 0.9, 0.2, 1).is_err());
        assert!(generate_disparity(2, 5, 0.1, 0.9, 0.0, 1).is_err());
        let bad = SynthParams {
            authors_multi: CountRange::new(1, 3),
            ..SynthParams::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn one_paper_per_subpopulation() {
        let params = SynthParams {
            pubs_per_subpop: [1, 1, 1],
            ..SynthParams::default()
        };
        let out = generate_corpus(&params).unwrap();
        assert_eq!(out.publications.len(), 3);
        assert_eq!(out.golden.len(), 3);
        let labels: Vec<SubpopulationLabel> = out
            .publications
            .iter()
            .map(|p| classify(&byline_profile(p, &out.scheme).unwrap()))
            .collect();
        assert_eq!(
            labels,
            vec![
                SubpopulationLabel::SingleAuthor,
                SubpopulationLabel::MultiAuthorSingleField,
                SubpopulationLabel::MultiField,
            ]
        );
    }

    #[test]
    fn same_seed_gives_byte_identical_output() {
        let params = SynthParams {
            pubs_per_subpop: [20, 20, 20],
            ..SynthParams::default()
        };
        let render = |out: &SynthOutput| {
            let mut corpus = Vec::new();
            write_corpus(&mut corpus, &out.publications, &out.scheme).unwrap();
            let mut matrix = Vec::new();
            out.disparity.save(&mut matrix).unwrap();
            let golden: String = out.golden.iter().map(|g| g.to_json_line() + "\n").collect();
            (corpus, matrix, golden)
        };
        let a = render(&generate_corpus(&params).unwrap());
        let b = render(&generate_corpus(&params).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn generated_subpopulations_follow_the_construction() {
        let params = SynthParams {
            pubs_per_subpop: [30, 30, 30],
            ..SynthParams::default()
        };
        let out = generate_corpus(&params).unwrap();
        for (i, p) in out.publications.iter().enumerate() {
            let profile = byline_profile(p, &out.scheme).unwrap();
            let label = classify(&profile);
            let expected = match i / 30 {
                0 => SubpopulationLabel::SingleAuthor,
                1 => SubpopulationLabel::MultiAuthorSingleField,
                _ => SubpopulationLabel::MultiField,
            };
            assert_eq!(label, expected, "paper {}", p.pub_id);
            assert!(!p.references.is_empty());
        }
    }

    #[test]
    fn golden_group_ordering_holds_at_scale() {
        let params = SynthParams {
            pubs_per_subpop: [500, 500, 500],
            ..SynthParams::default()
        };
        let out = generate_corpus(&params).unwrap();
        let mut sums = [(0.0f64, 0.0f64, 0u32); 3];
        for (i, g) in out.golden.iter().enumerate() {
            let s = i / 500;
            sums[s].0 += g.variety as f64;
            sums[s].1 += g.integrated_diversity;
            sums[s].2 += 1;
        }
        let avg: Vec<(f64, f64)> = sums
            .iter()
            .map(|&(v, id, n)| (v / n as f64, id / n as f64))
            .collect();
        assert!(avg[0].0 < avg[1].0 && avg[1].0 < avg[2].0, "variety: {avg:?}");
        assert!(avg[0].1 < avg[1].1 && avg[1].1 < avg[2].1, "id: {avg:?}");
    }
}
