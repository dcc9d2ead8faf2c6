//! Independent brute-force evaluator for golden expectations.
//!
//! Deliberately naive: counts are rebuilt from the raw reference list, the
//! Gini concentration comes from the mean-absolute-difference formulation,
//! and every sum is a direct O(V²) loop. Nothing here is shared with the
//! `diversity` module, so the two paths cannot inherit each other's bugs.

use std::collections::HashMap;

use crate::corpus::Publication;
use crate::disparity::DisparityMatrix;
use crate::diversity::ScoreRecord;

/// Scores one publication by direct summation. Returns `None` when the
/// publication has no references.
pub fn brute_force_score(p: &Publication, d: &DisparityMatrix) -> Option<ScoreRecord> {
    if p.references.is_empty() {
        return None;
    }

    let mut counts: HashMap<usize, u64> = HashMap::new();
    for r in &p.references {
        for sc in r.sc_ids() {
            *counts.entry(sc.0).or_insert(0) += 1;
        }
    }

    let mut present: Vec<usize> = counts.keys().copied().collect();
    present.sort_unstable();
    let v = present.len();
    let total: u64 = counts.values().sum();

    // Balance via B = 1 - G with the mean-absolute-difference Gini.
    let xs: Vec<f64> = present.iter().map(|i| counts[i] as f64).collect();
    let mean = total as f64 / v as f64;
    let mut abs_diff = 0.0;
    for &a in &xs {
        for &b in &xs {
            abs_diff += (a - b).abs();
        }
    }
    let gini = abs_diff / (2.0 * (v * v) as f64 * mean);
    let balance = 1.0 - gini;

    let mut disparity_sum = 0.0;
    for &a in &present {
        for &b in &present {
            if a != b {
                disparity_sum += d.get(a, b);
            }
        }
    }
    let avg_disparity = if v < 2 {
        0.0
    } else {
        disparity_sum / (v * (v - 1)) as f64
    };

    let p_of = |sc: usize| counts[&sc] as f64 / total as f64;
    let mut rao_stirling = 0.0;
    let mut closeness = 0.0;
    for &a in &present {
        for &b in &present {
            if a == b {
                closeness += p_of(a) * p_of(b);
            } else {
                rao_stirling += p_of(a) * p_of(b) * d.get(a, b);
                closeness += p_of(a) * p_of(b) * (1.0 - d.get(a, b));
            }
        }
    }
    let integrated_diversity = 1.0 / closeness.min(1.0);

    Some(ScoreRecord {
        pub_id: p.pub_id.clone(),
        variety: v,
        balance,
        avg_disparity,
        rao_stirling,
        integrated_diversity,
    })
}
