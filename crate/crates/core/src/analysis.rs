//! Closed-form packet-error-rate models and empirical rescue-quality
//! estimation.
//!
//! Throughout, `p_b` is the block error rate of a stand-alone polar block
//! and `alpha` scales it into the error rate of a second decoding round
//! with pinned mutual bits, so a re-decode fails with probability
//! `alpha * p_b`. All chunk-level rates here are per block: the expected
//! fraction of blocks still in error after all rounds.

use serde::Serialize;

pub use crate::construction::union_bound;

fn check_inputs(p_b: f64, alpha: f64) {
    assert!((0.0..=1.0).contains(&p_b), "p_b out of range: {p_b}");
    assert!(alpha >= 0.0, "alpha must be nonnegative: {alpha}");
    assert!(
        alpha * p_b <= 1.0 + 1e-12,
        "alpha * p_b = {} exceeds 1",
        alpha * p_b
    );
}

/// Exact binomial coefficient in integer arithmetic.
fn binomial(n: u64, k: u64) -> u128 {
    assert!(n <= 64, "binomial table limited to n <= 64, got {n}");
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Block error rate of a two-block chunk: both blocks fail outright, or
/// one fails and its re-decode with pinned mutual bits fails again.
pub fn pcm2_per(p_b: f64, alpha: f64) -> f64 {
    check_inputs(p_b, alpha);
    (1.0 + alpha) * p_b * p_b - alpha * p_b * p_b * p_b
}

/// Block error rate of the m-block scheme whose mutual group is repeated
/// verbatim in every block. Any surviving block lets every failed block
/// re-decode, so the outer sum runs over the count of first-round
/// failures and the inner sum over the count of re-decode failures.
pub fn direct_extension_per(p_b: f64, alpha: f64, m: usize) -> f64 {
    assert!(m >= 2);
    check_inputs(p_b, alpha);
    let p_prime = alpha * p_b;
    let mf = m as f64;
    let mut total = p_b.powi(m as i32);
    for k in 1..m {
        let outer = (k as f64 / mf)
            * binomial(m as u64, k as u64) as f64
            * p_b.powi(k as i32)
            * (1.0 - p_b).powi((m - k) as i32);
        let mut inner = 0.0;
        for j in 1..=k {
            inner += (j as f64 / k as f64)
                * binomial(k as u64, j as u64) as f64
                * p_prime.powi(j as i32)
                * (1.0 - p_prime).powi((k - j) as i32);
        }
        total += outer * inner;
    }
    total
}

/// Block error rate of the parity-group scheme, which only re-decodes
/// when exactly one block fails; every other failure pattern stands.
pub fn general_per(p_b: f64, alpha: f64, m: usize) -> f64 {
    assert!(m >= 2);
    check_inputs(p_b, alpha);
    let mf = m as f64;
    let mut total = alpha * p_b * p_b * (1.0 - p_b).powi((m - 1) as i32);
    for k in 2..=m {
        total += (k as f64 / mf)
            * binomial(m as u64, k as u64) as f64
            * p_b.powi(k as i32)
            * (1.0 - p_b).powi((m - k) as i32);
    }
    total
}

/// Fraction of blocks that trigger a second decoding round in a
/// two-block chunk: one fails while the other succeeds.
pub fn additional_rate(p_b: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p_b));
    p_b * (1.0 - p_b)
}

/// Per-SNR simulation counts needed to estimate alpha.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlphaRecord {
    pub ebn0_db: f64,
    pub second_rounds_attempted: u64,
    pub second_rounds_failed: u64,
    /// Block error rate of the stand-alone code at the same SNR.
    pub standalone_per: f64,
}

/// Alpha for one usable sweep point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlphaPoint {
    pub ebn0_db: f64,
    pub alpha: f64,
}

/// Sweep summary of the empirical alpha estimates.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaEstimate {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_mean: f64,
    /// SNR span the extrema were taken over, for reporting alongside the
    /// numbers since the estimates are sweep-dependent.
    pub ebn0_span: (f64, f64),
    pub points: Vec<AlphaPoint>,
}

/// Estimates alpha per sweep point as the second-round failure rate
/// divided by the stand-alone block error rate. Points with no second
/// rounds or a zero error-rate estimate carry no information and are
/// skipped; returns None when nothing usable remains.
pub fn estimate_alpha(records: &[AlphaRecord]) -> Option<AlphaEstimate> {
    let mut points = Vec::new();
    for rec in records {
        if rec.second_rounds_attempted == 0 || rec.standalone_per <= 0.0 {
            continue;
        }
        let fail_rate = rec.second_rounds_failed as f64 / rec.second_rounds_attempted as f64;
        points.push(AlphaPoint {
            ebn0_db: rec.ebn0_db,
            alpha: fail_rate / rec.standalone_per,
        });
    }
    if points.is_empty() {
        return None;
    }
    let alphas: Vec<f64> = points.iter().map(|p| p.alpha).collect();
    let min = alphas.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = alphas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = alphas.iter().sum::<f64>() / alphas.len() as f64;
    let lo = points
        .iter()
        .map(|p| p.ebn0_db)
        .fold(f64::INFINITY, f64::min);
    let hi = points
        .iter()
        .map(|p| p.ebn0_db)
        .fold(f64::NEG_INFINITY, f64::max);
    Some(AlphaEstimate {
        alpha_min: min,
        alpha_max: max,
        alpha_mean: mean,
        ebn0_span: (lo, hi),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn binomials_match_pascals_triangle() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        for n in 1..=20u64 {
            for k in 1..n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn two_block_model_frozen_values() {
        assert_eq!(pcm2_per(0.0, 3.0), 0.0);
        assert!((pcm2_per(0.1, 1.0) - 0.019).abs() < 1e-15);
    }

    #[test]
    fn additional_rate_frozen_values() {
        assert_eq!(additional_rate(0.0), 0.0);
        assert_eq!(additional_rate(1.0), 0.0);
        let r = additional_rate(0.1);
        assert!((r - 0.09).abs() < 1e-15);
        assert!(r < 0.1);
    }

    #[test]
    fn direct_extension_reduces_to_two_block_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..1000 {
            let p: f64 = rng.random_range(0.0..1.0);
            let a: f64 = rng.random_range(0.0..(1.0 / p).min(4.0));
            let expected = pcm2_per(p, a);
            assert!((direct_extension_per(p, a, 2) - expected).abs() < 1e-14);
            assert!((general_per(p, a, 2) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn small_error_rates_are_dominated_by_single_failures() {
        for m in [3usize, 4, 5] {
            for alpha in [0.4, 1.0, 3.0] {
                let p: f64 = 1e-5;
                let leading = alpha * p * p * (1.0 - p).powi((m - 1) as i32);
                // Full recovery leaves only the single-failure term at
                // order p^2; the parity scheme adds the unrecovered
                // multi-failure patterns, (m-1)p^2 to leading order.
                let ratio = direct_extension_per(p, alpha, m) / leading;
                assert!((ratio - 1.0).abs() < 1e-3, "m={m} alpha={alpha}: {ratio}");
                let ratio = general_per(p, alpha, m) / leading;
                let expected = 1.0 + (m - 1) as f64 / alpha;
                assert!(
                    (ratio - expected).abs() < 1e-3 * expected,
                    "m={m} alpha={alpha}: {ratio} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn three_block_general_model_matches_expanded_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..1000 {
            let p: f64 = rng.random_range(0.0..1.0);
            let a: f64 = rng.random_range(0.0..(1.0 / p).min(4.0));
            let expanded = (2.0 + a) * p.powi(2) - (1.0 + 2.0 * a) * p.powi(3) + a * p.powi(4);
            assert!((general_per(p, a, 3) - expanded).abs() < 1e-13);
        }
    }

    #[test]
    fn general_scheme_never_beats_full_recovery() {
        for m in 2..=5usize {
            for pi in 1..20 {
                let p = pi as f64 / 20.0;
                for ai in 1..=4 {
                    let a = (ai as f64 / 2.0).min(1.0 / p);
                    let d = direct_extension_per(p, a, m);
                    let g = general_per(p, a, m);
                    assert!(
                        g >= d - 1e-12,
                        "m={m} p={p} a={a}: general {g} < direct {d}"
                    );
                    if m == 2 {
                        assert!((g - d).abs() < 1e-12);
                    }
                }
            }
        }
    }

    /// Simulates the abstract block-failure process behind the direct
    /// extension model: draw first-round failures, re-decode each failed
    /// block when at least one sibling survived, score the fraction of
    /// blocks left in error.
    #[test]
    fn direct_extension_matches_abstract_process_simulation() {
        let (p, alpha, m) = (0.1, 1.0, 3usize);
        let trials = 1_000_000u64;
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let mut errored_blocks = 0u64;
        let mut sq_sum = 0.0f64;
        for _ in 0..trials {
            let fails: Vec<bool> = (0..m).map(|_| rng.random_bool(p)).collect();
            let k = fails.iter().filter(|&&f| f).count();
            let final_errors = if k == m {
                m
            } else {
                fails
                    .iter()
                    .filter(|&&f| f)
                    .filter(|_| rng.random_bool(alpha * p))
                    .count()
            };
            errored_blocks += final_errors as u64;
            let frac = final_errors as f64 / m as f64;
            sq_sum += frac * frac;
        }
        let mean = errored_blocks as f64 / (m as u64 * trials) as f64;
        let var = sq_sum / trials as f64 - mean * mean;
        let sigma = (var / trials as f64).sqrt();
        let model = direct_extension_per(p, alpha, m);
        assert!(
            (mean - model).abs() < 3.0 * sigma,
            "simulated {mean} vs model {model} (sigma {sigma})"
        );
    }

    #[test]
    fn alpha_estimation_handles_edge_records() {
        let perfect = AlphaRecord {
            ebn0_db: 2.0,
            second_rounds_attempted: 500,
            second_rounds_failed: 0,
            standalone_per: 0.2,
        };
        let unusable = AlphaRecord {
            ebn0_db: 5.0,
            second_rounds_attempted: 0,
            second_rounds_failed: 0,
            standalone_per: 0.0,
        };
        let est = estimate_alpha(&[perfect, unusable]).unwrap();
        assert_eq!(est.points.len(), 1);
        assert_eq!(est.alpha_min, 0.0);
        assert_eq!(est.alpha_max, 0.0);
        assert_eq!(est.ebn0_span, (2.0, 2.0));
        assert!(estimate_alpha(&[unusable]).is_none());
    }

    #[test]
    fn alpha_estimation_recovers_a_planted_ratio() {
        // Re-decodes fail with probability alpha * p_b = 0.05 while the
        // stand-alone rate is 0.1, so the estimate should land near 0.5.
        let (fail_prob, p_b) = (0.05, 0.1);
        let attempted = 200_000u64;
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let failed = (0..attempted)
            .filter(|_| rng.random_bool(fail_prob))
            .count() as u64;
        let est = estimate_alpha(&[AlphaRecord {
            ebn0_db: 3.0,
            second_rounds_attempted: attempted,
            second_rounds_failed: failed,
            standalone_per: p_b,
        }])
        .unwrap();
        let sigma = (fail_prob * (1.0 - fail_prob) / attempted as f64).sqrt() / p_b;
        assert!(
            (est.alpha_mean - 0.5).abs() < 3.0 * sigma,
            "estimate {} vs 0.5 (sigma {sigma})",
            est.alpha_mean
        );
    }

    proptest! {
        #[test]
        fn chunk_models_stay_in_unit_interval(
            p in 0.0f64..=1.0,
            raw_alpha in 0.0f64..4.0,
            m in 2usize..=6,
        ) {
            let alpha = if p > 0.0 { raw_alpha.min(1.0 / p) } else { raw_alpha };
            for v in [
                pcm2_per(p, alpha),
                direct_extension_per(p, alpha, m),
                general_per(p, alpha, m),
                additional_rate(p),
            ] {
                prop_assert!((-1e-12..=1.0 + 1e-9).contains(&v), "value {v}");
            }
        }

        #[test]
        fn two_block_model_equals_its_unexpanded_form(
            p in 0.0f64..=1.0,
            raw_alpha in 0.0f64..4.0,
        ) {
            let alpha = if p > 0.0 { raw_alpha.min(1.0 / p) } else { raw_alpha };
            let unexpanded = p * p + p * (1.0 - p) * (alpha * p);
            prop_assert!((pcm2_per(p, alpha) - unexpanded).abs() < 1e-13);
        }
    }
}
