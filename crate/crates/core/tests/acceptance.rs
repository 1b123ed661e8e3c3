//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with the measured quantities. Tolerances and thresholds are
//! pinned here, not configurable.
//!
//! Criteria 4 and 6 are implemented exactly as pinned and are expected to
//! fail in part; see `docs/acceptance-notes.md` for the measured numbers
//! and the analysis of why the pinned targets are not attainable at these
//! parameters.

use bigmatch_core::adversaries::{acceptance_suite, parse_p2_spec, Adversary};
use bigmatch_core::games::{
    derived_game, two_row_solve, AbsorbingGame, GeneralizedBigMatch, MatrixGame,
};
use bigmatch_core::numeric::{decimal_string, rat, ratio, Rational};
use bigmatch_core::sim::{
    run_batch, subepoch_stats, verify_base_lemma, verify_base_lemma_big_match, LemmaRanges,
    RecordFlags, SimConfig, SimReport, SplitMix64,
};
use bigmatch_core::solver::{
    approximate_value, game_value, limit_strategy, marginal_value, parametric_basis, reduce,
    solve_matrix_game, stability_threshold_for, verify_solution, ThresholdMode,
};
use bigmatch_core::strategies::{
    epoch_block_codes, epoch_patience_closed_form, full_strategy, lifted_strategy,
    observer_variant, patience, EpochSchedule, FullStrategy, Patience, SampleMode,
    StationaryStrategy,
};
use num_traits::{Signed, ToPrimitive, Zero};
use std::sync::OnceLock;
use std::time::Instant;

const MASTER_SEED: u64 = 0xB16_AC;

fn big_match_full(eps_num: i64, eps_den: i64) -> FullStrategy {
    full_strategy(
        &ratio(eps_num, eps_den),
        EpochSchedule::loglog(),
        &GeneralizedBigMatch::big_match(),
        SampleMode::PerRound,
    )
    .expect("valid strategy")
}

/// Shared Monte Carlo runs: full strategy (eps = 1/5) on the Big Match
/// against the fixed adversary suite, with memory tracking.
struct SuiteRuns {
    /// (adversary label, report) at T = 2^20, 200 replicas each.
    at_2_20: Vec<(String, SimReport)>,
    /// pooled per-horizon reports for the growth curve (T = 2^14, 2^17).
    at_2_14: Vec<SimReport>,
    at_2_17: Vec<SimReport>,
    elapsed_secs: f64,
}

fn suite_runs() -> &'static SuiteRuns {
    static RUNS: OnceLock<SuiteRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let start = Instant::now();
        let game = AbsorbingGame::big_match();
        let p1 = big_match_full(1, 5);
        let record = RecordFlags {
            memory: true,
            ..RecordFlags::default()
        };
        let run = |adv: &Adversary, horizon: u64, replicas: u64, salt: u64| -> SimReport {
            let mut cfg = SimConfig::new(&game, adv, horizon, replicas);
            cfg.seed = MASTER_SEED ^ salt;
            cfg.record = record;
            run_batch(&p1, &cfg).expect("batch runs")
        };
        let suite = acceptance_suite();
        let at_2_20 = suite
            .iter()
            .enumerate()
            .map(|(i, adv)| (adv.label(), run(adv, 1 << 20, 200, i as u64)))
            .collect();
        let at_2_14 = suite
            .iter()
            .enumerate()
            .map(|(i, adv)| run(adv, 1 << 14, 50, 0x140 + i as u64))
            .collect();
        let at_2_17 = suite
            .iter()
            .enumerate()
            .map(|(i, adv)| run(adv, 1 << 17, 50, 0x170 + i as u64))
            .collect();
        SuiteRuns {
            at_2_20,
            at_2_14,
            at_2_17,
            elapsed_secs: start.elapsed().as_secs_f64(),
        }
    })
}

fn verdict(name: &str, pass: bool, detail: &str) -> bool {
    println!(
        "criterion {name}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

#[test]
fn criterion_01_big_match_value() {
    let start = Instant::now();
    let eps = Rational::new(1.into(), (1u64 << 20).into());
    let v = approximate_value(&AbsorbingGame::big_match(), &eps);
    let err = (&v - ratio(1, 2)).abs();
    let elapsed = start.elapsed().as_secs_f64();
    let pass = err <= eps && elapsed < 5.0;
    let ok = verdict(
        "1 (Big Match value)",
        pass,
        &format!(
            "value {} = {}, |error| <= 2^-20: {}, runtime {elapsed:.2}s < 5s",
            v,
            decimal_string(&v, 8),
            err <= eps
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_02_derived_game_assumption() {
    let d = MatrixGame::from_rows(vec![vec![rat(1), rat(-1)], vec![rat(-1), rat(1)]]);
    let sol = solve_matrix_game(&d);
    let fully_mixed =
        sol.row_optimal == vec![ratio(1, 2), ratio(1, 2)] && sol.value == rat(0);
    let certified = verify_solution(&d, &sol);
    // uniqueness: neither pure row guarantees the value, and the two
    // column lines cross transversally, so the kink maximizer is unique
    let no_pure = (0..2).all(|r| {
        (0..2)
            .map(|j| d.entry(r, j).clone())
            .min()
            .unwrap()
            .is_negative()
    });
    let slopes_differ =
        (d.entry(0, 0) - d.entry(1, 0)) != (d.entry(0, 1) - d.entry(1, 1));
    let pass = fully_mixed && certified && no_pure && slopes_differ;
    let ok = verdict(
        "2 (derived-game assumption)",
        pass,
        &format!(
            "value {}, x = ({}, {}), certificate {certified}, unique fully mixed {}",
            sol.value,
            sol.row_optimal[0],
            sol.row_optimal[1],
            no_pure && slopes_differ
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_03_exhaustive_base_lemma() {
    let start = Instant::now();
    let ranges = LemmaRanges {
        max_index: 3,
        max_len: 8,
        xis: vec![ratio(1, 2), ratio(1, 4)],
    };
    let bm = verify_base_lemma_big_match(&ranges);
    let zv = verify_base_lemma(&ranges, &GeneralizedBigMatch::zero_value_big_match());
    let elapsed = start.elapsed().as_secs_f64();
    let pass = bm.is_empty() && zv.is_empty() && elapsed < 60.0;
    let ok = verdict(
        "3 (exhaustive base-strategy lemma)",
        pass,
        &format!(
            "Big Match violations {}, generalized violations {}, runtime {elapsed:.2}s < 60s",
            bm.len(),
            zv.len()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_04_mills_linearity() {
    // Pinned exactly as stated: val(A + aB) - val(A) = a * marginal value
    // at a in {t0, t0/2, t0/4} for 25 random 3x4 integer games; zero
    // failures. The value on the stable interval is a ratio of degree-4
    // polynomials, not an affine function, so exact equality is expected
    // to fail for instances with mixed optimal supports; the exact
    // first-order identity (marginal value = derivative of the
    // determinant-ratio value at 0+) is verified alongside.
    let mut rng = SplitMix64::new(MASTER_SEED ^ 0x4);
    let mut random_game = |m: usize, n: usize| -> MatrixGame {
        MatrixGame::from_rows(
            (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| rat((rng.next_u64() % 11) as i64 - 5))
                        .collect()
                })
                .collect(),
        )
    };
    let mut exact_failures = 0usize;
    let mut slope_failures = 0usize;
    for _ in 0..25 {
        let a = random_game(3, 4);
        let b = random_game(3, 4);
        let mv = marginal_value(&a, &b);
        let va = game_value(&a);
        let t0 = stability_threshold_for(&a, &b);
        let mut linear = true;
        for div in [1i64, 2, 4] {
            let alpha = &t0 / rat(div);
            let perturbed = MatrixGame::from_rows(
                (0..3)
                    .map(|i| {
                        (0..4)
                            .map(|j| a.entry(i, j) + &alpha * b.entry(i, j))
                            .collect()
                    })
                    .collect(),
            );
            if game_value(&perturbed) - &va != &alpha * &mv {
                linear = false;
            }
        }
        if !linear {
            exact_failures += 1;
        }
        let pg = parametric_basis(&a, &b, ThresholdMode::Fast).expect("basis");
        if pg.value_slope_at_zero() != mv || pg.value_at_zero() != va {
            slope_failures += 1;
        }
    }
    let pass = exact_failures == 0;
    let ok = verdict(
        "4 (Mills linearity)",
        pass,
        &format!(
            "exact-equality failures {exact_failures}/25 at alpha in {{t0, t0/2, t0/4}}; \
             first-order derivative identity failures {slope_failures}/25"
        ),
    );
    assert_eq!(slope_failures, 0, "the derivative identity must hold");
    assert!(ok, "exact linearity fails for mixed-support instances");
}

#[test]
fn criterion_05_parametric_basis_stability() {
    let mut rng = SplitMix64::new(MASTER_SEED ^ 0x5);
    let mut random_game = |m: usize, n: usize| -> MatrixGame {
        MatrixGame::from_rows(
            (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| ratio((rng.next_u64() % 9) as i64 - 4, 2))
                        .collect()
                })
                .collect(),
        )
    };
    let mut failures = 0usize;
    for trial in 0..25 {
        let m = 2 + (trial % 2);
        let n = 2 + (trial % 3);
        let a0 = random_game(m, n);
        let a1 = random_game(m, n);
        let Ok(pg) = parametric_basis(&a0, &a1, ThresholdMode::Fast) else {
            failures += 1;
            continue;
        };
        let mut t = pg.anchor().clone();
        for _ in 0..3 {
            t = &t / rat(2);
            let certified = pg.verify_at(&t);
            let (_, v_poly) = pg.evaluate(&t);
            if !certified || v_poly != game_value(&pg.game_at(&t)) {
                failures += 1;
                break;
            }
        }
        if limit_strategy(&pg).is_err() {
            failures += 1;
        }
    }
    let ok = verdict(
        "5 (parametric basis stability)",
        failures == 0,
        &format!("failures {failures}/25 over three geometric shrinks with exact certificates"),
    );
    assert!(ok);
}

#[test]
fn criterion_06_strategy_performance() {
    // Pinned exactly as stated: mean finite payoff >= 1/2 - 1/5 - 0.05
    // for EVERY adversary at T = 2^20, 200 replicas; conditionally on a
    // stop rate >= 0.2, the mean outcome given stopping must be at least
    // 1/2 - sqrt(xi) - 0.05 with xi = 1/25. The per-sample stop hazard of
    // the strategy is xi^4 = 25^-4, so against constR and the phase
    // adversary the expected stop mass by 2^20 rounds is only about 0.09
    // and the payoff bar is out of reach at this horizon; those two
    // entries fail and are reported honestly.
    let runs = suite_runs();
    let payoff_bar = ratio(1, 4); // 1/2 - 1/5 - 1/20
    let cond_bar = ratio(1, 4); // 1/2 - 1/5 - 1/20 (sqrt(xi) = 1/5)
    let stop_gate = ratio(1, 5);
    let mut failing = Vec::new();
    for (label, report) in &runs.at_2_20 {
        let mut ok = report.mean_payoff >= payoff_bar;
        if report.stop_rate >= stop_gate {
            if let Some(cond) = &report.conditional_outcome_mean {
                ok &= cond >= &cond_bar;
            }
        }
        println!(
            "  {label}: mean payoff {} ({}), stop rate {}, cond outcome {}",
            report.mean_payoff,
            decimal_string(&report.mean_payoff, 4),
            decimal_string(&report.stop_rate, 4),
            report
                .conditional_outcome_mean
                .as_ref()
                .map(|c| decimal_string(c, 4))
                .unwrap_or_else(|| "-".into()),
        );
        if !ok {
            failing.push(label.clone());
        }
    }
    let runtime_ok = runs.elapsed_secs < 600.0;
    let pass = failing.is_empty() && runtime_ok;
    let ok = verdict(
        "6 (strategy performance)",
        pass,
        &format!(
            "bar {} per adversary; failing: [{}]; runtime {:.1}s < 600s",
            decimal_string(&payoff_bar, 2),
            failing.join(", "),
            runs.elapsed_secs
        ),
    );
    assert!(ok, "desk-scale horizon is too short for the pinned bar on {failing:?}");
}

#[test]
fn criterion_07_space_usage() {
    let runs = suite_runs();
    // 4 (2 ceil(log2 T) + 1)^6 at T = 2^20
    let bound: u128 = 4 * 41u128.pow(6);
    let mut total = 0usize;
    let mut within = 0usize;
    for (_, report) in &runs.at_2_20 {
        for r in &report.replicas {
            total += 1;
            within += usize::from(r.max_state < bound);
        }
    }
    let frac_ok = within * 100 >= total * 95;

    let pooled_p95 = |reports: &[SimReport]| -> u128 {
        let mut values: Vec<u128> = reports
            .iter()
            .flat_map(|r| r.replicas.iter().map(|x| x.max_state))
            .collect();
        values.sort_unstable();
        values[(values.len() * 95).div_ceil(100).max(1) - 1]
    };
    let p_14 = pooled_p95(&runs.at_2_14);
    let p_17 = pooled_p95(&runs.at_2_17);
    let p_20 = pooled_p95(
        &runs
            .at_2_20
            .iter()
            .map(|(_, r)| r.clone())
            .collect::<Vec<_>>(),
    );
    // growth no faster than polylog: per-doubling ratio at most 2, i.e.
    // a factor of at most 2^3 = 8 across each 8x step in T
    let ratio_ok = |lo: u128, hi: u128| hi <= lo.saturating_mul(8);
    let curve_ok = ratio_ok(p_14, p_17) && ratio_ok(p_17, p_20);
    let pass = frac_ok && curve_ok;
    let ok = verdict(
        "7 (space usage)",
        pass,
        &format!(
            "{within}/{total} replicas below 4*(41)^6 = {bound}; \
             p95 curve {p_14} -> {p_17} -> {p_20} (per-doubling ratio <= 2: {curve_ok})"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_08_subepoch_concentration() {
    let game = AbsorbingGame::big_match();
    let p1 = observer_variant(&big_match_full(1, 5));
    let p2 = parse_p2_spec("constL").expect("valid");
    let mut cfg = SimConfig::new(&game, &p2, 1 << 22, 50);
    cfg.seed = MASTER_SEED ^ 0x8;
    cfg.record = RecordFlags {
        samples: true,
        ..RecordFlags::default()
    };
    cfg.keep_transcripts = true;
    let report = run_batch(&p1, &cfg).expect("observer batch");
    let schedule = EpochSchedule::loglog();
    let delta = ratio(1, 4);
    let mut eligible = 0usize;
    let mut flagged = 0usize;
    for tr in report.transcripts.as_ref().expect("kept") {
        let stats = subepoch_stats(tr, &schedule, &delta).expect("sample log recorded");
        for rec in stats.records.iter().filter(|r| r.epoch >= 10 && !r.clamped) {
            eligible += 1;
            flagged += usize::from(rec.flagged);
        }
    }
    let pass = eligible > 0 && flagged * 100 <= eligible * 5;
    let ok = verdict(
        "8 (sub-epoch concentration)",
        pass,
        &format!(
            "{flagged}/{eligible} sub-epochs with epoch >= 10 outside [(3/4)F(i)/i, (5/4)F(i)/i]"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_09_patience() {
    let strategy = big_match_full(1, 5);
    let mut exact_matches = 0u32;
    for i in 10..=20u32 {
        let enumerated = patience(&strategy, epoch_block_codes(&strategy, i))
            .expect("nonempty block");
        let closed = epoch_patience_closed_form(&strategy, i);
        if enumerated == Patience::Finite(closed) {
            exact_matches += 1;
        }
    }
    let patience_ok = exact_matches == 11;

    // Empirical lower-bound demonstration: a low-patience stationary
    // player earns little against the phase adversary.
    let game = AbsorbingGame::big_match();
    let p1 = StationaryStrategy::big_match(&ratio(1, 100)).expect("valid");
    let p2 = parse_p2_spec("phase:eps=1/10,k=3").expect("valid");
    let mut cfg = SimConfig::new(&game, &p2, 1_000_000, 1000);
    cfg.seed = MASTER_SEED ^ 0x9;
    let report = run_batch(&p1, &cfg).expect("batch");
    let empirical_ok = report.mean_payoff <= ratio(1, 5);
    let pass = patience_ok && empirical_ok;
    let ok = verdict(
        "9 (patience audit)",
        pass,
        &format!(
            "closed-form matches {exact_matches}/11 epoch blocks; \
             stationary q=1/100 vs phase: mean payoff {} <= 0.2: {empirical_ok}",
            decimal_string(&report.mean_payoff, 4)
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_10_reduction_round_trip() {
    let game = AbsorbingGame::big_match();
    let reduction = reduce(&game, 4, ThresholdMode::Fast).expect("reduction");
    let d = reduction.d_game.as_ref().expect("nondegenerate");
    let audit_ok = d.strict() && reduction.pure_row.is_none();
    let bound =
        bigmatch_core::solver::entry_magnitude_bound(game.rows(), game.cols(), 4, 1);
    let magnitude_ok = reduction.k_bound <= bound && reduction.k_bound.is_positive();

    let inner = full_strategy(
        &ratio(1, 5),
        EpochSchedule::loglog(),
        d,
        SampleMode::PerRound,
    )
    .expect("inner strategy");
    let lifted = lifted_strategy(Some(inner), &reduction).expect("lift");
    let mut payoff_sum = Rational::zero();
    let mut adversaries = 0u32;
    for (idx, adv) in acceptance_suite().iter().enumerate() {
        let mut cfg = SimConfig::new(&game, adv, 1 << 18, 100);
        cfg.seed = MASTER_SEED ^ (0xA0 + idx as u64);
        let report = run_batch(&lifted, &cfg).expect("batch");
        println!(
            "  lifted vs {}: mean payoff {}",
            adv.label(),
            decimal_string(&report.mean_payoff, 4)
        );
        payoff_sum += report.mean_payoff;
        adversaries += 1;
    }
    let suite_mean = payoff_sum / rat(i64::from(adversaries));
    // 1/2 - 2^-4 - 1/5 - 0.05 = 3/16
    let bar = ratio(3, 16);
    let sim_ok = suite_mean >= bar;
    let pass = audit_ok && magnitude_ok && sim_ok;
    let ok = verdict(
        "10 (reduction round trip)",
        pass,
        &format!(
            "assumption audit {audit_ok}, |derived| <= bound {magnitude_ok}, \
             suite mean payoff {} >= {} ({sim_ok})",
            decimal_string(&suite_mean, 4),
            decimal_string(&bar, 4)
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_11_bit_accounting() {
    let game = AbsorbingGame::big_match();
    let gaps = big_match_full(1, 5).with_mode(SampleMode::Gaps);
    let p2 = parse_p2_spec("constL").expect("valid");
    let mut cfg = SimConfig::new(&game, &p2, 1 << 22, 4);
    cfg.seed = MASTER_SEED ^ 0xB;
    cfg.record = RecordFlags {
        bits: true,
        ..RecordFlags::default()
    };
    let report = run_batch(&gaps, &cfg).expect("block-mode batch");
    let amortized = report
        .bits_per_round_from_epoch(12)
        .expect("epochs >= 12 reached");
    let block_total: u64 = report.replicas.len() as u64;
    let _ = block_total;
    let bits_ok = amortized <= rat(2);

    // non-block mode pays more bits overall
    let per_round = big_match_full(1, 5);
    let mut cfg2 = SimConfig::new(&game, &p2, 1 << 18, 2);
    cfg2.seed = MASTER_SEED ^ 0xB1;
    cfg2.record = cfg.record;
    let dense = run_batch(&per_round, &cfg2).expect("per-round batch");
    let mut cfg3 = cfg2.clone();
    cfg3.seed = cfg2.seed;
    let sparse = run_batch(&gaps, &cfg3).expect("gap batch");
    let dense_bits = dense.bits_per_round_from_epoch(12).expect("reached");
    let sparse_bits = sparse.bits_per_round_from_epoch(12).expect("reached");
    let monotone_ok = sparse_bits < dense_bits;

    let pass = bits_ok && monotone_ok;
    let ok = verdict(
        "11 (bit accounting)",
        pass,
        &format!(
            "block-mode amortized bits/round over epochs >= 12: {} <= 2 ({bits_ok}); \
             per-round {} vs block {} at 2^18 ({monotone_ok})",
            decimal_string(&amortized, 4),
            decimal_string(&dense_bits, 4),
            decimal_string(&sparse_bits, 4)
        ),
    );
    assert!(ok);
}

#[test]
fn acceptance_support_zero_value_big_match() {
    // Fig. 3 shape sanity used across criteria: value 0 within 2^-12.
    let g = AbsorbingGame::zero_value_big_match();
    let eps = Rational::new(1.into(), (1u64 << 12).into());
    let v = approximate_value(&g, &eps);
    assert!(v.abs() <= eps);
    // and its derived game drives the counter exactly like the Big Match
    let d = derived_game(&g);
    let sol = two_row_solve(&d);
    assert!(sol.value.is_zero());
    let _ = sol.top_weight.to_f64();
}
