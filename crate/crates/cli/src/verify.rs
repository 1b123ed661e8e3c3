//! `bigmatch verify`: exhaustive checks with a nonzero exit on violation.

use bigmatch_core::games::{derived_game, AbsorbingGame, GeneralizedBigMatch, MatrixGame};
use bigmatch_core::numeric::rat;
use bigmatch_core::sim::{verify_base_lemma, verify_base_lemma_big_match, LemmaRanges, SplitMix64};
use bigmatch_core::solver::{
    game_value, limit_strategy, parametric_basis, reduce, solve_matrix_game, verify_solution,
    ThresholdMode,
};
use num_traits::One;
use std::process::ExitCode;

pub fn cmd_verify(suite: &str, seed: u64) -> Result<ExitCode, String> {
    let mut failures = 0usize;
    let mut ran = 0usize;
    let mut run = |name: &str, wanted: bool, f: &dyn Fn() -> Result<(), String>| {
        if !wanted {
            return;
        }
        ran += 1;
        match f() {
            Ok(()) => println!("verify {name}: ok"),
            Err(msg) => {
                failures += 1;
                println!("verify {name}: FAILED\n  {msg}");
            }
        }
    };
    let all = suite == "all";
    run("base-lemma", all || suite == "base-lemma", &suite_base_lemma);
    run("lp-certs", all || suite == "lp-certs", &|| suite_lp_certs(seed));
    run("parametric", all || suite == "parametric", &|| {
        suite_parametric(seed)
    });
    run("reduction", all || suite == "reduction", &suite_reduction);
    if ran == 0 {
        return Err(format!("unknown suite `{suite}`"));
    }
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn suite_base_lemma() -> Result<(), String> {
    let ranges = LemmaRanges::default();
    let bm = verify_base_lemma_big_match(&ranges);
    if !bm.is_empty() {
        return Err(format!("{} Big Match violations, first: {:?}", bm.len(), bm[0]));
    }
    let zv = verify_base_lemma(&ranges, &GeneralizedBigMatch::zero_value_big_match());
    if !zv.is_empty() {
        return Err(format!(
            "{} generalized violations, first: {:?}",
            zv.len(),
            zv[0]
        ));
    }
    Ok(())
}

fn random_game(rng: &mut SplitMix64, m: usize, n: usize, span: i64) -> MatrixGame {
    MatrixGame::from_rows(
        (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| rat((rng.next_u64() % (2 * span as u64 + 1)) as i64 - span))
                    .collect()
            })
            .collect(),
    )
}

fn suite_lp_certs(seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed ^ 0x11CE27);
    for trial in 0..50 {
        let m = 2 + (rng.next_u64() % 3) as usize;
        let n = 2 + (rng.next_u64() % 4) as usize;
        let g = random_game(&mut rng, m, n, 6);
        let sol = solve_matrix_game(&g);
        if !verify_solution(&g, &sol) {
            return Err(format!("trial {trial}: certificate failed"));
        }
        if game_value(&g.neg_transpose()) != -sol.value.clone() {
            return Err(format!("trial {trial}: val(-A^T) != -val(A)"));
        }
    }
    Ok(())
}

fn suite_parametric(seed: u64) -> Result<(), String> {
    let mut rng = SplitMix64::new(seed ^ 0x9A7A);
    for trial in 0..25 {
        let m = 2 + (rng.next_u64() % 2) as usize;
        let n = 2 + (rng.next_u64() % 3) as usize;
        let a0 = random_game(&mut rng, m, n, 4);
        let a1 = random_game(&mut rng, m, n, 4);
        let pg = parametric_basis(&a0, &a1, ThresholdMode::Fast).map_err(|e| e.to_string())?;
        let mut t = pg.t0().clone();
        for _ in 0..3 {
            t = t / rat(2);
            if !pg.verify_at(&t) {
                return Err(format!("trial {trial}: basis not optimal at {t}"));
            }
            let (_, v_poly) = pg.evaluate(&t);
            if v_poly != game_value(&pg.game_at(&t)) {
                return Err(format!("trial {trial}: polynomial value mismatch at {t}"));
            }
        }
        limit_strategy(&pg).map_err(|e| format!("trial {trial}: {e}"))?;
    }
    Ok(())
}

fn suite_reduction() -> Result<(), String> {
    let g = AbsorbingGame::big_match();
    let r = reduce(&g, 4, ThresholdMode::Fast).map_err(|e| e.to_string())?;
    let d = r.d_game.as_ref().ok_or("reduction unexpectedly degenerate")?;
    if !d.strict() {
        return Err("reduced game fails the derived-game audit".into());
    }
    let dd = d.derived();
    for i in 0..2 {
        for j in 0..dd.cols() {
            if !dd.entry(i, j).denom().is_one() {
                return Err("derived entries are not integers".into());
            }
        }
    }
    // round-trip the reduction file
    let text = bigmatch_core::solver::render_reduction(&r);
    let back = bigmatch_core::solver::parse_reduction(&text).map_err(|e| e.to_string())?;
    if bigmatch_core::solver::render_reduction(&back) != text {
        return Err("reduction file round-trip is not stable".into());
    }
    // the derived value must be zero, witnessed by the two-row solver
    let sol = bigmatch_core::games::two_row_solve(dd);
    if sol.value != rat(0) || sol.pure_row_optimal {
        return Err("derived game must have value 0 and no pure optimal row".into());
    }
    let _ = derived_game(&g);
    Ok(())
}
