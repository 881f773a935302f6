//! Acceptance suite. Prints one PASS/FAIL line per check and exits nonzero if
//! a correctness check fails. The wall-clock scaling check depends on the
//! host's cache sizes and load, so its failure is reported but only fatal
//! when `SERPAR_STRICT_TIMING` is set.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{
    brute_force_wheel, direct_sum, pad_series_parallel, random_dense, random_non_sp, shuffle, sparse, two_sum,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serpar::{
    certify_ternary, generate, minimalize_certificate, oracle_is_series_parallel, reduce, search_wheel, verify_n2,
    verify_reductions, verify_wheel, BinaryCertificate, DenseMatrix, GenConfig, Mode, QueueOrder, ReduceOptions,
    SparseMatrix, TernaryCertificate, WheelCheckMode, WheelKind,
};

type Check = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

/// Runs the binary search on `d` and checks verdict, reductions and wheel
/// against the oracle.
fn check_binary(d: &DenseMatrix) -> Result<(), String> {
    let m = sparse(d, Mode::Binary);
    let search = search_wheel(&m, &ReduceOptions::default()).map_err(|e| format!("{e} on\n{d}"))?;
    let oracle = oracle_is_series_parallel(d, Mode::Binary);
    match search.certificate {
        BinaryCertificate::SeriesParallel(reductions) => {
            ensure(oracle.series_parallel, || format!("reported series-parallel:\n{d}"))?;
            verify_reductions(&m, &reductions).map_err(|e| format!("{e} on\n{d}"))
        }
        BinaryCertificate::Wheel { reductions, wheel } => {
            ensure(!oracle.series_parallel, || format!("reported a wheel in a series-parallel matrix:\n{d}"))?;
            verify_reductions(&m, &reductions).map_err(|e| format!("{e} on\n{d}"))?;
            verify_wheel(&m, &wheel.rows, &wheel.cols, WheelCheckMode::ExactBinary)
                .map(|_| ())
                .map_err(|e| format!("{e} on\n{d}"))
        }
    }
}

fn check_ternary(d: &DenseMatrix) -> Result<(), String> {
    let m = sparse(d, Mode::Ternary);
    let search = certify_ternary(&m, &ReduceOptions::default()).map_err(|e| format!("{e} on\n{d}"))?;
    let oracle = oracle_is_series_parallel(d, Mode::Ternary);
    ensure(search.certificate.is_series_parallel() == oracle.series_parallel, || format!("wrong verdict on\n{d}"))?;
    verify_reductions(&m, search.certificate.reductions()).map_err(|e| format!("{e} on\n{d}"))?;
    match search.certificate {
        TernaryCertificate::SeriesParallel(_) => Ok(()),
        TernaryCertificate::SignedWheel { wheel, .. } => {
            verify_wheel(&m, &wheel.rows, &wheel.cols, WheelCheckMode::Support)
                .map(|_| ())
                .map_err(|e| format!("{e} on\n{d}"))
        }
        TernaryCertificate::N2 { rows, cols, .. } => verify_n2(&m, rows, cols).map_err(|e| format!("{e} on\n{d}")),
    }
}

/// The `index`-th 3×3 matrix over `alphabet`, counting in base `alphabet.len()`.
fn nth_3x3(mut index: usize, alphabet: &[i8]) -> DenseMatrix {
    let mut d = DenseMatrix::zeros(3, 3);
    for k in 0..9 {
        d.set(k / 3, k % 3, alphabet[index % alphabet.len()]);
        index /= alphabet.len();
    }
    d
}

fn exhaustive_binary() -> Check {
    let start = Instant::now();
    let mut wheels = 0;
    for index in 0..512 {
        let d = nth_3x3(index, &[0, 1]);
        check_binary(&d)?;
        wheels += usize::from(!oracle_is_series_parallel(&d, Mode::Binary).series_parallel);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2} s, limit 5 s"))?;
    Ok(format!("512 matrices, {wheels} not series-parallel, all certified, {secs:.2} s"))
}

fn exhaustive_ternary() -> Check {
    let start = Instant::now();
    let mut non_sp = 0;
    for index in 0..19683 {
        let d = nth_3x3(index, &[-1, 0, 1]);
        check_ternary(&d)?;
        non_sp += usize::from(!oracle_is_series_parallel(&d, Mode::Ternary).series_parallel);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.2} s, limit 60 s"))?;
    Ok(format!("19683 matrices, {non_sp} not series-parallel, all certified, {secs:.2} s"))
}

fn fuzz() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf022);
    let per_mode = 6000;
    let mut non_sp = 0;
    for mode in [Mode::Binary, Mode::Ternary] {
        for i in 0..per_mode {
            let p = [0.2, 0.5, 0.8][i % 3];
            let (rows, cols) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
            let d = random_dense(&mut rng, rows, cols, p, mode);
            let oracle = oracle_is_series_parallel(&d, mode);
            let mut m = sparse(&d, mode);
            let outcome = reduce(&mut m, &ReduceOptions::default());
            ensure(
                outcome.is_series_parallel() == oracle.series_parallel
                    && outcome.remaining_rows.len() == oracle.remaining_rows
                    && outcome.remaining_cols.len() == oracle.remaining_cols,
                || format!("core differs from the oracle on\n{d}"),
            )?;
            match mode {
                Mode::Binary => check_binary(&d)?,
                Mode::Ternary => check_ternary(&d)?,
            }
            non_sp += usize::from(!oracle.series_parallel);
        }
    }
    Ok(format!("{} matrices, {non_sp} not series-parallel, 0 failures", 2 * per_mode))
}

fn fig4b_reductions(delta: f64, seed: u64) -> usize {
    let config =
        GenConfig { n: 10_000, alpha: 0.0, beta: 0.5, gamma: 0.5, delta, p: 1.0, seed, ..GenConfig::default() };
    let mut m = generate(&config).expect("valid config");
    reduce(&mut m, &ReduceOptions::default()).reductions.len()
}

fn figure_4b() -> Check {
    let seeds = 100u64;
    for seed in 0..seeds {
        let count = fig4b_reductions(0.0, seed);
        ensure(count == 20_000, || format!("unperturbed seed {seed} gave {count} reductions"))?;
    }
    let mut report = vec!["delta 0: 20000 every seed".to_string()];
    for (flips, target, tolerance) in [(1000, 14_878.0, 0.02), (10_000, 3_644.0, 0.03)] {
        let delta = flips as f64 / 10_000.0;
        let mean = (0..seeds).map(|seed| fig4b_reductions(delta, seed) as f64).sum::<f64>() / seeds as f64;
        let error = (mean - target) / target;
        ensure(error.abs() <= tolerance, || {
            format!("{flips} flips: mean {mean:.1}, target {target} +-{}%", tolerance * 100.0)
        })?;
        report.push(format!("{flips} flips: mean {mean:.1} ({:+.2}%)", error * 100.0));
    }
    Ok(format!("{} over {seeds} seeds", report.join("; ")))
}

/// Best time per nonzero, in nanoseconds, for each matrix in `groups`,
/// interleaving the groups so that load spikes hit all of them alike.
fn best_ns_per_nnz(groups: &[Vec<SparseMatrix>], rounds: usize) -> Vec<f64> {
    let mut best = vec![vec![f64::MAX; groups[0].len()]; groups.len()];
    for _ in 0..rounds {
        for (g, group) in groups.iter().enumerate() {
            for (i, matrix) in group.iter().enumerate() {
                let mut m = matrix.clone();
                let start = Instant::now();
                reduce(&mut m, &ReduceOptions::default());
                let ns = start.elapsed().as_secs_f64() * 1e9 / matrix.nnz() as f64;
                best[g][i] = best[g][i].min(ns);
            }
        }
    }
    best.iter().map(|b| b.iter().sum::<f64>() / b.len() as f64).collect()
}

fn scaling() -> Check {
    let family = |n: usize, beta: f64, seed: u64| {
        let config = GenConfig { n, alpha: 0.0, beta, gamma: 1.0 - beta, p: 1.0, seed, ..GenConfig::default() };
        generate(&config).expect("valid config")
    };
    let small: Vec<_> = (0..3).map(|seed| family(10_000, 0.5, seed)).collect();
    let large: Vec<_> = (0..3).map(|seed| family(100_000, 0.5, seed)).collect();
    let nnz = |g: &[SparseMatrix]| g.iter().map(SparseMatrix::nnz).sum::<usize>() as f64 / g.len() as f64;
    let (small_nnz, large_nnz) = (nnz(&small), nnz(&large));
    let per_nnz = best_ns_per_nnz(&[small, large], 7);
    let ratio = per_nnz[1] * large_nnz / (per_nnz[0] * small_nnz);

    let trend: Vec<f64> = [1.0, 0.5, 0.0]
        .iter()
        .map(|&beta| best_ns_per_nnz(&[(0..3).map(|seed| family(2000, beta, seed)).collect()], 5)[0])
        .collect();
    // Timing noise on a shared host is a few percent; allow 10%.
    let trend_ok = trend.windows(2).all(|w| w[1] <= 1.1 * w[0]);
    let detail = format!(
        "time ratio N=1e5/N=1e4 {ratio:.1}x (limit 15x; {:.0} vs {:.0} ns/nnz); ns/nnz at gamma 0, 0.5, 1: {:.0}, {:.0}, {:.0}",
        per_nnz[1], per_nnz[0], trend[0], trend[1], trend[2]
    );
    if ratio <= 15.0 && trend_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn order_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0bde);
    for i in 0..1000 {
        let mode = if i % 2 == 0 { Mode::Binary } else { Mode::Ternary };
        let p = [0.2, 0.5, 0.8][i % 3];
        let (rows, cols) = (rng.gen_range(1..=10), rng.gen_range(1..=10));
        let d = random_dense(&mut rng, rows, cols, p, mode);
        let mut seen = None;
        for _ in 0..5 {
            let options =
                ReduceOptions { queue_order: QueueOrder::Shuffled { seed: rng.gen() }, ..ReduceOptions::default() };
            let mut m = sparse(&d, mode);
            let outcome = reduce(&mut m, &options);
            let summary = (outcome.reductions.len(), outcome.remaining_rows.len(), outcome.remaining_cols.len());
            ensure(*seen.get_or_insert(summary) == summary, || format!("order-dependent result on\n{d}"))?;
        }
    }
    Ok("1000 matrices x 5 queue orders, identical counts and core dimensions".into())
}

fn recursion_bound() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ec0);
    let (mut found, mut attempts, mut steps, mut runs) = (0, 0, 0, 0);
    while found < 100 {
        attempts += 1;
        ensure(attempts <= 100_000, || format!("only {found} decomposing matrices in {attempts} attempts"))?;
        let a = random_non_sp(&mut rng, 6);
        let b = random_non_sp(&mut rng, 6);
        let joined = if rng.gen_bool(0.7) { two_sum(&a, &b) } else { direct_sum(&a, &b) };
        let count = rng.gen_range(0..10);
        let padded = pad_series_parallel(&mut rng, &joined, count);
        let d = shuffle(&mut rng, &padded);
        let search = search_wheel(&sparse(&d, Mode::Binary), &ReduceOptions::default()).map_err(|e| e.to_string())?;
        for run in &search.stats.reduce_runs {
            runs += 1;
            ensure(run.iterations <= run.iteration_bound, || {
                format!("{} iterations, bound {} on\n{d}", run.iterations, run.iteration_bound)
            })?;
        }
        if search.stats.decompositions.is_empty() {
            continue;
        }
        for step in &search.stats.decompositions {
            steps += 1;
            ensure(2 * step.part_nnz <= step.core_nnz, || {
                format!("part has {} of {} nonzeros on\n{d}", step.part_nnz, step.core_nnz)
            })?;
        }
        found += 1;
    }
    Ok(format!("{found} matrices, {steps} decompositions, {runs} reduce runs within bounds"))
}

fn minimal_certificates() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3171);
    let (mut small, mut cycles, mut primes) = (0, 0, 0);
    for _ in 0..1000 {
        let d = random_non_sp(&mut rng, 8);
        let m = sparse(&d, Mode::Binary);
        let BinaryCertificate::Wheel { wheel, .. } =
            search_wheel(&m, &ReduceOptions::default()).map_err(|e| e.to_string())?.certificate
        else {
            return Err(format!("no wheel in\n{d}"));
        };
        let minimal = minimalize_certificate(&wheel, &m).map_err(|e| format!("{e} on\n{d}"))?;
        let info = verify_wheel(&m, &minimal.rows, &minimal.cols, WheelCheckMode::ExactBinary)
            .map_err(|e| format!("{e} on\n{d}"))?;
        match info.kind {
            WheelKind::Cycle => cycles += 1,
            WheelKind::CycleWithChordBlock if info.order == 3 => primes += 1,
            WheelKind::CycleWithChordBlock => return Err(format!("M{}' left after minimalizing\n{d}", info.order)),
        }
        let l = info.order;
        if l <= 5 {
            small += 1;
            let sub = d.select(&minimal.rows, &minimal.cols);
            ensure(brute_force_wheel(&sub).is_some(), || format!("not a wheel pattern:\n{sub}"))?;
            let all: Vec<usize> = (0..l).collect();
            for drop in 0..l {
                let keep: Vec<usize> = (0..l).filter(|&i| i != drop).collect();
                for part in [sub.select(&keep, &all), sub.select(&all, &keep)] {
                    ensure(oracle_is_series_parallel(&part, Mode::Binary).series_parallel, || {
                        format!("deleting one element of\n{sub}leaves a non-series-parallel matrix")
                    })?;
                }
            }
        }
    }
    Ok(format!("1000 certificates: {cycles} cycles, {primes} M3'; {small} with order <= 5 are minimal"))
}

fn main() -> ExitCode {
    let strict_timing = std::env::var_os("SERPAR_STRICT_TIMING").is_some();
    let checks: [(&str, fn() -> Check, bool); 8] = [
        ("exhaustive binary 3x3", exhaustive_binary, false),
        ("exhaustive ternary 3x3", exhaustive_ternary, false),
        ("fuzz against the oracle", fuzz, false),
        ("generator reduction counts", figure_4b, false),
        ("linear scaling", scaling, true),
        ("queue order invariance", order_invariance, false),
        ("decomposition and iteration bounds", recursion_bound, false),
        ("minimal certificates", minimal_certificates, false),
    ];
    let mut fatal = false;
    for (i, (name, check, timing)) in checks.into_iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {} {name}: {detail}", i + 1);
                fatal |= !timing || strict_timing;
            }
        }
    }
    if fatal {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
