//! Acceptance checks. Prints one line per criterion and exits non-zero if
//! any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use lexgraph::l0::{min_vc_implicit, min_vc_tcdag, outlier_approx, outlier_exact};
use lexgraph::oracle::{brute_lex_min, brute_min_vc, brute_outlier, p_laplacian_min};
use lexgraph::solver::{
    comp_fast_lex_min, comp_inf_min, comp_lex_min, directed_lex_min, stability_check,
    verify_max_min,
};
use lexgraph::synth::{cube_knn, random_regular};
use lexgraph::{GradientVector, SolveOptions};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lex_oracle() -> Outcome {
    let start = Instant::now();
    let opts = SolveOptions::new(7);
    let mut worst: f64 = 0.0;
    for seed in 0..200 {
        let (g, v0) = small_instance(seed);
        let truth = brute_lex_min(&g, &v0).map_err(|e| e.to_string())?;
        let lex = comp_lex_min(&g, &v0, &opts)
            .map_err(|e| e.to_string())?
            .assignment;
        let fast = comp_fast_lex_min(&g, &v0, &opts)
            .map_err(|e| e.to_string())?
            .assignment;
        let err = max_abs_diff(&truth, &lex).max(max_abs_diff(&truth, &fast));
        ensure(err < 1e-8, || {
            format!("instance {seed}: max-norm error {err:e}")
        })?;
        worst = worst.max(err);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "200 instances, worst error {worst:.1e}, {elapsed:.2?}"
    ))
}

fn max_min() -> Outcome {
    let opts = SolveOptions::new(7);
    let mut perturbed = 0;
    for seed in 0..200 {
        let (g, v0) = small_instance(seed);
        let v = comp_lex_min(&g, &v0, &opts)
            .map_err(|e| e.to_string())?
            .assignment;
        let bad = verify_max_min(&g, &v0, &v, 1e-7).map_err(|e| e.to_string())?;
        ensure(bad.is_empty(), || format!("instance {seed}: {bad:?}"))?;
        for x in v0.free_vertices() {
            for delta in [0.1, -0.1] {
                let mut w = v.clone();
                w[x] += delta;
                let bad = verify_max_min(&g, &v0, &w, 1e-7).map_err(|e| e.to_string())?;
                ensure(!bad.is_empty(), || {
                    format!("instance {seed}: perturbing vertex {x} by {delta} went unnoticed")
                })?;
                perturbed += 1;
            }
        }
    }
    Ok(format!(
        "200 instances pass, {perturbed} perturbations rejected"
    ))
}

fn inf_duality() -> Outcome {
    let opts = SolveOptions::new(3);
    let mut worst: f64 = 0.0;
    for seed in 1000..1200 {
        let (g, v0) = small_instance(seed);
        let inf = comp_inf_min(&g, &v0, &opts)
            .map_err(|e| e.to_string())?
            .inf_norm;
        let (brute, _) = brute_outlier(&g, &v0, 0).map_err(|e| e.to_string())?;
        let err = (inf - brute).abs();
        ensure(err <= 1e-12, || {
            format!("instance {seed}: {inf} vs {brute}")
        })?;
        worst = worst.max(err);
    }
    Ok(format!("200 instances, worst gap {worst:.1e}"))
}

fn stability() -> Outcome {
    let opts = SolveOptions::new(11);
    for seed in 2000..2100 {
        let (g, v0) = small_instance(seed);
        let mut r = rng(seed);
        let base = comp_fast_lex_min(&g, &v0, &opts)
            .map_err(|e| e.to_string())?
            .assignment;

        let eps = r.random_range(-1.0..1.0);
        let shifted = map_labels(&v0, |_, val| val + eps);
        let out = comp_fast_lex_min(&g, &shifted, &opts)
            .map_err(|e| e.to_string())?
            .assignment;
        let err = base
            .iter()
            .zip(&out)
            .fold(0.0f64, |m, (a, b)| m.max((b - a - eps).abs()));
        ensure(err <= 1e-9, || {
            format!("instance {seed}: translation off by {err:e}")
        })?;

        let c = r.random_range(0.1..5.0);
        let scaled = map_labels(&v0, |_, val| c * val);
        let out = comp_fast_lex_min(&g, &scaled, &opts)
            .map_err(|e| e.to_string())?
            .assignment;
        let err = base
            .iter()
            .zip(&out)
            .fold(0.0f64, |m, (a, b)| m.max((b - c * a).abs()));
        ensure(err <= 1e-9, || {
            format!("instance {seed}: scaling off by {err:e}")
        })?;

        let eps = r.random_range(0.0..0.2);
        let noisy = map_labels(&v0, |_, val| val + r.random_range(-eps..=eps));
        let moved = stability_check(&g, &v0, &noisy, &opts).map_err(|e| e.to_string())?;
        ensure(moved <= eps + 1e-9, || {
            format!("instance {seed}: moved {moved} > {eps}")
        })?;
    }
    Ok("100 instances".into())
}

/// Instances for the outlier criteria, with the brute-force optimum per k.
fn outlier_cases() -> Result<Vec<(u64, usize, f64)>, String> {
    let mut out = Vec::new();
    for seed in 3000..3100u64 {
        let (g, v0) = outlier_instance(seed, 12);
        let k = 1 + (seed % 3) as usize;
        let (alpha, _) = brute_outlier(&g, &v0, k).map_err(|e| e.to_string())?;
        out.push((seed, k, alpha));
    }
    Ok(out)
}

fn l0_exact() -> Outcome {
    let opts = SolveOptions::new(5);
    for (seed, k, alpha) in outlier_cases()? {
        let (g, v0) = outlier_instance(seed, 12);
        let res = outlier_exact(&g, &v0, k, &opts).map_err(|e| e.to_string())?;
        ensure((res.alpha - alpha).abs() <= 1e-10, || {
            format!(
                "instance {seed}, k={k}: alpha {} vs brute {alpha}",
                res.alpha
            )
        })?;
        ensure(res.removed.len() <= k, || {
            format!("instance {seed}: removed {:?}", res.removed)
        })?;
        ensure((res.result.inf_norm - alpha).abs() <= 1e-9, || {
            format!(
                "instance {seed}: assignment reaches {} not {alpha}",
                res.result.inf_norm
            )
        })?;
        for t in v0.terminals() {
            if !res.removed.contains(&t) {
                ensure(res.result.assignment[t] == v0.get(t).unwrap(), || {
                    format!("instance {seed}: kept terminal {t} changed")
                })?;
            }
        }
    }
    Ok("100 instances, k in {1,2,3}".into())
}

fn l0_approx() -> Outcome {
    let opts = SolveOptions::new(5);
    let mut ratio: f64 = 0.0;
    for (seed, k, alpha) in outlier_cases()? {
        let (g, v0) = outlier_instance(seed, 12);
        let res = outlier_approx(&g, &v0, k, &opts).map_err(|e| e.to_string())?;
        ensure(res.removed.len() <= 2 * k, || {
            format!(
                "instance {seed}, k={k}: removed {} labels",
                res.removed.len()
            )
        })?;
        let norm = res.result.inf_norm;
        ensure(norm <= alpha + 1e-9, || {
            format!("instance {seed}, k={k}: {norm} > {alpha}")
        })?;
        ratio = ratio.max(res.removed.len() as f64 / k as f64);
    }
    Ok(format!("100 instances, at most {ratio}k labels removed"))
}

fn min_vc() -> Outcome {
    let mut r = rng(4000);
    let mut total = 0;
    for i in 0..100 {
        let n = r.random_range(1..=14);
        let p = r.random_range(0.05..0.6);
        let dag = random_dag(&mut r, n, p);
        let closure = dag.transitive_closure();
        let a = min_vc_tcdag(&closure, true).map_err(|e| e.to_string())?;
        let b = min_vc_implicit(&dag).map_err(|e| e.to_string())?;
        let c = brute_min_vc(&closure).map_err(|e| e.to_string())?;
        ensure(a.len() == c.len() && b.len() == c.len(), || {
            format!("dag {i}: sizes {} / {} / {}", a.len(), b.len(), c.len())
        })?;
        for set in [&a, &b, &c] {
            ensure(closure.is_cover(set), || {
                format!("dag {i}: {set:?} misses a closure arc")
            })?;
        }
        total += c.len();
    }
    Ok(format!("100 DAGs, total cover size {total}"))
}

fn lp_limit() -> Outcome {
    let opts = SolveOptions::new(1);
    let mut worst: f64 = 0.0;
    for seed in 5000..5020u64 {
        let mut r = rng(seed);
        let n = r.random_range(3..=8);
        let m = r.random_range(n - 1..=2 * n);
        let t = r.random_range(2..n);
        let (g, v0) = undirected_instance(&mut r, n, m, t);
        let lex = comp_lex_min(&g, &v0, &opts)
            .map_err(|e| e.to_string())?
            .assignment;
        let pl = p_laplacian_min(&g, &v0, 64, 200_000, 1e-12).map_err(|e| e.to_string())?;
        let err = max_abs_diff(&lex, &pl.values);
        ensure(err < 0.05, || {
            format!("instance {seed}: p=64 is {err} from the lex-minimizer")
        })?;
        worst = worst.max(err);
    }
    Ok(format!("20 instances, worst distance {worst:.4}"))
}

fn directed() -> Outcome {
    let mut ambiguous = 0;
    for i in 0..50 {
        let (g, v0) = directed_instance(6000 + i);
        let mut reference: Option<Vec<f64>> = None;
        for seed in 0..10 {
            let res =
                directed_lex_min(&g, &v0, &SolveOptions::new(seed)).map_err(|e| e.to_string())?;
            ensure(res.violations.is_empty(), || {
                format!("instance {i}, seed {seed}: violations {:?}", res.violations)
            })?;
            let v = &res.result.assignment;
            let free: Vec<usize> = res.ambiguous.iter().map(|a| a.vertex).collect();
            for e in g.edges() {
                if free.contains(&e.u) || free.contains(&e.v) {
                    let grad = ((v[e.u] - v[e.v]) / e.len).max(0.0);
                    ensure(grad <= 1e-9, || {
                        format!(
                            "instance {i}: unfixed edge {}->{} has gradient {grad}",
                            e.u, e.v
                        )
                    })?;
                }
            }
            let grads = GradientVector::positive_part(&g, v)
                .map_err(|e| e.to_string())?
                .0;
            match &reference {
                None => {
                    ambiguous += free.len();
                    reference = Some(grads);
                }
                Some(r) => {
                    let err = max_abs_diff(r, &grads);
                    ensure(err <= 1e-8, || {
                        format!("instance {i}: seed {seed} differs by {err:e}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "50 instances x 10 seeds, {ambiguous} unconstrained vertices"
    ))
}

fn median_time(reps: usize, mut f: impl FnMut() -> Result<(), String>) -> Result<f64, String> {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        f()?;
        times.push(start.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    Ok(times[reps / 2])
}

fn performance() -> Outcome {
    let opts = SolveOptions::new(2);
    let sizes = [10_000usize, 30_000, 100_000];
    let mut inf_times = Vec::new();
    for &n in &sizes {
        let inst = random_regular(n, 4, n / 100, 10).map_err(|e| e.to_string())?;
        let t = median_time(3, || {
            comp_inf_min(&inst.graph, &inst.labels, &opts)
                .map(|_| ())
                .map_err(|e| e.to_string())
        })?;
        inf_times.push(t);
    }
    let big = inf_times[2];
    ensure(big < 10.0, || format!("inf-min at n=1e5 took {big:.2} s"))?;
    let exponent = (inf_times[2] / inf_times[0]).ln() / (10.0f64).ln();
    ensure(exponent <= 1.3, || {
        format!("inf-min time grows like n^{exponent:.2} ({inf_times:?})")
    })?;

    let inst = random_regular(100_000, 4, 1000, 10).map_err(|e| e.to_string())?;
    let start = Instant::now();
    comp_fast_lex_min(&inst.graph, &inst.labels, &opts).map_err(|e| e.to_string())?;
    let fast = start.elapsed().as_secs_f64();
    ensure(fast < 300.0, || {
        format!("fast lex-min at n=1e5 took {fast:.1} s")
    })?;
    Ok(format!(
        "inf-min {:.3}/{:.3}/{:.3} s (exponent {exponent:.2}), fast lex-min {fast:.1} s",
        inf_times[0], inf_times[1], inf_times[2]
    ))
}

fn mean_unlabeled_error(n: usize, seed: u64) -> Result<f64, String> {
    let inst = cube_knn(n, 4, 8, 100, seed).map_err(|e| e.to_string())?;
    let truth = inst.truth.expect("cube instances carry a truth");
    let v = comp_fast_lex_min(&inst.graph, &inst.labels, &SolveOptions::new(seed))
        .map_err(|e| e.to_string())?
        .assignment;
    let free = inst.labels.free_vertices();
    Ok(free.iter().map(|&x| (v[x] - truth[x]).abs()).sum::<f64>() / free.len() as f64)
}

fn knn_trend() -> Outcome {
    let seeds = [1u64, 2, 3];
    let mut errs = [0.0; 2];
    for (slot, n) in [2_000usize, 10_000].into_iter().enumerate() {
        for &s in &seeds {
            errs[slot] += mean_unlabeled_error(n, s)? / seeds.len() as f64;
        }
    }
    let change = (errs[1] - errs[0]).abs() / errs[0];
    ensure(change < 0.25, || {
        format!(
            "mean error {:.4} -> {:.4}, relative change {change:.3}",
            errs[0], errs[1]
        )
    })?;
    Ok(format!(
        "mean l1 error {:.4} (n=2000) -> {:.4} (n=10000), change {:.1}%",
        errs[0],
        errs[1],
        100.0 * change
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("lex-oracle equivalence", lex_oracle),
        ("max-min characterization", max_min),
        ("inf-duality", inf_duality),
        ("stability and monotonicity", stability),
        ("l0 exactness", l0_exact),
        ("l0 approximation", l0_approx),
        ("min vertex cover on TC-DAGs", min_vc),
        ("lp limit", lp_limit),
        ("directed determinism", directed),
        ("performance", performance),
        ("kNN error trend", knn_trend),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({why}) [{took:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
