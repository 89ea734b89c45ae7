//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hankel_cones::convolution::{conv_power, hankel_form, lemma_constant, lemma_slack, norm};
use hankel_cones::index::{multinomial, MultiIndex};
use hankel_cones::linalg::SymMatrix;
use hankel_cones::psd::{pairing_experiment, sample_ucone, search_pns, SearchSettings};
use hankel_cones::sampling::{normal_vec, rng, simplex_weights, unit_vec};
use hankel_cones::sos::{
    build_gram_frame, check_sos, check_sos_with_frame, dual_membership, gram_to_tensor, moment_vector,
    random_psd, FeasibilityVerdict,
};
use hankel_cones::tensor::{eval_form, hankel_to_symmetric, rank_one, weighted_pairing, GeneratingVector};
use hankel_cones::vandermonde::{
    compose, decompose, default_frame, dual_image_point, ut_image, VandermondeCoefficients, VandermondeFrame,
};
use hankel_cones::SolverConfig;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff) / norm(b).max(f64::MIN_POSITIVE)
}

fn mi(e: &[u32]) -> MultiIndex {
    MultiIndex::new(e.to_vec())
}

fn c1_structural_constants() -> Outcome {
    let f = build_gram_frame(6, 3).map_err(|e| e.to_string())?;
    ensure(f.constraints().len() == 28, || {
        format!("{} constraints", f.constraints().len())
    })?;
    ensure(f.dim() == 10, || format!("Gram size {}", f.dim()))?;
    let c600 = multinomial(&mi(&[6, 0, 0])).unwrap();
    let c321 = multinomial(&mi(&[3, 2, 1])).unwrap();
    ensure(c600 == 1 && c321 == 60, || {
        format!("c_600 = {c600}, c_321 = {c321}")
    })?;

    let expect = |ones: &[(usize, usize)]| SymMatrix::from_fn(10, |i, j| ones.contains(&(i, j)) as u8 as f64);
    let a600 = f.constraint_matrix(mi(&[6, 0, 0]).rank());
    let a420 = f.constraint_matrix(mi(&[4, 2, 0]).rank());
    // E_11 and E_14 + E_22 + E_41, 0-based
    ensure(a600 == expect(&[(0, 0)]), || "A_600 differs from E_11".into())?;
    ensure(a420 == expect(&[(0, 3), (1, 1), (3, 0)]), || {
        "A_420 differs from E_14+E_22+E_41".into()
    })?;
    Ok("28 constraints, 10x10 frame, c_600=1, c_321=60, A_600 and A_420 exact".into())
}

fn c2_orthogonality_partition() -> Outcome {
    for (m, n) in [(2, 2), (4, 2), (4, 3), (6, 3), (8, 3)] {
        let f = build_gram_frame(m, n).map_err(|e| e.to_string())?;
        let d = f.dim();
        let count = f.constraints().len();
        let mats: Vec<SymMatrix> = (0..count).map(|i| f.constraint_matrix(i)).collect();
        for a in 0..count {
            for b in (a + 1)..count {
                ensure(mats[a].inner(&mats[b]) == 0.0, || {
                    format!("({m},{n}): <A_{a},A_{b}> != 0")
                })?;
            }
        }
        let mut sum = SymMatrix::zeros(d);
        for a in &mats {
            sum = sum.add(a);
        }
        ensure(sum == SymMatrix::from_fn(d, |_, _| 1.0), || {
            format!("({m},{n}): sum is not all-ones")
        })?;
    }
    Ok("exact for (2,2),(4,2),(4,3),(6,3),(8,3)".into())
}

fn c3_evaluation_equivalence() -> Outcome {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for (m, n) in [(2, 2), (4, 3), (6, 3)] {
        for _ in 0..1000 {
            let len = (n - 1) * m + 1;
            let gv = GeneratingVector::new(m, n, normal_vec(&mut r, len)).unwrap();
            let x = normal_vec(&mut r, n);
            let conv = hankel_form(&gv, &x).unwrap();
            let tens = eval_form(&hankel_to_symmetric(&gv), &x).unwrap();
            let ratio = (conv - tens).abs() / (1.0 + tens.abs());
            worst = worst.max(ratio);
            ensure(ratio <= 1e-10, || {
                format!("({m},{n}): |diff| = {:e}", (conv - tens).abs())
            })?;
        }
    }
    Ok(format!("3000 pairs, worst scaled difference {worst:.2e}"))
}

const SHAPES: [(usize, usize); 6] = [(2, 2), (2, 3), (4, 2), (4, 3), (6, 2), (6, 3)];

fn c4_vandermonde_round_trip() -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for (m, n) in SHAPES {
        let frame = VandermondeFrame::chebyshev(m, n).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let v = GeneratingVector::new(m, n, normal_vec(&mut r, frame.len())).unwrap();
            let back = compose(&decompose(&v, &frame).unwrap(), &frame).unwrap();
            let e1 = rel_diff(back.values(), v.values());

            let alpha = normal_vec(&mut r, frame.len());
            let composed = compose(&VandermondeCoefficients { alpha: alpha.clone() }, &frame).unwrap();
            let e2 = rel_diff(&decompose(&composed, &frame).unwrap().alpha, &alpha);
            worst = worst.max(e1).max(e2);
            ensure(e1 <= 1e-8 && e2 <= 1e-8, || {
                format!("({m},{n}): relative error {e1:e} / {e2:e}")
            })?;
        }
    }
    Ok(format!("shapes up to (6,3), worst relative error {worst:.2e}"))
}

fn c5_dual_image_identity() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for (m, n) in SHAPES {
        let frame = default_frame(m, n).map_err(|e| e.to_string())?;
        for _ in 0..200 {
            let x = normal_vec(&mut r, n);
            let lhs = ut_image(&conv_power(&x, m), &frame).unwrap();
            let rhs = dual_image_point(&rank_one(&x, m).to_symmetric(), &frame).unwrap();
            for (a, b) in lhs.iter().zip(&rhs) {
                let e = (a - b).abs() / b.abs().max(1.0);
                worst = worst.max(e);
                ensure(e <= 1e-9, || format!("({m},{n}): {a} vs {b}"))?;
            }
        }
    }
    Ok(format!("200 points per shape, worst relative error {worst:.2e}"))
}

fn c6_sos_soundness() -> Outcome {
    let cfg = SolverConfig::default();
    let mut r = rng(6);
    let mut max_iter = 0;
    let mut worst: f64 = 0.0;
    for (m, n) in [(2, 2), (4, 2), (4, 3), (6, 3)] {
        let frame = build_gram_frame(m, n).map_err(|e| e.to_string())?;
        let d = frame.dim();
        for trial in 0..50 {
            let rank = r.random_range(1..=d);
            let q = random_psd(&mut r, d, rank);
            let t = gram_to_tensor(&q, &frame).unwrap();
            let cert = match check_sos_with_frame(&t, &frame, &cfg).unwrap() {
                FeasibilityVerdict::Certified(c) => c,
                other => return Err(format!("({m},{n}) trial {trial} rank {rank}: {other:?}")),
            };
            max_iter = max_iter.max(cert.iterations);
            for _ in 0..100 {
                let x = normal_vec(&mut r, n);
                let form = eval_form(&t, &x).unwrap();
                let squares = cert.eval_squares(&x);
                let e = (form - squares).abs() / form.abs().max(f64::MIN_POSITIVE);
                worst = worst.max(e);
                ensure(e <= 1e-7, || {
                    format!("({m},{n}): factors give {squares}, form {form}")
                })?;
            }
        }
    }
    Ok(format!(
        "200 certified, worst relative error {worst:.2e}, max iterations {max_iter}"
    ))
}

fn c7_sos_dual_pairing() -> Outcome {
    let cfg = SolverConfig::default();
    let mut r = rng(7);
    let mut min_pair = f64::INFINITY;
    for (m, n) in [(4, 2), (4, 3), (6, 3)] {
        let frame = build_gram_frame(m, n).map_err(|e| e.to_string())?;
        let d = frame.dim();
        let mut certified = Vec::new();
        while certified.len() < 50 {
            let rank = r.random_range(1..=d);
            let t = gram_to_tensor(&random_psd(&mut r, d, rank), &frame).unwrap();
            match check_sos_with_frame(&t, &frame, &cfg).unwrap() {
                FeasibilityVerdict::Certified(_) => certified.push(t),
                other => return Err(format!("({m},{n}) rank {rank}: {other:?}")),
            }
        }
        let mut members = Vec::new();
        for _ in 0..50 {
            let terms = r.random_range(1..=d);
            let weights = simplex_weights(&mut r, terms);
            let parts: Vec<_> = weights
                .iter()
                .map(|_| moment_vector(&normal_vec(&mut r, n), m))
                .collect();
            let combo: Vec<(f64, _)> = weights.iter().copied().zip(&parts).collect();
            let b = hankel_cones::tensor::SymmetricTensor::linear_combination(&combo).unwrap();
            let mem = dual_membership(&b, &frame, cfg.eps_psd).unwrap();
            ensure(mem.member, || {
                format!("({m},{n}): moment combination has min eig {:e}", mem.min_eig)
            })?;
            members.push(b);
        }
        for a in &certified {
            for b in &members {
                let p = weighted_pairing(b, a).unwrap();
                min_pair = min_pair.min(p);
                ensure(p >= -1e-8, || format!("({m},{n}): pairing {p:e}"))?;
            }
        }
    }
    Ok(format!("3 x 2500 pairings, minimum {min_pair:.3e}"))
}

fn c8_hpsd_ucone_pairing() -> Outcome {
    let mut r = rng(8);
    let mut min_scaled = f64::INFINITY;
    for (m, n) in SHAPES {
        let frame = default_frame(m, n).map_err(|e| e.to_string())?;
        let members: Vec<GeneratingVector> = (0..20)
            .map(|_| {
                let alpha = (0..frame.len()).map(|_| r.random_range(0.0..1.0)).collect();
                compose(&VandermondeCoefficients { alpha }, &frame).unwrap()
            })
            .collect();
        let samples: Vec<_> = (0..500)
            .map(|s| sample_ucone(m, n, 1 + s as usize % 5, 8000 + s).unwrap())
            .collect();
        let report = pairing_experiment(&members, &samples, 1).map_err(|e| e.to_string())?;
        min_scaled = min_scaled.min(report.min_scaled);
        ensure(report.pass, || {
            format!("({m},{n}): min scaled pairing {:e}", report.min_scaled)
        })?;
    }
    Ok(format!(
        "20 x 500 per shape, minimum scaled pairing {min_scaled:.3e}"
    ))
}

fn c9_lemma_inequality() -> Outcome {
    let cfg = SolverConfig::default();
    let mut r = rng(9);
    let mut min_slack = f64::INFINITY;
    for (m, n) in [(2, 2), (2, 3), (4, 2)] {
        let lc = lemma_constant(n, m, None, &cfg).map_err(|e| e.to_string())?;
        let mut check = |terms: usize, count: usize| -> Result<(), String> {
            for _ in 0..count {
                let xs: Vec<Vec<f64>> = (0..terms).map(|_| normal_vec(&mut r, n)).collect();
                let s = lemma_slack(lc.constant, m, &xs);
                min_slack = min_slack.min(s);
                ensure(s >= -1e-9, || {
                    format!("({m},{n}) {terms} terms: slack {s:e} with c = {}", lc.constant)
                })?;
            }
            Ok(())
        };
        check(2, 500)?;
        check(3, 200)?;
        check(5, 200)?;
    }
    Ok(format!("(2,2),(2,3),(4,2), minimum slack {min_slack:.3e}"))
}

fn c10_binary_forms() -> Outcome {
    let cfg = SolverConfig::default();
    let mut r = rng(10);
    let mut refuted_dual = 0;
    for m in [4, 6] {
        let frame = build_gram_frame(m, 2).map_err(|e| e.to_string())?;
        let d = frame.dim();
        for _ in 0..50 {
            let rank = r.random_range(1..=d);
            let t = gram_to_tensor(&random_psd(&mut r, d, rank), &frame).unwrap();
            let verdict = check_sos(&t, &cfg).unwrap();
            ensure(verdict.is_certified(), || {
                format!("m={m} SOS form of rank {rank}: {verdict:?}")
            })?;

            // plant value -delta at a random unit point
            let x0 = unit_vec(&mut r, 2);
            let delta = r.random_range(0.01..1.0);
            let shift = eval_form(&t, &x0).unwrap() + delta;
            let planted = t.add(&rank_one(&x0, m).to_symmetric().scale(-shift)).unwrap();
            ensure(eval_form(&planted, &x0).unwrap() < 0.0, || {
                "planting failed".into()
            })?;
            let verdict = check_sos(&planted, &cfg).unwrap();
            ensure(verdict.is_refuted(), || {
                format!("m={m} planted form: {verdict:?}")
            })?;
            if matches!(
                verdict,
                FeasibilityVerdict::Refuted(hankel_cones::sos::Refutation::Dual { .. })
            ) {
                refuted_dual += 1;
            }
        }
        let settings = SearchSettings {
            trials: 200,
            seed: 10 + m as u64,
            psd_samples: 10_000,
            jobs: 4,
        };
        let flagged = search_pns(m, 2, &settings, &cfg).map_err(|e| e.to_string())?;
        ensure(flagged.is_empty(), || {
            format!("search_pns({m},2) flagged {} candidates", flagged.len())
        })?;
    }
    Ok(format!(
        "100 SOS certified, 100 planted refuted ({refuted_dual} by dual witness), search flagged 0"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("structural constants (6,3)", 1, c1_structural_constants),
        (
            "constraint orthogonality and partition",
            5,
            c2_orthogonality_partition,
        ),
        ("evaluation equivalence", 10, c3_evaluation_equivalence),
        ("Vandermonde round trip", 5, c4_vandermonde_round_trip),
        ("dual image identity", 5, c5_dual_image_identity),
        ("SOS certificate soundness", 60, c6_sos_soundness),
        ("SOS / dual cone pairing", 30, c7_sos_dual_pairing),
        ("HPSD / U(m,n) pairing", 10, c8_hpsd_ucone_pairing),
        ("convolution norm inequality", 10, c9_lemma_inequality),
        ("binary forms PSD = SOS", 120, c10_binary_forms),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit} s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{elapsed:.2?}]: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name} [{elapsed:.2?}]: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
