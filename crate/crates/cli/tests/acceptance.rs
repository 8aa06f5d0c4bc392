//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wang_cli::problem::{builtin_problem, Loaded, HOPF_BUILTIN};
use wang_cli::solve_report;
use wang_core::extension::{enumerate_extensions, ExtensionOracle, ExtensionProblem};
use wang_core::finite::{abelian_groups_of_order, FiniteGroup};
use wang_core::tables::build_hopf_m2_problem;
use wang_core::wang::{
    easy_thom_check, localize_problem, solve_homotopy_range, solve_ktheory, DegreeResult,
    WangProblem,
};
use wang_core::{
    direct_sum, hom_invariants, localize, smith_normal_form, FgGroup, GroupHom, IntMatrix,
    LocalizationRing,
};

type Check = fn() -> Result<String, String>;

fn g(text: &str) -> FgGroup {
    text.parse().expect("literal")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(gs: &[FgGroup]) -> String {
    let parts: Vec<String> = gs.iter().map(FgGroup::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn hopf_table() -> Result<String, String> {
    let expected: [&[&str]; 8] = [
        &["ℤ ⊕ ℤ/2"],
        &["0"],
        &["ℤ"],
        &["0"],
        &["0"],
        &["ℤ/60"],
        &["ℤ/4", "(ℤ/2)²"],
        &["ℤ/4 ⊕ ℤ/2", "(ℤ/2)³"],
    ];
    let start = Instant::now();
    let p = build_hopf_m2_problem();
    let results = solve_homotopy_range(&p).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(results.len() == 8, || {
        format!("{} degrees solved, expected 8", results.len())
    })?;
    for (r, want) in results.iter().zip(expected) {
        let mut want: Vec<FgGroup> = want.iter().map(|t| g(t)).collect();
        want.sort();
        ensure(r.candidates == want, || {
            format!(
                "n = {}: got {}, expected {}",
                r.degree,
                show(&r.candidates),
                show(&want)
            )
        })?;
    }
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("n = 1..8 exact, {elapsed:.2?}"))
}

fn rational_column() -> Result<String, String> {
    let p = build_hopf_m2_problem().with_localization(LocalizationRing::rationals());
    let results = solve_homotopy_range(&p).map_err(|e| e.to_string())?;
    let ranks = [1, 0, 1, 0, 0, 0, 0, 0];
    for (r, rank) in results.iter().zip(ranks) {
        ensure(r.candidates == vec![FgGroup::free(rank)], || {
            format!(
                "n = {}: got {}, expected ℚ-rank {rank}",
                r.degree,
                show(&r.candidates)
            )
        })?;
    }
    Ok("ranks 1,0,1,0,0,0,0,0".to_owned())
}

fn rosenberg() -> Result<String, String> {
    let solve = |delta: i64| -> Result<(Vec<FgGroup>, Vec<FgGroup>), String> {
        let p = WangProblem::dixmier_douady(delta, FgGroup::free(1), FgGroup::zero())
            .map_err(|e| e.to_string())?;
        let r = solve_ktheory(&p).map_err(|e| e.to_string())?;
        Ok((r.k0.candidates, r.k1.candidates))
    };
    let z = || vec![FgGroup::zero()];
    let mut failures = Vec::new();
    let mut total = 0;
    let mut check =
        |case: String, delta: i64, k0: Vec<FgGroup>, k1: Vec<FgGroup>| -> Result<(), String> {
            total += 1;
            let got = solve(delta)?;
            if got != (k0.clone(), k1.clone()) {
                failures.push(format!(
                    "{case}: expected K₀ = {}, K₁ = {}, solver gives K₀ = {}, K₁ = {}",
                    show(&k0),
                    show(&k1),
                    show(&got.0),
                    show(&got.1)
                ));
            }
            Ok(())
        };
    for s in [2i64, 3, 5, 12] {
        check(format!("s = {s}, d₃ iso (Δ = 1)"), 1, z(), z())?;
        check(format!("s = {s}, d₃ iso (Δ = −1)"), -1, z(), z())?;
        check(format!("s = {s}, d₃ = 0"), 0, vec![FgGroup::free(1)], z())?;
        check(
            format!("s = {s}, d₃ = ×{s}"),
            s,
            z(),
            vec![FgGroup::cyclic(s)],
        )?;
        check(
            format!("s = {s}, d₃ = ×(−{s})"),
            -s,
            z(),
            vec![FgGroup::cyclic(s)],
        )?;
    }
    if failures.is_empty() {
        return Ok(format!(
            "{total} sub-cases: iso, zero and ×s for s ∈ {{2, 3, 5, 12}}"
        ));
    }
    let failed = failures.len();
    failures.dedup_by(|a, b| a.split_once(": ").map(|x| x.1) == b.split_once(": ").map(|x| x.1));
    Err(format!(
        "{} of {total} sub-cases pass; {}",
        total - failed,
        failures.join("; ")
    ))
}

fn random_finite_factors(rng: &mut ChaCha8Rng, count: usize, max: u64) -> Vec<BigInt> {
    (0..count)
        .map(|_| BigInt::from(rng.gen_range(2..=max)))
        .collect()
}

fn even_sphere_property() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut free_cases = 0;
    for i in 0..50 {
        let rank = rng.gen_range(0..=3);
        let count = rng.gen_range(0..=2);
        let k0 = FgGroup::from_factors(rank, &random_finite_factors(&mut rng, count, 24));
        let k = [2u32, 4, 6][i % 3];
        let p = WangProblem::ktheory(k, k0.clone(), FgGroup::zero(), [None, None])
            .map_err(|e| e.to_string())?;
        let r = solve_ktheory(&p).map_err(|e| e.to_string())?;
        ensure(r.k1.candidates == vec![FgGroup::zero()], || {
            format!(
                "K₀(B) = {k0}, k = {k}: K₁(A) candidates {}",
                show(&r.k1.candidates)
            )
        })?;
        let ses = ExtensionProblem::new(k0.clone(), k0.clone());
        ensure(r.k0.extension_problem() == Some(ses.clone()), || {
            format!(
                "K₀(B) = {k0}, k = {k}: extension problem {:?}",
                r.k0.extension_problem()
            )
        })?;
        let check = easy_thom_check(&p).map_err(|e| e.to_string())?;
        ensure(check.map(|c| c.ses) == Some(ses), || {
            format!("K₀(B) = {k0}: even-sphere check disagrees")
        })?;
        let split = direct_sum(&k0, &k0);
        ensure(r.k0.candidates.contains(&split), || {
            format!("K₀(B) = {k0}: split group missing")
        })?;
        if k0.is_free() {
            free_cases += 1;
            ensure(r.k0.candidates == vec![split.clone()], || {
                format!(
                    "K₀(B) = {k0}: candidates {}, expected {{{split}}}",
                    show(&r.k0.candidates)
                )
            })?;
        }
    }
    let out = wang_cli::run(["wang", "example", "hopf-m2-ktheory"]);
    ensure(out.stdout.contains("note: discrepancy"), || {
        "Hopf M₂ K-theory report lacks the discrepancy note".to_owned()
    })?;
    Ok(format!(
        "50 random K₀(B), {free_cases} free; discrepancy note present"
    ))
}

fn extension_oracle() -> Result<String, String> {
    let start = Instant::now();
    let mut oracle = ExtensionOracle::new(64);
    let mut pairs = 0;
    for a_order in 1..=64u64 {
        for c_order in 1..=64 / a_order {
            for a in abelian_groups_of_order(a_order) {
                for c in abelian_groups_of_order(c_order) {
                    let p = ExtensionProblem::new(a.clone(), c);
                    let brute = oracle.extensions(&p).map_err(|e| e.to_string())?;
                    let fast = enumerate_extensions(&p);
                    ensure(fast == brute, || {
                        format!(
                            "sub {}, quot {}: {} vs brute force {}",
                            p.sub,
                            p.quot,
                            show(&fast.candidates),
                            show(&brute.candidates)
                        )
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{pairs} pairs, {elapsed:.2?}"))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let rows = rng.gen_range(1..=8);
    let cols = rng.gen_range(1..=8);
    let bound = 1_000_000i64;
    let entries: Vec<Vec<i64>> = match rng.gen_range(0..3) {
        // dense
        0 => (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect(),
        // sparse, small entries
        1 => (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            rng.gen_range(-12..=12)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect(),
        // low rank: a product of thin factors, clamped to the entry bound
        _ => {
            let r = rng.gen_range(1..=rows.min(cols));
            let left: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..r).map(|_| rng.gen_range(-30..=30)).collect())
                .collect();
            let right: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..cols).map(|_| rng.gen_range(-30..=30)).collect())
                .collect();
            (0..rows)
                .map(|i| {
                    (0..cols)
                        .map(|j| {
                            (0..r)
                                .map(|t| left[i][t] * right[t][j])
                                .sum::<i64>()
                                .clamp(-bound, bound)
                        })
                        .collect()
                })
                .collect()
        }
    };
    IntMatrix::from_rows(&entries, cols).expect("rectangular")
}

fn snf_properties() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..1000 {
        let a = random_matrix(&mut rng);
        let s = smith_normal_form(&a);
        let fail = |what: &str| format!("trial {trial}, A = {a}: {what}");
        ensure(&(&s.u * &a) * &s.v == s.d, || fail("U·A·V ≠ D"))?;
        ensure(s.u.is_unimodular() && s.v.is_unimodular(), || {
            fail("U or V not unimodular")
        })?;
        ensure(&s.u * &s.u_inv == IntMatrix::identity(a.rows()), || {
            fail("U·U⁻¹ ≠ I")
        })?;
        ensure(&s.v * &s.v_inv == IntMatrix::identity(a.cols()), || {
            fail("V·V⁻¹ ≠ I")
        })?;
        let diag: Vec<BigInt> = (0..a.rows().min(a.cols()))
            .map(|i| s.d[(i, i)].clone())
            .collect();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                ensure(i == j || s.d[(i, j)].is_zero(), || fail("D not diagonal"))?;
            }
        }
        ensure(diag.iter().all(|x| !x.is_negative()), || {
            fail("negative diagonal entry")
        })?;
        for w in diag.windows(2) {
            let divides = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            };
            ensure(divides, || fail("divisibility chain broken"))?;
        }
        let nonzero: Vec<BigInt> = diag.into_iter().filter(|x| !x.is_zero()).collect();
        ensure(nonzero == s.invariant_factors, || {
            fail("invariant factors disagree with D")
        })?;
    }
    Ok("1000 matrices".to_owned())
}

fn random_small_group(rng: &mut ChaCha8Rng) -> FgGroup {
    let n = rng.gen_range(1..=200);
    abelian_groups_of_order(n)
        .choose(rng)
        .expect("at least one group")
        .clone()
}

fn random_hom(rng: &mut ChaCha8Rng, source: &FgGroup, target: &FgGroup) -> GroupHom {
    let s: Vec<u64> = source
        .torsion()
        .iter()
        .map(|x| x.to_u64().unwrap())
        .collect();
    let t: Vec<u64> = target
        .torsion()
        .iter()
        .map(|x| x.to_u64().unwrap())
        .collect();
    let mut m = IntMatrix::zeros(t.len(), s.len());
    for (i, &ti) in t.iter().enumerate() {
        for (j, &sj) in s.iter().enumerate() {
            // s_j·x ≡ 0 mod t_i forces x to be a multiple of t_i / gcd(t_i, s_j).
            let step = ti / num_integer::gcd(ti, sj);
            m[(i, j)] = BigInt::from(step * rng.gen_range(0..ti / step));
        }
    }
    GroupHom::new(source.clone(), target.clone(), m).expect("well-defined by construction")
}

fn hom_brute_force() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..500 {
        let source = random_small_group(&mut rng);
        let target = random_small_group(&mut rng);
        let h = random_hom(&mut rng, &source, &target);
        let inv = hom_invariants(&h).map_err(|e| e.to_string())?;
        let fs = FiniteGroup::new(&source).expect("small");
        let ft = FiniteGroup::new(&target).expect("small");
        let image_of = |x: usize| -> usize {
            let c: Vec<BigInt> = fs.coords(x).iter().map(|&v| BigInt::from(v)).collect();
            ft.index_of_big(&h.apply(&c))
        };
        let images: Vec<usize> = (0..fs.order()).map(image_of).collect();
        let kernel: Vec<usize> = (0..fs.order()).filter(|&x| images[x] == 0).collect();
        let mut image = images.clone();
        image.sort_unstable();
        image.dedup();
        let brute = (
            fs.classify_subgroup(&kernel),
            ft.classify_subgroup(&image),
            ft.classify_quotient(&image),
        );
        ensure(
            brute == (inv.kernel.clone(), inv.image.clone(), inv.cokernel.clone()),
            || {
                format!(
                "trial {trial}: {source} → {target} by {}: solver ({}, {}, {}) vs elements ({}, {}, {})",
                h.matrix(), inv.kernel, inv.image, inv.cokernel, brute.0, brute.1, brute.2
            )
            },
        )?;
    }
    Ok("500 homs".to_owned())
}

fn parts(results: &[DegreeResult]) -> Vec<(i64, Option<FgGroup>, Option<FgGroup>)> {
    results
        .iter()
        .map(|r| (r.degree, r.sub.clone(), r.quot.clone()))
        .collect()
}

fn sign_and_localization() -> Result<String, String> {
    let Loaded {
        problem,
        provenance,
    } = builtin_problem(HOPF_BUILTIN).map_err(|e| e.to_string())?;
    let plus = solve_report(&Loaded {
        problem: problem.clone(),
        provenance: provenance.clone(),
    })?;
    let minus = solve_report(&Loaded {
        problem: problem.negated(),
        provenance,
    })?;
    ensure(plus == minus, || "reports for d and −d differ".to_owned())?;

    let base = solve_homotopy_range(&problem).map_err(|e| e.to_string())?;
    for ring in [
        LocalizationRing::inverting([2]).unwrap(),
        LocalizationRing::inverting([3]).unwrap(),
        LocalizationRing::rationals(),
    ] {
        let then_localize: Vec<_> = parts(&base)
            .into_iter()
            .map(|(n, s, q)| {
                (
                    n,
                    s.map(|g| localize(&g, &ring)),
                    q.map(|g| localize(&g, &ring)),
                )
            })
            .collect();
        let first = parts(
            &solve_homotopy_range(&localize_problem(&problem, &ring)).map_err(|e| e.to_string())?,
        );
        let flagged = parts(
            &solve_homotopy_range(&problem.clone().with_localization(ring.clone()))
                .map_err(|e| e.to_string())?,
        );
        ensure(first == then_localize, || {
            format!("{ring}: localize-then-solve differs")
        })?;
        ensure(flagged == then_localize, || {
            format!("{ring}: solving with localization differs")
        })?;
    }
    Ok("d vs −d; ℤ[1/2], ℤ[1/3], ℚ".to_owned())
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 8] = [
        ("1 Hopf/M₂ homotopy table", hopf_table),
        ("2 rational column", rational_column),
        ("3 Rosenberg trichotomy", rosenberg),
        ("4 even sphere, K₁(B) = 0", even_sphere_property),
        ("5 extension oracle equivalence", extension_oracle),
        ("6 Smith normal form properties", snf_properties),
        ("7 hom invariants by brute force", hom_brute_force),
        ("8 sign and localization invariance", sign_and_localization),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_owned()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        checks.len() - failed,
        checks.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
