//! End-to-end acceptance checks. Runs every criterion, prints one line per
//! criterion and fails the process if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coregroup::covering::{
    branched_presentation, branched_presentation_with_last_orbit, direct_branched_presentation,
    expand_kernel_word, kernel_presentation, rewrite_kernel_word,
};
use coregroup::frontend::job::random_kernel_word;
use coregroup::frontend::{run_source, Command, ExitStatus, JobSpec};
use coregroup::invariants::{smith_normal_form, FiniteGroup};
use coregroup::{
    abelian_invariants, corpus, hom_count, AbelianInvariants, IntegerMatrix, Presentation, Word,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn targets_up_to(order: usize) -> Vec<FiniteGroup> {
    FiniteGroup::all_builtin()
        .into_iter()
        .filter(|g| g.order() <= order)
        .collect()
}

fn rewrite_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let started = Instant::now();
    for trial in 0..1000 {
        let alphabet = rng.random_range(1..=5);
        let k = [2, 3, 5][trial % 3];
        let special = rng.random_range(0..alphabet);
        let w = random_kernel_word(&mut rng, alphabet, 40, k);
        ensure(w.is_reduced(), || {
            format!("generator produced unreduced {w}")
        })?;
        let kw = rewrite_kernel_word(&w, k, special).map_err(|e| format!("{w}: {e}"))?;
        let back = expand_kernel_word(&kw, k, special);
        ensure(back == w, || {
            format!("{w} (k={k}, special {special}) expands to {back}")
        })?;
    }
    within(started.elapsed(), Duration::from_secs(1))?;
    Ok(format!("1000/1000 in {:?}", started.elapsed()))
}

fn free_ranks() -> Outcome {
    for n in 1..=4 {
        for k in 2..=5 {
            let kernel =
                kernel_presentation(&Presentation::free(n), k).map_err(|e| e.to_string())?;
            ensure(
                kernel.generator_count() == n * k + 1 && kernel.relator_count() == 0,
                || {
                    format!(
                        "kernel of F{n}, k={k}: {} gens, {} rels",
                        kernel.generator_count(),
                        kernel.relator_count()
                    )
                },
            )?;
        }
    }
    // Nielsen–Schreier: an index-k subgroup of F_n has rank k(n-1)+1
    for n in 1..=4 {
        for k in 2..=5 {
            let free = Presentation::free(n);
            // generators of the Schreier subgroup; the power relators do not affect them
            let direct = direct_branched_presentation(&free, k, 0).map_err(|e| e.to_string())?;
            ensure(direct.generator_count() == k * (n - 1) + 1, || {
                format!(
                    "Schreier rank of F{n}, index {k}: {}",
                    direct.generator_count()
                )
            })?;
        }
    }
    Ok("nk+1 and k(n-1)+1 for n in 1..=4, k in 2..=5".into())
}

fn relator_multiset(p: &Presentation) -> BTreeMap<Word, usize> {
    let mut m = BTreeMap::new();
    for r in p.relators() {
        let n = r.cyclic_normalize();
        if !n.is_empty() {
            *m.entry(n).or_default() += 1;
        }
    }
    m
}

fn syntactic_coincidence() -> Outcome {
    let started = Instant::now();
    let diagrams = corpus::diagrams();
    for d in &diagrams {
        let core = d.core_presentation();
        let branched =
            branched_presentation(&d.base_presentation(), 2).map_err(|e| e.to_string())?;
        // at k = 2, Y(i,0) is generator i of the branched presentation
        ensure(branched.generator_count() == core.generator_count(), || {
            format!("{}: generator counts differ", d.name())
        })?;
        ensure(
            relator_multiset(&core) == relator_multiset(&branched),
            || format!("{}: core {} vs branched {}", d.name(), core, branched),
        )?;
    }
    within(started.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{} diagrams", diagrams.len()))
}

fn trefoil_numbers() -> Outcome {
    let started = Instant::now();
    let d = corpus::diagram(corpus::SPUN_TREFOIL);
    let core = d.core_presentation();
    let direct = direct_branched_presentation(&d.wirtinger_presentation().unwrap(), 2, 0)
        .map_err(|e| e.to_string())?;
    let s3 = FiniteGroup::builtin("S3").unwrap();
    let core_ab = abelian_invariants(&core);
    let direct_ab = abelian_invariants(&direct);
    ensure(core_ab == AbelianInvariants::new(1, [3]), || {
        format!("core abelianization {core_ab}")
    })?;
    ensure(direct_ab == AbelianInvariants::new(0, [3]), || {
        format!("direct cover abelianization {direct_ab}")
    })?;
    let a = hom_count(&core, &s3).map_err(|e| e.to_string())?;
    let b =
        hom_count(&direct.free_product(&Presentation::free(1)), &s3).map_err(|e| e.to_string())?;
    ensure(a == 18u32.into() && b == 18u32.into(), || {
        format!("homs to S3: core {a}, direct*Z {b}")
    })?;
    within(started.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{core_ab}; {direct_ab}; 18 homs to S3"))
}

fn branched_vs_direct() -> Outcome {
    let started = Instant::now();
    let targets = targets_up_to(24);
    let mut compared = 0;
    for (name, base) in corpus::oriented_bases() {
        for k in [2, 3] {
            let branched = branched_presentation(&base, k).map_err(|e| e.to_string())?;
            let direct = direct_branched_presentation(&base, k, 0).map_err(|e| e.to_string())?;
            let direct_free = direct.free_product(&Presentation::free(k - 1));
            let (a, b) = (
                abelian_invariants(&branched),
                abelian_invariants(&direct_free),
            );
            ensure(a == b, || format!("{name}, k={k}: abelian {a} vs {b}"))?;
            for t in &targets {
                let x = hom_count(&branched, t)
                    .map_err(|e| format!("{name}, k={k}, {}: {e}", t.name()))?;
                let y = hom_count(&direct_free, t)
                    .map_err(|e| format!("{name}, k={k}, {}: {e}", t.name()))?;
                ensure(x == y, || {
                    format!("{name}, k={k}, homs to {}: {x} vs {y}", t.name())
                })?;
                compared += 1;
            }
        }
    }
    within(started.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{compared} hom counts agree in {:?}",
        started.elapsed()
    ))
}

fn redundancy() -> Outcome {
    let targets = targets_up_to(8);
    let mut cases = 0;
    for (name, base) in corpus::oriented_bases() {
        for k in [2, 3, 4] {
            let reduced = branched_presentation(&base, k).map_err(|e| e.to_string())?;
            let full =
                branched_presentation_with_last_orbit(&base, k).map_err(|e| e.to_string())?;
            ensure(
                full.relator_count() == reduced.relator_count() + base.relator_count(),
                || format!("{name}, k={k}: last orbit not appended"),
            )?;
            let (a, b) = (abelian_invariants(&reduced), abelian_invariants(&full));
            ensure(a == b, || format!("{name}, k={k}: abelian {a} vs {b}"))?;
            for t in &targets {
                let x = hom_count(&reduced, t).map_err(|e| e.to_string())?;
                let y = hom_count(&full, t).map_err(|e| e.to_string())?;
                ensure(x == y, || {
                    format!("{name}, k={k}, homs to {}: {x} vs {y}", t.name())
                })?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} base/degree pairs"))
}

/// Determinant by cofactor expansion; fine for the 4×4 sizes used here.
fn det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum(),
    }
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == size)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Invariant factors from determinant divisors: `d_j` is the gcd of all j×j
/// minors and the j-th factor is `d_j / d_{j-1}`.
fn determinant_divisor_factors(a: &[Vec<i64>]) -> Vec<BigInt> {
    let (rows, cols) = (a.len(), a[0].len());
    let mut divisors = vec![BigInt::one()];
    for j in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, j) {
            for cs in subsets(cols, j) {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| BigInt::from(a[r][c])).collect())
                    .collect();
                g = g.gcd(&det(&minor));
            }
        }
        divisors.push(g);
    }
    (1..divisors.len())
        .map(|j| {
            if divisors[j].is_zero() {
                BigInt::zero()
            } else {
                &divisors[j] / &divisors[j - 1]
            }
        })
        .collect()
}

fn as_rows(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn smith_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..500 {
        let a: Vec<Vec<i64>> = (0..4)
            .map(|_| (0..4).map(|_| rng.random_range(-3..=3)).collect())
            .collect();
        let m = IntegerMatrix::from_rows(4, &a);
        let snf = smith_normal_form(&m);
        let oracle = determinant_divisor_factors(&a);
        ensure(snf.factors == oracle, || {
            format!(
                "trial {trial}: {:?} vs oracle {:?} for {a:?}",
                snf.factors, oracle
            )
        })?;
        ensure(&(&snf.left * &m) * &snf.right == snf.diagonal, || {
            format!("trial {trial}: transforms do not reconstruct")
        })?;
        ensure(
            snf.diagonal == IntegerMatrix::diagonal(&snf.factors),
            || format!("trial {trial}: diagonal mismatch"),
        )?;
        for t in [&snf.left, &snf.right] {
            ensure(det(&as_rows(t)).abs().is_one(), || {
                format!("trial {trial}: transform not unimodular")
            })?;
        }
    }
    Ok("500 matrices".into())
}

fn unoriented_pipeline() -> Outcome {
    let mut verify = JobSpec::new(Command::Verify13);
    verify.targets = targets_up_to(24)
        .iter()
        .map(|g| g.name().to_string())
        .collect();
    let out = run_source(verify, Some(corpus::UNORIENTED_TWISTED));
    ensure(out.status == ExitStatus::Success, || {
        format!("verify13 exited {:?}:\n{}", out.status, out.stdout)
    })?;
    ensure(out.stdout.contains("unoriented-double-cover"), || {
        "report is not for the unoriented branch".into()
    })?;
    for command in [
        Command::Kernel,
        Command::Cover,
        Command::DirectCover,
        Command::Verify15,
    ] {
        for k in [3, 4, 5] {
            let mut job = JobSpec::new(command);
            job.k = Some(k);
            job.targets = vec!["S3".into()];
            let out = run_source(job, Some(corpus::UNORIENTED_TWISTED));
            ensure(out.status == ExitStatus::Precondition, || {
                format!("{} --k {k} exited {:?}", command.name(), out.status)
            })?;
        }
    }
    Ok(format!(
        "verify passes; k != 2 exits with code {}",
        ExitStatus::Precondition.code()
    ))
}

fn invariants_of(
    p: &Presentation,
    targets: &[FiniteGroup],
) -> Result<(AbelianInvariants, Vec<String>), String> {
    let counts = targets
        .iter()
        .map(|t| {
            hom_count(p, t)
                .map(|n| n.to_string())
                .map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    Ok((abelian_invariants(p), counts))
}

fn invariance() -> Outcome {
    let targets: Vec<FiniteGroup> = ["Z2", "Z3", "S3", "Q8", "A4"]
        .iter()
        .map(|n| FiniteGroup::builtin(n).unwrap())
        .collect();
    let mut inputs: Vec<(String, Presentation)> = corpus::oriented_bases();
    for d in corpus::diagrams() {
        inputs.push((format!("{} core", d.name()), d.core_presentation()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, p) in &inputs {
        let reference = invariants_of(p, &targets)?;

        let mut rels = p.relators().to_vec();
        rels.reverse();
        let n = rels.len();
        if n > 1 {
            rels.swap(0, rng.random_range(0..n));
        }
        let normalized: Vec<Word> = p.relators().iter().map(Word::cyclic_normalize).collect();
        let renamed: Vec<String> = (0..p.generator_count()).map(|i| format!("g{i}")).collect();
        let mut perm: Vec<usize> = (0..p.generator_count()).collect();
        perm.reverse();

        let variants = [
            ("relator permutation", p.with_relators(rels).unwrap()),
            ("cyclic normalization", p.with_relators(normalized).unwrap()),
            (
                "generator renaming",
                p.with_generator_names(renamed).unwrap(),
            ),
            ("generator permutation", p.permute_generators(&perm)),
            ("simplify", p.simplify()),
        ];
        for (label, v) in &variants {
            let got = invariants_of(v, &targets)?;
            ensure(got == reference, || {
                format!("{name}: {label} changed {:?} to {:?}", reference, got)
            })?;
        }
    }
    Ok(format!("{} presentations, 5 transformations", inputs.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("rewrite round trip", rewrite_round_trip),
        ("free kernel and Schreier ranks", free_ranks),
        ("core vs double cover relators", syntactic_coincidence),
        ("spun trefoil numbers", trefoil_numbers),
        ("branched vs direct cover invariants", branched_vs_direct),
        ("last relator orbit is redundant", redundancy),
        ("Smith normal form vs determinant divisors", smith_forms),
        ("unoriented pipeline", unoriented_pipeline),
        ("invariance suite", invariance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("[{}] {name}: pass ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[{}] {name}: FAIL ({why})", i + 1)
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
