//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p pancake-core --test acceptance` (add
//! `-- --nocapture` to see the per-criterion lines).

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use pancake_core::embed::{
    canonical_embedding, check_embedding, randomized_embedding, EmbeddingKind,
};
use pancake_core::perm::Sequence;
use pancake_core::reduction::{
    build_instance, certify, check_theorem, sat_brute_force, Cnf, Lit, Selection,
};
use pancake_core::search::{
    decide_efficiently_sortable, diameter, distance_table, exact_distance, permutation_rank,
    permutation_unrank, verify_funnel,
};

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn all_perms(n: usize) -> impl Iterator<Item = Sequence> {
    (0..factorial(n)).map(move |r| permutation_unrank(n, r))
}

fn random_sequence(rng: &mut StdRng, n: usize) -> Sequence {
    let mut v: Vec<u32> = (1..=n as u32).collect();
    v.shuffle(rng);
    Sequence::new(v).unwrap()
}

fn report(criterion: usize, ok: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_figure_one_reproduction() {
    let sortable = Sequence::parse("5 2 3 1 4").unwrap();
    let unsortable = Sequence::parse("5 2 3 4 1").unwrap();
    let dead1 = Sequence::parse("1 3 2 5 4").unwrap();
    let dead2 = Sequence::parse("1 4 3 2 5").unwrap();

    // warm up so the timed run measures the algorithm, not first-touch costs
    let _ = decide_efficiently_sortable(&sortable);

    let started = Instant::now();
    let path = decide_efficiently_sortable(&sortable);
    let none = decide_efficiently_sortable(&unsortable);
    let d1 = dead1.is_deadlock();
    let d2 = dead2.is_deadlock();
    let elapsed = started.elapsed();

    let path_ok = path
        .as_ref()
        .is_some_and(|p| p.len() == 4 && p.is_efficient() && p.sorts_source());
    let ok = path_ok && none.is_none() && d1 && d2 && elapsed < Duration::from_millis(1);
    report(
        1,
        ok,
        &format!(
            "4-flip path {:?}, counterexample absent, both deadlocks confirmed, {elapsed:?}",
            path.map(|p| p.flips().to_vec()).unwrap_or_default()
        ),
    );
}

#[test]
fn criterion_2_breakpoint_delta_property() {
    let mut rng = StdRng::seed_from_u64(0x9a3c);
    let mut violations = 0u64;
    const TRIALS: u64 = 100_000;
    for _ in 0..TRIALS {
        let n = rng.random_range(1..=64);
        let s = random_sequence(&mut rng, n);
        let r = rng.random_range(1..=n);
        let delta = s.flip(r).unwrap().breakpoint_count() as i64 - s.breakpoint_count() as i64;
        if !(-1..=1).contains(&delta) || delta as i32 != s.flip_breakpoint_delta(r) {
            violations += 1;
        }
    }
    report(
        2,
        violations == 0,
        &format!("{TRIALS} random (S, r) pairs with n <= 64, {violations} violations"),
    );
}

#[test]
fn criterion_3_efficient_flip_bound_exhaustive() {
    let started = Instant::now();
    let mut states = 0u64;
    let mut violations = 0u64;
    for n in 1..=7 {
        for s in all_perms(n) {
            states += 1;
            let eff = s.efficient_flips();
            let brute: Vec<usize> = (2..=n)
                .filter(|&r| s.flip(r).unwrap().breakpoint_count() + 1 == s.breakpoint_count())
                .collect();
            if eff.len() > 2 || eff != brute {
                violations += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    let ok = violations == 0 && elapsed < Duration::from_secs(10);
    report(
        3,
        ok,
        &format!("{states} states (all n <= 7), {violations} violations, {elapsed:?}"),
    );
}

#[test]
fn criterion_4_gadget_funnel_suite() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xf1a9);
    let mut failures: Vec<String> = Vec::new();
    let mut checks = 0u32;
    for kind in EmbeddingKind::ALL {
        let canonical = canonical_embedding(kind);
        match check_embedding(&canonical, 10_000_000) {
            Ok(check) if check.ok => {}
            Ok(check) => failures.push(format!("{} canonical: {:?}", kind.name(), check.failure)),
            Err(e) => failures.push(format!("{} canonical: {e}", kind.name())),
        }
        checks += 1;
        for round in 0..20 {
            let embedding = randomized_embedding(kind, &mut rng);
            match check_embedding(&embedding, 10_000_000) {
                Ok(check) if check.ok => {}
                Ok(check) => failures.push(format!(
                    "{} randomized round {round}: {:?}",
                    kind.name(),
                    check.failure
                )),
                Err(e) => failures.push(format!("{} randomized round {round}: {e}", kind.name())),
            }
            checks += 1;
        }
    }
    let elapsed = started.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(60);
    report(
        4,
        ok,
        &format!(
            "{checks} embeddings across {} property kinds, {elapsed:?}{}",
            EmbeddingKind::ALL.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {failures:?}")
            }
        ),
    );
}

fn random_cnf(rng: &mut StdRng, l: usize, k: usize) -> Cnf {
    let clauses: Vec<[Lit; 3]> = (0..k)
        .map(|_| [0; 3].map(|_| Lit::new(rng.random_range(1..=l), rng.random_range(0..2) == 0)))
        .collect();
    Cnf::new(l, clauses).unwrap()
}

#[test]
fn criterion_5_instance_size_identities() {
    let mut rng = StdRng::seed_from_u64(0x51ce);
    let mut checked = 0u32;
    let mut failures = 0u32;
    for l in 1..=4 {
        for k in 1..=3 {
            for _ in 0..3 {
                let f = random_cnf(&mut rng, l, k);
                let inst = build_instance(&f);
                checked += 1;
                if inst.s_phi().n() != 31 * l + 98 * k
                    || inst.s_phi().breakpoint_count() != 16 * l + 50 * k
                {
                    failures += 1;
                }
            }
        }
    }
    report(
        5,
        failures == 0,
        &format!("{checked} random instances over (l, k) in 1..=4 x 1..=3, sizes exact"),
    );
}

/// Every 3-literal clause over `l` variables, as ordered signed triples.
fn exhaustive_single_clause_family(l: usize) -> Vec<Cnf> {
    let lits: Vec<Lit> = (1..=l)
        .flat_map(|v| [Lit::new(v, true), Lit::new(v, false)])
        .collect();
    let mut out = Vec::new();
    for &a in &lits {
        for &b in &lits {
            for &c in &lits {
                out.push(Cnf::new(l, vec![[a, b, c]]).unwrap());
            }
        }
    }
    out
}

/// The seeded random family plus the crafted unsatisfiable pairs
/// `(x v x v x) & (!x v !x v !x)`.
fn random_family(seed: u64) -> Vec<Cnf> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..88 {
        let l = rng.random_range(1..=4);
        let k = rng.random_range(1..=2);
        out.push(random_cnf(&mut rng, l, k));
    }
    for v in 1..=4usize {
        for positive in [true, false] {
            for swap in [false, true] {
                let yes = [Lit::new(v, positive); 3];
                let no = [Lit::new(v, !positive); 3];
                let clauses = if swap { vec![no, yes] } else { vec![yes, no] };
                out.push(Cnf::new(4, clauses).unwrap());
            }
        }
    }
    out
}

fn criterion_6_families() -> Vec<Cnf> {
    let mut formulas = exhaustive_single_clause_family(2);
    formulas.extend(exhaustive_single_clause_family(3));
    formulas.extend(random_family(0x7e0));
    formulas
}

#[test]
fn criterion_6_theorem_equivalence() {
    let started = Instant::now();
    let formulas = criterion_6_families();
    let mut unsat_count = 0u32;
    let mut discrepancies: Vec<String> = Vec::new();
    for (i, f) in formulas.iter().enumerate() {
        match check_theorem(f) {
            Ok(report) => {
                if !report.satisfiable {
                    unsat_count += 1;
                }
            }
            Err(e) => discrepancies.push(format!("formula {i}: {e}")),
        }
    }
    let elapsed = started.elapsed();
    let ok = discrepancies.is_empty()
        && formulas.len() >= 216 + 100
        && unsat_count >= 10
        && elapsed < Duration::from_secs(600);
    report(
        6,
        ok,
        &format!(
            "{} formulas (64 + 216 exhaustive single-clause, {} seeded random; {} unsatisfiable), \
             sortable == satisfiable throughout, {elapsed:?}{}",
            formulas.len(),
            formulas.len() - 280,
            unsat_count,
            if discrepancies.is_empty() {
                String::new()
            } else {
                format!("; discrepancies: {discrepancies:?}")
            }
        ),
    );
}

#[test]
fn criterion_7_certificate_validity() {
    let formulas = criterion_6_families();
    let mut certified = 0u32;
    let mut failures: Vec<String> = Vec::new();
    for (i, f) in formulas.iter().enumerate() {
        let Some(asg) = sat_brute_force(f).unwrap() else {
            continue;
        };
        let sel = Selection::first_compatible(f, &asg).unwrap();
        let inst = build_instance(f);
        let expected = 16 * f.var_count() + 50 * f.clause_count();
        match certify(&inst, &asg, &sel) {
            Ok(path) => {
                if path.len() != expected || !path.is_efficient() || !path.sorts_source() {
                    failures.push(format!("formula {i}: bad certificate"));
                } else {
                    certified += 1;
                }
            }
            Err(e) => failures.push(format!("formula {i}: {e}")),
        }
    }
    report(
        7,
        failures.is_empty(),
        &format!(
            "{certified} satisfiable formulas certified at exactly 16l + 50k flips{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {failures:?}")
            }
        ),
    );
}

#[test]
fn criterion_8_distance_oracle_equivalence() {
    let started = Instant::now();
    let mut failures = 0u64;
    let mut states = 0u64;
    for n in 1..=6 {
        let table = distance_table(n).unwrap();
        let mut max_seen = 0usize;
        for s in all_perms(n) {
            states += 1;
            let ida = exact_distance(&s).unwrap();
            let bfs = table[permutation_rank(&s) as usize] as usize;
            if ida.distance != bfs
                || ida.witness.len() != ida.distance
                || !ida.witness.sorts_source()
            {
                failures += 1;
            }
            max_seen = max_seen.max(ida.distance);
        }
        if diameter(n).unwrap() != max_seen {
            failures += 1;
        }
    }
    let elapsed = started.elapsed();
    let ok = failures == 0 && elapsed < Duration::from_secs(30);
    report(
        8,
        ok,
        &format!("{states} states (all n <= 6), IDA* == BFS layer, f(n) == max, {elapsed:?}"),
    );
}

#[test]
fn criterion_9_funnel_relation_semantics() {
    let mut checked = 0u64;
    let mut failures = 0u64;
    for n in 1..=6 {
        let identity = Sequence::identity(n);
        for s in all_perms(n) {
            if s.is_identity() {
                continue;
            }
            checked += 1;
            let sortable = decide_efficiently_sortable(&s).is_some();
            let to_identity = verify_funnel(&s, std::slice::from_ref(&identity)).unwrap();
            let to_nothing = verify_funnel(&s, &[]).unwrap();
            if to_identity.holds != sortable || to_nothing.holds == sortable {
                failures += 1;
            }
        }
    }
    report(
        9,
        failures == 0,
        &format!("{checked} non-identity states (all n <= 6), both equivalences hold"),
    );
}

/// The exhaustive single-clause family sizes quoted in the suite are real.
#[test]
fn family_sizes() {
    assert_eq!(exhaustive_single_clause_family(2).len(), 64);
    assert_eq!(exhaustive_single_clause_family(3).len(), 216);
    let random = random_family(0x7e0);
    assert!(random.len() >= 100);
    let unsat = random
        .iter()
        .filter(|f| sat_brute_force(f).unwrap().is_none())
        .count();
    assert!(unsat >= 10, "only {unsat} unsatisfiable formulas");
}
