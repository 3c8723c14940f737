//! Concrete embeddings of the gadget properties.
//!
//! Every gadget comes with a funnel claim of the form
//! `<trigger, X, gadget, Y> ==> targets` quantified over arbitrary context
//! sequences `X`, `Y`, `Z`. An [`Embedding`] instantiates one such claim as
//! a concrete permutation plus its target set so the claim can be checked by
//! exhaustive efficient-path enumeration.
//!
//! The *canonical* embedding of each kind picks the leftover trigger/test
//! elements and the dock blocks as context, ordered so that the post-target
//! state can itself reach the identity; that keeps the "every path passes
//! through a target" condition non-vacuous. *Randomized* embeddings draw
//! offsets, index sets, and context contents from a seeded generator; the
//! claims hold for arbitrary context, so these must verify as well.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::gadgets::{ClauseGadget, ClauseSlot, Dock, Fork, Hook, Literals, Lock, Variable};
use crate::perm::{ident_block, rev_ident_block, Sequence};
use crate::search::{verify_funnel_with, SearchError};

/// One gadget property, identified the way the `verify-gadgets` command
/// names it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmbeddingKind {
    Dock,
    LockA,
    LockB,
    LockC,
    HookA,
    HookB,
    HookC,
    ForkA,
    ForkB,
    ForkC,
    LiteralsA,
    LiteralsB,
    LiteralsC,
    VariableA,
    VariableB,
    VariableC,
    Clause,
    Clause2A,
    Clause2B,
    Clause2C,
}

impl EmbeddingKind {
    pub const ALL: [EmbeddingKind; 20] = [
        EmbeddingKind::Dock,
        EmbeddingKind::LockA,
        EmbeddingKind::LockB,
        EmbeddingKind::LockC,
        EmbeddingKind::HookA,
        EmbeddingKind::HookB,
        EmbeddingKind::HookC,
        EmbeddingKind::ForkA,
        EmbeddingKind::ForkB,
        EmbeddingKind::ForkC,
        EmbeddingKind::LiteralsA,
        EmbeddingKind::LiteralsB,
        EmbeddingKind::LiteralsC,
        EmbeddingKind::VariableA,
        EmbeddingKind::VariableB,
        EmbeddingKind::VariableC,
        EmbeddingKind::Clause,
        EmbeddingKind::Clause2A,
        EmbeddingKind::Clause2B,
        EmbeddingKind::Clause2C,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EmbeddingKind::Dock => "dock",
            EmbeddingKind::LockA => "lock_a",
            EmbeddingKind::LockB => "lock_b",
            EmbeddingKind::LockC => "lock_c",
            EmbeddingKind::HookA => "hook_a",
            EmbeddingKind::HookB => "hook_b",
            EmbeddingKind::HookC => "hook_c",
            EmbeddingKind::ForkA => "fork_a",
            EmbeddingKind::ForkB => "fork_b",
            EmbeddingKind::ForkC => "fork_c",
            EmbeddingKind::LiteralsA => "literals_a",
            EmbeddingKind::LiteralsB => "literals_b",
            EmbeddingKind::LiteralsC => "literals_c",
            EmbeddingKind::VariableA => "variable_a",
            EmbeddingKind::VariableB => "variable_b",
            EmbeddingKind::VariableC => "variable_c",
            EmbeddingKind::Clause => "clause",
            EmbeddingKind::Clause2A => "clause2_a",
            EmbeddingKind::Clause2B => "clause2_b",
            EmbeddingKind::Clause2C => "clause2_c",
        }
    }
}

/// Unknown property-kind name.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown gadget property kind `{0}`")]
pub struct UnknownKind(pub String);

impl FromStr for EmbeddingKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EmbeddingKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| UnknownKind(s.to_string()))
    }
}

/// A concrete start sequence and the target set its property funnels into;
/// deadlock properties carry an empty target set and set `expect_deadlock`.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub kind: EmbeddingKind,
    pub start: Sequence,
    pub targets: Vec<Sequence>,
    pub expect_deadlock: bool,
}

/// Builds the fixed canonical embedding of a property kind.
pub fn canonical_embedding(kind: EmbeddingKind) -> Embedding {
    build(kind, &mut Plan::Canonical)
}

/// Builds a randomized-context embedding of a property kind.
pub fn randomized_embedding(kind: EmbeddingKind, rng: &mut StdRng) -> Embedding {
    build(kind, &mut Plan::Random(rng))
}

/// Result of machine-checking one embedding.
#[derive(Debug, Clone)]
pub struct EmbeddingCheck {
    pub ok: bool,
    pub states_explored: u64,
    pub failure: Option<String>,
}

/// Checks an embedding: deadlock kinds must be deadlocks (and trivially
/// funnel into the empty set); all others must satisfy both funnel
/// conditions exactly.
pub fn check_embedding(e: &Embedding, budget: u64) -> Result<EmbeddingCheck, SearchError> {
    if e.expect_deadlock {
        if !e.start.is_deadlock() {
            return Ok(EmbeddingCheck {
                ok: false,
                states_explored: 0,
                failure: Some("expected a deadlock but efficient flips exist".into()),
            });
        }
        let report = verify_funnel_with(&e.start, &[], budget)?;
        return Ok(EmbeddingCheck {
            ok: report.holds,
            states_explored: report.states_explored,
            failure: (!report.holds).then(|| "deadlock leaks to the identity".into()),
        });
    }
    let report = verify_funnel_with(&e.start, &e.targets, budget)?;
    let failure = if report.holds {
        None
    } else if !report.unreachable_targets.is_empty() {
        Some(format!(
            "{} target(s) unreachable",
            report.unreachable_targets.len()
        ))
    } else {
        Some("an efficient path reaches the identity avoiding all targets".into())
    };
    Ok(EmbeddingCheck {
        ok: report.holds,
        states_explored: report.states_explored,
        failure,
    })
}

/// Context source: the fixed canonical choice or a seeded generator.
enum Plan<'a> {
    Canonical,
    Random(&'a mut StdRng),
}

impl Plan<'_> {
    /// `base` plus up to `spread` more in random plans.
    fn offset(&mut self, base: u32, spread: u32) -> u32 {
        match self {
            Plan::Canonical => base,
            Plan::Random(rng) => base + rng.random_range(0..=spread),
        }
    }

    /// Padding values appended above the gadget span: exactly `canonical`
    /// of them in canonical plans, up to `spread` in random plans.
    fn extra(&mut self, canonical: usize, spread: usize) -> usize {
        match self {
            Plan::Canonical => canonical,
            Plan::Random(rng) => rng.random_range(0..=spread),
        }
    }

    /// Distributes `free` over filler slots. Canonical plans must consume
    /// exactly the free values; random plans shuffle and cut arbitrarily.
    fn fill(&mut self, free: Vec<u32>, canonical: &[&[u32]]) -> Vec<Vec<u32>> {
        match self {
            Plan::Canonical => {
                let mut claimed: Vec<u32> =
                    canonical.iter().flat_map(|s| s.iter().copied()).collect();
                claimed.sort_unstable();
                assert_eq!(
                    claimed, free,
                    "canonical fillers must cover the free values exactly"
                );
                canonical.iter().map(|s| s.to_vec()).collect()
            }
            Plan::Random(rng) => {
                let mut vals = free;
                vals.shuffle(rng);
                let slots = canonical.len();
                let mut cuts: Vec<usize> = (0..slots - 1)
                    .map(|_| rng.random_range(0..=vals.len()))
                    .collect();
                cuts.sort_unstable();
                cuts.push(vals.len());
                let mut out = Vec::with_capacity(slots);
                let mut at = 0;
                for cut in cuts {
                    out.push(vals[at..cut].to_vec());
                    at = cut;
                }
                out
            }
        }
    }
}

/// Sorted complement of the fixed parts within `1..=n`.
fn free_values(n: usize, fixed: &[&[u32]]) -> Vec<u32> {
    let mut used = vec![false; n + 1];
    for part in fixed {
        for &v in *part {
            assert!(
                v >= 1 && (v as usize) <= n && !used[v as usize],
                "embedding parts must be distinct values in 1..={n} (got {v})"
            );
            used[v as usize] = true;
        }
    }
    (1..=n as u32).filter(|&v| !used[v as usize]).collect()
}

fn assemble(parts: &[&[u32]]) -> Sequence {
    let elems: Vec<u32> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    Sequence::new(elems).expect("embedding parts must assemble into a permutation")
}

fn reversed(v: &[u32]) -> Vec<u32> {
    v.iter().rev().copied().collect()
}

fn set(indices: &[usize]) -> BTreeSet<usize> {
    indices.iter().copied().collect()
}

/// Lock states for the indices not pinned by a property: `force_open` are
/// opened, `keep_closed` stay closed, the rest draw closed/open/tested
/// uniformly in random plans and stay closed in canonical ones.
fn lock_states(
    plan: &mut Plan<'_>,
    m: usize,
    force_open: &[usize],
    keep_closed: &[usize],
) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut open = set(force_open);
    let mut tested = BTreeSet::new();
    if let Plan::Random(rng) = plan {
        for i in 1..=m {
            if open.contains(&i) || keep_closed.contains(&i) {
                continue;
            }
            match rng.random_range(0..3) {
                1 => {
                    open.insert(i);
                }
                2 => {
                    tested.insert(i);
                }
                _ => {}
            }
        }
    }
    (open, tested)
}

fn build(kind: EmbeddingKind, plan: &mut Plan<'_>) -> Embedding {
    match kind {
        EmbeddingKind::Dock => {
            let p = plan.offset(2, 3);
            let q = p + plan.offset(3, 2);
            let dock = Dock::new(p, q).expect("offsets are valid");
            let n = (q + 2) as usize + plan.extra(3, 3);
            let run = dock.stored_run();
            let block = dock.block();
            let free = free_values(n, &[&run, &block]);
            let canonical: [&[u32]; 2] = [&[9, 8], &[10]];
            let fillers = plan.fill(free, &canonical);
            let (x, y) = (&fillers[0], &fillers[1]);
            Embedding {
                kind,
                start: assemble(&[&run, x, &block, y]),
                targets: vec![assemble(&[x, &ident_block(p - 1, q + 2), y])],
                expect_deadlock: false,
            }
        }
        EmbeddingKind::LockA => {
            let p = plan.offset(0, 3);
            let lock = Lock::new(p);
            let n = (p + 12) as usize + plan.extra(1, 3);
            let closed = lock.closed();
            let free = free_values(n, &[&[lock.key()], &closed]);
            let canonical: [&[u32]; 2] = [&[7], &[13]];
            let fillers = plan.fill(free, &canonical);
            let (x, y) = (&fillers[0], &fillers[1]);
            Embedding {
                kind,
                start: assemble(&[&[lock.key()], x, &closed, y]),
                targets: vec![assemble(&[x, &lock.opened(), y])],
                expect_deadlock: false,
            }
        }
        EmbeddingKind::LockB => {
            let p = plan.offset(0, 3);
            let lock = Lock::new(p);
            let n = (p + 12) as usize + plan.extra(2, 3);
            let opened = lock.opened();
            let free = free_values(n, &[&[lock.test()], &opened]);
            let canonical: [&[u32]; 2] = [&[13], &[14]];
            let fillers = plan.fill(free, &canonical);
            let (x, y) = (&fillers[0], &fillers[1]);
            let (lo, hi) = lock.zone();
            Embedding {
                kind,
                start: assemble(&[&[lock.test()], x, &opened, y]),
                targets: vec![assemble(&[x, &ident_block(lo, hi), y])],
                expect_deadlock: false,
            }
        }
        EmbeddingKind::LockC => {
            let p = plan.offset(0, 3);
            let lock = Lock::new(p);
            let n = (p + 12) as usize + plan.extra(1, 3);
            let closed = lock.closed();
            let free = free_values(n, &[&[lock.test()], &closed]);
            let canonical_x = vec![lock.key(), 13];
            let canonical: [&[u32]; 2] = [&canonical_x, &[]];
            let fillers = plan.fill(free, &canonical);
            let (x, y) = (&fillers[0], &fillers[1]);
            Embedding {
                kind,
                start: assemble(&[&[lock.test()], x, &closed, y]),
                targets: Vec::new(),
                expect_deadlock: true,
            }
        }
        EmbeddingKind::HookA => {
            let p = plan.offset(0, 3);
            let hook = Hook::new(p);
            let n = (p + 12) as usize + plan.extra(1, 3);
            let (g, h) = (hook.g(), hook.h());
            let free = free_values(n, &[&[hook.take()], &g, &h]);
            let canonical_y = vec![hook.put()];
            let canonical: [&[u32]; 3] = [&[], &canonical_y, &[13]];
            let fillers = plan.fill(free, &canonical);
            let (x, y, z) = (&fillers[0], &fillers[1], &fillers[2]);
            Embedding {
                kind,
                start: assemble(&[&[hook.take()], x, &g, y, &h, z]),
                targets: vec![assemble(&[y, &hook.g1(), &reversed(x), &hook.h1(), z])],
                expect_deadlock: false,
            }
        }
        EmbeddingKind::HookB => {
            let p = plan.offset(0, 3);
            let hook = Hook::new(p);
            let n = (p + 12) as usize + plan.extra(1, 3);
            let (g1, h1) = (hook.g1(), hook.h1());
            let free = free_values(n, &[&[hook.put()], &g1, &h1]);
            let canonical: [&[u32]; 3] = [&[], &[], &[13]];
            let fillers = plan.fill(free, &canonical);
            let (x, y, z) = (&fillers[0], &fillers[1], &fillers[2]);
            Embedding {
                kind,
                start: assemble(&[&[hook.put()], x, &g1, &reversed(y), &h1, z]),
                targets: vec![assemble(&[y, &hook.g2(), x, &hook.h2(), z])],
                expect_deadlock: false,
            }
        }
        EmbeddingKind::HookC => {
            let p = plan.offset(0, 3);
            let hook = Hook::new(p);
            let n = (p + 12) as usize + plan.extra(2, 3);
            let (g2, h2) = (hook.g2(), hook.h2());
            let free = free_values(n, &[&g2, &h2]);
            let canonical: [&[u32]; 2] = [&[13], &[14]];
            let fillers = plan.fill(free, &canonical);
            let (x, y) = (&fillers[0], &fillers[1]);
            let (lo, hi) = hook.zone();
            Embedding {
                kind,
                start: assemble(&[&g2, x, &h2, y]),
                targets: vec![assemble(&[x, &rev_ident_block(lo, hi), y])],
                expect_deadlock: false,
            }
        }
        EmbeddingKind::ForkA => {
            let p = plan.offset(0, 3);
            let fork = Fork::new(p);
            let n = (p + 15) as usize + plan.extra(1, 3);
            let (e, f) = (fork.e(), fork.f());
            let free = free_values(n, &[&e, &f]);
            let canonical: [&[u32]; 2] = [&[], &[16]];
            let fillers = plan.fill(free, &canonical);
            let (x, y) = (&fillers[0], &fillers[1]);
            Embedding {
                kind,
                start: assemble(&[&e, x, &f, y]),
                targets: vec![
                    assemble(&[x, &fork.f1(), y]),
                    assemble(&[&reversed(x), &fork.f2(), y]),
                ],
                expect_deadlock: false,
            }
        }
        EmbeddingKind::ForkB | EmbeddingKind::ForkC => {
            let p = plan.offset(0, 3);
            let fork = Fork::new(p);
            let n = (p + 15) as usize + plan.extra(1, 3);
            let residue = if kind == EmbeddingKind::ForkB {
                fork.f1()
            } else {
                fork.f2()
            };
            let free = free_values(n, &[&residue]);
            let canonical: [&[u32]; 1] = [&[16]];
            let fillers = plan.fill(free, &canonical);
            let y = &fillers[0];
            let (lo, hi) = fork.zone();
            Embedding {
                kind,
                start: assemble(&[&residue, y]),
                targets: vec![assemble(&[&rev_ident_block(lo, hi), y])],
                expect_deadlock: false,
            }
        }
        EmbeddingKind::LiteralsA | EmbeddingKind::LiteralsB | EmbeddingKind::LiteralsC => {
            build_literals(kind, plan)
        }
        EmbeddingKind::VariableA | EmbeddingKind::VariableB | EmbeddingKind::VariableC => {
            build_variable(kind, plan)
        }
        EmbeddingKind::Clause => build_clause(plan),
        EmbeddingKind::Clause2A | EmbeddingKind::Clause2B | EmbeddingKind::Clause2C => {
            build_clause2(kind, plan)
        }
    }
}

fn build_literals(kind: EmbeddingKind, plan: &mut Plan<'_>) -> Embedding {
    let m = 3;
    let p = plan.offset(0, 3);
    let lits = Literals::new(p, m);
    let n = (p + 12 * m as u32) as usize;
    let i = match plan {
        Plan::Canonical if kind == EmbeddingKind::LiteralsC => 2,
        Plan::Canonical => 1,
        Plan::Random(rng) => rng.random_range(1..=m),
    };
    let canonical_plan = matches!(plan, Plan::Canonical);
    // probing an open lock tests it; probing a closed one deadlocks
    let (open, tested) = if kind == EmbeddingKind::LiteralsB {
        lock_states(plan, m, &[i], &[])
    } else if kind == EmbeddingKind::LiteralsC && canonical_plan {
        (set(&[1]), BTreeSet::new())
    } else {
        lock_states(plan, m, &[], &[i])
    };
    let lambda = lits
        .lambda_block(&open, &tested)
        .expect("sets are disjoint");
    let head = if kind == EmbeddingKind::LiteralsA {
        lits.key(i)
    } else {
        lits.test(i)
    };
    let free = free_values(n, &[&[head], &lambda]);
    // canonical context: the remaining keys and tests in consumption order
    let canonical_x: Vec<u32> = match kind {
        EmbeddingKind::LiteralsA => vec![
            lits.test(1),
            lits.key(2),
            lits.test(2),
            lits.key(3),
            lits.test(3),
        ],
        EmbeddingKind::LiteralsB => {
            vec![lits.key(2), lits.test(2), lits.key(3), lits.test(3)]
        }
        _ => vec![lits.test(1), lits.key(2), lits.key(3), lits.test(3)],
    };
    let fillers = plan.fill(free, &[&canonical_x]);
    let x = &fillers[0];
    let start = assemble(&[&[head], x, &lambda]);
    let (targets, expect_deadlock) = match kind {
        EmbeddingKind::LiteralsA => {
            let mut open2 = open.clone();
            open2.insert(i);
            let after = lits.lambda_block(&open2, &tested).expect("disjoint");
            (vec![assemble(&[x, &after])], false)
        }
        EmbeddingKind::LiteralsB => {
            let mut open2 = open.clone();
            open2.remove(&i);
            let mut tested2 = tested.clone();
            tested2.insert(i);
            let after = lits.lambda_block(&open2, &tested2).expect("disjoint");
            (vec![assemble(&[x, &after])], false)
        }
        _ => (Vec::new(), true),
    };
    Embedding {
        kind,
        start,
        targets,
        expect_deadlock,
    }
}

/// Disjoint positive/negative occurrence sets over `1..=m`.
fn occurrence_sets(plan: &mut Plan<'_>, m: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
    match plan {
        Plan::Canonical => (set(&[1]), set(&[2])),
        Plan::Random(rng) => {
            let mut pos = BTreeSet::new();
            let mut neg = BTreeSet::new();
            for i in 1..=m {
                match rng.random_range(0..3) {
                    1 => {
                        pos.insert(i);
                    }
                    2 => {
                        neg.insert(i);
                    }
                    _ => {}
                }
            }
            (pos, neg)
        }
    }
}

fn build_variable(kind: EmbeddingKind, plan: &mut Plan<'_>) -> Embedding {
    let m = 3;
    let vp = plan.offset(0, 2);
    let gap = plan.offset(0, 3);
    let lits = Literals::new(vp + 31 + gap, m);
    let n = (lits.p() + 12 * m as u32) as usize;
    let (pos, neg) = occurrence_sets(plan, m);
    let var = Variable::new(&pos, &neg, vp, lits).expect("occurrence sets are disjoint");
    let pos_v: Vec<usize> = pos.iter().copied().collect();
    let neg_v: Vec<usize> = neg.iter().copied().collect();
    let pinned: Vec<usize> = pos.iter().chain(neg.iter()).copied().collect();
    let canonical_plan = matches!(plan, Plan::Canonical);
    // variable_a needs both occurrence sets untouched in the lock bank; each
    // branch residue only needs the set it still carries untouched
    let (open, tested) = match kind {
        EmbeddingKind::VariableA => lock_states(plan, m, &[], &pinned),
        EmbeddingKind::VariableB if canonical_plan => (set(&pos_v), BTreeSet::new()),
        EmbeddingKind::VariableB => lock_states(plan, m, &[], &neg_v),
        _ if canonical_plan => (set(&neg_v), BTreeSet::new()),
        _ => lock_states(plan, m, &[], &pos_v),
    };
    let lambda = lits.lambda_block(&open, &tested).expect("disjoint");
    let (zlo, zhi) = var.zone();

    if kind == EmbeddingKind::VariableA {
        let block = var.block();
        let free = free_values(n, &[&[var.trigger()], &block, &lambda]);
        let canonical_x = vec![lits.key(3), lits.test(3)];
        let mut canonical_y = vec![lits.test(1), lits.test(2)];
        canonical_y.extend(var.dock().block());
        let canonical: [&[u32]; 2] = [&canonical_x, &canonical_y];
        let fillers = plan.fill(free, &canonical);
        let (x, y) = (&fillers[0], &fillers[1]);
        let start = assemble(&[&[var.trigger()], x, &block, y, &lambda]);
        let mut targets = Vec::new();
        for (residue, opened) in [(var.block_true(), &pos), (var.block_false(), &neg)] {
            let mut open2 = open.clone();
            open2.extend(opened.iter().copied());
            let after = lits.lambda_block(&open2, &tested).expect("disjoint");
            targets.push(assemble(&[x, &residue, y, &after]));
        }
        return Embedding {
            kind,
            start,
            targets,
            expect_deadlock: false,
        };
    }

    let (residue, opened_by_residue) = if kind == EmbeddingKind::VariableB {
        (var.block_true(), neg.clone())
    } else {
        (var.block_false(), pos.clone())
    };
    let dock = var.dock().block();
    let free = free_values(n, &[&residue, &dock, &lambda]);
    let canonical_x: Vec<u32> = if kind == EmbeddingKind::VariableB {
        vec![lits.test(1), lits.test(2), lits.key(3), lits.test(3)]
    } else {
        vec![lits.test(2), lits.test(1), lits.key(3), lits.test(3)]
    };
    let canonical: [&[u32]; 2] = [&canonical_x, &[]];
    let fillers = plan.fill(free, &canonical);
    let (x, y) = (&fillers[0], &fillers[1]);
    let start = assemble(&[&residue, x, &dock, y, &lambda]);
    let mut open2 = open.clone();
    open2.extend(opened_by_residue.iter().copied());
    let after = lits.lambda_block(&open2, &tested).expect("disjoint");
    let target = assemble(&[x, &ident_block(zlo, zhi), y, &after]);
    Embedding {
        kind,
        start,
        targets: vec![target],
        expect_deadlock: false,
    }
}

/// The three literal indices in clause-slot order.
fn clause_slots(plan: &mut Plan<'_>) -> [usize; 3] {
    match plan {
        Plan::Canonical => [1, 2, 3],
        Plan::Random(rng) => {
            let mut slots = [1, 2, 3];
            slots.shuffle(rng);
            slots
        }
    }
}

fn build_clause(plan: &mut Plan<'_>) -> Embedding {
    let m = 3;
    let cp = plan.offset(0, 2);
    let gap = plan.offset(0, 3);
    let lits = Literals::new(cp + 62 + gap, m);
    let n = (lits.p() + 12 * m as u32) as usize;
    let [a, b, c] = clause_slots(plan);
    let clause = ClauseGadget::new(a, b, c, cp, lits).expect("indices are distinct");
    // the clause block owns all three test elements, so none of its
    // literals may be in tested state; open/closed is free
    let open = match plan {
        Plan::Canonical => set(&[1, 2, 3]),
        Plan::Random(rng) => {
            let mut open = BTreeSet::new();
            for i in 1..=m {
                if rng.random_range(0..2) == 1 {
                    open.insert(i);
                }
            }
            open
        }
    };
    let tested = BTreeSet::new();
    let lambda = lits.lambda_block(&open, &tested).expect("disjoint");
    let block = clause.block();
    let free = free_values(n, &[&[clause.trigger()], &block, &lambda]);
    let docks = clause.docks();
    let canonical: [&[u32]; 2] = [&[], &docks];
    let fillers = plan.fill(free, &canonical);
    let (x, y) = (&fillers[0], &fillers[1]);
    let start = assemble(&[&[clause.trigger()], x, &block, y, &lambda]);
    let mut targets = Vec::new();
    for slot in ClauseSlot::ALL {
        let lit = clause.literal(slot);
        if !open.contains(&lit) {
            continue;
        }
        let mut open2 = open.clone();
        open2.remove(&lit);
        let mut tested2 = tested.clone();
        tested2.insert(lit);
        let after = lits.lambda_block(&open2, &tested2).expect("disjoint");
        targets.push(assemble(&[x, &clause.resolved(slot), y, &after]));
    }
    Embedding {
        kind: EmbeddingKind::Clause,
        start,
        targets,
        expect_deadlock: false,
    }
}

fn build_clause2(kind: EmbeddingKind, plan: &mut Plan<'_>) -> Embedding {
    let m = 3;
    let cp = plan.offset(0, 2);
    let gap = plan.offset(0, 3);
    let lits = Literals::new(cp + 62 + gap, m);
    let n = (lits.p() + 12 * m as u32) as usize;
    let [a, b, c] = clause_slots(plan);
    let clause = ClauseGadget::new(a, b, c, cp, lits).expect("indices are distinct");
    // the residue still tests the two remaining literals, so their locks
    // must be open; the already-tested literal's lock may be in any state
    let (slot, needed, spare) = match kind {
        EmbeddingKind::Clause2A => (ClauseSlot::A, [b, c], a),
        EmbeddingKind::Clause2B => (ClauseSlot::B, [a, c], b),
        _ => (ClauseSlot::C, [a, b], c),
    };
    let residue = clause.resolved(slot);
    let (open, tested) = match plan {
        Plan::Canonical => (set(&needed), BTreeSet::new()),
        Plan::Random(rng) => {
            let mut open = set(&needed);
            let mut tested = BTreeSet::new();
            match rng.random_range(0..3) {
                1 => {
                    open.insert(spare);
                }
                2 => {
                    tested.insert(spare);
                }
                _ => {}
            }
            (open, tested)
        }
    };
    let lambda = lits.lambda_block(&open, &tested).expect("disjoint");
    let docks = clause.docks();
    let free = free_values(n, &[&residue, &docks, &lambda]);
    let spare_lock = lits.lock(spare);
    let canonical_y = vec![spare_lock.key(), spare_lock.test()];
    let canonical: [&[u32]; 2] = [&canonical_y, &[]];
    let fillers = plan.fill(free, &canonical);
    let (y, z) = (&fillers[0], &fillers[1]);
    let start = assemble(&[&residue, y, &docks, z, &lambda]);
    let mut open2 = open.clone();
    let mut tested2 = tested.clone();
    for lit in needed {
        open2.remove(&lit);
        tested2.insert(lit);
    }
    let after = lits.lambda_block(&open2, &tested2).expect("disjoint");
    let (zlo, zhi) = clause.zone();
    let target = assemble(&[y, &ident_block(zlo, zhi), z, &after]);
    Embedding {
        kind,
        start,
        targets: vec![target],
        expect_deadlock: false,
    }
}
