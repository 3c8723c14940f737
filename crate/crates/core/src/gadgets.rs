//! Gadget blocks used by the 3-SAT reduction.
//!
//! Level-1 gadgets (dock, lock, hook, fork) are fixed integer blocks at an
//! offset `p`; level-2 gadgets (literals, variable, clause) are assembled
//! from level-1 blocks plus key/test elements owned by a [`Literals`] bank.
//! Every constructor checks that its zone elements tile the documented
//! contiguous interval exactly.
//!
//! Each gadget also exposes its derived forms: the blocks left behind once
//! the gadget's trigger has been consumed along an efficient path (the lock
//! in open position, the hook after take/put, the fork after either branch,
//! and so on).

use std::collections::BTreeSet;

use thiserror::Error;

use crate::perm::{ident_block, rev_ident_block, shift_block};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("dock requires 1 <= p < q, got p={p}, q={q}")]
    BadOffsets { p: u32, q: u32 },
    #[error("index sets must be disjoint subsets of 1..=m")]
    OverlappingSets,
    #[error("clause literal indices must be pairwise distinct and within 1..=m")]
    DuplicateIndices,
}

/// Parks a descending run `<q q-1 .. p+1>` out of the way: the four-element
/// block `<p-1 p q+1 q+2>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dock {
    p: u32,
    q: u32,
}

impl Dock {
    pub fn new(p: u32, q: u32) -> Result<Self, GadgetError> {
        if p < 1 || p >= q {
            return Err(GadgetError::BadOffsets { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn block(&self) -> Vec<u32> {
        vec![self.p - 1, self.p, self.q + 1, self.q + 2]
    }

    /// The run this dock stores, `<q q-1 .. p+1>`.
    pub fn stored_run(&self) -> Vec<u32> {
        rev_ident_block(self.p + 1, self.q)
    }
}

/// A 10-element lock opened by its key element and checked by its test
/// element; testing a closed lock deadlocks the whole sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lock {
    p: u32,
}

impl Lock {
    pub fn new(p: u32) -> Self {
        Self { p }
    }

    pub fn key(&self) -> u32 {
        self.p + 10
    }

    pub fn test(&self) -> u32 {
        self.p + 7
    }

    /// The closed lock `L`.
    pub fn closed(&self) -> Vec<u32> {
        shift_block(self.p, &[1, 2, 9, 8, 5, 6, 4, 3, 11, 12])
    }

    /// The open lock `L^o`; the key has been absorbed.
    pub fn opened(&self) -> Vec<u32> {
        shift_block(self.p, &[1, 2, 3, 4, 6, 5, 8, 9, 10, 11, 12])
    }

    /// Zone occupied once fully processed, `p+1..=p+12`.
    pub fn zone(&self) -> (u32, u32) {
        (self.p + 1, self.p + 12)
    }
}

/// A hook stores the interval between its two delimiters: the take element
/// moves that interval to the head, the put element moves it back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hook {
    p: u32,
}

impl Hook {
    pub fn new(p: u32) -> Self {
        Self { p }
    }

    pub fn take(&self) -> u32 {
        self.p + 10
    }

    pub fn put(&self) -> u32 {
        self.p + 7
    }

    pub fn g(&self) -> Vec<u32> {
        shift_block(self.p, &[3, 4])
    }

    pub fn h(&self) -> Vec<u32> {
        shift_block(self.p, &[12, 11, 6, 5, 9, 8, 2, 1])
    }

    /// `G'`, the upper delimiter after the take flip.
    pub fn g1(&self) -> Vec<u32> {
        shift_block(self.p, &[12, 11, 6, 5, 4, 3])
    }

    /// `H'`, the lower delimiter after the take flip.
    pub fn h1(&self) -> Vec<u32> {
        shift_block(self.p, &[10, 9, 8, 2, 1])
    }

    /// `G''`, the upper delimiter after the put flip.
    pub fn g2(&self) -> Vec<u32> {
        shift_block(self.p, &[3, 4, 5, 6, 7])
    }

    /// `H''`, the lower delimiter after the put flip.
    pub fn h2(&self) -> Vec<u32> {
        shift_block(self.p, &[12, 11, 10, 9, 8, 2, 1])
    }

    pub fn zone(&self) -> (u32, u32) {
        (self.p + 1, self.p + 12)
    }
}

/// A fork forces a binary choice: every efficient path brings either the
/// delimited interval or its reversal to the head.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fork {
    p: u32,
}

impl Fork {
    pub fn new(p: u32) -> Self {
        Self { p }
    }

    pub fn e(&self) -> Vec<u32> {
        shift_block(self.p, &[11, 8, 7, 3])
    }

    pub fn f(&self) -> Vec<u32> {
        shift_block(self.p, &[10, 9, 6, 12, 13, 4, 5, 15, 14, 2, 1])
    }

    /// `F^1`, the residue of the first branch.
    pub fn f1(&self) -> Vec<u32> {
        shift_block(self.p, &[10, 9, 6, 7, 8, 11, 12, 13, 14, 15, 5, 4, 3, 2, 1])
    }

    /// `F^2`, the residue of the second branch.
    pub fn f2(&self) -> Vec<u32> {
        shift_block(self.p, &[3, 7, 8, 11, 10, 9, 6, 12, 13, 4, 5, 15, 14, 2, 1])
    }

    pub fn zone(&self) -> (u32, u32) {
        (self.p + 1, self.p + 15)
    }
}

/// The bank of locks for all `m` literal occurrences of a formula, laid out
/// consecutively from offset `p`: lock `i` sits at `p + 12(i-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literals {
    p: u32,
    m: usize,
}

impl Literals {
    pub fn new(p: u32, m: usize) -> Self {
        Self { p, m }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lock(&self, i: usize) -> Lock {
        assert!(i >= 1 && i <= self.m, "literal index out of range");
        Lock::new(self.p + 12 * (i as u32 - 1))
    }

    pub fn key(&self, i: usize) -> u32 {
        self.lock(i).key()
    }

    pub fn test(&self, i: usize) -> u32 {
        self.lock(i).test()
    }

    /// The lock bank with every lock in state closed / open / tested:
    /// lock `i` appears as `L_i` by default, as `L^o_i` for `i` in `open`,
    /// and as the sorted run `p+12i-11..=p+12i` for `i` in `tested`.
    pub fn lambda_block(
        &self,
        open: &BTreeSet<usize>,
        tested: &BTreeSet<usize>,
    ) -> Result<Vec<u32>, GadgetError> {
        if !open.is_disjoint(tested) || open.iter().chain(tested).any(|&i| i < 1 || i > self.m) {
            return Err(GadgetError::OverlappingSets);
        }
        let mut out = Vec::with_capacity(12 * self.m);
        for i in 1..=self.m {
            let lock = self.lock(i);
            if tested.contains(&i) {
                let (lo, hi) = lock.zone();
                out.extend(ident_block(lo, hi));
            } else if open.contains(&i) {
                out.extend(lock.opened());
            } else {
                out.extend(lock.closed());
            }
        }
        Ok(out)
    }

    pub fn zone(&self) -> (u32, u32) {
        (self.p + 1, self.p + 12 * self.m as u32)
    }
}

/// A boolean-variable gadget. Its trigger forces a choice between opening
/// the locks of the variable's positive occurrences (`P`) or of its negative
/// occurrences (`N`); the branch residues later open the other set while the
/// gadget zone collapses to a sorted run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pos: Vec<usize>,
    neg: Vec<usize>,
    p: u32,
    lits: Literals,
}

impl Variable {
    pub fn new(
        pos: &BTreeSet<usize>,
        neg: &BTreeSet<usize>,
        p: u32,
        lits: Literals,
    ) -> Result<Self, GadgetError> {
        if !pos.is_disjoint(neg) || pos.iter().chain(neg).any(|&i| i < 1 || i > lits.m()) {
            return Err(GadgetError::OverlappingSets);
        }
        let var = Self {
            pos: pos.iter().copied().collect(),
            neg: neg.iter().copied().collect(),
            p,
            lits,
        };
        var.assert_zone_closure();
        Ok(var)
    }

    fn hook(&self) -> Hook {
        Hook::new(self.p + 2)
    }

    fn fork(&self) -> Fork {
        Fork::new(self.p + 14)
    }

    pub fn dock(&self) -> Dock {
        Dock::new(self.p + 2, self.p + 29).expect("variable dock offsets are valid")
    }

    /// The trigger element `nu`.
    pub fn trigger(&self) -> u32 {
        self.hook().take()
    }

    pub fn pos(&self) -> &[usize] {
        &self.pos
    }

    pub fn neg(&self) -> &[usize] {
        &self.neg
    }

    fn keys(&self, indices: &[usize]) -> Vec<u32> {
        indices.iter().map(|&i| self.lits.key(i)).collect()
    }

    /// The initial block `V`.
    pub fn block(&self) -> Vec<u32> {
        let hook = self.hook();
        let fork = self.fork();
        let mut out = hook.g();
        out.extend(fork.e());
        out.extend(self.keys(&self.pos));
        out.push(hook.put());
        out.extend(self.keys(&self.neg));
        out.extend(fork.f());
        out.extend(hook.h());
        out
    }

    /// `V^1`: the residue after taking the branch that opens `P`; it still
    /// carries the keys of `N` in ascending index order.
    pub fn block_true(&self) -> Vec<u32> {
        let hook = self.hook();
        let mut out = hook.g2();
        out.extend(self.keys(&self.neg));
        out.extend(self.fork().f1());
        out.extend(hook.h2());
        out
    }

    /// `V^2`: the residue after taking the branch that opens `N`; it still
    /// carries the keys of `P` in descending index order.
    pub fn block_false(&self) -> Vec<u32> {
        let hook = self.hook();
        let mut out = hook.g2();
        let mut pos_rev = self.keys(&self.pos);
        pos_rev.reverse();
        out.extend(pos_rev);
        out.extend(self.fork().f2());
        out.extend(hook.h2());
        out
    }

    /// Zone occupied once fully processed, `p+1..=p+31`.
    pub fn zone(&self) -> (u32, u32) {
        (self.p + 1, self.p + 31)
    }

    /// The gadget's own elements (trigger, block minus foreign keys, dock)
    /// must tile the zone exactly.
    fn assert_zone_closure(&self) {
        let keys: BTreeSet<u32> = self
            .keys(&self.pos)
            .into_iter()
            .chain(self.keys(&self.neg))
            .collect();
        let mut zone: Vec<u32> = std::iter::once(self.trigger())
            .chain(self.block().into_iter().filter(|v| !keys.contains(v)))
            .chain(self.dock().block())
            .collect();
        zone.sort_unstable();
        let (lo, hi) = self.zone();
        assert!(
            zone.into_iter().eq(lo..=hi),
            "variable zone elements must tile {lo}..={hi}"
        );
    }
}

/// Which of the three literal slots of a clause is involved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseSlot {
    A,
    B,
    C,
}

impl ClauseSlot {
    pub const ALL: [ClauseSlot; 3] = [ClauseSlot::A, ClauseSlot::B, ClauseSlot::C];
}

/// A clause gadget holding the test elements of its three literals. Its
/// trigger admits one efficient branch per open literal lock; each branch
/// tests that literal's lock and leaves a residue that later collapses the
/// zone to a sorted run while testing the remaining two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseGadget {
    a: usize,
    b: usize,
    c: usize,
    p: u32,
    lits: Literals,
}

impl ClauseGadget {
    pub fn new(a: usize, b: usize, c: usize, p: u32, lits: Literals) -> Result<Self, GadgetError> {
        let m = lits.m();
        if a == b || a == c || b == c || [a, b, c].iter().any(|&i| i < 1 || i > m) {
            return Err(GadgetError::DuplicateIndices);
        }
        let clause = Self { a, b, c, p, lits };
        clause.assert_zone_closure();
        Ok(clause)
    }

    fn fork1(&self) -> Fork {
        Fork::new(self.p + 2)
    }

    fn fork2(&self) -> Fork {
        Fork::new(self.p + 45)
    }

    fn hook1(&self) -> Hook {
        Hook::new(self.p + 21)
    }

    fn hook2(&self) -> Hook {
        Hook::new(self.p + 33)
    }

    pub fn dock1(&self) -> Dock {
        Dock::new(self.p + 2, self.p + 17).expect("clause dock offsets are valid")
    }

    pub fn dock2(&self) -> Dock {
        Dock::new(self.p + 21, self.p + 60).expect("clause dock offsets are valid")
    }

    /// The trigger element `gamma`.
    pub fn trigger(&self) -> u32 {
        self.hook1().take()
    }

    pub fn literal(&self, slot: ClauseSlot) -> usize {
        match slot {
            ClauseSlot::A => self.a,
            ClauseSlot::B => self.b,
            ClauseSlot::C => self.c,
        }
    }

    /// The initial block `Gamma`.
    pub fn block(&self) -> Vec<u32> {
        let (f1, f2) = (self.fork1(), self.fork2());
        let (h1, h2) = (self.hook1(), self.hook2());
        let mut out = h1.g();
        out.extend(f1.e());
        out.push(h2.take());
        out.push(h1.put());
        out.push(self.lits.test(self.c));
        out.extend(f1.f());
        out.extend(h2.g());
        out.extend(f2.e());
        out.push(self.lits.test(self.a));
        out.push(h2.put());
        out.push(self.lits.test(self.b));
        out.extend(f2.f());
        out.extend(h2.h());
        out.extend(h1.h());
        out
    }

    /// The residue `Gamma^1 / Gamma^2 / Gamma^3` left after the branch that
    /// tests literal `a` / `b` / `c`.
    pub fn resolved(&self, slot: ClauseSlot) -> Vec<u32> {
        let (f1, f2) = (self.fork1(), self.fork2());
        let (h1, h2) = (self.hook1(), self.hook2());
        let mut out = h1.g2();
        match slot {
            ClauseSlot::A => {
                out.push(self.lits.test(self.c));
                out.extend(f1.f1());
                out.extend(h2.g2());
                out.push(self.lits.test(self.b));
                out.extend(f2.f1());
                out.extend(h2.h2());
            }
            ClauseSlot::B => {
                out.push(self.lits.test(self.c));
                out.extend(f1.f1());
                out.extend(h2.g2());
                out.push(self.lits.test(self.a));
                out.extend(f2.f2());
                out.extend(h2.h2());
            }
            ClauseSlot::C => {
                out.push(h2.take());
                out.extend(f1.f2());
                out.extend(h2.g());
                out.extend(f2.e());
                out.push(self.lits.test(self.a));
                out.push(h2.put());
                out.push(self.lits.test(self.b));
                out.extend(f2.f());
                out.extend(h2.h());
            }
        }
        out.extend(h1.h2());
        out
    }

    /// The dock pair `Delta = D_1 D_2`.
    pub fn docks(&self) -> Vec<u32> {
        let mut out = self.dock1().block();
        out.extend(self.dock2().block());
        out
    }

    /// Zone occupied once fully processed, `p+1..=p+62`.
    pub fn zone(&self) -> (u32, u32) {
        (self.p + 1, self.p + 62)
    }

    fn tests(&self) -> [u32; 3] {
        [
            self.lits.test(self.a),
            self.lits.test(self.b),
            self.lits.test(self.c),
        ]
    }

    fn assert_zone_closure(&self) {
        let tests = self.tests();
        let mut zone: Vec<u32> = std::iter::once(self.trigger())
            .chain(self.block().into_iter().filter(|v| !tests.contains(v)))
            .chain(self.docks())
            .collect();
        zone.sort_unstable();
        let (lo, hi) = self.zone();
        assert!(
            zone.into_iter().eq(lo..=hi),
            "clause zone elements must tile {lo}..={hi}"
        );
    }
}
