//! Sequences over `1..=n`, prefix reversals, and the breakpoint calculus.
//!
//! A [`Sequence`] is an immutable permutation of `1..=n`. A *flip* of length
//! `r` reverses the first `r` elements. A position `r < n` is a *breakpoint*
//! when the elements at `r` and `r + 1` differ by more than one, and position
//! `n` is a breakpoint when the last element is not `n`; the head element
//! never contributes a breakpoint on its own. A flip is *efficient* when it
//! removes exactly one breakpoint, and any sequence admits at most two
//! efficient flips.

use std::fmt;

use thiserror::Error;

/// Errors from sequence construction and flip application.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    /// The input is not a permutation of `1..=n`.
    #[error("not a permutation of 1..=n: {0}")]
    NotAPermutation(String),
    /// A flip length outside `1..=n` (or outside `2..=n` for path steps).
    #[error("flip length {r} out of range for a sequence of length {n}")]
    OutOfRange { r: usize, n: usize },
    /// The permutation text could not be parsed.
    #[error("invalid permutation text: {0}")]
    Parse(String),
}

/// An immutable permutation of `1..=n`, the universal state object.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sequence {
    elems: Vec<u32>,
}

impl Sequence {
    /// Validates that `values` is a permutation of `1..=n` with `n >= 1`.
    pub fn new(values: Vec<u32>) -> Result<Self, PermError> {
        let n = values.len();
        if n == 0 {
            return Err(PermError::NotAPermutation("empty sequence".into()));
        }
        let mut seen = vec![false; n];
        for &v in &values {
            if v < 1 || v as usize > n {
                return Err(PermError::NotAPermutation(format!(
                    "element {v} outside 1..={n}"
                )));
            }
            if seen[v as usize - 1] {
                return Err(PermError::NotAPermutation(format!("duplicate element {v}")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Self { elems: values })
    }

    /// The identity `<1 2 .. n>`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "sequences have length at least 1");
        Self {
            elems: (1..=n as u32).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn is_identity(&self) -> bool {
        self.elems
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    /// Reverses the first `r` elements. The flip of length 1 returns the
    /// sequence unchanged; `flip(flip(S, r), r) == S`.
    pub fn flip(&self, r: usize) -> Result<Self, PermError> {
        if r < 1 || r > self.n() {
            return Err(PermError::OutOfRange { r, n: self.n() });
        }
        Ok(self.flipped(r))
    }

    /// Flip without the range check; `r` must already be in `1..=n`.
    pub(crate) fn flipped(&self, r: usize) -> Self {
        debug_assert!(r >= 1 && r <= self.n());
        let mut elems = self.elems.clone();
        elems[..r].reverse();
        Self { elems }
    }

    /// Breakpoint positions and count.
    pub fn breakpoints(&self) -> BreakpointProfile {
        let n = self.n();
        let mut positions = Vec::new();
        for r in 1..n {
            if !adjacent(self.elems[r - 1], self.elems[r]) {
                positions.push(r);
            }
        }
        if self.elems[n - 1] != n as u32 {
            positions.push(n);
        }
        BreakpointProfile { positions }
    }

    /// `d_b(S)` without materialising the position set.
    pub fn breakpoint_count(&self) -> usize {
        let n = self.n();
        let mut db = 0;
        for r in 1..n {
            if !adjacent(self.elems[r - 1], self.elems[r]) {
                db += 1;
            }
        }
        if self.elems[n - 1] != n as u32 {
            db += 1;
        }
        db
    }

    /// Breakpoint-count change of `flip(self, r)` relative to `self`,
    /// always in `{-1, 0, 1}`.
    pub fn flip_breakpoint_delta(&self, r: usize) -> i32 {
        flip_delta_raw(&self.elems, r)
    }

    /// The set of flip lengths `r` in `2..=n` with
    /// `d_b(flip(S, r)) == d_b(S) - 1`, ascending. There are at most two.
    ///
    /// A prefix reversal only changes the adjacency at the cut (and the
    /// bottom rule when `r == n`), so the candidates are the positions right
    /// after the values `head - 1` and `head + 1`, plus `r == n` when the
    /// head element is `n`.
    pub fn efficient_flips(&self) -> Vec<usize> {
        let e = &self.elems;
        let n = e.len();
        let head = e[0];
        let mut out = Vec::with_capacity(2);
        for target in [head.checked_sub(1), head.checked_add(1)] {
            let Some(target) = target else { continue };
            if target < 1 || target > n as u32 {
                continue;
            }
            // value `target` at 0-based index j means flipping r = j elements
            // creates the adjacent pair (head, target)
            let j = e.iter().position(|&v| v == target).expect("permutation");
            if j >= 2 && !adjacent(e[j - 1], e[j]) {
                out.push(j);
            }
        }
        if head == n as u32 && e[n - 1] != n as u32 {
            out.push(n);
        }
        out.sort_unstable();
        debug_assert!(out.len() <= 2);
        debug_assert!(out.iter().all(|&r| self.flip_breakpoint_delta(r) == -1));
        out
    }

    /// True iff the sequence differs from the identity and has no efficient
    /// flip.
    pub fn is_deadlock(&self) -> bool {
        !self.is_identity() && self.efficient_flips().is_empty()
    }

    /// Parses a whitespace-separated list of base-10 elements.
    pub fn parse(text: &str) -> Result<Self, PermError> {
        let values = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|_| PermError::Parse(format!("bad element `{tok}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(values)
    }
}

impl fmt::Display for Sequence {
    /// Elements separated by single spaces, no trailing space; the line
    /// format used by the CLI.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

fn adjacent(a: u32, b: u32) -> bool {
    a.abs_diff(b) == 1
}

/// Breakpoint-count delta of a length-`r` flip, on raw elements.
pub(crate) fn flip_delta_raw(e: &[u32], r: usize) -> i32 {
    let n = e.len();
    debug_assert!(r >= 1 && r <= n);
    if r == 1 {
        return 0;
    }
    if r == n {
        // the pair rule is untouched (prefix adjacencies survive reversal);
        // only the bottom rule flips between x_n and x_1
        return (e[0] != n as u32) as i32 - (e[n - 1] != n as u32) as i32;
    }
    (!adjacent(e[0], e[r])) as i32 - (!adjacent(e[r - 1], e[r])) as i32
}

pub(crate) fn flip_in_place(e: &mut [u32], r: usize) {
    e[..r].reverse();
}

/// Breakpoint positions of a sequence; `db == positions.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakpointProfile {
    positions: Vec<usize>,
}

impl BreakpointProfile {
    pub fn db(&self) -> usize {
        self.positions.len()
    }

    /// Ascending breakpoint positions in `1..=n`.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }
}

/// The block `<p p+1 .. q>`; empty when `q < p`.
pub fn ident_block(p: u32, q: u32) -> Vec<u32> {
    if q < p {
        return Vec::new();
    }
    (p..=q).collect()
}

/// The block `<q q-1 .. p>`; empty when `q < p`.
pub fn rev_ident_block(p: u32, q: u32) -> Vec<u32> {
    if q < p {
        return Vec::new();
    }
    (p..=q).rev().collect()
}

/// Element-wise shift `p + block`.
pub fn shift_block(p: u32, block: &[u32]) -> Vec<u32> {
    block.iter().map(|&x| p + x).collect()
}

/// An ordered series of flip lengths applied to a fixed source sequence.
///
/// Every step length is in `2..=n` (a length-1 flip does nothing and never
/// appears in a path). The path is *efficient* when every step removes
/// exactly one breakpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipPath {
    source: Sequence,
    flips: Vec<usize>,
}

impl FlipPath {
    pub fn new(source: Sequence, flips: Vec<usize>) -> Result<Self, PermError> {
        let n = source.n();
        if let Some(&r) = flips.iter().find(|&&r| r < 2 || r > n) {
            return Err(PermError::OutOfRange { r, n });
        }
        Ok(Self { source, flips })
    }

    pub fn empty(source: Sequence) -> Self {
        Self {
            source,
            flips: Vec::new(),
        }
    }

    pub fn source(&self) -> &Sequence {
        &self.source
    }

    pub fn flips(&self) -> &[usize] {
        &self.flips
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    /// All intermediate states, source first; `len() + 1` entries.
    pub fn states(&self) -> Vec<Sequence> {
        let mut out = Vec::with_capacity(self.flips.len() + 1);
        out.push(self.source.clone());
        for &r in &self.flips {
            let next = out.last().unwrap().flipped(r);
            out.push(next);
        }
        out
    }

    pub fn final_state(&self) -> Sequence {
        let mut cur = self.source.clone();
        for &r in &self.flips {
            cur = cur.flipped(r);
        }
        cur
    }

    /// Breakpoint count at each state along the path, source included.
    pub fn db_trace(&self) -> Vec<usize> {
        self.states()
            .iter()
            .map(Sequence::breakpoint_count)
            .collect()
    }

    /// True iff every step decreases the breakpoint count by exactly one.
    pub fn is_efficient(&self) -> bool {
        let mut cur = self.source.clone();
        for &r in &self.flips {
            if cur.flip_breakpoint_delta(r) != -1 {
                return false;
            }
            cur = cur.flipped(r);
        }
        true
    }

    /// True iff replaying the path reaches the identity.
    pub fn sorts_source(&self) -> bool {
        self.final_state().is_identity()
    }
}
