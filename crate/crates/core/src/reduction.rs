//! From 3-CNF formulas to pancake stacks.
//!
//! A formula with `l` variables and `k` clauses (exactly three literals
//! each, `m = 3k` occurrences) becomes a permutation of `31l + 98k`
//! elements with `16l + 50k` breakpoints: one variable gadget per variable,
//! one clause gadget per clause, one lock per literal occurrence. The
//! permutation is efficiently sortable (sortable in one flip per
//! breakpoint) iff the formula is satisfiable, which is checked here
//! against an independent brute-force oracle.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::gadgets::{ClauseGadget, ClauseSlot, Literals, Variable};
use crate::perm::{FlipPath, Sequence};
use crate::search::{decide_with, efficient_path_to, SearchError, SearchLimits};

/// Variable-count guard for the brute-force satisfiability oracle.
const SAT_MAX_L: usize = 24;

/// DIMACS ingestion errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("clause {clause} has {found} literals, expected exactly 3")]
    Arity { clause: usize, found: usize },
    #[error("clause {clause}: variable {var} outside 1..={l}")]
    Range { clause: usize, var: usize, l: usize },
}

/// Reduction and certification errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("formula with l={l}, k={k} exceeds the guard (l<={max_l}, k<={max_k})")]
    TooLarge {
        l: usize,
        k: usize,
        max_l: usize,
        max_k: usize,
    },
    #[error("selection picks literal {literal}, which is false under the assignment")]
    IncompatibleSelection { literal: usize },
    #[error("certification failed: no efficient path between landmarks {stage} and {next}")]
    CertificationFailed { stage: String, next: String },
    #[error("equivalence violation: sortable={sortable} but satisfiable={satisfiable}")]
    EquivalenceViolation { sortable: bool, satisfiable: bool },
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// A literal: a variable index in `1..=l` with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn new(var: usize, positive: bool) -> Self {
        Self { var, positive }
    }
}

/// A 3-CNF formula: `l` variables, clauses of exactly three literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    l: usize,
    clauses: Vec<[Lit; 3]>,
}

impl Cnf {
    pub fn new(l: usize, clauses: Vec<[Lit; 3]>) -> Result<Self, DimacsError> {
        for (ci, clause) in clauses.iter().enumerate() {
            for lit in clause {
                if lit.var < 1 || lit.var > l {
                    return Err(DimacsError::Range {
                        clause: ci + 1,
                        var: lit.var,
                        l,
                    });
                }
            }
        }
        Ok(Self { l, clauses })
    }

    pub fn var_count(&self) -> usize {
        self.l
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Total literal occurrences, `m = 3k`.
    pub fn literal_count(&self) -> usize {
        3 * self.clauses.len()
    }

    pub fn clauses(&self) -> &[[Lit; 3]] {
        &self.clauses
    }

    /// The literal with global occurrence index `j` in `1..=m`; clause `i`
    /// owns occurrences `3i-2`, `3i-1`, `3i`.
    pub fn literal(&self, j: usize) -> Lit {
        assert!(j >= 1 && j <= self.literal_count());
        self.clauses[(j - 1) / 3][(j - 1) % 3]
    }

    /// True under `asg` for the literal with global index `j`.
    fn literal_true(&self, asg: &Assignment, j: usize) -> bool {
        let lit = self.literal(j);
        asg.is_true(lit.var) == lit.positive
    }
}

/// Parses standard DIMACS CNF: `c` comment lines, a `p cnf <l> <k>` header,
/// then clauses as 0-terminated integer lists. Every clause must have
/// exactly three literals; repeated or complementary literals within a
/// clause are accepted.
pub fn parse_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut tokens: Vec<(i64, usize)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_id = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::Syntax {
                    line: line_id,
                    msg: "duplicate header".into(),
                });
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(DimacsError::Syntax {
                    line: line_id,
                    msg: format!("malformed header `{trimmed}`"),
                });
            }
            let l = fields[2]
                .parse::<usize>()
                .map_err(|_| DimacsError::Syntax {
                    line: line_id,
                    msg: format!("bad variable count `{}`", fields[2]),
                })?;
            let k = fields[3]
                .parse::<usize>()
                .map_err(|_| DimacsError::Syntax {
                    line: line_id,
                    msg: format!("bad clause count `{}`", fields[3]),
                })?;
            header = Some((l, k));
            continue;
        }
        if header.is_none() {
            return Err(DimacsError::Syntax {
                line: line_id,
                msg: "clause before `p cnf` header".into(),
            });
        }
        for tok in trimmed.split_whitespace() {
            let v = tok.parse::<i64>().map_err(|_| DimacsError::Syntax {
                line: line_id,
                msg: format!("bad literal `{tok}`"),
            })?;
            tokens.push((v, line_id));
        }
    }
    let Some((l, k)) = header else {
        return Err(DimacsError::Syntax {
            line: 0,
            msg: "missing `p cnf` header".into(),
        });
    };
    let mut clauses: Vec<[Lit; 3]> = Vec::with_capacity(k);
    let mut current: Vec<Lit> = Vec::new();
    for (v, line_id) in tokens {
        if v == 0 {
            if current.len() != 3 {
                return Err(DimacsError::Arity {
                    clause: clauses.len() + 1,
                    found: current.len(),
                });
            }
            clauses.push([current[0], current[1], current[2]]);
            current.clear();
        } else {
            let var = v.unsigned_abs() as usize;
            if var > l {
                return Err(DimacsError::Range {
                    clause: clauses.len() + 1,
                    var,
                    l,
                });
            }
            if current.len() == 3 {
                return Err(DimacsError::Syntax {
                    line: line_id,
                    msg: "clause with more than 3 literals".into(),
                });
            }
            current.push(Lit::new(var, v > 0));
        }
    }
    if !current.is_empty() {
        return Err(DimacsError::Syntax {
            line: 0,
            msg: "unterminated clause".into(),
        });
    }
    if clauses.len() != k {
        return Err(DimacsError::Syntax {
            line: 0,
            msg: format!("header declares {k} clauses, found {}", clauses.len()),
        });
    }
    Cnf::new(l, clauses)
}

/// A full truth assignment: a partition of `1..=l` into true and false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    l: usize,
    true_vars: BTreeSet<usize>,
}

impl Assignment {
    pub fn new(l: usize, true_vars: BTreeSet<usize>) -> Self {
        assert!(
            true_vars.iter().all(|&v| v >= 1 && v <= l),
            "assigned variables must be in 1..=l"
        );
        Self { l, true_vars }
    }

    pub fn is_true(&self, var: usize) -> bool {
        self.true_vars.contains(&var)
    }

    pub fn true_vars(&self) -> &BTreeSet<usize> {
        &self.true_vars
    }

    pub fn false_vars(&self) -> BTreeSet<usize> {
        (1..=self.l).filter(|v| !self.is_true(*v)).collect()
    }

    pub fn satisfies(&self, cnf: &Cnf) -> bool {
        cnf.clauses()
            .iter()
            .all(|cl| cl.iter().any(|lit| self.is_true(lit.var) == lit.positive))
    }
}

/// A full selection: exactly one literal occurrence per clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    chosen: BTreeSet<usize>,
}

impl Selection {
    /// Validates that `chosen` picks exactly one of `{3i-2, 3i-1, 3i}` for
    /// every clause `i`.
    pub fn new(cnf: &Cnf, chosen: BTreeSet<usize>) -> Option<Self> {
        let k = cnf.clause_count();
        if chosen.len() != k {
            return None;
        }
        for i in 1..=k {
            let slots = [3 * i - 2, 3 * i - 1, 3 * i];
            if slots.iter().filter(|j| chosen.contains(j)).count() != 1 {
                return None;
            }
        }
        Some(Self { chosen })
    }

    pub fn contains(&self, j: usize) -> bool {
        self.chosen.contains(&j)
    }

    pub fn chosen(&self) -> &BTreeSet<usize> {
        &self.chosen
    }

    /// The slot selected in clause `i`.
    pub fn slot(&self, i: usize) -> ClauseSlot {
        if self.chosen.contains(&(3 * i - 2)) {
            ClauseSlot::A
        } else if self.chosen.contains(&(3 * i - 1)) {
            ClauseSlot::B
        } else {
            ClauseSlot::C
        }
    }

    /// Compatible iff every selected literal is true under `asg`.
    pub fn compatible(&self, cnf: &Cnf, asg: &Assignment) -> bool {
        self.chosen.iter().all(|&j| cnf.literal_true(asg, j))
    }

    /// The selection that picks, in each clause, the first literal true
    /// under `asg`; `None` when some clause has none (unsatisfied clause).
    pub fn first_compatible(cnf: &Cnf, asg: &Assignment) -> Option<Self> {
        let mut chosen = BTreeSet::new();
        for i in 1..=cnf.clause_count() {
            let j = (3 * i - 2..=3 * i).find(|&j| cnf.literal_true(asg, j))?;
            chosen.insert(j);
        }
        Some(Self { chosen })
    }
}

/// Lexicographically first satisfying assignment (false before true,
/// variable 1 most significant), or `None` when unsatisfiable.
pub fn sat_brute_force(cnf: &Cnf) -> Result<Option<Assignment>, ReductionError> {
    let l = cnf.var_count();
    if l > SAT_MAX_L {
        return Err(ReductionError::TooLarge {
            l,
            k: cnf.clause_count(),
            max_l: SAT_MAX_L,
            max_k: usize::MAX,
        });
    }
    for mask in 0u64..(1u64 << l) {
        let true_vars: BTreeSet<usize> = (1..=l).filter(|&v| mask >> (l - v) & 1 == 1).collect();
        let asg = Assignment::new(l, true_vars);
        if asg.satisfies(cnf) {
            return Ok(Some(asg));
        }
    }
    Ok(None)
}

/// One contiguous span of the reduction layout.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Zone {
    pub role: &'static str,
    pub index: usize,
    pub block: &'static str,
    /// 1-based inclusive `[start, end]` positions within the permutation.
    pub positions: [usize; 2],
}

/// The JSON layout document emitted by the CLI.
#[derive(Debug, Serialize)]
pub struct LayoutJson {
    pub n: usize,
    pub db: usize,
    pub zones: Vec<Zone>,
}

/// Role of one literal occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiteralRole {
    pub var: usize,
    pub positive: bool,
    pub clause: usize,
    pub slot: ClauseSlot,
}

/// The reduced instance: the permutation, its gadgets, and the layout map.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    cnf: Cnf,
    s_phi: Sequence,
    vars: Vec<Variable>,
    clause_gadgets: Vec<ClauseGadget>,
    lits: Literals,
    zones: Vec<Zone>,
}

/// Builds the reduction permutation for `cnf`.
///
/// Variable gadget `i` sits at offset `31(i-1)`, clause gadget `i` at
/// `31l + 62(i-1)`, and the lock bank at `31l + 62k`. Occurrences are
/// numbered canonically: clause `i` owns `(3i-2, 3i-1, 3i)` as its three
/// slots.
pub fn build_instance(cnf: &Cnf) -> ReductionInstance {
    let l = cnf.var_count();
    let k = cnf.clause_count();
    let m = cnf.literal_count();
    let lits = Literals::new((31 * l + 62 * k) as u32, m);

    let mut vars = Vec::with_capacity(l);
    for i in 1..=l {
        let pos: BTreeSet<usize> = (1..=m)
            .filter(|&j| cnf.literal(j) == Lit::new(i, true))
            .collect();
        let neg: BTreeSet<usize> = (1..=m)
            .filter(|&j| cnf.literal(j) == Lit::new(i, false))
            .collect();
        let var = Variable::new(&pos, &neg, (31 * (i - 1)) as u32, lits)
            .expect("occurrence sets are disjoint by construction");
        vars.push(var);
    }
    let mut clause_gadgets = Vec::with_capacity(k);
    for i in 1..=k {
        let gadget = ClauseGadget::new(
            3 * i - 2,
            3 * i - 1,
            3 * i,
            (31 * l + 62 * (i - 1)) as u32,
            lits,
        )
        .expect("occurrence indices are distinct by construction");
        clause_gadgets.push(gadget);
    }

    let empty = BTreeSet::new();
    let mut elems: Vec<u32> = Vec::with_capacity(31 * l + 98 * k);
    let mut zones = Vec::new();
    let push = |elems: &mut Vec<u32>,
                zones: &mut Vec<Zone>,
                role: &'static str,
                index: usize,
                block: &'static str,
                vals: Vec<u32>| {
        let start = elems.len() + 1;
        elems.extend(vals);
        zones.push(Zone {
            role,
            index,
            block,
            positions: [start, elems.len()],
        });
    };
    for (i, var) in vars.iter().enumerate() {
        push(
            &mut elems,
            &mut zones,
            "trigger",
            i + 1,
            "nu",
            vec![var.trigger()],
        );
    }
    for (i, cl) in clause_gadgets.iter().enumerate() {
        push(
            &mut elems,
            &mut zones,
            "trigger",
            i + 1,
            "gamma",
            vec![cl.trigger()],
        );
    }
    for (i, var) in vars.iter().enumerate() {
        push(&mut elems, &mut zones, "variable", i + 1, "V", var.block());
    }
    for (i, cl) in clause_gadgets.iter().enumerate() {
        push(&mut elems, &mut zones, "clause", i + 1, "Gamma", cl.block());
    }
    for (i, var) in vars.iter().enumerate() {
        push(
            &mut elems,
            &mut zones,
            "variable",
            i + 1,
            "D",
            var.dock().block(),
        );
    }
    for (i, cl) in clause_gadgets.iter().enumerate() {
        push(&mut elems, &mut zones, "clause", i + 1, "Delta", cl.docks());
    }
    push(
        &mut elems,
        &mut zones,
        "literals",
        1,
        "Lambda",
        lits.lambda_block(&empty, &empty)
            .expect("empty sets are disjoint"),
    );

    let s_phi = Sequence::new(elems).expect("the reduction assembles a permutation");
    ReductionInstance {
        cnf: cnf.clone(),
        s_phi,
        vars,
        clause_gadgets,
        lits,
        zones,
    }
}

impl ReductionInstance {
    pub fn cnf(&self) -> &Cnf {
        &self.cnf
    }

    pub fn s_phi(&self) -> &Sequence {
        &self.s_phi
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn clause_gadgets(&self) -> &[ClauseGadget] {
        &self.clause_gadgets
    }

    pub fn literals(&self) -> &Literals {
        &self.lits
    }

    pub fn zones(&self) -> &[Zone] {
        &self.zones
    }

    pub fn layout_json(&self) -> LayoutJson {
        LayoutJson {
            n: self.s_phi.n(),
            db: self.s_phi.breakpoint_count(),
            zones: self.zones.clone(),
        }
    }

    /// Roles of every literal occurrence, indexed by `j - 1`.
    pub fn literal_roles(&self) -> Vec<LiteralRole> {
        (1..=self.cnf.literal_count())
            .map(|j| {
                let lit = self.cnf.literal(j);
                LiteralRole {
                    var: lit.var,
                    positive: lit.positive,
                    clause: (j - 1) / 3 + 1,
                    slot: match (j - 1) % 3 {
                        0 => ClauseSlot::A,
                        1 => ClauseSlot::B,
                        _ => ClauseSlot::C,
                    },
                }
            })
            .collect()
    }

    /// Reassembles the permutation from the layout zones; must reproduce
    /// `s_phi` exactly.
    pub fn rebuild_from_zones(&self) -> Sequence {
        let empty = BTreeSet::new();
        let mut elems = vec![0u32; self.s_phi.n()];
        for zone in &self.zones {
            let vals: Vec<u32> = match (zone.role, zone.block) {
                ("trigger", "nu") => vec![self.vars[zone.index - 1].trigger()],
                ("trigger", "gamma") => vec![self.clause_gadgets[zone.index - 1].trigger()],
                ("variable", "V") => self.vars[zone.index - 1].block(),
                ("variable", "D") => self.vars[zone.index - 1].dock().block(),
                ("clause", "Gamma") => self.clause_gadgets[zone.index - 1].block(),
                ("clause", "Delta") => self.clause_gadgets[zone.index - 1].docks(),
                ("literals", "Lambda") => self
                    .lits
                    .lambda_block(&empty, &empty)
                    .expect("empty sets are disjoint"),
                _ => unreachable!("unknown zone {zone:?}"),
            };
            assert_eq!(vals.len(), zone.positions[1] - zone.positions[0] + 1);
            elems[zone.positions[0] - 1..zone.positions[1]].copy_from_slice(&vals);
        }
        Sequence::new(elems).expect("zones tile the permutation")
    }

    /// Locks opened after assigning variables `1..=r` under `asg`.
    fn opened_after(&self, asg: &Assignment, r: usize) -> BTreeSet<usize> {
        let mut open = BTreeSet::new();
        for (i, var) in self.vars.iter().enumerate().take(r) {
            let opened: &[usize] = if asg.is_true(i + 1) {
                var.pos()
            } else {
                var.neg()
            };
            open.extend(opened.iter().copied());
        }
        open
    }

    /// Landmark after the first `r` variables are assigned: triggers
    /// `r+1..=l` remain, assigned gadgets show their branch residues, and
    /// the chosen occurrence locks are open.
    pub fn assignment_landmark(&self, asg: &Assignment, r: usize) -> Sequence {
        let open = self.opened_after(asg, r);
        let empty = BTreeSet::new();
        let mut elems = Vec::with_capacity(self.s_phi.n());
        for var in self.vars.iter().skip(r) {
            elems.push(var.trigger());
        }
        for cl in &self.clause_gadgets {
            elems.push(cl.trigger());
        }
        for (i, var) in self.vars.iter().enumerate() {
            if i < r {
                elems.extend(if asg.is_true(i + 1) {
                    var.block_true()
                } else {
                    var.block_false()
                });
            } else {
                elems.extend(var.block());
            }
        }
        for cl in &self.clause_gadgets {
            elems.extend(cl.block());
        }
        for var in &self.vars {
            elems.extend(var.dock().block());
        }
        for cl in &self.clause_gadgets {
            elems.extend(cl.docks());
        }
        elems.extend(
            self.lits
                .lambda_block(&open, &empty)
                .expect("opened sets are within range"),
        );
        Sequence::new(elems).expect("landmarks are permutations")
    }

    /// Landmark after the full assignment and the first `t` clause
    /// selections: selected occurrences are tested, their clause gadgets
    /// show the matching residue.
    pub fn selection_landmark(&self, asg: &Assignment, sel: &Selection, t: usize) -> Sequence {
        let l = self.vars.len();
        let mut open = self.opened_after(asg, l);
        let mut tested = BTreeSet::new();
        for i in 1..=t {
            let j = (3 * i - 2..=3 * i)
                .find(|&j| sel.contains(j))
                .expect("selection covers every clause");
            open.remove(&j);
            tested.insert(j);
        }
        let mut elems = Vec::with_capacity(self.s_phi.n());
        for cl in self.clause_gadgets.iter().skip(t) {
            elems.push(cl.trigger());
        }
        for (i, var) in self.vars.iter().enumerate() {
            elems.extend(if asg.is_true(i + 1) {
                var.block_true()
            } else {
                var.block_false()
            });
        }
        for (i, cl) in self.clause_gadgets.iter().enumerate() {
            if i < t {
                elems.extend(cl.resolved(sel.slot(i + 1)));
            } else {
                elems.extend(cl.block());
            }
        }
        for var in &self.vars {
            elems.extend(var.dock().block());
        }
        for cl in &self.clause_gadgets {
            elems.extend(cl.docks());
        }
        elems.extend(
            self.lits
                .lambda_block(&open, &tested)
                .expect("open and tested sets are disjoint"),
        );
        Sequence::new(elems).expect("landmarks are permutations")
    }
}

/// Builds the efficient sorting certificate for a satisfiable instance: the
/// flip path that assigns each variable per `asg`, selects one true literal
/// per clause per `sel`, and finishes to the identity. The path passes
/// through every intermediate landmark and has length exactly `d_b(S)`.
pub fn certify(
    inst: &ReductionInstance,
    asg: &Assignment,
    sel: &Selection,
) -> Result<FlipPath, ReductionError> {
    certify_with(inst, asg, sel, SearchLimits::default().node_budget)
}

/// [`certify`] with an explicit per-hop node budget.
pub fn certify_with(
    inst: &ReductionInstance,
    asg: &Assignment,
    sel: &Selection,
    budget: u64,
) -> Result<FlipPath, ReductionError> {
    if let Some(&j) = sel
        .chosen()
        .iter()
        .find(|&&j| !inst.cnf().literal_true(asg, j))
    {
        return Err(ReductionError::IncompatibleSelection { literal: j });
    }
    let l = inst.cnf().var_count();
    let k = inst.cnf().clause_count();
    let mut landmarks: Vec<(String, Sequence)> = vec![("start".into(), inst.s_phi().clone())];
    for r in 1..=l {
        landmarks.push((format!("assignment[{r}]"), inst.assignment_landmark(asg, r)));
    }
    for t in 1..=k {
        landmarks.push((
            format!("selection[{t}]"),
            inst.selection_landmark(asg, sel, t),
        ));
    }
    landmarks.push(("identity".into(), Sequence::identity(inst.s_phi().n())));

    let mut flips = Vec::new();
    for pair in landmarks.windows(2) {
        let (from_name, from) = &pair[0];
        let (to_name, to) = &pair[1];
        let hop = efficient_path_to(from, to, budget)?.ok_or_else(|| {
            ReductionError::CertificationFailed {
                stage: from_name.clone(),
                next: to_name.clone(),
            }
        })?;
        flips.extend(hop.flips().iter().copied());
    }
    let path = FlipPath::new(inst.s_phi().clone(), flips).expect("hop flips are in 2..=n");
    // landmark chaining must yield one flip per breakpoint
    if !path.is_efficient() || !path.sorts_source() || path.len() != inst.s_phi().breakpoint_count()
    {
        return Err(ReductionError::CertificationFailed {
            stage: "start".into(),
            next: "identity".into(),
        });
    }
    Ok(path)
}

/// Desk-scale guards for [`check_theorem`].
#[derive(Debug, Clone, Copy)]
pub struct TheoremGuard {
    pub max_l: usize,
    pub max_k: usize,
    pub node_budget: u64,
}

impl Default for TheoremGuard {
    fn default() -> Self {
        Self {
            max_l: 4,
            max_k: 3,
            node_budget: 10_000_000,
        }
    }
}

/// Outcome of one equivalence check.
#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub n: usize,
    pub db: usize,
    pub sortable: bool,
    pub satisfiable: bool,
    /// Certificate length when satisfiable (always `16l + 50k`).
    pub certificate_len: Option<usize>,
    pub nodes_expanded: u64,
}

/// Decides efficient sortability of the reduced permutation and
/// satisfiability of the formula independently, and requires them to agree;
/// on satisfiable inputs additionally cross-checks the certificate.
pub fn check_theorem(cnf: &Cnf) -> Result<TheoremReport, ReductionError> {
    check_theorem_with(cnf, &TheoremGuard::default())
}

/// [`check_theorem`] with explicit guards.
pub fn check_theorem_with(
    cnf: &Cnf,
    guard: &TheoremGuard,
) -> Result<TheoremReport, ReductionError> {
    let (l, k) = (cnf.var_count(), cnf.clause_count());
    if l > guard.max_l || k > guard.max_k {
        return Err(ReductionError::TooLarge {
            l,
            k,
            max_l: guard.max_l,
            max_k: guard.max_k,
        });
    }
    let inst = build_instance(cnf);
    let decision = decide_with(inst.s_phi(), None, guard.node_budget)?;
    let sortable = decision.path.is_some();
    let satisfiable_asg = sat_brute_force(cnf)?;
    let satisfiable = satisfiable_asg.is_some();
    if sortable != satisfiable {
        return Err(ReductionError::EquivalenceViolation {
            sortable,
            satisfiable,
        });
    }
    let certificate_len = match satisfiable_asg {
        Some(asg) => {
            let sel = Selection::first_compatible(cnf, &asg)
                .expect("a satisfying assignment admits a compatible selection");
            let cert = certify_with(&inst, &asg, &sel, guard.node_budget)?;
            Some(cert.len())
        }
        None => None,
    };
    Ok(TheoremReport {
        n: inst.s_phi().n(),
        db: inst.s_phi().breakpoint_count(),
        sortable,
        satisfiable,
        certificate_len,
        nodes_expanded: decision.stats.nodes_expanded,
    })
}
