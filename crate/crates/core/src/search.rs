//! Exhaustive and heuristic search over efficient flips.
//!
//! Efficient flips remove exactly one breakpoint, so every efficient path
//! from `S` has length at most `d_b(S)` and the efficient-flip graph below a
//! state is a DAG with branching factor at most two. The searches here
//! exploit that: depth-first enumeration with memoisation of states proven
//! dead is complete, and a path to the identity, when one exists, has length
//! exactly `d_b(S)`.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::perm::{flip_delta_raw, flip_in_place, FlipPath, Sequence};

/// Desk-scale guards and the expansion budget for unbounded searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    /// Node expansions allowed before a search aborts with
    /// [`SearchError::BudgetExceeded`].
    pub node_budget: u64,
    /// Largest `n` accepted by [`exact_distance_with`].
    pub exact_max_n: usize,
    /// Largest `n` accepted by [`diameter_with`].
    pub diameter_max_n: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            node_budget: 10_000_000,
            exact_max_n: 12,
            diameter_max_n: 10,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("input size {n} outside the supported {what} range 1..={max}")]
    TooLarge {
        what: &'static str,
        n: usize,
        max: usize,
    },
    #[error("funnel verification requires a start sequence different from the identity")]
    StartIsIdentity,
    #[error("search exceeded the node budget of {budget} expansions")]
    BudgetExceeded { budget: u64 },
}

/// Counters from one search invocation.
#[derive(Debug, Clone)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub max_depth: usize,
    pub elapsed: Duration,
}

/// Outcome of an efficient-sortability decision.
#[derive(Debug, Clone)]
pub struct Decision {
    /// An efficient path to the identity, absent when none exists.
    pub path: Option<FlipPath>,
    pub stats: SearchStats,
}

/// Reorders the candidate efficient flips in place; the first candidate is
/// explored first.
pub type BranchOrder<'a> = &'a dyn Fn(&Sequence, &mut Vec<usize>);

/// Depth-first search over efficient flips towards a fixed goal.
///
/// States proven unable to reach the goal are memoised, which is sound
/// because reachability along efficient flips depends on the state alone.
struct EfficientDfs<'a> {
    /// `None` targets the identity, otherwise a specific sequence.
    goal: Option<&'a Sequence>,
    budget: u64,
    nodes: u64,
    max_depth: usize,
    dead: HashSet<Sequence>,
    order: Option<BranchOrder<'a>>,
}

impl<'a> EfficientDfs<'a> {
    fn new(goal: Option<&'a Sequence>, budget: u64, order: Option<BranchOrder<'a>>) -> Self {
        Self {
            goal,
            budget,
            nodes: 0,
            max_depth: 0,
            dead: HashSet::new(),
            order,
        }
    }

    fn run(&mut self, start: &Sequence) -> Result<Option<Vec<usize>>, SearchError> {
        let depth = match self.goal {
            None => start.breakpoint_count(),
            Some(goal) => {
                let (ds, dg) = (start.breakpoint_count(), goal.breakpoint_count());
                if ds < dg {
                    return Ok(None);
                }
                ds - dg
            }
        };
        let mut path = Vec::with_capacity(depth);
        if self.dfs(start, depth, &mut path)? {
            Ok(Some(path))
        } else {
            Ok(None)
        }
    }

    fn dfs(
        &mut self,
        state: &Sequence,
        remaining: usize,
        path: &mut Vec<usize>,
    ) -> Result<bool, SearchError> {
        if remaining == 0 {
            // d_b(state) equals d_b(goal) here, so equality is possible
            return Ok(match self.goal {
                None => {
                    debug_assert!(state.is_identity());
                    true
                }
                Some(goal) => state == goal,
            });
        }
        if self.dead.contains(state) {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SearchError::BudgetExceeded {
                budget: self.budget,
            });
        }
        self.max_depth = self.max_depth.max(path.len() + 1);
        let mut candidates = state.efficient_flips();
        if let Some(order) = self.order {
            order(state, &mut candidates);
        }
        for r in candidates {
            let child = state.flip(r).expect("candidate flip is in range");
            path.push(r);
            if self.dfs(&child, remaining - 1, path)? {
                return Ok(true);
            }
            path.pop();
        }
        self.dead.insert(state.clone());
        Ok(false)
    }
}

/// Decides efficient sortability: returns an efficient path of length
/// exactly `d_b(S)` ending at the identity, or `None` when no efficient
/// path exists. Deterministic; branches are explored by ascending flip
/// length.
pub fn decide_efficiently_sortable(s: &Sequence) -> Option<FlipPath> {
    decide_with(s, None, u64::MAX)
        .expect("unbounded decision cannot exhaust its budget")
        .path
}

/// [`decide_efficiently_sortable`] with an explicit branch order and node
/// budget.
pub fn decide_with(
    s: &Sequence,
    order: Option<BranchOrder<'_>>,
    budget: u64,
) -> Result<Decision, SearchError> {
    let started = Instant::now();
    let mut dfs = EfficientDfs::new(None, budget, order);
    let flips = dfs.run(s)?;
    Ok(Decision {
        path: flips.map(|f| FlipPath::new(s.clone(), f).expect("search flips are in 2..=n")),
        stats: SearchStats {
            nodes_expanded: dfs.nodes,
            max_depth: dfs.max_depth,
            elapsed: started.elapsed(),
        },
    })
}

/// Finds an efficient path from `s` to the specific state `goal`, if one
/// exists. Both sequences must have the same length.
pub fn efficient_path_to(
    s: &Sequence,
    goal: &Sequence,
    budget: u64,
) -> Result<Option<FlipPath>, SearchError> {
    assert_eq!(s.n(), goal.n(), "path endpoints must have equal length");
    let mut dfs = EfficientDfs::new(Some(goal), budget, None);
    let flips = dfs.run(s)?;
    Ok(flips.map(|f| FlipPath::new(s.clone(), f).expect("search flips are in 2..=n")))
}

/// Result of verifying the funnel relation `S ==> T` by exhaustive
/// efficient-path enumeration.
#[derive(Debug, Clone)]
pub struct FunnelReport {
    /// True iff both funnel conditions hold.
    pub holds: bool,
    /// Targets with no efficient path from `S` (condition 1 failures).
    pub unreachable_targets: Vec<Sequence>,
    /// An efficient path from `S` to the identity avoiding every target
    /// (a condition 2 failure), if one exists.
    pub leaking_path: Option<FlipPath>,
    pub states_explored: u64,
}

/// Verifies `S ==> targets` with the default node budget.
///
/// Condition 1: every target is reachable from `S` along efficient flips
/// (the reachability search expands through target states). Condition 2:
/// no efficient path from `S` reaches the identity while avoiding all
/// targets; targets absorb, and an identity listed as a target counts as
/// passing through a target at the endpoint.
pub fn verify_funnel(s: &Sequence, targets: &[Sequence]) -> Result<FunnelReport, SearchError> {
    verify_funnel_with(s, targets, SearchLimits::default().node_budget)
}

/// [`verify_funnel`] with an explicit node budget.
pub fn verify_funnel_with(
    s: &Sequence,
    targets: &[Sequence],
    budget: u64,
) -> Result<FunnelReport, SearchError> {
    if s.is_identity() {
        return Err(SearchError::StartIsIdentity);
    }
    let target_set: HashSet<&Sequence> = targets.iter().collect();
    debug_assert_eq!(target_set.len(), targets.len(), "targets must be distinct");

    // condition 1: plain reachability, targets are ordinary states
    let mut visited: HashSet<Sequence> = HashSet::new();
    let mut stack = vec![s.clone()];
    visited.insert(s.clone());
    let mut explored: u64 = 0;
    let mut remaining_targets = targets.iter().filter(|t| *t != s).count();
    while let Some(state) = stack.pop() {
        if remaining_targets == 0 {
            break;
        }
        explored += 1;
        if explored > budget {
            return Err(SearchError::BudgetExceeded { budget });
        }
        for r in state.efficient_flips() {
            let child = state.flip(r).expect("candidate flip is in range");
            if !visited.contains(&child) {
                if target_set.contains(&child) {
                    remaining_targets -= 1;
                }
                visited.insert(child.clone());
                stack.push(child);
            }
        }
    }
    let unreachable_targets: Vec<Sequence> = targets
        .iter()
        .filter(|t| !visited.contains(*t))
        .cloned()
        .collect();

    // condition 2: depth-first leak search with absorbing targets
    let mut leak = LeakDfs {
        targets: &target_set,
        budget,
        explored,
        leak_free: HashSet::new(),
    };
    let mut path = Vec::new();
    let leaking_path = if leak.dfs(s, &mut path)? {
        Some(FlipPath::new(s.clone(), path).expect("search flips are in 2..=n"))
    } else {
        None
    };

    Ok(FunnelReport {
        holds: unreachable_targets.is_empty() && leaking_path.is_none(),
        unreachable_targets,
        leaking_path,
        states_explored: leak.explored,
    })
}

struct LeakDfs<'a> {
    targets: &'a HashSet<&'a Sequence>,
    budget: u64,
    explored: u64,
    leak_free: HashSet<Sequence>,
}

impl LeakDfs<'_> {
    /// True iff an efficient path from `state` reaches the identity without
    /// passing through a target; `path` holds the witness flips on success.
    fn dfs(&mut self, state: &Sequence, path: &mut Vec<usize>) -> Result<bool, SearchError> {
        if self.targets.contains(state) {
            return Ok(false);
        }
        if state.is_identity() {
            return Ok(true);
        }
        if self.leak_free.contains(state) {
            return Ok(false);
        }
        self.explored += 1;
        if self.explored > self.budget {
            return Err(SearchError::BudgetExceeded {
                budget: self.budget,
            });
        }
        for r in state.efficient_flips() {
            let child = state.flip(r).expect("candidate flip is in range");
            path.push(r);
            if self.dfs(&child, path)? {
                return Ok(true);
            }
            path.pop();
        }
        self.leak_free.insert(state.clone());
        Ok(false)
    }
}

/// Minimal flip count to the identity, with a witness path.
#[derive(Debug, Clone)]
pub struct DistanceResult {
    pub distance: usize,
    pub witness: FlipPath,
}

/// Exact sorting distance by iterative-deepening A* with the admissible
/// breakpoint-count heuristic, under the default `n <= 12` guard.
pub fn exact_distance(s: &Sequence) -> Result<DistanceResult, SearchError> {
    exact_distance_with(s, &SearchLimits::default())
}

/// [`exact_distance`] with explicit limits.
pub fn exact_distance_with(
    s: &Sequence,
    limits: &SearchLimits,
) -> Result<DistanceResult, SearchError> {
    if s.n() > limits.exact_max_n {
        return Err(SearchError::TooLarge {
            what: "exact-distance",
            n: s.n(),
            max: limits.exact_max_n,
        });
    }
    if s.is_identity() {
        return Ok(DistanceResult {
            distance: 0,
            witness: FlipPath::empty(s.clone()),
        });
    }
    let mut elems = s.elems().to_vec();
    let db = s.breakpoint_count();
    let mut bound = db;
    loop {
        let mut path = Vec::new();
        match ida(&mut elems, db, 0, bound, 0, &mut path) {
            IdaOutcome::Found => {
                let witness = FlipPath::new(s.clone(), path).expect("flips are in 2..=n");
                debug_assert!(witness.sorts_source());
                return Ok(DistanceResult {
                    distance: bound,
                    witness,
                });
            }
            IdaOutcome::Min(next) => {
                debug_assert!(next > bound, "every permutation is sortable");
                bound = next;
            }
        }
    }
}

enum IdaOutcome {
    Found,
    Min(usize),
}

fn ida(
    elems: &mut Vec<u32>,
    db: usize,
    g: usize,
    bound: usize,
    last: usize,
    path: &mut Vec<usize>,
) -> IdaOutcome {
    // d_b is a valid lower bound: one flip changes it by at most one
    let f = g + db;
    if f > bound {
        return IdaOutcome::Min(f);
    }
    if db == 0 {
        return IdaOutcome::Found;
    }
    let n = elems.len();
    // breakpoint-reducing flips first, then ascending length; skipping the
    // previous flip length avoids trivially undoing a move
    let mut moves: Vec<(i32, usize)> = (2..=n)
        .filter(|&r| r != last)
        .map(|r| (flip_delta_raw(elems, r), r))
        .collect();
    moves.sort_unstable();
    let mut min_next = usize::MAX;
    for (delta, r) in moves {
        flip_in_place(elems, r);
        path.push(r);
        match ida(elems, (db as i32 + delta) as usize, g + 1, bound, r, path) {
            IdaOutcome::Found => return IdaOutcome::Found,
            IdaOutcome::Min(next) => min_next = min_next.min(next),
        }
        path.pop();
        flip_in_place(elems, r);
    }
    IdaOutcome::Min(min_next)
}

/// Lehmer rank of a permutation in the factorial number system; the
/// identity ranks 0.
pub fn permutation_rank(s: &Sequence) -> u64 {
    let e = s.elems();
    let n = e.len();
    let mut rank: u64 = 0;
    for i in 0..n {
        let smaller_right = e[i + 1..].iter().filter(|&&v| v < e[i]).count() as u64;
        rank = rank * (n - i) as u64 + smaller_right;
    }
    rank
}

/// Inverse of [`permutation_rank`].
pub fn permutation_unrank(n: usize, mut rank: u64) -> Sequence {
    let mut digits = vec![0usize; n];
    for i in (0..n).rev() {
        let base = (n - i) as u64;
        digits[i] = (rank % base) as usize;
        rank /= base;
    }
    let mut pool: Vec<u32> = (1..=n as u32).collect();
    let elems = digits
        .into_iter()
        .map(|d| pool.remove(d))
        .collect::<Vec<_>>();
    Sequence::new(elems).expect("unrank produces a permutation")
}

/// Sorting distance of every permutation of `1..=n`, indexed by Lehmer
/// rank, by breadth-first search from the identity. Flips are involutions,
/// so distances from the identity equal sorting distances.
pub fn distance_table(n: usize) -> Result<Vec<u8>, SearchError> {
    distance_table_with(n, &SearchLimits::default())
}

fn distance_table_with(n: usize, limits: &SearchLimits) -> Result<Vec<u8>, SearchError> {
    if n < 1 || n > limits.diameter_max_n {
        return Err(SearchError::TooLarge {
            what: "diameter",
            n,
            max: limits.diameter_max_n,
        });
    }
    let total: u64 = (1..=n as u64).product();
    let mut dist = vec![u8::MAX; total as usize];
    dist[0] = 0;
    let mut frontier: Vec<u64> = vec![0];
    let mut d: u8 = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &rank in &frontier {
            let seq = permutation_unrank(n, rank);
            let mut elems = seq.elems().to_vec();
            for r in 2..=n {
                flip_in_place(&mut elems, r);
                let child =
                    Sequence::new(elems.clone()).expect("flip of a permutation is a permutation");
                let crank = permutation_rank(&child) as usize;
                if dist[crank] == u8::MAX {
                    dist[crank] = d + 1;
                    next.push(crank as u64);
                }
                flip_in_place(&mut elems, r);
            }
        }
        d += 1;
        frontier = next;
    }
    Ok(dist)
}

/// `f(n)`: the maximum sorting distance over all permutations of `1..=n`
/// (the pancake-network diameter), under the default `n <= 10` guard.
pub fn diameter(n: usize) -> Result<usize, SearchError> {
    diameter_with(n, &SearchLimits::default())
}

/// [`diameter`] with explicit limits.
pub fn diameter_with(n: usize, limits: &SearchLimits) -> Result<usize, SearchError> {
    let table = distance_table_with(n, limits)?;
    Ok(table.iter().copied().max().unwrap_or(0) as usize)
}

/// Deterministic heuristic sort: takes the largest efficient flip when one
/// exists, otherwise brings the largest misplaced element to the head and
/// then down to its place. Always terminates with at most `2n` flips.
pub fn greedy_sort(s: &Sequence) -> FlipPath {
    let mut cur = s.clone();
    let mut flips = Vec::new();
    while !cur.is_identity() {
        if let Some(&r) = cur.efficient_flips().last() {
            cur = cur.flip(r).expect("candidate flip is in range");
            flips.push(r);
            continue;
        }
        let elems = cur.elems();
        let k = (1..=cur.n())
            .rev()
            .find(|&v| elems[v - 1] != v as u32)
            .expect("non-identity sequence has a misplaced element");
        let pos = elems
            .iter()
            .position(|&v| v == k as u32)
            .expect("permutation")
            + 1;
        if pos > 1 {
            cur = cur.flip(pos).expect("position is in range");
            flips.push(pos);
        }
        cur = cur.flip(k).expect("value is in range");
        flips.push(k);
    }
    FlipPath::new(s.clone(), flips).expect("greedy flips are in 2..=n")
}

/// JSON trace of a flip path, the wire format emitted by the CLI.
#[derive(Debug, Serialize)]
pub struct TraceJson {
    pub source: Vec<u32>,
    pub flips: Vec<usize>,
    pub efficient: bool,
    pub db_trace: Vec<usize>,
    pub stats: TraceStats,
}

#[derive(Debug, Serialize)]
pub struct TraceStats {
    pub nodes: u64,
    pub seconds: f64,
}

impl TraceJson {
    pub fn new(path: &FlipPath, nodes: u64, elapsed: Duration) -> Self {
        Self {
            source: path.source().elems().to_vec(),
            flips: path.flips().to_vec(),
            efficient: path.is_efficient(),
            db_trace: path.db_trace(),
            stats: TraceStats {
                nodes,
                seconds: elapsed.as_secs_f64(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::{HashSet, VecDeque};

    use super::*;
    use crate::perm::Sequence;

    fn seq(v: &[u32]) -> Sequence {
        Sequence::new(v.to_vec()).unwrap()
    }

    fn factorial(n: usize) -> u64 {
        (1..=n as u64).product()
    }

    fn all_perms(n: usize) -> impl Iterator<Item = Sequence> {
        (0..factorial(n)).map(move |r| permutation_unrank(n, r))
    }

    /// Independent efficient-sortability oracle: plain recursion over the
    /// efficient-flip tree, no memoisation, no path bookkeeping.
    fn naive_efficiently_sortable(s: &Sequence) -> bool {
        if s.is_identity() {
            return true;
        }
        s.efficient_flips()
            .into_iter()
            .any(|r| naive_efficiently_sortable(&s.flip(r).unwrap()))
    }

    /// Independent distance oracle: breadth-first search over all flips.
    fn bfs_distance(s: &Sequence) -> usize {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(s.clone());
        queue.push_back((s.clone(), 0));
        while let Some((state, d)) = queue.pop_front() {
            if state.is_identity() {
                return d;
            }
            for r in 2..=state.n() {
                let child = state.flip(r).unwrap();
                if seen.insert(child.clone()) {
                    queue.push_back((child, d + 1));
                }
            }
        }
        unreachable!("every permutation sorts")
    }

    #[test]
    fn decide_figure_one_cases() {
        let path = decide_efficiently_sortable(&seq(&[5, 2, 3, 1, 4])).unwrap();
        assert_eq!(path.len(), 4);
        assert_eq!(path.flips(), &[5, 4, 2, 3]);
        assert!(path.is_efficient() && path.sorts_source());

        assert!(decide_efficiently_sortable(&seq(&[5, 2, 3, 4, 1])).is_none());

        let empty = decide_efficiently_sortable(&Sequence::identity(4)).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn decide_matches_naive_recursion_exhaustively() {
        for n in 1..=7 {
            for s in all_perms(n) {
                let decided = decide_efficiently_sortable(&s);
                assert_eq!(decided.is_some(), naive_efficiently_sortable(&s), "{s:?}");
                if let Some(path) = decided {
                    assert!(path.is_efficient());
                    assert!(path.sorts_source());
                    assert_eq!(path.len(), s.breakpoint_count());
                }
            }
        }
    }

    #[test]
    fn decide_respects_branch_order() {
        // default ascending order explores the deadlock branch first and
        // backtracks; reversed order goes straight down the surviving
        // branch, expanding strictly fewer nodes on the way
        let s = seq(&[5, 2, 3, 1, 4]);
        let ascending = decide_with(&s, None, u64::MAX).unwrap();
        let reversed: BranchOrder = &|_: &Sequence, c: &mut Vec<usize>| c.reverse();
        let descending = decide_with(&s, Some(reversed), u64::MAX).unwrap();
        assert_eq!(ascending.path.unwrap().flips(), &[5, 4, 2, 3]);
        assert_eq!(descending.path.unwrap().flips(), &[5, 4, 2, 3]);
        assert!(
            descending.stats.nodes_expanded < ascending.stats.nodes_expanded,
            "hint should skip the dead branch: {} vs {}",
            descending.stats.nodes_expanded,
            ascending.stats.nodes_expanded
        );
    }

    #[test]
    fn decide_budget_exhaustion() {
        let err = decide_with(&seq(&[5, 2, 3, 1, 4]), None, 0).unwrap_err();
        assert_eq!(err, SearchError::BudgetExceeded { budget: 0 });
    }

    #[test]
    fn efficient_path_to_specific_goal() {
        let s = seq(&[10, 7, 1, 2, 9, 8, 5, 6, 4, 3, 11, 12, 13]);
        let goal = seq(&[7, 1, 2, 3, 4, 6, 5, 8, 9, 10, 11, 12, 13]);
        let path = efficient_path_to(&s, &goal, u64::MAX).unwrap().unwrap();
        assert!(path.is_efficient());
        assert_eq!(path.final_state(), goal);
        // unreachable goal: higher breakpoint count than the start
        let unreachable = efficient_path_to(&goal, &s, u64::MAX).unwrap();
        assert!(unreachable.is_none());
    }

    #[test]
    fn funnel_rejects_identity_start() {
        let err = verify_funnel(&Sequence::identity(3), &[]).unwrap_err();
        assert_eq!(err, SearchError::StartIsIdentity);
    }

    #[test]
    fn funnel_on_deadlock_with_no_targets_holds() {
        let report = verify_funnel(&seq(&[1, 3, 2, 5, 4]), &[]).unwrap();
        assert!(report.holds);
        assert!(report.unreachable_targets.is_empty());
        assert!(report.leaking_path.is_none());
    }

    #[test]
    fn funnel_on_sortable_state_with_no_targets_leaks() {
        let report = verify_funnel(&seq(&[5, 2, 3, 1, 4]), &[]).unwrap();
        assert!(!report.holds);
        let leak = report.leaking_path.unwrap();
        assert_eq!(leak.len(), 4);
        assert!(leak.is_efficient());
        assert!(leak.sorts_source());
    }

    #[test]
    fn funnel_lock_opening_instance() {
        let s = seq(&[10, 7, 1, 2, 9, 8, 5, 6, 4, 3, 11, 12, 13]);
        let target = seq(&[7, 1, 2, 3, 4, 6, 5, 8, 9, 10, 11, 12, 13]);
        let report = verify_funnel(&s, std::slice::from_ref(&target)).unwrap();
        assert!(report.holds, "{report:?}");
        assert!(report.states_explored > 0);
    }

    #[test]
    fn funnel_restates_sortability_exhaustively() {
        // S ==> {identity} iff efficiently sortable; S ==> {} iff not
        for n in 1..=5 {
            let identity = Sequence::identity(n);
            for s in all_perms(n) {
                if s.is_identity() {
                    continue;
                }
                let sortable = decide_efficiently_sortable(&s).is_some();
                let to_identity = verify_funnel(&s, std::slice::from_ref(&identity)).unwrap();
                assert_eq!(to_identity.holds, sortable, "{s:?}");
                let to_nothing = verify_funnel(&s, &[]).unwrap();
                assert_eq!(to_nothing.holds, !sortable, "{s:?}");
            }
        }
    }

    #[test]
    fn funnel_report_invariant() {
        let report = verify_funnel(&seq(&[2, 1]), &[Sequence::identity(2)]).unwrap();
        assert_eq!(
            report.holds,
            report.unreachable_targets.is_empty() && report.leaking_path.is_none()
        );
        assert!(report.holds);
    }

    #[test]
    fn exact_distance_examples() {
        assert_eq!(exact_distance(&Sequence::identity(6)).unwrap().distance, 0);
        let res = exact_distance(&seq(&[5, 2, 3, 1, 4])).unwrap();
        assert_eq!(res.distance, 4);
        assert!(res.witness.sorts_source());

        // db = 3 but no efficient path exists, so the distance exceeds db
        let hard = seq(&[5, 2, 3, 4, 1]);
        let res = exact_distance(&hard).unwrap();
        assert_eq!(res.distance, bfs_distance(&hard));
        assert!(res.distance >= 4);
        assert_eq!(res.witness.len(), res.distance);
        assert!(res.witness.sorts_source());
    }

    #[test]
    fn exact_distance_guard() {
        let s = Sequence::identity(13);
        assert!(matches!(
            exact_distance(&s),
            Err(SearchError::TooLarge { .. })
        ));
        let relaxed = SearchLimits {
            exact_max_n: 13,
            ..SearchLimits::default()
        };
        assert_eq!(exact_distance_with(&s, &relaxed).unwrap().distance, 0);
    }

    #[test]
    fn exact_distance_matches_bfs_oracle_exhaustively() {
        for n in 1..=5 {
            for s in all_perms(n) {
                let res = exact_distance(&s).unwrap();
                assert_eq!(res.distance, bfs_distance(&s), "{s:?}");
                assert!(res.distance >= s.breakpoint_count());
            }
        }
    }

    #[test]
    fn distance_is_db_iff_efficiently_sortable() {
        for s in all_perms(5) {
            let res = exact_distance(&s).unwrap();
            let sortable = decide_efficiently_sortable(&s).is_some();
            assert_eq!(res.distance == s.breakpoint_count(), sortable, "{s:?}");
        }
    }

    #[test]
    fn rank_round_trip() {
        assert_eq!(permutation_rank(&Sequence::identity(5)), 0);
        for n in 1..=6 {
            for r in 0..factorial(n) {
                assert_eq!(permutation_rank(&permutation_unrank(n, r)), r);
            }
        }
    }

    #[test]
    fn diameter_small_values() {
        assert_eq!(diameter(1).unwrap(), 0);
        assert_eq!(diameter(2).unwrap(), 1);
        assert!(matches!(diameter(0), Err(SearchError::TooLarge { .. })));
        assert!(matches!(diameter(11), Err(SearchError::TooLarge { .. })));
    }

    #[test]
    fn diameter_seven_matches_per_permutation_distances() {
        let worst = all_perms(7)
            .map(|s| exact_distance(&s).unwrap().distance)
            .max()
            .unwrap();
        assert_eq!(diameter(7).unwrap(), worst);
    }

    #[test]
    fn diameter_is_monotone() {
        let values: Vec<usize> = (1..=7).map(|n| diameter(n).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
    }

    #[test]
    fn distance_table_matches_exact_distance() {
        for n in 1..=5 {
            let table = distance_table(n).unwrap();
            for s in all_perms(n) {
                let expected = exact_distance(&s).unwrap().distance;
                assert_eq!(table[permutation_rank(&s) as usize] as usize, expected);
            }
            let max = table.iter().copied().max().unwrap() as usize;
            assert_eq!(max, diameter(n).unwrap());
        }
    }

    #[test]
    fn greedy_examples() {
        assert!(greedy_sort(&Sequence::identity(3)).is_empty());
        assert_eq!(greedy_sort(&seq(&[2, 1])).flips(), &[2]);
        assert_eq!(greedy_sort(&seq(&[5, 2, 3, 1, 4])).len(), 4);
    }

    #[test]
    fn greedy_sorts_everything_within_two_n() {
        for n in 1..=7 {
            for s in all_perms(n) {
                let path = greedy_sort(&s);
                assert!(path.sorts_source(), "{s:?}");
                assert!(path.len() <= 2 * n, "{s:?} took {} flips", path.len());
            }
        }
    }

    #[test]
    fn greedy_handles_larger_inputs() {
        // fixed awkward shape: descending evens then ascending odds
        let mut v: Vec<u32> = (1..=40).filter(|v| v % 2 == 0).rev().collect();
        v.extend((1..=40).filter(|v| v % 2 == 1));
        let s = Sequence::new(v).unwrap();
        let path = greedy_sort(&s);
        assert!(path.sorts_source());
        assert!(path.len() <= 80);

        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(23);
        for _ in 0..50 {
            let n = rng.random_range(8..=64);
            let mut v: Vec<u32> = (1..=n as u32).collect();
            v.shuffle(&mut rng);
            let s = Sequence::new(v).unwrap();
            let path = greedy_sort(&s);
            assert!(path.sorts_source());
            assert!(path.len() <= 2 * n, "n={n} took {} flips", path.len());
        }
    }

    #[test]
    fn trace_json_shape() {
        let path = decide_efficiently_sortable(&seq(&[5, 2, 3, 1, 4])).unwrap();
        let trace = TraceJson::new(&path, 7, Duration::from_millis(2));
        let text = serde_json::to_string(&trace).unwrap();
        // field order is part of the wire format
        let source_at = text.find("\"source\"").unwrap();
        let flips_at = text.find("\"flips\"").unwrap();
        let efficient_at = text.find("\"efficient\"").unwrap();
        let db_at = text.find("\"db_trace\"").unwrap();
        let stats_at = text.find("\"stats\"").unwrap();
        assert!(source_at < flips_at && flips_at < efficient_at);
        assert!(efficient_at < db_at && db_at < stats_at);
        assert!(text.contains("\"nodes\":7"));
    }
}
