//! Exact-degree red-edge search.
//!
//! Variables are the colourable board edges. Colouring an edge adds one
//! knight move at each of the four squares of its cross, so a square's
//! degree in the realized graph is the number of red edges among its
//! colourable surround edges. The search finds every edge set in which each
//! square reaches its target degree exactly.
//!
//! Each square keeps a red counter and an undecided counter. A square whose
//! red count reaches its target forces its remaining edges off; a square
//! whose red plus undecided count equals its target forces them on. The
//! search branches on the first undecided edge of the unfinished square with
//! the fewest undecided edges.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::cross::{CrossTable, EdgeId, SquareId};
use crate::error::{Error, Result};
use crate::par;

/// One branching decision: edge id and whether it was coloured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Decision {
    pub edge: EdgeId,
    pub red: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EdgeState {
    Open,
    Red,
    Off,
}

/// Mutable search state with an undo trail.
#[derive(Clone)]
pub(crate) struct SearchState<'a> {
    table: &'a CrossTable,
    targets: &'a [u8],
    state: Vec<EdgeState>,
    red: Vec<u8>,
    open: Vec<u8>,
    trail: Vec<EdgeId>,
    queue: Vec<SquareId>,
}

impl<'a> SearchState<'a> {
    pub(crate) fn new(table: &'a CrossTable, targets: &'a [u8]) -> Option<Self> {
        debug_assert_eq!(targets.len(), table.squares().len());
        let state = (0..table.edges().len() as EdgeId)
            .map(|e| {
                if table.is_colorable(e) {
                    EdgeState::Open
                } else {
                    EdgeState::Off
                }
            })
            .collect();
        let open = (0..table.squares().len() as SquareId)
            .map(|s| table.square_edges(s).len() as u8)
            .collect();
        let mut st = SearchState {
            table,
            targets,
            state,
            red: vec![0; targets.len()],
            open,
            trail: Vec::new(),
            queue: (0..targets.len() as SquareId).collect(),
        };
        st.propagate().then_some(st)
    }

    fn feasible(&self, s: SquareId) -> bool {
        let s = s as usize;
        let t = self.targets[s];
        self.red[s] <= t && self.red[s] + self.open[s] >= t
    }

    fn assign(&mut self, e: EdgeId, red: bool) -> bool {
        debug_assert_eq!(self.state[e as usize], EdgeState::Open);
        self.state[e as usize] = if red { EdgeState::Red } else { EdgeState::Off };
        self.trail.push(e);
        let mut ok = true;
        for s in self.table.cross_squares(e).expect("colourable edge") {
            let si = s as usize;
            self.open[si] -= 1;
            if red {
                self.red[si] += 1;
            }
            ok &= self.feasible(s);
            self.queue.push(s);
        }
        ok
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().unwrap();
            let red = self.state[e as usize] == EdgeState::Red;
            self.state[e as usize] = EdgeState::Open;
            for s in self.table.cross_squares(e).unwrap() {
                let si = s as usize;
                self.open[si] += 1;
                if red {
                    self.red[si] -= 1;
                }
            }
        }
        self.queue.clear();
    }

    fn propagate(&mut self) -> bool {
        while let Some(s) = self.queue.pop() {
            if !self.feasible(s) {
                self.queue.clear();
                return false;
            }
            let si = s as usize;
            if self.open[si] == 0 {
                continue;
            }
            let force = if self.red[si] == self.targets[si] {
                false
            } else if self.red[si] + self.open[si] == self.targets[si] {
                true
            } else {
                continue;
            };
            let table = self.table;
            for &e in table.square_edges(s) {
                if self.state[e as usize] == EdgeState::Open && !self.assign(e, force) {
                    self.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    /// Applies a decision and propagates. On failure the state is left dirty;
    /// callers undo to a mark taken beforehand.
    pub(crate) fn decide(&mut self, d: Decision) -> bool {
        if self.state[d.edge as usize] != EdgeState::Open {
            return false;
        }
        self.assign(d.edge, d.red) && self.propagate()
    }

    /// The branching edge, or `None` when every square is satisfied.
    fn choose(&self) -> Option<EdgeId> {
        let mut best: Option<(u8, SquareId)> = None;
        for s in 0..self.targets.len() {
            if self.red[s] < self.targets[s] {
                let key = self.open[s];
                if best.is_none_or(|(k, _)| key < k) {
                    best = Some((key, s as SquareId));
                }
            }
        }
        let (_, s) = best?;
        self.table
            .square_edges(s)
            .iter()
            .copied()
            .find(|&e| self.state[e as usize] == EdgeState::Open)
    }

    fn reds(&self) -> Vec<EdgeId> {
        (0..self.state.len() as EdgeId)
            .filter(|&e| self.state[e as usize] == EdgeState::Red)
            .collect()
    }
}

/// Outcome of a subtree run.
pub(crate) enum SubtreeResult {
    Done { solutions: Vec<Vec<EdgeId>> },
    Aborted,
}

/// Shared node counter enforcing a global budget.
pub(crate) struct NodeBudget {
    used: AtomicU64,
    limit: Option<u64>,
    stop: AtomicBool,
}

impl NodeBudget {
    pub(crate) fn new(limit: Option<u64>) -> Self {
        NodeBudget {
            used: AtomicU64::new(0),
            limit,
            stop: AtomicBool::new(false),
        }
    }

    fn tick(&self) -> bool {
        let used = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        match self.limit {
            Some(limit) if used > limit => {
                self.stop.store(true, Ordering::Relaxed);
                false
            }
            _ => !self.stop.load(Ordering::Relaxed),
        }
    }

    pub(crate) fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

/// Lists the decision prefixes at `depth` (or shallower, where a branch
/// closes early) in depth-first order. Infeasible prefixes are dropped.
pub(crate) fn frontier(table: &CrossTable, targets: &[u8], depth: usize) -> Vec<Vec<Decision>> {
    let Some(mut st) = SearchState::new(table, targets) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    frontier_rec(&mut st, depth, &mut prefix, &mut out);
    out
}

fn frontier_rec(
    st: &mut SearchState<'_>,
    depth: usize,
    prefix: &mut Vec<Decision>,
    out: &mut Vec<Vec<Decision>>,
) {
    let branch = if prefix.len() < depth {
        st.choose()
    } else {
        None
    };
    let Some(e) = branch else {
        out.push(prefix.clone());
        return;
    };
    for red in [true, false] {
        let mark = st.trail.len();
        let d = Decision { edge: e, red };
        if st.decide(d) {
            prefix.push(d);
            frontier_rec(st, depth, prefix, out);
            prefix.pop();
        }
        st.undo_to(mark);
    }
}

/// Exhausts the subtree below `prefix`.
pub(crate) fn run_subtree(
    table: &CrossTable,
    targets: &[u8],
    prefix: &[Decision],
    budget: &NodeBudget,
) -> SubtreeResult {
    let Some(mut st) = SearchState::new(table, targets) else {
        return SubtreeResult::Done {
            solutions: Vec::new(),
        };
    };
    for &d in prefix {
        if !st.decide(d) {
            return SubtreeResult::Done {
                solutions: Vec::new(),
            };
        }
    }
    let mut solutions = Vec::new();
    if dfs(&mut st, budget, &mut solutions) {
        SubtreeResult::Done { solutions }
    } else {
        SubtreeResult::Aborted
    }
}

fn dfs(st: &mut SearchState<'_>, budget: &NodeBudget, out: &mut Vec<Vec<EdgeId>>) -> bool {
    if !budget.tick() {
        return false;
    }
    let Some(e) = st.choose() else {
        out.push(st.reds());
        return true;
    };
    for red in [true, false] {
        let mark = st.trail.len();
        if st.decide(Decision { edge: e, red }) && !dfs(st, budget, out) {
            st.undo_to(mark);
            return false;
        }
        st.undo_to(mark);
    }
    true
}

/// Result of a complete or partial exact-degree search.
pub(crate) struct SearchOutcome {
    /// Solutions from the completed leading subtrees, sorted.
    pub solutions: Vec<Vec<EdgeId>>,
    pub nodes: u64,
    /// Number of leading frontier subtrees fully explored.
    pub completed: usize,
    /// First unexplored prefix, when the budget ran out.
    pub cursor: Option<Vec<Decision>>,
}

pub(crate) fn search(
    table: &CrossTable,
    targets: &[u8],
    split_depth: usize,
    resume: Option<&[Decision]>,
    budget: Option<u64>,
    parallel: bool,
) -> Result<SearchOutcome> {
    let mut prefixes = frontier(table, targets, split_depth);
    if let Some(cursor) = resume {
        let start = prefixes
            .iter()
            .position(|p| p.as_slice() == cursor)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "resume cursor is not a split-depth {split_depth} prefix of this search"
                ))
            })?;
        prefixes.drain(..start);
    }
    let counter = NodeBudget::new(budget);
    let results = par::map(&prefixes, parallel, |p| {
        run_subtree(table, targets, p, &counter)
    });
    let mut solutions = Vec::new();
    let mut completed = 0;
    let mut cursor = None;
    for (p, r) in prefixes.iter().zip(results) {
        match r {
            SubtreeResult::Done { solutions: s } => {
                solutions.extend(s);
                completed += 1;
            }
            SubtreeResult::Aborted => {
                cursor = Some(p.clone());
                break;
            }
        }
    }
    solutions.sort();
    Ok(SearchOutcome {
        solutions,
        nodes: counter.used(),
        completed,
        cursor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Board;

    fn solve(board: &Board, depth: usize, parallel: bool) -> Vec<Vec<EdgeId>> {
        let t = CrossTable::new(board);
        let targets = vec![2; t.squares().len()];
        search(&t, &targets, depth, None, None, parallel)
            .unwrap()
            .solutions
    }

    #[test]
    fn split_depth_does_not_change_the_answer() {
        let b = Board::rectangle(8, 8).unwrap();
        let base = solve(&b, 0, false);
        assert_eq!(base.len(), 86);
        for depth in [1, 3, 6] {
            assert_eq!(solve(&b, depth, false), base);
            assert_eq!(solve(&b, depth, true), base);
        }
    }

    #[test]
    fn budget_stops_search_and_reports_cursor() {
        let b = Board::rectangle(8, 8).unwrap();
        let t = CrossTable::new(&b);
        let targets = vec![2; t.squares().len()];
        let out = search(&t, &targets, 2, None, Some(3), false).unwrap();
        assert!(out.cursor.is_some());
    }

    #[test]
    fn resume_completes_a_partial_run() {
        let b = Board::rectangle(8, 8).unwrap();
        let t = CrossTable::new(&b);
        let targets = vec![2; t.squares().len()];
        let full = search(&t, &targets, 3, None, None, false).unwrap();
        let first = search(&t, &targets, 3, None, Some(20), false).unwrap();
        let cursor = first.cursor.expect("budget of 20 nodes is too small");
        let rest = search(&t, &targets, 3, Some(&cursor), None, false).unwrap();
        let mut merged = first.solutions;
        merged.extend(rest.solutions);
        merged.sort();
        assert_eq!(merged, full.solutions);
    }
}
