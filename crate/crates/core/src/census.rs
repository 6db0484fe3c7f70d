//! Pseudotour census over a range of boards, persisted as line-delimited
//! JSON.
//!
//! The first line of a census file is the header
//! `{"format":"crosspatch-census","version":1}`; every further line is one
//! [`CensusRecord`]. Records are keyed by board descriptor. Re-running a
//! census appends only boards that are missing, so a repeated run leaves the
//! file unchanged.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::board::{parse_dims, Board, Topology};
use crate::cross::CrossTable;
use crate::engine::{
    cycle_decomposition, enumerate_pseudotours, realize_graph, CrosspatchGraph, EnumOptions,
    Parallelism, RedSet,
};
use crate::error::{Error, Result};
use crate::oracle::{oracle_two_factors, MAX_ORACLE_SQUARES};
use crate::symmetry::SymmetryGroup;
use crate::verify::verify_pseudotour;

pub const FORMAT: &str = "crosspatch-census";
pub const VERSION: u32 = 1;
/// Bumped whenever the enumerator could produce different counts.
pub const ENUMERATOR_VERSION: &str =
    concat!("crosspatch-", env!("CARGO_PKG_VERSION"), "/edge-search-1");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub version: u32,
}

impl Header {
    pub fn current() -> Self {
        Header {
            format: FORMAT.into(),
            version: VERSION,
        }
    }
}

/// Structural checks over every pseudotour of a board; vacuously true when
/// there are none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusFlags {
    pub h_degrees_even: bool,
    pub h_degrees_zero_or_two: bool,
    pub sigma_walks_even: bool,
    pub even_cycle_count: bool,
}

impl CensusFlags {
    fn all() -> Self {
        CensusFlags {
            h_degrees_even: true,
            h_degrees_zero_or_two: true,
            sigma_walks_even: true,
            even_cycle_count: true,
        }
    }
}

/// How the enumerated family was cross-checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossCheck {
    /// Compared in full against the move-level oracle.
    Oracle,
    /// Too large for the oracle: every set was rebuilt from its knight
    /// moves and re-checked for closure and degree two.
    Rebuilt,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub board: String,
    pub topology: Topology,
    pub m: i32,
    pub n: i32,
    pub raw_count: usize,
    /// Number of classes under the board's symmetry group.
    pub symmetric_count: usize,
    /// G-cycle count → number of pseudotours.
    pub cycle_histogram: BTreeMap<usize, usize>,
    pub flags: CensusFlags,
    pub cross_check: CrossCheck,
    pub cross_check_ok: bool,
    /// Beyond the oracle's size limit.
    pub extended: bool,
    /// The node budget ran out; counts cover the explored part only.
    pub partial: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    pub nodes: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    pub enumerator_version: String,
}

impl CensusRecord {
    /// Whether two records agree on everything but timing.
    pub fn same_result(&self, other: &CensusRecord) -> bool {
        let strip = |r: &CensusRecord| CensusRecord {
            runtime_ms: None,
            ..r.clone()
        };
        strip(self) == strip(other)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    pub budget: Option<u64>,
    pub parallelism: Parallelism,
    /// Store wall-clock time in each record. Off gives reproducible files.
    pub record_runtime: bool,
    /// Run the move-level oracle on boards small enough for it.
    pub oracle: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            budget: None,
            parallelism: Parallelism::default(),
            record_runtime: true,
            oracle: true,
        }
    }
}

/// Boards of one topology with `m` in `from.0..=to.0` and `n` in
/// `from.1..=to.1`, in `(m, n)` order. Sizes a topology does not allow are
/// skipped.
pub fn board_range(topology: Topology, from: (i32, i32), to: (i32, i32)) -> Result<Vec<Board>> {
    if from.0 > to.0 || from.1 > to.1 || from.0 < 1 || from.1 < 1 {
        return Err(Error::Domain(format!(
            "empty board range {}x{}..{}x{}",
            from.0, from.1, to.0, to.1
        )));
    }
    Ok((from.0..=to.0)
        .flat_map(|m| (from.1..=to.1).map(move |n| (m, n)))
        .filter_map(|(m, n)| Board::new(topology, m, n).ok())
        .collect())
}

/// Parses `AxB` into `(A, B)`.
pub fn parse_size(s: &str) -> Result<(i32, i32)> {
    parse_dims(s)
}

/// Computes the census record of one board.
pub fn census_record(board: &Board, options: &CensusOptions) -> Result<CensusRecord> {
    let start = Instant::now();
    let table = CrossTable::new(board);
    let enum_options = EnumOptions {
        budget: options.budget,
        parallelism: options.parallelism,
        ..EnumOptions::default()
    };
    let (sets, nodes, partial) = match enumerate_pseudotours(&table, &enum_options) {
        Ok(e) => (e.sets, e.nodes, false),
        Err(Error::BudgetExhausted { progress, .. }) => {
            let mut sets: Vec<RedSet> = progress
                .found
                .into_iter()
                .map(|ids| RedSet::from_ids(&table, ids))
                .collect::<Result<_>>()?;
            sets.sort();
            (sets, progress.nodes, true)
        }
        Err(e) => return Err(e),
    };

    let group = SymmetryGroup::new(&table);
    let symmetric_count = sets.iter().filter(|r| group.is_canonical(r)).count();
    let mut cycle_histogram = BTreeMap::new();
    let mut flags = CensusFlags::all();
    for reds in &sets {
        let g = realize_graph(&table, reds);
        let count = cycle_decomposition(&table, &g)?.count();
        *cycle_histogram.entry(count).or_insert(0) += 1;
        let v = verify_pseudotour(&table, reds);
        flags.h_degrees_even &= v.h_degrees_even;
        flags.h_degrees_zero_or_two &= v.h_degrees_zero_or_two;
        flags.sigma_walks_even &= v.sigma_walks_even && v.errors.is_empty();
        flags.even_cycle_count &= v.cycle_parity;
    }

    let extended = table.squares().len() > MAX_ORACLE_SQUARES;
    let (cross_check, cross_check_ok) = if partial || !options.oracle {
        (CrossCheck::Skipped, true)
    } else if extended {
        (CrossCheck::Rebuilt, rebuild_check(&table, &sets))
    } else {
        (CrossCheck::Oracle, oracle_check(board, &table, &sets)?)
    };

    Ok(CensusRecord {
        board: board.descriptor(),
        topology: board.topology(),
        m: board.width(),
        n: board.height(),
        raw_count: sets.len(),
        symmetric_count,
        cycle_histogram,
        flags,
        cross_check,
        cross_check_ok,
        extended,
        partial,
        budget: options.budget,
        nodes,
        runtime_ms: options
            .record_runtime
            .then(|| start.elapsed().as_millis() as u64),
        enumerator_version: ENUMERATOR_VERSION.into(),
    })
}

fn oracle_check(board: &Board, table: &CrossTable, sets: &[RedSet]) -> Result<bool> {
    let family = oracle_two_factors(board)?;
    let mut ours: Vec<_> = sets
        .iter()
        .map(|r| realize_graph(table, r).knight_moves(table))
        .collect();
    ours.sort();
    Ok(ours == family)
}

fn rebuild_check(table: &CrossTable, sets: &[RedSet]) -> bool {
    sets.iter().all(|r| {
        let moves = realize_graph(table, r).knight_moves(table);
        match CrosspatchGraph::from_knight_moves(table, &moves) {
            Ok(g) => g.is_pseudotour() && g.red_set(table) == *r,
            Err(_) => false,
        }
    })
}

/// Contents of a census file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusDb {
    pub records: Vec<CensusRecord>,
}

impl CensusDb {
    /// Reads a census file; a missing file is an empty census.
    pub fn load(path: &Path) -> Result<Self> {
        let corrupt = |line: usize, reason: String| Error::CorruptCensus {
            path: path.display().to_string(),
            line,
            reason,
        };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Self::default()),
            Err(e) => return Err(e.into()),
        };
        let text = std::io::read_to_string(file)?;
        if text.is_empty() {
            return Ok(Self::default());
        }
        if !text.ends_with('\n') {
            let line = text.lines().count();
            return Err(corrupt(line, "last line is incomplete".into()));
        }
        let mut records = Vec::new();
        for (k, line) in BufReader::new(text.as_bytes()).lines().enumerate() {
            let line = line?;
            if k == 0 {
                let header: Header = serde_json::from_str(&line)
                    .map_err(|e| corrupt(1, format!("bad header: {e}")))?;
                if header != Header::current() {
                    return Err(corrupt(
                        1,
                        format!(
                            "unsupported format {} version {}",
                            header.format, header.version
                        ),
                    ));
                }
                continue;
            }
            let record: CensusRecord =
                serde_json::from_str(&line).map_err(|e| corrupt(k + 1, e.to_string()))?;
            records.push(record);
        }
        Ok(CensusDb { records })
    }

    /// The last record stored for a board descriptor.
    pub fn get(&self, board: &str) -> Option<&CensusRecord> {
        self.records.iter().rev().find(|r| r.board == board)
    }

    /// Whether `board` needs (re)computing under `options`. Partial records
    /// count as done unless the new budget is larger.
    fn needs(&self, board: &str, options: &CensusOptions) -> bool {
        match self.get(board) {
            None => true,
            Some(r) if !r.partial => false,
            Some(r) => match (r.budget, options.budget) {
                (_, None) => true,
                (Some(old), Some(new)) => new > old,
                (None, Some(_)) => false,
            },
        }
    }
}

/// Outcome of [`run_census`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusRun {
    /// Records written by this run, in board order.
    pub written: Vec<CensusRecord>,
    pub skipped: Vec<String>,
}

impl CensusRun {
    pub fn any_partial(&self) -> bool {
        self.written.iter().any(|r| r.partial)
    }
}

/// Computes the records for `boards` that `path` does not already hold and
/// appends them in board order.
pub fn run_census(path: &Path, boards: &[Board], options: &CensusOptions) -> Result<CensusRun> {
    let db = CensusDb::load(path)?;
    let mut run = CensusRun::default();
    let mut todo = Vec::new();
    let mut queued = BTreeSet::new();
    for b in boards {
        let key = b.descriptor();
        if db.needs(&key, options) && queued.insert(key.clone()) {
            todo.push(b.clone());
        } else {
            run.skipped.push(key);
        }
    }
    if todo.is_empty() {
        return Ok(run);
    }
    // Boards run one after another; each board's search is parallel inside,
    // so records come out in board order.
    let records = todo.iter().map(|b| census_record(b, options));

    let fresh = std::fs::metadata(path)
        .map(|m| m.len() == 0)
        .unwrap_or(true);
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(file, "{}", serde_json::to_string(&Header::current())?)?;
    }
    for record in records {
        let record = record?;
        writeln!(file, "{}", serde_json::to_string(&record)?)?;
        file.flush()?;
        run.written.push(record);
    }
    Ok(run)
}

/// A stored record that differs from a fresh recomputation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub stored: CensusRecord,
    pub recomputed: CensusRecord,
}

/// Recomputes every record in the file and compares, ignoring timings.
pub fn verify_census(path: &Path, parallelism: Parallelism) -> Result<Vec<Mismatch>> {
    let db = CensusDb::load(path)?;
    let mut out = Vec::new();
    for stored in &db.records {
        let board: Board = stored.board.parse()?;
        let options = CensusOptions {
            budget: stored.budget,
            parallelism,
            record_runtime: false,
            oracle: stored.cross_check != CrossCheck::Skipped,
        };
        let recomputed = census_record(&board, &options)?;
        if !stored.same_result(&recomputed) {
            out.push(Mismatch {
                stored: stored.clone(),
                recomputed,
            });
        }
    }
    Ok(out)
}

/// Whether a file starts with the census header.
pub fn is_census_file(path: &Path) -> bool {
    let Ok(file) = File::open(path) else {
        return false;
    };
    let mut first = String::new();
    if BufReader::new(file).read_line(&mut first).is_err() {
        return false;
    }
    serde_json::from_str::<Header>(first.trim())
        .map(|h| h.format == FORMAT)
        .unwrap_or(false)
}
