//! One-stop verification of a red set: degree profile, H-degrees, corner
//! permutations along every H-cycle, and the G/H cycle correspondence.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::board::BoardVertex;
use crate::cross::CrossTable;
use crate::engine::{cycle_decomposition, realize_graph, RedSet};
use crate::hgraph::{
    braid_correspondence, build_h, decompose_and_orient, verify_degree_lemmas, BraidEntry,
    SigmaWalk,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub board: String,
    pub reds: usize,
    /// Every square has degree 2 in G.
    pub pseudotour: bool,
    pub g_cycles: Option<usize>,
    pub h_cycles: Option<usize>,
    pub h_degree_histogram: BTreeMap<usize, usize>,
    /// All H-degrees even.
    pub h_degrees_even: bool,
    /// All H-degrees 0 or 2.
    pub h_degrees_zero_or_two: bool,
    /// A vertex breaking the H-degree checks, with its degree.
    pub h_witness: Option<(BoardVertex, usize)>,
    /// Every H-cycle walk is internally consistent and returns an even
    /// corner permutation.
    pub sigma_walks_even: bool,
    pub braid: Vec<BraidEntry>,
    /// Even G-cycle count, split evenly over H-cycles as predicted by the
    /// corner permutations.
    pub cycle_parity: bool,
    pub errors: Vec<String>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.pseudotour
            && self.h_degrees_even
            && self.h_degrees_zero_or_two
            && self.sigma_walks_even
            && self.cycle_parity
            && self.errors.is_empty()
    }
}

/// Runs every check on the graph generated by `reds`. Checks that need
/// earlier structure (a 2-regular G, an H of degrees 0/2) are marked failed
/// when that structure is missing.
pub fn verify_pseudotour(table: &CrossTable, reds: &RedSet) -> VerificationReport {
    let g = realize_graph(table, reds);
    let h = build_h(table, reds);
    let degrees = verify_degree_lemmas(&h);
    let mut report = VerificationReport {
        board: table.board().descriptor(),
        reds: reds.len(),
        pseudotour: g.is_pseudotour(),
        g_cycles: None,
        h_cycles: None,
        h_degree_histogram: degrees.histogram.clone(),
        h_degrees_even: degrees.even,
        h_degrees_zero_or_two: degrees.zero_or_two,
        h_witness: degrees.witness,
        sigma_walks_even: false,
        braid: Vec::new(),
        cycle_parity: false,
        errors: Vec::new(),
    };
    if report.pseudotour {
        match cycle_decomposition(table, &g) {
            Ok(d) => report.g_cycles = Some(d.count()),
            Err(e) => report.errors.push(e.to_string()),
        }
    }
    let cycles = match decompose_and_orient(table, &h) {
        Ok(c) => c,
        Err(e) => {
            if report.pseudotour && degrees.zero_or_two {
                report.errors.push(e.to_string());
            }
            return report;
        }
    };
    report.h_cycles = Some(cycles.len());
    if !report.pseudotour {
        return report;
    }
    let walks: Vec<SigmaWalk> = match cycles
        .iter()
        .map(|c| crate::hgraph::walk_sigma(table, c, &g))
        .collect()
    {
        Ok(w) => w,
        Err(e) => {
            report.errors.push(e.to_string());
            return report;
        }
    };
    report.sigma_walks_even = walks.iter().all(SigmaWalk::full_cycle_even);
    match braid_correspondence(table, &g, &cycles, &walks) {
        Ok(b) => {
            report.cycle_parity = b.pass();
            report.braid = b.entries;
        }
        Err(e) => report.errors.push(e.to_string()),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Board;
    use crate::engine::enumerate_pseudotours;

    #[test]
    fn the_4x4_pseudotour_passes() {
        let t = CrossTable::new(&Board::rectangle(4, 4).unwrap());
        let sets = enumerate_pseudotours(&t, &Default::default()).unwrap().sets;
        let r = verify_pseudotour(&t, &sets[0]);
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.g_cycles, Some(4));
        assert_eq!(r.h_cycles, Some(1));
        assert_eq!(r.h_degree_histogram.get(&2), Some(&8));
    }

    #[test]
    fn a_single_cross_fails() {
        let t = CrossTable::new(&Board::rectangle(4, 4).unwrap());
        let one = RedSet::from_ids(&t, t.colorable_edges().take(1)).unwrap();
        let r = verify_pseudotour(&t, &one);
        assert!(!r.pass());
        assert!(!r.pseudotour);
        assert!(!r.h_degrees_even);
        assert!(r.errors.is_empty());
    }
}
