//! JSON documents: boards, pseudotours and tour witnesses.

use serde::{Deserialize, Serialize};

use crate::board::{Board, BoardEdge, EdgeDir, Square, Topology};
use crate::cross::CrossTable;
use crate::engine::{cycle_decomposition, realize_graph, RedSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardJson {
    pub topology: Topology,
    pub m: i32,
    pub n: i32,
    #[serde(default)]
    pub removed: Vec<[i32; 2]>,
}

impl From<&Board> for BoardJson {
    fn from(b: &Board) -> Self {
        BoardJson {
            topology: b.topology(),
            m: b.width(),
            n: b.height(),
            removed: b.removed().iter().map(|s| [s.i, s.j]).collect(),
        }
    }
}

impl TryFrom<&BoardJson> for Board {
    type Error = Error;

    fn try_from(j: &BoardJson) -> Result<Board> {
        Board::with_removed(
            j.topology,
            j.m,
            j.n,
            j.removed.iter().map(|&[i, j]| Square::new(i, j)).collect(),
        )
    }
}

/// A red edge written as `[a, b, "N" | "E"]`.
pub type EdgeJson = (i32, i32, EdgeDir);

fn edge_json(e: BoardEdge) -> EdgeJson {
    (e.anchor.a, e.anchor.b, e.dir)
}

fn square_json(s: Square) -> [i32; 2] {
    [s.i, s.j]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudotourJson {
    pub board: BoardJson,
    pub reds: Vec<EdgeJson>,
    #[serde(default)]
    pub cycles: Vec<Vec<[i32; 2]>>,
}

impl PseudotourJson {
    /// Serializes a red set; cycles are listed when the graph is 2-regular
    /// (or empty).
    pub fn new(table: &CrossTable, reds: &RedSet) -> Self {
        let g = realize_graph(table, reds);
        let cycles = cycle_decomposition(table, &g)
            .map(|d| {
                d.squares(table)
                    .into_iter()
                    .map(|c| c.into_iter().map(square_json).collect())
                    .collect()
            })
            .unwrap_or_default();
        PseudotourJson {
            board: BoardJson::from(table.board()),
            reds: reds.edges(table).into_iter().map(edge_json).collect(),
            cycles,
        }
    }

    pub fn board(&self) -> Result<Board> {
        Board::try_from(&self.board)
    }

    /// Rebuilds the red set against `table`, which must be for this board.
    pub fn red_set(&self, table: &CrossTable) -> Result<RedSet> {
        let edges: Vec<BoardEdge> = self
            .reds
            .iter()
            .map(|&(a, b, dir)| BoardEdge::new(a, b, dir))
            .collect();
        RedSet::from_edges(table, &edges)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TourKind {
    Closed,
    Open,
}

/// A tour witness: the pseudotour fields plus the tour kind, the visiting
/// order, and (for open tours) the two endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    #[serde(flatten)]
    pub pseudotour: PseudotourJson,
    pub kind: TourKind,
    #[serde(default)]
    pub endpoints: Vec<[i32; 2]>,
    #[serde(default)]
    pub sequence: Vec<[i32; 2]>,
}

/// Any document accepted by `verify` and `render`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Document {
    Witness(WitnessJson),
    Pseudotour(PseudotourJson),
}

impl Document {
    pub fn pseudotour(&self) -> &PseudotourJson {
        match self {
            Document::Witness(w) => &w.pseudotour,
            Document::Pseudotour(p) => p,
        }
    }
}

pub(crate) fn squares_json(squares: &[Square]) -> Vec<[i32; 2]> {
    squares.iter().copied().map(square_json).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn board_json_shape() {
        let ring = Board::ring3();
        let text = serde_json::to_string(&BoardJson::from(&ring)).unwrap();
        assert_eq!(
            text,
            r#"{"topology":"subset","m":3,"n":3,"removed":[[2,2]]}"#
        );
        let back: BoardJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Board::try_from(&back).unwrap(), ring);
        let torus: BoardJson = serde_json::from_str(r#"{"topology":"torus","m":5,"n":6}"#).unwrap();
        assert_eq!(
            Board::try_from(&torus).unwrap(),
            Board::new(Topology::Torus, 5, 6).unwrap()
        );
        let bad: BoardJson = serde_json::from_str(r#"{"topology":"torus","m":4,"n":6}"#).unwrap();
        assert!(Board::try_from(&bad).is_err());
    }

    #[test]
    fn pseudotour_json_for_4x4() {
        let table = CrossTable::new(&Board::rectangle(4, 4).unwrap());
        let sets = crate::engine::enumerate_pseudotours(&table, &Default::default()).unwrap();
        let doc = PseudotourJson::new(&table, &sets.sets[0]);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.starts_with(r#"{"board":{"topology":"rectangle","m":4,"n":4,"removed":[]},"reds":[[1,1,"N"],[1,1,"E"],"#));
        assert_eq!(doc.cycles.len(), 4);
        let parsed: Document = serde_json::from_str(&text).unwrap();
        let p = parsed.pseudotour();
        assert_eq!(p.red_set(&table).unwrap(), sets.sets[0]);
    }
}
