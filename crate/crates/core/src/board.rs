//! Boards, squares, board vertices and board edges.
//!
//! Squares are labelled `(i, j)` with `1 <= i <= m` (column) and
//! `1 <= j <= n` (row). Board vertices are labelled `(a, b)` by the column on
//! their left and the row just below them, so `0 <= a <= m` and `0 <= b <= n`
//! on a rectangle. On a wrapped axis the vertex coordinate is reduced modulo
//! the axis length and square coordinates are reduced into `1..=len`.
//!
//! All geometry can be expressed in doubled coordinates: square `(i, j)` has
//! its center at `(2i - 1, 2j - 1)` and vertex `(a, b)` sits at `(2a, 2b)`.
//! Every knight-move midpoint and every board-edge midpoint is then an
//! integer point.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum length of a wrapped axis.
pub const MIN_WRAPPED_LEN: i32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Topology {
    #[serde(rename = "rectangle")]
    Rectangle,
    /// Columns wrap around.
    #[serde(rename = "cylinder_x")]
    CylinderX,
    /// Rows wrap around.
    #[serde(rename = "cylinder_y")]
    CylinderY,
    #[serde(rename = "torus")]
    Torus,
    /// A rectangle with some squares removed.
    #[serde(rename = "subset")]
    SquareSubset,
}

impl Topology {
    pub fn name(self) -> &'static str {
        match self {
            Topology::Rectangle => "rectangle",
            Topology::CylinderX => "cylinder_x",
            Topology::CylinderY => "cylinder_y",
            Topology::Torus => "torus",
            Topology::SquareSubset => "subset",
        }
    }

    pub fn wraps_x(self) -> bool {
        matches!(self, Topology::CylinderX | Topology::Torus)
    }

    pub fn wraps_y(self) -> bool {
        matches!(self, Topology::CylinderY | Topology::Torus)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Square {
    pub i: i32,
    pub j: i32,
}

impl Square {
    pub const fn new(i: i32, j: i32) -> Self {
        Square { i, j }
    }

    /// Center in doubled coordinates.
    pub fn center(self) -> (i32, i32) {
        (2 * self.i - 1, 2 * self.j - 1)
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoardVertex {
    pub a: i32,
    pub b: i32,
}

impl BoardVertex {
    pub const fn new(a: i32, b: i32) -> Self {
        BoardVertex { a, b }
    }
}

impl fmt::Display for BoardVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Canonical direction of a stored board edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeDir {
    N,
    E,
}

/// The four directions of board edges leaving a board vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir4 {
    N,
    E,
    S,
    W,
}

impl Dir4 {
    pub const ALL: [Dir4; 4] = [Dir4::N, Dir4::E, Dir4::S, Dir4::W];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Dir4::N => (0, 1),
            Dir4::E => (1, 0),
            Dir4::S => (0, -1),
            Dir4::W => (-1, 0),
        }
    }

    pub fn reverse(self) -> Dir4 {
        match self {
            Dir4::N => Dir4::S,
            Dir4::E => Dir4::W,
            Dir4::S => Dir4::N,
            Dir4::W => Dir4::E,
        }
    }
}

/// An undirected unit board edge, stored as the N- or E-edge of its
/// lower/left endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoardEdge {
    pub anchor: BoardVertex,
    pub dir: EdgeDir,
}

impl BoardEdge {
    pub const fn new(a: i32, b: i32, dir: EdgeDir) -> Self {
        BoardEdge {
            anchor: BoardVertex::new(a, b),
            dir,
        }
    }

    pub const fn vertical(a: i32, b: i32) -> Self {
        Self::new(a, b, EdgeDir::N)
    }

    pub const fn horizontal(a: i32, b: i32) -> Self {
        Self::new(a, b, EdgeDir::E)
    }

    /// Midpoint in doubled coordinates (unreduced).
    pub fn midpoint(self) -> (i32, i32) {
        let (a, b) = (self.anchor.a, self.anchor.b);
        match self.dir {
            EdgeDir::N => (2 * a, 2 * b + 1),
            EdgeDir::E => (2 * a + 1, 2 * b),
        }
    }
}

impl fmt::Display for BoardEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.anchor.a, self.anchor.b);
        match self.dir {
            EdgeDir::N => write!(f, "({a},{b})-({a},{})", b + 1),
            EdgeDir::E => write!(f, "({a},{b})-({},{b})", a + 1),
        }
    }
}

/// The four corner vertices of a square: top-right, top-left, bottom-left
/// and bottom-right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Corners {
    pub a: BoardVertex,
    pub b: BoardVertex,
    pub c: BoardVertex,
    pub d: BoardVertex,
}

impl Corners {
    pub fn as_array(&self) -> [BoardVertex; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Board {
    topology: Topology,
    m: i32,
    n: i32,
    removed: BTreeSet<Square>,
}

impl Board {
    pub fn new(topology: Topology, m: i32, n: i32) -> Result<Self> {
        Self::with_removed(topology, m, n, BTreeSet::new())
    }

    pub fn rectangle(m: i32, n: i32) -> Result<Self> {
        Self::new(Topology::Rectangle, m, n)
    }

    /// A rectangle with the given squares removed.
    pub fn subset(m: i32, n: i32, removed: impl IntoIterator<Item = Square>) -> Result<Self> {
        Self::with_removed(Topology::SquareSubset, m, n, removed.into_iter().collect())
    }

    /// The eight-square ring: a 3x3 board without its central square.
    pub fn ring3() -> Self {
        Self::subset(3, 3, [Square::new(2, 2)]).expect("ring is a valid board")
    }

    pub fn with_removed(
        topology: Topology,
        m: i32,
        n: i32,
        removed: BTreeSet<Square>,
    ) -> Result<Self> {
        if m < 1 || n < 1 {
            return Err(Error::InvalidBoard(format!(
                "dimensions must be positive, got {m}x{n}"
            )));
        }
        if topology.wraps_x() && m < MIN_WRAPPED_LEN {
            return Err(Error::InvalidBoard(format!(
                "{topology} board needs at least {MIN_WRAPPED_LEN} columns, got {m}"
            )));
        }
        if topology.wraps_y() && n < MIN_WRAPPED_LEN {
            return Err(Error::InvalidBoard(format!(
                "{topology} board needs at least {MIN_WRAPPED_LEN} rows, got {n}"
            )));
        }
        if topology != Topology::SquareSubset && !removed.is_empty() {
            return Err(Error::InvalidBoard(format!(
                "only subset boards may remove squares, got {topology}"
            )));
        }
        if let Some(s) = removed
            .iter()
            .find(|s| s.i < 1 || s.i > m || s.j < 1 || s.j > n)
        {
            return Err(Error::InvalidBoard(format!(
                "removed square {s} lies outside the {m}x{n} board"
            )));
        }
        Ok(Board {
            topology,
            m,
            n,
            removed,
        })
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Number of columns.
    pub fn width(&self) -> i32 {
        self.m
    }

    /// Number of rows.
    pub fn height(&self) -> i32 {
        self.n
    }

    pub fn removed(&self) -> &BTreeSet<Square> {
        &self.removed
    }

    pub fn is_rectangle(&self) -> bool {
        self.topology == Topology::Rectangle
    }

    /// Short human-readable key, e.g. `rectangle:4x4` or `subset:3x3-2.2`.
    pub fn descriptor(&self) -> String {
        let mut key = format!("{}:{}x{}", self.topology, self.m, self.n);
        for s in &self.removed {
            key.push_str(&format!("-{}.{}", s.i, s.j));
        }
        key
    }

    /// Number of existing squares.
    pub fn square_count(&self) -> usize {
        (self.m * self.n) as usize - self.removed.len()
    }

    /// Normalizes raw square coordinates; `None` when the square is not on
    /// the board.
    pub fn square(&self, i: i32, j: i32) -> Option<Square> {
        let i = if self.topology.wraps_x() {
            (i - 1).rem_euclid(self.m) + 1
        } else if (1..=self.m).contains(&i) {
            i
        } else {
            return None;
        };
        let j = if self.topology.wraps_y() {
            (j - 1).rem_euclid(self.n) + 1
        } else if (1..=self.n).contains(&j) {
            j
        } else {
            return None;
        };
        let s = Square::new(i, j);
        (!self.removed.contains(&s)).then_some(s)
    }

    pub fn contains(&self, s: Square) -> bool {
        self.square(s.i, s.j) == Some(s)
    }

    /// All existing squares in canonical `(i, j)` order.
    pub fn squares(&self) -> Vec<Square> {
        (1..=self.m)
            .flat_map(|i| (1..=self.n).map(move |j| Square::new(i, j)))
            .filter(|s| !self.removed.contains(s))
            .collect()
    }

    /// Range of vertex coordinates along x (exclusive upper bound).
    pub fn vertex_columns(&self) -> i32 {
        if self.topology.wraps_x() {
            self.m
        } else {
            self.m + 1
        }
    }

    pub fn vertex_rows(&self) -> i32 {
        if self.topology.wraps_y() {
            self.n
        } else {
            self.n + 1
        }
    }

    pub fn vertex(&self, a: i32, b: i32) -> Option<BoardVertex> {
        let a = if self.topology.wraps_x() {
            a.rem_euclid(self.m)
        } else if (0..=self.m).contains(&a) {
            a
        } else {
            return None;
        };
        let b = if self.topology.wraps_y() {
            b.rem_euclid(self.n)
        } else if (0..=self.n).contains(&b) {
            b
        } else {
            return None;
        };
        Some(BoardVertex::new(a, b))
    }

    /// All board vertices in canonical `(a, b)` order.
    pub fn vertices(&self) -> Vec<BoardVertex> {
        let rows = self.vertex_rows();
        (0..self.vertex_columns())
            .flat_map(|a| (0..rows).map(move |b| BoardVertex::new(a, b)))
            .collect()
    }

    /// Dense index of a (normalized) board vertex.
    pub fn vertex_index(&self, v: BoardVertex) -> usize {
        (v.a * self.vertex_rows() + v.b) as usize
    }

    /// Normalizes an edge given by raw anchor coordinates; `None` when the
    /// edge does not exist.
    pub fn edge(&self, a: i32, b: i32, dir: EdgeDir) -> Option<BoardEdge> {
        let anchor = self.vertex(a, b)?;
        let (da, db) = match dir {
            EdgeDir::N => (0, 1),
            EdgeDir::E => (1, 0),
        };
        self.vertex(a + da, b + db)?;
        Some(BoardEdge { anchor, dir })
    }

    /// Normalizes an arbitrary edge value; `None` when it does not exist.
    pub fn normalize_edge(&self, e: BoardEdge) -> Option<BoardEdge> {
        self.edge(e.anchor.a, e.anchor.b, e.dir)
    }

    /// The board edge leaving `v` in direction `dir`.
    pub fn edge_from(&self, v: BoardVertex, dir: Dir4) -> Option<BoardEdge> {
        let (a, b) = (v.a, v.b);
        match dir {
            Dir4::N => self.edge(a, b, EdgeDir::N),
            Dir4::E => self.edge(a, b, EdgeDir::E),
            Dir4::S => self.edge(a, b - 1, EdgeDir::N),
            Dir4::W => self.edge(a - 1, b, EdgeDir::E),
        }
    }

    /// Endpoints of an existing edge, anchor first.
    pub fn edge_endpoints(&self, e: BoardEdge) -> (BoardVertex, BoardVertex) {
        let (a, b) = (e.anchor.a, e.anchor.b);
        let other = match e.dir {
            EdgeDir::N => self.vertex(a, b + 1),
            EdgeDir::E => self.vertex(a + 1, b),
        };
        (e.anchor, other.expect("edge endpoints exist"))
    }

    /// All board edges in canonical order: by anchor `(a, b)`, then N before E.
    pub fn edges(&self) -> Vec<BoardEdge> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for dir in [EdgeDir::N, EdgeDir::E] {
                if let Some(e) = self.edge(v.a, v.b, dir) {
                    out.push(e);
                }
            }
        }
        out
    }

    fn require_square(&self, s: Square) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "square {s} is not on the {} board",
                self.descriptor()
            )))
        }
    }

    /// Top-right, top-left, bottom-left and bottom-right corners of `s`.
    pub fn corner_vertices(&self, s: Square) -> Result<Corners> {
        self.require_square(s)?;
        let v = |a, b| self.vertex(a, b).expect("corner of an existing square");
        let (i, j) = (s.i, s.j);
        Ok(Corners {
            a: v(i, j),
            b: v(i - 1, j),
            c: v(i - 1, j - 1),
            d: v(i, j - 1),
        })
    }

    /// The eight board edges around `s` that can carry a cross through `s`,
    /// in the order E(A), N(A), N(B), W(B), W(C), S(C), S(D), E(D). Edges
    /// that do not exist are skipped.
    pub fn surround8(&self, s: Square) -> Result<Vec<BoardEdge>> {
        let c = self.corner_vertices(s)?;
        let order = [
            (c.a, Dir4::E),
            (c.a, Dir4::N),
            (c.b, Dir4::N),
            (c.b, Dir4::W),
            (c.c, Dir4::W),
            (c.c, Dir4::S),
            (c.d, Dir4::S),
            (c.d, Dir4::E),
        ];
        let mut out: Vec<BoardEdge> = Vec::with_capacity(8);
        for (v, dir) in order {
            if let Some(e) = self.edge_from(v, dir) {
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        Ok(out)
    }

    /// Squares of one of the four quadrants cut out by board vertex `u`:
    /// 1 = lower-left, 2 = lower-right, 3 = upper-right, 4 = upper-left.
    pub fn quadrant(&self, u: BoardVertex, which: u8) -> Result<Vec<Square>> {
        if !self.is_rectangle() {
            return Err(Error::UnsupportedTopology {
                op: "quadrant",
                topology: self.topology,
            });
        }
        if self.vertex(u.a, u.b) != Some(u) {
            return Err(Error::Domain(format!("vertex {u} is not on the board")));
        }
        let (a, b) = (u.a, u.b);
        let (cols, rows) = match which {
            1 => (1..=a, 1..=b),
            2 => (a + 1..=self.m, 1..=b),
            3 => (a + 1..=self.m, b + 1..=self.n),
            4 => (1..=a, b + 1..=self.n),
            _ => {
                return Err(Error::Domain(format!(
                    "quadrant index must be 1..=4, got {which}"
                )))
            }
        };
        Ok(cols
            .flat_map(|i| rows.clone().map(move |j| Square::new(i, j)))
            .collect())
    }

    /// Which quadrant of `u` contains `s` (rectangles only, no validation).
    pub fn quadrant_of(u: BoardVertex, s: Square) -> u8 {
        match (s.i <= u.a, s.j <= u.b) {
            (true, true) => 1,
            (false, true) => 2,
            (false, false) => 3,
            (true, false) => 4,
        }
    }

    /// Reduces a doubled-coordinate point onto the board's fundamental domain
    /// along wrapped axes.
    pub fn reduce_doubled(&self, x: i32, y: i32) -> (i32, i32) {
        let x = if self.topology.wraps_x() {
            x.rem_euclid(2 * self.m)
        } else {
            x
        };
        let y = if self.topology.wraps_y() {
            y.rem_euclid(2 * self.n)
        } else {
            y
        };
        (x, y)
    }

    /// The board edge whose midpoint is the given doubled-coordinate point,
    /// if that point is an edge midpoint.
    pub fn edge_at_midpoint(&self, x: i32, y: i32) -> Option<BoardEdge> {
        match (x.rem_euclid(2), y.rem_euclid(2)) {
            (0, 1) => self.edge(x.div_euclid(2), (y - 1).div_euclid(2), EdgeDir::N),
            (1, 0) => self.edge((x - 1).div_euclid(2), y.div_euclid(2), EdgeDir::E),
            _ => None,
        }
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "rectangle" | "rect" => Topology::Rectangle,
            "cylinder_x" => Topology::CylinderX,
            "cylinder_y" => Topology::CylinderY,
            "torus" => Topology::Torus,
            "subset" => Topology::SquareSubset,
            other => return Err(Error::Parse(format!("unknown topology `{other}`"))),
        })
    }
}

/// Parses `MxN` or `M,N`.
pub fn parse_dims(s: &str) -> Result<(i32, i32)> {
    let (m, n) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::Parse(format!("expected MxN, got `{s}`")))?;
    let num = |t: &str| {
        t.trim()
            .parse::<i32>()
            .map_err(|_| Error::Parse(format!("bad dimension `{t}` in `{s}`")))
    };
    Ok((num(m)?, num(n)?))
}

/// Parses a board descriptor: `[topology:]MxN` followed by any number of
/// removed squares written `-i.j`. Without a topology the board is a
/// rectangle, or a subset when squares are removed. `ring` is shorthand for
/// `subset:3x3-2.2`.
impl FromStr for Board {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ring" {
            return Ok(Board::ring3());
        }
        let (topology, rest) = match s.split_once(':') {
            Some((t, rest)) => (Some(t.parse::<Topology>()?), rest),
            None => (None, s),
        };
        let mut parts = rest.split('-');
        let (m, n) = parse_dims(parts.next().unwrap_or_default())?;
        let removed = parts
            .map(|p| {
                let (i, j) = p
                    .split_once('.')
                    .ok_or_else(|| Error::Parse(format!("expected i.j, got `{p}`")))?;
                let num = |t: &str| {
                    t.parse::<i32>()
                        .map_err(|_| Error::Parse(format!("bad square `{p}`")))
                };
                Ok(Square::new(num(i)?, num(j)?))
            })
            .collect::<Result<BTreeSet<_>>>()?;
        let topology = topology.unwrap_or(if removed.is_empty() {
            Topology::Rectangle
        } else {
            Topology::SquareSubset
        });
        Board::with_removed(topology, m, n, removed)
    }
}
