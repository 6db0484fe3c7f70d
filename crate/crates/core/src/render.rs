//! SVG and ASCII pictures of a red set and its knight graph.
//!
//! SVG coordinates are doubled board coordinates times `unit` pixels, with
//! the y axis flipped so row 1 is at the bottom. ASCII output shows the red
//! edges only.

use std::fmt::Write as _;

use crate::board::{Board, EdgeDir};
use crate::cross::{displacement, CrossTable};
use crate::engine::{realize_graph, RedSet};
use crate::error::{Error, Result};
use crate::json::{Document, PseudotourJson};
use crate::tour::{verify_witness, TourWitness};

pub const DEFAULT_UNIT: i32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Ascii,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svg" => Ok(Format::Svg),
            "ascii" => Ok(Format::Ascii),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

/// Checks a parsed document and returns its board table and red set.
///
/// Red edges must be colorable; listed cycles must be the graph's cycles;
/// a tour witness must pass full re-verification.
pub fn validate_document(doc: &Document) -> Result<(CrossTable, RedSet)> {
    let p = doc.pseudotour();
    let board = p.board()?;
    let table = CrossTable::new(&board);
    let reds = p.red_set(&table)?;
    if !p.cycles.is_empty() {
        let expected = PseudotourJson::new(&table, &reds);
        if expected.cycles != p.cycles {
            return Err(Error::Validation(
                "listed cycles do not match the knight graph of the red edges".into(),
            ));
        }
    }
    if let Document::Witness(w) = doc {
        let sequence = w
            .sequence
            .iter()
            .map(|&[i, j]| {
                board
                    .square(i, j)
                    .ok_or_else(|| Error::Validation(format!("({i},{j}) is not on the board")))
            })
            .collect::<Result<Vec<_>>>()?;
        let endpoints = match w.endpoints[..] {
            [] => None,
            [[a, b], [c, d]] => Some((crate::Square::new(a, b), crate::Square::new(c, d))),
            _ => return Err(Error::Validation("endpoints must be a pair".into())),
        };
        let witness = TourWitness {
            kind: w.kind,
            sequence,
            reds: reds.clone(),
            cycle_count: p.cycles.len(),
            endpoints,
        };
        verify_witness(&table, &witness)?;
    }
    Ok((table, reds))
}

pub fn render(table: &CrossTable, reds: &RedSet, format: Format) -> String {
    match format {
        Format::Svg => render_svg(table, reds, DEFAULT_UNIT),
        Format::Ascii => render_ascii(table, reds),
    }
}

pub fn render_svg(table: &CrossTable, reds: &RedSet, unit: i32) -> String {
    let board = table.board();
    let margin = unit;
    let (w, h) = (2 * board.width(), 2 * board.height());
    let px = |x: i32| margin + x * unit;
    let py = |y: i32| margin + (h - y) * unit;
    let mut out = String::new();
    let (width, height) = (w * unit + 2 * margin, h * unit + 2 * margin);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"<defs><clipPath id="board"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"#,
        px(0),
        py(h),
        w * unit,
        h * unit
    );
    out.push_str("<style>.lattice{stroke:#999;stroke-width:1}.removed{fill:#ddd}.move{stroke:#222;stroke-width:2;fill:none}.red{stroke:#d00;stroke-width:4}.cross{fill:#d00}</style>\n");

    for s in board.removed() {
        let _ = writeln!(
            out,
            r#"<rect class="removed" x="{}" y="{}" width="{}" height="{}"/>"#,
            px(2 * s.i - 2),
            py(2 * s.j),
            2 * unit,
            2 * unit
        );
    }
    for e in table.edges() {
        let [p, q] = segment(board, e.anchor.a, e.anchor.b, e.dir);
        let _ = writeln!(
            out,
            r#"<line class="lattice" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            px(p.0),
            py(p.1),
            px(q.0),
            py(q.1)
        );
    }

    let g = realize_graph(table, reds);
    out.push_str("<g clip-path=\"url(#board)\">\n");
    for mv in g.knight_moves(table) {
        let [s, t] = mv.ends();
        let (dx, dy) = displacement(board, s, t);
        let (sx, sy) = s.center();
        let (tx, ty) = t.center();
        let direct = (tx - sx, ty - sy) == (2 * dx, 2 * dy);
        let d = if direct {
            format!("M{} {} L{} {}", px(sx), py(sy), px(tx), py(ty))
        } else {
            // Wrapped move: draw it leaving each end and crossing the seam.
            format!(
                "M{} {} L{} {} M{} {} L{} {}",
                px(sx),
                py(sy),
                px(sx + 2 * dx),
                py(sy + 2 * dy),
                px(tx),
                py(ty),
                px(tx - 2 * dx),
                py(ty - 2 * dy)
            )
        };
        let _ = writeln!(out, r#"<path class="move" d="{d}"/>"#);
    }
    out.push_str("</g>\n");

    for e in reds.edges(table) {
        let [p, q] = segment(board, e.anchor.a, e.anchor.b, e.dir);
        let _ = writeln!(
            out,
            r#"<line class="red" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            px(p.0),
            py(p.1),
            px(q.0),
            py(q.1)
        );
    }
    for e in reds.edges(table) {
        let (x, y) = e.midpoint();
        let _ = writeln!(
            out,
            r#"<circle class="cross" cx="{}" cy="{}" r="{}"/>"#,
            px(x),
            py(y),
            (unit / 6).max(2)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Endpoints of a unit edge in doubled coordinates.
fn segment(_board: &Board, a: i32, b: i32, dir: EdgeDir) -> [(i32, i32); 2] {
    match dir {
        EdgeDir::N => [(2 * a, 2 * b), (2 * a, 2 * b + 2)],
        EdgeDir::E => [(2 * a, 2 * b), (2 * a + 2, 2 * b)],
    }
}

/// Red edges drawn on the vertex lattice: `+` for vertices, `---` and `|`
/// for red edges, `#` inside removed squares.
pub fn render_ascii(table: &CrossTable, reds: &RedSet) -> String {
    let board = table.board();
    let red: std::collections::BTreeSet<_> = reds.edges(table).into_iter().collect();
    let is_red = |a: i32, b: i32, dir: EdgeDir| {
        board
            .edge(a, b, dir)
            .map(|e| red.contains(&e))
            .unwrap_or(false)
    };
    let (cols, rows) = (board.width(), board.height());
    let mut out = String::new();
    for b in (0..=rows).rev() {
        for a in 0..=cols {
            out.push('+');
            if a < cols {
                out.push_str(if is_red(a, b, EdgeDir::E) {
                    "---"
                } else {
                    "   "
                });
            }
        }
        trim_end(&mut out);
        out.push('\n');
        if b == 0 {
            break;
        }
        for a in 0..=cols {
            out.push(if is_red(a, b - 1, EdgeDir::N) {
                '|'
            } else {
                ' '
            });
            if a < cols {
                let removed = board.removed().contains(&crate::Square::new(a + 1, b));
                out.push_str(if removed { " # " } else { "   " });
            }
        }
        trim_end(&mut out);
        out.push('\n');
    }
    out
}

fn trim_end(s: &mut String) {
    let keep = s.trim_end_matches(' ').len();
    s.truncate(keep);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::enumerate_pseudotours;
    use crate::tour::{search_closed_tour, TourKind, TourQuery};

    #[test]
    fn svg_of_4x4_pseudotour() {
        let t = CrossTable::new(&Board::rectangle(4, 4).unwrap());
        let reds = enumerate_pseudotours(&t, &Default::default()).unwrap().sets[0].clone();
        let svg = render_svg(&t, &reds, DEFAULT_UNIT);
        assert_eq!(svg.matches(r#"class="move""#).count(), 16);
        assert_eq!(svg.matches(r#"class="red""#).count(), 8);
        assert_eq!(svg.matches(r#"class="cross""#).count(), 8);
        assert_eq!(svg, render_svg(&t, &reds, DEFAULT_UNIT));
    }

    #[test]
    fn empty_set_is_lattice_only() {
        let t = CrossTable::new(&Board::rectangle(3, 2).unwrap());
        let svg = render_svg(&t, &RedSet::empty(), DEFAULT_UNIT);
        assert_eq!(svg.matches(r#"class="lattice""#).count(), 17);
        assert!(!svg.contains(r#"class="move""#));
        assert!(!svg.contains(r#"class="red""#));
        let ascii = render_ascii(&t, &RedSet::empty());
        assert_eq!(ascii, "+   +   +   +\n\n+   +   +   +\n\n+   +   +   +\n");
    }

    #[test]
    fn ring_tour_pictures() {
        let q = TourQuery::new(Board::ring3(), TourKind::Closed);
        let w = search_closed_tour(&q).unwrap().witness().unwrap().clone();
        let t = CrossTable::new(&q.board);
        let svg = render_svg(&t, &w.reds, DEFAULT_UNIT);
        assert_eq!(svg.matches(r#"class="move""#).count(), 8);
        assert_eq!(svg.matches(r#"class="cross""#).count(), 4);
        let ascii = render_ascii(&t, &w.reds);
        assert!(ascii.contains(" # "));
        assert_eq!(ascii.matches("---").count() + ascii.matches('|').count(), 4);
    }

    #[test]
    fn ascii_of_4x4_ring() {
        let t = CrossTable::new(&Board::rectangle(4, 4).unwrap());
        let reds = enumerate_pseudotours(&t, &Default::default()).unwrap().sets[0].clone();
        let expected = "\
+   +   +   +   +

+   +---+---+   +
    |       |
+   +   +   +   +
    |       |
+   +---+---+   +

+   +   +   +   +
";
        let ascii = render_ascii(&t, &reds);
        assert_eq!(ascii, expected);
    }

    #[test]
    fn invalid_document_is_rejected() {
        let text = r#"{"board":{"topology":"rectangle","m":4,"n":4},"reds":[[0,1,"N"]]}"#;
        let doc: Document = serde_json::from_str(text).unwrap();
        assert!(validate_document(&doc).is_err());
        let text = r#"{"board":{"topology":"rectangle","m":4,"n":4},"reds":[[1,1,"N"]],"cycles":[[[1,1],[2,3]]]}"#;
        let doc: Document = serde_json::from_str(text).unwrap();
        assert!(validate_document(&doc).is_err());
    }
}
