//! Permutations of the four squares around a board vertex.
//!
//! The square whose top-right corner is a vertex `v` plays role `A` at `v`;
//! likewise `B` (top-left), `C` (bottom-left) and `D` (bottom-right).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::board::Dir4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Corner {
    A,
    B,
    C,
    D,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::A, Corner::B, Corner::C, Corner::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> Corner {
        Corner::ALL[k]
    }

    pub fn letter(self) -> char {
        ['A', 'B', 'C', 'D'][self.index()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A bijection on `{A, B, C, D}`, stored as the images of A, B, C, D.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CornerPermutation([Corner; 4]);

impl CornerPermutation {
    pub const IDENTITY: CornerPermutation =
        CornerPermutation([Corner::A, Corner::B, Corner::C, Corner::D]);

    /// `None` unless `images` is a bijection.
    pub fn from_images(images: [Corner; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for c in images {
            if std::mem::replace(&mut seen[c.index()], true) {
                return None;
            }
        }
        Some(CornerPermutation(images))
    }

    pub fn apply(&self, c: Corner) -> Corner {
        self.0[c.index()]
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &CornerPermutation) -> CornerPermutation {
        CornerPermutation(self.0.map(|c| next.apply(c)))
    }

    pub fn inverse(&self) -> CornerPermutation {
        let mut inv = [Corner::A; 4];
        for c in Corner::ALL {
            inv[self.apply(c).index()] = c;
        }
        CornerPermutation(inv)
    }

    /// Cycles including fixed points, each starting at its smallest corner.
    pub fn cycles(&self) -> Vec<Vec<Corner>> {
        let mut seen = [false; 4];
        let mut out = Vec::new();
        for c in Corner::ALL {
            if seen[c.index()] {
                continue;
            }
            let mut cycle = vec![c];
            seen[c.index()] = true;
            let mut x = self.apply(c);
            while x != c {
                seen[x.index()] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn parity(&self) -> Parity {
        Parity::of(4 - self.cycle_count())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Images of A, B, C, D as a four-letter word, e.g. `CADB`.
    pub fn word(&self) -> String {
        self.0.iter().map(|c| c.letter()).collect()
    }
}

impl fmt::Debug for CornerPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CornerPermutation({})", self.word())
    }
}

impl fmt::Display for CornerPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

impl Serialize for CornerPermutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.word())
    }
}

/// How the roles of the four squares around `u` map to roles around the
/// next vertex when walking one red edge from `u` in direction `dir`.
pub fn step_permutation(dir: Dir4) -> CornerPermutation {
    use Corner::*;
    let east = CornerPermutation([C, A, D, B]);
    let north = CornerPermutation([C, D, B, A]);
    match dir {
        Dir4::E => east,
        Dir4::N => north,
        Dir4::W => east.inverse(),
        Dir4::S => north.inverse(),
    }
}
