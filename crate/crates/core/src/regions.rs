//! Five-region board partition and per-color region piece counts.
//!
//! The centre is an irregular 12-square block, so membership is listed
//! square by square rather than computed.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::chess::{Color, Position, Square};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionId {
    Centre,
    WhiteKingside,
    WhiteQueenside,
    BlackKingside,
    BlackQueenside,
}

pub const REGION_COUNT: usize = 5;

impl RegionId {
    /// Fixed order used for feature columns and tie-breaking.
    pub const ALL: [RegionId; REGION_COUNT] = [
        RegionId::Centre,
        RegionId::WhiteKingside,
        RegionId::WhiteQueenside,
        RegionId::BlackKingside,
        RegionId::BlackQueenside,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn squares(self) -> &'static [&'static str] {
        match self {
            RegionId::Centre => &CENTRE,
            RegionId::WhiteKingside => &WHITE_KINGSIDE,
            RegionId::WhiteQueenside => &WHITE_QUEENSIDE,
            RegionId::BlackKingside => &BLACK_KINGSIDE,
            RegionId::BlackQueenside => &BLACK_QUEENSIDE,
        }
    }

    /// Table heading name, e.g. "White Kingside".
    pub fn name(self) -> &'static str {
        match self {
            RegionId::Centre => "Centre",
            RegionId::WhiteKingside => "White Kingside",
            RegionId::WhiteQueenside => "White Queenside",
            RegionId::BlackKingside => "Black Kingside",
            RegionId::BlackQueenside => "Black Queenside",
        }
    }

    /// Compact name used in category headings, e.g. "White K Side".
    pub fn short_name(self) -> &'static str {
        match self {
            RegionId::Centre => "Centre",
            RegionId::WhiteKingside => "White K Side",
            RegionId::WhiteQueenside => "White Q Side",
            RegionId::BlackKingside => "Black K Side",
            RegionId::BlackQueenside => "Black Q Side",
        }
    }

    /// Column suffix used in CSV headers.
    pub fn column_tag(self) -> &'static str {
        match self {
            RegionId::Centre => "C",
            RegionId::WhiteKingside => "WK",
            RegionId::WhiteQueenside => "WQ",
            RegionId::BlackKingside => "BK",
            RegionId::BlackQueenside => "BQ",
        }
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        RegionId::ALL
            .into_iter()
            .find(|r| {
                [r.name(), r.short_name(), r.column_tag(), &format!("{r:?}")]
                    .iter()
                    .any(|n| {
                        n.chars()
                            .filter(|c| c.is_ascii_alphanumeric())
                            .collect::<String>()
                            .to_ascii_lowercase()
                            == key
                    })
            })
            .ok_or_else(|| format!("unknown region {s:?}"))
    }
}

const CENTRE: [&str; 12] = [
    "c4", "c5", "d3", "d4", "d5", "d6", "e3", "e4", "e5", "e6", "f4", "f5",
];
const WHITE_KINGSIDE: [&str; 13] = [
    "h1", "h2", "h3", "h4", "g1", "g2", "g3", "g4", "f1", "f2", "f3", "e1", "e2",
];
const WHITE_QUEENSIDE: [&str; 13] = [
    "a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4", "c1", "c2", "c3", "d1", "d2",
];
const BLACK_KINGSIDE: [&str; 13] = [
    "h8", "h7", "h6", "h5", "g8", "g7", "g6", "g5", "f8", "f7", "f6", "e8", "e7",
];
const BLACK_QUEENSIDE: [&str; 13] = [
    "a8", "a7", "a6", "a5", "b8", "b7", "b6", "b5", "c8", "c7", "c6", "d8", "d7",
];

fn region_table() -> &'static [Option<RegionId>; 64] {
    static TABLE: OnceLock<[Option<RegionId>; 64]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [None; 64];
        for region in RegionId::ALL {
            for name in region.squares() {
                let sq: Square = name.parse().expect("region square names are valid");
                table[sq.index()] = Some(region);
            }
        }
        table
    })
}

pub fn region_of(sq: Square) -> RegionId {
    region_table()[sq.index()].expect("regions cover the board")
}

/// Per-color piece counts over the five regions, indexed by
/// [`RegionId::index`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionCounts {
    pub white: [u8; REGION_COUNT],
    pub black: [u8; REGION_COUNT],
}

impl RegionCounts {
    pub fn side(&self, color: Color) -> &[u8; REGION_COUNT] {
        match color {
            Color::White => &self.white,
            Color::Black => &self.black,
        }
    }

    pub fn get(&self, color: Color, region: RegionId) -> u8 {
        self.side(color)[region.index()]
    }

    pub fn total(&self, color: Color) -> u32 {
        self.side(color).iter().map(|&c| c as u32).sum()
    }

    /// White's five counts followed by Black's, in region order.
    pub fn to_features(&self) -> [u8; 2 * REGION_COUNT] {
        let mut out = [0; 2 * REGION_COUNT];
        out[..REGION_COUNT].copy_from_slice(&self.white);
        out[REGION_COUNT..].copy_from_slice(&self.black);
        out
    }

    pub fn from_features(features: &[u8; 2 * REGION_COUNT]) -> RegionCounts {
        let mut c = RegionCounts::default();
        c.white.copy_from_slice(&features[..REGION_COUNT]);
        c.black.copy_from_slice(&features[REGION_COUNT..]);
        c
    }
}

/// Counts every man (pawns and kings included) of each color per region.
pub fn count_regions(pos: &Position) -> RegionCounts {
    let mut counts = RegionCounts::default();
    for (sq, piece) in pos.pieces() {
        let r = region_of(sq).index();
        match piece.color {
            Color::White => counts.white[r] += 1,
            Color::Black => counts.black[r] += 1,
        }
    }
    counts
}
