//! The 960 Chess960 back-rank arrangements under the standard numbering
//! (bishops from `n mod 4` and `n/4 mod 4`, queen from `n/16 mod 6`, knights
//! from the remaining quotient, then rook-king-rook into the gaps).

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::types::PieceKind;

pub const START_POSITION_COUNT: u16 = 960;

/// Index of the orthodox chess arrangement `RNBQKBNR`.
pub const STANDARD_INDEX: u16 = 518;

/// Knight placements among the five squares left after bishops and queen.
const KNIGHT_TABLE: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StartPositionError {
    #[error("start position index {0} out of range 0..=959")]
    IndexOutOfRange(u32),
    #[error("{0:?} is not a valid Chess960 back rank")]
    InvalidBackrank(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StartPosition {
    index: u16,
    backrank: [PieceKind; 8],
}

impl StartPosition {
    pub fn from_index(index: u32) -> Result<StartPosition, StartPositionError> {
        if index >= START_POSITION_COUNT as u32 {
            return Err(StartPositionError::IndexOutOfRange(index));
        }
        Ok(all()[index as usize])
    }

    pub fn standard() -> StartPosition {
        all()[STANDARD_INDEX as usize]
    }

    pub fn index(&self) -> u16 {
        self.index
    }

    pub fn backrank(&self) -> [PieceKind; 8] {
        self.backrank
    }

    /// Back rank as an eight letter code such as `BBNNQRKR`.
    pub fn code(&self) -> String {
        self.backrank.iter().map(|k| k.letter()).collect()
    }

    /// Looks up the start position with the given back rank.
    pub fn from_backrank(backrank: [PieceKind; 8]) -> Option<StartPosition> {
        all().iter().find(|sp| sp.backrank == backrank).copied()
    }

    /// Files of the two rooks, queen side first.
    pub fn rook_files(&self) -> [u8; 2] {
        let mut files = self
            .backrank
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == PieceKind::Rook)
            .map(|(f, _)| f as u8);
        [files.next().unwrap(), files.next().unwrap()]
    }
}

impl fmt::Display for StartPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

impl fmt::Debug for StartPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StartPosition({}, {})", self.index, self.code())
    }
}

impl FromStr for StartPosition {
    type Err = StartPositionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || StartPositionError::InvalidBackrank(s.to_string());
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 8 {
            return Err(err());
        }
        let mut backrank = [PieceKind::Pawn; 8];
        for (slot, c) in backrank.iter_mut().zip(chars) {
            if !c.is_ascii_uppercase() {
                return Err(err());
            }
            *slot = PieceKind::from_letter(c).ok_or_else(err)?;
        }
        StartPosition::from_backrank(backrank).ok_or_else(err)
    }
}

/// Back rank of start position `index` under the standard numbering.
pub fn sp_backrank(index: u32) -> Result<StartPosition, StartPositionError> {
    StartPosition::from_index(index)
}

/// All 960 start positions ordered by index.
pub fn all() -> &'static [StartPosition] {
    static TABLE: OnceLock<Vec<StartPosition>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..START_POSITION_COUNT)
            .map(|i| StartPosition {
                index: i,
                backrank: decode(i),
            })
            .collect()
    })
}

fn decode(index: u16) -> [PieceKind; 8] {
    let mut slots: [Option<PieceKind>; 8] = [None; 8];
    let mut n = index as usize;

    // light-squared bishop on b, d, f or h
    slots[2 * (n % 4) + 1] = Some(PieceKind::Bishop);
    n /= 4;
    // dark-squared bishop on a, c, e or g
    slots[2 * (n % 4)] = Some(PieceKind::Bishop);
    n /= 4;

    place_nth_empty(&mut slots, n % 6, PieceKind::Queen);
    n /= 6;

    let (a, b) = KNIGHT_TABLE[n];
    // second knight goes first so the first index is unaffected
    place_nth_empty(&mut slots, b, PieceKind::Knight);
    place_nth_empty(&mut slots, a, PieceKind::Knight);

    for kind in [PieceKind::Rook, PieceKind::King, PieceKind::Rook] {
        place_nth_empty(&mut slots, 0, kind);
    }
    slots.map(|s| s.expect("all eight files filled"))
}

fn place_nth_empty(slots: &mut [Option<PieceKind>; 8], nth: usize, kind: PieceKind) {
    let file = slots
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_none())
        .nth(nth)
        .map(|(f, _)| f)
        .expect("enough empty files");
    slots[file] = Some(kind);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_indices() {
        assert_eq!(sp_backrank(518).unwrap().code(), "RNBQKBNR");
        assert_eq!(sp_backrank(0).unwrap().code(), "BBQNNRKR");
        assert_eq!(sp_backrank(959).unwrap().code(), "RKRNNQBB");
        assert_eq!(StartPosition::standard().index(), STANDARD_INDEX);
    }

    #[test]
    fn index_out_of_range() {
        assert_eq!(
            sp_backrank(960),
            Err(StartPositionError::IndexOutOfRange(960))
        );
    }

    #[test]
    fn parse_codes() {
        let sp: StartPosition = "BBNNQRKR".parse().unwrap();
        assert_eq!(sp.code(), "BBNNQRKR");
        assert_eq!(sp_backrank(sp.index() as u32).unwrap(), sp);
        // king not between rooks
        assert!("RRKNNQBB".parse::<StartPosition>().is_err());
        // bishops on same color
        assert!("BNBQRKRN".parse::<StartPosition>().is_err());
        assert!("rnbqkbnr".parse::<StartPosition>().is_err());
        assert!("RNBQKBN".parse::<StartPosition>().is_err());
    }

    #[test]
    fn rook_files_standard() {
        assert_eq!(StartPosition::standard().rook_files(), [0, 7]);
    }
}
