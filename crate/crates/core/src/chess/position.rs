use super::start::StartPosition;
use super::types::{CastleSide, Color, Move, Piece, PieceKind, Square};

pub(crate) const KNIGHT_STEPS: [(i8, i8); 8] = [
    (1, 2),
    (2, 1),
    (2, -1),
    (1, -2),
    (-1, -2),
    (-2, -1),
    (-2, 1),
    (-1, 2),
];
pub(crate) const KING_STEPS: [(i8, i8); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];
pub(crate) const ROOK_DIRS: [(i8, i8); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
pub(crate) const BISHOP_DIRS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Castle-eligible rook files for one color, as a bit set over files a..h.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CastleFiles(u8);

impl CastleFiles {
    pub const NONE: CastleFiles = CastleFiles(0);

    pub fn contains(self, file: u8) -> bool {
        self.0 & (1 << file) != 0
    }

    pub fn insert(&mut self, file: u8) {
        self.0 |= 1 << file;
    }

    pub fn remove(&mut self, file: u8) {
        self.0 &= !(1 << file);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Files in ascending order.
    pub fn files(self) -> impl Iterator<Item = u8> {
        (0..8u8).filter(move |f| self.contains(*f))
    }
}

/// Full board state. Positions are plain values; applying a move returns a
/// new position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    pub(crate) board: [Option<Piece>; 64],
    pub(crate) side_to_move: Color,
    pub(crate) castling: [CastleFiles; 2],
    pub(crate) en_passant: Option<Square>,
    pub(crate) halfmove_clock: u32,
    pub(crate) fullmove_number: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PositionError {
    #[error("{0} has {1} kings, expected exactly one")]
    KingCount(Color, usize),
    #[error("pawn on back rank square {0}")]
    PawnOnBackRank(Square),
    #[error("{color} castling right on file {file} has no matching rook and king")]
    CastlingRight { color: Color, file: char },
    #[error("{0} castling rights on the same side of the king")]
    CastlingSides(Color),
    #[error("en passant square {0} is not on rank 3 or 6")]
    EnPassantRank(Square),
    #[error("fullmove number must be at least 1")]
    FullmoveZero,
}

pub fn initial_position(sp: &StartPosition) -> Position {
    let mut board = [None; 64];
    for (file, kind) in sp.backrank().into_iter().enumerate() {
        let file = file as u8;
        for color in Color::ALL {
            board[Square::new(file, color.back_rank()).unwrap().index()] =
                Some(Piece::new(color, kind));
            board[Square::new(file, color.pawn_rank()).unwrap().index()] =
                Some(Piece::new(color, PieceKind::Pawn));
        }
    }
    let mut rights = CastleFiles::NONE;
    for f in sp.rook_files() {
        rights.insert(f);
    }
    Position {
        board,
        side_to_move: Color::White,
        castling: [rights, rights],
        en_passant: None,
        halfmove_clock: 0,
        fullmove_number: 1,
    }
}

impl Position {
    /// A board with no pieces. Not a valid position by itself; used to
    /// assemble positions square by square before [`Position::validate`].
    pub fn empty() -> Position {
        Position {
            board: [None; 64],
            side_to_move: Color::White,
            castling: [CastleFiles::NONE; 2],
            en_passant: None,
            halfmove_clock: 0,
            fullmove_number: 1,
        }
    }

    #[inline]
    pub fn piece_at(&self, sq: Square) -> Option<Piece> {
        self.board[sq.index()]
    }

    pub fn side_to_move(&self) -> Color {
        self.side_to_move
    }

    pub fn castling_rights(&self, color: Color) -> CastleFiles {
        self.castling[color.index()]
    }

    pub fn en_passant(&self) -> Option<Square> {
        self.en_passant
    }

    pub fn halfmove_clock(&self) -> u32 {
        self.halfmove_clock
    }

    pub fn fullmove_number(&self) -> u32 {
        self.fullmove_number
    }

    pub fn pieces(&self) -> impl Iterator<Item = (Square, Piece)> + '_ {
        Square::all().filter_map(move |sq| self.piece_at(sq).map(|p| (sq, p)))
    }

    pub fn count(&self, color: Color) -> usize {
        self.pieces().filter(|(_, p)| p.color == color).count()
    }

    pub fn king_square(&self, color: Color) -> Option<Square> {
        self.pieces()
            .find(|(_, p)| p.color == color && p.kind == PieceKind::King)
            .map(|(sq, _)| sq)
    }

    /// Checks the structural invariants every reachable position satisfies.
    pub fn validate(&self) -> Result<(), PositionError> {
        for color in Color::ALL {
            let kings = self
                .pieces()
                .filter(|(_, p)| p.color == color && p.kind == PieceKind::King)
                .count();
            if kings != 1 {
                return Err(PositionError::KingCount(color, kings));
            }
        }
        for (sq, p) in self.pieces() {
            if p.kind == PieceKind::Pawn && (sq.rank() == 0 || sq.rank() == 7) {
                return Err(PositionError::PawnOnBackRank(sq));
            }
        }
        for color in Color::ALL {
            let rights = self.castling[color.index()];
            if rights.is_empty() {
                continue;
            }
            let rank = color.back_rank();
            let king = self.king_square(color).unwrap();
            for file in rights.files() {
                let rook = self.piece_at(Square::new(file, rank).unwrap());
                if king.rank() != rank || rook != Some(Piece::new(color, PieceKind::Rook)) {
                    return Err(PositionError::CastlingRight {
                        color,
                        file: (b'a' + file) as char,
                    });
                }
            }
            let below = rights.files().filter(|f| *f < king.file()).count();
            let above = rights.files().filter(|f| *f > king.file()).count();
            if below > 1 || above > 1 {
                return Err(PositionError::CastlingSides(color));
            }
        }
        if let Some(ep) = self.en_passant {
            if ep.rank() != 2 && ep.rank() != 5 {
                return Err(PositionError::EnPassantRank(ep));
            }
        }
        if self.fullmove_number == 0 {
            return Err(PositionError::FullmoveZero);
        }
        Ok(())
    }

    /// Rook file used when `color` castles towards `side`, if the right exists.
    pub(crate) fn castle_rook_file(&self, color: Color, side: CastleSide) -> Option<u8> {
        let king = self.king_square(color)?;
        let rights = self.castling[color.index()];
        match side {
            CastleSide::King => rights.files().find(|f| *f > king.file()),
            CastleSide::Queen => rights.files().find(|f| *f < king.file()),
        }
    }

    /// True if `sq` is attacked by any piece of color `by`.
    pub fn is_attacked(&self, sq: Square, by: Color) -> bool {
        // a pawn of color `by` attacks diagonally forward, so look backwards
        let back = -by.forward();
        for df in [-1, 1] {
            if let Some(from) = sq.offset(df, back) {
                if self.piece_at(from) == Some(Piece::new(by, PieceKind::Pawn)) {
                    return true;
                }
            }
        }
        for (df, dr) in KNIGHT_STEPS {
            if let Some(from) = sq.offset(df, dr) {
                if self.piece_at(from) == Some(Piece::new(by, PieceKind::Knight)) {
                    return true;
                }
            }
        }
        for (df, dr) in KING_STEPS {
            if let Some(from) = sq.offset(df, dr) {
                if self.piece_at(from) == Some(Piece::new(by, PieceKind::King)) {
                    return true;
                }
            }
        }
        self.slider_attacks(sq, by, &ROOK_DIRS, PieceKind::Rook)
            || self.slider_attacks(sq, by, &BISHOP_DIRS, PieceKind::Bishop)
    }

    fn slider_attacks(&self, sq: Square, by: Color, dirs: &[(i8, i8)], kind: PieceKind) -> bool {
        for &(df, dr) in dirs {
            let mut cur = sq;
            while let Some(next) = cur.offset(df, dr) {
                if let Some(p) = self.piece_at(next) {
                    if p.color == by && (p.kind == kind || p.kind == PieceKind::Queen) {
                        return true;
                    }
                    break;
                }
                cur = next;
            }
        }
        false
    }

    pub fn in_check(&self) -> bool {
        match self.king_square(self.side_to_move) {
            Some(k) => self.is_attacked(k, self.side_to_move.opposite()),
            None => false,
        }
    }

    /// Applies a move without checking legality. The move must come from
    /// [`legal_moves`](super::legal_moves) (or be pseudo-legal) for the
    /// result to be meaningful.
    pub fn apply_move(&self, mv: &Move) -> Position {
        let mut next = self.clone();
        let us = self.side_to_move;
        let them = us.opposite();
        let rank = us.back_rank();
        next.en_passant = None;

        if let Some(side) = mv.castle {
            let rook_file = self
                .castle_rook_file(us, side)
                .expect("castling move requires a matching right");
            let rook_from = Square::new(rook_file, rank).unwrap();
            let king_to = Square::new(side.king_dest_file(), rank).unwrap();
            let rook_to = Square::new(side.rook_dest_file(), rank).unwrap();
            next.board[mv.from.index()] = None;
            next.board[rook_from.index()] = None;
            next.board[king_to.index()] = Some(Piece::new(us, PieceKind::King));
            next.board[rook_to.index()] = Some(Piece::new(us, PieceKind::Rook));
            next.castling[us.index()] = CastleFiles::NONE;
            next.halfmove_clock += 1;
        } else {
            let moving = self
                .piece_at(mv.from)
                .expect("move from an occupied square");
            let captured = self.piece_at(mv.to);
            let mut reset_clock = captured.is_some() || moving.kind == PieceKind::Pawn;

            if moving.kind == PieceKind::Pawn
                && Some(mv.to) == self.en_passant
                && captured.is_none()
            {
                let victim = Square::new(mv.to.file(), mv.from.rank()).unwrap();
                next.board[victim.index()] = None;
                reset_clock = true;
            }
            if moving.kind == PieceKind::Pawn && mv.from.rank().abs_diff(mv.to.rank()) == 2 {
                next.en_passant = Square::new(mv.from.file(), (mv.from.rank() + mv.to.rank()) / 2);
            }

            let placed = match mv.promotion {
                Some(kind) => Piece::new(us, kind),
                None => moving,
            };
            next.board[mv.from.index()] = None;
            next.board[mv.to.index()] = Some(placed);

            if moving.kind == PieceKind::King {
                next.castling[us.index()] = CastleFiles::NONE;
            } else if moving.kind == PieceKind::Rook && mv.from.rank() == rank {
                next.castling[us.index()].remove(mv.from.file());
            }
            if let Some(c) = captured {
                if c.kind == PieceKind::Rook && mv.to.rank() == them.back_rank() {
                    next.castling[them.index()].remove(mv.to.file());
                }
            }
            next.halfmove_clock = if reset_clock {
                0
            } else {
                self.halfmove_clock + 1
            };
        }

        if us == Color::Black {
            next.fullmove_number += 1;
        }
        next.side_to_move = them;
        next
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::start::all;

    #[test]
    fn initial_position_shape() {
        for sp in all() {
            let p = initial_position(sp);
            assert_eq!(p.count(Color::White), 16);
            assert_eq!(p.count(Color::Black), 16);
            let pawns = |c| {
                p.pieces()
                    .filter(|(_, pc)| pc.color == c && pc.kind == PieceKind::Pawn)
                    .count()
            };
            assert_eq!(pawns(Color::White), 8);
            assert_eq!(pawns(Color::Black), 8);
            for c in Color::ALL {
                let files: Vec<u8> = p.castling_rights(c).files().collect();
                assert_eq!(files, sp.rook_files().to_vec());
            }
            assert_eq!(p.side_to_move(), Color::White);
            assert_eq!(p.fullmove_number(), 1);
            p.validate().unwrap();
        }
    }

    #[test]
    fn validate_rejects_missing_king() {
        let mut p = initial_position(&StartPosition::standard());
        p.board["e1".parse::<Square>().unwrap().index()] = None;
        assert_eq!(p.validate(), Err(PositionError::KingCount(Color::White, 0)));
    }

    #[test]
    fn validate_rejects_stale_castling_right() {
        let mut p = initial_position(&StartPosition::standard());
        p.board["h1".parse::<Square>().unwrap().index()] = None;
        assert!(matches!(
            p.validate(),
            Err(PositionError::CastlingRight {
                color: Color::White,
                file: 'h'
            })
        ));
    }

    #[test]
    fn attacks_from_start() {
        let p = initial_position(&StartPosition::standard());
        assert!(p.is_attacked("f3".parse().unwrap(), Color::White));
        assert!(!p.is_attacked("e4".parse().unwrap(), Color::White));
        assert!(p.is_attacked("f6".parse().unwrap(), Color::Black));
        assert!(!p.in_check());
    }
}
