//! Forsyth-Edwards Notation.
//!
//! Parsing accepts classical `KQkq` castling fields (mapped to the outermost
//! rook on each side of the king) as well as Shredder-style file letters
//! (`HAha`). Emission always uses file letters, so any Chess960 position
//! survives a round trip.

use std::fmt::Write as _;

use super::position::{CastleFiles, Position, PositionError};
use super::types::{Color, Piece, PieceKind, Square};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FenError {
    #[error("expected 6 fields, found {0}")]
    FieldCount(usize),
    #[error("piece placement: {0}")]
    Placement(String),
    #[error("side to move: unexpected {0:?}")]
    SideToMove(String),
    #[error("castling: {0}")]
    Castling(String),
    #[error("en passant: invalid square {0:?}")]
    EnPassant(String),
    #[error("halfmove clock: invalid value {0:?}")]
    Halfmove(String),
    #[error("fullmove number: invalid value {0:?}")]
    Fullmove(String),
    #[error("invalid position: {0}")]
    Invalid(#[from] PositionError),
}

pub fn parse_fen(text: &str) -> Result<Position, FenError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 6 {
        return Err(FenError::FieldCount(fields.len()));
    }
    let mut pos = Position::empty();
    parse_placement(fields[0], &mut pos)?;

    pos.side_to_move = match fields[1] {
        "w" => Color::White,
        "b" => Color::Black,
        other => return Err(FenError::SideToMove(other.to_string())),
    };

    parse_castling(fields[2], &mut pos)?;

    pos.en_passant = match fields[3] {
        "-" => None,
        s => Some(
            s.parse::<Square>()
                .map_err(|_| FenError::EnPassant(s.to_string()))?,
        ),
    };
    pos.halfmove_clock = fields[4]
        .parse()
        .map_err(|_| FenError::Halfmove(fields[4].to_string()))?;
    pos.fullmove_number = fields[5]
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| FenError::Fullmove(fields[5].to_string()))?;

    pos.validate()?;
    Ok(pos)
}

fn parse_placement(field: &str, pos: &mut Position) -> Result<(), FenError> {
    let ranks: Vec<&str> = field.split('/').collect();
    if ranks.len() != 8 {
        return Err(FenError::Placement(format!(
            "expected 8 ranks, found {}",
            ranks.len()
        )));
    }
    for (i, row) in ranks.iter().enumerate() {
        let rank = 7 - i as u8;
        let mut file = 0u8;
        for c in row.chars() {
            if let Some(d) = c.to_digit(10) {
                if !(1..=8).contains(&d) {
                    return Err(FenError::Placement(format!("bad empty-run digit {c:?}")));
                }
                file += d as u8;
            } else {
                let piece = Piece::from_fen_char(c)
                    .ok_or_else(|| FenError::Placement(format!("unknown piece letter {c:?}")))?;
                if file >= 8 {
                    return Err(FenError::Placement(format!(
                        "rank {} has more than 8 squares",
                        rank + 1
                    )));
                }
                pos.board[Square::new(file, rank).unwrap().index()] = Some(piece);
                file += 1;
            }
            if file > 8 {
                return Err(FenError::Placement(format!(
                    "rank {} has more than 8 squares",
                    rank + 1
                )));
            }
        }
        if file != 8 {
            return Err(FenError::Placement(format!(
                "rank {} has {} squares",
                rank + 1,
                file
            )));
        }
    }
    Ok(())
}

fn parse_castling(field: &str, pos: &mut Position) -> Result<(), FenError> {
    if field == "-" {
        return Ok(());
    }
    for c in field.chars() {
        let color = if c.is_ascii_uppercase() {
            Color::White
        } else {
            Color::Black
        };
        let rank = color.back_rank();
        let king = pos
            .king_square(color)
            .filter(|k| k.rank() == rank)
            .ok_or_else(|| {
                FenError::Castling(format!("{c:?} without a {color} king on its back rank"))
            })?;
        let is_rook = |f: u8| {
            pos.piece_at(Square::new(f, rank).unwrap()) == Some(Piece::new(color, PieceKind::Rook))
        };
        let file = match c.to_ascii_lowercase() {
            'k' => (king.file() + 1..8).rev().find(|f| is_rook(*f)),
            'q' => (0..king.file()).find(|f| is_rook(*f)),
            l @ 'a'..='h' => Some(l as u8 - b'a').filter(|f| is_rook(*f)),
            _ => return Err(FenError::Castling(format!("unexpected character {c:?}"))),
        }
        .ok_or_else(|| FenError::Castling(format!("{c:?} names no {color} rook")))?;
        let rights = &mut pos.castling[color.index()];
        if rights.contains(file) {
            return Err(FenError::Castling(format!("duplicate right {c:?}")));
        }
        rights.insert(file);
    }
    for color in Color::ALL {
        let rights = pos.castling[color.index()];
        if rights.len() > 2 {
            return Err(FenError::Castling(format!("more than two {color} rights")));
        }
    }
    Ok(())
}

/// Canonical six-field FEN with file-letter castling rights.
pub fn emit_fen(pos: &Position) -> String {
    let mut out = String::with_capacity(90);
    for rank in (0..8u8).rev() {
        let mut empty = 0;
        for file in 0..8u8 {
            match pos.piece_at(Square::new(file, rank).unwrap()) {
                Some(p) => {
                    if empty > 0 {
                        write!(out, "{empty}").unwrap();
                        empty = 0;
                    }
                    out.push(p.fen_char());
                }
                None => empty += 1,
            }
        }
        if empty > 0 {
            write!(out, "{empty}").unwrap();
        }
        if rank > 0 {
            out.push('/');
        }
    }
    out.push(' ');
    out.push(match pos.side_to_move {
        Color::White => 'w',
        Color::Black => 'b',
    });
    out.push(' ');
    out.push_str(&castling_field(pos.castling));
    out.push(' ');
    match pos.en_passant {
        Some(sq) => write!(out, "{sq}").unwrap(),
        None => out.push('-'),
    }
    write!(out, " {} {}", pos.halfmove_clock, pos.fullmove_number).unwrap();
    out
}

fn castling_field(rights: [CastleFiles; 2]) -> String {
    let mut s = String::new();
    for color in Color::ALL {
        let files: Vec<u8> = rights[color.index()].files().collect();
        for f in files.into_iter().rev() {
            let c = (b'a' + f) as char;
            s.push(match color {
                Color::White => c.to_ascii_uppercase(),
                Color::Black => c,
            });
        }
    }
    if s.is_empty() {
        s.push('-');
    }
    s
}
