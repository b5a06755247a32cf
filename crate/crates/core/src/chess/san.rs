//! Standard Algebraic Notation: resolving tokens against the legal moves of a
//! position, and producing minimally disambiguated tokens for moves.

use super::movegen::legal_moves;
use super::position::Position;
use super::types::{CastleSide, Move, PieceKind, Square};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SanError {
    #[error("illegal move {0:?}")]
    Illegal(String),
    #[error("ambiguous move {0:?}")]
    Ambiguous(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SanPattern {
    Castle(CastleSide),
    Piece {
        kind: PieceKind,
        from_file: Option<u8>,
        from_rank: Option<u8>,
        to: Square,
        promotion: Option<PieceKind>,
    },
}

/// Removes check/mate markers and annotation glyphs (`!`, `?`, `!?` ...).
pub fn strip_san_suffixes(token: &str) -> &str {
    token.trim_end_matches(['+', '#', '!', '?'])
}

fn parse_pattern(token: &str) -> Option<SanPattern> {
    let core = strip_san_suffixes(token.trim());
    match core {
        "O-O" | "0-0" => return Some(SanPattern::Castle(CastleSide::King)),
        "O-O-O" | "0-0-0" => return Some(SanPattern::Castle(CastleSide::Queen)),
        _ => {}
    }
    if !core.is_ascii() || core.len() < 2 {
        return None;
    }
    let mut s = core;

    let mut promotion = None;
    if let Some(idx) = s.find('=') {
        let promo = &s[idx + 1..];
        let mut chars = promo.chars();
        let kind = PieceKind::from_letter(chars.next()?)?;
        if chars.next().is_some() {
            return None;
        }
        promotion = Some(kind);
        s = &s[..idx];
    } else if let Some(last) = s.chars().last() {
        // promotions written without '=' such as "e8Q"
        if last.is_ascii_uppercase() && s.len() >= 3 {
            promotion = Some(PieceKind::from_letter(last)?);
            s = &s[..s.len() - 1];
        }
    }
    if let Some(kind) = promotion {
        if matches!(kind, PieceKind::King | PieceKind::Pawn) {
            return None;
        }
    }

    let bytes = s.as_bytes();
    let (kind, rest) = match bytes.first()? {
        b'K' | b'Q' | b'R' | b'B' | b'N' => (PieceKind::from_letter(bytes[0] as char)?, &s[1..]),
        b'a'..=b'h' => (PieceKind::Pawn, s),
        _ => return None,
    };
    if rest.len() < 2 {
        return None;
    }
    let to: Square = rest[rest.len() - 2..].parse().ok()?;
    let mut disambig = &rest[..rest.len() - 2];
    if let Some(d) = disambig.strip_suffix('x') {
        disambig = d;
    }
    let mut from_file = None;
    let mut from_rank = None;
    for c in disambig.chars() {
        match c {
            'a'..='h' if from_file.is_none() && from_rank.is_none() => {
                from_file = Some(c as u8 - b'a')
            }
            '1'..='8' if from_rank.is_none() => from_rank = Some(c as u8 - b'1'),
            _ => return None,
        }
    }
    if promotion.is_some() && kind != PieceKind::Pawn {
        return None;
    }
    if kind == PieceKind::Pawn {
        // a bare pawn token is a push along its own file
        from_file = from_file.or(Some(to.file()));
    }
    Some(SanPattern::Piece {
        kind,
        from_file,
        from_rank,
        to,
        promotion,
    })
}

/// Resolves a SAN token to the unique matching legal move.
pub fn parse_san(pos: &Position, token: &str) -> Result<Move, SanError> {
    let pattern = parse_pattern(token).ok_or_else(|| SanError::Illegal(token.to_string()))?;
    let mut found: Option<Move> = None;
    let mut count = 0;
    for mv in legal_moves(pos) {
        if matches(pos, &mv, &pattern) {
            count += 1;
            found = Some(mv);
        }
    }
    match (count, found) {
        (1, Some(mv)) => Ok(mv),
        (0, _) => Err(SanError::Illegal(token.to_string())),
        _ => Err(SanError::Ambiguous(token.to_string())),
    }
}

fn matches(pos: &Position, mv: &Move, pattern: &SanPattern) -> bool {
    match *pattern {
        SanPattern::Castle(side) => mv.castle == Some(side),
        SanPattern::Piece {
            kind,
            from_file,
            from_rank,
            to,
            promotion,
        } => {
            if mv.castle.is_some() || mv.to != to || mv.promotion != promotion {
                return false;
            }
            let Some(piece) = pos.piece_at(mv.from) else {
                return false;
            };
            piece.kind == kind
                && from_file.is_none_or(|f| mv.from.file() == f)
                && from_rank.is_none_or(|r| mv.from.rank() == r)
        }
    }
}

/// Applies a SAN token, returning the resulting position.
pub fn apply_san(pos: &Position, token: &str) -> Result<Position, SanError> {
    let mv = parse_san(pos, token)?;
    Ok(pos.apply_move(&mv))
}

/// SAN for a legal move, with the minimal disambiguation and a `+`/`#`
/// suffix when the move gives check or mate.
pub fn san_of(pos: &Position, mv: &Move) -> String {
    let mut s = san_without_suffix(pos, mv);
    let next = pos.apply_move(mv);
    if next.in_check() {
        s.push(if legal_moves(&next).is_empty() {
            '#'
        } else {
            '+'
        });
    }
    s
}

fn san_without_suffix(pos: &Position, mv: &Move) -> String {
    match mv.castle {
        Some(CastleSide::King) => return "O-O".to_string(),
        Some(CastleSide::Queen) => return "O-O-O".to_string(),
        None => {}
    }
    let piece = pos.piece_at(mv.from).expect("move from an occupied square");
    let capture = pos.piece_at(mv.to).is_some()
        || (piece.kind == PieceKind::Pawn && mv.from.file() != mv.to.file());
    let mut s = String::with_capacity(7);

    if piece.kind == PieceKind::Pawn {
        if capture {
            s.push((b'a' + mv.from.file()) as char);
        }
    } else {
        s.push(piece.kind.letter());
        let rivals: Vec<Move> = legal_moves(pos)
            .into_iter()
            .filter(|m| {
                m.castle.is_none()
                    && m.to == mv.to
                    && m.from != mv.from
                    && pos.piece_at(m.from) == Some(piece)
            })
            .collect();
        if !rivals.is_empty() {
            let file_unique = rivals.iter().all(|m| m.from.file() != mv.from.file());
            let rank_unique = rivals.iter().all(|m| m.from.rank() != mv.from.rank());
            if file_unique {
                s.push((b'a' + mv.from.file()) as char);
            } else if rank_unique {
                s.push((b'1' + mv.from.rank()) as char);
            } else {
                s.push_str(&mv.from.to_string());
            }
        }
    }
    if capture {
        s.push('x');
    }
    s.push_str(&mv.to.to_string());
    if let Some(p) = mv.promotion {
        s.push('=');
        s.push(p.letter());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::fen::{emit_fen, parse_fen};
    use crate::chess::position::initial_position;
    use crate::chess::start::StartPosition;
    use crate::chess::types::{Color, Piece};

    fn start() -> Position {
        initial_position(&StartPosition::standard())
    }

    #[test]
    fn e4_from_start() {
        let p = apply_san(&start(), "e4").unwrap();
        let fen = emit_fen(&p);
        let fields: Vec<&str> = fen.split(' ').collect();
        assert_eq!(fields[0], "rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR");
        assert_eq!(fields[1], "b");
        assert_eq!(fields[3], "e3");
    }

    #[test]
    fn counters_follow_fide() {
        let p = apply_san(&start(), "Nf3").unwrap();
        assert_eq!((p.halfmove_clock(), p.fullmove_number()), (1, 1));
        let p = apply_san(&p, "Nf6").unwrap();
        assert_eq!((p.halfmove_clock(), p.fullmove_number()), (2, 2));
        let p = apply_san(&p, "e4").unwrap();
        assert_eq!((p.halfmove_clock(), p.fullmove_number()), (0, 2));
    }

    #[test]
    fn chess960_kingside_castle_from_b_file() {
        // king b1, kingside rook e1
        let p = parse_fen("1k6/8/8/8/8/8/8/1K2R3 w E - 0 1").unwrap();
        let next = apply_san(&p, "O-O").unwrap();
        assert_eq!(
            next.piece_at("g1".parse().unwrap()),
            Some(Piece::new(Color::White, PieceKind::King))
        );
        assert_eq!(
            next.piece_at("f1".parse().unwrap()),
            Some(Piece::new(Color::White, PieceKind::Rook))
        );
        assert!(next.piece_at("b1".parse().unwrap()).is_none());
        assert!(next.piece_at("e1".parse().unwrap()).is_none());
        assert!(apply_san(&p, "0-0").is_ok());
    }

    #[test]
    fn malformed_and_illegal_tokens() {
        assert_eq!(
            apply_san(&start(), "Qz9"),
            Err(SanError::Illegal("Qz9".into()))
        );
        assert_eq!(
            apply_san(&start(), "e5"),
            Err(SanError::Illegal("e5".into()))
        );
        assert_eq!(
            apply_san(&start(), "O-O"),
            Err(SanError::Illegal("O-O".into()))
        );
        assert!(apply_san(&start(), "").is_err());
    }

    #[test]
    fn ambiguity_detected_and_disambiguated() {
        let p = parse_fen("4k3/8/8/8/8/8/8/R4RK1 w - - 0 1").unwrap();
        assert_eq!(parse_san(&p, "Rd1"), Err(SanError::Ambiguous("Rd1".into())));
        let mv = parse_san(&p, "Rad1").unwrap();
        assert_eq!(mv.from, "a1".parse().unwrap());
        assert_eq!(san_of(&p, &mv), "Rad1");
        let p = parse_fen("4k3/8/8/R7/8/8/8/R3K3 w - - 0 1").unwrap();
        let mv = parse_san(&p, "R5a3").unwrap();
        assert_eq!(san_of(&p, &mv), "R5a3");
    }

    #[test]
    fn annotations_and_suffixes_stripped() {
        assert!(apply_san(&start(), "e4!?").is_ok());
        assert!(apply_san(&start(), "Nf3+").is_ok());
        assert!(apply_san(&start(), "Nf3?!").is_ok());
    }

    #[test]
    fn promotion_forms() {
        let p = parse_fen("8/4P2k/8/8/8/8/8/4K3 w - - 0 1").unwrap();
        let q = parse_san(&p, "e8=Q").unwrap();
        assert_eq!(q.promotion, Some(PieceKind::Queen));
        assert_eq!(
            parse_san(&p, "e8N").unwrap().promotion,
            Some(PieceKind::Knight)
        );
        assert!(parse_san(&p, "e8").is_err());
        assert!(parse_san(&p, "e8=K").is_err());
        assert_eq!(san_of(&p, &q), "e8=Q");
    }

    #[test]
    fn mate_suffix() {
        let p =
            parse_fen("rnbqkbnr/pppp1ppp/8/4p3/6P1/5P2/PPPPP2P/RNBQKBNR b KQkq g3 0 2").unwrap();
        let mv = parse_san(&p, "Qh4").unwrap();
        assert_eq!(san_of(&p, &mv), "Qh4#");
    }

    #[test]
    fn pawn_push_does_not_match_capture() {
        let p = parse_fen("4k3/8/8/4p3/3P1P2/8/8/4K3 b - - 0 1").unwrap();
        assert_eq!(parse_san(&p, "e4").unwrap().from, "e5".parse().unwrap());
        assert_eq!(parse_san(&p, "exd4").unwrap().to, "d4".parse().unwrap());
    }

    #[test]
    fn en_passant_capture_san() {
        let p = parse_fen("4k3/8/8/3pP3/8/8/8/4K3 w - d6 0 1").unwrap();
        let mv = parse_san(&p, "exd6").unwrap();
        assert_eq!(san_of(&p, &mv), "exd6");
        let next = p.apply_move(&mv);
        assert!(next.piece_at("d5".parse().unwrap()).is_none());
    }
}
