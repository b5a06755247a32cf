use super::position::{Position, BISHOP_DIRS, KING_STEPS, KNIGHT_STEPS, ROOK_DIRS};
use super::types::{CastleSide, Color, Move, Piece, PieceKind, Square};

/// All legal moves in `pos`, including Chess960 castling.
pub fn legal_moves(pos: &Position) -> Vec<Move> {
    let us = pos.side_to_move;
    let mut moves = Vec::with_capacity(48);
    pseudo_legal(pos, &mut moves);
    moves.retain(|mv| {
        let next = pos.apply_move(mv);
        match next.king_square(us) {
            Some(k) => !next.is_attacked(k, us.opposite()),
            None => false,
        }
    });
    castling_moves(pos, &mut moves);
    moves
}

/// Number of leaf nodes of the legal move tree to `depth` plies.
pub fn perft(pos: &Position, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    let moves = legal_moves(pos);
    if depth == 1 {
        return moves.len() as u64;
    }
    moves
        .iter()
        .map(|mv| perft(&pos.apply_move(mv), depth - 1))
        .sum()
}

fn pseudo_legal(pos: &Position, out: &mut Vec<Move>) {
    let us = pos.side_to_move;
    for (from, piece) in pos.pieces() {
        if piece.color != us {
            continue;
        }
        match piece.kind {
            PieceKind::Pawn => pawn_moves(pos, from, us, out),
            PieceKind::Knight => step_moves(pos, from, us, &KNIGHT_STEPS, out),
            PieceKind::King => step_moves(pos, from, us, &KING_STEPS, out),
            PieceKind::Bishop => slide_moves(pos, from, us, &BISHOP_DIRS, out),
            PieceKind::Rook => slide_moves(pos, from, us, &ROOK_DIRS, out),
            PieceKind::Queen => {
                slide_moves(pos, from, us, &ROOK_DIRS, out);
                slide_moves(pos, from, us, &BISHOP_DIRS, out);
            }
        }
    }
}

fn push_pawn_move(from: Square, to: Square, out: &mut Vec<Move>) {
    if to.rank() == 0 || to.rank() == 7 {
        for kind in PieceKind::PROMOTIONS {
            out.push(Move {
                from,
                to,
                promotion: Some(kind),
                castle: None,
            });
        }
    } else {
        out.push(Move::normal(from, to));
    }
}

fn pawn_moves(pos: &Position, from: Square, us: Color, out: &mut Vec<Move>) {
    let fwd = us.forward();
    if let Some(one) = from.offset(0, fwd) {
        if pos.piece_at(one).is_none() {
            push_pawn_move(from, one, out);
            if from.rank() == us.pawn_rank() {
                let two = one.offset(0, fwd).unwrap();
                if pos.piece_at(two).is_none() {
                    out.push(Move::normal(from, two));
                }
            }
        }
    }
    for df in [-1, 1] {
        let Some(to) = from.offset(df, fwd) else {
            continue;
        };
        match pos.piece_at(to) {
            Some(p) if p.color != us => push_pawn_move(from, to, out),
            None if pos.en_passant == Some(to) => {
                let victim = Square::new(to.file(), from.rank()).unwrap();
                if pos.piece_at(victim) == Some(Piece::new(us.opposite(), PieceKind::Pawn)) {
                    out.push(Move::normal(from, to));
                }
            }
            _ => {}
        }
    }
}

fn step_moves(pos: &Position, from: Square, us: Color, steps: &[(i8, i8)], out: &mut Vec<Move>) {
    for &(df, dr) in steps {
        if let Some(to) = from.offset(df, dr) {
            if pos.piece_at(to).is_none_or(|p| p.color != us) {
                out.push(Move::normal(from, to));
            }
        }
    }
}

fn slide_moves(pos: &Position, from: Square, us: Color, dirs: &[(i8, i8)], out: &mut Vec<Move>) {
    for &(df, dr) in dirs {
        let mut cur = from;
        while let Some(to) = cur.offset(df, dr) {
            match pos.piece_at(to) {
                None => out.push(Move::normal(from, to)),
                Some(p) => {
                    if p.color != us {
                        out.push(Move::normal(from, to));
                    }
                    break;
                }
            }
            cur = to;
        }
    }
}

fn castling_moves(pos: &Position, out: &mut Vec<Move>) {
    let us = pos.side_to_move;
    let them = us.opposite();
    let rank = us.back_rank();
    if pos.castling[us.index()].is_empty() {
        return;
    }
    let Some(king) = pos.king_square(us) else {
        return;
    };
    if king.rank() != rank || pos.is_attacked(king, them) {
        return;
    }
    for side in [CastleSide::King, CastleSide::Queen] {
        let Some(rook_file) = pos.castle_rook_file(us, side) else {
            continue;
        };
        let king_to = side.king_dest_file();
        let rook_to = side.rook_dest_file();
        let span = |a: u8, b: u8| a.min(b)..=a.max(b);

        let blocked = span(king.file(), king_to)
            .chain(span(rook_file, rook_to))
            .any(|f| {
                f != king.file()
                    && f != rook_file
                    && pos.piece_at(Square::new(f, rank).unwrap()).is_some()
            });
        if blocked {
            continue;
        }
        let transit_attacked = span(king.file(), king_to)
            .filter(|f| *f != king.file())
            .any(|f| pos.is_attacked(Square::new(f, rank).unwrap(), them));
        if transit_attacked {
            continue;
        }
        let mv = Move {
            from: king,
            to: Square::new(king_to, rank).unwrap(),
            promotion: None,
            castle: Some(side),
        };
        // the castling rook may have been shielding the destination
        let next = pos.apply_move(&mv);
        if next.is_attacked(mv.to, them) {
            continue;
        }
        out.push(mv);
    }
}
