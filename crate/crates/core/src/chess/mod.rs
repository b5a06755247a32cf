//! Board representation, Chess960 start positions, legal move generation,
//! SAN and FEN.

mod fen;
mod movegen;
mod position;
mod san;
mod start;
mod types;

pub use fen::{emit_fen, parse_fen, FenError};
pub use movegen::{legal_moves, perft};
pub use position::{initial_position, CastleFiles, Position, PositionError};
pub use san::{apply_san, parse_san, san_of, strip_san_suffixes, SanError};
pub use start::{
    all as all_start_positions, sp_backrank, StartPosition, StartPositionError, STANDARD_INDEX,
    START_POSITION_COUNT,
};
pub use types::{CastleSide, Color, Move, Piece, PieceKind, Square, SquareParseError};
