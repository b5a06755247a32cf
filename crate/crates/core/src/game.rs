use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chess::{initial_position, parse_san, Move, Position, SanError, StartPosition};

/// Game result. Ordered by numeric label, so `BlackWin < Draw < WhiteWin`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    BlackWin,
    Draw,
    WhiteWin,
}

impl Outcome {
    pub const ALL: [Outcome; 3] = [Outcome::BlackWin, Outcome::Draw, Outcome::WhiteWin];

    /// Numeric label: White win 1, draw 0.5, Black win 0.
    pub fn label(self) -> f64 {
        match self {
            Outcome::BlackWin => 0.0,
            Outcome::Draw => 0.5,
            Outcome::WhiteWin => 1.0,
        }
    }

    pub fn from_label(label: f64) -> Option<Outcome> {
        if label == 0.0 {
            Some(Outcome::BlackWin)
        } else if label == 0.5 {
            Some(Outcome::Draw)
        } else if label == 1.0 {
            Some(Outcome::WhiteWin)
        } else {
            None
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Outcome> {
        Outcome::ALL.get(i).copied()
    }

    pub fn pgn_token(self) -> &'static str {
        match self {
            Outcome::BlackWin => "0-1",
            Outcome::Draw => "1/2-1/2",
            Outcome::WhiteWin => "1-0",
        }
    }

    pub fn from_pgn_token(token: &str) -> Option<Outcome> {
        match token {
            "1-0" => Some(Outcome::WhiteWin),
            "0-1" => Some(Outcome::BlackWin),
            "1/2-1/2" => Some(Outcome::Draw),
            _ => None,
        }
    }

    /// Short label text as used in CSV cells.
    pub fn label_text(self) -> &'static str {
        match self {
            Outcome::BlackWin => "0",
            Outcome::Draw => "0.5",
            Outcome::WhiteWin => "1",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("game has no moves")]
    Empty,
    #[error("ply {ply}: {source}")]
    Replay { ply: usize, source: SanError },
    #[error("move number must be at least 1, got {0}")]
    MoveNumber(u32),
    #[error("game ends before move {requested} (last reached move {reached})")]
    TooShort { requested: u32, reached: u32 },
}

/// One replayable game from a fixed start position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameRecord {
    sp: StartPosition,
    san_moves: Vec<String>,
    moves: Vec<Move>,
    result: Outcome,
    tags: BTreeMap<String, String>,
}

impl GameRecord {
    /// Builds a record, replaying every SAN token from the start position.
    pub fn new(
        sp: StartPosition,
        san_moves: Vec<String>,
        result: Outcome,
        tags: BTreeMap<String, String>,
    ) -> Result<GameRecord, GameError> {
        if san_moves.is_empty() {
            return Err(GameError::Empty);
        }
        let mut pos = initial_position(&sp);
        let mut moves = Vec::with_capacity(san_moves.len());
        for (ply, token) in san_moves.iter().enumerate() {
            let mv = parse_san(&pos, token).map_err(|source| GameError::Replay { ply, source })?;
            pos = pos.apply_move(&mv);
            moves.push(mv);
        }
        Ok(GameRecord {
            sp,
            san_moves,
            moves,
            result,
            tags,
        })
    }

    /// Record from moves already known to be legal, with their SAN.
    pub(crate) fn from_parts(
        sp: StartPosition,
        san_moves: Vec<String>,
        moves: Vec<Move>,
        result: Outcome,
        tags: BTreeMap<String, String>,
    ) -> GameRecord {
        debug_assert_eq!(san_moves.len(), moves.len());
        GameRecord {
            sp,
            san_moves,
            moves,
            result,
            tags,
        }
    }

    pub fn sp(&self) -> StartPosition {
        self.sp
    }

    pub fn san_moves(&self) -> &[String] {
        &self.san_moves
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn result(&self) -> Outcome {
        self.result
    }

    pub fn tags(&self) -> &BTreeMap<String, String> {
        &self.tags
    }

    pub fn ply_count(&self) -> usize {
        self.moves.len()
    }

    /// Largest `n` for which [`GameRecord::position_at_move`] succeeds.
    pub fn last_reached_move(&self) -> u32 {
        (self.moves.len() / 2) as u32 + 1
    }

    pub fn reaches_move(&self, n: u32) -> bool {
        n >= 1 && n <= self.last_reached_move()
    }

    /// The position before White's `n`-th move (fullmove counter `n`, White
    /// to move). Move 1 is the initial position.
    pub fn position_at_move(&self, n: u32) -> Result<Position, GameError> {
        Ok(self.positions_at_moves(&[n])?.pop().unwrap())
    }

    /// Snapshots at several move numbers with a single replay. Output order
    /// follows `moves`.
    pub fn positions_at_moves(&self, moves: &[u32]) -> Result<Vec<Position>, GameError> {
        for &n in moves {
            if n == 0 {
                return Err(GameError::MoveNumber(0));
            }
            if !self.reaches_move(n) {
                return Err(GameError::TooShort {
                    requested: n,
                    reached: self.last_reached_move(),
                });
            }
        }
        let max_ply = moves
            .iter()
            .map(|n| 2 * (*n as usize - 1))
            .max()
            .unwrap_or(0);
        let mut by_ply = Vec::with_capacity(max_ply + 1);
        let mut pos = initial_position(&self.sp);
        by_ply.push(pos.clone());
        for mv in &self.moves[..max_ply] {
            pos = pos.apply_move(mv);
            by_ply.push(pos.clone());
        }
        Ok(moves
            .iter()
            .map(|n| by_ply[2 * (*n as usize - 1)].clone())
            .collect())
    }
}

/// Free-function form of [`GameRecord::position_at_move`].
pub fn position_at_move(game: &GameRecord, n: u32) -> Result<Position, GameError> {
    game.position_at_move(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::{apply_san, Color};

    fn game(tokens: &[&str]) -> GameRecord {
        GameRecord::new(
            StartPosition::standard(),
            tokens.iter().map(|s| s.to_string()).collect(),
            Outcome::Draw,
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn move_one_is_initial() {
        let g = game(&["e4", "e5"]);
        assert_eq!(
            g.position_at_move(1).unwrap(),
            initial_position(&StartPosition::standard())
        );
    }

    #[test]
    fn move_two_is_after_blacks_first() {
        let g = game(&["e4", "e5", "Nf3"]);
        let start = initial_position(&StartPosition::standard());
        let expected = apply_san(&apply_san(&start, "e4").unwrap(), "e5").unwrap();
        let p = g.position_at_move(2).unwrap();
        assert_eq!(p, expected);
        assert_eq!(p.fullmove_number(), 2);
        assert_eq!(p.side_to_move(), Color::White);
    }

    #[test]
    fn too_short_reports_reached_move() {
        let tokens = [
            "Nf3", "Nf6", "Ng1", "Ng8", "Nf3", "Nf6", "Ng1", "Ng8", "Nf3", "Nf6", "Ng1", "Ng8",
            "Nf3", "Nf6", "Ng1", "Ng8", "Nf3", "Nf6", "Ng1", "Ng8",
        ];
        let g = game(&tokens);
        assert_eq!(g.last_reached_move(), 11);
        assert!(g.position_at_move(11).is_ok());
        assert_eq!(
            g.position_at_move(16),
            Err(GameError::TooShort {
                requested: 16,
                reached: 11
            })
        );
        assert_eq!(g.position_at_move(0), Err(GameError::MoveNumber(0)));
    }

    #[test]
    fn replay_errors_carry_ply() {
        let err = GameRecord::new(
            StartPosition::standard(),
            vec!["e4".into(), "e4".into()],
            Outcome::WhiteWin,
            BTreeMap::new(),
        )
        .unwrap_err();
        assert!(matches!(err, GameError::Replay { ply: 1, .. }));
        assert_eq!(
            GameRecord::new(
                StartPosition::standard(),
                vec![],
                Outcome::Draw,
                BTreeMap::new()
            ),
            Err(GameError::Empty)
        );
    }

    #[test]
    fn outcome_labels() {
        assert_eq!(Outcome::from_label(0.5), Some(Outcome::Draw));
        assert_eq!(Outcome::from_label(0.7), None);
        assert!(Outcome::BlackWin < Outcome::Draw && Outcome::Draw < Outcome::WhiteWin);
        for o in Outcome::ALL {
            assert_eq!(Outcome::from_pgn_token(o.pgn_token()), Some(o));
            assert_eq!(Outcome::from_label(o.label()), Some(o));
        }
    }
}
