//! Seeded synthetic Chess960 games: uniformly random legal playouts with a
//! configurable labelling rule, for exercising the pipeline without a real
//! corpus.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chess::{
    initial_position, legal_moves, san_of, Color, StartPosition, START_POSITION_COUNT,
};
use crate::diag::Diagnostic;
use crate::game::{GameRecord, Outcome};
use crate::ingest::Corpus;
use crate::par;
use crate::regions::count_regions;
use crate::rng::unit_rng;

pub const MATERIAL_MOVE: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelRule {
    /// Checkmate gives the winner; every other ending is a draw.
    FromPlay,
    /// Sign of White's minus Black's man count at move 20.
    MaterialAt20,
    /// Uniform over the three outcomes, independent of play.
    UniformRandom,
}

impl fmt::Display for LabelRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelRule::FromPlay => "from-play",
            LabelRule::MaterialAt20 => "material-at-20",
            LabelRule::UniformRandom => "uniform-random",
        })
    }
}

impl FromStr for LabelRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "fromplay" | "play" => Ok(LabelRule::FromPlay),
            "materialat20" | "material" => Ok(LabelRule::MaterialAt20),
            "uniformrandom" | "uniform" | "random" => Ok(LabelRule::UniformRandom),
            _ => Err(format!("unknown label rule {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub sps: Vec<u16>,
    pub games_per_sp: usize,
    /// Every game reaches at least this move number.
    pub min_moves: u32,
    /// Play stops once this move number is reached.
    pub max_moves: u32,
    pub label_rule: LabelRule,
    pub seed: u64,
    /// Playouts tried per game before giving up on it.
    pub max_attempts: u32,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            sps: vec![crate::chess::STANDARD_INDEX],
            games_per_sp: 1,
            min_moves: 20,
            max_moves: 60,
            label_rule: LabelRule::FromPlay,
            seed: 0,
            max_attempts: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error("invalid synth configuration: {0}")]
    Config(String),
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Config(m));
        if self.games_per_sp == 0 {
            return bad("games_per_sp must be at least 1".into());
        }
        if self.min_moves == 0 || self.min_moves > self.max_moves {
            return bad(format!(
                "need 1 <= min_moves <= max_moves, got {} and {}",
                self.min_moves, self.max_moves
            ));
        }
        if self.label_rule == LabelRule::MaterialAt20 && self.min_moves < MATERIAL_MOVE {
            return bad(format!("material-at-20 needs min_moves >= {MATERIAL_MOVE}"));
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be at least 1".into());
        }
        if let Some(sp) = self.sps.iter().find(|&&s| s >= START_POSITION_COUNT) {
            return bad(format!("start position {sp} out of range"));
        }
        Ok(())
    }
}

/// Man-count rule used for [`LabelRule::MaterialAt20`].
pub fn material_label(white_men: u32, black_men: u32) -> Outcome {
    match white_men.cmp(&black_men) {
        std::cmp::Ordering::Greater => Outcome::WhiteWin,
        std::cmp::Ordering::Less => Outcome::BlackWin,
        std::cmp::Ordering::Equal => Outcome::Draw,
    }
}

struct Playout {
    san: Vec<String>,
    moves: Vec<crate::chess::Move>,
    mated: Option<Color>,
}

fn playout(sp: &StartPosition, max_plies: usize, rng: &mut impl Rng) -> Playout {
    let mut pos = initial_position(sp);
    let mut out = Playout {
        san: Vec::new(),
        moves: Vec::new(),
        mated: None,
    };
    while out.moves.len() < max_plies && pos.halfmove_clock() < 100 {
        let legal = legal_moves(&pos);
        let Some(mv) = legal.choose(rng).copied() else {
            if pos.in_check() {
                out.mated = Some(pos.side_to_move());
            }
            break;
        };
        out.san.push(san_of(&pos, &mv));
        out.moves.push(mv);
        pos = pos.apply_move(&mv);
    }
    if out.mated.is_none() && pos.in_check() && legal_moves(&pos).is_empty() {
        out.mated = Some(pos.side_to_move());
    }
    out
}

fn plies_to_reach(n: u32) -> usize {
    2 * (n as usize - 1)
}

/// One game for `sp`. Playouts that end before `min_moves` are retried on
/// the next derived stream, up to `max_attempts` times.
pub fn gen_game(sp: u16, cfg: &SynthConfig, game_id: u64) -> Result<GameRecord, Diagnostic> {
    let start = StartPosition::from_index(sp as u32)
        .map_err(|e| Diagnostic::new(format!("sp {sp}"), Some(game_id as usize), e.to_string()))?;
    let max_plies = plies_to_reach(cfg.max_moves);
    for attempt in 0..cfg.max_attempts {
        let mut rng = unit_rng(cfg.seed, &[sp as u64, game_id, attempt as u64]);
        let p = playout(&start, max_plies, &mut rng);
        if p.moves.len() < plies_to_reach(cfg.min_moves) || p.moves.is_empty() {
            continue;
        }
        let result = match cfg.label_rule {
            LabelRule::FromPlay => match p.mated {
                Some(Color::White) => Outcome::BlackWin,
                Some(Color::Black) => Outcome::WhiteWin,
                None => Outcome::Draw,
            },
            LabelRule::MaterialAt20 => {
                let mut pos = initial_position(&start);
                for mv in &p.moves[..plies_to_reach(MATERIAL_MOVE)] {
                    pos = pos.apply_move(mv);
                }
                let c = count_regions(&pos);
                material_label(c.total(Color::White), c.total(Color::Black))
            }
            LabelRule::UniformRandom => {
                let mut r = unit_rng(cfg.seed, &[sp as u64, game_id, 0x1ABE1]);
                Outcome::ALL[r.gen_range(0..3)]
            }
        };
        let tags = BTreeMap::from([
            ("Event".to_string(), "c960 synthetic".to_string()),
            ("Site".to_string(), "?".to_string()),
            ("Date".to_string(), "????.??.??".to_string()),
            ("Round".to_string(), (game_id + 1).to_string()),
            ("White".to_string(), "random".to_string()),
            ("Black".to_string(), "random".to_string()),
            ("Result".to_string(), result.pgn_token().to_string()),
        ]);
        return Ok(GameRecord::from_parts(start, p.san, p.moves, result, tags));
    }
    Err(Diagnostic::new(
        format!("sp {sp}"),
        Some(game_id as usize),
        format!(
            "no playout reached move {} in {} attempts",
            cfg.min_moves, cfg.max_attempts
        ),
    ))
}

/// `games_per_sp` games for each configured start position.
pub fn gen_corpus(cfg: &SynthConfig) -> Result<(Corpus, Vec<Diagnostic>), SynthError> {
    cfg.validate()?;
    let per = cfg.games_per_sp;
    let results = par::map_range(cfg.sps.len() * per, |i| {
        gen_game(cfg.sps[i / per], cfg, (i % per) as u64)
    });
    let mut corpus = Corpus::new();
    let mut diags = Vec::new();
    for r in results {
        match r {
            Ok(g) => corpus.push(g),
            Err(d) => diags.push(d),
        }
    }
    Ok((corpus, diags))
}
