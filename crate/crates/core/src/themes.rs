//! Opening themes: where each side's men move during the opening.
//!
//! For every game, region counts are taken at four snapshot moves (1, 6, 11
//! and 16 by default) and differenced into three phases. Phase deltas are
//! summed over all games of a start position, and each side is assigned, per
//! phase, the region with the largest net inflow. The last phase's pair of
//! regions is the start position's category.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::chess::{Color, StartPosition};
use crate::diag::Diagnostic;
use crate::game::{GameError, GameRecord};
use crate::ingest::Corpus;
use crate::par;
use crate::regions::{count_regions, RegionCounts, RegionId, REGION_COUNT};

pub const DEFAULT_SNAPSHOTS: [u32; 4] = [1, 6, 11, 16];
pub const PHASES: usize = 3;

/// Signed per-region change for one side over one phase.
pub type RegionDelta = [i32; REGION_COUNT];

/// Both sides' deltas for the three phases, indexed `[phase][region]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseDeltas {
    pub white: [RegionDelta; PHASES],
    pub black: [RegionDelta; PHASES],
}

impl PhaseDeltas {
    pub fn side(&self, color: Color) -> &[RegionDelta; PHASES] {
        match color {
            Color::White => &self.white,
            Color::Black => &self.black,
        }
    }

    pub fn add(&mut self, other: &PhaseDeltas) {
        for p in 0..PHASES {
            for r in 0..REGION_COUNT {
                self.white[p][r] += other.white[p][r];
                self.black[p][r] += other.black[p][r];
            }
        }
    }
}

pub fn snapshot_counts(
    game: &GameRecord,
    moves: &[u32; 4],
) -> Result<[RegionCounts; 4], GameError> {
    let positions = game.positions_at_moves(moves)?;
    Ok(std::array::from_fn(|i| count_regions(&positions[i])))
}

/// Later-minus-earlier region counts between consecutive snapshots.
pub fn phase_deltas(snaps: &[RegionCounts; 4]) -> PhaseDeltas {
    let diff = |a: &[u8; REGION_COUNT], b: &[u8; REGION_COUNT]| -> RegionDelta {
        std::array::from_fn(|r| b[r] as i32 - a[r] as i32)
    };
    PhaseDeltas {
        white: std::array::from_fn(|p| diff(&snaps[p].white, &snaps[p + 1].white)),
        black: std::array::from_fn(|p| diff(&snaps[p].black, &snaps[p + 1].black)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpAggregate {
    pub sp_index: u16,
    pub totals: PhaseDeltas,
    pub games_used: usize,
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThemeError {
    #[error("sp {sp}: no game reaches move {last}")]
    NoUsableGames { sp: u16, last: u32 },
}

/// Sums phase deltas over the games of one start position. Games that end
/// before the last snapshot are excluded and counted.
pub fn aggregate_sp(
    sp: u16,
    games: &[GameRecord],
    moves: &[u32; 4],
) -> Result<SpAggregate, ThemeError> {
    let mut agg = SpAggregate {
        sp_index: sp,
        totals: PhaseDeltas::default(),
        games_used: 0,
        excluded: 0,
    };
    for g in games {
        match snapshot_counts(g, moves) {
            Ok(s) => {
                agg.totals.add(&phase_deltas(&s));
                agg.games_used += 1;
            }
            Err(_) => agg.excluded += 1,
        }
    }
    if agg.games_used == 0 {
        return Err(ThemeError::NoUsableGames { sp, last: moves[3] });
    }
    Ok(agg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionChoice {
    pub region: RegionId,
    /// No total was positive, so the least negative region was taken.
    pub degenerate: bool,
}

/// Region with the largest total; ties go to the earlier region in
/// [`RegionId::ALL`] order.
pub fn assign_region(totals: &RegionDelta) -> RegionChoice {
    let mut best = 0;
    for r in 1..REGION_COUNT {
        if totals[r] > totals[best] {
            best = r;
        }
    }
    RegionChoice {
        region: RegionId::ALL[best],
        degenerate: totals[best] <= 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThemeAssignment {
    pub sp_index: u16,
    pub code: String,
    pub white: [RegionChoice; PHASES],
    pub black: [RegionChoice; PHASES],
    pub totals: PhaseDeltas,
    pub games_used: usize,
    pub excluded: usize,
}

impl ThemeAssignment {
    /// (White's last-phase region, Black's last-phase region).
    pub fn category(&self) -> (RegionId, RegionId) {
        (self.white[PHASES - 1].region, self.black[PHASES - 1].region)
    }

    pub fn any_degenerate(&self) -> bool {
        self.white.iter().chain(&self.black).any(|c| c.degenerate)
    }
}

pub fn classify(agg: &SpAggregate) -> ThemeAssignment {
    let code = StartPosition::from_index(agg.sp_index as u32)
        .map(|s| s.code())
        .unwrap_or_default();
    ThemeAssignment {
        sp_index: agg.sp_index,
        code,
        white: std::array::from_fn(|p| assign_region(&agg.totals.white[p])),
        black: std::array::from_fn(|p| assign_region(&agg.totals.black[p])),
        totals: agg.totals,
        games_used: agg.games_used,
        excluded: agg.excluded,
    }
}

pub fn classify_sp(
    sp: u16,
    games: &[GameRecord],
    moves: &[u32; 4],
) -> Result<ThemeAssignment, ThemeError> {
    aggregate_sp(sp, games, moves).map(|a| classify(&a))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThemeRun {
    pub assignments: Vec<ThemeAssignment>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Classifies every start position in the corpus, in index order.
pub fn analyze(corpus: &Corpus, moves: &[u32; 4]) -> ThemeRun {
    let entries: Vec<(u16, &[GameRecord])> = corpus.iter().collect();
    let results = par::map(&entries, |&(sp, games)| classify_sp(sp, games, moves));
    let mut run = ThemeRun::default();
    for (res, &(sp, _)) in results.into_iter().zip(&entries) {
        match res {
            Ok(a) => {
                if a.excluded > 0 {
                    run.diagnostics.push(Diagnostic::new(
                        format!("sp {sp}"),
                        None,
                        format!("{} games end before move {}", a.excluded, moves[3]),
                    ));
                }
                run.assignments.push(a);
            }
            Err(e) => {
                run.diagnostics
                    .push(Diagnostic::new(format!("sp {sp}"), None, e.to_string()))
            }
        }
    }
    run
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryRow {
    pub white: RegionId,
    pub black: RegionId,
    pub count: usize,
    pub codes: Vec<String>,
}

impl CategoryRow {
    /// Heading such as "Black Q Side_White K Side".
    pub fn heading(&self) -> String {
        format!("{}_{}", self.white.short_name(), self.black.short_name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThemeReport {
    pub categories: Vec<CategoryRow>,
    pub assigned: usize,
    pub degenerate: usize,
    /// Start positions where a side's last-phase region lies in its own
    /// half (White into a White region, Black into a Black region).
    pub own_territory: usize,
}

fn own_half(color: Color, r: RegionId) -> bool {
    match color {
        Color::White => matches!(r, RegionId::WhiteKingside | RegionId::WhiteQueenside),
        Color::Black => matches!(r, RegionId::BlackKingside | RegionId::BlackQueenside),
    }
}

/// Frequency table over (White, Black) last-phase categories, rows in
/// region order, codes sorted within each row.
pub fn theme_report(assignments: &[ThemeAssignment]) -> ThemeReport {
    let mut groups: BTreeMap<(RegionId, RegionId), Vec<String>> = BTreeMap::new();
    let mut report = ThemeReport::default();
    for a in assignments {
        groups.entry(a.category()).or_default().push(a.code.clone());
        report.assigned += 1;
        report.degenerate += a.any_degenerate() as usize;
        let (w, b) = a.category();
        report.own_territory += (own_half(Color::White, w) || own_half(Color::Black, b)) as usize;
    }
    report.categories = groups
        .into_iter()
        .map(|((white, black), mut codes)| {
            codes.sort();
            CategoryRow {
                white,
                black,
                count: codes.len(),
                codes,
            }
        })
        .collect();
    report
}

impl ThemeReport {
    pub fn table_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "S.No.\tDevelopment of White\tDevelopment of Black\tNo. of Starting Positions"
        );
        for (i, c) in self.categories.iter().enumerate() {
            let _ = writeln!(
                s,
                "{}.\t{}\t{}\t{}",
                i + 1,
                c.white.name(),
                c.black.name(),
                c.count
            );
        }
        let _ = writeln!(s, "Total\t\t\t{}", self.assigned);
        s
    }

    pub fn listing_text(&self) -> String {
        let mut s = String::new();
        for c in &self.categories {
            let _ = writeln!(s, "{} | {}", c.heading(), c.codes.join(", "));
        }
        s
    }
}

/// Known published category for one start position, checked against a run
/// as a soft expectation.
pub const REFERENCE_CATEGORY: (&str, RegionId, RegionId) = (
    "BBNNQRKR",
    RegionId::BlackQueenside,
    RegionId::WhiteKingside,
);

/// `Some(matches)` when the reference start position was assigned.
pub fn check_reference(assignments: &[ThemeAssignment]) -> Option<bool> {
    let (code, w, b) = REFERENCE_CATEGORY;
    assignments
        .iter()
        .find(|a| a.code == code)
        .map(|a| a.category() == (w, b))
}
