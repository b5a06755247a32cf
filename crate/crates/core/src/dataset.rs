//! Feature tables: region counts at chosen move numbers plus the game result.
//!
//! * DS1: one randomly chosen game per start position, snapshot at move 20.
//! * DS2: one table per start position, one row per game at move 20.
//! * DS3: one table per start position, six rows per game (moves 10..=15).
//!
//! Games too short for the requested snapshot are skipped and counted,
//! never padded.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::diag::Diagnostic;
use crate::game::{GameRecord, Outcome};
use crate::ingest::Corpus;
use crate::par;
use crate::regions::{count_regions, RegionId, REGION_COUNT};
use crate::rng::unit_rng;

pub const FEATURE_DIM: usize = 2 * REGION_COUNT;
pub type Features = [u8; FEATURE_DIM];

pub const DEFAULT_MOVE: u32 = 20;
pub const DEFAULT_WINDOW: (u32, u32) = (10, 15);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Ds1,
    Ds2,
    Ds3,
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DatasetKind::Ds1 => "ds1",
            DatasetKind::Ds2 => "ds2",
            DatasetKind::Ds3 => "ds3",
        })
    }
}

impl FromStr for DatasetKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ds1" | "1" => Ok(DatasetKind::Ds1),
            "ds2" | "2" => Ok(DatasetKind::Ds2),
            "ds3" | "3" => Ok(DatasetKind::Ds3),
            _ => Err(format!("unknown dataset kind {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub sp_index: u16,
    pub game_ordinal: u32,
    pub move_number: u32,
    /// White's five region counts then Black's, in [`RegionId::ALL`] order.
    pub features: Features,
    pub label: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureTable {
    pub kind: DatasetKind,
    pub rows: Vec<FeatureRow>,
    /// Games dropped because they end before the snapshot move.
    pub skipped: usize,
}

impl FeatureTable {
    pub fn new(kind: DatasetKind) -> FeatureTable {
        FeatureTable {
            kind,
            rows: Vec::new(),
            skipped: 0,
        }
    }
}

/// Snapshot move numbers each builder uses. Defaults are 20 and 10..=15.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SnapshotMoves {
    pub single: u32,
    pub window: (u32, u32),
}

impl Default for SnapshotMoves {
    fn default() -> Self {
        SnapshotMoves {
            single: DEFAULT_MOVE,
            window: DEFAULT_WINDOW,
        }
    }
}

fn rows_for_game(
    sp: u16,
    ordinal: usize,
    game: &GameRecord,
    moves: &[u32],
) -> Option<Vec<FeatureRow>> {
    let positions = game.positions_at_moves(moves).ok()?;
    Some(
        moves
            .iter()
            .zip(positions)
            .map(|(&m, pos)| FeatureRow {
                sp_index: sp,
                game_ordinal: ordinal as u32,
                move_number: m,
                features: count_regions(&pos).to_features(),
                label: game.result(),
            })
            .collect(),
    )
}

pub fn build_ds1(corpus: &Corpus, seed: u64) -> (FeatureTable, Vec<Diagnostic>) {
    build_ds1_at(corpus, seed, DEFAULT_MOVE)
}

/// One uniformly chosen game per start position among those reaching
/// `move_number`; the choice depends only on `seed` and the position index.
pub fn build_ds1_at(
    corpus: &Corpus,
    seed: u64,
    move_number: u32,
) -> (FeatureTable, Vec<Diagnostic>) {
    let entries: Vec<(u16, &[GameRecord])> = corpus.iter().collect();
    let picked = par::map(&entries, |&(sp, games)| {
        let usable: Vec<usize> = (0..games.len())
            .filter(|&i| games[i].reaches_move(move_number))
            .collect();
        let mut rng = unit_rng(seed, &[0xD51, sp as u64]);
        let chosen = usable.choose(&mut rng).copied();
        let skipped = games.len() - usable.len();
        (
            sp,
            chosen.and_then(|i| rows_for_game(sp, i, &games[i], &[move_number])),
            skipped,
        )
    });
    let mut table = FeatureTable::new(DatasetKind::Ds1);
    let mut diags = Vec::new();
    for (sp, rows, skipped) in picked {
        table.skipped += skipped;
        match rows {
            Some(rows) => table.rows.extend(rows),
            None => diags.push(Diagnostic::new(
                format!("sp {sp}"),
                None,
                format!("no game reaches move {move_number}"),
            )),
        }
    }
    (table, diags)
}

pub fn build_ds2(corpus: &Corpus) -> BTreeMap<u16, FeatureTable> {
    build_per_sp(corpus, DatasetKind::Ds2, &[DEFAULT_MOVE])
}

pub fn build_ds3(corpus: &Corpus) -> BTreeMap<u16, FeatureTable> {
    let (a, b) = DEFAULT_WINDOW;
    build_per_sp(corpus, DatasetKind::Ds3, &(a..=b).collect::<Vec<_>>())
}

/// One table per start position; each game reaching every move in `moves`
/// contributes one row per move.
pub fn build_per_sp(
    corpus: &Corpus,
    kind: DatasetKind,
    moves: &[u32],
) -> BTreeMap<u16, FeatureTable> {
    let entries: Vec<(u16, &[GameRecord])> = corpus.iter().collect();
    let tables = par::map(&entries, |&(sp, games)| {
        let mut table = FeatureTable::new(kind);
        for (i, g) in games.iter().enumerate() {
            match rows_for_game(sp, i, g, moves) {
                Some(rows) => table.rows.extend(rows),
                None => table.skipped += 1,
            }
        }
        (sp, table)
    });
    tables.into_iter().collect()
}

/// Builds the tables for `kind` with the given snapshot moves. DS1 yields a
/// single table keyed by `u16::MAX`.
pub fn build(
    corpus: &Corpus,
    kind: DatasetKind,
    seed: u64,
    moves: SnapshotMoves,
) -> (BTreeMap<u16, FeatureTable>, Vec<Diagnostic>) {
    match kind {
        DatasetKind::Ds1 => {
            let (t, d) = build_ds1_at(corpus, seed, moves.single);
            (BTreeMap::from([(u16::MAX, t)]), d)
        }
        DatasetKind::Ds2 => (build_per_sp(corpus, kind, &[moves.single]), Vec::new()),
        DatasetKind::Ds3 => {
            let (a, b) = moves.window;
            (
                build_per_sp(corpus, kind, &(a..=b).collect::<Vec<_>>()),
                Vec::new(),
            )
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("row {row}: {message}")]
    Format { row: usize, message: String },
}

pub fn header() -> Vec<String> {
    let mut cols = vec!["sp".to_string(), "game".to_string(), "move".to_string()];
    for side in ["w", "b"] {
        for r in RegionId::ALL {
            cols.push(format!("{side}{}", r.column_tag()));
        }
    }
    cols.push("result".to_string());
    cols
}

const META_PREFIX: &str = "# c960";

/// Writes `t` as CSV: a metadata comment line, the fixed header, one line
/// per row.
pub fn write_table_to<W: Write>(t: &FeatureTable, mut out: W) -> Result<(), TableError> {
    writeln!(
        out,
        "{META_PREFIX} dataset={} skipped={}",
        t.kind, t.skipped
    )?;
    let mut w = csv::Writer::from_writer(out);
    let map_csv = |e: csv::Error| TableError::Io(io::Error::other(e));
    w.write_record(header()).map_err(map_csv)?;
    for r in &t.rows {
        let mut rec = vec![
            r.sp_index.to_string(),
            r.game_ordinal.to_string(),
            r.move_number.to_string(),
        ];
        rec.extend(r.features.iter().map(u8::to_string));
        rec.push(r.label.label_text().to_string());
        w.write_record(&rec).map_err(map_csv)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_table(t: &FeatureTable, path: &Path) -> Result<(), TableError> {
    let file = std::fs::File::create(path)?;
    write_table_to(t, io::BufWriter::new(file))
}

pub fn read_table(path: &Path) -> Result<FeatureTable, TableError> {
    read_table_from_str(&std::fs::read_to_string(path)?)
}

/// Parses a table written by [`write_table_to`]. Files without the
/// metadata line are accepted; their kind is inferred from the rows.
pub fn read_table_from_str(text: &str) -> Result<FeatureTable, TableError> {
    let fmt_err = |row: usize, message: String| TableError::Format { row, message };
    let (meta, body) = match text.strip_prefix(META_PREFIX) {
        Some(rest) => {
            let (line, body) = rest.split_once('\n').unwrap_or((rest, ""));
            (Some(line.trim()), body)
        }
        None => (None, text),
    };

    let mut kind = None;
    let mut skipped = 0;
    if let Some(meta) = meta {
        for kv in meta.split_whitespace() {
            match kv.split_once('=') {
                Some(("dataset", v)) => kind = Some(v.parse().map_err(|e| fmt_err(0, e))?),
                Some(("skipped", v)) => {
                    skipped = v
                        .parse()
                        .map_err(|_| fmt_err(0, format!("bad skipped count {v:?}")))?
                }
                _ => return Err(fmt_err(0, format!("bad metadata entry {kv:?}"))),
            }
        }
    }

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(body.as_bytes());
    let found: Vec<String> = rdr
        .headers()
        .map_err(|e| fmt_err(0, e.to_string()))?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();
    if found != header() {
        return Err(fmt_err(0, format!("header mismatch: {}", found.join(","))));
    }

    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| fmt_err(row, e.to_string()))?;
        let int = |col: usize| -> Result<u64, TableError> {
            let cell = rec.get(col).unwrap_or("").trim();
            cell.parse::<u64>().map_err(|_| {
                fmt_err(
                    row,
                    format!("column {} is not an integer: {cell:?}", header()[col]),
                )
            })
        };
        let sp_index =
            u16::try_from(int(0)?).map_err(|_| fmt_err(row, "sp out of range".into()))?;
        let game_ordinal =
            u32::try_from(int(1)?).map_err(|_| fmt_err(row, "game out of range".into()))?;
        let move_number =
            u32::try_from(int(2)?).map_err(|_| fmt_err(row, "move out of range".into()))?;
        let mut features = [0u8; FEATURE_DIM];
        for (k, f) in features.iter_mut().enumerate() {
            let v = int(3 + k)?;
            if v > 16 {
                return Err(fmt_err(row, format!("count {v} exceeds 16")));
            }
            *f = v as u8;
        }
        for side in [&features[..REGION_COUNT], &features[REGION_COUNT..]] {
            if side.iter().map(|&c| c as u32).sum::<u32>() > 16 {
                return Err(fmt_err(row, "a side has more than 16 men".into()));
            }
        }
        let cell = rec.get(3 + FEATURE_DIM).unwrap_or("").trim();
        let label = cell
            .parse::<f64>()
            .ok()
            .and_then(Outcome::from_label)
            .ok_or_else(|| fmt_err(row, format!("result {cell:?} is not one of 1, 0.5, 0")))?;
        rows.push(FeatureRow {
            sp_index,
            game_ordinal,
            move_number,
            features,
            label,
        });
    }

    let kind = kind.unwrap_or_else(|| infer_kind(&rows));
    Ok(FeatureTable {
        kind,
        rows,
        skipped,
    })
}

fn infer_kind(rows: &[FeatureRow]) -> DatasetKind {
    let distinct_moves = rows
        .iter()
        .map(|r| r.move_number)
        .collect::<std::collections::BTreeSet<_>>();
    let distinct_sps = rows
        .iter()
        .map(|r| r.sp_index)
        .collect::<std::collections::BTreeSet<_>>();
    if distinct_moves.len() > 1 {
        DatasetKind::Ds3
    } else if distinct_sps.len() > 1 {
        DatasetKind::Ds1
    } else {
        DatasetKind::Ds2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::StartPosition;

    fn shuffle_game(plies: usize, result: Outcome) -> GameRecord {
        let cycle = ["Nf3", "Nf6", "Ng1", "Ng8"];
        let sans = (0..plies).map(|i| cycle[i % 4].to_string()).collect();
        GameRecord::new(StartPosition::standard(), sans, result, Default::default()).unwrap()
    }

    #[test]
    fn ds2_counts_and_skips() {
        let mut games = vec![shuffle_game(40, Outcome::WhiteWin); 5];
        games.extend(vec![shuffle_game(20, Outcome::Draw); 2]);
        let c = Corpus::from_games(games);
        let t = &build_ds2(&c)[&518];
        assert_eq!(t.rows.len(), 5);
        assert_eq!(t.skipped, 2);
        for r in &t.rows {
            assert_eq!(r.move_number, 20);
            assert!(r.features.iter().map(|&x| x as u32).sum::<u32>() <= 32);
        }
    }

    #[test]
    fn ds3_six_rows_share_label() {
        let c = Corpus::from_games(vec![
            shuffle_game(30, Outcome::BlackWin),
            shuffle_game(10, Outcome::Draw),
        ]);
        let t = &build_ds3(&c)[&518];
        assert_eq!(t.rows.len(), 6);
        assert_eq!(t.skipped, 1);
        assert!(t.rows.iter().all(|r| r.label == Outcome::BlackWin));
        let moves: Vec<u32> = t.rows.iter().map(|r| r.move_number).collect();
        assert_eq!(moves, [10, 11, 12, 13, 14, 15]);
    }

    #[test]
    fn ds1_short_games_omitted() {
        let c = Corpus::from_games(vec![shuffle_game(20, Outcome::Draw)]);
        let (t, d) = build_ds1(&c, 1);
        assert!(t.rows.is_empty());
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn csv_round_trip_and_empty() {
        let c = Corpus::from_games(vec![
            shuffle_game(40, Outcome::Draw),
            shuffle_game(41, Outcome::WhiteWin),
        ]);
        let t = build_ds2(&c).remove(&518).unwrap();
        let mut buf = Vec::new();
        write_table_to(&t, &mut buf).unwrap();
        assert_eq!(
            read_table_from_str(std::str::from_utf8(&buf).unwrap()).unwrap(),
            t
        );

        let empty = FeatureTable::new(DatasetKind::Ds3);
        let mut buf = Vec::new();
        write_table_to(&empty, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(read_table_from_str(&text).unwrap(), empty);
    }

    #[test]
    fn csv_format_errors() {
        let h = header().join(",");
        let bad_label = format!("{h}\n518,0,20,0,8,8,0,0,0,0,0,8,8,0.7\n");
        assert!(matches!(
            read_table_from_str(&bad_label),
            Err(TableError::Format { row: 1, .. })
        ));
        let bad_cell =
            format!("{h}\n518,0,20,0,8,8,0,0,0,0,0,8,8,1\n518,1,20,x,8,8,0,0,0,0,0,8,8,1\n");
        assert!(matches!(
            read_table_from_str(&bad_cell),
            Err(TableError::Format { row: 2, .. })
        ));
        assert!(matches!(
            read_table_from_str("sp,game\n"),
            Err(TableError::Format { row: 0, .. })
        ));
        // no metadata line: kind inferred
        let plain = format!("{h}\n518,0,20,0,8,8,0,0,0,0,0,8,8,0.5\n");
        let t = read_table_from_str(&plain).unwrap();
        assert_eq!(t.kind, DatasetKind::Ds2);
        assert_eq!(t.rows[0].label, Outcome::Draw);
    }
}
