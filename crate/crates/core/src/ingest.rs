//! PGN ingestion: game records out of PGN text, grouped by start position.
//!
//! Comments (`{...}` and `;` to end of line), variations, NAGs, annotation
//! glyphs and move numbers are skipped. Games whose result is unknown, whose
//! movetext does not replay legally, or whose tag section is malformed are
//! dropped with a [`Diagnostic`].

use std::collections::BTreeMap;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::chess::{
    emit_fen, initial_position, parse_fen, PieceKind, Square, StartPosition, STANDARD_INDEX,
};
use crate::diag::Diagnostic;
use crate::game::{GameError, GameRecord, Outcome};
use crate::par;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Games grouped by start position index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    games_by_sp: BTreeMap<u16, Vec<GameRecord>>,
}

impl Corpus {
    pub fn new() -> Corpus {
        Corpus::default()
    }

    pub fn from_games(games: impl IntoIterator<Item = GameRecord>) -> Corpus {
        let mut c = Corpus::new();
        for g in games {
            c.push(g);
        }
        c
    }

    pub fn push(&mut self, game: GameRecord) {
        self.games_by_sp
            .entry(game.sp().index())
            .or_default()
            .push(game);
    }

    /// Appends every game of `other`, keeping per-position order.
    pub fn merge(&mut self, other: Corpus) {
        for (sp, games) in other.games_by_sp {
            self.games_by_sp.entry(sp).or_default().extend(games);
        }
    }

    pub fn games(&self, sp: u16) -> &[GameRecord] {
        self.games_by_sp.get(&sp).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u16, &[GameRecord])> {
        self.games_by_sp.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn sp_indices(&self) -> Vec<u16> {
        self.games_by_sp.keys().copied().collect()
    }

    pub fn sp_count(&self) -> usize {
        self.games_by_sp.len()
    }

    pub fn total_games(&self) -> usize {
        self.games_by_sp.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.games_by_sp.is_empty()
    }
}

/// Result of parsing one PGN stream.
#[derive(Clone, Debug, Default)]
pub struct ParsedPgn {
    pub games: Vec<GameRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Default)]
struct PendingGame {
    tags: BTreeMap<String, String>,
    sans: Vec<String>,
    malformed: Option<String>,
    has_content: bool,
    in_movetext: bool,
}

struct Parser<'a> {
    source: &'a str,
    ordinal: usize,
    pending: PendingGame,
    comment: bool,
    variation_depth: usize,
    out: ParsedPgn,
}

/// Parses every game in `reader`. `source` labels diagnostics (typically a
/// file path).
pub fn parse_pgn_stream<R: Read>(mut reader: R, source: &str) -> io::Result<ParsedPgn> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    Ok(parse_pgn_str(&String::from_utf8_lossy(&bytes), source))
}

pub fn parse_pgn_str(text: &str, source: &str) -> ParsedPgn {
    let mut p = Parser {
        source,
        ordinal: 0,
        pending: PendingGame::default(),
        comment: false,
        variation_depth: 0,
        out: ParsedPgn::default(),
    };
    for line in text.lines() {
        p.line(line);
    }
    if p.pending.has_content {
        p.finish(None);
    }
    p.out
}

impl Parser<'_> {
    fn line(&mut self, line: &str) {
        if !self.comment && line.starts_with('%') {
            return;
        }
        let mut chars = line.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if self.comment {
                if c == '}' {
                    self.comment = false;
                }
                continue;
            }
            match c {
                '{' => self.comment = true,
                ';' => return,
                '(' => self.variation_depth += 1,
                ')' => self.variation_depth = self.variation_depth.saturating_sub(1),
                '[' if self.variation_depth == 0 => {
                    let end = tag_end(&line[i..]).map(|n| i + n);
                    let tag = &line[i..end.unwrap_or(line.len())];
                    self.tag(tag, end.is_some());
                    // skip past the consumed tag text
                    while chars
                        .peek()
                        .is_some_and(|&(j, _)| j < end.unwrap_or(line.len()))
                    {
                        chars.next();
                    }
                }
                c if c.is_whitespace() => {}
                _ => {
                    let mut end = i + c.len_utf8();
                    while let Some(&(j, d)) = chars.peek() {
                        if d.is_whitespace() || "{}();[".contains(d) {
                            break;
                        }
                        end = j + d.len_utf8();
                        chars.next();
                    }
                    if self.variation_depth == 0 {
                        self.word(&line[i..end]);
                    }
                }
            }
        }
    }

    fn tag(&mut self, text: &str, closed: bool) {
        if self.pending.in_movetext {
            self.finish(None);
        }
        self.pending.has_content = true;
        match parse_tag(text).filter(|_| closed) {
            Some((name, value)) => {
                self.pending.tags.insert(name, value);
            }
            None => {
                self.pending
                    .malformed
                    .get_or_insert_with(|| format!("malformed tag pair {text:?}"));
            }
        }
    }

    fn word(&mut self, word: &str) {
        self.pending.has_content = true;
        self.pending.in_movetext = true;
        if matches!(word, "1-0" | "0-1" | "1/2-1/2" | "*") {
            self.finish(Some(word));
            return;
        }
        if word.starts_with('$') {
            return;
        }
        let san = strip_move_number(word).trim_end_matches(['!', '?']);
        if san.is_empty() {
            return;
        }
        self.pending.sans.push(san.to_string());
    }

    fn finish(&mut self, termination: Option<&str>) {
        let pending = std::mem::take(&mut self.pending);
        self.comment = false;
        self.variation_depth = 0;
        self.ordinal += 1;
        match build_game(pending, termination) {
            Ok(g) => self.out.games.push(g),
            Err(reason) => {
                self.out
                    .diagnostics
                    .push(Diagnostic::new(self.source, Some(self.ordinal), reason))
            }
        }
    }
}

/// Byte length of a `[...]` tag at the start of `text`, honouring quotes.
fn tag_end(text: &str) -> Option<usize> {
    let mut quoted = false;
    let mut escaped = false;
    for (i, c) in text.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if quoted => escaped = true,
            '"' => quoted = !quoted,
            ']' if !quoted => return Some(i + 1),
            _ => {}
        }
    }
    None
}

/// Drops a leading move number such as `12.` or `12...`.
fn strip_move_number(word: &str) -> &str {
    let digits = word.len() - word.trim_start_matches(|c: char| c.is_ascii_digit()).len();
    if digits > 0 && word[digits..].starts_with('.') {
        word[digits..].trim_start_matches('.')
    } else {
        word
    }
}

fn parse_tag(line: &str) -> Option<(String, String)> {
    let inner = line.strip_prefix('[')?.trim_end().strip_suffix(']')?.trim();
    let (name, rest) = inner.split_once(char::is_whitespace)?;
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return None;
    }
    let rest = rest.trim();
    let quoted = rest.strip_prefix('"')?.strip_suffix('"')?;
    let mut value = String::with_capacity(quoted.len());
    let mut chars = quoted.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => value.push(chars.next()?),
            '"' => return None,
            _ => value.push(c),
        }
    }
    Some((name.to_string(), value))
}

fn build_game(pending: PendingGame, termination: Option<&str>) -> Result<GameRecord, String> {
    if let Some(m) = pending.malformed {
        return Err(m);
    }
    let token = termination
        .map(str::to_string)
        .or_else(|| pending.tags.get("Result").cloned());
    let result = match token.as_deref() {
        None => return Err("missing result".to_string()),
        Some("*") => return Err("unknown result \"*\"".to_string()),
        Some(t) => {
            Outcome::from_pgn_token(t).ok_or_else(|| format!("unrecognized result {t:?}"))?
        }
    };
    let sp = identify_start(&pending.tags)?;
    if pending.sans.is_empty() {
        return Err("empty movetext".to_string());
    }
    GameRecord::new(sp, pending.sans, result, pending.tags).map_err(|e| match e {
        GameError::Replay { ply, source } => format!("{source} at ply {}", ply + 1),
        other => other.to_string(),
    })
}

/// Start position from the `FEN` tag, else a `Variant`/`StartPosition` tag
/// carrying a back-rank code, else standard chess.
pub fn identify_start(tags: &BTreeMap<String, String>) -> Result<StartPosition, String> {
    if let Some(fen) = tags.get("FEN") {
        let pos = parse_fen(fen).map_err(|e| format!("bad FEN tag: {e}"))?;
        let backrank: Option<[PieceKind; 8]> = (0..8u8)
            .map(|f| pos.piece_at(Square::new(f, 0).unwrap()).map(|p| p.kind))
            .collect::<Option<Vec<_>>>()
            .and_then(|v| v.try_into().ok());
        let sp = backrank
            .and_then(StartPosition::from_backrank)
            .filter(|sp| {
                let start = initial_position(sp);
                fen_placement(&emit_fen(&start)) == fen_placement(&emit_fen(&pos))
                    && pos.side_to_move() == start.side_to_move()
            })
            .ok_or_else(|| format!("FEN tag {fen:?} is not a Chess960 start position"))?;
        return Ok(sp);
    }
    for name in ["Variant", "StartPosition"] {
        if let Some(value) = tags.get(name) {
            if let Some(sp) = value
                .split(|c: char| !c.is_ascii_alphabetic())
                .find_map(|w| w.parse::<StartPosition>().ok())
            {
                return Ok(sp);
            }
        }
    }
    Ok(StartPosition::from_index(STANDARD_INDEX as u32).unwrap())
}

fn fen_placement(fen: &str) -> &str {
    fen.split(' ').next().unwrap_or("")
}

/// Per-file ingestion counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FileSummary {
    pub path: String,
    pub games: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub files: Vec<FileSummary>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Reads and parses every file, in parallel where available; the merged
/// corpus keeps file order then in-file order.
pub fn load_corpus<P: AsRef<Path> + Sync>(paths: &[P]) -> Result<LoadedCorpus, IngestError> {
    let parsed = par::map(paths, |p| {
        let path = p.as_ref();
        let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let label = path.display().to_string();
        parse_pgn_stream(io::BufReader::new(file), &label).map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })
    });
    let mut out = LoadedCorpus::default();
    for (p, parsed) in paths.iter().zip(parsed) {
        let parsed = parsed?;
        out.files.push(FileSummary {
            path: p.as_ref().display().to_string(),
            games: parsed.games.len(),
            skipped: parsed.diagnostics.len(),
        });
        out.corpus.merge(Corpus::from_games(parsed.games));
        out.diagnostics.extend(parsed.diagnostics);
    }
    Ok(out)
}

/// Writes games as PGN with `SetUp`/`FEN` tags for the start position.
/// Tags already on a record are written as-is (Seven Tag Roster first).
pub fn write_pgn<W: Write>(games: &[GameRecord], mut out: W) -> io::Result<()> {
    const ROSTER: [&str; 7] = ["Event", "Site", "Date", "Round", "White", "Black", "Result"];
    for g in games {
        let tags = pgn_tags(g);
        for name in ROSTER {
            if let Some(v) = tags.get(name) {
                writeln!(out, "[{name} \"{}\"]", escape_tag(v))?;
            }
        }
        for (name, v) in &tags {
            if !ROSTER.contains(&name.as_str()) {
                writeln!(out, "[{name} \"{}\"]", escape_tag(v))?;
            }
        }
        writeln!(out)?;
        let mut line = String::new();
        let emit = |word: &str, line: &mut String, out: &mut W| -> io::Result<()> {
            if !line.is_empty() && line.len() + 1 + word.len() > 79 {
                writeln!(out, "{line}")?;
                line.clear();
            }
            if !line.is_empty() {
                line.push(' ');
            }
            line.push_str(word);
            Ok(())
        };
        for (ply, san) in g.san_moves().iter().enumerate() {
            if ply % 2 == 0 {
                emit(&format!("{}.", ply / 2 + 1), &mut line, &mut out)?;
            }
            emit(san, &mut line, &mut out)?;
        }
        emit(g.result().pgn_token(), &mut line, &mut out)?;
        writeln!(out, "{line}")?;
        writeln!(out)?;
    }
    Ok(())
}

/// Tags a written game carries: the record's own tags plus `Result`,
/// `SetUp` and `FEN` for its start position.
pub fn pgn_tags(g: &GameRecord) -> BTreeMap<String, String> {
    let mut tags = g.tags().clone();
    tags.insert("Result".into(), g.result().pgn_token().into());
    tags.insert("SetUp".into(), "1".into());
    tags.insert("FEN".into(), emit_fen(&initial_position(&g.sp())));
    tags
}

fn escape_tag(v: &str) -> String {
    v.replace('\\', "\\\\").replace('"', "\\\"")
}
