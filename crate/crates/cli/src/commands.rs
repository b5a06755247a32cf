use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use walkdir::WalkDir;

use c960_core::chess::{all_start_positions, emit_fen, initial_position};
use c960_core::dataset::{self, DatasetKind, FeatureTable, TableError};
use c960_core::diag::Diagnostic;
use c960_core::ingest::{load_corpus, write_pgn, FileSummary, LoadedCorpus};
use c960_core::learn::{evaluate, EvalReport, ModelConfig, ModelKind};
use c960_core::report::accuracy_table;
use c960_core::synth::{gen_corpus, SynthConfig};
use c960_core::themes::{analyze, check_reference, theme_report, ThemeAssignment, ThemeReport, REFERENCE_CATEGORY};

use crate::args::{parse_number_list, DatasetArgs, EvalArgs, InputArgs, SynthArgs, ThemesArgs};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn warn(diags: &[Diagnostic]) {
    for d in diags {
        eprintln!("skip\t{d}");
    }
}

/// Input files with the given extension: plain paths as-is, directories
/// searched recursively, in sorted order.
fn collect_files(inputs: &[PathBuf], ext: &str, skip: &[&str]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found = Vec::new();
            for entry in WalkDir::new(p).sort_by_file_name() {
                let entry = entry.map_err(|e| {
                    let path = e.path().unwrap_or(p).to_path_buf();
                    CliError::io(&path, e.into())
                })?;
                let path = entry.path();
                let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
                if entry.file_type().is_file()
                    && path.extension().is_some_and(|x| x.eq_ignore_ascii_case(ext))
                    && !skip.contains(&name)
                {
                    found.push(path.to_path_buf());
                }
            }
            files.extend(found);
        } else if p.exists() {
            files.push(p.clone());
        } else {
            return Err(CliError::io(p, io::Error::from(io::ErrorKind::NotFound)));
        }
    }
    Ok(files)
}

fn load(input: &InputArgs) -> Result<LoadedCorpus> {
    let files = collect_files(&input.inputs, "pgn", &[])?;
    load_corpus(&files).map_err(|e| match e {
        c960_core::ingest::IngestError::Io { path, source } => CliError::Io { path, source },
    })
}

fn load_nonempty(input: &InputArgs) -> Result<LoadedCorpus> {
    let loaded = load(input)?;
    warn(&loaded.diagnostics);
    if loaded.corpus.is_empty() {
        return Err(CliError::NoData("no games ingested".into()));
    }
    Ok(loaded)
}

pub fn positions(out: Option<&Path>) -> Result<()> {
    let mut text = String::new();
    for sp in all_start_positions() {
        text.push_str(&format!("{}\t{}\t{}\n", sp.index(), sp.code(), emit_fen(&initial_position(sp))));
    }
    if let Some(dir) = out {
        create_dir(dir)?;
        write_file(&dir.join("positions.tsv"), text.as_bytes())?;
    }
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    // a closed pipe is not an error
    let _ = lock.write_all(text.as_bytes());
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    total_games: usize,
    start_positions: BTreeMap<u16, usize>,
    files: &'a [FileSummary],
    diagnostics: &'a [Diagnostic],
}

fn manifest(loaded: &LoadedCorpus) -> Manifest<'_> {
    Manifest {
        total_games: loaded.corpus.total_games(),
        start_positions: loaded.corpus.iter().map(|(sp, g)| (sp, g.len())).collect(),
        files: &loaded.files,
        diagnostics: &loaded.diagnostics,
    }
}

pub fn ingest(a: &InputArgs, out: &Path) -> Result<()> {
    let loaded = load(a)?;
    warn(&loaded.diagnostics);
    create_dir(out)?;
    write_json(&out.join("manifest.json"), &manifest(&loaded))?;
    println!(
        "{} games over {} start positions from {} files, {} skipped",
        loaded.corpus.total_games(),
        loaded.corpus.sp_count(),
        loaded.files.len(),
        loaded.diagnostics.len()
    );
    if loaded.corpus.is_empty() {
        return Err(CliError::NoData("no games ingested".into()));
    }
    Ok(())
}

fn table_error(path: &Path, e: TableError) -> CliError {
    match e {
        TableError::Io(source) => CliError::io(path, source),
        TableError::Format { .. } => CliError::Format(format!("{}: {e}", path.display())),
    }
}

pub fn dataset(a: &DatasetArgs, seed: u64, out: &Path) -> Result<()> {
    let loaded = load_nonempty(&a.input)?;
    let corpus = &loaded.corpus;
    create_dir(out)?;
    if a.move_number == 0 {
        return Err(CliError::Config("--move must be at least 1".into()));
    }
    if a.dataset == DatasetKind::Ds1 {
        let (table, diags) = dataset::build_ds1_at(corpus, seed, a.move_number);
        warn(&diags);
        let path = out.join("ds1.csv");
        dataset::write_table(&table, &path).map_err(|e| table_error(&path, e))?;
        println!("ds1: {} rows, {} start positions without a usable game", table.rows.len(), diags.len());
        return Ok(());
    }
    let moves = match a.dataset {
        DatasetKind::Ds3 => parse_number_list(&a.snapshot_moves).map_err(CliError::Config)?,
        _ => vec![a.move_number],
    };
    if moves.contains(&0) {
        return Err(CliError::Config("snapshot moves start at 1".into()));
    }
    let tables = dataset::build_per_sp(corpus, a.dataset, &moves);
    let dir = out.join(a.dataset.to_string());
    create_dir(&dir)?;
    let mut index = String::from("sp,code,rows,skipped,file\n");
    let (mut rows, mut skipped) = (0, 0);
    for (sp, t) in &tables {
        let name = format!("sp_{sp:04}.csv");
        let path = dir.join(&name);
        dataset::write_table(t, &path).map_err(|e| table_error(&path, e))?;
        let code = corpus.games(*sp)[0].sp().code();
        index.push_str(&format!("{sp},{code},{},{},{name}\n", t.rows.len(), t.skipped));
        rows += t.rows.len();
        skipped += t.skipped;
        if t.skipped > 0 {
            eprintln!("skip\tsp {sp}\t-\t{} games end before move {}", t.skipped, moves.iter().max().unwrap());
        }
    }
    write_file(&dir.join("index.csv"), index.as_bytes())?;
    println!("{}: {} tables, {rows} rows, {skipped} games skipped", a.dataset, tables.len());
    Ok(())
}

/// Reads every table; all must share one dataset kind.
fn read_tables(paths: &[PathBuf]) -> Result<(DatasetKind, BTreeMap<u16, FeatureTable>, Vec<Diagnostic>)> {
    let files = collect_files(paths, "csv", &["index.csv"])?;
    let mut kind = None;
    let mut tables = BTreeMap::new();
    let mut diags = Vec::new();
    for path in &files {
        let t = dataset::read_table(path).map_err(|e| table_error(path, e))?;
        if kind.is_some_and(|k| k != t.kind) {
            return Err(CliError::Format(format!(
                "{}: {} table mixed with {} tables",
                path.display(),
                t.kind,
                kind.unwrap()
            )));
        }
        kind = Some(t.kind);
        let key = if t.kind == DatasetKind::Ds1 {
            Some(u16::MAX)
        } else {
            t.rows.first().map(|r| r.sp_index)
        };
        match key {
            Some(k) if tables.contains_key(&k) => {
                return Err(CliError::Format(format!("{}: start position {k} given twice", path.display())))
            }
            Some(k) => {
                tables.insert(k, t);
            }
            None => diags.push(Diagnostic::new(path.display().to_string(), None, "empty table")),
        }
    }
    let kind = kind.ok_or_else(|| CliError::NoData("no table files found".into()))?;
    Ok((kind, tables, diags))
}

fn model_config(a: &EvalArgs, kind: ModelKind, dataset: DatasetKind, seed: u64) -> Result<ModelConfig> {
    let mut cfg = ModelConfig::new(kind);
    cfg.k = ModelConfig::default_k(dataset);
    cfg.seed = seed;
    if let Some(path) = &a.config {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let table: toml::Table =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut merged = toml::Table::try_from(&cfg).expect("config serializes");
        merged.extend(table);
        merged.insert("kind".into(), toml::Value::String(kind.to_string()));
        cfg = merged
            .try_into()
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    }
    if let Some(k) = a.k {
        cfg.k = k;
    }
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}

pub fn eval(a: &EvalArgs, seed: u64, out: &Path) -> Result<()> {
    if a.folds < 2 {
        return Err(CliError::Config("--folds must be at least 2".into()));
    }
    let (kind, tables, diags) = read_tables(&a.tables)?;
    warn(&diags);
    let models: Vec<ModelKind> = match a.model {
        Some(m) => vec![m],
        None => ModelKind::ALL.to_vec(),
    };
    create_dir(out)?;
    let mut reports: Vec<EvalReport> = Vec::new();
    for m in models {
        let cfg = model_config(a, m, kind, seed)?;
        let report = evaluate(&tables, &cfg, a.folds).map_err(|e| CliError::Config(e.to_string()))?;
        warn(&report.diagnostics);
        write_json(&out.join(format!("eval_{kind}_{m}.json")), &report)?;
        reports.push(report);
    }
    let text = accuracy_table(&[(kind, reports.clone())]);
    write_file(&out.join(format!("accuracy_{kind}.txt")), text.as_bytes())?;
    print!("{text}");
    if reports.iter().all(|r| r.summary.is_none()) {
        return Err(CliError::NoData("no table could be evaluated".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct ThemeOutput<'a> {
    snapshot_moves: [u32; 4],
    assignments: &'a [ThemeAssignment],
    report: &'a ThemeReport,
    diagnostics: &'a [Diagnostic],
}

pub fn themes(a: &ThemesArgs, out: &Path) -> Result<()> {
    let moves = parse_number_list(&a.snapshot_moves).map_err(CliError::Config)?;
    let moves: [u32; 4] = moves
        .try_into()
        .map_err(|_| CliError::Config("--snapshot-moves needs exactly four moves".into()))?;
    if moves[0] == 0 || moves.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config("snapshot moves must be increasing and start at 1 or later".into()));
    }
    let loaded = load_nonempty(&a.input)?;
    let run = analyze(&loaded.corpus, &moves);
    warn(&run.diagnostics);
    let report = theme_report(&run.assignments);
    create_dir(out)?;
    write_json(
        &out.join("themes.json"),
        &ThemeOutput {
            snapshot_moves: moves,
            assignments: &run.assignments,
            report: &report,
            diagnostics: &run.diagnostics,
        },
    )?;
    let table = report.table_text();
    write_file(&out.join("themes_table.txt"), table.as_bytes())?;
    write_file(&out.join("themes_listing.txt"), report.listing_text().as_bytes())?;
    print!("{table}");
    println!("{} assignments with a degenerate phase", report.degenerate);
    if let Some(hit) = check_reference(&run.assignments) {
        let (code, w, b) = REFERENCE_CATEGORY;
        println!(
            "reference {code}: expected {}_{}, {}",
            w.short_name(),
            b.short_name(),
            if hit { "matched" } else { "not matched" }
        );
    }
    if run.assignments.is_empty() {
        return Err(CliError::NoData("no start position had a usable game".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct SynthManifest<'a> {
    config: &'a SynthConfig,
    total_games: usize,
    start_positions: BTreeMap<u16, usize>,
    diagnostics: &'a [Diagnostic],
}

pub fn synth(a: &SynthArgs, seed: u64, out: &Path) -> Result<()> {
    let sps = parse_number_list(&a.sps).map_err(CliError::Config)?;
    let sps: Vec<u16> = sps
        .into_iter()
        .map(|s| u16::try_from(s).map_err(|_| CliError::Config(format!("start position {s} out of range"))))
        .collect::<Result<_>>()?;
    let cfg = SynthConfig {
        sps,
        games_per_sp: a.games_per_sp,
        min_moves: a.min_moves,
        max_moves: a.max_moves,
        label_rule: a.label_rule,
        seed,
        ..SynthConfig::default()
    };
    let (corpus, diags) = gen_corpus(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
    warn(&diags);
    create_dir(out)?;
    for (sp, games) in corpus.iter() {
        let path = out.join(format!("sp_{sp:04}.pgn"));
        let file = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut w = BufWriter::new(file);
        write_pgn(games, &mut w)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::io(&path, e))?;
    }
    write_json(
        &out.join("manifest.json"),
        &SynthManifest {
            config: &cfg,
            total_games: corpus.total_games(),
            start_positions: corpus.iter().map(|(sp, g)| (sp, g.len())).collect(),
            diagnostics: &diags,
        },
    )?;
    println!(
        "{} games over {} start positions written to {}",
        corpus.total_games(),
        corpus.sp_count(),
        out.display()
    );
    Ok(())
}
