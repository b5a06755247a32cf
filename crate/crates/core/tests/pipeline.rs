use c960_core::dataset::{
    build_ds1, build_ds2, build_ds3, read_table, write_table, DatasetKind, FeatureTable,
};
use c960_core::ingest::{load_corpus, write_pgn, Corpus};
use c960_core::learn::{evaluate, ModelConfig, ModelKind};
use c960_core::regions::count_regions;
use c960_core::synth::{gen_corpus, LabelRule, SynthConfig};
use c960_core::themes::{analyze, theme_report, DEFAULT_SNAPSHOTS};
use c960_core::Outcome;

fn corpus(rule: LabelRule, min_moves: u32, max_moves: u32) -> Corpus {
    let cfg = SynthConfig {
        sps: vec![0, 17, 518, 700, 959],
        games_per_sp: 6,
        min_moves,
        max_moves,
        label_rule: rule,
        seed: 99,
        ..SynthConfig::default()
    };
    let (c, diags) = gen_corpus(&cfg).unwrap();
    assert!(diags.is_empty());
    c
}

#[test]
fn pgn_round_trip_preserves_games() {
    let c = corpus(LabelRule::FromPlay, 20, 40);
    let dir = tempfile::tempdir().unwrap();
    let mut paths = Vec::new();
    for (sp, games) in c.iter() {
        let path = dir.path().join(format!("sp_{sp:04}.pgn"));
        write_pgn(games, std::fs::File::create(&path).unwrap()).unwrap();
        paths.push(path);
    }
    let loaded = load_corpus(&paths).unwrap();
    assert!(loaded.diagnostics.is_empty());
    assert_eq!(loaded.corpus.sp_indices(), c.sp_indices());
    for (sp, games) in c.iter() {
        let back = loaded.corpus.games(sp);
        assert_eq!(back.len(), games.len());
        for (a, b) in games.iter().zip(back) {
            assert_eq!(a.sp(), b.sp());
            assert_eq!(a.moves(), b.moves());
            assert_eq!(a.san_moves(), b.san_moves());
            assert_eq!(a.result(), b.result());
        }
    }
    assert!(loaded.files.iter().all(|f| f.games == 6 && f.skipped == 0));
}

#[test]
fn material_labels_match_move_twenty_position() {
    let c = corpus(LabelRule::MaterialAt20, 20, 30);
    for (_, games) in c.iter() {
        for g in games {
            let pos = g.position_at_move(20).unwrap();
            let mut men = [0i32; 2];
            for (_, piece) in pos.pieces() {
                men[piece.color.index()] += 1;
            }
            let expected = match (men[0] - men[1]).signum() {
                1 => Outcome::WhiteWin,
                -1 => Outcome::BlackWin,
                _ => Outcome::Draw,
            };
            assert_eq!(g.result(), expected);
        }
    }
}

#[test]
fn feature_rows_are_reproducible() {
    let c = corpus(LabelRule::FromPlay, 20, 40);
    let ds2 = build_ds2(&c);
    let ds3 = build_ds3(&c);
    for (sp, t) in ds2.iter().chain(&ds3) {
        for r in &t.rows {
            let g = &c.games(*sp)[r.game_ordinal as usize];
            let pos = g.position_at_move(r.move_number).unwrap();
            assert_eq!(count_regions(&pos).to_features(), r.features);
            assert_eq!(r.label, g.result());
            assert!(r.features.iter().map(|&x| x as u32).sum::<u32>() <= 32);
        }
    }
    let rows = |m: &std::collections::BTreeMap<u16, FeatureTable>| {
        m.values().map(|t| t.rows.len()).sum::<usize>()
    };
    assert_eq!(rows(&ds2), 30);
    assert_eq!(rows(&ds3), 6 * 30);
    assert!(rows(&ds3) > rows(&ds2));
    for t in ds3.values() {
        for chunk in t.rows.chunks(6) {
            assert!(chunk
                .iter()
                .all(|r| r.label == chunk[0].label && r.game_ordinal == chunk[0].game_ordinal));
            let moves: Vec<u32> = chunk.iter().map(|r| r.move_number).collect();
            assert_eq!(moves, vec![10, 11, 12, 13, 14, 15]);
        }
    }
}

#[test]
fn short_games_are_skipped_not_padded() {
    let c = corpus(LabelRule::FromPlay, 10, 12);
    let ds2 = build_ds2(&c);
    assert!(ds2.values().all(|t| t.rows.is_empty() && t.skipped == 6));
    let (ds1, diags) = build_ds1(&c, 1);
    assert!(ds1.rows.is_empty());
    assert_eq!(diags.len(), 5);
    let ds3 = build_ds3(&c);
    assert!(ds3.values().all(|t| t.rows.is_empty() && t.skipped == 6));
}

#[test]
fn ds1_picks_one_game_per_position_reproducibly() {
    let c = corpus(LabelRule::FromPlay, 20, 40);
    let (a, d) = build_ds1(&c, 3);
    assert!(d.is_empty());
    assert_eq!(a.rows.len(), 5);
    assert!(a.rows.windows(2).all(|w| w[0].sp_index < w[1].sp_index));
    assert_eq!(build_ds1(&c, 3).0, a);
    let picks = |t: &FeatureTable| t.rows.iter().map(|r| r.game_ordinal).collect::<Vec<_>>();
    let varied = (0..20).any(|s| picks(&build_ds1(&c, s).0) != picks(&a));
    assert!(varied);
}

#[test]
fn table_files_round_trip() {
    let c = corpus(LabelRule::UniformRandom, 20, 30);
    let dir = tempfile::tempdir().unwrap();
    for (sp, t) in build_ds3(&c) {
        let path = dir.path().join(format!("{sp}.csv"));
        write_table(&t, &path).unwrap();
        assert_eq!(read_table(&path).unwrap(), t);
    }
    let empty = FeatureTable::new(DatasetKind::Ds2);
    let path = dir.path().join("empty.csv");
    write_table(&empty, &path).unwrap();
    assert_eq!(read_table(&path).unwrap(), empty);
}

#[test]
fn theme_report_covers_every_assigned_position() {
    let c = corpus(LabelRule::FromPlay, 16, 30);
    let run = analyze(&c, &DEFAULT_SNAPSHOTS);
    assert_eq!(run.assignments.len(), 5);
    let report = theme_report(&run.assignments);
    assert_eq!(report.categories.iter().map(|r| r.count).sum::<usize>(), 5);
    for a in &run.assignments {
        let white: i32 = a.totals.white.iter().flatten().sum();
        let black: i32 = a.totals.black.iter().flatten().sum();
        assert!(white <= 0 && black <= 0);
    }
}

#[test]
fn evaluation_is_deterministic() {
    let c = corpus(LabelRule::MaterialAt20, 20, 30);
    let tables = build_ds2(&c);
    for kind in ModelKind::ALL {
        let mut cfg = ModelConfig::new(kind);
        cfg.k = 3;
        cfg.n_trees = 10;
        cfg.n_rounds = 10;
        let a = evaluate(&tables, &cfg, 3).unwrap();
        assert_eq!(a, evaluate(&tables, &cfg, 3).unwrap());
        for acc in a.per_table_accuracy.values() {
            assert!((0.0..=1.0).contains(acc));
        }
    }
}
