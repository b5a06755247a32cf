use std::collections::BTreeMap;

use c960_core::chess::{
    emit_fen, initial_position, legal_moves, parse_fen, parse_san, san_of, Color, Position,
    StartPosition,
};
use c960_core::dataset::{
    read_table_from_str, write_table_to, DatasetKind, FeatureRow, FeatureTable,
};
use c960_core::learn::{gbt_fit, rf_fit, LabeledSample, ModelConfig, ModelKind};
use c960_core::regions::count_regions;
use c960_core::synth::{gen_game, SynthConfig};
use c960_core::themes::{
    aggregate_sp, assign_region, classify_sp, phase_deltas, snapshot_counts, DEFAULT_SNAPSHOTS,
};
use c960_core::Outcome;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn playout(sp: u32, seed: u64, plies: usize) -> Vec<Position> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos = initial_position(&StartPosition::from_index(sp).unwrap());
    let mut out = vec![pos.clone()];
    for _ in 0..plies {
        let moves = legal_moves(&pos);
        let Some(mv) = moves.choose(&mut rng) else {
            break;
        };
        pos = pos.apply_move(mv);
        out.push(pos.clone());
    }
    out
}

fn synth_cfg(seed: u64) -> SynthConfig {
    SynthConfig {
        seed,
        min_moves: 16,
        max_moves: 30,
        ..SynthConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fen_round_trips_along_playouts(sp in 0u32..960, seed: u64) {
        for p in playout(sp, seed, 80) {
            let fen = emit_fen(&p);
            let back = parse_fen(&fen).unwrap();
            prop_assert_eq!(&back, &p, "{}", fen);
            prop_assert_eq!(emit_fen(&back), fen);
        }
    }

    #[test]
    fn san_resolves_to_the_move_it_names(sp in 0u32..960, seed: u64) {
        for p in playout(sp, seed, 60) {
            for mv in legal_moves(&p) {
                let san = san_of(&p, &mv);
                prop_assert_eq!(parse_san(&p, &san).unwrap(), mv, "{} in {}", san, emit_fen(&p));
            }
        }
    }

    #[test]
    fn region_counts_conserve_and_never_grow(sp in 0u32..960, seed: u64) {
        let mut last = (16, 16);
        for p in playout(sp, seed, 120) {
            let c = count_regions(&p);
            let (w, b) = (c.total(Color::White) as usize, c.total(Color::Black) as usize);
            prop_assert_eq!(w, p.count(Color::White));
            prop_assert_eq!(b, p.count(Color::Black));
            prop_assert!(w <= last.0 && b <= last.1);
            last = (w, b);
        }
    }

    #[test]
    fn phase_deltas_telescope(sp in 0u16..960, id in 0u64..1000, seed: u64) {
        let g = gen_game(sp, &synth_cfg(seed), id).unwrap();
        let s = snapshot_counts(&g, &DEFAULT_SNAPSHOTS).unwrap();
        let d = phase_deltas(&s);
        for r in 0..5 {
            let w: i32 = (0..3).map(|p| d.white[p][r]).sum();
            let b: i32 = (0..3).map(|p| d.black[p][r]).sum();
            prop_assert_eq!(w, s[3].white[r] as i32 - s[0].white[r] as i32);
            prop_assert_eq!(b, s[3].black[r] as i32 - s[0].black[r] as i32);
        }
        for p in 0..3 {
            prop_assert!(d.white[p].iter().sum::<i32>() <= 0);
            prop_assert!(d.black[p].iter().sum::<i32>() <= 0);
        }
    }

    #[test]
    fn aggregation_is_linear_and_order_free(sp in 0u16..960, seed: u64, split in 1usize..5) {
        let cfg = synth_cfg(seed);
        let games: Vec<_> = (0..6).map(|i| gen_game(sp, &cfg, i).unwrap()).collect();
        let all = aggregate_sp(sp, &games, &DEFAULT_SNAPSHOTS).unwrap();
        let mut parts = aggregate_sp(sp, &games[..split], &DEFAULT_SNAPSHOTS).unwrap().totals;
        parts.add(&aggregate_sp(sp, &games[split..], &DEFAULT_SNAPSHOTS).unwrap().totals);
        prop_assert_eq!(all.totals, parts);
        let mut rev = games.clone();
        rev.reverse();
        prop_assert_eq!(
            classify_sp(sp, &games, &DEFAULT_SNAPSHOTS).unwrap(),
            classify_sp(sp, &rev, &DEFAULT_SNAPSHOTS).unwrap()
        );
    }

    #[test]
    fn region_choice_is_scale_invariant(t in prop::array::uniform5(-1000i32..1000), c in 1i32..50) {
        let scaled = t.map(|v| v * c);
        prop_assert_eq!(assign_region(&t), assign_region(&scaled));
    }

    #[test]
    fn tables_round_trip_through_csv(rows in prop::collection::vec(
        (0u16..960, 0u32..500, 1u32..80, prop::array::uniform10(0u8..=3), 0usize..3), 0..40),
        skipped in 0usize..20)
    {
        let mut t = FeatureTable::new(DatasetKind::Ds3);
        t.skipped = skipped;
        for (sp, g, m, f, y) in rows {
            t.rows.push(FeatureRow { sp_index: sp, game_ordinal: g, move_number: m, features: f, label: Outcome::ALL[y] });
        }
        let mut buf = Vec::new();
        write_table_to(&t, &mut buf).unwrap();
        prop_assert_eq!(read_table_from_str(std::str::from_utf8(&buf).unwrap()).unwrap(), t);
    }
}

fn random_samples(rng: &mut ChaCha8Rng, n: usize) -> Vec<LabeledSample> {
    (0..n)
        .map(|_| LabeledSample {
            x: std::array::from_fn(|_| rng.gen_range(0..6)),
            y: Outcome::ALL[rng.gen_range(0..3)],
        })
        .collect()
}

#[test]
fn tree_models_ignore_training_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..4 {
        let train = random_samples(&mut rng, 80);
        let mut shuffled = train.clone();
        shuffled.shuffle(&mut rng);
        let queries = random_samples(&mut rng, 30);
        let mut cfg = ModelConfig::new(ModelKind::Rf);
        cfg.seed = round;
        cfg.n_trees = 25;
        let (a, b) = (
            rf_fit(&train, &cfg).unwrap(),
            rf_fit(&shuffled, &cfg).unwrap(),
        );
        cfg.n_rounds = 20;
        let (c, d) = (
            gbt_fit(&train, &cfg).unwrap(),
            gbt_fit(&shuffled, &cfg).unwrap(),
        );
        for q in &queries {
            assert_eq!(a.votes(&q.x), b.votes(&q.x));
            assert_eq!(c.raw_scores(&q.x), d.raw_scores(&q.x));
        }
    }
}

#[test]
fn forest_depends_on_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let train = random_samples(&mut rng, 120);
    let queries = random_samples(&mut rng, 40);
    let mut cfg = ModelConfig::new(ModelKind::Rf);
    cfg.n_trees = 15;
    let a = rf_fit(&train, &cfg).unwrap();
    cfg.seed = 1;
    let b = rf_fit(&train, &cfg).unwrap();
    assert!(queries.iter().any(|q| a.votes(&q.x) != b.votes(&q.x)));
}

#[test]
fn synthetic_games_are_reproducible() {
    let cfg = synth_cfg(5);
    let a: BTreeMap<u64, _> = (0..5)
        .map(|i| (i, gen_game(300, &cfg, i).unwrap()))
        .collect();
    let b: BTreeMap<u64, _> = (0..5)
        .map(|i| (i, gen_game(300, &cfg, i).unwrap()))
        .collect();
    assert_eq!(a, b);
}
