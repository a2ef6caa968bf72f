mod common;

use std::collections::HashSet;

use gpidiff_core::ingest::{load_score_matrix, score_matrix_csv};
use gpidiff_core::metrics::{cosine_distance, eigen_spectrum, mean_vector};
use gpidiff_core::normalize::{column_stats, pooled_table_stats, zscore_table};
use gpidiff_core::synth::sample_cell;
use gpidiff_core::synth::LabelDistribution;
use gpidiff_core::{
    analyze, fingerprint, AnalysisConfig, CopingLabelSet, DegenerateCosinePolicy, Error,
    NormalizationMode, ScoreMatrix, SymmetricMatrix, Table,
};
use proptest::prelude::*;

fn labels(n: usize) -> CopingLabelSet {
    CopingLabelSet::new((0..n).map(|j| format!("label {j}"))).unwrap()
}

fn score_rows(max_rows: usize, n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..=1.0, n), 2..max_rows)
}

fn to_rows(rows: &[Vec<f64>]) -> Vec<(String, Vec<f64>)> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| (format!("d{i}"), r.clone()))
        .collect()
}

#[derive(Debug, Clone)]
enum Violation {
    ShortRow,
    LongRow,
    NaN,
    Infinite,
    AboveOne(f64),
    BelowZero(f64),
    SingleRow,
}

fn violation() -> impl Strategy<Value = Violation> {
    prop_oneof![
        Just(Violation::ShortRow),
        Just(Violation::LongRow),
        Just(Violation::NaN),
        Just(Violation::Infinite),
        (1e-8f64..10.0).prop_map(Violation::AboveOne),
        (1e-8f64..10.0).prop_map(Violation::BelowZero),
        Just(Violation::SingleRow),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn single_violations_are_rejected_by_name(
        rows in score_rows(8, 4),
        v in violation(),
        pick in any::<prop::sample::Index>(),
        col in 0usize..4,
    ) {
        let l = labels(4);
        let mut rows = to_rows(&rows);
        let i = pick.index(rows.len());
        match &v {
            Violation::ShortRow => { rows[i].1.pop(); }
            Violation::LongRow => rows[i].1.push(0.5),
            Violation::NaN => rows[i].1[col] = f64::NAN,
            Violation::Infinite => rows[i].1[col] = f64::INFINITY,
            Violation::AboveOne(d) => rows[i].1[col] = 1.0 + d,
            Violation::BelowZero(d) => rows[i].1[col] = -d,
            Violation::SingleRow => rows.truncate(1),
        }
        let err = ScoreMatrix::new("g", &l, rows).unwrap_err();
        let ok = match v {
            Violation::ShortRow | Violation::LongRow => matches!(err, Error::RowLength { row, .. } if row == i + 1),
            Violation::NaN | Violation::Infinite => matches!(err, Error::NonFinite { row, .. } if row == i + 1),
            Violation::AboveOne(_) | Violation::BelowZero(_) =>
                matches!(err, Error::OutOfRange { row, ref column, .. } if row == i + 1 && *column == l.labels()[col]),
            Violation::SingleRow => matches!(err, Error::InsufficientRows { found: 1, .. }),
        };
        prop_assert!(ok, "unexpected error {err:?}");
    }

    #[test]
    fn accepted_matrices_satisfy_invariants(rows in score_rows(10, 3)) {
        let m = ScoreMatrix::new("g", &labels(3), to_rows(&rows)).unwrap();
        prop_assert!(m.nrows() >= 2);
        prop_assert!(m.scores().as_slice().iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn row_wise_rows_are_standardized(rows in score_rows(10, 27)) {
        let out = zscore_table(&Table::<f64>::from_rows(&rows), NormalizationMode::RowWise, None);
        for (i, r) in out.table.rows().enumerate() {
            if out.zeroed.contains(&i) {
                prop_assert!(r.iter().all(|&x| x == 0.0));
                continue;
            }
            let mean = r.iter().sum::<f64>() / 27.0;
            let sd = (r.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 27.0).sqrt();
            prop_assert!(mean.abs() < 1e-9);
            prop_assert!((sd - 1.0).abs() < 1e-9);
        }
        // idempotent on already-normalized rows
        let again = zscore_table(&out.table, NormalizationMode::RowWise, None);
        for (x, y) in again.table.as_slice().iter().zip(out.table.as_slice()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn per_group_column_mean_vanishes(rows in score_rows(30, 6)) {
        let out = zscore_table(&Table::<f64>::from_rows(&rows), NormalizationMode::PerGroupColumn, None);
        for m in mean_vector(&out.table) {
            prop_assert!(m.abs() < 1e-12);
        }
    }

    #[test]
    fn pooled_means_cancel(a in score_rows(30, 6), b in score_rows(30, 6)) {
        let (ta, tb) = (Table::<f64>::from_rows(&a), Table::<f64>::from_rows(&b));
        let stats = pooled_table_stats(&ta, &tb);
        let ma = mean_vector(&zscore_table(&ta, NormalizationMode::PooledColumn, Some(&stats)).table);
        let mb = mean_vector(&zscore_table(&tb, NormalizationMode::PooledColumn, Some(&stats)).table);
        for j in 0..6 {
            let s = a.len() as f64 * ma[j] + b.len() as f64 * mb[j];
            prop_assert!(s.abs() < 1e-9, "{s}");
        }
    }

    #[test]
    fn cosine_in_range(
        a in prop::collection::vec(-10.0f64..10.0, 1..30),
        b in prop::collection::vec(-10.0f64..10.0, 1..30),
    ) {
        let n = a.len().min(b.len());
        if let Ok(d) = cosine_distance(&a[..n], &b[..n], DegenerateCosinePolicy::Error) {
            prop_assert!((0.0..=2.0).contains(&d));
        }
    }

    #[test]
    fn spectrum_shift_and_scale(seed in any::<u64>(), order in 2usize..9, shift in -5.0f64..5.0, scale in 0.01f64..100.0) {
        let mut rng = common::rng(seed);
        let a = SymmetricMatrix::from_upper(&common::random_symmetric(&mut rng, order));
        let base = eigen_spectrum(&a).unwrap();
        let shifted = eigen_spectrum(&a.shifted(shift)).unwrap();
        let scaled = eigen_spectrum(&a.scaled(scale)).unwrap();
        prop_assert!((base.iter().sum::<f64>() - a.trace()).abs() < 1e-9);
        for k in 0..order {
            prop_assert!((shifted[k] - (base[k] + shift)).abs() < 1e-9);
            prop_assert!((scaled[k] - scale * base[k]).abs() < 1e-9 * scale.max(1.0));
        }
    }

    #[test]
    fn analyze_is_swap_symmetric(a in score_rows(12, 5), b in score_rows(12, 5)) {
        let l = labels(5);
        let ma = ScoreMatrix::new("alpha", &l, to_rows(&a)).unwrap();
        let mb = ScoreMatrix::new("beta", &l, to_rows(&b)).unwrap();
        let cfg = AnalysisConfig { degenerate_cosine: DegenerateCosinePolicy::ZeroDistance, ..Default::default() };
        match (analyze(&ma, &mb, &cfg), analyze(&mb, &ma, &cfg)) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(&x, &y);
                let c = &x.components;
                prop_assert_eq!(c.gpi_diff, c.harmonic_mean + c.euclidean);
                prop_assert!(c.euclidean <= 5f64.sqrt());
            }
            (Err(x), Err(y)) => prop_assert_eq!(x.to_string(), y.to_string()),
            _ => prop_assert!(false, "asymmetric outcome"),
        }
    }

    #[test]
    fn csv_round_trip(rows in score_rows(8, 4)) {
        let l = labels(4);
        let m = ScoreMatrix::new("g", &l, to_rows(&rows)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.csv");
        std::fs::write(&p, score_matrix_csv(&m, &l)).unwrap();
        let once: ScoreMatrix<f64> = load_score_matrix(&p, &l).unwrap();
        std::fs::write(&p, score_matrix_csv(&once, &l)).unwrap();
        let twice: ScoreMatrix<f64> = load_score_matrix(&p, &l).unwrap();
        prop_assert_eq!(&once, &twice);
        for (x, y) in once.scores().as_slice().iter().zip(m.scores().as_slice()) {
            prop_assert!((x - y).abs() <= 5e-10);
        }
    }

    #[test]
    fn sampled_scores_stay_in_unit_interval(seed in any::<u64>(), mean in 0.0f64..=1.0, conc in 0.01f64..1e4, row in 0usize..1000) {
        let x = sample_cell(seed, row, 3, LabelDistribution { mean, concentration: conc });
        prop_assert!((0.0..=1.0).contains(&x));
    }
}

#[test]
fn fingerprint_has_no_collisions_on_random_sets() {
    use rand::Rng;
    let mut rng = common::rng(1000);
    let mut sets = HashSet::new();
    let mut digests = HashSet::new();
    while sets.len() < 1000 {
        let n = rng.random_range(2..30);
        let set: Vec<String> = (0..n)
            .map(|_| format!("label-{}", rng.random_range(0..200)))
            .collect();
        if sets.insert(set.clone()) {
            digests.insert(fingerprint(&set));
        }
    }
    assert_eq!(digests.len(), 1000);
}

#[test]
fn identical_pooled_inputs_match_single_stats() {
    let mut rng = common::rng(4);
    let rows = common::random_rows(&mut rng, 20, 5);
    let t = Table::<f64>::from_rows(&rows);
    let single = column_stats(&t);
    let pooled = pooled_table_stats(&t, &t);
    for j in 0..5 {
        assert!((single.means[j] - pooled.means[j]).abs() < 1e-15);
        assert!((single.stdevs[j] - pooled.stdevs[j]).abs() < 1e-15);
    }
}
