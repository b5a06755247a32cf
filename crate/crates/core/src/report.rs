//! Plain-text accuracy tables: one block per dataset, one column per model.
//! Per-position datasets get Median, Mean and Maximum rows; a single-table
//! dataset gets only Mean.

use std::fmt::Write as _;

use crate::dataset::DatasetKind;
use crate::learn::{EvalReport, ModelKind, Summary};

/// Dataset label used in the first column, e.g. "Data Set 2".
pub fn dataset_title(kind: DatasetKind) -> &'static str {
    match kind {
        DatasetKind::Ds1 => "Data Set 1",
        DatasetKind::Ds2 => "Data Set 2",
        DatasetKind::Ds3 => "Data Set 3",
    }
}

type StatRow = (&'static str, fn(&Summary) -> f64);

fn stat_rows(kind: DatasetKind) -> &'static [StatRow] {
    match kind {
        DatasetKind::Ds1 => &[("Mean", |s| s.mean)],
        _ => &[
            ("Median", |s| s.median),
            ("Mean", |s| s.mean),
            ("Maximum", |s| s.maximum),
        ],
    }
}

/// Tab-separated table. Models without a report, or whose report has no
/// evaluated tables, show `-`.
pub fn accuracy_table(blocks: &[(DatasetKind, Vec<EvalReport>)]) -> String {
    let mut s = String::from("Data Set\tParameter");
    for m in ModelKind::ALL {
        s.push('\t');
        s.push_str(m.title());
    }
    s.push('\n');
    for (kind, reports) in blocks {
        for (i, (name, stat)) in stat_rows(*kind).iter().enumerate() {
            let lead = if i == 0 { dataset_title(*kind) } else { "" };
            let _ = write!(s, "{lead}\t{name}");
            for m in ModelKind::ALL {
                let cell = reports
                    .iter()
                    .find(|r| r.model == m)
                    .and_then(|r| r.summary.as_ref())
                    .map(|sum| format!("{:.3}", stat(sum)))
                    .unwrap_or_else(|| "-".to_string());
                let _ = write!(s, "\t{cell}");
            }
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::ModelConfig;
    use std::collections::BTreeMap;

    fn report(model: ModelKind, accs: &[f64]) -> EvalReport {
        let per: BTreeMap<u16, f64> = accs
            .iter()
            .enumerate()
            .map(|(i, &a)| (i as u16, a))
            .collect();
        EvalReport {
            model,
            config: ModelConfig::new(model),
            folds: 5,
            summary: Summary::of(accs),
            per_table_accuracy: per,
            confusion: [[0; 3]; 3],
            diagnostics: Vec::new(),
        }
    }

    #[test]
    fn layout() {
        let t = accuracy_table(&[
            (DatasetKind::Ds1, vec![report(ModelKind::Knn, &[0.396])]),
            (
                DatasetKind::Ds2,
                ModelKind::ALL
                    .iter()
                    .map(|&m| report(m, &[0.2, 0.4, 0.6]))
                    .collect(),
            ),
        ]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(
            lines[0],
            "Data Set\tParameter\tKNN\tRandom Forest\tGradient Boosted Trees"
        );
        assert_eq!(lines[1], "Data Set 1\tMean\t0.396\t-\t-");
        assert_eq!(lines[2], "Data Set 2\tMedian\t0.400\t0.400\t0.400");
        assert_eq!(lines[3], "\tMean\t0.400\t0.400\t0.400");
        assert_eq!(lines[4], "\tMaximum\t0.600\t0.600\t0.600");
    }
}
