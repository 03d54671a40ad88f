use std::fmt::Write as _;

use super::metrics::{confusion_metrics, ClassificationMetrics, ConfusionCounts};
use super::Genre;
use crate::lexicon::Polarity;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub name: String,
    pub counts: ConfusionCounts,
    pub metrics: ClassificationMetrics,
}

/// Accuracy, precision, recall and F-measure per genre plus a total row.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub rows: Vec<ReportRow>,
}

impl EvaluationReport {
    /// Builds the report from `(genre, gold, predicted)` triples. Genres with
    /// no test topics are omitted.
    pub fn from_predictions(
        results: impl IntoIterator<Item = (Option<Genre>, Polarity, Polarity)>,
    ) -> Self {
        let mut per_genre = [ConfusionCounts::default(); 4];
        let mut total = ConfusionCounts::default();
        for (genre, gold, pred) in results {
            if let Some(g) = genre {
                let i = Genre::ALL.iter().position(|x| *x == g).unwrap();
                per_genre[i].add(gold, pred);
            }
            total.add(gold, pred);
        }
        let mut rows: Vec<ReportRow> = Genre::ALL
            .iter()
            .zip(per_genre)
            .filter(|(_, c)| c.total() > 0)
            .map(|(g, c)| ReportRow {
                name: g.report_name().to_owned(),
                counts: c,
                metrics: confusion_metrics(&c),
            })
            .collect();
        rows.push(ReportRow {
            name: "Total data".to_owned(),
            counts: total,
            metrics: confusion_metrics(&total),
        });
        EvaluationReport { rows }
    }

    pub fn total(&self) -> &ReportRow {
        self.rows.last().expect("report always has a total row")
    }

    /// Human-readable table with percentages.
    pub fn to_text(&self) -> String {
        let pct = |v: Option<f64>| v.map_or("n/a".to_owned(), |v| format!("{:.5}%", v * 100.0));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<16} {:>5} {:>11} {:>11} {:>11} {:>11}",
            "Data", "N", "Accuracy", "Precision", "Recall", "F-Measure"
        );
        for row in &self.rows {
            let m = &row.metrics;
            let _ = writeln!(
                out,
                "{:<16} {:>5} {:>11} {:>11} {:>11} {:>11}",
                row.name,
                row.counts.total(),
                pct(m.accuracy),
                pct(m.precision),
                pct(m.recall),
                pct(m.f_measure)
            );
        }
        out
    }

    /// Tab-separated table with raw fractions; undefined metrics are `NA`.
    pub fn to_tsv(&self) -> String {
        let num = |v: Option<f64>| v.map_or("NA".to_owned(), |v| format!("{v:.6}"));
        let mut out =
            String::from("data\tn\ttp\tfp\tfn\ttn\taccuracy\tprecision\trecall\tf_measure\n");
        for row in &self.rows {
            let c = &row.counts;
            let m = &row.metrics;
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                row.name,
                c.total(),
                c.true_pos,
                c.false_pos,
                c.false_neg,
                c.true_neg,
                num(m.accuracy),
                num(m.precision),
                num(m.recall),
                num(m.f_measure)
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Polarity::*;

    #[test]
    fn rows_per_genre_and_total() {
        let report = EvaluationReport::from_predictions([
            (Some(Genre::Tweet), Po, Po),
            (Some(Genre::Tweet), Ng, Po),
            (Some(Genre::Hotel), Ng, Ng),
            (None, Po, Po),
        ]);
        let names: Vec<_> = report.rows.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, vec!["Tweets", "Hotel res.", "Total data"]);
        assert_eq!(report.total().counts.total(), 4);
        assert_eq!(report.total().metrics.accuracy, Some(0.75));
        let hotel = &report.rows[1];
        assert_eq!(hotel.metrics.precision, None);
        assert!(report.to_text().contains("n/a"));
        assert!(report.to_tsv().lines().nth(2).unwrap().contains("\tNA\t"));
    }
}
