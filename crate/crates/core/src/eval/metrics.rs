use super::EvalError;
use crate::lexicon::Polarity;

/// Binary confusion counts with PO as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub true_pos: u64,
    pub false_pos: u64,
    pub false_neg: u64,
    pub true_neg: u64,
}

impl ConfusionCounts {
    pub fn new(true_pos: u64, false_pos: u64, false_neg: u64, true_neg: u64) -> Self {
        ConfusionCounts {
            true_pos,
            false_pos,
            false_neg,
            true_neg,
        }
    }

    /// Tallies `(gold, predicted)` pairs. Anything other than PO counts as negative.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Polarity, Polarity)>) -> Self {
        let mut c = ConfusionCounts::default();
        for (gold, pred) in pairs {
            c.add(gold, pred);
        }
        c
    }

    pub fn add(&mut self, gold: Polarity, pred: Polarity) {
        match (gold == Polarity::Po, pred == Polarity::Po) {
            (true, true) => self.true_pos += 1,
            (false, true) => self.false_pos += 1,
            (true, false) => self.false_neg += 1,
            (false, false) => self.true_neg += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }
}

fn ratio(num: u64, den: u64, name: &'static str) -> Result<f64, EvalError> {
    if den == 0 {
        Err(EvalError::UndefinedMetric(name))
    } else {
        Ok(num as f64 / den as f64)
    }
}

pub fn accuracy(c: &ConfusionCounts) -> Result<f64, EvalError> {
    ratio(c.true_pos + c.true_neg, c.total(), "accuracy")
}

pub fn precision(c: &ConfusionCounts) -> Result<f64, EvalError> {
    ratio(c.true_pos, c.true_pos + c.false_pos, "precision")
}

pub fn recall(c: &ConfusionCounts) -> Result<f64, EvalError> {
    ratio(c.true_pos, c.true_pos + c.false_neg, "recall")
}

/// Harmonic mean of precision and recall.
pub fn f_measure(precision: f64, recall: f64) -> Result<f64, EvalError> {
    let sum = precision + recall;
    if sum == 0.0 {
        return Err(EvalError::UndefinedMetric("f-measure"));
    }
    Ok(2.0 * precision * recall / sum)
}

/// Metrics with undefined values reported as `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationMetrics {
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f_measure: Option<f64>,
}

pub fn confusion_metrics(c: &ConfusionCounts) -> ClassificationMetrics {
    let p = precision(c).ok();
    let r = recall(c).ok();
    ClassificationMetrics {
        accuracy: accuracy(c).ok(),
        precision: p,
        recall: r,
        f_measure: p.zip(r).and_then(|(p, r)| f_measure(p, r).ok()),
    }
}
