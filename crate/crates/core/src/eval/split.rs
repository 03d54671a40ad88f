use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{EvalError, Genre, Topic};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_frac: f64,
    pub dev_frac: f64,
    pub test_frac: f64,
    pub seed: u64,
    /// Keep each split's genre proportions close to the corpus proportions.
    pub stratify: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_frac: 0.8,
            dev_frac: 0.1,
            test_frac: 0.1,
            seed: 42,
            stratify: true,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<(), EvalError> {
        let fracs = [self.train_frac, self.dev_frac, self.test_frac];
        if fracs.iter().any(|f| !f.is_finite() || *f <= 0.0) {
            return Err(EvalError::InvalidSplitSpec(format!(
                "fractions must be positive, got {fracs:?}"
            )));
        }
        let sum: f64 = fracs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(EvalError::InvalidSplitSpec(format!(
                "fractions must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusSplit {
    pub train: Vec<Topic>,
    pub dev: Vec<Topic>,
    pub test: Vec<Topic>,
}

/// Floors each share of `n`, then hands out the remainder one at a time in
/// train, dev, test order.
pub fn split_sizes(n: usize, spec: &SplitSpec) -> [usize; 3] {
    let fracs = [spec.train_frac, spec.dev_frac, spec.test_frac];
    let mut sizes = fracs.map(|f| (n as f64 * f + 1e-9).floor() as usize);
    let mut rest = n.saturating_sub(sizes.iter().sum());
    let mut i = 0;
    while rest > 0 {
        sizes[i % 3] += 1;
        rest -= 1;
        i += 1;
    }
    sizes
}

/// Seeded shuffle followed by contiguous slicing into train, dev and test.
///
/// With stratification the shuffled topics are interleaved by genre so that
/// topic `r` of a genre with `n` members sits at relative rank `(r + ½) / n`;
/// any contiguous slice then mirrors the corpus genre mix.
pub fn split_corpus(corpus: &[Topic], spec: &SplitSpec) -> Result<CorpusSplit, EvalError> {
    spec.validate()?;
    let mut order: Vec<Topic> = corpus.to_vec();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));

    if spec.stratify {
        let mut groups: BTreeMap<Option<Genre>, Vec<Topic>> = BTreeMap::new();
        for t in order {
            groups.entry(t.genre).or_default().push(t);
        }
        let mut keyed: Vec<(f64, usize, Topic)> = Vec::with_capacity(corpus.len());
        for (g, (_, members)) in groups.into_iter().enumerate() {
            let n = members.len() as f64;
            for (r, t) in members.into_iter().enumerate() {
                keyed.push(((r as f64 + 0.5) / n, g, t));
            }
        }
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        order = keyed.into_iter().map(|(_, _, t)| t).collect();
    }

    let [n_train, n_dev, _] = split_sizes(order.len(), spec);
    let test = order.split_off(n_train + n_dev);
    let dev = order.split_off(n_train);
    Ok(CorpusSplit {
        train: order,
        dev,
        test,
    })
}
