//! Cohen's kappa. With more than two raters the mean over all rater pairs
//! is reported.

use std::collections::HashMap;
use std::fs;
use std::hash::Hash;
use std::path::Path;

use super::EvalError;
use crate::lexicon::Polarity;

/// Kappa between two parallel label sequences.
///
/// Full agreement with a degenerate chance term (both raters used one and
/// the same label throughout) is defined as 1.
pub fn cohen_kappa_pair<L: Eq + Hash>(a: &[L], b: &[L]) -> Result<f64, EvalError> {
    if a.is_empty() {
        return Err(EvalError::EmptyItems);
    }
    if a.len() != b.len() {
        return Err(EvalError::RaggedRatings {
            item: a.len().min(b.len()),
            expected: a.len(),
            got: b.len(),
        });
    }
    let n = a.len() as f64;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64;
    let p_o = agree / n;

    let mut marg_a: HashMap<&L, usize> = HashMap::new();
    let mut marg_b: HashMap<&L, usize> = HashMap::new();
    for (x, y) in a.iter().zip(b) {
        *marg_a.entry(x).or_default() += 1;
        *marg_b.entry(y).or_default() += 1;
    }
    let p_e: f64 = marg_a
        .iter()
        .map(|(label, &ca)| {
            let cb = marg_b.get(label).copied().unwrap_or(0);
            (ca as f64 / n) * (cb as f64 / n)
        })
        .sum();

    if (1.0 - p_e).abs() < f64::EPSILON {
        // p_e = 1 forces p_o = 1
        return Ok(1.0);
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// `ratings[item][rater]`. Every item must be rated by every rater.
pub fn cohen_kappa<L: Eq + Hash + Clone>(ratings: &[Vec<L>]) -> Result<f64, EvalError> {
    let first = ratings.first().ok_or(EvalError::EmptyItems)?;
    let raters = first.len();
    if raters < 2 {
        return Err(EvalError::InsufficientRaters(raters));
    }
    for (i, item) in ratings.iter().enumerate() {
        if item.len() != raters {
            return Err(EvalError::RaggedRatings {
                item: i,
                expected: raters,
                got: item.len(),
            });
        }
    }
    let column = |r: usize| {
        ratings
            .iter()
            .map(|item| item[r].clone())
            .collect::<Vec<_>>()
    };
    let columns: Vec<Vec<L>> = (0..raters).map(column).collect();

    let mut sum = 0.0;
    let mut pairs = 0usize;
    for i in 0..raters {
        for j in i + 1..raters {
            sum += cohen_kappa_pair(&columns[i], &columns[j])?;
            pairs += 1;
        }
    }
    Ok(sum / pairs as f64)
}

/// Reads a ratings file: one item per line, tab-separated labels. A first
/// column that is not a polarity is taken as the item id and ignored.
pub fn read_ratings(path: impl AsRef<Path>) -> Result<Vec<Vec<Polarity>>, EvalError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: name.clone(),
        source,
    })?;
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if cols[0].parse::<Polarity>().is_err() {
            cols.remove(0);
        }
        let labels = cols
            .iter()
            .map(|c| c.parse::<Polarity>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|reason| EvalError::Parse {
                path: name.clone(),
                line: i + 1,
                reason,
            })?;
        items.push(labels);
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use Polarity::*;

    // oracle: explicit 2x2 contingency table
    fn table_kappa(pairs: &[(Polarity, Polarity)]) -> f64 {
        let mut t = [[0f64; 2]; 2];
        let idx = |p: Polarity| if p == Po { 0 } else { 1 };
        for &(a, b) in pairs {
            t[idx(a)][idx(b)] += 1.0;
        }
        let n: f64 = t.iter().flatten().sum();
        let p_o = (t[0][0] + t[1][1]) / n;
        let row = [t[0][0] + t[0][1], t[1][0] + t[1][1]];
        let col = [t[0][0] + t[1][0], t[0][1] + t[1][1]];
        let p_e = (row[0] * col[0] + row[1] * col[1]) / (n * n);
        (p_o - p_e) / (1.0 - p_e)
    }

    fn ten_items() -> Vec<Vec<Polarity>> {
        let mut items = Vec::new();
        items.extend(std::iter::repeat_n(vec![Po, Po], 4));
        items.extend(std::iter::repeat_n(vec![Ng, Ng], 3));
        items.extend(std::iter::repeat_n(vec![Po, Ng], 2));
        items.push(vec![Ng, Po]);
        items
    }

    #[test]
    fn hand_computed_example() {
        let items = ten_items();
        let pairs: Vec<_> = items.iter().map(|i| (i[0], i[1])).collect();
        let oracle = table_kappa(&pairs);
        assert!((oracle - 0.4).abs() < 1e-12);
        assert!((cohen_kappa(&items).unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn perfect_agreement() {
        let items = vec![vec![Po, Po, Po], vec![Ng, Ng, Ng], vec![Po, Po, Po]];
        assert_eq!(cohen_kappa(&items).unwrap(), 1.0);
        // degenerate: one label used by everyone
        assert_eq!(cohen_kappa(&[vec![Po, Po], vec![Po, Po]]).unwrap(), 1.0);
    }

    #[test]
    fn error_cases() {
        assert!(matches!(
            cohen_kappa::<Polarity>(&[]),
            Err(EvalError::EmptyItems)
        ));
        assert!(matches!(
            cohen_kappa(&[vec![Po]]),
            Err(EvalError::InsufficientRaters(1))
        ));
        assert!(matches!(
            cohen_kappa(&[vec![Po, Po], vec![Po]]),
            Err(EvalError::RaggedRatings { item: 1, .. })
        ));
    }

    #[test]
    fn three_raters_average_pairs() {
        let items: Vec<Vec<Polarity>> = ten_items()
            .into_iter()
            .map(|mut i| {
                let first = i[0];
                i.push(first);
                i
            })
            .collect();
        // pairs: (0,1)=0.4, (0,2)=1.0, (1,2)=0.4
        assert!((cohen_kappa(&items).unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn chance_level_is_near_zero() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let items: Vec<Vec<Polarity>> = (0..10_000)
            .map(|_| {
                (0..2)
                    .map(|_| if rng.gen_bool(0.5) { Po } else { Ng })
                    .collect()
            })
            .collect();
        assert!(cohen_kappa(&items).unwrap().abs() < 0.05);
    }

    proptest! {
        #[test]
        fn matches_contingency_oracle(pairs in prop::collection::vec((any::<bool>(), any::<bool>()), 1..60)) {
            let pol = |b: bool| if b { Po } else { Ng };
            let pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (pol(a), pol(b))).collect();
            let items: Vec<Vec<Polarity>> = pairs.iter().map(|&(a, b)| vec![a, b]).collect();
            let k = cohen_kappa(&items).unwrap();
            let oracle = table_kappa(&pairs);
            if oracle.is_finite() {
                prop_assert!((k - oracle).abs() < 1e-9);
            } else {
                prop_assert_eq!(k, 1.0);
            }
            let flipped: Vec<Vec<Polarity>> = items.iter().map(|i| i.iter().map(|p| p.flip()).collect()).collect();
            prop_assert!((cohen_kappa(&flipped).unwrap() - k).abs() < 1e-12);
            let p_o = pairs.iter().filter(|(a, b)| a == b).count() == pairs.len();
            prop_assert_eq!(p_o, (k - 1.0).abs() < 1e-12);
        }
    }
}
