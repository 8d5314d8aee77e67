//! External clustering metrics: accuracy under optimal label matching,
//! normalized mutual information (geometric-mean normalization) and purity.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Counts of samples per (predicted cluster, true class). Ids are relabeled to
/// contiguous indices in ascending order of the original ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    total: u64,
}

fn relabel(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut ids = BTreeMap::new();
    for &l in labels {
        ids.entry(l).or_insert(0);
    }
    for (idx, v) in ids.values_mut().enumerate() {
        *v = idx;
    }
    (labels.iter().map(|l| ids[l]).collect(), ids.len())
}

impl ContingencyTable {
    pub fn from_labels(pred: &[usize], truth: &[usize]) -> Result<Self> {
        if pred.is_empty() {
            return Err(Error::EmptyTable);
        }
        if pred.len() != truth.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} predicted labels vs {} true labels",
                pred.len(),
                truth.len()
            )));
        }
        let (p, kp) = relabel(pred);
        let (t, kt) = relabel(truth);
        let mut counts = vec![vec![0u64; kt]; kp];
        for (a, b) in p.into_iter().zip(t) {
            counts[a][b] += 1;
        }
        Ok(Self {
            counts,
            total: pred.len() as u64,
        })
    }

    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let cols = counts.first().map_or(0, Vec::len);
        if counts.is_empty() || cols == 0 {
            return Err(Error::EmptyTable);
        }
        if counts.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged contingency table".into()));
        }
        let total = counts.iter().flatten().sum();
        Ok(Self { counts, total })
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    fn shape(&self) -> (usize, usize) {
        (self.counts.len(), self.counts[0].len())
    }
}

/// Optimal one-to-one matching of predicted clusters to true classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// `mapping[p]` is the true class matched to predicted cluster `p`, or
    /// `None` when `p` only matched a zero padding column.
    pub mapping: Vec<Option<usize>>,
    pub score: u64,
}

const FORBIDDEN: i64 = 1 << 40;

/// Minimum-cost perfect assignment on a square matrix (shortest augmenting
/// paths with potentials). Returns `row -> column`.
fn min_cost_assignment(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    // 1-based arrays; column 0 is the virtual source
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r0 = owner[col0];
            let mut delta = i64::MAX;
            let mut col1 = 0;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost[r0 - 1][col - 1] - u[r0] - v[col];
                if reduced < minv[col] {
                    minv[col] = reduced;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for col in 1..=n {
        if owner[col] > 0 {
            assignment[owner[col] - 1] = col - 1;
        }
    }
    assignment
}

/// Maximizes the total matched count. Rectangular tables are padded with
/// zeros; among optimal matchings the lexicographically smallest
/// `row -> column` sequence is returned.
pub fn hungarian_match(table: &ContingencyTable) -> Result<Matching> {
    let (rows, cols) = table.shape();
    let k = rows.max(cols);
    let at = |i: usize, j: usize| -> i64 {
        if i < rows && j < cols {
            table.counts[i][j] as i64
        } else {
            0
        }
    };
    let base: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| -at(i, j)).collect()).collect();
    let score_of = |assign: &[usize]| -> i64 { (0..k).map(|i| at(i, assign[i])).sum() };

    let mut best = min_cost_assignment(&base);
    let optimum = score_of(&best);

    // Fix rows one at a time to the smallest column that keeps the optimum.
    let mut cost = base.clone();
    for row in 0..k {
        for col in 0..best[row] {
            if cost[row][col] >= FORBIDDEN {
                continue;
            }
            let mut trial = cost.clone();
            force(&mut trial, row, col);
            let candidate = min_cost_assignment(&trial);
            if trial_is_feasible(&trial, &candidate) && score_of(&candidate) == optimum {
                best = candidate;
                break;
            }
        }
        let fixed = best[row];
        force(&mut cost, row, fixed);
    }

    let mapping = (0..rows)
        .map(|i| (best[i] < cols).then_some(best[i]))
        .collect();
    Ok(Matching {
        mapping,
        score: optimum as u64,
    })
}

fn force(cost: &mut [Vec<i64>], row: usize, col: usize) {
    for (i, r) in cost.iter_mut().enumerate() {
        for (j, x) in r.iter_mut().enumerate() {
            if (i == row) != (j == col) {
                *x = FORBIDDEN;
            }
        }
    }
}

fn trial_is_feasible(cost: &[Vec<i64>], assign: &[usize]) -> bool {
    assign.iter().enumerate().all(|(i, &j)| cost[i][j] < FORBIDDEN)
}

/// Fraction of samples whose predicted cluster maps to their true class
/// under the optimal matching.
pub fn acc(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let table = ContingencyTable::from_labels(pred, truth)?;
    let matching = hungarian_match(&table)?;
    Ok(matching.score as f64 / table.total() as f64)
}

fn entropy(counts: impl Iterator<Item = u64>, total: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum()
}

/// `I(pred; truth) / sqrt(H(pred) H(truth))` with natural logarithms. Two
/// single-cluster partitions score 1; one trivial partition scores 0.
pub fn nmi(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let table = ContingencyTable::from_labels(pred, truth)?;
    let (rows, cols) = table.shape();
    let n = table.total() as f64;
    let row_sums: Vec<u64> = table.counts.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<u64> = (0..cols).map(|j| table.counts.iter().map(|r| r[j]).sum()).collect();
    let h_pred = entropy(row_sums.iter().copied(), n);
    let h_true = entropy(col_sums.iter().copied(), n);
    if rows == 1 && cols == 1 {
        return Ok(1.0);
    }
    if h_pred == 0.0 || h_true == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for i in 0..rows {
        for j in 0..cols {
            let nij = table.counts[i][j];
            if nij == 0 {
                continue;
            }
            let nij = nij as f64;
            mi += nij / n * (n * nij / (row_sums[i] as f64 * col_sums[j] as f64)).ln();
        }
    }
    Ok((mi / (h_pred * h_true).sqrt()).clamp(0.0, 1.0))
}

/// Share of samples that belong to the majority class of their cluster.
pub fn purity(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let table = ContingencyTable::from_labels(pred, truth)?;
    let majority: u64 = table
        .counts
        .iter()
        .map(|r| r.iter().copied().max().unwrap_or(0))
        .sum();
    Ok(majority as f64 / table.total() as f64)
}

/// The three scores together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub acc: f64,
    pub nmi: f64,
    pub purity: f64,
}

pub fn evaluate(pred: &[usize], truth: &[usize]) -> Result<Scores> {
    Ok(Scores {
        acc: acc(pred, truth)?,
        nmi: nmi(pred, truth)?,
        purity: purity(pred, truth)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use osmvc_oracle as oracle;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_and_antidiagonal() {
        let diag = ContingencyTable::from_counts(vec![vec![5, 0, 0], vec![0, 3, 0], vec![0, 0, 2]])
            .unwrap();
        let m = hungarian_match(&diag).unwrap();
        assert_eq!(m.mapping, vec![Some(0), Some(1), Some(2)]);
        assert_eq!(m.score, 10);

        let anti = ContingencyTable::from_counts(vec![vec![0, 0, 4], vec![0, 6, 0], vec![1, 0, 0]])
            .unwrap();
        let m = hungarian_match(&anti).unwrap();
        assert_eq!(m.mapping, vec![Some(2), Some(1), Some(0)]);
        assert_eq!(m.score, 11);
    }

    #[test]
    fn ties_resolve_lexicographically() {
        let flat = ContingencyTable::from_counts(vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(hungarian_match(&flat).unwrap().mapping, vec![Some(0), Some(1)]);
    }

    #[test]
    fn rectangular_tables() {
        let wide = ContingencyTable::from_counts(vec![vec![0, 3, 1]]).unwrap();
        let m = hungarian_match(&wide).unwrap();
        assert_eq!((m.mapping, m.score), (vec![Some(1)], 3));
        let tall = ContingencyTable::from_counts(vec![vec![2], vec![7], vec![1]]).unwrap();
        let m = hungarian_match(&tall).unwrap();
        assert_eq!((m.mapping, m.score), (vec![None, Some(0), None], 7));
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(ContingencyTable::from_counts(vec![]), Err(Error::EmptyTable));
        assert_eq!(acc(&[], &[]), Err(Error::EmptyTable));
        assert!(matches!(acc(&[1], &[1, 2]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn matches_permutation_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let counts: Vec<Vec<u64>> = (0..4)
                .map(|_| (0..4).map(|_| rng.gen_range(0..20)).collect())
                .collect();
            let best = oracle::brute_assignment(&counts);
            let table = ContingencyTable::from_counts(counts).unwrap();
            assert_eq!(hungarian_match(&table).unwrap().score, best);
        }
    }

    #[test]
    fn acc_examples() {
        let truth = [1, 1, 2, 2, 3, 3];
        assert_eq!(acc(&truth, &truth).unwrap(), 1.0);
        assert_eq!(acc(&[7, 7, 0, 0, 4, 4], &truth).unwrap(), 1.0);
        assert_eq!(acc(&[1, 2, 1, 2], &[1, 1, 2, 2]).unwrap(), 0.5);
    }

    #[test]
    fn nmi_examples() {
        let truth = [1, 1, 2, 2, 3];
        assert!((nmi(&truth, &truth).unwrap() - 1.0).abs() < 1e-12);
        // table (5, 0; 0, 5)
        let p: Vec<usize> = (0..10).map(|i| i / 5).collect();
        assert!((nmi(&p, &p).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(nmi(&[1, 1, 1], &[2, 2, 2]).unwrap(), 1.0);
        assert_eq!(nmi(&[1, 1, 1], &[1, 2, 2]).unwrap(), 0.0);
    }

    #[test]
    fn nmi_of_independent_labelings_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let truth: Vec<usize> = (0..10_000).map(|_| rng.gen_range(0..2)).collect();
        let pred: Vec<usize> = (0..10_000).map(|_| rng.gen_range(0..2)).collect();
        assert!(nmi(&pred, &truth).unwrap() < 0.02);
    }

    #[test]
    fn purity_examples() {
        let truth = [1, 1, 2, 2];
        assert_eq!(purity(&truth, &truth).unwrap(), 1.0);
        assert_eq!(purity(&[1, 1, 1, 1], &truth).unwrap(), 0.5);
    }

    #[test]
    fn purity_matches_naive_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let pred: Vec<usize> = (0..200).map(|_| rng.gen_range(0..5)).collect();
        let truth: Vec<usize> = (0..200).map(|_| rng.gen_range(0..3)).collect();
        let mut naive = 0;
        for c in 0..5 {
            let best = (0..3)
                .map(|t| {
                    pred.iter()
                        .zip(&truth)
                        .filter(|(p, q)| **p == c && **q == t)
                        .count()
                })
                .max()
                .unwrap();
            naive += best;
        }
        assert_eq!(purity(&pred, &truth).unwrap(), naive as f64 / 200.0);
    }

    fn labelings() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
        (1usize..60).prop_flat_map(|n| {
            (
                prop::collection::vec(0usize..5, n),
                prop::collection::vec(0usize..4, n),
            )
        })
    }

    proptest! {
        #[test]
        fn metric_invariants((pred, truth) in labelings(), shift in 1usize..50, seed in any::<u64>()) {
            let s = evaluate(&pred, &truth).unwrap();
            for x in [s.acc, s.nmi, s.purity] {
                prop_assert!((0.0..=1.0).contains(&x));
            }
            prop_assert!(s.purity >= s.acc - 1e-15);

            // relabel predicted ids through a bijection
            let relabeled: Vec<usize> = pred.iter().map(|p| (4 - p) * 7 + shift).collect();
            let r = evaluate(&relabeled, &truth).unwrap();
            prop_assert_eq!(r.acc, s.acc);
            prop_assert_eq!(r.purity, s.purity);
            prop_assert!((r.nmi - s.nmi).abs() < 1e-12);

            // shuffle both vectors identically
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut order: Vec<usize> = (0..pred.len()).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let p2: Vec<usize> = order.iter().map(|&i| pred[i]).collect();
            let t2: Vec<usize> = order.iter().map(|&i| truth[i]).collect();
            let q = evaluate(&p2, &t2).unwrap();
            prop_assert_eq!(q.acc, s.acc);
            prop_assert_eq!(q.purity, s.purity);
            prop_assert!((q.nmi - s.nmi).abs() < 1e-12);
        }
    }
}
