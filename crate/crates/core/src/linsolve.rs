//! Exact sparse Gaussian elimination over ℚ.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type SparseRow = BTreeMap<usize, Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveFailure {
    /// Some equation reduces to `0 = c` with `c ≠ 0`.
    Inconsistent,
    /// Fewer independent equations than unknowns.
    Underdetermined { rank: usize, unknowns: usize },
}

/// Row-echelon accumulator: each stored row is normalized so that its
/// smallest column (the pivot) has coefficient 1.
#[derive(Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, (SparseRow, Rational)>,
    inconsistent: bool,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn push(&mut self, mut row: SparseRow, mut rhs: Rational) {
        row.retain(|_, v| !v.is_zero());
        let mut cursor = 0usize;
        loop {
            let next = row.range(cursor..).map(|(&c, _)| c).find(|c| self.pivots.contains_key(c));
            let Some(col) = next else { break };
            let factor = row.remove(&col).expect("present");
            let (prow, prhs) = &self.pivots[&col];
            for (&c, v) in prow.range(col + 1..) {
                let e = row.entry(c).or_insert_with(Rational::zero);
                *e -= &factor * v;
                if e.is_zero() {
                    row.remove(&c);
                }
            }
            rhs -= &factor * prhs;
            cursor = col + 1;
        }
        match row.keys().next().copied() {
            None => {
                if !rhs.is_zero() {
                    self.inconsistent = true;
                }
            }
            Some(p) => {
                let inv = Rational::one() / &row[&p];
                for v in row.values_mut() {
                    *v *= &inv;
                }
                rhs *= &inv;
                self.pivots.insert(p, (row, rhs));
            }
        }
    }

    pub fn solve(&self, unknowns: usize) -> Result<Vec<Rational>, SolveFailure> {
        if self.inconsistent {
            return Err(SolveFailure::Inconsistent);
        }
        if self.pivots.len() < unknowns {
            return Err(SolveFailure::Underdetermined { rank: self.pivots.len(), unknowns });
        }
        let mut x = vec![Rational::zero(); unknowns];
        for (&p, (row, rhs)) in self.pivots.iter().rev() {
            let mut v = rhs.clone();
            for (&c, a) in row.range(p + 1..) {
                v -= a * &x[c];
            }
            x[p] = v;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(c, v)| (c, int(v))).collect()
    }

    #[test]
    fn solves_small_system() {
        // x + 2y = 5, 3x - y = 1, x + y = 3 (redundant)
        let mut e = Echelon::new();
        e.push(row(&[(0, 1), (1, 2)]), int(5));
        e.push(row(&[(0, 3), (1, -1)]), int(1));
        e.push(row(&[(0, 1), (1, 1)]), int(3));
        assert_eq!(e.solve(2).unwrap(), vec![rat(1, 1), rat(2, 1)]);
    }

    #[test]
    fn detects_inconsistency_and_rank_loss() {
        let mut e = Echelon::new();
        e.push(row(&[(0, 1), (1, 1)]), int(1));
        e.push(row(&[(0, 2), (1, 2)]), int(3));
        assert_eq!(e.solve(2), Err(SolveFailure::Inconsistent));

        let mut e = Echelon::new();
        e.push(row(&[(0, 1), (1, 1)]), int(1));
        assert_eq!(e.solve(2), Err(SolveFailure::Underdetermined { rank: 1, unknowns: 2 }));
    }
}
