use alloc::vec;
use alloc::vec::Vec;

use super::AlignError;

/// Largest `min(rows, cols)` the exhaustive search accepts.
pub const EXHAUSTIVE_LIMIT: usize = 8;

/// Result of [`assign_optimal`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalAssignment {
    /// `pairs[row]` is the column assigned to `row`, after the score floor.
    pub pairs: Vec<Option<usize>>,
    /// Rows whose optimal column scored below the floor and was dropped.
    pub dropped: Vec<usize>,
    /// Total score of the optimal matching, before the floor was applied.
    pub objective: f64,
}

/// Maximum-weight injective matching between rows and columns of `scores`.
///
/// Every item of the smaller side is matched. The search is exhaustive and
/// visits assignment vectors in lexicographic order (columns ascending,
/// "unmatched" last), keeping the first strictly better total, so ties go to
/// the lexicographically smallest vector. Pairs scoring below `min_score` are
/// removed afterwards.
pub fn assign_optimal(scores: &[Vec<f64>], min_score: f64) -> Result<OptimalAssignment, AlignError> {
    let rows = scores.len();
    let cols = scores.first().map_or(0, Vec::len);
    for (row, r) in scores.iter().enumerate() {
        if r.len() != cols {
            return Err(AlignError::RaggedScores { row, len: r.len(), expected: cols });
        }
        if let Some(col) = r.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(AlignError::InvalidScore { row, col });
        }
    }
    let need = rows.min(cols);
    if need > EXHAUSTIVE_LIMIT {
        return Err(AlignError::TooLarge { size: need });
    }

    // bound[r] = sum of row maxima over rows r.., an upper bound on any completion
    let mut bound = vec![0.0; rows + 1];
    for r in (0..rows).rev() {
        let max = scores[r].iter().copied().fold(0.0, f64::max);
        bound[r] = bound[r + 1] + max;
    }

    let mut search = Search { scores, bound, need, used: vec![false; cols], current: vec![None; rows], best: None };
    search.visit(0, 0, 0.0);
    let (objective, best) = search.best.unwrap_or((0.0, vec![None; rows]));

    let mut pairs = best;
    let mut dropped = Vec::new();
    for (row, slot) in pairs.iter_mut().enumerate() {
        if let Some(col) = *slot {
            if scores[row][col] < min_score {
                *slot = None;
                dropped.push(row);
            }
        }
    }
    Ok(OptimalAssignment { pairs, dropped, objective })
}

struct Search<'a> {
    scores: &'a [Vec<f64>],
    bound: Vec<f64>,
    need: usize,
    used: Vec<bool>,
    current: Vec<Option<usize>>,
    best: Option<(f64, Vec<Option<usize>>)>,
}

impl Search<'_> {
    fn visit(&mut self, row: usize, assigned: usize, total: f64) {
        let rows = self.scores.len();
        if row == rows {
            if assigned == self.need && self.best.as_ref().is_none_or(|(b, _)| total > *b) {
                self.best = Some((total, self.current.clone()));
            }
            return;
        }
        if let Some((best, _)) = &self.best {
            // slack keeps rounding from pruning a branch that ties the incumbent
            let slack = 1e-9 * best.max(1.0);
            if total + self.bound[row] < *best - slack {
                return;
            }
        }
        if assigned < self.need {
            for col in 0..self.used.len() {
                if self.used[col] {
                    continue;
                }
                self.used[col] = true;
                self.current[row] = Some(col);
                self.visit(row + 1, assigned + 1, total + self.scores[row][col]);
                self.used[col] = false;
            }
            self.current[row] = None;
        }
        if rows - row > self.need - assigned {
            self.visit(row + 1, assigned, total);
        }
    }
}
