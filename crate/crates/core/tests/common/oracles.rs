//! Reference implementations used only by tests. They are written for
//! obviousness, not speed, and share no code with the crate.
#![allow(dead_code)]

use namegraft_core::geometry::BoundingBox;

/// Every k-permutation of `0..n`, in lexicographic order.
pub fn k_permutations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for shorter in k_permutations(n, k - 1) {
        for x in 0..n {
            if !shorter.contains(&x) {
                let mut p = shorter.clone();
                p.push(x);
                out.push(p);
            }
        }
    }
    out
}

fn vector_key(v: &[Option<usize>]) -> Vec<usize> {
    v.iter().map(|c| c.unwrap_or(usize::MAX)).collect()
}

/// Brute-force maximum-weight injective matching.
///
/// Enumerates matchings from the smaller side, then picks the largest total
/// (summed in row order) and, among exact ties, the lexicographically smallest
/// row→column vector with "unmatched" ordered last. Returns the vector and its
/// total before any floor.
pub fn brute_force_assign(s: &[Vec<f64>]) -> (Vec<Option<usize>>, f64) {
    let rows = s.len();
    let cols = s.first().map_or(0, |r| r.len());
    let mut candidates: Vec<Vec<Option<usize>>> = Vec::new();
    if rows <= cols {
        for p in k_permutations(cols, rows) {
            candidates.push(p.into_iter().map(Some).collect());
        }
    } else {
        // choose a distinct row for each column
        for p in k_permutations(rows, cols) {
            let mut v = vec![None; rows];
            for (col, row) in p.into_iter().enumerate() {
                v[row] = Some(col);
            }
            candidates.push(v);
        }
    }
    let total = |v: &Vec<Option<usize>>| {
        v.iter().enumerate().fold(0.0, |acc, (r, c)| match c {
            Some(c) => acc + s[r][*c],
            None => acc,
        })
    };
    let best = candidates.iter().map(total).fold(f64::NEG_INFINITY, f64::max);
    let winner = candidates.into_iter().filter(|v| total(v) == best).min_by_key(|v| vector_key(v)).unwrap();
    let t = total(&winner);
    (winner, t)
}

pub fn naive_iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let mut inter = 0u64;
    let x0 = a.x.max(b.x);
    let x1 = (a.x + a.w).min(b.x + b.w);
    let y0 = a.y.max(b.y);
    let y1 = (a.y + a.h).min(b.y + b.h);
    if x1 > x0 && y1 > y0 {
        inter = (x1 - x0) as u64 * (y1 - y0) as u64;
    }
    let union = (a.w as u64 * a.h as u64) + (b.w as u64 * b.h as u64) - inter;
    inter as f64 / union as f64
}

/// Literal greedy NMS: pick the best remaining box (first on ties), drop every
/// remaining box overlapping it too much, repeat.
pub fn naive_nms(boxes: &[(BoundingBox, f64)], threshold: f64) -> Vec<(BoundingBox, f64)> {
    let mut remaining: Vec<usize> = (0..boxes.len()).collect();
    let mut kept = Vec::new();
    while !remaining.is_empty() {
        let mut best = 0;
        for i in 1..remaining.len() {
            if boxes[remaining[i]].1 > boxes[remaining[best]].1 {
                best = i;
            }
        }
        let top = remaining.remove(best);
        kept.push(boxes[top]);
        remaining.retain(|&j| naive_iou(&boxes[top].0, &boxes[j].0) <= threshold);
    }
    kept
}

/// Chunk grammar as a regex over one letter per tag.
pub fn tag_letters(tags: &[namegraft_core::PosTag]) -> String {
    use namegraft_core::PosTag::*;
    tags.iter()
        .map(|t| match t {
            DT => 'D',
            CD => 'C',
            JJ => 'J',
            NN | NNS | NNP => 'N',
            PUNCT => 'P',
            OTHER => 'O',
        })
        .collect()
}

pub const GRAMMAR_REGEX: &str = "^D?C?J*N+$";
