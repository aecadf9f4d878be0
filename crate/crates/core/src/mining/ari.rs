//! Adjusted Rand index.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{OtsError, Result};

fn choose2(x: u64) -> f64 {
    (x * x.saturating_sub(1)) as f64 / 2.0
}

fn dense<T: Eq + Hash>(labels: &[T]) -> (Vec<usize>, usize) {
    let mut ids: HashMap<&T, usize> = HashMap::new();
    let out = labels
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(l).or_insert(next)
        })
        .collect();
    (out, ids.len())
}

/// Chance-corrected agreement between two partitions of the same objects.
///
/// Returns 1 when both partitions are trivial in the same way (all objects
/// together or all apart), where the usual formula is 0/0.
pub fn adjusted_rand_index<A: Eq + Hash, B: Eq + Hash>(a: &[A], b: &[B]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(OtsError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(OtsError::InvalidParameter("partitions are empty".into()));
    }
    let (ra, ka) = dense(a);
    let (rb, kb) = dense(b);
    let mut table = vec![0u64; ka * kb];
    for (&x, &y) in ra.iter().zip(&rb) {
        table[x * kb + y] += 1;
    }
    let index: f64 = table.iter().map(|&c| choose2(c)).sum();
    let rows: f64 = (0..ka)
        .map(|i| choose2(table[i * kb..(i + 1) * kb].iter().sum()))
        .sum();
    let cols: f64 = (0..kb)
        .map(|j| choose2((0..ka).map(|i| table[i * kb + j]).sum()))
        .sum();
    let pairs = choose2(a.len() as u64);
    if pairs == 0.0 {
        return Ok(1.0);
    }
    // scaled by the pair count so integer inputs stay exact
    let numerator = index * pairs - rows * cols;
    let denominator = 0.5 * (rows + cols) * pairs - rows * cols;
    if denominator == 0.0 {
        return Ok(1.0);
    }
    Ok(numerator / denominator)
}
