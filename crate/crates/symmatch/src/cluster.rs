//! Lloyd k-means over dense projections of term vectors, used to group
//! faults into diagnosis classes.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::index::CorpusIndex;
use crate::similarity::{vectorize, WeightConfig};

/// A fitted clustering: `k` centroids over the vocabulary space, an
/// assignment per input id, the total within-cluster squared distance,
/// and the objective value after each iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    pub assignments: BTreeMap<u64, usize>,
    pub objective: f64,
    pub iterations: usize,
    pub objective_per_iter: Vec<f64>,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = squared_distance(point, &centroids[0]);
    for (c, centroid) in centroids.iter().enumerate().skip(1) {
        let d = squared_distance(point, centroid);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

/// Mean over members listed in a fixed (value-sorted) order, so the float
/// accumulation does not depend on input permutation.
fn mean_of(members: &[&Vec<f64>], dim: usize) -> Vec<f64> {
    let mut m = vec![0.0; dim];
    for p in members {
        for (slot, v) in m.iter_mut().zip(p.iter()) {
            *slot += v;
        }
    }
    for slot in m.iter_mut() {
        *slot /= members.len() as f64;
    }
    m
}

/// Standard Lloyd iteration, deterministic for a given seed: assign each
/// point to its nearest centroid (squared Euclidean, ties to the lowest
/// index), recompute centroids as member means, stop when assignments
/// stabilize or `max_iter` is reached.
///
/// Initial centroids are a seeded sample of `k` distinct vectors taken
/// from the value-sorted list of distinct inputs, which makes the
/// resulting partition independent of input order. An empty cluster is
/// reseeded to the point farthest from its centroid.
pub fn kmeans(
    points: &[(u64, Vec<f64>)],
    k: usize,
    max_iter: usize,
    seed: u64,
) -> Result<ClusterModel> {
    if points.is_empty() {
        return Err(Error::domain("cannot cluster an empty input"));
    }
    if k == 0 {
        return Err(Error::domain("cluster count must be at least 1"));
    }
    if k > points.len() {
        return Err(Error::domain(format!(
            "cluster count {k} exceeds the number of vectors {}",
            points.len()
        )));
    }
    if max_iter == 0 {
        return Err(Error::domain("max_iter must be at least 1"));
    }
    let dim = points[0].1.len();
    if points.iter().any(|(_, p)| p.len() != dim) {
        return Err(Error::domain("all vectors must share one dimensionality"));
    }

    // Value-sorted distinct vectors; the seeded draw below is therefore
    // independent of the order ids arrived in.
    let mut distinct: Vec<&Vec<f64>> = points.iter().map(|(_, p)| p).collect();
    distinct.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    distinct.dedup_by(|a, b| a == b);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids: Vec<Vec<f64>> = if distinct.len() >= k {
        sample(&mut rng, distinct.len(), k)
            .into_iter()
            .map(|i| distinct[i].clone())
            .collect()
    } else {
        (0..k)
            .map(|i| distinct[i % distinct.len()].clone())
            .collect()
    };

    let mut assignments: Vec<usize> = vec![usize::MAX; points.len()];
    let mut objective_per_iter = Vec::new();
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let mut next: Vec<usize> = points.iter().map(|(_, p)| nearest(p, &centroids)).collect();

        // Revive empty clusters from the point farthest from their
        // centroid, then re-run the assignment once.
        let mut reseeded = false;
        for (c, centroid) in centroids.iter_mut().enumerate() {
            if next.contains(&c) {
                continue;
            }
            let farthest = points
                .iter()
                .map(|(_, p)| p)
                .max_by(|a, b| {
                    squared_distance(a, centroid).total_cmp(&squared_distance(b, centroid))
                })
                .expect("points are non-empty");
            if squared_distance(farthest, centroid) > 0.0 {
                *centroid = farthest.clone();
                reseeded = true;
            }
        }
        if reseeded {
            next = points.iter().map(|(_, p)| nearest(p, &centroids)).collect();
        }

        let stable = next == assignments;
        assignments = next;

        for (c, centroid) in centroids.iter_mut().enumerate() {
            let mut members: Vec<&Vec<f64>> = points
                .iter()
                .zip(&assignments)
                .filter(|(_, a)| **a == c)
                .map(|((_, p), _)| p)
                .collect();
            if members.is_empty() {
                continue;
            }
            members.sort_by(|a, b| {
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            *centroid = mean_of(&members, dim);
        }

        let objective: f64 = points
            .iter()
            .zip(&assignments)
            .map(|((_, p), a)| squared_distance(p, &centroids[*a]))
            .sum();
        if let Some(last) = objective_per_iter.last() {
            debug_assert!(
                objective <= *last + 1e-9,
                "objective increased: {last} -> {objective}"
            );
        }
        objective_per_iter.push(objective);

        if stable {
            break;
        }
    }

    let objective = *objective_per_iter
        .last()
        .expect("at least one iteration ran");
    Ok(ClusterModel {
        k,
        centroids,
        assignments: points
            .iter()
            .map(|(id, _)| *id)
            .zip(assignments.iter().copied())
            .collect(),
        objective,
        iterations,
        objective_per_iter,
    })
}

/// Dense projection of every indexed document over the sorted vocabulary,
/// ready for clustering. Returns the vocabulary and `(id, vector)` rows.
pub fn doc_points(index: &CorpusIndex, cfg: &WeightConfig) -> (Vec<String>, Vec<(u64, Vec<f64>)>) {
    let vocabulary: Vec<String> = index.vocabulary().map(str::to_string).collect();
    let rows = index
        .docs()
        .iter()
        .map(|(id, tf)| {
            let v = vectorize(tf, index, cfg);
            (*id, v.project(&vocabulary))
        })
        .collect();
    (vocabulary, rows)
}
