//! Accuracy measures comparing compiled insight against ground truth.

use crate::error::{Error, Result};
use crate::insight::{CategoricalBelief, WaypointRanking};
use crate::scalar::Scalar;
use crate::scene::SceneBundle;

use super::truth::{truth_ranking, TruthEntry};

/// Cosine similarity of belief and truth, both embedded over the scene's
/// full waypoint set. Result is clamped to `[0, 1]`.
pub fn cosine_accuracy<T: Scalar>(
    belief: &CategoricalBelief<T>,
    truth: &[TruthEntry<T>],
    scene: &SceneBundle<T>,
) -> Result<T> {
    for w in belief.probabilities.keys().chain(truth.iter().map(|e| &e.waypoint)) {
        scene.waypoint_index(w)?;
    }
    let truth_p = |w: &str| {
        truth
            .iter()
            .filter(|e| e.waypoint == w)
            .map(|e| e.p)
            .sum::<T>()
    };
    let (mut dot, mut na, mut nb) = (T::zero(), T::zero(), T::zero());
    for w in scene.waypoint_ids() {
        let a = belief.probability(w);
        let b = truth_p(w);
        dot += a * b;
        na += a * a;
        nb += b * b;
    }
    if na == T::zero() {
        return Err(Error::EmptyInsight(belief.object_id.clone()));
    }
    if nb == T::zero() {
        return Err(Error::InvalidInput("ground truth has no mass".into()));
    }
    Ok((dot / (na.sqrt() * nb.sqrt())).max(T::zero()).min(T::one()))
}

/// Optimal string alignment distance: insertions, deletions, substitutions
/// and transpositions of adjacent elements, with no substring edited twice.
pub fn dl_distance<A: PartialEq>(a: &[A], b: &[A]) -> usize {
    let (n, m) = (a.len(), b.len());
    let width = m + 1;
    let mut d = vec![0usize; (n + 1) * width];
    for i in 0..=n {
        d[i * width] = i;
    }
    for (j, cell) in d[..width].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut best = (d[(i - 1) * width + j] + 1)
                .min(d[i * width + j - 1] + 1)
                .min(d[(i - 1) * width + j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                best = best.min(d[(i - 2) * width + j - 2] + 1);
            }
            d[i * width + j] = best;
        }
    }
    d[n * width + m]
}

/// Edit distance between a user's ranking and the truth ranking. When the
/// user ranking mentions every truth waypoint, only its shortest prefix
/// containing all of them is compared.
pub fn rank_discrepancy<T: Scalar>(user: &WaypointRanking, truth: &[TruthEntry<T>]) -> Result<usize> {
    if user.ranked.is_empty() {
        return Err(Error::EmptyInsight(user.object_id.clone()));
    }
    let reference = truth_ranking(truth);
    if reference.is_empty() {
        return Err(Error::InvalidInput("ground truth has no mass".into()));
    }
    let positions: Option<Vec<usize>> = reference
        .iter()
        .map(|w| user.ranked.iter().position(|u| u == w))
        .collect();
    let compared = match positions {
        Some(pos) => &user.ranked[..=pos.into_iter().max().expect("non-empty reference")],
        None => &user.ranked[..],
    };
    Ok(dl_distance(compared, &reference))
}
