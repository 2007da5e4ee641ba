//! Ground-truth object location distributions.
//!
//! File layout: `{"objects": {"umbrella": [{"waypoint": "ws_ne", "p": 0.41}, ...]}}`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::distr::weighted::WeightedIndex;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scene::SceneBundle;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound = "T: Scalar")]
pub struct TruthEntry<T> {
    pub waypoint: String,
    pub p: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound = "T: Scalar")]
pub struct GroundTruth<T> {
    pub objects: BTreeMap<String, Vec<TruthEntry<T>>>,
}

pub(crate) fn sum_tolerance<T: Scalar>() -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(64.0))
}

impl<T: Scalar> GroundTruth<T> {
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::InvalidInput(format!("ground truth: {e}")))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("ground truth serializes")
    }

    pub fn entry(&self, object: &str) -> Result<&[TruthEntry<T>]> {
        self.objects
            .get(object)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidInput(format!("ground truth has no entry for `{object}`")))
    }

    /// Checks supports, probabilities and totals against `scene`.
    pub fn validate(&self, scene: &SceneBundle<T>) -> Result<()> {
        for (object, entries) in &self.objects {
            validate_entry(object, entries)?;
            for e in entries {
                scene.waypoint_index(&e.waypoint)?;
            }
        }
        Ok(())
    }

    /// Draws one world: each object's location independently from its distribution.
    pub fn sample_locations<R: Rng + ?Sized>(&self, objects: &[&str], rng: &mut R) -> Result<BTreeMap<String, String>> {
        objects
            .iter()
            .map(|&object| {
                let entries = self.entry(object)?;
                let weights = WeightedIndex::new(entries.iter().map(|e| e.p))
                    .map_err(|e| Error::InvalidInput(format!("ground truth for `{object}`: {e}")))?;
                Ok((object.to_string(), entries[weights.sample(rng)].waypoint.clone()))
            })
            .collect()
    }
}

pub(crate) fn validate_entry<T: Scalar>(object: &str, entries: &[TruthEntry<T>]) -> Result<()> {
    if entries.is_empty() {
        return Err(Error::InvalidInput(format!("ground truth for `{object}` is empty")));
    }
    let mut seen = HashSet::new();
    for e in entries {
        if !(e.p >= T::zero() && e.p <= T::one()) {
            return Err(Error::InvalidInput(format!("probability {} for `{object}` outside [0, 1]", e.p)));
        }
        if !seen.insert(e.waypoint.as_str()) {
            return Err(Error::InvalidInput(format!("`{}` listed twice for `{object}`", e.waypoint)));
        }
    }
    let total: T = entries.iter().map(|e| e.p).sum();
    if (total - T::one()).abs() > sum_tolerance() {
        return Err(Error::InvalidInput(format!("ground truth for `{object}` sums to {total}")));
    }
    Ok(())
}

/// Support waypoints by descending probability, ties by id.
pub fn truth_ranking<T: Scalar>(entries: &[TruthEntry<T>]) -> Vec<String> {
    let mut sorted: Vec<&TruthEntry<T>> = entries.iter().filter(|e| e.p > T::zero()).collect();
    sorted.sort_by(|a, b| {
        b.p.partial_cmp(&a.p)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.waypoint.cmp(&b.waypoint))
    });
    sorted.into_iter().map(|e| e.waypoint.clone()).collect()
}

/// For each object, picks `n_locations` distinct waypoints uniformly from
/// `candidates` and weights them with a uniform draw from the probability
/// simplex (normalized unit exponentials, i.e. a flat Dirichlet).
pub fn gen_ground_truth<T: Scalar>(
    scene: &SceneBundle<T>,
    objects: &[&str],
    candidates: &[String],
    n_locations: usize,
    seed: u64,
) -> Result<GroundTruth<T>> {
    if n_locations == 0 {
        return Err(Error::InvalidInput("n_locations must be positive".into()));
    }
    let pool: Vec<&str> = candidates.iter().map(String::as_str).collect::<BTreeSet<_>>().into_iter().collect();
    for w in &pool {
        scene.waypoint_index(w)?;
    }
    if pool.len() < n_locations {
        return Err(Error::InsufficientCandidates { needed: n_locations, available: pool.len() });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BTreeMap::new();
    for &object in objects {
        let picks = sample(&mut rng, pool.len(), n_locations);
        let weights: Vec<T> = (0..n_locations).map(|_| T::sample_exp1(&mut rng)).collect();
        let total: T = weights.iter().sum();
        let entries = picks
            .iter()
            .zip(weights)
            .map(|(k, w)| TruthEntry { waypoint: pool[k].to_string(), p: w / total })
            .collect();
        if out.insert(object.to_string(), entries).is_some() {
            return Err(Error::InvalidInput(format!("object `{object}` requested twice")));
        }
    }
    Ok(GroundTruth { objects: out })
}
