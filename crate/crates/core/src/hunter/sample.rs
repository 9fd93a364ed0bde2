//! Seeded random measures with bounded denominators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use num_traits::Zero;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::histories::HistorySpace;
use crate::measure::MeasureTable;
use crate::scalar::Probability;
use crate::Rational;

/// `k` measures: the uniform one, then `k - 1` random ones whose weights are
/// drawn as `p/q` with `1 ≤ q ≤ denominator_bound`, `0 ≤ p ≤ q`, and then
/// normalized exactly. Deterministic in `seed`.
pub fn sample_measures(
    space: &HistorySpace,
    k: usize,
    seed: u64,
    denominator_bound: u64,
) -> Result<Vec<MeasureTable<Rational>>> {
    if k == 0 {
        return Err(Error::Limit("at least one measure per model is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![MeasureTable::uniform(space)];
    for _ in 1..k {
        out.push(draw(space, &mut rng, denominator_bound)?);
    }
    Ok(out)
}

/// The first random measure [`sample_measures`] would draw for `seed`.
pub fn random_measure(space: &HistorySpace, seed: u64, denominator_bound: u64) -> Result<MeasureTable<Rational>> {
    draw(space, &mut ChaCha8Rng::seed_from_u64(seed), denominator_bound)
}

fn draw(space: &HistorySpace, rng: &mut ChaCha8Rng, denominator_bound: u64) -> Result<MeasureTable<Rational>> {
    if denominator_bound == 0 {
        return Err(Error::InvalidMeasure("denominator bound must be positive".into()));
    }
    loop {
        let weights: Vec<Rational> = (0..space.len())
            .map(|_| {
                let q = rng.gen_range(1..=denominator_bound);
                let p = rng.gen_range(0..=q);
                Rational::from_ratio(p, q)
            })
            .collect();
        if weights.iter().any(|w| !w.is_zero()) {
            return MeasureTable::normalized(space, weights);
        }
    }
}

/// SHA-256 over the alphabet, the element count and the weights in history
/// order, as lowercase hex.
pub fn measure_digest<P: Probability>(space: &HistorySpace, measure: &MeasureTable<P>) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("{};{};", space.alphabet(), space.causet().len()));
    for w in measure.weights() {
        hasher.update(w.to_string());
        hasher.update(",");
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
