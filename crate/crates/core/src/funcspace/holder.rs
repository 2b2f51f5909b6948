use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::GridFunction;
use crate::scalar::{check_alpha, Real};
use crate::{Error, Result};

/// Default seed for the random pair stream.
pub const DEFAULT_SEED: u64 = 0x1a5e_d5ee;

/// Sampled estimate of the `alpha`-Hölder constant.
///
/// `lower` is a certified lower bound on the true constant (it is a ratio
/// actually attained by two samples). `upper` is only present when a closed
/// form derivative bound was supplied.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderEstimate<T> {
    pub alpha: T,
    pub lower: T,
    pub pairs_used: usize,
    pub upper: Option<T>,
}

impl<T: Real> HolderEstimate<T> {
    /// Attaches `Höld_alpha <= lip * length^(1 - alpha)`, valid on an interval of
    /// the given length for a function with Lipschitz constant `lip`.
    pub fn with_lipschitz_upper(mut self, lip: T, length: T) -> Self {
        self.upper = Some(lip * length.powf(T::one() - self.alpha));
        self
    }
}

#[inline]
fn pair_ratio<T: Real>(v: &[T], h: T, alpha: T, i: usize, j: usize) -> T {
    let gap = T::from_usize_lossy(j.abs_diff(i));
    (v[j] - v[i]).abs() / (h * gap).powf(alpha)
}

/// Lower bound on `Höld_alpha(f)` from every power-of-two stride plus
/// `budget` seeded random pairs. The random pairs are a prefix of one fixed
/// stream, so a larger budget never lowers the result.
pub fn holder_lower_bound<T: Real>(f: &GridFunction<T>, alpha: T, budget: usize, seed: u64) -> Result<HolderEstimate<T>> {
    check_alpha(alpha)?;
    let n = f.len();
    if budget < n {
        return Err(Error::Usage(format!("pair budget {budget} is below the sample count {n}")));
    }
    let v = f.values();
    let h = f.step();
    let mut best = T::zero();
    let mut pairs = 0usize;
    let mut stride = 1;
    while stride < n {
        for i in 0..n - stride {
            best = best.max(pair_ratio(v, h, alpha, i, i + stride));
        }
        pairs += n - stride;
        stride *= 2;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            best = best.max(pair_ratio(v, h, alpha, i, j));
        }
    }
    pairs += budget;
    Ok(HolderEstimate { alpha, lower: best, pairs_used: pairs, upper: None })
}

/// Maximum ratio over all pairs, `O(n^2)`.
pub fn holder_exhaustive<T: Real>(f: &GridFunction<T>, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    let v = f.values();
    let h = f.step();
    let mut best = T::zero();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.max(pair_ratio(v, h, alpha, i, j));
        }
    }
    Ok(best)
}
