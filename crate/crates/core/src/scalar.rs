use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the numerical routines are generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every `Real` can represent (a rounding of) any finite `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
}

/// Binomial coefficient as a scalar, computed multiplicatively.
pub(crate) fn binomial<T: Real>(n: usize, j: usize) -> T {
    let j = j.min(n - j);
    let mut acc = T::one();
    for i in 0..j {
        acc = acc * T::from_usize_lossy(n - i) / T::from_usize_lossy(i + 1);
    }
    acc
}

/// Checks `alpha` in (0, 1].
pub(crate) fn check_alpha<T: Real>(alpha: T) -> crate::Result<()> {
    if alpha > T::zero() && alpha <= T::one() {
        Ok(())
    } else {
        Err(crate::Error::Domain(format!("alpha = {alpha} is outside (0, 1]")))
    }
}

pub(crate) fn check_k(k: usize) -> crate::Result<()> {
    if k >= 1 {
        Ok(())
    } else {
        Err(crate::Error::Domain("k must be a positive integer".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial::<f64>(5, 2), 10.0);
        assert_eq!(binomial::<f64>(6, 0), 1.0);
        assert_eq!(binomial::<f32>(6, 6), 1.0);
    }
}
