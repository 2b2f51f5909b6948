//! Truncated derivative stacks used to evaluate registry functions and their
//! derivatives in closed form.

use crate::scalar::{binomial, Real};

/// `d[j]` holds the j-th derivative at a fixed point, for `j = 0..=order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    d: Vec<T>,
}

impl<T: Real> Jet<T> {
    pub fn constant(c: T, order: usize) -> Self {
        let mut d = vec![T::zero(); order + 1];
        d[0] = c;
        Jet { d }
    }

    /// The identity function evaluated at `x`.
    pub fn variable(x: T, order: usize) -> Self {
        let mut d = vec![T::zero(); order + 1];
        d[0] = x;
        if order >= 1 {
            d[1] = T::one();
        }
        Jet { d }
    }

    pub fn from_derivatives(d: Vec<T>) -> Self {
        assert!(!d.is_empty());
        Jet { d }
    }

    pub fn order(&self) -> usize {
        self.d.len() - 1
    }

    pub fn value(&self) -> T {
        self.d[0]
    }

    pub fn get(&self, j: usize) -> T {
        self.d[j]
    }

    pub fn derivatives(&self) -> &[T] {
        &self.d
    }

    pub fn into_derivatives(self) -> Vec<T> {
        self.d
    }

    pub fn add(&self, other: &Self) -> Self {
        Jet { d: self.d.iter().zip(&other.d).map(|(&x, &y)| x + y).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Jet { d: self.d.iter().zip(&other.d).map(|(&x, &y)| x - y).collect() }
    }

    pub fn scale(&self, c: T) -> Self {
        Jet { d: self.d.iter().map(|&x| x * c).collect() }
    }

    pub fn add_const(&self, c: T) -> Self {
        let mut out = self.clone();
        out.d[0] = out.d[0] + c;
        out
    }

    /// Leibniz rule.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let d = (0..=n)
            .map(|m| {
                (0..=m)
                    .map(|j| binomial::<T>(m, j) * self.d[j] * other.d[m - j])
                    .fold(T::zero(), |acc, t| acc + t)
            })
            .collect();
        Jet { d }
    }

    /// `1 / self`, from `self * r = 1`.
    pub fn recip(&self) -> Self {
        let n = self.order();
        let w0 = self.d[0];
        let mut r = vec![T::zero(); n + 1];
        r[0] = w0.recip();
        for m in 1..=n {
            let s = (1..=m)
                .map(|j| binomial::<T>(m, j) * self.d[j] * r[m - j])
                .fold(T::zero(), |acc, t| acc + t);
            r[m] = -s / w0;
        }
        Jet { d: r }
    }

    /// Derivative jet (order drops by one).
    fn shift(&self) -> Self {
        if self.order() == 0 {
            return Jet { d: vec![T::zero()] };
        }
        Jet { d: self.d[1..].to_vec() }
    }

    /// Builds `y` with `y(x0) = y0` and `y' = dy`.
    fn integrate(y0: T, dy: &Self, order: usize) -> Self {
        let mut d = Vec::with_capacity(order + 1);
        d.push(y0);
        d.extend(dy.d.iter().take(order).copied());
        d.resize(order + 1, T::zero());
        Jet { d }
    }

    pub fn exp(&self) -> Self {
        // y' = u' y
        let n = self.order();
        let mut y = vec![T::zero(); n + 1];
        y[0] = self.d[0].exp();
        for m in 1..=n {
            y[m] = (0..m)
                .map(|j| binomial::<T>(m - 1, j) * self.d[j + 1] * y[m - 1 - j])
                .fold(T::zero(), |acc, t| acc + t);
        }
        Jet { d: y }
    }

    /// Returns `(sin u, cos u)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.order();
        let mut s = vec![T::zero(); n + 1];
        let mut c = vec![T::zero(); n + 1];
        s[0] = self.d[0].sin();
        c[0] = self.d[0].cos();
        for m in 1..=n {
            let mut sm = T::zero();
            let mut cm = T::zero();
            for j in 0..m {
                let w = binomial::<T>(m - 1, j) * self.d[j + 1];
                sm = sm + w * c[m - 1 - j];
                cm = cm - w * s[m - 1 - j];
            }
            s[m] = sm;
            c[m] = cm;
        }
        (Jet { d: s }, Jet { d: c })
    }

    pub fn atan(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Jet { d: vec![self.d[0].atan()] };
        }
        let du = self.shift();
        let base = Jet { d: self.d[..n].to_vec() };
        let denom = base.mul(&base).add_const(T::one()).recip();
        Self::integrate(self.d[0].atan(), &du.mul(&denom), n)
    }

    pub fn powi(&self, e: usize) -> Self {
        let mut out = Jet::constant(T::one(), self.order());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}
