use super::GridFunction;
use crate::scalar::Real;
use crate::{Error, Result};

/// Fornberg's recursion: weights of the `order`-th derivative at `x0` from `nodes`.
fn fornberg<T: Real>(x0: T, nodes: &[T], order: usize) -> Vec<T> {
    let n = nodes.len();
    let mut c = vec![vec![T::zero(); order + 1]; n];
    let mut c1 = T::one();
    let mut c4 = nodes[0] - x0;
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kk = T::from_usize_lossy(k);
                    c[i][k] = c1 * (kk * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                let kk = T::from_usize_lossy(k);
                c[j][k] = (c4 * c[j][k] - kk * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Second-order accurate derivative of the given order: central stencils in
/// the interior, one-sided stencils of `order + 2` nodes at the ends.
pub fn finite_difference<T: Real>(f: &GridFunction<T>, order: usize) -> Result<GridFunction<T>> {
    let n = f.len();
    if order == 0 {
        return Err(Error::Usage("finite difference order must be at least 1".into()));
    }
    if n < 2 * order + 1 {
        return Err(Error::Size(format!(
            "derivative of order {order} needs at least {} samples, grid has {n}",
            2 * order + 1
        )));
    }
    let half = order.div_ceil(2);
    let width = order + 2;
    let scale = f.step().powi(order as i32).recip();
    let v = f.values();

    let central_nodes: Vec<T> = (0..=2 * half).map(|i| T::from_usize_lossy(i) - T::from_usize_lossy(half)).collect();
    let central = fornberg(T::zero(), &central_nodes, order);
    let window: Vec<T> = (0..width).map(T::from_usize_lossy).collect();

    let mut out = vec![T::zero(); n];
    for (i, o) in out.iter_mut().enumerate() {
        let (start, weights) = if i >= half && i + half < n {
            (i - half, central.clone())
        } else if i < half {
            (0, fornberg(T::from_usize_lossy(i), &window, order))
        } else {
            let start = n - width;
            (start, fornberg(T::from_usize_lossy(i - start), &window, order))
        };
        let acc = weights.iter().enumerate().map(|(j, &w)| w * v[start + j]).fold(T::zero(), |s, t| s + t);
        *o = acc * scale;
    }
    GridFunction::new(f.a(), f.b(), out)
}
