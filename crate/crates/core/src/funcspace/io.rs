//! Text formats for grid functions: whitespace-separated `x value` pairs, and
//! CSV with the header `x,value`.

use std::io::{BufRead, Write};

use super::GridFunction;
use crate::scalar::Real;
use crate::{Error, Result};

impl<T: Real> GridFunction<T> {
    pub fn write_xy<W: Write>(&self, mut w: W) -> Result<()> {
        for (x, v) in self.xs().zip(self.values()) {
            writeln!(w, "{x} {v}")?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,value")?;
        for (x, v) in self.xs().zip(self.values()) {
            writeln!(w, "{x},{v}")?;
        }
        Ok(())
    }

    /// Reads `x value` lines. Blank lines and lines starting with `#` are skipped.
    pub fn read_xy<R: BufRead>(r: R) -> Result<Self> {
        read_pairs(r, |line| Ok(line.split_whitespace().collect()))
    }

    /// Reads CSV with a mandatory `x,value` header.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut header_seen = false;
        read_pairs(r, |line| {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if !header_seen {
                header_seen = true;
                if fields != ["x", "value"] {
                    return Err(format!("expected header `x,value`, found `{line}`"));
                }
                return Ok(Vec::new());
            }
            Ok(fields)
        })
    }

    /// Builds a grid from explicit abscissae, which must be uniformly spaced.
    pub fn from_samples(xs: &[T], values: Vec<T>) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::Size(format!("{} abscissae for {} values", xs.len(), values.len())));
        }
        if xs.len() < 2 {
            return Err(Error::Size("a grid needs at least 2 samples".into()));
        }
        let n = xs.len();
        let (a, b) = (xs[0], xs[n - 1]);
        let h = (b - a) / T::from_usize_lossy(n - 1);
        let tol = h * T::lit(1e-6);
        for (i, &x) in xs.iter().enumerate() {
            let expected = a + h * T::from_usize_lossy(i);
            if (x - expected).abs() > tol {
                return Err(Error::Domain(format!(
                    "nonuniform sampling: sample {i} at x = {x}, uniform grid expects {expected}"
                )));
            }
        }
        GridFunction::new(a, b, values)
    }
}

fn read_pairs<T: Real, R: BufRead>(
    r: R,
    mut split: impl FnMut(&str) -> std::result::Result<Vec<&str>, String>,
) -> Result<GridFunction<T>> {
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    let lines: Vec<String> = r.lines().collect::<std::io::Result<_>>()?;
    for (idx, raw) in lines.iter().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = split(line).map_err(|msg| Error::Parse { line: idx + 1, msg })?;
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(Error::Parse { line: idx + 1, msg: format!("expected 2 columns, found {}", fields.len()) });
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map(T::lit)
                .map_err(|e| Error::Parse { line: idx + 1, msg: format!("`{s}`: {e}") })
        };
        xs.push(parse(fields[0])?);
        vs.push(parse(fields[1])?);
    }
    GridFunction::from_samples(&xs, vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_requires_header() {
        let err = GridFunction::<f64>::read_csv("0,1\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn nonuniform_rejected() {
        let err = GridFunction::<f64>::read_xy("0 1\n0.5 1\n2 1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("nonuniform")));
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = GridFunction::<f64>::read_xy("# psi\n\n0 1\n0.5 2\n1 3\n".as_bytes()).unwrap();
        assert_eq!(g.values(), &[1.0, 2.0, 3.0]);
        assert_eq!((g.a(), g.b()), (0.0, 1.0));
    }

    proptest! {
        #[test]
        fn text_formats_round_trip(values in prop::collection::vec(-1e6f64..1e6, 2..50), a in -10.0f64..10.0, len in 0.1f64..10.0) {
            let g = GridFunction::new(a, a + len, values).unwrap();
            let mut csv = Vec::new();
            g.write_csv(&mut csv).unwrap();
            let back = GridFunction::<f64>::read_csv(csv.as_slice()).unwrap();
            prop_assert_eq!(back.values(), g.values());
            let mut xy = Vec::new();
            g.write_xy(&mut xy).unwrap();
            let back = GridFunction::<f64>::read_xy(xy.as_slice()).unwrap();
            prop_assert_eq!(back.values(), g.values());
            prop_assert_eq!(back.a(), g.a());
            prop_assert_eq!(back.b(), g.b());
        }
    }
}
