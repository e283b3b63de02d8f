use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::equation::Equation;
use crate::error::{Error, Result};

use super::MovingLattice;

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

impl MovingLattice {
    /// Writes `m,n,t,x,u` rows, row-major in `m` then `n`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["m", "n", "t", "x", "u"])?;
        for (m, n, p) in self.points() {
            w.write_record([m.to_string(), n.to_string(), fmt_f64(p.t), fmt_f64(p.x), fmt_f64(p.u)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads a complete rectangular window written by [`MovingLattice::write_csv`].
    pub fn read_csv<R: Read>(reader: R, equation: Equation) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        let expected = ["m", "n", "t", "x", "u"];
        if headers.len() != 5 || headers.iter().zip(expected).any(|(h, e)| h.trim() != e) {
            return Err(Error::Parse(format!("expected header m,n,t,x,u, got {headers:?}")));
        }
        let mut cells: BTreeMap<(i64, i64), [f64; 3]> = BTreeMap::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            let int = |i: usize| -> Result<i64> {
                rec[i]
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {}: bad integer `{}`", line + 2, &rec[i])))
            };
            let float = |i: usize| -> Result<f64> {
                rec[i]
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {}: bad number `{}`", line + 2, &rec[i])))
            };
            let key = (int(0)?, int(1)?);
            if cells.insert(key, [float(2)?, float(3)?, float(4)?]).is_some() {
                return Err(Error::Parse(format!("duplicate point {key:?}")));
            }
        }
        let (first, last) = match (cells.keys().next(), cells.keys().last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Error::Parse("no lattice points".into())),
        };
        let n_min = cells.keys().map(|k| k.1).min().unwrap_or(first.1);
        let n_max = cells.keys().map(|k| k.1).max().unwrap_or(last.1);
        let (m_range, n_range) = (first.0..=last.0, n_min..=n_max);
        let size = (last.0 - first.0 + 1) as usize * (n_max - n_min + 1) as usize;
        if cells.len() != size {
            return Err(Error::Parse(format!(
                "lattice window {m_range:?} x {n_range:?} is incomplete ({} of {size} points)",
                cells.len()
            )));
        }
        let (mut x, mut t, mut u) = (
            Vec::with_capacity(size),
            Vec::with_capacity(size),
            Vec::with_capacity(size),
        );
        for [tv, xv, uv] in cells.into_values() {
            t.push(tv);
            x.push(xv);
            u.push(uv);
        }
        MovingLattice::from_arrays(equation, m_range, n_range, x, t, u)
    }
}
