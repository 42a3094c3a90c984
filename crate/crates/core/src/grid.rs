//! Complex-valued samples on a rectangular (x, t) grid.
//!
//! A [`GridField`] either covers one spatial period `[x0, x0 + L)` with
//! wrap-around semantics (`period = Some(L)`, used by the periodic solvers)
//! or an arbitrary closed interval sampled inclusively (`period = None`,
//! used by the error sweeps).
//!
//! # Serialization
//!
//! CSV: a header row `x,t,re,im` followed by one row per sample, time-major.
//!
//! Binary: little-endian, laid out as
//!
//! ```text
//! magic   4 bytes  "BGF1"
//! nx      u32
//! nt      u32
//! period  f64      spatial period, 0.0 for non-periodic fields
//! xs      nx * f64
//! ts      nt * f64
//! values  nt * nx * (re f64, im f64), time-major
//! ```

use std::io::{BufRead, Read, Write};

use crate::error::{BurgersError, Result};
use crate::spectral::Spectral;
use crate::C64;

const MAGIC: &[u8; 4] = b"BGF1";

#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    xs: Vec<f64>,
    ts: Vec<f64>,
    /// Time-major samples: `values[it * nx + ix]`.
    values: Vec<C64>,
    period: Option<f64>,
}

impl GridField {
    /// Zero-valued periodic field over one period `[x0, x0 + period)`.
    pub fn zeros_periodic(x0: f64, period: f64, nx: usize, ts: Vec<f64>) -> Self {
        assert!(nx >= 2 && period > 0.0 && !ts.is_empty());
        let xs = (0..nx)
            .map(|j| x0 + period * j as f64 / nx as f64)
            .collect();
        let n = nx * ts.len();
        GridField {
            xs,
            ts,
            values: vec![C64::new(0.0, 0.0); n],
            period: Some(period),
        }
    }

    /// Zero-valued field on an inclusive cartesian grid.
    pub fn zeros_cartesian(xs: Vec<f64>, ts: Vec<f64>) -> Self {
        assert!(!xs.is_empty() && !ts.is_empty());
        let n = xs.len() * ts.len();
        GridField {
            xs,
            ts,
            values: vec![C64::new(0.0, 0.0); n],
            period: None,
        }
    }

    /// Samples `f(x, t)` on a periodic grid.
    pub fn sample_periodic(
        x0: f64,
        period: f64,
        nx: usize,
        ts: &[f64],
        f: impl Fn(f64, f64) -> C64,
    ) -> Self {
        let mut field = Self::zeros_periodic(x0, period, nx, ts.to_vec());
        field.fill(f);
        field
    }

    /// Samples `f(x, t)` on an inclusive cartesian grid.
    pub fn sample_cartesian(xs: &[f64], ts: &[f64], f: impl Fn(f64, f64) -> C64) -> Self {
        let mut field = Self::zeros_cartesian(xs.to_vec(), ts.to_vec());
        field.fill(f);
        field
    }

    fn fill(&mut self, f: impl Fn(f64, f64) -> C64) {
        let nx = self.xs.len();
        for (it, &t) in self.ts.iter().enumerate() {
            for (ix, &x) in self.xs.iter().enumerate() {
                self.values[it * nx + ix] = f(x, t);
            }
        }
    }

    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn nt(&self) -> usize {
        self.ts.len()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn value(&self, ix: usize, it: usize) -> C64 {
        self.values[it * self.xs.len() + ix]
    }

    pub fn set(&mut self, ix: usize, it: usize, v: C64) {
        self.values[it * self.xs.len() + ix] = v;
    }

    /// All samples at one time level.
    pub fn level(&self, it: usize) -> &[C64] {
        let nx = self.xs.len();
        &self.values[it * nx..(it + 1) * nx]
    }

    pub fn level_mut(&mut self, it: usize) -> &mut [C64] {
        let nx = self.xs.len();
        &mut self.values[it * nx..(it + 1) * nx]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// True when both fields sample the identical grid.
    pub fn same_grid(&self, other: &Self) -> bool {
        self.period == other.period && self.xs == other.xs && self.ts == other.ts
    }

    /// Largest absolute value over all samples.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Spectral x-derivative, level by level. Requires a periodic grid.
    pub fn x_derivative(&self) -> Result<GridField> {
        let period = self.period.ok_or_else(|| {
            BurgersError::domain("spectral x-derivative requires a periodic grid")
        })?;
        let sp = Spectral::new(self.xs.len(), self.xs[0], period);
        let mut out = self.clone();
        for it in 0..self.ts.len() {
            let d = sp.derivative(self.level(it));
            out.level_mut(it).copy_from_slice(&d);
        }
        Ok(out)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,t,re,im")?;
        let nx = self.xs.len();
        for (it, &t) in self.ts.iter().enumerate() {
            for (ix, &x) in self.xs.iter().enumerate() {
                let v = self.values[it * nx + ix];
                writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", x, t, v.re, v.im)?;
            }
        }
        Ok(())
    }

    /// Reads a field back from its CSV form. Grid metadata (periodicity) is
    /// not stored in CSV, so the result is always cartesian.
    pub fn read_csv<R: BufRead>(r: R) -> Result<GridField> {
        let mut xs: Vec<f64> = Vec::new();
        let mut ts: Vec<f64> = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('x')) {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(BurgersError::input(format!(
                    "CSV line {} has {} columns, expected 4",
                    lineno + 1,
                    cols.len()
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| BurgersError::input(format!("CSV line {}: {e}", lineno + 1)))
            };
            let (x, t) = (parse(cols[0])?, parse(cols[1])?);
            if ts.last() != Some(&t) {
                ts.push(t);
            }
            if ts.len() == 1 {
                xs.push(x);
            }
            values.push(C64::new(parse(cols[2])?, parse(cols[3])?));
        }
        if xs.is_empty() || values.len() != xs.len() * ts.len() {
            return Err(BurgersError::input(
                "CSV does not describe a rectangular grid",
            ));
        }
        Ok(GridField {
            xs,
            ts,
            values,
            period: None,
        })
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.xs.len() as u32).to_le_bytes())?;
        w.write_all(&(self.ts.len() as u32).to_le_bytes())?;
        w.write_all(&self.period.unwrap_or(0.0).to_le_bytes())?;
        for &x in &self.xs {
            w.write_all(&x.to_le_bytes())?;
        }
        for &t in &self.ts {
            w.write_all(&t.to_le_bytes())?;
        }
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<GridField> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(BurgersError::input("bad magic in binary grid dump"));
        }
        let mut u32buf = [0u8; 4];
        r.read_exact(&mut u32buf)?;
        let nx = u32::from_le_bytes(u32buf) as usize;
        r.read_exact(&mut u32buf)?;
        let nt = u32::from_le_bytes(u32buf) as usize;
        let mut f64buf = [0u8; 8];
        let mut read_f64 = |r: &mut R| -> Result<f64> {
            r.read_exact(&mut f64buf)?;
            Ok(f64::from_le_bytes(f64buf))
        };
        let period = read_f64(&mut r)?;
        if nx < 1 || nt < 1 || nx.saturating_mul(nt) > (1 << 32) {
            return Err(BurgersError::input("implausible grid dimensions"));
        }
        let mut xs = Vec::with_capacity(nx);
        for _ in 0..nx {
            xs.push(read_f64(&mut r)?);
        }
        let mut ts = Vec::with_capacity(nt);
        for _ in 0..nt {
            ts.push(read_f64(&mut r)?);
        }
        let mut values = Vec::with_capacity(nx * nt);
        for _ in 0..nx * nt {
            let re = read_f64(&mut r)?;
            let im = read_f64(&mut r)?;
            values.push(C64::new(re, im));
        }
        let period = if period == 0.0 { None } else { Some(period) };
        Ok(GridField {
            xs,
            ts,
            values,
            period,
        })
    }
}
