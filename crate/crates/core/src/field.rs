//! Sampled functions on a periodic grid, plus their on-disk formats.
//!
//! Fields serialize two ways:
//! - text: one `x value` pair per line for real fields, `x re im` for complex;
//! - binary: little-endian block `L: f64, n: u64` followed by the payload
//!   (`n` doubles for a real field, `2n` interleaved `re, im` doubles for a
//!   complex one).

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Real-valued samples `u(x_i)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

/// Complex-valued samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl RealField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.point_count() {
            return Err(Error::InvalidGrid(format!(
                "sample count {} does not match grid point count {}",
                values.len(),
                grid.point_count()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("real field samples".into()));
        }
        Ok(RealField { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        RealField {
            values: vec![0.0; grid.point_count()],
            grid,
        }
    }

    /// Sample a function of `x` on the grid.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.point_count()).map(|i| f(grid.point(i))).collect();
        RealField { grid, values }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pointwise combination with another field on the same grid.
    pub fn zip_map(&self, other: &RealField, f: impl Fn(f64, f64) -> f64) -> Result<RealField> {
        self.grid.check_same(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(RealField {
            grid: self.grid,
            values,
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RealField {
        RealField {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, a: f64) -> RealField {
        self.map(|v| a * v)
    }

    pub fn add(&self, other: &RealField) -> Result<RealField> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RealField) -> Result<RealField> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &RealField) -> Result<RealField> {
        self.zip_map(other, |a, b| a * b)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &RealField) -> Result<RealField> {
        self.zip_map(other, |s, o| s + a * o)
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect(),
        }
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{:.17e} {:.17e}", self.grid.point(i), v)?;
        }
        Ok(())
    }

    pub fn write_text_file(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_text(std::io::BufWriter::new(std::fs::File::create(path)?))
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.grid.half_length().to_le_bytes())?;
        w.write_all(&(self.grid.point_count() as u64).to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn write_binary_file(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_binary(std::io::BufWriter::new(std::fs::File::create(path)?))
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let (grid, n) = read_header(&mut r)?;
        let mut values = Vec::with_capacity(n);
        let mut buf = [0u8; 8];
        for _ in 0..n {
            r.read_exact(&mut buf)?;
            values.push(f64::from_le_bytes(buf));
        }
        RealField::new(grid, values)
    }

    pub fn read_binary_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_binary(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

impl ComplexField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.point_count() {
            return Err(Error::InvalidGrid(format!(
                "sample count {} does not match grid point count {}",
                values.len(),
                grid.point_count()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("complex field samples".into()));
        }
        Ok(ComplexField { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        ComplexField {
            values: vec![Complex64::new(0.0, 0.0); grid.point_count()],
            grid,
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.point_count()).map(|i| f(grid.point(i))).collect();
        ComplexField { grid, values }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn real_part(&self) -> RealField {
        RealField {
            grid: self.grid,
            values: self.values.iter().map(|v| v.re).collect(),
        }
    }

    pub fn imag_part(&self) -> RealField {
        RealField {
            grid: self.grid,
            values: self.values.iter().map(|v| v.im).collect(),
        }
    }

    pub fn conj(&self) -> ComplexField {
        ComplexField {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> ComplexField {
        ComplexField {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(
        &self,
        other: &ComplexField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<ComplexField> {
        self.grid.check_same(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(ComplexField {
            grid: self.grid,
            values,
        })
    }

    pub fn add(&self, other: &ComplexField) -> Result<ComplexField> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexField) -> Result<ComplexField> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        for (i, v) in self.values.iter().enumerate() {
            writeln!(
                w,
                "{:.17e} {:.17e} {:.17e}",
                self.grid.point(i),
                v.re,
                v.im
            )?;
        }
        Ok(())
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.grid.half_length().to_le_bytes())?;
        w.write_all(&(self.grid.point_count() as u64).to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let (grid, n) = read_header(&mut r)?;
        let mut values = Vec::with_capacity(n);
        let mut buf = [0u8; 8];
        for _ in 0..n {
            r.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf);
            r.read_exact(&mut buf)?;
            let im = f64::from_le_bytes(buf);
            values.push(Complex64::new(re, im));
        }
        ComplexField::new(grid, values)
    }
}

fn read_header<R: Read>(r: &mut R) -> Result<(Grid, usize)> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    let half_length = f64::from_le_bytes(buf);
    r.read_exact(&mut buf)?;
    let n = u64::from_le_bytes(buf) as usize;
    let grid = Grid::new(half_length, n)?;
    Ok((grid, n))
}
