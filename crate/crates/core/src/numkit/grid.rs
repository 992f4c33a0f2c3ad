//! Uniform grids, sampled vector-valued functions and trapezoid quadrature.

#[allow(unused_imports)]
use num_traits::Float;
use super::linalg::{CMat, CVec};
use crate::{Error, Result, C64};
use alloc::format;
use alloc::vec::Vec;

/// Uniform grid on [x_min, x_max] with both endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
            return Err(Error::InvalidGrid(format!("need x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if n_points < 8 {
            return Err(Error::InvalidGrid(format!("need at least 8 points, got {n_points}")));
        }
        Ok(Grid { x_min, x_max, n_points })
    }

    /// Grid with spacing as close as possible to (and not above) `h`.
    pub fn with_spacing(x_min: f64, x_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        let n = ((x_max - x_min) / h - 1e-9).ceil() as usize + 1;
        Grid::new(x_min, x_max, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.h()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }
}

/// Composite trapezoid rule for samples on `grid`.
pub fn trapezoid(grid: &Grid, values: &[f64]) -> f64 {
    debug_assert_eq!(values.len(), grid.n_points());
    let n = values.len();
    let inner: f64 = values[1..n - 1].iter().sum();
    grid.h() * (inner + 0.5 * (values[0] + values[n - 1]))
}

/// Complex vector-valued samples, one row per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: CMat,
}

impl GridFunction {
    pub fn new(grid: Grid, values: CMat) -> Result<Self> {
        if values.nrows() != grid.n_points() {
            return Err(Error::DimensionMismatch { expected: grid.n_points(), got: values.nrows() });
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: Grid, components: usize) -> Self {
        GridFunction { grid, values: CMat::zeros(grid.n_points(), components) }
    }

    /// Samples `f` at every grid point; `f` must return `components` entries.
    pub fn from_fn<F: Fn(f64) -> CVec>(grid: Grid, components: usize, f: F) -> Result<Self> {
        let mut values = CMat::zeros(grid.n_points(), components);
        for (i, x) in grid.points().enumerate() {
            let v = f(x);
            if v.len() != components {
                return Err(Error::DimensionMismatch { expected: components, got: v.len() });
            }
            values.row_mut(i).tr_copy_from(&v);
        }
        Ok(GridFunction { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &CMat {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut CMat {
        &mut self.values
    }

    pub fn at(&self, i: usize) -> CVec {
        self.values.row(i).transpose()
    }

    /// Pointwise density Σ_c |f_c(x)|².
    pub fn density(&self) -> Vec<f64> {
        self.values.row_iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum()).collect()
    }

    pub fn norm(&self) -> f64 {
        trapezoid(&self.grid, &self.density()).sqrt()
    }

    /// ⟨self, other⟩ = ∫ selfᴴ other dx.
    pub fn inner(&self, other: &GridFunction) -> Result<C64> {
        if self.values.shape() != other.values.shape() {
            return Err(Error::DimensionMismatch { expected: self.values.ncols(), got: other.values.ncols() });
        }
        let h = self.grid.h();
        let n = self.grid.n_points();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            let w = if i == 0 || i + 1 == n { 0.5 * h } else { h };
            let mut s = C64::new(0.0, 0.0);
            for c in 0..self.values.ncols() {
                s += self.values[(i, c)].conj() * other.values[(i, c)];
            }
            acc += s * w;
        }
        Ok(acc)
    }

    /// Sup norm over rows `lo..hi`.
    pub fn sup_norm_range(&self, lo: usize, hi: usize) -> f64 {
        let mut m: f64 = 0.0;
        for i in lo..hi {
            for z in self.values.row(i).iter() {
                m = m.max(z.norm());
            }
        }
        m
    }

    pub fn scale(&mut self, s: C64) {
        self.values *= s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 7).is_err());
        assert!(Grid::new(0.0, 1.0, 8).is_ok());
    }

    #[test]
    fn spacing_and_endpoints() {
        let g = Grid::new(-1.0, 1.0, 201).unwrap();
        assert!((g.h() - 0.01).abs() < 1e-15);
        assert_eq!(g.point(200), 1.0);
        assert_eq!(g.point(0), -1.0);
        let g2 = Grid::with_spacing(-40.0, 40.0, 0.01).unwrap();
        assert_eq!(g2.n_points(), 8001);
    }

    #[test]
    fn gaussian_norm_is_one() {
        let g = Grid::with_spacing(-8.0, 8.0, 0.01).unwrap();
        let pi = core::f64::consts::PI;
        let vals: Vec<f64> = g.points().map(|x| (-x * x).exp() / pi.sqrt()).collect();
        assert!((trapezoid(&g, &vals) - 1.0).abs() < 1e-8);
        let f = GridFunction::from_fn(g, 2, |x| {
            CVec::from_vec(alloc::vec![C64::new((-x * x / 2.0).exp() / pi.powf(0.25), 0.0), C64::new(0.0, 0.0)])
        })
        .unwrap();
        assert!((f.norm() - 1.0).abs() < 1e-8);
        assert!((f.inner(&f).unwrap().re - 1.0).abs() < 1e-8);
    }
}
