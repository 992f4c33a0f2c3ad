//! One-dimensional Dirac operators ⊕꜀ v꜀(−iσ₂)∂ₓ + V(x) with evaluable matrix
//! potentials, their finite-difference action, a staggered Hermitian
//! discretization, shooting refinement and transfer-matrix scattering.

mod discretize;
mod scattering;
mod shooting;

pub use discretize::{choose_walls, discretize, discretize_with, Walls, eigenvector_function, levels_in, outer_mass, DiscreteLevel, MAX_SPACING};
pub use scattering::{scatter_from_left, ScatteringResult};
pub use shooting::{matching_defect, refine_level, RefinedLevel, ShootingOptions};

#[allow(unused_imports)]
use num_traits::Float;
use crate::numkit::grid::GridFunction;
use crate::numkit::linalg::{hermitian_deviation, CMat, CVec};
use crate::{Error, Result, C64};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub type FieldFn = Arc<dyn Fn(f64) -> CMat + Send + Sync>;

/// Value and first two derivatives of a vector-valued function at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub v: CVec,
    pub d1: CVec,
    pub d2: Option<CVec>,
}

impl Jet {
    pub fn new(v: CVec, d1: CVec, d2: CVec) -> Self {
        Jet { v, d1, d2: Some(d2) }
    }

    pub fn first_order(v: CVec, d1: CVec) -> Self {
        Jet { v, d1, d2: None }
    }

    pub fn scaled(&self, s: C64) -> Jet {
        Jet { v: &self.v * s, d1: &self.d1 * s, d2: self.d2.as_ref().map(|d| d * s) }
    }
}

/// Analytic vector field x ↦ jet.
pub type SpinorFn = Arc<dyn Fn(f64) -> Jet + Send + Sync>;

/// Matrix-valued potential field.
#[derive(Clone)]
pub struct MatrixField {
    dim: usize,
    eval: FieldFn,
    deriv: Option<FieldFn>,
    hermitian: bool,
    asymptotes: Option<(CMat, CMat)>,
}

impl core::fmt::Debug for MatrixField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MatrixField")
            .field("dim", &self.dim)
            .field("hermitian", &self.hermitian)
            .field("has_derivative", &self.deriv.is_some())
            .finish()
    }
}

impl MatrixField {
    pub fn new<F: Fn(f64) -> CMat + Send + Sync + 'static>(dim: usize, eval: F) -> Self {
        MatrixField { dim, eval: Arc::new(eval), deriv: None, hermitian: true, asymptotes: None }
    }

    pub fn constant(m: CMat) -> Self {
        let dim = m.nrows();
        let zero = CMat::zeros(dim, dim);
        let (a, b) = (m.clone(), m.clone());
        MatrixField::new(dim, move |_| m.clone()).with_derivative(move |_| zero.clone()).with_asymptotes(a, b)
    }

    pub fn with_derivative<F: Fn(f64) -> CMat + Send + Sync + 'static>(mut self, d: F) -> Self {
        self.deriv = Some(Arc::new(d));
        self
    }

    pub fn with_asymptotes(mut self, minus: CMat, plus: CMat) -> Self {
        self.asymptotes = Some((minus, plus));
        self
    }

    pub fn non_hermitian(mut self) -> Self {
        self.hermitian = false;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn eval(&self, x: f64) -> CMat {
        (self.eval)(x)
    }

    pub fn derivative(&self, x: f64) -> Option<CMat> {
        self.deriv.as_ref().map(|d| d(x))
    }

    pub fn asymptotes(&self) -> Option<&(CMat, CMat)> {
        self.asymptotes.as_ref()
    }

    /// Worst relative Hermiticity deviation over `samples`: (x, deviation).
    pub fn hermitian_defect(&self, samples: &[f64]) -> (f64, f64) {
        samples.iter().fold((0.0, 0.0), |acc, &x| {
            let (_, _, d) = hermitian_deviation(&self.eval(x));
            if d > acc.1 {
                (x, d)
            } else {
                acc
            }
        })
    }

    /// Checks the type invariants: Hermitian on samples (≤ 1e−12) and
    /// asymptotic values matching the field at |x| = 40 (≤ 1e−8).
    pub fn validate(&self, samples: &[f64]) -> Result<()> {
        if self.hermitian {
            let mut worst = (0, 0, 0.0);
            for &x in samples {
                let m = self.eval(x);
                if m.nrows() != self.dim || m.ncols() != self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim, got: m.nrows() });
                }
                let d = hermitian_deviation(&m);
                if d.2 > worst.2 {
                    worst = d;
                }
            }
            if worst.2 > 1e-12 {
                return Err(Error::NotHermitian { row: worst.0, col: worst.1, deviation: worst.2 });
            }
        }
        if let Some((minus, plus)) = &self.asymptotes {
            for (x, target) in [(-40.0, minus), (40.0, plus)] {
                let dev = (self.eval(x) - target).iter().fold(0.0f64, |m, z| m.max(z.norm()));
                if dev > 1e-8 {
                    return Err(Error::InvalidParameter(format!("asymptote mismatch {dev:e} at x = {x}")));
                }
            }
        }
        Ok(())
    }
}

/// The operator ⊕꜀ v꜀(−iσ₂)∂ₓ + V(x) acting on 2·channels components.
#[derive(Debug, Clone)]
pub struct DiracOperator {
    velocities: Vec<f64>,
    potential: MatrixField,
}

impl DiracOperator {
    pub fn new(velocities: Vec<f64>, potential: MatrixField) -> Result<Self> {
        if velocities.is_empty() || velocities.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter(format!("velocities must be positive, got {velocities:?}")));
        }
        if potential.dim() != 2 * velocities.len() {
            return Err(Error::DimensionMismatch { expected: 2 * velocities.len(), got: potential.dim() });
        }
        Ok(DiracOperator { velocities, potential })
    }

    /// Unit-velocity 2×2 operator −iσ₂∂ₓ + V(x).
    pub fn spinor(potential: MatrixField) -> Result<Self> {
        DiracOperator::new(alloc::vec![1.0], potential)
    }

    pub fn dim(&self) -> usize {
        self.potential.dim()
    }

    pub fn velocities(&self) -> &[f64] {
        &self.velocities
    }

    pub fn potential(&self) -> &MatrixField {
        &self.potential
    }

    /// Constant first-order symbol K (real, block diagonal v꜀·[[0,−1],[1,0]]).
    pub fn kinetic(&self) -> CMat {
        let n = self.dim();
        let mut k = CMat::zeros(n, n);
        for (c, &v) in self.velocities.iter().enumerate() {
            k[(2 * c, 2 * c + 1)] = C64::new(-v, 0.0);
            k[(2 * c + 1, 2 * c)] = C64::new(v, 0.0);
        }
        k
    }

    pub fn kinetic_inverse(&self) -> CMat {
        let n = self.dim();
        let mut k = CMat::zeros(n, n);
        for (c, &v) in self.velocities.iter().enumerate() {
            k[(2 * c, 2 * c + 1)] = C64::new(1.0 / v, 0.0);
            k[(2 * c + 1, 2 * c)] = C64::new(-1.0 / v, 0.0);
        }
        k
    }

    /// Pointwise action on a jet: K f′ + V f.
    pub fn act(&self, x: f64, f: &Jet) -> CVec {
        self.kinetic() * &f.d1 + self.potential.eval(x) * &f.v
    }

    /// Derivative of the action, K f″ + V′ f + V f′ (requires f″ and V′).
    pub fn act_derivative(&self, x: f64, f: &Jet) -> Option<CVec> {
        let d2 = f.d2.as_ref()?;
        let dv = self.potential.derivative(x)?;
        Some(self.kinetic() * d2 + dv * &f.v + self.potential.eval(x) * &f.d1)
    }

    /// Jet of (H − λ) f, first order (needs f″ and V′).
    pub fn shifted_jet(&self, x: f64, f: &Jet, lambda: C64) -> Option<Jet> {
        let v = self.act(x, f) - &f.v * lambda;
        let d1 = self.act_derivative(x, f)? - &f.d1 * lambda;
        Some(Jet::first_order(v, d1))
    }

    /// Full jet of an exact solution of (op − λ) f = 0 from its value at x:
    /// f′ = K⁻¹(λ − V) f and f″ = −K⁻¹V′ f + K⁻¹(λ − V) f′.
    pub fn solution_jet(&self, x: f64, lambda: C64, v: CVec) -> Option<Jet> {
        let n = self.dim();
        let kinv = self.kinetic_inverse();
        let g = &kinv * (CMat::identity(n, n) * lambda - self.potential.eval(x));
        let d1 = &g * &v;
        let d2 = -(&kinv * self.potential.derivative(x)?) * &v + &g * &d1;
        Some(Jet::new(v, d1, d2))
    }

    /// Generator M(x) = K⁻¹(E − V(x)) of the stationary equation y′ = M y.
    pub fn generator(&self, energy: C64) -> impl Fn(f64) -> CMat + '_ {
        let kinv = self.kinetic_inverse();
        let n = self.dim();
        move |x| &kinv * (CMat::identity(n, n) * energy - self.potential.eval(x))
    }

    /// (K∂ₓ + V) f on the grid with fourth-order differences (one-sided at the edges).
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        if f.components() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: f.components() });
        }
        let grid = *f.grid();
        let h = grid.h();
        if h > 0.02 {
            return Err(Error::GridTooCoarse { h, limit: 0.02 });
        }
        let n = grid.n_points();
        let vals = f.values();
        let k = self.kinetic();
        let mut out = CMat::zeros(n, self.dim());
        let w = 1.0 / (12.0 * h);
        for i in 0..n {
            let stencil: [(usize, f64); 5] = if i >= 2 && i + 2 < n {
                [(i - 2, 1.0), (i - 1, -8.0), (i, 0.0), (i + 1, 8.0), (i + 2, -1.0)]
            } else if i == 0 {
                [(0, -25.0), (1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)]
            } else if i == 1 {
                [(0, -3.0), (1, -10.0), (2, 18.0), (3, -6.0), (4, 1.0)]
            } else if i + 1 == n {
                [(n - 1, 25.0), (n - 2, -48.0), (n - 3, 36.0), (n - 4, -16.0), (n - 5, 3.0)]
            } else {
                [(n - 1, 3.0), (n - 2, 10.0), (n - 3, -18.0), (n - 4, 6.0), (n - 5, -1.0)]
            };
            let mut d = CVec::zeros(self.dim());
            for (j, c) in stencil {
                if c != 0.0 {
                    d += vals.row(j).transpose() * C64::new(c * w, 0.0);
                }
            }
            let row = &k * d + self.potential.eval(grid.point(i)) * vals.row(i).transpose();
            out.row_mut(i).tr_copy_from(&row);
        }
        GridFunction::new(grid, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::grid::Grid;
    use crate::numkit::linalg::{sigma1, to_dyn2};

    fn free(m: f64) -> DiracOperator {
        DiracOperator::spinor(MatrixField::constant(to_dyn2(&sigma1()) * C64::new(m, 0.0))).unwrap()
    }

    /// e^{κx}(1, (κ+m)/λ) solves the free equation at λ with κ² = m² − λ².
    fn plane(m: f64, lam: f64, x: f64) -> CVec {
        let kap = (m * m - lam * lam).sqrt();
        let e = (kap * x).exp();
        CVec::from_vec(alloc::vec![C64::new(e, 0.0), C64::new(e * (kap + m) / lam, 0.0)])
    }

    #[test]
    fn rejects_bad_velocities() {
        let p = MatrixField::constant(CMat::zeros(2, 2));
        assert!(DiracOperator::new(alloc::vec![0.0], p.clone()).is_err());
        assert!(DiracOperator::new(alloc::vec![1.0, 1.0], p).is_err());
    }

    #[test]
    fn apply_on_closed_form_eigenspinor() {
        let (m, lam) = (0.5, 0.3);
        let op = free(m);
        let g = Grid::with_spacing(-5.0, 5.0, 0.005).unwrap();
        let f = GridFunction::from_fn(g, 2, |x| plane(m, lam, x)).unwrap();
        let hf = op.apply(&f).unwrap();
        let mut err: f64 = 0.0;
        for i in 0..g.n_points() {
            err = err.max((hf.at(i) - f.at(i) * C64::new(lam, 0.0)).norm());
        }
        assert!(err <= 1e-6, "{err}");
    }

    #[test]
    fn constant_spinor_without_potential() {
        let op = DiracOperator::spinor(MatrixField::constant(CMat::zeros(2, 2))).unwrap();
        let g = Grid::new(0.0, 1.0, 101).unwrap();
        let f = GridFunction::from_fn(g, 2, |_| CVec::from_vec(alloc::vec![C64::new(1.0, 2.0), C64::new(-3.0, 0.0)])).unwrap();
        assert!(op.apply(&f).unwrap().sup_norm_range(0, 101) < 1e-12);
        let coarse = GridFunction::zeros(Grid::new(0.0, 1.0, 10).unwrap(), 2);
        assert!(matches!(op.apply(&coarse), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn field_validation() {
        let good = MatrixField::constant(to_dyn2(&sigma1()));
        assert!(good.validate(&[-1.0, 0.0, 2.0]).is_ok());
        let bad = MatrixField::new(2, |x| CMat::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(x, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]));
        assert!(matches!(bad.validate(&[1.0]), Err(Error::NotHermitian { row: 0, col: 1, .. })));
    }
}
