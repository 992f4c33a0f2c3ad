#[allow(unused_imports)]
use num_traits::Float;
use super::shooting::ShootingOptions;
use super::DiracOperator;
use crate::numkit::eigen::general_eigen;
use crate::numkit::linalg::{CMat, CVec};
use crate::numkit::ode::{integrate_segment, OdeOptions};
use crate::{Error, Result, C64};
use alloc::vec::Vec;

/// Flux-normalized scattering amplitudes for waves incident from the left.
#[derive(Debug, Clone)]
pub struct ScatteringResult {
    pub energy: f64,
    /// r[(j, k)]: amplitude of left-moving channel j at x_left for incident channel k.
    pub reflection: CMat,
    /// t[(j, k)]: amplitude of right-moving channel j at x_right for incident channel k.
    pub transmission: CMat,
}

impl ScatteringResult {
    /// Reflection magnitude √Σⱼ|r_jk|² for incident channel k.
    pub fn reflection_magnitude(&self, k: usize) -> f64 {
        self.reflection.column(k).norm()
    }

    /// Σ|r|² + Σ|t|² − 1 for incident channel k.
    pub fn unitarity_defect(&self, k: usize) -> f64 {
        self.reflection.column(k).norm_squared() + self.transmission.column(k).norm_squared() - 1.0
    }
}

struct Modes {
    right_moving: Vec<CVec>,
    left_moving: Vec<CVec>,
    decay_left: Vec<CVec>,
    decay_right: Vec<CVec>,
}

fn classify(op: &DiracOperator, energy: f64, x: f64) -> Result<Modes> {
    let m = (op.generator(C64::new(energy, 0.0)))(x);
    let scale = m.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    let k = op.kinetic();
    let mut out = Modes { right_moving: Vec::new(), left_moving: Vec::new(), decay_left: Vec::new(), decay_right: Vec::new() };
    for (mu, v) in general_eigen(&m)? {
        if mu.re.abs() <= 1e-9 * scale {
            // conserved current J = i ψᴴKψ, positive for right movers
            let j = (v.dotc(&(&k * &v)) * C64::new(0.0, 1.0)).re;
            let v = &v / C64::new(j.abs().sqrt(), 0.0);
            if j > 0.0 {
                out.right_moving.push(v);
            } else {
                out.left_moving.push(v);
            }
        } else if mu.re > 0.0 {
            out.decay_left.push(v);
        } else {
            out.decay_right.push(v);
        }
    }
    Ok(out)
}

fn propagate_columns(op: &DiracOperator, energy: f64, cols: &[CVec], xa: f64, xb: f64, tol: f64) -> Result<Vec<CVec>> {
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let n = op.dim();
    let mut y = CMat::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        y.set_column(j, c);
    }
    let gen = op.generator(C64::new(energy, 0.0));
    let mut h = 1e-3;
    let (yb, _) = integrate_segment(&gen, &y, xa, xb, &OdeOptions::new(tol), &mut h)?;
    Ok((0..cols.len()).map(|j| yb.column(j).into_owned()).collect())
}

/// Scattering amplitudes at `energy` for incidence from the left, by
/// integrating the admissible asymptotic solutions of both sides to the
/// matching point and solving the linear matching conditions.
pub fn scatter_from_left(op: &DiracOperator, energy: f64, opts: &ShootingOptions) -> Result<ScatteringResult> {
    let left = classify(op, energy, opts.x_left)?;
    let right = classify(op, energy, opts.x_right)?;
    if left.right_moving.is_empty() || right.right_moving.is_empty() {
        return Err(Error::NoPropagatingChannel { energy });
    }
    let n = op.dim();
    let tol = opts.ode_tol;
    let inc = propagate_columns(op, energy, &left.right_moving, opts.x_left, opts.x_match, tol)?;
    let refl = propagate_columns(op, energy, &left.left_moving, opts.x_left, opts.x_match, tol)?;
    let dl = propagate_columns(op, energy, &left.decay_left, opts.x_left, opts.x_match, tol)?;
    let trans = propagate_columns(op, energy, &right.right_moving, opts.x_right, opts.x_match, tol)?;
    let dr = propagate_columns(op, energy, &right.decay_right, opts.x_right, opts.x_match, tol)?;
    let unknowns = refl.len() + dl.len() + trans.len() + dr.len();
    if unknowns != n {
        return Err(Error::DimensionMismatch { expected: n, got: unknowns });
    }
    // Σ r ρ + Σ d δ − Σ t τ − Σ e ε = −incident
    let mut a = CMat::zeros(n, n);
    let mut col = 0;
    for c in refl.iter().chain(dl.iter()) {
        a.set_column(col, c);
        col += 1;
    }
    for c in trans.iter().chain(dr.iter()) {
        a.set_column(col, &(-c));
        col += 1;
    }
    let lu = a.full_piv_lu();
    let nin = inc.len();
    let mut reflection = CMat::zeros(refl.len(), nin);
    let mut transmission = CMat::zeros(trans.len(), nin);
    for (k, c) in inc.iter().enumerate() {
        let sol = lu.solve(&(-c)).ok_or(Error::NoSolution(alloc::string::String::from("singular matching system")))?;
        for j in 0..refl.len() {
            reflection[(j, k)] = sol[j];
        }
        for j in 0..trans.len() {
            transmission[(j, k)] = sol[refl.len() + dl.len() + j];
        }
    }
    Ok(ScatteringResult { energy, reflection, transmission })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::MatrixField;
    use crate::numkit::linalg::{sigma1, sigma3, to_dyn2};

    #[test]
    fn constant_potential_is_transparent() {
        let v = to_dyn2(&sigma1()) * C64::new(0.5, 0.0) + to_dyn2(&sigma3()) * C64::new(0.1, 0.0);
        let op = DiracOperator::spinor(MatrixField::constant(v)).unwrap();
        for e in [0.7, -0.9, 2.0] {
            let s = scatter_from_left(&op, e, &ShootingOptions::symmetric(20.0)).unwrap();
            assert!(s.reflection_magnitude(0) <= 1e-10);
            assert!(s.unitarity_defect(0).abs() <= 1e-9);
        }
        assert!(matches!(scatter_from_left(&op, 0.2, &ShootingOptions::symmetric(20.0)), Err(Error::NoPropagatingChannel { .. })));
    }

    #[test]
    fn step_potential_reflects_and_conserves_flux() {
        let op = DiracOperator::spinor(MatrixField::new(2, |x: f64| to_dyn2(&sigma1()) * C64::new(0.5 + 0.3 * x.tanh(), 0.0))).unwrap();
        let s = scatter_from_left(&op, 1.0, &ShootingOptions::symmetric(25.0)).unwrap();
        assert!(s.reflection_magnitude(0) > 1e-4);
        assert!(s.unitarity_defect(0).abs() < 1e-8);
    }
}
