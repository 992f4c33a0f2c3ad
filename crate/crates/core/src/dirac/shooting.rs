#[allow(unused_imports)]
use num_traits::Float;
use super::DiracOperator;
use crate::numkit::eigen::general_eigen;
use crate::numkit::linalg::CMat;
use crate::numkit::ode::{integrate_segment, OdeOptions};
use crate::numkit::roots::brent_min;
use crate::{Error, Result, C64};
use alloc::format;
use alloc::vec::Vec;

/// Integration box and tolerances for shooting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    pub x_left: f64,
    pub x_right: f64,
    pub x_match: f64,
    pub ode_tol: f64,
    /// Length of the segments between re-orthonormalizations.
    pub segment: f64,
}

impl ShootingOptions {
    pub fn symmetric(half_width: f64) -> Self {
        ShootingOptions { x_left: -half_width, x_right: half_width, x_match: 0.0, ode_tol: 1e-12, segment: 0.5 }
    }
}

/// Columns spanning solutions of K y′ = (E − V(x∞)) y that decay toward the
/// respective infinity: Re μ > 0 on the left, Re μ < 0 on the right.
pub(crate) fn decaying_modes(op: &DiracOperator, energy: f64, x: f64, left: bool) -> Result<CMat> {
    let m = (op.generator(C64::new(energy, 0.0)))(x);
    let scale = m.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    let pairs = general_eigen(&m)?;
    let cols: Vec<_> = pairs
        .into_iter()
        .filter(|(mu, _)| if left { mu.re > 1e-9 * scale } else { mu.re < -1e-9 * scale })
        .map(|(_, v)| v)
        .collect();
    let mut out = CMat::zeros(op.dim(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    Ok(out)
}

pub(crate) fn orthonormalize(y: &CMat) -> CMat {
    if y.ncols() == 0 {
        return y.clone();
    }
    y.clone().qr().q()
}

/// Propagates the column span of `y` from `xa` to `xb`, re-orthonormalizing
/// after every segment.
pub(crate) fn propagate_span(op: &DiracOperator, energy: C64, y: &CMat, xa: f64, xb: f64, opts: &ShootingOptions) -> Result<CMat> {
    let gen = op.generator(energy);
    let ode = OdeOptions::new(opts.ode_tol);
    let mut h = 1e-3;
    let mut x = xa;
    let mut cur = orthonormalize(y);
    let dir = if xb >= xa { 1.0 } else { -1.0 };
    while (xb - x) * dir > 0.0 {
        let next = if (xb - x).abs() <= opts.segment { xb } else { x + dir * opts.segment };
        let (yn, _) = integrate_segment(&gen, &cur, x, next, &ode, &mut h)?;
        cur = orthonormalize(&yn);
        x = next;
    }
    Ok(cur)
}

/// Smallest singular value of [Q_L, Q_R] at the matching point, where Q_L
/// (Q_R) spans the solutions decaying to the left (right). It vanishes
/// exactly at eigenvalues, including those embedded in a continuum.
pub fn matching_defect(op: &DiracOperator, energy: f64, opts: &ShootingOptions) -> Result<f64> {
    let yl = decaying_modes(op, energy, opts.x_left, true)?;
    let yr = decaying_modes(op, energy, opts.x_right, false)?;
    if yl.ncols() == 0 || yr.ncols() == 0 {
        return Err(Error::NoSolution(format!("no decaying solution at E = {energy}")));
    }
    if yl.ncols() + yr.ncols() > op.dim() {
        return Err(Error::InvalidParameter(format!("overdetermined matching at E = {energy}")));
    }
    let e = C64::new(energy, 0.0);
    let ql = propagate_span(op, e, &yl, opts.x_left, opts.x_match, opts)?;
    let qr = propagate_span(op, e, &yr, opts.x_right, opts.x_match, opts)?;
    let mut b = CMat::zeros(op.dim(), ql.ncols() + qr.ncols());
    for j in 0..ql.ncols() {
        b.set_column(j, &ql.column(j));
    }
    for j in 0..qr.ncols() {
        b.set_column(ql.ncols() + j, &qr.column(j));
    }
    let sv = b.singular_values();
    Ok(sv.iter().fold(f64::INFINITY, |m, &s| m.min(s)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedLevel {
    pub energy: f64,
    pub defect: f64,
}

/// Refines an eigenvalue near `guess` by minimizing the squared matching
/// defect (smooth at a simple eigenvalue) over [guess − half_width,
/// guess + half_width]. Fails when the minimum defect is not small, i.e.
/// there is no eigenvalue in the bracket.
pub fn refine_level(op: &DiracOperator, guess: f64, half_width: f64, opts: &ShootingOptions) -> Result<RefinedLevel> {
    let mut failure = None;
    let (e, d2) = brent_min(
        |en| match matching_defect(op, en, opts) {
            Ok(v) => v * v,
            Err(err) => {
                failure = Some(err);
                f64::INFINITY
            }
        },
        guess - half_width,
        guess + half_width,
        1e-13 * (1.0 + guess.abs()),
    );
    if let Some(err) = failure {
        return Err(err);
    }
    let d = d2.sqrt();
    if !(d < 1e-6) {
        return Err(Error::NoSolution(format!("matching defect {d:e} at E = {e}: no eigenvalue near {guess}")));
    }
    Ok(RefinedLevel { energy: e, defect: d })
}
