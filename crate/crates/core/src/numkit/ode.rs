//! Adaptive Dormand–Prince 5(4) integration of linear systems Y′ = M(x) Y,
//! where Y is a complex n×k matrix (k independent solutions at once).

#[allow(unused_imports)]
use num_traits::Float;
use super::linalg::CMat;
use crate::{Error, Result, C64};
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Local error bound per step, relative to each solution column's size.
    pub tol: f64,
    pub h_init: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn new(tol: f64) -> Self {
        OdeOptions { tol, h_init: 1e-3, max_steps: 5_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub xs: Vec<f64>,
    pub ys: Vec<CMat>,
    pub steps: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn lin(terms: &[(f64, &CMat)], base: &CMat, h: f64) -> CMat {
    let mut out = base.clone();
    for (c, k) in terms {
        if *c != 0.0 {
            out += *k * C64::new(c * h, 0.0);
        }
    }
    out
}

fn error_norm(err: &CMat, y0: &CMat, y1: &CMat, tol: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..err.ncols() {
        let mut colmax: f64 = 0.0;
        for i in 0..err.nrows() {
            colmax = colmax.max(y0[(i, j)].norm()).max(y1[(i, j)].norm());
        }
        let floor = colmax.max(f64::MIN_POSITIVE);
        for i in 0..err.nrows() {
            let e = err[(i, j)].norm() / (tol * floor);
            if !e.is_finite() || !y1[(i, j)].norm().is_finite() {
                return f64::INFINITY;
            }
            worst = worst.max(e);
        }
    }
    worst
}

/// Integrates from `xa` to `xb` (either direction); `h` carries the step size
/// across calls. Returns Y(xb) and the number of accepted steps.
pub fn integrate_segment<F: Fn(f64) -> CMat>(
    coeff: &F,
    y: &CMat,
    xa: f64,
    xb: f64,
    opts: &OdeOptions,
    h: &mut f64,
) -> Result<(CMat, usize)> {
    let dir = if xb >= xa { 1.0 } else { -1.0 };
    let span = (xb - xa).abs();
    if span == 0.0 {
        return Ok((y.clone(), 0));
    }
    let mut x = xa;
    let mut y = y.clone();
    let mut hh = h.abs().min(span).max(f64::EPSILON * (1.0 + xa.abs()));
    let mut k1 = coeff(x) * &y;
    let mut steps = 0;
    let mut total = 0;
    loop {
        let remaining = (xb - x) * dir;
        if remaining <= 0.0 {
            break;
        }
        let last = hh >= remaining;
        let step = if last { remaining } else { hh };
        let hs = step * dir;
        let k2 = coeff(x + C2 * hs) * lin(&[(A21, &k1)], &y, hs);
        let k3 = coeff(x + C3 * hs) * lin(&[(A31, &k1), (A32, &k2)], &y, hs);
        let k4 = coeff(x + C4 * hs) * lin(&[(A41, &k1), (A42, &k2), (A43, &k3)], &y, hs);
        let k5 = coeff(x + C5 * hs) * lin(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], &y, hs);
        let k6 = coeff(x + hs) * lin(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], &y, hs);
        let y_new = lin(&[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], &y, hs);
        let x_new = if last { xb } else { x + hs };
        let k7 = coeff(x_new) * &y_new;
        let zero = CMat::zeros(y.nrows(), y.ncols());
        let err = lin(&[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)], &zero, hs);
        let en = error_norm(&err, &y, &y_new, opts.tol);
        total += 1;
        if total > opts.max_steps {
            return Err(Error::Convergence(alloc::format!("ODE step budget exhausted at x = {x}")));
        }
        if !en.is_finite() {
            hh *= 0.2;
        } else if en <= 1.0 {
            x = x_new;
            y = y_new;
            k1 = k7;
            steps += 1;
            let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
            if !last {
                hh = step * fac;
            } else {
                hh = hh.max(step * fac);
            }
        } else {
            hh = step * (0.9 * en.powf(-0.2)).clamp(0.1, 1.0);
        }
        if hh < 16.0 * f64::EPSILON * (1.0 + x.abs()) {
            return Err(Error::StepUnderflow { x });
        }
    }
    *h = hh;
    Ok((y, steps))
}

/// Solves Y′ = M(x)Y from x0 to x1 and samples the solution at `samples`,
/// which must be monotone in the direction of integration and lie in
/// [x0, x1]. With no samples the endpoint value is returned.
pub fn integrate_linear_ode<F: Fn(f64) -> CMat>(
    coeff: F,
    y0: &CMat,
    x0: f64,
    x1: f64,
    tol: f64,
    samples: &[f64],
) -> Result<OdeSolution> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::InvalidParameter(alloc::format!("tolerance {tol} outside (0, 1e-3]")));
    }
    let opts = OdeOptions::new(tol);
    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let mut targets: Vec<f64> = samples.to_vec();
    if targets.is_empty() {
        targets.push(x1);
    }
    let lo = x0.min(x1);
    let hi = x0.max(x1);
    let mut prev = x0;
    for &t in &targets {
        if t < lo || t > hi || (t - prev) * dir < 0.0 {
            return Err(Error::InvalidParameter(alloc::format!("sample point {t} out of order or outside [{lo}, {hi}]")));
        }
        prev = t;
    }
    let mut h = opts.h_init;
    let mut x = x0;
    let mut y = y0.clone();
    let mut out = OdeSolution { xs: Vec::new(), ys: Vec::new(), steps: 0 };
    for &t in &targets {
        let (yn, s) = integrate_segment(&coeff, &y, x, t, &opts, &mut h)?;
        out.steps += s;
        y = yn;
        x = t;
        out.xs.push(t);
        out.ys.push(y.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cvec2(a: f64, b: f64) -> CMat {
        CMat::from_column_slice(2, 1, &[C64::new(a, 0.0), C64::new(b, 0.0)])
    }

    #[test]
    fn rotation_generator() {
        let m = CMat::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 0.0)]);
        let sol = integrate_linear_ode(|_| m.clone(), &cvec2(1.0, 0.0), 0.0, core::f64::consts::FRAC_PI_2, 1e-12, &[]).unwrap();
        let y = &sol.ys[0];
        // y = (cos, −sin)
        assert!((y[(0, 0)].re - 0.0).abs() < 1e-8);
        assert!((y[(1, 0)].re + 1.0).abs() < 1e-8);
    }

    #[test]
    fn zero_generator_is_constant() {
        let sol = integrate_linear_ode(|_| CMat::zeros(2, 2), &cvec2(0.3, -2.0), 1.0, -4.0, 1e-10, &[0.0, -4.0]).unwrap();
        for y in &sol.ys {
            assert_eq!(y, &cvec2(0.3, -2.0));
        }
    }

    #[test]
    fn forward_then_backward() {
        let coeff = |x: f64| {
            CMat::from_row_slice(2, 2, &[C64::new(0.1 * x, 0.0), C64::new(1.0, 0.5), C64::new(-1.0, 0.0), C64::new(0.0, -x.sin())])
        };
        let tol = 1e-10;
        let y0 = cvec2(0.7, -0.2);
        let f = integrate_linear_ode(coeff, &y0, -2.0, 3.0, tol, &[]).unwrap();
        let b = integrate_linear_ode(coeff, &f.ys[0], 3.0, -2.0, tol, &[]).unwrap();
        assert!((&b.ys[0] - &y0).norm() <= 10.0 * tol);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(integrate_linear_ode(|_| CMat::zeros(1, 1), &CMat::zeros(1, 1), 0.0, 1.0, 1e-8, &[0.5, 0.2]).is_err());
        assert!(integrate_linear_ode(|_| CMat::zeros(1, 1), &CMat::zeros(1, 1), 0.0, 1.0, 1e-2, &[]).is_err());
    }

    #[test]
    fn blow_up_reports_underflow() {
        // y' = y²-like growth emulated by a singular coefficient 1/(1−x)²
        let r = integrate_linear_ode(|x| CMat::from_element(1, 1, C64::new(1.0 / ((1.0 - x) * (1.0 - x)), 0.0)), &cvec2(1.0, 0.0).rows(0, 1).into_owned(), 0.0, 2.0, 1e-10, &[]);
        assert!(matches!(r, Err(Error::StepUnderflow { .. }) | Err(Error::Convergence(_))), "{r:?}");
    }
}
