#[allow(unused_imports)]
use num_traits::Float;
use super::DiracOperator;
use crate::numkit::banded::BandedHermitian;
use crate::numkit::grid::{Grid, GridFunction};
use crate::numkit::linalg::{CMat, CVec};
use crate::{Error, Result, C64};
use alloc::vec::Vec;

/// Coarsest spacing accepted by [`discretize`].
pub const MAX_SPACING: f64 = 0.05;

/// Mass fraction outside the central half below which a level counts as bound.
pub const BOUND_MASS: f64 = 1e-4;

fn sym(v: &CMat, p: usize, q: usize) -> C64 {
    (v[(p, q)] + v[(q, p)].conj()) * 0.5
}

/// Which spinor component each Dirichlet wall pins, per channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walls {
    /// true: the left wall pins the upper component (u(x₀) = 0) instead of the lower one.
    pub left_pins_upper: alloc::vec::Vec<bool>,
    /// true: the right wall pins the lower component instead of the upper one.
    pub right_pins_lower: alloc::vec::Vec<bool>,
}

impl Walls {
    pub fn plain(channels: usize) -> Self {
        Walls { left_pins_upper: alloc::vec![false; channels], right_pins_lower: alloc::vec![false; channels] }
    }
}

/// Smallest singular value of the pinned rows of the solutions decaying into
/// the bulk from a wall; zero means the wall supports an edge state at `energy`.
fn wall_score(op: &DiracOperator, x: f64, into_right: bool, pinned: &[usize], energy: f64) -> f64 {
    let Ok(d) = super::shooting::decaying_modes(op, energy, x, !into_right) else {
        return 0.0;
    };
    if d.ncols() != pinned.len() {
        return 0.0;
    }
    let rows = CMat::from_fn(pinned.len(), d.ncols(), |i, j| d[(pinned[i], j)]);
    rows.singular_values().iter().fold(f64::INFINITY, |m, &s| m.min(s))
}

/// Wall assignment avoiding edge states at `energy` (mid-gap reference).
pub fn choose_walls(op: &DiracOperator, grid: &Grid, energy: f64) -> Walls {
    let ch = op.velocities().len();
    let mut walls = Walls::plain(ch);
    for (left, x) in [(true, grid.x_min()), (false, grid.x_max())] {
        let mut best = (f64::NEG_INFINITY, 0usize);
        for mask in 0..(1usize << ch) {
            let pinned: Vec<usize> = (0..ch)
                .map(|c| {
                    let flip = mask >> c & 1 == 1;
                    // left: plain pins lower; right: plain pins upper
                    if left == flip { 2 * c } else { 2 * c + 1 }
                })
                .collect();
            let score = wall_score(op, x, left, &pinned, energy);
            if score > best.0 + 1e-12 {
                best = (score, mask);
            }
        }
        for c in 0..ch {
            let flip = best.1 >> c & 1 == 1;
            if left {
                walls.left_pins_upper[c] = flip;
            } else {
                walls.right_pins_lower[c] = flip;
            }
        }
    }
    walls
}

/// Staggered Hermitian discretization with Dirichlet walls, the walls chosen
/// by [`choose_walls`] at E = 0.
pub fn discretize(op: &DiracOperator, grid: &Grid) -> Result<BandedHermitian> {
    let walls = choose_walls(op, grid, 0.0);
    discretize_with(op, grid, &walls)
}

/// Staggered Hermitian discretization with the given walls.
///
/// Unknown `dim·i + c` is component c at x_i for even c and at x_i + h/2 for
/// odd c. Each block v(−iσ₂)∂ₓ becomes the forward/backward difference pair
/// −v(w_i − w_{i−1})/h, v(u_{i+1} − u_i)/h; couplings between integer and
/// half points are averaged. A wall pinning the other component drops the
/// first upper (or last lower) unknown: it is decoupled and parked at a
/// large diagonal value far outside the spectrum of interest.
pub fn discretize_with(op: &DiracOperator, grid: &Grid, walls: &Walls) -> Result<BandedHermitian> {
    let h = grid.h();
    if h > MAX_SPACING {
        return Err(Error::GridTooCoarse { h, limit: MAX_SPACING });
    }
    let dim = op.dim();
    let n = grid.n_points();
    let kd = (2 * dim - 3).max(dim - 1);
    let mut a = BandedHermitian::zeros(n * dim, kd);
    let idx = |i: usize, c: usize| dim * i + c;
    let parked = |i: usize, c: usize| {
        let ch = c / 2;
        (c % 2 == 0 && i == 0 && walls.left_pins_upper[ch]) || (c % 2 == 1 && i + 1 == n && walls.right_pins_lower[ch])
    };
    let add = |a: &mut BandedHermitian, i: usize, p: usize, j: usize, q: usize, v: C64| -> Result<()> {
        if parked(i, p) || parked(j, q) {
            return Ok(());
        }
        a.add(idx(i, p), idx(j, q), v)
    };
    for (c, &v) in op.velocities().iter().enumerate() {
        let (up, low) = (2 * c, 2 * c + 1);
        for i in 0..n {
            add(&mut a, i, up, i, low, C64::new(-v / h, 0.0))?;
            if i > 0 {
                add(&mut a, i, up, i - 1, low, C64::new(v / h, 0.0))?;
            }
        }
    }
    let pot = op.potential();
    for i in 0..n {
        let x = grid.point(i);
        let vi = pot.eval(x);
        let vh = pot.eval(x + 0.5 * h);
        for p in 0..dim {
            for q in p..dim {
                let (pe, qe) = (p % 2 == 0, q % 2 == 0);
                if pe == qe {
                    let m = if pe { &vi } else { &vh };
                    add(&mut a, i, p, i, q, sym(m, p, q))?;
                }
            }
        }
        for p in (0..dim).step_by(2) {
            for q in (1..dim).step_by(2) {
                let s = sym(&vi, p, q) * 0.5;
                add(&mut a, i, p, i, q, s)?;
                if i > 0 {
                    add(&mut a, i, p, i - 1, q, s)?;
                }
            }
        }
    }
    let vmax = op.velocities().iter().fold(0.0f64, |m, &v| m.max(v));
    let park = 1e4 * (1.0 + vmax / h);
    for i in [0, n - 1] {
        for c in 0..dim {
            if parked(i, c) {
                a.add(idx(i, c), idx(i, c), C64::new(park, 0.0))?;
            }
        }
    }
    Ok(a)
}

/// Eigenvector of the staggered matrix as a grid function (half-point
/// components attached to their left integer point).
pub fn eigenvector_function(vec: &CVec, grid: &Grid, dim: usize) -> Result<GridFunction> {
    let n = grid.n_points();
    if vec.len() != n * dim {
        return Err(Error::DimensionMismatch { expected: n * dim, got: vec.len() });
    }
    let h = grid.h();
    let scale = C64::new(1.0 / h.sqrt(), 0.0);
    GridFunction::new(*grid, CMat::from_fn(n, dim, |i, c| vec[dim * i + c] * scale))
}

/// Fraction of |v|² located at |x − centre| > (half width)/2.
pub fn outer_mass(vec: &CVec, grid: &Grid, dim: usize) -> f64 {
    let centre = 0.5 * (grid.x_min() + grid.x_max());
    let quarter = 0.25 * (grid.x_max() - grid.x_min());
    let h = grid.h();
    let mut outer = 0.0;
    let mut total = 0.0;
    for i in 0..grid.n_points() {
        for c in 0..dim {
            let x = grid.point(i) + if c % 2 == 1 { 0.5 * h } else { 0.0 };
            let w = vec[dim * i + c].norm_sqr();
            total += w;
            if (x - centre).abs() > quarter {
                outer += w;
            }
        }
    }
    if total > 0.0 {
        outer / total
    } else {
        1.0
    }
}

/// One eigenvalue of the discretized operator with its localization data.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLevel {
    pub energy: f64,
    pub outer_mass: f64,
    pub bound: bool,
}

/// Eigenvalues in [lo, hi) of the discretized operator, classified as bound
/// (outer mass below 1e−4) or continuum.
pub fn levels_in(op: &DiracOperator, grid: &Grid, lo: f64, hi: f64, tol: f64) -> Result<Vec<DiscreteLevel>> {
    let a = discretize(op, grid)?;
    levels_of(&a, grid, op.dim(), lo, hi, tol)
}

pub(crate) fn levels_of(a: &BandedHermitian, grid: &Grid, dim: usize, lo: f64, hi: f64, tol: f64) -> Result<Vec<DiscreteLevel>> {
    let mut out = Vec::new();
    for e in a.eigenvalues_in(lo, hi, tol) {
        let v = a.eigenvector(e)?;
        let m = outer_mass(&v, grid, dim);
        out.push(DiscreteLevel { energy: e, outer_mass: m, bound: m < BOUND_MASS });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::MatrixField;
    use crate::numkit::linalg::{sigma1, to_dyn2};

    fn free(m: f64) -> DiracOperator {
        DiracOperator::spinor(MatrixField::constant(to_dyn2(&sigma1()) * C64::new(m, 0.0))).unwrap()
    }

    #[test]
    fn exactly_hermitian() {
        let op = DiracOperator::new(
            alloc::vec![1.5, 0.5],
            MatrixField::new(4, |x| {
                CMat::from_fn(4, 4, |i, j| {
                    let base = C64::new((x * (i + 2 * j) as f64).sin(), (x * (i as f64 - j as f64)).cos());
                    let t = C64::new((x * (j + 2 * i) as f64).sin(), (x * (j as f64 - i as f64)).cos());
                    if i == j {
                        C64::new(base.re, 0.0)
                    } else {
                        (base + t.conj()) * 0.5
                    }
                })
            }),
        )
        .unwrap();
        let g = Grid::new(-1.0, 1.0, 41).unwrap();
        let d = discretize(&op, &g).unwrap().to_dense();
        assert_eq!(d, d.adjoint());
        assert!(discretize(&op, &Grid::new(-1.0, 1.0, 20).unwrap()).is_err());
    }

    #[test]
    fn free_band_edge_no_doublers() {
        let g = Grid::with_spacing(-40.0, 40.0, 0.01).unwrap();
        let a = discretize(&free(0.5), &g).unwrap();
        assert_eq!(a.count_below(0.5) - a.count_below(-0.5), 0);
        let ev = a.eigenvalues_in(0.0, 0.51, 1e-12);
        // hard-wall quantization: k cos kL + m sin kL = 0 with L = 80
        let (m, l) = (0.5f64, 80.0f64);
        let k = crate::numkit::roots::bisect(|k| k * (k * l).cos() + m * (k * l).sin(), 0.5 * core::f64::consts::PI / l, 1.5 * core::f64::consts::PI / l, 1e-15).unwrap();
        let e1 = (m * m + k * k).sqrt();
        assert!(ev[0] >= 0.5 && ev[0] <= 0.5 + 2e-3, "{}", ev[0]);
        assert!((ev[0] - e1).abs() < 2e-5, "{} vs {}", ev[0], e1);
        // the plain walls host an edge mode at zero energy
        let plain = discretize_with(&free(0.5), &g, &Walls::plain(1)).unwrap();
        assert_eq!(plain.count_below(0.1) - plain.count_below(-0.1), 2);
    }
}
