//! H = −iσ₂∂ₓ + A_κσ₁ + mσ₃ with A_κ = U₀(κ−1)tanh(U₀x) and m = U₀√(2κ−1),
//! transformed at ε₁ = −m and ε₂ = 0 into the chiral H̃ = −iσ₂∂ₓ + A_{κ+1}σ₁.

use crate::composite::CompositeOperator;
use crate::darboux::{build_transform, intertwine, SeedPair, TransformData};
use crate::dirac::{scatter_from_left, DiracOperator, MatrixField, ShootingOptions, SpinorFn};
use crate::numkit::grid::{trapezoid, Grid, GridFunction};
use crate::numkit::linalg::{re, sigma1, sigma3, to_dyn2, CMat, CVec};
use crate::numkit::ode::integrate_linear_ode;
use crate::numkit::eigen::general_eigen;
use crate::numkit::special::{gamma_complex, gauss_2f1, jacobi_polynomial, jacobi_polynomial_derivative};
use crate::spectrum::{band_thresholds, BandStructure, SpectralMap};
use crate::{Error, Result, C64};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoschlTellerModel {
    u0: f64,
    kappa: f64,
}

fn cv(a: f64, b: f64) -> CVec {
    CVec::from_vec(vec![re(a), re(b)])
}

impl PoschlTellerModel {
    pub fn new(u0: f64, kappa: f64) -> Result<Self> {
        if !(u0 > 0.0) {
            return Err(Error::InvalidParameter(format!("U₀ = {u0} must be positive")));
        }
        if !(kappa > 1.0) || !kappa.is_finite() {
            return Err(Error::InvalidParameter(format!("κ = {kappa} must exceed 1")));
        }
        Ok(PoschlTellerModel { u0, kappa })
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// m = U₀√(2κ−1).
    pub fn m(&self) -> f64 {
        self.u0 * (2.0 * self.kappa - 1.0).sqrt()
    }

    /// A_k(x) = U₀(k−1)tanh(U₀x).
    pub fn a(&self, k: f64, x: f64) -> f64 {
        self.u0 * (k - 1.0) * (self.u0 * x).tanh()
    }

    fn a_prime(&self, k: f64, x: f64) -> f64 {
        let s = 1.0 / (self.u0 * x).cosh();
        self.u0 * self.u0 * (k - 1.0) * s * s
    }

    pub fn is_integer_kappa(&self) -> bool {
        (self.kappa - self.kappa.round()).abs() < 1e-12
    }

    /// Largest admissible bound-state index (ñ_max).
    pub fn n_max(&self) -> Option<usize> {
        let top = if self.is_integer_kappa() { self.kappa.round() - 2.0 } else { (self.kappa - 1.0).floor() };
        if top < 0.0 {
            None
        } else {
            Some(top as usize)
        }
    }

    pub fn n_plus(&self) -> Vec<usize> {
        self.n_max().map(|n| (0..=n).collect()).unwrap_or_default()
    }

    pub fn n_minus(&self) -> Vec<usize> {
        self.n_max().map(|n| (1..=n).collect()).unwrap_or_default()
    }

    /// Continuum threshold U₀κ.
    pub fn threshold(&self) -> f64 {
        self.u0 * self.kappa
    }

    pub fn h(&self) -> DiracOperator {
        let me = *self;
        let me2 = *self;
        let (s1, s3) = (to_dyn2(&sigma1()), to_dyn2(&sigma3()));
        let (s1b, s3b) = (s1.clone(), s3.clone());
        let s1c = s1.clone();
        let m = self.m();
        let lim = |sign: f64| &s1b * re(sign * self.u0 * (self.kappa - 1.0)) + &s3b * re(m);
        let field = MatrixField::new(2, move |x| &s1 * re(me.a(me.kappa, x)) + &s3 * re(m))
            .with_derivative(move |x| &s1c * re(me2.a_prime(me2.kappa, x)))
            .with_asymptotes(lim(-1.0), lim(1.0));
        DiracOperator::spinor(field).expect("2×2 field")
    }

    /// The partner expected from shape invariance, A_{κ+1}σ₁.
    pub fn htilde_expected(&self, x: f64) -> CMat {
        to_dyn2(&sigma1()) * re(self.a(self.kappa + 1.0, x))
    }

    /// Seed columns of U: (0, c^{κ−1}) at −m and (c^κ, √(2κ−1)c^κ t) at 0, c = cosh U₀x.
    pub fn seeds(&self) -> SeedPair {
        let (h1, h2) = (self.h(), self.h());
        let (u0, k) = (self.u0, self.kappa);
        let m = self.m();
        let q = (2.0 * k - 1.0).sqrt();
        let u1: SpinorFn = Arc::new(move |x: f64| {
            let c = (u0 * x).cosh();
            h1.solution_jet(x, re(-m), cv(0.0, c.powf(k - 1.0))).expect("analytic potential")
        });
        let u2: SpinorFn = Arc::new(move |x: f64| {
            let (c, t) = ((u0 * x).cosh(), (u0 * x).tanh());
            let ck = c.powf(k);
            h2.solution_jet(x, re(0.0), cv(ck, q * ck * t)).expect("analytic potential")
        });
        SeedPair::new(-m, u1, 0.0, u2)
    }

    pub fn domain(&self) -> (f64, f64) {
        (-40.0 / self.u0, 40.0 / self.u0)
    }

    pub fn transform(&self) -> Result<TransformData> {
        build_transform(&self.h(), self.seeds(), self.domain())
    }

    pub fn composite(&self, alpha: f64) -> Result<CompositeOperator> {
        CompositeOperator::new(self.transform()?, alpha)
    }

    /// L coefficient C (L = d/dx + C): ((−A_{κ+1}, 0), (−m, −A_κ)).
    pub fn intertwiner_coefficient(&self, x: f64) -> CMat {
        let mut c = CMat::zeros(2, 2);
        c[(0, 0)] = re(-self.a(self.kappa + 1.0, x));
        c[(1, 0)] = re(-self.m());
        c[(1, 1)] = re(-self.a(self.kappa, x));
        c
    }

    /// λₙ^{(±)} = ±√(m² − U₀²n(n+2−2κ)).
    pub fn h_level(&self, n: usize, plus: bool) -> f64 {
        let nf = n as f64;
        let v = (self.m() * self.m() - self.u0 * self.u0 * nf * (nf + 2.0 - 2.0 * self.kappa)).sqrt();
        if plus {
            v
        } else {
            -v
        }
    }

    /// λ̃ₙ^{(±)} = ±U₀√((n+1)(2κ−n−1)).
    pub fn htilde_level(&self, n: usize, plus: bool) -> f64 {
        let nf = n as f64;
        let v = self.u0 * ((nf + 1.0) * (2.0 * self.kappa - nf - 1.0)).sqrt();
        if plus {
            v
        } else {
            -v
        }
    }

    /// Unnormalized ψₙ^{(±)} at x: upper sech^p Pₙ^{(p,p)}(tanh), p = κ−n−1,
    /// lower (u′ + A_κu)/(λ+m).
    pub fn h_state_value(&self, n: usize, plus: bool, x: f64) -> CVec {
        let p = self.kappa - n as f64 - 1.0;
        let (t, s) = ((self.u0 * x).tanh(), 1.0 / (self.u0 * x).cosh());
        let sp = s.powf(p);
        let pn = jacobi_polynomial(n, p, p, t);
        let dpn = jacobi_polynomial_derivative(n, p, p, t);
        let u = sp * pn;
        let du = self.u0 * sp * (-p * t * pn + (1.0 - t * t) * dpn);
        let lam = self.h_level(n, plus);
        cv(u, (du + self.a(self.kappa, x) * u) / (lam + self.m()))
    }

    /// Closed form of ψ̃ₙ^{(±)} = Lψₙ^{(±)} for the unnormalized `h_state_value`.
    pub fn htilde_state_closed(&self, n: usize, plus: bool, x: f64) -> CVec {
        let k = self.kappa;
        let nf = n as f64;
        let y = (self.u0 * x).tanh();
        let w = 1.0 - y * y;
        let pn = jacobi_polynomial(n, k - nf - 1.0, k - nf - 1.0, y);
        let pm = if n == 0 { 0.0 } else { jacobi_polynomial(n - 1, k - nf, k - nf, y) };
        let pref = w.powf((k - nf - 1.0) / 2.0);
        let up = self.u0 * (2.0 * k - nf - 1.0) * (-2.0 * y * pn + w * pm) / 2.0;
        let s = if plus { -1.0 } else { 1.0 };
        let low = s * self.u0 * ((nf + 1.0) * (2.0 * k - nf - 1.0)).sqrt() * pn;
        cv(pref * up, pref * low)
    }

    /// The non-normalizable n₋ = 0 solution at −m: (0, cosh^{κ−1}).
    pub fn excluded_minus_zero(&self, x: f64) -> CVec {
        cv(0.0, (self.u0 * x).cosh().powf(self.kappa - 1.0))
    }

    /// ψ̃_ø normalization constant √(U₀Γ(κ+½)/(Γ(κ)Γ(½))).
    pub fn zero_mode_constant(&self) -> f64 {
        let g = |z: f64| gamma_complex(re(z)).re;
        (self.u0 * g(self.kappa + 0.5) / (g(self.kappa) * g(0.5))).sqrt()
    }

    /// Energy of the scattering states with U₀ν = asymptotic momentum.
    pub fn scattering_energy(&self, nu: f64, plus: bool) -> f64 {
        let e = self.u0 * (self.kappa * self.kappa + nu * nu).sqrt();
        if plus {
            e
        } else {
            -e
        }
    }

    pub fn bands(&self) -> Result<BandStructure> {
        let mut levels = vec![];
        for n in self.n_plus() {
            levels.push(self.htilde_level(n, true));
        }
        for n in self.n_minus() {
            levels.push(self.htilde_level(n, false));
        }
        levels.push(-self.m());
        levels.push(0.0);
        levels.retain(|l| l.abs() < self.threshold());
        levels.sort_by(f64::total_cmp);
        BandStructure::new(-self.threshold(), self.threshold(), levels)
    }

    pub fn spectral_map(&self, alpha: f64) -> Result<SpectralMap> {
        SpectralMap::new(-self.m(), 0.0, alpha)
    }

    /// Closed-form 4×4 rotated potential at U₀ = 1 (rotation angle π/2).
    pub fn rotated_potential_unit(&self, alpha: f64, x: f64) -> CMat {
        let k = self.kappa;
        let r = (2.0 * k - 1.0).sqrt();
        let t = x.tanh();
        let q = 2.0 * k - 1.0;
        #[rustfmt::skip]
        let e = [
            r * (2.0 * alpha + 1.0) / 2.0, -(alpha + 1.0) * t / 2.0, -r / 2.0, -q * (alpha + 1.0) * t / 2.0,
            -(alpha + 1.0) * t / 2.0, -r / 2.0, q * (alpha - 1.0) * t / 2.0, r / 2.0,
            -r / 2.0, q * (alpha - 1.0) * t / 2.0, r * (1.0 - 2.0 * alpha) / 2.0, (alpha - 1.0) * t / 2.0,
            -q * (alpha + 1.0) * t / 2.0, r / 2.0, (alpha - 1.0) * t / 2.0, -r / 2.0,
        ];
        CMat::from_row_slice(4, 4, &e.map(re))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// Bound state of H.
    H,
    /// Lψ of a bound state of H.
    Mapped,
    /// ψ̃₀⁻, missing state at ε₁ = −m.
    Missing,
    /// ψ̃_ø, missing state at ε₂ = 0.
    ZeroMode,
}

#[derive(Clone)]
pub struct BoundState {
    pub kind: StateKind,
    pub n: Option<usize>,
    pub plus: bool,
    pub energy: f64,
    /// Factor applied to the unnormalized closed form.
    pub normalization: f64,
    pub spinor: SpinorFn,
}

impl core::fmt::Debug for BoundState {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("BoundState")
            .field("kind", &self.kind)
            .field("n", &self.n)
            .field("plus", &self.plus)
            .field("energy", &self.energy)
            .finish()
    }
}

impl BoundState {
    pub fn label(&self) -> String {
        let s = if self.plus { '+' } else { '-' };
        match (self.kind, self.n) {
            (StateKind::H, Some(n)) => format!("psi{n}{s}"),
            (StateKind::Mapped, Some(n)) => format!("tpsi{n}{s}"),
            (StateKind::Missing, _) => String::from("tpsi0-"),
            _ => String::from("tpsi_o"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PtBoundStates {
    pub h: Vec<BoundState>,
    pub htilde: Vec<BoundState>,
}

/// Quadrature grid for normalization: [−40/U₀, 40/U₀] with spacing 0.005/U₀.
pub fn norm_grid(model: &PoschlTellerModel) -> Grid {
    let (lo, hi) = model.domain();
    Grid::with_spacing(lo, hi, 0.005 / model.u0()).expect("valid box")
}

fn l2_norm(f: &SpinorFn, grid: &Grid) -> f64 {
    let vals: Vec<f64> = grid.points().map(|x| f(x).v.norm_squared()).collect();
    trapezoid(grid, &vals).sqrt()
}

fn normalized(op: DiracOperator, lambda: f64, raw: Arc<dyn Fn(f64) -> CVec + Send + Sync>, grid: &Grid) -> (SpinorFn, f64) {
    let f: SpinorFn = {
        let (op, raw) = (op.clone(), raw.clone());
        Arc::new(move |x| op.solution_jet(x, re(lambda), raw(x)).expect("analytic potential"))
    };
    let n = l2_norm(&f, grid);
    let s = 1.0 / n;
    (Arc::new(move |x| op.solution_jet(x, re(lambda), raw(x) * re(s)).expect("analytic potential")), s)
}

/// Normalized bound states of H and H̃ (mapped states, ψ̃₀⁻ and ψ̃_ø).
pub fn pt_bound_states(model: &PoschlTellerModel) -> Result<PtBoundStates> {
    let grid = norm_grid(model);
    let t = model.transform()?;
    let h = model.h();
    let ht = t.htilde().clone();
    let mut hs = Vec::new();
    let mut hts = Vec::new();
    let idx: Vec<(usize, bool)> =
        model.n_plus().into_iter().map(|n| (n, true)).chain(model.n_minus().into_iter().map(|n| (n, false))).collect();
    for (n, plus) in idx {
        let lam = model.h_level(n, plus);
        let me = *model;
        let raw = Arc::new(move |x| me.h_state_value(n, plus, x));
        let (f, c) = normalized(h.clone(), lam, raw, &grid);
        hs.push(BoundState { kind: StateKind::H, n: Some(n), plus, energy: lam, normalization: c, spinor: f.clone() });
        let lf = intertwine(&t, f);
        let raw_t = Arc::new(move |x| lf(x).v);
        let (g, c) = normalized(ht.clone(), lam, raw_t, &grid);
        hts.push(BoundState { kind: StateKind::Mapped, n: Some(n), plus, energy: lam, normalization: c, spinor: g });
    }
    let mis = t.missing(1);
    let (g, c) = normalized(ht.clone(), -model.m(), Arc::new(move |x| mis(x).v), &grid);
    hts.push(BoundState { kind: StateKind::Missing, n: Some(0), plus: false, energy: -model.m(), normalization: c, spinor: g });
    let (u0, k) = (model.u0(), model.kappa());
    let cz = model.zero_mode_constant();
    let ht2 = ht.clone();
    let zero: SpinorFn =
        Arc::new(move |x| ht2.solution_jet(x, re(0.0), cv(cz * (1.0 / (u0 * x).cosh()).powf(k), 0.0)).expect("analytic"));
    hts.push(BoundState { kind: StateKind::ZeroMode, n: None, plus: true, energy: 0.0, normalization: cz, spinor: zero });
    hts.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    hs.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(PtBoundStates { h: hs, htilde: hts })
}

/// Two fundamental scattering solutions of H at λ_s = ±U₀√(κ²+ν²).
#[derive(Debug, Clone)]
pub struct PtScattering {
    pub nu: f64,
    pub energy: f64,
    pub solutions: [GridFunction; 2],
}

/// Integrates the two plane-wave solutions seeded at the left end of `grid`
/// (e^{±iU₀νx} asymptotics) across the grid.
pub fn pt_scattering(model: &PoschlTellerModel, nu: f64, plus: bool, grid: &Grid) -> Result<PtScattering> {
    if nu == 0.0 {
        return Err(Error::UnsupportedRegime(String::from("threshold energy ν = 0")));
    }
    let op = model.h();
    let e = model.scattering_energy(nu, plus);
    let x0 = grid.x_min();
    let modes = general_eigen(&(op.generator(re(e)))(x0))?;
    let mut y0 = CMat::zeros(2, 2);
    for (j, (mu, v)) in modes.iter().enumerate().take(2) {
        let v = v * (mu * x0).exp();
        y0.set_column(j, &v);
    }
    // order: +iU₀ν first
    if modes[0].0.im < modes[1].0.im {
        y0.swap_columns(0, 1);
    }
    let samples: Vec<f64> = grid.points().collect();
    let sol = integrate_linear_ode(op.generator(re(e)), &y0, x0, grid.x_max(), 1e-12, &samples)?;
    let mut a = CMat::zeros(grid.n_points(), 2);
    let mut b = CMat::zeros(grid.n_points(), 2);
    for (i, y) in sol.ys.iter().enumerate() {
        for c in 0..2 {
            a[(i, c)] = y[(c, 0)];
            b[(i, c)] = y[(c, 1)];
        }
    }
    Ok(PtScattering { nu, energy: e, solutions: [GridFunction::new(*grid, a)?, GridFunction::new(*grid, b)?] })
}

/// Closed-form fundamental solutions ψ^{(1)}, ψ^{(2)} at x via ₂F₁:
/// ψ₁^{(1)} = cosh^{iν}(U₀x) ₂F₁(1−κ−iν, κ−iν; 1−iν; (1−tanh U₀x)/2),
/// ψ₁^{(2)} = 2^{−iν} conj(ψ₁^{(1)}), ψ₂ = (ψ₁′ + A_κψ₁)/(λ_s + m).
pub fn pt_scattering_closed_form(model: &PoschlTellerModel, nu: f64, plus: bool, x: f64) -> Result<[CVec; 2]> {
    let (u0, k) = (model.u0(), model.kappa());
    let i = C64::new(0.0, 1.0);
    let (p, q, r) = (re(1.0 - k) - i * nu, re(k) - i * nu, re(1.0) - i * nu);
    let (t, c) = ((u0 * x).tanh(), (u0 * x).cosh());
    let z = re((1.0 - t) / 2.0);
    let f = gauss_2f1(p, q, r, z)?;
    let df = gauss_2f1(p + 1.0, q + 1.0, r + 1.0, z)? * p * q / r;
    let ph = (i * nu * c.ln()).exp();
    let psi = ph * f;
    // d/dx: iνU₀ tanh·ψ + cosh^{iν}·F′·(−U₀ sech²/2)
    let dpsi = i * nu * u0 * t * psi + ph * df * (-u0 * (1.0 - t * t) / 2.0);
    let lam = model.scattering_energy(nu, plus);
    let a = model.a(k, x);
    let low = (dpsi + psi * a) / (lam + model.m());
    let two = (-i * nu * 2f64.ln()).exp();
    let first = CVec::from_vec(vec![psi, low]);
    let second = CVec::from_vec(vec![two * psi.conj(), two * low.conj()]);
    Ok([first, second])
}

/// Total transmission |t|² for a wave incident from the left at λ_s.
pub fn pt_transmission(model: &PoschlTellerModel, nu: f64, plus: bool) -> Result<f64> {
    let s = scatter_from_left(&model.h(), model.scattering_energy(nu, plus), &ShootingOptions::symmetric(40.0 / model.u0()))?;
    Ok(s.transmission.column(0).norm_squared())
}

/// Finite-norm composite level.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeLevel {
    pub label: String,
    /// Eigenvalue of ℍ₀ the level derives from.
    pub lambda: f64,
    /// Some(true) for 𝔼⁺, Some(false) for 𝔼⁻, None for the α-invariant levels.
    pub plus: Option<bool>,
    pub energy: f64,
    /// Lies inside a continuum band of ℍ_α (bound state in the continuum).
    pub bic: bool,
}

/// The finite-norm energies of ℍ_α: 𝔼±(λ̃ₙ^{(+)}), 𝔼±(λ̃ₙ^{(−)}) (n ≥ 1) and ε₁, ε₂.
pub fn pt_composite_levels(model: &PoschlTellerModel, alpha: f64) -> Result<Vec<CompositeLevel>> {
    let map = model.spectral_map(alpha)?;
    let bands = model.bands()?;
    let th = band_thresholds(&map, &bands);
    let inside = |e: f64| e >= th.e_min || e <= th.e_max;
    let mut out = Vec::new();
    let idx: Vec<(usize, bool)> =
        model.n_plus().into_iter().map(|n| (n, true)).chain(model.n_minus().into_iter().map(|n| (n, false))).collect();
    for (n, up) in idx {
        let lam = model.htilde_level(n, up);
        for plus in [true, false] {
            let e = map.energy_real(lam, plus);
            let label = format!("E{}(l{}{})", if plus { '+' } else { '-' }, n, if up { '+' } else { '-' });
            out.push(CompositeLevel { label, lambda: lam, plus: Some(plus), energy: e, bic: inside(e) });
        }
    }
    for (label, e) in [("eps1", -model.m()), ("eps2", 0.0)] {
        out.push(CompositeLevel { label: String::from(label), lambda: e, plus: None, energy: e, bic: inside(e) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::Jet;

    fn model() -> PoschlTellerModel {
        PoschlTellerModel::new(1.0, 2.9).unwrap()
    }

    #[test]
    fn index_ranges() {
        let m = model();
        assert_eq!(m.n_plus(), vec![0, 1]);
        assert_eq!(m.n_minus(), vec![1]);
        let m3 = PoschlTellerModel::new(1.0, 3.0).unwrap();
        assert_eq!(m3.n_plus(), vec![0, 1]);
        assert_eq!(m3.n_minus(), vec![1]);
        let m4 = PoschlTellerModel::new(1.0, 4.5).unwrap();
        assert_eq!(m4.n_plus(), vec![0, 1, 2, 3]);
        assert!(PoschlTellerModel::new(1.0, 1.0).is_err());
    }

    #[test]
    fn levels() {
        let m = model();
        assert!((m.h_level(0, true) - 4.8f64.sqrt()).abs() < 1e-14);
        assert!((m.h_level(1, true) - 7.6f64.sqrt()).abs() < 1e-14);
        assert!((m.h_level(1, false) + 7.6f64.sqrt()).abs() < 1e-14);
        assert!((m.htilde_level(0, true) - 4.8f64.sqrt()).abs() < 1e-14);
        assert!((m.htilde_level(1, false) + 7.6f64.sqrt()).abs() < 1e-14);
        for n in 0..2 {
            assert!((m.h_level(n, true) - m.htilde_level(n, true)).abs() < 1e-14);
        }
    }

    #[test]
    fn bound_states_solve_stationary_equation() {
        let m = model();
        let h = m.h();
        for (n, plus) in [(0, true), (1, true), (1, false)] {
            let lam = m.h_level(n, plus);
            for &x in &[-3.0, -0.4, 0.0, 1.1, 5.0] {
                let v = m.h_state_value(n, plus, x);
                let dv = {
                    let e = 1e-6;
                    (m.h_state_value(n, plus, x + e) - m.h_state_value(n, plus, x - e)) / re(2.0 * e)
                };
                let r = h.act(x, &Jet::first_order(v.clone(), dv)) - v * re(lam);
                assert!(r.norm() < 1e-8, "n={n} plus={plus} x={x}: {}", r.norm());
            }
        }
    }

    #[test]
    fn zero_mode_constant_matches_quadrature() {
        let m = model();
        let g = norm_grid(&m);
        let vals: Vec<f64> = g.points().map(|x| (1.0 / x.cosh()).powf(2.0 * m.kappa())).collect();
        let q = trapezoid(&g, &vals);
        assert!((m.zero_mode_constant() * m.zero_mode_constant() * q - 1.0).abs() < 1e-10);
    }
}
