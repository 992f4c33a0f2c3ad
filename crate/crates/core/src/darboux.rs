//! First-order Darboux (supersymmetric) transformation of 2×2 Dirac operators.
//!
//! From two seed solutions HU = UΛ the engine builds A = UₓU⁻¹, the
//! intertwiner L = ∂ₓ − A, the partner H̃ = H − i[σ₂, A] and the missing
//! states, the columns of (U⁻¹)†.

#[allow(unused_imports)]
use num_traits::Float;
use crate::dirac::{DiracOperator, Jet, MatrixField, SpinorFn};
use crate::numkit::grid::Grid;
use crate::numkit::linalg::{sigma2, to_dyn2, CMat, CVec};
use crate::numkit::roots::golden_min;
use crate::{Error, Result, C64};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type MatFn = Arc<dyn Fn(f64) -> CMat + Send + Sync>;

/// Two seed solutions with their factorization energies, in column order of U.
#[derive(Clone)]
pub struct SeedPair {
    pub eps1: f64,
    pub eps2: f64,
    pub u1: SpinorFn,
    pub u2: SpinorFn,
}

impl core::fmt::Debug for SeedPair {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SeedPair").field("eps1", &self.eps1).field("eps2", &self.eps2).finish()
    }
}

impl SeedPair {
    pub fn new(eps1: f64, u1: SpinorFn, eps2: f64, u2: SpinorFn) -> Self {
        SeedPair { eps1, eps2, u1, u2 }
    }

    /// (U, U′, U″) at x; U″ is NaN-filled if a seed lacks second derivatives.
    pub fn matrices(&self, x: f64) -> (CMat, CMat, CMat) {
        let a = (self.u1)(x);
        let b = (self.u2)(x);
        let col = |p: &CVec, q: &CVec| CMat::from_columns(&[p.clone(), q.clone()]);
        let nan = CVec::from_element(2, C64::new(f64::NAN, f64::NAN));
        let a2 = a.d2.clone().unwrap_or_else(|| nan.clone());
        let b2 = b.d2.clone().unwrap_or(nan);
        (col(&a.v, &b.v), col(&a.d1, &b.d1), col(&a2, &b2))
    }

    /// Energies sorted ascending (the spectral-map convention ε₁ < ε₂).
    pub fn sorted_energies(&self) -> (f64, f64) {
        (self.eps1.min(self.eps2), self.eps1.max(self.eps2))
    }
}

fn inv2(m: &CMat) -> Option<CMat> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    if det.norm() == 0.0 || !det.norm().is_finite() {
        return None;
    }
    Some(CMat::from_row_slice(2, 2, &[m[(1, 1)] / det, -m[(0, 1)] / det, -m[(1, 0)] / det, m[(0, 0)] / det]))
}

fn commutator_term(a: &CMat) -> CMat {
    // −i[σ₂, A]
    let s2 = to_dyn2(&sigma2());
    (&s2 * a - a * &s2) * C64::new(0.0, -1.0)
}

/// Result of a Darboux transformation.
#[derive(Clone)]
pub struct TransformData {
    seed: SeedPair,
    h: DiracOperator,
    htilde: DiracOperator,
    domain: (f64, f64),
}

impl core::fmt::Debug for TransformData {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("TransformData").field("seed", &self.seed).field("domain", &self.domain).finish()
    }
}

fn coefficient(seed: &SeedPair, x: f64) -> CMat {
    let (u, du, _) = seed.matrices(x);
    match inv2(&u) {
        Some(ui) => du * ui,
        None => CMat::from_element(2, 2, C64::new(f64::NAN, f64::NAN)),
    }
}

fn coefficient_derivative(seed: &SeedPair, x: f64) -> CMat {
    let (u, du, d2u) = seed.matrices(x);
    match inv2(&u) {
        Some(ui) => {
            let a = &du * &ui;
            d2u * ui - &a * &a
        }
        None => CMat::from_element(2, 2, C64::new(f64::NAN, f64::NAN)),
    }
}

/// Normalized |det U| / (|u₁||u₂|), scale-free measure of independence.
fn det_ratio(seed: &SeedPair, x: f64) -> f64 {
    let (u, _, _) = seed.matrices(x);
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    det.norm() / (u.column(0).norm() * u.column(1).norm())
}

const SEED_SAMPLES: usize = 201;
const DET_SAMPLES: usize = 10_000;

/// Builds U, A = UₓU⁻¹, H̃ and the missing states from `seed` on the working
/// interval `domain`. The seeds must solve (H − εₐ)uₐ = 0 to 1e−8 (relative)
/// and det U must stay away from zero on `domain`.
pub fn build_transform(h: &DiracOperator, seed: SeedPair, domain: (f64, f64)) -> Result<TransformData> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: h.dim() });
    }
    let (lo, hi) = domain;
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!("empty working interval [{lo}, {hi}]")));
    }
    for i in 0..SEED_SAMPLES {
        let x = lo + (hi - lo) * i as f64 / (SEED_SAMPLES - 1) as f64;
        for (index, (u, e)) in [(&seed.u1, seed.eps1), (&seed.u2, seed.eps2)].into_iter().enumerate() {
            let j = u(x);
            let r = h.act(x, &j) - &j.v * C64::new(e, 0.0);
            let scale = j.v.norm().max(j.d1.norm()).max(f64::MIN_POSITIVE);
            let residual = r.norm() / scale;
            if !(residual <= 1e-8) {
                return Err(Error::SeedResidual { index: index + 1, x, residual });
            }
        }
    }
    // nodelessness: dense sample plus refinement near local minima
    let xs: Vec<f64> = (0..DET_SAMPLES).map(|i| lo + (hi - lo) * i as f64 / (DET_SAMPLES - 1) as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| det_ratio(&seed, x)).collect();
    let step = (hi - lo) / (DET_SAMPLES - 1) as f64;
    for i in 0..DET_SAMPLES {
        let v = vals[i];
        if !v.is_finite() || v < 1e-10 {
            return Err(Error::SingularTransform { x: xs[i] });
        }
        let left = if i > 0 { vals[i - 1] } else { f64::INFINITY };
        let right = if i + 1 < DET_SAMPLES { vals[i + 1] } else { f64::INFINITY };
        if v <= left && v <= right {
            let (xm, fm) = golden_min(|x| det_ratio(&seed, x), (xs[i] - step).max(lo), (xs[i] + step).min(hi), 1e-14);
            if !(fm >= 1e-10) {
                return Err(Error::SingularTransform { x: xm });
            }
        }
    }
    let pot = h.potential().clone();
    let s1 = seed.clone();
    let s2 = seed.clone();
    let p1 = pot.clone();
    let p2 = pot.clone();
    let mut vt = MatrixField::new(2, move |x| p1.eval(x) + commutator_term(&coefficient(&s1, x)));
    if pot.derivative(0.0).is_some() {
        vt = vt.with_derivative(move |x| p2.derivative(x).unwrap() + commutator_term(&coefficient_derivative(&s2, x)));
    }
    let htilde = DiracOperator::spinor(vt)?;
    Ok(TransformData { seed, h: h.clone(), htilde, domain })
}

impl TransformData {
    pub fn seed(&self) -> &SeedPair {
        &self.seed
    }

    pub fn h(&self) -> &DiracOperator {
        &self.h
    }

    pub fn htilde(&self) -> &DiracOperator {
        &self.htilde
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn u(&self, x: f64) -> CMat {
        self.seed.matrices(x).0
    }

    /// A = UₓU⁻¹.
    pub fn a(&self, x: f64) -> CMat {
        coefficient(&self.seed, x)
    }

    /// A′ = U″U⁻¹ − A².
    pub fn a_prime(&self, x: f64) -> CMat {
        coefficient_derivative(&self.seed, x)
    }

    pub fn vtilde(&self, x: f64) -> CMat {
        self.htilde.potential().eval(x)
    }

    /// Missing state k ∈ {1, 2}: column k of (U⁻¹)†, eigenstate of H̃ at εₖ.
    pub fn missing(&self, k: usize) -> SpinorFn {
        let seed = self.seed.clone();
        let col = k.clamp(1, 2) - 1;
        Arc::new(move |x| {
            let (u, du, d2u) = seed.matrices(x);
            let ui = inv2(&u).unwrap_or_else(|| CMat::from_element(2, 2, C64::new(f64::NAN, 0.0)));
            let a = &du * &ui;
            let ap = &d2u * &ui - &a * &a;
            let m = ui.adjoint();
            let ah = a.adjoint();
            let dm = -(&ah * &m);
            let d2m = -(ap.adjoint() * &m) + &ah * &ah * &m;
            Jet::new(m.column(col).into_owned(), dm.column(col).into_owned(), d2m.column(col).into_owned())
        })
    }

    /// Energy of missing state k.
    pub fn missing_energy(&self, k: usize) -> f64 {
        if k == 1 {
            self.seed.eps1
        } else {
            self.seed.eps2
        }
    }

    /// L²-norm data of missing state k on `grid` and on the doubled box.
    pub fn missing_norm(&self, k: usize, grid: &Grid) -> MissingNorm {
        let f = self.missing(k);
        let norm_on = |g: &Grid| -> f64 {
            let vals: Vec<f64> = g.points().map(|x| f(x).v.norm_squared()).collect();
            let t: f64 = crate::numkit::grid::trapezoid(g, &vals);
            t.sqrt()
        };
        let n1 = norm_on(grid);
        let wide = Grid::new(2.0 * grid.x_min(), 2.0 * grid.x_max(), 2 * grid.n_points() - 1).unwrap_or(*grid);
        let n2 = norm_on(&wide);
        let square_integrable = n1.is_finite() && n2.is_finite() && (n2 - n1).abs() <= 1e-6 * n1;
        MissingNorm { norm: n1, square_integrable }
    }

    /// Missing state k scaled to unit norm on `grid` when square-integrable,
    /// otherwise left unnormalized; the flag reports which.
    pub fn missing_normalized(&self, k: usize, grid: &Grid) -> (SpinorFn, bool) {
        let n = self.missing_norm(k, grid);
        let f = self.missing(k);
        if n.square_integrable && n.norm > 0.0 {
            let s = C64::new(1.0 / n.norm, 0.0);
            (Arc::new(move |x| f(x).scaled(s)), true)
        } else {
            (f, false)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissingNorm {
    pub norm: f64,
    pub square_integrable: bool,
}

/// Lψ = ψ′ − Aψ (with its derivative when ψ″ is available).
pub fn intertwine(t: &TransformData, psi: SpinorFn) -> SpinorFn {
    let t = t.clone();
    Arc::new(move |x| {
        let j = psi(x);
        let a = t.a(x);
        let v = &j.d1 - &a * &j.v;
        match &j.d2 {
            Some(d2) => Jet::first_order(v, d2 - t.a_prime(x) * &j.v - &a * &j.d1),
            None => Jet { v, d1: CVec::from_element(2, C64::new(f64::NAN, f64::NAN)), d2: None },
        }
    })
}

/// L†φ = −φ′ − A†φ (with its derivative when φ″ is available).
pub fn adjoint_intertwine(t: &TransformData, phi: SpinorFn) -> SpinorFn {
    let t = t.clone();
    Arc::new(move |x| {
        let j = phi(x);
        let ah = t.a(x).adjoint();
        let v = -&j.d1 - &ah * &j.v;
        match &j.d2 {
            Some(d2) => Jet::first_order(v, -d2 - t.a_prime(x).adjoint() * &j.v - &ah * &j.d1),
            None => Jet { v, d1: CVec::from_element(2, C64::new(f64::NAN, f64::NAN)), d2: None },
        }
    })
}

/// (op − e₁)(op − e₂) f at x; needs f″ and the potential derivative.
pub fn quadratic_action(op: &DiracOperator, x: f64, f: &Jet, e1: f64, e2: f64) -> Option<CVec> {
    let g = op.shifted_jet(x, f, C64::new(e2, 0.0))?;
    Some(op.act(x, &g) - &g.v * C64::new(e1, 0.0))
}

fn sup(v: &CVec) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Per-function sup residuals of the two factorization identities.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationEntry {
    pub index: usize,
    /// sup |(L†L − (H−ε₁)(H−ε₂))ψ|
    pub lower: f64,
    /// sup |(LL† − (H̃−ε₁)(H̃−ε₂))ψ|
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    pub entries: Vec<FactorizationEntry>,
    pub threshold: f64,
}

impl FactorizationReport {
    pub fn worst(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.lower).max(e.upper))
    }

    pub fn passed(&self) -> bool {
        self.worst() <= self.threshold
    }
}

/// Evaluates both factorization identities on every test function at `samples`.
pub fn verify_factorization(t: &TransformData, testbank: &[SpinorFn], samples: &[f64]) -> FactorizationReport {
    let (e1, e2) = (t.seed.eps1, t.seed.eps2);
    let mut entries = Vec::new();
    for (index, psi) in testbank.iter().enumerate() {
        let lpsi = intertwine(t, psi.clone());
        let ltl = adjoint_intertwine(t, lpsi);
        let lt = adjoint_intertwine(t, psi.clone());
        let llt = intertwine(t, lt);
        let mut lower: f64 = 0.0;
        let mut upper: f64 = 0.0;
        for &x in samples {
            let j = psi(x);
            let l = match quadratic_action(t.h(), x, &j, e1, e2) {
                Some(q) => sup(&(ltl(x).v - q)),
                None => f64::INFINITY,
            };
            let u = match quadratic_action(t.htilde(), x, &j, e1, e2) {
                Some(q) => sup(&(llt(x).v - q)),
                None => f64::INFINITY,
            };
            lower = if l.is_nan() { f64::INFINITY } else { lower.max(l) };
            upper = if u.is_nan() { f64::INFINITY } else { upper.max(u) };
        }
        entries.push(FactorizationEntry { index, lower, upper });
    }
    FactorizationReport { entries, threshold: 1e-7 }
}

/// Intertwiner coefficient C (L = ∂ₓ + C) and partner potential Ṽ as fields.
#[derive(Clone)]
pub struct ChiralForm {
    pub coefficient: MatFn,
    pub vtilde: MatFn,
}

fn check_nodes(what: &'static str, f: &dyn Fn(f64) -> f64, domain: (f64, f64)) -> Result<()> {
    let (lo, hi) = domain;
    let mut prev = f(lo);
    for i in 0..=DET_SAMPLES {
        let x = lo + (hi - lo) * i as f64 / DET_SAMPLES as f64;
        let v = f(x);
        if !v.is_finite() || v == 0.0 || v.signum() != prev.signum() {
            return Err(Error::Node { what, x });
        }
        prev = v;
    }
    Ok(())
}

fn real2(a: f64, b: f64, c: f64, d: f64) -> CMat {
    CMat::from_row_slice(2, 2, &[C64::new(a, 0.0), C64::new(b, 0.0), C64::new(c, 0.0), C64::new(d, 0.0)])
}

/// First chiral scenario, H = −iσ₂∂ₓ + v₁σ₁ with U = ((u₁₁,u₁₁),(u₁₂,−u₁₂)),
/// Λ = diag(λ₁, −λ₁): C = diag(v₁ − λ₁u₁₂/u₁₁, −v₁ + λ₁u₁₁/u₁₂) and
/// Ṽ = −(v₁ − λ₁(u₁₁² + u₁₂²)/(u₁₁u₁₂))σ₁.
pub fn chiral_case1(v1: ScalarFn, lam1: f64, u11: ScalarFn, u12: ScalarFn, domain: (f64, f64)) -> Result<ChiralForm> {
    let (a, b) = (u11.clone(), u12.clone());
    check_nodes("u11·u12", &move |x| a(x) * b(x), domain)?;
    let (va, a1, b1) = (v1.clone(), u11.clone(), u12.clone());
    let coefficient: MatFn = Arc::new(move |x| {
        let (p, q, v) = (a1(x), b1(x), va(x));
        real2(v - lam1 * q / p, 0.0, 0.0, -v + lam1 * p / q)
    });
    let vtilde: MatFn = Arc::new(move |x| {
        let (p, q, v) = (u11(x), u12(x), v1(x));
        let w = -(v - lam1 * (p * p + q * q) / (p * q));
        real2(0.0, w, w, 0.0)
    });
    Ok(ChiralForm { coefficient, vtilde })
}

/// Second chiral scenario, H = −iσ₂∂ₓ + v₁σ₁ + mσ₃ with U = ((0,u₁₂),(u₂₁,u₂₂)),
/// Λ = diag(−m, 0): C = ((v₁ − m u₂₂/u₁₂, 0), (−m, −v₁)) and
/// Ṽ = −(v₁ − m u₂₂/u₁₂)σ₁.
pub fn chiral_case2(v1: ScalarFn, m: f64, u12: ScalarFn, u22: ScalarFn, domain: (f64, f64)) -> Result<ChiralForm> {
    let a = u12.clone();
    check_nodes("u12", &move |x| a(x), domain)?;
    let (va, a1, b1) = (v1.clone(), u12.clone(), u22.clone());
    let coefficient: MatFn = Arc::new(move |x| {
        let v = va(x);
        real2(v - m * b1(x) / a1(x), 0.0, -m, -v)
    });
    let vtilde: MatFn = Arc::new(move |x| {
        let w = -(v1(x) - m * u22(x) / u12(x));
        real2(0.0, w, w, 0.0)
    });
    Ok(ChiralForm { coefficient, vtilde })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::linalg::{re, sigma1, to_dyn2};
    use alloc::vec;

    const M: f64 = 0.5;
    const EPS: f64 = 0.2;

    fn kappa() -> f64 {
        (M * M - EPS * EPS).sqrt()
    }

    fn free_h() -> DiracOperator {
        DiracOperator::spinor(MatrixField::constant(to_dyn2(&sigma1()) * re(M))).unwrap()
    }

    fn cv(a: f64, b: f64) -> CVec {
        CVec::from_vec(vec![re(a), re(b)])
    }

    fn seed(sign: f64) -> SpinorFn {
        let k = kappa();
        Arc::new(move |x: f64| {
            let (ck, sk) = ((k * x).cosh(), (k * x).sinh());
            let low = (k * sk + M * ck) / EPS;
            let dlow = (k * k * ck + M * k * sk) / EPS;
            Jet::new(cv(ck, sign * low), cv(k * sk, sign * dlow), cv(k * k * ck, sign * k * k * low))
        })
    }

    fn transform() -> TransformData {
        build_transform(&free_h(), SeedPair::new(EPS, seed(1.0), -EPS, seed(-1.0)), (-40.0, 40.0)).unwrap()
    }

    #[test]
    fn free_particle_coefficient_and_partner() {
        let t = transform();
        let k = kappa();
        for &x in &[-7.0, -1.3, 0.0, 0.4, 3.0, 12.0] {
            let a = t.a(x);
            let th = (k * x).tanh();
            assert!((a[(0, 0)] - re(k * th)).norm() < 1e-10);
            assert!((a[(1, 1)] - re(M - EPS * EPS / (M + k * th))).norm() < 1e-10);
            assert!(a[(0, 1)].norm() < 1e-10 && a[(1, 0)].norm() < 1e-10);
            let vt = t.vtilde(x);
            let w = k * th + EPS * EPS / (M + k * th);
            assert!((vt[(0, 1)] - re(w)).norm() < 1e-10 && (vt[(1, 0)] - re(w)).norm() < 1e-10);
            assert!(vt[(0, 0)].norm() < 1e-10 && vt[(1, 1)].norm() < 1e-10);
        }
        assert!((t.vtilde(0.0)[(0, 1)].re - 0.08).abs() < 1e-12);
        assert!((t.vtilde(40.0)[(0, 1)].re - 0.5).abs() < 1e-10);
        assert!((t.vtilde(-40.0)[(0, 1)].re - 0.5).abs() < 1e-10);
    }

    #[test]
    fn a_prime_matches_finite_difference() {
        let t = transform();
        let h = 1e-5;
        for &x in &[-2.0, 0.3, 1.7] {
            let fd = (t.a(x + h) - t.a(x - h)) / re(2.0 * h);
            assert!((fd - t.a_prime(x)).norm() < 1e-8);
        }
    }

    #[test]
    fn missing_states_closed_form_and_eigen() {
        let t = transform();
        let k = kappa();
        let m1 = t.missing(1);
        let m2 = t.missing(2);
        for &x in &[-5.0, -0.5, 0.0, 2.0, 8.0] {
            let sech = 1.0 / (k * x).cosh();
            let low = EPS * sech / (2.0 * (M + k * (k * x).tanh()));
            let j = m1(x);
            assert!((j.v.clone() - cv(sech / 2.0, low)).norm() < 1e-12);
            assert!((m2(x).v - cv(sech / 2.0, -low)).norm() < 1e-12);
            for (f, e) in [(&m1, EPS), (&m2, -EPS)] {
                let jj = f(x);
                let r = t.htilde().act(x, &jj) - &jj.v * re(e);
                assert!(r.norm() < 1e-12);
            }
        }
        let g = Grid::with_spacing(-40.0, 40.0, 0.01).unwrap();
        let (_, flag) = t.missing_normalized(1, &g);
        assert!(flag);
        assert!(t.missing_norm(2, &g).square_integrable);
    }

    #[test]
    fn factorization_on_gaussian_bank() {
        let t = transform();
        let mut bank: Vec<SpinorFn> = Vec::new();
        for (c, w) in [(0.0, 1.0), (1.5, 0.7), (-2.0, 2.0)] {
            bank.push(Arc::new(move |x: f64| {
                let y = (x - c) / w;
                let g = (-y * y).exp();
                let d1 = -2.0 * y / w * g;
                let d2 = (4.0 * y * y - 2.0) / (w * w) * g;
                Jet::new(cv(g, 0.5 * g), cv(d1, 0.5 * d1), cv(d2, 0.5 * d2))
            }));
        }
        let samples: Vec<f64> = (0..401).map(|i| -10.0 + 0.05 * i as f64).collect();
        let rep = verify_factorization(&t, &bank, &samples);
        assert_eq!(rep.entries.len(), 3);
        assert!(rep.passed(), "worst {}", rep.worst());
    }

    #[test]
    fn chiral_case1_agrees_with_engine() {
        let t = transform();
        let k = kappa();
        let form = chiral_case1(
            Arc::new(|_| M),
            EPS,
            Arc::new(move |x| (k * x).cosh()),
            Arc::new(move |x| (k * (k * x).sinh() + M * (k * x).cosh()) / EPS),
            (-40.0, 40.0),
        )
        .unwrap();
        for &x in &[-3.0, 0.0, 0.9, 6.0] {
            assert!(((form.coefficient)(x) + t.a(x)).norm() < 1e-10);
            assert!(((form.vtilde)(x) - t.vtilde(x)).norm() < 1e-10);
        }
    }

    #[test]
    fn chiral_case1_rejects_nodes() {
        let r = chiral_case1(Arc::new(|_| M), EPS, Arc::new(|x: f64| x - 0.25), Arc::new(|_| 1.0), (-1.0, 1.0));
        assert!(matches!(r, Err(Error::Node { .. })));
    }

    #[test]
    fn wrong_energy_is_rejected() {
        let r = build_transform(&free_h(), SeedPair::new(0.3, seed(1.0), -EPS, seed(-1.0)), (-10.0, 10.0));
        assert!(matches!(r, Err(Error::SeedResidual { index: 1, .. })));
    }

    #[test]
    fn dependent_seeds_are_singular() {
        let r = build_transform(&free_h(), SeedPair::new(EPS, seed(1.0), EPS, seed(1.0)), (-10.0, 10.0));
        assert!(matches!(r, Err(Error::SingularTransform { .. })));
    }
}
