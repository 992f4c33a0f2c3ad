//! Composite 4×4 operator ℍ_α = ℍ₀ + α𝕃₁ built from a Darboux triplet (H, H̃, L).
//!
//! The operator is kept symbol-wise: a constant first-order symbol and a
//! pointwise zeroth-order block, so that the constant rotation 𝒰 can be
//! applied exactly and the rotated form handed to the discretizer.

use crate::darboux::{adjoint_intertwine, intertwine, quadratic_action, TransformData};
use crate::dirac::{DiracOperator, Jet, MatrixField, SpinorFn};
use crate::numkit::linalg::{kinetic_unit, re, sigma0, sigma1, sigma2, sigma3, to_dyn2, to_dyn4, CMat, CVec, Mat2, I};
use crate::{Error, Result, C64};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Deliberate defects used to check that the verifier notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Flip the sign of one entry of the ±1 matrix inside 𝒰.
    RotationSign,
}

/// 𝒰 = (1−i)/(2√2) · M · (σ₀ ⊗ exp(−i·angle/2·σ₂)).
pub fn rotation_matrix(angle: f64) -> CMat {
    rotation_matrix_with(angle, Fault::None)
}

pub fn rotation_matrix_with(angle: f64, fault: Fault) -> CMat {
    #[rustfmt::skip]
    let mut m = [
        -1.0, -1.0, 1.0, 1.0,
        1.0, -1.0, -1.0, 1.0,
        1.0, -1.0, 1.0, -1.0,
        1.0, 1.0, 1.0, 1.0,
    ];
    if fault == Fault::RotationSign {
        m[0] = -m[0];
    }
    let pref = C64::new(1.0, -1.0) / (2.0 * 2f64.sqrt());
    let mm = CMat::from_row_slice(4, 4, &m.map(re)) * pref;
    // exp(−iθσ₂) = cos θ − i sin θ σ₂ with θ = angle/2
    let (s, c) = (angle / 2.0).sin_cos();
    let e: Mat2 = sigma0() * re(c) - sigma2() * (I * s);
    let mut r = CMat::zeros(4, 4);
    for b in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                r[(2 * b + i, 2 * b + j)] = e[(i, j)];
            }
        }
    }
    mm * r
}

/// Coefficient matrix of ∂ₓ in ℍ_α: ((K, −αI), (αI, K)), K = −iσ₂.
pub fn kinetic_symbol(alpha: f64) -> CMat {
    let k = to_dyn2(&kinetic_unit());
    let mut s = CMat::zeros(4, 4);
    s.view_mut((0, 0), (2, 2)).copy_from(&k);
    s.view_mut((2, 2), (2, 2)).copy_from(&k);
    for i in 0..2 {
        s[(i, 2 + i)] = re(-alpha);
        s[(2 + i, i)] = re(alpha);
    }
    s
}

/// The target of the rotated kinetic symbol: diag((1+α)K, (1−α)K).
pub fn two_velocity_symbol(alpha: f64) -> CMat {
    let k = to_dyn2(&kinetic_unit());
    let mut s = CMat::zeros(4, 4);
    s.view_mut((0, 0), (2, 2)).copy_from(&(&k * re(1.0 + alpha)));
    s.view_mut((2, 2), (2, 2)).copy_from(&(&k * re(1.0 - alpha)));
    s
}

fn block4(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    let mut m = CMat::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(a);
    m.view_mut((0, 2), (2, 2)).copy_from(b);
    m.view_mut((2, 0), (2, 2)).copy_from(c);
    m.view_mut((2, 2), (2, 2)).copy_from(d);
    m
}

fn join(up: &CVec, low: &CVec) -> CVec {
    CVec::from_iterator(4, up.iter().chain(low.iter()).copied())
}

/// ℍ_α for one Darboux triplet.
#[derive(Clone, Debug)]
pub struct CompositeOperator {
    transform: TransformData,
    alpha: f64,
    rotation_angle: f64,
    fault: Fault,
}

impl CompositeOperator {
    pub fn new(transform: TransformData, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("coupling α = {alpha} outside [0, 1)")));
        }
        Ok(CompositeOperator { transform, alpha, rotation_angle: core::f64::consts::FRAC_PI_2, fault: Fault::None })
    }

    pub fn with_rotation_angle(mut self, angle: f64) -> Self {
        self.rotation_angle = angle;
        self
    }

    pub fn with_fault(mut self, fault: Fault) -> Self {
        self.fault = fault;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rotation_angle(&self) -> f64 {
        self.rotation_angle
    }

    pub fn transform(&self) -> &TransformData {
        &self.transform
    }

    pub fn h(&self) -> &DiracOperator {
        self.transform.h()
    }

    pub fn htilde(&self) -> &DiracOperator {
        self.transform.htilde()
    }

    pub fn kinetic_symbol(&self) -> CMat {
        kinetic_symbol(self.alpha)
    }

    /// Zeroth-order block ((V, −αA†), (−αA, Ṽ)).
    pub fn zeroth_order(&self, x: f64) -> CMat {
        let a = self.transform.a(x) * re(-self.alpha);
        block4(&self.h().potential().eval(x), &a.adjoint(), &a, &self.transform.vtilde(x))
    }

    fn zeroth_order_derivative(&self, x: f64) -> Option<CMat> {
        let dv = self.h().potential().derivative(x)?;
        let dvt = self.htilde().potential().derivative(x)?;
        let da = self.transform.a_prime(x) * re(-self.alpha);
        Some(block4(&dv, &da.adjoint(), &da, &dvt))
    }

    /// ℍ_α f at x for a 4-component jet: (H f↑ + αL† f↓, αL f↑ + H̃ f↓).
    pub fn act(&self, x: f64, f: &Jet) -> CVec {
        self.kinetic_symbol() * &f.d1 + self.zeroth_order(x) * &f.v
    }

    pub fn rotation(&self) -> CMat {
        rotation_matrix_with(self.rotation_angle, self.fault)
    }

    /// 𝒰⁻¹ S 𝒰 for the first-order symbol S.
    pub fn rotated_kinetic_symbol(&self) -> Result<CMat> {
        let u = self.rotation();
        let ui = u.clone().try_inverse().ok_or_else(|| Error::NoSolution("rotation not invertible".into()))?;
        Ok(&ui * self.kinetic_symbol() * &u)
    }

    /// 𝕍̃(x) = 𝒰⁻¹ P(x) 𝒰 with P the zeroth-order block.
    pub fn rotated_potential(&self) -> MatrixField {
        let u = self.rotation();
        let ui = u.adjoint();
        let (u1, ui1) = (u.clone(), ui.clone());
        let me = self.clone();
        let me2 = self.clone();
        let mut field = MatrixField::new(4, move |x| &ui1 * me.zeroth_order(x) * &u1);
        if self.zeroth_order_derivative(0.0).is_some() {
            field = field.with_derivative(move |x| &ui * me2.zeroth_order_derivative(x).unwrap() * &u);
        }
        field
    }

    /// H̃_α = 𝒰⁻¹ℍ_α𝒰 as a two-channel Dirac operator with velocities 1 ± α.
    pub fn rotated_operator(&self) -> Result<DiracOperator> {
        DiracOperator::new(vec![1.0 + self.alpha, 1.0 - self.alpha], self.rotated_potential())
    }

    /// √F(λ) on the principal branch, F(λ) = (λ−ε₁)(λ−ε₂).
    pub fn sqrt_f(&self, lambda: C64) -> C64 {
        let s = self.transform.seed();
        ((lambda - s.eps1) * (lambda - s.eps2)).sqrt()
    }

    /// Checks [ℍ₀, 𝕃₁]f = 0 and 𝕃₁²f = (ℍ₀−ε₁)(ℍ₀−ε₂)f on bispinor test functions.
    pub fn superalgebra_residuals(&self, bank: &[(SpinorFn, SpinorFn)], samples: &[f64]) -> SuperalgebraReport {
        let t = &self.transform;
        let (e1, e2) = (t.seed().eps1, t.seed().eps2);
        let mut commutator: f64 = 0.0;
        let mut anticommutator: f64 = 0.0;
        for (fu, fl) in bank {
            let lf = intertwine(t, fu.clone());
            let ltf = adjoint_intertwine(t, fl.clone());
            // 𝕃₁(ℍ₀ f): L(H f↑) and L†(H̃ f↓)
            let (h, ht) = (t.h().clone(), t.htilde().clone());
            let (fu2, fl2) = (fu.clone(), fl.clone());
            let hfu: SpinorFn = Arc::new(move |x| h.shifted_jet(x, &fu2(x), re(0.0)).expect("analytic data"));
            let htfl: SpinorFn = Arc::new(move |x| ht.shifted_jet(x, &fl2(x), re(0.0)).expect("analytic data"));
            let l_hfu = intertwine(t, hfu);
            let lt_htfl = adjoint_intertwine(t, htfl);
            let llt = intertwine(t, ltf.clone());
            let ltl = adjoint_intertwine(t, lf.clone());
            for &x in samples {
                // ℍ₀(𝕃₁ f) = (H L†f↓, H̃ L f↑)
                let up = t.h().act(x, &ltf(x)) - lt_htfl(x).v;
                let low = t.htilde().act(x, &lf(x)) - l_hfu(x).v;
                commutator = commutator.max(up.amax_c()).max(low.amax_c());
                let (ju, jl) = (fu(x), fl(x));
                let qu = quadratic_action(t.h(), x, &ju, e1, e2);
                let ql = quadratic_action(t.htilde(), x, &jl, e1, e2);
                match (qu, ql) {
                    (Some(qu), Some(ql)) => {
                        anticommutator = anticommutator.max((ltl(x).v - qu).amax_c()).max((llt(x).v - ql).amax_c());
                    }
                    _ => anticommutator = f64::INFINITY,
                }
            }
        }
        SuperalgebraReport { commutator, anticommutator }
    }

    /// Γ-grading defects (‖Γℍ₀Γ − ℍ₀‖, ‖Γ𝕃₁Γ + 𝕃₁‖) over both symbols at x.
    pub fn grading_defects(&self, x: f64) -> (f64, f64) {
        let g = grading();
        let z = CMat::zeros(2, 2);
        let k = to_dyn2(&kinetic_unit());
        let h0 = [block4(&k, &z, &z, &k), self.h0_zeroth(x)];
        let (l1s, l1z) = l1_symbols(&self.transform, x);
        let dh = h0.iter().map(|m| (&g * m * &g - m).cmax()).fold(0.0, f64::max);
        let dl = [l1s, l1z].iter().map(|m| (&g * m * &g + m).cmax()).fold(0.0, f64::max);
        (dh, dl)
    }

    fn h0_zeroth(&self, x: f64) -> CMat {
        let z = CMat::zeros(2, 2);
        block4(&self.h().potential().eval(x), &z, &z, &self.transform.vtilde(x))
    }
}

trait AmaxC {
    fn amax_c(&self) -> f64;
}

impl AmaxC for CVec {
    fn amax_c(&self) -> f64 {
        self.iter().fold(0.0, |m, z| if z.norm().is_nan() { f64::INFINITY } else { m.max(z.norm()) })
    }
}

trait AmaxM {
    fn cmax(&self) -> f64;
}

impl AmaxM for CMat {
    fn cmax(&self) -> f64 {
        self.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Γ = σ₃ ⊗ σ₀.
pub fn grading() -> CMat {
    let mut g = CMat::identity(4, 4);
    g[(2, 2)] = re(-1.0);
    g[(3, 3)] = re(-1.0);
    g
}

/// First- and zeroth-order symbols of 𝕃₁ = ((0, L†), (L, 0)).
pub fn l1_symbols(t: &TransformData, x: f64) -> (CMat, CMat) {
    let z = CMat::zeros(2, 2);
    let id = CMat::identity(2, 2);
    let a = t.a(x);
    (block4(&z, &(-&id), &id, &z), block4(&z, &(-a.adjoint()), &(-a), &z))
}

/// Symbols of 𝕃₂ = iΓ𝕃₁.
pub fn l2_symbols(t: &TransformData, x: f64) -> (CMat, CMat) {
    let g = grading() * I;
    let (s, z) = l1_symbols(t, x);
    (&g * s, &g * z)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperalgebraReport {
    pub commutator: f64,
    pub anticommutator: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BispinorLabel {
    Plus,
    Minus,
    Missing1,
    Missing2,
}

/// Eigen-bispinor of ℍ_α.
#[derive(Clone)]
pub struct Bispinor {
    pub upper: SpinorFn,
    pub lower: SpinorFn,
    pub label: BispinorLabel,
    pub lambda: C64,
    /// ℍ_α eigenvalue.
    pub energy: C64,
    /// False when √F(λ) is imaginary (λ real inside (ε₁, ε₂)).
    pub physical: bool,
}

impl core::fmt::Debug for Bispinor {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Bispinor")
            .field("label", &self.label)
            .field("lambda", &self.lambda)
            .field("energy", &self.energy)
            .field("physical", &self.physical)
            .finish()
    }
}

impl Bispinor {
    /// 4-component value and first derivative at x.
    pub fn jet(&self, x: f64) -> Jet {
        let (u, l) = ((self.upper)(x), (self.lower)(x));
        Jet::first_order(join(&u.v, &l.v), join(&u.d1, &l.d1))
    }

    pub fn value(&self, x: f64) -> CVec {
        self.jet(x).v
    }
}

fn check_eigen(op: &DiracOperator, psi: &SpinorFn, lambda: C64, samples: &[f64]) -> Result<()> {
    for &x in samples {
        let j = psi(x);
        let r = op.act(x, &j) - &j.v * lambda;
        let scale = j.v.norm().max(j.d1.norm()).max(f64::MIN_POSITIVE);
        let residual = r.norm() / scale;
        if !(residual <= 1e-8) {
            return Err(Error::SeedResidual { index: 0, x, residual });
        }
    }
    Ok(())
}

fn eigen_samples(t: &TransformData) -> Vec<f64> {
    let (lo, hi) = t.domain();
    (0..41).map(|i| lo + (hi - lo) * i as f64 / 40.0).collect()
}

/// Ψ± = (±√F(λ)ψ, Lψ) for an eigensolution (H−λ)ψ = 0 with ψ″ supplied.
pub fn eigen_bispinor(c: &CompositeOperator, psi: SpinorFn, lambda: C64, plus: bool) -> Result<Bispinor> {
    let t = c.transform();
    check_eigen(t.h(), &psi, lambda, &eigen_samples(t))?;
    let sf = c.sqrt_f(lambda);
    let s = if plus { sf } else { -sf };
    let p = psi.clone();
    let upper: SpinorFn = Arc::new(move |x| p(x).scaled(s));
    let lower = intertwine(t, psi);
    let physical = lambda.im == 0.0 && sf.im == 0.0;
    Ok(Bispinor {
        upper,
        lower,
        label: if plus { BispinorLabel::Plus } else { BispinorLabel::Minus },
        lambda,
        energy: lambda + s * re(c.alpha()),
        physical,
    })
}

/// λ-derivative of Ψ±, given ψ and ∂ψ/∂λ (each with two x-derivatives).
/// At an extremum of 𝔼± it is again an eigen-bispinor of ℍ_α.
pub fn eigen_bispinor_lambda_derivative(
    c: &CompositeOperator,
    psi: SpinorFn,
    dpsi: SpinorFn,
    lambda: f64,
    plus: bool,
) -> Bispinor {
    let t = c.transform();
    let (e1, e2) = (t.seed().eps1, t.seed().eps2);
    let sf = c.sqrt_f(re(lambda));
    let dsf = re(2.0 * lambda - e1 - e2) / (sf * 2.0);
    let sign = if plus { 1.0 } else { -1.0 };
    let (p, dp) = (psi.clone(), dpsi.clone());
    let upper: SpinorFn = Arc::new(move |x| {
        let (a, b) = (p(x), dp(x));
        let s = |u: &CVec, v: &CVec| (u * dsf + v * sf) * re(sign);
        let d2 = match (&a.d2, &b.d2) {
            (Some(u), Some(v)) => s(u, v),
            _ => CVec::from_element(2, C64::new(f64::NAN, 0.0)),
        };
        Jet::new(s(&a.v, &b.v), s(&a.d1, &b.d1), d2)
    });
    let lower = intertwine(t, dpsi);
    Bispinor {
        upper,
        lower,
        label: if plus { BispinorLabel::Plus } else { BispinorLabel::Minus },
        lambda: re(lambda),
        energy: re(lambda) + sf * re(sign * c.alpha()),
        physical: sf.im == 0.0,
    }
}

/// Ψ = (0, ũₖ), eigenvalue εₖ for every α.
pub fn missing_bispinor(c: &CompositeOperator, k: usize) -> Bispinor {
    let t = c.transform();
    let zero: SpinorFn = Arc::new(|_| Jet::new(CVec::zeros(2), CVec::zeros(2), CVec::zeros(2)));
    let e = t.missing_energy(k);
    Bispinor {
        upper: zero,
        lower: t.missing(k),
        label: if k == 1 { BispinorLabel::Missing1 } else { BispinorLabel::Missing2 },
        lambda: re(e),
        energy: re(e),
        physical: true,
    }
}

/// Rotation angles with closed-form rotated potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiralAngle {
    Zero,
    HalfPi,
}

impl ChiralAngle {
    pub fn radians(self) -> f64 {
        match self {
            ChiralAngle::Zero => 0.0,
            ChiralAngle::HalfPi => core::f64::consts::FRAC_PI_2,
        }
    }
}

/// Rotated potential for the first chiral scenario from pointwise seed data
/// (v₁, λ₁, u₁₁, u₁₂).
pub fn chiral1_rotated_potential(v1: f64, lam1: f64, u11: f64, u12: f64, alpha: f64, angle: ChiralAngle) -> CMat {
    let v13 = lam1 * (u11 * u11 + u12 * u12) / (2.0 * u11 * u12);
    let v14 = alpha * lam1 * (u11 * u11 - u12 * u12) / (2.0 * u11 * u12);
    let m1 = (1.0 + alpha) * (-v1 + v13);
    let m2 = (1.0 - alpha) / (1.0 + alpha) * m1;
    #[rustfmt::skip]
    let e = match angle {
        ChiralAngle::Zero => [
            m1, 0.0, v13, v14,
            0.0, -m1, -v14, -v13,
            v13, -v14, m2, 0.0,
            v14, -v13, 0.0, -m2,
        ],
        ChiralAngle::HalfPi => [
            0.0, -m1, 0.0, v14 - v13,
            -m1, 0.0, -v13 - v14, 0.0,
            0.0, -v13 - v14, 0.0, -m2,
            v14 - v13, 0.0, -m2, 0.0,
        ],
    };
    CMat::from_row_slice(4, 4, &e.map(re))
}

/// Rotated potential (rotation angle π/2) for the second chiral scenario
/// from pointwise data (v₁, m, q = u₂₂/u₁₂).
pub fn chiral2_rotated_potential(v1: f64, m: f64, q: f64, alpha: f64) -> CMat {
    let (s1, s2, s3) = (to_dyn2(&sigma1()), to_dyn2(&sigma2()), to_dyn2(&sigma3()));
    let v11 = |a: f64| (&s3 * re(m / 2.0) + &s1 * re(-m / 2.0 * q + v1)) * re(1.0 + a);
    let v12 = (&s3 + (&s1 + &s2 * (I * alpha)) * re(q)) * re(-m / 2.0);
    let mut out = block4(&v11(alpha), &v12, &v12.adjoint(), &v11(-alpha));
    let shift = to_dyn4(&crate::numkit::linalg::kron2(&sigma3(), &sigma0())) * re(m * alpha / 2.0);
    out += shift;
    out
}
