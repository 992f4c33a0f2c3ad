//! H = −iσ₂∂ₓ + mσ₁ transformed with U = (u₁, σ₃u₁) at ±ε₁.

use crate::composite::{CompositeOperator, Fault};
use crate::darboux::{build_transform, SeedPair, TransformData};
use crate::dirac::{scatter_from_left, DiracOperator, Jet, MatrixField, ShootingOptions, SpinorFn};
use crate::numkit::linalg::{re, sigma1, to_dyn2, CMat, CVec};
use crate::spectrum::{BandStructure, SpectralMap};
use crate::{Error, Result, C64};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Working interval used for transforms built from the closed-form seeds.
pub const DOMAIN: (f64, f64) = (-40.0, 40.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeParticleModel {
    m: f64,
    eps1: f64,
}

fn cv(a: C64, b: C64) -> CVec {
    CVec::from_vec(vec![a, b])
}

impl FreeParticleModel {
    pub fn new(m: f64, eps1: f64) -> Result<Self> {
        if !(m > 0.0 && eps1 > 0.0 && eps1 < m) {
            return Err(Error::InvalidParameter(format!("need 0 < ε₁ < m, got m = {m}, ε₁ = {eps1}")));
        }
        Ok(FreeParticleModel { m, eps1 })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    /// κ = √(m² − ε₁²).
    pub fn kappa(&self) -> f64 {
        (self.m * self.m - self.eps1 * self.eps1).sqrt()
    }

    pub fn h(&self) -> DiracOperator {
        let v = to_dyn2(&sigma1()) * re(self.m);
        DiracOperator::spinor(MatrixField::constant(v)).expect("constant 2×2 field")
    }

    /// u₁₁ = cosh κx, u₁₂ = (κ sinh κx + m cosh κx)/ε₁.
    pub fn seed_components(&self, x: f64) -> (f64, f64) {
        let k = self.kappa();
        let (c, s) = ((k * x).cosh(), (k * x).sinh());
        (c, (k * s + self.m * c) / self.eps1)
    }

    /// u₁ at ε₁ (sign = 1) or σ₃u₁ at −ε₁ (sign = −1).
    pub fn seed(&self, sign: f64) -> SpinorFn {
        let (k, m, e) = (self.kappa(), self.m, self.eps1);
        Arc::new(move |x: f64| {
            let (c, s) = ((k * x).cosh(), (k * x).sinh());
            let low = (k * s + m * c) / e;
            let dlow = (k * k * c + m * k * s) / e;
            let sg = re(sign);
            Jet::new(cv(re(c), sg * low), cv(re(k * s), sg * dlow), cv(re(k * k * c), sg * (k * k * low)))
        })
    }

    pub fn seeds(&self) -> SeedPair {
        SeedPair::new(self.eps1, self.seed(1.0), -self.eps1, self.seed(-1.0))
    }

    pub fn transform(&self) -> Result<TransformData> {
        build_transform(&self.h(), self.seeds(), DOMAIN)
    }

    /// Ṽ(x) = κ tanh κx + ε₁²/(m + κ tanh κx), the σ₁ coefficient of H̃.
    pub fn vtilde(&self, x: f64) -> f64 {
        let k = self.kappa();
        let t = (k * x).tanh();
        k * t + self.eps1 * self.eps1 / (self.m + k * t)
    }

    /// C(x) with L = ∂ₓ + C: diag(−κ tanh κx, −m + ε₁²/(m + κ tanh κx)).
    pub fn intertwiner_coefficient(&self, x: f64) -> CMat {
        let k = self.kappa();
        let t = (k * x).tanh();
        let mut c = CMat::zeros(2, 2);
        c[(0, 0)] = re(-k * t);
        c[(1, 1)] = re(-self.m + self.eps1 * self.eps1 / (self.m + k * t));
        c
    }

    /// Missing state ũ₁ (k = 1) or ũ₂ = σ₃ũ₁ (k = 2), as columns of (U⁻¹)†.
    pub fn missing(&self, k: usize, x: f64) -> CVec {
        let kp = self.kappa();
        let sech = 1.0 / (kp * x).cosh();
        let low = self.eps1 * sech / (2.0 * (self.m + kp * (kp * x).tanh()));
        let s = if k == 1 { 1.0 } else { -1.0 };
        cv(re(sech / 2.0), re(s * low))
    }

    /// Closed-form 𝕍̃ at rotation angle π/2.
    pub fn rotated_potential(&self, alpha: f64, x: f64) -> CMat {
        let (m, e, k) = (self.m, self.eps1, self.kappa());
        let v12 = (1.0 + alpha) * k * k / (m + m * (2.0 * k * x).cosh() + k * (2.0 * k * x).sinh());
        let v34 = (1.0 - alpha) / (1.0 + alpha) * v12;
        let v14 = |a: f64| {
            -(e * e + (m * m * (1.0 + a) - a * e * e) * (2.0 * k * x).cosh() + m * k * (1.0 + a) * (2.0 * k * x).sinh())
                / (2.0 * (k * x).cosh() * (m * (k * x).cosh() + k * (k * x).sinh()))
        };
        let (a14, a23) = (v14(alpha), v14(-alpha));
        #[rustfmt::skip]
        let e = [
            0.0, v12, 0.0, a14,
            v12, 0.0, a23, 0.0,
            0.0, a23, 0.0, v34,
            a14, 0.0, v34, 0.0,
        ];
        CMat::from_row_slice(4, 4, &e.map(re))
    }

    /// lim_{x→±∞} 𝕍̃₁₄ = −m − ακ(±κ + m)/(±m + κ).
    pub fn v14_limit(&self, alpha: f64, plus_infinity: bool) -> f64 {
        let (m, k) = (self.m, self.kappa());
        let s = if plus_infinity { 1.0 } else { -1.0 };
        -m - alpha * k * (s * k + m) / (s * m + k)
    }

    pub fn bands(&self) -> BandStructure {
        BandStructure::new(-self.m, self.m, vec![-self.eps1, self.eps1]).expect("0 < ε₁ < m")
    }

    pub fn spectral_map(&self, alpha: f64) -> Result<SpectralMap> {
        SpectralMap::new(-self.eps1, self.eps1, alpha)
    }

    /// α at which the missing-state levels ±ε₁ meet the continuum.
    pub fn alpha_crit(&self) -> f64 {
        ((self.m - self.eps1) / (self.m + self.eps1)).sqrt()
    }

    fn kappa_at(&self, lambda: f64) -> C64 {
        re(self.m * self.m - lambda * lambda).sqrt()
    }

    /// d₁e^{κx}(1, (κ+m)/λ) + d₂e^{−κx}(1, (m−κ)/λ), κ = √(m² − λ²) (imaginary in the bands).
    pub fn plane_wave(&self, lambda: f64, d1: C64, d2: C64) -> SpinorFn {
        let k = self.kappa_at(lambda);
        let m = self.m;
        Arc::new(move |x: f64| {
            let mut out = [CVec::zeros(2), CVec::zeros(2), CVec::zeros(2)];
            for (d, kk) in [(d1, k), (d2, -k)] {
                let ex = (kk * x).exp() * d;
                let v = cv(ex, ex * (kk + m) / lambda);
                out[0] += &v;
                out[1] += &v * kk;
                out[2] += &v * (kk * kk);
            }
            let [v, a, b] = out;
            Jet::new(v, a, b)
        })
    }

    /// ∂/∂λ of `plane_wave` at fixed d₁, d₂.
    pub fn plane_wave_lambda_derivative(&self, lambda: f64, d1: C64, d2: C64) -> SpinorFn {
        let k = self.kappa_at(lambda);
        let m = self.m;
        Arc::new(move |x: f64| {
            let mut out = [CVec::zeros(2), CVec::zeros(2), CVec::zeros(2)];
            for (d, kk) in [(d1, k), (d2, -k)] {
                let dk = re(-lambda) / kk;
                let ex = (kk * x).exp() * d;
                let v = cv(re(1.0), (kk + m) / lambda);
                let w = cv(re(0.0), dk / lambda - (kk + m) / (lambda * lambda));
                // f = e^{kx}(x k′ v + w)
                let base = &v * (dk * x) + &w;
                out[0] += &base * ex;
                out[1] += (&v * dk + &base * kk) * ex;
                out[2] += (&v * (dk * kk * 2.0) + &base * (kk * kk)) * ex;
            }
            let [v, a, b] = out;
            Jet::new(v, a, b)
        })
    }
}

/// H, the transform (carrying H̃) and a factory for composites.
#[derive(Clone, Debug)]
pub struct FreeParticleAssembly {
    pub model: FreeParticleModel,
    pub h: DiracOperator,
    pub transform: TransformData,
    pub htilde: DiracOperator,
}

impl FreeParticleAssembly {
    pub fn composite(&self, alpha: f64) -> Result<CompositeOperator> {
        CompositeOperator::new(self.transform.clone(), alpha)
    }

    pub fn composite_with_fault(&self, alpha: f64, fault: Fault) -> Result<CompositeOperator> {
        Ok(self.composite(alpha)?.with_fault(fault))
    }
}

pub fn fp_assemble(model: FreeParticleModel) -> Result<FreeParticleAssembly> {
    let transform = model.transform()?;
    Ok(FreeParticleAssembly { model, h: model.h(), htilde: transform.htilde().clone(), transform })
}

/// Reflection magnitude at band energy E for a wave incident from the left:
/// of H̃ when `alpha` is None, otherwise the largest over incident channels of
/// the rotated composite at that α. Integrates over [−X, X] with X = 40/κ.
pub fn fp_reflection(asm: &FreeParticleAssembly, alpha: Option<f64>, energy: f64) -> Result<f64> {
    let x = 40.0 / asm.model.kappa();
    let opts = ShootingOptions::symmetric(x);
    let s = match alpha {
        None => scatter_from_left(&asm.htilde, energy, &opts)?,
        Some(a) => scatter_from_left(&asm.composite(a)?.rotated_operator()?, energy, &opts)?,
    };
    Ok((0..s.reflection.ncols()).map(|k| s.reflection_magnitude(k)).fold(0.0, f64::max))
}
