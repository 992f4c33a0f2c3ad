//! Spectral isomorphism 𝔼±(λ) = λ ± α√((λ−ε₁)(λ−ε₂)) and everything derived
//! from it: extrema, the real-energy ellipse, preimages, level crossings,
//! band thresholds and couplings at which bound levels enter a band.

use crate::numkit::roots::bisect;
use crate::{Error, Result, C64};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMap {
    eps1: f64,
    eps2: f64,
    alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub lambda_up: f64,
    pub e_up: f64,
    pub lambda_down: f64,
    pub e_down: f64,
    pub delta: f64,
}

/// Which part of the real-energy locus a preimage sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Left half of the ellipse (Re λ < Δ).
    L,
    /// Right half of the ellipse (Re λ ≥ Δ).
    R,
    /// Real axis, λ ∈ (−∞, ε₁] ∪ [ε₂, ∞).
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPoint {
    pub lambda: C64,
    pub branch: Branch,
    /// true for 𝔼⁺, false for 𝔼⁻.
    pub plus: bool,
    pub energy: f64,
}

impl SpectralMap {
    pub fn new(eps1: f64, eps2: f64, alpha: f64) -> Result<Self> {
        if !(eps1 < eps2) {
            return Err(Error::InvalidParameter(format!("need ε₁ < ε₂, got {eps1}, {eps2}")));
        }
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("coupling α = {alpha} outside [0, 1)")));
        }
        Ok(SpectralMap { eps1, eps2, alpha })
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        SpectralMap::new(self.eps1, self.eps2, alpha)
    }

    pub fn f(&self, lambda: C64) -> C64 {
        (lambda - self.eps1) * (lambda - self.eps2)
    }

    /// √F(λ), principal branch.
    pub fn sqrt_f(&self, lambda: C64) -> C64 {
        self.f(lambda).sqrt()
    }

    pub fn energy(&self, lambda: C64, plus: bool) -> C64 {
        let s = self.sqrt_f(lambda) * self.alpha;
        if plus {
            lambda + s
        } else {
            lambda - s
        }
    }

    /// 𝔼± at real λ ∈ 𝔏.
    pub fn energy_real(&self, lambda: f64, plus: bool) -> f64 {
        let f = ((lambda - self.eps1) * (lambda - self.eps2)).max(0.0).sqrt();
        if plus {
            lambda + self.alpha * f
        } else {
            lambda - self.alpha * f
        }
    }

    pub fn delta(&self) -> f64 {
        0.5 * (self.eps1 + self.eps2)
    }

    fn half_width(&self) -> f64 {
        0.5 * (self.eps2 - self.eps1)
    }

    pub fn extrema(&self) -> Extrema {
        let (d, delta) = (self.half_width(), self.delta());
        let r = (1.0 - self.alpha * self.alpha).sqrt();
        Extrema { lambda_up: delta - d / r, e_up: delta - r * d, lambda_down: delta + d / r, e_down: delta + r * d, delta }
    }

    /// Semi-axes (along Re λ, along Im λ) of the real-energy ellipse.
    pub fn ellipse_axes(&self) -> (f64, f64) {
        let r = (1.0 - self.alpha * self.alpha).sqrt();
        let a = self.half_width() / r;
        (a, self.alpha * a)
    }

    /// Left-hand side of the ellipse equation at λ (1 on the ellipse).
    pub fn ellipse_equation(&self, lambda: C64) -> f64 {
        let (a, b) = self.ellipse_axes();
        let x = (lambda.re - self.delta()) / a;
        let y = lambda.im / b;
        x * x + y * y
    }

    /// Samples of the ellipse on which 𝔼 is real, counterclockwise from λ↓.
    /// Empty at α = 0, where the ellipse degenerates.
    pub fn real_energy_contour(&self, n_samples: usize) -> Result<Vec<ContourPoint>> {
        if n_samples < 16 {
            return Err(Error::InvalidParameter(format!("n_samples = {n_samples} < 16")));
        }
        if self.alpha == 0.0 {
            return Ok(Vec::new());
        }
        let (a, b) = self.ellipse_axes();
        let delta = self.delta();
        let mut out = Vec::with_capacity(n_samples);
        for i in 0..n_samples {
            let th = 2.0 * core::f64::consts::PI * i as f64 / n_samples as f64;
            let (s, c) = th.sin_cos();
            let lambda = C64::new(delta + a * c, b * s);
            let ep = self.energy(lambda, true);
            let em = self.energy(lambda, false);
            let tiny = 1e-14 * (1.0 + lambda.norm());
            // on the real axis both are real; the ellipse continues 𝔼⁺ at λ↑ and 𝔼⁻ at λ↓
            let plus = if ep.im.abs() <= tiny && em.im.abs() <= tiny { lambda.re < delta } else { ep.im.abs() <= em.im.abs() };
            let e = if plus { ep } else { em };
            // imaginary part is roundoff on the ellipse; report the real energy
            let branch = if lambda.re < delta { Branch::L } else { Branch::R };
            out.push(ContourPoint { lambda, branch, plus, energy: e.re });
        }
        Ok(out)
    }

    /// Roots of (1−α²)λ² − (2E − α²(ε₁+ε₂))λ + (E² − α²ε₁ε₂) = 0.
    pub fn quadratic_preimages(&self, e: f64) -> [C64; 2] {
        let a2 = self.alpha * self.alpha;
        let qa = 1.0 - a2;
        let qb = -(2.0 * e - a2 * (self.eps1 + self.eps2));
        let qc = e * e - a2 * self.eps1 * self.eps2;
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            let q = -0.5 * (qb + qb.signum() * sq);
            if q == 0.0 {
                return [C64::new(0.0, 0.0); 2];
            }
            let (r1, r2) = (q / qa, qc / q);
            let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
            [C64::new(lo, 0.0), C64::new(hi, 0.0)]
        } else {
            let re = -qb / (2.0 * qa);
            let im = (-disc).sqrt() / (2.0 * qa);
            [C64::new(re, im), C64::new(re, -im)]
        }
    }

    /// Fundamental-solution case of a real energy together with its preimages.
    pub fn classify_energy(&self, e: f64) -> EnergyCase {
        let ex = self.extrema();
        let (e1, e2) = (self.eps1, self.eps2);
        let kind = if self.alpha > 0.0 && (e == ex.e_up || e == ex.e_down) {
            CaseKind::Extremal
        } else if e > e2 {
            CaseKind::AboveUpper
        } else if e == e2 {
            CaseKind::AtUpper
        } else if e < e1 {
            CaseKind::BelowLower
        } else if e == e1 {
            CaseKind::AtLower
        } else if e > ex.e_down {
            CaseKind::BetweenDownAndUpper
        } else if e < ex.e_up {
            CaseKind::BetweenLowerAndUp
        } else {
            CaseKind::Elliptic
        };
        let mut preimages = Vec::new();
        let mut special = Vec::new();
        if self.alpha == 0.0 {
            // uncoupled: Ψ⁺ and Ψ⁻ coincide with (ψ, 0) and (0, Lψ) up to mixing
            if e < e1 || e > e2 {
                preimages.push(Preimage { lambda: C64::new(e, 0.0), plus: true, branch: Branch::Real });
                preimages.push(Preimage { lambda: C64::new(e, 0.0), plus: false, branch: Branch::Real });
            } else if e == e1 || e == e2 {
                preimages.push(Preimage { lambda: C64::new(e, 0.0), plus: true, branch: Branch::Real });
            }
        } else {
            let roots = self.quadratic_preimages(e);
            let double = matches!(kind, CaseKind::Extremal);
            for (i, &l) in roots.iter().enumerate() {
                if double && i == 1 {
                    break;
                }
                if l.im == 0.0 && (l.re == e1 || l.re == e2) && (e == e1 || e == e2) {
                    continue;
                }
                let ep = self.energy(l, true);
                let em = self.energy(l, false);
                let plus = (ep - e).norm() <= (em - e).norm();
                let branch = if l.im != 0.0 {
                    if l.re < self.delta() {
                        Branch::L
                    } else {
                        Branch::R
                    }
                } else {
                    Branch::Real
                };
                preimages.push(Preimage { lambda: l, plus, branch });
            }
        }
        match kind {
            CaseKind::AtUpper => special.extend([SpecialSolution::SeedUpper(2), SpecialSolution::MissingLower(2)]),
            CaseKind::AtLower => special.extend([SpecialSolution::SeedUpper(1), SpecialSolution::MissingLower(1)]),
            CaseKind::Extremal => special.push(SpecialSolution::LambdaDerivative),
            _ => {}
        }
        EnergyCase { energy: e, kind, preimages, special }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    /// E > ε₂: one 𝔼⁺ and one 𝔼⁻ preimage right of ε₂.
    AboveUpper,
    /// 𝔼↓ < E < ε₂: two 𝔼⁻ preimages right of ε₂.
    BetweenDownAndUpper,
    /// E = ε₂.
    AtUpper,
    /// E < ε₁: one 𝔼⁺ and one 𝔼⁻ preimage left of ε₁.
    BelowLower,
    /// ε₁ < E < 𝔼↑: two 𝔼⁺ preimages left of ε₁.
    BetweenLowerAndUp,
    /// E = ε₁.
    AtLower,
    /// E = 𝔼↑ or 𝔼↓: a double preimage.
    Extremal,
    /// 𝔼↑ < E < 𝔼↓: a conjugate pair on the ellipse.
    Elliptic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preimage {
    pub lambda: C64,
    pub plus: bool,
    pub branch: Branch,
}

/// Extra solutions not of the form Ψ± at a simple preimage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialSolution {
    /// (uₐ, 0).
    SeedUpper(usize),
    /// (0, ũₐ).
    MissingLower(usize),
    /// dΨ/dλ at the extremum.
    LambdaDerivative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyCase {
    pub energy: f64,
    pub kind: CaseKind,
    pub preimages: Vec<Preimage>,
    pub special: Vec<SpecialSolution>,
}

impl EnergyCase {
    /// Number of independent fundamental solutions of ℍ_α at this energy.
    pub fn multiplicity(&self) -> usize {
        2 * self.preimages.len() + self.special.len() * if self.kind == CaseKind::Extremal { 2 } else { 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingKind {
    /// 𝔼⁺(λ_a) = 𝔼⁻(λ_b).
    PlusMinus,
    /// 𝔼⁻(λ_a) = 𝔼⁻(λ_b), right of ε₂.
    MinusMinus,
    /// 𝔼⁺(λ_a) = 𝔼⁺(λ_b), left of ε₁.
    PlusPlus,
}

impl CrossingKind {
    fn signs(self) -> (f64, f64) {
        match self {
            CrossingKind::PlusMinus => (1.0, -1.0),
            CrossingKind::MinusMinus => (-1.0, -1.0),
            CrossingKind::PlusPlus => (1.0, 1.0),
        }
    }
}

fn sqrt_f_real(lambda: f64, eps1: f64, eps2: f64) -> f64 {
    ((lambda - eps1) * (lambda - eps2)).max(0.0).sqrt()
}

/// Coupling at which the two 𝔼 curves of λ_a < λ_b (same side of the gap) meet.
pub fn crossing_alpha(lam_a: f64, lam_b: f64, kind: CrossingKind, eps1: f64, eps2: f64) -> Result<f64> {
    let right = eps2 <= lam_a && lam_a < lam_b;
    let left = lam_a < lam_b && lam_b <= eps1;
    let ok = match kind {
        CrossingKind::PlusMinus => right || left,
        CrossingKind::MinusMinus => right,
        CrossingKind::PlusPlus => left,
    };
    if !(eps1 < eps2) || !ok {
        return Err(Error::InvalidParameter(format!("levels {lam_a}, {lam_b} inadmissible for {kind:?} crossing")));
    }
    let (sa, sb) = kind.signs();
    let (fa, fb) = (sqrt_f_real(lam_a, eps1, eps2), sqrt_f_real(lam_b, eps1, eps2));
    let den = sa * fa - sb * fb;
    if den == 0.0 {
        return Err(Error::NoSolution(format!("{kind:?} crossing of {lam_a} and {lam_b}: vanishing denominator")));
    }
    let alpha = (lam_b - lam_a) / den;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::NoSolution(format!("{kind:?} crossing of {lam_a} and {lam_b} at α = {alpha}")));
    }
    let ea = lam_a + sa * alpha * fa;
    let eb = lam_b + sb * alpha * fb;
    let scale = 1.0 + lam_a.abs().max(lam_b.abs());
    if (ea - eb).abs() > 1e-12 * scale {
        return Err(Error::Convergence(format!("crossing check failed: |Δ𝔼| = {}", (ea - eb).abs())));
    }
    Ok(alpha)
}

/// Continuous spectrum of ℍ₀ ((−∞, m₁] ∪ [m₂, ∞)) and its in-gap levels.
#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    pub m1: f64,
    pub m2: f64,
    pub discrete: Vec<f64>,
}

impl BandStructure {
    pub fn new(m1: f64, m2: f64, discrete: Vec<f64>) -> Result<Self> {
        if !(m1 < m2) {
            return Err(Error::InvalidParameter(format!("band edges {m1} ≥ {m2}")));
        }
        if let Some(&d) = discrete.iter().find(|&&d| !(d > m1 && d < m2)) {
            return Err(Error::InvalidParameter(format!("level {d} outside the gap ({m1}, {m2})")));
        }
        Ok(BandStructure { m1, m2, discrete })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Top of the lower continuum of ℍ_α.
    pub e_max: f64,
    /// Bottom of the upper continuum of ℍ_α.
    pub e_min: f64,
}

pub fn band_thresholds(map: &SpectralMap, bands: &BandStructure) -> Thresholds {
    let ex = map.extrema();
    let e_min = if bands.m2 > ex.lambda_down { map.energy_real(bands.m2, false) } else { ex.e_down };
    let e_max = if bands.m1 < ex.lambda_up { map.energy_real(bands.m1, true) } else { ex.e_up };
    Thresholds { e_max, e_min }
}

/// Coupling at which the level 𝔼^sign(ε) of a bound level ε meets the nearest
/// continuum threshold (𝔼_min for ε right of the gap centre, 𝔼_max otherwise).
pub fn bic_critical_alpha(map: &SpectralMap, eps_bound: f64, bands: &BandStructure, plus: bool) -> Result<f64> {
    let (e1, e2) = (map.eps1(), map.eps2());
    let upper = eps_bound > map.delta();
    if (eps_bound - e1) * (eps_bound - e2) < 0.0 {
        return Err(Error::InvalidParameter(format!("level {eps_bound} lies strictly between ε₁ and ε₂")));
    }
    if upper && !(eps_bound < bands.m2) || !upper && !(eps_bound > bands.m1) {
        return Err(Error::InvalidParameter(format!("level {eps_bound} is not inside the gap")));
    }
    let mismatch = |alpha: f64| -> Result<f64> {
        let m = map.with_alpha(alpha)?;
        let th = band_thresholds(&m, bands);
        Ok(if upper { m.energy_real(eps_bound, plus) - th.e_min } else { m.energy_real(eps_bound, plus) - th.e_max })
    };
    let candidate = if upper {
        let kind = if plus { CrossingKind::PlusMinus } else { CrossingKind::MinusMinus };
        crossing_alpha(eps_bound, bands.m2, kind, e1, e2)
    } else {
        let kind = if plus { CrossingKind::PlusPlus } else { CrossingKind::PlusMinus };
        crossing_alpha(bands.m1, eps_bound, kind, e1, e2)
    };
    let scale = 1.0 + eps_bound.abs().max(bands.m2.abs()).max(bands.m1.abs());
    if let Ok(a) = candidate {
        if mismatch(a)?.abs() <= 1e-12 * scale {
            return Ok(a);
        }
    }
    // threshold on the extremal branch: locate the meeting point directly
    let (lo, hi) = (0.0, 1.0 - 1e-12);
    let (glo, ghi) = (mismatch(lo)?, mismatch(hi)?);
    if glo.signum() == ghi.signum() {
        return Err(Error::NoSolution(format!("level {eps_bound} never meets the continuum for α ∈ [0, 1)")));
    }
    let a = bisect(|a| mismatch(a).unwrap_or(f64::NAN), lo, hi, 1e-15)?;
    if mismatch(a)?.abs() > 1e-12 * scale {
        return Err(Error::Convergence(format!("BIC coupling for level {eps_bound} not resolved")));
    }
    Ok(a)
}

/// Every α in `alphas` paired with the thresholds at that α.
pub fn threshold_sweep(map: &SpectralMap, bands: &BandStructure, alphas: &[f64]) -> Result<Vec<(f64, Thresholds)>> {
    let mut out = vec![];
    for &a in alphas {
        out.push((a, band_thresholds(&map.with_alpha(a)?, bands)));
    }
    Ok(out)
}
