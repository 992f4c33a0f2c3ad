use super::{Check, Group, VerifyOptions};
use crate::config::{AlphaSpec, CommandKind, Format, GridSpec, ModelSpec, Module, RunConfig, Scale};
use crate::io::Document;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::Arc;
use susy_dirac_core::composite::{
    chiral1_rotated_potential, chiral2_rotated_potential, two_velocity_symbol, ChiralAngle, CompositeOperator, Fault,
};
use susy_dirac_core::darboux::{intertwine, verify_factorization, TransformData};
use susy_dirac_core::dirac::{discretize, levels_in, outer_mass, refine_level, DiracOperator, Jet, ShootingOptions, SpinorFn};
use susy_dirac_core::models::poschl_teller::pt_scattering_closed_form;
use susy_dirac_core::models::*;
use susy_dirac_core::numkit::grid::{trapezoid, Grid};
use susy_dirac_core::numkit::linalg::{max_abs, re, CVec};
use susy_dirac_core::numkit::roots::{bisect, golden_min};
use susy_dirac_core::spectrum::{band_thresholds, bic_critical_alpha, crossing_alpha, BandStructure, CrossingKind, SpectralMap};
use susy_dirac_core::C64;

pub static CRITERIA: [Group; 15] = [
    Group { criterion: 1, module: Module::Darboux, run: intertwining },
    Group { criterion: 2, module: Module::Darboux, run: factorization },
    Group { criterion: 3, module: Module::Composite, run: kinetic },
    Group { criterion: 4, module: Module::Composite, run: golden_chiral },
    Group { criterion: 4, module: Module::Models, run: golden_models },
    Group { criterion: 5, module: Module::Models, run: composite_levels },
    Group { criterion: 6, module: Module::Spectrum, run: extrema_contours },
    Group { criterion: 7, module: Module::Spectrum, run: crossings },
    Group { criterion: 8, module: Module::Spectrum, run: bic_formulas },
    Group { criterion: 8, module: Module::Models, run: bic_grid },
    Group { criterion: 9, module: Module::Models, run: reflectionless },
    Group { criterion: 10, module: Module::Models, run: pt_spectra },
    Group { criterion: 10, module: Module::Models, run: pt_exclusion },
    Group { criterion: 11, module: Module::Cli, run: determinism },
    Group { criterion: 11, module: Module::Cli, run: round_trip },
];

const SEED: u64 = 0x5eed_d12a;

fn fp() -> FreeParticleModel {
    FreeParticleModel::new(0.5, 0.2).expect("valid parameters")
}

fn pt() -> PoschlTellerModel {
    PoschlTellerModel::new(1.0, 2.9).expect("valid parameters")
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn count(scale: Scale, full: usize, quick: usize) -> usize {
    if scale == Scale::Full {
        full
    } else {
        quick
    }
}

fn or_inf<T>(r: susy_dirac_core::Result<T>, f: impl FnOnce(T) -> f64) -> f64 {
    r.map(f).unwrap_or(f64::INFINITY)
}

fn sup_residual(op: &DiracOperator, f: &SpinorFn, lambda: f64, xs: &[f64]) -> f64 {
    xs.iter()
        .map(|&x| {
            let j = f(x);
            (op.act(x, &j) - &j.v * re(lambda)).norm()
        })
        .fold(0.0, f64::max)
}

fn with_fault(c: CompositeOperator, opts: &VerifyOptions) -> CompositeOperator {
    if opts.fault == Fault::None {
        c
    } else {
        c.with_fault(opts.fault)
    }
}

// 1 ---------------------------------------------------------------------

fn intertwining(opts: &VerifyOptions) -> Vec<Check> {
    let n = count(opts.scale, 20, 5);
    let anchor = "(H̃ − λ)Lψ = 0 whenever Hψ = λψ";
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let m = fp();
    let fp_res = or_inf(m.transform(), |t| {
        let xs = linspace(-10.0, 10.0, 201);
        (0..n)
            .map(|_| {
                let mag: f64 = rng.random_range(0.51..3.0);
                let lam = if rng.random_bool(0.5) { mag } else { -mag };
                let d1 = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let d2 = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let lpsi = intertwine(&t, m.plane_wave(lam, d1, d2));
                sup_residual(t.htilde(), &lpsi, lam, &xs)
            })
            .fold(0.0, f64::max)
    });
    let p = pt();
    let pt_res = or_inf(p.transform(), |t| {
        let xs = linspace(-8.0, 8.0, 161);
        (0..n)
            .map(|_| {
                let nu: f64 = rng.random_range(0.2..4.0);
                let plus = rng.random_bool(0.5);
                let c = [C64::new(rng.random_range(-1.0..1.0), 0.3), C64::new(0.2, rng.random_range(-1.0..1.0))];
                let lam = p.scattering_energy(nu, plus);
                let h = p.h();
                let psi: SpinorFn = Arc::new(move |x| {
                    let cf = pt_scattering_closed_form(&p, nu, plus, x).expect("supported on [-8, 8]");
                    let v: CVec = &cf[0] * c[0] + &cf[1] * c[1];
                    h.solution_jet(x, re(lam), v).expect("analytic potential")
                });
                let lpsi = intertwine(&t, psi);
                sup_residual(t.htilde(), &lpsi, lam, &xs)
            })
            .fold(0.0, f64::max)
    });
    vec![
        Check::new(1, Module::Darboux, "intertwining, free particle", anchor, fp_res, 1e-7),
        Check::new(1, Module::Darboux, "intertwining, Pöschl-Teller", anchor, pt_res, 1e-7),
    ]
}

// 2 ---------------------------------------------------------------------

/// Ten Gaussian spinors with distinct centres, widths and polarizations.
pub fn gaussian_bank() -> Vec<SpinorFn> {
    (0..10)
        .map(|k| {
            let kf = k as f64;
            let (c, w) = (-3.0 + 0.6 * kf, 0.6 + 0.1 * kf);
            let pol = [C64::new(kf.cos(), 0.2), C64::new(0.3, kf.sin())];
            let f: SpinorFn = Arc::new(move |x: f64| {
                let y = (x - c) / w;
                let g = (-0.5 * y * y).exp();
                let (g1, g2) = (-y / w * g, (y * y - 1.0) / (w * w) * g);
                let v = |s: f64| CVec::from_vec(vec![pol[0] * s, pol[1] * s]);
                Jet::new(v(g), v(g1), v(g2))
            });
            f
        })
        .collect()
}

fn factorization(_: &VerifyOptions) -> Vec<Check> {
    let anchor = "L†L = (H − ε₁)(H − ε₂) and LL† = (H̃ − ε₁)(H̃ − ε₂)";
    let xs = linspace(-6.0, 6.0, 121);
    let bank = gaussian_bank();
    let run = |t: susy_dirac_core::Result<TransformData>| or_inf(t, |t| verify_factorization(&t, &bank, &xs).worst());
    vec![
        Check::new(2, Module::Darboux, "factorization, free particle", anchor, run(fp().transform()), 1e-7),
        Check::new(2, Module::Darboux, "factorization, Pöschl-Teller", anchor, run(pt().transform()), 1e-7),
    ]
}

// 3 ---------------------------------------------------------------------

fn kinetic(opts: &VerifyOptions) -> Vec<Check> {
    let t = fp().transform();
    let res = or_inf(t, |t| {
        [0.25, 0.5, 0.9]
            .iter()
            .map(|&a| {
                let c = with_fault(CompositeOperator::new(t.clone(), a).expect("α in range"), opts);
                or_inf(c.rotated_kinetic_symbol(), |k| max_abs(&(k - two_velocity_symbol(a))))
            })
            .fold(0.0, f64::max)
    });
    vec![Check::new(3, Module::Composite, "kinetic diagonalization", "𝒰⁻¹(first-order symbol)𝒰 = diag((1+α)K, (1−α)K)", res, 1e-13)]
}

// 4 ---------------------------------------------------------------------

fn golden_chiral(opts: &VerifyOptions) -> Vec<Check> {
    let xs = linspace(-10.0, 10.0, 401);
    let m = fp();
    let chiral1 = |angle: ChiralAngle| {
        or_inf(fp_assemble(m), |asm| {
            [0.25, 0.5, 0.9]
                .iter()
                .map(|&a| {
                    let c = with_fault(asm.composite(a).expect("α in range").with_rotation_angle(angle.radians()), opts);
                    let f = c.rotated_potential();
                    xs.iter()
                        .map(|&x| {
                            let (u11, u12) = m.seed_components(x);
                            max_abs(&(f.eval(x) - chiral1_rotated_potential(m.m(), m.eps1(), u11, u12, a, angle)))
                        })
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max)
        })
    };
    let chiral2 = [(1.0, 2.9), (0.7, 3.5)]
        .iter()
        .map(|&(u0, kappa)| {
            let p = PoschlTellerModel::new(u0, kappa).expect("valid parameters");
            [0.25, 0.9]
                .iter()
                .map(|&a| {
                    or_inf(p.composite(a), |c| {
                        let f = with_fault(c, opts).rotated_potential();
                        xs.iter()
                            .map(|&x| {
                                let q = (2.0 * kappa - 1.0).sqrt() * (u0 * x).tanh();
                                max_abs(&(f.eval(x) - chiral2_rotated_potential(p.a(kappa, x), p.m(), q, a)))
                            })
                            .fold(0.0, f64::max)
                    })
                })
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    vec![
        Check::new(4, Module::Composite, "chiral scenario 1, rotation angle 0", "𝕍̃ from 𝒰-conjugation = closed form", chiral1(ChiralAngle::Zero), 1e-10),
        Check::new(4, Module::Composite, "chiral scenario 1, rotation angle π/2", "𝕍̃ from 𝒰-conjugation = closed form", chiral1(ChiralAngle::HalfPi), 1e-10),
        Check::new(4, Module::Composite, "chiral scenario 2, two-velocity blocks", "𝕍̃ from 𝒰-conjugation = closed form", chiral2, 1e-10),
    ]
}

fn golden_models(opts: &VerifyOptions) -> Vec<Check> {
    let xs = linspace(-10.0, 10.0, 401);
    let m = fp();
    let (fp_res, lim_res) = fp_assemble(m)
        .map(|asm| {
            let mut comp = 0.0f64;
            let mut lim = 0.0f64;
            for a in [0.0, 0.25, 0.5, 0.9] {
                let f = with_fault(asm.composite(a).expect("α in range"), opts).rotated_potential();
                for &x in &xs {
                    comp = comp.max(max_abs(&(f.eval(x) - m.rotated_potential(a, x))));
                }
                for plus in [true, false] {
                    let v = f.eval(if plus { 60.0 } else { -60.0 });
                    lim = lim.max((v[(0, 3)].re - m.v14_limit(a, plus)).abs());
                    lim = lim.max((v[(1, 2)].re - m.v14_limit(-a, plus)).abs());
                    lim = lim.max(v[(0, 1)].norm()).max(v[(2, 3)].norm());
                }
            }
            (comp, lim)
        })
        .unwrap_or((f64::INFINITY, f64::INFINITY));
    let p = pt();
    let pt_res = [0.25, 0.9]
        .iter()
        .map(|&a| {
            or_inf(p.composite(a), |c| {
                let f = with_fault(c, opts).rotated_potential();
                xs.iter().map(|&x| max_abs(&(f.eval(x) - p.rotated_potential_unit(a, x)))).fold(0.0, f64::max)
            })
        })
        .fold(0.0, f64::max);
    vec![
        Check::new(4, Module::Models, "free-particle 𝕍̃ components", "𝕍̃ from 𝒰-conjugation = closed form", fp_res, 1e-10),
        Check::new(4, Module::Models, "free-particle 𝕍̃ asymptotic limits", "𝕍̃₁₄, 𝕍̃₂₃ → −m − ακ(±κ + m)/(±m + κ)", lim_res, 1e-10),
        Check::new(4, Module::Models, "Pöschl-Teller 𝕍̃ at U₀ = 1", "𝕍̃ from 𝒰-conjugation = closed form", pt_res, 1e-10),
    ]
}

// 5 ---------------------------------------------------------------------

/// Discrete level nearest `target` with a localized eigenvector.
fn localized_level(a: &susy_dirac_core::numkit::banded::BandedHermitian, g: &Grid, dim: usize, target: f64, window: f64) -> Option<f64> {
    a.eigenvalues_in(target - window, target + window, 1e-12)
        .into_iter()
        .filter(|&e| a.eigenvector(e).map(|v| outer_mass(&v, g, dim) < 1e-4).unwrap_or(false))
        .min_by(|x, y| (x - target).abs().total_cmp(&(y - target).abs()))
}

fn grid_spacing(scale: Scale) -> f64 {
    if scale == Scale::Full {
        0.01
    } else {
        0.02
    }
}

/// (grid deviation, shooting deviation) over `targets`.
fn grid_and_shooting(op: &DiracOperator, targets: &[f64], scale: Scale) -> (f64, f64) {
    let g = Grid::with_spacing(-40.0, 40.0, grid_spacing(scale)).expect("valid box");
    let Ok(a) = discretize(op, &g) else { return (f64::INFINITY, f64::INFINITY) };
    let found: Vec<Option<f64>> = targets.par_iter().map(|&t| localized_level(&a, &g, op.dim(), t, 5e-3)).collect();
    let grid_dev = found.iter().zip(targets).map(|(f, t)| f.map_or(f64::INFINITY, |e| (e - t).abs())).fold(0.0, f64::max);
    let opts = ShootingOptions::symmetric(20.0);
    let shoot_dev = found
        .par_iter()
        .zip(targets)
        .map(|(f, &t)| match f {
            Some(e) => or_inf(refine_level(op, *e, 2e-3, &opts), |r| (r.energy - t).abs()),
            None => f64::INFINITY,
        })
        .reduce(|| 0.0, f64::max);
    (grid_dev, shoot_dev)
}

fn composite_levels(opts: &VerifyOptions) -> Vec<Check> {
    let p = pt();
    let anchor = "discrete spectrum of ℍ_α = 𝔼±(finite-norm levels) ∪ {ε₁, ε₂}";
    let levels = pt_composite_levels(&p, 0.25).unwrap_or_default();
    let e = |l: &str| levels.iter().find(|c| c.label == l).map_or(f64::NAN, |c| c.energy);
    let table = if levels.len() == 8 {
        (e("E+(l1+)") - 3.68012).abs().max((e("E-(l1+)") - 1.83351).abs())
    } else {
        f64::INFINITY
    };
    let targets: Vec<f64> = levels.iter().map(|c| c.energy).collect();
    let (gd, sd) = match p.composite(0.25).and_then(|c| c.rotated_operator()) {
        Ok(op) if !targets.is_empty() => grid_and_shooting(&op, &targets, opts.scale),
        _ => (f64::INFINITY, f64::INFINITY),
    };
    vec![
        Check::new(5, Module::Models, "composite level table (8 entries, 𝔼±(√7.6))", "𝔼± = λ ± α√F(λ)", table, 1e-5),
        Check::new(5, Module::Models, "composite levels, grid diagonalization", anchor, gd, 2e-3),
        Check::new(5, Module::Models, "composite levels, shooting refinement", anchor, sd, 1e-8),
    ]
}

// 6 ---------------------------------------------------------------------

fn random_map(rng: &mut ChaCha8Rng) -> SpectralMap {
    let e1: f64 = rng.random_range(-3.0..1.0);
    let e2 = e1 + rng.random_range(0.2..4.0);
    SpectralMap::new(e1, e2, rng.random_range(0.05..0.95)).expect("ordered energies, α in range")
}

fn extrema_contours(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let maps: Vec<SpectralMap> = (0..100).map(|_| random_map(&mut rng)).collect();
    let mut ext = 0.0f64;
    let mut imag = 0.0f64;
    for map in &maps {
        let d = 0.5 * (map.eps2() - map.eps1());
        let ex = map.extrema();
        let (_, emin) = golden_min(|l| map.energy_real(l, false), map.eps2(), map.eps2() + 200.0 * d, 1e-11);
        let (_, emax) = golden_min(|l| -map.energy_real(l, true), map.eps1() - 200.0 * d, map.eps1(), 1e-11);
        ext = ext.max((emin - ex.e_down).abs()).max((-emax - ex.e_up).abs());
        match map.real_energy_contour(400) {
            Ok(pts) => {
                for p in pts {
                    imag = imag.max(map.energy(p.lambda, p.plus).im.abs());
                }
            }
            Err(_) => imag = f64::INFINITY,
        }
    }
    let n_maps = count(opts.scale, 100, 10);
    let cover: f64 = maps[..n_maps]
        .par_iter()
        .map(|map| {
            let d = 0.5 * (map.eps2() - map.eps1());
            let r = 10.0 * (d + 1.0);
            linspace(map.delta() - r, map.delta() + r, 10_000)
                .into_iter()
                .map(|e| {
                    let case = map.classify_energy(e);
                    if case.preimages.is_empty() {
                        return f64::INFINITY;
                    }
                    case.preimages.iter().map(|p| (map.energy(p.lambda, p.plus) - re(e)).norm() / (1.0 + e.abs())).fold(0.0, f64::max)
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    vec![
        Check::new(6, Module::Spectrum, "extrema vs numerical minimization", "𝔼↓ = Δ + d√(1−α²), 𝔼↑ = Δ − d√(1−α²)", ext, 1e-10),
        Check::new(6, Module::Spectrum, "contour energies are real", "𝔼±(λ) real on the ellipse", imag, 1e-12),
        Check::new(6, Module::Spectrum, "isomorphism covers the energy axis", "every real 𝔼 has a preimage in 𝔏 ∪ ℭ", cover, 1e-10),
    ]
}

// 7 ---------------------------------------------------------------------

fn crossings(opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let n = count(opts.scale, 1000, 200);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let map = random_map(&mut rng);
        let (e1, e2) = (map.eps1(), map.eps2());
        let d = e2 - e1;
        let kind = [CrossingKind::PlusMinus, CrossingKind::MinusMinus, CrossingKind::PlusPlus][rng.random_range(0..3)];
        let right = match kind {
            CrossingKind::MinusMinus => true,
            CrossingKind::PlusPlus => false,
            CrossingKind::PlusMinus => rng.random_bool(0.5),
        };
        let (la, lb) = {
            let near = rng.random_range(0.0..3.0) * d;
            let gap = rng.random_range(0.01..5.0) * d;
            if right {
                (e2 + near, e2 + near + gap)
            } else {
                (e1 - near - gap, e1 - near)
            }
        };
        let (sa, sb) = match kind {
            CrossingKind::PlusMinus => (true, false),
            CrossingKind::MinusMinus => (false, false),
            CrossingKind::PlusPlus => (true, true),
        };
        let r = match crossing_alpha(la, lb, kind, e1, e2) {
            Ok(a) if a > 0.0 && a < 1.0 => {
                let m = map.with_alpha(a).expect("α in range");
                (m.energy_real(la, sa) - m.energy_real(lb, sb)).abs() / (1.0 + la.abs().max(lb.abs()))
            }
            _ => f64::INFINITY,
        };
        worst = worst.max(r);
    }
    let mut violations = 0usize;
    for _ in 0..count(opts.scale, 200, 50) {
        let map = random_map(&mut rng);
        let (e1, e2) = (map.eps1(), map.eps2());
        let la = e1 - rng.random_range(0.0..10.0);
        let lb = e2 + rng.random_range(0.0..10.0);
        for kind in [CrossingKind::PlusMinus, CrossingKind::MinusMinus, CrossingKind::PlusPlus] {
            if crossing_alpha(la, lb, kind, e1, e2).is_ok() {
                violations += 1;
            }
        }
        for a in linspace(0.0, 0.999, 60) {
            let m = map.with_alpha(a).expect("α in range");
            for (sa, sb) in [(true, true), (true, false), (false, true), (false, false)] {
                if m.energy_real(la, sa) >= m.energy_real(lb, sb) && !(la == e1 && lb == e2 && a == 0.0) {
                    violations += 1;
                }
            }
        }
    }
    vec![
        Check::new(7, Module::Spectrum, "crossing couplings in (0,1) meet the curves", "𝔼^{s_a}(λ_a) = 𝔼^{s_b}(λ_b) at α*", worst, 1e-12),
        Check::new(7, Module::Spectrum, "no crossing across the gap", "curves left of ε₁ stay below curves right of ε₂", violations as f64, 0.0),
    ]
}

// 8 ---------------------------------------------------------------------

/// α* from a dense α scan of 𝔼 − threshold followed by bisection.
fn scan_alpha(map: &SpectralMap, bands: &BandStructure, lam: f64, plus: bool) -> Option<f64> {
    let upper = lam > map.delta();
    let g = |a: f64| {
        let m = map.with_alpha(a).expect("α in range");
        let th = band_thresholds(&m, bands);
        m.energy_real(lam, plus) - if upper { th.e_min } else { th.e_max }
    };
    let al = linspace(0.0, 1.0 - 1e-9, 2001);
    let i = al.windows(2).position(|w| g(w[0]).signum() != g(w[1]).signum())?;
    bisect(g, al[i], al[i + 1], 1e-15).ok()
}

fn bic_formulas(_: &VerifyOptions) -> Vec<Check> {
    let m = fp();
    let formula = or_inf(m.spectral_map(0.0), |map| {
        or_inf(bic_critical_alpha(&map, m.eps1(), &m.bands(), true), |a| {
            (a - (3.0f64 / 7.0).sqrt()).abs().max((a * m.kappa() - 0.3).abs())
        })
    });
    let p = pt();
    let levels = pt_composite_levels(&p, 0.0).unwrap_or_default();
    let movable: Vec<_> = levels.iter().filter_map(|c| c.plus.map(|s| (c.lambda, s))).collect();
    let (mut meet, mut oracle) = (if movable.len() == 6 { 0.0f64 } else { f64::INFINITY }, 0.0f64);
    match (p.spectral_map(0.0), p.bands()) {
        (Ok(map), Ok(bands)) => {
            for &(lam, plus) in &movable {
                match bic_critical_alpha(&map, lam, &bands, plus) {
                    Ok(a) if a > 0.0 && a < 1.0 => {
                        let mm = map.with_alpha(a).expect("α in range");
                        let th = band_thresholds(&mm, &bands);
                        let edge = if lam > map.delta() { th.e_min } else { th.e_max };
                        meet = meet.max((mm.energy_real(lam, plus) - edge).abs());
                        oracle = oracle.max(scan_alpha(&map, &bands, lam, plus).map_or(f64::INFINITY, |s| (s - a).abs()));
                    }
                    _ => meet = f64::INFINITY,
                }
            }
        }
        _ => meet = f64::INFINITY,
    }
    vec![
        Check::new(8, Module::Spectrum, "free-particle α_crit = √(3/7)", "α_crit = √((m−ε₁)/(m+ε₁))", formula, 1e-12),
        Check::new(8, Module::Spectrum, "Pöschl-Teller BIC couplings meet the thresholds", "𝔼(ε, α_crit) = 𝔼_min or 𝔼_max", meet, 1e-12),
        Check::new(8, Module::Spectrum, "Pöschl-Teller BIC couplings vs α scan", "first sign change of 𝔼 − threshold", oracle, 1e-9),
    ]
}

fn bic_grid(opts: &VerifyOptions) -> Vec<Check> {
    let m = fp();
    let ac = m.alpha_crit();
    let g = Grid::with_spacing(-40.0, 40.0, grid_spacing(opts.scale)).expect("valid box");
    let in_gap = |alpha: f64| -> Option<Vec<f64>> {
        let asm = fp_assemble(m).ok()?;
        let op = asm.composite(alpha).ok()?.rotated_operator().ok()?;
        let th = band_thresholds(&m.spectral_map(alpha).ok()?, &m.bands());
        let a = discretize(&op, &g).ok()?;
        Some(a.eigenvalues_in(th.e_max + 1e-9, th.e_min - 1e-9, 1e-12))
    };
    let below = match in_gap(ac - 0.01) {
        Some(e) if e.len() == 2 => (e[0] + 0.2).abs().max((e[1] - 0.2).abs()),
        _ => f64::INFINITY,
    };
    let above = in_gap(ac + 0.01).map_or(f64::INFINITY, |e| e.len() as f64);
    vec![
        Check::new(8, Module::Models, "in-gap levels ±ε₁ below α_crit (grid)", "gap of ℍ_α hosts ±ε₁ for α < α_crit", below, 2e-3),
        Check::new(8, Module::Models, "empty gap above α_crit (grid)", "±ε₁ absorbed into the continuum for α > α_crit", above, 0.0),
    ]
}

// 9 ---------------------------------------------------------------------

fn reflectionless(_: &VerifyOptions) -> Vec<Check> {
    let r = or_inf(fp_assemble(fp()), |asm| {
        [0.6, 1.0, 2.0].iter().map(|&e| or_inf(fp_reflection(&asm, None, e), |r| r)).fold(0.0, f64::max)
    });
    vec![Check::new(9, Module::Models, "H̃ reflection at E ∈ {0.6, 1, 2}", "no backscattering by Ṽ", r, 1e-6)]
}

// 10 --------------------------------------------------------------------

fn pt_spectra(opts: &VerifyOptions) -> Vec<Check> {
    let p = pt();
    let anchor = "λₙ = ±√(m² − U₀²n(n+2−2κ)), λ̃ₙ = ±U₀√((n+1)(2κ−n−1)), λ̃_ø = 0";
    let (s48, s76) = (4.8f64.sqrt(), 7.6f64.sqrt());
    let want_h = [-s76, s48, s76];
    let want_ht = [-s76, -s48, 0.0, s48, s76];
    let g = Grid::with_spacing(-40.0, 40.0, grid_spacing(opts.scale)).expect("valid box");
    let edge = p.threshold() - 0.02;
    let run = |op: &DiracOperator, want: &[f64]| -> (f64, f64) {
        let Ok(lv) = levels_in(op, &g, -edge, edge, 1e-12) else { return (f64::INFINITY, f64::INFINITY) };
        if lv.iter().filter(|l| l.bound).count() != want.len() {
            return (f64::INFINITY, f64::INFINITY);
        }
        grid_and_shooting(op, want, opts.scale)
    };
    let (hg, hs) = run(&p.h(), &want_h);
    let (tg, ts) = p.transform().map(|t| run(t.htilde(), &want_ht)).unwrap_or((f64::INFINITY, f64::INFINITY));
    vec![
        Check::new(10, Module::Models, "H levels, grid diagonalization", anchor, hg, 2e-3),
        Check::new(10, Module::Models, "H levels, shooting refinement", anchor, hs, 1e-8),
        Check::new(10, Module::Models, "H̃ levels, grid diagonalization", anchor, tg, 2e-3),
        Check::new(10, Module::Models, "H̃ levels, shooting refinement", anchor, ts, 1e-8),
    ]
}

fn pt_exclusion(_: &VerifyOptions) -> Vec<Check> {
    let p = PoschlTellerModel::new(1.0, 3.0).expect("valid parameters");
    let norm = |l: f64| {
        let g = Grid::with_spacing(-l, l, 0.01).expect("valid box");
        let v: Vec<f64> = g.points().map(|x| p.excluded_minus_zero(x).norm_squared()).collect();
        trapezoid(&g, &v)
    };
    let growth = [5.0, 10.0, 20.0].iter().map(|&l| norm(2.0 * l) / norm(l)).fold(f64::INFINITY, f64::min);
    let index_ok = p.n_plus() == vec![0, 1] && p.n_minus() == vec![1];
    let res = if index_ok { 10.0 / growth } else { f64::INFINITY };
    vec![Check::new(
        10,
        Module::Models,
        "κ = 3 exclusions: index range and norm growth of ψ₀⁻",
        "truncated norm of the excluded state grows ≥ 10× per box doubling",
        res,
        1.0,
    )]
}

// 11 --------------------------------------------------------------------

fn figure_configs() -> Vec<RunConfig> {
    let base = |command, model, alpha| RunConfig {
        command,
        model,
        alpha,
        grid: match command {
            CommandKind::SpectralMap => GridSpec { x_min: -8.0, x_max: 8.0, n: 801 },
            _ => GridSpec { x_min: -10.0, x_max: 10.0, n: 201 },
        },
        format: Format::Csv,
        out: None,
        only: None,
        scale: Scale::Quick,
        fault: Fault::None,
    };
    let fpm = ModelSpec::FreeParticle { m: 0.5, eps1: 0.2 };
    let ptm = ModelSpec::PoschlTeller { u0: 1.0, kappa: 2.9 };
    let mut out = vec![
        base(CommandKind::SpectralMap, ModelSpec::CustomSeeds { eps1: -2.0, eps2: 2.0 }, AlphaSpec::Single(0.5)),
        base(CommandKind::Model, fpm, AlphaSpec::Single(0.5)),
        base(CommandKind::Model, ptm, AlphaSpec::Single(0.25)),
        base(CommandKind::Sweep, fpm, AlphaSpec::Sweep { start: 0.0, stop: 0.99, steps: 34 }),
        base(CommandKind::Sweep, ptm, AlphaSpec::Sweep { start: 0.0, stop: 0.99, steps: 34 }),
    ];
    let json: Vec<RunConfig> = out.iter().cloned().map(|mut c| {
        c.format = Format::Json;
        c
    }).collect();
    out.extend(json);
    out
}

fn render(cfg: &RunConfig) -> Option<String> {
    let doc = crate::commands::figure_data(cfg).ok()?;
    doc.render(cfg.format == Format::Json).ok()
}

fn determinism(_: &VerifyOptions) -> Vec<Check> {
    let mismatches = figure_configs()
        .iter()
        .filter(|c| match (render(c), render(c)) {
            (Some(a), Some(b)) => a != b,
            _ => true,
        })
        .count();
    vec![Check::new(11, Module::Cli, "figure data is byte-identical across runs", "identical config gives identical output", mismatches as f64, 0.0)]
}

fn round_trip(_: &VerifyOptions) -> Vec<Check> {
    let bad = figure_configs()
        .iter()
        .filter(|c| {
            let Some(s) = render(c) else { return true };
            match Document::parse(&s) {
                Ok(d) => d.render(c.format == Format::Json).map_or(true, |t| t != s),
                Err(_) => true,
            }
        })
        .count();
    vec![Check::new(11, Module::Cli, "figure data re-reads under its schema", "reader(writer(d)) = d", bad as f64, 0.0)]
}
