use susy_dirac_core::darboux::intertwine;
use susy_dirac_core::dirac::{levels_in, refine_level, Jet, ShootingOptions};
use susy_dirac_core::models::free_particle::DOMAIN;
use susy_dirac_core::models::poschl_teller::{norm_grid, pt_scattering_closed_form, pt_transmission};
use susy_dirac_core::models::*;
use susy_dirac_core::numkit::grid::Grid;
use susy_dirac_core::numkit::linalg::{max_abs, re, sigma3, to_dyn2, CMat, CVec};
use susy_dirac_core::C64;

fn xs(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn fp() -> FreeParticleModel {
    FreeParticleModel::new(0.5, 0.2).unwrap()
}

fn pt() -> PoschlTellerModel {
    PoschlTellerModel::new(1.0, 2.9).unwrap()
}

#[test]
fn fp_transform_matches_closed_forms() {
    let m = fp();
    let t = m.transform().unwrap();
    for x in xs(-10.0, 10.0, 201) {
        let vt = t.vtilde(x);
        assert!((vt[(0, 1)].re - m.vtilde(x)).abs() < 1e-10 && (vt[(1, 0)].re - m.vtilde(x)).abs() < 1e-10, "x={x}");
        assert!(vt[(0, 0)].norm() < 1e-10 && vt[(1, 1)].norm() < 1e-10);
        assert!(max_abs(&(-t.a(x) - m.intertwiner_coefficient(x))) < 1e-10);
        for k in [1, 2] {
            let d = t.missing(k)(x).v - m.missing(k, x);
            assert!(d.norm() < 1e-10, "k={k} x={x}");
        }
        let (u1, u2) = (m.missing(1, x), m.missing(2, x));
        let s3 = to_dyn2(&sigma3());
        assert!((&s3 * u1 - u2).norm() < 1e-15);
    }
    assert!((m.vtilde(0.0) - 0.08).abs() < 1e-14);
    assert!((m.vtilde(200.0) - 0.5).abs() < 1e-12 && (m.vtilde(-200.0) - 0.5).abs() < 1e-12);
}

#[test]
fn fp_missing_states_are_eigenstates() {
    let t = fp().transform().unwrap();
    for k in [1, 2] {
        let f = t.missing(k);
        let e = t.missing_energy(k);
        for x in xs(-15.0, 15.0, 61) {
            let j = f(x);
            let r = t.htilde().act(x, &j) - &j.v * re(e);
            assert!(r.norm() <= 1e-9, "k={k} x={x}: {}", r.norm());
        }
    }
}

#[test]
fn fp_rotated_potential_golden() {
    let m = fp();
    let asm = fp_assemble(m).unwrap();
    for alpha in [0.0, 0.25, 0.5, 0.9] {
        let field = asm.composite(alpha).unwrap().rotated_potential();
        for x in xs(-10.0, 10.0, 201) {
            let d = max_abs(&(field.eval(x) - m.rotated_potential(alpha, x)));
            assert!(d < 1e-10, "α={alpha} x={x}: {d:e}");
        }
        let v12 = m.rotated_potential(alpha, 0.0)[(0, 1)].re;
        assert!((v12 - (1.0 + alpha) * 0.21 / 1.0).abs() < 1e-14);
        for plus in [true, false] {
            let x = if plus { 60.0 } else { -60.0 };
            assert!((m.rotated_potential(alpha, x)[(0, 3)].re - m.v14_limit(alpha, plus)).abs() < 1e-10);
        }
    }
    // α enters only V12, V14, V23, V34
    let (a, b) = (m.rotated_potential(0.5, 0.7), m.rotated_potential(0.9, 0.7));
    for i in 0..4 {
        for j in 0..4 {
            if a[(i, j)] != b[(i, j)] {
                assert!([(0, 1), (1, 0), (0, 3), (3, 0), (1, 2), (2, 1), (2, 3), (3, 2)].contains(&(i, j)));
            }
        }
    }
}

#[test]
fn fp_plane_waves_solve_h() {
    let m = fp();
    let h = m.h();
    for lam in [0.3, -0.1, 0.8, -1.7] {
        let f = m.plane_wave(lam, C64::new(0.3, 0.1), C64::new(-0.2, 0.7));
        for x in xs(-5.0, 5.0, 21) {
            let j = f(x);
            assert!((h.act(x, &j) - &j.v * re(lam)).norm() < 1e-12 * (1.0 + j.v.norm()));
        }
    }
}

#[test]
fn fp_reflectionless() {
    let asm = fp_assemble(fp()).unwrap();
    for e in [0.6, 0.8, 1.0, 2.0, -0.7] {
        let r = fp_reflection(&asm, None, e).unwrap();
        assert!(r <= 1e-6, "E={e}: |r| = {r:e}");
    }
    assert!(fp_reflection(&asm, None, 0.3).is_err());
}

#[test]
fn fp_htilde_levels_by_discretization() {
    let asm = fp_assemble(fp()).unwrap();
    let g = Grid::with_spacing(DOMAIN.0, DOMAIN.1, 0.01).unwrap();
    let lv = levels_in(&asm.htilde, &g, -0.49, 0.49, 1e-12).unwrap();
    let e: Vec<f64> = lv.iter().filter(|l| l.bound).map(|l| l.energy).collect();
    assert_eq!(e.len(), 2, "{lv:?}");
    assert!((e[0] + 0.2).abs() < 1e-4 && (e[1] - 0.2).abs() < 1e-4, "{e:?}");
}

#[test]
fn pt_shape_invariance_and_chirality() {
    let m = pt();
    let t = m.transform().unwrap();
    let s3 = to_dyn2(&sigma3());
    for x in xs(-10.0, 10.0, 201) {
        assert!(max_abs(&(t.vtilde(x) - m.htilde_expected(x))) < 1e-10, "x={x}");
        assert!(max_abs(&(-t.a(x) - m.intertwiner_coefficient(x))) < 1e-10, "x={x}");
    }
    let f = |x: f64| {
        let g = (-x * x).exp();
        Jet::new(
            CVec::from_vec(vec![re(g), C64::new(0.0, x * g)]),
            CVec::from_vec(vec![re(-2.0 * x * g), C64::new(0.0, g - 2.0 * x * x * g)]),
            CVec::zeros(2),
        )
    };
    for x in xs(-4.0, 4.0, 41) {
        let j = f(x);
        let sj = Jet::first_order(&s3 * &j.v, &s3 * &j.d1);
        let r = t.htilde().act(x, &sj) + &s3 * t.htilde().act(x, &j);
        assert!(r.norm() < 1e-10);
    }
}

#[test]
fn pt_golden_potential_at_unit_scale() {
    let m = pt();
    for alpha in [0.25, 0.9] {
        let field = m.composite(alpha).unwrap().rotated_potential();
        for x in xs(-10.0, 10.0, 201) {
            let d = max_abs(&(field.eval(x) - m.rotated_potential_unit(alpha, x)));
            assert!(d < 1e-10, "α={alpha} x={x}: {d:e}\n{}\n{}", field.eval(x), m.rotated_potential_unit(alpha, x));
        }
    }
}

#[test]
fn pt_bound_state_residuals() {
    let m = pt();
    let b = pt_bound_states(&m).unwrap();
    assert_eq!(b.h.len(), 3);
    assert_eq!(b.htilde.len(), 5);
    let t = m.transform().unwrap();
    let g = norm_grid(&m);
    for (op, set) in [(m.h(), &b.h), (t.htilde().clone(), &b.htilde)] {
        for s in set.iter() {
            let norm: f64 = {
                let v: Vec<f64> = g.points().map(|x| (s.spinor)(x).v.norm_squared()).collect();
                susy_dirac_core::numkit::grid::trapezoid(&g, &v)
            };
            assert!((norm - 1.0).abs() < 1e-9, "{}: {norm}", s.label());
            for x in xs(-10.0, 10.0, 41) {
                let j = (s.spinor)(x);
                let r = op.act(x, &j) - &j.v * re(s.energy);
                assert!(r.norm() < 1e-8, "{} x={x}: {:e}", s.label(), r.norm());
            }
        }
    }
    let e: Vec<f64> = b.htilde.iter().map(|s| s.energy).collect();
    let want = [-7.6f64.sqrt(), -4.8f64.sqrt(), 0.0, 4.8f64.sqrt(), 7.6f64.sqrt()];
    for (a, w) in e.iter().zip(want) {
        assert!((a - w).abs() < 1e-12);
    }
}

#[test]
fn pt_mapped_states_match_closed_form() {
    let m = pt();
    let t = m.transform().unwrap();
    for (n, plus) in [(0, true), (1, true), (1, false)] {
        let me = m;
        let raw: susy_dirac_core::dirac::SpinorFn = std::sync::Arc::new(move |x| {
            me.h().solution_jet(x, re(me.h_level(n, plus)), me.h_state_value(n, plus, x)).unwrap()
        });
        let lf = intertwine(&t, raw);
        let mut worst = 0.0f64;
        for x in xs(-8.0, 8.0, 81) {
            let a = lf(x).v;
            let b = m.htilde_state_closed(n, plus, x);
            worst = worst.max((a - &b).norm() / (1.0 + b.norm()));
        }
        assert!(worst < 1e-8, "n={n} plus={plus}: {worst:e}");
    }
}

#[test]
fn pt_levels_by_discretization_and_shooting() {
    let m = pt();
    let t = m.transform().unwrap();
    let g = Grid::with_spacing(-40.0, 40.0, 0.01).unwrap();
    let opts = ShootingOptions::symmetric(20.0);
    let want_h = [-7.6f64.sqrt(), 4.8f64.sqrt(), 7.6f64.sqrt()];
    let want_ht = [-7.6f64.sqrt(), -4.8f64.sqrt(), 0.0, 4.8f64.sqrt(), 7.6f64.sqrt()];
    for (op, want) in [(m.h(), &want_h[..]), (t.htilde().clone(), &want_ht[..])] {
        let lv = levels_in(&op, &g, -2.85, 2.85, 1e-12).unwrap();
        let e: Vec<f64> = lv.iter().filter(|l| l.bound).map(|l| l.energy).collect();
        assert_eq!(e.len(), want.len(), "{lv:?}");
        for (a, w) in e.iter().zip(want) {
            assert!((a - w).abs() < 2e-3, "{a} vs {w}");
            let r = refine_level(&op, *a, 4e-3, &opts).unwrap();
            assert!((r.energy - w).abs() < 1e-8, "{} vs {w}", r.energy);
        }
    }
}

#[test]
fn pt_excluded_state_diverges_at_integer_kappa() {
    let m = PoschlTellerModel::new(1.0, 3.0).unwrap();
    assert_eq!(m.n_plus(), vec![0, 1]);
    let norm = |l: f64| {
        let g = Grid::with_spacing(-l, l, 0.01).unwrap();
        let v: Vec<f64> = g.points().map(|x| m.excluded_minus_zero(x).norm_squared()).collect();
        susy_dirac_core::numkit::grid::trapezoid(&g, &v)
    };
    for l in [5.0, 10.0, 20.0] {
        assert!(norm(2.0 * l) >= 10.0 * norm(l));
    }
    // the top index κ−1 = 2 is excluded: its would-be state is not normalizable
    let top = |l: f64| {
        let g = Grid::with_spacing(-l, l, 0.01).unwrap();
        let v: Vec<f64> = g.points().map(|x| m.h_state_value(2, true, x).norm_squared()).collect();
        susy_dirac_core::numkit::grid::trapezoid(&g, &v)
    };
    assert!(top(20.0) > 1.9 * top(10.0));
}

#[test]
fn pt_scattering_solutions() {
    let m = pt();
    let g = Grid::with_spacing(-30.0, 12.0, 0.01).unwrap();
    let nu = 1.4;
    for plus in [true, false] {
        let s = pt_scattering(&m, nu, plus, &g).unwrap();
        let h = m.h();
        // closed form at two points fixes the combination; compare elsewhere
        let pick = |i: usize| g.point(i);
        let (ia, ib) = (2500, 3500);
        let mut a = CMat::zeros(4, 2);
        let mut rhs = CMat::zeros(4, 2);
        for (r, i) in [ia, ib].into_iter().enumerate() {
            let cf = pt_scattering_closed_form(&m, nu, plus, pick(i)).unwrap();
            for c in 0..2 {
                a[(2 * r + c, 0)] = cf[0][c];
                a[(2 * r + c, 1)] = cf[1][c];
                rhs[(2 * r + c, 0)] = s.solutions[0].at(i)[c];
                rhs[(2 * r + c, 1)] = s.solutions[1].at(i)[c];
            }
        }
        let coef = a.clone().svd(true, true).solve(&rhs, 1e-14).unwrap();
        // 1 − z cancels catastrophically for x ≪ 0
        for i in (2200..g.n_points()).step_by(37) {
            let cf = pt_scattering_closed_form(&m, nu, plus, g.point(i)).unwrap();
            for j in 0..2 {
                let pred = &cf[0] * coef[(0, j)] + &cf[1] * coef[(1, j)];
                let d = (pred - s.solutions[j].at(i)).norm();
                assert!(d < 1e-7, "x={} j={j}: {d:e}", g.point(i));
            }
        }
        // residual under apply
        let r = h.apply(&s.solutions[0]).unwrap();
        let mut worst = 0.0f64;
        for i in 20..g.n_points() - 20 {
            worst = worst.max((r.at(i) - s.solutions[0].at(i) * re(s.energy)).norm());
        }
        assert!(worst < 1e-6, "{worst:e}");
    }
    assert!(pt_scattering(&m, 0.0, true, &g).is_err());
    let tr = pt_transmission(&m, 50.0, true).unwrap();
    assert!((tr - 1.0).abs() < 1e-4, "{tr}");
}

#[test]
fn pt_scattering_modulus_flat_far_right() {
    // |ψ₁⁽¹⁾| − 1 decays like e^{−2U₀x}
    let m = pt();
    for x in [8.0, 9.0, 12.0] {
        let cf = pt_scattering_closed_form(&m, 1.4, true, x).unwrap();
        assert!((cf[0][0].norm() - 1.0).abs() < 1e-6, "x={x}: {}", cf[0][0].norm());
    }
}

#[test]
fn pt_composite_table() {
    let m = pt();
    let lv = pt_composite_levels(&m, 0.25).unwrap();
    assert_eq!(lv.len(), 8);
    let e = |l: &str| lv.iter().find(|c| c.label == l).unwrap_or_else(|| panic!("{l} in {lv:?}")).energy;
    assert!((e("E+(l1+)") - 3.68012).abs() < 1e-5, "{lv:?}");
    assert!((e("E-(l1+)") - 1.83351).abs() < 1e-5);
    assert!((e("eps1") + 4.8f64.sqrt()).abs() < 1e-14);
    assert_eq!(e("eps2"), 0.0);
    assert!(lv.iter().find(|c| c.label == "E+(l1+)").unwrap().bic);
    let zero = pt_composite_levels(&m, 0.0).unwrap();
    for c in &zero {
        assert!((c.energy - c.lambda).abs() < 1e-15);
        assert!(!c.bic);
    }
}
