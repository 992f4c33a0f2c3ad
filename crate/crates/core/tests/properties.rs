use proptest::prelude::*;
use std::sync::OnceLock;
use susy_dirac_core::composite::{eigen_bispinor, kinetic_symbol, rotation_matrix, two_velocity_symbol};
use susy_dirac_core::darboux::{intertwine, TransformData};
use susy_dirac_core::models::*;
use susy_dirac_core::numkit::linalg::{max_abs, re};
use susy_dirac_core::C64;

fn fp_transform() -> &'static (FreeParticleModel, TransformData) {
    static T: OnceLock<(FreeParticleModel, TransformData)> = OnceLock::new();
    T.get_or_init(|| {
        let m = FreeParticleModel::new(0.5, 0.2).unwrap();
        (m, m.transform().unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn intertwining_free_particle(lam in 0.51f64..3.0, neg in any::<bool>(), d1 in -1.0f64..1.0, d2 in -1.0f64..1.0, x in -8.0f64..8.0) {
        let (m, t) = fp_transform();
        let lam = if neg { -lam } else { lam };
        let psi = m.plane_wave(lam, C64::new(d1, 0.3), C64::new(0.2, d2));
        let l = intertwine(t, psi)(x);
        let r = t.htilde().act(x, &l) - &l.v * re(lam);
        prop_assert!(r.norm() < 1e-9, "{}", r.norm());
    }

    #[test]
    fn kinetic_diagonalization_any_angle(alpha in 0.0f64..0.99, angle in -3.0f64..3.0) {
        let u = rotation_matrix(angle);
        let d = u.adjoint() * kinetic_symbol(alpha) * &u;
        prop_assert!(max_abs(&(d - two_velocity_symbol(alpha))) < 1e-13);
    }

    #[test]
    fn composite_eigen_bispinors(lam in 0.55f64..2.5, alpha in 0.0f64..0.95, plus in any::<bool>(), x in -6.0f64..6.0) {
        let (m, t) = fp_transform();
        let c = susy_dirac_core::composite::CompositeOperator::new(t.clone(), alpha).unwrap();
        let psi = m.plane_wave(lam, C64::new(0.4, 0.0), C64::new(0.0, -0.3));
        let b = eigen_bispinor(&c, psi, re(lam), plus).unwrap();
        let j = b.jet(x);
        let r = c.act(x, &j) - &j.v * b.energy;
        prop_assert!(r.norm() < 1e-9 * (1.0 + j.v.norm()), "{}", r.norm());
        let want = m.spectral_map(alpha).unwrap().energy_real(lam, plus);
        prop_assert!((b.energy.re - want).abs() < 1e-12);
    }
}
