//! Jacobi polynomials, the complex Gamma function and the Gauss
//! hypergeometric function ₂F₁ in the regimes needed by the models.

#[allow(unused_imports)]
use num_traits::Float;
use crate::{Error, Result, C64};
use alloc::format;
use core::f64::consts::PI;

fn poch(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x + i as f64))
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Pₙ^{(a,b)}(y) through its terminating hypergeometric sum.
fn jacobi_series(n: usize, a: f64, b: f64, y: f64) -> f64 {
    let z = 0.5 * (1.0 - y);
    let mut sum = 0.0;
    let nf = factorial(n);
    let mut zp = 1.0;
    for m in 0..=n {
        let c = poch(-(n as f64), m) * poch(n as f64 + a + b + 1.0, m) * poch(a + m as f64 + 1.0, n - m) / (nf * factorial(m));
        sum += c * zp;
        zp *= z;
    }
    sum
}

/// Jacobi polynomial Pₙ^{(a,b)}(y) by the three-term recurrence. Steps whose
/// leading coefficient vanishes (possible for negative a + b) fall back to
/// the terminating hypergeometric sum.
pub fn jacobi_polynomial(n: usize, a: f64, b: f64, y: f64) -> f64 {
    let p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (y - 1.0);
    if n == 1 {
        return p1;
    }
    let (mut pm2, mut pm1) = (p0, p1);
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let lead = 2.0 * kf * (kf + a + b) * (s - 2.0);
        let pk = if lead.abs() < 1e-9 * (1.0 + s * s * kf) {
            jacobi_series(k, a, b, y)
        } else {
            let c1 = (s - 1.0) * (s * (s - 2.0) * y + a * a - b * b);
            let c2 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
            (c1 * pm1 - c2 * pm2) / lead
        };
        pm2 = pm1;
        pm1 = pk;
    }
    pm1
}

/// d/dy Pₙ^{(a,b)}(y) = (n+a+b+1)/2 · Pₙ₋₁^{(a+1,b+1)}(y).
pub fn jacobi_polynomial_derivative(n: usize, a: f64, b: f64, y: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        0.5 * (n as f64 + a + b + 1.0) * jacobi_polynomial(n - 1, a + 1.0, b + 1.0, y)
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Γ(z) for complex z (Lanczos approximation with reflection).
pub fn gamma_complex(z: C64) -> C64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return C64::new(PI, 0.0) / (s * gamma_complex(C64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += C64::new(p, 0.0) / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    C64::new((2.0 * PI).sqrt(), 0.0) * t.powc(z + 0.5) * (-t).exp() * x
}

/// 1/Γ(z), zero at the poles of Γ.
pub fn rgamma_complex(z: C64) -> C64 {
    if is_nonpositive_integer(z) {
        C64::new(0.0, 0.0)
    } else {
        C64::new(1.0, 0.0) / gamma_complex(z)
    }
}

fn series(p: C64, q: C64, r: C64, z: C64) -> Result<C64> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for k in 0..20_000 {
        let kf = k as f64;
        term = term * (p + kf) * (q + kf) / ((r + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if term == C64::new(0.0, 0.0) {
            return Ok(sum);
        }
    }
    Err(Error::Convergence(format!("2F1 series did not converge at z = {z}")))
}

fn terminates(p: C64, q: C64) -> bool {
    is_nonpositive_integer(p) || is_nonpositive_integer(q)
}

/// ₂F₁(p, q; r; 1 − w) via the connection formula around z = 1, for 0 ≤ w ≤ 1/2.
pub fn gauss_2f1_complement(p: C64, q: C64, r: C64, w: f64) -> Result<C64> {
    if is_nonpositive_integer(r) {
        return Err(Error::UnsupportedRegime(format!("r = {r} is a non-positive integer")));
    }
    if !(0.0..=0.5).contains(&w) {
        return Err(Error::UnsupportedRegime(format!("complement argument w = {w} outside [0, 1/2]")));
    }
    let s = r - p - q;
    if s.im == 0.0 && s.re == s.re.round() {
        return Err(Error::UnsupportedRegime(format!("r − p − q = {s} is an integer (logarithmic case)")));
    }
    let one = C64::new(1.0, 0.0);
    let gr = gamma_complex(r);
    if w == 0.0 {
        if s.re > 0.0 {
            return Ok(gr * gamma_complex(s) * rgamma_complex(r - p) * rgamma_complex(r - q));
        }
        return Err(Error::UnsupportedRegime(format!("z = 1 with Re(r − p − q) = {} ≤ 0", s.re)));
    }
    let wc = C64::new(w, 0.0);
    let t1 = gr * gamma_complex(s) * rgamma_complex(r - p) * rgamma_complex(r - q) * series(p, q, one - s, wc)?;
    let t2 = wc.powc(s) * gr * gamma_complex(-s) * rgamma_complex(p) * rgamma_complex(q) * series(r - p, r - q, one + s, wc)?;
    Ok(t1 + t2)
}

/// Gauss hypergeometric function ₂F₁(p, q; r; z).
///
/// Supported: |z| ≤ 1/2 (power series), |z/(z−1)| ≤ 1/2 (Pfaff transformation),
/// real z ∈ (1/2, 1] (connection formula around z = 1), and terminating series.
/// Anything else is reported as an unsupported regime.
pub fn gauss_2f1(p: C64, q: C64, r: C64, z: C64) -> Result<C64> {
    if is_nonpositive_integer(r) {
        return Err(Error::UnsupportedRegime(format!("r = {r} is a non-positive integer")));
    }
    if z == C64::new(0.0, 0.0) {
        return Ok(C64::new(1.0, 0.0));
    }
    if z.norm() <= 0.5 || (terminates(p, q) && z.norm() <= 1.0) {
        return series(p, q, r, z);
    }
    let one = C64::new(1.0, 0.0);
    let zt = z / (z - one);
    if zt.norm() <= 0.5 {
        return Ok((one - z).powc(-p) * series(p, r - q, r, zt)?);
    }
    if z.im == 0.0 && z.re > 0.5 && z.re <= 1.0 {
        return gauss_2f1_complement(p, q, r, 1.0 - z.re);
    }
    Err(Error::UnsupportedRegime(format!("argument z = {z}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    /// Generalized binomial coefficient C(x, k).
    fn binom(x: f64, k: usize) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (x - i as f64) / (i as f64 + 1.0))
    }

    /// Pₙ^{(a,b)} = Σₛ C(n+a, n−s) C(n+b, s) ((y−1)/2)ˢ ((y+1)/2)ⁿ⁻ˢ
    fn jacobi_oracle(n: usize, a: f64, b: f64, y: f64) -> f64 {
        (0..=n)
            .map(|s| binom(n as f64 + a, n - s) * binom(n as f64 + b, s) * ((y - 1.0) / 2.0).powi(s as i32) * ((y + 1.0) / 2.0).powi((n - s) as i32))
            .sum()
    }

    #[test]
    fn jacobi_low_order() {
        assert_eq!(jacobi_polynomial(0, 1.3, -2.0, 0.4), 1.0);
        let (a, y) = (-3.9, 0.3);
        assert!((jacobi_polynomial(1, a, a, y) - (a + 1.0) * y).abs() < 1e-15);
        let p2 = (a + 1.0) * (a + 2.0) / 2.0 + (a + 2.0) * (2.0 * a + 3.0) * (y - 1.0) / 2.0 + (2.0 * a + 3.0) * (2.0 * a + 4.0) * (y - 1.0).powi(2) / 8.0;
        assert!((jacobi_polynomial(2, a, a, y) - p2).abs() < 1e-13);
    }

    #[test]
    fn jacobi_against_binomial_sum() {
        let v = jacobi_polynomial(4, -3.9, -3.9, 0.3);
        let o = jacobi_oracle(4, -3.9, -3.9, 0.3);
        assert!(((v - o) / o).abs() < 1e-12, "{v} {o}");
        // degenerate leading coefficient (a + b = −2 at n = 2)
        let v = jacobi_polynomial(3, -0.5, -1.5, 0.7);
        let o = jacobi_oracle(3, -0.5, -1.5, 0.7);
        assert!((v - o).abs() < 1e-12 * (1.0 + o.abs()));
    }

    #[test]
    fn jacobi_recurrence_residual() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.gen_range(2..=10);
            let a = rng.gen_range(-5.0..5.0);
            let b = rng.gen_range(-5.0..5.0);
            let y = rng.gen_range(-1.0..1.0);
            let nf = n as f64;
            let s = 2.0 * nf + a + b;
            let pn = jacobi_polynomial(n, a, b, y);
            let p1 = jacobi_polynomial(n - 1, a, b, y);
            let p2 = jacobi_polynomial(n - 2, a, b, y);
            let l = 2.0 * nf * (nf + a + b) * (s - 2.0) * pn;
            let r1 = (s - 1.0) * (s * (s - 2.0) * y + a * a - b * b) * p1;
            let r2 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * s * p2;
            let scale = l.abs().max(r1.abs()).max(r2.abs()).max(1.0);
            assert!((l - r1 + r2).abs() <= 1e-12 * scale, "n={n} a={a} b={b}");
        }
    }

    #[test]
    fn jacobi_derivative_matches_difference() {
        let (n, a, b, y) = (5, -2.4, -2.4, 0.2);
        let h = 1e-5;
        let fd = (jacobi_polynomial(n, a, b, y + h) - jacobi_polynomial(n, a, b, y - h)) / (2.0 * h);
        assert!((jacobi_polynomial_derivative(n, a, b, y) - fd).abs() < 1e-7);
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_complex(c(5.0)).re - 24.0).abs() < 1e-12);
        assert!((gamma_complex(c(0.5)).re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_complex(c(-0.5)).re + 2.0 * PI.sqrt()).abs() < 1e-13);
        // |Γ(iy)|² = π / (y sinh πy)
        let y = 1.4;
        let g = gamma_complex(C64::new(0.0, y));
        assert!((g.norm_sqr() - PI / (y * (PI * y).sinh())).abs() < 1e-13);
        assert_eq!(rgamma_complex(c(-3.0)), c(0.0));
    }

    #[test]
    fn hypergeometric_identities() {
        assert_eq!(gauss_2f1(c(1.0), c(2.0), c(3.0), c(0.0)).unwrap(), c(1.0));
        let z = 0.3;
        let f = gauss_2f1(c(1.0), c(1.0), c(2.0), c(z)).unwrap();
        assert!((f.re - (-(1.0 - z).ln() / z)).abs() < 1e-14);
        assert!((f.re - 1.188_916_479_795_5).abs() < 1e-12);
        // Pfaff branch: z = −0.8
        let z = -0.8;
        let f = gauss_2f1(c(1.0), c(1.0), c(2.0), c(z)).unwrap();
        assert!((f.re - (-(1.0 - z).ln() / z)).abs() < 1e-13);
        // connection branch with non-integer r − p − q: (1 − z)^(−a) = 2F1(a, b; b; z)
        let (a, z) = (0.37, 0.9);
        let f = gauss_2f1(c(a), c(1.3), c(1.3), c(z)).unwrap();
        assert!((f.re - (1.0 - z).powf(-a)).abs() < 1e-10 * (1.0 - z).powf(-a));
        let f = gauss_2f1(c(0.25), c(0.5), c(1.2), c(0.9)).unwrap();
        // slowly converging direct series as oracle
        let direct = series(c(0.25), c(0.5), c(1.2), c(0.9)).unwrap();
        assert!(((f - direct) / direct).norm() < 1e-10);
    }

    #[test]
    fn unsupported_regimes_are_loud() {
        assert!(matches!(gauss_2f1(c(1.0), c(1.0), c(-2.0), c(0.1)), Err(Error::UnsupportedRegime(_))));
        assert!(matches!(gauss_2f1(c(0.5), c(0.5), c(2.0), c(3.0)), Err(Error::UnsupportedRegime(_))));
        assert!(matches!(gauss_2f1(c(1.0), c(1.0), c(2.0), c(0.9)), Err(Error::UnsupportedRegime(_))));
        assert!(matches!(gauss_2f1(c(0.5), c(0.5), c(0.2), c(1.0)), Err(Error::UnsupportedRegime(_))));
    }
}
