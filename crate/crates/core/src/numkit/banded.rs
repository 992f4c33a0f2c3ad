//! Banded Hermitian matrices: inertia counting by LDLᴴ factorization,
//! bisection for eigenvalues in a window and inverse iteration for vectors.

#[allow(unused_imports)]
use num_traits::Float;
use super::linalg::{CMat, CVec};
use crate::{Error, Result, C64};
use alloc::vec;
use alloc::vec::Vec;

/// Hermitian matrix with `kd` sub-diagonals, stored as its lower band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedHermitian {
    n: usize,
    kd: usize,
    /// `band[i * (kd + 1) + d]` holds A[i, i − d].
    band: Vec<C64>,
}

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

impl BandedHermitian {
    pub fn zeros(n: usize, kd: usize) -> Self {
        BandedHermitian { n, kd, band: vec![ZERO; n * (kd + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.kd
    }

    /// Entry A[i, j] (the upper triangle is the conjugate of the stored lower one).
    pub fn get(&self, i: usize, j: usize) -> C64 {
        if i >= j {
            let d = i - j;
            if d > self.kd {
                ZERO
            } else {
                self.band[i * (self.kd + 1) + d]
            }
        } else {
            self.get(j, i).conj()
        }
    }

    /// Adds `v` to A[i, j] and, implicitly, its conjugate to A[j, i].
    /// Diagonal contributions keep only their real part.
    pub fn add(&mut self, i: usize, j: usize, v: C64) -> Result<()> {
        let (r, c, v) = if i >= j { (i, j, v) } else { (j, i, v.conj()) };
        let d = r - c;
        if d > self.kd || r >= self.n {
            return Err(Error::DimensionMismatch { expected: self.kd, got: d });
        }
        let slot = &mut self.band[r * (self.kd + 1) + d];
        if d == 0 {
            *slot += C64::new(v.re, 0.0);
        } else {
            *slot += v;
        }
        Ok(())
    }

    /// Builds from a dense Hermitian matrix, keeping entries within `kd` of the diagonal.
    pub fn from_dense(m: &CMat, kd: usize) -> Self {
        let n = m.nrows();
        let mut b = BandedHermitian::zeros(n, kd);
        for i in 0..n {
            for d in 0..=kd.min(i) {
                let v = m[(i, i - d)];
                b.band[i * (kd + 1) + d] = if d == 0 { C64::new(v.re, 0.0) } else { v };
            }
        }
        b
    }

    pub fn to_dense(&self) -> CMat {
        CMat::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn matvec(&self, x: &CVec) -> CVec {
        let mut y = CVec::zeros(self.n);
        for i in 0..self.n {
            let base = i * (self.kd + 1);
            y[i] += self.band[base] * x[i];
            for d in 1..=self.kd.min(i) {
                let a = self.band[base + d];
                y[i] += a * x[i - d];
                y[i - d] += a.conj() * x[i];
            }
        }
        y
    }

    /// Largest entry modulus.
    pub fn scale(&self) -> f64 {
        self.band.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Number of eigenvalues strictly below `sigma` (Sylvester inertia of A − σI).
    pub fn count_below(&self, sigma: f64) -> usize {
        let kd = self.kd;
        let w = kd + 1;
        let pivmin = f64::EPSILON * self.scale().max(1.0) * 1e-3;
        let mut l = vec![ZERO; self.n * w];
        let mut dvals = vec![0.0f64; self.n];
        let mut negatives = 0;
        for j in 0..self.n {
            let lo = j.saturating_sub(kd);
            // L[j, i] for i in lo..j
            for i in lo..j {
                let mut s = self.band[j * w + (j - i)];
                let klo = lo.max(i.saturating_sub(kd));
                for k in klo..i {
                    s -= l[j * w + (j - k)] * dvals[k] * l[i * w + (i - k)].conj();
                }
                l[j * w + (j - i)] = s / dvals[i];
            }
            let mut d = self.band[j * w].re - sigma;
            for k in lo..j {
                d -= l[j * w + (j - k)].norm_sqr() * dvals[k];
            }
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                negatives += 1;
            }
            dvals[j] = d;
        }
        negatives
    }

    /// All eigenvalues in [lo, hi), ascending, each located to within `tol` by bisection.
    pub fn eigenvalues_in(&self, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if !(hi > lo) {
            return out;
        }
        let clo = self.count_below(lo);
        let chi = self.count_below(hi);
        self.bisect(lo, hi, clo, chi, tol, &mut out);
        out
    }

    fn bisect(&self, a: f64, b: f64, ca: usize, cb: usize, tol: f64, out: &mut Vec<f64>) {
        if cb <= ca {
            return;
        }
        let mid = 0.5 * (a + b);
        if b - a <= tol || mid <= a || mid >= b {
            for _ in ca..cb {
                out.push(mid);
            }
            return;
        }
        let cm = self.count_below(mid);
        self.bisect(a, mid, ca, cm, tol, out);
        self.bisect(mid, b, cm, cb, tol, out);
    }

    /// Unit eigenvector for an eigenvalue `lambda` by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Result<CVec> {
        let scale = self.scale().max(1.0);
        let shift = lambda + 64.0 * f64::EPSILON * scale;
        let lu = BandLu::factor(self, shift);
        // deterministic start vector
        let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
        let mut x = CVec::from_fn(self.n, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            C64::new(((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5, 0.0)
        });
        for _ in 0..4 {
            x = lu.solve(&x);
            let nrm = x.norm();
            if !(nrm.is_finite() && nrm > 0.0) {
                return Err(Error::Convergence(alloc::string::String::from("inverse iteration broke down")));
            }
            x /= C64::new(nrm, 0.0);
        }
        // fix the global phase: largest entry real positive
        let (imax, _) = x.iter().enumerate().fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
        let ph = x[imax] / C64::new(x[imax].norm(), 0.0);
        x /= ph;
        Ok(x)
    }
}

/// LU factorization with partial pivoting of a general band matrix A − σI.
struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    ab: Vec<C64>,
    piv: Vec<usize>,
}

impl BandLu {
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.ld + (self.kl + self.ku + i - j)
    }

    fn factor(h: &BandedHermitian, sigma: f64) -> Self {
        let n = h.n;
        let kl = h.kd;
        let ku = h.kd;
        let ld = 2 * kl + ku + 1;
        let mut lu = BandLu { n, kl, ku, ld, ab: vec![ZERO; ld * n], piv: vec![0; n] };
        for j in 0..n {
            let ilo = j.saturating_sub(ku);
            let ihi = (j + kl).min(n - 1);
            for i in ilo..=ihi {
                let mut v = h.get(i, j);
                if i == j {
                    v -= C64::new(sigma, 0.0);
                }
                let k = lu.idx(i, j);
                lu.ab[k] = v;
            }
        }
        let tiny = f64::EPSILON * h.scale().max(1.0);
        for k in 0..n {
            let km = kl.min(n - 1 - k);
            let mut p = k;
            let mut best = lu.ab[lu.idx(k, k)].norm();
            for i in k + 1..=k + km {
                let v = lu.ab[lu.idx(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            lu.piv[k] = p;
            let jhi = (k + ku + kl).min(n - 1);
            if p != k {
                for j in k..=jhi {
                    let a = lu.idx(k, j);
                    let b = lu.idx(p, j);
                    lu.ab.swap(a, b);
                }
            }
            let kk = lu.idx(k, k);
            if lu.ab[kk].norm() < tiny {
                lu.ab[kk] = C64::new(tiny, 0.0);
            }
            let pivot = lu.ab[kk];
            for i in k + 1..=k + km {
                let ik = lu.idx(i, k);
                let f = lu.ab[ik] / pivot;
                lu.ab[ik] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..=jhi {
                    let kj = lu.ab[lu.idx(k, j)];
                    let ij = lu.idx(i, j);
                    lu.ab[ij] -= f * kj;
                }
            }
        }
        lu
    }

    fn solve(&self, b: &CVec) -> CVec {
        let n = self.n;
        let mut x = b.clone();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                x.swap_rows(k, p);
            }
            let km = self.kl.min(n - 1 - k);
            let xk = x[k];
            for i in k + 1..=k + km {
                x[i] -= self.ab[self.idx(i, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let jhi = (k + self.ku + self.kl).min(n - 1);
            let mut s = x[k];
            for j in k + 1..=jhi {
                s -= self.ab[self.idx(k, j)] * x[j];
            }
            x[k] = s / self.ab[self.idx(k, k)];
        }
        x
    }
}


#[cfg(test)]
mod tests {
    use super::super::eigen::hermitian_eigen;
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_band(n: usize, kd: usize, seed: u64) -> BandedHermitian {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut b = BandedHermitian::zeros(n, kd);
        for i in 0..n {
            for d in 0..=kd.min(i) {
                let v = if d == 0 {
                    C64::new(rng.gen_range(-2.0..2.0), 0.0)
                } else {
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                };
                b.add(i, i - d, v).unwrap();
            }
        }
        b
    }

    #[test]
    fn dense_roundtrip_is_hermitian() {
        let b = random_band(20, 3, 1);
        let d = b.to_dense();
        assert_eq!(d, d.adjoint());
        assert_eq!(BandedHermitian::from_dense(&d, 3), b);
    }

    #[test]
    fn inertia_matches_dense_spectrum() {
        let b = random_band(60, 5, 2);
        let ev = hermitian_eigen(&b.to_dense()).unwrap().values;
        for s in [-3.0, -1.0, 0.0, 0.5, 2.0, 5.0] {
            let expect = ev.iter().filter(|&&v| v < s).count();
            assert_eq!(b.count_below(s), expect);
        }
        let got = b.eigenvalues_in(-1.0, 1.0, 1e-13);
        let expect: Vec<f64> = ev.iter().copied().filter(|v| (-1.0..1.0).contains(v)).collect();
        assert_eq!(got.len(), expect.len());
        for (a, e) in got.iter().zip(expect.iter()) {
            assert!((a - e).abs() < 1e-11, "{a} {e}");
        }
    }

    #[test]
    fn inverse_iteration_vectors() {
        let b = random_band(80, 7, 3);
        for lam in b.eigenvalues_in(-0.5, 0.5, 1e-14) {
            let v = b.eigenvector(lam).unwrap();
            let r = (b.matvec(&v) - &v * C64::new(lam, 0.0)).norm();
            assert!(r < 1e-10, "residual {r}");
        }
    }

    #[test]
    fn matvec_matches_dense() {
        let b = random_band(15, 2, 4);
        let x = CVec::from_fn(15, |i, _| C64::new(i as f64, 1.0));
        assert!((b.matvec(&x) - b.to_dense() * &x).norm() < 1e-12);
    }
}
