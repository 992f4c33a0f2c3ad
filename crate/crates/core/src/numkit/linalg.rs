//! Small complex linear-algebra helpers and the Pauli basis.

#[allow(unused_imports)]
use num_traits::Float;
use crate::C64;
use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, Vector2, Vector4};

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;
pub type Vec2 = Vector2<C64>;
pub type Vec4 = Vector4<C64>;

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
const Z: C64 = C64 { re: 0.0, im: 0.0 };
const O: C64 = C64 { re: 1.0, im: 0.0 };

pub fn sigma0() -> Mat2 {
    Mat2::new(O, Z, Z, O)
}

pub fn sigma1() -> Mat2 {
    Mat2::new(Z, O, O, Z)
}

pub fn sigma2() -> Mat2 {
    Mat2::new(Z, -I, I, Z)
}

pub fn sigma3() -> Mat2 {
    Mat2::new(O, Z, Z, -O)
}

/// −iσ₂ = [[0,−1],[1,0]], the real kinetic symbol of a unit-velocity block.
pub fn kinetic_unit() -> Mat2 {
    Mat2::new(Z, -O, O, Z)
}

pub fn real_mat2(a: f64, b: f64, c: f64, d: f64) -> Mat2 {
    Mat2::new(re(a), re(b), re(c), re(d))
}

pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Block matrix [[a, b], [c, d]] from 2×2 blocks.
pub fn blocks(a: &Mat2, b: &Mat2, c: &Mat2, d: &Mat2) -> Mat4 {
    let mut out = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = a[(i, j)];
            out[(i, j + 2)] = b[(i, j)];
            out[(i + 2, j)] = c[(i, j)];
            out[(i + 2, j + 2)] = d[(i, j)];
        }
    }
    out
}

pub fn to_dyn2(m: &Mat2) -> CMat {
    CMat::from_fn(2, 2, |i, j| m[(i, j)])
}

pub fn to_dyn4(m: &Mat4) -> CMat {
    CMat::from_fn(4, 4, |i, j| m[(i, j)])
}

pub fn vec4(up: &Vec2, low: &Vec2) -> Vec4 {
    Vec4::new(up[0], up[1], low[0], low[1])
}

pub fn split4(v: &Vec4) -> (Vec2, Vec2) {
    (Vec2::new(v[0], v[1]), Vec2::new(v[2], v[3]))
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest modulus of a vector-like iterator.
pub fn sup_norm<'a, I: IntoIterator<Item = &'a C64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Entry with the largest |A − Aᴴ|, relative to max |A|: (row, col, deviation).
pub fn hermitian_deviation(m: &CMat) -> (usize, usize, f64) {
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    let mut worst = (0, 0, 0.0);
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm() / scale;
            if d > worst.2 {
                worst = (i, j, d);
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let s1 = sigma1();
        let s2 = sigma2();
        let s3 = sigma3();
        assert_eq!(s1 * s2, s3 * I);
        assert_eq!(s1 * s1, sigma0());
        assert_eq!(kinetic_unit(), s2 * (-I));
    }

    #[test]
    fn kron_of_identity() {
        let k = kron2(&sigma0(), &sigma3());
        assert_eq!(k[(1, 1)], re(-1.0));
        assert_eq!(k[(3, 3)], re(-1.0));
        assert_eq!(k[(0, 2)], re(0.0));
    }
}
