//! Small dense complex matrices and a cyclic Jacobi eigensolver for Hermitian input.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { ZERO })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, data }
    }

    /// Real matrix from rows; panics on ragged input.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        Self::from_fn(n, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        Self::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * other[(k, j)]).sum())
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    pub fn sub(&self, other: &CMatrix) -> Self {
        Self::from_fn(self.n, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// `‖A - A*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).frobenius_norm()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenpairs of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    /// Sorted descending.
    pub values: Vec<f64>,
    /// Column `i` is the unit eigenvector for `values[i]`.
    pub vectors: CMatrix,
}

impl Eigen {
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.column(i)
    }
}

/// Relative tolerance on `‖A - A*‖_F / ‖A‖_F` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Right-multiplies columns `p`, `q` of `m` by the 2×2 block `[[jpp, jpq], [jqp, jqq]]`.
fn rotate_columns(m: &mut CMatrix, p: usize, q: usize, j: [Complex64; 4]) {
    for r in 0..m.n {
        let (a, b) = (m[(r, p)], m[(r, q)]);
        m[(r, p)] = a * j[0] + b * j[2];
        m[(r, q)] = a * j[1] + b * j[3];
    }
}

/// Left-multiplies rows `p`, `q` of `m` by the adjoint of the block.
fn rotate_rows(m: &mut CMatrix, p: usize, q: usize, j: [Complex64; 4]) {
    for c in 0..m.n {
        let (a, b) = (m[(p, c)], m[(q, c)]);
        m[(p, c)] = j[0].conj() * a + j[2].conj() * b;
        m[(q, c)] = j[1].conj() * a + j[3].conj() * b;
    }
}

/// Cyclic Jacobi diagonalization `G = Y Λ Y*`.
///
/// Eigenvalues are sorted descending with ties kept in index order; each
/// eigenvector's first component of modulus above 1e-12 is real positive.
pub fn hermitian_eig(g: &CMatrix) -> Result<Eigen> {
    let n = g.n;
    let scale = g.frobenius_norm();
    let defect = g.hermitian_defect();
    if defect > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian(defect / scale.max(f64::MIN_POSITIVE)));
    }
    // Symmetrize so round-off asymmetry does not leak into the rotations.
    let mut a = CMatrix::from_fn(n, |i, j| 0.5 * (g[(i, j)] + g[(j, i)].conj()));
    let mut v = CMatrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let modulus = b.norm();
                if modulus <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = Complex64::new(b.re / modulus, -b.im / modulus); // e^{-iφ}
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                let theta = (aqq - app) / (2.0 * modulus);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let block = [Complex64::new(c, 0.0), Complex64::new(s, 0.0), -phase * s, phase * c];
                rotate_columns(&mut a, p, q, block);
                rotate_rows(&mut a, p, q, block);
                rotate_columns(&mut v, p, q, block);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    for c in 0..n {
        if let Some(r) = (0..n).find(|&r| vectors[(r, c)].norm() > 1e-12) {
            let z = vectors[(r, c)];
            let fix = z.conj() / z.norm();
            for r in 0..n {
                vectors[(r, c)] *= fix;
            }
        }
    }
    Ok(Eigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn min_matrix(n: usize, power: i32) -> CMatrix {
        CMatrix::from_fn(n, |i, j| Complex64::new(((i.min(j) + 1) as f64).powi(power), 0.0))
    }

    fn check_decomposition(g: &CMatrix, e: &Eigen) {
        let n = g.dim();
        let scale = g.frobenius_norm().max(1.0);
        for i in 0..n {
            let y = e.vector(i);
            let gy = g.matvec(&y);
            let res: f64 = gy.iter().zip(&y).map(|(a, b)| (a - b * e.values[i]).norm_sqr()).sum();
            assert!(res.sqrt() <= 1e-10 * scale, "residual {res:e}");
        }
        let gram = e.vectors.adjoint().matmul(&e.vectors);
        assert!(gram.sub(&CMatrix::identity(n)).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = hermitian_eig(&CMatrix::identity(4)).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
        assert_eq!(e.vectors, CMatrix::identity(4));
    }

    #[test]
    fn min_matrix_spectrum() {
        // [min(i, j)]_{n×n} is the inverse of a tridiagonal matrix with
        // eigenvalues 4 sin²((2k-1)π/(2(2n+1))).
        let g = min_matrix(4, 1);
        let e = hermitian_eig(&g).unwrap();
        for (k, v) in e.values.iter().enumerate() {
            let oracle = 1.0 / (4.0 * ((2 * k + 1) as f64 * PI / 18.0).sin().powi(2));
            assert!((v - oracle).abs() < 1e-12, "{v} vs {oracle}");
        }
        assert!((e.values.iter().sum::<f64>() - 10.0).abs() < 1e-10);
        check_decomposition(&g, &e);
    }

    #[test]
    fn squared_min_matrix_spectrum() {
        let g = min_matrix(4, 2);
        let e = hermitian_eig(&g).unwrap();
        let golden = [23.84167902, 3.76814528, 1.70447606, 0.68569963];
        for (v, w) in e.values.iter().zip(golden) {
            assert!((v - w).abs() < 1e-7);
        }
        check_decomposition(&g, &e);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut g = CMatrix::identity(3);
        g[(0, 1)] = Complex64::new(0.5, 0.0);
        assert!(matches!(hermitian_eig(&g), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn ties_keep_index_order_and_phase_is_fixed() {
        let mut g = CMatrix::identity(3);
        g[(2, 2)] = Complex64::new(2.0, 0.0);
        let e = hermitian_eig(&g).unwrap();
        assert_eq!(e.values, vec![2.0, 1.0, 1.0]);
        assert_eq!(e.vector(1)[0], Complex64::new(1.0, 0.0));
        assert_eq!(e.vector(2)[1], Complex64::new(1.0, 0.0));
    }

    fn hermitian_from(entries: &[(f64, f64)], n: usize) -> CMatrix {
        let mut g = CMatrix::zeros(n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                let (re, im) = entries[k];
                k += 1;
                if i == j {
                    g[(i, i)] = Complex64::new(re, 0.0);
                } else {
                    g[(i, j)] = Complex64::new(re, im);
                    g[(j, i)] = Complex64::new(re, -im);
                }
            }
        }
        g
    }

    proptest! {
        #[test]
        fn random_hermitian_decomposes(
            n in 1usize..7,
            entries in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 28),
        ) {
            let g = hermitian_from(&entries, n);
            let e = hermitian_eig(&g).unwrap();
            check_decomposition(&g, &e);
            prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            let trace: f64 = e.values.iter().sum();
            prop_assert!((trace - g.trace().re).abs() <= 1e-10 * g.frobenius_norm().max(1.0));
            for c in 0..n {
                let col = e.vector(c);
                let first = col.iter().find(|z| z.norm() > 1e-12).unwrap();
                prop_assert!(first.im.abs() < 1e-14 && first.re > 0.0);
            }
        }
    }
}
