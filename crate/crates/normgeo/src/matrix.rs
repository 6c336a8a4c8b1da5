//! Dense matrices over the scalars, with the few factorizations the
//! toolkit needs: LU solves, rank/nullspace by elimination, a cyclic
//! Jacobi eigensolver for Hermitian matrices, and an SVD built on it.
//!
//! Dimensions here are small (desk scale), so everything is plain O(n^3)
//! with no blocking.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "repr::MatrixRepr", into = "repr::MatrixRepr")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>, // row-major
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyVector);
        }
        Ok(Self {
            rows,
            cols,
            data: vec![Scalar::new(0.0, 0.0); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m[(i, i)] = Scalar::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyVector);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: rows.iter().map(|r| r.len()).find(|&l| l != cols).unwrap(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vector]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::EmptyVector);
        }
        let rows = cols[0].dim();
        let mut m = Self::zeros(rows, cols.len())?;
        for (j, c) in cols.iter().enumerate() {
            if c.dim() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: c.dim(),
                });
            }
            for i in 0..rows {
                m[(i, j)] = c[i];
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_vec(&self, i: usize) -> Vector {
        Vector::new((0..self.cols).map(|j| self[(i, j)]).collect()).expect("cols >= 1")
    }

    pub fn col_vec(&self, j: usize) -> Vector {
        Vector::new((0..self.rows).map(|i| self[(i, j)]).collect()).expect("rows >= 1")
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows).expect("nonempty");
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn conj(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Matrix {
        self.transpose().conj()
    }

    pub fn scale(&self, alpha: Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * alpha).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.dim(),
            });
        }
        let mut out = vec![Scalar::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[i] += self[(i, j)] * v[j];
            }
        }
        Vector::new(out)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let scale = 1.0 + self.max_abs();
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > rel_tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Solve `A x = b` for square `A` by LU with partial pivoting.
    pub fn lu_solve(&self, b: &Vector) -> Result<Vector> {
        let lu = LuFactors::new(self)?;
        lu.solve(b)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let lu = LuFactors::new(self)?;
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            cols.push(lu.solve(&Vector::basis(n, k)?)?);
        }
        Matrix::from_cols(&cols)
    }

    /// Rank by Gaussian elimination with partial pivoting; a pivot counts
    /// when its modulus exceeds `rel_tol` times the largest entry.
    pub fn rank(&self, rel_tol: f64) -> usize {
        self.echelon(rel_tol).1.len()
    }

    /// Basis of the (right) nullspace `{x : A x = 0}`.
    pub fn nullspace(&self, rel_tol: f64) -> Vec<Vector> {
        let (ech, pivot_cols) = self.echelon(rel_tol);
        let rank = pivot_cols.len();
        let n = self.cols;
        if rank == n {
            return Vec::new();
        }
        let free: Vec<usize> = (0..n).filter(|j| !pivot_cols.contains(j)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut x = vec![Scalar::new(0.0, 0.0); n];
            x[f] = Scalar::new(1.0, 0.0);
            // back-substitute through the echelon rows
            for r in (0..rank).rev() {
                let pc = pivot_cols[r];
                let mut s = Scalar::new(0.0, 0.0);
                for j in (pc + 1)..n {
                    s += ech[(r, j)] * x[j];
                }
                x[pc] = -s / ech[(r, pc)];
            }
            basis.push(Vector::new(x).expect("n >= 1"));
        }
        basis
    }

    // Row echelon form; returns the reduced matrix and the pivot columns
    // (increasing, one per leading row).
    fn echelon(&self, rel_tol: f64) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let tol = rel_tol * (1.0 + self.max_abs());
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..m.cols {
            if r >= m.rows {
                break;
            }
            let (best, mag) = (r..m.rows)
                .map(|i| (i, m[(i, j)].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if mag <= tol {
                continue;
            }
            if best != r {
                for c in 0..m.cols {
                    let t = m[(r, c)];
                    m[(r, c)] = m[(best, c)];
                    m[(best, c)] = t;
                }
            }
            for i in (r + 1)..m.rows {
                let f = m[(i, j)] / m[(r, j)];
                if f.norm() == 0.0 {
                    continue;
                }
                m[(i, j)] = Scalar::new(0.0, 0.0);
                for c in (j + 1)..m.cols {
                    let v = m[(r, c)];
                    m[(i, c)] -= f * v;
                }
            }
            pivots.push(j);
            r += 1;
        }
        (m, pivots)
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi
    /// rotations. Sweeps run until the off-diagonal Frobenius mass drops
    /// below `tol` times the total Frobenius norm (quadratic convergence
    /// makes the final sweep land near machine precision).
    pub fn hermitian_eigen(&self, tol: f64, max_sweeps: usize) -> Result<HermitianEigen> {
        if self.rows != self.cols {
            return Err(Error::NotHermitian);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut v = Matrix::identity(n)?;
        let frob = self.frobenius().max(f64::MIN_POSITIVE);
        let threshold = tol.max(1e-15) * frob;

        let mut converged = n == 1;
        for _ in 0..max_sweeps {
            if off_diag_mass(&a) <= threshold {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let g = a[(p, q)];
                    if g.norm() <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let alpha = a[(p, p)].re;
                    let beta = a[(q, q)].re;
                    let phi = g.im.atan2(g.re);
                    let theta = 0.5 * (2.0 * g.norm()).atan2(alpha - beta);
                    let (s, c) = theta.sin_cos();
                    let e_m = Scalar::from_polar(1.0, -phi);
                    // U restricted to the (p,q) plane:
                    //   [ c        -s      ]
                    //   [ s e^-iφ   c e^-iφ ]
                    let upp = Scalar::new(c, 0.0);
                    let upq = Scalar::new(-s, 0.0);
                    let uqp = e_m * s;
                    let uqq = e_m * c;
                    // columns: A <- A U, V <- V U
                    for i in 0..n {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = aip * upp + aiq * uqp;
                        a[(i, q)] = aip * upq + aiq * uqq;
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = vip * upp + viq * uqp;
                        v[(i, q)] = vip * upq + viq * uqq;
                    }
                    // rows: A <- U^H A
                    for j in 0..n {
                        let apj = a[(p, j)];
                        let aqj = a[(q, j)];
                        a[(p, j)] = upp.conj() * apj + uqp.conj() * aqj;
                        a[(q, j)] = upq.conj() * apj + uqq.conj() * aqj;
                    }
                }
            }
        }
        if !converged && off_diag_mass(&a) > threshold {
            return Err(Error::NonConvergence {
                iterations: max_sweeps,
            });
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
        let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
        let eigenvectors = order.iter().map(|&i| v.col_vec(i)).collect();
        Ok(HermitianEigen {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Thin SVD via the Jacobi eigendecomposition of `A^H A`.
    ///
    /// `sigma` holds all `cols` singular values in descending order
    /// (clipped at zero); `u`/`v` keep only the pairs with
    /// `sigma > cutoff * sigma_max`.
    pub fn svd(&self, tol: f64, max_sweeps: usize) -> Result<Svd> {
        let gram = self.conj_transpose().mul(self)?;
        let eig = gram.hermitian_eigen(tol, max_sweeps)?;
        // eigenvalues of A^H A below rounding level are exact zeros;
        // without clipping, sqrt turns O(eps) noise into O(sqrt(eps))
        // spurious singular values
        let lam_max = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
        let floor = 64.0 * f64::EPSILON * lam_max;
        let mut pairs: Vec<(f64, Vector)> = eig
            .eigenvalues
            .iter()
            .zip(eig.eigenvectors)
            .map(|(&l, v)| (if l <= floor { 0.0 } else { l.sqrt() }, v))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let sigma: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let sigma_max = sigma.first().copied().unwrap_or(0.0);
        let cutoff = 1e-12 * sigma_max;
        let mut u = Vec::new();
        let mut v = Vec::new();
        for (s, vi) in &pairs {
            if *s > cutoff && *s > 0.0 {
                let ui = self.mul_vec(vi)?.scale(Scalar::new(1.0 / s, 0.0));
                u.push(ui);
                v.push(vi.clone());
            }
        }
        Ok(Svd { sigma, u, v })
    }
}

/// Sorted eigensystem of a Hermitian matrix (ascending eigenvalues,
/// orthonormal eigenvector columns).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vector>,
}

/// Thin singular value decomposition.
#[derive(Debug, Clone)]
pub struct Svd {
    /// All singular values, descending (length = cols of the input).
    pub sigma: Vec<f64>,
    /// Left singular vectors for the non-negligible singular values.
    pub u: Vec<Vector>,
    /// Matching right singular vectors.
    pub v: Vec<Vector>,
}

fn off_diag_mass(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

struct LuFactors {
    lu: Matrix,
    perm: Vec<usize>,
}

impl LuFactors {
    fn new(a: &Matrix) -> Result<Self> {
        if a.rows != a.cols {
            return Err(Error::DimensionMismatch {
                expected: a.rows,
                got: a.cols,
            });
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (piv, mag) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if mag <= 1e-14 * scale {
                return Err(Error::SingularMatrix);
            }
            if piv != k {
                perm.swap(piv, k);
                for c in 0..n {
                    let t = lu[(k, c)];
                    lu[(k, c)] = lu[(piv, c)];
                    lu[(piv, c)] = t;
                }
            }
            for i in (k + 1)..n {
                let f = lu[(i, k)] / lu[(k, k)];
                lu[(i, k)] = f;
                for j in (k + 1)..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    fn solve(&self, b: &Vector) -> Result<Vector> {
        let n = self.lu.rows;
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.dim(),
            });
        }
        let mut y: Vec<Scalar> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 1..n {
            for j in 0..i {
                let f = self.lu[(i, j)] * y[j];
                y[i] -= f;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let f = self.lu[(i, j)] * y[j];
                y[i] -= f;
            }
            y[i] /= self.lu[(i, i)];
        }
        Vector::new(y)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

mod repr {
    use super::*;

    /// Rows of entries; an entry is a number (real) or an `[re, im]` pair.
    #[derive(Serialize, Deserialize)]
    pub struct MatrixRepr(Vec<Vec<EntryRepr>>);

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum EntryRepr {
        Real(f64),
        Complex([f64; 2]),
    }

    impl From<Matrix> for MatrixRepr {
        fn from(m: Matrix) -> Self {
            let real = m.is_real();
            MatrixRepr(
                (0..m.rows())
                    .map(|i| {
                        (0..m.cols())
                            .map(|j| {
                                let z = m[(i, j)];
                                if real {
                                    EntryRepr::Real(z.re)
                                } else {
                                    EntryRepr::Complex([z.re, z.im])
                                }
                            })
                            .collect()
                    })
                    .collect(),
            )
        }
    }

    impl TryFrom<MatrixRepr> for Matrix {
        type Error = Error;
        fn try_from(r: MatrixRepr) -> Result<Matrix> {
            Matrix::from_rows(
                r.0.into_iter()
                    .map(|row| {
                        row.into_iter()
                            .map(|e| match e {
                                EntryRepr::Real(x) => Scalar::new(x, 0.0),
                                EntryRepr::Complex([re, im]) => Scalar::new(re, im),
                            })
                            .collect()
                    })
                    .collect(),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::scalar::Mode;

    fn random_hermitian(n: usize, seed: u64, mode: Mode) -> Matrix {
        let mut rng = sampling::rng(seed);
        let mut m = Matrix::zeros(n, n).unwrap();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = sampling::gaussian_scalar(&mut rng, mode);
            }
        }
        let h = m.conj_transpose();
        m.add(&h).unwrap().scale(Scalar::new(0.5, 0.0))
    }

    #[test]
    fn lu_solve_round_trip() {
        let mut rng = sampling::rng(11);
        for n in 1..=6 {
            let mut a = Matrix::zeros(n, n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = sampling::gaussian_scalar(&mut rng, Mode::Complex);
                }
            }
            let x = sampling::gaussian_vector(&mut rng, n, Mode::Complex);
            let b = a.mul_vec(&x).unwrap();
            let got = a.lu_solve(&b).unwrap();
            assert!(got.sub(&x).unwrap().norm2() < 1e-9 * (1.0 + x.norm2()));
        }
    }

    #[test]
    fn jacobi_diagonalizes_random_hermitian() {
        for (seed, mode) in [(1, Mode::Real), (2, Mode::Complex), (3, Mode::Complex)] {
            let a = random_hermitian(6, seed, mode);
            let eig = a.hermitian_eigen(1e-13, 60).unwrap();
            // reconstruct A = V diag(L) V^H
            let v = Matrix::from_cols(&eig.eigenvectors).unwrap();
            let mut d = Matrix::zeros(6, 6).unwrap();
            for i in 0..6 {
                d[(i, i)] = Scalar::new(eig.eigenvalues[i], 0.0);
            }
            let rec = v.mul(&d).unwrap().mul(&v.conj_transpose()).unwrap();
            let err = rec.add(&a.scale(Scalar::new(-1.0, 0.0))).unwrap().max_abs();
            assert!(err < 1e-10 * (1.0 + a.max_abs()), "err {err}");
            // eigenvectors orthonormal
            let gram = v.conj_transpose().mul(&v).unwrap();
            let id = Matrix::identity(6).unwrap();
            let oerr = gram
                .add(&id.scale(Scalar::new(-1.0, 0.0)))
                .unwrap()
                .max_abs();
            assert!(oerr < 1e-10, "orthonormality {oerr}");
            // ascending order
            for w in eig.eigenvalues.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn svd_reconstructs() {
        let mut rng = sampling::rng(5);
        for (m, n) in [(3, 5), (5, 3), (4, 4)] {
            let mut a = Matrix::zeros(m, n).unwrap();
            for i in 0..m {
                for j in 0..n {
                    a[(i, j)] = sampling::gaussian_scalar(&mut rng, Mode::Complex);
                }
            }
            let svd = a.svd(1e-13, 60).unwrap();
            let mut rec = Matrix::zeros(m, n).unwrap();
            for ((s, u), v) in svd.sigma.iter().zip(&svd.u).zip(&svd.v) {
                for i in 0..m {
                    for j in 0..n {
                        rec[(i, j)] += u[i] * v[j].conj() * Scalar::new(*s, 0.0);
                    }
                }
            }
            let err = rec.add(&a.scale(Scalar::new(-1.0, 0.0))).unwrap().max_abs();
            assert!(err < 1e-9, "svd reconstruction err {err}");
            for w in svd.sigma.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn nullspace_and_rank() {
        // rows: (1,0,1), (0,1,1) -> rank 2, nullspace spanned by (1,1,-1)
        let a = Matrix::from_real_rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]]).unwrap();
        assert_eq!(a.rank(1e-12), 2);
        let ns = a.nullspace(1e-12);
        assert_eq!(ns.len(), 1);
        let x = &ns[0];
        let ax = a.mul_vec(x).unwrap();
        assert!(ax.norm2() < 1e-12);
    }

    #[test]
    fn matrix_json_round_trip() {
        let a = Matrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[[1.0,2.0],[3.0,4.0]]");
        assert_eq!(serde_json::from_str::<Matrix>(&s).unwrap(), a);

        let mut c = Matrix::zeros(1, 2).unwrap();
        c[(0, 0)] = Scalar::new(1.0, -1.0);
        c[(0, 1)] = Scalar::new(0.0, 2.0);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, "[[[1.0,-1.0],[0.0,2.0]]]");
        assert_eq!(serde_json::from_str::<Matrix>(&s).unwrap(), c);
    }
}
