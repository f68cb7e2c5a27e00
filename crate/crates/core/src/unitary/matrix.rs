//! Small dense complex matrices and the special unitary group.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Tolerance of the unitarity and determinant invariants.
pub const UNITARY_TOL: f64 = 1e-10;
pub const MAX_DIM: usize = 8;
const JACOBI_SWEEPS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitaryError {
    #[error("dimension must be in 1..={MAX_DIM}, got {0}")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not unitary: ‖U*U − I‖ = {0:e}")]
    NotUnitary(f64),
    #[error("determinant is not 1: |det U − 1| = {0:e}")]
    BadDeterminant(f64),
}

/// Row-major `k × k` complex matrix.
#[derive(Clone, PartialEq)]
pub struct Mat {
    k: usize,
    data: Vec<Complex64>,
}

impl Mat {
    pub fn zeros(k: usize) -> Self {
        Mat { k, data: vec![Complex64::new(0.0, 0.0); k * k] }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Mat::zeros(k);
        for i in 0..k {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let k = rows.len();
        assert!(rows.iter().all(|r| r.len() == k), "matrix must be square");
        Mat { k, data: rows.concat() }
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Mat::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let k = self.k;
        let mut out = Mat::zeros(k);
        for i in 0..k {
            for l in 0..k {
                let x = self.data[i * k + l];
                if x.re == 0.0 && x.im == 0.0 {
                    continue;
                }
                for j in 0..k {
                    out.data[i * k + j] += x * other.data[l * k + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Mat {
        let k = self.k;
        let mut out = Mat::zeros(k);
        for i in 0..k {
            for j in 0..k {
                out.data[j * k + i] = self.data[i * k + j].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        Mat { k: self.k, data: self.data.iter().zip(&other.data).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        Mat { k: self.k, data: self.data.iter().zip(&other.data).map(|(x, y)| x - y).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Mat {
        Mat { k: self.k, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.k).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Singular values in decreasing order (one-sided Jacobi).
    pub fn singular_values(&self) -> Vec<f64> {
        let k = self.k;
        // columns of self, stored contiguously
        let mut cols: Vec<Vec<Complex64>> = (0..k).map(|j| (0..k).map(|i| self[(i, j)]).collect()).collect();
        for _ in 0..JACOBI_SWEEPS {
            let mut rotated = false;
            for p in 0..k {
                for q in p + 1..k {
                    let alpha: f64 = cols[p].iter().map(|x| x.norm_sqr()).sum();
                    let beta: f64 = cols[q].iter().map(|x| x.norm_sqr()).sum();
                    let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                    let g = gamma.norm();
                    if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma / g;
                    let zeta = (beta - alpha) / (2.0 * g);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..k {
                        let x = cols[p][i];
                        let y = cols[q][i] * phase.conj();
                        cols[p][i] = x * c - y * s;
                        cols[q][i] = x * s + y * c;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()).collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Operator norm.
    pub fn op_norm(&self) -> f64 {
        self.singular_values()[0]
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let k = self.k;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..k {
            let pivot = (col..k).max_by(|&x, &y| a[x * k + col].norm().total_cmp(&a[y * k + col].norm())).unwrap();
            if a[pivot * k + col].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..k {
                    a.swap(pivot * k + j, col * k + j);
                }
                det = -det;
            }
            let d = a[col * k + col];
            det *= d;
            for row in col + 1..k {
                let f = a[row * k + col] / d;
                for j in col..k {
                    let v = a[col * k + j];
                    a[row * k + j] -= f * v;
                }
            }
        }
        det
    }

    /// Unitary factor of a modified Gram–Schmidt QR (columns), scaled to
    /// determinant 1.
    fn orthonormalize_su(&self) -> Mat {
        let k = self.k;
        let mut cols: Vec<Vec<Complex64>> = (0..k).map(|j| (0..k).map(|i| self[(i, j)]).collect()).collect();
        for j in 0..k {
            for p in 0..j {
                let r: Complex64 = cols[p].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                let (head, tail) = cols.split_at_mut(j);
                for (y, x) in tail[0].iter_mut().zip(&head[p]) {
                    *y -= r * x;
                }
            }
            let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for y in cols[j].iter_mut() {
                *y /= norm;
            }
        }
        let mut q = Mat::zeros(k);
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                q[(i, j)] = x;
            }
        }
        let det = q.det();
        let fix = Complex64::from_polar(1.0, -det.arg() / k as f64);
        q.scale(fix)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.k + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.k + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.k)
            .map(|i| (0..self.k).map(|j| format!("{:.6}{:+.6}i", self[(i, j)].re, self[(i, j)].im)).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

/// An element of `SU(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    m: Mat,
}

impl UnitaryMatrix {
    /// Checks `‖U*U − I‖ ≤ 10⁻¹⁰` and `|det U − 1| ≤ 10⁻¹⁰`.
    pub fn new(m: Mat) -> Result<Self, UnitaryError> {
        let k = m.dim();
        if k == 0 || k > MAX_DIM {
            return Err(UnitaryError::UnsupportedDimension(k));
        }
        let drift = unitarity_drift(&m);
        if drift > UNITARY_TOL {
            return Err(UnitaryError::NotUnitary(drift));
        }
        let det_err = (m.det() - 1.0).norm();
        if det_err > UNITARY_TOL {
            return Err(UnitaryError::BadDeterminant(det_err));
        }
        Ok(UnitaryMatrix { m })
    }

    pub fn identity(k: usize) -> Self {
        UnitaryMatrix { m: Mat::identity(k) }
    }

    /// `diag(e^{iθ}, e^{−iθ})` padded with ones.
    pub fn rotation(k: usize, theta: f64) -> Self {
        assert!(k >= 2);
        let mut d = vec![Complex64::new(1.0, 0.0); k];
        d[0] = Complex64::from_polar(1.0, theta);
        d[1] = Complex64::from_polar(1.0, -theta);
        UnitaryMatrix { m: Mat::diagonal(&d) }
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn as_mat(&self) -> &Mat {
        &self.m
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix { m: self.m.mul(&other.m) }
    }

    pub fn inverse(&self) -> UnitaryMatrix {
        UnitaryMatrix { m: self.m.adjoint() }
    }

    /// `‖U*U − I‖`.
    pub fn drift(&self) -> f64 {
        unitarity_drift(&self.m)
    }

    /// Nearest-by-Gram–Schmidt element of `SU(k)`.
    pub fn reorthonormalize(&self) -> UnitaryMatrix {
        UnitaryMatrix { m: self.m.orthonormalize_su() }
    }

    /// `self · P(I + scale·G)`, a random nearby element.
    pub(crate) fn perturb<R: Rng>(&self, scale: f64, rng: &mut R) -> UnitaryMatrix {
        let k = self.dim();
        let g = gaussian(k, rng).scale(Complex64::new(scale, 0.0));
        UnitaryMatrix { m: self.m.add(&self.m.mul(&g)).orthonormalize_su() }
    }
}

fn unitarity_drift(m: &Mat) -> f64 {
    m.adjoint().mul(m).sub(&Mat::identity(m.dim())).op_norm()
}

fn gaussian<R: Rng>(k: usize, rng: &mut R) -> Mat {
    let mut g = Mat::zeros(k);
    for i in 0..k {
        for j in 0..k {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g[(i, j)] = Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
        }
    }
    g
}

/// Haar-random element of `SU(k)`: unitary factor of the QR decomposition
/// of a complex Gaussian matrix (positive diagonal in `R`), divided by a
/// `k`-th root of its determinant.
pub fn random_su<R: Rng>(k: usize, rng: &mut R) -> UnitaryMatrix {
    assert!((1..=MAX_DIM).contains(&k), "dimension must be in 1..={MAX_DIM}");
    if k == 1 {
        return UnitaryMatrix::identity(1);
    }
    UnitaryMatrix { m: gaussian(k, rng).orthonormalize_su() }
}

/// `d(1, U) = ‖I − U‖`, the largest singular value of `I − U`.
pub fn dist_identity(u: &UnitaryMatrix) -> f64 {
    Mat::identity(u.dim()).sub(u.as_mat()).op_norm()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn singular_values_of_known_matrices() {
        let d = Mat::diagonal(&[c(3.0, 0.0), c(0.0, -1.0), c(0.5, 0.5)]);
        let sv = d.singular_values();
        assert!((sv[0] - 3.0).abs() < 1e-14 && (sv[1] - 1.0).abs() < 1e-14);
        assert!((sv[2] - 0.5f64.hypot(0.5)).abs() < 1e-14);
        // [[1, 1], [0, 1]]: singular values are golden ratio and its inverse
        let m = Mat::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let sv = m.singular_values();
        assert!((sv[0] - phi).abs() < 1e-14 && (sv[1] - 1.0 / phi).abs() < 1e-14);
    }

    #[test]
    fn jacobi_agrees_with_eigenvalues_of_gram_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 2..=4 {
            for _ in 0..20 {
                let g = gaussian(k, &mut rng);
                let sv = g.singular_values();
                // sum of squares equals the Frobenius norm squared
                let total: f64 = sv.iter().map(|s| s * s).sum();
                assert!((total - g.frobenius().powi(2)).abs() < 1e-12 * total);
                // product equals |det|
                let prod: f64 = sv.iter().product();
                assert!((prod - g.det().norm()).abs() < 1e-12 * prod.max(1.0));
            }
        }
    }

    #[test]
    fn dist_identity_examples() {
        assert_eq!(dist_identity(&UnitaryMatrix::identity(3)), 0.0);
        for theta in [0.1, 1.0, 2.5, std::f64::consts::PI] {
            let u = UnitaryMatrix::rotation(2, theta);
            assert!((dist_identity(&u) - 2.0 * (theta / 2.0).sin().abs()).abs() < 1e-12);
        }
        let minus = UnitaryMatrix::new(Mat::identity(4).scale(c(-1.0, 0.0))).unwrap();
        assert!((dist_identity(&minus) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn haar_samples_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 1..=MAX_DIM {
            for _ in 0..5 {
                let u = random_su(k, &mut rng);
                assert!(UnitaryMatrix::new(u.as_mat().clone()).is_ok(), "k = {k}");
            }
        }
        assert_eq!(random_su(1, &mut rng), UnitaryMatrix::identity(1));
    }

    #[test]
    fn invariant_violations_are_reported() {
        let m = Mat::identity(2).scale(c(2.0, 0.0));
        assert!(matches!(UnitaryMatrix::new(m), Err(UnitaryError::NotUnitary(_))));
        let m = Mat::diagonal(&[c(0.0, 1.0), c(0.0, 1.0)]);
        assert!(matches!(UnitaryMatrix::new(m), Err(UnitaryError::BadDeterminant(_))));
        assert!(matches!(UnitaryMatrix::new(Mat::identity(9)), Err(UnitaryError::UnsupportedDimension(9))));
    }

    #[test]
    fn perturbation_stays_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_su(3, &mut rng);
        let v = u.perturb(1e-3, &mut rng);
        assert!(v.drift() < 1e-12);
        assert!(dist_identity(&u.inverse().mul(&v)) < 1e-2);
    }
}
