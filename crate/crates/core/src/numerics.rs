//! Small dense complex linear algebra.
//!
//! Everything in this crate works on matrices of size at most 16, so the
//! kernel favours clarity over blocking or SIMD. The matrix exponential is a
//! degree-13 Padé approximant with scaling and squaring; the eigen-solvers
//! delegate the iterative part to `nalgebra` and verify their output here.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerances shared by every module.
pub mod tol {
    /// Exact-in-principle identities (commutators, closure, CCR).
    pub const STRUCTURAL: f64 = 1e-12;
    /// Eigen-pair residuals and cross-checks between spectral routes.
    pub const SPECTRAL: f64 = 1e-9;
    /// Agreement between two routes through time evolution.
    pub const DYNAMICS: f64 = 1e-8;
}

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                op: "from_row_major",
                detail: format!("{} entries for a {rows}x{cols} matrix", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Real matrix given as nested rows.
    pub fn from_real_rows<const R: usize, const C: usize>(rows: [[f64; C]; R]) -> Self {
        Self::from_fn(R, C, |r, c| C64::new(rows[r][c], 0.0))
    }

    pub fn from_rows<const R: usize, const C: usize>(rows: [[C64; C]; R]) -> Self {
        Self::from_fn(R, C, |r, c| rows[r][c])
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { diag[r] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |r, c| {
            self[(r / r2, c / c2)] * other[(r % r2, c % c2)]
        })
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])])
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }

    /// Assemble `[[a, b], [c, d]]` from four equally sized square blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        Self::from_fn(2 * n, 2 * n, |r, col| match (r < n, col < n) {
            (true, true) => a[(r, col)],
            (true, false) => b[(r, col - n)],
            (false, true) => c[(r - n, col)],
            (false, false) => d[(r - n, col - n)],
        })
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    /// Column-stacked vectorization.
    pub fn vec_columns(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self[(r, c)]);
            }
        }
        out
    }

    /// Inverse of [`Self::vec_columns`].
    pub fn unvec_columns(v: &[C64], rows: usize, cols: usize) -> Result<Self> {
        if v.len() != rows * cols {
            return Err(Error::Dimension {
                op: "unvec_columns",
                detail: format!("{} entries for a {rows}x{cols} matrix", v.len()),
            });
        }
        Ok(Self::from_fn(rows, cols, |r, c| v[c * rows + r]))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                op: "mul",
                detail: format!(
                    "{}x{} times {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            });
        }
        Ok(self * other)
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)])
    }

    fn require_square(&self, op: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension {
                op,
                detail: format!("expected a square matrix, got {}x{}", self.rows, self.cols),
            })
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// LU factorization with partial pivoting, packed in place.
struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    fn new(a: &ComplexMatrix) -> Result<Self> {
        a.require_square("lu")?;
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|r| (r, lu[(r, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot == 0.0 {
                return Err(Error::Singular { op: "lu" });
            }
            if p != k {
                for c in 0..n {
                    lu.data.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let d = lu[(k, k)];
            for r in k + 1..n {
                let f = lu[(r, k)] / d;
                lu[(r, k)] = f;
                if f != ZERO {
                    for c in k + 1..n {
                        let u = lu[(k, c)];
                        lu[(r, c)] -= f * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm, swaps })
    }

    fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.rows;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            for c in 0..r {
                let d = self.lu[(r, c)] * x[c];
                x[r] -= d;
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                let d = self.lu[(r, c)] * x[c];
                x[r] -= d;
            }
            x[r] /= self.lu[(r, r)];
        }
        x
    }

    fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.lu.rows;
        let mut out = ComplexMatrix::zeros(n, b.cols);
        for c in 0..b.cols {
            let col: Vec<C64> = (0..n).map(|r| b[(r, c)]).collect();
            for (r, v) in self.solve_vec(&col).into_iter().enumerate() {
                out[(r, c)] = v;
            }
        }
        out
    }

    fn determinant(&self) -> C64 {
        let d: C64 = (0..self.lu.rows).map(|i| self.lu[(i, i)]).product();
        if self.swaps.is_multiple_of(2) {
            d
        } else {
            -d
        }
    }
}

/// Solve `A X = B`.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows != b.rows {
        return Err(Error::Dimension {
            op: "solve",
            detail: format!("{}x{} system with {} right-hand rows", a.rows, a.cols, b.rows),
        });
    }
    Ok(Lu::new(a)?.solve(b))
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.require_square("inverse")?;
    solve(a, &ComplexMatrix::identity(a.rows))
}

pub fn determinant(a: &ComplexMatrix) -> Result<C64> {
    a.require_square("determinant")?;
    match Lu::new(a) {
        Ok(lu) => Ok(lu.determinant()),
        Err(Error::Singular { .. }) => Ok(ZERO),
        Err(e) => Err(e),
    }
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// `e^{tA}` by scaling and squaring with a [13/13] Padé approximant.
pub fn expm(a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    a.require_square("expm")?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("expm time must be finite, got {t}")));
    }
    let n = a.rows;
    let id = ComplexMatrix::identity(n);
    if t == 0.0 {
        return Ok(id);
    }
    let at = a.scale_real(t);
    let norm = at.norm_one();
    if !norm.is_finite() {
        return Err(Error::Numeric {
            op: "expm",
            detail: "non-finite input".into(),
        });
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let x = at.scale_real(0.5f64.powi(squarings));

    let b = PADE13;
    let x2 = &x * &x;
    let x4 = &x2 * &x2;
    let x6 = &x4 * &x2;
    let lin = |c6: f64, c4: f64, c2: f64, c0: f64| -> ComplexMatrix {
        let mut m = &(&x6.scale_real(c6) + &x4.scale_real(c4)) + &x2.scale_real(c2);
        if c0 != 0.0 {
            m = &m + &id.scale_real(c0);
        }
        m
    };
    let u_inner = &(&x6 * &lin(b[13], b[11], b[9], 0.0)) + &lin(b[7], b[5], b[3], b[1]);
    let u = &x * &u_inner;
    let v = &(&x6 * &lin(b[12], b[10], b[8], 0.0)) + &lin(b[6], b[4], b[2], b[0]);

    let mut r = solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(Error::Numeric {
            op: "expm",
            detail: "overflow during squaring".into(),
        });
    }
    Ok(r)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a)?.0)
}

/// Ascending eigenvalues and the matching orthonormal eigenvectors (as columns).
pub fn eigh(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    a.require_square("eig_hermitian")?;
    let scale = a.max_abs().max(1.0);
    let defect = a.hermiticity_defect();
    if defect > tol::STRUCTURAL * scale {
        return Err(Error::NotHermitian { deviation: defect });
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let h = (a + &a.adjoint()).scale_real(0.5);
    let eig = nalgebra::SymmetricEigen::try_new(h.to_nalgebra(), f64::EPSILON, 10_000).ok_or(
        Error::Numeric {
            op: "eig_hermitian",
            detail: "Jacobi/QR sweep did not converge".into(),
        },
    )?;
    let n = a.rows;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let lambda = ComplexMatrix::diagonal(
        &values.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>(),
    );
    let rebuilt = &(&vectors * &lambda) * &vectors.adjoint();
    let residual = rebuilt.max_abs_diff(&h);
    if residual > 1e-10 * scale {
        return Err(Error::Numeric {
            op: "eig_hermitian",
            detail: format!("reconstruction residual {residual:.3e}"),
        });
    }
    Ok((values, vectors))
}

/// Eigenvalues of a general square matrix (complex Schur form), each
/// certified by an inverse-iteration residual.
pub fn eig_general(a: &ComplexMatrix) -> Result<Vec<C64>> {
    a.require_square("eig_general")?;
    let n = a.rows;
    let schur = nalgebra::Schur::try_new(a.to_nalgebra(), f64::EPSILON, 10_000).ok_or(
        Error::Numeric {
            op: "eig_general",
            detail: format!("Schur iteration did not converge for a {n}x{n} matrix"),
        },
    )?;
    let (_, t) = schur.unpack();
    let values: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let scale = a.max_abs().max(1.0);
    for &lambda in &values {
        let (_, residual) = eigenvector(a, lambda)?;
        if residual > tol::SPECTRAL * scale {
            return Err(Error::Numeric {
                op: "eig_general",
                detail: format!("eigenvalue {lambda} has residual {residual:.3e}"),
            });
        }
    }
    Ok(values)
}

/// Unit vector `v` approximately satisfying `A v = λ v`, by inverse
/// iteration, together with the residual `‖A v − λ v‖`.
pub fn eigenvector(a: &ComplexMatrix, lambda: C64) -> Result<(Vec<C64>, f64)> {
    a.require_square("eigenvector")?;
    let n = a.rows;
    let scale = a.max_abs().max(1.0);
    let mut shift = lambda;
    let lu = loop {
        let shifted = a - &ComplexMatrix::identity(n).scale(shift);
        match Lu::new(&shifted) {
            Ok(lu) => break lu,
            Err(Error::Singular { .. }) => shift += C64::new(1e-14 * scale, 1e-14 * scale),
            Err(e) => return Err(e),
        }
    };
    let mut v: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + 0.1 * i as f64, 0.05 * i as f64))
        .collect();
    normalize(&mut v);
    for _ in 0..3 {
        v = lu.solve_vec(&v);
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric {
                op: "eigenvector",
                detail: "inverse iteration overflowed".into(),
            });
        }
        normalize(&mut v);
    }
    let av = a.mul_vec(&v);
    let residual = av
        .iter()
        .zip(&v)
        .map(|(x, y)| (x - lambda * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((v, residual))
}

fn normalize(v: &mut [C64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// `M = −(1+iε)I + γK` built directly, used as a test fixture.
    fn meso_like(eps: f64, gamma: f64, eta: f64) -> ComplexMatrix {
        let s = (1.0 - eta * eta).sqrt();
        let k = ComplexMatrix::from_real_rows([
            [0.0, 0.0, -eta, s],
            [0.0, 0.0, s, eta],
            [-eta, s, 0.0, 0.0],
            [s, eta, 0.0, 0.0],
        ]);
        &ComplexMatrix::identity(4).scale(c(-1.0, -eps)) + &k.scale_real(gamma)
    }

    #[test]
    fn expm_at_zero_is_identity() {
        let a = meso_like(1.0, 0.3, 0.5);
        assert_eq!(expm(&a, 0.0).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn expm_of_diagonal() {
        let a = ComplexMatrix::diagonal(&[c(-1.0, -1.0); 3]);
        let e = expm(&a, 1.0).unwrap();
        let want = (-1.0f64).exp() * c(1.0f64.cos(), -1.0f64.sin());
        for i in 0..3 {
            assert!((e[(i, i)] - want).norm() < 1e-15);
            for j in 0..3 {
                if i != j {
                    assert_eq!(e[(i, j)], ZERO);
                }
            }
        }
    }

    #[test]
    fn expm_matches_cosh_sinh_closed_form() {
        // K² = I gives e^{tM} = e^{-(1+iε)t}(cosh γt I + sinh γt K).
        let (eps, gamma, eta) = (1.0, 0.3, 0.9999);
        let m = meso_like(eps, gamma, eta);
        let k = (&m - &ComplexMatrix::identity(4).scale(c(-1.0, -eps))).scale_real(1.0 / gamma);
        for &t in &[0.1, 1.0, 3.7, 12.0] {
            let pref = (c(-1.0, -eps) * t).exp();
            let want = &ComplexMatrix::identity(4).scale(pref * (gamma * t).cosh())
                + &k.scale(pref * (gamma * t).sinh());
            let got = expm(&m, t).unwrap();
            let rel = got.max_abs_diff(&want) / want.max_abs();
            assert!(rel < 1e-12, "t={t}: relative error {rel:e}");
            // slowest mode decays like e^{-(1-γ)t}
            let envelope = (-(1.0 - gamma) * t).exp();
            assert!(got.max_abs() <= envelope * 1.0 + 1e-15);
        }
    }

    #[test]
    fn expm_rejects_non_square() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(expm(&a, 1.0), Err(Error::Dimension { .. })));
    }

    #[test]
    fn expm_large_norm_uses_squaring() {
        // Rotation generator: e^{tJ} with J = [[0,1],[-1,0]].
        let j = ComplexMatrix::from_real_rows([[0.0, 1.0], [-1.0, 0.0]]);
        let t = 40.0;
        let e = expm(&j, t).unwrap();
        assert_relative_eq!(e[(0, 0)].re, t.cos(), epsilon = 1e-11);
        assert_relative_eq!(e[(0, 1)].re, t.sin(), epsilon = 1e-11);
    }

    #[test]
    fn hermitian_identity_spectrum() {
        let v = eig_hermitian(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(v.len(), 4);
        for x in v {
            assert!((x - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn hermitian_dissipation_like_spectrum() {
        for (gamma, want) in [(0.5, [0.0, 1.0, 1.0, 2.0]), (0.2, [0.6, 1.0, 1.0, 1.4])] {
            let d = ComplexMatrix::from_real_rows([
                [1.0, 0.0, gamma, gamma],
                [0.0, 1.0, gamma, gamma],
                [gamma, gamma, 1.0, 0.0],
                [gamma, gamma, 0.0, 1.0],
            ]);
            let got = eig_hermitian(&d).unwrap();
            for (g, w) in got.iter().zip(want) {
                assert!((g - w).abs() < 1e-12, "{got:?}");
            }
        }
    }

    #[test]
    fn hermitian_rejects_non_hermitian() {
        let a = ComplexMatrix::from_rows([[ONE, I], [I, ONE]]);
        assert!(matches!(eig_hermitian(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn general_eigenvalues_of_diagonal() {
        let mut v = eig_general(&ComplexMatrix::diagonal(&[c(2.0, 0.0), c(3.0, 0.0)])).unwrap();
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((v[0] - c(2.0, 0.0)).norm() < 1e-14);
        assert!((v[1] - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn general_eigenvalues_of_meso_generator() {
        for eta in [0.1, 0.5, 0.99] {
            let m = meso_like(1.0, 0.5, eta);
            let mut v = eig_general(&m).unwrap();
            v.sort_by(|a, b| a.re.total_cmp(&b.re));
            let want = [c(-1.5, -1.0), c(-1.5, -1.0), c(-0.5, -1.0), c(-0.5, -1.0)];
            for (g, w) in v.iter().zip(want) {
                assert!((g - w).norm() < 1e-9, "eta={eta}: {v:?}");
            }
        }
    }

    #[test]
    fn near_defective_eigenvalues() {
        // S diag-ish Jordan perturbation S J S^{-1} with J = [[λ, 1], [δ, λ]].
        let lambda = c(0.7, -0.2);
        let delta = 1e-8;
        let j = ComplexMatrix::from_rows([[lambda, ONE], [c(delta, 0.0), lambda]]);
        let s = ComplexMatrix::from_rows([[c(1.0, 0.5), c(2.0, 0.0)], [c(0.0, -1.0), c(1.0, 1.0)]]);
        let a = &(&s * &j) * &inverse(&s).unwrap();
        let v = eig_general(&a).unwrap();
        let root = delta.sqrt();
        let mut want = [lambda + root, lambda - root];
        let mut got = v.clone();
        got.sort_by(|a, b| a.re.total_cmp(&b.re));
        want.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).norm() < 1e-6, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let a = ComplexMatrix::from_rows([[c(1.0, 1.0), c(2.0, 0.0)], [c(0.0, 3.0), c(4.0, -1.0)]]);
        let det = determinant(&a).unwrap();
        let want = c(1.0, 1.0) * c(4.0, -1.0) - c(2.0, 0.0) * c(0.0, 3.0);
        assert!((det - want).norm() < 1e-14);
        let prod = &a * &inverse(&a).unwrap();
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        assert!(matches!(
            inverse(&ComplexMatrix::zeros(2, 2)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn vectorization_round_trip_and_kron_convention() {
        let a = ComplexMatrix::from_fn(2, 2, |r, c| C64::new(r as f64, c as f64 + 1.0));
        let x = ComplexMatrix::from_fn(2, 2, |r, c| C64::new((r * 2 + c) as f64, -1.0));
        let b = ComplexMatrix::from_fn(2, 2, |r, c| C64::new(1.0 - c as f64, r as f64));
        // vec(AXB) = (Bᵀ ⊗ A) vec(X)
        let lhs = (&(&a * &x) * &b).vec_columns();
        let rhs = b.transpose().kron(&a).mul_vec(&x.vec_columns());
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!((l - r).norm() < 1e-13);
        }
        let back = ComplexMatrix::unvec_columns(&x.vec_columns(), 2, 2).unwrap();
        assert_eq!(back, x);
    }
}
