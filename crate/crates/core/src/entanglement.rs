//! Entanglement between `a₁` (chain 1) and `b₁` (chain 2).
//!
//! Covariances are normalized so that the vacuum maps to the identity and the
//! separability threshold on the partially transposed symplectic spectrum is 1.
//! Logarithmic negativity uses the natural logarithm.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mesoscopic::FluctuationGaussianState;
use crate::numerics::{self, tol, ComplexMatrix, I};

/// Symmetrized moments `½⟨{A_μ, A_ν†}⟩` with `A = (a₁, a₁†, b₁, b₁†)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentBlock(pub ComplexMatrix);

/// Indices of `a₁, a₁†, b₁, b₁†` in the eight-mode ordering.
const A1B1: [usize; 4] = [0, 4, 2, 6];

pub fn reduce_to_a1b1(s: &FluctuationGaussianState) -> MomentBlock {
    MomentBlock(s.covariance().submatrix(&A1B1, &A1B1))
}

/// Change basis from symmetrized mode moments to the vacuum-normalized
/// quadrature covariance `σ_n = 2 Re(U Σ U†)`, with `x = (a + a†)/√2` and
/// `p = (a − a†)/(i√2)`. `pairs[j]` gives the positions of `(a_j, a_j†)` in
/// `sigma`; the output is ordered `(x₁, p₁, x₂, p₂, …)`.
pub fn moments_to_quadrature(sigma: &ComplexMatrix, pairs: &[(usize, usize)]) -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = ComplexMatrix::zeros(2 * pairs.len(), sigma.rows());
    for (j, &(ia, id)) in pairs.iter().enumerate() {
        u[(2 * j, ia)] = C64::new(h, 0.0);
        u[(2 * j, id)] = C64::new(h, 0.0);
        u[(2 * j + 1, ia)] = -I * h;
        u[(2 * j + 1, id)] = I * h;
    }
    (&(&u * sigma) * &u.adjoint()).scale_real(2.0)
}

/// Real symmetric 4×4 covariance over `(x_a, p_a, x_b, p_b)`, vacuum ↦ identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureCovariance(pub [[f64; 4]; 4]);

impl QuadratureCovariance {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self(m)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(self.0)
    }

    fn block(&self, r: usize, c: usize) -> [[f64; 2]; 2] {
        [
            [self.0[r][c], self.0[r][c + 1]],
            [self.0[r + 1][c], self.0[r + 1][c + 1]],
        ]
    }

    /// Local block of mode `a`.
    pub fn a(&self) -> [[f64; 2]; 2] {
        self.block(0, 0)
    }

    /// Local block of mode `b`.
    pub fn b(&self) -> [[f64; 2]; 2] {
        self.block(2, 2)
    }

    /// Correlation block between `a` and `b`.
    pub fn c(&self) -> [[f64; 2]; 2] {
        self.block(0, 2)
    }

    pub fn determinant(&self) -> f64 {
        numerics::determinant(&self.to_matrix())
            .map(|d| d.re)
            .unwrap_or(f64::NAN)
    }

    /// Partial transposition on `b`: `p_b ↦ −p_b`.
    pub fn partial_transpose(&self) -> Self {
        let sign = [1.0, 1.0, 1.0, -1.0];
        let mut m = self.0;
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v *= sign[r] * sign[c];
            }
        }
        Self(m)
    }

    /// Conjugate by a 4×4 real matrix: `S σ Sᵀ`.
    pub fn transformed(&self, s: &[[f64; 4]; 4]) -> Self {
        let mut out = [[0.0; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = (0..4)
                    .flat_map(|i| (0..4).map(move |j| (i, j)))
                    .map(|(i, j)| s[r][i] * self.0[i][j] * s[c][j])
                    .sum();
            }
        }
        Self(out)
    }

    /// Add classical noise `c·I`.
    pub fn with_added_noise(&self, c: f64) -> Self {
        let mut m = self.0;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += c;
        }
        Self(m)
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_eigenvalues(&self.to_matrix())
    }

    /// Uncertainty relation `σ_n + iΩ_n ⪰ 0`, i.e. all symplectic eigenvalues ≥ 1.
    pub fn is_physical(&self) -> Result<bool> {
        Ok(self.symplectic_eigenvalues()?[0] >= 1.0 - tol::SPECTRAL)
    }
}

fn det2(m: [[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Standard symplectic form `⊕ [[0, 1], [−1, 0]]` on `n` modes.
pub fn symplectic_form(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(2 * n, 2 * n, |r, c| {
        if r / 2 != c / 2 {
            C64::new(0.0, 0.0)
        } else {
            match (r % 2, c % 2) {
                (0, 1) => C64::new(1.0, 0.0),
                (1, 0) => C64::new(-1.0, 0.0),
                _ => C64::new(0.0, 0.0),
            }
        }
    })
}

/// Ascending symplectic eigenvalues, `|spec(iΩσ)|` with each pair counted once.
pub fn symplectic_eigenvalues(sigma: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = sigma.rows() / 2;
    let omega = symplectic_form(n).scale(I);
    let ev = numerics::eig_general(&(&omega * sigma))?;
    let mut mags: Vec<f64> = ev.iter().map(|z| z.norm()).collect();
    mags.sort_by(f64::total_cmp);
    Ok(mags.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

pub fn to_quadrature(block: &MomentBlock) -> Result<QuadratureCovariance> {
    let m = &block.0;
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::Dimension {
            op: "to_quadrature",
            detail: format!("expected 4x4 moment block, got {}x{}", m.rows(), m.cols()),
        });
    }
    // (a, a†) swap-conjugation: Σ(P(μ), P(ν)) = Σ(μ, ν)*
    let partner = [1, 0, 3, 2];
    let swapped = ComplexMatrix::from_fn(4, 4, |r, c| m[(partner[r], partner[c])].conj());
    let defect = m.max_abs_diff(&swapped).max(m.hermiticity_defect());
    let scale = m.max_abs().max(1.0);
    if defect > 1e-10 * scale {
        return Err(Error::Contract(format!(
            "moment block violates swap symmetry by {defect:.3e}"
        )));
    }
    let q = moments_to_quadrature(m, &[(0, 1), (2, 3)]);
    let imag = q.as_slice().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > 1e-10 * scale {
        return Err(Error::Contract(format!(
            "quadrature covariance has imaginary part {imag:.3e}"
        )));
    }
    let mut out = [[0.0; 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = 0.5 * (q[(r, c)].re + q[(c, r)].re);
        }
    }
    Ok(QuadratureCovariance(out))
}

fn inv2(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let d = det2(m);
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

fn mul2(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Local symplectic `S = √(√det m) · m^{−1/2}` with `S m Sᵀ = √det m · I`.
fn local_normalizer(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let s = det2(m).sqrt();
    let t = (m[0][0] + m[1][1] + 2.0 * s).sqrt();
    let root = [[(m[0][0] + s) / t, m[0][1] / t], [m[1][0] / t, (m[1][1] + s) / t]];
    let inv = inv2(root);
    let k = s.sqrt();
    [[k * inv[0][0], k * inv[0][1]], [k * inv[1][0], k * inv[1][1]]]
}

/// Smallest symplectic eigenvalue of the partial transpose from the 2×2
/// block invariants: `ν̃±²` are the roots of `x² − Δ̃x + det σ` with
/// `Δ̃ = det A + det B − 2 det C`.
///
/// The discriminant is evaluated after bringing `A` and `B` to multiples of
/// the identity by local symplectic maps, where it is a sum of non-negative
/// terms; this keeps full precision when the two roots nearly coincide.
pub fn min_symplectic_pt_closed_form(sigma: &QuadratureCovariance) -> f64 {
    let (a_blk, b_blk, c_blk) = (sigma.a(), sigma.b(), sigma.c());
    let a = det2(a_blk).sqrt();
    let b = det2(b_blk).sqrt();
    let dc = det2(c_blk);
    let cn = mul2(mul2(local_normalizer(a_blk), c_blk), local_normalizer(b_blk));
    let q = (cn[0][0] - cn[1][1]).powi(2) + (cn[0][1] + cn[1][0]).powi(2);
    let disc = (a - b).powi(2) * ((a + b).powi(2) - 4.0 * dc).max(0.0) + 4.0 * a * b * q;
    let delta = a * a + b * b - 2.0 * dc;
    let nu_plus_sq = 0.5 * (delta + disc.sqrt());
    (sigma.determinant() / nu_plus_sq).max(0.0).sqrt()
}

/// Smallest partial-transpose symplectic eigenvalue, computed twice
/// (block invariants and spectrum of `iΩσ̃`) and cross-checked. The
/// block-invariant value is returned: it is exact on product states such as
/// the vacuum, where the eigen-solver is off by an ulp.
pub fn min_symplectic_pt(sigma: &QuadratureCovariance) -> Result<f64> {
    let closed = min_symplectic_pt_closed_form(sigma);
    let spectral = sigma.partial_transpose().symplectic_eigenvalues()?[0];
    let scale = closed.max(spectral).max(1.0);
    if (closed - spectral).abs() > tol::SPECTRAL * scale {
        return Err(Error::Numeric {
            op: "min_symplectic_pt",
            detail: format!("closed form {closed} vs spectral {spectral}"),
        });
    }
    Ok(closed)
}

/// `E = max{0, −ln ν̃}`.
pub fn log_negativity(nu_min: f64) -> Result<f64> {
    if !(nu_min > 0.0) {
        return Err(Error::Contract(format!(
            "symplectic eigenvalues are positive, got {nu_min}"
        )));
    }
    Ok((-nu_min.ln()).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityResult {
    pub nu_min: f64,
    pub log_negativity: f64,
}

impl NegativityResult {
    pub fn is_entangled(&self) -> bool {
        self.nu_min < 1.0
    }
}

pub fn negativity_of_covariance(sigma: &QuadratureCovariance) -> Result<NegativityResult> {
    let nu_min = min_symplectic_pt(sigma)?;
    Ok(NegativityResult {
        nu_min,
        log_negativity: log_negativity(nu_min)?,
    })
}

/// Full pipeline from a four-mode state to the `a₁ | b₁` negativity.
pub fn negativity(s: &FluctuationGaussianState) -> Result<NegativityResult> {
    negativity_of_covariance(&to_quadrature(&reduce_to_a1b1(s))?)
}
