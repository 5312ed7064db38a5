//! Gaussian dynamics of the four fluctuation modes `a₁, a₂, b₁, b₂`.
//!
//! A zero-mean Gaussian state of the modes is stored through the quadratic
//! form `Γ` of its characteristic function
//!
//! ```text
//! χ(z) = ⟨W(z)⟩ = exp(−½ v†Γv),   v = (z, z*),   W(z) = exp(A(z)† − A(z)),
//! ```
//!
//! with `A(z) = Σ z_μ A_μ`. Writing `X_{jk} = ½⟨{A_j, A_k†}⟩` and
//! `S_{jk} = ⟨A_j A_k⟩`, the blocks are `Γ = [[Xᵀ, −S*], [−S, X]]`.
//! The thermal reference state is `Γ = I/(2η)`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::{self, tol, ComplexMatrix, I, ZERO};
use crate::spin_algebra::{
    fluctuation_gram, fluctuation_gram_extended, ComplexDd, ModelParams, ObservableSet,
    ThermalSiteState,
};
use twofloat::TwoFloat;

/// Mode order used everywhere: `a₁, a₂, b₁, b₂`, then their adjoints.
pub const MODE_NAMES: [&str; 8] = ["a1", "a2", "b1", "b2", "a1+", "a2+", "b1+", "b2+"];

/// Chain exchange `(a₁, a₂, b₁, b₂) ↦ (b₁, b₂, a₁, a₂)`.
pub const CHAIN_EXCHANGE: [usize; 4] = [2, 3, 0, 1];

/// Linear map from the eight fluctuation observables `X̃_1..X̃_8` to the
/// modes and their adjoints: `A_μ = Σ_α W_{μα} X̃_α`.
#[derive(Debug, Clone)]
pub struct ModeMap {
    eta: f64,
    matrix: ComplexMatrix,
}

impl ModeMap {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Rows: modes in [`MODE_NAMES`] order; columns: `X̃_1..X̃_8`.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// The 4×8 annihilation part.
    pub fn annihilation(&self) -> ComplexMatrix {
        self.matrix.block(0, 0, 4, 8)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        numerics::inverse(&self.matrix)
    }

    /// Canonical commutators computed from the fluctuation Gram matrix:
    /// returns (`[A_μ, A_ν†]`, `[A_μ, A_ν]`) over the four annihilation modes.
    pub fn commutators(&self, gram: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
        // [X̃_α, X̃_β] = 2i Im F_{αβ}
        let c = ComplexMatrix::from_fn(8, 8, |a, b| C64::new(0.0, 2.0 * gram[(a, b)].im));
        let w = self.annihilation();
        let wc = &w * &c;
        (&wc * &w.adjoint(), &wc * &w.transpose())
    }

    /// Same as [`Self::commutators`], starting from the thermal site state.
    pub fn commutators_in(&self, st: &ThermalSiteState) -> (ComplexMatrix, ComplexMatrix) {
        self.commutators(&fluctuation_gram(&ObservableSet::new(), st))
    }
}

/// CCR check in double-double precision: returns the largest deviation of
/// `[A_μ, A_ν†]` from `δ_μν` and the largest `|[A_μ, A_ν]|`.
pub fn ccr_defect_extended(eta: f64) -> Result<(f64, f64)> {
    mode_map_for_eta(eta)?;
    let gram = fluctuation_gram_extended(&ObservableSet::new(), eta);
    let zero = TwoFloat::from(0.0);
    let cz = |re: TwoFloat, im: TwoFloat| ComplexDd::new(re, im);
    let comm: Vec<Vec<ComplexDd>> = gram
        .iter()
        .map(|row| row.iter().map(|f| cz(zero, f.im * 2.0)).collect())
        .collect();

    let one = TwoFloat::from(1.0);
    // twofloat's division is only double-accurate; refine by one Newton step
    let recip = |d: TwoFloat| {
        let y = one / d;
        y + y * (one - d * y)
    };
    let e = TwoFloat::from(eta);
    let c1 = recip(e.sqrt() * 2.0);
    let c2 = e.sqrt() * recip(((one - e) * (one + e)).sqrt() * 2.0);
    let c2e = c2 * recip(e);
    let mut w = vec![vec![cz(zero, zero); 8]; 4];
    for (row, shift) in [(0usize, 0usize), (2, 4)] {
        w[row][shift] = cz(c1, zero);
        w[row][shift + 1] = cz(zero, -c1);
        w[row + 1][shift] = cz(c2, zero);
        w[row + 1][shift + 1] = cz(zero, -c2);
        w[row + 1][shift + 2] = cz(c2e, zero);
        w[row + 1][shift + 3] = cz(zero, -c2e);
    }

    let mut ccr_dev: f64 = 0.0;
    let mut anomalous: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let mut normal = cz(zero, zero);
            let mut anom = cz(zero, zero);
            for a in 0..8 {
                for b in 0..8 {
                    let wc = w[mu][a] * comm[a][b];
                    normal += wc * w[nu][b].conj();
                    anom += wc * w[nu][b];
                }
            }
            if mu == nu {
                normal -= cz(one, zero);
            }
            ccr_dev = ccr_dev.max(f64::from(normal.norm()));
            anomalous = anomalous.max(f64::from(anom.norm()));
        }
    }
    Ok((ccr_dev, anomalous))
}

pub fn build_mode_map(p: &ModelParams) -> Result<ModeMap> {
    mode_map_for_eta(p.eta())
}

pub fn mode_map_for_eta(eta: f64) -> Result<ModeMap> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Domain(format!(
            "mode map needs 0 < eta < 1, got {eta} (zero-temperature contraction)"
        )));
    }
    let mut w = ComplexMatrix::zeros(8, 8);
    let c1 = 1.0 / (2.0 * eta.sqrt());
    let c2 = eta.sqrt() / (2.0 * (1.0 - eta * eta).sqrt());
    for (row, shift) in [(0usize, 0usize), (2, 4)] {
        // a₁ = (X̃₁ − iX̃₂)/(2√η)
        w[(row, shift)] = C64::new(c1, 0.0);
        w[(row, shift + 1)] = -I * c1;
        // a₂ = √η/(2√(1−η²)) [X̃₁ − iX̃₂ + (X̃₃ − iX̃₄)/η]
        w[(row + 1, shift)] = C64::new(c2, 0.0);
        w[(row + 1, shift + 1)] = -I * c2;
        w[(row + 1, shift + 2)] = C64::new(c2 / eta, 0.0);
        w[(row + 1, shift + 3)] = -I * (c2 / eta);
    }
    // adjoint rows: the X̃_α are Hermitian
    for r in 0..4 {
        for c in 0..8 {
            w[(r + 4, c)] = w[(r, c)].conj();
        }
    }
    Ok(ModeMap { eta, matrix: w })
}

/// Drift matrix of the Weyl arguments, `dz/dt = M z`.
#[derive(Debug, Clone)]
pub struct MesoGenerator {
    m: ComplexMatrix,
    epsilon: f64,
    eta: f64,
    gamma: f64,
}

impl MesoGenerator {
    /// Wrap an arbitrary 4×4 drift, e.g. a deliberately perturbed one.
    pub fn with_matrix(p: &ModelParams, m: ComplexMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::Dimension {
                op: "MesoGenerator::with_matrix",
                detail: format!("expected 4x4, got {}x{}", m.rows(), m.cols()),
            });
        }
        Ok(Self {
            m,
            epsilon: p.epsilon(),
            eta: p.eta(),
            gamma: p.gamma(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Real symmetric `K` with `M = −(1+iε)I + γK`.
    pub fn coupling_kernel(eta: f64) -> ComplexMatrix {
        let s = (1.0 - eta * eta).sqrt();
        ComplexMatrix::from_real_rows([
            [0.0, 0.0, -eta, s],
            [0.0, 0.0, s, eta],
            [-eta, s, 0.0, 0.0],
            [s, eta, 0.0, 0.0],
        ])
    }

    /// `e^{tM}`.
    pub fn evolution(&self, t: f64) -> Result<ComplexMatrix> {
        numerics::expm(&self.m, t)
    }

    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        numerics::eig_general(&self.m)
    }

    /// Slowest decay rate of `χ_t − χ_∞`, i.e. `−2 max Re spec(M)`.
    pub fn relaxation_rate(&self) -> f64 {
        2.0 * (1.0 - self.gamma)
    }

    /// Conjugate by the chain-exchange permutation.
    pub fn exchanged(&self) -> Self {
        let p = CHAIN_EXCHANGE;
        Self {
            m: ComplexMatrix::from_fn(4, 4, |r, c| self.m[(p[r], p[c])]),
            ..self.clone()
        }
    }
}

pub fn build_m(p: &ModelParams) -> MesoGenerator {
    let diag = ComplexMatrix::identity(4).scale(C64::new(-1.0, -p.epsilon()));
    let m = &diag + &MesoGenerator::coupling_kernel(p.eta()).scale_real(p.gamma());
    MesoGenerator {
        m,
        epsilon: p.epsilon(),
        eta: p.eta(),
        gamma: p.gamma(),
    }
}

/// Weyl argument `z` over `a₁, a₂, b₁, b₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylVector(pub [C64; 4]);

impl WeylVector {
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `v = (z, z*)`.
    pub fn doubled(&self) -> [C64; 8] {
        let mut v = [ZERO; 8];
        for i in 0..4 {
            v[i] = self.0[i];
            v[i + 4] = self.0[i].conj();
        }
        v
    }

    /// `z(t) = e^{tM} z`.
    pub fn evolve(&self, g: &MesoGenerator, t: f64) -> Result<Self> {
        let z = g.evolution(t)?.mul_vec(&self.0);
        Ok(Self([z[0], z[1], z[2], z[3]]))
    }

    /// `φ(t) = (⟨z(t)|z(t)⟩ − ⟨z|z⟩)/(2η)`.
    pub fn damping_exponent(&self, g: &MesoGenerator, t: f64) -> Result<f64> {
        Ok((self.evolve(g, t)?.norm_sqr() - self.norm_sqr()) / (2.0 * g.eta()))
    }
}

/// Zero-mean Gaussian state of the four modes.
#[derive(Debug, Clone)]
pub struct FluctuationGaussianState {
    gamma: ComplexMatrix,
    eta: f64,
}

impl FluctuationGaussianState {
    pub fn thermal(eta: f64) -> Self {
        Self {
            gamma: ComplexMatrix::identity(8).scale_real(1.0 / (2.0 * eta)),
            eta,
        }
    }

    /// From `X_{jk} = ½⟨{A_j, A_k†}⟩` and `S_{jk} = ⟨A_j A_k⟩`.
    pub fn from_moments(x: &ComplexMatrix, s: &ComplexMatrix, eta: f64) -> Self {
        let gamma = ComplexMatrix::from_blocks(&x.transpose(), &(-&s.conj()), &(-s), x);
        Self { gamma, eta }
    }

    pub fn from_gamma(gamma: ComplexMatrix, eta: f64) -> Result<Self> {
        if gamma.rows() != 8 || gamma.cols() != 8 {
            return Err(Error::Dimension {
                op: "FluctuationGaussianState::from_gamma",
                detail: format!("expected 8x8, got {}x{}", gamma.rows(), gamma.cols()),
            });
        }
        Ok(Self { gamma, eta })
    }

    pub fn gamma_form(&self) -> &ComplexMatrix {
        &self.gamma
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `(X, S)` as in [`Self::from_moments`].
    pub fn moments(&self) -> (ComplexMatrix, ComplexMatrix) {
        let x = self.gamma.block(4, 4, 4, 4);
        let s = -&self.gamma.block(4, 0, 4, 4);
        (x, s)
    }

    /// Symmetrized second moments `½⟨{B_μ, B_ν†}⟩` with `B = (a₁, a₂, b₁, b₂, a₁†, a₂†, b₁†, b₂†)`.
    pub fn covariance(&self) -> ComplexMatrix {
        let (x, s) = self.moments();
        ComplexMatrix::from_blocks(&x, &s, &s.conj(), &x.conj())
    }

    /// Vacuum-normalized quadrature covariance over `(x₁, p₁, …, x₄, p₄)`.
    pub fn quadrature_covariance(&self) -> ComplexMatrix {
        let pairs: Vec<(usize, usize)> = (0..4).map(|j| (j, j + 4)).collect();
        crate::entanglement::moments_to_quadrature(&self.covariance(), &pairs)
    }

    /// `max |Γ − ΛΓ*Λ|`, with `Λ` swapping the `z` and `z*` halves.
    pub fn swap_symmetry_defect(&self) -> f64 {
        let swapped = ComplexMatrix::from_fn(8, 8, |r, c| self.gamma[((r + 4) % 8, (c + 4) % 8)].conj());
        self.gamma.max_abs_diff(&swapped)
    }

    /// `χ(z) = exp(−½ v†Γv)`.
    pub fn characteristic(&self, z: &WeylVector) -> C64 {
        let v = z.doubled();
        let gv = self.gamma.mul_vec(&v);
        let q: C64 = v.iter().zip(&gv).map(|(a, b)| a.conj() * b).sum();
        (-0.5 * q).exp()
    }

    pub fn exchange_chains(&self) -> Self {
        let p = CHAIN_EXCHANGE;
        let idx = |i: usize| if i < 4 { p[i] } else { p[i - 4] + 4 };
        Self {
            gamma: ComplexMatrix::from_fn(8, 8, |r, c| self.gamma[(idx(r), idx(c))]),
            eta: self.eta,
        }
    }

    /// `‖Γ − I/(2η)‖_F`.
    pub fn distance_from_thermal(&self) -> f64 {
        (&self.gamma - &Self::thermal(self.eta).gamma).frobenius_norm()
    }
}

/// Thermal state of the modes with `a₁` and `b₁` each squeezed by
/// `α ↦ cosh r·α − sinh r·α†`.
pub fn initial_state(p: &ModelParams, r: f64) -> Result<FluctuationGaussianState> {
    if !r.is_finite() {
        return Err(Error::Domain(format!("squeeze parameter must be finite, got {r}")));
    }
    let eta = p.eta();
    let n = 1.0 / (2.0 * eta);
    let mut x = ComplexMatrix::identity(4).scale_real(n);
    let mut s = ComplexMatrix::zeros(4, 4);
    for j in [0, 2] {
        x[(j, j)] = C64::new((2.0 * r).cosh() * n, 0.0);
        s[(j, j)] = C64::new(-(2.0 * r).sinh() * n, 0.0);
    }
    Ok(FluctuationGaussianState::from_moments(&x, &s, eta))
}

fn check_compatible(s: &FluctuationGaussianState, g: &MesoGenerator, t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("propagation time must be finite and >= 0, got {t}")));
    }
    if (s.eta - g.eta).abs() > tol::STRUCTURAL {
        return Err(Error::Contract(format!(
            "state prepared at eta {} but generator built at eta {}",
            s.eta, g.eta
        )));
    }
    Ok(())
}

fn doubled_evolution(g: &MesoGenerator, t: f64) -> Result<ComplexMatrix> {
    let e = g.evolution(t)?;
    let zero = ComplexMatrix::zeros(4, 4);
    Ok(ComplexMatrix::from_blocks(&e, &zero, &zero, &e.conj()))
}

/// `Γ(t) − I/(2η) = T(t)†(Γ₀ − I/(2η))T(t)` with `T = e^{tM} ⊕ e^{tM*}`,
/// computed without cancellation against the thermal part.
pub fn deviation_from_thermal(
    s: &FluctuationGaussianState,
    g: &MesoGenerator,
    t: f64,
) -> Result<ComplexMatrix> {
    check_compatible(s, g, t)?;
    let tt = doubled_evolution(g, t)?;
    let dev0 = &s.gamma - &FluctuationGaussianState::thermal(s.eta).gamma;
    Ok(&(&tt.adjoint() * &dev0) * &tt)
}

/// Closed-form quasi-free evolution, `χ_t(z) = e^{φ(t)} χ₀(e^{tM} z)`.
pub fn propagate(
    s: &FluctuationGaussianState,
    g: &MesoGenerator,
    t: f64,
) -> Result<FluctuationGaussianState> {
    let dev = deviation_from_thermal(s, g, t)?;
    Ok(FluctuationGaussianState {
        gamma: &dev + &FluctuationGaussianState::thermal(s.eta).gamma,
        eta: s.eta,
    })
}
