//! The single-site algebra of the double chain: two spin-1/2 factors, one per
//! chain, in the product basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩.

use num_complex::{Complex, Complex64 as C64};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::numerics::{self, tol, ComplexMatrix, I, ONE, ZERO};

/// Physical inputs of the model (`k_B = ħ = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    epsilon: f64,
    temperature: f64,
    gamma: f64,
    beta: f64,
    eta: f64,
}

impl ModelParams {
    pub const MAX_GAMMA: f64 = 0.5;

    pub fn new(epsilon: f64, temperature: f64, gamma: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::Domain(format!(
                "temperature must be positive (the fluctuation algebra contracts at T = 0), got {temperature}"
            )));
        }
        if !(gamma.is_finite() && (0.0..=Self::MAX_GAMMA).contains(&gamma)) {
            return Err(Error::Domain(format!(
                "gamma must lie in [0, 1/2] for complete positivity, got {gamma}"
            )));
        }
        let beta = 1.0 / temperature;
        let eta = (epsilon * beta / 2.0).tanh();
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::Domain(format!(
                "eta = tanh(epsilon/(2T)) = {eta} is not inside (0, 1); temperature {temperature} is too low for double precision"
            )));
        }
        Ok(Self {
            epsilon,
            temperature,
            gamma,
            beta,
            eta,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `tanh(εβ/2)`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.epsilon, self.temperature, gamma)
    }
}

/// Pauli matrix `σ_i`, `i ∈ 0..4`, with `σ_0` the identity and `σ_3 = diag(1, −1)`.
pub fn pauli(i: usize) -> ComplexMatrix {
    match i {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]]),
        2 => ComplexMatrix::from_rows([[ZERO, -I], [I, ZERO]]),
        3 => ComplexMatrix::from_rows([[ONE, ZERO], [ZERO, -ONE]]),
        _ => panic!("Pauli index {i} out of range"),
    }
}

/// Element of the 4×4 site algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteOperator {
    matrix: ComplexMatrix,
    label: Option<(usize, usize)>,
}

impl SiteOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(Error::Dimension {
                op: "SiteOperator::new",
                detail: format!("expected 4x4, got {}x{}", matrix.rows(), matrix.cols()),
            });
        }
        Ok(Self {
            matrix,
            label: None,
        })
    }

    /// Basis element `σ_μ ⊗ σ_ν` (first factor: chain 1).
    pub fn pauli_pair(mu: usize, nu: usize) -> Self {
        Self {
            matrix: pauli(mu).kron(&pauli(nu)),
            label: Some((mu, nu)),
        }
    }

    pub fn identity() -> Self {
        Self::pauli_pair(0, 0)
    }

    /// All sixteen `σ_μ ⊗ σ_ν`, `μ` major.
    pub fn pauli_basis() -> Vec<Self> {
        (0..4)
            .flat_map(|mu| (0..4).map(move |nu| Self::pauli_pair(mu, nu)))
            .collect()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn label(&self) -> Option<(usize, usize)> {
        self.label
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            label: self.label,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix.hermiticity_defect() <= tol::STRUCTURAL
    }

    /// Coefficients `c_{μν} = Tr[(σ_μ⊗σ_ν) x] / 4`, index `4μ + ν`.
    pub fn pauli_coefficients(&self) -> [C64; 16] {
        let mut out = [ZERO; 16];
        for (k, b) in Self::pauli_basis().iter().enumerate() {
            out[k] = (b.matrix() * &self.matrix).trace() / 4.0;
        }
        out
    }

    pub fn from_pauli_coefficients(coeffs: &[C64; 16]) -> Self {
        let mut m = ComplexMatrix::zeros(4, 4);
        for (k, b) in Self::pauli_basis().iter().enumerate() {
            m = &m + &b.matrix().scale(coeffs[k]);
        }
        Self {
            matrix: m,
            label: None,
        }
    }
}

/// The eight observables `x_1..x_8` carrying the fluctuation modes, and the
/// eight complementary basis elements.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    pub observables: [SiteOperator; 8],
    pub complement: [SiteOperator; 8],
}

/// `(μ, ν)` labels of `x_1..x_8`: chain 1 first, chain 2 as the index shift by four.
pub const OBSERVABLE_LABELS: [(usize, usize); 8] = [
    (1, 0),
    (2, 0),
    (1, 3),
    (2, 3),
    (0, 1),
    (0, 2),
    (3, 1),
    (3, 2),
];

pub const COMPLEMENT_LABELS: [(usize, usize); 8] = [
    (0, 0),
    (3, 0),
    (0, 3),
    (3, 3),
    (1, 1),
    (1, 2),
    (2, 1),
    (2, 2),
];

impl ObservableSet {
    pub fn new() -> Self {
        Self {
            observables: OBSERVABLE_LABELS.map(|(m, n)| SiteOperator::pauli_pair(m, n)),
            complement: COMPLEMENT_LABELS.map(|(m, n)| SiteOperator::pauli_pair(m, n)),
        }
    }
}

impl Default for ObservableSet {
    fn default() -> Self {
        Self::new()
    }
}

/// `H = (ε/2)(σ3⊗σ0 + σ0⊗σ3)`.
pub fn build_site_hamiltonian(p: &ModelParams) -> SiteOperator {
    let sum = &pauli(3).kron(&pauli(0)) + &pauli(0).kron(&pauli(3));
    SiteOperator {
        matrix: sum.scale_real(p.epsilon() / 2.0),
        label: None,
    }
}

/// Single-site Gibbs state `e^{−βH}/Z`.
#[derive(Debug, Clone)]
pub struct ThermalSiteState {
    rho: SiteOperator,
    partition: f64,
}

impl ThermalSiteState {
    pub fn density(&self) -> &SiteOperator {
        &self.rho
    }

    pub fn partition_function(&self) -> f64 {
        self.partition
    }

    /// `ω(x) = Tr[ρ x]`.
    pub fn expectation(&self, x: &SiteOperator) -> C64 {
        self.expectation_matrix(x.matrix())
    }

    pub fn expectation_matrix(&self, x: &ComplexMatrix) -> C64 {
        (self.rho.matrix() * x).trace()
    }
}

pub fn build_thermal_state(p: &ModelParams) -> Result<ThermalSiteState> {
    if !(p.temperature() > 0.0) {
        return Err(Error::Domain("thermal state needs T > 0".into()));
    }
    let h = build_site_hamiltonian(p);
    let boltzmann = numerics::expm(h.matrix(), -p.beta())?;
    let z = boltzmann.trace().re;
    Ok(ThermalSiteState {
        rho: SiteOperator {
            matrix: boltzmann.scale_real(1.0 / z),
            label: None,
        },
        partition: z,
    })
}

/// `ω(x†y) − ω(x†)ω(y)`: the limiting sesquilinear form of the fluctuations
/// of `x` and `y` in the product state.
pub fn fluctuation_inner(x: &SiteOperator, y: &SiteOperator, st: &ThermalSiteState) -> C64 {
    let xd = x.matrix().adjoint();
    st.expectation_matrix(&(&xd * y.matrix()))
        - st.expectation_matrix(&xd) * st.expectation(y)
}

/// Gram matrix `F_{αβ} = ⟨X̃_α, X̃_β⟩` over the eight observables.
pub fn fluctuation_gram(set: &ObservableSet, st: &ThermalSiteState) -> ComplexMatrix {
    ComplexMatrix::from_fn(8, 8, |a, b| {
        fluctuation_inner(&set.observables[a], &set.observables[b], st)
    })
}

/// Double-double complex scalar.
pub type ComplexDd = Complex<TwoFloat>;

/// [`fluctuation_gram`] in double-double precision, for the product thermal
/// state parametrized directly by `η`: each spin has populations
/// `(1−η)/2` (↑) and `(1+η)/2` (↓).
///
/// Near `η → 1` the canonical normalization of `a₂, b₂` divides by `1−η²`,
/// which double precision cannot resolve at low temperature.
pub fn fluctuation_gram_extended(set: &ObservableSet, eta: f64) -> [[ComplexDd; 8]; 8] {
    let one = TwoFloat::from(1.0);
    let eta = TwoFloat::from(eta);
    let pop = [(one - eta) * 0.5, (one + eta) * 0.5];
    let rho: [TwoFloat; 4] = [0, 1, 2, 3].map(|i| pop[i / 2] * pop[i % 2]);
    let expect = |m: &ComplexMatrix| -> ComplexDd {
        (0..4).fold(ComplexDd::new(0.0.into(), 0.0.into()), |acc, i| {
            let z = m[(i, i)];
            acc + ComplexDd::new(rho[i] * z.re, rho[i] * z.im)
        })
    };
    let zero = ComplexDd::new(0.0.into(), 0.0.into());
    let mut out = [[zero; 8]; 8];
    for (a, x) in set.observables.iter().enumerate() {
        let xd = x.matrix().adjoint();
        for (b, y) in set.observables.iter().enumerate() {
            out[a][b] = expect(&(&xd * y.matrix())) - expect(&xd) * expect(y.matrix());
        }
    }
    out
}

/// Limiting commutator `[X̃, Ỹ] = 2i Im⟨X̃, Ỹ⟩` (a multiple of the identity).
pub fn fluctuation_commutator(x: &SiteOperator, y: &SiteOperator, st: &ThermalSiteState) -> C64 {
    C64::new(0.0, 2.0 * fluctuation_inner(x, y, st).im)
}

/// `{σ₊⊗σ₋, σ₋⊗σ₊, σ3⊗σ0/2, σ0⊗σ3/2}` with `σ± = (σ1 ± iσ2)/2`.
pub fn build_lindblad_ops() -> [SiteOperator; 4] {
    let sp = (&pauli(1) + &pauli(2).scale(I)).scale_real(0.5);
    let sm = (&pauli(1) - &pauli(2).scale(I)).scale_real(0.5);
    let wrap = |matrix| SiteOperator {
        matrix,
        label: None,
    };
    [
        wrap(sp.kron(&sm)),
        wrap(sm.kron(&sp)),
        wrap(pauli(3).kron(&pauli(0)).scale_real(0.5)),
        wrap(pauli(0).kron(&pauli(3)).scale_real(0.5)),
    ]
}

/// Bath coefficient matrix with a single parameter `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipationMatrix {
    gamma: f64,
    entries: [[f64; 4]; 4],
}

impl DissipationMatrix {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.entries[mu][nu]
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(self.entries)
    }

    /// Ascending spectrum, `{1−2γ, 1, 1, 1+2γ}` in exact arithmetic.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        numerics::eig_hermitian(&self.to_matrix())
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    pub fn is_positive_semidefinite(&self) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol::STRUCTURAL)
    }
}

/// Any real `γ` is accepted so the positivity boundary can be probed.
pub fn build_dissipation_matrix(gamma: f64) -> DissipationMatrix {
    let g = gamma;
    DissipationMatrix {
        gamma,
        entries: [
            [1.0, 0.0, g, g],
            [0.0, 1.0, g, g],
            [g, g, 1.0, 0.0],
            [g, g, 0.0, 1.0],
        ],
    }
}
