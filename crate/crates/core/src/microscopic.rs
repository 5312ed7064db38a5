//! Exact single-site computations backing the mesoscopic model.
//!
//! With site coupling `J_kl = δ_kl` the N-site Heisenberg generator is a sum
//! of commuting copies of the single-site one, and the reference state is a
//! product. Every quantity of the fluctuation algebra therefore reduces to
//! 4×4 / 16×16 linear algebra on one site.
//!
//! Superoperators act on column-stacked operators: `X ↦ A X B` is `Bᵀ ⊗ A`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mesoscopic::{build_mode_map, MesoGenerator};
use crate::numerics::{self, ComplexMatrix, I, ONE};
use crate::spin_algebra::{
    build_dissipation_matrix, build_lindblad_ops, build_site_hamiltonian, fluctuation_inner,
    DissipationMatrix, ModelParams, ObservableSet, SiteOperator, ThermalSiteState,
};

/// Closure residuals above this fail extraction.
pub const CLOSURE_TOL: f64 = 1e-10;

/// Heisenberg-picture generator on the 4×4 site algebra.
#[derive(Debug, Clone)]
pub struct Superoperator {
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &SiteOperator) -> SiteOperator {
        let v = self.matrix.mul_vec(&x.matrix().vec_columns());
        let m = ComplexMatrix::unvec_columns(&v, 4, 4).expect("16-vector");
        SiteOperator::new(m).expect("4x4")
    }

    /// `max_b |Tr(ρ L[b])|` over the sixteen Pauli-product basis elements.
    pub fn stationarity_defect(&self, st: &ThermalSiteState) -> f64 {
        SiteOperator::pauli_basis()
            .iter()
            .map(|b| st.expectation(&self.apply(b)).norm())
            .fold(0.0, f64::max)
    }
}

/// `X ↦ A X B`.
fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    b.transpose().kron(a)
}

/// `L[X] = i[H, X] + ½ Σ_{μν} D_{μν} [[V_μ, X], V_ν†]`.
///
/// The ½ makes the flip-flop pair `V₁, V₂ = V₁†` contribute once; with it the
/// induced mode drift is exactly `−(1+iε) + γK`.
pub fn build_liouvillian(p: &ModelParams) -> Superoperator {
    liouvillian_with(p, &build_dissipation_matrix(p.gamma()))
}

/// Same as [`build_liouvillian`] with an arbitrary coefficient matrix.
pub fn liouvillian_with(p: &ModelParams, d: &DissipationMatrix) -> Superoperator {
    let id = ComplexMatrix::identity(4);
    let h = build_site_hamiltonian(p).into_matrix();
    // i[H, X] = i(HX − XH)
    let mut l = (&sandwich(&h, &id) - &sandwich(&id, &h)).scale(I);
    let v = build_lindblad_ops().map(SiteOperator::into_matrix);
    for (mu, vm) in v.iter().enumerate() {
        for (nu, vn) in v.iter().enumerate() {
            let coeff = 0.5 * d.get(mu, nu);
            if coeff == 0.0 {
                continue;
            }
            let vnd = vn.adjoint();
            // V_μ X V_ν† − X V_μ V_ν† − V_ν† V_μ X + V_ν† X V_μ
            let term = &(&(&sandwich(vm, &vnd) - &sandwich(&id, &(vm * &vnd)))
                - &sandwich(&(&vnd * vm), &id))
                + &sandwich(&vnd, vm);
            l = &l + &term.scale_real(coeff);
        }
    }
    Superoperator { matrix: l }
}

/// Action of the generator on `span{x_α}`.
#[derive(Debug, Clone)]
pub struct GeneratorExtraction {
    /// `L[x_α] = Σ_β G_{βα} x_β + c_α 1`.
    pub observable_generator: ComplexMatrix,
    /// Largest norm of the part of `L[x_α]` outside `span{x_α, 1}`.
    pub residual: f64,
    pub identity_coeffs: [C64; 8],
    /// `dB/dt = G_mode B` for `B = (a₁, a₂, b₁, b₂, a₁†, …)`.
    pub mode_generator: ComplexMatrix,
}

impl GeneratorExtraction {
    pub fn identity_leak(&self) -> f64 {
        self.identity_coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// The `a`-sector drift; equals `Mᵀ`.
    pub fn annihilation_block(&self) -> ComplexMatrix {
        self.mode_generator.block(0, 0, 4, 4)
    }

    pub fn creation_block(&self) -> ComplexMatrix {
        self.mode_generator.block(4, 4, 4, 4)
    }

    /// Largest coupling between the `a` and `a†` sectors.
    pub fn sector_mixing(&self) -> f64 {
        self.mode_generator
            .block(0, 4, 4, 4)
            .max_abs()
            .max(self.mode_generator.block(4, 0, 4, 4).max_abs())
    }

    /// Entrywise distance between the annihilation block and `Mᵀ`, plus the
    /// creation block and `M†`, and the sector mixing.
    pub fn mismatch_with(&self, g: &MesoGenerator) -> f64 {
        let mt = g.matrix().transpose();
        self.annihilation_block()
            .max_abs_diff(&mt)
            .max(self.creation_block().max_abs_diff(&mt.conj()))
            .max(self.sector_mixing())
    }
}

/// Hilbert–Schmidt inner product `Tr(u†v)/4`.
fn hs_inner(u: &ComplexMatrix, v: &ComplexMatrix) -> C64 {
    (&u.adjoint() * v).trace() / 4.0
}

pub fn extract_mode_generator(l: &Superoperator, p: &ModelParams) -> Result<GeneratorExtraction> {
    let set = ObservableSet::new();
    let id = ComplexMatrix::identity(4);
    let mut g = ComplexMatrix::zeros(8, 8);
    let mut identity_coeffs = [C64::new(0.0, 0.0); 8];
    let mut residual: f64 = 0.0;
    for (alpha, x) in set.observables.iter().enumerate() {
        let lx = l.apply(x).into_matrix();
        let mut rest = lx.clone();
        for (beta, y) in set.observables.iter().enumerate() {
            let c = hs_inner(y.matrix(), &lx);
            g[(beta, alpha)] = c;
            rest = &rest - &y.matrix().scale(c);
        }
        let c1 = hs_inner(&id, &lx);
        identity_coeffs[alpha] = c1;
        rest = &rest - &id.scale(c1);
        residual = residual.max((hs_inner(&rest, &rest).re).sqrt());
    }
    let leak = identity_coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if residual > CLOSURE_TOL || leak > CLOSURE_TOL {
        return Err(Error::ClosureViolation {
            residual,
            identity_leak: leak,
        });
    }
    // B = W X̃, dX̃_α/dt = Σ_β G_{βα} X̃_β  ⇒  dB/dt = W Gᵀ W⁻¹ B
    let w = build_mode_map(p)?;
    let mode_generator = &(w.matrix() * &g.transpose()) * &w.inverse()?;
    Ok(GeneratorExtraction {
        observable_generator: g,
        residual,
        identity_coeffs,
        mode_generator,
    })
}

fn check_hermitian(x: &SiteOperator) -> Result<()> {
    let d = x.matrix().hermiticity_defect();
    if d > numerics::tol::STRUCTURAL {
        return Err(Error::Domain(format!(
            "Weyl operators need a Hermitian observable (defect {d:.3e})"
        )));
    }
    Ok(())
}

fn check_sites(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("number of sites must be at least 1".into()));
    }
    Ok(())
}

/// `exp(i(x − ω(x))/√N)` on one site.
fn centered_site_weyl(x: &SiteOperator, n: u32, st: &ThermalSiteState) -> Result<ComplexMatrix> {
    let centered = centered(x, st);
    numerics::expm(&centered.scale(I), 1.0 / (n as f64).sqrt())
}

/// `x − ω(x)·1`; has exactly zero mean in the reference state.
pub fn centered(x: &SiteOperator, st: &ThermalSiteState) -> ComplexMatrix {
    x.matrix() - &ComplexMatrix::identity(4).scale(st.expectation(x))
}

/// `ω(exp(iX̃_N))` for the N-site product state, exactly.
pub fn weyl_expectation_finite_n(x: &SiteOperator, n: u32, st: &ThermalSiteState) -> Result<C64> {
    check_hermitian(x)?;
    check_sites(n)?;
    let site = st.expectation_matrix(&centered_site_weyl(x, n, st)?);
    Ok(site.powu(n))
}

/// `exp(−½⟨X̃, X̃⟩)`.
pub fn weyl_expectation_limit(x: &SiteOperator, st: &ThermalSiteState) -> C64 {
    (-0.5 * fluctuation_inner(x, x, st)).exp()
}

/// `ω(exp(iX̃_N) exp(iỸ_N))` for the N-site product state, exactly.
pub fn weyl_product_finite_n(
    x: &SiteOperator,
    y: &SiteOperator,
    n: u32,
    st: &ThermalSiteState,
) -> Result<C64> {
    check_hermitian(x)?;
    check_hermitian(y)?;
    check_sites(n)?;
    let prod = &centered_site_weyl(x, n, st)? * &centered_site_weyl(y, n, st)?;
    Ok(st.expectation_matrix(&prod).powu(n))
}

/// `exp(−½(⟨X̃+Ỹ, X̃+Ỹ⟩ + [X̃, Ỹ]))` with `[X̃, Ỹ] = 2i Im⟨X̃, Ỹ⟩`.
pub fn weyl_product_limit(x: &SiteOperator, y: &SiteOperator, st: &ThermalSiteState) -> C64 {
    let sum = SiteOperator::new(x.matrix() + y.matrix()).expect("4x4");
    let comm = C64::new(0.0, 2.0 * fluctuation_inner(x, y, st).im);
    (-0.5 * (fluctuation_inner(&sum, &sum, st) + comm)).exp()
}

/// Errors `|finite-N − limit|` of the single Weyl expectation for each `N`.
pub fn clt_errors(x: &SiteOperator, sizes: &[u32], st: &ThermalSiteState) -> Result<Vec<f64>> {
    let limit = weyl_expectation_limit(x, st);
    sizes
        .iter()
        .map(|&n| Ok((weyl_expectation_finite_n(x, n, st)? - limit).norm()))
        .collect()
}

/// Identity operator, for callers checking unitality.
pub fn identity_operator() -> SiteOperator {
    SiteOperator::new(ComplexMatrix::identity(4).scale(ONE)).expect("4x4")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesoscopic::build_m;
    use crate::spin_algebra::build_thermal_state;

    fn params(eps: f64, t: f64, g: f64) -> ModelParams {
        ModelParams::new(eps, t, g).unwrap()
    }

    /// Direct operator-level evaluation of the generator, no vectorization.
    fn apply_direct(p: &ModelParams, x: &ComplexMatrix) -> ComplexMatrix {
        let h = build_site_hamiltonian(p).into_matrix();
        let d = build_dissipation_matrix(p.gamma());
        let v = build_lindblad_ops().map(SiteOperator::into_matrix);
        let mut out = h.commutator(x).scale(I);
        for mu in 0..4 {
            for nu in 0..4 {
                let inner = v[mu].commutator(x);
                let outer = inner.commutator(&v[nu].adjoint());
                out = &out + &outer.scale_real(0.5 * d.get(mu, nu));
            }
        }
        out
    }

    #[test]
    fn vectorized_generator_matches_direct_evaluation() {
        let p = params(1.3, 0.7, 0.35);
        let l = build_liouvillian(&p);
        for b in SiteOperator::pauli_basis() {
            let want = apply_direct(&p, b.matrix());
            assert!(l.apply(&b).matrix().max_abs_diff(&want) < 1e-14);
        }
    }

    #[test]
    fn unital_and_conserves_energy() {
        let p = params(1.0, 1.0, 0.5);
        let l = build_liouvillian(&p);
        assert!(l.apply(&identity_operator()).matrix().max_abs() < 1e-15);
        let h = build_site_hamiltonian(&p);
        assert!(l.apply(&h).matrix().max_abs() < 1e-14);
    }

    #[test]
    fn thermal_state_is_invariant() {
        for &(eps, t, g) in &[(1.0, 1.0, 0.5), (0.5, 0.1, 0.25), (2.0, 5.0, 0.1)] {
            let p = params(eps, t, g);
            let st = build_thermal_state(&p).unwrap();
            assert!(build_liouvillian(&p).stationarity_defect(&st) < 1e-12);
        }
    }

    #[test]
    fn decoupled_generator_is_diagonal() {
        let p = params(1.0, 1.0, 0.0);
        let ex = extract_mode_generator(&build_liouvillian(&p), &p).unwrap();
        let want = ComplexMatrix::identity(4).scale(C64::new(-1.0, -1.0));
        assert!(ex.annihilation_block().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn generator_matches_m_transpose() {
        let p = params(1.0, 1.0, 0.3);
        let ex = extract_mode_generator(&build_liouvillian(&p), &p).unwrap();
        let g = build_m(&p);
        let a = ex.annihilation_block();
        let eta = p.eta();
        assert!((a[(0, 2)].re + eta * 0.3).abs() < 1e-10);
        assert!((a[(0, 3)].re - 0.3 * (1.0 - eta * eta).sqrt()).abs() < 1e-10);
        assert!(ex.mismatch_with(&g) < 1e-10);
        assert!(ex.residual < 1e-12 && ex.identity_leak() < 1e-12);
    }

    #[test]
    fn full_mode_generator_spectrum() {
        let p = params(2.0, 0.5, 0.25);
        let ex = extract_mode_generator(&build_liouvillian(&p), &p).unwrap();
        let mut ev = numerics::eig_general(&ex.mode_generator).unwrap();
        let (e, g) = (2.0, 0.25);
        for s in [-1.0, 1.0] {
            for d in [-1.0, 1.0] {
                let want = C64::new(-1.0 + s * g, d * e);
                for _ in 0..2 {
                    let k = ev
                        .iter()
                        .position(|z| (z - want).norm() < 1e-9)
                        .unwrap_or_else(|| panic!("{want} missing from {ev:?}"));
                    ev.remove(k);
                }
            }
        }
        assert!(ev.is_empty());
    }

    #[test]
    fn closure_violation_is_reported() {
        let p = params(1.0, 1.0, 0.2);
        let base = build_liouvillian(&p);
        // X ↦ (σ3⊗σ3) X (σ1⊗σ0) sends x₁ to the complement
        let out_of_span = sandwich(
            SiteOperator::pauli_pair(3, 3).matrix(),
            SiteOperator::pauli_pair(1, 0).matrix(),
        );
        // X ↦ (σ1⊗σ0) X sends x₁ to the identity
        let to_identity = sandwich(SiteOperator::pauli_pair(1, 0).matrix(), &ComplexMatrix::identity(4));
        for (extra, want_residual) in [(out_of_span, true), (to_identity, false)] {
            let l = Superoperator {
                matrix: base.matrix() + &extra.scale_real(0.1),
            };
            match extract_mode_generator(&l, &p) {
                Err(Error::ClosureViolation { residual, identity_leak }) => {
                    if want_residual {
                        assert!(residual > 0.05);
                    } else {
                        assert!(identity_leak > 0.05);
                    }
                }
                other => panic!("expected closure violation, got {other:?}"),
            }
        }
    }

    #[test]
    fn weyl_single_site_values() {
        let p = params(1.0, 1.0, 0.0);
        let st = build_thermal_state(&p).unwrap();
        let x1 = SiteOperator::pauli_pair(1, 0);
        let v = weyl_expectation_finite_n(&x1, 100, &st).unwrap();
        assert!((v.re - 0.1f64.cos().powi(100)).abs() < 1e-13);
        assert!((v.re - 0.606024).abs() < 1e-6);
        let lim = weyl_expectation_limit(&x1, &st);
        assert!((lim.re - (-0.5f64).exp()).abs() < 1e-15);
        assert!((lim.re - 0.606531).abs() < 1e-6);
        let zero = SiteOperator::new(ComplexMatrix::zeros(4, 4)).unwrap();
        for n in [1, 7, 1000] {
            assert!((weyl_expectation_finite_n(&zero, n, &st).unwrap() - ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn weyl_rejects_bad_input() {
        let st = build_thermal_state(&params(1.0, 1.0, 0.0)).unwrap();
        let nh = SiteOperator::new(SiteOperator::pauli_pair(1, 0).matrix().scale(I)).unwrap();
        assert!(weyl_expectation_finite_n(&nh, 10, &st).is_err());
        assert!(weyl_expectation_finite_n(&SiteOperator::pauli_pair(1, 0), 0, &st).is_err());
    }

    #[test]
    fn weyl_product_of_equal_arguments() {
        let st = build_thermal_state(&params(1.0, 0.5, 0.0)).unwrap();
        let x = SiteOperator::pauli_pair(1, 3);
        let twice = SiteOperator::new(x.matrix().scale_real(2.0)).unwrap();
        for n in [3, 50, 400] {
            let a = weyl_product_finite_n(&x, &x, n, &st).unwrap();
            let b = weyl_expectation_finite_n(&twice, n, &st).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn weyl_product_limit_with_commutator() {
        let p = params(1.0, 1.0, 0.0);
        let st = build_thermal_state(&p).unwrap();
        let x1 = SiteOperator::pauli_pair(1, 0);
        let x2 = SiteOperator::pauli_pair(2, 0);
        // ⟨X̃₁+X̃₂, X̃₁+X̃₂⟩ = 2, [X̃₁, X̃₂] = −2iη
        let want = (-0.5 * C64::new(2.0, -2.0 * p.eta())).exp();
        assert!((weyl_product_limit(&x1, &x2, &st) - want).norm() < 1e-14);
        let err = (weyl_product_finite_n(&x1, &x2, 10_000, &st).unwrap() - want).norm();
        assert!(err < 1e-2);
    }

    #[test]
    fn centering_removes_the_mean() {
        let st = build_thermal_state(&params(1.0, 0.3, 0.0)).unwrap();
        for x in SiteOperator::pauli_basis() {
            assert!(st.expectation_matrix(&centered(&x, &st)).norm() < 1e-15);
        }
    }
}
