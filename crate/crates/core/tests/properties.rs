use mesoent_core::entanglement::{negativity_of_covariance, QuadratureCovariance};
use mesoent_core::mesoscopic::{build_m, initial_state, propagate, WeylVector};
use mesoent_core::numerics::{determinant, eig_hermitian, expm, ComplexMatrix};
use mesoent_core::{Complex64 as C64, ModelParams};
use proptest::prelude::*;

fn matrix4(entries: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |r, c| {
        let k = 2 * (4 * r + c);
        C64::new(entries[k], entries[k + 1])
    })
}

fn params() -> impl Strategy<Value = ModelParams> {
    (0.5f64..2.0, 0.1f64..5.0, 0.0f64..=0.5)
        .prop_map(|(e, t, g)| ModelParams::new(e, t, g).unwrap())
}

/// Two-mode squeezed thermal state in vacuum-normalized quadratures.
fn tmst(s: f64, n: f64) -> QuadratureCovariance {
    let (c, h) = (n * (2.0 * s).cosh(), n * (2.0 * s).sinh());
    QuadratureCovariance([
        [c, 0.0, h, 0.0],
        [0.0, c, 0.0, -h],
        [h, 0.0, c, 0.0],
        [0.0, -h, 0.0, c],
    ])
}

/// Single-mode squeezer and phase rotation, applied to mode 0 and mode 1.
fn local_symplectic(ra: f64, pa: f64, rb: f64, pb: f64) -> [[f64; 4]; 4] {
    let one_mode = |r: f64, p: f64| {
        let (c, s) = (p.cos(), p.sin());
        let (u, d) = (r.exp(), (-r).exp());
        [[c * u, -s * d], [s * u, c * d]]
    };
    let (a, b) = (one_mode(ra, pa), one_mode(rb, pb));
    let mut m = [[0.0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][j];
            m[i + 2][j + 2] = b[i][j];
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expm_is_a_semigroup(entries in prop::collection::vec(-1.0f64..1.0, 32), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let a = matrix4(&entries);
        let lhs = &expm(&a, s).unwrap() * &expm(&a, t).unwrap();
        let rhs = expm(&a, s + t).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn det_expm_is_exp_trace(entries in prop::collection::vec(-1.0f64..1.0, 32), t in 0.0f64..2.0) {
        let a = matrix4(&entries);
        let d = determinant(&expm(&a, t).unwrap()).unwrap();
        let want = (a.trace() * t).exp();
        prop_assert!((d - want).norm() < 1e-10 * want.norm().max(1.0));
    }

    #[test]
    fn hermitian_spectrum_sums_to_trace(entries in prop::collection::vec(-1.0f64..1.0, 32)) {
        let a = matrix4(&entries);
        let h = &a + &a.adjoint();
        let sum: f64 = eig_hermitian(&h).unwrap().iter().sum();
        prop_assert!((sum - h.trace().re).abs() < 1e-12);
    }

    #[test]
    fn propagation_is_a_semigroup(p in params(), r in 0.0f64..2.0, s in 0.0f64..3.0, t in 0.0f64..3.0) {
        let g = build_m(&p);
        let s0 = initial_state(&p, r).unwrap();
        let two_step = propagate(&propagate(&s0, &g, s).unwrap(), &g, t).unwrap();
        let one_step = propagate(&s0, &g, s + t).unwrap();
        let scale = one_step.gamma_form().max_abs();
        prop_assert!(two_step.gamma_form().max_abs_diff(one_step.gamma_form()) < 1e-10 * scale);
    }

    #[test]
    fn damping_exponent_is_nonpositive(p in params(), z in prop::collection::vec(-2.0f64..2.0, 8), t in 0.0f64..5.0) {
        let w = WeylVector([0, 1, 2, 3].map(|i| C64::new(z[2 * i], z[2 * i + 1])));
        prop_assert!(w.damping_exponent(&build_m(&p), t).unwrap() <= 1e-14);
    }

    #[test]
    fn negativity_is_local_symplectic_invariant(
        s in 0.0f64..1.5, n in 1.0f64..3.0,
        ra in -1.0f64..1.0, pa in 0.0f64..6.3, rb in -1.0f64..1.0, pb in 0.0f64..6.3,
    ) {
        let sigma = tmst(s, n);
        let moved = sigma.transformed(&local_symplectic(ra, pa, rb, pb));
        let e0 = negativity_of_covariance(&sigma).unwrap();
        let e1 = negativity_of_covariance(&moved).unwrap();
        prop_assert!((e0.nu_min - e1.nu_min).abs() < 1e-9 * e0.nu_min.max(1.0));
    }

    #[test]
    fn added_noise_never_increases_negativity(s in 0.0f64..1.5, n in 1.0f64..3.0, c in 0.0f64..2.0) {
        let sigma = tmst(s, n);
        let e0 = negativity_of_covariance(&sigma).unwrap().log_negativity;
        let e1 = negativity_of_covariance(&sigma.with_added_noise(c)).unwrap().log_negativity;
        prop_assert!(e1 <= e0 + 1e-12);
    }
}
