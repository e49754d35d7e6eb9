use nalgebra::DMatrix;
use proptest::prelude::*;
use toeplitz_lab::linalg::{hermitian_eigen, hermiticity_residual, max_abs};
use toeplitz_lab::pseudoconvex::{
    complex_tangent_basis, eval, eval_complex, levi_form, restricted_levi_form, sample_boundary,
    wirtinger_gradient, DomainSpec, Monomial,
};
use toeplitz_lab::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Random structurally real polynomial on ℂ²: each random term is paired
/// with its conjugate mirror, plus `|z₁|²` so the gradient is nonzero.
fn real_polynomial() -> impl Strategy<Value = DomainSpec> {
    prop::collection::vec(
        (
            prop::collection::vec(0u32..3, 2),
            prop::collection::vec(0u32..3, 2),
            (-1.0..1.0f64, -1.0..1.0f64),
        ),
        1..6,
    )
    .prop_map(|terms| {
        let mut monomials = vec![Monomial::new(vec![1, 0], vec![1, 0], c(1.0, 0.0))];
        for (hol, anti, (re, im)) in terms {
            let coeff = if hol == anti { c(re, 0.0) } else { c(re, im) };
            monomials.push(Monomial::new(hol.clone(), anti.clone(), coeff));
            if hol != anti {
                monomials.push(Monomial::new(anti, hol, coeff.conj()));
            }
        }
        DomainSpec::new(monomials).unwrap()
    })
}

fn point() -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.5..1.5f64, -1.5..1.5f64).prop_map(|(a, b)| c(a, b)), 2)
}

/// `Σ w_i |z_i|^{2 d_i} - 1` with positive weights: origin interior, bounded.
fn convex_domain() -> impl Strategy<Value = DomainSpec> {
    (
        prop::collection::vec(1u32..4, 2..4),
        prop::collection::vec(0.5..2.0f64, 3),
    )
        .prop_map(|(powers, weights)| {
            DomainSpec::sum_of_powers(&powers, &weights[..powers.len()]).unwrap()
        })
}

/// `‖z‖⁴ + ‖z‖² - 2` on ℂ², invariant under unitaries with boundary `‖z‖ = 1`.
fn radial_quartic() -> DomainSpec {
    let m = |h: [u32; 2], a: [u32; 2], v: f64| Monomial::new(h.to_vec(), a.to_vec(), c(v, 0.0));
    DomainSpec::new(vec![
        m([2, 0], [2, 0], 1.0),
        m([1, 1], [1, 1], 2.0),
        m([0, 2], [0, 2], 1.0),
        m([1, 0], [1, 0], 1.0),
        m([0, 1], [0, 1], 1.0),
        m([0, 0], [0, 0], -2.0),
    ])
    .unwrap()
}

fn random_unitary(entries: &[(f64, f64)]) -> DMatrix<C64> {
    let a = DMatrix::from_fn(2, 2, |r, col| {
        let (re, im) = entries[2 * r + col];
        c(re, im)
    });
    a.qr().q()
}

fn restricted_eigenvalues(domain: &DomainSpec, z: &[C64]) -> Vec<f64> {
    let m = restricted_levi_form(domain, z).unwrap();
    hermitian_eigen(&((&m + m.adjoint()) * c(0.5, 0.0)))
        .unwrap()
        .eigenvalues
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn levi_form_is_hermitian(domain in real_polynomial(), z in point()) {
        let l = levi_form(&domain, &z).unwrap();
        prop_assert!(hermiticity_residual(&l) <= 1e-12 * (1.0 + max_abs(&l)));
        let value = eval_complex(&domain, &z).unwrap();
        prop_assert!(value.im.abs() <= 1e-12 * (1.0 + value.norm()));
    }

    #[test]
    fn samples_lie_on_the_boundary(domain in convex_domain(), seed in any::<u64>()) {
        let samples = sample_boundary(&domain, 8, seed).unwrap();
        prop_assert!(samples.skipped.is_empty());
        for z in &samples.points {
            prop_assert!(eval(&domain, z).unwrap().abs() <= 1e-10);
        }
    }

    #[test]
    fn tangent_basis_is_orthonormal_and_tangent(domain in convex_domain(), seed in any::<u64>()) {
        for z in sample_boundary(&domain, 4, seed).unwrap().points {
            let basis = complex_tangent_basis(&domain, &z).unwrap();
            prop_assert_eq!(basis.len(), domain.complex_dim() - 1);
            let g = wirtinger_gradient(&domain, &z).unwrap();
            for (i, u) in basis.iter().enumerate() {
                let along: C64 = g.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
                prop_assert!(along.norm() <= 1e-12 * (1.0 + g.iter().map(|x| x.norm()).sum::<f64>()));
                for (j, v) in basis.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((u.dotc(v) - c(expected, 0.0)).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn unitary_covariance(entries in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4), seed in any::<u64>()) {
        let u = random_unitary(&entries);
        prop_assume!((u.adjoint() * &u - DMatrix::identity(2, 2)).iter().all(|d| d.norm() < 1e-12));
        for domain in [DomainSpec::unit_ball(2).unwrap(), radial_quartic()] {
            for z in sample_boundary(&domain, 4, seed).unwrap().points {
                let w: Vec<C64> = (&u * nalgebra::DVector::from_vec(z.clone())).iter().copied().collect();
                let a = restricted_eigenvalues(&domain, &z);
                let b = restricted_eigenvalues(&domain, &w);
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!((x - y).abs() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn radial_quartic_restricted_value() {
    // on ‖z‖ = 1 the complex tangent direction sees ∂∂̄ of r² + r⁴: 1 + 2‖z‖² = 3
    let d = radial_quartic();
    for z in sample_boundary(&d, 16, 5).unwrap().points {
        let ev = restricted_eigenvalues(&d, &z);
        assert!((ev[0] - 3.0).abs() < 1e-10, "{ev:?}");
    }
}
