use proptest::prelude::*;
use toeplitz_lab::linalg::hermitian_eigen;
use toeplitz_lab::ssh_bulk_edge::{
    bloch_hamiltonian, chern_number, chern_quadrature_grid_step, chirality_residual,
    edge_hamiltonian, edge_invariant, flat_band, flat_band_residuals, spectral_gap, SshParams,
};

fn gapped_mass() -> impl Strategy<Value = f64> {
    prop_oneof![-2.5..-1.1f64, -0.9..0.9f64, 1.1..2.5f64]
}

/// Gapped masses whose end modes leak less than `1e-10` of their weight past
/// the middle of a 40-site chain (leak ≈ |m|^L in the topological phase).
fn localized_mass() -> impl Strategy<Value = f64> {
    prop_oneof![-2.5..-1.1f64, -0.55..0.55f64, 1.1..2.5f64]
}

fn params(m: f64, n: usize, l: usize, frac: f64) -> SshParams {
    let mut p = SshParams::new(m, n);
    p.lattice_length = l;
    p.delta = frac * spectral_gap(&p).unwrap();
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bulk_and_edge_are_chiral(m in -3.0..3.0f64, n in 1usize..4, theta in 0.0..std::f64::consts::TAU, l in 2usize..30) {
        let mut p = SshParams::new(m, n);
        p.lattice_length = l;
        prop_assert!(chirality_residual(&bloch_hamiltonian(&p, theta).matrix) <= 1e-12);
        prop_assert!(chirality_residual(&edge_hamiltonian(&p).unwrap()) <= 1e-12);
    }

    #[test]
    fn edge_spectrum_pairs(m in -3.0..3.0f64, n in 1usize..3, l in 4usize..30) {
        let mut p = SshParams::new(m, n);
        p.lattice_length = l;
        let ev = hermitian_eigen(&edge_hamiltonian(&p).unwrap()).unwrap().eigenvalues;
        let d = ev.len();
        for i in 0..d {
            prop_assert!((ev[i] + ev[d - 1 - i]).abs() <= 1e-9, "{} vs {}", ev[i], ev[d - 1 - i]);
        }
    }

    #[test]
    fn flat_band_identities(m in gapped_mass(), n in 1usize..4, theta in 0.0..std::f64::consts::TAU) {
        let p = SshParams::new(m, n);
        let fb = flat_band(&bloch_hamiltonian(&p, theta).matrix).unwrap();
        for r in flat_band_residuals(&fb) {
            prop_assert!(r <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bulk_edge_equality(m in localized_mass(), n in 1usize..3) {
        let p = params(m, n, 40, 0.5);
        let bulk = chern_number(&p).unwrap();
        let edge = edge_invariant(&p).unwrap();
        prop_assert_eq!(bulk.det, edge.trace);
        let expected = if m.abs() < 1.0 { n as i64 } else { 0 };
        prop_assert_eq!(bulk.det, expected);
    }

    #[test]
    fn edge_invariant_independent_of_delta(m in localized_mass(), n in 1usize..3) {
        let traces: Vec<i64> = [0.3, 0.6, 0.9]
            .iter()
            .map(|&f| edge_invariant(&params(m, n, 40, f)).unwrap().trace)
            .collect();
        prop_assert!(traces.iter().all(|&t| t == traces[0]));
    }

    #[test]
    fn edge_invariant_stable_in_length(m in localized_mass(), l in 40usize..60) {
        let a = edge_invariant(&params(m, 1, l, 0.5)).unwrap().trace;
        let b = edge_invariant(&params(m, 1, 2 * l, 0.5)).unwrap().trace;
        prop_assert_eq!(a, b);
    }
}

#[test]
fn grid_step_quadrature_converges_quadratically() {
    for m in [-1.5, 0.3] {
        let err = |nk: usize| {
            let mut p = SshParams::new(m, 1);
            p.momentum_grid = nk;
            let det = chern_number(&p).unwrap().det as f64;
            (chern_quadrature_grid_step(&p).unwrap() - det).abs()
        };
        let (e1, e2) = (err(64), err(128));
        if e1 > 1e-9 {
            let ratio = e1 / e2;
            assert!((3.5..4.5).contains(&ratio), "m={m}: ratio {ratio}");
        }
    }
}

#[test]
fn weakly_localized_modes_need_longer_chains() {
    let short = params(0.8, 1, 40, 0.5);
    assert!(edge_invariant(&short).is_err());
    let long = params(0.8, 1, 140, 0.5);
    assert_eq!(
        edge_invariant(&long).unwrap().trace,
        chern_number(&long).unwrap().det
    );
}
