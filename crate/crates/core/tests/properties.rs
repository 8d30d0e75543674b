//! Randomised invariants.

use std::sync::Arc;

use lambda_cqed::dressed::dressed_block;
use lambda_cqed::eigen::{eigh, eigvalsh, CMatrix};
use lambda_cqed::entanglement::{linear_entropy, partial_transpose, von_neumann_entropy};
use lambda_cqed::initial_state::{conserved_expectations, PacketState};
use lambda_cqed::observables::{atomic_rdm, coherence, field_rdm, husimi_value, Mode};
use lambda_cqed::oracle::{assemble_block, numeric_propagator};
use lambda_cqed::prelude::*;
use lambda_cqed::propagator::block_propagator;
use lambda_cqed::state_space::{chi_to_fock, fock_to_block, lattice_dimension};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn model(mu13: f64, mu23: f64, delta: f64) -> Model {
    Model::new(builtin_atom("li6").unwrap(), mu13, mu23, delta, delta).unwrap()
}

fn packet(m0: usize, raw: &[(f64, f64)]) -> PacketState {
    let lattice = Arc::new(Lattice::new(m0));
    let n = lattice.total_dim();
    let mut amps: Vec<C64> = (0..n).map(|i| C64::new(raw[i % raw.len()].0, raw[(i * 7 + 3) % raw.len()].1)).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amps {
        *z /= norm;
    }
    PacketState::new(lattice, amps, 0.0).unwrap()
}

fn cmat(raw: &[(f64, f64)], n: usize) -> CMatrix {
    let mut g = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (re, im) = raw[(i * n + j) % raw.len()];
            g[(i, j)] = C64::new(re, im);
        }
    }
    g
}

fn hermitian(raw: &[(f64, f64)], n: usize) -> CMatrix {
    let g = cmat(raw, n);
    g.add(&g.adjoint()).scale(0.5)
}

fn density(raw: &[(f64, f64)], n: usize) -> CMatrix {
    let g = cmat(raw, n);
    let rho = g.matmul(&g.adjoint());
    let tr = rho.trace().re;
    rho.scale(1.0 / tr)
}

fn amp() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 11..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lattice_labels_round_trip(m0 in 0usize..25) {
        let lattice = Lattice::new(m0);
        prop_assert_eq!(lattice.total_dim(), lattice_dimension(m0));
        prop_assert_eq!(lattice.total_dim(), (m0 + 1) * (3 * m0 + 4) / 2);
        let mut seen = std::collections::HashSet::new();
        for (b, level, slot) in lattice.slots() {
            let f = chi_to_fock(b, level).unwrap();
            prop_assert_eq!(fock_to_block(f), b);
            prop_assert_eq!(lattice.fock_slot(f), Some(slot));
            prop_assert!(seen.insert((f.n1, f.n2, f.level)));
            prop_assert!(f.n1 + f.n2 <= m0);
        }
        prop_assert_eq!(seen.len(), lattice.total_dim());
    }

    #[test]
    fn block_propagator_is_unitary_and_matches_exponential(
        mu13 in 0.0f64..0.2, mu23 in 0.0f64..0.2, delta in -1.0f64..1.0,
        m2 in 1usize..30, extra in 0usize..30, t in 0.0f64..2000.0,
    ) {
        let m = model(mu13, mu23, delta);
        let b = BlockIndex::new(m2 + extra, m2);
        let u = block_propagator(&dressed_block(b, &m).unwrap(), t).u;
        let h = assemble_block(b, &m.coupling, &m.atom).h;
        let want = numeric_propagator(&h, t).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let dot: C64 = (0..3).map(|k| u.get(k, i).conj() * u.get(k, j)).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - id).norm() < 1e-12);
                prop_assert!((u.get(i, j) - want[i][j]).norm() < 1e-9, "({},{}) {} vs {}", i, j, u.get(i, j), want[i][j]);
            }
        }
    }

    #[test]
    fn evolution_composes(
        mu13 in 0.001f64..0.1, mu23 in 0.001f64..0.1, delta in -0.5f64..0.5,
        t1 in 0.0f64..400.0, t2 in 0.0f64..400.0, raw in amp(),
    ) {
        let m = model(mu13, mu23, delta);
        let psi0 = packet(6, &raw);
        let prop = Propagator::new(&m, Arc::clone(psi0.lattice())).unwrap();
        let a = prop.evolve(&prop.evolve(&psi0, t1).unwrap(), t2).unwrap();
        let b = prop.evolve(&psi0, t1 + t2).unwrap();
        let back = prop.evolve(&b, -(t1 + t2)).unwrap();
        for ((x, y), (z, w)) in a.amplitudes().iter().zip(b.amplitudes()).zip(back.amplitudes().iter().zip(psi0.amplitudes())) {
            prop_assert!((x - y).norm() < 1e-11);
            prop_assert!((z - w).norm() < 1e-11);
        }
        prop_assert!((b.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conserved_quantities_and_bounds(
        mu13 in 0.001f64..0.1, mu23 in 0.001f64..0.1, delta in -0.5f64..0.5,
        t in 0.0f64..1000.0, raw in amp(), re in -3.0f64..3.0, im in -3.0f64..3.0,
    ) {
        let m = model(mu13, mu23, delta);
        let psi0 = packet(5, &raw);
        let prop = Propagator::new(&m, Arc::clone(psi0.lattice())).unwrap();
        let psi = prop.evolve(&psi0, t).unwrap();
        let (q0, q) = (conserved_expectations(&psi0, &m), conserved_expectations(&psi, &m));
        prop_assert!((q.m1 - q0.m1).abs() < 1e-10);
        prop_assert!((q.m2 - q0.m2).abs() < 1e-10);
        prop_assert!((q.energy - q0.energy).abs() < 1e-10 * (1.0 + q0.energy.abs()));

        let rho_a = atomic_rdm(&psi);
        let p = rho_a.probabilities();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&x| x >= -1e-14));
        let c = coherence(&rho_a);
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&c));
        let sl = linear_entropy(&rho_a.matrix()).unwrap();
        prop_assert!((-1e-12..=2.0 / 3.0 + 1e-12).contains(&sl));

        let fd = field_rdm(&psi);
        let sf = von_neumann_entropy(&fd.gram()).unwrap();
        let sa = von_neumann_entropy(&rho_a.matrix()).unwrap();
        prop_assert!((sf - sa).abs() < 1e-9);
        let rho1 = fd.mode(Mode::One);
        let q = husimi_value(&rho1, C64::new(re, im));
        prop_assert!((-1e-14..=1.0 / std::f64::consts::PI + 1e-12).contains(&q));
    }

    #[test]
    fn jacobi_reconstructs_hermitian_matrices(n in 1usize..12, raw in amp()) {
        let a = hermitian(&raw, n);
        let e = eigh(&a);
        let vals = e.spectrum().eigenvalues;
        prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        let mut rebuilt = CMatrix::zeros(n);
        for (j, &l) in vals.iter().enumerate() {
            rebuilt = rebuilt.add(&CMatrix::projector(&e.vector(j)).scale(l));
        }
        prop_assert!(rebuilt.max_abs_diff(&a) < 1e-11);
        prop_assert!((vals.iter().sum::<f64>() - a.trace().re).abs() < 1e-11);
    }

    #[test]
    fn partial_transpose_is_an_involution(d1 in 1usize..5, d2 in 1usize..5, raw in amp()) {
        let rho = density(&raw, d1 * d2);
        let pt = partial_transpose(&rho, d1, d2).unwrap();
        prop_assert!((pt.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(pt.hermiticity_error() < 1e-14);
        prop_assert!(partial_transpose(&pt, d1, d2).unwrap().max_abs_diff(&rho) < 1e-15);
        let spec = eigvalsh(&rho).eigenvalues;
        prop_assert!(spec.iter().all(|&l| l > -1e-12));
    }

    #[test]
    fn coherence_bound_holds_for_arbitrary_qutrit_states(raw in amp()) {
        let rho = density(&raw, 3);
        let abs_offdiag: f64 = (0..3).flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| rho[(i, j)].norm()).sum();
        prop_assert!(abs_offdiag <= 2.0 + 1e-12);
        let sl = linear_entropy(&rho).unwrap();
        prop_assert!((-1e-12..=2.0 / 3.0 + 1e-12).contains(&sl));
    }
}
