//! End-to-end acceptance suite. Each test covers one numbered criterion and
//! prints a single `acceptance N (name): PASS|FAIL` line; a failing body
//! still panics so the suite stays honest under `cargo test`.

mod common;

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};

use gkron::circuit::text::{from_text, to_text};
use gkron::circuit::{Circuit, Gate};
use gkron::group::{
    check_adapted, fourier_oracle, irreps, make_cyclic, make_en, make_metacyclic, make_product,
    make_quaternionic, GroupSpec,
};
use gkron::groupft::{
    apply_phase_correction, synth_en_ft, synth_group_ft, synth_metacyclic_ft,
    synth_quaternion_ft, verify, Equivalence,
};
use gkron::matrix::{
    diagonalization_factorize, gkron, kron, product_of, shuffle_matrix, Complex64, ComplexMatrix,
    MatrixTuple, Side,
};
use gkron::transforms::{
    d4_c0, d4_c1, d4_scaling_matrix, dft_matrix, haar_matrix, hadamard_w, synth_d4_scaling,
    synth_dft, synth_haar, synth_walsh, walsh_matrix,
};

use common::{random_circuit, random_unitary_tuple, rng, rows_match_up_to_phase};

fn criterion(number: usize, name: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("acceptance {number} ({name}): PASS"),
        Err(cause) => {
            println!("acceptance {number} ({name}): FAIL");
            resume_unwind(cause);
        }
    }
}

fn assert_close(got: &ComplexMatrix, want: &ComplexMatrix, tol: f64, what: &str) {
    let diff = got.max_abs_diff(want).unwrap();
    assert!(diff <= tol, "{what}: max deviation {diff:.3e} exceeds {tol:.1e}");
}

#[test]
fn criterion_1_generalized_kronecker_algebra() {
    criterion(1, "generalized Kronecker algebra", || {
        let mut rng = rng(101);

        // Factor products of the diagonalization identity equal the direct
        // product, on random unitary tuple pairs with dimensions up to 4.
        for trial in 0..50 {
            let k = trial % 4 + 1;
            let n = trial / 4 % 4 + 1;
            let a = random_unitary_tuple(&mut rng, k, n);
            let c = random_unitary_tuple(&mut rng, n, k);
            for side in [Side::Right, Side::Left] {
                let direct = gkron(side, &a, &c).unwrap();
                let factors = diagonalization_factorize(side, &a, &c).unwrap();
                let product = product_of(&factors).unwrap();
                assert_close(&product, &direct, 1e-12, "factorization product");
            }
        }

        // The 4×4 worked example: both displayed matrices, entry-exact.
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).unwrap();
        let a = MatrixTuple::new(vec![h.clone(), ComplexMatrix::identity(2)]).unwrap();
        let c = MatrixTuple::constant(h, 2).unwrap();
        let right = gkron(Side::Right, &a, &c).unwrap();
        let expected_right = ComplexMatrix::from_real_rows(&[
            &[1.0, 1.0, 1.0, 1.0],
            &[1.0, -1.0, 0.0, 0.0],
            &[1.0, 1.0, -1.0, -1.0],
            &[0.0, 0.0, 1.0, -1.0],
        ])
        .unwrap();
        assert_eq!(right.max_abs_diff(&expected_right).unwrap(), 0.0);
        let left = gkron(Side::Left, &a, &c).unwrap();
        let expected_left = ComplexMatrix::from_real_rows(&[
            &[1.0, 1.0, 1.0, 1.0],
            &[1.0, -1.0, 1.0, -1.0],
            &[1.0, 0.0, -1.0, 0.0],
            &[0.0, 1.0, 0.0, -1.0],
        ])
        .unwrap();
        assert_eq!(left.max_abs_diff(&expected_left).unwrap(), 0.0);

        // Separation identity and the two inverse corollaries on random
        // unitary tuples: AC ⊗ DE = (A ⊗ I_m)(C ⊗ D)(I_n ⊗ E), and
        // (A ⊗_R C)⁻¹ = C⁻¹ ⊗_L A⁻¹ together with its left/right mirror.
        for _ in 0..10 {
            let (m, n) = (rng_dim(&mut rng), rng_dim(&mut rng));
            let a = random_unitary_tuple(&mut rng, m, n);
            let c = random_unitary_tuple(&mut rng, m, n);
            let d = random_unitary_tuple(&mut rng, n, m);
            let e = random_unitary_tuple(&mut rng, n, m);
            let ac = tuple_product(&a, &c);
            let de = tuple_product(&d, &e);
            let id_m = MatrixTuple::constant(ComplexMatrix::identity(m), n).unwrap();
            let id_n = MatrixTuple::constant(ComplexMatrix::identity(n), m).unwrap();
            for side in [Side::Right, Side::Left] {
                let whole = gkron(side, &ac, &de).unwrap();
                let split = product_of(&[
                    gkron(side, &a, &id_m).unwrap(),
                    gkron(side, &c, &d).unwrap(),
                    gkron(side, &id_n, &e).unwrap(),
                ])
                .unwrap();
                assert_close(&split, &whole, 1e-12, "separation identity");
            }

            // Inverse corollaries on the conformable pair (a, d): since the
            // members are unitary, each tuple inverse is the adjoint tuple.
            let (a_inv, d_inv) = (a.adjoints(), d.adjoints());
            let right_inv = gkron(Side::Right, &a, &d).unwrap().adjoint();
            assert_close(
                &gkron(Side::Left, &d_inv, &a_inv).unwrap(),
                &right_inv,
                1e-12,
                "inverse of the right product",
            );
            let via_shuffles = product_of(&[
                shuffle_matrix(n, m),
                gkron(Side::Right, &d_inv, &a_inv).unwrap(),
                shuffle_matrix(m, n),
            ])
            .unwrap();
            assert_close(&via_shuffles, &right_inv, 1e-12, "shuffled right inverse");

            let left_inv = gkron(Side::Left, &a, &d).unwrap().adjoint();
            assert_close(
                &gkron(Side::Right, &d_inv, &a_inv).unwrap(),
                &left_inv,
                1e-12,
                "inverse of the left product",
            );
            let via_shuffles = product_of(&[
                shuffle_matrix(m, n),
                gkron(Side::Left, &d_inv, &a_inv).unwrap(),
                shuffle_matrix(n, m),
            ])
            .unwrap();
            assert_close(&via_shuffles, &left_inv, 1e-12, "shuffled left inverse");
        }
    });
}

fn rng_dim(rng: &mut rand_chacha::ChaCha8Rng) -> usize {
    use rand::Rng;
    rng.gen_range(1..=4)
}

/// Entrywise tuple of products A_i·C_i.
fn tuple_product(a: &MatrixTuple, c: &MatrixTuple) -> MatrixTuple {
    MatrixTuple::new(
        a.members()
            .iter()
            .zip(c.members())
            .map(|(x, y)| x.mul(y).unwrap())
            .collect(),
    )
    .unwrap()
}

#[test]
fn criterion_2_wavelet_transforms() {
    criterion(2, "wavelet transforms", || {
        for n in 1..=8 {
            let circuit = synth_haar(n).unwrap();
            let oracle = haar_matrix(n).unwrap();
            assert_close(&circuit.simulate().unwrap(), &oracle, 1e-10, "Haar transform");
        }
        for m in [4, 6, 8, 16] {
            let circuit = synth_d4_scaling(m).unwrap();
            let oracle = d4_scaling_matrix(m).unwrap();
            assert_close(&circuit.simulate().unwrap(), &oracle, 1e-10, "D4 scaling matrix");
        }
        // The two rotation payloads compose to W after lifting.
        let id = ComplexMatrix::identity(4);
        let lift = |m: &ComplexMatrix| kron(Side::Right, &id, m);
        let product = lift(&d4_c1()).mul(&lift(&d4_c0())).unwrap();
        assert_close(&product, &lift(&hadamard_w()), 1e-12, "lifted rotation product");
    });
}

#[test]
fn criterion_3_dft_synthesis() {
    criterion(3, "discrete Fourier transform synthesis", || {
        let w = hadamard_w();
        let mut ratios = Vec::new();
        for n in 1..=6usize {
            let circuit = synth_dft(&vec![2; n]).unwrap();
            let big_n = 1usize << n;
            assert_close(
                &circuit.simulate().unwrap(),
                &dft_matrix(big_n),
                1e-10,
                "power-of-two transform",
            );

            // Exact per-level emission: n single W payloads, n−1 phase
            // pairs, one trailing permutation.
            let report = circuit.gate_count();
            assert_eq!(report.single_unitaries, n, "single-unitary count at n={n}");
            assert_eq!(report.phase_pairs, n - 1, "phase-pair count at n={n}");
            assert_eq!(report.permutations, 1, "permutation count at n={n}");
            assert_eq!(report.total_gates, 2 * n, "total gates at n={n}");
            for gate in circuit.gates() {
                if let Gate::SingleUnitary { matrix, .. } = gate {
                    assert_close(matrix, &w, 1e-12, "single-unitary payload");
                }
            }

            if n >= 2 {
                ratios.push(report.controlled_op_estimate as f64 / (n * n) as f64);
            }
        }
        // The controlled-op estimate tracks c·n²: the ratio to n² stays
        // within a factor of two across n = 2..6.
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
        assert!(
            max / min <= 2.0,
            "estimate/n² varies by more than 2× ({min:.3} .. {max:.3})"
        );
    });
}

#[test]
fn criterion_4_walsh_transform() {
    criterion(4, "Walsh transform", || {
        for n in 1..=6usize {
            let circuit = synth_walsh(n).unwrap();
            assert_eq!(circuit.len(), n, "gate count at n={n}");
            let sim = circuit.simulate().unwrap();
            assert_close(&sim, &walsh_matrix(n), 1e-10, "sign formula");

            // The same matrix is the Fourier transform of the elementary
            // abelian 2-group, built as a right-nested product of Z_2s.
            let mut spec = GroupSpec::Cyclic(2);
            for _ in 1..n {
                spec = GroupSpec::Product(Box::new(GroupSpec::Cyclic(2)), Box::new(spec));
            }
            let oracle = fourier_oracle(&irreps(&spec.build().unwrap()).unwrap()).unwrap();
            assert_close(&sim, oracle.matrix(), 1e-10, "group transform oracle");
        }
    });
}

#[test]
fn criterion_5_representation_validity() {
    criterion(5, "representation validity", || {
        let mut groups = Vec::new();
        for n in 1..=16 {
            groups.push(make_cyclic(n).unwrap());
        }
        groups.push(
            make_product(&make_cyclic(2).unwrap(), &make_cyclic(3).unwrap()).unwrap(),
        );
        groups.push(make_quaternionic(2).unwrap());
        groups.push(make_quaternionic(4).unwrap());
        for (q, m, r, s) in [(2, 5, 4, 0), (3, 7, 2, 0), (2, 8, 7, 4)] {
            groups.push(make_metacyclic(q, m, r, s).unwrap());
        }
        for n in 0..=3 {
            groups.push(make_en(n).unwrap());
        }
        for group in &groups {
            let reps = irreps(group).unwrap();
            reps.validate(1e-10).unwrap_or_else(|e| {
                panic!("representations of {} fail validation: {e}", group.spec())
            });
            let oracle = fourier_oracle(&reps).unwrap();
            let dev = oracle.matrix().unitarity_deviation().unwrap();
            assert!(dev <= 1e-10, "oracle of {} deviates {dev:.3e}", group.spec());
        }
    });
}

#[test]
fn criterion_6_adapted_representation_chains() {
    criterion(6, "adapted representation chains", || {
        // Quaternionic over its rotation subgroup: the two-dimensional
        // members split into ζ^l ⊕ ζ^(2n−l).
        for n in [2usize, 4] {
            let g = make_quaternionic(n).unwrap();
            let reps = irreps(&g).unwrap();
            let h = make_cyclic(2 * n).unwrap();
            let sub = irreps(&h).unwrap();
            let subset: Vec<usize> = (0..2 * n).collect();
            let report = check_adapted(&reps, &subset, &sub, 1e-10).unwrap();
            for (p, expected) in [(0, 0), (1, 0), (2, n), (3, n)] {
                let blocks = &report.restrictions[p].blocks;
                assert_eq!(blocks.len(), 1);
                assert_eq!(blocks[0].subrep, expected, "one-dim member {p} at n={n}");
            }
            for l in 1..n {
                let blocks = &report.restrictions[3 + l].blocks;
                assert_eq!(blocks.len(), 2, "sigma^{l} block count");
                assert_eq!(blocks[0].rows, vec![0]);
                assert_eq!(blocks[0].subrep, l, "sigma^{l} first row");
                assert_eq!(blocks[1].rows, vec![1]);
                assert_eq!(blocks[1].subrep, 2 * n - l, "sigma^{l} second row");
            }
        }

        // Metacyclic over its normal cyclic subgroup: restrictions are
        // diagonal, row v of an induced member carrying ζ^(i·r^v).
        for (q, m, r, s) in [(2usize, 5usize, 4usize, 0usize), (3, 7, 2, 0)] {
            let g = make_metacyclic(q, m, r, s).unwrap();
            let reps = irreps(&g).unwrap();
            let sub = irreps(&make_cyclic(m).unwrap()).unwrap();
            let subset: Vec<usize> = (0..m).collect();
            let report = check_adapted(&reps, &subset, &sub, 1e-10).unwrap();
            for restriction in &report.restrictions {
                let degree = reps.members()[restriction.rep].degree();
                assert_eq!(restriction.blocks.len(), degree, "diagonal restriction");
                for (v, block) in restriction.blocks.iter().enumerate() {
                    assert_eq!(block.rows, vec![v]);
                }
            }
            // One-dimensional members restrict trivially here (d = 1).
            for p in 0..q {
                assert_eq!(report.restrictions[p].blocks[0].subrep, 0);
            }
            // Induced members: ascending orbit representatives i, row v
            // carrying ζ^(i·r^v mod m).
            let orbit_reps: Vec<usize> = (q..reps.members().len())
                .map(|p| report.restrictions[p].blocks[0].subrep)
                .collect();
            let mut sorted = orbit_reps.clone();
            sorted.sort();
            assert_eq!(orbit_reps, sorted, "orbit representatives ascend");
            for (p, &i) in orbit_reps.iter().enumerate() {
                let mut rv = i;
                for block in &report.restrictions[q + p].blocks {
                    assert_eq!(block.subrep, rv, "induced member row frequency");
                    rv = rv * r % m;
                }
            }
        }

        // The qubit-operator chain: each level restricts to the one below,
        // the top-degree member splitting into even and odd rows.
        for n in 1..=3usize {
            let g = make_en(n).unwrap();
            let reps = irreps(&g).unwrap();
            let h = make_en(n - 1).unwrap();
            let sub = irreps(&h).unwrap();
            let subset: Vec<usize> = (0..h.order()).map(|t| 4 * t).collect();
            let report = check_adapted(&reps, &subset, &sub, 1e-10).unwrap();
            let dim = 1usize << n;
            for x in 0..dim {
                for z in 0..dim {
                    let p = x * dim + z;
                    let expected = (x >> 1) * (dim >> 1) + (z >> 1);
                    let blocks = &report.restrictions[p].blocks;
                    assert_eq!(blocks.len(), 1);
                    assert_eq!(blocks[0].subrep, expected, "one-dim member at n={n}");
                }
            }
            let sigma = report.restrictions.last().unwrap();
            let sub_sigma = sub.members().len() - 1;
            assert_eq!(sigma.blocks.len(), 2);
            assert_eq!(sigma.blocks[0].rows, (0..dim).step_by(2).collect::<Vec<_>>());
            assert_eq!(sigma.blocks[1].rows, (1..dim).step_by(2).collect::<Vec<_>>());
            assert_eq!(sigma.blocks[0].subrep, sub_sigma, "even rows at n={n}");
            assert_eq!(sigma.blocks[1].subrep, sub_sigma, "odd rows at n={n}");
        }
    });
}

#[test]
fn criterion_7_group_transform_circuits() {
    criterion(7, "group transform circuits", || {
        for n in [2, 4] {
            let result = synth_quaternion_ft(n).unwrap();
            assert_eq!(result.equivalence(), Equivalence::Exact);
            let report = verify(&result, 1e-10).unwrap();
            assert!(report.passed, "quaternionic n={n}: {report}");
        }
        for n in 0..=3 {
            let result = synth_en_ft(n).unwrap();
            assert_eq!(result.equivalence(), Equivalence::Exact);
            let report = verify(&result, 1e-10).unwrap();
            assert!(report.passed, "qubit-operator level {n}: {report}");
        }
        for (q, m, r, s) in [(2, 5, 4, 0), (3, 7, 2, 0), (2, 8, 7, 4)] {
            let result = synth_metacyclic_ft(q, m, r, s).unwrap();
            assert_eq!(result.equivalence(), Equivalence::UpToPhase);
            let report = verify(&result, 1e-10).unwrap();
            assert!(report.passed, "metacyclic ({q},{m},{r},{s}): {report}");

            let phases = result.extracted_phases().expect("up-to-phase result has phases");
            for (row, phi) in phases.phases().iter().enumerate() {
                assert!(
                    (phi.norm() - 1.0).abs() <= 1e-10,
                    "row {row} phase modulus {:.3e}",
                    phi.norm()
                );
            }
            // Rows carrying one-dimensional members have phase exactly 1.
            let reps = irreps(&result.spec().build().unwrap()).unwrap();
            for (p, member) in reps.members().iter().enumerate() {
                if member.degree() == 1 {
                    let row = result.encoding().e_freq(p, 1, 1).unwrap();
                    let phi = phases.phases()[row];
                    assert!(
                        (phi - Complex64::new(1.0, 0.0)).norm() <= 1e-10,
                        "one-dim row {row} carries phase {phi}"
                    );
                }
            }

            let corrected = apply_phase_correction(&result).unwrap();
            assert_eq!(corrected.equivalence(), Equivalence::Exact);
            let report = verify(&corrected, 1e-10).unwrap();
            assert!(report.passed, "corrected ({q},{m},{r},{s}): {report}");
        }
    });
}

#[test]
fn criterion_8_presentation_cross_checks() {
    criterion(8, "cross-presentation consistency", || {
        // The product-of-Z_2s transform is the 4×4 Walsh matrix.
        let spec = GroupSpec::Product(
            Box::new(GroupSpec::Cyclic(2)),
            Box::new(GroupSpec::Cyclic(2)),
        );
        let result = synth_group_ft(&spec, false, 1e-10).unwrap();
        assert_close(
            &result.circuit().simulate().unwrap(),
            &walsh_matrix(2),
            1e-12,
            "product of two Z_2s",
        );

        for n in [2usize, 4] {
            // The quaternion group is metacyclic(2, 2n, 2n−1, n); its
            // transform built that way matches the quaternionic oracle up
            // to row order and per-row phase.
            let meta = synth_metacyclic_ft(2, 2 * n, 2 * n - 1, n).unwrap();
            let sim = meta.circuit().simulate().unwrap();
            let oracle = fourier_oracle(&irreps(&make_quaternionic(n).unwrap()).unwrap()).unwrap();
            assert!(
                rows_match_up_to_phase(&sim, oracle.matrix(), 1e-10),
                "metacyclic presentation of the quaternion group, n={n}"
            );

            // Dropping the quaternionic circuit's final phase gate yields
            // the dihedral transform (s = 0), again up to row order and
            // per-row phase.
            let quat = synth_quaternion_ft(n).unwrap();
            let gates = quat.circuit().gates();
            assert!(matches!(gates.last(), Some(Gate::PredicatePhase { .. })));
            let truncated = Circuit::with_gates(
                quat.circuit().layout().clone(),
                gates[..gates.len() - 1].to_vec(),
            )
            .unwrap();
            let dihedral = make_metacyclic(2, 2 * n, 2 * n - 1, 0).unwrap();
            let oracle = fourier_oracle(&irreps(&dihedral).unwrap()).unwrap();
            assert!(
                rows_match_up_to_phase(&truncated.simulate().unwrap(), oracle.matrix(), 1e-10),
                "dihedral transform from the truncated circuit, n={n}"
            );
        }
    });
}

#[test]
fn criterion_9_circuit_serialization() {
    criterion(9, "circuit serialization", || {
        let mut rng = rng(909);
        for case in 0..100 {
            let circuit = random_circuit(&mut rng);
            let text = to_text(&circuit);
            let parsed = from_text(&text)
                .unwrap_or_else(|e| panic!("case {case} failed to parse: {e}\n{text}"));
            assert_eq!(circuit.layout().dims(), parsed.layout().dims(), "case {case} layout");
            assert_eq!(circuit.gates(), parsed.gates(), "case {case} gate list");
            let direct = circuit.simulate().unwrap();
            let round_tripped = parsed.simulate().unwrap();
            assert_close(&direct, &round_tripped, 1e-14, "round-tripped simulation");
        }
    });
}
