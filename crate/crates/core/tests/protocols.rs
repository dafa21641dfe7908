use chainsurg::catalog;
use chainsurg::csscode::{CssCode, PauliOperator};
use chainsurg::f2linalg::{BitVec, F2Matrix};
use chainsurg::protocols::*;
use chainsurg::simverify::ComplexMatrix;

fn branches(m: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u32 << m).map(move |b| (0..m).map(|i| b >> i & 1 == 1).collect())
}

fn steane_pair() -> CssCode {
    catalog::steane().direct_sum(&catalog::trivial_qubit())
}

#[test]
fn cnot_plan_matrices_have_the_expected_shape() {
    let plan = build_cnot_plan(&steane_pair(), 0, 1, &AncillaStrategy::TrivialQubit, None).unwrap();
    let LogicalAction::ZType(p) = &plan.steps[1].logical else {
        panic!()
    };
    // Merged basis keeps the data logicals; the ancilla lands on the control.
    assert_eq!(p, &F2Matrix::parse_rows(&["101", "010"]));
    let LogicalAction::XType(q) = &plan.steps[3].logical else {
        panic!()
    };
    assert_eq!(q, &F2Matrix::parse_rows(&["100", "011"]));
    assert_eq!(plan.working_code().n(), 9);
    assert_eq!(plan.measurement_count(), 3);
}

#[test]
fn steane_cnot_every_branch_corrects_to_cnot() {
    let plan = build_cnot_plan(&steane_pair(), 0, 1, &AncillaStrategy::TrivialQubit, None).unwrap();
    let want = cnot_matrix(2, 0, 1);
    for outcomes in branches(plan.measurement_count()) {
        let got = plan_channel(&plan, &outcomes, Corrections::Full).unwrap();
        assert!(got.max_deviation(&want) < 1e-9, "{outcomes:?}");
    }
}

#[test]
fn uncorrected_merge_flip_is_control_conjugated_cnot() {
    let plan = build_cnot_plan(&steane_pair(), 0, 1, &AncillaStrategy::TrivialQubit, None).unwrap();
    let got = plan_channel(&plan, &[true, false, false], Corrections::FrameOnly).unwrap();
    let x0 = ComplexMatrix::from_fn(4, 4, |r, c| f64::from(u8::from(r == c ^ 1)));
    let want = x0.matmul(&cnot_matrix(2, 0, 1)).matmul(&x0);
    assert!(got.max_deviation(&want) < 1e-9);
}

#[test]
fn surface_patch_cnot_matches() {
    let code = catalog::surface_patch(2, 2).direct_sum(&catalog::surface_patch(2, 2));
    let plan = build_cnot_plan(&code, 0, 1, &AncillaStrategy::TrivialQubit, None).unwrap();
    assert_eq!(plan.working_code().n(), 11);
    let got = plan_channel(
        &plan,
        &vec![false; plan.measurement_count()],
        Corrections::Full,
    )
    .unwrap();
    assert!(got.max_deviation(&cnot_matrix(2, 0, 1)) < 1e-9);
}

#[test]
fn embedded_ancilla_and_reversed_roles() {
    let plan = build_cnot_plan(
        &catalog::no_check(3),
        2,
        0,
        &AncillaStrategy::EmbeddedLogical(1),
        None,
    )
    .unwrap();
    let want = cnot_matrix(2, plan.data_index(2), plan.data_index(0));
    for outcomes in branches(plan.measurement_count()) {
        let got = plan_channel(&plan, &outcomes, Corrections::Full).unwrap();
        assert!(got.max_deviation(&want) < 1e-9, "{outcomes:?}");
    }
}

#[test]
fn logical_composition_is_cnot() {
    let plan = build_cnot_plan(&steane_pair(), 0, 1, &AncillaStrategy::TrivialQubit, None).unwrap();
    let u = compose_logical(&plan, &[false]).unwrap();
    assert!(u.max_deviation(&cnot_matrix(2, 0, 1)) < 1e-9);
    assert!(acts_as_cnot(&u, 0, 1).unwrap());
}

#[test]
fn provided_ancilla_must_be_distant_enough() {
    let err = build_cnot_plan(
        &catalog::steane().direct_sum(&catalog::steane()),
        0,
        1,
        &AncillaStrategy::ProvidedCode(Box::new(catalog::trivial_qubit().with_distance())),
        None,
    )
    .unwrap_err();
    assert_eq!(err.kind(), "AncillaDistanceTooSmall");
}

#[test]
fn out_of_range_indices_rejected() {
    let err =
        build_cnot_plan(&steane_pair(), 0, 2, &AncillaStrategy::TrivialQubit, None).unwrap_err();
    assert_eq!(err.kind(), "LogicalIndexOutOfRange");
}

#[test]
fn pivot_error_spreads_over_the_merged_support() {
    let plan = build_cnot_plan(&steane_pair(), 0, 1, &AncillaStrategy::TrivialQubit, None).unwrap();
    let e = plan.working_code();
    let z = e.z_logicals().representatives();
    let k = &z[0] + &z[2];
    let pivot = k.first_one().unwrap();
    let (out, flips) = propagate_pauli(
        &plan.steps[1],
        &PauliOperator::z_type(BitVec::unit(e.n(), pivot)),
    )
    .unwrap();
    assert!(flips.iter().all(|f| !f));
    let p1 = step_merge_map(&plan.steps[1])
        .unwrap()
        .unwrap()
        .component(1)
        .clone();
    let mut rest = k.clone();
    rest.flip(pivot);
    assert_eq!(out.z, p1.mul_vec(&rest));
    assert_eq!(out.z.weight(), k.weight() - 1);
}

#[test]
fn decomposed_merge_keeps_pivot_errors_local() {
    let code = catalog::surface_patch(2, 2).direct_sum(&catalog::surface_patch(2, 2));
    let plan = build_cnot_plan(&code, 0, 1, &AncillaStrategy::TrivialQubit, Some(2)).unwrap();
    let n = plan.working_code().n();
    for q in 0..n {
        let (out, _) =
            propagate_pauli(&plan.steps[1], &PauliOperator::z_type(BitVec::unit(n, q))).unwrap();
        assert!(out.z.weight() <= 1, "qubit {q}");
    }
}

#[test]
fn relocation_qubit_lies_on_control_x_logical() {
    let plan = build_cnot_plan(&steane_pair(), 0, 1, &AncillaStrategy::TrivialQubit, None).unwrap();
    let q = relocation_qubit(&plan).unwrap();
    assert!(plan.working_code().x_logicals().representatives()[0].get(q));
}

#[test]
fn decomposition_rejects_a_hidden_logical() {
    // C: X check on its first two qubits; u = all three is a Z logical.
    let c =
        CssCode::from_parity_checks(F2Matrix::parse_rows(&["110"]), F2Matrix::zeros(0, 3)).unwrap();
    let a =
        CssCode::from_parity_checks(F2Matrix::parse_rows(&["11"]), F2Matrix::zeros(0, 2)).unwrap();
    let e = c.direct_sum(&a);
    let u = BitVec::from_indices(5, &[0, 1, 2]);
    let w = BitVec::from_indices(5, &[3, 4]);
    let got = decompose_merge_support(&e, &u, &w, 2).unwrap();
    let want = vec![
        BitVec::from_indices(5, &[0, 2]),
        BitVec::from_indices(5, &[1, 3]),
        BitVec::from_indices(5, &[4]),
    ];
    assert_eq!(got, want);
    let err = decompose_merge_support(&e, &u, &w, 1).unwrap_err();
    assert_eq!(err.kind(), "DecompositionInfeasible");
}

#[test]
fn locality_plan_refuses_negative_outcomes() {
    let code = catalog::surface_patch(2, 2).direct_sum(&catalog::surface_patch(2, 2));
    let plan = build_cnot_plan(&code, 0, 1, &AncillaStrategy::TrivialQubit, Some(2)).unwrap();
    let m = plan.measurement_count();
    assert!(measurement_correction(&plan, &vec![false; m])
        .unwrap()
        .is_empty());
    let mut bad = vec![false; m];
    bad[0] = true;
    assert_eq!(
        measurement_correction(&plan, &bad).unwrap_err().kind(),
        "Unsupported"
    );
    let got = plan_channel(&plan, &vec![false; m], Corrections::None).unwrap();
    assert!(got.max_deviation(&cnot_matrix(2, 0, 1)) < 1e-9);
}

#[test]
fn switch_merges_onto_reed_muller() {
    let plan = code_switch_plan().unwrap();
    let LogicalAction::ZType(p) = &plan.steps[1].logical else {
        panic!()
    };
    assert_eq!(p, &F2Matrix::parse_rows(&["11"]));
    let merged = &plan.steps[1].after;
    let rm = catalog::reed_muller_15();
    assert_eq!((merged.n(), merged.k()), (15, 1));
    assert_eq!(
        chainsurg::csscode::distance_bruteforce(merged, 1 << 20),
        Some(3)
    );
    assert_eq!(merged.hx(), rm.hx());
    assert_eq!(merged.hz(), rm.hz());
    let p1 = step_merge_map(&plan.steps[1])
        .unwrap()
        .unwrap()
        .component(1)
        .clone();
    let check = check_merge_stabilisers(plan.working_code(), merged, &p1);
    assert!(check.z_stabilisers_preserved && check.x_checks_pulled_back);
    let round = compose_logical(&plan, &[false]).unwrap();
    assert!(round.max_deviation(&ComplexMatrix::identity(2)) < 1e-9);
}

#[test]
fn singleton_sum_is_strict_unless_both_trivial() {
    let s = catalog::steane();
    let r = singleton_check(&s, &catalog::trivial_qubit());
    assert!(r.first.holds && r.second.holds && r.sum.holds);
    assert!(r.sum_strict);
    let t = singleton_check(&catalog::trivial_qubit(), &catalog::no_check(2));
    assert!(t.sum.saturates && !t.sum_strict);
}

#[test]
fn split_then_merge_is_identity_only_through_the_section() {
    let code = steane_pair();
    let plan = build_cnot_plan(&code, 0, 1, &AncillaStrategy::TrivialQubit, None).unwrap();
    let spec = match &plan.steps[1].kind {
        StepKind::ZMerge { subcode } => subcode.clone(),
        other => panic!("{other:?}"),
    };
    let (_, m) = merge_with_spec(&plan.steps[1].before, &spec).unwrap();
    let p1 = m.p().component(1);
    let n = p1.nrows();
    assert_eq!(p1.mul(&m.section(1)), F2Matrix::identity(n));
    // The pivot column c of p1 survives in the transpose: p1 p1ᵀ = I + c cᵀ.
    let pivot = (0..p1.ncols())
        .find(|&j| p1.column(j).weight() > 1)
        .unwrap();
    let c = p1.column(pivot);
    let outer = F2Matrix::from_columns(n, std::slice::from_ref(&c))
        .unwrap()
        .mul(&F2Matrix::from_rows(n, vec![c]).unwrap());
    assert_eq!(p1.mul(&p1.transpose()), F2Matrix::identity(n).add(&outer));
    assert_ne!(p1.mul(&p1.transpose()), F2Matrix::identity(n));
}
