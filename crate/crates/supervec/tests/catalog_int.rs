//! Catalog integration checks: builds, preservation certificates, grade-zero
//! structure, consistency, and the Jacobi battery on basis triples.

use supervec::catalog::{
    build, consistency_check, jacobi_all_basis_triples, verify_g0_structure,
    verify_preservation, AlgebraName,
};
use supervec::prolong::StructureSpec;
use supervec::superpoly::WeightedDegree;

#[test]
fn mb38_full_battery() {
    let (desc, span) = build(&AlgebraName::Mb38).unwrap();
    assert_eq!(desc.superdim, (3, 8));
    assert_eq!(desc.depth, 3);
    assert_eq!(span.depth(), 3);
    assert_eq!(span.piece(0).len(), 12);
    // Degrees exactly {-3,-2,-1,0} with the table dimensions.
    assert_eq!(span.dims().into_iter().collect::<Vec<_>>(), vec![
        (-3, 2),
        (-2, 3),
        (-1, 6),
        (0, 12)
    ]);
    span.verify_grading().unwrap();
    span.verify_closure().unwrap();
    let report = verify_preservation(&desc, &span).unwrap();
    assert!(report.all_pass);
    assert_eq!(report.checks.len(), 23);
    let g0 = verify_g0_structure(&AlgebraName::Mb38).unwrap();
    assert_eq!(g0.g0_dimension, 12);
    assert!(consistency_check(&span));
    let triples = jacobi_all_basis_triples(&span).unwrap();
    assert_eq!(triples, 23 * 24 * 25 / 6);
}

#[test]
fn vle36_full_battery() {
    let (desc, span) = build(&AlgebraName::Vle36).unwrap();
    assert_eq!(desc.superdim, (3, 6));
    assert_eq!(desc.depth, 2);
    span.verify_grading().unwrap();
    span.verify_closure().unwrap();
    let report = verify_preservation(&desc, &span).unwrap();
    assert!(report.all_pass);
    verify_g0_structure(&AlgebraName::Vle36).unwrap();
    assert!(consistency_check(&span));
    let triples = jacobi_all_basis_triples(&span).unwrap();
    assert_eq!(triples, 21 * 22 * 23 / 6);
}

#[test]
fn k12_preserves_contact_form() {
    let (desc, span) = build(&AlgebraName::Contact(1, 2)).unwrap();
    let report = verify_preservation(&desc, &span).unwrap();
    assert!(report.all_pass);
    assert!(consistency_check(&span));
    jacobi_all_basis_triples(&span).unwrap();
}

#[test]
fn vect11_unit_weights_is_inconsistent() {
    let (_, span) = build(&AlgebraName::Vect(1, 1)).unwrap();
    assert!(!consistency_check(&span));
}

#[test]
fn ksle510_builds_and_preserves() {
    let (desc, span) = build(&AlgebraName::Ksle510).unwrap();
    assert_eq!(desc.superdim, (5, 10));
    assert_eq!(span.piece(-2).len(), 5);
    assert_eq!(span.piece(-1).len(), 10);
    // Full preserver of {Pfaff system, vol} at degree 0: sl(5) plus the
    // grading operator, which is divergence-free here since 2*5 = 10*1.
    assert_eq!(span.piece(0).len(), 25);
    span.verify_grading().unwrap();
    span.verify_closure().unwrap();
    let report = verify_preservation(&desc, &span).unwrap();
    assert!(report.all_pass);
    assert!(consistency_check(&span));
}

#[test]
fn hamiltonian_and_periplectic_series() {
    // h(2|1) at degree 0: fields preserving the symplectic-odd form exactly.
    let (desc, span) = build(&AlgebraName::Hamiltonian(2, 1)).unwrap();
    let report = verify_preservation(&desc, &span).unwrap();
    assert!(report.all_pass);
    span.verify_closure().unwrap();
    // sp(2) + odd pieces; dimension of g_0 for h(2|1):
    // fields X with L_X omega = 0 at degree 0.
    assert!(!span.piece(0).is_empty());

    let (desc, span) = build(&AlgebraName::Le(2)).unwrap();
    let report = verify_preservation(&desc, &span).unwrap();
    assert!(report.all_pass);
    span.verify_closure().unwrap();

    let (desc, span) = build(&AlgebraName::Sle(2)).unwrap();
    let report = verify_preservation(&desc, &span).unwrap();
    assert!(report.all_pass);
    // sle(2) strictly smaller than le(2) at degree 0.
    let (_, le_span) = build(&AlgebraName::Le(2)).unwrap();
    assert!(span.piece(0).len() < le_span.piece(0).len());
}

#[test]
fn odd_contact_and_deformation() {
    let (desc, span) = build(&AlgebraName::OddContact(1)).unwrap();
    let report = verify_preservation(&desc, &span).unwrap();
    assert!(report.all_pass);
    span.verify_closure().unwrap();

    let beta = supervec::frac::<supervec::Rat>(1, 2);
    let (desc_s, span_s) = build(&AlgebraName::SmBeta(1, beta)).unwrap();
    let report = verify_preservation(&desc_s, &span_s).unwrap();
    assert!(report.all_pass, "{:#?}", report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    span_s.verify_closure().unwrap();
    // The deformed subalgebra is strictly smaller somewhere in degree <= 0.
    let total_m: usize = span.dims().values().sum();
    let total_sm: usize = span_s.dims().values().sum();
    assert!(total_sm < total_m, "sm_beta(1) = {total_sm}, m(1) = {total_m}");
}

#[test]
fn mb38_bracket_examples() {
    // [E_i, F_a] = 0: the weight-3 derivative annihilates the E coefficients.
    let gens = supervec::catalog::mb38::generators();
    for e in &gens.e {
        for f in &gens.f {
            assert!(e.bracket(f).unwrap().is_zero());
        }
    }
    // Z measures the degree of every named generator.
    for (name, deg, x) in gens.named_generators() {
        assert_eq!(
            x.weighted_degree(),
            WeightedDegree::Homogeneous(deg),
            "degree of {name}"
        );
        let zb = gens.z.bracket(&x).unwrap();
        assert_eq!(zb, x.scale_int(deg), "[Z, {name}]");
    }
}

#[test]
fn structure_kinds_exposed() {
    let (desc, _) = build(&AlgebraName::Vle36).unwrap();
    let kinds: Vec<&str> = desc.structures.iter().map(StructureSpec::kind).collect();
    assert_eq!(kinds, vec!["pfaff-system", "volume-form"]);
}
