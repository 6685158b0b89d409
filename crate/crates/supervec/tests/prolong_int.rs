//! Prolongation integration checks: the recursion and the preserver method
//! must produce identical spans, and dimensions must match the enumerative
//! oracle where one exists.

use supervec::catalog::{build, mb38, systems, AlgebraName};
use supervec::prolong::{
    cross_check, homogeneous_fields, normalizer0, prolong_preserver, prolong_recursive,
    GradedSpan, StructureSpec,
};

fn binom(n: i64, k: i64) -> usize {
    if k < 0 || k > n {
        return 0;
    }
    let mut r = 1i64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r as usize
}

#[test]
fn vect2_dims_match_oracle() {
    let c = systems::vect(2, 0);
    let mut g_neg = GradedSpan::new(&c);
    g_neg.set_piece(-1, homogeneous_fields(&c, -1)).unwrap();
    let g0 = homogeneous_fields(&c, 0);
    let r = prolong_recursive(&g_neg, &g0, 2).unwrap();
    for k in -1..=2i64 {
        assert_eq!(r.dims[&k], 2 * binom(2 + k, 1), "degree {k}");
    }
    assert_eq!(
        (-1..=2).map(|k| r.dims[&k]).collect::<Vec<_>>(),
        vec![2, 4, 6, 8]
    );
}

#[test]
fn svect3_recursion_vs_preserver() {
    let (desc, span) = build(&AlgebraName::Svect(3, 0)).unwrap();
    let pres = prolong_preserver(&desc.coords, &desc.structures, 2).unwrap();
    let mut g_neg = GradedSpan::new(&desc.coords);
    g_neg.set_piece(-1, span.piece(-1).to_vec()).unwrap();
    let rec = prolong_recursive(&g_neg, span.piece(0), 2).unwrap();
    let report = cross_check(&rec, &pres);
    assert!(report.equal, "mismatch at {:?}", report.mismatched_degrees);
}

#[test]
fn vle36_recursion_vs_preserver() {
    let (desc, span) = build(&AlgebraName::Vle36).unwrap();
    assert_eq!(span.piece(-2).len(), 3);
    assert_eq!(span.piece(-1).len(), 6);
    assert_eq!(span.piece(0).len(), 12);
    let pres = prolong_preserver(&desc.coords, &desc.structures, 1).unwrap();
    let mut g_neg = GradedSpan::new(&desc.coords);
    g_neg.set_piece(-2, span.piece(-2).to_vec()).unwrap();
    g_neg.set_piece(-1, span.piece(-1).to_vec()).unwrap();
    let rec = prolong_recursive(&g_neg, span.piece(0), 1).unwrap();
    let report = cross_check(&rec, &pres);
    assert!(report.equal, "mismatch at {:?}", report.mismatched_degrees);
}

#[test]
fn mb38_recursion_vs_preserver() {
    let gens = mb38::generators();
    let span = gens.graded_span().unwrap();
    let structures = [StructureSpec::DualPfaffSystem(gens.dual.clone())];
    let pres = prolong_preserver(&gens.coords, &structures, 1).unwrap();
    let mut g_neg = GradedSpan::new(&gens.coords);
    for k in [-3i64, -2, -1] {
        g_neg.set_piece(k, span.piece(k).to_vec()).unwrap();
    }
    let rec = prolong_recursive(&g_neg, span.piece(0), 1).unwrap();
    let report = cross_check(&rec, &pres);
    assert!(report.equal, "mismatch at {:?}", report.mismatched_degrees);
}

#[test]
fn mb38_g0_recomputed_as_normalizer() {
    // Recompute g_0 from the negative part alone as the degree-0 normalizer
    // of g_{-1}, then intersect with the given g_0: dimension 12.
    let gens = mb38::generators();
    let span = gens.graded_span().unwrap();
    let mut g_neg = GradedSpan::new(&gens.coords);
    for k in [-3i64, -2, -1] {
        g_neg.set_piece(k, span.piece(k).to_vec()).unwrap();
    }
    let normalizer = normalizer0(&g_neg).unwrap();
    let mut nspan = GradedSpan::new(&gens.coords);
    nspan.set_piece(0, normalizer).unwrap();
    let (_, n0) = nspan.span_of_piece(0);
    let (_, g0) = span.span_of_piece(0);
    let inter = n0.intersect(&g0);
    assert_eq!(inter.dim(), 12);
    // And the given g_0 is inside its own normalizer.
    assert!(n0.contains_span(&g0));
}
