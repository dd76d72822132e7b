use bridge_loe::verify::{
    full_suite, path_integral_grid, verify_appendix_lemmas, verify_matrix_identities, verify_path_integral_small_n,
    verify_reflection_identity,
};

fn show_failures(r: &bridge_loe::verify::VerificationReport) {
    for c in r.failures() {
        eprintln!("FAILED {} err={:e} tol={:e} ({})", c.name, c.max_err, c.tol, c.params);
    }
}

#[test]
fn matrix_identities_on_the_full_grid() {
    let ns: Vec<usize> = (1..=16).collect();
    let r = verify_matrix_identities(&ns, &[0.25, 0.5, 1.0, 2.0, 4.0]).unwrap();
    // seven identities per (N, r)
    assert_eq!(r.checks.len(), 16 * 5 * 7);
    // Everything except the resolvent derivative holds on the whole grid.
    for c in r.checks.iter().filter(|c| !c.name.starts_with("resolvent-derivative")) {
        assert!(c.pass, "{} err={:e} tol={:e}", c.name, c.max_err, c.tol);
    }
}

/// Points where the central difference with h = 1e-4 is within 1e-5 of the
/// closed form even in exact arithmetic.
const RESOLVENT_CONDITIONED: &[(usize, f64)] = &[
    (1, 0.25),
    (1, 0.5),
    (1, 1.0),
    (1, 2.0),
    (1, 4.0),
    (2, 0.5),
    (2, 1.0),
    (2, 2.0),
    (2, 4.0),
    (3, 1.0),
    (3, 2.0),
    (3, 4.0),
    (4, 2.0),
    (4, 4.0),
    (6, 2.0),
    (8, 4.0),
    (12, 4.0),
];

#[test]
fn resolvent_derivative_where_well_conditioned() {
    for &(n, rr) in RESOLVENT_CONDITIONED {
        let r = verify_matrix_identities(&[n], &[rr]).unwrap();
        show_failures(&r);
        assert!(r.pass, "N={n} r={rr}");
    }
}

#[test]
fn resolvent_derivative_is_ill_conditioned_at_small_r() {
    // (I − H̃²)⁻¹ has condition number ~1e15 here, and the O(h²) truncation
    // of the central difference alone is ~1e6: no implementation can meet
    // an absolute 1e-5 tolerance.
    let r = verify_matrix_identities(&[8], &[1.0]).unwrap();
    let c = r.checks.iter().find(|c| c.name.starts_with("resolvent-derivative")).unwrap();
    assert!(!c.pass);
    assert!(c.max_err > 1.0);
    assert!(!r.pass);
}

#[test]
fn scalar_case() {
    let r = verify_matrix_identities(&[1], &[1.0]).unwrap();
    show_failures(&r);
    assert!(r.pass);
    let conj = r.checks.iter().find(|c| c.name.starts_with("conjugacy")).unwrap();
    assert!(conj.max_err < 1e-15);
}

#[test]
fn appendix_lemmas() {
    let r = verify_appendix_lemmas().unwrap();
    show_failures(&r);
    assert!(r.pass);
    let conv = r.checks.iter().find(|c| c.name.starts_with("binomial-convolution")).unwrap();
    assert_eq!(conv.max_err, 0.0);
}

#[test]
fn reflection_identity() {
    let r = verify_reflection_identity(&(1..=8).collect::<Vec<_>>(), &[0.5, 1.0, 2.0], &[0.5, 1.0, 2.0]).unwrap();
    show_failures(&r);
    assert!(r.pass);
}

#[test]
fn path_integral() {
    let r = verify_path_integral_small_n(&path_integral_grid()).unwrap();
    show_failures(&r);
    assert!(r.pass);
}

#[test]
fn report_is_sorted_and_anchored() {
    let r = full_suite(2, &[0.5, 1.0]).unwrap();
    show_failures(&r);
    assert!(r.pass);
    assert_eq!(r.pass, r.failures().next().is_none());
    assert!(r.checks.windows(2).all(|w| w[0].name <= w[1].name));
    assert!(r.checks.iter().all(|c| !c.anchor.is_empty()));
}

#[test]
fn rejects_out_of_range_parameters() {
    assert!(verify_matrix_identities(&[17], &[1.0]).is_err());
    assert!(verify_matrix_identities(&[2], &[0.0]).is_err());
    assert!(verify_reflection_identity(&[9], &[1.0], &[1.0]).is_err());
    assert!(verify_reflection_identity(&[2], &[1.0], &[0.1]).is_err());
    assert!(verify_path_integral_small_n(&[0.2]).is_err());
    assert!(full_suite(0, &[1.0]).is_err());
}
