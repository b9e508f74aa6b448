//! End-to-end verification of the affine-scheme constructions over the
//! standard corpus: every ring's structure sheaf, stalks, basic sections,
//! and limit descriptions must check out.

use zariski_core::corpus::standard_corpus;
use zariski_core::scheme::{
    affine_scheme, verify_basic_sections, verify_basis_limit, verify_stalk,
    verify_structure_sheaf,
};
use zariski_core::Limits;

fn lim() -> Limits {
    Limits::default()
}

#[test]
fn corpus_structure_sheaves_verify() {
    let limits = lim();
    for ring in standard_corpus(&limits).unwrap() {
        let report = verify_structure_sheaf(&ring, &limits).unwrap();
        assert!(
            report.passed(),
            "{}: {:?}",
            ring.presentation(),
            report.witness
        );
    }
}

#[test]
fn corpus_global_sections_recover_the_ring() {
    let limits = lim();
    for ring in standard_corpus(&limits).unwrap() {
        let scheme = affine_scheme(&ring, &limits).unwrap();
        let full = scheme.space().topology().full_index();
        assert!(
            scheme.rho(full).is_bijective(),
            "{}: global sections have order {}",
            ring.presentation(),
            scheme.structure().section(full).order()
        );
    }
}

#[test]
fn corpus_stalks_match_local_rings() {
    let limits = lim();
    for ring in standard_corpus(&limits).unwrap() {
        let scheme = affine_scheme(&ring, &limits).unwrap();
        for p in 0..scheme.space().point_count() {
            let report = verify_stalk(&scheme, p, &limits).unwrap();
            assert!(
                report.passed(),
                "{} point {p}: {:?}",
                ring.presentation(),
                report.witness
            );
        }
    }
}

#[test]
fn corpus_basic_sections_match_localizations() {
    let limits = lim();
    for ring in standard_corpus(&limits).unwrap() {
        let scheme = affine_scheme(&ring, &limits).unwrap();
        for f in ring.elements() {
            let report = verify_basic_sections(&scheme, f, &limits).unwrap();
            assert!(
                report.passed(),
                "{} element {f}: {:?}",
                ring.presentation(),
                report.witness
            );
        }
    }
}

#[test]
fn corpus_sections_are_limits_of_basic_localizations() {
    let limits = lim();
    for ring in standard_corpus(&limits).unwrap() {
        let scheme = affine_scheme(&ring, &limits).unwrap();
        for u in 0..scheme.space().topology().open_count() {
            let report = verify_basis_limit(&scheme, u, &limits).unwrap();
            assert!(
                report.passed(),
                "{} open {u}: {:?}",
                ring.presentation(),
                report.witness
            );
        }
    }
}
