mod common;

use common::{r, rng, round_trip_case, same_paired_cells, DomainKind};
use powerdiag::adjacency::normalize_raw;
use powerdiag::detector::{detect, verify_certificate, Verdict};
use powerdiag::geometry::{classify_point, forward_construct, CellComplex, Domain, PowerDiagramSpec};
use powerdiag::random::{SiteRegion, SpecGenerator};
use powerdiag::scalar::{dot, q, sub_vec, Rational, Scalar, Tolerance};
use proptest::prelude::*;
use rand::Rng;

fn assert_round_trip(complex: &CellComplex<Rational>, domain: &Domain<Rational>, what: &str) {
    let res = detect(complex, domain).unwrap();
    let Verdict::IsPowerDiagram(cert) = &res.verdict else {
        panic!("{what}: {:?}", res.verdict);
    };
    assert!(verify_certificate(complex, domain, cert).unwrap(), "{what}");
    let rebuilt = forward_construct(&cert.spec, domain).unwrap();
    assert!(same_paired_cells(&rebuilt, complex), "{what}: certificate rebuilds other cells");
    assert!(cert.lambdas.values().all(|l| *l >= r(1)), "{what}");
}

#[test]
fn forward_then_detect_recovers_every_diagram() {
    let mut seed = 0;
    for dim in 2..=3 {
        for k in [2, 4, 6] {
            for kind in DomainKind::ALL {
                seed += 1;
                let case = round_trip_case(seed, dim, k, kind);
                assert_round_trip(&case.complex, &case.domain, &format!("seed {seed} {kind:?}"));
            }
        }
    }
}

#[test]
fn raw_form_normalizes_back_to_the_same_complex() {
    for seed in 0..50u64 {
        let dim = 2 + (seed % 2) as usize;
        let k = 2 + (seed % 7) as usize;
        let kind = DomainKind::ALL[(seed % 3) as usize];
        let case = round_trip_case(100 + seed, dim, k, kind);
        let raw = case.complex.to_raw();
        assert!(!raw.is_paired());
        let paired = normalize_raw(&raw, &case.domain).unwrap();
        assert!(same_paired_cells(&paired, &case.complex), "seed {seed}");
        assert_eq!(
            detect(&raw, &case.domain).unwrap().verdict.name(),
            "IsPowerDiagram",
            "seed {seed}"
        );
    }
}

#[test]
fn classify_point_agrees_with_cell_membership() {
    for seed in 0..20u64 {
        let spec = SpecGenerator::new(seed).spec(2, 5, SiteRegion::Symmetric);
        let domain = Domain::full(2);
        let Ok(complex) = forward_construct(&spec, &domain) else { continue };
        let mut g = rng(seed);
        for _ in 0..40 {
            let x: Vec<Rational> = (0..2).map(|_| q(g.random_range(-40..=40), 20)).collect();
            let set = classify_point(&x, &spec).unwrap();
            for i in 0..spec.k() {
                assert_eq!(
                    set.contains(&i),
                    complex.cell_contains(i, &x, Tolerance::DEFAULT),
                    "seed {seed} x {x:?} cell {i}"
                );
            }
            assert!(!set.is_empty());
        }
    }
}

#[test]
fn equal_offsets_give_perpendicular_bisectors() {
    for seed in 0..20u64 {
        let mut g = SpecGenerator::new(seed);
        let sites: Vec<Vec<Rational>> = (0..4).map(|_| g.point(3, SiteRegion::Symmetric)).collect();
        if (0..4).any(|i| (0..i).any(|j| sites[i] == sites[j])) {
            continue;
        }
        let offsets = vec![q(3, 7); 4];
        let spec = PowerDiagramSpec::from_offsets(sites.clone(), &offsets).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let (normal, offset) = spec.separator_parts(i, j);
                assert_eq!(normal, sub_vec(&sites[j], &sites[i]));
                let mid: Vec<Rational> = sites[i].iter().zip(&sites[j]).map(|(a, b)| (a + b) * Rational::half()).collect();
                assert_eq!(dot(&normal, &mid), offset);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn detect_is_sound_on_random_specs(seed in 0u64..10_000, k in 2usize..=6, kind in 0usize..3) {
        let case = round_trip_case(seed, 2, k, DomainKind::ALL[kind]);
        let res = detect(&case.complex, &case.domain).unwrap();
        let cert = res.verdict.certificate().cloned();
        prop_assert!(cert.is_some());
        prop_assert!(verify_certificate(&case.complex, &case.domain, &cert.unwrap()).unwrap());
    }
}
