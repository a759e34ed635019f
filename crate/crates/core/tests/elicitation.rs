mod common;

use common::{load_fixture, r, rng};
use powerdiag::detector::detect;
use powerdiag::elicitation::{
    check_belief_model, check_elicitable, check_skeleton, projected_simplex, PropertyPartition,
    TypeSpaceSkeleton,
};
use powerdiag::geometry::{CellComplex, Domain, Halfspace};
use powerdiag::lp::polyhedron_dimension;
use powerdiag::scalar::Rational;
use rand::Rng;

/// Level sets of `argmax_r c_r . y + e_r` over the projected simplex, with
/// empty and degenerate cells dropped.
fn scoring_partition(seed: u64, outcomes: usize, reports: usize) -> Option<CellComplex<Rational>> {
    let d = outcomes - 1;
    let mut g = rng(seed);
    let mut scores: Vec<(Vec<i64>, i64)> = Vec::new();
    while scores.len() < reports {
        let s = ((0..d).map(|_| g.random_range(-6..=6)).collect(), g.random_range(-6..=6));
        if !scores.iter().any(|t: &(Vec<i64>, i64)| t.0 == s.0) {
            scores.push(s);
        }
    }
    let simplex: Domain<Rational> = projected_simplex(outcomes).unwrap();
    let mut cells = Vec::new();
    for (cr, er) in &scores {
        let cell: Vec<Halfspace<Rational>> = scores
            .iter()
            .filter(|(cs, _)| cs != cr)
            .map(|(cs, es)| {
                let n = cs.iter().zip(cr).map(|(a, b)| r(a - b)).collect();
                Halfspace::new(n, r(er - es)).unwrap()
            })
            .collect();
        let mut all = cell.clone();
        all.extend(simplex.halfspaces().iter().cloned());
        if polyhedron_dimension(d, &all, &[]).unwrap() == d as isize {
            cells.push(cell);
        }
    }
    (cells.len() >= 2).then(|| CellComplex::raw(d, cells).unwrap())
}

#[test]
fn scoring_rule_partitions_are_elicitable() {
    let mut checked = 0;
    for seed in 0..40u64 {
        let outcomes = 3 + (seed % 2) as usize;
        let Some(cells) = scoring_partition(seed, outcomes, 3 + (seed % 4) as usize) else { continue };
        let k = cells.k();
        let direct = detect(&cells, &projected_simplex(outcomes).unwrap()).unwrap();
        let partition = PropertyPartition::new(
            (0..outcomes).map(|i| format!("w{i}")).collect(),
            (0..k).map(|i| format!("r{i}")).collect(),
            cells.clone(),
        )
        .unwrap();
        let res = check_elicitable(&partition).unwrap();
        assert_eq!(res.verdict.name(), "IsPowerDiagram", "seed {seed}");
        assert_eq!(res.verdict.name(), direct.verdict.name());
        assert_eq!(check_belief_model(&cells).unwrap().verdict.name(), "IsPowerDiagram");
        checked += 1;
    }
    assert!(checked >= 20, "{checked}");
}

#[test]
fn wrappers_match_detect_on_figures() {
    for (name, want) in [
        ("fig1-L.json", "IsPowerDiagram"),
        ("fig1-M.json", "IsPowerDiagram"),
        ("fig1-R.json", "NotPowerDiagram"),
    ] {
        let (cells, domain) = load_fixture(name);
        let labels: Vec<String> = cells.labels().unwrap().to_vec();
        let partition =
            PropertyPartition::new(vec!["sun".into(), "rain".into(), "snow".into()], labels.clone(), cells.clone())
                .unwrap();
        assert_eq!(check_elicitable(&partition).unwrap().verdict.name(), want, "{name}");
        let skeleton = TypeSpaceSkeleton::new(labels, domain.clone(), cells.clone()).unwrap();
        assert_eq!(check_skeleton(&skeleton).unwrap().verdict.name(), want, "{name}");
        assert_eq!(detect(&cells, &domain).unwrap().verdict.name(), want, "{name}");
    }
    let (cells, domain) = load_fixture("fig2-left.json");
    let skeleton = TypeSpaceSkeleton::new(vec!["a".into(), "b".into(), "c".into()], domain, cells).unwrap();
    assert_eq!(check_skeleton(&skeleton).unwrap().verdict.name(), "NotPowerDiagram");
}
