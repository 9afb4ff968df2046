use germlab::experiments::{
    approximation_experiment, determinacy_experiment, eqdiags_check, perturb, EqdiagsEvidence,
    EqdiagsOptions, ExperimentKind, PerturbationSpec,
};
use germlab::germ::{GermOptions, MapGerm};
use germlab::{IdealPresentation, JetContext, Limits, LocalOrder, Poly, TieBreak, Vars};

fn parse(names: &[&str], gens: &[&str]) -> Vec<Poly> {
    let v = Vars::new(names).unwrap();
    gens.iter().map(|g| v.parse(g).unwrap()).collect()
}

fn ideal(names: &[&str], gens: &[&str]) -> IdealPresentation {
    IdealPresentation::new(names.len(), parse(names, gens)).unwrap()
}

fn map(names: &[&str], comps: &[&str]) -> MapGerm {
    MapGerm::new(names.len(), parse(names, comps)).unwrap()
}

fn spec(n: usize, mu: u64, trials: usize, seed: u64) -> PerturbationSpec {
    PerturbationSpec::new(LocalOrder::degree(n, TieBreak::Forward), mu, trials, seed)
}

const X12: &[&str] = &["x1", "x2"];
const XY: &[&str] = &["x", "y"];

#[test]
fn perturbations_are_jet_fixed() {
    let phi = parse(X12, &["x1 - x2"]);
    let s = PerturbationSpec {
        tail_degree_max: 3,
        ..spec(2, 2, 1, 11)
    };
    assert_eq!(s.admissible_monomials().len(), 4);
    for trial in 0..20 {
        let out = perturb(&phi, &s, trial);
        let jet = JetContext::new(s.jet.order.clone(), 2);
        assert_eq!(out[0].jet(&jet), phi[0]);
        assert!(out[0].total_degree().unwrap() <= 3);
        assert_eq!(out, perturb(&phi, &s, trial));
    }
    assert_ne!(perturb(&phi, &s, 0), perturb(&phi, &s, 1));

    // nothing fits between μ and the degree cap
    let s = PerturbationSpec {
        tail_degree_max: 2,
        ..spec(2, 2, 1, 11)
    };
    assert!(s.admissible_monomials().is_empty());
    assert_eq!(perturb(&phi, &s, 0), phi);
}

#[test]
fn determinacy_examples() {
    let opts = GermOptions::default();
    let r = determinacy_experiment(
        &ideal(X12, &["x1*x2"]),
        &map(X12, &["x1 - x2"]),
        &spec(2, 2, 100, 5),
        &opts,
    )
    .unwrap();
    assert_eq!(r.kind, ExperimentKind::Determinacy);
    assert_eq!(r.reference.bound, 2);
    assert!(r.guaranteed);
    assert_eq!((r.passed, r.failed, r.lemma_violations), (100, 0, 0));
    assert!(!r.has_defects());

    let r = determinacy_experiment(
        &IdealPresentation::zero(2),
        &map(X12, &["x1"]),
        &spec(2, 1, 20, 5),
        &opts,
    )
    .unwrap();
    assert!(r.guaranteed);
    assert_eq!((r.passed, r.failed), (20, 0));

    let r = determinacy_experiment(
        &ideal(X12, &["x1*x2"]),
        &map(X12, &["x1 - x2"]),
        &spec(2, 2, 0, 5),
        &opts,
    )
    .unwrap();
    assert!(r.records.is_empty());
    assert_eq!((r.passed, r.failed), (0, 0));
    assert!(!r.has_defects());
}

#[test]
fn approximation_examples() {
    let opts = GermOptions::default();
    let r = approximation_experiment(
        &ideal(XY, &["x^2 - y^3"]),
        &map(XY, &["y"]),
        &spec(2, 3, 50, 9),
        &opts,
    )
    .unwrap();
    assert_eq!(r.reference.bound, 2);
    assert!(r.guaranteed);
    assert_eq!((r.passed, r.failed, r.lemma_violations), (50, 0, 0));

    let r = approximation_experiment(
        &ideal(X12, &["x1*x2"]),
        &map(X12, &["x1 - x2"]),
        &spec(2, 2, 30, 9),
        &opts,
    )
    .unwrap();
    assert!(r.guaranteed);
    assert_eq!((r.passed, r.failed), (30, 0));

    let r = approximation_experiment(
        &ideal(XY, &["x^2 - y^3"]),
        &map(XY, &["y"]),
        &spec(2, 1, 10, 9),
        &opts,
    )
    .unwrap();
    assert!(!r.guaranteed);
    assert_eq!(r.records.len(), 10);
    assert_eq!(r.passed + r.failed, 10);
}

#[test]
fn reports_are_reproducible() {
    let opts = GermOptions::default();
    let run = || {
        approximation_experiment(
            &ideal(X12, &["x1*x2"]),
            &map(X12, &["x1 - x2"]),
            &spec(2, 2, 5, 3),
            &opts,
        )
        .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    let csv = a.to_csv();
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.starts_with("trial,passed,domain_hs,fibre_hs,"));
}

#[test]
fn eqdiags_examples() {
    let full = EqdiagsOptions {
        full_limits: Some(Limits::default()),
        ..EqdiagsOptions::default()
    };
    for gens in [
        &["x^2 - y^3"][..],
        &["x*y", "x^3 + y^4"],
        &["x^2", "y^2"],
        &["x^2*y", "y^3 - x^4"],
    ] {
        let i = ideal(XY, gens);
        for trial in 0..5 {
            let o = eqdiags_check(&i, 1, trial, &full).unwrap();
            assert!(o.contains && !o.is_violation(), "{gens:?} {o:?}");
            let EqdiagsEvidence::Full {
                hs_equal,
                diagrams_equal,
                ..
            } = o.evidence
            else {
                // The scan found a difference before the full basis was needed.
                let EqdiagsEvidence::Truncated {
                    first_difference, ..
                } = o.evidence
                else {
                    unreachable!()
                };
                assert!(first_difference.is_some());
                continue;
            };
            assert_eq!(hs_equal, diagrams_equal, "{gens:?}");
            let scanned = eqdiags_check(&i, 1, trial, &EqdiagsOptions::default()).unwrap();
            assert!(scanned.contains);
            assert!(matches!(
                scanned.evidence,
                EqdiagsEvidence::Truncated {
                    first_difference: None,
                    ..
                }
            ));
        }
    }
    // Finite colength and μ at the highest corner: the tail lies in the ideal.
    let o = eqdiags_check(&ideal(XY, &["x^2", "y^2"]), 3, 0, &full).unwrap();
    assert!(matches!(
        o.evidence,
        EqdiagsEvidence::Full {
            hs_equal: true,
            diagrams_equal: true,
            ..
        }
    ));
}
