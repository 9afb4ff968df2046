//! Random jet-fixed perturbations, and the invariants that must survive them.
//!
//! A perturbation adds to each polynomial a tail of monomials of weight above
//! the jet order `μ`. Above the effective bounds computed in [`crate::germ`]
//! flatness, Hilbert-Samuel functions, diagrams and tangent cones are all
//! preserved, so in that regime every failed check is a defect of this
//! library.

use num_rational::BigRational;
use num_traits::One;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::Diagram;
use crate::germ::{
    cm_certify, determinacy_order, flatness_check, germ_order, tangent_cone_ideal,
    tangent_cones_equal, CmEvidence, CmStatus, GermOptions, MapGerm,
};
use crate::poly::{Exponent, JetContext, LocalOrder, Poly, PositiveLinearForm};
use crate::standard_basis::{IdealPresentation, Limits};
use crate::{Error, Result};

/// Printed in every experiment report.
pub const REPORT_NOTE: &str =
    "Invariants are checked on random polynomial perturbations that agree with the \
input up to the jet order. No algebraic approximant is constructed.";

/// `l_max` used when an experiment looks for its own CM evidence.
const CM_SEARCH_L_MAX: u64 = 4;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PerturbationSpec {
    /// Jet order and the order whose weights it refers to.
    pub jet: JetContext,
    /// Largest total degree of a tail monomial.
    pub tail_degree_max: u64,
    pub trials: usize,
    pub seed: u64,
    /// Tail coefficients are uniform integers in `[-coefficient_range, coefficient_range]`.
    pub coefficient_range: i64,
    /// When set, each tail has this many distinct admissible monomials (or
    /// all of them, if fewer) with nonzero coefficients instead of every
    /// admissible monomial.
    pub tail_terms: Option<usize>,
}

impl PerturbationSpec {
    /// Tails up to degree `μ + 2` with coefficients in `[-5, 5]`.
    pub fn new(order: LocalOrder, mu: u64, trials: usize, seed: u64) -> Self {
        PerturbationSpec {
            jet: JetContext::new(order, mu),
            tail_degree_max: mu + 2,
            trials,
            seed,
            coefficient_range: 5,
            tail_terms: None,
        }
    }

    pub fn mu(&self) -> u64 {
        self.jet.mu
    }

    /// The monomials a tail may use: weight at least `μ + 1` and total degree
    /// at most `tail_degree_max`, in increasing order.
    pub fn admissible_monomials(&self) -> Vec<Exponent> {
        let ord = &self.jet.order;
        let n = ord.nvars();
        let mut out: Vec<Exponent> = Diagram::empty(n)
            .complement_points(&PositiveLinearForm::degree(n), self.tail_degree_max)
            .into_iter()
            .filter(|e| ord.weight(e) > self.jet.mu)
            .collect();
        out.sort_by(|a, b| ord.cmp(a, b));
        out
    }
}

/// `polys` plus random tails, deterministic in `(spec.seed, trial)`. Every
/// admissible monomial gets an independent coefficient per polynomial; zero
/// draws leave it out. With `tail_terms` set, the monomials are sampled first.
pub fn perturb(polys: &[Poly], spec: &PerturbationSpec, trial: usize) -> Vec<Poly> {
    let monomials = spec.admissible_monomials();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(trial as u64);
    let c = spec.coefficient_range.abs();
    polys
        .iter()
        .map(|p| {
            let mut out = p.clone();
            match spec.tail_terms {
                None => {
                    for e in &monomials {
                        let k: i64 = rng.gen_range(-c..=c);
                        if k != 0 {
                            out.add_term(e.clone(), BigRational::from_integer(k.into()));
                        }
                    }
                }
                Some(count) if c > 0 => {
                    let mut picked =
                        sample(&mut rng, monomials.len(), count.min(monomials.len())).into_vec();
                    picked.sort_unstable();
                    for i in picked {
                        let k: i64 = rng.gen_range(1..=c) * if rng.gen::<bool>() { 1 } else { -1 };
                        out.add_term(monomials[i].clone(), BigRational::from_integer(k.into()));
                    }
                }
                Some(_) => {}
            }
            out
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Determinacy,
    Approximation,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    /// Generators of the perturbed domain; equal to the input when the
    /// domain is held fixed.
    #[serde(skip)]
    pub ideal: Vec<Poly>,
    #[serde(skip)]
    pub map: Vec<Poly>,
    pub checks: Vec<Check>,
    pub domain_hs: Vec<u64>,
    pub fibre_hs: Vec<u64>,
    pub domain_diagram: Diagram,
    pub fibre_diagram: Diagram,
    /// Failed lemma assertions; these are defects whatever the regime.
    pub lemma_violations: Vec<String>,
}

impl TrialRecord {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// The invariants of the unperturbed input.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Reference {
    pub cm_evidence: CmEvidence,
    /// μ0 for determinacy experiments, the larger vertex degree of the two
    /// diagrams for approximation experiments.
    pub bound: u64,
    pub domain_hs: Vec<u64>,
    pub fibre_hs: Vec<u64>,
    pub domain_diagram: Diagram,
    pub fibre_diagram: Diagram,
    #[serde(skip)]
    pub domain_cone: Vec<Poly>,
    #[serde(skip)]
    pub fibre_cone: Vec<Poly>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub note: &'static str,
    pub spec: PerturbationSpec,
    pub admissible_monomials: usize,
    /// Whether `μ` is at least the bound under which every check must pass.
    pub guaranteed: bool,
    pub reference: Reference,
    pub records: Vec<TrialRecord>,
    pub passed: usize,
    pub failed: usize,
    pub lemma_violations: usize,
}

impl ExperimentReport {
    fn new(
        kind: ExperimentKind,
        spec: &PerturbationSpec,
        reference: Reference,
        records: Vec<TrialRecord>,
    ) -> Self {
        let passed = records.iter().filter(|r| r.passed()).count();
        let lemma_violations = records.iter().map(|r| r.lemma_violations.len()).sum();
        ExperimentReport {
            kind,
            note: REPORT_NOTE,
            spec: spec.clone(),
            admissible_monomials: spec.admissible_monomials().len(),
            guaranteed: spec.mu() >= reference.bound,
            failed: records.len() - passed,
            passed,
            lemma_violations,
            reference,
            records,
        }
    }

    /// A failure that the theory rules out: any failed check in the
    /// guaranteed regime, or any lemma violation.
    pub fn has_defects(&self) -> bool {
        (self.guaranteed && self.failed > 0) || self.lemma_violations > 0
    }

    /// One row per trial: the verdict of every check, then both
    /// Hilbert-Samuel tables with `;` between values.
    pub fn to_csv(&self) -> String {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
        let mut out = String::from("trial,passed");
        if let Some(r) = self.records.first() {
            for c in &r.checks {
                out.push(',');
                out.push_str(c.name);
            }
        }
        out.push_str(",domain_hs_table,fibre_hs_table\n");
        for r in &self.records {
            out.push_str(&format!("{},{}", r.trial, r.passed()));
            for c in &r.checks {
                out.push_str(&format!(",{}", c.passed));
            }
            out.push_str(&format!(",{},{}\n", join(&r.domain_hs), join(&r.fibre_hs)));
        }
        out
    }
}

fn cm_evidence(ideal: &IdealPresentation, seed: u64, opts: &GermOptions) -> Result<CmEvidence> {
    Ok(match cm_certify(ideal, CM_SEARCH_L_MAX, seed, opts)? {
        CmStatus::Certified { l } => CmEvidence::Certified { l },
        _ => CmEvidence::Asserted,
    })
}

fn hs(ideal: &IdealPresentation, opts: &GermOptions) -> Result<(Vec<u64>, Diagram)> {
    let d = ideal.diagram(&germ_order(ideal.nvars()))?;
    Ok((d.hilbert_samuel(opts.hs_eta_max).values, d))
}

/// Lemma assertions comparing an ideal with a jet-fixed perturbation of its
/// generators. Nothing is asserted unless `μ` is at least the largest vertex
/// weight of the original for the order of `spec`. Then
///
/// * the perturbed diagram contains the original and agrees with it up to
///   weight `μ`;
/// * if also `μ` reaches the largest vertex degree for [`germ_order`] and the
///   Hilbert-Samuel tables agree up to the largest vertex degree of the
///   perturbed diagram, the diagrams are equal.
pub fn lemma_violations(
    label: &str,
    original: &IdealPresentation,
    perturbed: &IdealPresentation,
    spec: &PerturbationSpec,
) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let ord = &spec.jet.order;
    let (d0, d1) = (original.diagram(ord)?, perturbed.diagram(ord)?);
    if d0
        .max_vertex_weight(&ord.form)
        .is_some_and(|w| spec.mu() < w)
    {
        return Ok(out);
    }
    if !(d0.is_subset_of(&d1) && d0.equal_up_to(&d1, &ord.form, spec.mu())) {
        out.push(format!("{label}: diagram changed below the jet order"));
    }
    let gord = germ_order(original.nvars());
    let (g0, g1) = (original.diagram(&gord)?, perturbed.diagram(&gord)?);
    let eta = g1.max_vertex_degree().unwrap_or(0);
    if g0.max_vertex_degree().is_none_or(|w| spec.mu() >= w)
        && g0.hilbert_samuel(eta).values == g1.hilbert_samuel(eta).values
        && g0 != g1
    {
        out.push(format!(
            "{label}: equal Hilbert-Samuel tables up to {eta} but different diagrams"
        ));
    }
    Ok(out)
}

/// Perturbs the map only and checks that flatness, the fibre's
/// Hilbert-Samuel table, its diagram and its tangent cone survive.
pub fn determinacy_experiment(
    ideal: &IdealPresentation,
    phi: &MapGerm,
    spec: &PerturbationSpec,
    opts: &GermOptions,
) -> Result<ExperimentReport> {
    let evidence = cm_evidence(ideal, spec.seed, opts)?;
    let det = determinacy_order(ideal, phi, spec.seed, evidence, opts)?;
    let fibre = phi.fibre_ideal(ideal)?;
    let (domain_hs, domain_diagram) = hs(ideal, opts)?;
    let gord = germ_order(ideal.nvars());
    let bound = det
        .mu0
        .max(det.flatness.fibre_diagram.max_vertex_degree().unwrap_or(0));
    let reference = Reference {
        cm_evidence: evidence,
        bound,
        domain_hs: domain_hs.clone(),
        fibre_hs: det.flatness.fibre_hs.values.clone(),
        domain_diagram: domain_diagram.clone(),
        fibre_diagram: det.flatness.fibre_diagram.clone(),
        domain_cone: tangent_cone_ideal(ideal, &gord)?,
        fibre_cone: tangent_cone_ideal(&fibre, &gord)?,
    };

    let mut records = Vec::with_capacity(spec.trials);
    for trial in 0..spec.trials {
        let map = perturb(phi.components(), spec, trial);
        let psi = MapGerm::new(phi.nvars(), map.clone())?;
        let v = flatness_check(ideal, &psi, spec.seed, evidence, opts)?;
        let new_fibre = psi.fibre_ideal(ideal)?;
        let checks = vec![
            Check {
                name: "flat",
                passed: v.flat,
            },
            Check {
                name: "fibre_hs",
                passed: v.fibre_hs.values == reference.fibre_hs,
            },
            Check {
                name: "fibre_diagram",
                passed: v.fibre_diagram == reference.fibre_diagram,
            },
            Check {
                name: "fibre_tangent_cone",
                passed: tangent_cones_equal(&fibre, &new_fibre)?,
            },
        ];
        records.push(TrialRecord {
            trial,
            ideal: ideal.generators().to_vec(),
            map,
            checks,
            domain_hs: domain_hs.clone(),
            fibre_hs: v.fibre_hs.values,
            domain_diagram: domain_diagram.clone(),
            fibre_diagram: v.fibre_diagram,
            lemma_violations: lemma_violations("fibre", &fibre, &new_fibre, spec)?,
        });
    }
    Ok(ExperimentReport::new(
        ExperimentKind::Determinacy,
        spec,
        reference,
        records,
    ))
}

/// Perturbs the generators of the domain and the map together and checks
/// both Hilbert-Samuel functions, both diagrams, both tangent cones and
/// flatness of the perturbed map on the perturbed domain.
pub fn approximation_experiment(
    ideal: &IdealPresentation,
    phi: &MapGerm,
    spec: &PerturbationSpec,
    opts: &GermOptions,
) -> Result<ExperimentReport> {
    let n = ideal.nvars();
    let gord = germ_order(n);
    let evidence = cm_evidence(ideal, spec.seed, opts)?;
    let fibre = phi.fibre_ideal(ideal)?;
    let (domain_hs, domain_diagram) = hs(ideal, opts)?;
    let (fibre_hs, fibre_diagram) = hs(&fibre, opts)?;
    let bound = domain_diagram
        .max_vertex_degree()
        .unwrap_or(0)
        .max(fibre_diagram.max_vertex_degree().unwrap_or(0));
    let reference = Reference {
        cm_evidence: evidence,
        bound,
        domain_hs,
        fibre_hs,
        domain_diagram,
        fibre_diagram,
        domain_cone: tangent_cone_ideal(ideal, &gord)?,
        fibre_cone: tangent_cone_ideal(&fibre, &gord)?,
    };
    let flat_before = flatness_check(ideal, phi, spec.seed, evidence, opts)?.flat;

    let k = ideal.generators().len();
    let mut records = Vec::with_capacity(spec.trials);
    for trial in 0..spec.trials {
        let mut all: Vec<Poly> = ideal.generators().to_vec();
        all.extend(phi.components().iter().cloned());
        let mut perturbed = perturb(&all, spec, trial);
        let map = perturbed.split_off(k);
        let new_ideal = IdealPresentation::new(n, perturbed)?.with_limits(ideal.limits());
        let psi = MapGerm::new(n, map.clone())?;
        let new_fibre = psi.fibre_ideal(&new_ideal)?;
        let (dhs, dd) = hs(&new_ideal, opts)?;
        let (fhs, fd) = hs(&new_fibre, opts)?;
        let flat = flatness_check(&new_ideal, &psi, spec.seed, evidence, opts)?.flat;
        let checks = vec![
            Check {
                name: "domain_hs",
                passed: dhs == reference.domain_hs,
            },
            Check {
                name: "fibre_hs",
                passed: fhs == reference.fibre_hs,
            },
            Check {
                name: "domain_diagram",
                passed: dd == reference.domain_diagram,
            },
            Check {
                name: "fibre_diagram",
                passed: fd == reference.fibre_diagram,
            },
            Check {
                name: "domain_tangent_cone",
                passed: tangent_cones_equal(ideal, &new_ideal)?,
            },
            Check {
                name: "fibre_tangent_cone",
                passed: tangent_cones_equal(&fibre, &new_fibre)?,
            },
            Check {
                name: "flat",
                passed: flat == flat_before,
            },
        ];
        let mut violations = lemma_violations("domain", ideal, &new_ideal, spec)?;
        violations.extend(lemma_violations("fibre", &fibre, &new_fibre, spec)?);
        records.push(TrialRecord {
            trial,
            ideal: new_ideal.generators().to_vec(),
            map,
            checks,
            domain_hs: dhs,
            fibre_hs: fhs,
            domain_diagram: dd,
            fibre_diagram: fd,
            lemma_violations: violations,
        });
    }
    Ok(ExperimentReport::new(
        ExperimentKind::Approximation,
        spec,
        reference,
        records,
    ))
}

/// Options for [`eqdiags_check`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct EqdiagsOptions {
    /// Truncations are scanned up to degree `2μ + scan_slack`.
    pub scan_slack: u64,
    /// Limits for a full standard basis of the perturbation, tried when the
    /// scan finds no difference. `None` skips it.
    pub full_limits: Option<Limits>,
}

impl Default for EqdiagsOptions {
    fn default() -> Self {
        EqdiagsOptions {
            scan_slack: 2,
            full_limits: None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EqdiagsEvidence {
    /// The perturbed diagram `D1` was computed completely.
    Full {
        eta: u64,
        hs_equal: bool,
        diagrams_equal: bool,
    },
    /// Only `D1` below `degree` is known, from `D(Î + m^(degree+1))`.
    Truncated {
        degree: u64,
        first_difference: Option<u64>,
    },
}

/// Outcome of one eqdiags check on an ideal and a jet-fixed perturbation of
/// its generators at `μ` = the largest vertex degree.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EqdiagsOutcome {
    pub mu: u64,
    /// `D0 ⊆ D1` and the two agree up to degree `μ`.
    pub contains: bool,
    pub evidence: EqdiagsEvidence,
}

impl EqdiagsOutcome {
    /// The two lemmas failed, or the tables agree up to the largest vertex
    /// degree of `D1` while the diagrams differ.
    ///
    /// With `D0 ⊆ D1`, a first table difference at `k` forces a vertex of `D1`
    /// in degree `k`, so equal tables up to the largest vertex degree of `D1`
    /// mean `D1 = D0`. Truncated evidence therefore decides the check once
    /// containment is known.
    pub fn is_violation(&self) -> bool {
        !self.contains
            || matches!(
                self.evidence,
                EqdiagsEvidence::Full {
                    hs_equal: true,
                    diagrams_equal: false,
                    ..
                }
            )
    }
}

/// `D(I + m^(degree+1))`, which agrees with `D(I)` up to `degree`.
fn truncated_diagram(ideal: &IdealPresentation, ord: &LocalOrder, degree: u64) -> Result<Diagram> {
    let n = ideal.nvars();
    let power: Vec<Poly> = Diagram::empty(n)
        .complement_points(&PositiveLinearForm::degree(n), degree + 1)
        .into_iter()
        .filter(|e| e.degree() == degree + 1)
        .map(|e| Poly::monomial(e, BigRational::one()))
        .collect();
    let mut limits = ideal.limits();
    limits.max_basis += power.len();
    ideal.extended(&power)?.with_limits(limits).diagram(ord)
}

/// Adds to each generator of `ideal` a dense tail of degree one above its
/// largest vertex degree `μ` (for [`germ_order`]) and compares the diagrams.
///
/// Truncations of the perturbed diagram are scanned from degree `μ + 1` and
/// stop at the first table difference. When none is found and
/// `opts.full_limits` is set, the full basis is tried as well.
pub fn eqdiags_check(
    ideal: &IdealPresentation,
    seed: u64,
    trial: usize,
    opts: &EqdiagsOptions,
) -> Result<EqdiagsOutcome> {
    let n = ideal.nvars();
    let ord = germ_order(n);
    let degree = PositiveLinearForm::degree(n);
    let d0 = ideal.diagram(&ord)?;
    let mu = d0.max_vertex_degree().unwrap_or(0);
    let spec = PerturbationSpec {
        tail_degree_max: mu + 1,
        ..PerturbationSpec::new(ord.clone(), mu, 1, seed)
    };
    let perturbed = IdealPresentation::new(n, perturb(ideal.generators(), &spec, trial))?
        .with_limits(ideal.limits());
    let mut contains = true;
    let mut first_difference = None;
    let mut reached = mu;
    for k in mu + 1..=2 * mu + opts.scan_slack {
        let d1 = truncated_diagram(&perturbed, &ord, k)?;
        contains &= d0.is_subset_of(&d1) && d0.equal_up_to(&d1, &degree, mu);
        reached = k;
        let (h0, h1) = (d0.hilbert_samuel(k).values, d1.hilbert_samuel(k).values);
        first_difference = (0..=k as usize).find(|&i| h0[i] != h1[i]).map(|i| i as u64);
        if first_difference.is_some() || !contains {
            break;
        }
    }
    let mut evidence = EqdiagsEvidence::Truncated {
        degree: reached,
        first_difference,
    };
    if let Some(limits) = opts
        .full_limits
        .filter(|_| first_difference.is_none() && contains)
    {
        match perturbed.clone().with_limits(limits).diagram(&ord) {
            Ok(d1) => {
                let eta = d1.max_vertex_degree().unwrap_or(0).max(mu);
                contains = d0.is_subset_of(&d1) && d0.equal_up_to(&d1, &degree, mu);
                evidence = EqdiagsEvidence::Full {
                    eta,
                    hs_equal: d0.hilbert_samuel(eta).values == d1.hilbert_samuel(eta).values,
                    diagrams_equal: d0 == d1,
                };
            }
            Err(Error::ResourceLimit { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(EqdiagsOutcome {
        mu,
        contains,
        evidence,
    })
}
