use germlab::experiments::{
    approximation_experiment, determinacy_experiment, ExperimentReport, PerturbationSpec,
};
use germlab::germ::{
    cm_certify_in, determinacy_order, dimension_at_origin, flatness_check, germ_order,
    tangent_cone_ideal, tangent_cones_equal, vertex_degree_bound, CmEvidence, CmStatus,
    GermOptions, MapGerm,
};
use germlab::oracle::{oracle_hs, oracle_staircase, TruncationBasis};
use germlab::standard_basis::{becker_check, weak_normal_form};
use serde_json::{json, Value};

use crate::job::{Command, ParsedJob};
use crate::{JobError, Status};

const DEFAULT_ETA_MAX: u64 = 8;
const DEFAULT_L_MAX: u64 = 4;
const DEFAULT_TRIALS: usize = 20;

pub(crate) struct Done {
    pub status: Status,
    pub result: Value,
    pub csv: Option<String>,
}

fn done(status: Status, result: Value) -> Done {
    Done {
        status,
        result,
        csv: None,
    }
}

type Executed = Result<Done, JobError>;

pub(crate) fn execute(p: &ParsedJob) -> Executed {
    match p.job.command {
        Command::Diagram => diagram(p),
        Command::StdBasis => std_basis(p),
        Command::Hs => hs(p),
        Command::Dim => dim(p),
        Command::CmCertify => cm(p),
        Command::FlatCheck => flat_check(p),
        Command::DeterminacyOrder => det_order(p),
        Command::TangentCone => tangent_cone(p),
        Command::ConesEqual => cones_equal(p),
        Command::OracleCheck => oracle_check(p),
        Command::DeterminacyExp | Command::ApproxExp => experiment(p),
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("plain data")
}

fn eta_max(p: &ParsedJob) -> u64 {
    p.job.parameters.eta_max.unwrap_or(DEFAULT_ETA_MAX)
}

fn seed(p: &ParsedJob) -> u64 {
    p.job.parameters.seed.unwrap_or(0)
}

fn opts(p: &ParsedJob) -> GermOptions {
    let d = GermOptions::default();
    GermOptions {
        max_trials: p.job.parameters.max_trials.unwrap_or(d.max_trials),
        hs_eta_max: eta_max(p),
    }
}

fn map(p: &ParsedJob) -> &MapGerm {
    p.map.as_ref().expect("checked when parsing")
}

fn diagram(p: &ParsedJob) -> Executed {
    let d = p.ideal.diagram(&p.order)?;
    Ok(done(
        Status::Ok,
        json!({
            "order": p.order,
            "vertices": d,
            "max_vertex_weight": d.max_vertex_weight(&p.order.form),
            "dimension": d.dimension(),
        }),
    ))
}

fn std_basis(p: &ParsedJob) -> Executed {
    let sb = p.ideal.standard_basis(&p.order)?;
    let becker = becker_check(&sb.elements, &p.order)?;
    let mut generators_reduce = true;
    for g in p.ideal.generators() {
        generators_reduce &= weak_normal_form(g, &sb.elements, &p.order)?
            .remainder
            .is_zero();
    }
    let certificates_hold = sb.certificates_hold();
    let initial: Vec<_> = sb
        .elements
        .iter()
        .map(|g| g.initial_exponent(&p.order))
        .collect::<Result<_, _>>()?;
    let ok = becker.is_standard() && generators_reduce && certificates_hold;
    Ok(done(
        if ok { Status::Ok } else { Status::Failed },
        json!({
            "order": p.order,
            "elements": p.format_all(&sb.elements),
            "initial_exponents": initial,
            "certificates": sb.certificates.iter().map(|c| p.format_all(c)).collect::<Vec<_>>(),
            "certificates_hold": certificates_hold,
            "generators_reduce_to_zero": generators_reduce,
            "becker": becker,
        }),
    ))
}

fn hs(p: &ParsedJob) -> Executed {
    let n = p.ideal.nvars();
    let table = p.ideal.diagram(&germ_order(n))?.hilbert_samuel(eta_max(p));
    Ok(done(
        Status::Ok,
        json!({"hs": table.values, "growth_degree": table.growth_degree}),
    ))
}

fn dim(p: &ParsedJob) -> Executed {
    Ok(done(
        Status::Ok,
        to_value(&dimension_at_origin(&p.ideal, seed(p), &opts(p))?),
    ))
}

fn cm(p: &ParsedJob) -> Executed {
    let dimension = dimension_at_origin(&p.ideal, seed(p), &opts(p))?;
    let status = cm_certify_in(
        &p.ideal,
        p.job.parameters.l_max.unwrap_or(DEFAULT_L_MAX),
        &dimension,
    )?;
    Ok(done(
        Status::Ok,
        json!({"cm_status": status, "dimension": dimension}),
    ))
}

/// CM evidence for the dimension-based flatness test. A proof that the
/// domain is not CM rejects the job.
fn cm_evidence(p: &ParsedJob) -> Result<(CmEvidence, CmStatus), JobError> {
    let dimension = dimension_at_origin(&p.ideal, seed(p), &opts(p))?;
    let status = cm_certify_in(
        &p.ideal,
        p.job.parameters.l_max.unwrap_or(DEFAULT_L_MAX),
        &dimension,
    )?;
    match status {
        CmStatus::Certified { l } => Ok((CmEvidence::Certified { l }, status)),
        CmStatus::NotCertified { .. } => Ok((CmEvidence::Asserted, status)),
        CmStatus::NotCm { witness } => Err(JobError::Rejected(format!(
            "the domain is not Cohen-Macaulay (slice length {} > multiplicity {}); flatness is not decided by dimensions",
            witness.slice_length, witness.multiplicity
        ))),
    }
}

fn flat_check(p: &ParsedJob) -> Executed {
    let (evidence, status) = cm_evidence(p)?;
    let verdict = flatness_check(&p.ideal, map(p), seed(p), evidence, &opts(p))?;
    let mut v = to_value(&verdict);
    v["cm_status"] = to_value(&status);
    Ok(done(Status::Ok, v))
}

fn det_order(p: &ParsedJob) -> Executed {
    let (evidence, status) = cm_evidence(p)?;
    let d = determinacy_order(&p.ideal, map(p), seed(p), evidence, &opts(p))?;
    Ok(done(
        Status::Ok,
        json!({"mu0": d.mu0, "flatness": d.flatness, "cm_status": status}),
    ))
}

fn tangent_cone(p: &ParsedJob) -> Executed {
    let cone = tangent_cone_ideal(&p.ideal, &p.order)?;
    Ok(done(
        Status::Ok,
        json!({"order": p.order, "generators": p.format_all(&cone)}),
    ))
}

fn cones_equal(p: &ParsedJob) -> Executed {
    let other = p.compare.as_ref().expect("checked when parsing");
    let ord = germ_order(p.ideal.nvars());
    Ok(done(
        Status::Ok,
        json!({
            "equal": tangent_cones_equal(&p.ideal, other)?,
            "cone": p.format_all(&tangent_cone_ideal(&p.ideal, &ord)?),
            "compare_cone": p.format_all(&tangent_cone_ideal(other, &ord)?),
        }),
    ))
}

/// Diagram-based Hilbert-Samuel table and staircase against the brute-force
/// oracle.
fn oracle_check(p: &ParsedJob) -> Executed {
    let eta = eta_max(p);
    let n = p.ideal.nvars();
    let hs_diagram = p.ideal.diagram(&germ_order(n))?.hilbert_samuel(eta).values;
    let hs_oracle = oracle_hs(&p.ideal, eta).values;
    let d = p.ideal.diagram(&p.order)?;
    let from_diagram: Vec<_> = {
        let mut v: Vec<_> = TruncationBasis::new(&p.order, eta)
            .monomials()
            .iter()
            .filter(|e| d.contains(e))
            .cloned()
            .collect();
        v.sort();
        v
    };
    let from_oracle = oracle_staircase(&p.ideal, &p.order, eta);
    let agree = hs_diagram == hs_oracle && from_diagram == from_oracle;
    Ok(done(
        if agree { Status::Ok } else { Status::Failed },
        json!({
            "eta_max": eta,
            "order": p.order,
            "hs_diagram": hs_diagram,
            "hs_oracle": hs_oracle,
            "hs_agree": hs_diagram == hs_oracle,
            "staircase_size": from_oracle.len(),
            "staircase_agree": from_diagram == from_oracle,
        }),
    ))
}

fn experiment(p: &ParsedJob) -> Executed {
    let params = &p.job.parameters;
    let phi = map(p);
    let o = opts(p);
    let s = seed(p);
    let mu = match params.mu {
        Some(mu) => mu,
        None if p.job.command == Command::DeterminacyExp => {
            let (evidence, _) = cm_evidence(p)?;
            determinacy_order(&p.ideal, phi, s, evidence, &o)?.mu0
        }
        None => vertex_degree_bound(&p.ideal, phi)?,
    };
    let mut spec = PerturbationSpec::new(
        p.order.clone(),
        mu,
        params.trials.unwrap_or(DEFAULT_TRIALS),
        s,
    );
    if let Some(t) = params.tail_degree_max {
        spec.tail_degree_max = t;
    }
    if let Some(c) = params.coefficient_range {
        if c < 0 {
            return Err(JobError::invalid(
                "parameters.coefficient_range",
                "must not be negative",
            ));
        }
        spec.coefficient_range = c;
    }
    let report = if p.job.command == Command::DeterminacyExp {
        determinacy_experiment(&p.ideal, phi, &spec, &o)?
    } else {
        approximation_experiment(&p.ideal, phi, &spec, &o)?
    };
    let status = if report.has_defects() {
        Status::Failed
    } else {
        Status::Ok
    };
    Ok(Done {
        status,
        result: experiment_json(p, &report),
        csv: Some(report.to_csv()),
    })
}

/// The library report plus the polynomials it does not serialize.
pub(crate) fn experiment_json(p: &ParsedJob, report: &ExperimentReport) -> Value {
    let mut v = to_value(report);
    v["reference"]["domain_cone"] = json!(p.format_all(&report.reference.domain_cone));
    v["reference"]["fibre_cone"] = json!(p.format_all(&report.reference.fibre_cone));
    if let Some(records) = v["records"].as_array_mut() {
        for (r, rec) in records.iter_mut().zip(&report.records) {
            r["ideal"] = json!(p.format_all(&rec.ideal));
            r["map"] = json!(p.format_all(&rec.map));
        }
    }
    v
}
