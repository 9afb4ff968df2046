//! Job files: one JSON object, one command.

use germlab::germ::{germ_order, MapGerm};
use germlab::{IdealPresentation, Limits, LocalOrder, Poly, PositiveLinearForm, TieBreak, Vars};
use serde::{Deserialize, Serialize};

use crate::JobError;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Diagram,
    StdBasis,
    Hs,
    Dim,
    CmCertify,
    FlatCheck,
    DeterminacyOrder,
    TangentCone,
    ConesEqual,
    OracleCheck,
    DeterminacyExp,
    ApproxExp,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Diagram => "diagram",
            Command::StdBasis => "std-basis",
            Command::Hs => "hs",
            Command::Dim => "dim",
            Command::CmCertify => "cm-certify",
            Command::FlatCheck => "flat-check",
            Command::DeterminacyOrder => "determinacy-order",
            Command::TangentCone => "tangent-cone",
            Command::ConesEqual => "cones-equal",
            Command::OracleCheck => "oracle-check",
            Command::DeterminacyExp => "determinacy-exp",
            Command::ApproxExp => "approx-exp",
        }
    }

    /// Commands that draw random numbers and therefore need an explicit seed.
    pub fn is_experiment(self) -> bool {
        matches!(self, Command::DeterminacyExp | Command::ApproxExp)
    }

    /// Commands that search random coordinates; their seed defaults to 0.
    pub fn uses_seed(self) -> bool {
        self.is_experiment()
            || matches!(
                self,
                Command::Dim | Command::CmCertify | Command::FlatCheck | Command::DeterminacyOrder
            )
    }

    pub fn needs_map(self) -> bool {
        matches!(
            self,
            Command::FlatCheck
                | Command::DeterminacyOrder
                | Command::DeterminacyExp
                | Command::ApproxExp
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ordering {
    pub weights: Vec<u64>,
    #[serde(default = "reverse")]
    pub tiebreak: TieBreak,
}

fn reverse() -> TieBreak {
    TieBreak::Reverse
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_degree_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient_range: Option<i64>,
    /// Coordinate changes tried by dimension searches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_trials: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<Ordering>,
    #[serde(default)]
    pub ideal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<String>>,
    /// Second ideal for `cones-equal`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<Vec<String>>,
    pub command: Command,
    #[serde(default)]
    pub parameters: Parameters,
}

impl Job {
    pub fn from_json(text: &str) -> Result<Job, JobError> {
        serde_json::from_str(text).map_err(|e| JobError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

/// A job with every polynomial parsed.
#[derive(Clone, Debug)]
pub struct ParsedJob {
    pub job: Job,
    pub vars: Vars,
    /// The job's ordering, or the degree form with the reverse tie-break.
    pub order: LocalOrder,
    pub ideal: IdealPresentation,
    pub map: Option<MapGerm>,
    pub compare: Option<IdealPresentation>,
}

impl ParsedJob {
    pub fn new(job: Job, limits: Limits) -> Result<ParsedJob, JobError> {
        let vars = Vars::new(&job.variables).map_err(|e| JobError::invalid("variables", e))?;
        let n = vars.len();
        let order = match &job.ordering {
            None => germ_order(n),
            Some(o) => {
                if o.weights.len() != n {
                    return Err(JobError::Invalid {
                        field: "ordering.weights".into(),
                        message: format!("{} weights for {n} variables", o.weights.len()),
                    });
                }
                let form = PositiveLinearForm::new(o.weights.clone())
                    .map_err(|e| JobError::invalid("ordering.weights", e))?;
                LocalOrder::new(form, o.tiebreak)
            }
        };
        let ideal = IdealPresentation::new(n, parse_list(&vars, "ideal", &job.ideal)?)
            .map_err(|e| JobError::invalid("ideal", e))?
            .with_limits(limits);
        let map = match &job.map {
            None if job.command.needs_map() => {
                return Err(JobError::Invalid {
                    field: "map".into(),
                    message: format!("command {} needs a map", job.command.name()),
                })
            }
            None => None,
            Some(comps) => Some(
                MapGerm::new(n, parse_list(&vars, "map", comps)?)
                    .map_err(|e| JobError::invalid("map", e))?,
            ),
        };
        let compare = match &job.compare {
            None if job.command == Command::ConesEqual => {
                return Err(JobError::Invalid {
                    field: "compare".into(),
                    message: "command cones-equal needs a second ideal".into(),
                })
            }
            None => None,
            Some(gens) => Some(
                IdealPresentation::new(n, parse_list(&vars, "compare", gens)?)
                    .map_err(|e| JobError::invalid("compare", e))?
                    .with_limits(limits),
            ),
        };
        if job.command.is_experiment() && job.parameters.seed.is_none() {
            return Err(JobError::Invalid {
                field: "parameters.seed".into(),
                message: format!("command {} needs a seed", job.command.name()),
            });
        }
        Ok(ParsedJob {
            job,
            vars,
            order,
            ideal,
            map,
            compare,
        })
    }

    pub fn format(&self, p: &Poly) -> String {
        self.vars.format(p)
    }

    pub fn format_all(&self, ps: &[Poly]) -> Vec<String> {
        ps.iter().map(|p| self.format(p)).collect()
    }
}

fn parse_list(vars: &Vars, field: &str, items: &[String]) -> Result<Vec<Poly>, JobError> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| {
            vars.parse(s).map_err(|e| match e {
                germlab::Error::Parse { column, message } => JobError::Poly {
                    field: format!("{field}[{i}]"),
                    column,
                    message,
                },
                other => JobError::invalid(&format!("{field}[{i}]"), other),
            })
        })
        .collect()
}
