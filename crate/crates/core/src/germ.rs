//! Germ-level verdicts: dimension, Cohen-Macaulay certificates, flatness of
//! map germs, determinacy orders and tangent cones.
//!
//! Everything that needs generic coordinates samples integer matrices from a
//! seeded generator, so a verdict is reproducible from its seed and records
//! the matrix it was obtained with.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{Diagram, HilbertSamuelTable};
use crate::poly::{LocalOrder, Poly, PositiveLinearForm, RatMatrix, TieBreak};
use crate::standard_basis::{weak_normal_form_with, IdealPresentation};
use crate::{Error, Result};

/// A map germ `φ = (φ_1, …, φ_m): (K^n, 0) → (K^m, 0)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MapGerm {
    nvars: usize,
    components: Vec<Poly>,
}

impl MapGerm {
    pub fn new(nvars: usize, components: Vec<Poly>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyMap);
        }
        for (index, c) in components.iter().enumerate() {
            if c.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: c.nvars(),
                });
            }
            if !c.constant_term().is_zero() {
                return Err(Error::MapNotAtOrigin { index });
            }
        }
        Ok(MapGerm { nvars, components })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// Number of components `m`.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `I + J`, the ideal of the special fibre `φ⁻¹(0)` inside `V(I)`.
    pub fn fibre_ideal(&self, ideal: &IdealPresentation) -> Result<IdealPresentation> {
        if ideal.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: ideal.nvars(),
                found: self.nvars,
            });
        }
        ideal.extended(&self.components)
    }
}

/// Knobs for the searches over random coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct GermOptions {
    /// Coordinate changes tried before giving up (the identity counts).
    pub max_trials: usize,
    /// Hilbert-Samuel tables are reported for `η = 0..=hs_eta_max`.
    pub hs_eta_max: u64,
}

impl Default for GermOptions {
    fn default() -> Self {
        GermOptions {
            max_trials: 24,
            hs_eta_max: 8,
        }
    }
}

/// The order used for dimensions, fibres and determinacy orders.
pub fn germ_order(n: usize) -> LocalOrder {
    LocalOrder::degree(n, TieBreak::Reverse)
}

/// Trial 0 is the identity; trial `t` draws entries from `[-t-1, t+1]` until
/// the matrix is invertible.
pub fn trial_matrix(n: usize, seed: u64, trial: usize) -> RatMatrix {
    if trial == 0 {
        return RatMatrix::identity(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let r = trial as i64 + 1;
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-r..=r)).collect())
            .collect();
        let m = RatMatrix::from_int_rows(&rows).expect("square by construction");
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// Largest `k` with a vertex on each of the first `k` axes.
fn axis_vertex_count(d: &Diagram) -> usize {
    (0..d.nvars())
        .take_while(|&i| d.has_axis_vertices(i + 1))
        .count()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DimensionResult {
    pub dimension: usize,
    /// True when the axis count in `change` coordinates matches the growth
    /// degree of the Hilbert-Samuel function; otherwise `dimension` is only
    /// an upper bound.
    pub exact: bool,
    /// Witness coordinates `x ↦ Mx`.
    pub change: RatMatrix,
    /// Diagram of the transformed ideal for [`germ_order`].
    pub diagram: Diagram,
    pub trials: usize,
    pub seed: u64,
}

/// `dim K{x}/I`, witnessed by coordinates in which the diagram has a vertex
/// on each of the first `n − dim` axes.
///
/// The dimension itself is the growth degree of the Hilbert-Samuel function,
/// which the diagram gives in any coordinates; the search stops as soon as a
/// coordinate change attains it.
pub fn dimension_at_origin(
    ideal: &IdealPresentation,
    seed: u64,
    opts: &GermOptions,
) -> Result<DimensionResult> {
    let n = ideal.nvars();
    let ord = germ_order(n);
    let base = ideal.diagram(&ord)?;
    let Some(target) = base.dimension() else {
        return Err(Error::UnitIdeal);
    };
    let mut best: Option<(usize, RatMatrix, Diagram)> = None;
    let mut trials = 0;
    for trial in 0..opts.max_trials.max(1) {
        trials = trial + 1;
        let change = trial_matrix(n, seed, trial);
        let diagram = if trial == 0 {
            base.clone()
        } else {
            ideal.transformed(&change)?.diagram(&ord)?
        };
        let k = axis_vertex_count(&diagram);
        if best.as_ref().is_none_or(|(b, _, _)| k > *b) {
            best = Some((k, change, diagram));
        }
        if k == n - target {
            break;
        }
    }
    let (k, change, diagram) = best.expect("at least one trial");
    Ok(DimensionResult {
        dimension: n - k,
        exact: k == n - target,
        change,
        diagram,
        trials,
        seed,
    })
}

/// Evidence that `K{x}/I` is not Cohen-Macaulay: for the last `n − k`
/// witness coordinates `x̃`, `in*(I) + (x̃)` is primary to the maximal ideal,
/// so `x̃` generates a reduction of it, and yet the length of
/// `K{x}/(I + x̃)` exceeds the multiplicity.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SliceWitness {
    pub slice_length: u64,
    pub multiplicity: u64,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CmStatus {
    /// The diagram for `Σ_{i≤k} β_i + l·Σ_{j>k} β_j` is `D × N^{n−k}`.
    Certified {
        l: u64,
    },
    /// No product diagram for `l ≤ l_max`; says nothing either way.
    NotCertified {
        l_max: u64,
    },
    NotCm {
        witness: SliceWitness,
    },
}

/// Tries to certify that `K{x}/I` is Cohen-Macaulay.
pub fn cm_certify(
    ideal: &IdealPresentation,
    l_max: u64,
    seed: u64,
    opts: &GermOptions,
) -> Result<CmStatus> {
    cm_certify_in(ideal, l_max, &dimension_at_origin(ideal, seed, opts)?)
}

/// [`cm_certify`] in the witness coordinates of an earlier dimension search.
pub fn cm_certify_in(
    ideal: &IdealPresentation,
    l_max: u64,
    dim: &DimensionResult,
) -> Result<CmStatus> {
    let n = ideal.nvars();
    let k = n - dim.dimension;
    let local = ideal.transformed(&dim.change)?;
    if k == 0 {
        // dim = n forces I = 0 in the local ring
        return Ok(CmStatus::Certified { l: 1 });
    }
    for l in 1..=l_max {
        let ord = LocalOrder::new(PositiveLinearForm::split(n, k, l)?, TieBreak::Reverse);
        let d = local.diagram(&ord)?;
        if d.product_structure(k)
            .is_some_and(|base| base.has_axis_vertices(k))
        {
            return Ok(CmStatus::Certified { l });
        }
    }
    if let Some(witness) = slice_witness(&local, k)? {
        return Ok(CmStatus::NotCm { witness });
    }
    Ok(CmStatus::NotCertified { l_max })
}

fn slice_witness(local: &IdealPresentation, k: usize) -> Result<Option<SliceWitness>> {
    let n = local.nvars();
    let ord = germ_order(n);
    let slice: Vec<Poly> = (k..n).map(|i| Poly::var(n, i)).collect();
    let cone = IdealPresentation::new(n, tangent_cone_ideal(local, &ord)?)?.extended(&slice)?;
    if cone.diagram(&ord)?.dimension() != Some(0) {
        return Ok(None);
    }
    let sliced = local.extended(&slice)?.diagram(&ord)?;
    if sliced.dimension() != Some(0) {
        return Ok(None);
    }
    let Some(multiplicity) = local.diagram(&ord)?.multiplicity() else {
        return Ok(None);
    };
    let form = PositiveLinearForm::degree(n);
    let bound = (0..n)
        .map(|i| {
            sliced
                .vertices()
                .iter()
                .map(|v| u64::from(v[i]))
                .max()
                .unwrap_or(0)
        })
        .sum();
    let slice_length = sliced.complement_count(&form, bound);
    Ok((slice_length > multiplicity).then_some(SliceWitness {
        slice_length,
        multiplicity,
    }))
}

/// Dimension, CM status and Hilbert-Samuel function of one germ.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GermReport {
    pub dimension: DimensionResult,
    pub cm_status: CmStatus,
    /// Diagram in the original coordinates, for [`germ_order`].
    pub diagram: Diagram,
    pub hs: HilbertSamuelTable,
}

pub fn analyze_germ(
    ideal: &IdealPresentation,
    l_max: u64,
    seed: u64,
    opts: &GermOptions,
) -> Result<GermReport> {
    let dimension = dimension_at_origin(ideal, seed, opts)?;
    let cm_status = cm_certify_in(ideal, l_max, &dimension)?;
    let diagram = ideal.diagram(&germ_order(ideal.nvars()))?;
    let hs = diagram.hilbert_samuel(opts.hs_eta_max);
    Ok(GermReport {
        dimension,
        cm_status,
        diagram,
        hs,
    })
}

/// How the Cohen-Macaulay hypothesis behind a flatness verdict was met.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "evidence", rename_all = "snake_case")]
pub enum CmEvidence {
    Certified { l: u64 },
    Asserted,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FlatnessVerdict {
    pub flat: bool,
    pub domain_dimension: usize,
    pub fibre_dimension: i64,
    /// `dim X − m`.
    pub expected: i64,
    /// Diagram of `I + J` in the original coordinates.
    pub fibre_diagram: Diagram,
    pub fibre_hs: HilbertSamuelTable,
    /// Flatness is read off dimensions, which is valid for a Cohen-Macaulay
    /// domain only.
    pub cm_evidence: CmEvidence,
    pub fibre_witness: DimensionResult,
}

/// Whether `φ` is flat at the origin, assuming `K{x}/I` is Cohen-Macaulay:
/// exactly when the fibre has dimension `dim X − m`.
pub fn flatness_check(
    ideal: &IdealPresentation,
    phi: &MapGerm,
    seed: u64,
    cm_evidence: CmEvidence,
    opts: &GermOptions,
) -> Result<FlatnessVerdict> {
    let domain = dimension_at_origin(ideal, seed, opts)?;
    let fibre = phi.fibre_ideal(ideal)?;
    let fibre_witness = dimension_at_origin(&fibre, seed, opts)?;
    let fibre_diagram = fibre.diagram(&germ_order(ideal.nvars()))?;
    let expected = domain.dimension as i64 - phi.len() as i64;
    let fibre_dimension = fibre_witness.dimension as i64;
    Ok(FlatnessVerdict {
        flat: fibre_dimension == expected,
        domain_dimension: domain.dimension,
        fibre_dimension,
        expected,
        fibre_hs: fibre_diagram.hilbert_samuel(opts.hs_eta_max),
        fibre_diagram,
        cm_evidence,
        fibre_witness,
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Determinacy {
    /// Every `ψ` with `j^μ ψ = j^μ φ` for some `μ ≥ mu0` is flat.
    pub mu0: u64,
    pub flatness: FlatnessVerdict,
}

/// The effective determinacy order of a flat germ: the largest degree of a
/// vertex of the diagram of `I + J` in the witness coordinates.
pub fn determinacy_order(
    ideal: &IdealPresentation,
    phi: &MapGerm,
    seed: u64,
    cm_evidence: CmEvidence,
    opts: &GermOptions,
) -> Result<Determinacy> {
    let flatness = flatness_check(ideal, phi, seed, cm_evidence, opts)?;
    if !flatness.flat {
        return Err(Error::NotFlat {
            fibre_dimension: flatness.fibre_dimension,
            expected: flatness.expected,
        });
    }
    let mu0 = flatness
        .fibre_witness
        .diagram
        .max_vertex_degree()
        .unwrap_or(0);
    Ok(Determinacy { mu0, flatness })
}

/// Initial forms of a standard basis for a degree order; they generate
/// `in*(I)`, the ideal of the tangent cone. Sorted by degree.
pub fn tangent_cone_ideal(ideal: &IdealPresentation, ord: &LocalOrder) -> Result<Vec<Poly>> {
    if !ord.form.is_degree() {
        return Err(Error::InvalidForm(
            "tangent cones need the degree form".into(),
        ));
    }
    let sb = ideal.local_basis(ord)?;
    if sb
        .iter()
        .any(|g| g.initial_exponent(ord).is_ok_and(|e| e.is_zero()))
    {
        return Err(Error::UnitIdeal);
    }
    let mut out: Vec<Poly> = Vec::with_capacity(sb.len());
    for g in sb.iter() {
        let f = g.initial_form()?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out.sort_by_cached_key(|f| {
        let e = f.initial_exponent(ord).expect("nonzero");
        (e.degree(), std::cmp::Reverse(e.entries().to_vec()))
    });
    Ok(out)
}

/// Whether `in*(I) = in*(J)`, by mutual membership of generators.
pub fn tangent_cones_equal(i: &IdealPresentation, j: &IdealPresentation) -> Result<bool> {
    if i.nvars() != j.nvars() {
        return Err(Error::DimensionMismatch {
            expected: i.nvars(),
            found: j.nvars(),
        });
    }
    let ord = germ_order(i.nvars());
    let (ci, cj) = (tangent_cone_ideal(i, &ord)?, tangent_cone_ideal(j, &ord)?);
    Ok(homogeneous_contains(&ci, &cj, &ord)? && homogeneous_contains(&cj, &ci, &ord)?)
}

/// Whether every polynomial of `fs` lies in the ideal of the homogeneous
/// `gens`. Homogeneous division needs no unit.
fn homogeneous_contains(gens: &[Poly], fs: &[Poly], ord: &LocalOrder) -> Result<bool> {
    let n = ord.nvars();
    let ideal = IdealPresentation::new(n, gens.to_vec())?;
    let sb = ideal.local_basis(ord)?;
    for f in fs {
        let nf = weak_normal_form_with(f, &sb, ord, &ideal.limits())?;
        debug_assert!(nf.unit.terms().all(|(e, _)| e.is_zero()));
        if !nf.remainder.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest vertex degree over the original-coordinate diagrams of `I` and
/// `I + J`.
pub fn vertex_degree_bound(ideal: &IdealPresentation, phi: &MapGerm) -> Result<u64> {
    let ord = germ_order(ideal.nvars());
    let a = ideal.diagram(&ord)?.max_vertex_degree().unwrap_or(0);
    let b = phi
        .fibre_ideal(ideal)?
        .diagram(&ord)?
        .max_vertex_degree()
        .unwrap_or(0);
    Ok(a.max(b))
}
