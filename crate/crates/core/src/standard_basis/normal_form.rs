use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::Limits;
use crate::poly::{Exponent, LocalOrder, Poly};
use crate::{Error, Result};

/// `unit · subject = Σ quotients_i · basis_i + remainder`, with `unit(0) ≠ 0`.
///
/// A zero remainder certifies membership of the subject in the ideal of the
/// basis. A nonzero remainder has its initial exponent outside
/// `∪ (inexp basis_i + N^n)`; the other terms of the remainder are not
/// reduced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalFormResult {
    pub remainder: Poly,
    pub unit: Poly,
    pub quotients: Vec<Poly>,
}

impl NormalFormResult {
    /// Re-expands `unit·subject − Σ quotients_i·basis_i − remainder`; zero
    /// exactly when the result is consistent.
    pub fn defect(&self, subject: &Poly, basis: &[Poly]) -> Poly {
        let mut acc = &self.unit * subject;
        for (q, g) in self.quotients.iter().zip(basis) {
            acc = &acc - &(q * g);
        }
        &acc - &self.remainder
    }
}

/// `subject = Σ quotients_i · basis_i` up to a unit, for one s-series in a
/// Becker check. `satisfies_bound` records whether
/// `inexp(unit·subject) ≤ min inexp(quotient_i·basis_i)` holds.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct StandardRepresentation {
    pub pair: (usize, usize),
    #[serde(skip)]
    pub subject: Poly,
    #[serde(skip)]
    pub unit: Poly,
    #[serde(skip)]
    pub quotients: Vec<Poly>,
    pub unit_is_constant: bool,
    pub satisfies_bound: bool,
}

/// The s-series `g_β · x^{γ−β_F} f − f_β · x^{γ−β_G} g` of two nonzero
/// polynomials, where `γ` is the lcm of their initial exponents.
pub fn s_series(f: &Poly, g: &Poly, ord: &LocalOrder) -> Result<Poly> {
    let (sf, cf) = s_series_cofactors(f, g, ord)?;
    let mut out = f.mul_term(&sf.0, &sf.1);
    out.sub_scaled_shifted(&cf.1, &cf.0, g);
    Ok(out)
}

/// The two monomial cofactors of the s-series: `S = a·f − b·g`.
pub(crate) fn s_series_cofactors(
    f: &Poly,
    g: &Poly,
    ord: &LocalOrder,
) -> Result<((Exponent, BigRational), (Exponent, BigRational))> {
    if f.nvars() != g.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            found: g.nvars(),
        });
    }
    let (bf, cf) = f.initial_term(ord)?;
    let (bg, cg) = g.initial_term(ord)?;
    let gamma = bf.lcm(bg);
    let sf = gamma.checked_sub(bf).expect("lcm is divisible");
    let sg = gamma.checked_sub(bg).expect("lcm is divisible");
    Ok(((sf, cg.clone()), (sg, cf.clone())))
}

fn ecart(p: &Poly, lead: &Exponent) -> u64 {
    p.total_degree().unwrap_or(0) - lead.degree()
}

enum Origin {
    Basis(usize),
    /// An earlier intermediate result, `unit_j·f − Σ quotients_j·g`.
    Intermediate(Box<(Poly, Vec<Poly>)>),
}

struct Reducer {
    poly: Poly,
    lead: Exponent,
    lead_coeff: BigRational,
    ecart: u64,
    /// Power of `t` on the leading monomial of the homogenization.
    t_power: u64,
    origin: Origin,
}

/// Homogenizing degrees tried above the starting one before falling back to
/// Mora's reduction.
const GRADED_SLACK: u64 = 4;

/// Weighted degree of the heaviest term, the degree of the homogenization.
pub(crate) fn weighted_degree(p: &Poly, ord: &LocalOrder) -> u64 {
    p.terms().map(|(e, _)| ord.weight(e)).max().unwrap_or(0)
}

/// A weak normal form of `f` against `basis`.
///
/// First `f` and `basis` are homogenized with a new variable `t` (each at its
/// own weighted degree) and `t^k f` is top-reduced inside its degree for a few
/// `k`. This needs no unit and meets finitely many monomials. It succeeds
/// whenever the homogenized basis is a Gröbner basis containing `t^k f`,
/// which is the case for bases produced by [`standard_basis_complete`]
/// (crate::standard_basis::standard_basis_complete). Otherwise Mora's
/// reduction runs: at each step the reducer of least ecart (earliest on ties)
/// among those whose initial exponent divides `inexp h` is used, and when
/// even that one has a larger ecart than `h`, `h` itself joins the reducers
/// first. The unit appears because `h` may later be reduced by one of its own
/// ancestors.
pub fn weak_normal_form(f: &Poly, basis: &[Poly], ord: &LocalOrder) -> Result<NormalFormResult> {
    weak_normal_form_with(f, basis, ord, &Limits::default())
}

pub fn weak_normal_form_with(
    f: &Poly,
    basis: &[Poly],
    ord: &LocalOrder,
    limits: &Limits,
) -> Result<NormalFormResult> {
    weak_normal_form_from(f, basis, ord, limits, weighted_degree(f, ord))
}

/// As [`weak_normal_form_with`], homogenizing `f` at degree `start` or above.
pub(crate) fn weak_normal_form_from(
    f: &Poly,
    basis: &[Poly],
    ord: &LocalOrder,
    limits: &Limits,
    start: u64,
) -> Result<NormalFormResult> {
    let reducers = basis_reducers(f.nvars(), basis, ord)?;
    if let Some(nf) = graded_attempts(f, &reducers, ord, limits, start)? {
        return Ok(nf);
    }
    mora(f, reducers, ord, limits)
}

/// Only the homogenized top-reductions of [`weak_normal_form_from`]; `None`
/// when all of them get stuck.
pub(crate) fn graded_normal_form(
    f: &Poly,
    basis: &[Poly],
    ord: &LocalOrder,
    limits: &Limits,
    start: u64,
) -> Result<Option<NormalFormResult>> {
    let reducers = basis_reducers(f.nvars(), basis, ord)?;
    graded_attempts(f, &reducers, ord, limits, start)
}

fn graded_attempts(
    f: &Poly,
    reducers: &[Reducer],
    ord: &LocalOrder,
    limits: &Limits,
    start: u64,
) -> Result<Option<NormalFormResult>> {
    let start = start.max(weighted_degree(f, ord));
    for degree in start..=start + GRADED_SLACK {
        if let Some(nf) = graded_division(f, reducers, ord, limits, degree)? {
            return Ok(Some(nf));
        }
    }
    Ok(None)
}

fn basis_reducers(n: usize, basis: &[Poly], ord: &LocalOrder) -> Result<Vec<Reducer>> {
    let mut reducers = Vec::with_capacity(basis.len());
    for (i, g) in basis.iter().enumerate() {
        if g.nvars() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.nvars(),
            });
        }
        let (lead, c) = g.initial_term(ord)?;
        reducers.push(Reducer {
            lead: lead.clone(),
            lead_coeff: c.clone(),
            ecart: ecart(g, lead),
            t_power: weighted_degree(g, ord) - ord.weight(lead),
            poly: g.clone(),
            origin: Origin::Basis(i),
        });
    }
    Ok(reducers)
}

/// Top-reduction of `t^{degree − deg f} f^h` by the homogenized reducers;
/// `None` when the initial exponent is divisible only by reducers that would
/// need a higher degree.
fn graded_division(
    f: &Poly,
    reducers: &[Reducer],
    ord: &LocalOrder,
    limits: &Limits,
    degree: u64,
) -> Result<Option<NormalFormResult>> {
    let n = f.nvars();
    let mut h = f.clone();
    let mut quotients = vec![Poly::zero(n); reducers.len()];
    while !h.is_zero() {
        let (lead, c) = h.initial_term(ord)?;
        let (lead, c) = (lead.clone(), c.clone());
        let t_power = degree - ord.weight(&lead);
        let mut divisible = false;
        let mut best: Option<usize> = None;
        for (i, r) in reducers.iter().enumerate() {
            if !r.lead.divides(&lead) {
                continue;
            }
            divisible = true;
            if r.t_power <= t_power && best.is_none_or(|b| r.ecart < reducers[b].ecart) {
                best = Some(i);
            }
        }
        let Some(best) = best else {
            if divisible {
                return Ok(None);
            }
            break;
        };
        let r = &reducers[best];
        let shift = lead.checked_sub(&r.lead).expect("reducer divides");
        let factor = &c / &r.lead_coeff;
        h.sub_scaled_shifted(&factor, &shift, &r.poly);
        quotients[best].add_term(shift, factor);
        if h.len() > limits.max_terms {
            return Err(Error::ResourceLimit {
                bound: "max_terms",
                limit: limits.max_terms,
                value: h.len(),
            });
        }
    }
    Ok(Some(NormalFormResult {
        remainder: h,
        unit: Poly::one(n),
        quotients,
    }))
}

fn mora(
    f: &Poly,
    mut reducers: Vec<Reducer>,
    ord: &LocalOrder,
    limits: &Limits,
) -> Result<NormalFormResult> {
    let n = f.nvars();
    let basis_len = reducers.len();
    let mut h = f.clone();
    let mut unit = Poly::one(n);
    let mut quotients = vec![Poly::zero(n); basis_len];
    while !h.is_zero() {
        let (lead, c) = h.initial_term(ord)?;
        let (lead, c) = (lead.clone(), c.clone());
        let Some(best) = reducers
            .iter()
            .enumerate()
            .filter(|(_, r)| r.lead.divides(&lead))
            .min_by_key(|(i, r)| (r.ecart, *i))
            .map(|(i, _)| i)
        else {
            break;
        };
        let h_ecart = ecart(&h, &lead);
        if reducers[best].ecart > h_ecart {
            reducers.push(Reducer {
                poly: h.clone(),
                lead: lead.clone(),
                lead_coeff: c.clone(),
                ecart: h_ecart,
                t_power: 0,
                origin: Origin::Intermediate(Box::new((unit.clone(), quotients.clone()))),
            });
        }
        let r = &reducers[best];
        let shift = lead.checked_sub(&r.lead).expect("reducer divides");
        let factor = &c / &r.lead_coeff;
        h.sub_scaled_shifted(&factor, &shift, &r.poly);
        match &r.origin {
            Origin::Basis(i) => quotients[*i].add_term(shift, factor),
            Origin::Intermediate(rep) => {
                let (u, qs) = &**rep;
                unit.sub_scaled_shifted(&factor, &shift, u);
                for (q, qj) in quotients.iter_mut().zip(qs) {
                    q.sub_scaled_shifted(&factor, &shift, qj);
                }
            }
        }
        if h.len() > limits.max_terms {
            return Err(Error::ResourceLimit {
                bound: "max_terms",
                limit: limits.max_terms,
                value: h.len(),
            });
        }
    }
    debug_assert!(!unit.constant_term().is_zero());
    Ok(NormalFormResult {
        remainder: h,
        unit,
        quotients,
    })
}

/// Whether `inexp(lhs) ≤ min inexp(q_i · g_i)` over the nonzero products.
pub(crate) fn representation_bound_holds(
    lhs: &Poly,
    quotients: &[Poly],
    basis: &[Poly],
    ord: &LocalOrder,
) -> bool {
    let Ok(lead) = lhs.initial_exponent(ord) else {
        return quotients.iter().zip(basis).all(|(q, g)| (q * g).is_zero());
    };
    quotients.iter().zip(basis).all(|(q, g)| {
        let prod = q * g;
        prod.is_zero()
            || ord
                .cmp(&lead, &prod.initial_exponent(ord).expect("nonzero"))
                .is_le()
    })
}

pub(crate) fn is_constant(p: &Poly) -> bool {
    p.terms().all(|(e, _)| e.is_zero())
}
