use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::normal_form::{
    graded_normal_form, is_constant, representation_bound_holds, s_series, weak_normal_form_from,
    weighted_degree, StandardRepresentation,
};
use super::Limits;
use crate::diagram::Diagram;
use crate::poly::{Exponent, LocalOrder, Poly};
use crate::{Error, Result};

/// A standard basis together with, for every element, its expression as a
/// combination of the original generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StandardBasis {
    pub order: LocalOrder,
    pub generators: Vec<Poly>,
    pub elements: Vec<Poly>,
    /// `elements[k] = Σ_j certificates[k][j] · generators[j]`.
    pub certificates: Vec<Vec<Poly>>,
}

impl StandardBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Re-expands every certificate; true iff all of them are exact.
    pub fn certificates_hold(&self) -> bool {
        self.elements
            .iter()
            .zip(&self.certificates)
            .all(|(g, cert)| {
                let mut acc = g.clone();
                for (c, f) in cert.iter().zip(&self.generators) {
                    acc = &acc - &(c * f);
                }
                acc.is_zero()
            })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BeckerVerdict {
    /// Every s-series that needed checking reduced to zero. `representations`
    /// holds one entry per reduced pair `i < j`; the pairs in `skipped` follow
    /// from those by the product and chain criteria.
    Standard {
        representations: Vec<StandardRepresentation>,
        skipped: Vec<(usize, usize)>,
    },
    /// The first pair whose s-series has a nonzero weak normal form.
    NotStandard {
        pair: (usize, usize),
        #[serde(skip)]
        remainder: Poly,
    },
}

impl BeckerVerdict {
    pub fn is_standard(&self) -> bool {
        matches!(self, BeckerVerdict::Standard { .. })
    }
}

/// Checks that the s-series of every pair `i < j` of `basis` has weak normal
/// form zero against `basis`.
///
/// The basis is homogenized as in [`weak_normal_form`](super::weak_normal_form).
/// When every pair left by the Gebauer–Möller criteria reduces to zero
/// without a unit, the homogenized basis is a Gröbner basis and the other
/// pairs are skipped. Otherwise all pairs are reduced.
pub fn becker_check(basis: &[Poly], ord: &LocalOrder) -> Result<BeckerVerdict> {
    becker_check_with(basis, ord, &Limits::default())
}

pub fn becker_check_with(
    basis: &[Poly],
    ord: &LocalOrder,
    limits: &Limits,
) -> Result<BeckerVerdict> {
    let mut leads = Vec::with_capacity(basis.len());
    for g in basis {
        let b = g.initial_exponent(ord)?;
        leads.push((weighted_degree(g, ord) - ord.weight(&b), b));
    }
    let mut queue = Vec::new();
    for k in 1..basis.len() {
        update_pairs(&mut queue, &leads[..=k], ord);
    }
    let mut selected: Vec<(usize, usize)> = queue.iter().map(|p| (p.i, p.j)).collect();
    selected.sort_unstable();

    let mut representations = Vec::new();
    let mut graded = true;
    let mut check = |i: usize, j: usize, graded: &mut bool| -> Result<Option<Poly>> {
        let s = s_series(&basis[i], &basis[j], ord)?;
        // the degree of the s-polynomial of the two homogenizations
        let gamma = leads[i].1.lcm(&leads[j].1);
        let degree = leads[i].0.max(leads[j].0) + ord.weight(&gamma);
        let nf = match graded_normal_form(&s, basis, ord, limits, degree)? {
            Some(nf) => nf,
            None => {
                *graded = false;
                weak_normal_form_from(&s, basis, ord, limits, degree)?
            }
        };
        if !nf.remainder.is_zero() {
            return Ok(Some(nf.remainder));
        }
        let lhs = &nf.unit * &s;
        representations.push(StandardRepresentation {
            pair: (i, j),
            satisfies_bound: representation_bound_holds(&lhs, &nf.quotients, basis, ord),
            unit_is_constant: is_constant(&nf.unit),
            subject: s,
            unit: nf.unit,
            quotients: nf.quotients,
        });
        Ok(None)
    };
    for &(i, j) in &selected {
        if let Some(remainder) = check(i, j, &mut graded)? {
            return Ok(BeckerVerdict::NotStandard {
                pair: (i, j),
                remainder,
            });
        }
    }
    let mut skipped = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            if selected.binary_search(&(i, j)).is_ok() {
                continue;
            }
            if graded {
                skipped.push((i, j));
            } else if let Some(remainder) = check(i, j, &mut graded)? {
                return Ok(BeckerVerdict::NotStandard {
                    pair: (i, j),
                    remainder,
                });
            }
        }
    }
    representations.sort_by_key(|r| r.pair);
    Ok(BeckerVerdict::Standard {
        representations,
        skipped,
    })
}

/// An element of the homogenized ideal in `K[t, x]`: `t^{degree − Λ(α)} x^α`
/// for every term `x^α` of `poly`.
struct Graded {
    poly: Poly,
    degree: u64,
    lead: Exponent,
    lead_coeff: BigRational,
    /// `degree − Λ(lead)`, the power of `t` on the leading monomial.
    t_power: u64,
    certificate: Vec<Poly>,
}

impl Graded {
    fn new(poly: Poly, degree: u64, certificate: Vec<Poly>, ord: &LocalOrder) -> Result<Self> {
        let (lead, c) = poly.initial_term(ord)?;
        let (lead, lead_coeff) = (lead.clone(), c.clone());
        let t_power = degree - ord.weight(&lead);
        Ok(Graded {
            poly,
            degree,
            lead,
            lead_coeff,
            t_power,
            certificate,
        })
    }

    /// Whether the leading monomial divides `t^t_power x^lead`.
    fn divides(&self, t_power: u64, lead: &Exponent) -> bool {
        self.t_power <= t_power && self.lead.divides(lead)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    degree: u64,
    i: usize,
    j: usize,
}

fn monomial_divides(a: &(u64, Exponent), b: &(u64, Exponent)) -> bool {
    a.0 <= b.0 && a.1.divides(&b.1)
}

/// Completes `generators` to a standard basis relative to `ord`.
///
/// The generators are homogenized with respect to the weights of the order
/// and completed to a Gröbner basis of the homogenized ideal, degree by
/// degree; the order on `K[t, x]` compares degree first and then the local
/// order on the `x` part. Dehomogenizing gives a standard basis of the ideal
/// in the local ring. Reduction inside one degree only meets finitely many
/// monomials, so every step terminates and no unit is needed. New elements
/// are homogenized again at their own degree, which keeps the homogenized
/// ideal inside its saturation by `t`. The result is a minimal Gröbner basis
/// of the homogenized ideal, so the Becker check on it never needs Mora's
/// fallback. Zero generators are dropped.
pub fn standard_basis_complete(
    generators: &[Poly],
    ord: &LocalOrder,
    limits: &Limits,
) -> Result<StandardBasis> {
    let (elements, certificates) = complete(generators, ord, limits, true)?;
    Ok(StandardBasis {
        order: ord.clone(),
        generators: generators.to_vec(),
        elements,
        certificates,
    })
}

/// A standard basis of the ideal generated by `generators` in the local
/// ring, without certificates.
///
/// Once the leading exponents found so far meet every axis, all monomials of
/// weight above the largest weight outside their diagram lie in the ideal of
/// `K{x}`. They are added as elements and every tail is cut above that
/// weight, so elements may be monomials that are not polynomial combinations
/// of the generators.
pub fn local_standard_basis(
    generators: &[Poly],
    ord: &LocalOrder,
    limits: &Limits,
) -> Result<Vec<Poly>> {
    Ok(complete(generators, ord, limits, false)?.0)
}

/// Smallest `c` such that every monomial of weight above `c` is a multiple
/// of some `x` part of `leads`; `None` unless the leads meet every axis.
fn corner_weight(leads: &[(u64, Exponent)], ord: &LocalOrder) -> Option<u64> {
    let n = ord.nvars();
    let d = Diagram::from_exponents(n, leads.iter().map(|l| l.1.clone())).ok()?;
    if !d.has_axis_vertices(n) {
        return None;
    }
    let bound: u64 = d
        .vertices()
        .iter()
        .filter_map(|v| {
            v.axis_index()
                .map(|i| ord.form.weights()[i] * (v.entries()[i] as u64).saturating_sub(1))
        })
        .sum();
    Some(
        d.complement_points(&ord.form, bound)
            .iter()
            .map(|e| ord.weight(e))
            .max()
            .unwrap_or(0),
    )
}

/// Minimal generators of the monomials of weight above `c`.
fn corner_monomials(c: u64, ord: &LocalOrder) -> Vec<Exponent> {
    let n = ord.nvars();
    Diagram::empty(n)
        .complement_points(&ord.form, c + ord.form.max_weight())
        .into_iter()
        .filter(|e| {
            ord.weight(e) > c
                && (0..n).all(|i| {
                    e.entries()[i] == 0
                        || ord.weight(
                            &e.checked_sub(&Exponent::axis(n, i, 1))
                                .expect("positive entry"),
                        ) <= c
                })
        })
        .collect()
}

fn add_corner(
    c: u64,
    elements: &mut Vec<Graded>,
    leads: &mut Vec<(u64, Exponent)>,
    queue: &mut Vec<Pair>,
    ord: &LocalOrder,
    limits: &Limits,
) -> Result<()> {
    for e in corner_monomials(c, ord) {
        if leads.iter().any(|l| l.0 == 0 && l.1.divides(&e)) {
            continue;
        }
        let degree = ord.weight(&e);
        elements.push(Graded::new(
            Poly::monomial(e.clone(), BigRational::one()),
            degree,
            Vec::new(),
            ord,
        )?);
        if elements.len() > limits.max_basis {
            return Err(Error::ResourceLimit {
                bound: "max_basis",
                limit: limits.max_basis,
                value: elements.len(),
            });
        }
        leads.push((0, e));
        update_pairs(queue, leads, ord);
    }
    Ok(())
}

fn truncate_above(p: &Poly, c: u64, ord: &LocalOrder) -> Poly {
    Poly::from_terms(
        p.nvars(),
        p.terms()
            .filter(|(e, _)| ord.weight(e) <= c)
            .map(|(e, k)| (e.clone(), k.clone())),
    )
    .expect("same number of variables")
}

fn complete(
    generators: &[Poly],
    ord: &LocalOrder,
    limits: &Limits,
    certify: bool,
) -> Result<(Vec<Poly>, Vec<Vec<Poly>>)> {
    let n = ord.nvars();
    let gens: Vec<Poly> = generators.to_vec();
    let ncert = if certify { gens.len() } else { 0 };
    let mut corner: Option<u64> = None;
    let mut elements: Vec<Graded> = Vec::new();
    let mut leads: Vec<(u64, Exponent)> = Vec::new();
    let mut queue: Vec<Pair> = Vec::new();
    let mut processed = 0usize;

    let mut pending: Vec<Graded> = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        if g.nvars() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.nvars(),
            });
        }
        if g.is_zero() {
            continue;
        }
        let mut cert = vec![Poly::zero(n); ncert];
        if certify {
            cert[j] = Poly::one(n);
        }
        pending.push(Graded::new(g.clone(), weighted_degree(g, ord), cert, ord)?);
    }
    if !certify {
        // leading exponents of the generators already bound the corner
        let gen_leads: Vec<(u64, Exponent)> = pending
            .iter()
            .map(|g| (g.t_power, g.lead.clone()))
            .collect();
        if let Some(c) = corner_weight(&gen_leads, ord) {
            corner = Some(c);
            add_corner(c, &mut elements, &mut leads, &mut queue, ord, limits)?;
            pending = pending
                .into_iter()
                .filter_map(|g| {
                    let p = truncate_above(&g.poly, c, ord);
                    (!p.is_zero())
                        .then(|| Graded::new(p.clone(), weighted_degree(&p, ord), Vec::new(), ord))
                })
                .collect::<Result<Vec<_>>>()?;
            pending.sort_by_key(|g| g.degree);
        }
    }
    let mut pending = pending.into_iter().peekable();

    loop {
        let next_pair = queue.last().map(|p| p.degree);
        let next_gen = pending.peek().map(|g| g.degree);
        let candidate = match (next_pair, next_gen) {
            (None, None) => break,
            (Some(d), Some(e)) if e <= d => pending.next().expect("peeked"),
            (None, Some(_)) => pending.next().expect("peeked"),
            _ => {
                let Pair { degree, i, j } = queue.pop().expect("nonempty");
                processed += 1;
                if processed > limits.max_pairs {
                    return Err(Error::ResourceLimit {
                        bound: "max_pairs",
                        limit: limits.max_pairs,
                        value: processed,
                    });
                }
                let (a, b) = (&elements[i], &elements[j]);
                let gamma = a.lead.lcm(&b.lead);
                let sa = gamma.checked_sub(&a.lead).expect("lcm is divisible");
                let sb = gamma.checked_sub(&b.lead).expect("lcm is divisible");
                let mut poly = a.poly.mul_term(&sa, &b.lead_coeff);
                poly.sub_scaled_shifted(&a.lead_coeff, &sb, &b.poly);
                let mut cert = Vec::with_capacity(ncert);
                for (ca, cb) in a.certificate.iter().zip(&b.certificate) {
                    let mut c = ca.mul_term(&sa, &b.lead_coeff);
                    c.sub_scaled_shifted(&a.lead_coeff, &sb, cb);
                    cert.push(c);
                }
                if poly.is_zero() {
                    continue;
                }
                Graded::new(poly, degree, cert, ord)?
            }
        };
        let Some(mut h) = reduce_graded(candidate, &elements, ord, limits)? else {
            continue;
        };
        if let Some(c) = corner {
            h.poly = truncate_above(&h.poly, c, ord);
        }
        let (poly, factor) = h.poly.primitive(&h.lead);
        let certificate = if factor.is_one() {
            h.certificate
        } else {
            h.certificate.iter().map(|c| c.scale(&factor)).collect()
        };
        // dividing out powers of t keeps the homogenized ideal inside its saturation
        let degree = weighted_degree(&poly, ord);
        let h = Graded::new(poly, degree, certificate, ord)?;
        let (h_t_power, h_lead) = (h.t_power, h.lead.clone());
        elements.push(h);
        if elements.len() > limits.max_basis {
            return Err(Error::ResourceLimit {
                bound: "max_basis",
                limit: limits.max_basis,
                value: elements.len(),
            });
        }
        leads.push((h_t_power, h_lead));
        update_pairs(&mut queue, &leads, ord);

        if !certify {
            let c = corner_weight(&leads, ord);
            if let Some(weight) = c.filter(|_| c != corner) {
                corner = c;
                add_corner(
                    weight,
                    &mut elements,
                    &mut leads,
                    &mut queue,
                    ord,
                    limits,
                )?;
            }
        }
    }

    // a minimal Gröbner basis of the homogenized ideal; without certificates
    // only the local leads matter
    let keep: Vec<bool> = (0..elements.len())
        .map(|k| {
            let (t, lead) = (
                if certify { elements[k].t_power } else { 0 },
                &elements[k].lead,
            );
            !elements.iter().enumerate().any(|(m, e)| {
                let et = if certify { e.t_power } else { 0 };
                m != k && et <= t && e.lead.divides(lead) && ((et, &e.lead) != (t, lead) || m < k)
            })
        })
        .collect();
    let (kept, _): (Vec<Graded>, Vec<bool>) =
        elements.into_iter().zip(keep).filter(|(_, k)| *k).unzip();
    Ok(kept.into_iter().map(|g| (g.poly, g.certificate)).unzip())
}

/// Top-reduces `h` inside its degree; `None` when it reduces to zero.
fn reduce_graded(
    mut h: Graded,
    elements: &[Graded],
    ord: &LocalOrder,
    limits: &Limits,
) -> Result<Option<Graded>> {
    loop {
        let Some(r) = elements.iter().find(|e| e.divides(h.t_power, &h.lead)) else {
            return Ok(Some(h));
        };
        let shift = h.lead.checked_sub(&r.lead).expect("reducer divides");
        let factor = &h.lead_coeff / &r.lead_coeff;
        h.poly.sub_scaled_shifted(&factor, &shift, &r.poly);
        for (c, rc) in h.certificate.iter_mut().zip(&r.certificate) {
            c.sub_scaled_shifted(&factor, &shift, rc);
            if c.len() > limits.max_terms {
                return Err(Error::ResourceLimit {
                    bound: "max_terms",
                    limit: limits.max_terms,
                    value: c.len(),
                });
            }
        }
        if h.poly.len() > limits.max_terms {
            return Err(Error::ResourceLimit {
                bound: "max_terms",
                limit: limits.max_terms,
                value: h.poly.len(),
            });
        }
        if h.poly.is_zero() {
            return Ok(None);
        }
        h = Graded::new(h.poly, h.degree, h.certificate, ord)?;
    }
}

/// Gebauer–Möller update after `leads.last()` was added; `leads` holds the
/// leading monomials `(t power, x exponent)` of the homogenized elements.
fn update_pairs(queue: &mut Vec<Pair>, leads: &[(u64, Exponent)], ord: &LocalOrder) {
    let k = leads.len() - 1;
    let new = &leads[k];
    let lcm_of = |i: usize, j: usize| (leads[i].0.max(leads[j].0), leads[i].1.lcm(&leads[j].1));

    // old pairs whose lcm is a proper multiple of the new leading monomial
    queue.retain(|p| {
        let l = lcm_of(p.i, p.j);
        !(monomial_divides(new, &l) && lcm_of(p.i, k) != l && lcm_of(p.j, k) != l)
    });

    let mut candidates: Vec<(usize, (u64, Exponent))> = (0..k).map(|i| (i, lcm_of(i, k))).collect();
    // drop a pair when another new pair has a lcm properly dividing its own
    let snapshot = candidates.clone();
    candidates.retain(|(_, l)| {
        !snapshot
            .iter()
            .any(|(_, m)| m != l && monomial_divides(m, l))
    });
    // among equal lcms keep one, and none at all if one of them is coprime
    let mut groups: Vec<(u64, Exponent)> = candidates.iter().map(|(_, l)| l.clone()).collect();
    groups.sort();
    groups.dedup();
    for l in groups {
        let members: Vec<usize> = candidates
            .iter()
            .filter(|(_, m)| *m == l)
            .map(|(i, _)| *i)
            .collect();
        if !members.iter().any(|&i| coprime(&leads[i], new)) {
            queue.push(Pair {
                degree: l.0 + ord.weight(&l.1),
                i: members[0],
                j: k,
            });
        }
    }
    queue.sort_unstable_by(|a, b| b.cmp(a));
}

/// Coprime leading monomials in `K[t, x]`: their s-polynomial reduces to zero.
fn coprime(a: &(u64, Exponent), b: &(u64, Exponent)) -> bool {
    a.0.min(b.0) == 0
        && a.1
            .entries()
            .iter()
            .zip(b.1.entries())
            .all(|(p, q)| *p == 0 || *q == 0)
}
