//! Brute-force linear algebra over truncated monomial frames.
//!
//! Nothing here touches standard bases: the truncated quotient
//! `K{x}/(I + n_{Λ,η+1})` is spanned by the jets of `x^α·F_i`, and its
//! dimension and achievable initial exponents come straight out of an exact
//! row echelon form. This is the ground truth the diagram engine is checked
//! against.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::diagram::HilbertSamuelTable;
use crate::poly::{Exponent, JetContext, LocalOrder, PositiveLinearForm, TieBreak};
use crate::standard_basis::IdealPresentation;

/// All monomials of weight `≤ η`, in increasing order for a local order, with
/// the inverse index.
#[derive(Clone, Debug)]
pub struct TruncationBasis {
    monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl TruncationBasis {
    pub fn new(order: &LocalOrder, eta: u64) -> Self {
        let mut monomials = monomials_up_to(&order.form, eta);
        monomials.sort_by(|a, b| order.cmp(a, b));
        let index = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        TruncationBasis { monomials, index }
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn column(&self, e: &Exponent) -> Option<usize> {
        self.index.get(e).copied()
    }
}

pub(crate) fn monomials_up_to(form: &PositiveLinearForm, eta: u64) -> Vec<Exponent> {
    fn walk(w: &[u64], i: usize, cur: &mut Vec<u32>, budget: u64, out: &mut Vec<Exponent>) {
        if i == w.len() {
            out.push(Exponent::new(cur.iter().copied()));
            return;
        }
        let mut k = 0u32;
        loop {
            let used = u64::from(k) * w[i];
            if used > budget {
                break;
            }
            cur.push(k);
            walk(w, i + 1, cur, budget - used, out);
            cur.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    walk(form.weights(), 0, &mut Vec::new(), eta, &mut out);
    out
}

type SparseRow = Vec<(usize, BigInt)>;

/// Row echelon form with integer rows, built one row at a time. Each stored
/// row is primitive with a positive leading entry; pivots are distinct.
struct Echelon {
    pivots: HashMap<usize, SparseRow>,
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            pivots: HashMap::new(),
        }
    }

    fn insert(&mut self, mut row: SparseRow) {
        loop {
            let Some((lead, a)) = row.first().cloned() else {
                return;
            };
            let Some(piv) = self.pivots.get(&lead) else {
                make_primitive(&mut row);
                self.pivots.insert(lead, row);
                return;
            };
            let b = &piv[0].1;
            let g = a.gcd(b);
            // (b/g)·row − (a/g)·piv kills the leading entry
            row = combine(&row, &(b / &g), piv, &(&a / &g));
            make_primitive(&mut row);
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn combine(x: &SparseRow, cx: &BigInt, y: &SparseRow, cy: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (col, v) = if take_x {
            i += 1;
            (x[i - 1].0, &x[i - 1].1 * cx)
        } else if take_y {
            j += 1;
            (y[j - 1].0, -(&y[j - 1].1 * cy))
        } else {
            i += 1;
            j += 1;
            (x[i - 1].0, &x[i - 1].1 * cx - &y[j - 1].1 * cy)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

fn make_primitive(row: &mut SparseRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
    }
    if g.is_zero() {
        return;
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    for (_, v) in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// Rows `jet_η(x^α·F_i)` for every generator and every `α` with `Λ(α) ≤ η`,
/// reduced to echelon form with columns in the order of `frame`.
fn echelon_of_truncation(
    ideal: &IdealPresentation,
    order: &LocalOrder,
    eta: u64,
    frame: &TruncationBasis,
) -> Echelon {
    let ctx = JetContext::new(order.clone(), eta);
    let mut ech = Echelon::new();
    let shifts = monomials_up_to(&order.form, eta);
    for g in ideal.generators() {
        let lead = g.support().next().expect("generators are nonzero").clone();
        let (g, _) = g.primitive(&lead);
        let g = g.jet(&ctx);
        for alpha in &shifts {
            let mut row: SparseRow = g
                .terms()
                .filter_map(|(e, c)| {
                    let e = e.add(alpha);
                    frame.column(&e).map(|col| (col, c.numer().clone()))
                })
                .collect();
            if row.is_empty() {
                continue;
            }
            row.sort_by_key(|(c, _)| *c);
            ech.insert(row);
        }
    }
    ech
}

/// `dim_K K{x}/(I + n_{Λ,η+1})`.
pub fn truncated_quotient_dim(
    ideal: &IdealPresentation,
    form: &PositiveLinearForm,
    eta: u64,
) -> u64 {
    let order = LocalOrder::new(form.clone(), TieBreak::Forward);
    let frame = TruncationBasis::new(&order, eta);
    let ech = echelon_of_truncation(ideal, &order, eta, &frame);
    (frame.len() - ech.rank()) as u64
}

/// The Hilbert-Samuel function `η ↦ dim_K K{x}/(I + m^{η+1})`, each value
/// from its own elimination.
pub fn oracle_hs(ideal: &IdealPresentation, eta_max: u64) -> HilbertSamuelTable {
    let form = PositiveLinearForm::degree(ideal.nvars());
    HilbertSamuelTable {
        values: (0..=eta_max)
            .map(|eta| truncated_quotient_dim(ideal, &form, eta))
            .collect(),
        growth_degree: None,
    }
}

/// `N_Λ(I) ∩ {Λ(β) ≤ η}` as the set of pivot columns of the echelon form,
/// with columns sorted by `order` so that the leading entry of a row is its
/// initial exponent. Sorted lexicographically.
pub fn oracle_staircase(ideal: &IdealPresentation, order: &LocalOrder, eta: u64) -> Vec<Exponent> {
    let frame = TruncationBasis::new(order, eta);
    let ech = echelon_of_truncation(ideal, order, eta, &frame);
    let mut out: Vec<Exponent> = ech
        .pivots
        .keys()
        .map(|&c| frame.monomials()[c].clone())
        .collect();
    out.sort();
    out
}
