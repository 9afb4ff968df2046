//! Sparse multivariate polynomials over `Q`, local orders and jets.
//!
//! A [`Poly`] stands in for a convergent power series: every question asked
//! of it is either about a finite jet or about its initial part, so a finite
//! representative is enough.

mod exponent;
mod linear;
mod order;
mod parse;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use exponent::Exponent;
pub use linear::RatMatrix;
pub use order::{JetContext, LocalOrder, PositiveLinearForm, TieBreak};
pub use parse::Vars;

use crate::{Error, Result};

/// A polynomial in `n` variables with exact rational coefficients.
///
/// No zero coefficient is ever stored, so `terms` is exactly the support.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(Exponent::zeros(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn monomial(exp: Exponent, c: BigRational) -> Self {
        let mut p = Poly::zero(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The coordinate function `x_{i+1}` (0-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Exponent::axis(nvars, i, 1), BigRational::one())
    }

    /// Collects terms, summing repeated exponents and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, BigRational)>,
    {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Shorthand for integer coefficients, mostly for tests and examples.
    pub fn from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::from_terms(
            nvars,
            terms.iter().map(|(e, c)| {
                (
                    Exponent::new(e.iter().copied()),
                    BigRational::from_integer((*c).into()),
                )
            }),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &Exponent) -> Option<&BigRational> {
        self.terms.get(e)
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Exponent::zeros(self.nvars))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Exponent::degree).max()
    }

    /// Degree of the lowest nonzero homogeneous part.
    pub fn order(&self) -> Option<u64> {
        self.terms.keys().map(Exponent::degree).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.total_degree() == self.order()
    }

    /// `self += c·x^e`.
    pub fn add_term(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self -= c·x^shift·other`, the inner step of every reduction.
    pub fn sub_scaled_shifted(&mut self, c: &BigRational, shift: &Exponent, other: &Poly) {
        debug_assert_eq!(self.nvars, other.nvars);
        for (e, d) in &other.terms {
            self.add_term(e.add(shift), -(c * d));
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, d)| (e.clone(), d * c)).collect(),
        }
    }

    /// `c·x^shift·self`.
    pub fn mul_term(&self, shift: &Exponent, c: &BigRational) -> Poly {
        debug_assert_eq!(shift.len(), self.nvars);
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, d)| (e.add(shift), d * c))
                .collect(),
        }
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                out.add_term(e.add(f), c * d);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// The initial term `(inexp, f_inexp)`: the minimum of the support under `ord`.
    pub fn initial_term(&self, ord: &LocalOrder) -> Result<(&Exponent, &BigRational)> {
        if ord.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: ord.nvars(),
            });
        }
        self.terms
            .iter()
            .min_by(|a, b| ord.cmp(a.0, b.0))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn initial_exponent(&self, ord: &LocalOrder) -> Result<Exponent> {
        self.initial_term(ord).map(|(e, _)| e.clone())
    }

    /// The lowest-degree homogeneous part `in*(f)`.
    pub fn initial_form(&self) -> Result<Poly> {
        let d = self.order().ok_or(Error::ZeroPolynomial)?;
        Ok(Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Keeps exactly the terms of weight `≤ μ`: the image modulo `n_{Λ,μ+1}`.
    pub fn jet(&self, ctx: &JetContext) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| ctx.keeps(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Scales to a primitive integer polynomial with positive coefficient at
    /// `lead`. Returns the polynomial and the factor it was multiplied by.
    pub fn primitive(&self, lead: &Exponent) -> (Poly, BigRational) {
        if self.is_zero() {
            return (self.clone(), BigRational::one());
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut factor = BigRational::new(den, num);
        if self
            .terms
            .get(lead)
            .is_some_and(|c| (c * &factor).is_negative())
        {
            factor = -factor;
        }
        (self.scale(&factor), factor)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.entries()) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;

            /// Panics when the operands live in different numbers of variables;
            /// use the `try_` methods to get an error instead.
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs)
                    .expect("operands must share the ambient variable count")
            }
        }

        impl $tr<Poly> for Poly {
            type Output = Poly;

            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        Vars::standard(2).parse(s).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn initial_exponent_examples() {
        let fwd = LocalOrder::degree(2, TieBreak::Forward);
        let rev = LocalOrder::degree(2, TieBreak::Reverse);
        let f = p("x1^2 - x2^3");
        assert_eq!(f.initial_exponent(&fwd).unwrap(), Exponent::from([2, 0]));
        assert_eq!(f.initial_exponent(&rev).unwrap(), Exponent::from([2, 0]));
        let g = p("x1*x2 + x2^2");
        assert_eq!(g.initial_exponent(&fwd).unwrap(), Exponent::from([0, 2]));
        assert_eq!(g.initial_exponent(&rev).unwrap(), Exponent::from([1, 1]));
        assert_eq!(g.initial_term(&rev).unwrap().1, &q(1, 1));
    }

    #[test]
    fn zero_has_no_initial_exponent() {
        let ord = LocalOrder::degree(2, TieBreak::Forward);
        assert_eq!(
            Poly::zero(2).initial_exponent(&ord),
            Err(Error::ZeroPolynomial)
        );
        assert_eq!(Poly::zero(2).initial_form(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn initial_form_examples() {
        assert_eq!(p("x1^2 - x2^3").initial_form().unwrap(), p("x1^2"));
        assert_eq!(
            p("x1*x2 + x2^2 + x1^3").initial_form().unwrap(),
            p("x1*x2 + x2^2")
        );
        assert_eq!(p("x1*x2 + x2^2").initial_form().unwrap(), p("x1*x2 + x2^2"));
    }

    #[test]
    fn jet_examples() {
        let deg = JetContext::new(LocalOrder::degree(2, TieBreak::Forward), 2);
        assert_eq!(p("x1 + x1^3").jet(&deg), p("x1"));
        let w = LocalOrder::new(
            PositiveLinearForm::new(vec![1, 3]).unwrap(),
            TieBreak::Forward,
        );
        assert_eq!(
            p("x2 + x1^2").jet(&JetContext::new(w.clone(), 3)),
            p("x2 + x1^2")
        );
        assert_eq!(p("x2 + x1^2").jet(&JetContext::new(w, 2)), p("x1^2"));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p("x1 - x2") + &p("x2"), p("x1"));
        assert_eq!(&p("x1 + x2") * &p("x1 - x2"), p("x1^2 - x2^2"));
        assert_eq!(p("2*x1").scale(&q(1, 2)), p("x1"));
        assert!((&p("x1") - &p("x1")).is_zero());
    }

    #[test]
    fn arithmetic_rejects_mismatched_rings() {
        let a = Poly::var(2, 0);
        let b = Poly::var(3, 0);
        assert!(matches!(
            a.try_add(&b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            a.try_mul(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn primitive_clears_denominators() {
        let f = p("3/2*x1 - 9/4*x2");
        let lead = Exponent::from([0, 1]);
        let (g, factor) = f.primitive(&lead);
        assert_eq!(g, p("-2*x1 + 3*x2"));
        assert_eq!(f.scale(&factor), g);
    }

    pub(crate) fn poly_strategy(
        n: usize,
        max_deg: u32,
        max_terms: usize,
    ) -> impl Strategy<Value = Poly> {
        proptest::collection::vec(
            (proptest::collection::vec(0..=max_deg, n), -5i64..=5),
            1..=max_terms,
        )
        .prop_map(move |ts| {
            Poly::from_terms(
                n,
                ts.into_iter()
                    .map(|(e, c)| (Exponent::from(e), BigRational::from_integer(c.into()))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn inexp_is_additive(
            f in poly_strategy(3, 3, 4),
            g in poly_strategy(3, 3, 4),
            w in proptest::collection::vec(1u64..=5, 3),
            reverse in any::<bool>(),
        ) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let tb = if reverse { TieBreak::Reverse } else { TieBreak::Forward };
            let ord = LocalOrder::new(PositiveLinearForm::new(w).unwrap(), tb);
            let fg = &f * &g;
            prop_assert_eq!(
                fg.initial_exponent(&ord).unwrap(),
                f.initial_exponent(&ord).unwrap().add(&g.initial_exponent(&ord).unwrap())
            );
        }

        #[test]
        fn jet_is_a_ring_homomorphism(
            f in poly_strategy(2, 4, 5),
            g in poly_strategy(2, 4, 5),
            mu in 0u64..6,
        ) {
            let ctx = JetContext::new(LocalOrder::degree(2, TieBreak::Forward), mu);
            let lhs = (&f * &g).jet(&ctx);
            let rhs = (&f.jet(&ctx) * &g.jet(&ctx)).jet(&ctx);
            prop_assert_eq!(lhs.jet(&ctx), lhs.clone());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn initial_form_is_multiplicative(f in poly_strategy(3, 3, 4), g in poly_strategy(3, 3, 4)) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            prop_assert_eq!(
                (&f * &g).initial_form().unwrap(),
                &f.initial_form().unwrap() * &g.initial_form().unwrap()
            );
        }
    }
}
