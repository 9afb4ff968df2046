//! Standard bases for local orders.
//!
//! Completion homogenizes with an extra variable `t` and runs Buchberger's
//! algorithm in `K[t, x]` for an order that compares degree first and then
//! the local order; dehomogenizing gives a standard basis. Division in the
//! local ring first tries the same homogenized reduction and falls back to
//! Mora's weak normal form, which multiplies the dividend by a unit; that
//! changes no initial exponent, so membership, diagrams and the Becker check
//! are unaffected.

mod completion;
mod normal_form;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub use completion::{
    becker_check, becker_check_with, local_standard_basis, standard_basis_complete, BeckerVerdict,
    StandardBasis,
};
pub use normal_form::{
    s_series, weak_normal_form, weak_normal_form_with, NormalFormResult, StandardRepresentation,
};

use crate::diagram::Diagram;
use crate::poly::{LocalOrder, Poly, RatMatrix, TieBreak};
use crate::{Error, Result};

/// Bounds that turn a runaway computation into an error instead of a hang.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub struct Limits {
    /// Terms in any intermediate polynomial or certificate.
    pub max_terms: usize,
    /// Elements in a standard basis.
    pub max_basis: usize,
    /// s-series processed during one completion.
    pub max_pairs: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_terms: 50_000,
            max_basis: 400,
            max_pairs: 40_000,
        }
    }
}

type CacheSlot = Arc<OnceLock<Result<Arc<StandardBasis>>>>;
type LocalSlot = Arc<OnceLock<Result<Arc<Vec<Poly>>>>>;

/// An ideal of `K{x}` given by polynomial generators, with standard bases
/// cached per order. The cache computes each order at most once even with
/// concurrent readers. Diagrams and membership use [`local_standard_basis`];
/// only [`IdealPresentation::standard_basis`] pays for certificates.
#[derive(Debug)]
pub struct IdealPresentation {
    nvars: usize,
    generators: Vec<Poly>,
    limits: Limits,
    cache: Mutex<HashMap<LocalOrder, CacheSlot>>,
    local: Mutex<HashMap<LocalOrder, LocalSlot>>,
}

impl Clone for IdealPresentation {
    fn clone(&self) -> Self {
        IdealPresentation {
            nvars: self.nvars,
            generators: self.generators.clone(),
            limits: self.limits,
            cache: Mutex::new(HashMap::new()),
            local: Mutex::new(HashMap::new()),
        }
    }
}

impl IdealPresentation {
    /// Zero generators are dropped; no generators at all is the zero ideal.
    pub fn new(nvars: usize, generators: Vec<Poly>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: g.nvars(),
            });
        }
        Ok(IdealPresentation {
            nvars,
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            limits: Limits::default(),
            cache: Mutex::new(HashMap::new()),
            local: Mutex::new(HashMap::new()),
        })
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(nvars, Vec::new()).expect("no generators to mismatch")
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self.cache = Mutex::new(HashMap::new());
        self.local = Mutex::new(HashMap::new());
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    /// `I + (extra)`.
    pub fn extended(&self, extra: &[Poly]) -> Result<IdealPresentation> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Ok(IdealPresentation::new(self.nvars, gens)?.with_limits(self.limits))
    }

    /// The ideal generated by `f(Mx)` for the generators `f`.
    pub fn transformed(&self, change: &RatMatrix) -> Result<IdealPresentation> {
        let gens = self
            .generators
            .iter()
            .map(|g| change.apply(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(IdealPresentation::new(self.nvars, gens)?.with_limits(self.limits))
    }

    pub fn standard_basis(&self, ord: &LocalOrder) -> Result<Arc<StandardBasis>> {
        if ord.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: ord.nvars(),
            });
        }
        let slot = {
            let mut cache = self.cache.lock().expect("cache lock poisoned");
            cache.entry(ord.clone()).or_default().clone()
        };
        slot.get_or_init(|| {
            standard_basis_complete(&self.generators, ord, &self.limits).map(Arc::new)
        })
        .clone()
    }

    /// A standard basis without certificates; see [`local_standard_basis`].
    pub fn local_basis(&self, ord: &LocalOrder) -> Result<Arc<Vec<Poly>>> {
        if ord.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: ord.nvars(),
            });
        }
        let slot = {
            let mut cache = self.local.lock().expect("cache lock poisoned");
            cache.entry(ord.clone()).or_default().clone()
        };
        slot.get_or_init(|| local_standard_basis(&self.generators, ord, &self.limits).map(Arc::new))
            .clone()
    }

    /// The diagram of initial exponents relative to `ord`.
    pub fn diagram(&self, ord: &LocalOrder) -> Result<Diagram> {
        let sb = self.local_basis(ord)?;
        let exps = sb
            .iter()
            .map(|g| g.initial_exponent(ord))
            .collect::<Result<Vec<_>>>()?;
        Diagram::from_exponents(self.nvars, exps)
    }

    /// Membership of `f` in the ideal (of `K{x}`).
    pub fn contains(&self, f: &Poly, ord: &LocalOrder) -> Result<bool> {
        if f.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: f.nvars(),
            });
        }
        if f.is_zero() {
            return Ok(true);
        }
        let sb = self.local_basis(ord)?;
        Ok(weak_normal_form_with(f, &sb, ord, &self.limits)?
            .remainder
            .is_zero())
    }

    /// `1 ∈ I`, i.e. some generator does not vanish at the origin after
    /// combining; read off the degree-order diagram.
    pub fn is_unit(&self) -> Result<bool> {
        Ok(self
            .diagram(&LocalOrder::degree(self.nvars, TieBreak::Reverse))?
            .is_everything())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Exponent, Vars};

    fn vars() -> Vars {
        Vars::new(&["x", "y"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        vars().parse(s).unwrap()
    }

    fn rev() -> LocalOrder {
        LocalOrder::degree(2, TieBreak::Reverse)
    }

    fn ideal(gens: &[&str]) -> IdealPresentation {
        IdealPresentation::new(2, gens.iter().map(|g| p(g)).collect()).unwrap()
    }

    #[test]
    fn s_series_examples() {
        assert!(s_series(&p("x^2"), &p("x*y"), &rev()).unwrap().is_zero());
        // g_β x^{γ−β_F} f − f_β x^{γ−β_G} g with γ = (2,1): y(x²−y³) − x(xy)
        assert_eq!(
            s_series(&p("x^2 - y^3"), &p("x*y"), &rev()).unwrap(),
            p("-y^4")
        );
        let f = p("x^2 - y^3 + 3*x*y^2");
        assert!(s_series(&f, &f, &rev()).unwrap().is_zero());
        assert_eq!(
            s_series(&Poly::zero(2), &f, &rev()),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn weak_normal_form_examples() {
        let basis = [p("x^2 - y^3")];
        let nf = weak_normal_form(&p("y^4"), &basis, &rev()).unwrap();
        assert_eq!(nf.remainder, p("y^4"));
        assert_eq!(nf.unit, Poly::one(2));

        let nf = weak_normal_form(&p("x^2*y"), &basis, &rev()).unwrap();
        assert_eq!(nf.remainder, p("y^4"));
        assert_eq!(nf.quotients, vec![p("y")]);
        assert_eq!(nf.unit, Poly::one(2));
        assert!(nf.defect(&p("x^2*y"), &basis).is_zero());

        // (1 − x)·x = 1·(x − x²): reducing x by x − x² leaves x², which is
        // reduced by its own ancestor x.
        let basis = [p("x - x^2")];
        let f = p("x");
        let nf = weak_normal_form(&f, &basis, &rev()).unwrap();
        assert!(nf.remainder.is_zero());
        assert_eq!(nf.unit, p("1 - x"));
        assert_eq!(nf.quotients, vec![p("1")]);
        assert!(nf.defect(&f, &basis).is_zero());
    }

    #[test]
    fn becker_examples() {
        assert!(becker_check(&[p("x^2"), p("x*y"), p("y^3")], &rev())
            .unwrap()
            .is_standard());
        assert!(becker_check(&[p("x^2 - y^3")], &rev())
            .unwrap()
            .is_standard());
        match becker_check(&[p("x^2 - y^3"), p("x*y")], &rev()).unwrap() {
            BeckerVerdict::NotStandard { pair, remainder } => {
                assert_eq!(pair, (0, 1));
                assert_eq!(remainder, p("-y^4"));
            }
            v => panic!("expected a failing pair, got {v:?}"),
        }
    }

    #[test]
    fn completion_examples() {
        let sb = ideal(&["x^2 - y^3"]).standard_basis(&rev()).unwrap();
        assert_eq!(sb.elements, vec![p("x^2 - y^3")]);

        let sb = ideal(&["x^2 - y^3", "x*y"]).standard_basis(&rev()).unwrap();
        assert_eq!(sb.elements, vec![p("x^2 - y^3"), p("x*y"), p("y^4")]);
        assert!(sb.certificates_hold());
        assert!(becker_check(&sb.elements, &rev()).unwrap().is_standard());

        let sb = ideal(&["x", "y"]).standard_basis(&rev()).unwrap();
        assert_eq!(sb.elements, vec![p("x"), p("y")]);
    }

    #[test]
    fn diagrams_of_ideals() {
        let e = |v: [u32; 2]| Exponent::from(v);
        assert_eq!(
            ideal(&["x^2 - y^3"]).diagram(&rev()).unwrap().vertices(),
            &[e([2, 0])]
        );
        assert_eq!(
            ideal(&["x^2 - y^3", "x*y"])
                .diagram(&rev())
                .unwrap()
                .vertices(),
            &[e([0, 4]), e([1, 1]), e([2, 0])]
        );
        let unit = ideal(&["1"]);
        assert_eq!(unit.diagram(&rev()).unwrap().vertices(), &[e([0, 0])]);
        assert!(unit.is_unit().unwrap());
        assert!(IdealPresentation::zero(2)
            .diagram(&rev())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn membership_examples() {
        let i = ideal(&["x^2 - y^3", "x*y"]);
        assert!(i.contains(&p("y^4"), &rev()).unwrap());
        assert!(!i.contains(&p("y^3"), &rev()).unwrap());
        assert!(i.contains(&Poly::zero(2), &rev()).unwrap());
        // a unit multiple of a generator is in the local ideal
        assert!(ideal(&["x - x^2"]).contains(&p("x"), &rev()).unwrap());
    }

    #[test]
    fn resource_limits_are_reported() {
        let tight = Limits {
            max_terms: 50_000,
            max_basis: 2,
            max_pairs: 100,
        };
        let i = ideal(&["x^2 - y^3", "x*y"]).with_limits(tight);
        assert!(matches!(
            i.standard_basis(&rev()),
            Err(Error::ResourceLimit {
                bound: "max_basis",
                ..
            })
        ));
    }
}
