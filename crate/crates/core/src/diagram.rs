//! Staircases in `N^n` and what can be read off them.
//!
//! A [`Diagram`] is stored by its vertices, the minimal elements of the
//! staircase under the componentwise order. The empty diagram is the diagram
//! of the zero ideal; the diagram with the single vertex `0` is the diagram of
//! the unit ideal.

use serde::{Serialize, Serializer};

use crate::poly::{Exponent, PositiveLinearForm};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Diagram {
    nvars: usize,
    /// Pairwise incomparable, sorted lexicographically.
    vertices: Vec<Exponent>,
}

/// `H(0), H(1), …, H(η_max)` together with the degree of the polynomial that
/// eventually describes `H` (the dimension of the quotient), when the quotient
/// is nonzero.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct HilbertSamuelTable {
    pub values: Vec<u64>,
    pub growth_degree: Option<usize>,
}

impl Diagram {
    pub fn empty(nvars: usize) -> Self {
        Diagram {
            nvars,
            vertices: Vec::new(),
        }
    }

    /// The diagram generated by `exps`: its vertices are the minimal elements.
    pub fn from_exponents<I>(nvars: usize, exps: I) -> Result<Self>
    where
        I: IntoIterator<Item = Exponent>,
    {
        let mut all: Vec<Exponent> = exps.into_iter().collect();
        if let Some(e) = all.iter().find(|e| e.len() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: e.len(),
            });
        }
        // Sorting by degree first means a divisor is always seen before its multiples.
        all.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut vertices: Vec<Exponent> = Vec::new();
        for e in all {
            if !vertices.iter().any(|v| v.divides(&e)) {
                vertices.push(e);
            }
        }
        vertices.sort();
        Ok(Diagram { nvars, vertices })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn vertices(&self) -> &[Exponent] {
        &self.vertices
    }

    /// The diagram of the zero ideal.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The diagram of the unit ideal, all of `N^n`.
    pub fn is_everything(&self) -> bool {
        self.vertices.iter().any(Exponent::is_zero)
    }

    pub fn contains(&self, beta: &Exponent) -> bool {
        self.vertices.iter().any(|v| v.divides(beta))
    }

    /// Staircase containment `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Diagram) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }

    pub fn max_vertex_weight(&self, form: &PositiveLinearForm) -> Option<u64> {
        self.vertices.iter().map(|v| form.weight(v)).max()
    }

    pub fn max_vertex_degree(&self) -> Option<u64> {
        self.vertices.iter().map(Exponent::degree).max()
    }

    /// Calls `visit` on every point outside the staircase with weight `≤ eta`.
    ///
    /// Coordinates are assigned one at a time; once a partial point (with the
    /// remaining coordinates zero) lies in the staircase, so does every larger
    /// value of the current coordinate, and the branch is cut.
    fn for_each_outside<F: FnMut(&Exponent)>(
        &self,
        form: &PositiveLinearForm,
        eta: u64,
        mut visit: F,
    ) {
        fn walk<F: FnMut(&Exponent)>(
            d: &Diagram,
            w: &[u64],
            i: usize,
            point: &mut Exponent,
            budget: u64,
            visit: &mut F,
        ) {
            if i == d.nvars {
                visit(point);
                return;
            }
            let mut used = 0u64;
            let mut value = 0u32;
            loop {
                *point.entry_mut(i) = value;
                if d.contains(point) {
                    break;
                }
                walk(d, w, i + 1, point, budget - used, visit);
                used += w[i];
                if used > budget {
                    break;
                }
                value += 1;
            }
            *point.entry_mut(i) = 0;
        }
        let mut point = Exponent::zeros(self.nvars);
        walk(self, form.weights(), 0, &mut point, eta, &mut visit);
    }

    /// `#{β ∉ staircase : Λ(β) ≤ eta}`.
    pub fn complement_count(&self, form: &PositiveLinearForm, eta: u64) -> u64 {
        assert_eq!(
            form.nvars(),
            self.nvars,
            "form and diagram live in different N^n"
        );
        let mut count = 0;
        self.for_each_outside(form, eta, |_| count += 1);
        count
    }

    pub fn complement_points(&self, form: &PositiveLinearForm, eta: u64) -> Vec<Exponent> {
        let mut out = Vec::new();
        self.for_each_outside(form, eta, |p| out.push(p.clone()));
        out.sort();
        out
    }

    /// Hilbert-Samuel function of the quotient by any ideal with this diagram
    /// (for the degree form), for `η = 0..=eta_max`.
    pub fn hilbert_samuel(&self, eta_max: u64) -> HilbertSamuelTable {
        let form = PositiveLinearForm::degree(self.nvars);
        let mut by_degree = vec![0u64; eta_max as usize + 1];
        self.for_each_outside(&form, eta_max, |p| by_degree[p.degree() as usize] += 1);
        let values = by_degree
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        HilbertSamuelTable {
            values,
            growth_degree: self.dimension(),
        }
    }

    /// Krull dimension of `K[x]/(x^v : v vertex)`: the largest set of
    /// coordinates containing the support of no vertex. `None` for the unit
    /// ideal.
    pub fn dimension(&self) -> Option<usize> {
        if self.is_everything() {
            return None;
        }
        let n = self.nvars;
        assert!(n < 32, "dimension() enumerates coordinate subsets");
        let supports: Vec<u32> = self
            .vertices
            .iter()
            .map(|v| {
                v.entries()
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b > 0)
                    .fold(0u32, |m, (i, _)| m | 1 << i)
            })
            .collect();
        (0u32..1 << n)
            .filter(|s| supports.iter().all(|sup| sup & !s != 0))
            .map(|s| s.count_ones() as usize)
            .max()
    }

    /// Multiplicity: the leading coefficient of the eventual Hilbert-Samuel
    /// polynomial times `d!`, read off exactly as `Δ^d H(η)` at an `η` past
    /// the point where `H` becomes polynomial. `None` for the unit ideal.
    pub fn multiplicity(&self) -> Option<u64> {
        let d = self.dimension()?;
        // the K-polynomial has degree at most the degree of the lcm of all vertices
        let lcm_degree: u64 = (0..self.nvars)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| u64::from(v[i]))
                    .max()
                    .unwrap_or(0)
            })
            .sum();
        let eta = lcm_degree + d as u64;
        let h = self.hilbert_samuel(eta).values;
        let mut acc: i128 = 0;
        let mut binom: i128 = 1;
        for j in 0..=d {
            let term = binom * i128::from(h[eta as usize - j]);
            acc += if j % 2 == 0 { term } else { -term };
            binom = binom * (d - j) as i128 / (j + 1) as i128;
        }
        u64::try_from(acc).ok()
    }

    /// True iff some vertex lies on each of the first `k` coordinate axes.
    pub fn has_axis_vertices(&self, k: usize) -> bool {
        (0..k.min(self.nvars)).all(|i| self.vertices.iter().any(|v| v.axis_index() == Some(i)))
    }

    /// If the staircase is `D × N^{n-k}`, returns `D ⊆ N^k`.
    pub fn product_structure(&self, k: usize) -> Option<Diagram> {
        if k > self.nvars {
            return None;
        }
        if self
            .vertices
            .iter()
            .any(|v| v.entries()[k..].iter().any(|&b| b > 0))
        {
            return None;
        }
        let projected = self
            .vertices
            .iter()
            .map(|v| Exponent::new(v.entries()[..k].iter().copied()));
        Some(Diagram::from_exponents(k, projected).expect("projection has length k"))
    }

    /// Whether both staircases agree on `{β : Λ(β) ≤ l}`.
    ///
    /// A disagreement at `β` forces a disagreement at a vertex below `β`, so
    /// it suffices to test the low-weight vertices of each side.
    pub fn equal_up_to(&self, other: &Diagram, form: &PositiveLinearForm, l: u64) -> bool {
        assert_eq!(self.nvars, other.nvars);
        let one_way = |a: &Diagram, b: &Diagram| {
            a.vertices
                .iter()
                .filter(|v| form.weight(v) <= l)
                .all(|v| b.contains(v))
        };
        one_way(self, other) && one_way(other, self)
    }
}

impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(vs: &[&[u32]]) -> Diagram {
        let n = vs.first().map_or(2, |v| v.len());
        Diagram::from_exponents(n, vs.iter().map(|v| Exponent::new(v.iter().copied()))).unwrap()
    }

    /// Exhaustive oracle: every point of the box `[0, eta]^n` with small weight.
    fn brute_count(diag: &Diagram, form: &PositiveLinearForm, eta: u64) -> u64 {
        let n = diag.nvars();
        let mut count = 0;
        let side = eta as u32 + 1;
        for code in 0..side.pow(n as u32) {
            let mut c = code;
            let e = Exponent::new((0..n).map(|_| {
                let b = c % side;
                c /= side;
                b
            }));
            if form.weight(&e) <= eta && !diag.contains(&e) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn vertices_are_minimal() {
        let diag = d(&[&[2, 0], &[1, 1], &[2, 1]]);
        assert_eq!(
            diag.vertices(),
            &[Exponent::from([1, 1]), Exponent::from([2, 0])]
        );
        assert!(Diagram::from_exponents(2, []).unwrap().is_empty());
        assert_eq!(d(&[&[1, 0], &[0, 1]]).vertices().len(), 2);
        assert!(Diagram::from_exponents(2, [Exponent::from([1, 0, 0])]).is_err());
    }

    #[test]
    fn complement_count_examples() {
        let deg = PositiveLinearForm::degree(2);
        assert_eq!(Diagram::empty(2).complement_count(&deg, 3), 10);
        let m = d(&[&[1, 0], &[0, 1]]);
        for eta in 0..5 {
            assert_eq!(m.complement_count(&deg, eta), 1);
            assert_eq!(
                m.complement_count(&PositiveLinearForm::new(vec![2, 5]).unwrap(), eta),
                1
            );
        }
        let cusp = d(&[&[2, 0], &[1, 1], &[0, 4]]);
        assert_eq!(cusp.complement_count(&deg, 4), brute_count(&cusp, &deg, 4));
        assert_eq!(cusp.complement_count(&deg, 4), 5);
        assert_eq!(
            cusp.complement_points(&deg, 4),
            vec![
                Exponent::from([0, 0]),
                Exponent::from([0, 1]),
                Exponent::from([0, 2]),
                Exponent::from([0, 3]),
                Exponent::from([1, 0])
            ]
        );
    }

    #[test]
    fn hilbert_samuel_examples() {
        let free = Diagram::empty(2).hilbert_samuel(6);
        assert!(free
            .values
            .iter()
            .enumerate()
            .all(|(e, &h)| h as usize == (e + 1) * (e + 2) / 2));
        assert_eq!(free.growth_degree, Some(2));

        let line = d(&[&[2, 0]]).hilbert_samuel(7);
        assert_eq!(line.values[0], 1);
        assert!(line
            .values
            .iter()
            .enumerate()
            .skip(1)
            .all(|(e, &h)| h as usize == 2 * e + 1));
        assert_eq!(line.growth_degree, Some(1));

        let cusp = d(&[&[2, 0], &[1, 1], &[0, 4]]).hilbert_samuel(6);
        assert_eq!(cusp.values, vec![1, 3, 4, 5, 5, 5, 5]);
        assert_eq!(cusp.growth_degree, Some(0));

        let unit = d(&[&[0, 0]]).hilbert_samuel(3);
        assert_eq!(unit.values, vec![0, 0, 0, 0]);
        assert_eq!(unit.growth_degree, None);
    }

    #[test]
    fn multiplicities() {
        assert_eq!(Diagram::empty(3).multiplicity(), Some(1));
        assert_eq!(d(&[&[2, 0]]).multiplicity(), Some(2));
        assert_eq!(d(&[&[2, 0], &[1, 1], &[0, 4]]).multiplicity(), Some(5));
        assert_eq!(d(&[&[1, 1, 0], &[1, 0, 1]]).multiplicity(), Some(1));
        assert_eq!(d(&[&[0, 0]]).multiplicity(), None);
    }

    #[test]
    fn axis_vertices() {
        assert!(d(&[&[2, 0], &[0, 4]]).has_axis_vertices(2));
        assert!(!d(&[&[2, 0]]).has_axis_vertices(2));
        assert!(d(&[&[2, 0]]).has_axis_vertices(1));
        assert!(!d(&[&[1, 1]]).has_axis_vertices(1));
    }

    #[test]
    fn product_structures() {
        assert_eq!(
            d(&[&[2, 0]]).product_structure(1),
            Some(Diagram::from_exponents(1, [Exponent::from([2])]).unwrap())
        );
        assert_eq!(d(&[&[1, 1]]).product_structure(1), None);
        assert_eq!(
            Diagram::empty(2).product_structure(1),
            Some(Diagram::empty(1))
        );
    }

    #[test]
    fn equality_up_to_weight() {
        let deg = PositiveLinearForm::degree(2);
        let a = d(&[&[2, 0]]);
        let b = d(&[&[2, 0], &[0, 9]]);
        assert!(a.equal_up_to(&a, &deg, 12));
        assert!(a.equal_up_to(&b, &deg, 8));
        assert!(!a.equal_up_to(&b, &deg, 9));
        assert!(d(&[&[1, 0]]).equal_up_to(&Diagram::empty(2), &deg, 0));
    }

    fn diagram_strategy(n: usize) -> impl Strategy<Value = Diagram> {
        proptest::collection::vec(proptest::collection::vec(0u32..=5, n), 0..5).prop_map(
            move |vs| {
                Diagram::from_exponents(
                    n,
                    vs.into_iter()
                        .filter(|v| v.iter().any(|&b| b > 0))
                        .map(Exponent::from),
                )
                .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn complement_count_matches_enumeration(
            diag in diagram_strategy(3),
            w in proptest::collection::vec(1u64..=3, 3),
            eta in 0u64..8,
        ) {
            let form = PositiveLinearForm::new(w).unwrap();
            prop_assert_eq!(diag.complement_count(&form, eta), brute_count(&diag, &form, eta));
        }

        #[test]
        fn rebuilding_from_vertices_is_idempotent(diag in diagram_strategy(3)) {
            let again = Diagram::from_exponents(3, diag.vertices().iter().cloned()).unwrap();
            prop_assert_eq!(again, diag);
        }

        #[test]
        fn adding_an_exponent_shrinks_the_complement(
            diag in diagram_strategy(2),
            extra in proptest::collection::vec(0u32..=6, 2),
            eta in 0u64..10,
        ) {
            let bigger = Diagram::from_exponents(
                2,
                diag.vertices().iter().cloned().chain([Exponent::from(extra)]),
            ).unwrap();
            let deg = PositiveLinearForm::degree(2);
            prop_assert!(diag.is_subset_of(&bigger));
            prop_assert!(bigger.complement_count(&deg, eta) <= diag.complement_count(&deg, eta));
        }

        /// Strict containment of staircases shows up in the complement counts
        /// no later than the largest vertex degree of the bigger staircase.
        #[test]
        fn strict_containment_is_visible_in_counts(
            small in diagram_strategy(3),
            extra in proptest::collection::vec(proptest::collection::vec(0u32..=5, 3), 1..3),
        ) {
            let big = Diagram::from_exponents(
                3,
                small.vertices().iter().cloned().chain(extra.into_iter().map(Exponent::from)),
            ).unwrap();
            prop_assume!(big != small && !big.is_everything());
            let deg = PositiveLinearForm::degree(3);
            let bound = big.max_vertex_degree().unwrap();
            prop_assert!((0..=bound).any(|eta| big.complement_count(&deg, eta) != small.complement_count(&deg, eta)));
        }
    }
}
