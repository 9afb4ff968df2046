use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{Exponent, Poly};
use crate::{Error, Result};

/// A square matrix over `Q`, used as a linear change of coordinates `x ↦ Mx`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    n: usize,
    rows: Vec<Vec<BigRational>>,
}

impl RatMatrix {
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        RatMatrix { n, rows }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        Ok(RatMatrix { n, rows })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| BigRational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Exact determinant by Gaussian elimination over `Q`.
    pub fn determinant(&self) -> BigRational {
        let mut a = self.rows.clone();
        let mut det = BigRational::one();
        for col in 0..self.n {
            let Some(piv) = (col..self.n).find(|&r| !a[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            det *= &a[col][col];
            let (top, rest) = a.split_at_mut(col + 1);
            let pivot = &top[col];
            for row in rest {
                if row[col].is_zero() {
                    continue;
                }
                let factor = &row[col] / &pivot[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= &factor * p;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv = Self::identity(n).rows;
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap(piv, col);
            inv.swap(piv, col);
            let p = a[col][col].clone();
            for c in 0..n {
                a[col][c] /= &p;
                inv[col][c] /= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    let da = &factor * &a[col][c];
                    a[r][c] -= da;
                    let di = &factor * &inv[col][c];
                    inv[r][c] -= di;
                }
            }
        }
        Ok(RatMatrix { n, rows: inv })
    }

    /// `f(Mx)`: each `x_i` is replaced by `Σ_j M_ij x_j`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        if f.nvars() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: f.nvars(),
            });
        }
        if self.determinant().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(self.substitute(f))
    }

    fn substitute(&self, f: &Poly) -> Poly {
        let n = self.n;
        let images: Vec<Poly> = (0..n)
            .map(|i| {
                Poly::from_terms(
                    n,
                    (0..n).map(|j| (Exponent::axis(n, j, 1), self.rows[i][j].clone())),
                )
                .expect("matching dimension")
            })
            .collect();
        // powers[i][k] = (row_i · x)^k, grown lazily
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(n)]; n];
        let mut out = Poly::zero(n);
        for (e, c) in f.terms() {
            let mut t = Poly::constant(n, c.clone());
            for (i, &k) in e.entries().iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().expect("nonempty") * &images[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k];
                }
            }
            out = &out + &t;
        }
        out
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}
