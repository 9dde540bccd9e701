//! Dense square matrices over the series field and over ℚ.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::valfield::{parse, PuiseuxElem, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesMatrix {
    n: usize,
    data: Vec<PuiseuxElem>,
}

impl SeriesMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> PuiseuxElem) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SeriesMatrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<PuiseuxElem>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix is not square".into()));
        }
        Ok(SeriesMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { PuiseuxElem::one() } else { PuiseuxElem::zero() })
    }

    pub fn diag(d: Vec<PuiseuxElem>) -> Self {
        let n = d.len();
        let mut m = Self::from_fn(n, |_, _| PuiseuxElem::zero());
        for (i, x) in d.into_iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    pub fn from_rational(q: &RatMatrix) -> Self {
        Self::from_fn(q.n, |i, j| PuiseuxElem::constant(q.get(i, j).clone()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &PuiseuxElem {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PuiseuxElem) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[PuiseuxElem] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        Self::from_fn(n, |i, j| {
            let mut acc = PuiseuxElem::zero();
            for k in 0..n {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = &acc + &(a * b);
            }
            acc
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j).scale(c))
    }

    /// Determinant by expansion over column subsets; no division.
    pub fn det(&self) -> PuiseuxElem {
        det_subset(self.n, |i, j| self.get(i, j))
    }

    /// Determinant of the principal submatrix on `idx`.
    pub fn principal_minor(&self, idx: &[usize]) -> PuiseuxElem {
        det_subset(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    /// Adjugate matrix; equals the inverse when the determinant is one.
    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, |i, j| {
            // cofactor of (j, i)
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let m = det_subset(n - 1, |a, b| self.get(rows[a], cols[b]));
            if (i + j) % 2 == 0 {
                m
            } else {
                -m
            }
        })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(|x| x.is_exact())
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect()).collect()
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }
}

impl Serialize for SeriesMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SeriesMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        SeriesMatrix::from_strings(&rows).map_err(serde::de::Error::custom)
    }
}

fn det_subset<'a>(n: usize, get: impl Fn(usize, usize) -> &'a PuiseuxElem) -> PuiseuxElem {
    if n == 0 {
        return PuiseuxElem::one();
    }
    // dp[mask]: signed sum over assignments of the first |mask| rows to mask.
    let full = 1usize << n;
    let mut dp: Vec<PuiseuxElem> = vec![PuiseuxElem::zero(); full];
    dp[0] = PuiseuxElem::one();
    for mask in 0..full {
        if dp[mask].is_zero() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            let entry = get(row, col);
            if entry.is_zero() {
                continue;
            }
            let inversions = (mask >> (col + 1)).count_ones();
            let term = &dp[mask] * entry;
            let next = mask | (1 << col);
            dp[next] = if inversions % 2 == 0 { &dp[next] + &term } else { &dp[next] - &term };
        }
    }
    dp.pop().expect("full mask")
}

/// Square rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    n: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        RatMatrix { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| (0..n).fold(Rat::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// Inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut inv: Vec<Vec<Rat>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for k in 0..n {
                a[col][k] = &a[col][k] / &p;
                inv[col][k] = &inv[col][k] / &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for k in 0..n {
                    let (x, y) = (&a[col][k] * &f, &inv[col][k] * &f);
                    a[r][k] -= x;
                    inv[r][k] -= y;
                }
            }
        }
        Some(Self::from_fn(n, |i, j| inv[i][j].clone()))
    }

    pub fn det(&self) -> Rat {
        let s = SeriesMatrix::from_rational(self);
        s.det().coeff(&Rat::zero()).expect("exact")
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    /// At most one nonzero entry in each row and column.
    pub fn is_monomial(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).filter(|&j| !self.get(i, j).is_zero()).count() == 1)
            && (0..n).all(|j| (0..n).filter(|&i| !self.get(i, j).is_zero()).count() == 1)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect()).collect()
    }
}
