//! Crystallographic root systems in simple-root coordinates.
//!
//! Roots are integer vectors in the basis of simple roots and coroots are
//! integer vectors in the basis of simple coroots. The only bilinear form
//! ever evaluated is the integral pairing `b(x, β∨) = xᵀ·B·β∨`, where
//! `B[i][j] = b(δ_i, δ_j∨)` is the Cartan matrix.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::valfield::{Rat, ValueGroup};

/// Root bound used when closing a basis under simple reflections.
pub const ROOT_BOUND: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `A_n`, realized on sum-zero vectors of length `n + 1`.
    TypeA(usize),
    FromCartan,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    cartan: Vec<Vec<i64>>,
    cartan_inv: Vec<Vec<Rat>>,
    kind: Kind,
}

/// An element of the spherical Weyl group, stored by its integer action on
/// simple-root coordinates (column `k` is the image of `δ_k`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElem {
    matrix: Vec<Vec<i64>>,
    /// For type A: `(w·μ)_i = μ_{perm[i]}` in sum-zero coordinates.
    perm: Option<Vec<usize>>,
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn unit(rank: usize, k: usize) -> Vec<i64> {
    let mut v = vec![0; rank];
    v[k] = 1;
    v
}

fn rational_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<Rat>>> {
    let q = crate::matrix::RatMatrix::from_fn(m.len(), |i, j| Rat::from_integer(m[i][j].into()));
    let inv = q.inverse()?;
    Some((0..m.len()).map(|i| (0..m.len()).map(|j| inv.get(i, j).clone()).collect()).collect())
}

impl RootSystem {
    /// The root system `A_n` (rank `n`, the roots of `SL(n+1)`).
    pub fn type_a(n: usize) -> Self {
        assert!(n >= 1, "rank must be positive");
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let mut rs = Self::from_cartan(cartan).expect("type A closes");
        rs.kind = Kind::TypeA(n);
        // Order roots as α_ij with i < j first (lexicographic), then negatives.
        let size = n + 1;
        let mut roots = Vec::new();
        for i in 0..size {
            for j in (i + 1)..size {
                roots.push(rs.alpha(i, j));
            }
        }
        for i in 0..size {
            for j in (i + 1)..size {
                roots.push(rs.alpha(j, i));
            }
        }
        let coroots = roots.clone();
        rs.index = roots.iter().cloned().enumerate().map(|(k, r)| (r, k)).collect();
        rs.roots = roots;
        rs.coroots = coroots;
        rs
    }

    /// Closes the simple roots under the simple reflections.
    pub fn from_cartan(cartan: Vec<Vec<i64>>) -> Result<Self> {
        let rank = cartan.len();
        if rank == 0 || cartan.iter().any(|r| r.len() != rank) {
            return Err(Error::Dimension("Cartan matrix must be square and nonempty".into()));
        }
        if (0..rank).any(|i| cartan[i][i] != 2) {
            return Err(Error::Invalid("Cartan matrix diagonal must be 2".into()));
        }
        let cartan_inv =
            rational_inverse(&cartan).ok_or_else(|| Error::Invalid("singular Cartan matrix".into()))?;
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        let mut index = HashMap::new();
        let mut queue = VecDeque::new();
        for k in 0..rank {
            let (r, c) = (unit(rank, k), unit(rank, k));
            index.insert(r.clone(), roots.len());
            roots.push(r.clone());
            coroots.push(c.clone());
            queue.push_back((r, c));
        }
        while let Some((r, c)) = queue.pop_front() {
            for i in 0..rank {
                let (nr, nc) = reflect_pair(&cartan, i, &r, &c);
                if !index.contains_key(&nr) {
                    if roots.len() >= ROOT_BOUND {
                        return Err(Error::EnumerationBound(ROOT_BOUND));
                    }
                    index.insert(nr.clone(), roots.len());
                    roots.push(nr.clone());
                    coroots.push(nc.clone());
                    queue.push_back((nr, nc));
                }
            }
        }
        Ok(RootSystem { rank, roots, coroots, index, cartan, cartan_inv, kind: Kind::FromCartan })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn cartan_inv(&self) -> &[Vec<Rat>] {
        &self.cartan_inv
    }

    pub fn root_index(&self, beta: &[i64]) -> Result<usize> {
        self.index.get(beta).copied().ok_or(Error::NotARoot)
    }

    /// Coroot of `beta` in simple-coroot coordinates.
    pub fn coroot(&self, beta: &[i64]) -> Result<&[i64]> {
        Ok(&self.coroots[self.root_index(beta)?])
    }

    /// Roots with nonnegative coordinates.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        self.roots.iter().filter(|r| r.iter().all(|&c| c >= 0)).cloned().collect()
    }

    /// For type `A_{n-1}`: `α_ij = e_i − e_j` in simple-root coordinates
    /// (0-based indices).
    pub fn alpha(&self, i: usize, j: usize) -> Vec<i64> {
        assert!(i != j, "α_ii is not a root");
        let mut v = vec![0; self.rank];
        let (lo, hi, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
        for c in v.iter_mut().take(hi).skip(lo) {
            *c = s;
        }
        v
    }

    /// Inverse of [`alpha`](Self::alpha): recognizes a root of difference form.
    pub fn as_pair(&self, beta: &[i64]) -> Option<(usize, usize)> {
        if !matches!(self.kind, Kind::TypeA(_)) {
            return None;
        }
        let nz: Vec<usize> = (0..beta.len()).filter(|&k| beta[k] != 0).collect();
        let (&lo, &hi) = (nz.first()?, nz.last()?);
        let s = beta[lo];
        if (s != 1 && s != -1) || (lo..=hi).any(|k| beta[k] != s) {
            return None;
        }
        Some(if s == 1 { (lo, hi + 1) } else { (hi + 1, lo) })
    }

    /// `b(x, β∨)` for a root-lattice vector `x`.
    pub fn pairing(&self, x: &[i64], beta: &[i64]) -> Result<i64> {
        let cv = self.coroot(beta)?;
        Ok(self.pair_with_coroot(x, cv))
    }

    fn pair_with_coroot(&self, x: &[i64], cv: &[i64]) -> i64 {
        let mut s = 0;
        for (m, xm) in x.iter().enumerate() {
            if *xm == 0 {
                continue;
            }
            for (p, cp) in cv.iter().enumerate() {
                s += xm * cp * self.cartan[m][p];
            }
        }
        s
    }

    /// Coefficients `b(δ_k, β∨)` for each simple root, so that the pairing of
    /// a Λ-valued vector is `Σ_k λ_k·coeff_k`.
    pub fn pairing_row(&self, beta: &[i64]) -> Result<Vec<i64>> {
        let cv = self.coroot(beta)?;
        Ok((0..self.rank).map(|k| self.pair_with_coroot(&unit(self.rank, k), cv)).collect())
    }

    /// Λ-linear extension of the pairing to `Span(Φ) ⊗ Λ`.
    pub fn pairing_ext<G: ValueGroup>(&self, coords: &[G], beta: &[i64]) -> Result<G> {
        let row = self.pairing_row(beta)?;
        Ok(coords.iter().zip(&row).fold(G::zero(), |acc, (c, k)| acc.add(&c.mul_int(*k))))
    }

    /// `x − b(x, α∨)·α`.
    pub fn reflect(&self, alpha: &[i64], x: &[i64]) -> Result<Vec<i64>> {
        let k = self.pairing(x, alpha)?;
        Ok(x.iter().zip(alpha).map(|(a, b)| a - k * b).collect())
    }

    /// Matrix of the simple reflection `s_i` on root coordinates.
    fn simple_reflection(&self, i: usize) -> Vec<Vec<i64>> {
        let cols: Vec<Vec<i64>> = (0..self.rank)
            .map(|k| self.reflect(&unit(self.rank, i), &unit(self.rank, k)).expect("simple root"))
            .collect();
        (0..self.rank).map(|r| (0..self.rank).map(|c| cols[c][r]).collect()).collect()
    }

    /// All Weyl group elements. For type A these are the `n!` permutations in
    /// lexicographic order; otherwise the group generated by simple
    /// reflections, up to `bound` elements.
    pub fn weyl_elements(&self, bound: usize) -> Result<Vec<WeylElem>> {
        if let Kind::TypeA(n) = self.kind {
            let size = n + 1;
            let mut out = Vec::new();
            let mut perm: Vec<usize> = (0..size).collect();
            loop {
                out.push(self.weyl_from_perm(&perm));
                if out.len() > bound {
                    return Err(Error::EnumerationBound(bound));
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            return Ok(out);
        }
        let gens: Vec<Vec<Vec<i64>>> = (0..self.rank).map(|i| self.simple_reflection(i)).collect();
        let id: Vec<Vec<i64>> = (0..self.rank).map(|i| unit(self.rank, i)).collect();
        let mut seen = HashSet::new();
        seen.insert(id.clone());
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for g in &gens {
                let next = mat_mul(g, &m);
                if seen.insert(next.clone()) {
                    if out.len() >= bound {
                        return Err(Error::EnumerationBound(bound));
                    }
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(out.into_iter().map(|matrix| WeylElem { matrix, perm: None }).collect())
    }

    /// Type A only: the element acting by `(w·μ)_i = μ_{perm[i]}`.
    pub fn weyl_from_perm(&self, perm: &[usize]) -> WeylElem {
        assert_eq!(perm.len(), self.rank + 1, "permutation size");
        let mut inv = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        // w·e_m = e_{perm⁻¹(m)}, so w·δ_k = α_{perm⁻¹(k), perm⁻¹(k+1)}.
        let cols: Vec<Vec<i64>> = (0..self.rank).map(|k| self.alpha(inv[k], inv[k + 1])).collect();
        let matrix = (0..self.rank).map(|r| (0..self.rank).map(|c| cols[c][r]).collect()).collect();
        WeylElem { matrix, perm: Some(perm.to_vec()) }
    }

    pub fn weyl_identity(&self) -> WeylElem {
        match self.kind {
            Kind::TypeA(n) => self.weyl_from_perm(&(0..=n).collect::<Vec<_>>()),
            Kind::FromCartan => {
                WeylElem { matrix: (0..self.rank).map(|i| unit(self.rank, i)).collect(), perm: None }
            }
        }
    }
}

fn reflect_pair(cartan: &[Vec<i64>], i: usize, r: &[i64], c: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let rank = cartan.len();
    // b(r, δ_i∨) = Σ_m r_m B[m][i];  b(δ_i, c) = Σ_p B[i][p] c_p
    let kr: i64 = (0..rank).map(|m| r[m] * cartan[m][i]).sum();
    let kc: i64 = (0..rank).map(|p| cartan[i][p] * c[p]).sum();
    let mut nr = r.to_vec();
    let mut nc = c.to_vec();
    nr[i] -= kr;
    nc[i] -= kc;
    (nr, nc)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl WeylElem {
    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn perm(&self) -> Option<&[usize]> {
        self.perm.as_deref()
    }

    pub fn act_int(&self, x: &[i64]) -> Vec<i64> {
        mat_vec(&self.matrix, x)
    }

    pub fn act<G: ValueGroup>(&self, x: &[G]) -> Vec<G> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).fold(G::zero(), |acc, (k, v)| acc.add(&v.mul_int(*k))))
            .collect()
    }

    /// The product acting as `self ∘ other`.
    pub fn compose(&self, other: &WeylElem) -> WeylElem {
        let perm = match (&self.perm, &other.perm) {
            (Some(a), Some(b)) => Some(a.iter().map(|&i| b[i]).collect()),
            _ => None,
        };
        WeylElem { matrix: mat_mul(&self.matrix, &other.matrix), perm }
    }

    pub fn inverse(&self) -> WeylElem {
        let rank = self.matrix.len();
        let inv = rational_inverse(&self.matrix).expect("Weyl elements are invertible");
        let matrix = (0..rank)
            .map(|i| (0..rank).map(|j| inv[i][j].to_integer().try_into().expect("small entries")).collect())
            .collect();
        let perm = self.perm.as_ref().map(|p| {
            let mut q = vec![0; p.len()];
            for (i, &v) in p.iter().enumerate() {
                q[v] = i;
            }
            q
        });
        WeylElem { matrix, perm }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, v)| *v == i64::from(i == j)))
    }
}
