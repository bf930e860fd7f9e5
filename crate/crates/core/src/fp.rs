//! Exact linear algebra over the prime field F_p.
//!
//! Vectors are plain `Vec<u32>` of residues; the modulus lives in a [`Prime`]
//! that is validated once and then copied around freely.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=65_521).contains(&p) || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u32 {
        (x % self.0 as u64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.0), "inverse of zero in F_{}", self.0);
        self.pow(a, (self.0 - 2) as u64)
    }

    /// Reduce a signed integer.
    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    /// `p^e` as an ordinary integer.
    pub fn power(self, e: u32) -> usize {
        (self.0 as usize).pow(e)
    }

    /// Exponent `e` with `p^e = n`, if `n` is a power of `p`.
    pub fn log(self, mut n: usize) -> Option<u32> {
        if n == 0 {
            return None;
        }
        let p = self.0 as usize;
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        (n == 1).then_some(e)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A residue together with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    pub p: Prime,
    pub value: u32,
}

impl FpScalar {
    pub fn new(p: Prime, value: u64) -> Self {
        FpScalar { p, value: p.reduce(value) }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `C(a, b) mod p`, computed digit by digit in base `p` (Lucas' theorem).
pub fn lucas_binomial(mut a: u64, mut b: u64, p: Prime) -> FpScalar {
    let q = p.value() as u64;
    let mut acc = 1 % p.value();
    while b > 0 {
        let (ai, bi) = (a % q, b % q);
        if bi > ai {
            return FpScalar { p, value: 0 };
        }
        acc = p.mul(acc, small_binomial(ai as u32, bi as u32, p));
        a /= q;
        b /= q;
    }
    FpScalar { p, value: acc }
}

// a < p, so every factor below is a unit.
fn small_binomial(a: u32, b: u32, p: Prime) -> u32 {
    let b = b.min(a - b);
    let mut num = 1;
    let mut den = 1;
    for i in 0..b {
        num = p.mul(num, a - i);
        den = p.mul(den, i + 1);
    }
    p.mul(num, p.inv(den))
}

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: Prime, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        let data = data.into_iter().map(|x| x % p.value()).collect();
        Ok(FpMatrix { p, rows, cols, data })
    }

    /// Build from column vectors (each of length `rows`).
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x % p.value());
            }
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.data[i * self.cols + j] = x;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, x: u32) {
        let k = i * self.cols + j;
        self.data[k] = self.p.add(self.data[k], x);
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let p = self.p;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a as u64 * b as u64;
                }
            }
            for d in &mut out[i * other.cols..(i + 1) * other.cols] {
                *d %= p.value() as u64;
            }
        }
        FpMatrix {
            p,
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|x| x as u32).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                self.p.reduce(s)
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.p.add(a, b)).collect();
        FpMatrix { data, ..*self }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.p.sub(a, b)).collect();
        FpMatrix { data, ..*self }
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let data = self.data.iter().map(|&a| self.p.mul(a, c)).collect();
        FpMatrix { data, ..*self }
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Incrementally maintained reduced row echelon form.
///
/// Pivot rows are kept fully reduced and normalised, so reducing a new vector
/// only needs to look at its entries in pivot columns once.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: Prime,
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    pivot_of_col: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(p: Prime, cols: usize) -> Self {
        Echelon { p, cols, rows: Vec::new(), pivots: Vec::new(), pivot_of_col: vec![None; cols] }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Basis rows, in insertion order of their pivots.
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduce(&self, v: &mut [u32]) {
        debug_assert_eq!(v.len(), self.cols);
        let p = self.p;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let f = p.neg(c);
            for (x, &r) in v.iter_mut().zip(row) {
                if r != 0 {
                    *x = p.reduce(*x as u64 + (f as u64) * (r as u64));
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Insert a vector; returns `true` when it enlarged the span.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        if self.is_full() {
            return false;
        }
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.p.value()).collect();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.p.inv(w[pc]);
        for x in w.iter_mut() {
            *x = self.p.mul(*x, inv);
        }
        let p = self.p;
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c == 0 {
                continue;
            }
            let f = p.neg(c);
            for (x, &r) in row.iter_mut().zip(&w) {
                if r != 0 {
                    *x = p.reduce(*x as u64 + (f as u64) * (r as u64));
                }
            }
        }
        self.pivot_of_col[pc] = Some(self.rows.len());
        self.pivots.push(pc);
        self.rows.push(w);
        true
    }

    /// Basis of `{x : r·x = 0 for every row r}`; one vector per free column,
    /// in increasing column order.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        (0..self.cols)
            .filter(|&c| self.pivot_of_col[c].is_none())
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    v[pc] = p.neg(row[free]);
                }
                v
            })
            .collect()
    }

    /// Coordinates of `v` in terms of the free/pivot split: returns the
    /// coefficients `c` such that `v = Σ c_i basis_i`, or `None` when `v` is not
    /// in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }
}

pub fn rank(m: &FpMatrix) -> usize {
    let mut e = Echelon::new(m.prime(), m.cols());
    for i in 0..m.rows() {
        e.insert(m.row(i));
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

/// Basis of the right kernel `{v : Mv = 0}`.
pub fn nullspace(m: &FpMatrix) -> Vec<Vec<u32>> {
    let mut e = Echelon::new(m.prime(), m.cols());
    for i in 0..m.rows() {
        e.insert(m.row(i));
    }
    e.kernel()
}

/// Some `x` with `Mx = b`, or `None` if the system is inconsistent.
pub fn solve(m: &FpMatrix, b: &[u32]) -> Result<Option<Vec<u32>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch { expected: m.rows(), got: b.len() });
    }
    let p = m.prime();
    let cols = m.cols();
    let mut e = Echelon::new(p, cols + 1);
    for (i, &bi) in b.iter().enumerate() {
        let mut r = m.row(i).to_vec();
        r.push(bi % p.value());
        e.insert(&r);
    }
    if e.pivot_columns().contains(&cols) {
        return Ok(None);
    }
    let mut x = vec![0; cols];
    for (row, &pc) in e.basis().iter().zip(e.pivot_columns()) {
        x[pc] = row[cols];
    }
    Ok(Some(x))
}

/// Add `c·src` into `dst`.
pub fn axpy(p: Prime, dst: &mut [u32], c: u32, src: &[u32]) {
    if c == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = p.reduce(*d as u64 + c as u64 * s as u64);
        }
    }
}

/// Graded F_p vector space with opaque labels for each basis vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedSpace {
    components: BTreeMap<usize, Vec<String>>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append a basis label in `degree`; returns its index, or `None` if the
    /// label already exists there.
    pub fn push(&mut self, degree: usize, label: String) -> Option<usize> {
        let comp = self.components.entry(degree).or_default();
        if comp.contains(&label) {
            return None;
        }
        comp.push(label);
        Some(comp.len() - 1)
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.components.get(&degree).map_or(0, Vec::len)
    }

    pub fn labels(&self, degree: usize) -> &[String] {
        self.components.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.components.iter().filter(|(_, v)| !v.is_empty()).map(|(&d, _)| d)
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn rejects_composites() {
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(5).is_ok());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&FpMatrix::identity(p(2), 3)), 3);
        assert_eq!(rank(&FpMatrix::zeros(p(3), 2, 5)), 0);
        let m = FpMatrix::from_rows(p(2), 2, 2, vec![1, 1, 1, 1]).unwrap();
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&FpMatrix::identity(p(5), 4)).is_empty());
        assert_eq!(nullspace(&FpMatrix::zeros(p(2), 1, 3)).len(), 3);
        let m = FpMatrix::from_rows(p(2), 1, 2, vec![1, 1]).unwrap();
        assert_eq!(nullspace(&m), vec![vec![1, 1]]);
    }

    #[test]
    fn solve_examples() {
        let id = FpMatrix::identity(p(3), 3);
        assert_eq!(solve(&id, &[2, 0, 1]).unwrap(), Some(vec![2, 0, 1]));
        let z = FpMatrix::zeros(p(3), 2, 2);
        assert_eq!(solve(&z, &[1, 0]).unwrap(), None);
        let m = FpMatrix::from_rows(p(2), 2, 2, vec![1, 1, 0, 1]).unwrap();
        assert_eq!(solve(&m, &[0, 1]).unwrap(), Some(vec![1, 1]));
        assert!(solve(&m, &[0]).is_err());
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binomial(0, 1, p(2)).value, 0);
        assert_eq!(lucas_binomial(1, 1, p(3)).value, 1);
        assert_eq!(lucas_binomial(6, 2, p(2)).value, 1);
        assert_eq!(lucas_binomial(5, 7, p(5)).value, 0);
    }

    #[test]
    fn graded_space_rejects_duplicate_labels() {
        let mut g = GradedSpace::new();
        assert_eq!(g.push(2, "a".into()), Some(0));
        assert_eq!(g.push(2, "a".into()), None);
        assert_eq!(g.push(3, "a".into()), Some(0));
        assert_eq!(g.dim(2), 1);
        assert_eq!(g.dim(7), 0);
    }

    #[test]
    fn coordinates_round_trip() {
        let pr = p(3);
        let mut e = Echelon::new(pr, 3);
        e.insert(&[1, 2, 0]);
        e.insert(&[0, 1, 1]);
        let v = [1, 0, 1];
        let c = e.coordinates(&v).unwrap();
        let mut acc = vec![0; 3];
        for (ci, row) in c.iter().zip(e.basis()) {
            axpy(pr, &mut acc, *ci, row);
        }
        assert_eq!(acc, v);
        assert!(e.coordinates(&[0, 0, 1]).is_none() || e.rank() == 3);
    }
}
