//! Exact integer lattice linear algebra.
//!
//! Everything here works with arbitrary-precision integers. Matrices are
//! small (ambient ranks of a handful), so the algorithms favour clarity:
//! Smith normal form by repeated pivoting, and every other operation is
//! read off from it.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinalg;

/// A vector in `ℤⁿ`, used both for `N` and for its dual `M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        LatticeVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        LatticeVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Pairing `⟨self, other⟩` between `M` and `N`.
    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
    }

    pub fn to_rational(&self) -> Vec<qlinalg::Q> {
        self.0.iter().map(qlinalg::q).collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Self::new(rows, cols, data.iter().map(|&x| BigInt::from(x)).collect()).expect("matrix shape")
    }

    /// Matrix whose rows are the given vectors, all of length `cols`.
    pub fn from_rows(cols: usize, rows: &[LatticeVector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.rank(), cols, "row length");
            data.extend(r.entries().iter().cloned());
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> LatticeVector {
        LatticeVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<LatticeVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(self.cols, v.rank(), "matrix-vector shape");
        LatticeVector((0..self.rows).map(|i| self.row(i).dot(v)).collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).into_entries()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let t = k * self.get(src, j);
            self.data[dst * self.cols + j] += t;
        }
    }

    /// col[dst] += k · col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let t = k * self.get(i, src);
            self.data[i * self.cols + dst] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `u · a · v = s`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`, tracked alongside it.
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form with unimodular transforms. The diagonal is
/// nonnegative and each entry divides the next.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = s.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(s, u, v, v_inv);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let p = s.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = s.get(i, t).div_floor(&p);
                if !q.is_zero() {
                    s.add_row(i, t, &-&q);
                    u.add_row(i, t, &-&q);
                }
                if !s.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = s.get(t, j).div_floor(&p);
                if !q.is_zero() {
                    s.add_col(j, t, &-&q);
                    v.add_col(j, t, &-&q);
                    v_inv.add_row(t, j, &q);
                }
                if !s.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce the divisibility chain.
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    s.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => {
                    if p.is_negative() {
                        s.negate_row(t);
                        u.negate_row(t);
                    }
                    break;
                }
            }
        }
    }
    finish(s, u, v, v_inv)
}

fn finish(s: IntMatrix, u: IntMatrix, v: IntMatrix, v_inv: IntMatrix) -> SmithForm {
    SmithForm { s, u, v, v_inv }
}

/// Divides a nonzero vector by the gcd of its entries.
pub fn primitive(v: &LatticeVector) -> Result<LatticeVector> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(LatticeVector(v.entries().iter().map(|x| x / &g).collect()))
}

/// `[ℤⁿ : L]`, or `Infinite` when `L` does not have full rank.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(k) => Some(k),
            LatticeIndex::Infinite => None,
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(k) => write!(f, "{k}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// Index of the subgroup generated by `generators` in `ℤⁿ`.
pub fn lattice_index(ambient_rank: usize, generators: &[LatticeVector]) -> LatticeIndex {
    if ambient_rank == 0 {
        return LatticeIndex::Finite(BigInt::one());
    }
    if generators.is_empty() {
        return LatticeIndex::Infinite;
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(ambient_rank, generators));
    if snf.rank() < ambient_rank {
        return LatticeIndex::Infinite;
    }
    LatticeIndex::Finite(snf.diagonal().iter().product())
}

/// A sublattice of `ℤⁿ` given by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: Vec<LatticeVector>,
}

impl Sublattice {
    /// Takes an independent list of vectors as the basis.
    pub fn new(ambient_rank: usize, basis: Vec<LatticeVector>) -> Result<Self> {
        for b in &basis {
            if b.rank() != ambient_rank {
                return Err(Error::DimensionMismatch { expected: ambient_rank, found: b.rank() });
            }
        }
        let rows: Vec<Vec<BigInt>> = basis.iter().map(|b| b.entries().to_vec()).collect();
        if qlinalg::rank_int(&rows) != basis.len() {
            return Err(Error::NotIndependent);
        }
        Ok(Sublattice { ambient_rank, basis })
    }

    /// The subgroup generated by an arbitrary list of vectors.
    pub fn span(ambient_rank: usize, generators: &[LatticeVector]) -> Self {
        let nonzero: Vec<LatticeVector> = generators.iter().filter(|g| !g.is_zero()).cloned().collect();
        if nonzero.is_empty() {
            return Sublattice::zero(ambient_rank);
        }
        let snf = smith_normal_form(&IntMatrix::from_rows(ambient_rank, &nonzero));
        // Rows of s · v⁻¹ generate the same group as the generators.
        let basis = snf
            .diagonal()
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| snf.v_inv.row(i).scale(d))
            .collect();
        Sublattice { ambient_rank, basis }
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Sublattice { ambient_rank, basis: Vec::new() }
    }

    pub fn full(ambient_rank: usize) -> Self {
        let basis = (0..ambient_rank).map(|i| LatticeVector::unit(ambient_rank, i)).collect();
        Sublattice { ambient_rank, basis }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn basis(&self) -> &[LatticeVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.ambient_rank, &self.basis)
    }

    pub fn is_saturated(&self) -> bool {
        if self.basis.is_empty() {
            return true;
        }
        smith_normal_form(&self.basis_matrix()).diagonal().iter().all(One::is_one)
    }

    /// Membership in the ℤ-span of the basis.
    pub fn contains(&self, v: &LatticeVector) -> bool {
        if v.is_zero() {
            return true;
        }
        let cols: Vec<Vec<qlinalg::Q>> = self.basis.iter().map(|b| b.to_rational()).collect();
        match qlinalg::solve_combination(&cols, &v.to_rational()) {
            Some(x) => x.iter().all(|c| c.is_integer()),
            None => false,
        }
    }

    /// Membership in the ℚ-span of the basis.
    pub fn spans_rationally(&self, v: &LatticeVector) -> bool {
        let cols: Vec<Vec<qlinalg::Q>> = self.basis.iter().map(|b| b.to_rational()).collect();
        qlinalg::solve_combination(&cols, &v.to_rational()).is_some()
    }

    /// Same subgroup of `ℤⁿ`, possibly with different bases.
    pub fn same_as(&self, other: &Sublattice) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.rank() == other.rank()
            && self.basis.iter().all(|b| other.contains(b))
            && other.basis.iter().all(|b| self.contains(b))
    }

    /// Sum of two sublattices.
    pub fn sum(&self, other: &Sublattice) -> Sublattice {
        let gens: Vec<LatticeVector> = self.basis.iter().chain(&other.basis).cloned().collect();
        Sublattice::span(self.ambient_rank, &gens)
    }
}

/// `{x ∈ ℤⁿ : kx ∈ L for some k ≥ 1}`.
pub fn saturation(l: &Sublattice) -> Sublattice {
    let perp = perp_basis(l);
    let dual = Sublattice { ambient_rank: l.ambient_rank, basis: perp };
    Sublattice { ambient_rank: l.ambient_rank, basis: perp_basis(&dual) }
}

/// Basis of `{m : ⟨m, v⟩ = 0 for all v ∈ L}`. The returned basis is
/// saturated. For `L = 0` it is the standard basis.
pub fn perp_basis(l: &Sublattice) -> Vec<LatticeVector> {
    let n = l.ambient_rank;
    if l.basis.is_empty() {
        return (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    }
    let snf = smith_normal_form(&l.basis_matrix());
    // x = v·y solves A x = 0 exactly when the first `rank` coordinates of y vanish.
    (snf.rank()..n).map(|j| snf.v.col(j)).collect()
}

/// The projection `ℤⁿ → ℤⁿ / K` for a saturated `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    pub ambient_rank: usize,
    pub kernel: Sublattice,
    pub projection: IntMatrix,
    /// Right inverse of `projection`.
    pub section: IntMatrix,
}

impl QuotientMap {
    pub fn target_rank(&self) -> usize {
        self.projection.rows()
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        self.projection.apply(v)
    }

    pub fn lift(&self, w: &LatticeVector) -> LatticeVector {
        self.section.apply(w)
    }

    /// Pulls a character of the quotient back to `M`: `⟨pullback(u), x⟩ = ⟨u, π(x)⟩`.
    pub fn pullback(&self, u: &LatticeVector) -> LatticeVector {
        self.projection.transpose().apply(u)
    }
}

pub fn quotient_map(kernel: &Sublattice) -> Result<QuotientMap> {
    if !kernel.is_saturated() {
        return Err(Error::NotSaturated);
    }
    let n = kernel.ambient_rank;
    let rows = perp_basis(kernel);
    let projection = IntMatrix::from_rows(n, &rows);
    let section = if rows.is_empty() {
        IntMatrix::zero(n, 0)
    } else {
        let snf = smith_normal_form(&projection);
        let r = rows.len();
        let mut vr = IntMatrix::zero(n, r);
        for i in 0..n {
            for j in 0..r {
                vr.set(i, j, snf.v.get(i, j).clone());
            }
        }
        vr.mul(&snf.u)
    };
    Ok(QuotientMap { ambient_rank: n, kernel: kernel.clone(), projection, section })
}

/// A lattice point of `sigma` whose image generates `sigma / tau ≅ ℤ`,
/// oriented so that `side` maps to the nonnegative half.
pub fn normal_generator(tau: &Sublattice, sigma: &Sublattice, side: &LatticeVector) -> Result<LatticeVector> {
    if sigma.rank() != tau.rank() + 1 {
        return Err(Error::NotCodimOne);
    }
    if !tau.basis().iter().all(|b| sigma.contains(b)) {
        return Err(Error::NotCodimOne);
    }
    let q = quotient_map(tau)?;
    let images: Vec<LatticeVector> = sigma.basis().iter().map(|b| q.apply(b)).collect();
    let first = images.iter().find(|y| !y.is_zero()).ok_or(Error::NotCodimOne)?;
    let g = primitive(first)?;
    let k = g.entries().iter().position(|x| !x.is_zero()).expect("nonzero generator");
    let coeffs: Vec<BigInt> = images.iter().map(|y| &y.entries()[k] / &g.entries()[k]).collect();
    let bezout = bezout_coefficients(&coeffs);
    let mut w = LatticeVector::zero(tau.ambient_rank());
    for (a, b) in bezout.iter().zip(sigma.basis()) {
        w = &w + &b.scale(a);
    }
    let side_image = q.apply(side);
    let side_coeff = side_image.entries()[k].clone() * g.entries()[k].signum();
    if side_coeff.is_negative() {
        w = -&w;
    }
    Ok(w)
}

/// Integers `a` with `Σ aᵢ xᵢ = gcd(x)`.
pub fn bezout_coefficients(xs: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); xs.len()];
    let mut g = BigInt::zero();
    for (i, x) in xs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = x.abs();
            out[i] = x.signum();
            continue;
        }
        let e = g.extended_gcd(x);
        // e.gcd = e.x * g + e.y * x
        for c in out.iter_mut().take(i) {
            *c *= &e.x;
        }
        out[i] = e.y;
        g = e.gcd;
    }
    if g.is_negative() {
        for c in out.iter_mut() {
            *c = -&*c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    fn check_snf(a: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(a);
        assert_eq!(f.u.mul(a).mul(&f.v), f.s);
        assert!(f.u.det().abs().is_one());
        assert!(f.v.det().abs().is_one());
        assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(a.cols()));
        let d = f.diagonal();
        for i in 0..f.s.rows() {
            for j in 0..f.s.cols() {
                if i != j {
                    assert!(f.s.get(i, j).is_zero());
                }
            }
        }
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        f
    }

    #[test]
    fn snf_identity() {
        let f = check_snf(&IntMatrix::identity(2));
        assert_eq!(f.s, IntMatrix::identity(2));
        assert_eq!(f.u, IntMatrix::identity(2));
        assert_eq!(f.v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_small() {
        let f = check_snf(&IntMatrix::from_i64(2, 2, &[1, 0, 1, 2]));
        assert_eq!(f.diagonal(), vec![BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn snf_zero() {
        let f = check_snf(&IntMatrix::zero(2, 2));
        assert_eq!(f.s, IntMatrix::zero(2, 2));
        assert_eq!(f.u, IntMatrix::identity(2));
        assert_eq!(f.v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_rectangular() {
        check_snf(&IntMatrix::from_i64(2, 3, &[2, 4, 4, -6, 6, 12]));
        check_snf(&IntMatrix::from_i64(3, 2, &[2, 3, 4, 5, 6, 7]));
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&v(&[2, 4])).unwrap(), v(&[1, 2]));
        assert_eq!(primitive(&v(&[1, 0])).unwrap(), v(&[1, 0]));
        assert_eq!(primitive(&v(&[-3, -6, -9])).unwrap(), v(&[-1, -2, -3]));
        assert_eq!(primitive(&v(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn saturation_examples() {
        let l = Sublattice::new(2, vec![v(&[2, 0])]).unwrap();
        assert!(saturation(&l).same_as(&Sublattice::new(2, vec![v(&[1, 0])]).unwrap()));

        let l = Sublattice::new(2, vec![v(&[1, 1]), v(&[1, -1])]).unwrap();
        assert!(!l.is_saturated());
        assert!(saturation(&l).same_as(&Sublattice::full(2)));

        let l = Sublattice::new(2, vec![v(&[1, 2])]).unwrap();
        assert!(l.is_saturated());
        assert!(saturation(&l).same_as(&l));
    }

    #[test]
    fn index_examples() {
        assert_eq!(lattice_index(2, &[v(&[1, 0]), v(&[0, 1])]), LatticeIndex::Finite(1.into()));
        assert_eq!(lattice_index(2, &[v(&[1, 0]), v(&[1, 2])]), LatticeIndex::Finite(2.into()));
        assert_eq!(lattice_index(2, &[v(&[1, 1]), v(&[2, 2])]), LatticeIndex::Infinite);
        assert_eq!(lattice_index(2, &[]), LatticeIndex::Infinite);
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_map(&Sublattice::new(2, vec![v(&[1, 0])]).unwrap()).unwrap();
        assert_eq!(q.target_rank(), 1);
        assert!(q.apply(&v(&[1, 0])).is_zero());
        assert_eq!(q.apply(&v(&[0, 1])).entries()[0].abs(), BigInt::one());

        let q = quotient_map(&Sublattice::new(2, vec![v(&[1, 1])]).unwrap()).unwrap();
        assert!(q.apply(&v(&[1, 1])).is_zero());
        let a = q.apply(&v(&[1, 0]));
        let b = q.apply(&v(&[0, 1]));
        assert_eq!(a.entries()[0].abs(), BigInt::one());
        assert_eq!(&a + &b, v(&[0]));
        assert_eq!(q.apply(&q.lift(&v(&[1]))), v(&[1]));

        let q = quotient_map(&Sublattice::full(3)).unwrap();
        assert_eq!(q.target_rank(), 0);

        let bad = Sublattice::new(2, vec![v(&[2, 0])]).unwrap();
        assert_eq!(quotient_map(&bad), Err(Error::NotSaturated));
    }

    #[test]
    fn perp_examples() {
        let p = perp_basis(&Sublattice::new(2, vec![v(&[1, 1])]).unwrap());
        assert_eq!(p.len(), 1);
        assert!(p[0] == v(&[1, -1]) || p[0] == v(&[-1, 1]));
        assert_eq!(perp_basis(&Sublattice::zero(3)), vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert!(perp_basis(&Sublattice::full(2)).is_empty());
    }

    #[test]
    fn normal_generator_examples() {
        let tau = Sublattice::new(2, vec![v(&[1, 1])]).unwrap();
        let n = normal_generator(&tau, &Sublattice::full(2), &v(&[2, 1])).unwrap();
        assert!(tau.contains(&(&n - &v(&[1, 0]))));
        let n = normal_generator(&tau, &Sublattice::full(2), &v(&[1, 2])).unwrap();
        // Any lift of the generator on the σ₂₃ side is congruent to (0,1) modulo τ.
        assert!(tau.contains(&(&n - &v(&[0, 1]))));

        let ray = Sublattice::new(2, vec![v(&[1, 0])]).unwrap();
        let n = normal_generator(&Sublattice::zero(2), &ray, &v(&[3, 0])).unwrap();
        assert_eq!(n, v(&[1, 0]));

        assert_eq!(normal_generator(&Sublattice::zero(2), &Sublattice::full(2), &v(&[1, 1])), Err(Error::NotCodimOne));
    }

    #[test]
    fn bezout() {
        let xs: Vec<BigInt> = [6, 10, 15].iter().map(|&x| BigInt::from(x)).collect();
        let a = bezout_coefficients(&xs);
        let s: BigInt = a.iter().zip(&xs).map(|(a, x)| a * x).sum();
        assert_eq!(s, BigInt::one());
    }
}
