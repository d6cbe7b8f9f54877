//! Finite-rank graded commutative rings over ℤ standing in for the Chow
//! ring of a smooth base, and the Chern map `δ: M → A¹X`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::{self, Target};
use crate::lattice::LatticeVector;
use crate::poly::Polynomial;

/// A graded ring with a distinguished ℤ-basis. Basis element 0 is the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    top_degree: usize,
    names: Vec<String>,
    degrees: Vec<usize>,
    /// `table[i][j]` = coefficients of `bᵢ·bⱼ` in the basis.
    table: Vec<Vec<Vec<BigInt>>>,
    /// Names usable in expressions, with their elements' basis coordinates.
    generators: Vec<(String, Vec<BigInt>)>,
}

fn monomial_name(gens: &[(String, usize)], exps: &[u32]) -> String {
    let parts: Vec<String> = gens
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|((g, _), &e)| if e == 1 { g.clone() } else { format!("{g}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn exponent_vectors(gens: &[(String, usize)], top: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, gens: &[(String, usize)], left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == gens.len() {
            out.push(cur.clone());
            return;
        }
        let d = gens[i].1;
        let max = left.checked_div(d).unwrap_or(0);
        for e in (0..=max).rev() {
            cur.push(e as u32);
            rec(i + 1, gens, left - e * d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, gens, top, &mut Vec::new(), &mut out);
    out
}

impl GradedAlgebra {
    /// Polynomial ring on the generators, truncated above `top_degree`,
    /// with the monomial basis.
    pub fn free_truncated(generators: &[(String, usize)], top_degree: usize) -> Result<Self> {
        if let Some((g, d)) = generators.iter().find(|(_, d)| *d == 0 || *d > top_degree) {
            return Err(Error::InvalidAlgebra(format!("generator {g} has degree {d}, outside 1..={top_degree}")));
        }
        for (i, (g, _)) in generators.iter().enumerate() {
            if generators[..i].iter().any(|(h, _)| h == g) {
                return Err(Error::InvalidAlgebra(format!("generator {g} listed twice")));
            }
        }
        let deg = |e: &[u32]| -> usize { e.iter().zip(generators).map(|(&k, (_, d))| k as usize * d).sum() };
        let mut monos = exponent_vectors(generators, top_degree);
        // By degree, then lexicographically descending (a1^2, a1*a2, a2^2).
        monos.sort_by(|a, b| deg(a).cmp(&deg(b)).then_with(|| b.cmp(a)));
        let index: BTreeMap<Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let r = monos.len();
        let mut table = vec![vec![vec![BigInt::zero(); r]; r]; r];
        for (i, a) in monos.iter().enumerate() {
            for (j, b) in monos.iter().enumerate() {
                let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if let Some(&k) = index.get(&s) {
                    table[i][j][k] = BigInt::one();
                }
            }
        }
        let names = monos.iter().map(|m| monomial_name(generators, m)).collect();
        let degrees = monos.iter().map(|m| deg(m)).collect();
        let gens = generators
            .iter()
            .enumerate()
            .map(|(g, (name, _))| {
                let mut e = vec![0u32; generators.len()];
                e[g] = 1;
                let mut coords = vec![BigInt::zero(); r];
                coords[index[&e]] = BigInt::one();
                (name.clone(), coords)
            })
            .collect();
        Ok(GradedAlgebra { top_degree, names, degrees, table, generators: gens })
    }

    /// `A*(pt) = ℤ`.
    pub fn point() -> Self {
        Self::free_truncated(&[], 0).expect("point algebra")
    }

    /// `A*(Pⁿ) = ℤ[h]/(hⁿ⁺¹)`.
    pub fn projective(n: usize) -> Result<Self> {
        if n == 0 {
            return Ok(Self::point());
        }
        Self::free_truncated(&[("h".to_string(), 1)], n)
    }

    /// An algebra from an explicit multiplication table. `basis` excludes
    /// the unit, which is added as `"1"`. `products` maps pairs of basis
    /// names to coefficient vectors over the full basis (unit first);
    /// missing products are zero and one order of each pair suffices.
    pub fn explicit(
        top_degree: usize,
        basis: &[(String, usize)],
        products: &BTreeMap<(String, String), Vec<BigInt>>,
    ) -> Result<Self> {
        let mut names = vec!["1".to_string()];
        let mut degrees = vec![0];
        for (n, d) in basis {
            if names.contains(n) {
                return Err(Error::InvalidAlgebra(format!("basis element {n} listed twice")));
            }
            if *d == 0 || *d > top_degree {
                return Err(Error::InvalidAlgebra(format!(
                    "basis element {n} has degree {d}, outside 1..={top_degree}"
                )));
            }
            names.push(n.clone());
            degrees.push(*d);
        }
        let r = names.len();
        let pos = |n: &str| -> Result<usize> {
            names.iter().position(|x| x == n).ok_or_else(|| Error::InvalidAlgebra(format!("unknown basis element {n}")))
        };
        let mut table: Vec<Vec<Option<Vec<BigInt>>>> = vec![vec![None; r]; r];
        for i in 0..r {
            let mut e = vec![BigInt::zero(); r];
            e[i] = BigInt::one();
            table[0][i] = Some(e.clone());
            table[i][0] = Some(e);
        }
        for ((a, b), c) in products {
            let (i, j) = (pos(a)?, pos(b)?);
            if c.len() != r {
                return Err(Error::InvalidAlgebra(format!(
                    "product {a}*{b} has {} coefficients, expected {r}",
                    c.len()
                )));
            }
            for (k, x) in c.iter().enumerate() {
                if !x.is_zero() && degrees[k] != degrees[i] + degrees[j] {
                    return Err(Error::InvalidAlgebra(format!(
                        "product {a}*{b} is not homogeneous of degree {}",
                        degrees[i] + degrees[j]
                    )));
                }
            }
            for (p, q) in [(i, j), (j, i)] {
                match &table[p][q] {
                    Some(existing) if existing != c => {
                        return Err(Error::InvalidAlgebra(format!(
                            "product {a}*{b} is not commutative or conflicts with the unit"
                        )))
                    }
                    _ => table[p][q] = Some(c.clone()),
                }
            }
        }
        let table: Vec<Vec<Vec<BigInt>>> = table
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.unwrap_or_else(|| vec![BigInt::zero(); r])).collect())
            .collect();
        let generators = (1..r)
            .map(|i| {
                let mut e = vec![BigInt::zero(); r];
                e[i] = BigInt::one();
                (names[i].clone(), e)
            })
            .collect();
        let alg = GradedAlgebra { top_degree, names, degrees, table, generators };
        alg.check_associative()?;
        Ok(alg)
    }

    fn check_associative(&self) -> Result<()> {
        let r = self.rank();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    // (bᵢbⱼ)bₖ versus bᵢ(bⱼbₖ)
                    let mut left = vec![BigInt::zero(); r];
                    for (l, c) in self.table[i][j].iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (t, d) in self.table[l][k].iter().enumerate() {
                            left[t] += c * d;
                        }
                    }
                    let mut right = vec![BigInt::zero(); r];
                    for (l, c) in self.table[j][k].iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (t, d) in self.table[i][l].iter().enumerate() {
                            right[t] += c * d;
                        }
                    }
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "multiplication is not associative on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `A ⊗ B` with basis names joined by `*`.
    pub fn tensor(&self, other: &GradedAlgebra) -> GradedAlgebra {
        let (r, s) = (self.rank(), other.rank());
        let idx = |i: usize, j: usize| i * s + j;
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for i in 0..r {
            for j in 0..s {
                names.push(match (i, j) {
                    (0, _) => other.names[j].clone(),
                    (_, 0) => self.names[i].clone(),
                    _ => format!("{}*{}", self.names[i], other.names[j]),
                });
                degrees.push(self.degrees[i] + other.degrees[j]);
            }
        }
        let n = r * s;
        let mut table = vec![vec![vec![BigInt::zero(); n]; n]; n];
        for (i1, j1) in (0..r).flat_map(|i| (0..s).map(move |j| (i, j))) {
            for (i2, j2) in (0..r).flat_map(|i| (0..s).map(move |j| (i, j))) {
                for (k, a) in self.table[i1][i2].iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (l, b) in other.table[j1][j2].iter().enumerate() {
                        table[idx(i1, j1)][idx(i2, j2)][idx(k, l)] += a * b;
                    }
                }
            }
        }
        let lift = |coords: &[BigInt], left: bool| -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); n];
            for (k, c) in coords.iter().enumerate() {
                let at = if left { idx(k, 0) } else { idx(0, k) };
                out[at] = c.clone();
            }
            out
        };
        let mut generators: Vec<(String, Vec<BigInt>)> =
            self.generators.iter().map(|(g, c)| (g.clone(), lift(c, true))).collect();
        generators.extend(other.generators.iter().map(|(g, c)| (g.clone(), lift(c, false))));
        GradedAlgebra { top_degree: self.top_degree + other.top_degree, names, degrees, table, generators }
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn basis_degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Basis indices of degree `d`.
    pub fn basis_in_degree(&self, d: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|(g, _)| g.as_str()).collect()
    }
}

/// An element of a `GradedAlgebra`, as basis coordinates.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    algebra: Arc<GradedAlgebra>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra) && self.coeffs == other.coeffs
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn zero(algebra: &Arc<GradedAlgebra>) -> Self {
        AlgebraElement { algebra: algebra.clone(), coeffs: vec![BigInt::zero(); algebra.rank()] }
    }

    pub fn one(algebra: &Arc<GradedAlgebra>) -> Self {
        Self::integer(algebra, BigInt::one())
    }

    pub fn integer(algebra: &Arc<GradedAlgebra>, n: BigInt) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[0] = n;
        e
    }

    pub fn basis(algebra: &Arc<GradedAlgebra>, i: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[i] = BigInt::one();
        e
    }

    pub fn from_coeffs(algebra: &Arc<GradedAlgebra>, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != algebra.rank() {
            return Err(Error::DimensionMismatch { expected: algebra.rank(), found: coeffs.len() });
        }
        Ok(AlgebraElement { algebra: algebra.clone(), coeffs })
    }

    pub fn generator(algebra: &Arc<GradedAlgebra>, name: &str) -> Option<Self> {
        algebra
            .generators
            .iter()
            .find(|(g, _)| g == name)
            .map(|(_, c)| AlgebraElement { algebra: algebra.clone(), coeffs: c.clone() })
    }

    /// Parses an expression over the algebra's generator names.
    pub fn parse(algebra: &Arc<GradedAlgebra>, s: &str) -> Result<Self> {
        expr::parse_eval(s, &AlgebraTarget(algebra.clone()))
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(AlgebraElement { algebra: self.algebra.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        AlgebraElement { algebra: self.algebra.clone(), coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let r = self.algebra.rank();
        let mut out = vec![BigInt::zero(); r];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.algebra.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &ab * c;
                    }
                }
            }
        }
        Ok(AlgebraElement { algebra: self.algebra.clone(), coeffs: out })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.algebra);
        for _ in 0..k {
            acc = acc.mul(self).expect("same algebra");
        }
        acc
    }

    /// The component in degree `d`.
    pub fn part(&self, d: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if self.algebra.degrees[i] == d { c.clone() } else { BigInt::zero() })
            .collect();
        AlgebraElement { algebra: self.algebra.clone(), coeffs }
    }

    /// Degrees with a nonzero component, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.algebra.degrees[i])
            .collect();
        ds.sort();
        ds.dedup();
        ds
    }

    /// `Some(d)` if homogeneous of degree `d`, `None` for zero.
    pub fn homogeneous_degree(&self) -> Result<Option<usize>> {
        match self.degrees().as_slice() {
            [] => Ok(None),
            [d] => Ok(Some(*d)),
            _ => Err(Error::NotHomogeneous),
        }
    }

    /// Zero, or homogeneous of degree `d`.
    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.degrees().iter().all(|&x| x == d)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = &self.algebra.names[i];
            let mag = c.abs();
            let body = if i == 0 {
                mag.to_string()
            } else if mag.is_one() {
                name.clone()
            } else {
                format!("{mag}*{name}")
            };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                write!(f, "{body}")?;
                first = false;
            } else {
                write!(f, " {} {body}", if c.is_negative() { '-' } else { '+' })?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

struct AlgebraTarget(Arc<GradedAlgebra>);

impl Target for AlgebraTarget {
    type Value = AlgebraElement;
    fn constant(&self, n: &BigInt) -> AlgebraElement {
        AlgebraElement::integer(&self.0, n.clone())
    }
    fn ident(&self, name: &str) -> Result<AlgebraElement> {
        AlgebraElement::generator(&self.0, name).ok_or_else(|| Error::Parse(format!("unknown base class '{name}'")))
    }
    fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        a.add(b).expect("same algebra")
    }
    fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        a.mul(b).expect("same algebra")
    }
}

/// `δ: M → A¹X`, stored as the images of the standard basis of `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixingMap {
    algebra: Arc<GradedAlgebra>,
    images: Vec<AlgebraElement>,
}

impl MixingMap {
    pub fn new(algebra: &Arc<GradedAlgebra>, images: Vec<AlgebraElement>) -> Result<Self> {
        for (i, im) in images.iter().enumerate() {
            im.same_algebra(&AlgebraElement::zero(algebra))?;
            if !im.is_homogeneous_of(1) {
                return Err(Error::DegreeMismatch(format!("δ(e{}) = {im} is not of degree 1", i + 1)));
            }
        }
        Ok(MixingMap { algebra: algebra.clone(), images })
    }

    /// Rows are coefficients of `δ(eᵢ)` in the degree-1 basis.
    pub fn from_matrix(algebra: &Arc<GradedAlgebra>, rows: &[Vec<BigInt>]) -> Result<Self> {
        let deg1 = algebra.basis_in_degree(1);
        let images = rows
            .iter()
            .map(|row| {
                if row.len() != deg1.len() {
                    return Err(Error::DimensionMismatch { expected: deg1.len(), found: row.len() });
                }
                let mut e = AlgebraElement::zero(algebra);
                for (&b, c) in deg1.iter().zip(row) {
                    e.coeffs[b] = c.clone();
                }
                Ok(e)
            })
            .collect::<Result<_>>()?;
        Self::new(algebra, images)
    }

    /// The trivial mixing map of rank `n`.
    pub fn zero(algebra: &Arc<GradedAlgebra>, n: usize) -> Self {
        MixingMap { algebra: algebra.clone(), images: vec![AlgebraElement::zero(algebra); n] }
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn lattice_rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[AlgebraElement] {
        &self.images
    }

    pub fn delta(&self, m: &LatticeVector) -> Result<AlgebraElement> {
        if m.rank() != self.images.len() {
            return Err(Error::DimensionMismatch { expected: self.images.len(), found: m.rank() });
        }
        let mut acc = AlgebraElement::zero(&self.algebra);
        for (c, im) in m.entries().iter().zip(&self.images) {
            if !c.is_zero() {
                acc = acc.add(&im.scale(c))?;
            }
        }
        Ok(acc)
    }

    /// The ring map `Sym M → A*X` extending `delta`.
    pub fn delta_extend(&self, f: &Polynomial) -> Result<AlgebraElement> {
        if f.num_vars() != self.images.len() {
            return Err(Error::DimensionMismatch { expected: self.images.len(), found: f.num_vars() });
        }
        let mut acc = AlgebraElement::zero(&self.algebra);
        for (exps, c) in f.terms() {
            let mut t = AlgebraElement::integer(&self.algebra, c.clone());
            for (im, &e) in self.images.iter().zip(exps) {
                if e > 0 {
                    t = t.mul(&im.pow(e))?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }
}
