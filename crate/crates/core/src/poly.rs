//! Integer polynomials in `Sym M`, in variables `x1, …, xn` dual to the
//! standard basis of `N`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::{self, Target};
use crate::qlinalg::{self, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: BigInt) -> Self {
        Self::monomial(num_vars, vec![0; num_vars], c)
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigInt::one())
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::monomial(num_vars, e, BigInt::one())
    }

    pub fn monomial(num_vars: usize, exps: Vec<u32>, c: BigInt) -> Self {
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// `Σ coeffs[i]·x_{i+1}`.
    pub fn linear(coeffs: &[BigInt]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    /// Parses an expression in `x1, …, xn`.
    pub fn parse(num_vars: usize, s: &str) -> Result<Self> {
        expr::parse_eval(s, &PolyTarget(num_vars))
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Zero, or every term of total degree `d`.
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars, "polynomials in different rings");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.num_vars);
        }
        Polynomial { num_vars: self.num_vars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect() }
    }

    /// Exact division of every coefficient by `k`.
    pub fn div_scalar(&self, k: &BigInt) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            terms.insert(e.clone(), q);
        }
        Some(Polynomial { num_vars: self.num_vars, terms })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars, "polynomials in different rings");
        let mut out = Self::zero(self.num_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.num_vars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `xᵢ ↦ images[i]`; all images share a ring.
    pub fn compose(&self, images: &[Polynomial]) -> Self {
        assert_eq!(images.len(), self.num_vars);
        let target = images.first().map_or(0, |p| p.num_vars);
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (p, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&p.pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Pulls back along the linear map `ℤᵏ → ℤⁿ` whose columns are
    /// `basis`: `xᵢ ↦ Σⱼ basis[j][i] tⱼ`.
    pub fn restrict_to_span(&self, basis: &[Vec<BigInt>]) -> Self {
        let k = basis.len();
        let images: Vec<Polynomial> = (0..self.num_vars)
            .map(|i| Polynomial::linear(&basis.iter().map(|b| b[i].clone()).collect::<Vec<_>>()))
            .map(|p| if k == 0 { Polynomial::zero(0) } else { p })
            .collect();
        if self.num_vars == 0 {
            return Polynomial { num_vars: k, terms: self.terms.clone() };
        }
        self.compose(&images)
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(x).fold(qlinalg::q(c), |acc, (&k, xi)| acc * num_traits::pow(xi.clone(), k as usize))
            })
            .sum()
    }

    /// Exact quotient by a nonzero linear form, or `None` if it does not
    /// divide. Long division with the form's first variable ranked above
    /// the others; by Gauss's lemma no denominators arise for primitive
    /// forms.
    pub fn div_linear(&self, form: &[BigInt]) -> Option<Self> {
        let n = self.num_vars;
        assert_eq!(form.len(), n);
        let p = form.iter().position(|c| !c.is_zero())?;
        let lead = &form[p];
        let key = |e: &Vec<u32>| -> (u32, Vec<u32>) { (e[p], e.clone()) };
        let mut rem = self.clone();
        let mut quot = Self::zero(n);
        while let Some((e, c)) = rem.terms.iter().max_by_key(|(e, _)| key(e)).map(|(e, c)| (e.clone(), c.clone())) {
            if e[p] == 0 {
                return None;
            }
            let (qc, r) = c.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            let mut qe = e.clone();
            qe[p] -= 1;
            let qt = Self::monomial(n, qe, qc);
            rem = rem.sub(&qt.mul(&Self::linear(form)));
            quot = quot.add(&qt);
        }
        Some(quot)
    }

    fn sorted_terms(&self) -> Vec<(&Vec<u32>, &BigInt)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        ts
    }

    /// Number of terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("x{}", i + 1) } else { format!("x{}^{x}", i + 1) })
                .collect();
            let mag = c.abs();
            let body = if mono.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                mono.join("*")
            } else {
                format!("{mag}*{}", mono.join("*"))
            };
            if k == 0 {
                write!(f, "{}{body}", if c.is_negative() { "-" } else { "" })?;
            } else {
                write!(f, " {} {body}", if c.is_negative() { '-' } else { '+' })?;
            }
        }
        Ok(())
    }
}

struct PolyTarget(usize);

impl Target for PolyTarget {
    type Value = Polynomial;
    fn constant(&self, n: &BigInt) -> Polynomial {
        Polynomial::constant(self.0, n.clone())
    }
    fn ident(&self, name: &str) -> Result<Polynomial> {
        name.strip_prefix('x')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&i| i >= 1 && i <= self.0)
            .map(|i| Polynomial::var(self.0, i - 1))
            .ok_or_else(|| Error::Parse(format!("unknown variable '{name}' (expected x1..x{})", self.0)))
    }
    fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.add(b)
    }
    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.mul(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(2, s).unwrap()
    }

    fn form(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn arithmetic_and_display() {
        assert_eq!(p("(x1 - x2)^2").to_string(), "x1^2 - 2*x1*x2 + x2^2");
        assert_eq!(p("x1 - x1").to_string(), "0");
        assert_eq!(p("-1").to_string(), "-1");
        assert_eq!(p("3 + x2").to_string(), "x2 + 3");
        assert!(p("x1*x2 + x2^2").is_homogeneous_of(2));
        assert!(!p("x1 + 1").is_homogeneous_of(1));
        assert!(Polynomial::parse(2, "x3").is_err());
    }

    #[test]
    fn division_by_linear_forms() {
        let f = p("x1^2 - x2^2");
        assert_eq!(f.div_linear(&form(&[1, -1])).unwrap(), p("x1 + x2"));
        assert_eq!(f.div_linear(&form(&[0, 1])), None);
        assert_eq!(p("2*x1*x2 - x2^2").div_linear(&form(&[2, -1])).unwrap(), p("x2"));
        assert_eq!(p("x1").div_linear(&form(&[2, -1])), None);
        assert!(Polynomial::zero(2).div_linear(&form(&[1, 1])).unwrap().is_zero());
    }

    #[test]
    fn restriction() {
        // x1 - x2 vanishes on the span of (1,1).
        assert!(p("x1 - x2").restrict_to_span(&[form(&[1, 1])]).is_zero());
        assert_eq!(p("x2^2").restrict_to_span(&[form(&[0, 1])]), Polynomial::parse(1, "x1^2").unwrap());
        assert_eq!(p("x2 + 5").restrict_to_span(&[]), Polynomial::constant(0, 5.into()));
    }
}
