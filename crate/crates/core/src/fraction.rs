//! Rational functions whose denominators are products of linear forms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Polynomial;

/// `numerator / (content · Π formᵢ^kᵢ)` in canonical form: forms are
/// primitive with first nonzero coefficient positive, `content > 0`,
/// no form divides the numerator, and the numerator's content is
/// coprime to `content`. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearFraction {
    numerator: Polynomial,
    content: BigInt,
    forms: BTreeMap<Vec<BigInt>, u32>,
}

impl LinearFraction {
    pub fn from_polynomial(p: Polynomial) -> Self {
        LinearFraction { numerator: p, content: BigInt::one(), forms: BTreeMap::new() }.canonical()
    }

    pub fn zero(num_vars: usize) -> Self {
        Self::from_polynomial(Polynomial::zero(num_vars))
    }

    /// `numerator / (content · Π forms)`; forms need not be primitive or
    /// normalized. Panics on a zero form or zero content.
    pub fn new(numerator: Polynomial, content: BigInt, forms: &[Vec<BigInt>]) -> Self {
        assert!(!content.is_zero(), "zero denominator");
        let mut num = numerator;
        let mut c = content;
        if c.is_negative() {
            c = -c;
            num = num.neg();
        }
        let mut map: BTreeMap<Vec<BigInt>, u32> = BTreeMap::new();
        for f in forms {
            let g = f.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            assert!(!g.is_zero(), "zero linear form in denominator");
            let mut prim: Vec<BigInt> = f.iter().map(|x| x / &g).collect();
            let mut scale = g;
            if prim.iter().find(|x| !x.is_zero()).unwrap().is_negative() {
                prim = prim.into_iter().map(|x| -x).collect();
                scale = -scale;
            }
            c *= scale.abs();
            if scale.is_negative() {
                num = num.neg();
            }
            *map.entry(prim).or_default() += 1;
        }
        LinearFraction { numerator: num, content: c, forms: map }.canonical()
    }

    fn canonical(mut self) -> Self {
        let n = self.numerator.num_vars();
        if self.numerator.is_zero() {
            return LinearFraction { numerator: Polynomial::zero(n), content: BigInt::one(), forms: BTreeMap::new() };
        }
        let keys: Vec<Vec<BigInt>> = self.forms.keys().cloned().collect();
        for f in keys {
            while self.forms[&f] > 0 {
                match self.numerator.div_linear(&f) {
                    Some(q) => {
                        self.numerator = q;
                        *self.forms.get_mut(&f).unwrap() -= 1;
                    }
                    None => break,
                }
            }
            if self.forms[&f] == 0 {
                self.forms.remove(&f);
            }
        }
        let g = self.numerator.content().gcd(&self.content);
        if !g.is_one() {
            self.numerator = self.numerator.div_scalar(&g).expect("content divides");
            self.content /= g;
        }
        self
    }

    pub fn num_vars(&self) -> usize {
        self.numerator.num_vars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn content(&self) -> &BigInt {
        &self.content
    }

    pub fn forms(&self) -> &BTreeMap<Vec<BigInt>, u32> {
        &self.forms
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Degree of the numerator minus the number of denominator forms.
    pub fn degree(&self) -> Option<i64> {
        let den: i64 = self.forms.values().map(|&k| k as i64).sum();
        self.numerator.degree().map(|d| d as i64 - den)
    }

    /// The polynomial this fraction equals, if it has no denominator.
    pub fn to_polynomial(&self) -> Option<Polynomial> {
        if self.forms.is_empty() && self.content.is_one() {
            Some(self.numerator.clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let content = self.content.lcm(&other.content);
        let mut forms = self.forms.clone();
        for (f, &k) in &other.forms {
            let e = forms.entry(f.clone()).or_default();
            *e = (*e).max(k);
        }
        let lift = |x: &Self| -> Polynomial {
            let mut p = x.numerator.scale(&(&content / &x.content));
            for (f, &k) in &forms {
                let missing = k - x.forms.get(f).copied().unwrap_or(0);
                if missing > 0 {
                    p = p.mul(&Polynomial::linear(f).pow(missing));
                }
            }
            p
        };
        let numerator = lift(self).add(&lift(other));
        LinearFraction { numerator, content, forms }.canonical()
    }

    pub fn neg(&self) -> Self {
        LinearFraction { numerator: self.numerator.neg(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut forms = self.forms.clone();
        for (f, &k) in &other.forms {
            *forms.entry(f.clone()).or_default() += k;
        }
        LinearFraction {
            numerator: self.numerator.mul(&other.numerator),
            content: &self.content * &other.content,
            forms,
        }
        .canonical()
    }

    pub fn mul_polynomial(&self, p: &Polynomial) -> Self {
        self.mul(&Self::from_polynomial(p.clone()))
    }
}

impl fmt::Display for LinearFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.forms.is_empty() && self.content.is_one() {
            return write!(f, "{}", self.numerator);
        }
        let mut factors: Vec<String> = Vec::new();
        if !self.content.is_one() {
            factors.push(self.content.to_string());
        }
        let alone = factors.is_empty() && self.forms.len() == 1;
        // Monomial forms first, each group by descending coefficients.
        let mut forms: Vec<(&Vec<BigInt>, &u32)> = self.forms.iter().collect();
        forms.sort_by_key(|(form, _)| (form.iter().filter(|x| !x.is_zero()).count(), std::cmp::Reverse(*form)));
        for (form, &k) in forms {
            let p = Polynomial::linear(form);
            let body = if p.len() > 1 && !(alone && k == 1) { format!("({p})") } else { p.to_string() };
            factors.push(if k == 1 { body } else { format!("{body}^{k}") });
        }
        let num = if self.numerator.len() > 1 { format!("({})", self.numerator) } else { self.numerator.to_string() };
        write!(f, "{num} / ({})", factors.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&v| BigInt::from(v)).collect()
    }

    fn one() -> Polynomial {
        Polynomial::one(2)
    }

    #[test]
    fn canonical_form() {
        let a = LinearFraction::new(one(), 1.into(), &[form(&[-1, 1]), form(&[0, 2])]);
        let b = LinearFraction::new(Polynomial::constant(2, (-1).into()), 2.into(), &[form(&[1, -1]), form(&[0, 1])]);
        assert_eq!(a, b);
        assert_eq!(*b.content(), BigInt::from(2));
        assert_eq!(b.to_string(), "-1 / (2*x2*(x1 - x2))");
        let c = LinearFraction::new(Polynomial::parse(2, "x1^2 - x2^2").unwrap(), 1.into(), &[form(&[1, -1])]);
        assert_eq!(c.to_polynomial(), Some(Polynomial::parse(2, "x1 + x2").unwrap()));
    }

    #[test]
    fn subdivision_sum() {
        // 1/((x1-x2)x2) + 1/((2x1-x2)(x2-x1)) = 2/(x2(2x1-x2))
        let a = LinearFraction::new(one(), 1.into(), &[form(&[1, -1]), form(&[0, 1])]);
        let b = LinearFraction::new(one(), 1.into(), &[form(&[2, -1]), form(&[-1, 1])]);
        let expected =
            LinearFraction::new(Polynomial::constant(2, 2.into()), 1.into(), &[form(&[0, 1]), form(&[2, -1])]);
        assert_eq!(a.add(&b), expected);
        assert_eq!(a.add(&b).degree(), Some(-2));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn products() {
        let a = LinearFraction::new(one(), 1.into(), &[form(&[0, 1])]);
        let x2 = Polynomial::parse(2, "x2").unwrap();
        assert_eq!(a.mul_polynomial(&x2).to_polynomial(), Some(one()));
    }
}
