//! Rational polyhedra as inequality systems, decided exactly by
//! Fourier–Motzkin elimination.

use num_traits::{Signed, Zero};

use crate::qlinalg::{self, Q};

/// `a · x ≤ b`, or `a · x < b` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub a: Vec<Q>,
    pub b: Q,
    pub strict: bool,
}

impl Inequality {
    pub fn new(a: Vec<Q>, b: Q) -> Self {
        Inequality { a, b, strict: false }
    }

    fn normalized(mut self) -> Self {
        // Scale so that the first nonzero coefficient has absolute value one.
        if let Some(p) = self.a.iter().find(|x| !x.is_zero()).cloned() {
            let s = p.abs().recip();
            for x in self.a.iter_mut() {
                *x = &*x * &s;
            }
            self.b = &self.b * &s;
        }
        self
    }
}

/// `{x : eqs · x = eq_rhs, ineqs hold}` with its dimension cached
/// (`-1` when empty).
#[derive(Clone, Debug)]
pub struct Polyhedron {
    ambient_rank: usize,
    equalities: Vec<(Vec<Q>, Q)>,
    inequalities: Vec<Inequality>,
    dim: i64,
}

impl Polyhedron {
    pub fn new(ambient_rank: usize, equalities: Vec<(Vec<Q>, Q)>, inequalities: Vec<Inequality>) -> Self {
        let dim = compute_dim(ambient_rank, &equalities, &inequalities);
        Polyhedron { ambient_rank, equalities, inequalities, dim }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }

    /// Nonempty and zero-dimensional.
    pub fn is_point(&self) -> bool {
        self.dim == 0
    }

    pub fn equalities(&self) -> &[(Vec<Q>, Q)] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        let dot = |a: &[Q]| -> Q { a.iter().zip(x).map(|(p, q)| p * q).sum() };
        self.equalities.iter().all(|(a, b)| &dot(a) == b)
            && self.inequalities.iter().all(|c| {
                let l = dot(&c.a);
                if c.strict {
                    l < c.b
                } else {
                    l <= c.b
                }
            })
    }

    /// Adds constraints and recomputes the dimension.
    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        let mut eqs = self.equalities.clone();
        eqs.extend(other.equalities.iter().cloned());
        let mut ineqs = self.inequalities.clone();
        ineqs.extend(other.inequalities.iter().cloned());
        Polyhedron::new(self.ambient_rank, eqs, ineqs)
    }
}

fn compute_dim(n: usize, eqs: &[(Vec<Q>, Q)], ineqs: &[Inequality]) -> i64 {
    if !feasible(n, eqs, ineqs) {
        return -1;
    }
    let mut hull: Vec<Vec<Q>> = eqs.iter().map(|(a, _)| a.clone()).collect();
    for (i, c) in ineqs.iter().enumerate() {
        if c.strict {
            continue;
        }
        let mut probe = ineqs.to_vec();
        probe[i].strict = true;
        if !feasible(n, eqs, &probe) {
            hull.push(c.a.clone());
        }
    }
    (n - qlinalg::rank(&hull)) as i64
}

/// Exact feasibility of a mixed system of equalities and (strict)
/// inequalities.
pub fn feasible(n: usize, eqs: &[(Vec<Q>, Q)], ineqs: &[Inequality]) -> bool {
    let mut eqs: Vec<(Vec<Q>, Q)> = eqs.to_vec();
    let mut ineqs: Vec<Inequality> = ineqs.to_vec();

    // Substitute away equalities first.
    while let Some(pos) = eqs.iter().position(|(a, _)| a.iter().any(|x| !x.is_zero())) {
        let (a, b) = eqs.swap_remove(pos);
        let j = a.iter().position(|x| !x.is_zero()).unwrap();
        let pivot = a[j].clone();
        for (c, d) in eqs.iter_mut() {
            if !c[j].is_zero() {
                let f = &c[j] / &pivot;
                for k in 0..n {
                    c[k] -= &f * &a[k];
                }
                *d -= &f * &b;
            }
        }
        for ineq in ineqs.iter_mut() {
            if !ineq.a[j].is_zero() {
                let f = &ineq.a[j] / &pivot;
                for k in 0..n {
                    ineq.a[k] -= &f * &a[k];
                }
                ineq.b -= &f * &b;
            }
        }
    }
    if eqs.iter().any(|(_, b)| !b.is_zero()) {
        return false;
    }

    for j in 0..n {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for c in ineqs.drain(..) {
            if c.a[j].is_positive() {
                pos.push(c);
            } else if c.a[j].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for q in &neg {
                let alpha = p.a[j].clone();
                let beta = -q.a[j].clone();
                let a: Vec<Q> = (0..n).map(|k| &beta * &p.a[k] + &alpha * &q.a[k]).collect();
                let b = &beta * &p.b + &alpha * &q.b;
                rest.push(Inequality { a, b, strict: p.strict || q.strict }.normalized());
            }
        }
        // Trivial constraints are decided immediately.
        let mut kept: Vec<Inequality> = Vec::new();
        for c in rest {
            if c.a.iter().all(Zero::is_zero) {
                let ok = if c.strict { c.b.is_positive() } else { !c.b.is_negative() };
                if !ok {
                    return false;
                }
                continue;
            }
            if !kept.contains(&c) {
                kept.push(c);
            }
        }
        ineqs = kept;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::qi;

    fn ineq(a: &[i64], b: i64) -> Inequality {
        Inequality::new(a.iter().map(|&x| qi(x)).collect(), qi(b))
    }

    #[test]
    fn square_is_two_dimensional() {
        let p =
            Polyhedron::new(2, vec![], vec![ineq(&[1, 0], 1), ineq(&[-1, 0], 0), ineq(&[0, 1], 1), ineq(&[0, -1], 0)]);
        assert_eq!(p.dim(), 2);
    }

    #[test]
    fn segment_and_point() {
        // x + y ≤ 0, x ≥ 0, y ≥ 0 is the origin.
        let p = Polyhedron::new(2, vec![], vec![ineq(&[1, 1], 0), ineq(&[-1, 0], 0), ineq(&[0, -1], 0)]);
        assert!(p.is_point());
        // 0 ≤ x ≤ 1 on the line y = x.
        let s = Polyhedron::new(2, vec![(vec![qi(1), qi(-1)], qi(0))], vec![ineq(&[1, 0], 1), ineq(&[-1, 0], 0)]);
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn infeasible() {
        let p = Polyhedron::new(1, vec![], vec![ineq(&[1], -1), ineq(&[-1], 0)]);
        assert!(p.is_empty());
        let p = Polyhedron::new(1, vec![(vec![qi(0)], qi(1))], vec![]);
        assert!(p.is_empty());
    }

    #[test]
    fn strictness_matters() {
        let mut c = ineq(&[1], 0);
        c.strict = true;
        assert!(!feasible(1, &[], &[c, ineq(&[-1], 0)]));
        assert!(feasible(1, &[], &[ineq(&[1], 0), ineq(&[-1], 0)]));
    }
}
