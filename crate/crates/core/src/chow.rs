//! Presentations of Chow homology by stratum classes, and a Chow ring
//! calculator for smooth complete fibres.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgebraElement, MixingMap};
use crate::error::{Error, Result};
use crate::expr::{self, Target};
use crate::fan::{ConeId, Fan};
use crate::lattice::{perp_basis, LatticeVector};
use crate::minkowski::{check_balancing, MinkowskiWeight};
use crate::poly::Polynomial;
use crate::qlinalg::{self, Q};

/// One relation `Σ ⟨m, n_{στ}⟩ [Y(σ)] = (δ(m) [+ m]) · [Y(τ)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub tau: ConeId,
    pub m: LatticeVector,
    pub left: Vec<(ConeId, BigInt)>,
    pub right: AlgebraElement,
    /// The character `m` as a linear form, for the equivariant version.
    pub equivariant_part: Option<Polynomial>,
}

#[derive(Clone, Debug)]
pub struct Presentation {
    fan: Arc<Fan>,
    /// Each cone with the homological degree `dim X + codim σ` of `[Y(σ)]`.
    pub generators: Vec<(ConeId, usize)>,
    pub relations: Vec<Relation>,
}

/// The name of `[Y(σ)]`: `D<i>` for rays, `Y(<labels>)` otherwise and
/// `1` for the zero cone.
pub fn stratum_name(fan: &Fan, sigma: ConeId) -> String {
    match fan.ray_indices(sigma) {
        [] => "1".to_string(),
        [r] => format!("D{}", r + 1),
        _ => format!("Y({})", fan.label(sigma)),
    }
}

fn class_term(c: &AlgebraElement) -> String {
    let s = c.to_string();
    let bare = !s.contains(' ') && !s.starts_with('-');
    if c.is_zero() {
        "0".into()
    } else if bare {
        format!("p*{s}")
    } else {
        format!("p*({s})")
    }
}

impl Relation {
    pub fn render(&self, fan: &Fan) -> String {
        let mut left = String::new();
        for (sigma, c) in &self.left {
            let name = stratum_name(fan, *sigma);
            let mag = c.abs();
            let body = if mag.is_one() { name } else { format!("{mag}*{name}") };
            if left.is_empty() {
                left = format!("{}{body}", if c.is_negative() { "-" } else { "" });
            } else {
                left += &format!(" {} {body}", if c.is_negative() { '-' } else { '+' });
            }
        }
        if left.is_empty() {
            left = "0".into();
        }
        let (coefficient, compound) = match &self.equivariant_part {
            None => (class_term(&self.right), false),
            Some(m) if self.right.is_zero() => (m.to_string(), m.len() > 1),
            Some(m) if m.is_zero() => (class_term(&self.right), false),
            Some(m) => {
                let ms = m.to_string();
                let joined = match ms.strip_prefix('-') {
                    Some(rest) => format!("{} - {rest}", class_term(&self.right)),
                    None => format!("{} + {ms}", class_term(&self.right)),
                };
                (joined, true)
            }
        };
        let right = if coefficient == "0" || fan.dim(self.tau) == 0 {
            coefficient
        } else if compound {
            format!("({coefficient}) * {}", stratum_name(fan, self.tau))
        } else {
            format!("{coefficient} * {}", stratum_name(fan, self.tau))
        };
        format!("{left} = {right}")
    }
}

impl Presentation {
    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    /// Relations at `tau`, rendered.
    pub fn rendered_at(&self, tau: ConeId) -> Vec<String> {
        self.relations.iter().filter(|r| r.tau == tau).map(|r| r.render(&self.fan)).collect()
    }

    /// The same presentation with equivariant parts dropped.
    pub fn non_equivariant(&self) -> Presentation {
        let relations = self.relations.iter().map(|r| Relation { equivariant_part: None, ..r.clone() }).collect();
        Presentation { fan: self.fan.clone(), generators: self.generators.clone(), relations }
    }
}

fn presentation(fan: &Arc<Fan>, mixing: &MixingMap, equivariant: bool) -> Result<Presentation> {
    if mixing.lattice_rank() != fan.ambient_rank() {
        return Err(Error::DimensionMismatch { expected: fan.ambient_rank(), found: mixing.lattice_rank() });
    }
    let top = mixing.algebra().top_degree();
    let generators = fan.cone_ids().map(|s| (s, top + fan.codim(s))).collect();
    let mut relations = Vec::new();
    for tau in fan.cone_ids() {
        let up = fan.neighbors_up(tau);
        let normals: Vec<(ConeId, LatticeVector)> =
            up.iter().map(|&s| fan.normal_vector(tau, s).map(|n| (s, n))).collect::<Result<_>>()?;
        for m in perp_basis(&fan.lattice(tau)) {
            let left = normals.iter().map(|(s, n)| (*s, m.dot(n))).filter(|(_, c)| !c.is_zero()).collect();
            let right = mixing.delta(&m)?;
            let equivariant_part = equivariant.then(|| Polynomial::linear(m.entries()));
            relations.push(Relation { tau, m, left, right, equivariant_part });
        }
    }
    Ok(Presentation { fan: fan.clone(), generators, relations })
}

/// Generators `[Y(σ)]` and relations `⟨m, n_{στ}⟩ [Y(σ)] = δ(m)·[Y(τ)]`.
pub fn homology_presentation(fan: &Arc<Fan>, mixing: &MixingMap) -> Result<Presentation> {
    presentation(fan, mixing, false)
}

/// As `homology_presentation` with right-hand sides `(δ(m) + m)·[Y(τ)]`.
pub fn equivariant_presentation(fan: &Arc<Fan>, mixing: &MixingMap) -> Result<Presentation> {
    presentation(fan, mixing, true)
}

/// `Σ p*c_σ ∩ [Y(σ)]`, with zero coefficients dropped.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    terms: BTreeMap<ConeId, AlgebraElement>,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(s, c)| (s, c.to_string()))).finish()
    }
}

impl RingElement {
    pub fn terms(&self) -> &BTreeMap<ConeId, AlgebraElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, sigma: ConeId, c: AlgebraElement) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&sigma) {
            Some(old) => old.add(&c).expect("same algebra"),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(sigma, sum);
        }
    }
}

/// Products of fibrewise divisors and base classes on a smooth complete
/// fibre, reduced to stratum classes.
#[derive(Clone, Debug)]
pub struct ChowRing {
    fan: Arc<Fan>,
    mixing: Arc<MixingMap>,
}

impl ChowRing {
    pub fn new(fan: Arc<Fan>, mixing: Arc<MixingMap>) -> Result<Self> {
        if !fan.is_smooth() || !fan.is_complete() {
            return Err(Error::OracleRequiresSmoothComplete);
        }
        if mixing.lattice_rank() != fan.ambient_rank() {
            return Err(Error::DimensionMismatch { expected: fan.ambient_rank(), found: mixing.lattice_rank() });
        }
        Ok(ChowRing { fan, mixing })
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn zero(&self) -> RingElement {
        RingElement { terms: BTreeMap::new() }
    }

    /// `p*c ∩ [Y]`.
    pub fn base(&self, c: &AlgebraElement) -> RingElement {
        self.base_on(self.fan.zero_cone(), c)
    }

    /// `p*c ∩ [Y(σ)]`.
    pub fn base_on(&self, sigma: ConeId, c: &AlgebraElement) -> RingElement {
        let mut r = self.zero();
        r.insert_add(sigma, c.clone());
        r
    }

    pub fn one(&self) -> RingElement {
        self.base(&AlgebraElement::one(self.mixing.algebra()))
    }

    pub fn stratum(&self, sigma: ConeId) -> RingElement {
        self.base_on(sigma, &AlgebraElement::one(self.mixing.algebra()))
    }

    /// `D_ρ` for the 0-based ray index `ray`.
    pub fn divisor(&self, ray: usize) -> Result<RingElement> {
        Ok(self.stratum(self.fan.require(&[ray])?))
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let mut out = a.clone();
        for (s, c) in &b.terms {
            out.insert_add(*s, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &AlgebraElement, a: &RingElement) -> RingElement {
        let mut out = self.zero();
        for (s, x) in &a.terms {
            out.insert_add(*s, c.mul(x).expect("same algebra"));
        }
        out
    }

    /// `D_ρ · [Y(σ)]`. When `ρ ∈ σ` the divisor is replaced using
    /// `D_ρ = p*δ(m) - Σ_{ρ' ≠ ρ} ⟨m, ρ'⟩ D_{ρ'}` for `m` dual to `ρ` on `σ`.
    fn divisor_times_stratum(&self, ray: usize, sigma: ConeId) -> RingElement {
        let fan = &self.fan;
        let rays = fan.ray_indices(sigma);
        let one = AlgebraElement::one(self.mixing.algebra());
        if !rays.contains(&ray) {
            let mut union = rays.to_vec();
            union.push(ray);
            return match fan.find(&union) {
                Some(t) => self.base_on(t, &one),
                None => self.zero(),
            };
        }
        let m = self.dual_character(ray, sigma);
        let mut out = self.base_on(sigma, &self.mixing.delta(&m).expect("rank checked"));
        for (other, r) in fan.rays().iter().enumerate() {
            if rays.contains(&other) {
                continue;
            }
            let c = m.dot(r);
            if c.is_zero() {
                continue;
            }
            let mut union = rays.to_vec();
            union.push(other);
            if let Some(t) = fan.find(&union) {
                out.insert_add(t, one.scale(&-c));
            }
        }
        out
    }

    /// `m` with `⟨m, ρ⟩ = 1` and `⟨m, ρ'⟩ = 0` for the other rays of a
    /// maximal cone containing `σ`.
    fn dual_character(&self, ray: usize, sigma: ConeId) -> LatticeVector {
        let fan = &self.fan;
        let max = fan.maximal_cones().into_iter().find(|&t| fan.is_face_of(sigma, t)).expect("complete fan");
        let rays = fan.ray_indices(max);
        let basis: Vec<LatticeVector> = rays.iter().map(|&r| fan.rays()[r].clone()).collect();
        // Smooth: the rays form a basis, so the dual basis is integral.
        let k = rays.iter().position(|&r| r == ray).expect("ray in cone");
        let target: Vec<Q> = (0..basis.len()).map(|i| qlinalg::qi((i == k) as i64)).collect();
        let rows: Vec<Vec<Q>> = basis.iter().map(|b| b.to_rational()).collect();
        // Solve rowsᵀ-system: ⟨m, b_i⟩ = target_i, i.e. Bm = target.
        let cols: Vec<Vec<Q>> = (0..basis.len()).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
        let m = qlinalg::solve_combination(&cols, &target).expect("basis is invertible");
        LatticeVector::new(m.iter().map(|x| x.to_integer()).collect())
    }

    pub fn mul_divisor(&self, ray: usize, a: &RingElement) -> RingElement {
        let mut out = self.zero();
        for (s, c) in &a.terms {
            out = self.add(&out, &self.scale(c, &self.divisor_times_stratum(ray, *s)));
        }
        out
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let mut out = self.zero();
        for (s, c) in &a.terms {
            // [Y(σ)] = Π_{ρ ∈ σ} D_ρ on a smooth fan.
            let mut t = self.scale(c, b);
            for &r in self.fan.ray_indices(*s) {
                t = self.mul_divisor(r, &t);
            }
            out = self.add(&out, &t);
        }
        out
    }

    /// Reduces the product of the given divisors and base class.
    pub fn reduce(&self, base: &AlgebraElement, rays: &[usize]) -> Result<RingElement> {
        let mut t = self.base(base);
        for &r in rays {
            if r >= self.fan.rays().len() {
                return Err(Error::ConeNotInFan(format!("D{}", r + 1)));
            }
            t = self.mul_divisor(r, &t);
        }
        Ok(t)
    }

    /// Parses an expression over `D1..Dk` and the base generators.
    pub fn parse(&self, s: &str) -> Result<RingElement> {
        expr::parse_eval(s, self)
    }

    /// Homogeneous degree `k` with `p*c ∩ [Y(σ)] ∈ A^{deg c + codim_Y Y(σ)}`.
    pub fn degree(&self, a: &RingElement) -> Result<Option<usize>> {
        let mut deg = None;
        for (s, c) in &a.terms {
            for d in c.degrees() {
                let k = d + self.fan.dim(*s);
                match deg {
                    None => deg = Some(k),
                    Some(k0) if k0 != k => return Err(Error::NotHomogeneous),
                    _ => {}
                }
            }
        }
        Ok(deg)
    }

    /// `p_*` of a reduced element: coefficients on maximal cones.
    pub fn pushforward(&self, a: &RingElement) -> AlgebraElement {
        let mut acc = AlgebraElement::zero(self.mixing.algebra());
        for (s, c) in &a.terms {
            if self.fan.codim(*s) == 0 {
                acc = acc.add(c).expect("same algebra");
            }
        }
        acc
    }

    /// `W(σ) = p_*(γ · [Y(σ)])`, a codimension-`k` weight for `γ` of degree `k`.
    pub fn poincare_dual_mw(&self, gamma: &RingElement) -> Result<MinkowskiWeight> {
        let k = self.degree(gamma)?.unwrap_or(0);
        let mut values = BTreeMap::new();
        for sigma in self.fan.cone_ids() {
            let v = self.pushforward(&self.mul(gamma, &self.stratum(sigma)));
            values.insert(sigma, v);
        }
        let w = MinkowskiWeight::new(self.fan.clone(), self.mixing.clone(), k, values)?;
        let report = check_balancing(&w)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::Unbalanced(format!("cone {}, m = {}", self.fan.label(v.tau), v.m)));
        }
        Ok(w)
    }

    pub fn render(&self, a: &RingElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        a.terms
            .iter()
            .map(|(s, c)| {
                let name = stratum_name(&self.fan, *s);
                let cs = c.to_string();
                match (cs.as_str(), name.as_str()) {
                    (_, "1") => class_term(c),
                    ("1", _) => name,
                    _ => format!("{} * {name}", class_term(c)),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl Target for ChowRing {
    type Value = RingElement;
    fn constant(&self, n: &BigInt) -> RingElement {
        self.base(&AlgebraElement::integer(self.mixing.algebra(), n.clone()))
    }
    fn ident(&self, name: &str) -> Result<RingElement> {
        if let Some(i) = name.strip_prefix('D').and_then(|s| s.parse::<usize>().ok()) {
            if i >= 1 && i <= self.fan.rays().len() {
                return self.divisor(i - 1);
            }
        }
        AlgebraElement::generator(self.mixing.algebra(), name)
            .map(|c| self.base(&c))
            .ok_or_else(|| Error::Parse(format!("unknown class '{name}'")))
    }
    fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        ChowRing::add(self, a, b)
    }
    fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        ChowRing::mul(self, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::tests::{f1_setup, w1, w2};
    use crate::minkowski::unit_weight;

    #[test]
    fn example_relations() {
        let (fan, mix) = f1_setup();
        let p = homology_presentation(&fan, &mix).unwrap();
        let at0 = p.rendered_at(fan.zero_cone());
        assert_eq!(at0, ["D1 + D2 - D4 = p*a1", "D2 + D3 - D4 = p*a2"]);
        let e = equivariant_presentation(&fan, &mix).unwrap();
        assert_eq!(e.rendered_at(fan.zero_cone()), ["D1 + D2 - D4 = p*a1 + x1", "D2 + D3 - D4 = p*a2 + x2"]);
        assert_eq!(e.non_equivariant().relations, p.relations);
        let tau2 = fan.find(&[1]).unwrap();
        assert_eq!(p.relations.iter().filter(|r| r.tau == tau2).count(), 1);
    }

    #[test]
    fn point_fan_presentation() {
        let fan = Arc::new(Fan::new(0, vec![], &[]).unwrap());
        let alg = Arc::new(crate::algebra::GradedAlgebra::point());
        let mix = MixingMap::zero(&alg, 0);
        let p = homology_presentation(&fan, &mix).unwrap();
        assert_eq!(p.generators.len(), 1);
        assert!(p.relations.is_empty());
    }

    #[test]
    fn reductions() {
        let (fan, mix) = f1_setup();
        let ring = ChowRing::new(fan.clone(), mix.clone()).unwrap();
        let s12 = fan.find(&[0, 1]).unwrap();
        assert_eq!(ring.parse("D1*D2").unwrap(), ring.stratum(s12));
        assert!(ring.parse("D1*D3").unwrap().is_zero());
        let got = ring.parse("D1^2*D2").unwrap();
        let expected = ring.base_on(s12, &AlgebraElement::parse(mix.algebra(), "a1 - a2").unwrap());
        assert_eq!(got, expected);
        assert_eq!(ring.render(&got), "p*(a1 - a2) * Y(1,2)");
        assert_eq!(ring.parse("D2*D1^2").unwrap(), got);
    }

    #[test]
    fn poincare_duals() {
        let (fan, mix) = f1_setup();
        let ring = ChowRing::new(fan.clone(), mix.clone()).unwrap();
        assert_eq!(ring.poincare_dual_mw(&ring.parse("D1").unwrap()).unwrap(), w1(&fan, &mix));
        assert_eq!(ring.poincare_dual_mw(&ring.parse("D2").unwrap()).unwrap(), w2(&fan, &mix));
        assert_eq!(ring.poincare_dual_mw(&ring.one()).unwrap(), unit_weight(fan, mix).unwrap());
    }

    #[test]
    fn requires_smooth_complete() {
        let (_, mix) = f1_setup();
        let fan = Fan::new(2, vec![LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[1, 2])], &[vec![0, 1]])
            .unwrap();
        assert!(matches!(ChowRing::new(Arc::new(fan), mix), Err(Error::OracleRequiresSmoothComplete)));
    }
}
