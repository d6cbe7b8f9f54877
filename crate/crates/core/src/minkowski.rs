//! Minkowski weights with values in the base Chow ring.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{AlgebraElement, GradedAlgebra, MixingMap};
use crate::error::{Error, Result};
use crate::fan::{self, ConeId, Fan};
use crate::lattice::{lattice_index, perp_basis, LatticeIndex, LatticeVector, Sublattice};

/// A codimension-`k` Minkowski weight. Values are stored sparsely and
/// cohomologically: `W(σ)` has degree `k - codim σ`.
#[derive(Clone)]
pub struct MinkowskiWeight {
    fan: Arc<Fan>,
    mixing: Arc<MixingMap>,
    codim: usize,
    values: BTreeMap<ConeId, AlgebraElement>,
}

impl std::fmt::Debug for MinkowskiWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "codim {} ", self.codim)?;
        f.debug_map().entries(self.values.iter().map(|(s, v)| (self.fan.label(*s), v.to_string()))).finish()
    }
}

impl PartialEq for MinkowskiWeight {
    fn eq(&self, other: &Self) -> bool {
        self.codim == other.codim && self.values == other.values
    }
}

impl Eq for MinkowskiWeight {}

/// Required cohomological degree of `W(σ)`, or `None` if `W(σ)` must vanish.
fn value_degree(fan: &Fan, alg: &GradedAlgebra, codim: usize, sigma: ConeId) -> Option<usize> {
    let c = fan.codim(sigma);
    if c > codim || codim - c > alg.top_degree() {
        None
    } else {
        Some(codim - c)
    }
}

impl MinkowskiWeight {
    /// Validates degrees; balancing is checked separately.
    pub fn new(
        fan: Arc<Fan>,
        mixing: Arc<MixingMap>,
        codim: usize,
        values: BTreeMap<ConeId, AlgebraElement>,
    ) -> Result<Self> {
        if mixing.lattice_rank() != fan.ambient_rank() {
            return Err(Error::DimensionMismatch { expected: fan.ambient_rank(), found: mixing.lattice_rank() });
        }
        let alg = mixing.algebra().clone();
        let mut kept = BTreeMap::new();
        for (sigma, val) in values {
            if sigma >= fan.len() {
                return Err(Error::ConeNotInFan(format!("#{sigma}")));
            }
            if val.algebra() != &alg && **val.algebra() != *alg {
                return Err(Error::AlgebraMismatch);
            }
            if val.is_zero() {
                continue;
            }
            match value_degree(&fan, &alg, codim, sigma) {
                Some(d) if val.is_homogeneous_of(d) => {}
                expected => {
                    return Err(Error::DegreeMismatch(format!(
                        "value {val} on cone {} must be {}",
                        fan.label(sigma),
                        match expected {
                            Some(d) => format!("homogeneous of degree {d}"),
                            None => "zero".to_string(),
                        }
                    )))
                }
            }
            kept.insert(sigma, val);
        }
        Ok(MinkowskiWeight { fan, mixing, codim, values: kept })
    }

    pub fn zero(fan: Arc<Fan>, mixing: Arc<MixingMap>, codim: usize) -> Self {
        MinkowskiWeight { fan, mixing, codim, values: BTreeMap::new() }
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn mixing(&self) -> &Arc<MixingMap> {
        &self.mixing
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        self.mixing.algebra()
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn value(&self, sigma: ConeId) -> AlgebraElement {
        self.values.get(&sigma).cloned().unwrap_or_else(|| AlgebraElement::zero(self.algebra()))
    }

    /// Nonzero values in cone order.
    pub fn support(&self) -> &BTreeMap<ConeId, AlgebraElement> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn same_setup(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.fan, &other.fan) && self.fan.rays() != other.fan.rays() {
            return Err(Error::InvalidFan("weights live on different fans".into()));
        }
        if self.mixing != other.mixing {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_setup(other)?;
        if self.codim != other.codim {
            return Err(Error::DegreeMismatch(format!("codimensions {} and {}", self.codim, other.codim)));
        }
        let mut values = self.values.clone();
        for (s, v) in &other.values {
            let sum = self.value(*s).add(v)?;
            values.insert(*s, sum);
        }
        Self::new(self.fan.clone(), self.mixing.clone(), self.codim, values)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let values = self.values.iter().map(|(s, v)| (*s, v.scale(k))).collect();
        Self::new(self.fan.clone(), self.mixing.clone(), self.codim, values).expect("degrees preserved")
    }
}

/// One failed balancing equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancingViolation {
    pub tau: ConeId,
    pub m: LatticeVector,
    pub lhs: AlgebraElement,
    pub rhs: AlgebraElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancingReport {
    pub checked: usize,
    pub violations: Vec<BalancingViolation>,
}

impl BalancingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Both sides of the balancing equation at `(τ, m)`:
/// `Σ ⟨m, n_{στ}⟩ W(σ)` over `σ ⊃ τ` one dimension up, and `δ(m)·W(τ)`.
pub fn balancing_sides(
    w: &MinkowskiWeight,
    tau: ConeId,
    m: &LatticeVector,
) -> Result<(AlgebraElement, AlgebraElement)> {
    let fan = &w.fan;
    let mut lhs = AlgebraElement::zero(w.algebra());
    for sigma in fan.neighbors_up(tau) {
        let val = w.value(sigma);
        if val.is_zero() {
            continue;
        }
        let n = fan.normal_vector(tau, sigma)?;
        lhs = lhs.add(&val.scale(&m.dot(&n)))?;
    }
    let rhs = w.mixing.delta(m)?.mul(&w.value(tau))?;
    Ok((lhs, rhs))
}

/// Checks balancing at every cone against a basis of `M(τ)`.
pub fn check_balancing(w: &MinkowskiWeight) -> Result<BalancingReport> {
    if !w.fan.is_complete() {
        return Err(Error::FanNotComplete);
    }
    let mut report = BalancingReport { checked: 0, violations: Vec::new() };
    for tau in w.fan.cone_ids() {
        for m in perp_basis(&w.fan.lattice(tau)) {
            let (lhs, rhs) = balancing_sides(w, tau, &m)?;
            report.checked += 1;
            if lhs != rhs {
                report.violations.push(BalancingViolation { tau, m, lhs, rhs });
            }
        }
    }
    Ok(report)
}

fn assert_balanced(w: &MinkowskiWeight) -> Result<()> {
    let report = check_balancing(w)?;
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::Unbalanced(format!("cone {}, m = {}: {} ≠ {}", w.fan.label(v.tau), v.m, v.lhs, v.rhs))),
    }
}

/// The weight of `1 ∈ A⁰Y`: `[X]` on maximal cones.
pub fn unit_weight(fan: Arc<Fan>, mixing: Arc<MixingMap>) -> Result<MinkowskiWeight> {
    if !fan.is_complete() {
        return Err(Error::FanNotComplete);
    }
    let one = AlgebraElement::one(mixing.algebra());
    let values = fan.maximal_cones().into_iter().map(|s| (s, one.clone())).collect();
    MinkowskiWeight::new(fan, mixing, 0, values)
}

/// `(c·W)(σ) = c·W(σ)` for homogeneous `c`.
pub fn module_action(c: &AlgebraElement, w: &MinkowskiWeight) -> Result<MinkowskiWeight> {
    let l = c.homogeneous_degree()?;
    let Some(l) = l else {
        return Ok(MinkowskiWeight::zero(w.fan.clone(), w.mixing.clone(), w.codim));
    };
    let mut values = BTreeMap::new();
    for (s, v) in &w.values {
        values.insert(*s, c.mul(v)?);
    }
    MinkowskiWeight::new(w.fan.clone(), w.mixing.clone(), w.codim + l, values)
}

/// The pairs `(σ₁, σ₂)` whose displaced cones meet, for a fixed `v`.
/// Shared by the product rule and the diagonal class.
#[derive(Clone, Debug)]
pub struct Displacement {
    v: LatticeVector,
    meets: HashSet<(ConeId, ConeId)>,
}

impl Displacement {
    /// Errors with `NonGenericVector` unless `v` is certified generic.
    pub fn new(fan: &Fan, v: &LatticeVector) -> Result<Self> {
        if v.rank() != fan.ambient_rank() {
            return Err(Error::DimensionMismatch { expected: fan.ambient_rank(), found: v.rank() });
        }
        if !fan::is_generic_diagonal(fan, v) {
            return Err(Error::NonGenericVector(format!("v = {v}")));
        }
        let meets = fan::displaced_meetings(fan, v).into_iter().map(|(a, b, _)| (a, b)).collect();
        Ok(Displacement { v: v.clone(), meets })
    }

    pub fn vector(&self) -> &LatticeVector {
        &self.v
    }

    /// `Δ_*[Y(τ)] = Σ c_{σ₁σ₂} [Y′(σ₁×σ₂)]`: ordered pairs `σ₁, σ₂ ⊇ τ`
    /// meeting after displacement with complementary codimension.
    pub fn diagonal_class(&self, fan: &Fan, tau: ConeId) -> Result<Vec<(ConeId, ConeId, BigInt)>> {
        let above = fan.containing(tau);
        let mut out = Vec::new();
        for &a in &above {
            for &b in &above {
                if fan.codim(a) + fan.codim(b) != fan.codim(tau) || !self.meets.contains(&(a, b)) {
                    continue;
                }
                match fan::pair_index(fan, a, b) {
                    LatticeIndex::Finite(c) => out.push((a, b, c)),
                    LatticeIndex::Infinite => {
                        return Err(Error::NonGenericVector(format!(
                            "cones {} and {} meet with infinite index",
                            fan.label(a),
                            fan.label(b)
                        )))
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The diagonal class of `τ` for displacement `v`.
pub fn diagonal_class(fan: &Fan, tau: ConeId, v: &LatticeVector) -> Result<Vec<(ConeId, ConeId, BigInt)>> {
    Displacement::new(fan, v)?.diagonal_class(fan, tau)
}

/// The fan displacement product, with its output's balancing asserted.
pub fn mw_product(w1: &MinkowskiWeight, w2: &MinkowskiWeight, v: &LatticeVector) -> Result<MinkowskiWeight> {
    w1.same_setup(w2)?;
    let fan = &w1.fan;
    if !fan.is_complete() {
        return Err(Error::FanNotComplete);
    }
    let disp = Displacement::new(fan, v)?;
    let codim = w1.codim + w2.codim;
    let alg = w1.algebra();
    let mut values = BTreeMap::new();
    for tau in fan.cone_ids() {
        if value_degree(fan, alg, codim, tau).is_none() {
            continue;
        }
        let mut acc = AlgebraElement::zero(alg);
        for (a, b, c) in disp.diagonal_class(fan, tau)? {
            let (x, y) = (w1.value(a), w2.value(b));
            if x.is_zero() || y.is_zero() {
                continue;
            }
            acc = acc.add(&x.mul(&y)?.scale(&c))?;
        }
        values.insert(tau, acc);
    }
    let out = MinkowskiWeight::new(fan.clone(), w1.mixing.clone(), codim, values)?;
    assert_balanced(&out)?;
    Ok(out)
}

/// `ι_*[Y] = Σ c_σ [Y′(σ)]` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumClassSum {
    pub terms: BTreeMap<ConeId, BigInt>,
}

/// The class of the subbundle for the saturated sublattice `N ⊆ N′`.
pub fn subbundle_class(fan: &Fan, sub: &Sublattice, v: &LatticeVector) -> Result<StratumClassSum> {
    if sub.ambient_rank() != fan.ambient_rank() || v.rank() != fan.ambient_rank() {
        return Err(Error::DimensionMismatch { expected: fan.ambient_rank(), found: sub.ambient_rank() });
    }
    let sv = fan::sigma_v_set(fan, sub, v)?;
    if !sv.generic {
        let labels: Vec<String> = sv.offending.iter().map(|&c| fan.label(c)).collect();
        return Err(Error::NonGenericVector(format!(
            "v = {v} meets cone(s) {} of the wrong dimension",
            labels.join(" ")
        )));
    }
    let mut terms = BTreeMap::new();
    for sigma in sv.cones {
        let mut gens = fan.lattice(sigma).basis().to_vec();
        gens.extend(sub.basis().iter().cloned());
        match lattice_index(fan.ambient_rank(), &gens) {
            LatticeIndex::Finite(c) => {
                terms.insert(sigma, c);
            }
            LatticeIndex::Infinite => {
                return Err(Error::NonGenericVector(format!(
                    "cone {} is not transverse to the sublattice",
                    fan.label(sigma)
                )))
            }
        }
    }
    Ok(StratumClassSum { terms })
}
