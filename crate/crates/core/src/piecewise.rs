//! Piecewise polynomials on a fan, equivariant multiplicities and the
//! non-equivariant limit to Minkowski weights.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::MixingMap;
use crate::error::{Error, Result};
use crate::fan::{self, ConeId, Fan};
use crate::fraction::LinearFraction;
use crate::lattice::{primitive, quotient_map, LatticeVector};
use crate::minkowski::{check_balancing, MinkowskiWeight};
use crate::poly::Polynomial;

/// A homogeneous polynomial of degree `degree` on each maximal cone;
/// absent pieces are zero.
#[derive(Clone, Debug)]
pub struct PiecewisePolynomial {
    fan: Arc<Fan>,
    degree: u32,
    pieces: BTreeMap<ConeId, Polynomial>,
}

/// A failed compatibility or homogeneity condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PpViolation {
    /// The pieces on two maximal cones differ on their common face.
    Incompatible {
        sigma1: ConeId,
        sigma2: ConeId,
        tau: ConeId,
    },
    NotHomogeneous {
        sigma: ConeId,
    },
}

impl PiecewisePolynomial {
    pub fn new(fan: Arc<Fan>, degree: u32, pieces: BTreeMap<ConeId, Polynomial>) -> Result<Self> {
        let maximal = fan.maximal_cones();
        for (s, p) in &pieces {
            if !maximal.contains(s) {
                return Err(Error::ConeNotInFan(format!(
                    "{} is not a maximal cone",
                    if *s < fan.len() { fan.label(*s) } else { format!("#{s}") }
                )));
            }
            if p.num_vars() != fan.ambient_rank() {
                return Err(Error::DimensionMismatch { expected: fan.ambient_rank(), found: p.num_vars() });
            }
        }
        let pieces = pieces.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(PiecewisePolynomial { fan, degree, pieces })
    }

    /// The same polynomial on every maximal cone.
    pub fn global(fan: Arc<Fan>, p: &Polynomial) -> Result<Self> {
        let degree = p.degree().unwrap_or(0);
        let pieces = fan.maximal_cones().into_iter().map(|s| (s, p.clone())).collect();
        Self::new(fan, degree, pieces)
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn piece(&self, sigma: ConeId) -> Polynomial {
        self.pieces.get(&sigma).cloned().unwrap_or_else(|| Polynomial::zero(self.fan.ambient_rank()))
    }

    pub fn pieces(&self) -> &BTreeMap<ConeId, Polynomial> {
        &self.pieces
    }

    /// Piecewise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.fan, &other.fan) && self.fan.rays() != other.fan.rays() {
            return Err(Error::IncompatiblePieces);
        }
        let pieces = self.fan.maximal_cones().into_iter().map(|s| (s, self.piece(s).mul(&other.piece(s)))).collect();
        Self::new(self.fan.clone(), self.degree + other.degree, pieces)
    }
}

/// Checks homogeneity and agreement of pieces on shared faces. The
/// difference is pulled back along a lattice basis of `N_τ` and must be
/// the zero polynomial.
pub fn check_pp(f: &PiecewisePolynomial) -> Vec<PpViolation> {
    let fan = &f.fan;
    let maximal = fan.maximal_cones();
    let mut out = Vec::new();
    for &s in &maximal {
        if !f.piece(s).is_homogeneous_of(f.degree) {
            out.push(PpViolation::NotHomogeneous { sigma: s });
        }
    }
    for (i, &a) in maximal.iter().enumerate() {
        for &b in &maximal[i + 1..] {
            let common: Vec<usize> =
                fan.ray_indices(a).iter().filter(|r| fan.ray_indices(b).contains(r)).copied().collect();
            let tau = fan.find(&common).expect("fans are closed under intersection");
            let basis: Vec<Vec<BigInt>> = fan.lattice(tau).basis().iter().map(|v| v.entries().to_vec()).collect();
            let diff = f.piece(a).sub(&f.piece(b));
            if !diff.restrict_to_span(&basis).is_zero() {
                out.push(PpViolation::Incompatible { sigma1: a, sigma2: b, tau });
            }
        }
    }
    out
}

/// `e_{στ}` for a full-dimensional cone `σ` and a face `τ`, in the
/// coordinates `x1..xn` of `M`.
pub fn equivariant_multiplicity(fan: &Fan, sigma: ConeId, tau: ConeId) -> Result<LinearFraction> {
    let n = fan.ambient_rank();
    if !fan.is_face_of(tau, sigma) {
        return Err(Error::NotAFace { tau: fan.label(tau), sigma: fan.label(sigma) });
    }
    if fan.dim(sigma) != n {
        return Err(Error::FanNotComplete);
    }
    let q = quotient_map(&fan.lattice(tau))?;
    let images: Vec<LatticeVector> = fan
        .ray_indices(sigma)
        .iter()
        .filter(|r| !fan.ray_indices(tau).contains(r))
        .map(|&r| primitive(&q.apply(&fan.rays()[r])))
        .collect::<Result<_>>()?;
    let image = fan::cone_from_rays(q.target_rank(), &images)?;
    Ok(cone_multiplicity(&image, |l| q.pullback(l)))
}

/// `e_{σ,0}` of a full-dimensional cone, summed over a placing
/// triangulation in the cone's ray order.
pub fn cone_equivariant_multiplicity(cone: &fan::Cone) -> LinearFraction {
    cone_multiplicity(cone, |l| l.clone())
}

fn cone_multiplicity(cone: &fan::Cone, pullback: impl Fn(&LatticeVector) -> LatticeVector) -> LinearFraction {
    let n_out = pullback(&LatticeVector::zero(cone.ambient_rank())).rank();
    let mut total = LinearFraction::zero(n_out);
    for piece in fan::triangulate(cone) {
        total = total.add(&simplicial_multiplicity(&piece, &pullback));
    }
    total
}

/// `Π⟨ℓᵢ, wᵢ⟩ / (mult · Π ℓᵢ)` with `ℓᵢ` the primitive inner normal of
/// the facet opposite `wᵢ`.
fn simplicial_multiplicity(cone: &fan::Cone, pullback: &impl Fn(&LatticeVector) -> LatticeVector) -> LinearFraction {
    let n_out = pullback(&LatticeVector::zero(cone.ambient_rank())).rank();
    let mult = fan::multiplicity(cone).expect("triangulation pieces are simplicial");
    let mut numerator = BigInt::from(1);
    let mut forms = Vec::new();
    for w in cone.rays() {
        let normal = cone
            .facet_normals()
            .iter()
            .find(|u| !u.dot(w).is_zero())
            .expect("simplicial cone has a facet opposite each ray");
        numerator *= normal.dot(w);
        forms.push(pullback(normal).into_entries());
    }
    LinearFraction::new(Polynomial::constant(n_out, numerator), mult, &forms)
}

/// `R_f(τ) = Σ_{σ ⊇ τ maximal} f_σ e_{στ}`, which must be a polynomial.
pub fn residue_sum(f: &PiecewisePolynomial, tau: ConeId) -> Result<Polynomial> {
    let fan = &f.fan;
    if !fan.is_complete() {
        return Err(Error::FanNotComplete);
    }
    let mut total = LinearFraction::zero(fan.ambient_rank());
    for sigma in fan.maximal_cones() {
        if !fan.is_face_of(tau, sigma) {
            continue;
        }
        let piece = f.piece(sigma);
        if piece.is_zero() {
            continue;
        }
        total = total.add(&equivariant_multiplicity(fan, sigma, tau)?.mul_polynomial(&piece));
    }
    total.to_polynomial().ok_or_else(|| Error::ResidueNotPolynomial(fan.label(tau)))
}

/// `W_f(τ) = δ(R_f(τ))`, with the output's balancing asserted.
pub fn pp_to_mw(f: &PiecewisePolynomial, mixing: &Arc<MixingMap>) -> Result<MinkowskiWeight> {
    if let Some(v) = check_pp(f).first() {
        return Err(match v {
            PpViolation::Incompatible { .. } => Error::IncompatiblePieces,
            PpViolation::NotHomogeneous { .. } => Error::NotHomogeneous,
        });
    }
    let fan = &f.fan;
    let codim = f.degree as usize;
    let mut values = BTreeMap::new();
    for tau in fan.cone_ids() {
        let r = residue_sum(f, tau)?;
        if r.is_zero() {
            continue;
        }
        let c = fan.codim(tau);
        if c > codim || !r.is_homogeneous_of((codim - c) as u32) {
            return Err(Error::DegreeMismatch(format!("residue sum {r} at {} has the wrong degree", fan.label(tau))));
        }
        values.insert(tau, mixing.delta_extend(&r)?);
    }
    let w = MinkowskiWeight::new(fan.clone(), mixing.clone(), codim, values)?;
    let report = check_balancing(&w)?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Unbalanced(format!("cone {}, m = {}", fan.label(v.tau), v.m)));
    }
    Ok(w)
}
