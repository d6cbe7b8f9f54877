//! Rational polyhedral cones and fans.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{
    self, lattice_index, normal_generator, perp_basis, primitive, quotient_map, saturation, LatticeIndex,
    LatticeVector, QuotientMap, Sublattice,
};
use crate::polyhedron::{Inequality, Polyhedron};
use crate::qlinalg::{self, Q};

/// Facet enumeration is brute force over subsets of rays, so ambient
/// ranks are capped.
pub const MAX_AMBIENT_RANK: usize = 4;

/// A strongly convex rational polyhedral cone given by its primitive rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
    facet_normals: Vec<LatticeVector>,
    /// Basis of the characters vanishing on the span of the cone.
    equations: Vec<LatticeVector>,
    dim: usize,
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn int_rank(vectors: &[&LatticeVector]) -> usize {
    let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
    qlinalg::rank_int(&rows)
}

/// Builds a cone from generators. Generators are made primitive and
/// deduplicated; generators that are not extremal rays are dropped.
pub fn cone_from_rays(ambient_rank: usize, rays: &[LatticeVector]) -> Result<Cone> {
    if ambient_rank > MAX_AMBIENT_RANK {
        return Err(Error::RankCapExceeded(ambient_rank));
    }
    let mut prim: Vec<LatticeVector> = Vec::new();
    for r in rays {
        if r.rank() != ambient_rank {
            return Err(Error::DimensionMismatch { expected: ambient_rank, found: r.rank() });
        }
        let p = primitive(r)?;
        if !prim.contains(&p) {
            prim.push(p);
        }
    }
    let refs: Vec<&LatticeVector> = prim.iter().collect();
    let dim = int_rank(&refs);
    let equations = perp_basis(&Sublattice::span(ambient_rank, &prim));
    if dim == 0 {
        return Ok(Cone { ambient_rank, rays: Vec::new(), facet_normals: Vec::new(), equations, dim });
    }

    // Basis of the linear span, chosen greedily from the rays.
    let mut basis: Vec<&LatticeVector> = Vec::new();
    for r in &prim {
        basis.push(r);
        if int_rank(&basis) < basis.len() {
            basis.pop();
        }
    }

    let mut normals: Vec<LatticeVector> = Vec::new();
    for subset in combinations(prim.len(), dim - 1) {
        let sub: Vec<&LatticeVector> = subset.iter().map(|&i| &prim[i]).collect();
        if int_rank(&sub) != dim - 1 {
            continue;
        }
        // u = Σ cⱼ bⱼ lies in the span and is orthogonal to the subset.
        let rows: Vec<Vec<Q>> = sub.iter().map(|r| basis.iter().map(|b| qlinalg::q(&r.dot(b))).collect()).collect();
        let null = qlinalg::nullspace(&rows, dim);
        debug_assert_eq!(null.len(), 1);
        let mut u = vec![Q::zero(); ambient_rank];
        for (c, b) in null[0].iter().zip(&basis) {
            for (k, x) in b.entries().iter().enumerate() {
                u[k] += c * qlinalg::q(x);
            }
        }
        let mut u = LatticeVector::new(qlinalg::primitive_integer(&u));
        let signs: Vec<BigInt> = prim.iter().map(|r| u.dot(r)).collect();
        if signs.iter().all(|s| !s.is_negative()) {
        } else if signs.iter().all(|s| !s.is_positive()) {
            u = -&u;
        } else {
            continue;
        }
        if !normals.contains(&u) {
            normals.push(u);
        }
    }
    let nrefs: Vec<&LatticeVector> = normals.iter().collect();
    if int_rank(&nrefs) < dim {
        return Err(Error::NotStronglyConvex);
    }
    normals.sort();

    let extremal: Vec<LatticeVector> = prim
        .into_iter()
        .filter(|r| {
            let vanishing: Vec<&LatticeVector> = normals.iter().filter(|u| u.dot(r).is_zero()).collect();
            int_rank(&vanishing) == dim - 1
        })
        .collect();
    Ok(Cone { ambient_rank, rays: extremal, facet_normals: normals, equations, dim })
}

impl Cone {
    pub fn zero(ambient_rank: usize) -> Cone {
        cone_from_rays(ambient_rank, &[]).expect("zero cone")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn facet_normals(&self) -> &[LatticeVector] {
        &self.facet_normals
    }

    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn codim(&self) -> usize {
        self.ambient_rank - self.dim
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        let pair = |u: &LatticeVector| -> Q { u.entries().iter().zip(x).map(|(a, b)| qlinalg::q(a) * b).sum() };
        self.equations.iter().all(|e| pair(e).is_zero()) && self.facet_normals.iter().all(|u| !pair(u).is_negative())
    }

    pub fn contains_vector(&self, v: &LatticeVector) -> bool {
        self.contains(&v.to_rational())
    }

    /// Sum of the rays; lies in the relative interior.
    pub fn interior_point(&self) -> LatticeVector {
        self.rays.iter().fold(LatticeVector::zero(self.ambient_rank), |acc, r| &acc + r)
    }

    /// `N_σ`, the saturated sublattice spanned by the cone.
    pub fn lattice(&self) -> Sublattice {
        saturation(&Sublattice::span(self.ambient_rank, &self.rays))
    }

    /// `{x : ⟨u, x - shift⟩ ≥ 0, ⟨e, x - shift⟩ = 0}`.
    pub fn shifted_polyhedron(&self, shift: &LatticeVector) -> Polyhedron {
        let n = self.ambient_rank;
        let eqs = self.equations.iter().map(|e| (e.to_rational(), qlinalg::q(&e.dot(shift)))).collect();
        let ineqs = self
            .facet_normals
            .iter()
            .map(|u| {
                let a = u.entries().iter().map(|x| -qlinalg::q(x)).collect();
                Inequality::new(a, -qlinalg::q(&u.dot(shift)))
            })
            .collect();
        Polyhedron::new(n, eqs, ineqs)
    }

    pub fn polyhedron(&self) -> Polyhedron {
        self.shifted_polyhedron(&LatticeVector::zero(self.ambient_rank))
    }

    /// All faces as sets of indices into `rays()`, including the cone
    /// itself and the zero cone.
    pub fn faces(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        let k = self.facet_normals.len();
        for mask in 0u64..(1u64 << k) {
            let face: Vec<usize> = (0..self.rays.len())
                .filter(|&i| (0..k).all(|f| mask & (1 << f) == 0 || self.facet_normals[f].dot(&self.rays[i]).is_zero()))
                .collect();
            out.insert(face);
        }
        if self.dim == 0 {
            out.insert(Vec::new());
        }
        out
    }
}

/// True iff `tau = sigma ∩ u^⊥` for a supporting character `u` of `sigma`.
pub fn is_face(tau: &Cone, sigma: &Cone) -> bool {
    if tau.ambient_rank != sigma.ambient_rank {
        return false;
    }
    if !tau.rays.iter().all(|r| sigma.contains_vector(r)) {
        return false;
    }
    // Smallest face of sigma containing tau.
    let supporting: Vec<&LatticeVector> =
        sigma.facet_normals.iter().filter(|u| tau.rays.iter().all(|r| u.dot(r).is_zero())).collect();
    sigma.rays.iter().filter(|r| supporting.iter().all(|u| u.dot(r).is_zero())).all(|r| tau.contains_vector(r))
}

/// Multiplicity of a simplicial cone: the index of its rays' span in `N_σ`.
pub fn multiplicity(sigma: &Cone) -> Result<BigInt> {
    if !sigma.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    if sigma.dim == 0 {
        return Ok(BigInt::one());
    }
    let snf = lattice::smith_normal_form(&lattice::IntMatrix::from_rows(sigma.ambient_rank, &sigma.rays));
    Ok(snf.diagonal().iter().filter(|d| !d.is_zero()).product())
}

/// Placing triangulation in the order the rays are listed. Returns the
/// maximal simplicial cones as index sets into `sigma.rays()`.
pub fn triangulate_indices(sigma: &Cone) -> Vec<Vec<usize>> {
    let rays = sigma.rays();
    if rays.is_empty() {
        return vec![Vec::new()];
    }
    let mut simplices: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..rays.len() {
        let mut probe: Vec<&LatticeVector> = simplices[0].iter().map(|&j| &rays[j]).collect();
        let before = probe.len();
        probe.push(&rays[i]);
        if int_rank(&probe) > before {
            for s in simplices.iter_mut() {
                s.push(i);
            }
            continue;
        }
        let mut facet_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for s in &simplices {
            for j in 0..s.len() {
                let mut f = s.clone();
                f.remove(j);
                *facet_count.entry(f).or_default() += 1;
            }
        }
        let mut added = Vec::new();
        for s in &simplices {
            let cols: Vec<Vec<Q>> = s.iter().map(|&j| rays[j].to_rational()).collect();
            let lambda = qlinalg::solve_combination(&cols, &rays[i].to_rational()).expect("ray lies in the span");
            for (j, l) in lambda.iter().enumerate() {
                let mut f = s.clone();
                f.remove(j);
                if l.is_negative() && facet_count[&f] == 1 {
                    let mut new = f;
                    new.push(i);
                    new.sort();
                    added.push(new);
                }
            }
        }
        simplices.extend(added);
    }
    for s in simplices.iter_mut() {
        s.sort();
    }
    simplices
}

pub fn triangulate(sigma: &Cone) -> Vec<Cone> {
    triangulate_indices(sigma)
        .into_iter()
        .map(|s| {
            let rs: Vec<LatticeVector> = s.iter().map(|&i| sigma.rays[i].clone()).collect();
            cone_from_rays(sigma.ambient_rank, &rs).expect("subcone of a valid cone")
        })
        .collect()
}

/// `σ₁ ∩ (σ₂ + v)`.
pub fn cone_shift_intersect(sigma1: &Cone, sigma2: &Cone, v: &LatticeVector) -> Polyhedron {
    sigma1.polyhedron().intersect(&sigma2.shifted_polyhedron(v))
}

pub type ConeId = usize;

/// A cone of a fan, remembering which of the fan's rays span it.
#[derive(Clone, Debug)]
pub struct FanCone {
    pub ray_indices: Vec<usize>,
    pub cone: Cone,
}

/// A fan: cones closed under faces, meeting along common faces.
///
/// Cones are stored sorted by dimension and then by their (0-based) ray
/// index lists; `ConeId`s index into that order.
#[derive(Clone, Debug)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<FanCone>,
    lookup: HashMap<Vec<usize>, ConeId>,
}

impl Fan {
    /// Builds the fan generated by the given cones (lists of 0-based ray
    /// indices) together with all their faces.
    pub fn new(ambient_rank: usize, rays: Vec<LatticeVector>, generating_cones: &[Vec<usize>]) -> Result<Fan> {
        if ambient_rank > MAX_AMBIENT_RANK {
            return Err(Error::RankCapExceeded(ambient_rank));
        }
        let mut prim_rays = Vec::with_capacity(rays.len());
        for r in &rays {
            if r.rank() != ambient_rank {
                return Err(Error::DimensionMismatch { expected: ambient_rank, found: r.rank() });
            }
            let p = primitive(r)?;
            if prim_rays.contains(&p) {
                return Err(Error::InvalidFan(format!("ray {p} is listed twice")));
            }
            prim_rays.push(p);
        }

        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        all.insert(Vec::new());
        for gen in generating_cones {
            let mut idx = gen.clone();
            idx.sort();
            idx.dedup();
            if let Some(&bad) = idx.iter().find(|&&i| i >= prim_rays.len()) {
                return Err(Error::InvalidFan(format!("ray index {} out of range", bad + 1)));
            }
            let rs: Vec<LatticeVector> = idx.iter().map(|&i| prim_rays[i].clone()).collect();
            let cone = cone_from_rays(ambient_rank, &rs)?;
            if cone.rays.len() != idx.len() {
                return Err(Error::InvalidFan(format!(
                    "cone {} lists a generator that is not an extremal ray",
                    label_of(&idx)
                )));
            }
            // Map cone-local ray order back to fan indices.
            let local: Vec<usize> = cone.rays.iter().map(|r| idx[rs.iter().position(|x| x == r).unwrap()]).collect();
            for face in cone.faces() {
                let mut f: Vec<usize> = face.iter().map(|&i| local[i]).collect();
                f.sort();
                all.insert(f);
            }
        }

        let mut cones: Vec<FanCone> = all
            .into_iter()
            .map(|idx| {
                let rs: Vec<LatticeVector> = idx.iter().map(|&i| prim_rays[i].clone()).collect();
                cone_from_rays(ambient_rank, &rs).map(|cone| FanCone { ray_indices: idx, cone })
            })
            .collect::<Result<_>>()?;
        cones.sort_by(|a, b| (a.cone.dim, &a.ray_indices).cmp(&(b.cone.dim, &b.ray_indices)));

        for i in 0..prim_rays.len() {
            if !cones.iter().any(|c| c.ray_indices == vec![i]) {
                return Err(Error::InvalidFan(format!("ray {} is not a cone of the fan", i + 1)));
            }
        }

        // Any two cones must meet in their common face.
        for a in 0..cones.len() {
            for b in a + 1..cones.len() {
                let (ca, cb) = (&cones[a], &cones[b]);
                let common: Vec<usize> =
                    ca.ray_indices.iter().filter(|i| cb.ray_indices.contains(i)).copied().collect();
                let common_dim = int_rank(&common.iter().map(|&i| &prim_rays[i]).collect::<Vec<_>>());
                let is_common_face = |c: &FanCone| {
                    let local: Vec<usize> =
                        common.iter().map(|i| c.ray_indices.iter().position(|x| x == i).unwrap()).collect();
                    let mut local_sorted: Vec<usize> = local
                        .iter()
                        .map(|&l| c.cone.rays.iter().position(|r| *r == prim_rays[c.ray_indices[l]]).unwrap())
                        .collect();
                    local_sorted.sort();
                    c.cone.faces().contains(&local_sorted)
                };
                let meet = ca.cone.polyhedron().intersect(&cb.cone.polyhedron());
                if !is_common_face(ca) || !is_common_face(cb) || meet.dim() != common_dim as i64 {
                    return Err(Error::InvalidFan(format!(
                        "cones {} and {} do not meet in a common face",
                        label_of(&ca.ray_indices),
                        label_of(&cb.ray_indices)
                    )));
                }
            }
        }

        let lookup = cones.iter().enumerate().map(|(i, c)| (c.ray_indices.clone(), i)).collect();
        Ok(Fan { ambient_rank, rays: prim_rays, cones, lookup })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn cone_ids(&self) -> std::ops::Range<ConeId> {
        0..self.cones.len()
    }

    pub fn cone(&self, id: ConeId) -> &Cone {
        &self.cones[id].cone
    }

    pub fn ray_indices(&self, id: ConeId) -> &[usize] {
        &self.cones[id].ray_indices
    }

    pub fn find(&self, ray_indices: &[usize]) -> Option<ConeId> {
        let mut k = ray_indices.to_vec();
        k.sort();
        self.lookup.get(&k).copied()
    }

    /// Looks up a cone by 0-based ray indices, failing with `ConeNotInFan`.
    pub fn require(&self, ray_indices: &[usize]) -> Result<ConeId> {
        self.find(ray_indices).ok_or_else(|| Error::ConeNotInFan(label_of(ray_indices)))
    }

    pub fn zero_cone(&self) -> ConeId {
        0
    }

    pub fn dim(&self, id: ConeId) -> usize {
        self.cones[id].cone.dim
    }

    pub fn codim(&self, id: ConeId) -> usize {
        self.ambient_rank - self.cones[id].cone.dim
    }

    /// 1-based ray labels, `"0"` for the zero cone.
    pub fn label(&self, id: ConeId) -> String {
        label_of(&self.cones[id].ray_indices)
    }

    /// `tau ⊆ sigma` as cones of the fan.
    pub fn is_face_of(&self, tau: ConeId, sigma: ConeId) -> bool {
        let s = &self.cones[sigma].ray_indices;
        self.cones[tau].ray_indices.iter().all(|i| s.contains(i))
    }

    /// All pairs `(τ, σ)` with `τ` a face of `σ`.
    pub fn face_relations(&self) -> Vec<(ConeId, ConeId)> {
        let mut out = Vec::new();
        for s in self.cone_ids() {
            for t in self.cone_ids() {
                if self.is_face_of(t, s) {
                    out.push((t, s));
                }
            }
        }
        out
    }

    pub fn containing(&self, tau: ConeId) -> Vec<ConeId> {
        self.cone_ids().filter(|&s| self.is_face_of(tau, s)).collect()
    }

    /// Cones containing `tau` of one higher dimension.
    pub fn neighbors_up(&self, tau: ConeId) -> Vec<ConeId> {
        let d = self.dim(tau) + 1;
        self.cone_ids().filter(|&s| self.dim(s) == d && self.is_face_of(tau, s)).collect()
    }

    pub fn maximal_cones(&self) -> Vec<ConeId> {
        self.cone_ids().filter(|&s| !self.cone_ids().any(|t| t != s && self.is_face_of(s, t))).collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.cone.is_simplicial())
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(|c| c.cone.is_simplicial() && multiplicity(&c.cone).is_ok_and(|m| m.is_one()))
    }

    /// `N_τ`.
    pub fn lattice(&self, id: ConeId) -> Sublattice {
        self.cones[id].cone.lattice()
    }

    /// `n_{στ}`: a lattice point of `σ` generating `N_σ / N_τ`. Prefers a
    /// ray of `σ` when one maps to the generator.
    pub fn normal_vector(&self, tau: ConeId, sigma: ConeId) -> Result<LatticeVector> {
        let sigma_cone = self.cone(sigma);
        let tau_lat = self.lattice(tau);
        let w = normal_generator(&tau_lat, &self.lattice(sigma), &sigma_cone.interior_point())?;
        let q = quotient_map(&tau_lat)?;
        let g = q.apply(&w);
        for &ri in self.ray_indices(sigma) {
            if !self.ray_indices(tau).contains(&ri) && q.apply(&self.rays[ri]) == g {
                return Ok(self.rays[ri].clone());
            }
        }
        let s = self.cone(tau).interior_point();
        let mut x = w;
        while !sigma_cone.contains_vector(&x) {
            x = &x + &s;
        }
        Ok(x)
    }

    /// Pure of full dimension, every ridge on exactly two maximal cones,
    /// and the maximal cones connected through ridges.
    pub fn is_complete(&self) -> bool {
        let n = self.ambient_rank;
        let maximal = self.maximal_cones();
        if maximal.is_empty() || maximal.iter().any(|&s| self.dim(s) != n) {
            return false;
        }
        if n == 0 {
            return true;
        }
        for r in self.cone_ids().filter(|&r| self.dim(r) == n - 1) {
            let count = maximal.iter().filter(|&&s| self.is_face_of(r, s)).count();
            if count != 2 {
                return false;
            }
        }
        let mut seen = vec![false; maximal.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..maximal.len() {
                if seen[j] {
                    continue;
                }
                let shared = self
                    .cone_ids()
                    .any(|r| self.dim(r) == n - 1 && self.is_face_of(r, maximal[i]) && self.is_face_of(r, maximal[j]));
                if shared {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// The product fan in `N × N'`. Rays of `self` come first.
    pub fn product(&self, other: &Fan) -> Result<Fan> {
        let n = self.ambient_rank + other.ambient_rank;
        let mut rays = Vec::new();
        for r in &self.rays {
            let mut e = r.entries().to_vec();
            e.extend(std::iter::repeat_n(BigInt::zero(), other.ambient_rank));
            rays.push(LatticeVector::new(e));
        }
        for r in &other.rays {
            let mut e = vec![BigInt::zero(); self.ambient_rank];
            e.extend(r.entries().iter().cloned());
            rays.push(LatticeVector::new(e));
        }
        let off = self.rays.len();
        let mut gens = Vec::new();
        for a in self.maximal_cones() {
            for b in other.maximal_cones() {
                let mut g = self.ray_indices(a).to_vec();
                g.extend(other.ray_indices(b).iter().map(|i| i + off));
                gens.push(g);
            }
        }
        Fan::new(n, rays, &gens)
    }
}

pub fn label_of(ray_indices: &[usize]) -> String {
    if ray_indices.is_empty() {
        return "0".to_string();
    }
    let mut v = ray_indices.to_vec();
    v.sort();
    v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// `Star(τ, Σ)` in `N(τ) = N / N_τ`.
#[derive(Clone, Debug)]
pub struct StarFan {
    pub fan: Fan,
    pub quotient: QuotientMap,
    /// Star cone id to the cone of the original fan it comes from.
    pub origin: Vec<ConeId>,
}

pub fn star_fan(tau: ConeId, fan: &Fan) -> Result<StarFan> {
    if tau >= fan.len() {
        return Err(Error::ConeNotInFan(format!("#{tau}")));
    }
    let quotient = quotient_map(&fan.lattice(tau))?;
    let above = fan.containing(tau);
    let mut rays: Vec<LatticeVector> = Vec::new();
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut origin_of: HashMap<Vec<usize>, ConeId> = HashMap::new();
    for &s in &above {
        let mut idx = Vec::new();
        for &ri in fan.ray_indices(s) {
            if fan.ray_indices(tau).contains(&ri) {
                continue;
            }
            let img = primitive(&quotient.apply(&fan.rays()[ri]))?;
            let k = match rays.iter().position(|r| *r == img) {
                Some(k) => k,
                None => {
                    rays.push(img);
                    rays.len() - 1
                }
            };
            idx.push(k);
        }
        idx.sort();
        origin_of.insert(idx.clone(), s);
        gens.push(idx);
    }
    let star = Fan::new(quotient.target_rank(), rays, &gens)?;
    let origin = star.cone_ids().map(|c| origin_of[star.ray_indices(c)]).collect();
    Ok(StarFan { fan: star, quotient, origin })
}

/// Pairs `(σ₁, σ₂)` whose displaced intersection `σ₁ ∩ (σ₂ + v)` is
/// nonempty, with that polyhedron's dimension.
pub fn displaced_meetings(fan: &Fan, v: &LatticeVector) -> Vec<(ConeId, ConeId, i64)> {
    let mut out = Vec::new();
    for a in fan.cone_ids() {
        for b in fan.cone_ids() {
            let p = cone_shift_intersect(fan.cone(a), fan.cone(b), v);
            if !p.is_empty() {
                out.push((a, b, p.dim()));
            }
        }
    }
    out
}

/// Genericity of `v` for the diagonal `N ⊆ N × N`: every pair meeting
/// in a single point has complementary dimensions. We additionally
/// require every nonempty meeting to be transverse.
pub fn is_generic_diagonal(fan: &Fan, v: &LatticeVector) -> bool {
    let n = fan.ambient_rank() as i64;
    displaced_meetings(fan, v).into_iter().all(|(a, b, d)| {
        let expected = fan.dim(a) as i64 + fan.dim(b) as i64 - n;
        (d != 0 || expected == 0) && d == expected
    })
}

/// Default number of candidates tried by the generic vector searches.
pub const MAX_GENERIC_ATTEMPTS: usize = 1000;

/// Samples vectors deterministically from `seed` until `accept` holds.
/// Coordinates are uniform in `[-B, B]` with `B = 7` doubling after each
/// rejected candidate (capped). Returns the vector and the attempt count.
pub fn find_generic_vector(
    rank: usize,
    seed: u64,
    max_attempts: usize,
    accept: impl Fn(&LatticeVector) -> bool,
) -> Result<(LatticeVector, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bound: i64 = 7;
    for attempt in 1..=max_attempts {
        let v = LatticeVector::from_i64(&(0..rank).map(|_| rng.gen_range(-bound..=bound)).collect::<Vec<_>>());
        if accept(&v) {
            return Ok((v, attempt));
        }
        bound = (bound * 2).min(7 << 20);
    }
    Err(Error::GenericSearchExhausted(max_attempts))
}

/// A certified generic displacement vector for the diagonal.
pub fn find_generic_diagonal(fan: &Fan, seed: u64, max_attempts: usize) -> Result<(LatticeVector, usize)> {
    find_generic_vector(fan.ambient_rank(), seed, max_attempts, |v| is_generic_diagonal(fan, v))
}

/// A vector `v` for which `Σ′(v)` of the sublattice is generic.
pub fn find_generic_for_sublattice(
    fan: &Fan,
    sub: &Sublattice,
    seed: u64,
    max_attempts: usize,
) -> Result<(LatticeVector, usize)> {
    if !sub.is_saturated() {
        return Err(Error::NotSaturated);
    }
    find_generic_vector(fan.ambient_rank(), seed, max_attempts, |v| {
        sigma_v_set(fan, sub, v).is_ok_and(|s| s.generic && transverse_to(fan, sub, &s.cones))
    })
}

/// Every cone meets the sublattice with finite index.
fn transverse_to(fan: &Fan, sub: &Sublattice, cones: &[ConeId]) -> bool {
    cones.iter().all(|&c| {
        let mut gens = fan.lattice(c).basis().to_vec();
        gens.extend(sub.basis().iter().cloned());
        matches!(lattice_index(fan.ambient_rank(), &gens), LatticeIndex::Finite(_))
    })
}

/// `Σ′(v)`: cones meeting `N_ℝ + v` in exactly one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaV {
    pub cones: Vec<ConeId>,
    /// Every cone of `Σ′(v)` has dimension `codim N`.
    pub generic: bool,
    pub offending: Vec<ConeId>,
}

pub fn sigma_v_set(fan: &Fan, sub: &Sublattice, v: &LatticeVector) -> Result<SigmaV> {
    if !sub.is_saturated() {
        return Err(Error::NotSaturated);
    }
    let n = fan.ambient_rank();
    let codim = n - sub.rank();
    let eqs: Vec<(Vec<Q>, Q)> = perp_basis(sub).iter().map(|m| (m.to_rational(), qlinalg::q(&m.dot(v)))).collect();
    let affine = Polyhedron::new(n, eqs, Vec::new());
    let mut cones = Vec::new();
    let mut offending = Vec::new();
    for c in fan.cone_ids() {
        if fan.cone(c).polyhedron().intersect(&affine).is_point() {
            cones.push(c);
            if fan.dim(c) != codim {
                offending.push(c);
            }
        }
    }
    Ok(SigmaV { generic: offending.is_empty(), cones, offending })
}

/// `[N : N₁ + N₂]` for the lattices of two cones.
pub fn pair_index(fan: &Fan, a: ConeId, b: ConeId) -> LatticeIndex {
    let mut gens = fan.lattice(a).basis().to_vec();
    gens.extend(fan.lattice(b).basis().iter().cloned());
    lattice_index(fan.ambient_rank(), &gens)
}
