//! The JSON problem file: a fan, a base algebra with its mixing map, and
//! optional weights, piecewise polynomial, sublattice and displacement.
//!
//! Cones are written as 1-based ray index lists. Cone keys in weight and
//! piecewise tables are comma-separated 1-based indices, with `"0"` for
//! the zero cone.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{AlgebraElement, GradedAlgebra, MixingMap};
use crate::chow::ChowRing;
use crate::error::{Error, Result};
use crate::expr::{self, Target};
use crate::fan::{ConeId, Fan};
use crate::lattice::{LatticeVector, Sublattice};
use crate::minkowski::MinkowskiWeight;
use crate::piecewise::PiecewisePolynomial;
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub lattice_rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub base: BaseSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixing: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<WeightSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piecewise: Option<PiecewiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sublattice: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displacement: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseSpec {
    #[default]
    Point,
    Projective(usize),
    FreeTruncated {
        generators: Vec<GeneratorSpec>,
        top_degree: usize,
    },
    /// `products` maps `"x*y"` to a linear combination of basis names.
    Explicit {
        top_degree: usize,
        basis: Vec<GeneratorSpec>,
        products: BTreeMap<String, String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: usize,
}

/// Either an explicit table or the Poincaré dual of a class written over
/// `D1..Dk` and the base generators (smooth complete fans only).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_of: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseSpec {
    pub degree: u32,
    pub pieces: BTreeMap<String, String>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("problem file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// A problem file with every section built and validated.
#[derive(Clone, Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub digest: String,
    pub fan: Arc<Fan>,
    pub algebra: Arc<GradedAlgebra>,
    pub mixing: Arc<MixingMap>,
    pub weights: Vec<(String, MinkowskiWeight)>,
    /// Class expressions for weights given by `dual_of`.
    pub dual_classes: BTreeMap<String, String>,
    pub piecewise: Option<PiecewisePolynomial>,
    pub sublattice: Option<Sublattice>,
    pub displacement: Option<LatticeVector>,
}

/// Parses `"0"` or `"1,2"` style cone keys into 0-based ray indices.
pub fn parse_cone_key(key: &str) -> Result<Vec<usize>> {
    let key = key.trim();
    if key == "0" || key.is_empty() {
        return Ok(Vec::new());
    }
    key.split(',')
        .map(|p| {
            let i: usize = p.trim().parse().map_err(|_| Error::Parse(format!("bad cone key '{key}'")))?;
            if i == 0 {
                return Err(Error::Parse(format!("cone key '{key}': ray indices start at 1")));
            }
            Ok(i - 1)
        })
        .collect()
}

pub fn find_cone(fan: &Fan, key: &str) -> Result<ConeId> {
    let idx = parse_cone_key(key)?;
    fan.find(&idx).ok_or_else(|| Error::ConeNotInFan(key.to_string()))
}

/// Parses `"2,1"` style vectors.
pub fn parse_vector(s: &str) -> Result<LatticeVector> {
    let entries = s
        .split(',')
        .map(|p| p.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad vector '{s}'"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(LatticeVector::new(entries))
}

/// Evaluates a product-table entry as a linear combination of names.
struct Linear;

type Combo = std::result::Result<BTreeMap<String, BigInt>, Error>;

impl Target for Linear {
    type Value = Combo;
    fn constant(&self, n: &BigInt) -> Combo {
        Ok([("1".to_string(), n.clone())].into_iter().collect())
    }
    fn ident(&self, name: &str) -> Result<Combo> {
        Ok(Ok([(name.to_string(), BigInt::from(1))].into_iter().collect()))
    }
    fn add(&self, a: &Combo, b: &Combo) -> Combo {
        let mut out = a.clone()?;
        for (k, v) in b.clone()? {
            *out.entry(k).or_default() += v;
        }
        Ok(out)
    }
    fn mul(&self, a: &Combo, b: &Combo) -> Combo {
        let (a, b) = (a.clone()?, b.clone()?);
        let scalar =
            |m: &BTreeMap<String, BigInt>| m.keys().all(|k| k == "1").then(|| m.get("1").cloned().unwrap_or_default());
        let (k, other) = match (scalar(&a), scalar(&b)) {
            (Some(k), _) => (k, b),
            (_, Some(k)) => (k, a),
            _ => return Err(Error::Parse("product table entries must be linear in basis names".into())),
        };
        Ok(other.into_iter().map(|(n, c)| (n, c * &k)).collect())
    }
}

fn build_algebra(spec: &BaseSpec) -> Result<GradedAlgebra> {
    match spec {
        BaseSpec::Point => Ok(GradedAlgebra::point()),
        BaseSpec::Projective(n) => GradedAlgebra::projective(*n),
        BaseSpec::FreeTruncated { generators, top_degree } => {
            let gens: Vec<(String, usize)> = generators.iter().map(|g| (g.name.clone(), g.degree)).collect();
            GradedAlgebra::free_truncated(&gens, *top_degree)
        }
        BaseSpec::Explicit { top_degree, basis, products } => {
            let names: Vec<(String, usize)> = basis.iter().map(|g| (g.name.clone(), g.degree)).collect();
            let all: Vec<String> =
                std::iter::once("1".to_string()).chain(names.iter().map(|(n, _)| n.clone())).collect();
            let mut table = BTreeMap::new();
            for (key, value) in products {
                let (a, b) = key
                    .split_once('*')
                    .ok_or_else(|| Error::Parse(format!("product key '{key}' must look like 'x*y'")))?;
                let combo = expr::parse_eval(value, &Linear)??;
                let mut coeffs = vec![BigInt::from(0); all.len()];
                for (n, c) in combo {
                    let i = all
                        .iter()
                        .position(|x| *x == n)
                        .ok_or_else(|| Error::InvalidAlgebra(format!("unknown basis element {n}")))?;
                    coeffs[i] += c;
                }
                table.insert((a.trim().to_string(), b.trim().to_string()), coeffs);
            }
            GradedAlgebra::explicit(*top_degree, &names, &table)
        }
    }
}

fn to_vector(n: usize, entries: &[i64], what: &str) -> Result<LatticeVector> {
    if entries.len() != n {
        return Err(Error::Parse(format!("{what} has {} entries, expected {n}", entries.len())));
    }
    Ok(LatticeVector::from_i64(entries))
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Self> {
        let file = ProblemFile::from_json(text)?;
        let digest = hex(&Sha256::digest(text.as_bytes()));
        Self::build(file, digest)
    }

    pub fn build(file: ProblemFile, digest: String) -> Result<Self> {
        let n = file.lattice_rank;
        let rays = file
            .rays
            .iter()
            .enumerate()
            .map(|(i, r)| to_vector(n, r, &format!("ray {}", i + 1)))
            .collect::<Result<Vec<_>>>()?;
        let mut cones = Vec::new();
        for c in &file.cones {
            if c.iter().any(|&i| i == 0 || i > rays.len()) {
                return Err(Error::InvalidFan(format!("cone {c:?} refers to a ray outside 1..={}", rays.len())));
            }
            cones.push(c.iter().map(|i| i - 1).collect::<Vec<_>>());
        }
        let fan = Arc::new(Fan::new(n, rays, &cones)?);
        let algebra = Arc::new(build_algebra(&file.base)?);
        let mixing = Arc::new(match &file.mixing {
            Some(rows) => {
                if rows.len() != n {
                    return Err(Error::Parse(format!("mixing has {} rows, expected {n}", rows.len())));
                }
                let rows: Vec<Vec<BigInt>> =
                    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
                MixingMap::from_matrix(&algebra, &rows)?
            }
            None => MixingMap::zero(&algebra, n),
        });

        let mut weights = Vec::new();
        let mut dual_classes = BTreeMap::new();
        let mut ring: Option<ChowRing> = None;
        for spec in &file.weights {
            if weights.iter().any(|(name, _)| name == &spec.name) {
                return Err(Error::Parse(format!("weight {} defined twice", spec.name)));
            }
            let w = match (&spec.values, &spec.dual_of) {
                (Some(values), None) => {
                    let codim =
                        spec.codim.ok_or_else(|| Error::Parse(format!("weight {} needs a codim", spec.name)))?;
                    let mut table = BTreeMap::new();
                    for (key, e) in values {
                        let cone = find_cone(&fan, key)?;
                        let val = AlgebraElement::parse(&algebra, e)
                            .map_err(|err| Error::Parse(format!("weight {} at {key}: {err}", spec.name)))?;
                        table.insert(cone, val);
                    }
                    MinkowskiWeight::new(fan.clone(), mixing.clone(), codim, table)?
                }
                (None, Some(expr)) => {
                    if ring.is_none() {
                        ring = Some(ChowRing::new(fan.clone(), mixing.clone())?);
                    }
                    let r = ring.as_ref().unwrap();
                    let gamma = r.parse(expr)?;
                    let w = r.poincare_dual_mw(&gamma)?;
                    if let Some(c) = spec.codim {
                        if c != w.codim() && !w.is_zero() {
                            return Err(Error::DegreeMismatch(format!(
                                "weight {} declares codim {c} but {expr} has degree {}",
                                spec.name,
                                w.codim()
                            )));
                        }
                    }
                    dual_classes.insert(spec.name.clone(), expr.clone());
                    w
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "weight {} needs exactly one of 'values' or 'dual_of'",
                        spec.name
                    )))
                }
            };
            weights.push((spec.name.clone(), w));
        }

        let piecewise = match &file.piecewise {
            None => None,
            Some(spec) => {
                let mut pieces = BTreeMap::new();
                for (key, e) in &spec.pieces {
                    let cone = find_cone(&fan, key)?;
                    let p = Polynomial::parse(n, e).map_err(|err| Error::Parse(format!("piece at {key}: {err}")))?;
                    pieces.insert(cone, p);
                }
                Some(PiecewisePolynomial::new(fan.clone(), spec.degree, pieces)?)
            }
        };

        let sublattice = match &file.sublattice {
            None => None,
            Some(rows) => {
                let basis = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| to_vector(n, r, &format!("sublattice generator {}", i + 1)))
                    .collect::<Result<Vec<_>>>()?;
                Some(Sublattice::new(n, basis)?)
            }
        };
        let displacement = file.displacement.as_ref().map(|d| to_vector(n, d, "displacement")).transpose()?;

        Ok(Problem { file, digest, fan, algebra, mixing, weights, dual_classes, piecewise, sublattice, displacement })
    }

    pub fn weight(&self, name: &str) -> Result<&MinkowskiWeight> {
        self.weights
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, w)| w)
            .ok_or_else(|| Error::Parse(format!("no weight named {name}")))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const F1: &str = r#"{
      "lattice_rank": 2,
      "rays": [[1,0],[1,1],[0,1],[-1,-1]],
      "cones": [[1,2],[2,3],[3,4],[4,1]],
      "base": {"free_truncated": {"generators": [{"name":"a1","degree":1},{"name":"a2","degree":1}], "top_degree": 4}},
      "mixing": [[1,0],[0,1]],
      "weights": [
        {"name": "W1", "codim": 1, "values": {"2": "1", "4": "1", "1,2": "a1 - a2", "1,4": "a1 - a2"}},
        {"name": "W2", "dual_of": "D2"}
      ],
      "piecewise": {"degree": 2, "pieces": {"1,2": "x2^2", "2,3": "x1^2"}},
      "displacement": [2, 1]
    }"#;

    #[test]
    fn loads_example() {
        let p = Problem::from_json(F1).unwrap();
        assert_eq!(p.fan.len(), 9);
        assert_eq!(p.weights.len(), 2);
        assert_eq!(p.weight("W2").unwrap().codim(), 1);
        assert_eq!(p.digest.len(), 64);
        assert!(p.piecewise.is_some());
    }

    #[test]
    fn round_trip_is_idempotent() {
        let p = ProblemFile::from_json(F1).unwrap();
        let once = p.to_json();
        let twice = ProblemFile::from_json(&once).unwrap().to_json();
        assert_eq!(once, twice);
    }

    #[test]
    fn explicit_base() {
        let text = r#"{
          "lattice_rank": 1, "rays": [[1],[-1]], "cones": [[1],[2]],
          "base": {"explicit": {"top_degree": 2, "basis": [{"name":"h","degree":1},{"name":"pt","degree":2}],
                                "products": {"h*h": "pt"}}},
          "mixing": [[1]]
        }"#;
        let p = Problem::from_json(text).unwrap();
        assert_eq!(p.algebra.rank(), 3);
        assert_eq!(
            ProblemFile::from_json(text).unwrap().base,
            ProblemFile::from_json(&ProblemFile::from_json(text).unwrap().to_json()).unwrap().base
        );
    }

    #[test]
    fn validation_errors() {
        assert!(Problem::from_json(r#"{"lattice_rank": 2, "rays": [[1,0]], "cones": [[2]]}"#).is_err());
        assert!(Problem::from_json(r#"{"lattice_rank": 2, "rays": [[1,0,0]], "cones": [[1]]}"#).is_err());
        assert!(Problem::from_json(r#"{"lattice_rank": 2, "rays": [[1,0]], "cones": [[1]], "bogus": 1}"#).is_err());
        assert!(matches!(Problem::from_json("{ not json"), Err(Error::Parse(_))));
        assert_eq!(parse_cone_key("0").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_cone_key("1,4").unwrap(), vec![0, 3]);
        assert!(parse_cone_key("0,1").is_err());
        assert_eq!(parse_vector("2, -1").unwrap(), LatticeVector::from_i64(&[2, -1]));
    }
}
