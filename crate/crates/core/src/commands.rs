//! The eight CLI commands, producing deterministic result documents.
//!
//! A document is a JSON object with the keys `command`, `input_digest`,
//! `outputs` and `diagnostics`. Object keys serialize sorted; cone tables
//! are arrays in the fan's (dimension, ray indices) order.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::chow::{self, ChowRing};
use crate::error::{Error, Result};
use crate::fan::{self, ConeId, Fan, MAX_GENERIC_ATTEMPTS};
use crate::lattice::LatticeVector;
use crate::minkowski::{self, check_balancing, MinkowskiWeight};
use crate::piecewise::{self, PiecewisePolynomial};
use crate::problem::{find_cone, parse_vector, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckFan,
    CheckBalancing,
    MwProduct,
    PpToMw,
    EquivMult,
    Residue,
    Presentation,
    Subbundle,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::CheckFan,
        Command::CheckBalancing,
        Command::MwProduct,
        Command::PpToMw,
        Command::EquivMult,
        Command::Residue,
        Command::Presentation,
        Command::Subbundle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckFan => "check-fan",
            Command::CheckBalancing => "check-balancing",
            Command::MwProduct => "mw-product",
            Command::PpToMw => "pp-to-mw",
            Command::EquivMult => "equiv-mult",
            Command::Residue => "residue",
            Command::Presentation => "presentation",
            Command::Subbundle => "subbundle",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Flags shared by all commands; each command reads the ones it needs.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    /// Displacement vector, `"2,1"`.
    pub v: Option<String>,
    pub seed: u64,
    pub cross_check: bool,
    pub oracle: bool,
    pub sigma: Option<String>,
    pub tau: Option<String>,
    pub equivariant: bool,
    /// Weight names: one for check-balancing, two for mw-product.
    pub weights: Vec<String>,
    /// Candidate budget for generic vector searches.
    pub max_attempts: Option<usize>,
}

impl Options {
    fn echo(&self) -> Value {
        let mut flags = Map::new();
        if let Some(v) = &self.v {
            flags.insert("v".into(), json!(v));
        }
        flags.insert("seed".into(), json!(self.seed));
        if self.cross_check {
            flags.insert("cross_check".into(), json!(true));
        }
        if self.oracle {
            flags.insert("oracle".into(), json!(true));
        }
        if let Some(s) = &self.sigma {
            flags.insert("sigma".into(), json!(s));
        }
        if let Some(t) = &self.tau {
            flags.insert("tau".into(), json!(t));
        }
        if self.equivariant {
            flags.insert("equivariant".into(), json!(true));
        }
        if !self.weights.is_empty() {
            flags.insert("weights".into(), json!(self.weights));
        }
        if let Some(k) = self.max_attempts {
            flags.insert("max_attempts".into(), json!(k));
        }
        Value::Object(flags)
    }

    fn budget(&self) -> usize {
        self.max_attempts.unwrap_or(MAX_GENERIC_ATTEMPTS)
    }
}

/// A finished command: the document and the process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub document: Value,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        render_table(&self.document)
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_SEARCH: i32 = 4;

/// Exit code for an error that aborted a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::GenericSearchExhausted(_) => EXIT_SEARCH,
        Error::Unbalanced(_) | Error::ResidueNotPolynomial(_) => EXIT_MATH,
        _ => EXIT_VALIDATION,
    }
}

pub fn run(cmd: Command, problem: &Problem, opts: &Options) -> Result<Report> {
    let mut diagnostics = Map::new();
    let (outputs, exit_code) = match cmd {
        Command::CheckFan => (check_fan(problem), EXIT_OK),
        Command::CheckBalancing => check_balancing_cmd(problem, opts)?,
        Command::MwProduct => mw_product_cmd(problem, opts, &mut diagnostics)?,
        Command::PpToMw => (pp_to_mw_cmd(problem, &mut diagnostics)?, EXIT_OK),
        Command::EquivMult => (equiv_mult_cmd(problem, opts)?, EXIT_OK),
        Command::Residue => (residue_cmd(problem, opts)?, EXIT_OK),
        Command::Presentation => (presentation_cmd(problem, opts)?, EXIT_OK),
        Command::Subbundle => (subbundle_cmd(problem, opts, &mut diagnostics)?, EXIT_OK),
    };
    let document = json!({
        "command": {"name": cmd.name(), "flags": opts.echo()},
        "input_digest": problem.digest,
        "outputs": outputs,
        "diagnostics": Value::Object(diagnostics),
    });
    Ok(Report { document, exit_code })
}

fn cone_row(fan: &Fan, sigma: ConeId, key: &str, value: Value) -> Value {
    json!({"cone": fan.label(sigma), key: value})
}

fn weight_table(w: &MinkowskiWeight) -> Value {
    let fan = w.fan();
    let values: Vec<Value> = fan
        .cone_ids()
        .filter(|&s| w.support().contains_key(&s))
        .map(|s| cone_row(fan, s, "value", json!(w.value(s).to_string())))
        .collect();
    json!({"codim": w.codim(), "values": values})
}

fn balancing_json(w: &MinkowskiWeight) -> Result<Value> {
    let report = check_balancing(w)?;
    let fan = w.fan();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "tau": fan.label(v.tau),
                "m": v.m.to_string(),
                "lhs": v.lhs.to_string(),
                "rhs": v.rhs.to_string(),
            })
        })
        .collect();
    Ok(json!({"checked": report.checked, "passed": report.passed(), "violations": violations}))
}

fn check_fan(problem: &Problem) -> Value {
    let fan = &problem.fan;
    let multiplicities: Vec<Value> = fan
        .cone_ids()
        .filter(|&s| fan.dim(s) > 0)
        .map(|s| {
            let cone = fan.cone(s);
            let m = if cone.is_simplicial() {
                fan::multiplicity(cone).map(|m| json!(m.to_string())).unwrap_or(Value::Null)
            } else {
                Value::Null
            };
            json!({"cone": fan.label(s), "dim": fan.dim(s), "simplicial": cone.is_simplicial(), "multiplicity": m})
        })
        .collect();
    json!({
        "valid": true,
        "lattice_rank": fan.ambient_rank(),
        "rays": fan.rays().len(),
        "cones": fan.len(),
        "maximal_cones": fan.maximal_cones().iter().map(|&s| fan.label(s)).collect::<Vec<_>>(),
        "complete": fan.is_complete(),
        "simplicial": fan.is_simplicial(),
        "smooth": fan.is_smooth(),
        "multiplicities": multiplicities,
    })
}

fn selected_weights<'a>(problem: &'a Problem, names: &'a [String]) -> Result<Vec<(&'a str, &'a MinkowskiWeight)>> {
    if names.is_empty() {
        return Ok(problem.weights.iter().map(|(n, w)| (n.as_str(), w)).collect());
    }
    names.iter().map(|n| problem.weight(n).map(|w| (n.as_str(), w))).collect()
}

fn check_balancing_cmd(problem: &Problem, opts: &Options) -> Result<(Value, i32)> {
    let chosen = selected_weights(problem, &opts.weights)?;
    if chosen.is_empty() {
        return Err(Error::Parse("the problem file has no weights".into()));
    }
    let mut all_passed = true;
    let mut reports = Vec::new();
    for (name, w) in chosen {
        let b = balancing_json(w)?;
        all_passed &= b["passed"] == json!(true);
        reports.push(json!({"name": name, "codim": w.codim(), "balancing": b}));
    }
    let code = if all_passed { EXIT_OK } else { EXIT_MATH };
    Ok((json!({"passed": all_passed, "weights": reports}), code))
}

/// Where a displacement vector came from, for the certificate.
fn choose_vector(
    problem: &Problem,
    opts: &Options,
    accept: impl Fn(&LatticeVector) -> bool,
    search: impl FnOnce(u64) -> Result<(LatticeVector, usize)>,
) -> Result<(LatticeVector, Value)> {
    let n = problem.fan.ambient_rank();
    let given = match &opts.v {
        Some(s) => Some((parse_vector(s)?, "flag")),
        None => problem.displacement.clone().map(|v| (v, "file")),
    };
    if let Some((v, source)) = given {
        if v.rank() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.rank() });
        }
        if !accept(&v) {
            return Err(Error::NonGenericVector(format!("v = {v} from the {source}")));
        }
        return Ok((v.clone(), json!({"v": v.to_string(), "source": source, "certified": true})));
    }
    let (v, attempts) = search(opts.seed)?;
    Ok((
        v.clone(),
        json!({"v": v.to_string(), "source": "search", "seed": opts.seed, "attempts": attempts, "certified": true}),
    ))
}

fn mw_product_cmd(problem: &Problem, opts: &Options, diag: &mut Map<String, Value>) -> Result<(Value, i32)> {
    let names: Vec<String> = match opts.weights.len() {
        0 => problem.weights.iter().take(2).map(|(n, _)| n.clone()).collect(),
        _ => opts.weights.clone(),
    };
    if names.len() != 2 {
        return Err(Error::Parse("mw-product needs exactly two weights".into()));
    }
    let (w1, w2) = (problem.weight(&names[0])?, problem.weight(&names[1])?);
    let fan = &problem.fan;
    let (v, cert) = choose_vector(
        problem,
        opts,
        |v| fan::is_generic_diagonal(fan, v),
        |seed| fan::find_generic_diagonal(fan, seed, opts.budget()),
    )?;
    diag.insert("genericity".into(), cert);
    let product = minkowski::mw_product(w1, w2, &v)?;
    diag.insert("balancing".into(), balancing_json(&product)?);
    let mut code = EXIT_OK;

    if opts.cross_check {
        let (v2, attempts) =
            fan::find_generic_vector(fan.ambient_rank(), opts.seed.wrapping_add(1), opts.budget(), |u| {
                *u != v && fan::is_generic_diagonal(fan, u)
            })?;
        let again = minkowski::mw_product(w1, w2, &v2)?;
        let agree = again == product;
        if !agree {
            code = EXIT_MATH;
        }
        diag.insert("cross_check".into(), json!({"v": v2.to_string(), "attempts": attempts, "agree": agree}));
    }
    if opts.oracle {
        let (e1, e2) = match (problem.dual_classes.get(&names[0]), problem.dual_classes.get(&names[1])) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Parse("--oracle needs both weights given by 'dual_of'".into())),
        };
        let ring = ChowRing::new(fan.clone(), problem.mixing.clone())?;
        let gamma = ring.mul(&ring.parse(e1)?, &ring.parse(e2)?);
        let expected = ring.poincare_dual_mw(&gamma)?;
        let agree = expected == product;
        if !agree {
            code = EXIT_MATH;
        }
        diag.insert("oracle".into(), json!({"class": ring.render(&gamma), "agree": agree}));
    }
    let outputs = json!({"weights": names, "product": weight_table(&product)});
    Ok((outputs, code))
}

fn piecewise_of(problem: &Problem) -> Result<&PiecewisePolynomial> {
    problem.piecewise.as_ref().ok_or_else(|| Error::Parse("the problem file has no piecewise section".into()))
}

fn pp_to_mw_cmd(problem: &Problem, diag: &mut Map<String, Value>) -> Result<Value> {
    let f = piecewise_of(problem)?;
    let fan = &problem.fan;
    let residues = fan
        .cone_ids()
        .map(|t| piecewise::residue_sum(f, t).map(|r| cone_row(fan, t, "residue", json!(r.to_string()))))
        .collect::<Result<Vec<_>>>()?;
    let w = piecewise::pp_to_mw(f, &problem.mixing)?;
    diag.insert("balancing".into(), balancing_json(&w)?);
    Ok(json!({"degree": f.degree(), "residues": residues, "weight": weight_table(&w)}))
}

fn equiv_mult_cmd(problem: &Problem, opts: &Options) -> Result<Value> {
    let fan = &problem.fan;
    let sigma_key = opts.sigma.as_deref().ok_or_else(|| Error::Parse("equiv-mult needs --sigma".into()))?;
    let sigma = find_cone(fan, sigma_key)?;
    let faces: Vec<ConeId> = match &opts.tau {
        Some(t) => vec![find_cone(fan, t)?],
        None => fan.cone_ids().filter(|&t| fan.is_face_of(t, sigma)).collect(),
    };
    let rows = faces
        .into_iter()
        .map(|t| {
            piecewise::equivariant_multiplicity(fan, sigma, t)
                .map(|e| json!({"tau": fan.label(t), "value": e.to_string()}))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({"sigma": fan.label(sigma), "multiplicities": rows}))
}

fn residue_cmd(problem: &Problem, opts: &Options) -> Result<Value> {
    let f = piecewise_of(problem)?;
    let fan = &problem.fan;
    let cones: Vec<ConeId> = match &opts.tau {
        Some(t) => vec![find_cone(fan, t)?],
        None => fan.cone_ids().collect(),
    };
    let rows = cones
        .into_iter()
        .map(|t| piecewise::residue_sum(f, t).map(|r| cone_row(fan, t, "residue", json!(r.to_string()))))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({"residues": rows}))
}

fn presentation_cmd(problem: &Problem, opts: &Options) -> Result<Value> {
    let fan = &problem.fan;
    let pres = if opts.equivariant {
        chow::equivariant_presentation(fan, &problem.mixing)?
    } else {
        chow::homology_presentation(fan, &problem.mixing)?
    };
    let generators: Vec<Value> = pres
        .generators
        .iter()
        .map(|&(s, deg)| json!({"cone": fan.label(s), "name": chow::stratum_name(fan, s), "degree": deg}))
        .collect();
    let relations: Vec<Value> =
        fan.cone_ids().map(|t| cone_row(fan, t, "relations", json!(pres.rendered_at(t)))).collect();
    Ok(json!({"equivariant": opts.equivariant, "generators": generators, "relations": relations}))
}

fn subbundle_cmd(problem: &Problem, opts: &Options, diag: &mut Map<String, Value>) -> Result<Value> {
    let fan = &problem.fan;
    let sub = problem.sublattice.as_ref().ok_or_else(|| Error::Parse("the problem file has no sublattice".into()))?;
    if !sub.is_saturated() {
        return Err(Error::NotSaturated);
    }
    let (v, cert) = choose_vector(
        problem,
        opts,
        |v| fan::sigma_v_set(fan, sub, v).is_ok_and(|s| s.generic),
        |seed| fan::find_generic_for_sublattice(fan, sub, seed, opts.budget()),
    )?;
    diag.insert("genericity".into(), cert);
    let sv = fan::sigma_v_set(fan, sub, &v)?;
    diag.insert("sigma_v".into(), json!(sv.cones.iter().map(|&c| fan.label(c)).collect::<Vec<_>>()));
    let class = minkowski::subbundle_class(fan, sub, &v)?;
    let terms: Vec<Value> = class
        .terms
        .iter()
        .filter(|(_, c)| **c != BigInt::from(0))
        .map(|(&s, c)| {
            json!({"cone": fan.label(s), "stratum": chow::stratum_name(fan, s), "coefficient": c.to_string()})
        })
        .collect();
    Ok(json!({"terms": terms}))
}

/// Renders a document as indented text with aligned columns for cone
/// tables.
pub fn render_table(doc: &Value) -> String {
    let mut out = String::new();
    render_value(&mut out, doc, 0);
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) if items.is_empty() => "(none)".into(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join("; "),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(|i| !matches!(i, Value::Object(_) | Value::Array(_))),
        _ => true,
    }
}

fn render_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) if map.is_empty() => {
            let _ = writeln!(out, "{pad}(none)");
        }
        Value::Object(map) => {
            for (k, x) in map {
                if is_scalar(x) {
                    let _ = writeln!(out, "{pad}{k}: {}", scalar(x));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    render_value(out, x, indent + 1);
                }
            }
        }
        Value::Array(rows) if rows.iter().all(|r| matches!(r, Value::Object(m) if m.values().all(is_scalar))) => {
            if rows.is_empty() {
                let _ = writeln!(out, "{pad}(none)");
                return;
            }
            // Columns in first-row key order, `cone` first when present.
            let mut cols: Vec<String> = rows[0].as_object().unwrap().keys().cloned().collect();
            if let Some(i) = cols.iter().position(|c| c == "cone") {
                let c = cols.remove(i);
                cols.insert(0, c);
            }
            let cells: Vec<Vec<String>> =
                rows.iter().map(|r| cols.iter().map(|c| scalar(r.get(c).unwrap_or(&Value::Null))).collect()).collect();
            let widths: Vec<usize> = (0..cols.len())
                .map(|j| cells.iter().map(|r| r[j].chars().count()).chain([cols[j].len()]).max().unwrap())
                .collect();
            let line = |row: &[String]| {
                let parts: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
                format!("{pad}{}", parts.join("  ").trim_end())
            };
            let _ = writeln!(out, "{}", line(&cols));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                let _ = writeln!(out, "{pad}[{}]", i + 1);
                render_value(out, x, indent + 1);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other));
        }
    }
}
