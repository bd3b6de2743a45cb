//! Specification documents, the fixture catalog, command dispatch and
//! report emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebroid::Algebroid;
use crate::battery::{gerstenhaber_battery, poissonization_battery};
use crate::error::{Error, Result};
use crate::expr::{simplify_basic, Expr, VarSpace};
use crate::graded::{AForm, Multivector};
use crate::jacobi::{check_base_compatibility, JacobiAlgebroid};
use crate::modular::{
    bridge_report, covered_fields, dual_reports, duality_battery, field_hierarchy, mnp_relation, modular_reports,
    xnp_reports, ModularData,
};
use crate::nijenhuis::{
    check_extended_deformation, deformed_jacobi, is_compatible, poisson_transfer, strong_concomitant_report,
    torsion_report, Endo, JnAlgebroid,
};
use crate::random;
use crate::sampling::{Report, Sampling};

/// A structure in coordinates, every function given as an expression string.
/// Keys of `structure` are `"k,i,j"` for `C^k_ij` and keys of `P` are `"i,j"`,
/// 1-based; entries missing on the antisymmetric side are filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub coords: Vec<String>,
    pub rank: usize,
    pub anchor: Vec<Vec<String>>,
    #[serde(default)]
    pub structure: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi0: Option<Vec<String>>,
    #[serde(default, rename = "P", skip_serializing_if = "Option::is_none")]
    pub p: Option<BTreeMap<String, String>>,
    #[serde(default, rename = "P2", skip_serializing_if = "Option::is_none")]
    pub p2: Option<BTreeMap<String, String>>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<Sampling>,
}

impl SpecDocument {
    pub fn from_json(text: &str) -> Result<SpecDocument> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("spec document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// Reads and parses a spec file; the document is returned only if every
/// expression in it parses.
pub fn load_spec(path: &std::path::Path) -> Result<SpecDocument> {
    let text = std::fs::read_to_string(path)?;
    let doc = SpecDocument::from_json(&text)?;
    Model::from_doc(&doc)?;
    Ok(doc)
}

/// The parsed form of a [`SpecDocument`].
#[derive(Debug, Clone)]
pub struct Model {
    pub jacobi: JacobiAlgebroid,
    pub p: Option<Multivector>,
    pub p2: Option<Multivector>,
    pub n: Option<Endo>,
    pub modular: Option<ModularData>,
    pub sampling: Option<Sampling>,
}

fn parse_in(vars: &VarSpace, field: &str, text: &str) -> Result<Expr> {
    vars.parse(text).map_err(|source| Error::Field { field: field.to_string(), source })
}

fn index_key(key: &str, arity: usize, rank: usize, field: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    let bad = || Error::Config(format!("{field}: key `{key}` must be {arity} indices in 1..={rank}"));
    if parts.len() != arity {
        return Err(bad());
    }
    parts
        .iter()
        .map(|p| match p.parse::<usize>() {
            Ok(i) if (1..=rank).contains(&i) => Ok(i - 1),
            _ => Err(bad()),
        })
        .collect()
}

fn bivector(vars: &VarSpace, rank: usize, entries: &BTreeMap<String, String>, field: &str) -> Result<Multivector> {
    let mut upper: BTreeMap<(usize, usize), Expr> = BTreeMap::new();
    for (key, text) in entries {
        let ix = index_key(key, 2, rank, field)?;
        let (i, j) = (ix[0], ix[1]);
        if i == j {
            return Err(Error::Config(format!("{field}: diagonal entry `{key}`")));
        }
        let e = parse_in(vars, &format!("{field}[{key}]"), text)?;
        let (k, e) = if i < j { ((i, j), e) } else { ((j, i), -e) };
        if let Some(prev) = upper.get(&k) {
            if simplify_basic(&(prev - &e)) != Expr::zero() {
                return Err(Error::Config(format!("{field}: entries ({},{}) and ({},{}) are not opposite", k.0 + 1, k.1 + 1, k.1 + 1, k.0 + 1)));
            }
        }
        upper.insert(k, e);
    }
    let mut c = Vec::new();
    for i in 0..rank {
        for j in i + 1..rank {
            c.push(upper.remove(&(i, j)).unwrap_or_else(Expr::zero));
        }
    }
    Multivector::from_coeffs(rank, 2, c)
}

impl Model {
    pub fn from_doc(doc: &SpecDocument) -> Result<Model> {
        let vars = VarSpace::new(&doc.coords).map_err(|source| Error::Field { field: "coords".into(), source })?;
        let n = doc.rank;
        let m = vars.len();
        if n == 0 {
            return Err(Error::Config("rank must be positive".into()));
        }
        if doc.anchor.len() != n || doc.anchor.iter().any(|r| r.len() != m) {
            return Err(Error::Config(format!("anchor must have {n} rows of {m} entries")));
        }
        let anchor = doc
            .anchor
            .iter()
            .enumerate()
            .map(|(a, row)| {
                row.iter()
                    .enumerate()
                    .map(|(mu, t)| parse_in(&vars, &format!("anchor[{}][{}]", a + 1, mu + 1), t))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let mut given: BTreeMap<(usize, usize, usize), Expr> = BTreeMap::new();
        for (key, text) in &doc.structure {
            let ix = index_key(key, 3, n, "structure")?;
            given.insert((ix[0], ix[1], ix[2]), parse_in(&vars, &format!("structure[{key}]"), text)?);
        }
        let a = Algebroid::new(vars.clone(), n, anchor, |k, i, j| match given.get(&(k, i, j)) {
            Some(e) => e.clone(),
            None => given.get(&(k, j, i)).map(|e| -e.clone()).unwrap_or_else(Expr::zero),
        })?;

        let phi0 = match &doc.phi0 {
            None => AForm::zero(n, 1),
            Some(v) => {
                if v.len() != n {
                    return Err(Error::Config(format!("phi0 must have {n} entries")));
                }
                let c = v
                    .iter()
                    .enumerate()
                    .map(|(i, t)| parse_in(&vars, &format!("phi0[{}]", i + 1), t))
                    .collect::<Result<Vec<_>>>()?;
                AForm::from_coeffs(n, 1, c)?
            }
        };
        let jacobi = JacobiAlgebroid::new(a, phi0)?;
        let p = doc.p.as_ref().map(|e| bivector(&vars, n, e, "P")).transpose()?;
        let p2 = doc.p2.as_ref().map(|e| bivector(&vars, n, e, "P2")).transpose()?;
        let endo = match &doc.n {
            None => None,
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Config(format!("N must be a {n}x{n} matrix")));
                }
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        r.iter()
                            .enumerate()
                            .map(|(j, t)| parse_in(&vars, &format!("N[{}][{}]", i + 1, j + 1), t))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(Endo::new(rows)?)
            }
        };
        let modular = match (&doc.eta, &doc.nu, &doc.mu) {
            (None, None, None) => None,
            (Some(e), Some(v), Some(u)) => Some(ModularData::new(
                parse_in(&vars, "eta", e)?,
                parse_in(&vars, "nu", v)?,
                parse_in(&vars, "mu", u)?,
            )),
            _ => return Err(Error::Config("eta, nu and mu must be given together".into())),
        };
        if let Some(s) = &doc.sampling {
            s.validate()?;
        }
        Ok(Model { jacobi, p, p2, n: endo, modular, sampling: doc.sampling })
    }

    pub fn vars(&self) -> &VarSpace {
        self.jacobi.algebroid().vars()
    }
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn entries(v: &[(&str, &str)]) -> BTreeMap<String, String> {
    v.iter().map(|(k, e)| (k.to_string(), e.to_string())).collect()
}

fn scalar_matrix(n: usize, f: &str) -> Vec<Vec<String>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { f.to_string() } else { "0".into() }).collect()).collect()
}

fn identity_rows(n: usize, m: usize) -> Vec<Vec<String>> {
    (0..n).map(|a| (0..m).map(|mu| if a == mu { "1".into() } else { "0".into() }).collect()).collect()
}

fn coord_names(m: usize) -> Vec<String> {
    if m <= 3 {
        ["x", "y", "z"][..m].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=m).map(|i| format!("x{i}")).collect()
    }
}

/// Rank 2 over the line, zero anchor and bracket, `phi0 = eps^1`,
/// `P = x e_1^e_2`, `N = (1 + x^2) Id`.
pub fn abelian2() -> SpecDocument {
    SpecDocument {
        coords: strings(&["x"]),
        rank: 2,
        anchor: vec![strings(&["0"]), strings(&["0"])],
        structure: BTreeMap::new(),
        phi0: Some(strings(&["1", "0"])),
        p: Some(entries(&[("1,2", "x")])),
        p2: None,
        n: Some(scalar_matrix(2, "1 + x^2")),
        eta: Some("1".into()),
        mu: Some("1".into()),
        nu: Some("1".into()),
        sampling: None,
    }
}

/// `TR^m` with the Poisson bivector `(1 + x^2) d/dx ^ d/dy` when `m >= 2`
/// and `N = (2 + x) Id`, or `2 Id` from dimension 3 on.
pub fn tangent(m: usize) -> SpecDocument {
    let coords = coord_names(m);
    let p = (m >= 2).then(|| entries(&[("1,2", &format!("1 + {}^2", coords[0]))]));
    // f Id is compatible with P only in dimension 2 unless f is constant
    let n = scalar_matrix(m, &if m <= 2 { format!("2 + {}", coords[0]) } else { "2".into() });
    let (eta, nu, mu) = if m >= 2 {
        (format!("exp({})", coords[1]), format!("exp(-{})", coords[1]), format!("2 + sin({})", coords[0]))
    } else {
        ("1".into(), "1".into(), "1".into())
    };
    SpecDocument {
        anchor: identity_rows(m, m),
        coords,
        rank: m,
        structure: BTreeMap::new(),
        phi0: None,
        p,
        p2: None,
        n: Some(n),
        eta: Some(eta),
        mu: Some(mu),
        nu: Some(nu),
        sampling: None,
    }
}

fn parse_pair(coords: &[String], lambda: &BTreeMap<String, String>, e: &[String]) -> Result<(VarSpace, Multivector, Vec<Expr>)> {
    let vars = VarSpace::new(coords).map_err(|source| Error::Field { field: "coords".into(), source })?;
    let m = vars.len();
    if e.len() != m {
        return Err(Error::Config(format!("E must have {m} components")));
    }
    let lam = bivector(&vars, m, lambda, "Lambda")?;
    let e = e
        .iter()
        .enumerate()
        .map(|(i, t)| parse_in(&vars, &format!("E[{}]", i + 1), t))
        .collect::<Result<Vec<_>>>()?;
    Ok((vars, lam, e))
}

/// `TM x R` with the bivector `P = Lambda + e_{m+1} ^ E` of a Jacobi pair.
/// The frame is `d/dx^1..d/dx^m, (0,1)`, `phi0 = (0,1)`.
pub fn tmr_of_jacobi(coords: &[String], lambda: &BTreeMap<String, String>, e: &[String]) -> Result<SpecDocument> {
    let (_, lam, ev) = parse_pair(coords, lambda, e)?;
    let m = coords.len();
    let mut p = BTreeMap::new();
    for (idx, c) in lam.iter() {
        if !c.is_zero() {
            p.insert(format!("{},{}", idx[0] + 1, idx[1] + 1), c.to_string());
        }
    }
    for (i, c) in ev.iter().enumerate() {
        if !c.is_zero() {
            p.insert(format!("{},{}", i + 1, m + 1), simplify_basic(&-c.clone()).to_string());
        }
    }
    let mut anchor = identity_rows(m, m);
    anchor.push(vec!["0".into(); m]);
    let mut phi0 = vec!["0".to_string(); m];
    phi0.push("1".into());
    Ok(SpecDocument {
        coords: coords.to_vec(),
        rank: m + 1,
        anchor,
        structure: BTreeMap::new(),
        phi0: Some(phi0),
        p: Some(p),
        p2: None,
        n: None,
        eta: None,
        mu: None,
        nu: None,
        sampling: None,
    })
}

/// `T*M x R` with the bracket of 1-jets of the pair and the 1-cocycle
/// `(-E, 0)`. The frame is `dx^1..dx^m, (0,1)`.
pub fn tmr_dual(coords: &[String], lambda: &BTreeMap<String, String>, e: &[String]) -> Result<SpecDocument> {
    let (_, lam, ev) = parse_pair(coords, lambda, e)?;
    let m = coords.len();
    let l = |i: usize, j: usize| lam.component(&[i, j]);
    let mut structure = BTreeMap::new();
    let mut put = |k: usize, i: usize, j: usize, c: Expr| {
        let c = simplify_basic(&c);
        if !c.is_zero() {
            structure.insert(format!("{},{},{}", k + 1, i + 1, j + 1), c.to_string());
        }
    };
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    for i in 0..m {
        for j in i + 1..m {
            for k in 0..m {
                put(k, i, j, l(i, j).diff(k) - &ev[i] * delta(k, j) + &ev[j] * delta(k, i));
            }
            put(m, i, j, -l(i, j));
        }
        for k in 0..m {
            put(k, i, m, -ev[i].diff(k));
        }
    }
    let mut anchor: Vec<Vec<String>> =
        (0..m).map(|i| (0..m).map(|mu| simplify_basic(&l(i, mu)).to_string()).collect()).collect();
    anchor.push(ev.iter().map(|c| c.to_string()).collect());
    let mut phi0: Vec<String> = ev.iter().map(|c| simplify_basic(&-c.clone()).to_string()).collect();
    phi0.push("0".into());
    Ok(SpecDocument {
        coords: coords.to_vec(),
        rank: m + 1,
        anchor,
        structure,
        phi0: Some(phi0),
        p: None,
        p2: None,
        n: None,
        eta: None,
        mu: None,
        nu: None,
        sampling: None,
    })
}

fn default_pair() -> (Vec<String>, BTreeMap<String, String>, Vec<String>) {
    (strings(&["x", "y"]), entries(&[("1,2", "1 + y^2")]), strings(&["1", "0"]))
}

fn named_tmr() -> SpecDocument {
    let (c, l, e) = default_pair();
    let mut doc = tmr_of_jacobi(&c, &l, &e).expect("catalog pair parses");
    doc.p2 = Some(entries(&[("1,2", "y"), ("1,3", "-1")]));
    doc.n = Some(scalar_matrix(3, "2"));
    doc.eta = Some("exp(x)".into());
    doc.nu = Some("exp(-x)".into());
    doc.mu = Some("1 + y^2".into());
    doc
}

fn named_contact() -> SpecDocument {
    let c = strings(&["x", "y", "z"]);
    let l = entries(&[("1,2", "1"), ("3,2", "y")]);
    let e = strings(&["0", "0", "1"]);
    let mut doc = tmr_of_jacobi(&c, &l, &e).expect("catalog pair parses");
    doc.n = Some(scalar_matrix(4, "2"));
    doc.eta = Some("exp(x)".into());
    doc.nu = Some("exp(-x)".into());
    doc.mu = Some("1 + y^2".into());
    doc
}

fn named_e2() -> SpecDocument {
    let mut doc = tmr_of_jacobi(&strings(&["z"]), &BTreeMap::new(), &strings(&["1"])).expect("catalog pair parses");
    doc.eta = Some("1".into());
    doc.nu = Some("1".into());
    doc.mu = Some("1".into());
    doc
}

pub const FIXTURES: &[&str] = &["abelian2", "tangent(m)", "tmr_of_jacobi", "tmr_dual", "contact_r3", "e2_line"];

/// A catalog structure by name. `tangent(m)` takes the dimension,
/// `tangent` alone means `tangent(2)`.
pub fn fixture(name: &str) -> Result<SpecDocument> {
    let name = name.trim();
    let unknown = || Error::Config(format!("unknown fixture `{name}` (known: {})", FIXTURES.join(", ")));
    if let Some(rest) = name.strip_prefix("tangent") {
        let m = match rest {
            "" => 2,
            r => r
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|r| r.trim().parse::<usize>().ok())
                .filter(|m| (1..=6).contains(m))
                .ok_or_else(unknown)?,
        };
        return Ok(tangent(m));
    }
    match name {
        "abelian2" => Ok(abelian2()),
        "tmr_of_jacobi" => Ok(named_tmr()),
        "tmr_dual" => {
            let (c, l, e) = default_pair();
            let mut doc = tmr_dual(&c, &l, &e)?;
            doc.eta = Some("1".into());
            doc.nu = Some("1".into());
            doc.mu = Some("1 + y^2".into());
            Ok(doc)
        }
        "contact_r3" => Ok(named_contact()),
        "e2_line" => Ok(named_e2()),
        _ => Err(unknown()),
    }
}

/// The structural checks every catalog entry must pass when loaded.
pub fn gate_reports(model: &Model, s: &Sampling) -> Result<Vec<Report>> {
    let mut out = validate(model, s)?;
    if let Some(p) = &model.p {
        out.push(model.jacobi.is_jacobi_bivector(p, s)?);
        out.extend(model.jacobi.dual_of(p)?.induced_base()?.check(s)?);
    }
    if let Some(p2) = &model.p2 {
        out.push(model.jacobi.is_jacobi_bivector(p2, s)?);
    }
    Ok(out)
}

/// A catalog fixture, failing unless its gates pass.
pub fn load_fixture(name: &str, s: &Sampling) -> Result<Model> {
    let model = Model::from_doc(&fixture(name)?)?;
    if let Some(r) = gate_reports(&model, s)?.into_iter().find(|r| !r.pass) {
        return Err(Error::Identity { what: format!("fixture `{name}` gate `{}`", r.check), residual: r.residual });
    }
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    CheckJacobi,
    CheckCompat,
    CheckNijenhuis,
    Hierarchy,
    Modular,
    Duality,
    PoissonizeDiff,
    All,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Validate,
        Command::CheckJacobi,
        Command::CheckCompat,
        Command::CheckNijenhuis,
        Command::Hierarchy,
        Command::Modular,
        Command::Duality,
        Command::PoissonizeDiff,
        Command::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::CheckJacobi => "check-jacobi",
            Command::CheckCompat => "check-compat",
            Command::CheckNijenhuis => "check-nijenhuis",
            Command::Hierarchy => "hierarchy",
            Command::Modular => "modular",
            Command::Duality => "duality",
            Command::PoissonizeDiff => "poissonize-diff",
            Command::All => "all",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Command> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown command `{s}`")))
    }
}

fn need<'a, T>(x: &'a Option<T>, what: &str, cmd: Command) -> Result<&'a T> {
    x.as_ref().ok_or_else(|| Error::Config(format!("`{}` needs {what} in the spec", cmd.name())))
}

fn prefixed(mut rs: Vec<Report>, prefix: &str) -> Vec<Report> {
    for r in &mut rs {
        r.check = format!("{prefix}: {}", r.check);
    }
    rs
}

fn validate(model: &Model, s: &Sampling) -> Result<Vec<Report>> {
    let mut out = model.jacobi.algebroid().validate(s);
    out.push(model.jacobi.check_cocycle(s)?);
    Ok(out)
}

fn check_jacobi(model: &Model, s: &Sampling) -> Result<Vec<Report>> {
    let p = need(&model.p, "P", Command::CheckJacobi)?;
    let j = &model.jacobi;
    let mut out = vec![j.check_cocycle(s)?, j.is_jacobi_bivector(p, s)?];
    let tri = j.dual_of(p)?;
    out.extend(prefixed(tri.dual().validate(s), "dual"));
    out.push(tri.check_x0_cocycle(s)?);
    out.extend(prefixed(tri.induced_base()?.check(s)?, "induced"));
    Ok(out)
}

fn compat_pair(j: &JacobiAlgebroid, p1: &Multivector, p2: &Multivector, label: &str, s: &Sampling) -> Result<Vec<Report>> {
    let mut out = vec![j.is_jacobi_bivector(p1, s)?, j.is_jacobi_bivector(p2, s)?];
    let comp = j.bivectors_compatible(p1, p2, s)?;
    let b1 = j.dual_of(p1)?.induced_base()?;
    let b2 = j.dual_of(p2)?.induced_base()?;
    let base = check_base_compatibility(&b1, &b2, s)?;
    let holds = comp.iter().all(|r| r.pass);
    let implied = !holds || base.iter().all(|r| r.pass);
    out.extend(comp);
    out.extend(base);
    out.push(Report::exact(
        "compatibility descends to the base",
        "[P1,P2]^phi0 = 0 implies the base pairs are compatible",
        implied,
        s,
    ));
    Ok(prefixed(out, label))
}

fn check_compat(model: &Model, s: &Sampling) -> Result<Vec<Report>> {
    let p = need(&model.p, "P", Command::CheckCompat)?;
    let j = &model.jacobi;
    let mut out = compat_pair(j, p, &p.scale(&Expr::num(2.0)), "P, 2P", s)?;
    if let Some(p2) = &model.p2 {
        out.extend(compat_pair(j, p, p2, "P, P2", s)?);
    }
    if let Some(n) = &model.n {
        if let Ok(np) = n.on_bivector(p) {
            if j.is_jacobi_bivector(&np, s)?.pass {
                out.extend(compat_pair(j, p, &np, "P, NP", s)?);
            }
        }
    }
    Ok(out)
}

fn check_nijenhuis(model: &Model, s: &Sampling) -> Result<Vec<Report>> {
    let cmd = Command::CheckNijenhuis;
    let p = need(&model.p, "P", cmd)?;
    let n = need(&model.n, "N", cmd)?;
    let j = &model.jacobi;
    let mut out = vec![torsion_report(j.algebroid(), n, s)?];
    let jn = deformed_jacobi(j, n)?;
    let mut r = jn.check_cocycle(s)?;
    r.check = "deformed cocycle".into();
    r.anchor = "d_N(N* phi0) = 0".into();
    out.push(r);
    let tri = j.dual_of(p)?;
    out.extend(is_compatible(&tri, n, s)?);
    out.push(strong_concomitant_report(&tri, n, s)?);
    out.extend(poisson_transfer(&tri, n, s)?);
    out.push(check_extended_deformation(j, n, s)?);
    Ok(out)
}

const KMAX: usize = 3;

fn jn_model(model: &Model, cmd: Command, s: &Sampling) -> Result<JnAlgebroid> {
    let p = need(&model.p, "P", cmd)?;
    let n = need(&model.n, "N", cmd)?;
    JnAlgebroid::new(model.jacobi.dual_of(p)?, n.clone(), s)
}

fn levels() -> Vec<(i64, i64)> {
    vec![(1, 1), (0, 2), (2, 0), (1, 2), (2, 1), (0, 3), (3, 0)]
}

fn hierarchy(model: &Model, s: &Sampling) -> Result<Vec<Report>> {
    let jn = jn_model(model, Command::Hierarchy, s)?;
    let mut out = jn.bivector_hierarchy(KMAX, s)?.1;
    out.extend(jn.base_hierarchy(KMAX, s)?.1);
    out.extend(jn.dual_hierarchy(KMAX, s)?.1);
    let (lv, rs) = field_hierarchy(&jn, &levels(), s)?;
    out.extend(rs);
    out.extend(covered_fields(&jn, &lv, s)?.1);
    Ok(out)
}

// seeded positive rescalings exp(g) of the top sections
fn rescalings(vars: &VarSpace, m: usize, s: &Sampling) -> Vec<(Expr, Expr)> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(7));
    (0..3)
        .map(|_| {
            let a = random::function(vars, m, &mut rng).exp();
            let b = random::function(vars, m, &mut rng).exp();
            (a, b)
        })
        .collect()
}

fn rescaled(md: &ModularData, vars: &VarSpace, m: usize, s: &Sampling) -> Vec<ModularData> {
    rescalings(vars, m, s)
        .into_iter()
        .map(|(f, g)| ModularData::new(simplify_basic(&(&md.eta / &f)), simplify_basic(&(&md.nu * &f)), simplify_basic(&(&md.mu * &g))))
        .collect()
}

fn modular(model: &Model, s: &Sampling) -> Result<Vec<Report>> {
    let md = need(&model.modular, "eta, nu and mu", Command::Modular)?;
    let j = &model.jacobi;
    let vars = model.vars();
    let m = vars.len();
    let mut out = modular_reports(j, md, &rescalings(vars, m, s), s)?;
    if let Some(p) = &model.p {
        let tri = j.dual_of(p)?;
        out.extend(dual_reports(&tri, md, s)?);
        out.push(bridge_report(&tri, md, s)?);
        if model.n.is_some() {
            let jn = jn_model(model, Command::Modular, s)?;
            let more = rescaled(md, vars, m, s);
            out.extend(xnp_reports(&jn, md, &more, s)?);
            out.extend(mnp_relation(&jn, md, &more, s)?);
        }
    }
    Ok(out)
}

fn duality(model: &Model, s: &Sampling) -> Result<Vec<Report>> {
    let cmd = Command::Duality;
    let p = need(&model.p, "P", cmd)?;
    let md = need(&model.modular, "eta, nu and mu", cmd)?;
    let j = &model.jacobi;
    let a = j.algebroid();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(11));
    let extra: Vec<AForm> = (0..2).map(|_| random::antisym(a.rank(), 1, a.vars(), a.base_dim(), 0.8, &mut rng)).collect();
    duality_battery(&j.dual_of(p)?, md, &extra, s)
}

fn poissonize(model: &Model, s: &Sampling) -> Result<Vec<Report>> {
    poissonization_battery(&model.jacobi, model.p.as_ref(), 3, s)
}

/// Runs one command. `all` runs every battery the spec has data for.
pub fn run(cmd: Command, model: &Model, s: &Sampling) -> Result<Vec<Report>> {
    s.validate()?;
    match cmd {
        Command::Validate => validate(model, s),
        Command::CheckJacobi => check_jacobi(model, s),
        Command::CheckCompat => check_compat(model, s),
        Command::CheckNijenhuis => check_nijenhuis(model, s),
        Command::Hierarchy => hierarchy(model, s),
        Command::Modular => modular(model, s),
        Command::Duality => duality(model, s),
        Command::PoissonizeDiff => poissonize(model, s),
        Command::All => {
            let mut out = validate(model, s)?;
            out.extend(prefixed(gerstenhaber_battery(&model.jacobi, 3, s)?, "bracket"));
            out.extend(prefixed(poissonize(model, s)?, "poissonization"));
            let has_p = model.p.is_some();
            let has_n = has_p && model.n.is_some();
            let has_md = model.modular.is_some();
            let parts: [(bool, Command, fn(&Model, &Sampling) -> Result<Vec<Report>>); 6] = [
                (has_p, Command::CheckJacobi, check_jacobi),
                (has_p, Command::CheckCompat, check_compat),
                (has_n, Command::CheckNijenhuis, check_nijenhuis),
                (has_n, Command::Hierarchy, hierarchy),
                (has_md, Command::Modular, modular),
                (has_p && has_md, Command::Duality, duality),
            ];
            for (ok, c, f) in parts {
                if ok {
                    out.extend(prefixed(f(model, s)?, c.name()));
                }
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Serialize)]
struct Record<'a> {
    check: &'a str,
    anchor: &'a str,
    residual: Option<f64>,
    pass: bool,
    witness: &'a [f64],
    seed: u64,
}

/// Serializes reports. JSON is an array of records, a non-finite residual
/// written as `null`.
pub fn emit_report(reports: &[Report], format: Format) -> String {
    match format {
        Format::Json => {
            let recs: Vec<Record> = reports
                .iter()
                .map(|r| Record {
                    check: &r.check,
                    anchor: &r.anchor,
                    residual: r.residual.is_finite().then_some(r.residual),
                    pass: r.pass,
                    witness: &r.witness,
                    seed: r.seed,
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&recs).expect("records serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                let status = if r.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{status}  {:<58} residual {:.3e}  [{}]", r.check, r.residual, r.anchor);
            }
            if let Some(r) = reports.first() {
                let failed = reports.iter().filter(|r| !r.pass).count();
                let _ = writeln!(
                    s,
                    "{} checks, {} failed (points {}, seed {}, box [{}, {}])",
                    reports.len(),
                    failed,
                    r.points,
                    r.seed,
                    r.bounds.0,
                    r.bounds.1
                );
            } else {
                s.push_str("0 checks\n");
            }
            s
        }
    }
}
