//! Acceptance suite: one line per criterion, default sampling
//! (25 points, seed 42, tolerance 1e-8, box [-1, 1]).

use std::time::{Duration, Instant};

use jnalg::battery::{gerstenhaber_battery, poissonization_battery};
use jnalg::catalog::{emit_report, load_fixture, run, Command, Format, Model};
use jnalg::jacobi::check_base_compatibility;
use jnalg::modular::{bridge_report, field_hierarchy};
use jnalg::nijenhuis::is_compatible;
use jnalg::random;
use jnalg::{simplify_basic, AForm, Algebroid, Expr, JnAlgebroid, Report, Result, Sampling};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BASIC: [&str; 3] = ["abelian2", "tangent(2)", "tmr_of_jacobi"];
const CATALOG: [&str; 8] =
    ["abelian2", "tangent(1)", "tangent(2)", "tangent(3)", "tmr_of_jacobi", "tmr_dual", "contact_r3", "e2_line"];

struct Outcome {
    pass: bool,
    checks: usize,
    worst: f64,
    failed: Vec<String>,
    note: String,
}

impl Outcome {
    fn from_reports(reports: &[Report]) -> Outcome {
        let failed: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.check.clone()).collect();
        let worst = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
        Outcome { pass: failed.is_empty() && !reports.is_empty(), checks: reports.len(), worst, failed, note: String::new() }
    }

    fn within(mut self, limit: Duration, took: Duration) -> Outcome {
        if took > limit {
            self.pass = false;
            self.failed.push(format!("took {took:.1?}, limit {limit:?}"));
        }
        self.note = format!("{took:.2?}");
        self
    }
}

fn model(name: &str) -> Model {
    load_fixture(name, &Sampling::default()).unwrap()
}

fn labelled(name: &str, mut rs: Vec<Report>) -> Vec<Report> {
    for r in &mut rs {
        r.check = format!("{name}: {}", r.check);
    }
    rs
}

fn gerstenhaber(s: &Sampling) -> Result<Outcome> {
    let start = Instant::now();
    let mut out = Vec::new();
    for name in BASIC {
        out.extend(labelled(name, gerstenhaber_battery(&model(name).jacobi, 3, s)?));
    }
    Ok(Outcome::from_reports(&out).within(Duration::from_secs(30), start.elapsed()))
}

fn poissonization(s: &Sampling) -> Result<Outcome> {
    let mut out = Vec::new();
    for name in BASIC {
        let m = model(name);
        out.extend(labelled(name, poissonization_battery(&m.jacobi, m.p.as_ref(), 3, s)?));
    }
    Ok(Outcome::from_reports(&out))
}

// a form on the base placed in the first m slots of the frame of TM x R
fn lift(w: &AForm, rank: usize) -> Result<AForm> {
    let parts = w.iter().map(|(idx, c)| AForm::basis(rank, &idx, c.clone())).collect::<Result<Vec<_>>>()?;
    AForm::sum_of(rank, w.degree(), &parts)
}

// (a, b) -> a + eps^(m+1) ^ b
fn pair_form(a: &AForm, b: &AForm, rank: usize) -> Result<AForm> {
    let top = AForm::basis(rank, &[rank - 1], Expr::one())?;
    lift(a, rank)?.add(&top.wedge(&lift(b, rank)?)?)
}

fn exact_zero(w: &AForm, s: &Sampling, vars: &jnalg::VarSpace) -> bool {
    let pts = s.points_for(vars);
    w.coeffs().iter().all(|c| simplify_basic(c).is_zero() && pts.iter().all(|p| c.eval_slice(p).unwrap() == 0.0))
}

fn catalog_exactness(s: &Sampling) -> Result<Outcome> {
    let m = model("tmr_of_jacobi");
    let j = &m.jacobi;
    let rank = j.rank();
    let base = Algebroid::tangent(j.algebroid().vars().clone());
    let vars = base.vars().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut out = Vec::new();
    let mut d_ok = true;
    let mut dphi_ok = true;
    for p in 1..=rank {
        for _ in 0..3 {
            let a: AForm = random::antisym(rank - 1, p.min(rank - 1), &vars, vars.len(), 0.8, &mut rng);
            let a = if p < rank { a } else { AForm::zero(rank - 1, p) };
            let b: AForm = random::antisym(rank - 1, p - 1, &vars, vars.len(), 0.8, &mut rng);
            let w = pair_form(&a, &b, rank)?;
            let (da, db) = (base.differential(&a)?, base.differential(&b)?);
            let d = j.algebroid().differential(&w)?.sub(&pair_form(&da, &db.neg(), rank)?)?;
            let dphi = j.phi_diff(&w)?.sub(&pair_form(&da, &a.sub(&db)?, rank)?)?;
            d_ok &= exact_zero(&d, s, &vars);
            dphi_ok &= exact_zero(&dphi, s, &vars);
        }
    }
    out.push(Report::exact("d(a,b) = (da, -db)", "exact", d_ok, s));
    out.push(Report::exact("d^phi0(a,b) = (da, a - db)", "exact", dphi_ok, s));

    let tri = j.build_dual(m.p.as_ref().unwrap(), s)?;
    let expected = model("tmr_dual");
    let pts = s.points_for(&vars);
    let r = tri.dual().residual_to(expected.jacobi.algebroid(), &pts)?;
    out.push(Report::new("dual of tmr_of_jacobi is tmr_dual", "A*_P = T*M x R", r, s));
    let r = jnalg::Residual::between(tri.x0_form().coeffs(), expected.jacobi.phi0().coeffs(), &pts);
    out.push(Report::new("X0 is the cocycle of tmr_dual", "X0 = (-E, 0)", r, s));
    Ok(Outcome::from_reports(&out))
}

fn base_compatibility(s: &Sampling) -> Result<Outcome> {
    let m = model("tmr_of_jacobi");
    let j = &m.jacobi;
    let p = m.p.as_ref().unwrap();
    let n = m.n.as_ref().unwrap();
    let partners = [
        ("2P", p.scale(&Expr::num(2.0))),
        ("P2", m.p2.clone().unwrap()),
        ("NP", n.on_bivector(p)?),
        ("P + P2", p.add(m.p2.as_ref().unwrap())?),
    ];
    let base = j.dual_of(p)?.induced_base()?;
    let mut out = Vec::new();
    for (label, q) in partners {
        out.extend(labelled(label, j.bivectors_compatible(p, &q, s)?));
        out.extend(labelled(label, check_base_compatibility(&base, &j.dual_of(&q)?.induced_base()?, s)?));
    }
    Ok(Outcome::from_reports(&out))
}

fn nijenhuis_hierarchy(s: &Sampling) -> Result<Outcome> {
    let m = model("abelian2");
    let tri = m.jacobi.dual_of(m.p.as_ref().unwrap())?;
    let n = m.n.clone().unwrap();
    let mut out = is_compatible(&tri, &n, s)?;
    if out.iter().all(|r| r.pass) {
        let jn = JnAlgebroid::new(tri, n, s)?;
        out.extend(jn.bivector_hierarchy(3, s)?.1);
        out.extend(jn.dual_hierarchy(3, s)?.1);
    }
    Ok(Outcome::from_reports(&out))
}

fn modular_suite(s: &Sampling) -> Result<Outcome> {
    let mut out = Vec::new();
    for name in BASIC {
        let m = model(name);
        out.extend(labelled(name, run(Command::Modular, &m, s)?));
        let tri = m.jacobi.dual_of(m.p.as_ref().unwrap())?;
        let jn = JnAlgebroid::new(tri, m.n.clone().unwrap(), s)?;
        let levels = [(1, 1), (0, 2), (2, 0), (1, 2), (2, 1), (0, 3), (3, 0)];
        out.extend(labelled(name, field_hierarchy(&jn, &levels, s)?.1));
    }
    for name in ["tangent(2)", "contact_r3"] {
        out.extend(labelled(name, run(Command::Duality, &model(name), s)?));
    }
    Ok(Outcome::from_reports(&out))
}

fn bridge(s: &Sampling) -> Result<Outcome> {
    let m = model("tmr_of_jacobi");
    let tri = m.jacobi.build_dual(m.p.as_ref().unwrap(), s)?;
    Ok(Outcome::from_reports(&[bridge_report(&tri, m.modular.as_ref().unwrap(), s)?]))
}

fn determinism(s: &Sampling) -> Result<Outcome> {
    let start = Instant::now();
    let mut out = Vec::new();
    for name in CATALOG {
        let m = model(name);
        let first = run(Command::All, &m, s)?;
        let again = run(Command::All, &m, s)?;
        let same = emit_report(&first, Format::Json) == emit_report(&again, Format::Json);
        out.push(Report::exact(format!("{name}: identical JSON"), "byte-identical reruns", same, s));
        out.extend(labelled(name, first));
    }
    Ok(Outcome::from_reports(&out).within(Duration::from_secs(300), start.elapsed()))
}

#[test]
fn acceptance() {
    let s = Sampling::default();
    let criteria: [(&str, &str, fn(&Sampling) -> Result<Outcome>); 8] = [
        ("AC1", "Gerstenhaber battery", gerstenhaber),
        ("AC2", "poissonization correspondence", poissonization),
        ("AC3", "TM x R catalog exactness", catalog_exactness),
        ("AC4", "compatible pairs descend to the base", base_compatibility),
        ("AC5", "Jacobi-Nijenhuis hierarchy", nijenhuis_hierarchy),
        ("AC6", "modular suite", modular_suite),
        ("AC7", "modular fields on the base", bridge),
        ("AC8", "determinism", determinism),
    ];
    let mut failing = Vec::new();
    for (id, what, f) in criteria {
        let o = f(&s).unwrap_or_else(|e| Outcome {
            pass: false,
            checks: 0,
            worst: f64::NAN,
            failed: vec![e.to_string()],
            note: String::new(),
        });
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{id} {status} {what}: {} checks, max residual {:.2e}{}{}",
            o.checks,
            o.worst,
            if o.note.is_empty() { String::new() } else { format!(", {}", o.note) },
            if o.failed.is_empty() { String::new() } else { format!(", failing: {}", o.failed.join("; ")) },
        );
        if !o.pass {
            failing.push(id);
        }
    }
    assert!(failing.is_empty(), "failing criteria: {failing:?}");
}
