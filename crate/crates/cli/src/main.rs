use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use jnalg::catalog::{emit_report, fixture, gate_reports, load_spec, run, Command, Format, Model, SpecDocument};
use jnalg::{Error, Sampling};

/// Verify algebroid identities at seeded sample points.
#[derive(Parser, Debug)]
#[command(name = "jnalg", version)]
struct Cli {
    /// validate, check-jacobi, check-compat, check-nijenhuis, hierarchy,
    /// modular, duality, poissonize-diff or all
    command: Command,
    /// A spec file, or a catalog name: abelian2, tangent(m), tmr_of_jacobi,
    /// tmr_dual, contact_r3, e2_line
    spec: String,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Sample box as LO,HI
    #[arg(long = "box", value_parser = parse_box, allow_hyphen_values = true)]
    bounds: Option<(f64, f64)>,
    #[arg(long, default_value = "text")]
    format: Format,
}

fn parse_box(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo = lo.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

fn document(spec: &str) -> Result<(SpecDocument, bool), Error> {
    let path = Path::new(spec);
    if path.is_file() {
        Ok((load_spec(path)?, false))
    } else {
        Ok((fixture(spec)?, true))
    }
}

fn execute(cli: &Cli) -> Result<bool, Error> {
    let (doc, catalog) = document(&cli.spec)?;
    let model = Model::from_doc(&doc)?;
    let base = doc.sampling.unwrap_or_default();
    let s = Sampling {
        points: cli.points.unwrap_or(base.points),
        seed: cli.seed.unwrap_or(base.seed),
        tol: cli.tol.unwrap_or(base.tol),
        bounds: cli.bounds.unwrap_or(base.bounds),
    };
    s.validate()?;
    if catalog {
        if let Some(r) = gate_reports(&model, &s)?.into_iter().find(|r| !r.pass) {
            return Err(Error::Identity { what: format!("catalog gate `{}`", r.check), residual: r.residual });
        }
    }
    let reports = run(cli.command, &model, &s)?;
    print!("{}", emit_report(&reports, cli.format));
    Ok(reports.iter().all(|r| r.pass))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("jnalg: {e}");
            match e {
                Error::Config(_) | Error::Field { .. } | Error::Expr(_) | Error::Io(_) | Error::Dimension(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
