//! `cdr`: exact checks on twisted chiral de Rham Fock modules and orbifold
//! invariants.

mod report;
mod selftest;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cdr_core::arith::{fmt_rat, parse_rat, series_report, Rat};
use cdr_core::brst::{cohomology_table, d_squared_check, homotopy_identity_check};
use cdr_core::fields::{bracket_suite, vector_field_suite};
use cdr_core::fock::{product_character, FockModule, TwistData};
use cdr_core::genus::{ell_orb, ell_orb_via_traces, lefschetz_table, LefschetzEntry};
use cdr_core::orbifold::{bundled_input, cr_poincare, fermionic_shift, invariant_dims, parse_orbifold_input, OrbifoldInput};

use report::{CliError, Report};

#[derive(Parser)]
#[command(name = "cdr", version, about = "Exact computations for twisted chiral de Rham modules and orbifold genera")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct ModuleArgs {
    /// Number of coordinate directions.
    #[arg(long)]
    n: Option<usize>,
    /// Twist as "m1,...,mN/mg"; omitted means the identity.
    #[arg(long)]
    twist: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the N=2 bracket table and the vector-field homomorphism.
    OpeCheck {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value = "2")]
        max_weight: String,
        /// Largest |mode| index in the bracket table.
        #[arg(long, default_value_t = 2)]
        max_mode: i64,
        /// Largest polynomial degree of the vector fields.
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
    },
    /// Enumerate the character and compare with the product formula.
    Character {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value = "2")]
        qmax: String,
    },
    /// Check d^2 = 0 and the homotopy identity, and tabulate cohomology.
    Brst {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value = "2")]
        max_weight: String,
        /// Include states with up to this many b_0 factors per direction.
        #[arg(long)]
        b0_cap: Option<u32>,
    },
    /// Chen-Ruan Poincaré polynomial of an orbifold input.
    Cr {
        /// JSON file, or the name of a bundled input.
        #[arg(long)]
        input: String,
    },
    /// Orbifold elliptic genus by sectors and by sector traces.
    Genus {
        #[arg(long)]
        input: String,
        #[arg(long, default_value = "2")]
        qmax: String,
        /// Treat any t-dependent localization sum as an error.
        #[arg(long)]
        strict: bool,
    },
    /// Run the full invariant suite on small truncations.
    Selftest {
        /// Seed for the sampled twists.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sampled twists.
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
}

fn rational(flag: &str, s: &str) -> Result<Rat, CliError> {
    let r = parse_rat(s).map_err(|e| CliError::Input(format!("--{flag}: {e}")))?;
    if r < Rat::from_integer(0) {
        return Err(CliError::Input(format!("--{flag}: must be nonnegative, got {s}")));
    }
    Ok(r)
}

fn twist(args: &ModuleArgs) -> Result<TwistData, CliError> {
    match (&args.twist, args.n) {
        (None, n) => Ok(TwistData::identity(n.unwrap_or(1))),
        (Some(s), n) => {
            let t: TwistData = s.parse().map_err(|e| CliError::Input(format!("--twist: {e}")))?;
            match n {
                Some(n) if n != t.n() => Err(CliError::Input(format!("--twist has {} exponents but --n is {n}", t.n()))),
                _ => Ok(t),
            }
        }
    }
}

fn load_input(arg: &str) -> Result<OrbifoldInput, CliError> {
    let text = if Path::new(arg).exists() {
        std::fs::read_to_string(arg).map_err(|e| CliError::Input(format!("{arg}: {e}")))?
    } else {
        let name = arg.rsplit('/').next().unwrap_or(arg);
        bundled_input(name)
            .or_else(|| bundled_input(&format!("{name}.json")))
            .ok_or_else(|| CliError::Input(format!("{arg}: no such file or bundled input")))?
            .to_string()
    };
    parse_orbifold_input(&text).map_err(|e| CliError::Input(format!("{arg}: {e}")))
}

fn warnings(r: &mut Report, input: &OrbifoldInput) {
    for w in &input.warnings {
        r.line(format!("warning: {w}"));
    }
    if !input.warnings.is_empty() {
        r.set("warnings", json!(input.warnings));
    }
}

fn ope_check(args: &ModuleArgs, max_weight: &str, max_mode: i64, max_degree: u32) -> Result<Report, CliError> {
    let t = twist(args)?;
    let w = rational("max-weight", max_weight)?;
    let m = Arc::new(FockModule::new(t.clone()));
    let mut checks = bracket_suite(&m, w, max_mode).map_err(CliError::compute)?;
    checks.push(vector_field_suite(&m, w, max_degree, 2).map_err(CliError::compute)?);
    let mut r = Report::default();
    r.line(format!("module {t}, basis weight <= {}, |modes| <= {max_mode}", fmt_rat(&w)));
    for c in &checks {
        r.line(format!("  {c}"));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    if failed == 0 {
        r.line("all brackets verified");
    } else {
        r.line(format!("{failed} relation families failed"));
        r.fail();
    }
    r.set("twist", json!(t.to_string()));
    r.set(
        "relations",
        Value::Array(
            checks
                .iter()
                .map(|c| json!({"relation": c.relation, "instances": c.instances, "vectors": c.vectors, "ok": c.passed(), "failure": c.failure}))
                .collect(),
        ),
    );
    Ok(r)
}

fn character(args: &ModuleArgs, qmax: &str) -> Result<Report, CliError> {
    let t = twist(args)?;
    let q = rational("qmax", qmax)?;
    let enumerated = FockModule::new(t.clone()).character(q, false).map_err(CliError::compute)?;
    let product = product_character(&t, q).map_err(CliError::compute)?;
    let mut r = Report::default();
    r.line(format!("character of {t} up to q^{}, iota = {}:", fmt_rat(&q), fmt_rat(&t.iota())));
    r.line(format!("  {enumerated}"));
    r.set("twist", json!(t.to_string()));
    r.set("iota", json!(fmt_rat(&t.iota())));
    r.set("character", series_report(&enumerated).to_json());
    let diff = enumerated.first_difference(&product);
    r.check("matches product formula", "matches_product", diff.is_none());
    if let Some((q, y)) = diff {
        r.line(format!("  first difference at q^{} y^{}", fmt_rat(&q), fmt_rat(&y)));
    }
    Ok(r)
}

fn brst(args: &ModuleArgs, max_weight: &str, b0_cap: Option<u32>) -> Result<Report, CliError> {
    let t = twist(args)?;
    let w = rational("max-weight", max_weight)?;
    let m = Arc::new(FockModule::new(t.clone()));
    let d2 = d_squared_check(&m, w, b0_cap).map_err(CliError::compute)?;
    let h = homotopy_identity_check(&m, w, b0_cap).map_err(CliError::compute)?;
    let c = cohomology_table(&m, w, b0_cap).map_err(CliError::compute)?;
    let mut r = Report::default();
    r.line(format!("module {t}, basis weight <= {}, {} vectors", fmt_rat(&w), d2.vectors));
    r.set("twist", json!(t.to_string()));
    r.check("d^2 = 0", "d_squared_zero", d2.passed());
    if let Some(f) = &d2.failure {
        r.line(format!("  {f}"));
    }
    let sign = if h.sign < 0 { "-" } else { "" };
    r.check(&format!("{{G_0, d}} = {sign}L_0 on every block"), "homotopy", h.holds());
    if let Some(f) = &h.failure {
        r.line(format!("  fails on {f}"));
    }
    r.set("homotopy_sign", json!(h.sign));
    r.line("cohomology of d:");
    for l in c.to_string().lines() {
        r.line(format!("  {l}"));
    }
    let expected = 1usize << t.fixed_directions();
    let support: Vec<Value> = c.support().iter().map(|((w, p), d)| json!({"weight": fmt_rat(w), "charge": fmt_rat(p), "dim": d})).collect();
    r.set("cohomology", Value::Array(support));
    r.line(format!("total cohomology: {} (2^{} = {expected})", c.total(), t.fixed_directions()));
    // the rank count is exact only on the sector without b_0
    if b0_cap.is_none() {
        r.check("cohomology concentrated at weight 0", "weight_zero", c.concentrated_in_weight_zero() && c.total() == expected);
    }
    Ok(r)
}

fn cr(input: &str) -> Result<Report, CliError> {
    let inp = load_input(input)?;
    let p = cr_poincare(&inp).map_err(CliError::compute)?;
    let mut r = Report::default();
    warnings(&mut r, &inp);
    let mut sectors = Vec::new();
    for c in &inp.classes {
        for a in &c.components {
            let dims = invariant_dims(a, &inp.group).map_err(CliError::compute)?;
            let shift = fermionic_shift(a);
            r.line(format!("class of {} / {}: iota = {}, invariant dims {:?}", c.rep, a.name, fmt_rat(&shift), dims));
            sectors.push(json!({"class": c.rep, "component": a.name, "iota": fmt_rat(&shift), "invariant_dims": dims}));
        }
    }
    r.line(format!("Chen-Ruan Poincaré polynomial: {p}"));
    r.set("sectors", Value::Array(sectors));
    r.set("poincare", p.to_json());
    Ok(r)
}

fn t_dependence(entries: &[LefschetzEntry]) -> Vec<(String, String)> {
    entries
        .iter()
        .flat_map(|e| {
            e.number.t_dependent.iter().map(move |&(q, y)| {
                (
                    format!("L(h={}) on {} at q^{} y^{}", e.element, e.component, fmt_rat(&q), fmt_rat(&y)),
                    e.number.equivariant.coeff(q, y).to_string(),
                )
            })
        })
        .collect()
}

fn genus(input: &str, qmax: &str, strict: bool) -> Result<Report, CliError> {
    let inp = load_input(input)?;
    let q = rational("qmax", qmax)?;
    let table = lefschetz_table(&inp, q).map_err(CliError::compute)?;
    if strict {
        for e in &table {
            e.number.strict(&e.component, e.element).map_err(CliError::compute)?;
        }
    }
    let a = ell_orb(&inp, q).map_err(CliError::compute)?;
    let b = ell_orb_via_traces(&inp, q).map_err(CliError::compute)?;
    let mut r = Report::default();
    warnings(&mut r, &inp);
    r.line(format!("elliptic genus up to q^{}", fmt_rat(&q)));
    r.line("by sectors:");
    r.line(format!("  {a}"));
    r.line("by sector traces:");
    r.line(format!("  {b}"));
    r.set("ell_orb", series_report(&a).to_json());
    r.set("ell_orb_via_traces", series_report(&b).to_json());
    let diff = a.first_difference(&b);
    r.check("paths agree", "paths_agree", diff.is_none());
    if let Some((q, y)) = diff {
        r.line(format!("  first difference at q^{} y^{}", fmt_rat(&q), fmt_rat(&y)));
    }
    let dep = t_dependence(&table);
    if !dep.is_empty() {
        r.line(format!("note: {} localization coefficients depend on the torus parameter t; values taken at t = 1", dep.len()));
        for (at, v) in &dep {
            r.line(format!("  {at}: {v}"));
        }
    }
    r.set("t_dependent", Value::Array(dep.into_iter().map(|(at, v)| json!({"at": at, "value": v})).collect()));
    Ok(r)
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Input("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().map_err(CliError::compute)?;
    }
    match &cli.command {
        Command::OpeCheck { module, max_weight, max_mode, max_degree } => ope_check(module, max_weight, *max_mode, *max_degree),
        Command::Character { module, qmax } => character(module, qmax),
        Command::Brst { module, max_weight, b0_cap } => brst(module, max_weight, *b0_cap),
        Command::Cr { input } => cr(input),
        Command::Genus { input, qmax, strict } => genus(input, qmax, *strict),
        Command::Selftest { seed, samples } => Ok(selftest::run(*seed, *samples)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let (text, code) = report.render(cli.format == Format::Json);
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{text}");
            code
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
