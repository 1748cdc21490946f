//! Command-line front end: reads an instance file, runs the requested
//! computation, and prints a deterministic JSON report to stdout.
//!
//! Exit codes: 0 success, 2 parse error, 3 precondition violation,
//! 4 internal contract violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tdvr_gb::assoc_graded::{
    decide_flat, graded_pipeline, graded_slice_rows, validate_graded_slices,
};
use tdvr_gb::error::{Error, Result};
use tdvr_gb::flatness::{self, NormalFormStructure};
use tdvr_gb::freemod::Element;
use tdvr_gb::groebner::{buchberger, minimalize, reduce_to_minimal, Basis, CompletionConfig};
use tdvr_gb::oracle::oracle_is_flat;
use tdvr_gb::parse::{parse_element_str, parse_instance_str, parse_order_spec, Instance};
use tdvr_gb::report;

#[derive(Parser)]
#[command(name = "tdvr-gb", version, about = "Strong Groebner bases over truncated valuation rings", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Instance file (ring/vars/order/gens format).
    instance: PathBuf,
    /// Override the instance's term order, e.g. "deglex top priority 2 1".
    #[arg(long)]
    order: Option<String>,
    /// Also write the report to this file (same bytes as stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Abort completion after this many S-pairs.
    #[arg(long, default_value_t = CompletionConfig::default().pair_budget)]
    pair_budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Complete the generators to a strong Groebner basis.
    Gb(CommonArgs),
    /// Complete, then prune to a minimal strong Groebner basis.
    #[command(name = "minimal-gb")]
    MinimalGb(CommonArgs),
    /// Normal form of an element in quotient coordinates.
    Nf {
        #[command(flatten)]
        common: CommonArgs,
        /// The element, in the same grammar as a generator line.
        element: String,
    },
    /// Test membership of an element in the generated submodule.
    Member {
        #[command(flatten)]
        common: CommonArgs,
        /// The element, in the same grammar as a generator line.
        element: String,
        /// Record the reduction steps in the report.
        #[arg(long)]
        trace: bool,
    },
    /// Decide whether the quotient is flat over the coefficient ring.
    Flat(CommonArgs),
    /// Rank of the quotient over the coefficient ring (requires flatness).
    Rank(CommonArgs),
    /// Associated-graded pipeline: initial forms and their basis.
    Gr {
        #[command(flatten)]
        common: CommonArgs,
        /// Include the residue rows and monomials of every graded slice.
        #[arg(long)]
        dump_slices: bool,
        /// Largest x-degree to slice (default: staircase degree + 2).
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Degreewise elementary-divisor invariants of the quotient.
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest x-degree to inspect (default: max generator degree + 2).
        #[arg(long)]
        max_degree: Option<u32>,
    },
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Gb(c) | Command::MinimalGb(c) | Command::Flat(c) | Command::Rank(c) => c,
            Command::Nf { common, .. }
            | Command::Member { common, .. }
            | Command::Gr { common, .. }
            | Command::Oracle { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Gb(_) => "gb",
            Command::MinimalGb(_) => "minimal-gb",
            Command::Nf { .. } => "nf",
            Command::Member { .. } => "member",
            Command::Flat(_) => "flat",
            Command::Rank(_) => "rank",
            Command::Gr { .. } => "gr",
            Command::Oracle { .. } => "oracle",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tdvr-gb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_instance(common: &CommonArgs) -> Result<(Instance, String)> {
    let bytes = std::fs::read(&common.instance).map_err(|e| {
        Error::precondition(format!("cannot read {}: {e}", common.instance.display()))
    })?;
    let fingerprint = report::sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::parse(1, 1, "instance file is not valid UTF-8".to_string()))?;
    let mut instance = parse_instance_str(&text)?;
    if let Some(spec) = &common.order {
        let order = parse_order_spec(spec, instance.rank)?;
        instance.gens = instance.gens.iter().map(|g| g.reordered(&order)).collect();
        instance.order = order;
    }
    Ok((instance, fingerprint))
}

fn completed_basis(instance: &Instance, common: &CommonArgs) -> Result<(Basis, tdvr_gb::groebner::CompletionStats)> {
    let config = CompletionConfig { pair_budget: common.pair_budget };
    buchberger(instance.ring, &instance.order, &instance.gens, &config)
}

fn emit(common: &CommonArgs, text: &str) -> Result<()> {
    print!("{text}");
    if let Some(path) = &common.out {
        std::fs::write(path, text).map_err(|e| {
            Error::precondition(format!("cannot write {}: {e}", path.display()))
        })?;
    }
    Ok(())
}

fn run(command: &Command) -> Result<()> {
    let common = command.common();
    let (instance, fingerprint) = load_instance(common)?;
    let names = &instance.vars;
    let instance_value = report::instance_value(&instance, &fingerprint);

    let result: Value = match command {
        Command::Gb(_) => {
            let (basis, stats) = completed_basis(&instance, common)?;
            json!({ "basis": report::basis_value(&basis, Some(&stats), names) })
        }
        Command::MinimalGb(_) => {
            let (basis, stats) = completed_basis(&instance, common)?;
            let minimal = minimalize(&basis)?;
            json!({ "basis": report::basis_value(&minimal, Some(&stats), names) })
        }
        Command::Nf { element, .. } => {
            let (basis, _) = completed_basis(&instance, common)?;
            let f = parse_element_str(instance.ring, &instance.order, names, element)?;
            let structure = NormalFormStructure::new(&basis)?;
            let nf = structure.normal_form(&f)?;
            json!({
                "element": f.render(names),
                "normal_form": report::normal_form_value(&nf, &basis, names),
            })
        }
        Command::Member { element, trace, .. } => {
            let (basis, _) = completed_basis(&instance, common)?;
            let f = parse_element_str(instance.ring, &instance.order, names, element)?;
            let member = basis.is_member(&f)?;
            let mut v = json!({ "element": f.render(names), "member": member });
            if *trace {
                let tr = reduce_to_minimal(&f, basis.elements());
                v["trace"] = report::trace_value(&tr, names);
            }
            v
        }
        Command::Flat(_) => {
            let (basis, _) = completed_basis(&instance, common)?;
            let config = CompletionConfig { pair_budget: common.pair_budget };
            let decision = decide_flat(&basis, &config)?;
            report::flat_value(&decision, names)
        }
        Command::Rank(_) => {
            let (basis, _) = completed_basis(&instance, common)?;
            let config = CompletionConfig { pair_budget: common.pair_budget };
            let decision = decide_flat(&basis, &config)?;
            if !decision.report().flat {
                let witness = decision
                    .report()
                    .witness
                    .as_ref()
                    .map(|(x, m)| {
                        let mono = report::module_mono_str(decision.carrier(), x, names);
                        format!(" (monomial {mono} has m-value {m})")
                    })
                    .unwrap_or_default();
                return Err(Error::precondition(format!(
                    "rank is defined only for a flat quotient{witness}"
                )));
            }
            let rank = flatness::rank(decision.carrier())?;
            report::rank_value(&rank, names)
        }
        Command::Gr { dump_slices, max_degree, .. } => {
            let (basis, _) = completed_basis(&instance, common)?;
            let config = CompletionConfig { pair_budget: common.pair_budget };
            let pipeline = graded_pipeline(&basis, &config)?;
            let mut v = json!({ "pipeline": report::pipeline_value(&pipeline, names) });
            let x_homogeneous =
                basis.elements().iter().all(|g| g.is_x_homogeneous().is_some());
            if x_homogeneous {
                let bound = max_degree
                    .unwrap_or_else(|| flatness::default_degree_bound(&pipeline.graded_basis));
                let checked = validate_graded_slices(
                    basis.elements(),
                    pipeline.graded_basis.elements(),
                    bound,
                )?;
                v["slices_validated"] = json!(checked);
                v["slices"] = slices_value(&pipeline.graded_basis, bound, *dump_slices, names)?;
            }
            v
        }
        Command::Oracle { max_degree, .. } => {
            let default_bound = instance
                .gens
                .iter()
                .filter_map(|g| g.max_x_degree())
                .max()
                .unwrap_or(0) as u32
                + 2;
            let bound = max_degree.unwrap_or(default_bound);
            let report_data = oracle_is_flat(&instance.gens, bound)?;
            report::oracle_value(&report_data)
        }
    };

    let text = report::envelope(command.name(), instance_value, result);
    emit(common, &text)
}

/// Per-(level, degree) slice dimensions of the graded basis, optionally with
/// the full residue rows.
fn slices_value(
    graded: &Basis,
    max_degree: u32,
    dump: bool,
    names: &[String],
) -> Result<Value> {
    let a = graded.ring().a();
    let p = graded.ring().p();
    let mut slices = Vec::new();
    for level in 0..a {
        for degree in 0..=max_degree {
            let rows = graded_slice_rows(graded.elements(), level, degree)?;
            let rref = tdvr_gb::oracle::fp_rref(rows, p);
            let mut slice = json!({
                "level": level,
                "degree": degree,
                "dimension": rref.len(),
            });
            if dump {
                let monos = slice_monomials(graded, degree, names);
                slice["monomials"] = json!(monos);
                slice["rows"] = json!(rref);
            }
            slices.push(slice);
        }
    }
    Ok(Value::Array(slices))
}

fn slice_monomials(basis: &Basis, degree: u32, names: &[String]) -> Vec<String> {
    use tdvr_gb::chainring::Scalar;
    use tdvr_gb::freemod::ModuleMonomial;
    use tdvr_gb::oracle::monomials_of_degree;

    let order = basis.order();
    let nvars = names.len();
    let mut out = Vec::new();
    for component in 0..order.rank() {
        for mono in monomials_of_degree(nvars, degree) {
            let m = ModuleMonomial::new(mono, component);
            let e = Element::single(basis.ring(), order.clone(), Scalar::one(basis.ring()), m);
            out.push(e.render(names));
        }
    }
    out
}
