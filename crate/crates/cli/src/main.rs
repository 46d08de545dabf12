//! `octant`: enumerate, classify, count and verify small-step octant walk
//! models.
//!
//! Exit status: 0 when every verification run by the command passed (an
//! inconclusive verification is reported but does not fail the run), 1 when
//! some verification failed or a store is incomplete, 2 on usage or runtime
//! errors.

mod store;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use octant_core::classify::{expected_counts, missing_strata, scope_table};
use octant_core::guess::{guess_precursive, prime_stable};
use octant_core::modp::{DEFAULT_PRIME, SECOND_PRIME};
use octant_core::verify::{verify_extraction_quadrant, AlgebraicIdentity, ClosedForm};
use octant_core::{
    appendix_polynomials, burnside_census, check_extraction, classify_model, count_octant, count_quadrant,
    detect_hadamard, dimension, explore_group, orbit_sum, parse_model, project_to_quadrant, scope_models,
    verify_algebraic_results, verify_closed_form, verify_extraction, verify_functional_equation, CensusPredicate,
    ClassificationRecord, ClassifyOptions, GroupReport, GroupResult, GroupSetup, Mode, ModelRef, QuadrantModel,
    Scope, SeriesExport, Status, Summary, VerificationReport,
};
use rayon::prelude::*;
use serde_json::json;
use store::Store;

type Error = Box<dyn std::error::Error>;

/// Writes to standard output, ignoring a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "octant", version, about = "Small-step walks in the octant: classification and verification")]
struct Cli {
    /// Worker threads for model-level parallelism (default: all cores).
    #[arg(long, global = true, env = "OCTANT_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the census polynomials J, K and I as JSON arrays.
    Census {
        /// Also run the brute-force Burnside sweep and compare.
        #[arg(long)]
        brute: bool,
    },
    /// Classify every model of a scope, appending records to a store.
    Classify {
        #[command(flatten)]
        scope: ScopeArgs,
        #[arg(long, default_value_t = octant_core::group::DEFAULT_BOUND)]
        bound: usize,
        /// Truncation order for every per-model verification.
        #[arg(long)]
        order: Option<usize>,
        /// JSON Lines store; existing records are kept and skipped.
        #[arg(long)]
        store: Option<PathBuf>,
        /// Skip the per-model verifications.
        #[arg(long)]
        no_verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Count walks of a model and print the specializations as JSON.
    Count {
        #[arg(allow_hyphen_values = true)]
        model: String,
        #[arg(long, default_value_t = 20)]
        order: usize,
        /// A prime, or "exact".
        #[arg(long = "mod", default_value = "exact")]
        modulus: String,
        /// Also write the full modular table in binary layout.
        #[arg(long)]
        binary: Option<PathBuf>,
    },
    /// Dimension analysis and quadrant projection of an octant model.
    Project {
        #[arg(allow_hyphen_values = true)]
        model: String,
    },
    /// Explore the group of a model.
    Group {
        #[arg(allow_hyphen_values = true)]
        model: String,
        #[arg(long, default_value_t = octant_core::group::DEFAULT_BOUND)]
        bound: usize,
    },
    /// Orbit sum of a model with a finite group, and its extraction verdicts.
    Orbitsum {
        #[arg(allow_hyphen_values = true)]
        model: String,
        #[arg(long, default_value_t = octant_core::group::DEFAULT_BOUND)]
        bound: usize,
    },
    /// Hadamard decompositions of an octant model.
    Hadamard {
        #[arg(allow_hyphen_values = true)]
        model: String,
    },
    /// Run named verification suites and print a JSON report list.
    Verify {
        /// Suites: closed-forms, algebraic, extraction-3d, extraction-2d,
        /// functional-equation, all; or a closed-form id, an identity id, or
        /// a model string.
        #[arg(required = true, allow_hyphen_values = true)]
        suites: Vec<String>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value_t = octant_core::group::DEFAULT_BOUND)]
        bound: usize,
    },
    /// Guess P-recursive recurrences for an integer sequence.
    Guess {
        /// JSON integer array or count export; standard input when absent.
        input: Option<PathBuf>,
        /// Specialization label to read from a count export (default all zeros).
        #[arg(long)]
        series: Option<String>,
        #[arg(long, default_value_t = 4)]
        r_max: usize,
        #[arg(long, default_value_t = 8)]
        d_max: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Render the classification trees from populated stores.
    Tables {
        #[arg(long = "store", required = true)]
        stores: Vec<PathBuf>,
        /// Largest cardinality expected in the stores (default per scope).
        #[arg(long)]
        max_card: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ScopeArgs {
    #[arg(long, default_value = "3d")]
    scope: Scope,
    /// Largest number of steps (default 6, or 8 for 2d-free).
    #[arg(long)]
    max_card: Option<usize>,
}

fn default_max_card(scope: Scope) -> usize {
    match scope {
        Scope::MultiplicityFree => 8,
        _ => 6,
    }
}

/// Quadrant models use two-character steps.
fn parse_any(text: &str) -> Result<ModelRef, Error> {
    let first = text.split([';', ',']).next().unwrap_or("").trim();
    let step = first.split('*').next().unwrap_or("");
    if step.len() == 2 {
        Ok(ModelRef::Quadrant(QuadrantModel::parse(text)?))
    } else {
        Ok(ModelRef::Octant(parse_model(text)?))
    }
}

fn parse_mode(text: &str) -> Result<Mode, Error> {
    if text == "exact" {
        return Ok(Mode::Exact);
    }
    let p: u64 = text.parse().map_err(|_| format!("--mod expects a prime or \"exact\", got {text:?}"))?;
    Ok(Mode::Modular(p).check()?)
}

fn setup_of(m: &ModelRef) -> Result<GroupSetup, Error> {
    Ok(match m {
        ModelRef::Octant(s) => GroupSetup::from_stepset(*s)?,
        ModelRef::Quadrant(q) => GroupSetup::from_quadrant(q)?,
    })
}

fn print_json(v: &impl serde::Serialize) {
    out!("{}\n", serde_json::to_string_pretty(v).expect("serializable"));
}

fn exit_for(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn census(brute: bool) -> Result<ExitCode, Error> {
    let (j, k, i) = appendix_polynomials();
    let mut out = json!({
        "J": j.coefficients,
        "K": k.coefficients,
        "I": i.coefficients,
    });
    let mut ok = true;
    if brute {
        let bj = burnside_census(CensusPredicate::NoUnused);
        let bk = burnside_census(CensusPredicate::LowDimension);
        let bi = burnside_census(CensusPredicate::Interesting);
        ok = bj == j && bk == k && bi == i;
        out["burnside_agrees"] = json!(ok);
    }
    print_json(&out);
    Ok(exit_for(ok))
}

fn classify(
    scope: Scope,
    max_card: usize,
    opts: ClassifyOptions,
    store_path: Option<PathBuf>,
    as_json: bool,
) -> Result<ExitCode, Error> {
    let models = scope_models(scope, max_card);
    let mut store = store_path.as_deref().map(|p| Store::open(p, scope)).transpose()?;
    let mut memory: Vec<ClassificationRecord> = Vec::new();
    let mut acc = Summary::default();
    let mut todo = Vec::new();
    for m in &models {
        match store.as_ref().and_then(|s| s.records().get(&m.key())) {
            Some(r) => acc.add(r),
            None => todo.push(m),
        }
    }
    let resumed = models.len() - todo.len();
    // the queue is processed in fixed chunks; within a chunk records are
    // appended in queue order
    for chunk in todo.chunks(256) {
        let out: Vec<Result<ClassificationRecord, _>> = chunk.par_iter().map(|m| classify_model(m, &opts)).collect();
        for (m, r) in chunk.iter().zip(out) {
            let r = r.map_err(|e| format!("{m}: {e}"))?;
            acc.add(&r);
            match store.as_mut() {
                Some(s) => s.append(&r)?,
                None => memory.push(r),
            }
        }
    }
    let recomputed = match &store {
        Some(s) => {
            let (_, records) = Store::load(s.path())?;
            Summary::from_records(models.iter().filter_map(|m| records.get(&m.key())))
        }
        None => Summary::from_records(&memory),
    };
    if recomputed != acc {
        return Err("summary recomputed from the store differs from the accumulated one".into());
    }
    let range = acc.card_range().unwrap_or((0, 0));
    let table = scope_table(scope, &acc, range, Vec::new());
    if as_json {
        print_json(&json!({
            "scope": scope,
            "max_card": max_card,
            "models": models.len(),
            "resumed": resumed,
            "classified": todo.len(),
            "summary": acc,
            "table": table,
        }));
    } else {
        out!("{table}");
        out!("  models: {}, resumed from store: {resumed}\n", models.len());
        for (name, counts) in &acc.verifications {
            let parts: Vec<String> = counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
            out!("  {name}: {}\n", parts.join(", "));
        }
    }
    Ok(exit_for(acc.failures() == 0))
}

fn count(model: &str, order: usize, modulus: &str, binary: Option<PathBuf>) -> Result<ExitCode, Error> {
    let mode = parse_mode(modulus)?;
    let table = match parse_any(model)? {
        ModelRef::Octant(s) => count_octant(s, order, mode)?,
        ModelRef::Quadrant(q) => count_quadrant(&q, order, mode)?,
    };
    if let Some(path) = binary {
        let f = std::fs::File::create(&path)?;
        table.write_binary(std::io::BufWriter::new(f))?;
    }
    out!("{}\n", serde_json::to_string(&table.export())?);
    Ok(ExitCode::SUCCESS)
}

fn project(model: &str) -> Result<ExitCode, Error> {
    let s = parse_model(model)?;
    let d = dimension(s)?;
    let projection = match d.redundant_axes.first() {
        Some(&a) => Some(project_to_quadrant(s, a)?.to_string()),
        None => None,
    };
    print_json(&json!({
        "model": s.to_string(),
        "code": s.canonical().code_string(),
        "dimension": d.dimension,
        "redundant_axes": d.redundant_axes.iter().map(|a| a.name().to_string()).collect::<Vec<_>>(),
        "certificates": d.certificates.iter().map(|(a, c)| (a.name().to_string(), c.clone())).collect::<Vec<_>>(),
        "projection": projection,
    }));
    Ok(ExitCode::SUCCESS)
}

fn group(model: &str, bound: usize) -> Result<ExitCode, Error> {
    let setup = setup_of(&parse_any(model)?)?;
    let result = explore_group(&setup, bound)?;
    print_json(&GroupReport::new(&setup, &result));
    Ok(ExitCode::SUCCESS)
}

fn orbitsum(model: &str, bound: usize) -> Result<ExitCode, Error> {
    let setup = setup_of(&parse_any(model)?)?;
    let GroupResult::Finite(g) = explore_group(&setup, bound)? else {
        return Err(format!("group order exceeds {bound}; no orbit sum").into());
    };
    let os = orbit_sum(&g);
    let ext = check_extraction(&g, 4);
    print_json(&json!({
        "order": g.order(),
        "orbit_sum": os.to_string(),
        "zero": os.is_zero(),
        "extraction": {
            "order": ext.order,
            "conclusive": ext.is_conclusive(),
            "verdicts": ext.verdicts.iter().map(|v| v.label()).collect::<Vec<_>>(),
        },
    }));
    Ok(ExitCode::SUCCESS)
}

fn hadamard(model: &str) -> Result<ExitCode, Error> {
    let decs = detect_hadamard(parse_model(model)?);
    print_json(&json!({
        "decompositions": decs,
        "rendered": decs.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    }));
    Ok(ExitCode::SUCCESS)
}

/// Finite-group models of a scope, with the orbit-sum flag.
fn finite_models(scope: Scope, bound: usize) -> Result<Vec<(ModelRef, bool)>, Error> {
    let models = scope_models(scope, default_max_card(scope));
    let found: Result<Vec<Option<(ModelRef, bool)>>, String> = models
        .into_par_iter()
        .map(|m| {
            let setup = setup_of(&m).map_err(|e| e.to_string())?;
            Ok(match explore_group(&setup, bound).map_err(|e| e.to_string())? {
                GroupResult::Finite(g) => Some((m, orbit_sum(&g).is_zero())),
                GroupResult::ExceedsBound { .. } => None,
            })
        })
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

fn run_suite(name: &str, order: Option<usize>, bound: usize) -> Result<Vec<VerificationReport>, Error> {
    let n = |d: usize| order.unwrap_or(d);
    let mut out = Vec::new();
    match name {
        "all" => {
            for s in ["closed-forms", "algebraic", "functional-equation", "extraction-3d", "extraction-2d"] {
                out.extend(run_suite(s, order, bound)?);
            }
        }
        "closed-forms" => {
            for f in ClosedForm::ALL {
                out.push(verify_closed_form(f.id(), n(24))?);
            }
        }
        "algebraic" => {
            for a in AlgebraicIdentity::ALL {
                out.push(verify_algebraic_results(a.id(), n(30))?);
            }
        }
        "functional-equation" | "extraction-3d" => {
            let ext = name == "extraction-3d";
            let models: Vec<_> = finite_models(Scope::ThreeD, bound)?
                .into_iter()
                .filter(|(_, zero)| !ext || !zero)
                .collect();
            let reports: Result<Vec<_>, String> = models
                .par_iter()
                .map(|(m, _)| {
                    let ModelRef::Octant(s) = m else { unreachable!() };
                    let r = if ext { verify_extraction(*s, n(12)) } else { verify_functional_equation(*s, n(8)) };
                    r.map_err(|e| e.to_string())
                })
                .collect();
            out.extend(reports?);
        }
        "extraction-2d" => {
            let models: Vec<_> = finite_models(Scope::Projected, bound)?
                .into_iter()
                .filter(|(_, zero)| !zero)
                .collect();
            let reports: Result<Vec<_>, String> = models
                .par_iter()
                .map(|(m, _)| {
                    let ModelRef::Quadrant(q) = m else { unreachable!() };
                    verify_extraction_quadrant(q, n(16)).map_err(|e| e.to_string())
                })
                .collect();
            out.extend(reports?);
        }
        other => {
            if let Ok(f) = other.parse::<ClosedForm>() {
                out.push(verify_closed_form(f.id(), n(24))?);
            } else if let Ok(a) = other.parse::<AlgebraicIdentity>() {
                out.push(verify_algebraic_results(a.id(), n(30))?);
            } else {
                let m = parse_any(other).map_err(|e| format!("unknown suite or model {other:?}: {e}"))?;
                let rec = classify_model(
                    &m,
                    &ClassifyOptions {
                        bound,
                        order,
                        ..Default::default()
                    },
                )?;
                match m {
                    ModelRef::Octant(s) => {
                        out.push(verify_functional_equation(s, n(8))?);
                        if rec.orbit_sum_zero == Some(false) {
                            out.push(verify_extraction(s, n(12))?);
                        }
                    }
                    ModelRef::Quadrant(q) => {
                        out.push(octant_core::verify::verify_functional_equation_quadrant(&q, n(8))?);
                        if rec.orbit_sum_zero == Some(false) {
                            out.push(verify_extraction_quadrant(&q, n(16))?);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn verify(suites: &[String], order: Option<usize>, bound: usize) -> Result<ExitCode, Error> {
    let mut reports = Vec::new();
    for s in suites {
        reports.extend(run_suite(s, order, bound)?);
    }
    for r in &reports {
        eprintln!("{r}");
    }
    print_json(&reports);
    Ok(exit_for(reports.iter().all(|r| r.status != Status::Fail)))
}

fn read_sequence(input: Option<PathBuf>, series: Option<String>) -> Result<(Vec<BigInt>, String), Error> {
    let mut text = String::new();
    match &input {
        Some(p) => text = std::fs::read_to_string(p)?,
        None => {
            std::io::stdin().read_to_string(&mut text)?;
        }
    }
    let v: serde_json::Value = serde_json::from_str(&text)?;
    let as_int = |x: &serde_json::Value| -> Result<BigInt, Error> {
        match x {
            serde_json::Value::Number(n) => Ok(n.to_string().parse()?),
            serde_json::Value::String(s) => Ok(s.parse()?),
            _ => Err(format!("not an integer: {x}").into()),
        }
    };
    if let serde_json::Value::Array(items) = &v {
        let seq = items.iter().map(as_int).collect::<Result<_, _>>()?;
        return Ok((seq, "sequence".into()));
    }
    let export: SeriesExport = serde_json::from_value(v)?;
    if export.mode != "exact" {
        return Err(format!("guessing needs exact counts, export is {}", export.mode).into());
    }
    let dim = export.series.first().map_or(0, |(l, _)| l.len());
    let label = series.unwrap_or_else(|| "0".repeat(dim));
    let (_, vals) = export
        .series
        .iter()
        .find(|(l, _)| *l == label)
        .ok_or_else(|| format!("no specialization {label:?} in export"))?;
    let seq = vals.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    Ok((seq, format!("{} at {label}", export.model)))
}

fn guess(
    input: Option<PathBuf>,
    series: Option<String>,
    r_max: usize,
    d_max: usize,
    modulus: Option<u64>,
) -> Result<ExitCode, Error> {
    let (seq, source) = read_sequence(input, series)?;
    let prime = modulus.unwrap_or(DEFAULT_PRIME);
    let found = guess_precursive(&seq, r_max, d_max, prime)?;
    let other = if prime == SECOND_PRIME { DEFAULT_PRIME } else { SECOND_PRIME };
    let stable = prime_stable(&found, &guess_precursive(&seq, r_max, d_max, other)?);
    let candidates: Vec<_> = found
        .iter()
        .map(|c| {
            json!({
                "order": c.order,
                "degree": c.degree,
                "prime": c.prime,
                "coeffs_mod_p": c.coeffs,
                "coeffs": c.lift().map(|l| l.iter().map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()),
            })
        })
        .collect();
    print_json(&json!({
        "source": source,
        "terms": seq.len(),
        "prime_stable": stable,
        "candidates": candidates,
    }));
    Ok(ExitCode::SUCCESS)
}

fn tables(stores: &[PathBuf], max_card: Option<usize>, as_json: bool) -> Result<ExitCode, Error> {
    let mut rendered = Vec::new();
    let mut complete = true;
    for path in stores {
        let (scope, records) = Store::load(path)?;
        let mc = max_card.unwrap_or(default_max_card(scope));
        let summary = Summary::from_records(records.values().filter(|r| r.cardinality <= mc));
        let expected = expected_counts(scope, mc);
        let missing = missing_strata(&summary, &expected);
        complete &= missing.is_empty();
        let lo = expected.keys().next().copied().unwrap_or(0);
        let hi = expected.keys().next_back().copied().unwrap_or(0);
        rendered.push(scope_table(scope, &summary, (lo, hi), missing));
    }
    rendered.sort_by_key(|t| Scope::ALL.iter().position(|s| *s == t.scope));
    if as_json {
        print_json(&rendered);
    } else {
        for t in &rendered {
            out!("{t}\n");
        }
    }
    for t in &rendered {
        for m in &t.missing {
            eprintln!("incomplete {} store: {m}", t.scope);
        }
    }
    Ok(exit_for(complete))
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global()?;
    }
    match cli.command {
        Command::Census { brute } => census(brute),
        Command::Classify {
            scope,
            bound,
            order,
            store,
            no_verify,
            json,
        } => {
            let opts = ClassifyOptions {
                bound,
                order,
                verify: !no_verify,
                ..Default::default()
            };
            let mc = scope.max_card.unwrap_or(default_max_card(scope.scope));
            classify(scope.scope, mc, opts, store, json)
        }
        Command::Count {
            model,
            order,
            modulus,
            binary,
        } => count(&model, order, &modulus, binary),
        Command::Project { model } => project(&model),
        Command::Group { model, bound } => group(&model, bound),
        Command::Orbitsum { model, bound } => orbitsum(&model, bound),
        Command::Hadamard { model } => hadamard(&model),
        Command::Verify { suites, order, bound } => verify(&suites, order, bound),
        Command::Guess {
            input,
            series,
            r_max,
            d_max,
            modulus,
        } => guess(input, series, r_max, d_max, modulus),
        Command::Tables { stores, max_card, json } => tables(&stores, max_card, json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
