//! `moebius`: classify Möbius maps, decide topological conjugacy, plot
//! orbits and run the cross-route property suite.

mod orbit;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use moebius_core::operator::{decide_complex, decide_real, BlockKind, Field, OperatorMatrix, SpectralPartition};
use moebius_core::spectral::{
    canonical_conjugacy_form, classify, conjugation_residual, conjugator, eigenvalues, fixed_point_set, multipliers,
    trace,
};
use moebius_core::suite::{run_suite, Counterexample, SuiteConfig};
use moebius_core::topo::{evaluate, topo_canonical_form};
use moebius_core::{format_complex, format_point, parse_point, ConjClass, Error, FixedPointSet, Gates, MoebiusMap};

use report::{num, point_list, Report};

const EXIT_OK: u8 = 0;
const EXIT_SELFTEST_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;
const EXIT_INDETERMINATE: u8 = 4;
const EXIT_UNSUPPORTED: u8 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "moebius",
    version,
    about = "Conjugacy classes and topological conjugacy of Möbius maps",
    long_about = "Conjugacy classes and topological conjugacy of Möbius maps.\n\n\
        Maps are given by four coefficients \"a,b,c,d\" of z -> (az+b)/(cz+d); each coefficient is a \
        complex literal such as 2, -0.5, 3i, 1+2i or 1e-3-4i.\n\n\
        A nonidentity map is labeled Parabolic (one fixed point), Elliptic (multiplier on the unit \
        circle), Hyperbolic (real multiplier off the circle, negative values included) or Loxodromic \
        (any other multiplier). So z -> -2z is labeled Hyperbolic.\n\n\
        Exit codes: 0 true/ok, 1 selftest failure, 2 input error, 3 negative verdict, \
        4 indeterminate, 5 unsupported size."
)]
struct Cli {
    /// Emit a JSON report instead of the plain-text table.
    #[arg(long, global = true)]
    json: bool,

    /// Unit-circle and interval tolerance.
    #[arg(long, global = true, value_name = "REAL")]
    eps: Option<f64>,

    /// Largest order tested when flagging roots of unity.
    #[arg(long, global = true, value_name = "INT")]
    kmax: Option<u32>,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Include wall-clock time in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class, fixed points, multipliers, trace, eigenvalues and canonical forms.
    Classify {
        /// Coefficients "a,b,c,d".
        #[arg(allow_hyphen_values = true)]
        map: String,
    },
    /// Decide whether two maps are topologically conjugate.
    Topo {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        /// Which criterion sets the exit code; `all` requires agreement.
        #[arg(long, value_enum, default_value_t = Criterion::All)]
        criterion: Criterion,
    },
    /// Find h with f = h⁻¹ ∘ g ∘ h, if f and g are Möbius conjugate.
    Conjugator {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Canonical representative of the map's class.
    Canonical {
        #[arg(allow_hyphen_values = true)]
        map: String,
        /// Topological class representative (2z, e^{iθ}z with Im ≥ 0, z+1).
        #[arg(long)]
        topological: bool,
    },
    /// Iterate a map and plot the orbit as SVG.
    Orbit {
        #[arg(allow_hyphen_values = true)]
        map: String,
        /// Starting point (complex literal or `inf`).
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        seed_point: String,
        #[arg(long, default_value_t = 10)]
        iterations: usize,
        /// SVG output path.
        #[arg(long, short)]
        output: PathBuf,
        /// Also write the points as CSV next to the SVG.
        #[arg(long)]
        csv: bool,
    },
    /// Decide topological conjugacy of two linear operators (size ≤ 2).
    Operator {
        /// Rows separated by `;`, entries by `,`.
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
        field: FieldArg,
    },
    /// Run the property suite on a seeded ensemble of map pairs.
    Selftest {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Make every fourth pair a near-threshold case.
        #[arg(long)]
        boundary: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Criterion {
    All,
    Trace,
    Eigen,
    Multiplier,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FieldArg {
    Real,
    Complex,
}

/// A finished command: report body and exit code.
struct Outcome {
    body: Value,
    code: u8,
}

fn ok(body: Value) -> Outcome {
    Outcome { body, code: EXIT_OK }
}

fn verdict(body: Value, v: bool) -> Outcome {
    Outcome {
        body,
        code: if v { EXIT_OK } else { EXIT_NEGATIVE },
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Indeterminate { .. } => EXIT_INDETERMINATE,
        Error::UnsupportedSize { .. } => EXIT_UNSUPPORTED,
        _ => EXIT_INPUT,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::SingularMap { .. } => "singular-map",
        Error::NonFinite => "non-finite",
        Error::IdentityMap => "identity-map",
        Error::Degenerate(_) => "degenerate",
        Error::InvalidInput(_) => "invalid-input",
        Error::UnsupportedSize { .. } => "unsupported-size",
        Error::Indeterminate { .. } => "indeterminate",
    }
}

fn parse_map(text: &str, which: &str) -> Result<MoebiusMap, Error> {
    text.parse::<MoebiusMap>().map_err(|e| match e {
        Error::Parse { position, message } => Error::Parse {
            position,
            message: format!("{which}: {message}"),
        },
        other => other,
    })
}

fn gates_from(cli: &Cli) -> Result<Gates, Error> {
    let mut gates = Gates::default();
    if let Some(eps) = cli.eps {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidInput(format!("--eps must be positive and finite, got {eps}")));
        }
        gates.unit = eps;
    }
    if let Some(k) = cli.kmax {
        gates.k_max = k;
    }
    Ok(gates)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let name = command_name(&cli.command);
    let result = gates_from(&cli).and_then(|gates| run(&cli, &gates));
    let (code, body, message) = match result {
        Ok(o) => (o.code, o.body, None),
        Err(e) => {
            let code = error_code(&e);
            let mut body = json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } });
            if let Error::Indeterminate {
                trace,
                eigen,
                multiplier,
                margin,
            } = e
            {
                body["criteria"] = json!({ "trace": trace, "eigen": eigen, "multiplier": multiplier });
                body["margin"] = num(margin);
            }
            (code, body, Some(e.to_string()))
        }
    };
    let gates = gates_from(&cli).unwrap_or_default();
    let mut report = Report::new(name, &gates, cli.seed, code, body);
    if cli.timing {
        report.set_elapsed(started.elapsed());
    }
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(m) = message {
        eprintln!("moebius {name}: {m}");
    }
    ExitCode::from(code)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify { .. } => "classify",
        Command::Topo { .. } => "topo",
        Command::Conjugator { .. } => "conjugator",
        Command::Canonical { .. } => "canonical",
        Command::Orbit { .. } => "orbit",
        Command::Operator { .. } => "operator",
        Command::Selftest { .. } => "selftest",
    }
}

fn run(cli: &Cli, gates: &Gates) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Classify { map } => cmd_classify(map, gates),
        Command::Topo { f, g, criterion } => cmd_topo(f, g, *criterion, gates),
        Command::Conjugator { f, g } => cmd_conjugator(f, g, gates, cli.seed),
        Command::Canonical { map, topological } => cmd_canonical(map, *topological, gates),
        Command::Orbit {
            map,
            seed_point,
            iterations,
            output,
            csv,
        } => cmd_orbit(map, seed_point, *iterations, output, *csv),
        Command::Operator { a, b, field } => cmd_operator(a, b, *field, gates),
        Command::Selftest { count, boundary } => Ok(cmd_selftest(cli.seed, *count, *boundary, gates)),
    }
}

fn fixed_points_value(set: &FixedPointSet) -> Value {
    match set {
        FixedPointSet::Everything => json!("all"),
        other => point_list(&other.points()),
    }
}

fn cmd_classify(text: &str, gates: &Gates) -> Result<Outcome, Error> {
    let f = parse_map(text, "map")?;
    let class = classify(&f, gates);
    let m = f.normalize();
    let e = eigenvalues(&m, gates);
    let (mults, canonical, topological) = if class == ConjClass::Identity {
        (Value::Null, f.to_string(), f.to_string())
    } else {
        let mp = multipliers(&f, gates)?;
        let values: Vec<String> = mp.values().into_iter().map(format_complex).collect();
        (
            json!(values),
            canonical_conjugacy_form(&f, gates)?.to_string(),
            topo_canonical_form(&f, gates)?.to_string(),
        )
    };
    Ok(ok(json!({
        "map": f.to_string(),
        "class": class.name(),
        "trace": format_complex(trace(&f)),
        "eigenvalues": [format_complex(e.first), format_complex(e.second)],
        "fixed_points": fixed_points_value(&fixed_point_set(&f, gates)),
        "multipliers": mults,
        "normalized_matrix": m.to_map().to_string(),
        "canonical_form": canonical,
        "topological_canonical_form": topological,
    })))
}

fn cmd_topo(f_text: &str, g_text: &str, criterion: Criterion, gates: &Gates) -> Result<Outcome, Error> {
    let f = parse_map(f_text, "f")?;
    let g = parse_map(g_text, "g")?;
    let d = evaluate(&f, &g, gates)?;
    let criteria = json!({ "trace": d.trace, "eigen": d.eigen, "multiplier": d.multiplier });
    let selected = match criterion {
        Criterion::All => None,
        Criterion::Trace => d.trace,
        Criterion::Eigen => d.eigen,
        Criterion::Multiplier => d.multiplier,
    };
    if criterion == Criterion::All && !d.criteria_agree() {
        return Err(Error::Indeterminate {
            trace: d.trace.unwrap_or(d.verdict),
            eigen: d.eigen.unwrap_or(d.verdict),
            multiplier: d.multiplier.unwrap_or(d.verdict),
            margin: d.margin,
        });
    }
    let v = selected.unwrap_or(d.verdict);
    let body = json!({
        "f": f.to_string(),
        "g": g.to_string(),
        "criterion": format!("{criterion:?}").to_lowercase(),
        "conjugate": v,
        "criteria": criteria,
        "class_f": d.class_f.name(),
        "class_g": d.class_g.name(),
        "margin": num(d.margin),
        "notes": d.notes,
    });
    Ok(verdict(body, v))
}

fn cmd_conjugator(f_text: &str, g_text: &str, gates: &Gates, seed: u64) -> Result<Outcome, Error> {
    let f = parse_map(f_text, "f")?;
    let g = parse_map(g_text, "g")?;
    let h = conjugator(&f, &g, gates)?;
    let residual = h.as_ref().map(|h| {
        let points = moebius_core::ensemble::Ensemble::new(seed).sample_points(20);
        conjugation_residual(&f, &g, h, &points)
    });
    let body = json!({
        "f": f.to_string(),
        "g": g.to_string(),
        "conjugate": h.is_some(),
        "h": h.map(|h| h.to_string()),
        "residual": residual.map(num),
    });
    Ok(verdict(body, h.is_some()))
}

fn cmd_canonical(text: &str, topological: bool, gates: &Gates) -> Result<Outcome, Error> {
    let f = parse_map(text, "map")?;
    let class = classify(&f, gates);
    let form = if class == ConjClass::Identity {
        f
    } else if topological {
        topo_canonical_form(&f, gates)?
    } else {
        canonical_conjugacy_form(&f, gates)?
    };
    Ok(ok(json!({
        "map": f.to_string(),
        "class": class.name(),
        "kind": if topological { "topological" } else { "conjugacy" },
        "canonical_form": form.to_string(),
    })))
}

fn cmd_orbit(
    text: &str,
    seed_point: &str,
    iterations: usize,
    output: &std::path::Path,
    csv: bool,
) -> Result<Outcome, Error> {
    let f = parse_map(text, "map")?;
    let z0 = parse_point(seed_point)?;
    if iterations == 0 {
        return Err(Error::InvalidInput("--iterations must be at least 1".into()));
    }
    let points = orbit::iterate(&f, z0, iterations);
    let svg = orbit::render_svg(&f, &points);
    std::fs::write(output, svg)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", output.display())))?;
    let csv_path = if csv {
        let path = output.with_extension("csv");
        std::fs::write(&path, orbit::render_csv(&points))
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
        Some(path.display().to_string())
    } else {
        None
    };
    Ok(ok(json!({
        "map": f.to_string(),
        "seed_point": format_point(z0),
        "iterations": iterations,
        "points": point_list(&points),
        "svg": output.display().to_string(),
        "csv": csv_path,
    })))
}

fn partition_value(p: &SpectralPartition) -> Value {
    let mut blocks = serde_json::Map::new();
    for kind in BlockKind::ALL {
        let b = p.block(kind);
        let eigen: Vec<Value> = b
            .eigen
            .iter()
            .map(|e| {
                json!({
                    "value": format_complex(e.value),
                    "algebraic": e.algebraic,
                    "geometric": e.geometric,
                })
            })
            .collect();
        blocks.insert(
            kind.label().to_string(),
            json!({ "size": b.size(), "eigenvalues": eigen, "det": if b.is_empty() { Value::Null } else { json!(format_complex(b.det())) } }),
        );
    }
    json!({
        "size": p.size,
        "field": p.field.to_string(),
        "blocks": Value::Object(blocks),
        "has_root_of_unity": p.has_root_of_unity,
    })
}

fn cmd_operator(a_text: &str, b_text: &str, field: FieldArg, gates: &Gates) -> Result<Outcome, Error> {
    let field = match field {
        FieldArg::Real => Field::Real,
        FieldArg::Complex => Field::Complex,
    };
    let a = OperatorMatrix::parse(a_text, field)?;
    let b = OperatorMatrix::parse(b_text, field)?;
    let d = match field {
        Field::Real => decide_real(&a, &b, gates)?,
        Field::Complex => decide_complex(&a, &b, gates)?,
    };
    let conditions: Vec<Value> = d
        .conditions
        .iter()
        .map(|(name, holds)| json!({ "condition": name, "holds": holds }))
        .collect();
    let body = json!({
        "a": a.to_string(),
        "b": b.to_string(),
        "field": field.to_string(),
        "conjugate": d.verdict,
        "conditions": conditions,
        "partition_a": partition_value(&d.partition_a),
        "partition_b": partition_value(&d.partition_b),
    });
    Ok(verdict(body, d.verdict))
}

fn counterexample_value(c: &Counterexample) -> Value {
    json!({
        "index": c.index,
        "property": c.property,
        "f": c.f,
        "g": c.g,
        "detail": c.detail,
    })
}

fn cmd_selftest(seed: u64, count: usize, boundary: bool, gates: &Gates) -> Outcome {
    let r = run_suite(&SuiteConfig { seed, count, boundary }, gates);
    let body = json!({
        "count": count,
        "boundary": boundary,
        "pairs": r.pairs,
        "clear_pairs": r.clear_pairs,
        "boundary_pairs": r.boundary_pairs,
        "conjugate_pairs": r.conjugate_pairs,
        "mobius_conjugate_pairs": r.mobius_conjugate_pairs,
        "vacuous": r.pairs == 0,
        "passed": r.passed(),
        "indeterminate": r.indeterminate.iter().map(counterexample_value).collect::<Vec<_>>(),
        "failures": r.failures.iter().map(counterexample_value).collect::<Vec<_>>(),
    });
    Outcome {
        body,
        code: if r.passed() { EXIT_OK } else { EXIT_SELFTEST_FAILED },
    }
}
