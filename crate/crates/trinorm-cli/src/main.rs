//! Command-line front end: analyze configuration documents, blow up crossing
//! points, classify degenerating elliptic fibers, replay the finite-field
//! sampling checks, and print the built-in example library.
//!
//! Exit codes: 0 when a definite result was produced, 1 when the outcome is
//! inconclusive (or a sampling check failed to certify), 2 on input errors.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use trinorm::config::ConfigDocument;
use trinorm::fixtures::{self, synthesize_counterexample, Fixture};
use trinorm::kernel::PointId;
use trinorm::kodaira::{classify, fiber_shape, FiberShape, KodairaError, WeierstrassModel};
use trinorm::obstruction::{InconclusiveReason, Verdict};
use trinorm::oracle::{
    check_norm_values, check_residue_table, Monomial, NormValueReport, ResidueTableReport,
    SampleParams, DEFAULT_SAMPLE_DEGREE,
};
use trinorm::poly::{BigRational, Poly, Rationals};
use trinorm::report::{run_analysis, AnalysisOptions, Report};
use trinorm::surface::{self, SurfaceConfig};
use trinorm::torsor::TorsorProblem;

const EXIT_INCONCLUSIVE: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "trinorm",
    version,
    about = "Decide solvability of (x1²−a·y1²)(x2²−b·y2²)(x3²−ab·y3²) = c \
             over two-dimensional function fields",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a configuration document.
    Analyze(AnalyzeArgs),
    /// Blow up a configuration at a crossing point, then re-analyze.
    Blowup(BlowupArgs),
    /// Classify a Weierstrass model over ℚ[t] and describe its special fiber.
    Kodaira(KodairaArgs),
    /// Replay the finite-field sampling checks of the local value tables.
    Oracle(OracleArgs),
    /// Print or analyze one of the built-in example configurations.
    Fixture(FixtureArgs),
}

/// Where a configuration document comes from: a file ("-" for stdin) or the
/// built-in example library.
#[derive(Args)]
struct DocumentSource {
    /// Path to a configuration document; "-" reads standard input.
    #[arg(value_name = "PATH", required_unless_present = "fixture")]
    path: Option<PathBuf>,

    /// Use a built-in example instead of a file.
    #[arg(long, value_name = "NAME", conflicts_with = "path")]
    fixture: Option<String>,
}

impl DocumentSource {
    fn load(&self) -> Result<ConfigDocument> {
        if let Some(name) = &self.fixture {
            return Ok(fixtures::fixture(name)?.document);
        }
        let path = self.path.as_ref().expect("clap enforces path xor fixture");
        let text = if path.as_os_str() == "-" {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .context("reading standard input")?;
            buf
        } else {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        };
        Ok(trinorm::config::parse(&text)?)
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: DocumentSource,

    /// Also compute the place-level comparison on the base curve.
    #[arg(long)]
    weil: bool,

    /// Emit the machine-readable report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BlowupArgs {
    #[command(flatten)]
    source: DocumentSource,

    /// Crossing point to blow up.
    #[arg(long, value_name = "ID")]
    point: String,

    /// Also compute the place-level comparison on the base curve.
    #[arg(long)]
    weil: bool,

    /// Emit the transformed document and its report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct KodairaArgs {
    /// Coefficients of a1(t), comma-separated rationals, constant term first.
    #[arg(long, value_name = "COEFFS", default_value = "0")]
    a1: String,
    /// Coefficients of a2(t).
    #[arg(long, value_name = "COEFFS", default_value = "0")]
    a2: String,
    /// Coefficients of a3(t).
    #[arg(long, value_name = "COEFFS", default_value = "0")]
    a3: String,
    /// Coefficients of a4(t).
    #[arg(long, value_name = "COEFFS", default_value = "0")]
    a4: String,
    /// Coefficients of a6(t).
    #[arg(long, value_name = "COEFFS", default_value = "0")]
    a6: String,

    /// Build a torsor problem on a triangle of the special fiber and analyze
    /// it (requires a fiber whose crossings form a triangle, e.g. I3).
    #[arg(long)]
    synthesize: bool,

    /// Emit the classification (and any synthesis report) as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Field order; an odd prime congruent to 1 mod 4.
    #[arg(long)]
    q: u64,

    /// Number of sampled points.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,

    /// RNG seed; reports echo it, so runs reproduce bit-for-bit.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Degree bound for the sampled coordinate polynomials.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_DEGREE)]
    degree: u32,

    /// Check the value classes of x² − d·y² for this coefficient
    /// (a monomial like `2*t^3`).
    #[arg(long, value_name = "MONOMIAL", conflicts_with_all = ["a", "b"])]
    norm: Option<String>,

    /// Coefficient a for the residue-table check (requires --b).
    #[arg(long, value_name = "MONOMIAL", requires = "b")]
    a: Option<String>,

    /// Coefficient b for the residue-table check (requires --a).
    #[arg(long, value_name = "MONOMIAL", requires = "a")]
    b: Option<String>,

    /// Emit the check report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FixtureArgs {
    /// Fixture name; omit to list the available fixtures.
    #[arg(value_name = "NAME")]
    name: Option<String>,

    /// Also compute the place-level comparison on the base curve.
    #[arg(long)]
    weil: bool,

    /// Emit the document, expectation, and report as JSON.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    // Die quietly when the reader closes the pipe (`trinorm fixture | head`),
    // as Unix filters do, instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Blowup(args) => blowup(args),
        Command::Kodaira(args) => kodaira(args),
        Command::Oracle(args) => oracle(args),
        Command::Fixture(args) => fixture(args),
    }
}

/// 0 for a definite verdict, 1 for inconclusive analyses, 2 when the
/// inconclusiveness is an input defect.
fn exit_for(verdict: &Verdict) -> ExitCode {
    match verdict {
        Verdict::NoRationalPoint { .. } | Verdict::HasRationalPoint { .. } => ExitCode::SUCCESS,
        Verdict::Inconclusive {
            reason: InconclusiveReason::InvalidInput { .. },
        } => ExitCode::from(EXIT_INPUT_ERROR),
        Verdict::Inconclusive { .. } => ExitCode::from(EXIT_INCONCLUSIVE),
    }
}

fn emit_report(report: &Report, as_json: bool) -> Result<()> {
    if as_json {
        println!("{}", serde_json::to_string_pretty(report)?);
    } else {
        print!("{report}");
    }
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    let document = args.source.load()?;
    let problem = document.to_problem();
    let report = run_analysis(&problem, AnalysisOptions { weil: args.weil });
    emit_report(&report, args.json)?;
    Ok(exit_for(&report.verdict))
}

fn blowup(args: BlowupArgs) -> Result<ExitCode> {
    let document = args.source.load()?;
    let problem = document.to_problem();
    let center = PointId::new(args.point.as_str());
    let elements = [problem.a.clone(), problem.b.clone(), problem.c.clone()];
    let (config, transformed, outcome) = surface::blowup(&problem.config, &center, &elements)?;
    let mut transformed = transformed.into_iter();
    let problem = TorsorProblem {
        config,
        a: transformed.next().expect("three elements in, three out"),
        b: transformed.next().expect("three elements in, three out"),
        c: transformed.next().expect("three elements in, three out"),
    };
    let document = ConfigDocument::from_problem(&problem);
    let report = run_analysis(&problem, AnalysisOptions { weil: args.weil });

    if args.json {
        let value = json!({
            "center": center,
            "exceptional": outcome.exceptional,
            "new_points": outcome.new_points,
            "document": document,
            "report": report,
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        let crossings: Vec<String> = outcome.new_points.iter().map(|p| p.to_string()).collect();
        println!(
            "blew up {center}: exceptional curve {}, new crossings {}",
            outcome.exceptional,
            crossings.join(", ")
        );
        println!("transformed document:");
        println!("{}", trinorm::config::print(&document));
        print!("{report}");
    }
    Ok(exit_for(&report.verdict))
}

fn parse_poly(label: &str, text: &str) -> Result<Poly<BigRational>> {
    let coeffs = text
        .split(',')
        .map(|part| {
            let part = part.trim();
            BigRational::from_str(part)
                .map_err(|e| anyhow!("coefficient `{part}` of {label}: {e}"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_coeffs(&Rationals, coeffs))
}

fn shape_json(shape: &FiberShape) -> serde_json::Value {
    match shape {
        FiberShape::Crossings {
            config,
            description,
        } => json!({
            "kind": "crossings",
            "description": description,
            "components": config.curves.iter().map(|c| c.id.to_string()).collect::<Vec<_>>(),
            "crossings": config
                .points
                .iter()
                .map(|p| json!({
                    "id": p.id,
                    "curves": p.curves,
                }))
                .collect::<Vec<_>>(),
        }),
        FiberShape::NotSimpleCrossings {
            reason,
            blowups_to_cycle,
        } => json!({
            "kind": "not-simple-crossings",
            "reason": reason,
            "blowups_to_cycle": blowups_to_cycle,
        }),
    }
}

fn print_shape(shape: &FiberShape) {
    match shape {
        FiberShape::Crossings {
            config,
            description,
        } => {
            println!("special fiber: {description}");
            for point in &config.points {
                let pair: Vec<String> = point.curves.iter().map(|c| c.to_string()).collect();
                println!("  {}: {}", point.id, pair.join(" ∩ "));
            }
        }
        FiberShape::NotSimpleCrossings {
            reason,
            blowups_to_cycle,
        } => {
            println!("special fiber: not a simple-crossing cycle ({reason})");
            if let Some(n) = blowups_to_cycle {
                println!("  {n} blow-up(s) would produce a cycle of rational curves");
            }
        }
    }
}

fn kodaira(args: KodairaArgs) -> Result<ExitCode> {
    let model = WeierstrassModel {
        a1: parse_poly("a1", &args.a1)?,
        a2: parse_poly("a2", &args.a2)?,
        a3: parse_poly("a3", &args.a3)?,
        a4: parse_poly("a4", &args.a4)?,
        a6: parse_poly("a6", &args.a6)?,
    };
    let classification = match classify(&Rationals, &model) {
        Ok(c) => c,
        Err(e @ KodairaError::ZeroDiscriminant) => return Err(e.into()),
        Err(e @ KodairaError::Unclassifiable { .. }) => {
            // A valid but out-of-table model: no verdict rather than bad input.
            if args.json {
                println!("{}", serde_json::to_string_pretty(&json!({"error": e.to_string()}))?);
            } else {
                println!("unclassified: {e}");
            }
            return Ok(ExitCode::from(EXIT_INCONCLUSIVE));
        }
    };
    let shape = fiber_shape(classification.kodaira_type);

    let synthesis = if args.synthesize {
        let FiberShape::Crossings { config, .. } = &shape else {
            bail!(
                "--synthesize needs a simple-crossing fiber; type {} does not qualify",
                classification.kodaira_type
            );
        };
        Some(synthesize(config)?)
    } else {
        None
    };

    if args.json {
        let mut value = json!({
            "type": classification.kodaira_type,
            "v_c4": classification.v_c4,
            "v_delta": classification.v_delta,
            "rescalings": classification.rescalings,
            "c4": classification.invariants.c4.display("t"),
            "c6": classification.invariants.c6.display("t"),
            "discriminant": classification.invariants.discriminant.display("t"),
            "fiber": shape_json(&shape),
        });
        if let Some((document, report)) = &synthesis {
            value["synthesis"] = json!({ "document": document, "report": report });
        }
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        let v_c4 = classification
            .v_c4
            .map_or("∞".to_string(), |v| v.to_string());
        println!(
            "type {}  (v(c4) = {v_c4}, v(Δ) = {}, rescalings: {})",
            classification.kodaira_type, classification.v_delta, classification.rescalings
        );
        println!("c4 = {}", classification.invariants.c4.display("t"));
        println!("c6 = {}", classification.invariants.c6.display("t"));
        println!("Δ  = {}", classification.invariants.discriminant.display("t"));
        print_shape(&shape);
        if let Some((document, report)) = &synthesis {
            println!("synthesized torsor problem:");
            println!("{}", trinorm::config::print(document));
            print!("{report}");
        }
    }
    Ok(match &synthesis {
        Some((_, report)) => exit_for(&report.verdict),
        None => ExitCode::SUCCESS,
    })
}

fn synthesize(config: &SurfaceConfig) -> Result<(ConfigDocument, Report)> {
    let problem = synthesize_counterexample(config)?;
    let document = ConfigDocument::from_problem(&problem);
    let report = run_analysis(&problem, AnalysisOptions::default());
    Ok((document, report))
}

fn print_norm_report(report: &NormValueReport) {
    println!(
        "norm-value check: q = {}, d = {}, {} trials, seed {}, degree ≤ {}",
        report.q, report.d, report.trials, report.seed, report.degree
    );
    let rule = match report.rule {
        trinorm::oracle::NormValueRule::EvenValuations => "all valuations even",
        trinorm::oracle::NormValueRule::TwoClasses => "classes exactly {1, -d}",
        trinorm::oracle::NormValueRule::AllClasses => "every class attainable",
    };
    println!("  rule: {rule}");
    println!("  observed classes: {{{}}}", report.observed_classes.join(", "));
    if let Some(expected) = &report.expected_classes {
        println!(
            "  expected classes: {{{}}} ({})",
            expected.join(", "),
            if report.all_expected_observed {
                "all observed"
            } else {
                "NOT all observed"
            }
        );
    }
    println!("  violations: {}", report.violations);
    if let Some(first) = &report.first_violation {
        println!("  first violation: {first}");
    }
}

fn print_table_report(report: &ResidueTableReport) {
    println!(
        "residue-table check: q = {}, a = {}, b = {}, {} trials, seed {}, degree ≤ {}",
        report.q, report.a, report.b, report.trials, report.seed, report.degree
    );
    if let Some(reason) = &report.skipped {
        println!("  skipped: {reason}");
        return;
    }
    for coverage in &report.coverage {
        println!(
            "  predicted {{{}}}: observed {{{}}}",
            coverage.predicted.join(", "),
            coverage.observed.join(", ")
        );
    }
    println!(
        "  violations: {}; {}",
        report.violations,
        if report.sets_complete {
            "every predicted set fully covered"
        } else {
            "some predicted element was never observed"
        }
    );
    if let Some(first) = &report.first_violation {
        println!("  first violation: {first}");
    }
}

fn oracle(args: OracleArgs) -> Result<ExitCode> {
    let params = SampleParams::new(args.trials, args.seed).with_degree(args.degree);
    let parse =
        |label: &str, text: &str| -> Result<Monomial> { text.parse().map_err(|e| anyhow!("{label}: {e}")) };

    let certified = match (&args.norm, &args.a, &args.b) {
        (Some(d), None, None) => {
            let report = check_norm_values(args.q, parse("--norm", d)?, params)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_norm_report(&report);
            }
            report.violations == 0 && report.all_expected_observed
        }
        (None, Some(a), Some(b)) => {
            let report =
                check_residue_table(args.q, parse("--a", a)?, parse("--b", b)?, params)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_table_report(&report);
            }
            report.violations == 0 && report.sets_complete
        }
        _ => bail!("pass either --norm <monomial> or both --a and --b"),
    };
    Ok(if certified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INCONCLUSIVE)
    })
}

fn fixture(args: FixtureArgs) -> Result<ExitCode> {
    let Some(name) = &args.name else {
        for fixture in fixtures::all() {
            println!("{:20} {} (expected: {})", fixture.name, fixture.summary, fixture.expected);
        }
        return Ok(ExitCode::SUCCESS);
    };
    let Fixture {
        name,
        summary,
        document,
        expected,
    } = fixtures::fixture(name)?;
    let problem = document.to_problem();
    let report = run_analysis(&problem, AnalysisOptions { weil: args.weil });

    if args.json {
        let value = json!({
            "name": name,
            "summary": summary,
            "expected": expected.to_string(),
            "expectation_met": expected.matches(&report.verdict),
            "document": document,
            "report": report,
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!("{name}: {summary}");
        println!("expected: {expected}");
        println!("{}", trinorm::config::print(&document));
        print!("{report}");
        if !expected.matches(&report.verdict) {
            println!("WARNING: computed verdict does not match the expectation");
        }
    }
    Ok(exit_for(&report.verdict))
}
