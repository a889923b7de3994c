//! Command-line front end: parse a plane-curve equation, run the
//! analysis pipeline, and emit JSON, DOT or text reports.

mod parse;
mod render;

use clap::{Args, Parser, Subcommand};
use deltav_core::algebra::{embed, Fq, FqCtx};
use deltav_core::curve::VPolynomial;
use deltav_core::elliptic::{kodaira_type, WeierstrassModel};
use deltav_core::error::Error as CoreError;
use deltav_core::minimal::minimal_rnc;
use deltav_core::model::{build_fibre, reduce_point, ReductionTarget};
use deltav_core::polytope::Subdivision;
use deltav_core::report::{self, AnalysisReport};
use deltav_core::schemes::dv_regular;
use deltav_core::Budget;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::io::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "deltav",
    about = "Newton-polytope models of plane curves over discretely valued fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CurveArgs {
    /// The defining equation, e.g. "y^2 = x^3 + 49" or a polynomial
    #[arg(short = 'f', long = "equation")]
    equation: String,
    /// Residue characteristic (a prime)
    #[arg(short = 'p', long)]
    prime: u64,
    /// Residue field extension degree
    #[arg(long = "e-res", default_value_t = 1)]
    e_res: u64,
    /// Tame ramification degree of a base change applied before analysis
    #[arg(long = "e-ram", default_value_t = 1)]
    e_ram: u64,
    /// Enumeration cap in field elements per brute-force count
    #[arg(long = "max-enum", default_value_t = 1_000_000)]
    max_enum: u128,
    /// Cap on intermediate fractions per slope chain
    #[arg(long = "max-farey", default_value_t = 100_000)]
    max_farey: usize,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write the JSON report to a path, or '-' for standard output
    #[arg(long)]
    json: Option<String>,
    /// Write the DOT dual graph to a path, or '-' for standard output
    #[arg(long)]
    dot: Option<String>,
    /// Print the ASCII rendering of the subdivision
    #[arg(long)]
    ascii: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: polytope, regularity, fibre, minimal model and
    /// invariants
    Analyze {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Subdivision, regularity and the special fibre
    Model {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The minimal normal-crossings fibre
    Minimal {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reduction type, homology, inertia, local polynomial and
    /// differentials
    Invariants {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kodaira type of a Weierstrass equation
    Elliptic {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reduce a rational point with given coordinate valuations
    Reduce {
        #[command(flatten)]
        curve: CurveArgs,
        /// Valuation of x(P)
        #[arg(long)]
        vx: i64,
        /// Valuation of y(P)
        #[arg(long)]
        vy: i64,
    },
    /// Frobenius trace on H^1 for a single tame face, at class (u, d)
    Trace {
        #[command(flatten)]
        curve: CurveArgs,
        /// Residue degree of the Weil class
        #[arg(long)]
        d: u32,
        /// Unit u: an integer, or g^k for the canonical generator of the
        /// multiplicative group of F_{q^d}
        #[arg(long)]
        u: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            let _ = e.print();
            return match e.kind() {
                DisplayHelp | DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(RunError::Domain(e)) => {
            eprintln!("error[{}]: {}", e.code(), e);
            ExitCode::from(2)
        }
        Err(RunError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(1)
        }
    }
}

enum RunError {
    Usage(String),
    Domain(CoreError),
    Io(std::io::Error),
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        RunError::Domain(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn ingest(curve: &CurveArgs) -> Result<(VPolynomial, Budget), RunError> {
    if !is_prime(curve.prime) {
        return Err(RunError::Usage(format!("{} is not prime", curve.prime)));
    }
    let poly =
        parse::parse_expression(&curve.equation).map_err(|e| RunError::Usage(e.to_string()))?;
    let terms: Vec<((i64, i64), BigRational)> =
        poly.iter().map(|(&e, c)| (e, c.clone())).collect();
    if terms.iter().any(|&((i, j), _)| i < 0 || j < 0) {
        return Err(RunError::Usage("negative exponents are not allowed".into()));
    }
    let mut vp = VPolynomial::from_rational_poly(&terms, curve.prime)?;
    if curve.e_ram != 1 || curve.e_res != 1 {
        vp = vp.base_change(curve.e_ram, curve.e_res)?;
    }
    let budget = Budget {
        max_enum: curve.max_enum,
        max_farey: curve.max_farey,
    };
    Ok((vp, budget))
}

fn emit(target: &Option<String>, content: &str) -> Result<(), RunError> {
    match target.as_deref() {
        None => {}
        Some("-") => print!("{content}"),
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn stdout_taken(output: &OutputArgs) -> bool {
    output.json.as_deref() == Some("-") || output.dot.as_deref() == Some("-")
}

fn emit_outputs(
    report: &AnalysisReport,
    sub: &Subdivision,
    fibre: Option<&deltav_core::model::SpecialFibre>,
    output: &OutputArgs,
) -> Result<(), RunError> {
    if output.json.is_some() {
        let json = serde_json::to_string_pretty(report).expect("report serializes");
        emit(&output.json, &format!("{json}\n"))?;
    }
    if output.dot.is_some() {
        let Some(fibre) = fibre else {
            return Err(RunError::Usage(
                "no special fibre available for DOT output".into(),
            ));
        };
        emit(&output.dot, &render::dot(fibre))?;
    }
    if output.ascii {
        print!("{}", render::ascii(sub));
    }
    Ok(())
}

fn summary(report: &AnalysisReport) {
    if let Some(p) = &report.polytope {
        let deltas: Vec<String> = p.faces.iter().map(|f| f.delta.to_string()).collect();
        println!(
            "polygon genus {} with {} face(s) (delta {}), {} edge(s), {} v-vertices",
            p.genus,
            p.faces.len(),
            deltas.join(","),
            p.edges.len(),
            p.vertices.len()
        );
    }
    if let Some(r) = &report.regularity {
        println!("regular: {} (vertex-only: {})", r.regular, r.vertex_only);
        for (k, v) in r.faces.iter().enumerate() {
            if !v.smooth {
                println!(
                    "  face {k} singular: {}",
                    v.witness.as_deref().unwrap_or("no witness")
                );
            }
        }
        for (k, v) in r.edges.iter().enumerate() {
            if !v.smooth {
                println!(
                    "  edge {k} not smooth: {}",
                    v.witness.as_deref().unwrap_or("no witness")
                );
            }
        }
    }
    if let Some(f) = &report.special_fibre {
        println!(
            "special fibre: {} component(s), {} intersection(s), b1 = {}",
            f.components.len(),
            f.intersections.len(),
            f.b1
        );
    }
    if let Some(m) = &report.minimal {
        println!(
            "minimal fibre: {} component(s) after {} contraction(s){}",
            m.components.len(),
            m.contractions,
            if m.n_gon_path { " (reduced n-gon)" } else { "" }
        );
    }
    if let Some(inv) = &report.invariants {
        let r = &inv.reduction;
        println!(
            "curve: good={} semistable={} tame={}; jacobian: good={} semistable={} tame={}",
            r.curve_good,
            r.curve_semistable,
            r.curve_tame,
            r.jacobian_good,
            r.jacobian_semistable,
            r.jacobian_tame
        );
        println!(
            "tame inertia orders: abelian {:?}, toric {:?}, wild defect {}",
            inv.tame_inertia.abelian_orders,
            inv.tame_inertia.toric_orders,
            inv.tame_inertia.wild_dimension_defect
        );
        println!(
            "local polynomial: {}",
            poly_string(&inv.local_polynomial.poly)
        );
        let exps: Vec<i64> = inv
            .differentials
            .exponents
            .iter()
            .map(|&(_, e)| e)
            .collect();
        println!("differential exponents: {exps:?}");
        if let Some((f, w)) = inv.conductor_semistable {
            println!("conductor exponent {f}, trivial multiplicity {w}");
        }
    }
    for (section, code) in &report.skipped {
        println!("section {section} skipped: {code}");
    }
}

fn poly_string(p: &[i64]) -> String {
    let mut parts = Vec::new();
    for (k, &c) in p.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = match k {
            0 => format!("{c}"),
            1 => format!("{c}*T"),
            _ => format!("{c}*T^{k}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Analyze { curve, output } => {
            let (vp, budget) = ingest(&curve)?;
            let report = report::analyze(&vp, &budget)?;
            let sub = Subdivision::lower_hull(&vp);
            let reg = dv_regular(&vp, &sub)?;
            let fibre = build_fibre(&vp, &sub, &reg, true, &budget)?;
            emit_outputs(&report, &sub, Some(&fibre), &output)?;
            if output.json.is_none() && !stdout_taken(&output) {
                summary(&report);
            }
            Ok(())
        }
        Command::Model { curve, output } => {
            let (vp, budget) = ingest(&curve)?;
            let sub = Subdivision::lower_hull(&vp);
            if sub.zero_volume {
                return Err(CoreError::ZeroVolume.into());
            }
            let reg = dv_regular(&vp, &sub)?;
            let fibre = build_fibre(&vp, &sub, &reg, true, &budget)?;
            let mut report = AnalysisReport::empty(vp.p, vp.field.m);
            report.polytope = Some(report::polytope_dto(&sub));
            report.special_fibre = Some(report::fibre_dto(&fibre));
            emit_outputs(&report, &sub, Some(&fibre), &output)?;
            if output.json.is_none() && !stdout_taken(&output) {
                summary(&report);
            }
            Ok(())
        }
        Command::Minimal { curve, output } => {
            let (vp, budget) = ingest(&curve)?;
            let minimal = minimal_rnc(&vp, &budget)?;
            let sub = Subdivision::lower_hull(&vp);
            let full = report::analyze(&vp, &budget)?;
            let mut report = AnalysisReport::empty(vp.p, vp.field.m);
            report.polytope = Some(report::polytope_dto(&sub));
            report.minimal = full.minimal;
            emit_outputs(&report, &sub, None, &output)?;
            if output.json.is_none() && !stdout_taken(&output) {
                summary(&report);
                println!("minimal components: {}", minimal.fibre.components.len());
            }
            Ok(())
        }
        Command::Invariants { curve, output } => {
            let (vp, budget) = ingest(&curve)?;
            let full = report::analyze(&vp, &budget)?;
            if full.invariants.is_none() {
                if let Some((_, code)) = full.skipped.iter().find(|(s, _)| s == "invariants") {
                    return Err(match code.as_str() {
                        "GenusZero" => CoreError::GenusZero.into(),
                        "BudgetExceeded" => CoreError::BudgetExceeded {
                            needed: 0,
                            cap: budget.max_enum,
                        }
                        .into(),
                        _ => CoreError::NotRegular.into(),
                    });
                }
            }
            let sub = Subdivision::lower_hull(&vp);
            let mut report = AnalysisReport::empty(vp.p, vp.field.m);
            report.invariants = full.invariants;
            report.polytope = Some(report::polytope_dto(&sub));
            emit_outputs(&report, &sub, None, &output)?;
            if output.json.is_none() && !stdout_taken(&output) {
                summary(&report);
            }
            Ok(())
        }
        Command::Elliptic { curve, output } => {
            let (vp, budget) = ingest(&curve)?;
            let model = weierstrass_of(&vp)?;
            let result = kodaira_type(&model, curve.prime, &budget)?;
            let mut report = AnalysisReport::empty(vp.p, vp.field.m);
            report.elliptic = Some(report::elliptic_dto(&result));
            if output.json.is_some() {
                let json = serde_json::to_string_pretty(&report).expect("serializes");
                emit(&output.json, &format!("{json}\n"))?;
            } else {
                println!("{}", result.kodaira);
                println!(
                    "tame: {}, component group order: {}, iterations: {}",
                    result.tame, result.component_group_order, result.iterations
                );
            }
            Ok(())
        }
        Command::Reduce { curve, vx, vy } => {
            let (vp, _) = ingest(&curve)?;
            let target = reduce_point(&vp, vx, vy)?;
            match target {
                ReductionTarget::Face { face } => {
                    println!("face component {face} (multiplicity 1)");
                }
                ReductionTarget::Chain { edge, n } => {
                    println!(
                        "chain component of edge {edge} at integer slope {n} (multiplicity 1)"
                    );
                }
            }
            Ok(())
        }
        Command::Trace { curve, d, u } => {
            let (vp, budget) = ingest(&curve)?;
            let ext = FqCtx::get(vp.p, vp.field.m * d as usize);
            let unit = parse_unit(&u, &vp, &ext)?;
            let trace = deltav_core::invariants::one_tame_trace(&vp, d, &unit, &budget)?;
            println!("{trace}");
            Ok(())
        }
    }
}

/// Read "g^k" or an integer as a unit in the extension field.
fn parse_unit(s: &str, vp: &VPolynomial, ext: &std::sync::Arc<FqCtx>) -> Result<Fq, RunError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("g^") {
        let k: u128 = rest
            .parse()
            .map_err(|_| RunError::Usage(format!("bad exponent in unit '{s}'")))?;
        let g = ext.multiplicative_generator();
        return Ok(g.pow(k));
    }
    if s == "g" {
        return Ok(ext.multiplicative_generator());
    }
    let n: i64 = s
        .parse()
        .map_err(|_| RunError::Usage(format!("unit must be an integer or g^k, got '{s}'")))?;
    let base = FqCtx::get(vp.p, 1).from_i64(n);
    if base.is_zero() {
        return Err(RunError::Usage("unit must be nonzero".into()));
    }
    Ok(embed(&base, ext))
}

/// Match the parsed polynomial against the Weierstrass shape.
fn weierstrass_of(vp: &VPolynomial) -> Result<WeierstrassModel, RunError> {
    let mut terms: std::collections::BTreeMap<(i64, i64), BigRational> = Default::default();
    for (&pt, c) in vp.terms() {
        let v = match c {
            deltav_core::curve::Coeff::Exact(a) => a.clone(),
            _ => return Err(RunError::Usage("elliptic input must be exact".into())),
        };
        terms.insert(pt, v);
    }
    let sign = match terms.get(&(0, 2)) {
        Some(c) if c.is_one() => BigRational::one(),
        Some(c) if (-c).is_one() => -BigRational::one(),
        _ => {
            return Err(RunError::Usage(
                "not a Weierstrass equation: need a monic y^2 term".into(),
            ))
        }
    };
    let get = |e: (i64, i64)| {
        terms
            .get(&e)
            .map(|c| c * &sign)
            .unwrap_or_else(BigRational::zero)
    };
    if !(get((3, 0)) + BigRational::one()).is_zero() {
        return Err(RunError::Usage(
            "not a Weierstrass equation: need a monic x^3 term with sign opposite to y^2".into(),
        ));
    }
    for &(i, j) in terms.keys() {
        let ok = matches!(
            (i, j),
            (0, 2) | (1, 1) | (0, 1) | (3, 0) | (2, 0) | (1, 0) | (0, 0)
        );
        if !ok {
            return Err(RunError::Usage(format!(
                "term x^{i} y^{j} does not belong to a Weierstrass equation"
            )));
        }
    }
    Ok(WeierstrassModel::new([
        get((1, 1)),
        -get((2, 0)),
        get((0, 1)),
        -get((1, 0)),
        -get((0, 0)),
    ]))
}
