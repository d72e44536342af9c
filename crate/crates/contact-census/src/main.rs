//! Command line front end: every census and traversal query with
//! deterministic JSON (default) or flat table output.
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 when two independent
//! formulas that must agree disagree (an internal inconsistency, never bad
//! input).

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use contact_census::census::{
    admissible_twisting, enumerate_backgrounds, exceptional_count, exceptional_enumerate,
    Background, BackgroundBounds, SeifertDescriptor,
};
use contact_census::dividing_sets::{
    attach_template, close_annulus, euler_signature, AnnulusArc, AnnulusSet, End, Side, Sign,
    TemplateVerdict, TorusMulticurve,
};
use contact_census::farey::{block_decomposition, monotone_path, shortest_path};
use contact_census::lattice::{
    cf_expand, cf_value, format_rational, gluing_matrix, mobius, parse_rational, surgery_matrix,
    IntMatrix2, Slope,
};
use contact_census::solid_torus::{
    boundary_for_twisting, count_tight, enumerate_tight, fiber_count,
    fiber_count_via_coordinate_change, SolidTorusBoundary,
};
use contact_census::traversal::{
    eta_invariants, initial_state, isotopic, traverse, TraversalState, Verdict, Wall,
};
use contact_census::DomainError;

#[derive(Parser)]
#[command(
    name = "contact-census",
    about = "Exact classification data of tight contact structures on M(e0, r)",
    version
)]
struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Emit a flat key/value table instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Negative continued fractions.
    #[command(subcommand)]
    Cf(CfCommand),
    /// Slope arithmetic under SL(2,Z).
    #[command(subcommand)]
    Slope(SlopeCommand),
    /// The surgery matrix A(r).
    SurgeryMatrix(SurgeryMatrixArgs),
    /// Shortest paths in the Farey tessellation.
    #[command(subcommand)]
    Farey(FareyCommand),
    /// Tight structures on solid tori.
    #[command(subcommand)]
    SolidTorus(SolidTorusCommand),
    /// The census of M(e0, r).
    #[command(subcommand)]
    Census(CensusCommand),
    /// Dividing-set combinatorics.
    #[command(subcommand)]
    Divide(DivideCommand),
    /// Bounded state traversal of one exceptional structure.
    Traverse(TraverseArgs),
    /// Isotopy of two exceptional structures.
    Isotopic(IsotopicArgs),
}

#[derive(Subcommand)]
enum CfCommand {
    /// Expand a rational < -1 into its negative continued fraction.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        value: String,
    },
    /// Evaluate a coefficient list d0,d1,...
    Value {
        #[arg(long, allow_hyphen_values = true)]
        coefficients: String,
    },
}

#[derive(Subcommand)]
enum SlopeCommand {
    /// Apply a matrix to a slope.
    Map(SlopeMapArgs),
}

#[derive(Args)]
struct SlopeMapArgs {
    /// The slope to map (p/q or inf).
    #[arg(long, allow_hyphen_values = true)]
    slope: String,
    /// Explicit matrix entries a,b,c,d (row major, determinant +1).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["r", "e0"])]
    matrix: Option<String>,
    /// Use the surgery matrix A(r).
    #[arg(long, conflicts_with = "e0")]
    r: Option<String>,
    /// Use the gluing matrix of the Euler term e0.
    #[arg(long, allow_hyphen_values = true)]
    e0: Option<i64>,
    /// Apply the inverse of the chosen matrix.
    #[arg(long)]
    inverse: bool,
}

#[derive(Args)]
struct SurgeryMatrixArgs {
    /// Surgery coefficient r = p/q with 0 < r < 1.
    #[arg(long)]
    r: String,
}

#[derive(Subcommand)]
enum FareyCommand {
    /// Minimal vertex path between two slopes.
    Path(FareyArgs),
    /// Continued-fraction block sizes of the minimal path.
    Blocks(FareyArgs),
}

#[derive(Args)]
struct FareyArgs {
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    #[arg(long, allow_hyphen_values = true)]
    to: String,
    /// Keep every vertex inside the slope interval of the endpoints (the
    /// layered solid-torus decomposition path).
    #[arg(long)]
    monotone: bool,
}

#[derive(Args)]
struct BoundaryArgs {
    /// Surgery coefficient r (the boundary is then the fibre neighbourhood
    /// boundary for twisting --t).
    #[arg(long, conflicts_with_all = ["meridian", "dividing"])]
    r: Option<String>,
    /// Twisting number (with --r; default 0).
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    t: i64,
    /// Meridian slope (explicit boundary).
    #[arg(long, allow_hyphen_values = true, requires = "dividing")]
    meridian: Option<String>,
    /// Dividing slope (explicit boundary).
    #[arg(long, allow_hyphen_values = true, requires = "meridian")]
    dividing: Option<String>,
    /// Division number of the boundary (explicit boundary; default 1).
    #[arg(long, default_value_t = 1)]
    division: u64,
}

#[derive(Subcommand)]
enum SolidTorusCommand {
    /// Count tight structures with the given boundary.
    Count(BoundaryArgs),
    /// Enumerate their classifying invariants.
    Enumerate(BoundaryArgs),
}

#[derive(Subcommand)]
enum CensusCommand {
    /// Tight structures over a background with twisting --t.
    FiberCount {
        #[arg(long)]
        r: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        t: i64,
    },
    /// Exceptional tight structures on M(e0, r).
    Exceptional {
        #[arg(long, allow_hyphen_values = true)]
        e0: i64,
        #[arg(long)]
        r: String,
    },
    /// Background structures within truncation bounds.
    Backgrounds {
        #[arg(long, allow_hyphen_values = true)]
        e0: i64,
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 3)]
        max_division: u64,
        #[arg(long, default_value_t = 3)]
        max_denominator: i64,
        #[arg(long, default_value_t = 3)]
        max_c: i64,
    },
}

#[derive(Args)]
struct AnnulusArgs {
    /// Marked points on the bottom circle.
    #[arg(long)]
    bottom: usize,
    /// Marked points on the top circle.
    #[arg(long)]
    top: usize,
    /// Arc as from:to:winding with endpoints b<i> or t<i> (repeatable),
    /// e.g. --arc b0:t1:0.
    #[arg(long = "arc", allow_hyphen_values = true)]
    arcs: Vec<String>,
    /// Essential core curves.
    #[arg(long, default_value_t = 0)]
    cores: u64,
    /// Contractible closed curves.
    #[arg(long, default_value_t = 0)]
    contractible: u64,
    /// Sign of the base region (+ or -).
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
}

#[derive(Subcommand)]
enum DivideCommand {
    /// Glue the two circles of an annulus multicurve into a torus multicurve.
    Close(AnnulusArgs),
    /// Reduce closed-curve multiplicities mod 2.
    Hat(AnnulusArgs),
    /// Attach an elementary template and report the verdict.
    Template {
        #[command(flatten)]
        annulus: AnnulusArgs,
        /// Attaching circle.
        #[arg(long)]
        side: String,
        /// Span start of the boundary-parallel template arc.
        #[arg(long)]
        span: usize,
        /// Template size n (2n marked points on the attaching circle).
        #[arg(long)]
        size: usize,
    },
    /// Signed Euler count of a closed torus multicurve.
    Euler {
        /// Essential components as slope:multiplicity, comma separated
        /// (e.g. 0/1:2 or inf:1); may be empty.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        components: String,
        /// One sign (+ or -) per contractible disc, comma separated.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        signs: String,
    },
}

#[derive(Args)]
struct TraverseArgs {
    #[arg(long, allow_hyphen_values = true)]
    e0: i64,
    #[arg(long)]
    r: String,
    /// Extremal sign (2 or -2).
    #[arg(long, allow_hyphen_values = true)]
    l: i64,
    /// Rotation numbers r0,r1,...
    #[arg(long, allow_hyphen_values = true)]
    eta: String,
    #[arg(long, default_value_t = 8)]
    max_denominator: i64,
}

#[derive(Args)]
struct IsotopicArgs {
    #[arg(long, allow_hyphen_values = true)]
    e0: i64,
    #[arg(long)]
    r: String,
    /// Extremal sign of the first structure.
    #[arg(long, allow_hyphen_values = true)]
    l: i64,
    /// Rotation numbers of the first structure.
    #[arg(long, allow_hyphen_values = true)]
    eta: String,
    /// Extremal sign of the second structure.
    #[arg(long, allow_hyphen_values = true)]
    l2: i64,
    /// Rotation numbers of the second structure.
    #[arg(long, allow_hyphen_values = true)]
    eta2: String,
    #[arg(long, default_value_t = 8)]
    max_denominator: i64,
}

/// Failure modes with distinct exit codes.
enum AppError {
    /// Bad input: exit 1.
    Domain(String),
    /// Cross-formula disagreement: exit 2.
    Inconsistent(String),
}

impl From<DomainError> for AppError {
    fn from(e: DomainError) -> AppError {
        AppError::Domain(e.0)
    }
}

type AppResult<T> = Result<T, AppError>;

fn parse_int_list(s: &str) -> AppResult<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| AppError::Domain(format!("invalid integer '{part}'")))
        })
        .collect()
}

fn parse_matrix(s: &str) -> AppResult<IntMatrix2> {
    let entries = parse_int_list(s)?;
    if entries.len() != 4 {
        return Err(AppError::Domain("matrix needs four entries a,b,c,d".into()));
    }
    Ok(IntMatrix2::new(entries[0], entries[1], entries[2], entries[3])?)
}

fn parse_end(s: &str) -> AppResult<End> {
    let (side, index) = s.split_at(1);
    let index: usize = index
        .parse()
        .map_err(|_| AppError::Domain(format!("invalid endpoint '{s}'")))?;
    match side {
        "b" => Ok(End::bottom(index)),
        "t" => Ok(End::top(index)),
        _ => Err(AppError::Domain(format!(
            "endpoint '{s}' must start with b or t"
        ))),
    }
}

fn parse_annulus(args: &AnnulusArgs) -> AppResult<AnnulusSet> {
    let mut arcs = Vec::new();
    for raw in &args.arcs {
        let parts: Vec<&str> = raw.split(':').collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(AppError::Domain(format!(
                "arc '{raw}' must be from:to or from:to:winding"
            )));
        }
        let winding = if parts.len() == 3 {
            parts[2]
                .parse::<i64>()
                .map_err(|_| AppError::Domain(format!("invalid winding in '{raw}'")))?
        } else {
            0
        };
        arcs.push(AnnulusArc::new(
            parse_end(parts[0])?,
            parse_end(parts[1])?,
            winding,
        ));
    }
    let sign = args.sign.as_deref().map(Sign::parse).transpose()?;
    Ok(AnnulusSet::new(
        args.bottom,
        args.top,
        arcs,
        args.cores,
        args.contractible,
        sign,
    )?)
}

fn end_json(e: &End) -> String {
    match e.side {
        Side::Bottom => format!("b{}", e.index),
        Side::Top => format!("t{}", e.index),
    }
}

fn annulus_json(a: &AnnulusSet) -> Value {
    json!({
        "bottom": a.bottom(),
        "top": a.top(),
        "arcs": a.arcs().iter().map(|arc| json!({
            "from": end_json(&arc.from),
            "to": end_json(&arc.to),
            "winding": arc.winding,
        })).collect::<Vec<_>>(),
        "cores": a.cores(),
        "contractible": a.contractible(),
        "sign": a.base_sign().map(|s| s.to_string()),
        "tight": a.is_tight(),
    })
}

fn multicurve_json(m: &TorusMulticurve) -> Value {
    json!({
        "components": m.components().iter().map(|(s, mult)| json!({
            "slope": s.to_string(),
            "multiplicity": mult,
        })).collect::<Vec<_>>(),
        "contractible": m.contractible(),
        "disc_signs": m.disc_signs().map(|signs| {
            signs.iter().map(|s| s.to_string()).collect::<Vec<_>>()
        }),
        "signs_dropped": m.signs_dropped(),
        "tight": m.is_tight(),
    })
}

fn state_json(s: &TraversalState) -> Value {
    let wall = match s.wall {
        Wall::Finite(slope) => json!({ "slope": slope.to_string() }),
        Wall::Infinite(division) => json!({ "slope": "inf", "division": division }),
    };
    json!({
        "wall": wall,
        "l": s.l,
        "eta": s.eta.values(),
        "euler_vector": [s.euler_vector.0, s.euler_vector.1],
    })
}

fn matrix_json(m: &IntMatrix2) -> Value {
    let (a, b, c, d) = m.entries();
    json!([[a, b], [c, d]])
}

fn result_json(command: &str, input: Value, result: Value) -> Value {
    json!({ "command": command, "input": input, "result": result })
}

fn boundary_from_args(args: &BoundaryArgs) -> AppResult<(SolidTorusBoundary, Value)> {
    if let Some(r) = &args.r {
        let r = parse_rational(r)?;
        let b = boundary_for_twisting(args.t, r)?;
        let input = json!({ "r": format_rational(r), "t": args.t });
        Ok((b, input))
    } else if let (Some(m), Some(d)) = (&args.meridian, &args.dividing) {
        let meridian = Slope::parse(m)?;
        let dividing = Slope::parse(d)?;
        let b = SolidTorusBoundary::new(meridian, dividing, args.division)?;
        let input = json!({
            "meridian": meridian.to_string(),
            "dividing": dividing.to_string(),
            "division": args.division,
        });
        Ok((b, input))
    } else {
        Err(AppError::Domain(
            "provide either --r (with --t) or --meridian and --dividing".into(),
        ))
    }
}

fn run(cli: &Cli) -> AppResult<Value> {
    match &cli.command {
        Command::Cf(CfCommand::Expand { value }) => {
            let v = parse_rational(value)?;
            let e = cf_expand(v)?;
            Ok(result_json(
                "cf expand",
                json!({ "value": format_rational(v) }),
                json!(e.coefficients()),
            ))
        }
        Command::Cf(CfCommand::Value { coefficients }) => {
            let c = parse_int_list(coefficients)?;
            let v = cf_value(&c)?;
            Ok(result_json(
                "cf value",
                json!({ "coefficients": c }),
                json!(format_rational(v)),
            ))
        }
        Command::Slope(SlopeCommand::Map(args)) => {
            let slope = Slope::parse(&args.slope)?;
            let mut matrix = if let Some(m) = &args.matrix {
                parse_matrix(m)?
            } else if let Some(r) = &args.r {
                surgery_matrix(parse_rational(r)?)?
            } else if let Some(e0) = args.e0 {
                gluing_matrix(e0)
            } else {
                return Err(AppError::Domain(
                    "provide one of --matrix, --r, or --e0".into(),
                ));
            };
            if args.inverse {
                matrix = matrix.inverse();
            }
            let image = mobius(&matrix, &slope);
            Ok(result_json(
                "slope map",
                json!({
                    "slope": slope.to_string(),
                    "matrix": matrix_json(&matrix),
                }),
                json!(image.to_string()),
            ))
        }
        Command::SurgeryMatrix(args) => {
            let r = parse_rational(&args.r)?;
            let m = surgery_matrix(r)?;
            Ok(result_json(
                "surgery-matrix",
                json!({ "r": format_rational(r) }),
                matrix_json(&m),
            ))
        }
        Command::Farey(cmd) => {
            let (args, blocks) = match cmd {
                FareyCommand::Path(a) => (a, false),
                FareyCommand::Blocks(a) => (a, true),
            };
            let from = Slope::parse(&args.from)?;
            let to = Slope::parse(&args.to)?;
            let path = if args.monotone {
                monotone_path(&from, &to)?
            } else {
                shortest_path(&from, &to)?
            };
            let vertices: Vec<String> = path.vertices().iter().map(|s| s.to_string()).collect();
            let input = json!({
                "from": from.to_string(),
                "to": to.to_string(),
                "monotone": args.monotone,
            });
            if blocks {
                let b = block_decomposition(&path)?;
                Ok(result_json(
                    "farey blocks",
                    input,
                    json!({ "path": vertices, "sizes": b.sizes() }),
                ))
            } else {
                Ok(result_json("farey path", input, json!(vertices)))
            }
        }
        Command::SolidTorus(cmd) => {
            let (args, enumerate) = match cmd {
                SolidTorusCommand::Count(a) => (a, false),
                SolidTorusCommand::Enumerate(a) => (a, true),
            };
            let (boundary, input) = boundary_from_args(args)?;
            let count = count_tight(&boundary)?;
            let tuples = enumerate_tight(&boundary)?;
            if tuples.len() as u64 != count {
                return Err(AppError::Inconsistent(format!(
                    "count formula gives {count} but enumeration gives {}",
                    tuples.len()
                )));
            }
            if enumerate {
                Ok(result_json(
                    "solid-torus enumerate",
                    input,
                    json!(tuples.iter().map(|t| t.values().to_vec()).collect::<Vec<_>>()),
                ))
            } else {
                Ok(result_json("solid-torus count", input, json!(count)))
            }
        }
        Command::Census(CensusCommand::FiberCount { r, t }) => {
            let r = parse_rational(r)?;
            let count = fiber_count(*t, r)?;
            let via_change = fiber_count_via_coordinate_change(*t, r)?;
            if count != via_change {
                return Err(AppError::Inconsistent(format!(
                    "fiber count formula gives {count} but the coordinate change gives {via_change}"
                )));
            }
            if count > 0 {
                let via_boundary = count_tight(&boundary_for_twisting(*t, r)?)?;
                if count != via_boundary {
                    return Err(AppError::Inconsistent(format!(
                        "fiber count formula gives {count} but the boundary route gives {via_boundary}"
                    )));
                }
            }
            Ok(result_json(
                "census fiber-count",
                json!({ "r": format_rational(r), "t": t }),
                json!(count),
            ))
        }
        Command::Census(CensusCommand::Exceptional { e0, r }) => {
            let r = parse_rational(r)?;
            let m = SeifertDescriptor::new(*e0, r)?;
            let count = exceptional_count(&m)?;
            let classes = exceptional_enumerate(&m)?;
            if classes.len() as u64 != count {
                return Err(AppError::Inconsistent(format!(
                    "count formula gives {count} but orbit enumeration gives {}",
                    classes.len()
                )));
            }
            Ok(json!({
                "command": "census exceptional",
                "input": { "e0": e0, "r": format_rational(r) },
                "result": count,
                "witnesses": classes.iter().map(|c| json!({
                    "l": c.l,
                    "eta": c.eta,
                })).collect::<Vec<_>>(),
            }))
        }
        Command::Census(CensusCommand::Backgrounds {
            e0,
            r,
            max_division,
            max_denominator,
            max_c,
        }) => {
            let r = parse_rational(r)?;
            let m = SeifertDescriptor::new(*e0, r)?;
            let bounds = BackgroundBounds {
                max_division: *max_division,
                max_denominator: *max_denominator,
                max_c: *max_c,
            };
            let entries = enumerate_backgrounds(&m, &bounds)?;
            let rendered: Vec<Value> = entries
                .iter()
                .map(|e| {
                    let background = match &e.background {
                        Background::NegativeBase { index } => {
                            json!({ "kind": "negative-base", "index": index })
                        }
                        Background::ThreeTorus { n, c } => {
                            json!({ "kind": "three-torus", "n": n, "c": [c.0, c.1, c.2] })
                        }
                        Background::InvariantT0 { division, slope } => json!({
                            "kind": "invariant-torus",
                            "division": division,
                            "slope": slope.to_string(),
                        }),
                        Background::ExceptionalBase { l } => {
                            json!({ "kind": "exceptional-base", "l": l })
                        }
                    };
                    json!({
                        "background": background,
                        "twisting": e.twisting,
                        "count": e.count,
                    })
                })
                .collect();
            Ok(json!({
                "command": "census backgrounds",
                "input": { "e0": e0, "r": format_rational(r) },
                "result": {
                    "admissible_twisting": admissible_twisting(&m),
                    "backgrounds": rendered,
                },
                "truncation": {
                    "max_division": max_division,
                    "max_denominator": max_denominator,
                    "max_c": max_c,
                },
            }))
        }
        Command::Divide(DivideCommand::Close(args)) => {
            let a = parse_annulus(args)?;
            let closed = close_annulus(&a)?;
            Ok(result_json(
                "divide close",
                annulus_json(&a),
                multicurve_json(&closed),
            ))
        }
        Command::Divide(DivideCommand::Hat(args)) => {
            let a = parse_annulus(args)?;
            Ok(result_json(
                "divide hat",
                annulus_json(&a),
                annulus_json(&a.hat()),
            ))
        }
        Command::Divide(DivideCommand::Template {
            annulus,
            side,
            span,
            size,
        }) => {
            let a = parse_annulus(annulus)?;
            let side = Side::parse(side)?;
            let verdict = attach_template(&a, side, *span, *size)?;
            let result = match &verdict {
                TemplateVerdict::Tight(combined) => json!({
                    "verdict": "tight",
                    "multicurve": annulus_json(combined),
                }),
                TemplateVerdict::Overtwisted => json!({ "verdict": "overtwisted" }),
            };
            Ok(result_json(
                "divide template",
                json!({
                    "annulus": annulus_json(&a),
                    "side": match side { Side::Bottom => "bottom", Side::Top => "top" },
                    "span": span,
                    "size": size,
                }),
                result,
            ))
        }
        Command::Divide(DivideCommand::Euler { components, signs }) => {
            let mut parsed = Vec::new();
            for part in components.split(',').filter(|p| !p.trim().is_empty()) {
                let (slope, mult) = part
                    .rsplit_once(':')
                    .ok_or_else(|| AppError::Domain(format!("component '{part}' must be slope:multiplicity")))?;
                let slope = Slope::parse(slope)?;
                let mult: u64 = mult
                    .trim()
                    .parse()
                    .map_err(|_| AppError::Domain(format!("invalid multiplicity in '{part}'")))?;
                parsed.push((slope, mult));
            }
            let signs: Vec<Sign> = signs
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(Sign::parse)
                .collect::<Result<_, _>>()?;
            let m = TorusMulticurve::with_signs(parsed, signs);
            let e = euler_signature(&m)?;
            Ok(result_json("divide euler", multicurve_json(&m), json!(e)))
        }
        Command::Traverse(args) => {
            let r = parse_rational(&args.r)?;
            let m = SeifertDescriptor::new(args.e0, r)?;
            let eta = eta_invariants(&m, parse_int_list(&args.eta)?)?;
            let init = initial_state(&m, args.l, eta)?;
            let verdict = traverse(&m, &init, args.max_denominator)?;
            let input = json!({
                "e0": args.e0,
                "r": format_rational(r),
                "l": args.l,
                "eta": init.eta.values(),
                "max_denominator": args.max_denominator,
            });
            match verdict {
                Verdict::Tight(states) => Ok(result_json(
                    "traverse",
                    input,
                    json!({ "verdict": "tight", "states": states.len() }),
                )),
                Verdict::Overtwisted(path) => Ok(json!({
                    "command": "traverse",
                    "input": input,
                    "result": { "verdict": "overtwisted" },
                    "witnesses": path.iter().map(state_json).collect::<Vec<_>>(),
                })),
            }
        }
        Command::Isotopic(args) => {
            let r = parse_rational(&args.r)?;
            let m = SeifertDescriptor::new(args.e0, r)?;
            let a = (args.l, eta_invariants(&m, parse_int_list(&args.eta)?)?);
            let b = (args.l2, eta_invariants(&m, parse_int_list(&args.eta2)?)?);
            let input = json!({
                "e0": args.e0,
                "r": format_rational(r),
                "first": { "l": a.0, "eta": a.1.values() },
                "second": { "l": b.0, "eta": b.1.values() },
                "max_denominator": args.max_denominator,
            });
            let same = isotopic(&m, a, b, args.max_denominator)?;
            Ok(result_json("isotopic", input, json!(same)))
        }
    }
}

/// Flatten a JSON value into `path = value` lines.
fn render_table(value: &Value, prefix: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_table(v, &path, out);
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str(&format!("{prefix} = []\n"));
            }
            for (i, v) in items.iter().enumerate() {
                render_table(v, &format!("{prefix}[{i}]"), out);
            }
        }
        other => {
            out.push_str(&format!("{prefix} = {other}\n"));
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit 1 like other bad input; 2 is reserved for
    // cross-formula disagreement.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(value) => {
            if cli.table {
                let mut out = String::new();
                render_table(&value, "", &mut out);
                print!("{out}");
            } else {
                println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
            }
            ExitCode::SUCCESS
        }
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Inconsistent(msg)) => {
            eprintln!("inconsistency: {msg}");
            ExitCode::from(2)
        }
    }
}
