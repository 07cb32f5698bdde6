use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shadowlab::circle::{torus_degree, PlCircleMap, TorusCurve};
use shadowlab::complex::{shadow_classes, shadow_complex, ShadowError, TopologyTag};
use shadowlab::harness::{run_path_bound_harness, trial_seed, HarnessConfig, PATH_BOUND};
use shadowlab::io::{certificate_to_json, curve_to_json, parse_curve, CertificateJson, TorusCurveJson};
use shadowlab::relations::{
    compose_relation_curves, find_triple_fixed_point, fixed_point_of_triple, split_top_bottom, Composition,
    FixedPointCertificate, RelationError,
};
use shadowlab::scalar::Scalar;
use shadowlab::svg::render_complex;
use shadowlab::{Axis, Curve, GeneratorKind, GeneratorSpec, Rational};

#[derive(Parser, Debug)]
#[command(name = "shadowlab", version, about = "Coordinate shadows of closed polygonal curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(clap::Args, Debug)]
struct Options {
    /// Curve JSON to read.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Shadow axis, 1-based.
    #[arg(long, global = true)]
    axis: Option<usize>,
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Positive rational `p/q`.
    #[arg(long, global = true, default_value = "1/1000", value_parser = parse_epsilon)]
    epsilon: Rational,
    #[arg(long, global = true)]
    dimension: Option<usize>,
    /// Vertex count for generated curves, breakpoint count for demo maps.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    /// Curve family for `gen`.
    #[arg(long, global = true, value_enum, default_value_t = Kind::RandomKnot)]
    kind: Kind,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify every coordinate shadow of a curve.
    Analyze,
    /// Count simple-path shadows over many random simple curves.
    VerifyTheorem,
    /// Compose relations of degrees (1,3) and (5,2).
    ComposeDemo,
    /// Find a fixed point of three composed relations.
    FixedpointDemo,
    /// Generate a curve.
    Gen,
    /// Draw one shadow as SVG.
    Plot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    PlanarCircle,
    TreeShadow,
    RandomKnot,
}

fn parse_epsilon(text: &str) -> Result<Rational, String> {
    match Rational::parse_literal(text) {
        Some(e) if e > Rational::from_i64(0) => Ok(e),
        Some(_) => Err("epsilon must be positive".into()),
        None => Err(format!("`{text}` is not a rational p/q")),
    }
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<RelationError> for Failure {
    fn from(e: RelationError) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<ShadowError> for Failure {
    fn from(e: ShadowError) -> Self {
        match e {
            ShadowError::PathBoundViolation { .. } => Failure::Internal(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Analyze => analyze(&cli.opts),
        Command::VerifyTheorem => verify_theorem(&cli.opts),
        Command::ComposeDemo => compose_demo(&cli.opts),
        Command::FixedpointDemo => fixedpoint_demo(&cli.opts),
        Command::Gen => generate(&cli.opts),
        Command::Plot => plot(&cli.opts),
    };
    let (text, code) = match result {
        Ok(text) => (text, 0),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Internal(msg)) => (format!("internal invariant violated: {msg}\n"), 2),
    };
    if code != 0 {
        eprint!("{text}");
        return ExitCode::from(code);
    }
    if let Err(msg) = emit(&cli.opts, &text) {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

fn emit(opts: &Options, text: &str) -> Result<(), String> {
    match &opts.output {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn read_curve(opts: &Options) -> Result<Curve, Failure> {
    let path = opts.input.as_ref().ok_or_else(|| Failure::Input("--input is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_curve(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn analyze(opts: &Options) -> Outcome {
    let curve = read_curve(opts)?;
    let classes = shadow_classes(&curve)?;
    let mut rows = Vec::new();
    let mut table = String::from("axis  class              split points\n");
    for (i, class) in classes.iter().enumerate() {
        let axis = Axis::new(i);
        let mut split = Value::Null;
        let mut detail = String::new();
        if class.tag() == TopologyTag::SimplePath {
            let s = split_top_bottom(&curve, axis)?;
            let (pa, pb) = (curve.point_at(&s.a), curve.point_at(&s.a_tilde));
            detail = format!("a = {pa} (u = {}), a~ = {pb} (u = {})", s.a, s.a_tilde);
            split = json!({
                "a": s.a.to_literal(),
                "a_tilde": s.a_tilde.to_literal(),
                "a_point": pa.coords().iter().map(Scalar::to_literal).collect::<Vec<_>>(),
                "a_tilde_point": pb.coords().iter().map(Scalar::to_literal).collect::<Vec<_>>(),
            });
        }
        table.push_str(format!("{:<5} {:<18} {detail}", axis.to_string(), class.tag().to_string()).trim_end());
        table.push('\n');
        rows.push(json!({ "axis": i + 1, "class": class, "split": split }));
    }
    let count = |t: TopologyTag| classes.iter().filter(|c| c.tag() == t).count();
    let paths = count(TopologyTag::SimplePath);
    if opts.json {
        let counts: serde_json::Map<String, Value> =
            TopologyTag::ALL.iter().map(|t| (t.to_string(), json!(count(*t)))).collect();
        return Ok(pretty(&json!({
            "dimension": curve.dimension(),
            "vertices": curve.len(),
            "shadows": rows,
            "counts": counts,
            "simple_paths": paths,
            "bound": PATH_BOUND,
        })));
    }
    let mut summary: Vec<String> = TopologyTag::ALL
        .iter()
        .filter(|t| **t != TopologyTag::SimplePath && count(**t) > 0)
        .map(|t| format!("{t}: {}", count(*t)))
        .collect();
    summary.push(format!("SimplePath: {paths} (at most {PATH_BOUND})"));
    Ok(format!("{table}{}\n", summary.join(", ")))
}

fn verify_theorem(opts: &Options) -> Outcome {
    let config = HarnessConfig {
        trials: opts.trials as usize,
        dimension: opts.dimension.unwrap_or(3),
        vertices: opts.resolution.unwrap_or(12),
        seed: opts.seed,
        threads: None,
    };
    if config.dimension < 3 || config.vertices < 4 {
        return Err(Failure::Input("verify-theorem needs --dimension >= 3 and --resolution >= 4".into()));
    }
    let report = run_path_bound_harness(&config);
    if !report.holds() {
        let v = &report.violations[0];
        return Err(Failure::Internal(format!(
            "trial {} (seed {}) has shadows {:?}, more than {PATH_BOUND} simple paths",
            v.trial, v.seed, v.tags
        )));
    }
    if opts.json {
        return Ok(pretty(&serde_json::to_value(&report).expect("report serializes")));
    }
    let mut out = format!(
        "trials: {}, dimension: {}, vertices: {}, seed: {}\n",
        report.trials, report.dimension, report.vertices, report.seed
    );
    out.push_str("SimplePath shadows  curves\n");
    for k in 0..=config.dimension {
        out.push_str(&format!("{k:<19} {}\n", report.histogram.get(&k).copied().unwrap_or(0)));
    }
    for (trial, reason) in &report.failed {
        out.push_str(&format!("trial {trial} skipped: {reason}\n"));
    }
    let max = report.max_paths().map_or("-".to_string(), |m| m.to_string());
    out.push_str(&format!("max SimplePath: {max} (at most {PATH_BOUND})\n"));
    Ok(out)
}

/// Degree-`degree` circle map on `res` breakpoints whose lift alternately
/// lags behind the linear one by a seeded amount below `1/(2 res)`.
fn wobbly_map(degree: i64, res: usize, seed: u64, stream: usize) -> PlCircleMap<Rational> {
    let res = res.max(1);
    let breakpoints: Vec<Rational> = (0..res).map(|j| Rational::ratio(j as i64, res as i64)).collect();
    let lift = breakpoints
        .iter()
        .enumerate()
        .map(|(j, t)| {
            let bump = if seed == 0 || j % 2 == 0 {
                Rational::from_i64(0)
            } else {
                Rational::ratio((trial_seed(seed, stream * 1000 + j) % 1000) as i64, 2000 * res as i64)
            };
            Rational::from_i64(degree) * t.clone() - bump
        })
        .collect();
    PlCircleMap::new(breakpoints, lift, degree).expect("valid breakpoints")
}

fn composition_report(name: &str, c: &Composition<Rational>, inputs: [(i64, i64); 2]) -> (String, Value, bool) {
    let ((a, b1), (b2, cc)) = (inputs[0], inputs[1]);
    let measured = torus_degree(&c.curve);
    let formula = (c.k * a / b1, c.k * cc / b2);
    let ok = measured == formula && c.k % 2 == 1 && c.k % b1 == 0 && c.k % b2 == 0;
    let text = format!(
        "{name}: inputs ({a},{b1}) and ({b2},{cc}), k = {}, output degree ({}, {}), formula (k*{a}/{b1}, k*{cc}/{b2}) = ({}, {}) {}\n",
        c.k,
        measured.0,
        measured.1,
        formula.0,
        formula.1,
        if ok { "ok" } else { "MISMATCH" }
    );
    let value = json!({
        "name": name,
        "inputs": [[a, b1], [b2, cc]],
        "k": c.k,
        "degree": [measured.0, measured.1],
        "formula": [formula.0, formula.1],
        "regular_value": c.regular_value.to_literal(),
        "fiber_counts": [c.fiber_counts.0, c.fiber_counts.1],
        "cycle_fiber_count": c.cycle_fiber_count,
        "curve": TorusCurveJson::from_curve(&c.curve),
    });
    (text, value, ok)
}

fn compose_demo(opts: &Options) -> Outcome {
    let res = opts.resolution.unwrap_or(8);
    if res == 0 {
        return Err(Failure::Input("--resolution must be positive".into()));
    }
    let p1 = TorusCurve::new(wobbly_map(1, res, opts.seed, 0), wobbly_map(3, res, opts.seed, 1));
    let p2 = TorusCurve::new(wobbly_map(5, res, opts.seed, 2), wobbly_map(2, res, opts.seed, 3));
    let direct = compose_relation_curves(&p1, &p2)?;
    let swapped = compose_relation_curves(&p2.swap(), &p1.swap())?;
    let (t1, v1, ok1) = composition_report("direct", &direct, [(1, 3), (5, 2)]);
    let (t2, v2, ok2) = composition_report("swapped", &swapped, [(2, 5), (3, 1)]);
    if !(ok1 && ok2) {
        return Err(Failure::Internal(format!("composed degree disagrees with the formula\n{t1}{t2}")));
    }
    if opts.json {
        return Ok(pretty(&json!({ "resolution": res, "seed": opts.seed, "runs": [v1, v2] })));
    }
    Ok(format!("resolution: {res}, seed: {}\n{t1}{t2}", opts.seed))
}

fn reversal(offset: Rational, res: usize) -> TorusCurve<Rational> {
    TorusCurve::new(PlCircleMap::linear(1, Rational::from_i64(0), res), PlCircleMap::linear(-1, offset, res))
}

fn certificate_text(cert: &FixedPointCertificate<Rational>) -> String {
    let c = &cert.chain;
    let mut out = format!(
        "inner degree ({}, {}), outer degree ({}, {}) with k = {}\n",
        c.inner_degree.0, c.inner_degree.1, c.degree.0, c.degree.1, c.k
    );
    out.push_str(&format!("diagonal parameter: {}\n", c.diagonal_parameter));
    out.push_str(&format!("circle points: {}, {}, {}\n", c.circle_points[0], c.circle_points[1], c.circle_points[2]));
    out.push_str(&format!("link gaps: {}, {}, {}\n", c.link_gaps[0], c.link_gaps[1], c.link_gaps[2]));
    for r in &cert.residuals {
        let diff: Vec<String> = r.difference.iter().map(|d| d.to_string()).collect();
        out.push_str(&format!("residual along axis {}: ({}), off-axis {}\n", r.axis, diff.join(", "), r.off_axis));
    }
    out
}

fn fixedpoint_demo(opts: &Options) -> Outcome {
    if opts.input.is_some() {
        let curve = read_curve(opts)?;
        let cert = find_triple_fixed_point(&curve, &opts.epsilon)?;
        if opts.json {
            return Ok(certificate_to_json(&cert) + "\n");
        }
        return Ok(format!("epsilon: {}\n{}", opts.epsilon, certificate_text(&cert)));
    }
    let res = opts.resolution.unwrap_or(4).max(1);
    let offsets: Vec<Rational> =
        (0..3).map(|i| Rational::ratio((trial_seed(opts.seed, i) % 997) as i64 + 1, 999)).collect();
    let psi = [0, 1, 2].map(|i| reversal(offsets[i].clone(), res + i));
    let cert = fixed_point_of_triple(&psi)?;
    if cert.chain.degree.0 != -cert.chain.degree.1 || cert.chain.k % 2 == 0 {
        return Err(Failure::Internal(format!("composite degree {:?} is not (k, -k) with k odd", cert.chain.degree)));
    }
    if opts.json {
        return Ok(pretty(&json!({
            "relations": psi.iter().map(TorusCurveJson::from_curve).collect::<Vec<_>>(),
            "certificate": CertificateJson::from_certificate(&cert),
        })));
    }
    let shifts: Vec<String> = offsets.iter().map(|o| o.to_string()).collect();
    Ok(format!("three relations of degree (1, -1), shifts {}\n{}", shifts.join(", "), certificate_text(&cert)))
}

fn generate(opts: &Options) -> Outcome {
    let (kind, dimension, resolution) = match opts.kind {
        Kind::PlanarCircle => (GeneratorKind::PlanarCircle, opts.dimension.unwrap_or(3), opts.resolution.unwrap_or(6)),
        Kind::TreeShadow => (GeneratorKind::TreeShadow, opts.dimension.unwrap_or(3), 0),
        Kind::RandomKnot => (GeneratorKind::RandomKnot, opts.dimension.unwrap_or(3), opts.resolution.unwrap_or(12)),
    };
    let spec = GeneratorSpec { kind, dimension, resolution, seed: opts.seed };
    let curve: Curve = spec.generate().map_err(|e| Failure::Input(e.to_string()))?;
    Ok(curve_to_json(&curve) + "\n")
}

fn plot(opts: &Options) -> Outcome {
    let curve = read_curve(opts)?;
    if curve.dimension() != 3 {
        return Err(Failure::Input(format!("plot needs a curve in R^3, got dimension {}", curve.dimension())));
    }
    let index = opts.axis.ok_or_else(|| Failure::Input("--axis is required".into()))?;
    let axis = Axis::one_based(index)
        .filter(|a| a.index() < curve.dimension())
        .ok_or_else(|| Failure::Input(format!("axis {index} is out of range 1..={}", curve.dimension())))?;
    let complex = shadow_complex(&curve, axis)?;
    Ok(render_complex(&complex, &format!("shadow along axis {axis}")))
}
