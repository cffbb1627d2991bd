//! Command-line front end.
//!
//! [`run`] never touches the process: it returns the exit code and the text
//! for stdout and stderr, so tests can drive it directly. Exit codes are `0`
//! on success, `1` on a domain error (the document carries the error name)
//! and `2` on a usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::chern::{euler_char, twist, validate_integrality, ContractedClass, LATTICE_DENOMINATORS};
use crate::error::Error;
use crate::geometry::FibredGeometry;
use crate::io::{self, charge_json, class_json, q_json, slope_json};
use crate::pbundle::{self, ConjectureCoefficients};
use crate::slopes::{self, SlopeFunction};
use crate::tilt::{self, MembershipReport, TiltParams};
use crate::walls::{self, SearchDirection, WallSolution};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// A command result: canonical JSON, or plain text for plot data.
enum Doc {
    Json(Value),
    Text(String),
}

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    io::parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "fibtilt", version, about = "Exact tilt-stability arithmetic on fibred threefolds")]
struct Cli {
    /// Emit JSON (the only output format; accepted for explicitness).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Describe a geometry: intersection numbers, canonical class, χ(O_X).
    Geometry(GeomOnly),
    /// Twisted Chern character ch^β of a class.
    Twist(ClassBeta),
    Slope(ChargeArgs),
    Charge(ChargeArgs),
    /// Generalized discriminants Δ̄, Δ̃ and Δ̃_t.
    Disc(DiscArgs),
    /// Numerical necessary conditions for membership in the tilted heart.
    Membership(ClassBeta),
    /// Euler characteristic by Riemann–Roch.
    Chi(ClassOnly),
    /// Harder–Narasimhan filtration over a subobject lattice.
    Hn(HnArgs),
    #[command(subcommand)]
    Wall(WallCommand),
    #[command(subcommand)]
    Pbundle(PbCommand),
    /// Integrality of a class in the numerical lattice.
    Validate(ValidateArgs),
    /// Aliases grouped under the tilt module.
    #[command(subcommand)]
    Tilt(TiltCommand),
}

#[derive(Debug, Subcommand)]
enum TiltCommand {
    Charge(ChargeArgs),
    Slope(ChargeArgs),
    Disc(DiscArgs),
    Membership(ClassBeta),
}

#[derive(Debug, Subcommand)]
enum WallCommand {
    /// The α² at which two classes have equal mixed slope.
    Solve(WallSolveArgs),
    /// The nearest wall to a starting α² among candidate subobjects.
    First(WallFirstArgs),
    /// Enumerate candidate destabilizing classes in a box.
    Enum(WallEnumArgs),
    /// Trace a wall over a range of β.
    Scan(WallScanArgs),
}

#[derive(Debug, Subcommand)]
enum PbCommand {
    Coeffs(PbCoeffsArgs),
    Region(PbRegionArgs),
    Margin(PbMarginArgs),
    Zl(PbZlArgs),
}

#[derive(Debug, Args)]
struct GeomOnly {
    #[arg(long)]
    geometry: PathBuf,
}

#[derive(Debug, Args)]
struct ClassOnly {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    class: PathBuf,
}

#[derive(Debug, Args)]
struct ClassBeta {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// μ_{H,F}: the charge on the base.
    #[value(alias = "base")]
    MuHf,
    BaseTorsion,
    /// μ_C with the C-torsion case split.
    MuC,
    Relative,
    RelativeTorsion,
    Mixed,
    /// ν^{α,β}_C with the C-torsion case split.
    NuC,
}

#[derive(Debug, Args)]
struct ChargeArgs {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long, value_enum, default_value = "mixed")]
    kind: Kind,
    #[arg(long = "alpha-sq", value_parser = rational_arg, allow_hyphen_values = true)]
    alpha_sq: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    t: Option<Rational>,
    /// Declare whether the class is C-torsion (mu-c and nu-c only).
    #[arg(long = "torsion-hint")]
    torsion_hint: Option<bool>,
}

#[derive(Debug, Args)]
struct DiscArgs {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    t: Rational,
}

#[derive(Debug, Args)]
struct HnArgs {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    lattice: PathBuf,
    #[arg(long, value_enum, default_value = "mixed")]
    kind: Kind,
    #[arg(long = "alpha-sq", value_parser = rational_arg, allow_hyphen_values = true)]
    alpha_sq: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    t: Option<Rational>,
    #[arg(long = "torsion-hint")]
    torsion_hint: Option<bool>,
}

#[derive(Debug, Args)]
struct WallSolveArgs {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long)]
    other: PathBuf,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    t: Rational,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Direction {
    Below,
    Above,
}

#[derive(Debug, Args)]
struct WallFirstArgs {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long)]
    candidates: PathBuf,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    t: Rational,
    /// Starting α².
    #[arg(long = "alpha-sq", value_parser = rational_arg, allow_hyphen_values = true)]
    alpha_sq: Rational,
    #[arg(long, value_enum, default_value = "below")]
    direction: Direction,
}

#[derive(Debug, Args)]
struct WallEnumArgs {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long)]
    bounds: PathBuf,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    t: Rational,
}

#[derive(Debug, Args)]
struct WallScanArgs {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long)]
    other: PathBuf,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    t: Rational,
    /// `lo:hi:steps`
    #[arg(long = "beta-range", allow_hyphen_values = true)]
    beta_range: String,
    /// Emit plot data (β, α) as approximate decimals instead of JSON.
    #[arg(long)]
    plot: bool,
    /// Decimal places in plot output.
    #[arg(long, default_value_t = 6)]
    precision: usize,
}

#[derive(Debug, Args)]
struct PbCoeffsArgs {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Rational,
}

#[derive(Debug, Args)]
struct PbRegionArgs {
    /// Defaults to P^2 x P^1 (genus 0, degree 0).
    #[arg(long)]
    geometry: Option<PathBuf>,
    #[arg(long = "alpha-sq", value_parser = rational_arg, allow_hyphen_values = true)]
    alpha_sq: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    t: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    t0: Option<Rational>,
}

#[derive(Debug, Args)]
struct CoeffSource {
    #[arg(long = "conjecture-coeffs", conflicts_with = "from_main2")]
    conjecture_coeffs: Option<PathBuf>,
    /// Use the constants derived on P(E) at the given β.
    #[arg(long = "from-main2")]
    from_main2: bool,
}

#[derive(Debug, Args)]
struct PbMarginArgs {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long = "alpha-sq", value_parser = rational_arg, allow_hyphen_values = true)]
    alpha_sq: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    t: Rational,
    #[command(flatten)]
    source: CoeffSource,
}

#[derive(Debug, Args)]
struct PbZlArgs {
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long)]
    class: PathBuf,
    #[arg(long = "alpha-sq", value_parser = rational_arg, allow_hyphen_values = true)]
    alpha_sq: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    beta: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    t: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    l: Rational,
    #[command(flatten)]
    source: CoeffSource,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Needed only for Chow-class input.
    #[arg(long)]
    geometry: Option<PathBuf>,
    #[arg(long)]
    class: PathBuf,
}

/// Parse `argv` (including the program name) and execute.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(cli.command) {
        Ok(doc) => Outcome {
            code: 0,
            stdout: match doc {
                Doc::Json(v) => format!("{v}\n"),
                Doc::Text(t) => t,
            },
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Domain(e)) => {
            let doc = json!({ "error": { "name": e.name(), "message": e.to_string() } });
            Outcome {
                code: 1,
                stdout: format!("{doc}\n"),
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).or_else(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_geometry(path: &Path) -> Res<FibredGeometry<Rational>> {
    Ok(io::parse_geometry(&read(path)?)?)
}

fn load_class(path: &Path, geom: &FibredGeometry<Rational>) -> Res<ContractedClass<Rational>> {
    Ok(io::parse_class(&read(path)?, geom)?)
}

fn need(v: &Option<Rational>, flag: &str, kind: Kind) -> Res<Rational> {
    match v {
        Some(q) => Ok(q.clone()),
        None => usage(format!("--{flag} is required for --kind {}", kind_name(kind))),
    }
}

fn kind_name(k: Kind) -> String {
    k.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

/// Flags a kind consumes, checked before any work is done.
fn slope_function(
    kind: Kind,
    alpha_sq: &Option<Rational>,
    beta: &Option<Rational>,
    t: &Option<Rational>,
    hint: Option<bool>,
) -> Res<SlopeFunction<Rational>> {
    Ok(match kind {
        Kind::MuHf => SlopeFunction::MuHf,
        Kind::MuC => SlopeFunction::MuC { hint },
        Kind::Relative => SlopeFunction::NuRelative {
            alpha_sq: need(alpha_sq, "alpha-sq", kind)?,
            beta: need(beta, "beta", kind)?,
        },
        Kind::Mixed => SlopeFunction::NuMixed(TiltParams::new(
            need(alpha_sq, "alpha-sq", kind)?,
            need(beta, "beta", kind)?,
            need(t, "t", kind)?,
        )?),
        Kind::BaseTorsion | Kind::RelativeTorsion | Kind::NuC => {
            return usage(format!("--kind {} has no lattice slope function", kind_name(kind)))
        }
    })
}

fn charge_or_slope(a: ChargeArgs, want_slope: bool) -> Res<Value> {
    let kind = a.kind;
    let (needs_ab, needs_t) = match kind {
        Kind::MuHf | Kind::BaseTorsion | Kind::MuC => (false, false),
        Kind::Relative | Kind::RelativeTorsion | Kind::NuC => (true, false),
        Kind::Mixed => (true, true),
    };
    let alpha_sq = if needs_ab { Some(need(&a.alpha_sq, "alpha-sq", kind)?) } else { None };
    let beta = if needs_ab { Some(need(&a.beta, "beta", kind)?) } else { None };
    let t = if needs_t { Some(need(&a.t, "t", kind)?) } else { None };
    if a.torsion_hint.is_some() && !matches!(kind, Kind::MuC | Kind::NuC) {
        return usage("--torsion-hint applies only to --kind mu-c and nu-c");
    }
    let geom = load_geometry(&a.geometry)?;
    let v = load_class(&a.class, &geom)?;
    let (ab, b) = (alpha_sq.as_ref(), beta.as_ref());
    let charge = match kind {
        Kind::MuHf => slopes::z_base(&v, &geom),
        Kind::BaseTorsion => slopes::z_base_torsion(&v),
        Kind::MuC => slopes::z_c(&v, &geom, a.torsion_hint)?,
        Kind::Relative => tilt::z_relative(&v, ab.unwrap(), b.unwrap(), &geom),
        Kind::RelativeTorsion => tilt::z_relative_torsion(&v, ab.unwrap(), b.unwrap(), &geom),
        Kind::NuC => tilt::z_c_alpha_beta(&v, ab.unwrap(), b.unwrap(), &geom, a.torsion_hint)?,
        Kind::Mixed => {
            let p = TiltParams::new(alpha_sq.clone().unwrap(), beta.clone().unwrap(), t.unwrap())?;
            tilt::z_mixed(&v, &p, &geom)
        }
    };
    if !want_slope {
        return Ok(json!({ "charge": charge_json(&charge) }));
    }
    let slope = match kind {
        Kind::MuC => slopes::mu_c(&v, &geom, a.torsion_hint)?,
        Kind::NuC => tilt::nu_c_alpha_beta(&v, ab.unwrap(), b.unwrap(), &geom, a.torsion_hint)?,
        _ => charge.slope(),
    };
    Ok(json!({ "slope": slope_json(&slope) }))
}

fn disc(a: DiscArgs) -> Res<Value> {
    let geom = load_geometry(&a.geometry)?;
    let v = load_class(&a.class, &geom)?;
    Ok(json!({
        "delta_bar": q_json(&tilt::delta_bar(&v, &a.beta, &geom)),
        "delta_tilde": q_json(&tilt::delta_tilde(&v, &a.beta, &geom)),
        "delta_tilde_t": q_json(&tilt::delta_tilde_t(&v, &a.beta, &a.t, &geom)),
    }))
}

fn membership(a: ClassBeta) -> Res<Value> {
    let geom = load_geometry(&a.geometry)?;
    let v = load_class(&a.class, &geom)?;
    let doc = match tilt::heart_membership_necessary(&v, &a.beta, &geom) {
        MembershipReport::ViolatesHeartConditions(c) => json!({ "status": "violates", "clause": c.name() }),
        MembershipReport::Consistent => json!({ "status": "consistent" }),
        MembershipReport::ConsistentDegenerate(f) => json!({
            "status": "consistent_degenerate",
            "flags": {
                "rank_zero": f.rank_zero,
                "h_ch2b_zero": f.h_ch2b_zero,
                "f_ch2b_zero": f.f_ch2b_zero,
                "ch3b_zero": f.ch3b_zero,
            },
        }),
    };
    Ok(json!({ "membership": doc }))
}

fn wall_json(sol: &WallSolution<Rational>) -> Value {
    match sol {
        WallSolution::AllAlpha => json!("all_alpha"),
        WallSolution::NoWall => json!("no_wall"),
        WallSolution::AtAlphaSq(a) => json!({ "at_alpha_sq": q_json(a) }),
    }
}

fn parse_range(s: &str) -> Res<(Rational, Rational, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, steps] = parts.as_slice() else {
        return usage(format!("--beta-range expects lo:hi:steps, got {s:?}"));
    };
    let q = |x: &str| io::parse_rational(x).or_else(|e| usage(e.to_string()));
    let steps: usize = match steps.parse() {
        Ok(n) if n > 0 => n,
        _ => return usage(format!("steps must be a positive integer, got {steps:?}")),
    };
    Ok((q(lo)?, q(hi)?, steps))
}

fn wall(cmd: WallCommand) -> Res<Doc> {
    match cmd {
        WallCommand::Solve(a) => {
            let geom = load_geometry(&a.geometry)?;
            let v = load_class(&a.class, &geom)?;
            let w = load_class(&a.other, &geom)?;
            Ok(Doc::Json(json!({ "wall": wall_json(&walls::wall_alpha_sq(&v, &w, &a.beta, &a.t, &geom)) })))
        }
        WallCommand::First(a) => {
            let geom = load_geometry(&a.geometry)?;
            let v = load_class(&a.class, &geom)?;
            let cands = io::parse_classes(&read(&a.candidates)?, &geom)?;
            let dir = match a.direction {
                Direction::Below => SearchDirection::Below,
                Direction::Above => SearchDirection::Above,
            };
            let found = walls::first_wall(&v, &cands, &a.beta, &a.t, &a.alpha_sq, dir, &geom);
            Ok(Doc::Json(json!({
                "first_wall": found.map(|f| json!({
                    "alpha_sq": q_json(&f.alpha_sq),
                    "witnesses": f.witnesses.iter().map(class_json).collect::<Vec<_>>(),
                })),
            })))
        }
        WallCommand::Enum(a) => {
            let geom = load_geometry(&a.geometry)?;
            let v = load_class(&a.class, &geom)?;
            let bounds = io::parse_bounds(&read(&a.bounds)?)?;
            let found = walls::enumerate_destabilizer_classes(&v, &a.beta, &a.t, &geom, &bounds)?;
            Ok(Doc::Json(json!({
                "count": found.len(),
                "classes": found.iter().map(class_json).collect::<Vec<_>>(),
            })))
        }
        WallCommand::Scan(a) => {
            let (lo, hi, steps) = parse_range(&a.beta_range)?;
            let geom = load_geometry(&a.geometry)?;
            let v = load_class(&a.class, &geom)?;
            let w = load_class(&a.other, &geom)?;
            let curve = walls::wall_curve_sample(&v, &w, &a.t, &lo, &hi, steps, &geom)?;
            if a.plot {
                return Ok(Doc::Text(plot_text(&curve.points, a.precision)));
            }
            Ok(Doc::Json(json!({
                "points": curve.points.iter().map(|(b, s)| json!([q_json(b), q_json(s)])).collect::<Vec<_>>(),
                "all_alpha": curve.all_alpha.iter().map(q_json).collect::<Vec<_>>(),
            })))
        }
    }
}

/// Two columns `β  α`; `α = sqrt(α²)` is the only inexact value the tool emits.
fn plot_text(points: &[(Rational, Rational)], precision: usize) -> String {
    use num_traits::Signed;

    use crate::Scalar;
    let mut out = format!("# approximate: beta alpha, decimals rounded to {precision} places\n");
    for (b, a2) in points {
        if a2.is_positive() {
            out.push_str(&format!(
                "{:.p$} {:.p$}\n",
                b.to_f64_approx(),
                a2.to_f64_approx().sqrt(),
                p = precision
            ));
        }
    }
    out
}

fn coefficients(
    source: &CoeffSource,
    beta: &Rational,
    geom: &FibredGeometry<Rational>,
) -> Res<Option<ConjectureCoefficients<Rational>>> {
    match (&source.conjecture_coeffs, source.from_main2) {
        (Some(path), false) => Ok(Some(io::parse_conjecture_coefficients(&read(path)?)?)),
        (None, true) => {
            let bmt = pbundle::bmt_coefficients(beta, geom)?;
            Ok(ConjectureCoefficients::from_main2(&bmt).ok())
        }
        _ => usage("exactly one of --conjecture-coeffs FILE or --from-main2 is required"),
    }
}

fn pb(cmd: PbCommand) -> Res<Value> {
    match cmd {
        PbCommand::Coeffs(a) => {
            let geom = load_geometry(&a.geometry)?;
            let c = pbundle::bmt_coefficients(&a.beta, &geom)?;
            Ok(json!({
                "beta": q_json(&c.beta),
                "a0": q_json(&c.a0),
                "a1": q_json(&c.a1),
                "a2": q_json(&c.a2),
                "h2_coefficient": q_json(&pbundle::main2_h2_coefficient(&a.beta)),
                "window": pbundle::corollary_window_check(&a.beta),
            }))
        }
        PbCommand::Region(a) => {
            let geom = match &a.geometry {
                Some(p) => load_geometry(p)?,
                None => FibredGeometry::projective_bundle(0, 0)?,
            };
            let r = pbundle::region_check(&a.alpha_sq, &a.beta, &a.t, a.t0.as_ref(), &geom);
            Ok(json!({
                "holds": r.holds,
                "condition1": r.condition1,
                "condition2": r.condition2,
                "t_nonnegative": r.t_nonnegative,
                "threshold": r.threshold.as_ref().map(q_json),
                "t0": q_json(&r.t0),
                "diagnostics": r.diagnostics,
            }))
        }
        PbCommand::Margin(a) => {
            if a.source.conjecture_coeffs.is_none() && !a.source.from_main2 {
                return usage("exactly one of --conjecture-coeffs FILE or --from-main2 is required");
            }
            let geom = load_geometry(&a.geometry)?;
            let v = load_class(&a.class, &geom)?;
            let params = TiltParams::new(a.alpha_sq, a.beta.clone(), a.t)?;
            if a.source.from_main2 {
                // The derived bound has no positivity requirement, so it is
                // evaluated directly rather than through the conjecture form.
                let bmt = pbundle::bmt_coefficients(&a.beta, &geom)?;
                let margin = pbundle::main2_margin(&v, &bmt, &geom);
                return Ok(json!({
                    "margin": q_json(&margin),
                    "holds": !num_traits::Signed::is_negative(&margin),
                    "window": pbundle::corollary_window_check(&a.beta),
                }));
            }
            let coeffs = coefficients(&a.source, &a.beta, &geom)?.expect("file coefficients");
            let margin = pbundle::conjecture_margin(&v, &params, &coeffs, &geom)?;
            Ok(json!({
                "margin": q_json(&margin),
                "holds": !num_traits::Signed::is_negative(&margin),
                "coefficients": io::conjecture_json(&coeffs),
            }))
        }
        PbCommand::Zl(a) => {
            if a.source.conjecture_coeffs.is_none() && !a.source.from_main2 {
                return usage("exactly one of --conjecture-coeffs FILE or --from-main2 is required");
            }
            let geom = load_geometry(&a.geometry)?;
            let v = load_class(&a.class, &geom)?;
            let params = TiltParams::new(a.alpha_sq, a.beta.clone(), a.t)?;
            let coeffs = match coefficients(&a.source, &a.beta, &geom)? {
                Some(c) => c,
                None => {
                    let bmt = pbundle::bmt_coefficients(&a.beta, &geom)?;
                    return Err(ConjectureCoefficients::from_main2(&bmt).unwrap_err().into());
                }
            };
            let z = pbundle::z_l(&v, &params, &a.l, &coeffs, &geom);
            Ok(json!({
                "zl": charge_json(&z.value),
                "l_above_bound": z.l_above_bound,
                "coefficients": io::conjecture_json(&coeffs),
            }))
        }
    }
}

fn dispatch(cmd: Command) -> Res<Doc> {
    if let Command::Wall(w) = cmd {
        return wall(w);
    }
    dispatch_json(cmd).map(Doc::Json)
}

fn dispatch_json(cmd: Command) -> Res<Value> {
    match cmd {
        Command::Geometry(a) => {
            let geom = load_geometry(&a.geometry)?;
            let canonical = pbundle::canonical_class(&geom).ok();
            let chi_o = pbundle::chern_contractions(&geom).ok().map(|c| q_json(&c.chi_o));
            Ok(json!({
                "geometry": io::geometry_json(&geom),
                "h3": q_json(geom.h3()),
                "h2f": q_json(geom.h2f()),
                "canonical_class": canonical.map(|k| json!([q_json(&k.x), q_json(&k.y)])),
                "chi_o": chi_o,
                "warnings": geom.warnings(),
            }))
        }
        Command::Twist(a) => {
            let geom = load_geometry(&a.geometry)?;
            let v = load_class(&a.class, &geom)?;
            let tw = twist(&v, &a.beta, &geom);
            Ok(json!({ "beta": q_json(&a.beta), "twisted": class_json(&tw.as_class()) }))
        }
        Command::Slope(a) | Command::Tilt(TiltCommand::Slope(a)) => charge_or_slope(a, true),
        Command::Charge(a) | Command::Tilt(TiltCommand::Charge(a)) => charge_or_slope(a, false),
        Command::Disc(a) | Command::Tilt(TiltCommand::Disc(a)) => disc(a),
        Command::Membership(a) | Command::Tilt(TiltCommand::Membership(a)) => membership(a),
        Command::Chi(a) => {
            let geom = load_geometry(&a.geometry)?;
            let v = load_class(&a.class, &geom)?;
            Ok(json!({ "chi": q_json(&euler_char(&v, &geom)?) }))
        }
        Command::Hn(a) => {
            let f = slope_function(a.kind, &a.alpha_sq, &a.beta, &a.t, a.torsion_hint)?;
            let geom = load_geometry(&a.geometry)?;
            let lat = io::parse_lattice(&read(&a.lattice)?, &geom)?;
            let hn = slopes::hn_filtration(&lat, &f, &geom)?;
            Ok(json!({
                "factors": hn.factors.iter().map(|x| json!({
                    "node": x.node,
                    "class": class_json(&x.class),
                    "slope": slope_json(&x.slope),
                })).collect::<Vec<_>>(),
                "mu_plus": slope_json(hn.mu_plus()),
                "mu_minus": slope_json(hn.mu_minus()),
            }))
        }
        Command::Wall(_) => unreachable!("handled by dispatch"),
        Command::Pbundle(p) => pb(p),
        Command::Validate(a) => {
            let geom = match &a.geometry {
                Some(p) => load_geometry(p)?,
                None => FibredGeometry::projective_bundle(0, 0)?,
            };
            let v = load_class(&a.class, &geom)?;
            Ok(json!({
                "integral": validate_integrality(&v),
                "denominators": LATTICE_DENOMINATORS,
                "class": class_json(&v),
            }))
        }
    }
}
