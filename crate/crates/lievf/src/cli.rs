//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
//! 3 numerical failure. Numerical failures still print a report whose
//! result carries the error name.

use clap::{Args, Parser, Subcommand};
use lievf_core::cycles::{
    commuting_perturbation_probe, find_cycles_on, first_return, invariance_defect, polar_reduce,
    CycleError, CycleInfo, CycleScan, RefinementFailure, Section, Transversality,
};
use lievf_core::field::presets::*;
use lievf_core::field::{divergence, lie_bracket, make_homogeneous_center, scale_field};
use lievf_core::flow::{FlowError, IntegratorConfig};
use lievf_core::linops::{
    centralizer_basis, compare_centralizers, derivative_operator_report, dimension_profile,
    first_integrals, CentralizerReport, LinopsError,
};
use lievf_core::symplectic::{integrability_certificate, poisson, remark_defect};
use lievf_core::{Poly2, VectorField2};
use serde_json::{json, Value};

use crate::exprio::{
    field_value, float_value, parse_field, parse_poly, parse_rat, poly_value, rat_value,
    ReportDocument,
};
use crate::parallel::par_find_cycles;
use crate::verify::example_checks;

#[derive(Parser, Debug)]
#[command(
    name = "lievf",
    version,
    about = "Lie brackets, centralizers and limit cycles of planar polynomial fields"
)]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Primary field: `--x P Q` or `--preset NAME`.
#[derive(Args, Debug, Clone)]
pub struct FieldX {
    #[arg(long = "x", num_args = 2, value_names = ["P", "Q"], allow_hyphen_values = true,
          required_unless_present = "preset", conflicts_with = "preset")]
    pub x: Option<Vec<String>>,
    /// example1-x, example1-y, example1-mirrored, vdp, homogeneous-n<k>, dilation, rotation, saddle
    #[arg(long)]
    pub preset: Option<String>,
}

/// Second field: `--y R S` or `--preset-y NAME`.
#[derive(Args, Debug, Clone)]
pub struct FieldY {
    #[arg(long = "y", num_args = 2, value_names = ["R", "S"], allow_hyphen_values = true,
          required_unless_present = "preset_y", conflicts_with = "preset_y")]
    pub y: Option<Vec<String>>,
    #[arg(long)]
    pub preset_y: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Degree {
    /// Degree bound N (1..=8).
    #[arg(short = 'N', long = "degree", default_value_t = 3)]
    pub n: u32,
}

#[derive(Args, Debug, Clone)]
pub struct Tolerances {
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_steps: usize,
}

#[derive(Args, Debug, Clone)]
pub struct SectionArgs {
    /// Section ray angle in radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub angle: f64,
    /// Center of the section ray.
    #[arg(long, num_args = 2, value_names = ["CX", "CY"], allow_hyphen_values = true)]
    pub center: Option<Vec<f64>>,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 0.2)]
    pub rmin: f64,
    #[arg(long, default_value_t = 2.0)]
    pub rmax: f64,
    #[command(flatten)]
    pub section: SectionArgs,
    /// Scan the grid on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lie bracket [X, Y].
    Bracket {
        #[command(flatten)]
        x: FieldX,
        #[command(flatten)]
        y: FieldY,
    },
    /// Divergence of X.
    Divergence {
        #[command(flatten)]
        x: FieldX,
    },
    /// Rescaled field fX.
    Scale {
        #[command(flatten)]
        x: FieldX,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Truncated centralizer C_N(X) with structure constants.
    Centralizer {
        #[command(flatten)]
        x: FieldX,
        #[command(flatten)]
        degree: Degree,
    },
    /// Compare C_N(X) with C_N(fX).
    CompareCentralizers {
        #[command(flatten)]
        x: FieldX,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[command(flatten)]
        degree: Degree,
    },
    /// dim C_N(X) for N = 1..=nmax.
    DimensionProfile {
        #[command(flatten)]
        x: FieldX,
        #[arg(long, default_value_t = 5)]
        nmax: u32,
    },
    /// Polynomial first integrals of degree <= N.
    FirstIntegrals {
        #[command(flatten)]
        x: FieldX,
        #[command(flatten)]
        degree: Degree,
    },
    /// Rank data of g -> X·grad g on polynomials of degree <= N.
    Corank {
        #[command(flatten)]
        x: FieldX,
        #[command(flatten)]
        degree: Degree,
    },
    /// Poisson bracket of the lifts zP+wQ and zR+wS.
    PoissonCheck {
        #[command(flatten)]
        x: FieldX,
        #[command(flatten)]
        y: FieldY,
    },
    /// dr/dθ in polar coordinates.
    Polar {
        #[command(flatten)]
        x: FieldX,
    },
    /// First return to the section ray.
    ReturnMap {
        #[command(flatten)]
        x: FieldX,
        #[arg(long)]
        r0: f64,
        #[command(flatten)]
        section: SectionArgs,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Scan a radius range for limit cycles.
    Cycles {
        #[command(flatten)]
        x: FieldX,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Characteristic multipliers of the cycles in a radius range.
    Multiplier {
        #[command(flatten)]
        x: FieldX,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Tangency defect of Y along each cycle of X.
    Invariance {
        #[command(flatten)]
        x: FieldX,
        #[command(flatten)]
        y: FieldY,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Centralizer of X + εE.
    ProbePerturbation {
        #[command(flatten)]
        x: FieldX,
        #[arg(long = "e", num_args = 2, value_names = ["EP", "EQ"], allow_hyphen_values = true, required = true)]
        e: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[command(flatten)]
        degree: Degree,
    },
    /// Run the built-in table of example checks.
    VerifyPaperExamples,
}

/// What to print and how to exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Numerical(&'static str, String),
}

impl From<LinopsError> for Failure {
    fn from(e: LinopsError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CycleError> for Failure {
    fn from(e: CycleError) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.name(), e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<FlowError> for Failure {
    fn from(e: FlowError) -> Self {
        CycleError::from(e).into()
    }
}

pub fn preset(name: &str) -> Result<VectorField2, String> {
    let f = match name {
        "example1-x" => example1_x(),
        "example1-y" => example1_y(),
        "example1-mirrored" => example1_mirrored(),
        "vdp" => van_der_pol(),
        "dilation" => dilation(),
        "rotation" => rotation(),
        "saddle" => saddle(),
        other => {
            let k = other
                .strip_prefix("homogeneous-n")
                .and_then(|k| k.parse::<u32>().ok())
                .ok_or_else(|| format!("unknown preset '{other}'"))?;
            make_homogeneous_center(k).map_err(|e| e.to_string())?
        }
    };
    Ok(f)
}

fn resolve(
    parts: &Option<Vec<String>>,
    preset_name: &Option<String>,
    flag: &str,
) -> Result<(VectorField2, Value), Failure> {
    match (parts, preset_name) {
        (Some(v), _) => {
            let f =
                parse_field(&v[0], &v[1]).map_err(|e| Failure::Input(format!("--{flag}: {e}")))?;
            Ok((f, json!([v[0], v[1]])))
        }
        (None, Some(name)) => {
            let f = preset(name).map_err(Failure::Input)?;
            Ok((f, json!({ "preset": name })))
        }
        (None, None) => Err(Failure::Input(format!("missing --{flag}"))),
    }
}

fn poly_arg(src: &str, flag: &str) -> Result<Poly2, Failure> {
    parse_poly(src).map_err(|e| Failure::Input(format!("--{flag}: {e}")))
}

fn config(t: &Tolerances) -> Result<IntegratorConfig, Failure> {
    let cfg = IntegratorConfig {
        rtol: t.rtol,
        atol: t.atol,
        max_steps: t.max_steps,
        ..IntegratorConfig::default()
    };
    cfg.validate().map_err(|e| Failure::Input(e.to_string()))?;
    Ok(cfg)
}

fn section(s: &SectionArgs) -> Result<Section, Failure> {
    let center = match &s.center {
        Some(c) => [c[0], c[1]],
        None => [0.0, 0.0],
    };
    if !s.angle.is_finite() || !center.iter().all(|v| v.is_finite()) {
        return Err(Failure::Input(
            "section angle and center must be finite".into(),
        ));
    }
    Ok(Section {
        center,
        angle: s.angle,
    })
}

fn centralizer_value(rep: &CentralizerReport) -> Value {
    json!({
        "degree": rep.degree,
        "dimension": rep.dimension,
        "basis": rep.basis.iter().map(field_value).collect::<Vec<_>>(),
        "closed_within_degree": rep.closed_within_degree,
        "abelian": rep.abelian,
        "structure_degree": rep.structure_degree,
        "structure_basis": rep.structure_basis.iter().map(field_value).collect::<Vec<_>>(),
        "structure_constants": rep.structure_constants.iter().map(|row| {
            row.iter().map(|c| c.iter().map(rat_value).collect::<Vec<_>>()).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

fn cycle_value(c: &CycleInfo) -> Value {
    json!({
        "section_angle": float_value(c.section.angle),
        "section_center": [float_value(c.section.center[0]), float_value(c.section.center[1])],
        "radius": float_value(c.radius),
        "period": float_value(c.period),
        "multiplier": float_value(c.multiplier),
        "stability": c.stability.name(),
        "residual": float_value(c.residual),
        "refined_in_reverse": c.refined_in_reverse,
        "samples": c.samples.iter().map(|p| json!([float_value(p[0]), float_value(p[1])])).collect::<Vec<_>>(),
    })
}

fn failure_value(f: &RefinementFailure) -> Value {
    json!({
        "bracket": [float_value(f.bracket.0), float_value(f.bracket.1)],
        "error": f.error.map(|e| e.name()),
        "residual": f.residual.map(float_value),
    })
}

fn scan(x: &VectorField2, s: &ScanArgs, cfg: &IntegratorConfig) -> Result<CycleScan, Failure> {
    let sec = section(&s.section)?;
    let out = if s.sequential {
        find_cycles_on(x, s.rmin, s.rmax, &sec, cfg)?
    } else {
        par_find_cycles(x, s.rmin, s.rmax, &sec, cfg)?
    };
    Ok(out)
}

fn scan_inputs(doc: ReportDocument, s: &ScanArgs, t: &Tolerances) -> ReportDocument {
    doc.input("rmin", float_value(s.rmin))
        .input("rmax", float_value(s.rmax))
        .input("angle", float_value(s.section.angle))
        .input("rtol", float_value(t.rtol))
        .input("atol", float_value(t.atol))
}

fn execute(cmd: &Command, doc: &mut ReportDocument) -> Result<i32, Failure> {
    match cmd {
        Command::Bracket { x, y } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            let (fy, iy) = resolve(&y.y, &y.preset_y, "y")?;
            *doc = doc.clone().input("x", ix).input("y", iy);
            let b = lie_bracket(&fx, &fy);
            doc.set("bracket", field_value(&b));
            doc.set("commute", json!(b.is_zero()));
        }
        Command::Divergence { x } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            *doc = doc.clone().input("x", ix);
            doc.set("divergence", poly_value(&divergence(&fx)));
        }
        Command::Scale { x, f } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            let g = poly_arg(f, "f")?;
            *doc = doc.clone().input("x", ix).input("f", json!(f));
            doc.set("field", field_value(&scale_field(&g, &fx)));
        }
        Command::Centralizer { x, degree } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            *doc = doc.clone().input("x", ix).input("N", json!(degree.n));
            let rep = centralizer_basis(&fx, degree.n)?;
            doc.result = centralizer_value(&rep)
                .as_object()
                .cloned()
                .unwrap_or_default();
        }
        Command::CompareCentralizers { x, f, degree } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            let g = poly_arg(f, "f")?;
            *doc = doc
                .clone()
                .input("x", ix)
                .input("f", json!(f))
                .input("N", json!(degree.n));
            let c = compare_centralizers(&fx, &g, degree.n)?;
            doc.set("original", centralizer_value(&c.original));
            doc.set("rescaled", centralizer_value(&c.rescaled));
            doc.set("dimensions_equal", json!(c.dimensions_equal));
            doc.set("abelian_flags_equal", json!(c.abelian_flags_equal));
            doc.set(
                "necessary_conditions_hold",
                json!(c.necessary_conditions_hold()),
            );
        }
        Command::DimensionProfile { x, nmax } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            *doc = doc.clone().input("x", ix).input("nmax", json!(nmax));
            let prof = dimension_profile(&fx, *nmax)?;
            doc.set(
                "profile",
                json!(prof
                    .iter()
                    .map(|(n, d)| json!({"N": n, "dimension": d}))
                    .collect::<Vec<_>>()),
            );
        }
        Command::FirstIntegrals { x, degree } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            *doc = doc.clone().input("x", ix).input("N", json!(degree.n));
            let ints = first_integrals(&fx, degree.n)?;
            doc.set("count", json!(ints.len()));
            doc.set(
                "integrals",
                json!(ints.iter().map(poly_value).collect::<Vec<_>>()),
            );
        }
        Command::Corank { x, degree } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            *doc = doc.clone().input("x", ix).input("N", json!(degree.n));
            let r = derivative_operator_report(&fx, degree.n)?;
            doc.set("degree", json!(r.degree));
            doc.set("domain_dim", json!(r.domain_dim));
            doc.set("codomain_dim", json!(r.codomain_dim));
            doc.set("rank", json!(r.rank));
            doc.set("corank", json!(r.corank));
            doc.set(
                "kernel",
                json!(r.kernel.iter().map(poly_value).collect::<Vec<_>>()),
            );
        }
        Command::PoissonCheck { x, y } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            let (fy, iy) = resolve(&y.y, &y.preset_y, "y")?;
            *doc = doc.clone().input("x", ix).input("y", iy);
            let cert = integrability_certificate(&fx, &fy);
            let pb = poisson(&cert.hamiltonian, &cert.integral);
            let b = lie_bracket(&fx, &fy);
            doc.set("hamiltonian", poly_value(&cert.hamiltonian));
            doc.set("integral", poly_value(&cert.integral));
            doc.set("poisson", poly_value(&pb));
            doc.set("bracket", field_value(&b));
            doc.set("poisson_commute", json!(cert.poisson_commute));
            doc.set("fields_commute", json!(b.is_zero()));
            doc.set("identity_holds", json!(remark_defect(&fx, &fy).is_zero()));
            doc.set("generic_gradient_rank", json!(cert.generic_gradient_rank));
        }
        Command::Polar { x } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            *doc = doc.clone().input("x", ix);
            let form = polar_reduce(&fx);
            let trig = |v: &[lievf_core::cycles::TrigPoly]| {
                json!(v.iter().map(|t| t.to_string()).collect::<Vec<_>>())
            };
            doc.set("numerator", trig(&form.numerator));
            doc.set("denominator", trig(&form.denominator));
            doc.set("cancelled_power", json!(form.cancelled_power));
            let t = match form.transversality_near_origin() {
                Transversality::SignDefinite(s) => json!({"kind": "sign-definite", "sign": s}),
                Transversality::Zeros(z) => json!({
                    "kind": "zeros",
                    "angles": z.iter().map(|a| float_value(*a)).collect::<Vec<_>>(),
                }),
                Transversality::Degenerate => json!({"kind": "degenerate"}),
            };
            doc.set("transversality", t);
        }
        Command::ReturnMap {
            x,
            r0,
            section: s,
            tol,
        } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            *doc = doc
                .clone()
                .input("x", ix)
                .input("r0", float_value(*r0))
                .input("angle", float_value(s.angle));
            let cfg = config(tol)?;
            let sec = section(s)?;
            let ret = first_return(&fx, *r0, &sec, &cfg)?;
            doc.set("radius", float_value(ret.radius));
            doc.set("time", float_value(ret.time));
            doc.set("displacement", float_value(ret.radius - r0));
        }
        Command::Cycles { x, scan: s, tol } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            *doc = scan_inputs(doc.clone().input("x", ix), s, tol);
            let cfg = config(tol)?;
            let out = scan(&fx, s, &cfg)?;
            doc.set("count", json!(out.cycles.len()));
            doc.set(
                "cycles",
                json!(out.cycles.iter().map(cycle_value).collect::<Vec<_>>()),
            );
            doc.set(
                "center_bands",
                json!(out
                    .center_bands
                    .iter()
                    .map(|(a, b)| json!([float_value(*a), float_value(*b)]))
                    .collect::<Vec<_>>()),
            );
            doc.set(
                "failures",
                json!(out.failures.iter().map(failure_value).collect::<Vec<_>>()),
            );
            doc.set(
                "grid_errors",
                json!(out
                    .samples
                    .iter()
                    .filter_map(|g| g.displacement.as_ref().err().map(|e| json!({
                        "radius": float_value(g.radius),
                        "error": e.name(),
                    })))
                    .collect::<Vec<_>>()),
            );
        }
        Command::Multiplier { x, scan: s, tol } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            *doc = scan_inputs(doc.clone().input("x", ix), s, tol);
            let cfg = config(tol)?;
            let out = scan(&fx, s, &cfg)?;
            doc.set(
                "cycles",
                json!(out
                    .cycles
                    .iter()
                    .map(|c| json!({
                        "radius": float_value(c.radius),
                        "period": float_value(c.period),
                        "multiplier": float_value(c.multiplier),
                        "stability": c.stability.name(),
                    }))
                    .collect::<Vec<_>>()),
            );
        }
        Command::Invariance { x, y, scan: s, tol } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            let (fy, iy) = resolve(&y.y, &y.preset_y, "y")?;
            *doc = scan_inputs(doc.clone().input("x", ix).input("y", iy), s, tol);
            let cfg = config(tol)?;
            let out = scan(&fx, s, &cfg)?;
            let mut rows = Vec::new();
            for c in &out.cycles {
                let d = invariance_defect(&fx, &fy, c)?;
                rows.push(json!({"radius": float_value(c.radius), "defect": float_value(d)}));
            }
            doc.set("cycles", json!(rows));
        }
        Command::ProbePerturbation { x, e, eps, degree } => {
            let (fx, ix) = resolve(&x.x, &x.preset, "x")?;
            let fe =
                parse_field(&e[0], &e[1]).map_err(|err| Failure::Input(format!("--e: {err}")))?;
            let eps_r = parse_rat(eps).map_err(|err| Failure::Input(format!("--eps: {err}")))?;
            *doc = doc
                .clone()
                .input("x", ix)
                .input("e", json!([e[0], e[1]]))
                .input("eps", rat_value(&eps_r))
                .input("N", json!(degree.n));
            let perturbed = fx.add(&fe.scale(&eps_r));
            let rep = commuting_perturbation_probe(&fx, &fe, &eps_r, degree.n)?;
            doc.set("perturbed", field_value(&perturbed));
            doc.set("centralizer", centralizer_value(&rep));
            doc.set("nontrivial_partner", json!(rep.dimension >= 2));
        }
        Command::VerifyPaperExamples => {
            let checks = example_checks();
            let failed = checks.iter().filter(|c| !c.passed).count();
            doc.set(
                "checks",
                json!(checks
                    .iter()
                    .map(|c| json!({
                        "claim": c.claim,
                        "location": c.location,
                        "computed": c.computed,
                        "verdict": if c.passed { "pass" } else { "fail" },
                    }))
                    .collect::<Vec<_>>()),
            );
            doc.set("passed", json!(checks.len() - failed));
            doc.set("failed", json!(failed));
            return Ok(if failed == 0 { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Bracket { .. } => "bracket",
        Command::Divergence { .. } => "divergence",
        Command::Scale { .. } => "scale",
        Command::Centralizer { .. } => "centralizer",
        Command::CompareCentralizers { .. } => "compare-centralizers",
        Command::DimensionProfile { .. } => "dimension-profile",
        Command::FirstIntegrals { .. } => "first-integrals",
        Command::Corank { .. } => "corank",
        Command::PoissonCheck { .. } => "poisson-check",
        Command::Polar { .. } => "polar",
        Command::ReturnMap { .. } => "return-map",
        Command::Cycles { .. } => "cycles",
        Command::Multiplier { .. } => "multiplier",
        Command::Invariance { .. } => "invariance",
        Command::ProbePerturbation { .. } => "probe-perturbation",
        Command::VerifyPaperExamples => "verify-paper-examples",
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(val, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for (i, item) in items.iter().enumerate() {
                            out.push_str(&format!("{pad}  [{i}]\n"));
                            render_text(item, indent + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(val))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!(
            "[{}]",
            items.iter().map(scalar_text).collect::<Vec<_>>().join(", ")
        ),
        other => other.to_string(),
    }
}

/// Text rendering of a report; numbers appear exactly as in the JSON form.
pub fn report_text(doc: &ReportDocument) -> String {
    let mut out = format!("{} ({})\n", doc.command, doc.version);
    render_text(&Value::Object(doc.result.clone()), 1, &mut out);
    out
}

pub fn run(cli: &Cli) -> Outcome {
    let mut doc = ReportDocument::new(command_name(&cli.command));
    let (code, stderr) = match execute(&cli.command, &mut doc) {
        Ok(code) => (code, String::new()),
        Err(Failure::Input(msg)) => {
            return Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
        Err(Failure::Numerical(name, msg)) => {
            doc.result.clear();
            doc.set("error", json!(name));
            doc.set("message", json!(msg));
            (3, format!("numerical failure: {msg}\n"))
        }
    };
    let stdout = if cli.json {
        doc.to_json() + "\n"
    } else {
        report_text(&doc)
    };
    Outcome {
        code,
        stdout,
        stderr,
    }
}

/// Parses arguments and runs; clap usage errors map to exit code 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}
