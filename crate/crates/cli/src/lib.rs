//! Command runner behind the `weilform` binary.
//!
//! Every command produces a JSON report and an exit code: 0 when all checks
//! pass, 1 when a mathematical check fails, 2 on malformed or inconsistent
//! input.

use serde_json::{json, Map, Value};

use weilform::fixtures::{fixture, RandomData};
use weilform::ideals::{
    bianchi_check, c2, coupling_checks, curvature, curving_suite, deform, dhor, hstar,
    obstruction_cocycle, IMConnection,
};
use weilform::poly::{Poly, Rational};
use weilform::report::Report;
use weilform::spec::{cochain_from_json, cochain_to_json, form_to_json, SpecFile};
use weilform::weil::solve::solve_coboundary;
use weilform::weil::{check_im, delta, dnabla_cochain, is_horizontal, WeilCochain};
use weilform::{Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurvingMode {
    Check,
    Solve,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Validate { emit: bool },
    Delta,
    Dnabla,
    Hproj,
    Dhor,
    Curvature,
    Bianchi,
    Deform { lambda: String, with: String },
    Obstruction { bound: u32 },
    Curving { mode: CurvingMode, bound: u32 },
    Fixture { name: String, emit: bool },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Delta => "delta",
            Command::Dnabla => "dnabla",
            Command::Hproj => "hproj",
            Command::Dhor => "dhor",
            Command::Curvature => "curvature",
            Command::Bianchi => "bianchi",
            Command::Deform { .. } => "deform",
            Command::Obstruction { .. } => "obstruction",
            Command::Curving { .. } => "curving",
            Command::Fixture { .. } => "fixture",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Flags {
    pub seed: u64,
    /// Replace the spec's cochains by one random cochain in `W^{p,q}`.
    pub random: Option<(usize, usize)>,
}

/// Parse `P:Q`.
pub fn parse_level_degree(s: &str) -> std::result::Result<(usize, usize), String> {
    let (p, q) = s
        .split_once(':')
        .ok_or_else(|| format!("expected P:Q, got '{s}'"))?;
    let p = p.trim().parse().map_err(|_| format!("bad level '{p}'"))?;
    let q = q.trim().parse().map_err(|_| format!("bad degree '{q}'"))?;
    Ok((p, q))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

struct Ctx {
    spec: SpecFile,
    flags: Flags,
}

struct Done {
    report: Report,
    results: Map<String, Value>,
}

impl Done {
    fn new() -> Self {
        Done {
            report: Report::new(),
            results: Map::new(),
        }
    }
}

/// Run a command on the text of a spec file (`None` for `fixture`).
pub fn run(command: &Command, spec_src: Option<&str>, flags: &Flags) -> Outcome {
    match command {
        Command::Fixture { name, emit: true } => match fixture(name) {
            Ok(fx) => Outcome {
                stdout: SpecFile::from_fixture(&fx).to_json(),
                code: EXIT_PASS,
            },
            Err(e) => error_outcome(command, &e),
        },
        Command::Validate { emit: true } => {
            match spec_src.map(SpecFile::parse).unwrap_or_else(missing_spec) {
                Ok(spec) => Outcome {
                    stdout: spec.to_json(),
                    code: EXIT_PASS,
                },
                Err(e) => error_outcome(command, &e),
            }
        }
        _ => match execute(command, spec_src, flags) {
            Ok(done) => report_outcome(command, done),
            Err(e) => error_outcome(command, &e),
        },
    }
}

fn missing_spec() -> Result<SpecFile> {
    Err(Error::parse("$", "no spec file given"))
}

fn execute(command: &Command, spec_src: Option<&str>, flags: &Flags) -> Result<Done> {
    let spec = match command {
        Command::Fixture { name, .. } => SpecFile::from_fixture(&fixture(name)?),
        _ => spec_src.map(SpecFile::parse).unwrap_or_else(missing_spec)?,
    };
    let ctx = Ctx {
        spec,
        flags: flags.clone(),
    };
    match command {
        Command::Validate { .. } | Command::Fixture { .. } => validate(&ctx),
        Command::Delta => per_cochain(&ctx, "delta", |ctx, c| {
            let rep = ctx.spec.representation_for(c.value_rank())?;
            delta(&ctx.spec.algebroid, &rep, c)
        }),
        Command::Dnabla => per_cochain(&ctx, "dnabla", |ctx, c| {
            let conn = ctx.spec.connection_for(c.value_rank())?;
            dnabla_cochain(&conn, c)
        }),
        Command::Hproj => with_imc(&ctx, |ctx, imc, done| {
            let out = cochain_results(ctx, |_, c| hstar(imc, c))?;
            for (t, h) in out.iter().enumerate() {
                done.report.push(
                    format!("cochain {}: h* horizontal", t + 1),
                    is_horizontal(h, imc.ideal().indices()),
                    "",
                );
                done.report.push(
                    format!("cochain {}: h* idempotent", t + 1),
                    hstar(imc, h)? == *h,
                    "",
                );
            }
            insert_cochains(ctx, done, "hproj", &out);
            Ok(())
        }),
        Command::Dhor => with_imc(&ctx, |ctx, imc, done| {
            let out = cochain_results(ctx, |_, c| dhor(imc, c))?;
            insert_cochains(ctx, done, "dhor", &out);
            Ok(())
        }),
        Command::Curvature => with_imc(&ctx, |ctx, imc, done| {
            let omega = curvature(imc)?;
            let rep = imc.ideal().adjoint_rep();
            done.report.push(
                "curvature horizontal",
                is_horizontal(&omega, imc.ideal().indices()),
                "",
            );
            done.report
                .extend_prefixed("curvature ", check_im(imc.algebroid(), &rep, &omega)?);
            done.results
                .insert("curvature".into(), cochain_to_json(&omega, &ctx.spec.variables));
            Ok(())
        }),
        Command::Bianchi => with_imc(&ctx, |ctx, imc, done| {
            done.report.extend(bianchi_check(imc)?);
            done.results.insert(
                "curvature".into(),
                cochain_to_json(&curvature(imc)?, &ctx.spec.variables),
            );
            Ok(())
        }),
        Command::Deform { lambda, with } => with_imc(&ctx, |ctx, imc, done| {
            let lambda = parse_lambda(lambda)?;
            let l = deformation_direction(ctx, with)?;
            let deformed = deform(imc, &l, &lambda)?;
            let rep = imc.ideal().adjoint_rep();
            done.report
                .extend_prefixed("deformed ", check_im(imc.algebroid(), &rep, deformed.cochain())?);
            let expected = curvature(imc)?
                .add(&dhor(imc, &l)?.scale(&lambda))
                .add(&c2(imc.ideal(), &l)?.scale(&(&lambda * &lambda)));
            let actual = curvature(&deformed)?;
            done.report.push(
                "curvature expansion",
                actual == expected,
                if actual == expected {
                    ""
                } else {
                    "Omega(lambda) differs from Omega + lambda DL + lambda^2 c2(L)"
                },
            );
            let vars = &ctx.spec.variables;
            done.results
                .insert("im_connection".into(), cochain_to_json(deformed.cochain(), vars));
            done.results.insert("curvature".into(), cochain_to_json(&actual, vars));
            Ok(())
        }),
        Command::Obstruction { bound } => obstruction(&ctx, *bound),
        Command::Curving { mode, bound } => with_imc(&ctx, |ctx, imc, done| {
            let vars = &ctx.spec.variables;
            let f = match mode {
                CurvingMode::Check => ctx
                    .spec
                    .curving
                    .clone()
                    .ok_or_else(|| Error::contract("curving --check needs a curving in the spec"))?,
                CurvingMode::Solve => {
                    let omega = curvature(imc)?;
                    let rep = imc.ideal().adjoint_rep();
                    match solve_coboundary(imc.algebroid(), &rep, &omega, *bound, None)? {
                        Some(f) => {
                            done.report.pass(format!("curving found at bound {bound}"));
                            f.as_form()
                        }
                        None => {
                            done.report.fail(
                                format!("curving found at bound {bound}"),
                                format!("no F with coefficient degree <= {bound} solves delta0 F = Omega"),
                            );
                            return Ok(());
                        }
                    }
                }
            };
            done.report.extend(curving_suite(imc, &f, None)?);
            done.results.insert("curving".into(), form_to_json(&f, vars));
            Ok(())
        }),
    }
}

fn parse_lambda(s: &str) -> Result<Rational> {
    Poly::parse_default(s, 0)
        .map_err(|e| Error::parse("--lambda", e.to_string()))?
        .as_constant()
        .ok_or_else(|| Error::parse("--lambda", format!("'{s}' is not a rational number")))
}

/// `--with` names a 1-based index into the spec's cochains or a JSON file
/// holding a single cochain.
fn deformation_direction(ctx: &Ctx, with: &str) -> Result<WeilCochain> {
    if let Ok(t) = with.parse::<usize>() {
        return ctx
            .spec
            .cochains
            .get(t.wrapping_sub(1))
            .cloned()
            .ok_or_else(|| Error::parse("--with", format!("no cochain number {t} in the spec")));
    }
    let src = std::fs::read_to_string(with)
        .map_err(|e| Error::parse("--with", format!("cannot read {with}: {e}")))?;
    let v: Value = serde_json::from_str(&src)
        .map_err(|e| Error::parse(with, format!("invalid JSON: {e}")))?;
    cochain_from_json(&v, &ctx.spec.variables, ctx.spec.algebroid.rank(), "$")
}

fn validate(ctx: &Ctx) -> Result<Done> {
    let spec = &ctx.spec;
    let mut done = Done::new();
    done.report
        .extend_prefixed("algebroid ", spec.algebroid.validate());
    if let Some(rep) = &spec.representation {
        done.report
            .extend_prefixed("representation ", rep.validate(&spec.algebroid));
    }
    let ideal = spec.ideal_bundle()?;
    if let Some(ideal) = &ideal {
        done.report.extend_prefixed("ideal ", ideal.validate());
    }
    if !done.report.all_passed() {
        return Ok(done);
    }
    if let Some(imc) = spec.imc()? {
        let rep = imc.ideal().adjoint_rep();
        let im = check_im(imc.algebroid(), &rep, imc.cochain())?;
        let ok = im.all_passed();
        done.report.extend_prefixed("im_connection ", im);
        if ok {
            done.report
                .extend_prefixed("coupling ", coupling_checks(&imc)?);
            done.report.extend(bianchi_check(&imc)?);
            if let Some(f) = &spec.curving {
                done.report.extend_prefixed("curving ", curving_suite(&imc, f, None)?);
            }
        }
    }
    Ok(done)
}

fn obstruction(ctx: &Ctx, bound: u32) -> Result<Done> {
    let mut done = Done::new();
    let ideal = ctx
        .spec
        .ideal_bundle()?
        .ok_or_else(|| Error::contract("obstruction needs an ideal"))?;
    let triple = ctx
        .spec
        .triple()?
        .ok_or_else(|| Error::contract("obstruction needs a splitting or an im_connection"))?;
    let rep = ideal.adjoint_rep();
    let alg = ideal.algebroid();
    let cocycle = obstruction_cocycle(&ideal, &triple)?;
    done.report
        .push("cocycle horizontal", is_horizontal(&cocycle, ideal.indices()), "");
    done.report
        .push("cocycle delta-closed", delta(alg, &rep, &cocycle)?.is_zero(), "");
    let vars = &ctx.spec.variables;
    done.results
        .insert("cocycle".into(), cochain_to_json(&cocycle, vars));
    let name = format!("corrector found at bound {bound}");
    match solve_coboundary(alg, &rep, &cocycle, bound, Some(ideal.indices()))? {
        Some(b) => {
            done.report.pass(name);
            let corrected = triple.cochain(&ideal)?.sub(&b);
            done.report
                .extend_prefixed("corrected ", check_im(alg, &rep, &corrected)?);
            done.results.insert("corrector".into(), cochain_to_json(&b, vars));
            done.results
                .insert("im_connection".into(), cochain_to_json(&corrected, vars));
        }
        None => done.report.fail(
            name,
            format!("no horizontal corrector with coefficient degree <= {bound}"),
        ),
    }
    Ok(done)
}

fn ctx_cochains(ctx: &Ctx) -> Result<Vec<WeilCochain>> {
    if let Some((p, q)) = ctx.flags.random {
        let alg = &ctx.spec.algebroid;
        let m = match (&ctx.spec.representation, &ctx.spec.ideal) {
            (Some(rep), _) => rep.rank(),
            (None, Some(idx)) => idx.len(),
            (None, None) => 1,
        };
        if p > 3 {
            return Err(Error::contract("random cochains need level at most 3"));
        }
        return Ok(vec![RandomData::new(ctx.flags.seed).cochain(alg, m, p, q)]);
    }
    if ctx.spec.cochains.is_empty() {
        return Err(Error::contract("no cochains in the spec; pass --random P:Q"));
    }
    Ok(ctx.spec.cochains.clone())
}

fn cochain_results<F>(ctx: &Ctx, f: F) -> Result<Vec<WeilCochain>>
where
    F: Fn(&Ctx, &WeilCochain) -> Result<WeilCochain>,
{
    ctx_cochains(ctx)?.iter().map(|c| f(ctx, c)).collect()
}

fn insert_cochains(ctx: &Ctx, done: &mut Done, key: &str, out: &[WeilCochain]) {
    let arr = out
        .iter()
        .map(|c| cochain_to_json(c, &ctx.spec.variables))
        .collect();
    done.results.insert(key.into(), Value::Array(arr));
}

fn per_cochain<F>(ctx: &Ctx, key: &str, f: F) -> Result<Done>
where
    F: Fn(&Ctx, &WeilCochain) -> Result<WeilCochain>,
{
    let mut done = Done::new();
    let out = cochain_results(ctx, f)?;
    insert_cochains(ctx, &mut done, key, &out);
    Ok(done)
}

/// Commands on an IM connection: check compatibility first and stop on failure.
fn with_imc<F>(ctx: &Ctx, f: F) -> Result<Done>
where
    F: FnOnce(&Ctx, &IMConnection, &mut Done) -> Result<()>,
{
    let imc = ctx
        .spec
        .imc()?
        .ok_or_else(|| Error::contract("this command needs an ideal and an im_connection"))?;
    let mut done = Done::new();
    let rep = imc.ideal().adjoint_rep();
    let im = check_im(imc.algebroid(), &rep, imc.cochain())?;
    let ok = im.all_passed();
    done.report.extend_prefixed("im_connection ", im);
    if ok {
        f(ctx, &imc, &mut done)?;
    }
    Ok(done)
}

fn report_outcome(command: &Command, done: Done) -> Outcome {
    let passed = done.report.all_passed();
    let checks: Vec<Value> = done
        .report
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
        .collect();
    let doc = json!({
        "command": command.name(),
        "status": if passed { "pass" } else { "fail" },
        "checks": checks,
        "results": Value::Object(done.results),
        "summary": done.report.summary_lines(),
    });
    Outcome {
        stdout: pretty(&doc),
        code: if passed { EXIT_PASS } else { EXIT_CHECK_FAILED },
    }
}

fn error_outcome(command: &Command, e: &Error) -> Outcome {
    let (kind, path) = match e {
        Error::Parse { path, .. } => ("parse", Some(path.clone())),
        Error::Structural(_) => ("structural", None),
        Error::Contract(_) => ("contract", None),
    };
    let doc = json!({
        "command": command.name(),
        "status": "error",
        "error": {"kind": kind, "path": path, "message": e.to_string()},
    });
    Outcome {
        stdout: pretty(&doc),
        code: EXIT_INPUT,
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
