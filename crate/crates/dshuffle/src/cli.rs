//! Command-line front end.
//!
//! Every subcommand writes either human-readable text or a single JSON value.
//! Exit codes: 0 when every check passes, 1 when a check fails or a
//! computation is rejected, 2 for usage and parse errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::anatomy::{coefficient_of_word, solve_sigma, Basis, SolveOptions};
use crate::dsh_check::{is_in_pdmr, is_in_pls, ReportBundle};
use crate::error::{Error, Result};
use crate::gens::vines::enumerate_vines;
use crate::gens::{c_n, q4, s_d, z3, GeneratorTag};
use crate::modforms::{dimension_table, Space};
use crate::ratfun::io::{parse_text, to_json};
use crate::ratfun::q::fmt_q;
use crate::ratfun::{AffineRational, RationalFunction};
use crate::resflt::iterated_r;
use crate::series::{ihara_bracket_series, DepthSeries};

/// Environment variable fixing the size of the worker pool.
pub const JOBS_ENV: &str = "DSHUFFLE_JOBS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dshuffle", about = "Exact double shuffle computations with rational functions")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a generator.
    Gen(GenArgs),
    /// Check membership in the polar double shuffle spaces.
    Verify(VerifyArgs),
    /// Ihara bracket of two elements.
    Bracket(BracketArgs),
    /// Iterated residues of one component.
    Res(ResArgs),
    /// Solve for a zeta element as a bracket combination.
    Decompose(DecomposeArgs),
    /// Dimension tables against their generating series.
    Dims(DimsArgs),
    /// Coefficient of a word in a solved zeta element or a given element.
    Coeff(CoeffArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Psi,
    Chi,
    Sd,
    Vine,
    Z3,
    Q4,
    C,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<i64>,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Depth of `s_d`.
    #[arg(long)]
    pub d: Option<usize>,
    /// Size of the vines, or the depth of `c_n`.
    #[arg(long)]
    pub n: Option<usize>,
    /// List the vines instead of printing their sum.
    #[arg(long)]
    pub list: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Pdmr,
    Pls,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A generator name (`psi3`, `psi-1`, `chi5`, `z3`, `Q4`, `s3`, `c4`).
    #[arg(long, allow_hyphen_values = true)]
    pub gen: Option<String>,
    /// A file holding a series (JSON) or a single rational function (text).
    #[arg(long)]
    pub element: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub max_depth: usize,
    #[arg(long, value_enum, default_value = "pdmr")]
    pub target: Target,
    /// Depth of the component checked for `pls`.
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BracketArgs {
    #[arg(allow_hyphen_values = true)]
    pub left: String,
    #[arg(allow_hyphen_values = true)]
    pub right: String,
    #[arg(long, default_value_t = 4)]
    pub max_depth: usize,
}

#[derive(Debug, Args)]
pub struct ResArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub element: String,
    #[arg(long)]
    pub depth: usize,
    #[arg(long, default_value_t = 1)]
    pub iterate: usize,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub weight: i64,
    #[arg(long, default_value_t = 4)]
    pub max_depth: usize,
    #[arg(long, default_value = "psi")]
    pub basis: String,
    #[arg(long)]
    pub require_minus_one: bool,
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub max_weight: u32,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    /// Comma-separated word, e.g. `5,2,2`.
    #[arg(long, value_delimiter = ',')]
    pub word: Vec<u32>,
    /// Weight of the zeta element to solve for.
    #[arg(long)]
    pub weight: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub element: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub max_depth: usize,
    #[arg(long, default_value = "psi")]
    pub basis: String,
    #[arg(long)]
    pub require_minus_one: bool,
}

/// Parses a generator name such as `psi-1`, `chi5`, `z3`, `Q4`, `s3` or `c4`.
pub fn parse_generator(s: &str) -> Result<GeneratorTag> {
    let num = |t: &str| t.parse::<i64>().map_err(|_| Error::Parse(format!("unknown generator `{s}`")));
    if let Some(k) = s.strip_prefix("psi") {
        return Ok(GeneratorTag::Psi(num(k)?));
    }
    if let Some(k) = s.strip_prefix("chi") {
        return Ok(GeneratorTag::Chi(num(k)?));
    }
    match s {
        "z3" => return Ok(GeneratorTag::Z3),
        "Q4" | "q4" => return Ok(GeneratorTag::Q4),
        _ => {}
    }
    if let Some(k) = s.strip_prefix('s') {
        return Ok(GeneratorTag::S(num(k)? as usize));
    }
    if let Some(k) = s.strip_prefix('c') {
        return Ok(GeneratorTag::C(num(k)? as usize));
    }
    Err(Error::Parse(format!("unknown generator `{s}`")))
}

/// Parses a rational function, accepting the canonical `(num)/(forms)` text
/// as well as `num/(f_1*f_2*…)` with each factor `x_a` or `(x_a-x_b)`.
pub fn parse_ratfun(text: &str) -> Result<RationalFunction> {
    let t = text.trim();
    if t.starts_with('(') {
        return parse_text(t, None);
    }
    let Some((num, den)) = t.split_once('/') else {
        return parse_text(&format!("({t})"), None);
    };
    let den = den.trim();
    let inner = den.strip_prefix('(').and_then(|d| d.strip_suffix(')')).unwrap_or(den);
    let forms: Vec<String> = inner
        .split('*')
        .map(|f| f.trim().trim_start_matches('(').trim_end_matches(')').replace(' ', ""))
        .collect();
    parse_text(&format!("({num})/({})", forms.join(" ")), None)
}

/// Renders a rational function in the requested format.
pub fn emit(f: &RationalFunction, format: Format) -> String {
    match format {
        Format::Text => f.to_string(),
        Format::Json => to_json(f).to_string(),
    }
}

fn load_element(spec: &str, max_depth: usize) -> Result<DepthSeries> {
    if let Ok(tag) = parse_generator(spec) {
        return tag.series(max_depth);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("cannot read `{spec}`: {e}")))?;
    if let Ok(v) = serde_json::from_str::<Value>(&text) {
        if v.get("components").is_some() {
            return DepthSeries::from_json(&v);
        }
        let rf = crate::ratfun::io::from_json(&v)?;
        return Ok(DepthSeries::single(rf.arity, rf.to_affine(), rf.weight(), max_depth.max(rf.arity)));
    }
    let rf = parse_ratfun(&text)?;
    Ok(DepthSeries::single(rf.arity, rf.to_affine(), rf.weight(), max_depth.max(rf.arity)))
}


fn series_out(s: &DepthSeries, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(s.to_json()?.to_string()),
        Format::Text => {
            let mut out = String::new();
            for d in 1..=s.max_depth {
                let c = s.component(d);
                if c.is_zero() {
                    continue;
                }
                let rf = RationalFunction::from_affine(&c, d)?;
                out.push_str(&format!("depth {d}: {rf}\n"));
            }
            if out.is_empty() {
                out.push_str("0\n");
            }
            Ok(out)
        }
    }
}

fn bundle_out(b: &ReportBundle, format: Format) -> String {
    match format {
        Format::Json => {
            let reports: Vec<Value> = b.reports.iter().map(|r| r.to_json()).collect();
            format!("{}\n{}\n", Value::Array(reports), b.summary())
        }
        Format::Text => {
            let mut out: String = b.reports.iter().map(|r| format!("{r}\n")).collect();
            out.push_str(&b.summary());
            out.push('\n');
            out
        }
    }
}

fn parse_space(s: &str) -> Result<Space> {
    s.parse()
}

fn execute(cli: &Cli, out: &mut String) -> Result<bool> {
    let format = cli.format;
    match &cli.command {
        Command::Gen(a) => {
            let need = |o: Option<usize>, name: &str| o.ok_or_else(|| Error::Parse(format!("--{name} is required")));
            let series = match a.kind {
                GenKind::Psi | GenKind::Chi => {
                    let w = a.weight.ok_or_else(|| Error::Parse("--weight is required".into()))?;
                    let tag = if a.kind == GenKind::Psi { GeneratorTag::Psi(w) } else { GeneratorTag::Chi(w) };
                    tag.series(a.depth)?
                }
                GenKind::Sd => {
                    let d = need(a.d, "d")?;
                    DepthSeries::single(d, s_d(d), Some(0), d)
                }
                GenKind::Z3 => DepthSeries::single(3, z3(), Some(3), 3),
                GenKind::Q4 => DepthSeries::single(4, q4(), Some(0), 4),
                GenKind::C => {
                    let n = need(a.n, "n")?;
                    DepthSeries::single(n, c_n(n), Some(-2), n)
                }
                GenKind::Vine => {
                    let n = need(a.n, "n")?;
                    let vines = enumerate_vines(n);
                    if a.list {
                        match format {
                            Format::Json => {
                                let v: Vec<Value> = vines.iter().map(|v| json!(v.composition)).collect();
                                out.push_str(&format!("{}\n", Value::Array(v)));
                            }
                            Format::Text => {
                                for v in &vines {
                                    let parts: Vec<String> = v.composition.iter().map(|c| c.to_string()).collect();
                                    out.push_str(&format!("({})\n", parts.join(",")));
                                }
                            }
                        }
                        return Ok(true);
                    }
                    let mut acc = AffineRational::zero();
                    for v in &vines {
                        acc = acc + v.rat();
                    }
                    DepthSeries::single(n, acc, None, n)
                }
            };
            out.push_str(&series_out(&series, format)?);
            if format == Format::Json {
                out.push('\n');
            }
            Ok(true)
        }
        Command::Verify(a) => {
            let s = match (&a.gen, &a.element) {
                (Some(g), None) => parse_generator(g)?.series(a.max_depth)?,
                (None, Some(e)) => load_element(e, a.max_depth)?,
                _ => return Err(Error::Parse("exactly one of --gen and --element is required".into())),
            };
            let bundle = match a.target {
                Target::Pdmr => is_in_pdmr(&s, a.max_depth)?,
                Target::Pls => {
                    let d = a.depth.or_else(|| s.components.keys().next().copied()).unwrap_or(1);
                    is_in_pls(&s.component(d), d)
                }
            };
            out.push_str(&bundle_out(&bundle, format));
            Ok(bundle.passed())
        }
        Command::Bracket(a) => {
            let l = load_element(&a.left, a.max_depth)?;
            let r = load_element(&a.right, a.max_depth)?;
            let mut b = ihara_bracket_series(&l, &r)?;
            b.max_depth = b.max_depth.min(a.max_depth);
            out.push_str(&series_out(&b.normalized(), format)?);
            if format == Format::Json {
                out.push('\n');
            }
            Ok(true)
        }
        Command::Res(a) => {
            let s = load_element(&a.element, a.depth)?;
            let f = s.get(a.depth)?;
            let r = iterated_r(&f, a.depth, a.iterate)?;
            let arity = a.depth.saturating_sub(a.iterate);
            let rf = RationalFunction::from_affine(&r.normalized(), arity)?;
            out.push_str(&emit(&rf, format));
            out.push('\n');
            Ok(true)
        }
        Command::Decompose(a) => {
            let mut opts = SolveOptions::new(a.max_depth, a.basis.parse::<Basis>()?);
            opts.require_minus_one = a.require_minus_one;
            let sol = solve_sigma(a.weight, &opts)?;
            match format {
                Format::Json => {
                    let mut v = sol.expr.to_json();
                    v["kernel_dim"] = json!(sol.kernel_dim);
                    v["ambiguity"] = json!(sol.ambiguity);
                    out.push_str(&format!("{v}\n"));
                }
                Format::Text => {
                    out.push_str(&format!("sigma{} = {}\n", a.weight, sol.expr));
                    out.push_str(&format!("kernel dimension {}, ambiguity {}\n", sol.kernel_dim, sol.ambiguity));
                }
            }
            Ok(true)
        }
        Command::Dims(a) => {
            let table = dimension_table(parse_space(&a.space)?, a.max_weight)?;
            let ok = table.iter().all(|&(_, c, p)| c as i64 == p);
            match format {
                Format::Json => {
                    let rows: Vec<Value> =
                        table.iter().map(|&(w, c, p)| json!({"weight": w, "computed": c, "predicted": p})).collect();
                    out.push_str(&format!("{}\n", json!({"space": a.space, "rows": rows, "match": ok})));
                }
                Format::Text => {
                    out.push_str("weight computed predicted\n");
                    for (w, c, p) in &table {
                        out.push_str(&format!("{w} {c} {p}\n"));
                    }
                }
            }
            Ok(ok)
        }
        Command::Coeff(a) => {
            let series = match (a.weight, &a.element) {
                (Some(w), None) => {
                    let mut opts = SolveOptions::new(a.max_depth, a.basis.parse::<Basis>()?);
                    opts.require_minus_one = a.require_minus_one;
                    solve_sigma(w, &opts)?.series
                }
                (None, Some(e)) => load_element(e, a.max_depth)?,
                _ => return Err(Error::Parse("exactly one of --weight and --element is required".into())),
            };
            let c = coefficient_of_word(&series, &a.word)?;
            match format {
                Format::Json => out.push_str(&format!("{}\n", json!({"word": a.word, "coeff": fmt_q(&c)}))),
                Format::Text => out.push_str(&format!("{}\n", fmt_q(&c))),
            }
            Ok(true)
        }
    }
}

fn is_usage_error(e: &Error) -> bool {
    matches!(e, Error::Parse(_) | Error::Syntax { .. })
}

/// Runs the CLI on `args` (program name first), writing the report to `out`
/// and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    if let Some(jobs) = std::env::var(JOBS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        crate::par::set_jobs(jobs);
    }
    let mut buf = String::new();
    match execute(&cli, &mut buf) {
        Ok(passed) => {
            let _ = out.write_all(buf.as_bytes());
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if is_usage_error(&e) {
                2
            } else {
                1
            }
        }
    }
}

/// One value from the reference corpus together with the value computed now.
#[derive(Clone, Debug)]
pub struct GoldenCase {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
}

impl GoldenCase {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

fn golden(name: &'static str, expected: &str, actual: Result<String>) -> GoldenCase {
    let actual = actual.unwrap_or_else(|e| format!("error: {e}"));
    GoldenCase { name, expected: expected.to_string(), actual }
}

/// Replays reference values through the CLI, producing one case per value.
pub fn golden_corpus() -> Vec<GoldenCase> {
    let cli = |args: &[&str]| -> Result<String> {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["dshuffle"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        if code != 0 {
            return Err(Error::Precondition(String::from_utf8_lossy(&err).trim().to_string()));
        }
        Ok(String::from_utf8_lossy(&out).trim().to_string())
    };
    let coeffs = |args: &[&str]| -> Result<String> {
        let v: Value = serde_json::from_str(&cli(args)?).map_err(|e| Error::Parse(e.to_string()))?;
        let c: Vec<String> = v["terms"]
            .as_array()
            .ok_or_else(|| Error::Parse("terms".into()))?
            .iter()
            .skip(1)
            .map(|t| t["coeff"].as_str().unwrap_or("?").to_string())
            .collect();
        Ok(c.join(" "))
    };
    vec![
        golden("sigma5", "-1/60 -1/5", coeffs(&["--format", "json", "decompose", "--weight", "5", "--max-depth", "3"])),
        golden(
            "sigma7",
            "-1/112 -1/14 -29/224",
            coeffs(&["--format", "json", "decompose", "--weight", "7", "--max-depth", "3"]),
        ),
        golden("sigma5 chi", "-5/24", coeffs(&["--format", "json", "decompose", "--weight", "5", "--max-depth", "3", "--basis", "chi"])),
        golden(
            "sigma9 word 5,2,2",
            "-3319/72",
            cli(&["coeff", "--weight", "9", "--max-depth", "3", "--word", "5,2,2"]),
        ),
        golden("ihara relation", "0", cli(&["bracket", "psi3", "psi3", "--max-depth", "2"]).map(|s| s.replace("depth 2: ", ""))),
        golden("Pe dims 12..24", "1 0 1 1 1 1 2", {
            dimension_table(Space::Pe, 24).map(|t| {
                t.iter().filter(|(w, _, _)| *w >= 12 && w % 2 == 0).map(|(_, c, _)| c.to_string()).collect::<Vec<_>>().join(" ")
            })
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["dshuffle"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parse_forms() {
        let a = parse_ratfun("1/(x1*(x2-x1))").unwrap();
        let b = parse_ratfun("(1)/(x1 x2-x1)").unwrap();
        assert!(a.equals(&b));
        assert!(parse_ratfun("(x0)").is_err());
        let psi = crate::gens::psi_minus_one(2);
        let rf = RationalFunction::from_affine(&psi, 2).unwrap();
        let back = parse_ratfun(&emit(&rf, Format::Text)).unwrap();
        assert!(back.equals(&rf));
        assert_eq!(emit(&back, Format::Text), emit(&rf, Format::Text));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["verify", "--gen", "psi3", "--max-depth", "3"]).0, 0);
        assert_eq!(run_str(&["verify", "--gen", "nonsense"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["decompose", "--weight", "4"]).0, 1);
    }

    #[test]
    fn deterministic_output() {
        let a = run_str(&["--format", "json", "gen", "psi", "--weight", "5", "--depth", "3"]);
        let b = run_str(&["--format", "json", "gen", "psi", "--weight", "5", "--depth", "3"]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn dims_table() {
        let (code, out, _) = run_str(&["dims", "--space", "Pe", "--max-weight", "14"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l == "12 1 1"));
    }
}
