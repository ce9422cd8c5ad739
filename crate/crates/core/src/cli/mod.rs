//! Command-line front end: argument parsing, output formatting, exit codes.

pub mod cache;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::ApproxComplex;
use crate::transforms::{apply_transform, box_op, nabla, TransformKind};
use crate::words::{regularize_ab, regularize_b, Composition, WordPoly};
use crate::zeta::{compute, zeta_pm_eps, zeta_reg_eps, EngineConfig, Method, PmSign, ZetaInput, ZetaRequest};
use cache::{Cache, CacheKey, CacheRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DIVERGENT: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

/// Exit code for an error surfaced by a subcommand.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::NotInWPlus(_) | Error::WordTooLong(_) => EXIT_PARSE,
        Error::Divergent(_) => EXIT_DIVERGENT,
        Error::Precondition(_)
        | Error::PrecisionNotCertified { .. }
        | Error::PrecisionUnreachable { .. }
        | Error::OrderOverflow { .. }
        | Error::NotGrouplike(_)
        | Error::NonUnitConstant(_)
        | Error::DivisionByZero => EXIT_PRECONDITION,
        Error::Io(_) | Error::Json(_) => EXIT_FAILURE,
    }
}

#[derive(Debug, Parser)]
#[command(name = "polyzeta", version, about = "Multiple zeta values via polylogarithm series at 1/2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute ζ(r1, ..., rk) for a convergent composition.
    Zeta {
        /// Composition parts, e.g. `1 3`.
        #[arg(required = true)]
        parts: Vec<String>,
        #[arg(long, default_value_t = 30)]
        digits: u32,
        /// One of direct, thm7-half, thm7-rho, thm7-rhobar, thm10, cor12, cor21,
        /// lemma20-minus-one, lemma20-rho.
        #[arg(long, default_value = "thm7-half")]
        method: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        no_cache: bool,
    },
    /// Regularized value of a word polynomial, e.g. `ba` or `ab - 2*aab`.
    ZetaReg {
        input: String,
        /// `none` for ζ, `plus`/`minus` for ζ±.
        #[arg(long, value_enum, default_value_t = RegSign::None)]
        sign: RegSign,
        #[arg(long, default_value_t = 30)]
        digits: u32,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        no_cache: bool,
    },
    /// Apply a linear map on word polynomials.
    Transform {
        #[arg(value_enum)]
        kind: TransformArg,
        input: String,
    },
    /// Rewrite as a shuffle polynomial in `b` (or `a` and `b`) with convergent coefficients.
    Regularize {
        input: String,
        #[arg(long, value_enum, default_value_t = RegForm::Ab)]
        form: RegForm,
    },
    /// Run invariant suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 5)]
        max_weight: u32,
        #[arg(long, default_value_t = 20)]
        digits: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegSign {
    None,
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    Box,
    Nabla,
    Sigma,
    Tau,
    Sigmaprime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegForm {
    B,
    Ab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    Numeric,
    Group,
    All,
}

/// Machine-readable result; field order is part of the output format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct JsonOutput {
    pub input: String,
    pub method: String,
    pub point: String,
    pub digits: u32,
    pub value: String,
    pub error_bound: String,
    pub terms_used: u64,
    pub elapsed_ms: u64,
}

/// Decimal text of a value: real, or `x + yi` / `x - yi`.
pub fn format_value(v: &ApproxComplex, digits: u32) -> Result<String> {
    let re = v.re.to_decimal(digits)?;
    if v.im.is_exact() && v.im.mid().sign() == num_bigint::Sign::NoSign {
        return Ok(re);
    }
    let im = v.im.to_decimal(digits)?;
    Ok(match im.strip_prefix('-') {
        Some(abs) => format!("{re} - {abs}i"),
        None => format!("{re} + {im}i"),
    })
}

fn bound_of(v: &ApproxComplex) -> String {
    if v.im.radius() > v.re.radius() {
        v.im.bound_string()
    } else {
        v.re.bound_string()
    }
}

struct Evaluation {
    key: CacheKey,
    json: bool,
    use_cache: bool,
}

impl Evaluation {
    fn run(
        self,
        out: &mut dyn Write,
        err: &mut dyn Write,
        eval: impl FnOnce() -> Result<(ApproxComplex, u64)>,
    ) -> Result<()> {
        let start = Instant::now();
        let cache = if self.use_cache { Cache::from_env() } else { None };
        let cached = cache.as_ref().and_then(|c| match c.get(&self.key) {
            Ok(r) => r,
            Err(e) => {
                let _ = writeln!(err, "warning: cache unreadable: {e}");
                None
            }
        });
        let record = match cached {
            Some(r) => r,
            None => {
                let (v, terms) = eval()?;
                let rec = CacheRecord::new(self.key.clone(), format_value(&v, self.key.digits)?, bound_of(&v), terms);
                if let Some(c) = &cache {
                    if let Err(e) = c.put(&rec) {
                        let _ = writeln!(err, "warning: cache not written: {e}");
                    }
                }
                rec
            }
        };
        if self.json {
            let j = JsonOutput {
                input: self.key.input,
                method: self.key.method,
                point: self.key.point,
                digits: self.key.digits,
                value: record.value,
                error_bound: record.error_bound,
                terms_used: record.terms_used,
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            writeln!(out, "{}", serde_json::to_string(&j)?)?;
        } else {
            writeln!(out, "{}", record.value)?;
        }
        Ok(())
    }
}

fn parse_poly(s: &str) -> Result<WordPoly> {
    s.parse()
}

fn cmd_zeta(parts: &[String], digits: u32, method: &str, json: bool, no_cache: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let comp: Composition = parts.join(" ").parse()?;
    let method: Method = method.parse()?;
    if comp.is_empty() {
        return Err(Error::Parse("empty composition".into()));
    }
    if !comp.is_convergent() {
        return Err(Error::Divergent(format!("{comp}; use `zeta-reg`")));
    }
    let point = method.point().map_or("1".to_string(), |p| p.to_string());
    let key = CacheKey { method: method.name().into(), input: comp.to_string(), point, digits };
    Evaluation { key, json, use_cache: !no_cache }.run(out, err, || {
        let req = ZetaRequest { input: ZetaInput::Composition(comp.clone()), method, digits };
        let r = compute(&req, &EngineConfig::default())?;
        Ok((r.value, r.terms_used))
    })
}

fn cmd_zeta_reg(input: &str, sign: RegSign, digits: u32, json: bool, no_cache: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let h = parse_poly(input)?;
    let (method, point) = match sign {
        RegSign::None => ("reg", "1/2"),
        RegSign::Plus => ("reg-plus", "rho"),
        RegSign::Minus => ("reg-minus", "rhobar"),
    };
    let key = CacheKey { method: method.into(), input: h.to_string(), point: point.into(), digits };
    Evaluation { key, json, use_cache: !no_cache }.run(out, err, || {
        let cfg = EngineConfig::default();
        let eps = crate::series::eps_for_digits(digits);
        let v = match sign {
            RegSign::None => zeta_reg_eps(&h, &eps, &cfg)?,
            RegSign::Plus => zeta_pm_eps(&h, &eps, PmSign::Plus, &cfg)?,
            RegSign::Minus => zeta_pm_eps(&h, &eps, PmSign::Minus, &cfg)?,
        };
        if !v.value.certifies(digits) {
            return Err(Error::PrecisionNotCertified { digits, radius: bound_of(&v.value) });
        }
        Ok((v.value, v.terms_used))
    })
}

fn cmd_transform(kind: TransformArg, input: &str, out: &mut dyn Write) -> Result<()> {
    let h = parse_poly(input)?;
    let image = match kind {
        TransformArg::Box => box_op(&h),
        TransformArg::Nabla => nabla(&h),
        TransformArg::Sigma => apply_transform(TransformKind::Sigma, &h),
        TransformArg::Tau => apply_transform(TransformKind::Tau, &h),
        TransformArg::Sigmaprime => apply_transform(TransformKind::SigmaPrime, &h),
    };
    writeln!(out, "{image}")?;
    Ok(())
}

fn cmd_regularize(input: &str, form: RegForm, out: &mut dyn Write) -> Result<()> {
    let h = parse_poly(input)?;
    match form {
        RegForm::B => {
            for (j, hj) in regularize_b(&h).iter().filter(|(_, p)| !p.is_zero()) {
                writeln!(out, "b^{j}: {hj}")?;
            }
        }
        RegForm::Ab => {
            for ((i, j), hij) in &regularize_ab(&h).coeffs {
                writeln!(out, "a^{i} b^{j}: {hij}")?;
            }
        }
    }
    Ok(())
}

fn cmd_verify(suite: Suite, max_weight: u32, digits: u32, seed: u64, trials: u64, out: &mut dyn Write) -> Result<bool> {
    let mut reports = Vec::new();
    if matches!(suite, Suite::Algebra | Suite::All) {
        reports.push(verify::algebra_suite(max_weight as usize));
    }
    if matches!(suite, Suite::Numeric | Suite::All) {
        reports.push(verify::numeric_suite(max_weight, digits));
    }
    if matches!(suite, Suite::Group | Suite::All) {
        reports.push(verify::group_suite(seed, trials, crate::group::DEFAULT_ORDER));
    }
    let all = reports.iter().all(|r| r.all_passed());
    for r in &reports {
        writeln!(out, "[{}]\n{r}", r.suite)?;
    }
    if reports.len() > 1 {
        writeln!(out, "{}", if all { "PASS all suites" } else { "FAIL" })?;
    }
    Ok(all)
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Zeta { parts, digits, method, json, no_cache } => {
            cmd_zeta(&parts, digits, &method, json, no_cache, out, err).map(|_| true)
        }
        Command::ZetaReg { input, sign, digits, json, no_cache } => {
            cmd_zeta_reg(&input, sign, digits, json, no_cache, out, err).map(|_| true)
        }
        Command::Transform { kind, input } => cmd_transform(kind, &input, out).map(|_| true),
        Command::Regularize { input, form } => cmd_regularize(&input, form, out).map(|_| true),
        Command::Verify { suite, max_weight, digits, seed, trials } => {
            cmd_verify(suite, max_weight, digits, seed, trials, out)
        }
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            let _ = match &e {
                Error::Divergent(c) => writeln!(err, "error: divergent composition {c}"),
                _ => writeln!(err, "error: {e}"),
            };
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["polyzeta"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn transform_examples() {
        assert_eq!(run_cli(&["transform", "box", "ab"]).1.trim(), "2*aa + 2*ab");
        assert_eq!(run_cli(&["transform", "nabla", "ab"]).1.trim(), "-3*aa");
        assert_eq!(run_cli(&["transform", "sigma", "abb"]).1.trim(), "aab");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_cli(&["zeta", "x", "--no-cache"]).0, EXIT_PARSE);
        assert_eq!(run_cli(&["zeta", "0", "2", "--no-cache"]).0, EXIT_PARSE);
        assert_eq!(run_cli(&["transform", "box", "abc"]).0, EXIT_PARSE);
        assert_eq!(run_cli(&["bogus"]).0, EXIT_PARSE);
        let (code, _, err) = run_cli(&["zeta", "1", "--digits", "10", "--no-cache"]);
        assert_eq!(code, EXIT_DIVERGENT);
        assert!(err.contains("divergent") && err.contains("zeta-reg"), "{err}");
        assert_eq!(run_cli(&["zeta", "2", "3", "--method", "cor21", "--no-cache"]).0, EXIT_PRECONDITION);
        assert_eq!(run_cli(&["zeta", "2", "--method", "thm7-rho", "--digits", "30", "--no-cache"]).0, EXIT_PRECONDITION);
        assert_eq!(run_cli(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn zeta_values() {
        let (code, out, _) = run_cli(&["zeta", "2", "--digits", "30", "--no-cache"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1.644934066848226436472415166646");
        let (_, out, _) = run_cli(&["zeta", "1", "3", "--digits", "20", "--no-cache"]);
        assert_eq!(out.trim(), "0.27058080842778454788");
        let (_, out, _) = run_cli(&["zeta-reg", "ba", "--digits", "10", "--no-cache"]);
        assert_eq!(out.trim(), "-1.6449340668");
        let (_, out, _) = run_cli(&["zeta-reg", "a", "--sign", "minus", "--digits", "5", "--no-cache"]);
        assert_eq!(out.trim(), "0.00000 - 3.14159i");
    }

    #[test]
    fn regularize_output() {
        let (code, out, _) = run_cli(&["regularize", "ba", "--form", "b"]);
        assert_eq!(code, 0);
        assert_eq!(out, "b^0: -ab\nb^1: a\n");
        let (_, out, _) = run_cli(&["regularize", "ba"]);
        assert_eq!(out, "a^0 b^0: -ab\na^1 b^1: 1\n");
    }
}
