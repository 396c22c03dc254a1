use std::fmt::Write as _;
use std::sync::Arc;

use drh_core::cohft::{hodge_oracle, table_oracle, trivial_oracle, DrOracle};
use drh_core::diffalg::parse_poly;
use drh_core::hierarchy::verify::{all_pairs, verify_unit_hamiltonian};
use drh_core::hierarchy::{
    g_total, hamiltonian, string_solution, verify_commutativity, verify_dilaton,
    verify_first_derivative, verify_genus0, verify_string, verify_string_solution, BuildMode,
    Check, Hierarchy, Report, Window,
};
use drh_core::kdv::chain;
use drh_core::poisson::{bracket, flows};
use drh_core::{Error, LocalFunctional, Truncation};
use serde_json::json;

use crate::args::{Cli, Command, Format, Suite, Target};
use crate::render;

pub struct Output {
    pub text: String,
    pub failed: bool,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::MissingOracleData { .. } => 3,
            Error::Schema(_)
            | Error::Validation { .. }
            | Error::Parse(_)
            | Error::Invalid(_)
            | Error::NonSymmetric
            | Error::Singular(_)
            | Error::DimensionMismatch { .. }
            | Error::Json(_) => 2,
            _ => 1,
        };
        let message = match &e {
            Error::MissingOracleData { keys } => {
                let mut s = format!("missing oracle data for {} key(s):", keys.len());
                for k in keys {
                    let _ = write!(s, "\n  {k}");
                }
                s
            }
            other => other.to_string(),
        };
        Failure { code, message }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Res<T> = std::result::Result<T, Failure>;
type Pair = ((usize, u32), (usize, u32));

fn load_oracle(sel: &str) -> Res<Arc<dyn DrOracle>> {
    match sel {
        "trivial" => Ok(Arc::new(trivial_oracle())),
        "hodge" => Ok(Arc::new(hodge_oracle())),
        other => match other.strip_prefix("table=") {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read table {path}: {e}")))?;
                Ok(Arc::new(table_oracle(&text)?))
            }
            None => Err(usage(format!(
                "unknown --cohft {other:?}; expected trivial, hodge or table=PATH"
            ))),
        },
    }
}

fn truncation(cli: &Cli) -> Truncation {
    let c = &cli.common;
    Truncation::new(c.genus_max, c.deg_max, c.eps_max.unwrap_or(c.genus_max))
}

fn color(oracle: &dyn DrOracle, alpha: usize) -> Res<usize> {
    let dim = oracle.spec().dim;
    if alpha == 0 || alpha > dim {
        return Err(usage(format!("--alpha {alpha} outside 1..={dim}")));
    }
    Ok(alpha - 1)
}

/// `"1,0:1,1;2,0:1,3"` with one-based colors.
fn parse_pairs(s: &str, dim: usize) -> Res<Vec<Pair>> {
    let one = |t: &str| -> Res<(usize, u32)> {
        let (a, d) = t
            .trim()
            .split_once(',')
            .ok_or_else(|| usage(format!("bad Hamiltonian label {t:?}; expected alpha,d")))?;
        let a: usize = a.trim().parse().map_err(|_| usage(format!("bad color in {t:?}")))?;
        let d: u32 = d.trim().parse().map_err(|_| usage(format!("bad d in {t:?}")))?;
        if a == 0 || a > dim {
            return Err(usage(format!("color {a} outside 1..={dim}")));
        }
        Ok((a - 1, d))
    };
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (l, r) = p
                .split_once(':')
                .ok_or_else(|| usage(format!("bad pair {p:?}; expected a,d:b,e")))?;
            Ok((one(l)?, one(r)?))
        })
        .collect()
}

fn checked_common(cli: &Cli) -> Res<()> {
    if cli.common.deg_max < 2 {
        return Err(usage("--deg-max must be at least 2"));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Res<Output> {
    checked_common(cli)?;
    let oracle = load_oracle(&cli.common.cohft)?;
    let trunc = truncation(cli);
    let fmt = cli.common.format;
    let latex = fmt == Format::Latex;
    let ok = |text: String| Ok(Output { text, failed: false });
    match &cli.command {
        Command::Hamiltonian(Target { alpha, d }) => {
            let a = color(oracle.as_ref(), *alpha)?;
            let h = hamiltonian(oracle.as_ref(), a, *d, &trunc)?;
            match fmt {
                Format::Json => ok(json_line(json!({
                    "alpha": alpha, "d": d, "truncation": trunc,
                    "density": render::poly_json(h.rep()),
                }))),
                _ => ok(format!("{}\n", render::functional_text(h.rep(), latex))),
            }
        }
        Command::Flow(Target { alpha, d }) => {
            let a = color(oracle.as_ref(), *alpha)?;
            let h = hamiltonian(oracle.as_ref(), a, *d, &trunc)?;
            let op = drh_core::HamOperator::eta_dx(&oracle.spec().eta_inverse())?;
            let rhs = flows(&h, &op, &trunc)?;
            match fmt {
                Format::Json => ok(json_line(json!({
                    "alpha": alpha, "d": d, "truncation": trunc,
                    "rhs": rhs.iter().map(render::poly_json).collect::<Vec<_>>(),
                }))),
                _ => {
                    let dim = oracle.spec().dim;
                    let mut s = String::new();
                    for (c, r) in rhs.iter().enumerate() {
                        let _ = writeln!(
                            s,
                            "{} = {}",
                            render::flow_lhs(c, dim, a, *d, latex),
                            render::flow_rhs(r, latex)
                        );
                    }
                    ok(s)
                }
            }
        }
        Command::Gbar => {
            let g = g_total(oracle.as_ref(), &trunc)?;
            match fmt {
                Format::Json => ok(json_line(json!({
                    "truncation": trunc, "density": render::poly_json(g.rep()),
                }))),
                _ => ok(format!("{}\n", render::functional_text(g.rep(), latex))),
            }
        }
        Command::Verify { suite, d_max, pairs, order } => {
            let h = Hierarchy::build(oracle.clone(), trunc, *d_max, BuildMode::Windowed)?;
            let pairs = match pairs {
                Some(p) => parse_pairs(p, h.dim())?,
                None => all_pairs(&h),
            };
            let report = run_suite(&h, *suite, &pairs, *order)?;
            report_output(report, fmt)
        }
        Command::Kdv { d_max } => {
            if oracle.spec().dim != 1 {
                return Err(usage("the KdV chain is one-dimensional"));
            }
            let hs = chain(*d_max)?;
            match fmt {
                Format::Json => ok(json_line(json!({
                    "chain": hs.iter().enumerate()
                        .map(|(d, h)| json!({"d": d, "density": render::poly_json(h.rep())}))
                        .collect::<Vec<_>>(),
                }))),
                _ => {
                    let mut s = String::new();
                    for (d, h) in hs.iter().enumerate() {
                        let _ = writeln!(s, "h_{d} = {}", render::functional_text(h.rep(), latex));
                    }
                    ok(s)
                }
            }
        }
        Command::Bracket { pairs, f, g } => {
            let dim = oracle.spec().dim;
            let op = drh_core::HamOperator::eta_dx(&oracle.spec().eta_inverse())?;
            let (lhs, rhs, window) = match (pairs, f, g) {
                (Some(p), None, None) => {
                    let parsed = parse_pairs(p, dim)?;
                    let [(a, b)] = parsed.as_slice() else {
                        return Err(usage("bracket takes exactly one pair"));
                    };
                    let d_max = a.1.max(b.1);
                    let h = Hierarchy::build(oracle.clone(), trunc, d_max, BuildMode::Windowed)?;
                    let get = |k: &(usize, u32)| {
                        h.hams.get(k).ok_or_else(|| Failure::from(Error::MissingOracleData {
                            keys: h.skipped.get(k).cloned().unwrap_or_default(),
                        }))
                    };
                    let (ba, bb) = (get(a)?, get(b)?);
                    let window = Window {
                        genus_max: ba.genus_complete.min(bb.genus_complete),
                        deg_max: trunc.deg_max - 1,
                    };
                    (ba.functional.clone(), bb.functional.clone(), window)
                }
                (None, Some(f), Some(g)) => {
                    let f = LocalFunctional::new(parse_poly(f, dim)?);
                    let g = LocalFunctional::new(parse_poly(g, dim)?);
                    (f, g, Window { genus_max: trunc.genus_max, deg_max: trunc.deg_max })
                }
                _ => return Err(usage("bracket needs --pairs or both --f and --g")),
            };
            let t = Truncation::new(window.genus_max, window.deg_max, trunc.eps_max);
            let br = bracket(&lhs, &rhs, &op, &t)?.restrict(window.genus_max, window.deg_max);
            let nf = br.normal_form();
            match fmt {
                Format::Json => ok(json_line(json!({
                    "window": window, "zero": nf.is_zero(), "density": render::poly_json(&nf),
                }))),
                _ => ok(format!(
                    "{}\n",
                    render::functional_text(&nf, latex)
                )),
            }
        }
        Command::StringSolution { order, d_max } => {
            let h = Hierarchy::build(oracle.clone(), trunc, *d_max, BuildMode::Windowed)?;
            let sol = string_solution(&h, *order, None)?;
            let report = sorted(verify_string_solution(&sol)?);
            let failed = !report.all_passed();
            let text = match fmt {
                Format::Json => json_line(json!({
                    "solution": render::taylor_json(&sol),
                    "report": report,
                })),
                _ => format!("{}{}", render::taylor_text(&sol), report.to_plain()),
            };
            Ok(Output { text, failed })
        }
    }
}

fn json_line(v: serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(&v).expect("json value serializes"))
}

/// Stable order by check name.
fn sorted(mut r: Report) -> Report {
    r.checks.sort_by(|a: &Check, b: &Check| a.name.cmp(&b.name));
    r
}

fn run_suite(
    h: &Hierarchy,
    suite: Suite,
    pairs: &[Pair],
    order: u32,
) -> Res<Report> {
    let mut r = Report::default();
    let all = suite == Suite::All;
    if all || suite == Suite::Unit {
        r.extend(verify_unit_hamiltonian(h));
    }
    if all || suite == Suite::String {
        r.extend(verify_string(h));
    }
    if all || suite == Suite::FirstDerivative {
        r.extend(verify_first_derivative(h));
    }
    if all || suite == Suite::Dilaton {
        r.extend(verify_dilaton(h));
    }
    if all || suite == Suite::Genus0 {
        r.extend(verify_genus0(h)?);
    }
    if all || suite == Suite::Commutativity {
        r.extend(verify_commutativity(h, pairs)?);
    }
    if all || suite == Suite::StringSolution {
        let sol = string_solution(h, order, None)?;
        r.extend(verify_string_solution(&sol)?);
    }
    Ok(sorted(r))
}

fn report_output(report: Report, fmt: Format) -> Res<Output> {
    let failed = !report.all_passed();
    let mut text = match fmt {
        Format::Json => format!("{}\n", report.to_json()),
        _ => report.to_plain(),
    };
    if fmt != Format::Json {
        let passed = report.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(text, "{passed}/{} checks passed", report.checks.len());
    }
    if failed {
        for c in report.failures() {
            eprintln!(
                "FAIL {}: {}",
                c.name,
                c.witness.as_deref().unwrap_or("no witness")
            );
        }
    }
    Ok(Output { text, failed })
}
