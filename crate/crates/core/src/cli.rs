//! Job description and dispatch for the `fresco` command-line tool.
//!
//! Argument parsing lives in the binary; this module turns a [`JobSpec`]
//! into a deterministic text report and an exit status.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::ahat::ChangeOfVariable;
use crate::chgvar::{push_presentation, quasi_invariance_probe, Param};
use crate::classify3::{alpha2, gamma3, normal_form_rank3, pi_ij};
use crate::error::{FrescoError, Result};
use crate::fresco::{
    bernstein_polynomial, delta, dual_twisted, find_generator, is_isomorphic, jh_factorize, jh_factorize_with, realize,
    reduce_to_versal, semisimple_part, ss_depth, FrescoPresentation, IsoOutcome,
};
use crate::series::{fmt_scalar, parse_scalar, Scalar, TruncSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Bernstein,
    Jh,
    Push,
    Ssp,
    Delta,
    Dual,
    Classify3,
    Gamma,
    Pi,
    Alpha2,
    Versal,
    Iso,
    Probe,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bernstein => "bernstein",
            Command::Jh => "jh",
            Command::Push => "push",
            Command::Ssp => "ssp",
            Command::Delta => "delta",
            Command::Dual => "dual",
            Command::Classify3 => "classify3",
            Command::Gamma => "gamma",
            Command::Pi => "pi",
            Command::Alpha2 => "alpha2",
            Command::Versal => "versal",
            Command::Iso => "iso",
            Command::Probe => "probe",
        }
    }

    /// Number of presentation files the command reads.
    pub fn arity(self) -> usize {
        if self == Command::Iso {
            2
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    /// Raises the working order; never lowers it.
    pub order: Option<usize>,
    pub minimal: bool,
    pub delta: Option<String>,
    pub theta: Option<PathBuf>,
    pub pair: Option<(usize, usize)>,
    pub param: Option<String>,
    pub weight: Option<i64>,
}

impl JobSpec {
    pub fn new(command: Command, inputs: Vec<PathBuf>) -> Self {
        JobSpec {
            command,
            inputs,
            order: None,
            minimal: false,
            delta: None,
            theta: None,
            pair: None,
            param: None,
            weight: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(e: &FrescoError) -> Self {
        Report {
            code: if e.is_math() { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parses a change of variable file: one line `theta e:c …`, `#` comments.
pub fn parse_theta(text: &str) -> Result<ChangeOfVariable> {
    let line = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .ok_or_else(|| FrescoError::Parse("empty change of variable".into()))?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some("theta") {
        return Err(FrescoError::Parse("line must start with `theta`".into()));
    }
    let toks: Vec<&str> = toks.collect();
    let degree = toks
        .iter()
        .filter_map(|t| t.split_once(':').and_then(|(e, _)| e.trim().parse::<usize>().ok()))
        .max()
        .unwrap_or(1)
        .max(1);
    let s = TruncSeries::parse_sparse(toks.iter().copied(), degree)?;
    ChangeOfVariable::new(s)
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| FrescoError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_presentation(path: &PathBuf, order: Option<usize>) -> Result<FrescoPresentation> {
    let p = FrescoPresentation::parse(&read(path)?)?;
    Ok(match order {
        Some(n) if n > p.order() => p.padded(n),
        _ => p,
    })
}

fn load_theta(spec: &JobSpec) -> Result<ChangeOfVariable> {
    let path = spec
        .theta
        .as_ref()
        .ok_or_else(|| FrescoError::Parse(format!("`{}` needs --theta FILE", spec.command.name())))?;
    parse_theta(&read(path)?)
}

fn parse_param(spec: &JobSpec) -> Result<Param> {
    match spec.param.as_deref() {
        Some("gamma") => Ok(Param::Gamma),
        Some("alpha2") => Ok(Param::Alpha2),
        Some("pi") => {
            let (i, j) = spec.pair.unwrap_or((1, 2));
            Ok(Param::Pi(i, j))
        }
        Some(other) => Err(FrescoError::Parse(format!(
            "unknown parameter {other:?}; expected gamma, alpha2 or pi"
        ))),
        None => Err(FrescoError::Parse("`probe` needs --param NAME".into())),
    }
}

/// Runs one job; never panics on bad input.
pub fn run(spec: &JobSpec) -> Report {
    match dispatch(spec) {
        Ok(out) => Report::ok(out),
        Err(e) => Report::fail(&e),
    }
}

fn dispatch(spec: &JobSpec) -> Result<String> {
    if spec.inputs.len() != spec.command.arity() {
        return Err(FrescoError::Parse(format!(
            "`{}` takes {} presentation file(s), got {}",
            spec.command.name(),
            spec.command.arity(),
            spec.inputs.len()
        )));
    }
    let pres = load_presentation(&spec.inputs[0], spec.order)?;
    let k = pres.rank();
    let n = pres.order();
    // Order at which modules are realized so that results hold at order n.
    let work = n.max(pres.default_order()) + k * k + 2;
    let mut out = String::new();
    match spec.command {
        Command::Bernstein => {
            let fr = realize(&pres.padded(work));
            writeln!(out, "{}", bernstein_polynomial(&fr, spec.minimal)?).unwrap();
        }
        Command::Jh => {
            let fr = realize(&pres.padded(work));
            out.push_str(&jh_factorize_with(&fr, pres.lambdas())?.truncate(n).render());
        }
        Command::Push => {
            let cv = load_theta(spec)?;
            out.push_str(&push_presentation(&pres, &cv)?.render());
        }
        Command::Ssp => {
            let fr = realize(&pres.padded(work));
            let sub = semisimple_part(&fr)?;
            writeln!(out, "rank {}", sub.rank()).unwrap();
            for (i, g) in sub.generators.iter().enumerate() {
                let coords: Vec<String> = g.iter().map(|x| x.truncate(n).to_sparse()).collect();
                writeln!(out, "v{} = [{}]", i + 1, coords.join(" | ")).unwrap();
            }
        }
        Command::Delta => {
            let fr = realize(&pres.padded(work));
            writeln!(out, "δ = {}", delta(&fr)?).unwrap();
            writeln!(out, "d = {}", ss_depth(&fr)?).unwrap();
        }
        Command::Dual => {
            let d: Scalar = match &spec.delta {
                Some(s) => parse_scalar(s)?,
                None => return Err(FrescoError::Parse("`dual` needs --delta VALUE".into())),
            };
            let fr = realize(&pres.padded(work));
            let dual = find_generator(&dual_twisted(&fr.module, &d))?;
            out.push_str(&jh_factorize(&dual)?.truncate(n).render());
        }
        Command::Classify3 => {
            out.push_str(&normal_form_rank3(&pres)?.render());
        }
        Command::Gamma => {
            writeln!(out, "γ = {}", fmt_scalar(&gamma3(&pres)?)).unwrap();
        }
        Command::Pi => {
            let (i, j) = spec
                .pair
                .ok_or_else(|| FrescoError::Parse("`pi` needs --i and --j".into()))?;
            writeln!(out, "π{i},{j} = {}", fmt_scalar(&pi_ij(&pres, i, j)?)).unwrap();
        }
        Command::Alpha2 => {
            writeln!(out, "α = {}", fmt_scalar(&alpha2(&pres)?)).unwrap();
        }
        Command::Versal => {
            out.push_str(&reduce_to_versal(&pres)?.render());
        }
        Command::Iso => {
            let other = load_presentation(&spec.inputs[1], spec.order)?;
            match is_isomorphic(&pres, &other)? {
                IsoOutcome::Isomorphic { order, .. } => writeln!(out, "isomorphic (order {order})").unwrap(),
                IsoOutcome::NotIsomorphic { reason } => writeln!(out, "not isomorphic: {reason}").unwrap(),
                IsoOutcome::Inconclusive { order } => {
                    return Err(FrescoError::OrderTooSmall {
                        needed: order + 1,
                        have: order,
                        what: "deciding isomorphism".into(),
                    })
                }
            }
        }
        Command::Probe => {
            let param = parse_param(spec)?;
            let cv = load_theta(spec)?;
            let report = quasi_invariance_probe(&param, &pres, &cv)?;
            out.push_str(&report.render(&param.name()));
            if let Some(w) = spec.weight {
                let chi = cv.chi();
                let expect = if w >= 0 {
                    num_traits::pow(chi, w as usize)
                } else {
                    num_traits::pow(chi.recip(), (-w) as usize)
                };
                let ok = report.ratio.as_ref() == Some(&expect)
                    || (report.before == report.after && expect == Scalar::from_integer(1.into()));
                writeln!(out, "weight {w} {}", if ok { "matches" } else { "does not match" }).unwrap();
            }
        }
    }
    Ok(out)
}
