//! The `bergman` command-line front end.
//!
//! [`run`] parses arguments, dispatches to `bergman-core` and writes a
//! [`report::ReportDocument`] as text, JSON or CSV. Exit codes: 0 success,
//! 1 a suite criterion failed, 2 usage/parse/io error, 3 accuracy not
//! reached, 4 domain error (including a pair whose σ is not a weight).

pub mod args;
pub mod render;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::time::Instant;

use bergman_core::classes::classify_weight;
use bergman_core::conditions::{ap_profile, default_pair_radii, dp_sequence, mp_profile};
use bergman_core::exp_classifier::{classify, corroborate, ExpWeightParams};
use bergman_core::grid::{PolarGrid, PolarGridFunction};
use bergman_core::kernel::KernelSeries;
use bergman_core::moments::log_moment;
use bergman_core::projection::{
    maximal_project_grid, operator_norm_lower_bound, project_grid, project_monomial_radial, AnalyticPolynomial,
    MonomialRadial,
};
use bergman_core::suite::{all_criteria, run_suite, CRITERIA};
use bergman_core::weight::parse_keys;
use bergman_core::{Config, Error, ExecMode, RadialWeight};
use clap::Parser;
use num_complex::Complex64;

use args::{Cli, Command, ConditionArgs, ConditionKind, ProjectCommand};
use report::{ExtremalRow, GridRow, KernelRow, MomentRow, ReportDocument, Results};

pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ACCURACY: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) => EXIT_USAGE,
        Error::Accuracy { .. } => EXIT_ACCURACY,
        Error::Domain(_) | Error::NotAWeight(_) => EXIT_DOMAIN,
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let command: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();

    let mut cfg = Config::default();
    if let Some(t) = cli.rel_tol {
        cfg.quadrature.rel_tol = t;
    }
    if cli.sequential {
        cfg.exec = ExecMode::Sequential;
    }

    let start = Instant::now();
    let results = match execute(&cli.command, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let doc = ReportDocument::new(command, cfg, start.elapsed().as_secs_f64(), results);

    let text = match render::render(&doc, cli.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_USAGE;
    }

    match &doc.results {
        Results::Suite(s) if !s.passed() => EXIT_SUITE_FAILED,
        _ => 0,
    }
}

fn weight(flag: &str, spec: &str) -> Result<RadialWeight, Error> {
    RadialWeight::parse(spec).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("--{flag} '{spec}': {m}")),
        Error::Domain(m) => Error::Domain(format!("--{flag} '{spec}': {m}")),
        other => other,
    })
}

fn exp_tuple(flag: &str, spec: &str) -> Result<(f64, f64, f64), Error> {
    let kv = parse_keys(spec, &["alpha", "beta", "l"]).map_err(|e| Error::Parse(format!("--{flag} '{spec}': {e}")))?;
    Ok((kv[0], kv[1], kv[2]))
}

fn execute(command: &Command, cfg: &Config) -> Result<Results, Error> {
    match command {
        Command::Moments { weight: spec, x } => {
            let w = weight("weight", spec)?;
            let rows = x
                .iter()
                .map(|&x| {
                    let v = log_moment(&w, x, cfg)?;
                    let plain = v.plain();
                    Ok(MomentRow {
                        x,
                        ln: v.ln,
                        value: plain.value,
                        rel_err: v.rel_err,
                        backend: v.backend,
                        underflow: plain.underflow,
                    })
                })
                .collect::<Result<_, Error>>()?;
            Ok(Results::Moments {
                weight: w.to_string(),
                rows,
            })
        }
        Command::ClassifyWeight { weight: spec } => {
            let w = weight("weight", spec)?;
            Ok(Results::WeightClasses(Box::new(classify_weight(&w, cfg)?)))
        }
        Command::Condition(args) => condition(args, cfg),
        Command::Kernel {
            weight: spec,
            z,
            zeta,
            k,
        } => {
            let w = weight("weight", spec)?;
            let series = KernelSeries::new(w.clone(), cfg);
            let rows = zeta
                .iter()
                .map(|&zeta| {
                    let v = series.derivative(zeta, *z, *k)?;
                    Ok(KernelRow {
                        zeta,
                        value: v.value,
                        err_bound: v.err_bound,
                        terms: v.terms,
                    })
                })
                .collect::<Result<_, Error>>()?;
            Ok(Results::Kernel {
                weight: w.to_string(),
                z: *z,
                k: *k,
                rows,
            })
        }
        Command::Project(p) => project(p, cfg),
        Command::ExpClassify {
            p,
            nu,
            omega,
            corroborate: n,
        } => {
            let params = ExpWeightParams::new(*p, exp_tuple("nu", nu)?, exp_tuple("omega", omega)?)?;
            let report = match n {
                Some(n) => corroborate(&params, *n, cfg)?,
                None => classify(&params)?,
            };
            Ok(Results::ExpClassification(Box::new(report)))
        }
        Command::Suite { criteria } => {
            let ids = if criteria.is_empty() { all_criteria() } else { criteria.clone() };
            if let Some(bad) = ids.iter().find(|&&id| id == 0 || id > CRITERIA.len()) {
                return Err(Error::Parse(format!("--criteria: no criterion {bad}; the suite has 1–{}", CRITERIA.len())));
            }
            Ok(Results::Suite(run_suite(&ids, cfg)))
        }
    }
}

fn condition(args: &ConditionArgs, cfg: &Config) -> Result<Results, Error> {
    let omega = weight("omega", &args.omega)?;
    let nu = weight("nu", &args.nu)?;
    let radii = if args.radii.is_empty() {
        default_pair_radii(&[&omega, &nu], cfg)
    } else {
        args.radii.clone()
    };
    let profile = match args.kind {
        ConditionKind::Dp => dp_sequence(&omega, &nu, args.p, args.n, cfg)?,
        ConditionKind::Ap => ap_profile(&omega, &nu, args.p, &radii, cfg)?,
        ConditionKind::Mp => mp_profile(&omega, &nu, args.p, &radii, cfg)?,
    };
    Ok(Results::Condition {
        omega: omega.to_string(),
        nu: nu.to_string(),
        profile,
    })
}

fn project(cmd: &ProjectCommand, cfg: &Config) -> Result<Results, Error> {
    match cmd {
        ProjectCommand::Monomial { omega, phi, n } => {
            let omega = weight("omega", omega)?;
            let phi = match phi {
                Some(s) => weight("phi", s)?,
                None => RadialWeight::unit(),
            };
            let ns: Vec<usize> = (0..=*n).collect();
            let rows = cfg
                .exec
                .map(&ns, |&n| project_monomial_radial(&omega, &MonomialRadial::new(n, phi.clone()), cfg))
                .into_iter()
                .collect::<Result<_, Error>>()?;
            Ok(Results::MonomialProjection {
                omega: omega.to_string(),
                phi: phi.to_string(),
                rows,
            })
        }
        ProjectCommand::Extremal { omega, nu, p, n } => {
            let omega = weight("omega", omega)?;
            let nu = weight("nu", nu)?;
            let bound = operator_norm_lower_bound(&omega, &nu, *p, *n, cfg)?;
            let rows = bound
                .log_ratios
                .iter()
                .enumerate()
                .map(|(n, &l)| {
                    let finite = l.is_finite();
                    ExtremalRow {
                        n,
                        ratio: finite.then(|| l.exp()),
                        ln_ratio: finite.then_some(l),
                    }
                })
                .collect();
            Ok(Results::ExtremalBound {
                omega: omega.to_string(),
                nu: nu.to_string(),
                p: *p,
                infinite: bound.infinite,
                rows,
            })
        }
        ProjectCommand::Grid {
            omega,
            poly,
            at,
            maximal,
        } => {
            let omega = weight("omega", omega)?;
            let poly = AnalyticPolynomial::new(poly.clone());
            let grid = PolarGrid::for_weight(&omega, cfg)?;
            let f = PolarGridFunction::sample(&grid, |z| poly.eval(z));
            let values: Vec<(Complex64, Complex64, f64)> = if *maximal {
                maximal_project_grid(&omega, &f, at, cfg)?
                    .into_iter()
                    .map(|g| (g.z, Complex64::new(g.value, 0.0), g.err))
                    .collect()
            } else {
                project_grid(&omega, &f, at, cfg)?
                    .into_iter()
                    .map(|g| (g.z, g.value, g.err))
                    .collect()
            };
            Ok(Results::GridProjection {
                omega: omega.to_string(),
                maximal: *maximal,
                rings: grid.rings().len(),
                nodes: grid.len(),
                rows: values
                    .into_iter()
                    .map(|(z, value, err)| GridRow {
                        z,
                        value,
                        input: poly.eval(z),
                        err,
                    })
                    .collect(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::Io("x".into())), EXIT_USAGE);
        let acc = Error::Accuracy {
            message: "x".into(),
            ln_estimate: 0.0,
            rel_err: 1.0,
        };
        assert_eq!(exit_code(&acc), EXIT_ACCURACY);
        assert_eq!(exit_code(&Error::Domain("x".into())), EXIT_DOMAIN);
        assert_eq!(exit_code(&Error::NotAWeight("x".into())), EXIT_DOMAIN);
    }

    #[test]
    fn help_and_version_exit_cleanly() {
        assert_eq!(run(["bergman", "--version"]), 0);
        assert_eq!(run(["bergman", "--help"]), 0);
        assert_eq!(run(["bergman"]), EXIT_USAGE);
    }
}
