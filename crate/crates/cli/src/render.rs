//! Text, JSON and CSV renderings of a report. CSV column orders are fixed per
//! result kind and listed in the README.

use std::fmt::Write as _;

use bergman_core::classes::ClassMembershipReport;
use num_complex::Complex64;
use serde::Serialize;

use crate::args::Format;
use crate::report::{ReportDocument, Results};

pub fn render(doc: &ReportDocument, format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(doc)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| e.to_string()),
        Format::Csv => csv(&doc.results).map_err(|e| e.to_string()),
        Format::Text => Ok(text(doc)),
    }
}

/// The snake_case name serde gives a unit variant.
fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::from("?"),
    }
}

/// Shortest representation that reads back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Fixed notation for moderate magnitudes, scientific otherwise.
fn short(x: f64) -> String {
    if x == 0.0 || (1e-3..1e5).contains(&x.abs()) {
        format!("{x:.4}")
    } else {
        format!("{x:.4e}")
    }
}

fn cx(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn csv(results: &Results) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match results {
        Results::Moments { rows, .. } => {
            w.write_record(["x", "ln", "value", "rel_err", "backend", "underflow"])?;
            for r in rows {
                w.write_record([
                    num(r.x),
                    num(r.ln),
                    num(r.value),
                    num(r.rel_err),
                    tag(&r.backend),
                    r.underflow.to_string(),
                ])?;
            }
        }
        Results::WeightClasses(s) => {
            w.write_record(["class", "verdict", "constant", "k", "eta", "tail_power", "agrees_with_tail_test"])?;
            for rep in [&s.dhat, &s.dhat_moments, &s.dcheck, &s.m] {
                w.write_record([
                    tag(&rep.class_name),
                    tag(&rep.verdict),
                    opt(rep.constant),
                    opt(rep.k),
                    opt(rep.eta),
                    opt(rep.tail_power),
                    rep.agrees_with_tail_test.map(|b| b.to_string()).unwrap_or_default(),
                ])?;
            }
            w.write_record(["d".into(), tag(&s.d), String::new(), String::new(), String::new(), String::new(), String::new()])?;
        }
        Results::Condition { profile, .. } => {
            w.write_record(["criterion", "p", "axis", "value", "ln_value"])?;
            for (a, l) in profile.axis.iter().zip(&profile.log_values) {
                w.write_record([
                    tag(&profile.criterion),
                    num(profile.p),
                    num(*a),
                    num(l.exp()),
                    num(*l),
                ])?;
            }
        }
        Results::Kernel { rows, .. } => {
            w.write_record(["zeta_re", "zeta_im", "value_re", "value_im", "err_bound", "terms"])?;
            for r in rows {
                w.write_record([
                    num(r.zeta.re),
                    num(r.zeta.im),
                    num(r.value.re),
                    num(r.value.im),
                    num(r.err_bound),
                    r.terms.to_string(),
                ])?;
            }
        }
        Results::MonomialProjection { rows, .. } => {
            w.write_record(["n", "coefficient", "ln_coefficient", "infinite"])?;
            for r in rows {
                w.write_record([
                    r.n.to_string(),
                    num(r.coefficient),
                    num(r.ln_coefficient),
                    r.infinite.to_string(),
                ])?;
            }
        }
        Results::ExtremalBound { rows, .. } => {
            w.write_record(["n", "ratio", "ln_ratio"])?;
            for r in rows {
                w.write_record([r.n.to_string(), opt(r.ratio), opt(r.ln_ratio)])?;
            }
        }
        Results::GridProjection { rows, .. } => {
            w.write_record(["z_re", "z_im", "value_re", "value_im", "input_re", "input_im", "err"])?;
            for r in rows {
                w.write_record([
                    num(r.z.re),
                    num(r.z.im),
                    num(r.value.re),
                    num(r.value.im),
                    num(r.input.re),
                    num(r.input.im),
                    num(r.err),
                ])?;
            }
        }
        Results::ExpClassification(r) => {
            w.write_record([
                "p", "alpha", "beta", "l", "alpha_t", "beta_t", "l_t", "verdict", "branch", "b_nu", "b_omega",
                "bounded_alpha_t", "f_value", "trend", "consistent",
            ])?;
            let c = r.corroboration.as_ref();
            w.write_record([
                num(r.params.p),
                num(r.params.alpha),
                num(r.params.beta),
                num(r.params.l),
                num(r.params.alpha_t),
                num(r.params.beta_t),
                num(r.params.l_t),
                tag(&r.verdict),
                tag(&r.branch),
                num(r.b_nu),
                num(r.b_omega),
                opt(r.bounded_alpha_t),
                opt(r.f_value),
                c.and_then(|c| c.trend).map(|t| tag(&t)).unwrap_or_default(),
                c.map(|c| c.consistent.to_string()).unwrap_or_default(),
            ])?;
        }
        Results::Suite(s) => {
            w.write_record(["id", "passed", "title", "summary"])?;
            for o in &s.outcomes {
                w.write_record([o.id.to_string(), o.passed.to_string(), o.title.clone(), o.summary.clone()])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

fn class_line(out: &mut String, label: &str, rep: &ClassMembershipReport) {
    let mut extra = Vec::new();
    if let Some(c) = rep.constant {
        extra.push(format!("constant {}", short(c)));
    }
    if let Some(k) = rep.k {
        extra.push(format!("K {k}"));
    }
    if let Some(e) = rep.eta {
        extra.push(format!("η {}", short(e)));
    }
    if let Some(t) = rep.tail_power {
        extra.push(format!("tail power {}", short(t)));
    }
    let _ = writeln!(out, "  {label:<26} {:<18} {}", tag(&rep.verdict), extra.join(", "));
}

fn text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# bergman {} · {}", doc.version, doc.command.join(" "));
    match &doc.results {
        Results::Moments { weight, rows } => {
            let _ = writeln!(out, "moments of {weight}");
            let _ = writeln!(out, "{:>12}  {:>24}  {:>24}  {:>9}  backend", "x", "ω_x", "ln ω_x", "rel_err");
            for r in rows {
                let value = if r.underflow {
                    format!("exp({:.6})", r.ln)
                } else {
                    format!("{:.15e}", r.value)
                };
                let _ = writeln!(
                    out,
                    "{:>12}  {:>24}  {:>24.15e}  {:>9.1e}  {}",
                    r.x,
                    value,
                    r.ln,
                    r.rel_err,
                    tag(&r.backend)
                );
            }
        }
        Results::WeightClasses(s) => {
            let _ = writeln!(out, "class verdicts for {}", s.weight);
            class_line(&mut out, "upper doubling (tails)", &s.dhat);
            class_line(&mut out, "upper doubling (moments)", &s.dhat_moments);
            class_line(&mut out, "lower doubling", &s.dcheck);
            class_line(&mut out, "moment decay", &s.m);
            let _ = writeln!(out, "  {:<26} {}", "doubling", tag(&s.d));
        }
        Results::Condition { omega, nu, profile } => {
            let name = match tag(&profile.criterion).as_str() {
                "dp" => "D_p",
                "ap" => "A_p",
                _ => "M_p",
            };
            let axis = if name == "D_p" { "n" } else { "r" };
            let _ = writeln!(out, "{name} for ω = {omega}, ν = {nu}, p = {}", profile.p);
            if profile.sigma_not_weight {
                let _ = writeln!(out, "σ is not a weight: the condition is infinite");
            }
            if !profile.log_values.is_empty() {
                let _ = writeln!(out, "{axis:>20}  {:>24}", "value");
                for (a, l) in profile.axis.iter().zip(&profile.log_values) {
                    let _ = writeln!(out, "{a:>20}  {:>24.16e}", l.exp());
                }
                let _ = writeln!(out, "sup {:.16e}", profile.log_sup.exp());
            }
            let _ = write!(out, "trend {} (statistic {:.3e})", tag(&profile.trend.trend), profile.trend.statistic);
            if let Some(reason) = &profile.trend.reason {
                let _ = write!(out, ": {reason}");
            }
            out.push('\n');
            for d in &profile.diagnostics {
                let _ = writeln!(out, "note: {d}");
            }
        }
        Results::Kernel { weight, z, k, rows } => {
            let what = if *k == 0 { "B_ζ(z)".to_string() } else { format!("∂^{k} B_ζ(z)") };
            let _ = writeln!(out, "{what} for {weight} at z = {}", cx(*z));
            for r in rows {
                let _ = writeln!(
                    out,
                    "  ζ = {:<20} {:<48} ± {:.1e} ({} terms)",
                    cx(r.zeta),
                    cx(r.value),
                    r.err_bound,
                    r.terms
                );
            }
        }
        Results::MonomialProjection { omega, phi, rows } => {
            let _ = writeln!(out, "P_ω(ζⁿφ) = c·zⁿ for ω = {omega}, φ = {phi}");
            for r in rows {
                if r.infinite {
                    let _ = writeln!(out, "{:>6}  infinite", r.n);
                } else {
                    let _ = writeln!(out, "{:>6}  {:.16e}", r.n, r.coefficient);
                }
            }
        }
        Results::ExtremalBound {
            omega,
            nu,
            p,
            infinite,
            rows,
        } => {
            let _ = writeln!(out, "‖P_ω f_n‖/‖f_n‖ in L^p_ν for ω = {omega}, ν = {nu}, p = {p}");
            for r in rows {
                match r.ratio {
                    Some(v) => {
                        let _ = writeln!(out, "{:>6}  {v:.16e}", r.n);
                    }
                    None => {
                        let _ = writeln!(out, "{:>6}  (test function not in L^p_ν)", r.n);
                    }
                }
            }
            if *infinite {
                let _ = writeln!(out, "σ is not a weight: some test functions have infinite norm");
            }
        }
        Results::GridProjection {
            omega,
            maximal,
            rings,
            nodes,
            rows,
        } => {
            let op = if *maximal { "P⁺_ω" } else { "P_ω" };
            let _ = writeln!(out, "{op} f for ω = {omega} on {rings} rings, {nodes} nodes");
            for r in rows {
                let _ = writeln!(
                    out,
                    "  z = {:<20} {:<48} ± {:.1e}   f(z) = {}",
                    cx(r.z),
                    cx(r.value),
                    r.err,
                    cx(r.input)
                );
            }
        }
        Results::ExpClassification(r) => {
            let pr = &r.params;
            let _ = writeln!(
                out,
                "ν = exp(−{}/(1−r^{})^{}), ω = exp(−{}/(1−r^{})^{}), p = {}",
                pr.alpha, pr.l, pr.beta, pr.alpha_t, pr.l_t, pr.beta_t, pr.p
            );
            let _ = writeln!(out, "verdict {} ({})", tag(&r.verdict), tag(&r.branch));
            let _ = writeln!(out, "B(ν) = {}, B(ω) = {}", r.b_nu, r.b_omega);
            if let Some(a) = r.bounded_alpha_t {
                let _ = writeln!(out, "bounded exactly when α̃ = {a}");
            }
            if let Some(f) = r.f_value {
                let _ = writeln!(out, "f(α̃) = {f:.6e}");
            }
            if let Some(wn) = &r.warning {
                let _ = writeln!(out, "warning: {wn}");
            }
            if let Some(c) = &r.corroboration {
                let trend = c.trend.map(|t| tag(&t)).unwrap_or_else(|| "unavailable".into());
                let _ = writeln!(
                    out,
                    "D_p trend to n = {}: {trend}, {}",
                    c.n_max,
                    if c.consistent { "consistent" } else { "INCONSISTENT" }
                );
                if let Some(note) = &c.note {
                    let _ = writeln!(out, "note: {note}");
                }
            }
        }
        Results::Suite(s) => {
            for o in &s.outcomes {
                let _ = writeln!(
                    out,
                    "{} {:>2}  {}: {}",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.id,
                    o.title,
                    o.summary
                );
                if !o.passed {
                    for d in &o.details {
                        let _ = writeln!(out, "        {d}");
                    }
                }
            }
            let passed = s.outcomes.iter().filter(|o| o.passed).count();
            let _ = writeln!(out, "{passed} of {} criteria passed", s.outcomes.len());
        }
    }
    out
}
