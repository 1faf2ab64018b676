//! Plain-text certification report.

use std::fmt::Write;

use gpc_core::semimarkov::IntegralSource;

use crate::pipeline::{num, GammaColumns, Outcome};

fn verdict(ok: bool) -> &'static str {
    if ok {
        "YES"
    } else {
        "NO"
    }
}

fn pass(margin: f64, tol: f64) -> &'static str {
    if margin >= -tol {
        "pass"
    } else {
        "FAIL"
    }
}

fn at(t: f64) -> String {
    if t.is_finite() {
        format!("t = {}", num(t))
    } else {
        "t -> infinity".into()
    }
}

/// Renders every certificate with its verdict and worst margin.
pub fn render(outcome: &Outcome) -> String {
    let mut out = String::new();
    let tol = outcome.scenario.tol;
    let grid = outcome.grid();
    let _ = writeln!(out, "source: {}, d = {}", outcome.source, outcome.d());
    let _ = writeln!(out, "grid: t_max = {}, n_steps = {}", num(grid.t_max()), grid.n_steps());
    let _ = writeln!(out, "method: {}", outcome.method);
    let _ = writeln!(out, "tolerance: {}", num(tol));

    let c = &outcome.cptp;
    let _ = writeln!(out, "CPTP: {}", verdict(c.passed));
    let _ = writeln!(
        out,
        "  sum(lambda) >= -1/(d-1): {}, worst margin {} at {}",
        pass(c.worst_lower.0, tol),
        num(c.worst_lower.0),
        at(c.worst_lower.1)
    );
    let _ = writeln!(
        out,
        "  sum(lambda) <= 1 + d*min(lambda): {}, worst margin {} at {}",
        pass(c.worst_upper.0, tol),
        num(c.worst_upper.0),
        at(c.worst_upper.1)
    );

    if let Some(e) = &outcome.ell {
        let _ = writeln!(out, "ell conditions: {}", verdict(e.passed));
        let names = ["L_a >= 0", "sum L <= d^2/(d-1)", "sum L >= d*L_b"];
        for (name, &m) in names.iter().zip(e.worst_margins.iter()) {
            let _ = writeln!(out, "  {name}: {}, worst margin {}", pass(m, tol), num(m));
        }
        if e.asymptotic_checked {
            let _ = writeln!(out, "  t -> infinity limit included");
        }
    }

    if let Some(v) = &outcome.oscillatory {
        let _ = writeln!(
            out,
            "oscillatory bounds: {} (sum(1/a) = {}, d^2/(2(d-1)) = {})",
            verdict(v.admissible),
            num(v.sum_inverse),
            num(v.upper_bound)
        );
        if let Some(bound) = v.failed {
            let _ = writeln!(out, "  failed: {bound}");
        }
        let _ = writeln!(
            out,
            "  every a >= 2(1-1/d) = {}: {}",
            num(v.min_a),
            verdict(v.all_a_above_min)
        );
    }

    if let Some(sm) = &outcome.semimarkov {
        let cert = &sm.certificate;
        let line = if cert.legitimate {
            format!("semi-Markov: YES; ∫f = {}", num(cert.integral))
        } else if let Some(neg) = cert.first_negative {
            format!("semi-Markov: NO (f_{} < 0, first at t≈{})", neg.alpha + 1, num(neg.t))
        } else {
            format!("semi-Markov: NO (∫f = {} > 1)", num(cert.integral))
        };
        let mut notes = Vec::new();
        if sm.informational {
            notes.push("informational");
        }
        if sm.numerical {
            notes.push("f recovered numerically");
        }
        if notes.is_empty() {
            let _ = writeln!(out, "{line}");
        } else {
            let _ = writeln!(out, "{line} [{}]", notes.join(", "));
        }
        let source = match cert.integral_source {
            IntegralSource::ClosedForm => "closed form",
            IntegralSource::LaplaceAtZero => "Laplace transform at s = 0",
            IntegralSource::Extrapolated => "quadrature with fitted tail, heuristic",
        };
        let _ = writeln!(out, "  ∫f from {source}; boundary ∫f = 1: {}", verdict(cert.boundary));
        let mins: Vec<String> =
            cert.min_density.iter().enumerate().map(|(a, m)| format!("f_{} {}", a + 1, num(*m))).collect();
        let _ = writeln!(out, "  min density: {}", mins.join(", "));
        let _ = writeln!(out, "  min survival g: {}", num(cert.min_survival));
    }

    if let Some(GammaColumns::Undefined(why)) = &outcome.gamma {
        let _ = writeln!(out, "rates: undefined ({why}); gamma columns written as NaN");
    }

    if outcome.violations.is_empty() {
        let _ = writeln!(out, "violations: none");
    } else {
        let _ = writeln!(out, "violations:");
        for v in &outcome.violations {
            let _ = writeln!(out, "  {v}");
        }
    }
    let _ = writeln!(out, "exit code: {}", outcome.exit_code());
    out
}
