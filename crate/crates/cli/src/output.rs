//! JSON, CSV and plain-text rendering.
//!
//! JSON numbers use the shortest representation that parses back to the same
//! `f64`; CSV numbers carry 17 significant digits. Both round-trip exactly.

use std::fmt::Write as _;

use opineq::sweep::{Draw, SweepSummary};
use opineq::ChainReport;

use crate::run::{ConstantsReport, MapCheck, Outcome};
use crate::spec::Format;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

pub fn render_chain(report: &ChainReport, format: Format) -> Outcome {
    let text = match format {
        Format::Json => json(report),
        Format::Csv => chain_csv(report),
        Format::Pretty => chain_pretty(report),
    };
    let failure = report.first_violation().map(|(i, v)| {
        format!(
            "chain violated at link {i} ({} <= {}): smallest eigenvalue of the difference {} below tolerance {}",
            report.labels[i],
            report.labels[i + 1],
            v.min_gap_eigenvalue,
            v.tolerance_used
        )
    });
    Outcome {
        text,
        passed: report.passed,
        failure,
    }
}

/// Long format: `record,index,entry,label,value`.
fn chain_csv(report: &ChainReport) -> String {
    let mut out = String::from("record,index,entry,label,value\n");
    for (i, (label, term)) in report.labels.iter().zip(&report.terms).enumerate() {
        for (k, v) in term.as_slice().iter().enumerate() {
            writeln!(out, "term,{i},{k},{label},{}", num(*v)).unwrap();
        }
    }
    for (i, link) in report.links.iter().enumerate() {
        writeln!(
            out,
            "gap,{i},0,{},{}",
            report.labels[i],
            num(link.min_gap_eigenvalue)
        )
        .unwrap();
    }
    let c = &report.constants;
    for (name, v) in [("alpha", c.alpha), ("beta", c.beta), ("K", c.k), ("C", c.c)] {
        if let Some(v) = v {
            writeln!(out, "constant,0,0,{name},{}", num(v)).unwrap();
        }
    }
    if let Some(j) = report.interval {
        writeln!(out, "interval,0,0,m,{}", num(j.m())).unwrap();
        writeln!(out, "interval,0,1,M,{}", num(j.big_m())).unwrap();
    }
    writeln!(out, "tolerance,0,0,,{}", num(report.tol_scale)).unwrap();
    writeln!(out, "passed,0,0,,{}", u8::from(report.passed)).unwrap();
    out
}

fn chain_pretty(report: &ChainReport) -> String {
    let mut out = String::new();
    write!(out, "{} chain", report.chain).unwrap();
    if let Some(mode) = &report.mode {
        write!(out, " ({mode})").unwrap();
    }
    if let Some(j) = report.interval {
        write!(out, " on {j}").unwrap();
    }
    out.push('\n');
    let width = report.labels.iter().map(String::len).max().unwrap_or(0);
    for (i, (label, term)) in report.labels.iter().zip(&report.terms).enumerate() {
        if term.dim() == 1 {
            writeln!(out, "  T{} {label:<width$}  {:.12}", i + 1, term.get(0, 0)).unwrap();
        } else {
            writeln!(out, "  T{} {label}", i + 1).unwrap();
            for row in term.to_rows() {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>16.10}")).collect();
                writeln!(out, "      [{}]", cells.join(" ")).unwrap();
            }
        }
    }
    for (i, link) in report.links.iter().enumerate() {
        writeln!(
            out,
            "  T{} <= T{}: gap {:+.3e} (tol {:.1e}) {}",
            i + 1,
            i + 2,
            link.min_gap_eigenvalue,
            link.tolerance_used,
            if link.holds { "ok" } else { "VIOLATED" }
        )
        .unwrap();
    }
    let c = &report.constants;
    let consts: Vec<String> = [("alpha", c.alpha), ("beta", c.beta), ("K", c.k), ("C", c.c)]
        .iter()
        .filter_map(|(n, v)| v.map(|v| format!("{n} = {v:.12}")))
        .collect();
    if !consts.is_empty() {
        writeln!(out, "  {}", consts.join(", ")).unwrap();
    }
    writeln!(out, "{}", if report.passed { "PASSED" } else { "FAILED" }).unwrap();
    out
}

pub fn render_constants(c: &ConstantsReport, format: Format) -> Outcome {
    let rows: Vec<(&str, f64)> = [("K", c.k), ("C", c.c), ("alpha", c.alpha), ("beta", c.beta)]
        .into_iter()
        .filter_map(|(n, v)| v.map(|v| (n, v)))
        .collect();
    let text = match format {
        Format::Json => json(c),
        Format::Csv => {
            let mut out = String::from("record,index,entry,label,value\n");
            for (name, v) in &rows {
                writeln!(out, "constant,0,0,{name},{}", num(*v)).unwrap();
            }
            writeln!(out, "interval,0,0,m,{}", num(c.interval.m())).unwrap();
            writeln!(out, "interval,0,1,M,{}", num(c.interval.big_m())).unwrap();
            out
        }
        Format::Pretty => {
            let mut out = format!("constants on {}", c.interval);
            if let Some(r) = c.r {
                write!(out, ", r = {r}").unwrap();
            }
            if let Some(f) = &c.f {
                write!(out, ", f = {f}").unwrap();
            }
            out.push('\n');
            for (name, v) in &rows {
                writeln!(out, "  {name:<5} = {v:.15}").unwrap();
            }
            out
        }
    };
    Outcome {
        text,
        passed: true,
        failure: None,
    }
}

pub fn render_sweep(s: &SweepSummary, format: Format) -> Outcome {
    let text = match format {
        Format::Json => json(s),
        Format::Csv => {
            let mut out = String::from("index,status,passed,min_gap,tight_gap,outer_gap\n");
            for (i, d) in s.draws.iter().enumerate() {
                match d {
                    Draw::Evaluated {
                        passed,
                        min_gap,
                        tight_gap,
                        outer_gap,
                    } => writeln!(
                        out,
                        "{i},evaluated,{},{},{},{}",
                        u8::from(*passed),
                        num(*min_gap),
                        num(*tight_gap),
                        num(*outer_gap)
                    ),
                    Draw::Skipped { .. } => writeln!(out, "{i},skipped,,,,"),
                }
                .unwrap();
            }
            out
        }
        Format::Pretty => format!(
            "{:?} sweep, seed {}: {}/{} passed, {} skipped\n  worst gap {:+.3e}\n  mean last-link gap {:.6e}, mean outer gap {:.6e}\n",
            s.kind, s.seed, s.passed, s.evaluated, s.skipped, s.worst_gap, s.mean_tight_gap, s.mean_outer_gap
        ),
    };
    let failure = s
        .draws
        .iter()
        .position(|d| matches!(d, Draw::Evaluated { passed: false, .. }))
        .map(|i| {
            format!(
                "draw {i} violated its chain; worst gap over the sweep {}",
                s.worst_gap
            )
        });
    Outcome {
        text,
        passed: s.all_passed(),
        failure,
    }
}

pub fn render_map_check(c: &MapCheck, format: Format) -> Outcome {
    let text = match format {
        Format::Json => json(c),
        Format::Csv => format!(
            "map,input_dim,trials,seed,valid\n{},{},{},{},{}\n",
            c.map,
            c.input_dim.map_or(String::new(), |n| n.to_string()),
            c.trials,
            c.seed,
            u8::from(c.valid)
        ),
        Format::Pretty => format!(
            "{} map: {} over {} trials (seed {})\n",
            c.map,
            if c.valid {
                "positive, unital and linear"
            } else {
                "FAILED"
            },
            c.trials,
            c.seed
        ),
    };
    Outcome {
        text,
        passed: c.valid,
        failure: (!c.valid).then(|| format!("{} map failed the sampled checks", c.map)),
    }
}
