use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::study::{ParamSummary, StudySummary, SweepPoint};

pub(crate) fn num(x: f64) -> String {
    format!("{x:.16e}")
}

const SUMMARY_HEADER: [&str; 6] = ["param", "truth", "avg", "emp_se", "asym_se", "cp"];

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn summary_rows(s: &StudySummary) -> Vec<Vec<String>> {
    let row = |prefix: &str, p: &ParamSummary| {
        vec![format!("{prefix}{}", p.param), num(p.truth), num(p.avg), num(p.emp_se), num(p.asym_se), num(p.cp)]
    };
    let mut rows: Vec<Vec<String>> = s.params.iter().map(|p| row("", p)).collect();
    if let Some(s_only) = &s.s_only {
        rows.extend(s_only.iter().map(|p| row("s_only.", p)));
    }
    if let Some(pct) = s.lrt_rejection_percent {
        rows.push(vec!["lrt_reject_pct".into(), String::new(), num(pct), String::new(), String::new(), String::new()]);
    }
    rows
}

/// Writes `param,truth,avg,emp_se,asym_se,cp`, one row per parameter.
///
/// `s`-only fits appear as `s_only.<param>` rows and the test rejection rate
/// as an `lrt_reject_pct` row with only `avg` filled.
pub fn write_summary_csv<W: Write>(out: W, summary: &StudySummary) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER).map_err(io_error)?;
    for r in summary_rows(summary) {
        w.write_record(&r).map_err(io_error)?;
    }
    w.flush().map_err(io_error)
}

/// Summary rows of every sweep point, prefixed by `axis,value`.
pub fn write_sweep_csv<W: Write>(out: W, points: &[SweepPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<&str> = ["axis", "value"].into_iter().chain(SUMMARY_HEADER).collect();
    w.write_record(&header).map_err(io_error)?;
    for p in points {
        for r in summary_rows(&p.summary) {
            let mut full = vec![p.axis.name().to_string(), num(p.value)];
            full.extend(r);
            w.write_record(&full).map_err(io_error)?;
        }
    }
    w.flush().map_err(io_error)
}

/// Plain-text table with one line per parameter.
pub fn format_table(summary: &StudySummary) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "{:?}, n = {}, {} replications ({} failed)",
        summary.scenario, summary.n, summary.reps, summary.failed_replications
    );
    let _ = writeln!(t, "{:<18}{:>10}{:>10}{:>10}{:>10}{:>8}", "param", "truth", "average", "emp SE", "asym SE", "CP");
    let mut line = |name: String, p: &ParamSummary| {
        let _ =
            writeln!(t, "{name:<18}{:>10.4}{:>10.4}{:>10.4}{:>10.4}{:>8.1}", p.truth, p.avg, p.emp_se, p.asym_se, p.cp);
    };
    for p in &summary.params {
        line(p.param.clone(), p);
    }
    for p in summary.s_only.iter().flatten() {
        line(format!("{} (s only)", p.param), p);
    }
    if let Some(pct) = summary.lrt_rejection_percent {
        let _ = writeln!(t, "equal-drift test rejections: {pct:.1}%");
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Scenario;

    fn summary() -> StudySummary {
        let p = |name: &str, v: f64| ParamSummary {
            param: name.into(),
            truth: v,
            avg: v,
            emp_se: 0.1,
            asym_se: 0.1,
            cp: 95.0,
        };
        StudySummary {
            scenario: Scenario::NoEffect,
            n: 10,
            reps: 2,
            seed: 0,
            params: vec![p("mu", 1.0), p("sigma_sq", 0.1 + 0.2)],
            s_only: None,
            lrt_rejection_percent: Some(50.0),
            failed_replications: 0,
        }
    }

    #[test]
    fn csv_roundtrip() {
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &summary()).unwrap();
        let mut r = csv::Reader::from_reader(buf.as_slice());
        assert_eq!(r.headers().unwrap(), SUMMARY_HEADER.as_slice());
        let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1][1].parse::<f64>().unwrap(), 0.1 + 0.2);
        assert_eq!(&rows[2][0], "lrt_reject_pct");
    }

    #[test]
    fn table_mentions_every_parameter() {
        let t = format_table(&summary());
        assert!(t.contains("sigma_sq") && t.contains("50.0%"));
    }
}
