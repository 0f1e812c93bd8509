//! Deterministic CSV and JSON rendering of experiment reports.
//!
//! Floats are written with 17 significant digits so a report pins the run
//! exactly; every row repeats the configuration context (experiment, family,
//! n, parameters, c, k, j, trials, seed), which is enough to re-run it.
//!
//! CSV output is two tables in two files: the raw per-trial table at the
//! requested path and the summary table next to it with a `.summary`
//! suffix before the extension. JSON holds both in one document.

use std::io;
use std::path::{Path, PathBuf};

use treeperc_core::FamilySpec;

use crate::experiment::Report;

/// 17 significant digits; non-finite values print as names.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

/// JSON has no lexical NaN or infinity; those become `null`.
fn fmt_json_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

struct Context {
    family: &'static str,
    beta: Option<f64>,
    d: Option<u32>,
    h: Option<u32>,
    alpha: Option<f64>,
}

impl Context {
    fn of(family: &FamilySpec) -> Self {
        let mut ctx = Context {
            family: family.name(),
            beta: None,
            d: None,
            h: None,
            alpha: None,
        };
        match *family {
            FamilySpec::ScaleFree { beta, .. } => ctx.beta = Some(beta),
            FamilySpec::Dary { d, h } => {
                ctx.d = Some(d);
                ctx.h = Some(h);
            }
            FamilySpec::Star { alpha, .. } => ctx.alpha = Some(alpha),
            _ => {}
        }
        ctx
    }
}

const CONTEXT_HEADER: &str = "experiment,family,n,beta,d,h,alpha,c,k,j,trials,seed";

fn context_cells(report: &Report) -> String {
    let cfg = &report.config;
    let ctx = Context::of(&cfg.family);
    let opt_f = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let opt_u = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        cfg.experiment.name(),
        ctx.family,
        report.n,
        opt_f(ctx.beta),
        opt_u(ctx.d),
        opt_u(ctx.h),
        opt_f(ctx.alpha),
        fmt_f64(cfg.c),
        cfg.k,
        cfg.j,
        cfg.trials,
        cfg.master_seed,
    )
}

/// The raw per-trial table: one record per trial.
pub fn trials_csv(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(CONTEXT_HEADER);
    out.push_str(",trial");
    for col in &report.trial_columns {
        out.push(',');
        out.push_str(col);
    }
    out.push('\n');
    let context = context_cells(report);
    for row in &report.trials {
        out.push_str(&context);
        out.push(',');
        out.push_str(&row.trial.to_string());
        for v in &row.values {
            out.push(',');
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

/// The summary table: one record per test.
pub fn summary_csv(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(CONTEXT_HEADER);
    out.push_str(",test_name,estimate,std_error,theory,statistic,p_value,n_samples\n");
    let context = context_cells(report);
    for s in &report.summaries {
        out.push_str(&context);
        out.push_str(&format!(
            ",{},{},{},{},{},{},{}\n",
            s.test_name,
            fmt_f64(s.estimate),
            fmt_f64(s.std_error),
            fmt_f64(s.theory),
            fmt_f64(s.statistic),
            fmt_f64(s.p_value),
            s.n_samples,
        ));
    }
    out
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// The whole report as one JSON document.
pub fn report_json(report: &Report) -> String {
    let cfg = &report.config;
    let ctx = Context::of(&cfg.family);
    let opt_f = |v: Option<f64>| v.map(fmt_json_f64).unwrap_or_else(|| "null".into());
    let opt_u = |v: Option<u32>| {
        v.map(|x| x.to_string()).unwrap_or_else(|| "null".into())
    };
    let mut out = String::new();
    out.push_str("{\n  \"meta\": {");
    out.push_str(&format!(
        "\"experiment\": {}, \"family\": {}, \"n\": {}, \"beta\": {}, \"d\": {}, \"h\": {}, \
         \"alpha\": {}, \"c\": {}, \"k\": {}, \"j\": {}, \"trials\": {}, \"seed\": {}",
        json_string(cfg.experiment.name()),
        json_string(ctx.family),
        report.n,
        opt_f(ctx.beta),
        opt_u(ctx.d),
        opt_u(ctx.h),
        opt_f(ctx.alpha),
        fmt_json_f64(cfg.c),
        cfg.k,
        cfg.j,
        cfg.trials,
        cfg.master_seed,
    ));
    out.push_str("},\n  \"trial_columns\": [");
    for (i, col) in report.trial_columns.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&json_string(col));
    }
    out.push_str("],\n  \"summaries\": [\n");
    for (i, s) in report.summaries.iter().enumerate() {
        out.push_str("    {");
        out.push_str(&format!(
            "\"test_name\": {}, \"estimate\": {}, \"std_error\": {}, \"theory\": {}, \
             \"statistic\": {}, \"p_value\": {}, \"n_samples\": {}",
            json_string(s.test_name),
            fmt_json_f64(s.estimate),
            fmt_json_f64(s.std_error),
            fmt_json_f64(s.theory),
            fmt_json_f64(s.statistic),
            fmt_json_f64(s.p_value),
            s.n_samples,
        ));
        out.push('}');
        if i + 1 < report.summaries.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ],\n  \"trials\": [\n");
    for (i, row) in report.trials.iter().enumerate() {
        out.push_str(&format!("    {{\"trial\": {}, \"values\": [", row.trial));
        for (jv, v) in row.values.iter().enumerate() {
            if jv > 0 {
                out.push_str(", ");
            }
            out.push_str(&fmt_json_f64(*v));
        }
        out.push_str("]}");
        if i + 1 < report.trials.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    out
}

/// Where the CSV summary table lands: `report.csv` -> `report.summary.csv`.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut name = format!("{stem}.summary");
    if let Some(ext) = path.extension() {
        name.push('.');
        name.push_str(&ext.to_string_lossy());
    }
    path.with_file_name(name)
}

/// Writes the report in CSV form: trials at `path`, summaries next to it.
pub fn write_csv(report: &Report, path: &Path) -> io::Result<()> {
    std::fs::write(path, trials_csv(report))?;
    std::fs::write(summary_path(path), summary_csv(report))
}

/// Writes the report as a single JSON document.
pub fn write_json(report: &Report, path: &Path) -> io::Result<()> {
    std::fs::write(path, report_json(report))
}
