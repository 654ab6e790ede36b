//! Report files: machine-readable JSON, summary tables, plot-ready data
//! series, and a small hand-rolled SVG chart for sweeps.
//!
//! `report.json` is a pure function of the experiment configuration and
//! seed — rerunning the same experiment reproduces it byte for byte.
//! Wall-clock numbers go to `timings.json`, which makes no such promise.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::Algo;
use crate::error::{BenchError, Result};
use crate::runner::RunReport;
use crate::sweeps::{ScaleSweep, VigilanceSweep};

/// JSON for `Option<f64>` fields that may legitimately be infinite:
/// finite values are plain numbers, infinities are the strings `"inf"` /
/// `"-inf"`, and absent values are `null`. Numbers survive a round trip
/// bit for bit.
pub mod opt_inf {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match *v {
            None => s.serialize_none(),
            Some(x) if x == f64::INFINITY => s.serialize_str("inf"),
            Some(x) if x == f64::NEG_INFINITY => s.serialize_str("-inf"),
            Some(x) => s.serialize_f64(x),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Num(x)) => Ok(Some(x)),
            Some(Repr::Str(s)) => match s.as_str() {
                "inf" => Ok(Some(f64::INFINITY)),
                "-inf" => Ok(Some(f64::NEG_INFINITY)),
                other => Err(serde::de::Error::custom(format!(
                    "expected a number, \"inf\", or \"-inf\", found {other:?}"
                ))),
            },
        }
    }
}

/// Element-wise [`opt_inf`] for vectors.
pub mod opt_inf_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Item(#[serde(with = "super::opt_inf")] Option<f64>);

    pub fn serialize<S: Serializer>(v: &[Option<f64>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&x| Item(x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Option<f64>>, D::Error> {
        let items = Vec::<Item>::deserialize(d)?;
        Ok(items.into_iter().map(|Item(x)| x).collect())
    }
}

/// Everything `report.json` can hold, tagged by kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    Run(RunReport),
    VigilanceSweep(VigilanceSweep),
    ScaleSweep(ScaleSweep),
}

/// The canonical byte representation of a document — what `report.json`
/// contains, and what determinism comparisons should compare.
pub fn document_bytes(doc: &Document) -> Result<String> {
    let mut text = serde_json::to_string_pretty(doc)
        .map_err(|e| BenchError::Internal(format!("serializing report: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| BenchError::io(&dir.display().to_string(), &e))?;
    }
    fs::write(path, content).map_err(|e| BenchError::io(&path.display().to_string(), &e))
}

/// Writes `report.json` under `dir` and returns its path.
pub fn write_report(dir: &Path, doc: &Document) -> Result<PathBuf> {
    let path = dir.join("report.json");
    write_file(&path, &document_bytes(doc)?)?;
    Ok(path)
}

/// Reads a `report.json` back into a document.
pub fn read_report(path: &Path) -> Result<Document> {
    let text =
        fs::read_to_string(path).map_err(|e| BenchError::io(&path.display().to_string(), &e))?;
    serde_json::from_str(&text)
        .map_err(|e| BenchError::Input(format!("parsing {}: {e}", path.display())))
}

/// Writes `timings.json` under `dir`. Timings vary run to run; they are
/// deliberately not part of the report.
pub fn write_timings<T: Serialize>(dir: &Path, timings: &T) -> Result<PathBuf> {
    let path = dir.join("timings.json");
    let mut text = serde_json::to_string_pretty(timings)
        .map_err(|e| BenchError::Internal(format!("serializing timings: {e}")))?;
    text.push('\n');
    write_file(&path, &text)?;
    Ok(path)
}

fn fmt_val(v: Option<f64>) -> String {
    match v {
        None => "n/a".to_string(),
        Some(x) if x == f64::INFINITY => "inf".to_string(),
        Some(x) if x == f64::NEG_INFINITY => "-inf".to_string(),
        Some(x) => format!("{x:.4}"),
    }
}

fn fmt_stat(mean: Option<f64>, std: Option<f64>) -> String {
    match mean {
        None => "n/a".to_string(),
        Some(m) if !m.is_finite() => fmt_val(Some(m)),
        Some(m) => match std {
            Some(s) if s.is_finite() => format!("{m:.4} ({s:.4})"),
            _ => format!("{m:.4}"),
        },
    }
}

fn csv_num(x: f64) -> String {
    format!("{x}")
}

/// Canonical dataset ordering for merged tables: the built-ins in their
/// usual order, then anything else alphabetically.
fn dataset_order(names: &mut Vec<String>) {
    let builtin = ["balance", "liver", "transfusion", "banknote", "car", "wholesale"];
    names.sort_by_key(|n| {
        (
            builtin.iter().position(|b| b == n).unwrap_or(builtin.len()),
            n.clone(),
        )
    });
    names.dedup();
}

/// Renders runs as the benchmark summary table: algorithms as rows and a
/// (DBI, CP, NMI) column triple per dataset, each cell `mean (std)`.
pub fn summarize_runs(runs: &[&RunReport]) -> String {
    let mut datasets: Vec<String> = runs.iter().map(|r| r.dataset.clone()).collect();
    dataset_order(&mut datasets);
    let algos = [Algo::Sdrn, Algo::DrnLike, Algo::Kmeans];

    let mut csv = String::from("algo");
    for ds in &datasets {
        let _ = write!(csv, ",{ds}_dbi,{ds}_cp,{ds}_nmi");
    }
    csv.push('\n');

    for algo in algos {
        if !runs.iter().any(|r| r.algo == algo) {
            continue;
        }
        csv.push_str(algo.as_str());
        for ds in &datasets {
            // When several runs cover the same cell the latest one wins.
            let run = runs.iter().rev().find(|r| r.algo == algo && &r.dataset == ds);
            match run {
                Some(r) => {
                    let a = &r.aggregates;
                    let _ = write!(
                        csv,
                        ",{},{},{}",
                        fmt_stat(a.dbi_mean, a.dbi_std),
                        fmt_stat(Some(a.cp_mean), Some(a.cp_std)),
                        fmt_stat(Some(a.nmi_mean), Some(a.nmi_std)),
                    );
                }
                None => csv.push_str(",n/a,n/a,n/a"),
            }
        }
        csv.push('\n');
    }
    csv
}

/// Human-readable per-dataset blocks for stdout.
pub fn render_runs_text(runs: &[&RunReport]) -> String {
    let mut datasets: Vec<String> = runs.iter().map(|r| r.dataset.clone()).collect();
    dataset_order(&mut datasets);

    let mut out = String::new();
    for ds in &datasets {
        let on_ds: Vec<&&RunReport> = runs.iter().filter(|r| &r.dataset == ds).collect();
        let first = on_ds[0];
        let _ = writeln!(out, "{ds} ({} points, {} classes)", first.points, first.classes);
        let _ = writeln!(
            out,
            "  {:<10} {:<16} {:<18} {:<18} {:<18}",
            "algo", "clusters", "DBI", "CP", "NMI"
        );
        for r in on_ds {
            let a = &r.aggregates;
            let _ = writeln!(
                out,
                "  {:<10} {:<16} {:<18} {:<18} {:<18}",
                r.algo.as_str(),
                fmt_stat(Some(a.clusters_mean), Some(a.clusters_std)),
                fmt_stat(a.dbi_mean, a.dbi_std),
                fmt_stat(Some(a.cp_mean), Some(a.cp_std)),
                fmt_stat(Some(a.nmi_mean), Some(a.nmi_std)),
            );
        }
    }
    out
}

fn sweep_rows(x_name: &str, xs: &[f64], runs: &[RunReport], extra: Option<&[Option<f64>]>) -> String {
    let mut csv = format!("{x_name},clusters,dbi,cp,nmi");
    if extra.is_some() {
        csv.push_str(",combined");
    }
    csv.push('\n');
    for (i, run) in runs.iter().enumerate() {
        let a = &run.aggregates;
        let _ = write!(
            csv,
            "{},{},{},{},{}",
            csv_num(xs[i]),
            fmt_stat(Some(a.clusters_mean), Some(a.clusters_std)),
            fmt_stat(a.dbi_mean, a.dbi_std),
            fmt_stat(Some(a.cp_mean), Some(a.cp_std)),
            fmt_stat(Some(a.nmi_mean), Some(a.nmi_std)),
        );
        if let Some(scores) = extra {
            let _ = write!(csv, ",{}", fmt_val(scores[i]));
        }
        csv.push('\n');
    }
    csv
}

/// Writes the summary table for a document and returns the text to print.
pub fn write_summary(dir: &Path, doc: &Document) -> Result<String> {
    let (csv, text) = match doc {
        Document::Run(run) => {
            let runs = [run];
            (summarize_runs(&runs), render_runs_text(&runs))
        }
        Document::VigilanceSweep(sweep) => {
            let csv = sweep_rows("rho", &sweep.rhos, &sweep.runs, Some(&sweep.combined));
            let mut text = format!(
                "vigilance sweep: {} on {} ({} trials per point)\n",
                sweep.algo,
                sweep.dataset,
                sweep.runs.first().map_or(0, |r| r.trials)
            );
            text.push_str(&csv.replace(',', "  "));
            let _ = writeln!(
                text,
                "best rho: {}   mean-DBI spread across rho: {}",
                sweep.best_rho.map_or("n/a".into(), |r| format!("{r}")),
                fmt_val(sweep.dbi_mean_std),
            );
            (csv, text)
        }
        Document::ScaleSweep(sweep) => {
            let csv = sweep_rows("factor", &sweep.factors, &sweep.runs, None);
            let mut text = format!(
                "scale sweep: {} on {} ({} trials per point)\n",
                sweep.algo,
                sweep.dataset,
                sweep.runs.first().map_or(0, |r| r.trials)
            );
            text.push_str(&csv.replace(',', "  "));
            (csv, text)
        }
    };
    write_file(&dir.join("summary.csv"), &csv)?;
    Ok(text)
}

fn plot_series(path: &Path, x_name: &str, xs: &[f64], rows: &[(Option<f64>, Option<f64>)]) -> Result<()> {
    let mut csv = format!("{x_name},mean,std\n");
    for (i, (mean, std)) in rows.iter().enumerate() {
        let cell = |v: Option<f64>| match v {
            None => String::new(),
            Some(x) if x.is_finite() => csv_num(x),
            Some(x) => fmt_val(Some(x)),
        };
        let _ = writeln!(csv, "{},{},{}", csv_num(xs[i]), cell(*mean), cell(*std));
    }
    write_file(path, &csv)
}

/// Writes `plot_dbi.csv`, `plot_cp.csv`, `plot_nmi.csv` (and, for
/// vigilance sweeps, `plot_combined.csv`): one data row per sweep point.
pub fn write_plot_data(dir: &Path, doc: &Document) -> Result<()> {
    let (x_name, xs, runs, combined) = match doc {
        Document::Run(_) => return Ok(()),
        Document::VigilanceSweep(s) => ("rho", &s.rhos, &s.runs, Some(&s.combined)),
        Document::ScaleSweep(s) => ("factor", &s.factors, &s.runs, None),
    };

    let dbi: Vec<_> = runs.iter().map(|r| (r.aggregates.dbi_mean, r.aggregates.dbi_std)).collect();
    let cp: Vec<_> = runs
        .iter()
        .map(|r| (Some(r.aggregates.cp_mean), Some(r.aggregates.cp_std)))
        .collect();
    let nmi: Vec<_> = runs
        .iter()
        .map(|r| (Some(r.aggregates.nmi_mean), Some(r.aggregates.nmi_std)))
        .collect();
    plot_series(&dir.join("plot_dbi.csv"), x_name, xs, &dbi)?;
    plot_series(&dir.join("plot_cp.csv"), x_name, xs, &cp)?;
    plot_series(&dir.join("plot_nmi.csv"), x_name, xs, &nmi)?;

    if let Some(scores) = combined {
        let mut csv = format!("{x_name},value\n");
        for (i, score) in scores.iter().enumerate() {
            let cell = match score {
                None => String::new(),
                Some(x) if x.is_finite() => csv_num(*x),
                Some(x) => fmt_val(Some(*x)),
            };
            let _ = writeln!(csv, "{},{}", csv_num(xs[i]), cell);
        }
        write_file(&dir.join("plot_combined.csv"), &csv)?;
    }
    Ok(())
}

struct Panel<'a> {
    name: &'a str,
    values: Vec<Option<f64>>,
}

/// A minimal static chart: one panel per metric, points joined by
/// polylines, each panel scaled to its own finite range.
fn sweep_svg(title: &str, x_labels: &[String], panels: &[Panel]) -> String {
    const W: f64 = 640.0;
    const PANEL_H: f64 = 150.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 34.0;
    const PAD: f64 = 18.0;

    let height = TOP + panels.len() as f64 * PANEL_H + 30.0;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {height}\" \
         font-family=\"sans-serif\" font-size=\"11\">\n\
         <rect width=\"{W}\" height=\"{height}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
        W / 2.0
    );

    let n = x_labels.len();
    let x_at = |i: usize| {
        if n <= 1 {
            LEFT + (W - LEFT - RIGHT) / 2.0
        } else {
            LEFT + (W - LEFT - RIGHT) * i as f64 / (n - 1) as f64
        }
    };

    for (p, panel) in panels.iter().enumerate() {
        let top = TOP + p as f64 * PANEL_H;
        let bottom = top + PANEL_H - PAD;
        let finite: Vec<f64> = panel.values.iter().flatten().copied().filter(|v| v.is_finite()).collect();
        let _ = write!(
            svg,
            "<text x=\"12\" y=\"{}\" transform=\"rotate(-90 12 {})\" text-anchor=\"middle\">{}</text>\n\
             <line x1=\"{LEFT}\" y1=\"{bottom}\" x2=\"{}\" y2=\"{bottom}\" stroke=\"#555\"/>\n\
             <line x1=\"{LEFT}\" y1=\"{}\" x2=\"{LEFT}\" y2=\"{bottom}\" stroke=\"#555\"/>\n",
            (top + bottom) / 2.0,
            (top + bottom) / 2.0,
            panel.name,
            W - RIGHT,
            top + PAD,
        );
        if finite.is_empty() {
            let _ = writeln!(
                svg,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"#888\">no defined values</text>",
                (LEFT + W - RIGHT) / 2.0,
                (top + bottom) / 2.0
            );
            continue;
        }
        let lo = finite.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if lo == hi { (lo - 1.0, hi + 1.0) } else { (lo, hi) };
        let y_at = |v: f64| bottom - (v - lo) / (hi - lo) * (bottom - top - PAD);

        let _ = write!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4}</text>\n\
             <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4}</text>\n",
            LEFT - 4.0,
            top + PAD + 4.0,
            hi,
            LEFT - 4.0,
            bottom,
            lo
        );

        // Break the polyline wherever a value is undefined or infinite.
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, svg: &mut String| {
            if seg.len() > 1 {
                let _ = writeln!(
                    svg,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>",
                    seg.join(" ")
                );
            }
            seg.clear();
        };
        for (i, v) in panel.values.iter().enumerate() {
            match v {
                Some(v) if v.is_finite() => {
                    let (x, y) = (x_at(i), y_at(*v));
                    segment.push(format!("{x:.1},{y:.1}"));
                    let _ = writeln!(
                        svg,
                        "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"2.5\" fill=\"#1f77b4\"/>"
                    );
                }
                _ => flush(&mut segment, &mut svg),
            }
        }
        flush(&mut segment, &mut svg);
    }

    let bottom = TOP + panels.len() as f64 * PANEL_H;
    for (i, label) in x_labels.iter().enumerate() {
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{}\" text-anchor=\"middle\">{label}</text>",
            x_at(i),
            bottom + 14.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes `sweep.svg` for sweep documents; plain runs have nothing to plot.
pub fn write_svg(dir: &Path, doc: &Document) -> Result<()> {
    fn panels_for(runs: &[RunReport], combined: Option<&[Option<f64>]>) -> Vec<Panel<'static>> {
        let mut panels = vec![
            Panel { name: "DBI", values: runs.iter().map(|r| r.aggregates.dbi_mean).collect() },
            Panel { name: "CP", values: runs.iter().map(|r| Some(r.aggregates.cp_mean)).collect() },
            Panel { name: "NMI", values: runs.iter().map(|r| Some(r.aggregates.nmi_mean)).collect() },
        ];
        if let Some(scores) = combined {
            panels.push(Panel { name: "combined", values: scores.to_vec() });
        }
        panels
    }
    let (title, xs, panels) = match doc {
        Document::Run(_) => return Ok(()),
        Document::VigilanceSweep(s) => (
            format!("{} on {} across vigilance", s.algo, s.dataset),
            s.rhos.iter().map(|x| format!("{x}")).collect::<Vec<_>>(),
            panels_for(&s.runs, Some(&s.combined)),
        ),
        Document::ScaleSweep(s) => (
            format!("{} on {} across scale factors", s.algo, s.dataset),
            s.factors.iter().map(|x| format!("{x}")).collect(),
            panels_for(&s.runs, None),
        ),
    };
    write_file(&dir.join("sweep.svg"), &sweep_svg(&title, &xs, &panels))
}

/// Writes every output file for a finished experiment and returns the
/// human-readable summary for stdout.
pub fn emit_all<T: Serialize>(dir: &Path, doc: &Document, timings: &T) -> Result<String> {
    write_report(dir, doc)?;
    write_timings(dir, timings)?;
    let text = write_summary(dir, doc)?;
    write_plot_data(dir, doc)?;
    write_svg(dir, doc)?;
    Ok(text)
}
