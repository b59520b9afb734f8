//! Side-by-side comparison tables in the layout of the published benchmark
//! tables: transparency metrics first, blocked-response metrics second, best
//! value per column in bold.

use super::{MetricReport, PiiResult};

#[derive(Clone, Copy, PartialEq)]
enum Better {
    Lower,
    Higher,
    Unranked,
}

struct Column {
    header: &'static str,
    better: Better,
    key: fn(&MetricReport) -> Option<f64>,
    text: fn(&MetricReport) -> String,
}

fn fixed(v: Option<f64>, decimals: usize, suffix: &str) -> String {
    match v {
        Some(x) if x.is_infinite() => "inf".to_string(),
        Some(x) => format!("{x:.decimals$}{suffix}"),
        None => String::new(),
    }
}

fn pii_text(p: &Option<PiiResult>) -> String {
    match p {
        None => String::new(),
        Some(p) if p.interval_empty => format!("{:.2} (empty)", p.m),
        Some(p) => {
            let w1 = if p.omega1 == 0.0 {
                "0".to_string()
            } else {
                format!("{:.3}", p.omega1)
            };
            format!("{:.2} ({}, {:.3})", p.m, w1, p.omega2)
        }
    }
}

fn transparency_columns() -> [Column; 4] {
    [
        Column {
            header: "LCS",
            better: Better::Lower,
            key: |r| r.lcs,
            text: |r| fixed(r.lcs, 2, ""),
        },
        Column {
            header: "TR",
            better: Better::Lower,
            key: |r| r.tr,
            text: |r| fixed(r.tr, 2, ""),
        },
        Column {
            header: "PII",
            better: Better::Lower,
            key: |r| r.pii.map(|p| p.m),
            text: |r| pii_text(&r.pii),
        },
        Column {
            header: "LRT",
            better: Better::Higher,
            key: |r| r.lrt,
            text: |r| fixed(r.lrt, 4, ""),
        },
    ]
}

fn blocked_columns() -> [Column; 3] {
    [
        Column {
            header: "Bandwidth",
            better: Better::Higher,
            key: |r| r.bandwidth,
            text: |r| fixed(r.bandwidth, 2, " rad/s"),
        },
        Column {
            header: "Overshoot",
            better: Better::Unranked,
            key: |r| r.overshoot,
            // percent
            text: |r| fixed(r.overshoot.map(|o| 100.0 * o), 1, ""),
        },
        Column {
            header: "Rising Time",
            better: Better::Lower,
            key: |r| r.rise_time,
            text: |r| fixed(r.rise_time, 2, " s"),
        },
    ]
}

/// Rows holding the best value of a column. Nothing is marked when the
/// column is unranked or every row ties.
fn best_rows(reports: &[MetricReport], column: &Column) -> Vec<bool> {
    let values: Vec<Option<f64>> = reports.iter().map(column.key).collect();
    let present: Vec<f64> = values
        .iter()
        .flatten()
        .copied()
        .filter(|v| !v.is_nan())
        .collect();
    let best = match column.better {
        Better::Unranked => None,
        Better::Lower => present.iter().copied().reduce(f64::min),
        Better::Higher => present.iter().copied().reduce(f64::max),
    };
    let Some(best) = best else {
        return vec![false; reports.len()];
    };
    let marks: Vec<bool> = values.iter().map(|v| *v == Some(best)).collect();
    if marks.iter().all(|&m| m) {
        vec![false; reports.len()]
    } else {
        marks
    }
}

fn markdown_table(title: &str, reports: &[MetricReport], columns: &[Column]) -> String {
    let mut out = format!("### {title}\n\n| Controller |");
    for c in columns {
        out.push_str(&format!(" {} |", c.header));
    }
    out.push_str("\n|---|");
    out.push_str(&"---|".repeat(columns.len()));
    out.push('\n');
    let marks: Vec<Vec<bool>> = columns.iter().map(|c| best_rows(reports, c)).collect();
    for (i, r) in reports.iter().enumerate() {
        out.push_str(&format!("| {} |", r.name));
        for (c, m) in columns.iter().zip(&marks) {
            let text = (c.text)(r);
            if m[i] && !text.is_empty() {
                out.push_str(&format!(" **{text}** |"));
            } else {
                out.push_str(&format!(" {text} |"));
            }
        }
        out.push('\n');
    }
    out
}

/// Two Markdown tables (transparency metrics, then blocked-response metrics)
/// followed by a list of any flags raised per controller.
pub fn render_markdown(reports: &[MetricReport]) -> String {
    let mut out = markdown_table("Z_t metrics", reports, &transparency_columns());
    out.push('\n');
    out.push_str(&markdown_table("Z_b metrics", reports, &blocked_columns()));
    let flagged: Vec<&MetricReport> = reports.iter().filter(|r| !r.flags.is_empty()).collect();
    if !flagged.is_empty() {
        out.push_str("\nFlags:\n\n");
        for r in flagged {
            let list: Vec<String> = r.flags.iter().map(|f| f.to_string()).collect();
            out.push_str(&format!("- {}: {}\n", r.name, list.join(", ")));
        }
    }
    out
}

/// One combined CSV table at display precision; best values carry a
/// trailing `*`.
pub fn render_csv(reports: &[MetricReport]) -> String {
    let columns: Vec<Column> = transparency_columns()
        .into_iter()
        .chain(blocked_columns())
        .collect();
    let marks: Vec<Vec<bool>> = columns.iter().map(|c| best_rows(reports, c)).collect();
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["Controller".to_string()];
    header.extend(columns.iter().map(|c| c.header.to_string()));
    header.push("Flags".to_string());
    writer.write_record(&header).expect("in-memory write");
    for (i, r) in reports.iter().enumerate() {
        let mut row = vec![r.name.clone()];
        for (c, m) in columns.iter().zip(&marks) {
            let text = (c.text)(r);
            row.push(if m[i] && !text.is_empty() {
                format!("{text}*")
            } else {
                text
            });
        }
        row.push(
            r.flags
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join(";"),
        );
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
}
