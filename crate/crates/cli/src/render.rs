use serde_json::{json, Map, Number, Value as Json};

use crate::config::Format;
use crate::eval::{Record, Value};

pub struct Meta<'a> {
    pub command: &'a str,
    pub chart: &'a str,
    pub engine: String,
}

/// 17 significant digits; non-finite values become `null`.
pub fn number(x: f64) -> Json {
    if !x.is_finite() {
        return Json::Null;
    }
    let x = if x == 0.0 { 0.0 } else { x };
    let text = format!("{x:.16e}");
    Json::Number(serde_json::from_str::<Number>(&text).expect("formatted float is a JSON number"))
}

fn matrix(m: &[[f64; 2]; 2]) -> Json {
    Json::Array(
        m.iter()
            .map(|row| Json::Array(row.iter().map(|&v| number(v)).collect()))
            .collect(),
    )
}

pub fn value_json(v: &Value) -> Json {
    match v {
        Value::Number(x) => number(*x),
        Value::Pair(p) => Json::Array(p.iter().map(|&v| number(v)).collect()),
        Value::Matrix(m) => matrix(m),
        Value::Audit(a) => json!({
            "route": a.route,
            "published": number(a.published),
            "oracle": number(a.oracle),
            "abs_gap": number(a.abs_gap),
            "rel_gap": number(a.rel_gap),
            "verdict": a.verdict.as_str(),
            "note": a.note,
        }),
        Value::Check(c) => json!({
            "expected": number(c.expected),
            "actual": number(c.actual),
            "tolerance": number(c.tolerance),
            "passed": c.passed,
        }),
    }
}

fn record_json(r: &Record) -> Json {
    json!({
        "point": [number(r.point[0]), number(r.point[1])],
        "quantity": r.quantity,
        "value": value_json(&r.value),
        "provenance": r.provenance.as_str(),
    })
}

pub fn render(format: Format, meta: &Meta, records: &[Record]) -> String {
    match format {
        Format::Json => render_json(meta, records),
        Format::Csv => render_csv(records),
        Format::Text => render_text(meta, records),
    }
}

fn render_json(meta: &Meta, records: &[Record]) -> String {
    let mut m = Map::new();
    m.insert("command".into(), meta.command.into());
    m.insert("chart".into(), meta.chart.into());
    m.insert("engine".into(), meta.engine.clone().into());
    m.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
    let doc = json!({
        "meta": m,
        "records": records.iter().map(record_json).collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

/// One row per record; the value cell holds the same compact JSON as the
/// JSON report, so both encodings carry identical values.
fn render_csv(records: &[Record]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["c1", "c2", "quantity", "value", "provenance"])
        .expect("in-memory write");
    for r in records {
        w.write_record([
            number(r.point[0]).to_string(),
            number(r.point[1]).to_string(),
            r.quantity.clone(),
            value_json(&r.value).to_string(),
            r.provenance.as_str().to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn short(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.abs() >= 1e-4 && x.abs() < 1e7 {
        let s = format!("{x:.12}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{x:.12e}")
    }
}

fn value_lines(v: &Value) -> Vec<String> {
    match v {
        Value::Number(x) => vec![short(*x)],
        Value::Pair(p) => vec![format!("({}, {})", short(p[0]), short(p[1]))],
        Value::Matrix(m) => {
            let cells: Vec<Vec<String>> = m
                .iter()
                .map(|row| row.iter().map(|&x| short(x)).collect())
                .collect();
            let w0 = cells.iter().map(|r| r[0].len()).max().unwrap_or(0);
            let w1 = cells.iter().map(|r| r[1].len()).max().unwrap_or(0);
            cells
                .iter()
                .map(|r| format!("[{:>w0$}  {:>w1$}]", r[0], r[1]))
                .collect()
        }
        Value::Audit(a) => vec![format!(
            "{:<8}  {:<22}  published {}  oracle {}  gap {}{}",
            a.verdict.as_str(),
            a.route,
            short(a.published),
            short(a.oracle),
            short(a.abs_gap),
            a.note.map(|n| format!("  ({n})")).unwrap_or_default()
        )],
        Value::Check(c) => vec![format!(
            "{}  expected {}  actual {}  tol {}",
            if c.passed { "PASS" } else { "FAIL" },
            short(c.expected),
            short(c.actual),
            short(c.tolerance)
        )],
    }
}

fn render_text(meta: &Meta, records: &[Record]) -> String {
    let rows: Vec<[String; 3]> = records
        .iter()
        .map(|r| {
            [
                format!("({}, {})", short(r.point[0]), short(r.point[1])),
                r.quantity.clone(),
                r.provenance.as_str().to_string(),
            ]
        })
        .collect();
    let wp = rows
        .iter()
        .map(|r| r[0].len())
        .max()
        .unwrap_or(0)
        .max("point".len());
    let wq = rows
        .iter()
        .map(|r| r[1].len())
        .max()
        .unwrap_or(0)
        .max("quantity".len());
    let wv = rows
        .iter()
        .map(|r| r[2].len())
        .max()
        .unwrap_or(0)
        .max("source".len());
    let mut out = format!(
        "# {} chart={} engine={} igeo {}\n",
        meta.command,
        meta.chart,
        meta.engine,
        env!("CARGO_PKG_VERSION")
    );
    out.push_str(&format!(
        "{:<wp$}  {:<wq$}  {:<wv$}  value\n",
        "point", "quantity", "source"
    ));
    for (row, r) in rows.iter().zip(records) {
        for (n, line) in value_lines(&r.value).iter().enumerate() {
            if n == 0 {
                out.push_str(&format!(
                    "{:<wp$}  {:<wq$}  {:<wv$}  {line}\n",
                    row[0], row[1], row[2]
                ));
            } else {
                out.push_str(&format!("{:<wp$}  {:<wq$}  {:<wv$}  {line}\n", "", "", ""));
            }
        }
    }
    out
}
