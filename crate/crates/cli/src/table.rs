//! Residual table CSV: header `x,r1,r2,r`, one row per sample point, then
//! `E,,,<value>`. Numbers carry nine significant digits.

use std::io::Write;

use fraclane::Report;

use crate::CliError;

const HEADER: [&str; 4] = ["x", "r1", "r2", "r"];

/// `printf("%.9g")`: nine significant digits, trailing zeros dropped,
/// scientific notation below `1e-4` or from `1e9` up.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mant), exp.abs())
    } else {
        let digits = (8 - exp) as usize;
        trim_zeros(&format!("{v:.digits$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Renders the CSV text for a populated report.
pub fn table_csv(report: &Report) -> Result<String, CliError> {
    if report.grid.is_empty() {
        return Err(CliError::Usage(
            "refusing to write an empty residual table".into(),
        ));
    }
    let mut w = csv::WriterBuilder::new()
        .flexible(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Format(e.to_string());
    w.write_record(HEADER).map_err(csv_err)?;
    for p in report.points() {
        w.write_record([p.x, p.r1, p.r2, p.r].map(format_sig9))
            .map_err(csv_err)?;
    }
    w.write_record(["E", "", "", &format_sig9(report.e_max)])
        .map_err(csv_err)?;
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Format(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ASCII output"))
}

pub fn write_table_csv(report: &Report, out: &mut impl Write) -> Result<(), CliError> {
    let text = table_csv(report)?;
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Format(e.to_string()))
}

/// A residual table read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    pub x: Vec<f64>,
    pub r1: Vec<f64>,
    pub r2: Vec<f64>,
    pub r: Vec<f64>,
    pub e_max: f64,
}

/// Strict reader for the table format; any deviation is an error.
pub fn parse_table_csv(text: &str) -> Result<ParsedTable, CliError> {
    let bad = |msg: String| CliError::Format(msg);
    if text.contains('\r') {
        return Err(bad("carriage return in table".into()));
    }
    if !text.ends_with('\n') {
        return Err(bad("table must end with a newline".into()));
    }
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let header = rd.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(HEADER) {
        return Err(bad(format!(
            "unexpected header {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    let num = |s: &str, line: usize| {
        s.parse::<f64>()
            .map_err(|_| bad(format!("line {line}: '{s}' is not a number")))
    };
    let mut t = ParsedTable {
        x: vec![],
        r1: vec![],
        r2: vec![],
        r: vec![],
        e_max: f64::NAN,
    };
    let mut saw_e = false;
    for (i, rec) in rd.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        if saw_e {
            return Err(bad(format!("line {line}: data after the E row")));
        }
        if &rec[0] == "E" {
            if !rec[1].is_empty() || !rec[2].is_empty() {
                return Err(bad(format!(
                    "line {line}: E row must leave r1 and r2 empty"
                )));
            }
            t.e_max = num(&rec[3], line)?;
            saw_e = true;
            continue;
        }
        t.x.push(num(&rec[0], line)?);
        t.r1.push(num(&rec[1], line)?);
        t.r2.push(num(&rec[2], line)?);
        t.r.push(num(&rec[3], line)?);
    }
    if !saw_e {
        return Err(bad("missing E row".into()));
    }
    if t.x.is_empty() {
        return Err(bad("no sample rows".into()));
    }
    Ok(t)
}
