//! CSV and JSON writers for the campaign outputs.
//!
//! CSV files are UTF-8 with a header row, '.' decimal separator and one row
//! per point; for a fixed seed the bytes are identical across runs.

use std::fmt::Write as _;

use crate::eerun::EeRow;
use crate::sumrate::CurvePoint;

fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "nan".into()
    }
}

pub fn sumrate_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("K,scheme,mean_rate_bpshz,stderr,theorem_bpshz\n");
    for p in points {
        let th = p.theorem.map(fmt_f64).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.k,
            p.scheme,
            fmt_f64(p.mean_rate),
            fmt_f64(p.std_err),
            th
        );
    }
    out
}

pub fn sumrate_json(points: &[CurvePoint]) -> String {
    let mut out = String::from("[\n");
    for (i, p) in points.iter().enumerate() {
        let th = p.theorem.map(fmt_f64).unwrap_or_else(|| "null".into());
        let _ = write!(
            out,
            "  {{\"k\": {}, \"scheme\": \"{}\", \"mean_rate_bpshz\": {}, \"stderr\": {}, \"theorem_bpshz\": {}}}",
            p.k,
            p.scheme,
            fmt_f64(p.mean_rate),
            fmt_f64(p.std_err),
            th
        );
        out.push_str(if i + 1 == points.len() { "\n" } else { ",\n" });
    }
    out.push_str("]\n");
    out
}

pub fn ee_csv(rows: &[EeRow]) -> String {
    let mut out = String::from("pmax_db,solver,m_star,n_star,pt_star_w,ee_mbits_per_j\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(r.pmax_db),
            r.solver,
            r.m,
            r.n,
            fmt_f64(r.pt_w),
            fmt_f64(r.ee_mbits_per_j)
        );
    }
    out
}

pub fn ee_json(rows: &[EeRow]) -> String {
    let mut out = String::from("[\n");
    for (i, r) in rows.iter().enumerate() {
        let _ = write!(
            out,
            "  {{\"pmax_db\": {}, \"solver\": \"{}\", \"m_star\": {}, \"n_star\": {}, \"pt_star_w\": {}, \"ee_mbits_per_j\": {}}}",
            fmt_f64(r.pmax_db),
            r.solver,
            r.m,
            r.n,
            fmt_f64(r.pt_w),
            fmt_f64(r.ee_mbits_per_j)
        );
        out.push_str(if i + 1 == rows.len() { "\n" } else { ",\n" });
    }
    out.push_str("]\n");
    out
}
