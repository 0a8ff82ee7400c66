use qlpair_core::search::ScanReport;

/// `printf("%.12g")`: twelve significant digits, trailing zeros dropped.
pub fn fmt_g12(v: f64) -> String {
    const P: i32 = 12;
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= P {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (P - 1 - exp) as usize, v))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Rows as `  [a, b, c]`, one per line.
pub fn fmt_matrix<T: AsRef<str>>(rows: &[Vec<T>]) -> String {
    rows.iter()
        .map(|r| format!("  [{}]\n", r.iter().map(|x| x.as_ref()).collect::<Vec<_>>().join(", ")))
        .collect()
}

/// `cell_a,cell_b,best_err,x1,...,xd`, one row per cell, `a` outermost.
pub fn scan_csv(s: &ScanReport, d: usize) -> String {
    let mut out = String::from("cell_a,cell_b,best_err");
    for k in 1..=d {
        out.push_str(&format!(",x{k}"));
    }
    out.push('\n');
    for (i, a) in s.cell_a.iter().enumerate() {
        for (j, b) in s.cell_b.iter().enumerate() {
            out.push_str(&format!("{},{},{}", fmt_g12(*a), fmt_g12(*b), fmt_g12(s.errors[i][j])));
            for x in &s.best_x[i][j] {
                out.push_str(&format!(",{x}"));
            }
            out.push('\n');
        }
    }
    out
}
