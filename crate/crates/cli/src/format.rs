//! Fixed float formatting shared by every CSV writer.

/// `printf("%.12e")`: twelve fractional digits and a signed, two-digit exponent.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let raw = format!("{x:.12e}");
    let (mantissa, exponent) = raw.split_once('e').expect("exponent form always has an 'e'");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    let sign = if exponent < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exponent.abs())
}

/// One CSV line from preformatted cells.
pub fn csv_row<S: AsRef<str>>(cells: &[S]) -> String {
    let mut line = cells.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}
