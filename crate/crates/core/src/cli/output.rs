//! CSV and gnuplot script emission.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::solver::Trajectory;

/// Formats `v` like C's `%.{digits}g`.
pub fn format_g(v: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_DIGITS: usize = 12;

/// `t,x1,...,xn` followed by one row per stored grid point.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.dimension();
    let mut out = String::from("t");
    for i in 1..=n {
        write!(out, ",x{i}").unwrap();
    }
    out.push('\n');
    for (t, state) in traj.times().iter().zip(traj.states()) {
        out.push_str(&format_g(*t, CSV_DIGITS));
        for v in state {
            out.push(',');
            out.push_str(&format_g(*v, CSV_DIGITS));
        }
        out.push('\n');
    }
    out
}

/// Two-column CSV with the given header names.
pub fn xy_csv(x_name: &str, y_name: &str, points: &[(f64, f64)]) -> String {
    let mut out = format!("{x_name},{y_name}\n");
    for (x, y) in points {
        writeln!(out, "{},{}", format_g(*x, CSV_DIGITS), format_g(*y, CSV_DIGITS)).unwrap();
    }
    out
}

/// Gnuplot script plotting columns `2..=columns` of `<stem>.csv` against the
/// first, rendering to `<stem>.png`.
pub fn plot_script(stem: &str, title: &str, columns: usize, extra: &[String]) -> String {
    let mut s = String::new();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set key autotitle columnhead").unwrap();
    writeln!(s, "set terminal pngcairo size 900,600").unwrap();
    writeln!(s, "set output '{stem}.png'").unwrap();
    writeln!(s, "set title '{title}'").unwrap();
    writeln!(s, "set grid").unwrap();
    for line in extra {
        writeln!(s, "{line}").unwrap();
    }
    writeln!(s, "plot for [i=2:{columns}] '{stem}.csv' using 1:i with lines lw 2").unwrap();
    s
}

#[derive(Debug, thiserror::Error)]
#[error("cannot write {path}: {source}")]
pub struct WriteError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, WriteError> {
    let path = dir.join(name);
    fs::create_dir_all(dir)
        .and_then(|_| fs::write(&path, contents))
        .map_err(|source| WriteError {
            path: path.clone(),
            source,
        })?;
    Ok(path)
}

/// `0.4` → `0.4`, `1` → `1`; used in file names.
pub fn alpha_tag(alpha: f64) -> String {
    format_g(alpha, 6)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (1.0, "1"),
            (0.1, "0.1"),
            (-2.5, "-2.5"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (1e100, "1e+100"),
            (std::f64::consts::PI, "3.14159265359"),
            (2.0 / 3.0, "0.666666666667"),
            (99999999999.99999, "100000000000"),
        ];
        for (v, s) in cases {
            assert_eq!(format_g(v, 12), s, "{v}");
        }
        assert_eq!(format_g(0.0, 12), "0");
        assert_eq!(format_g(f64::NAN, 12), "nan");
        assert_eq!(format_g(0.123456, 3), "0.123");
    }
}
