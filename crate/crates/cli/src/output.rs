//! Deterministic CSV and minimal SVG writers. Numbers are printed with 15
//! significant digits in scientific notation so byte-identical reruns are
//! guaranteed; every file starts with a comment carrying the config hash
//! and tool version.

use std::fmt::Write as _;
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 15 significant digits, scientific, locale-independent.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000000e0".into();
    }
    format!("{x:.14e}")
}

/// RFC-4180 field quoting (only applied when needed; our numeric fields
/// never need it).
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new(config_hash: &str) -> Self {
        let mut buf = String::new();
        let _ = writeln!(buf, "# config_sha256={config_hash} version={VERSION}");
        CsvWriter { buf }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let line: Vec<String> = fields.into_iter().map(|f| csv_field(f.as_ref())).collect();
        let _ = writeln!(self.buf, "{}", line.join(","));
    }

    pub fn write(&self, path: &Path) -> Result<(), String> {
        std::fs::write(path, &self.buf)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))
    }

    #[cfg(test)]
    pub fn as_str(&self) -> &str {
        &self.buf
    }
}

/// Minimal SVG 1.1 line plot: axes plus one polyline per series.
pub fn svg_line_plot(
    xs: &[f64],
    series: &[(&str, &[f64])],
    config_hash: &str,
    title: &str,
) -> String {
    let (w, h) = (720.0, 480.0);
    let (ml, mr, mt, mb) = (60.0, 20.0, 30.0, 40.0);
    let xmin = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let xmax = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ymin = series
        .iter()
        .flat_map(|(_, ys)| ys.iter().copied())
        .fold(f64::INFINITY, f64::min)
        .min(0.0);
    let ymax = series
        .iter()
        .flat_map(|(_, ys)| ys.iter().copied())
        .fold(f64::NEG_INFINITY, f64::max);
    let xspan = (xmax - xmin).max(1e-300);
    let yspan = (ymax - ymin).max(1e-300);
    let px = |x: f64| ml + (x - xmin) / xspan * (w - ml - mr);
    let py = |y: f64| h - mb - (y - ymin) / yspan * (h - mt - mb);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\">"
    );
    let _ = writeln!(s, "<!-- config_sha256={config_hash} version={VERSION} -->");
    let _ = writeln!(s, "<text x=\"{}\" y=\"20\" font-size=\"14\">{title}</text>", ml);
    // axes
    let _ = writeln!(
        s,
        "<line x1=\"{ml}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>",
        h - mb,
        w - mr
    );
    let _ = writeln!(
        s,
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>",
        h - mb
    );
    let _ = writeln!(
        s,
        "<text x=\"{ml}\" y=\"{}\" font-size=\"11\">{}</text>",
        h - mb + 16.0,
        fmt_num(xmin)
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>",
        w - mr,
        h - mb + 16.0,
        fmt_num(xmax)
    );
    let _ = writeln!(
        s,
        "<text x=\"4\" y=\"{}\" font-size=\"11\">{}</text>",
        h - mb,
        fmt_num(ymin)
    );
    let _ = writeln!(s, "<text x=\"4\" y=\"{}\" font-size=\"11\">{}</text>", mt + 10.0, fmt_num(ymax));

    let colors = ["#1f5fa8", "#b03a2e", "#1e8449"];
    for (k, (name, ys)) in series.iter().enumerate() {
        let mut pts = String::new();
        for (x, y) in xs.iter().zip(ys.iter()) {
            let _ = write!(pts, "{:.2},{:.2} ", px(*x), py(*y));
        }
        let color = colors[k % colors.len()];
        let _ = writeln!(s, "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\"/>", pts.trim());
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{color}\">{name}</text>",
            w - mr - 120.0,
            mt + 14.0 * (k as f64 + 1.0)
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

/// Minimal SVG heatmap for a 2D field given row-major (n1 x n2).
pub fn svg_heatmap(
    values: &[f64],
    n1: usize,
    n2: usize,
    config_hash: &str,
    title: &str,
) -> String {
    let cell = (600.0 / n1.max(n2) as f64).max(1.0);
    let (w, h) = (cell * n2 as f64 + 80.0, cell * n1 as f64 + 60.0);
    let vmax = values.iter().copied().fold(0.0_f64, f64::max).max(1e-300);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.0}\" height=\"{h:.0}\">"
    );
    let _ = writeln!(s, "<!-- config_sha256={config_hash} version={VERSION} -->");
    let _ = writeln!(s, "<text x=\"40\" y=\"20\" font-size=\"14\">{title}</text>");
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            let v = (values[i1 * n2 + i2] / vmax).clamp(0.0, 1.0);
            let shade = (255.0 * (1.0 - v)) as u8;
            let _ = writeln!(
                s,
                "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{cell:.1}\" height=\"{cell:.1}\" fill=\"rgb({shade},{shade},255)\"/>",
                40.0 + i2 as f64 * cell,
                30.0 + (n1 - 1 - i1) as f64 * cell
            );
        }
    }
    let _ = writeln!(s, "</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_15_significant_digits() {
        assert_eq!(fmt_num(0.5208333333333333), "5.20833333333333e-1");
        assert_eq!(fmt_num(-1.0), "-1.00000000000000e0");
        assert_eq!(fmt_num(0.0), "0.00000000000000e0");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn csv_writer_is_deterministic() {
        let mut a = CsvWriter::new("deadbeef");
        a.row(["x", "y"]);
        a.row([fmt_num(1.5), fmt_num(2.5)]);
        let mut b = CsvWriter::new("deadbeef");
        b.row(["x", "y"]);
        b.row([fmt_num(1.5), fmt_num(2.5)]);
        assert_eq!(a.as_str(), b.as_str());
        assert!(a.as_str().starts_with("# config_sha256=deadbeef"));
    }
}
